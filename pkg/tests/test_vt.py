import pytest

from delcode import bits, vt
from delcode.errors import CapacityError


def test_syndrome_examples():
    assert vt.vt_syndrome("1001").residue == 0
    assert vt.vt_syndrome("00000").residue == 0
    assert vt.vt_syndrome("0110").residue == 0
    assert vt.vt_syndrome("100").residue == 1


def test_members():
    assert vt.vt_members(1) == {"0"}
    m4 = vt.vt_members(4)
    assert {"0000", "1001", "0110", "1111"} <= m4
    for n in range(1, 17):
        assert len(vt.vt_members(n)) >= (1 << n) / (n + 1)
    with pytest.raises(CapacityError):
        vt.vt_members(21)


def test_decode_examples():
    assert vt.vt_decode("001", 4) == "1001"
    assert vt.vt_decode("0000", 4) == "0000"
    assert vt.vt_decode("111", 4) == "1111"
    assert vt.vt_decode("100", 3) is None        # length 3, syndrome 1
    assert vt.vt_decode("0", 4) is None          # too short


def test_decode_matches_enumeration_oracle():
    """Arithmetic decoder agrees with exhaustive supersequence search."""
    for n in range(2, 10):
        members = vt.vt_members(n)
        for y_len in (n - 1,):
            for y_int in range(1 << y_len):
                y = bits.from_int(y_int, y_len)
                cands = [x for x in bits.enumerate_supersequences(y, n)
                         if x in members]
                got = vt.vt_decode(y, n)
                if len(cands) == 1:
                    assert got == cands[0]
                elif len(cands) == 0:
                    assert got is None
                else:  # pragma: no cover - would violate the VT property
                    pytest.fail(f"two codewords over {y}")


def test_exhaustive_single_deletion():
    from delcode.coloring import verify_deletion_code

    for n in range(2, 13):
        members = vt.vt_members(n)
        assert verify_deletion_code(members, 1)
        for x in members:
            for y in bits.enumerate_subsequences(x, 1):
                assert vt.vt_decode(y, n) == x
