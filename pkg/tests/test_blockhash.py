import random

import pytest

from delcode import bits, blockhash
from delcode.errors import FormatError


def test_block_spans():
    assert list(blockhash.block_spans(12, 4)) == [(0, 4), (4, 4), (8, 4)]
    assert [ln for _, ln in blockhash.block_spans(10, 4)] == [4, 4, 2]
    assert list(blockhash.block_spans(3, 8)) == [(0, 3)]


def test_hash2_deterministic_and_geometry():
    s = "011010011010"
    d1 = blockhash.hash2(s, 4, 1)
    d2 = blockhash.hash2(s, 4, 1)
    assert d1.to_bits() == d2.to_bits()
    assert len(d1.to_bits()) == blockhash.digest_length_bits(12, 4, 1, "deletion")
    with pytest.raises(ValueError):
        blockhash.hash2(s, 1, 1)  # B must exceed k


def test_digest_serialization_roundtrip():
    for (s, B, k, var) in [("011010011010", 4, 1, "deletion"),
                           ("0110100110", 4, 2, "deletion"),  # verbatim tail
                           ("0110100110", 4, 1, "indel"),
                           ("011", 4, 1, "deletion")]:         # single short block
        dig = blockhash.hash2(s, B, k, var)
        back = blockhash.Hash2Digest.from_bits(dig.to_bits(), len(s))
        assert back == dig
        assert back.tail_verbatim == dig.tail_verbatim


def test_digest_from_bits_rejects_garbage():
    dig = blockhash.hash2("011010011010", 4, 1)
    good = dig.to_bits()
    with pytest.raises(FormatError):
        blockhash.Hash2Digest.from_bits(good[:-1], 12)
    with pytest.raises(FormatError):
        blockhash.Hash2Digest.from_bits("1" * len(good), 12)
    with pytest.raises(FormatError):
        blockhash.Hash2Digest.from_bits(good, 13)


def test_decode_single_deletion_example():
    s = "011010011010"
    dig = blockhash.hash2(s, 4, 1)
    y = s[:5] + s[6:]  # delete bit 5, inside block 1 spanning [4, 7]
    assert blockhash.hash2_decode(y, dig, 12) == s
    assert blockhash.hash2_decode(s, dig, 12) == s
    assert blockhash.hash2_decode(s[:9], dig, 12) is None  # beyond budget


def test_verbatim_tail_roundtrip():
    rng = random.Random(0)
    for _ in range(50):
        s = bits.random_bitstring(10, rng)  # B=4, k=2: tail of 2 <= k verbatim
        dig = blockhash.hash2(s, 4, 2)
        assert dig.tail_verbatim and dig.tail_bits == s[8:]
        for dp in ([], [3], [1, 9], [8, 9]):
            y = bits.apply_deletions(s, dp)
            assert blockhash.hash2_decode(y, dig, 10) == s


def test_exhaustive_deletion_roundtrips_small():
    assert blockhash.exhaustive_hash2_roundtrip(10, 4, 1) == 0
    assert blockhash.exhaustive_hash2_roundtrip(10, 5, 2) == 0
    assert blockhash.exhaustive_hash2_roundtrip(12, 4, 2) == 0


def test_exhaustive_matches_scalar_api():
    rng = random.Random(1)
    for _ in range(80):
        s = bits.random_bitstring(12, rng)
        dig = blockhash.hash2(s, 5, 2)
        dp = sorted(rng.sample(range(12), rng.randint(0, 2)))
        y = bits.apply_deletions(s, dp)
        assert blockhash.hash2_decode(y, dig, 12) == s


def test_indel_window_arithmetic_and_roundtrip():
    rng = random.Random(2)
    for L in (8, 10, 12):
        for s_int in range(0, 1 << L, 3):
            s = bits.from_int(s_int, L)
            dig = blockhash.hash2(s, 4, 1, "indel")
            for y in bits.channel_indel(s, 1, "adversarial-enumerate"):
                assert blockhash.hash2_decode_indel(y, dig, L, 1) == s
    # length bounds rejected
    s = bits.random_bitstring(12, rng)
    dig = blockhash.hash2(s, 4, 1, "indel")
    assert blockhash.hash2_decode_indel(s[:8], dig, 12, 1) is None


def test_digest_length_formula_matches_all_shapes():
    for L in range(3, 17):
        for B in (3, 4, 5, 12):
            for k in (1, 2):
                if B <= k:
                    continue
                for var in ("deletion", "indel"):
                    s = "01" * ((L + 1) // 2)
                    dig = blockhash.hash2(s[:L], B, k, var)
                    assert len(dig.to_bits()) == blockhash.digest_length_bits(
                        L, B, k, var)


def test_default_block_length():
    assert blockhash.default_block_length(4096, 2) == 12
    assert blockhash.default_block_length(1 << 20, 2) == 12  # capped
    assert blockhash.default_block_length(432, 1) == 9
    assert blockhash.default_block_length(3, 2) == 3  # forced above k
