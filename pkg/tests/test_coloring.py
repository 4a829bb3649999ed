import itertools

import numpy as np
import pytest

from delcode import bits, coloring
from delcode.errors import CapacityError


def test_lcs_vec_matches_dp():
    for L in (1, 3, 5, 7):
        all_b = np.arange(1 << L)
        for a in range(0, 1 << L, 3):
            got = coloring.lcs_lengths_vec(a, all_b, L)
            for b in range(0, 1 << L, 5):
                want = bits.lcs_length(bits.from_int(a, L), bits.from_int(b, L))
                assert got[b] == want


def test_table_examples():
    t31 = coloring.get_table(3, 1)
    assert t31.color_of("000") == 0  # greedy gives the first string color 0
    assert t31.color_of("000") != t31.color_of("001")  # confusable pair
    t41 = coloring.get_table(4, 1)
    assert t41.color_count <= 2 * 4 ** 2 + 1
    t11 = coloring.get_table(1, 1)
    assert {t11.color_of("0"), t11.color_of("1")} == {0, 1}


def test_color_bound_deletion():
    for L in range(1, 11):
        for k in (1, 2):
            if k > L:
                continue
            t = coloring.get_table(L, k)
            assert t.color_count <= 2 * L ** (2 * k) + 1


def test_build_deterministic():
    a = coloring.build_color_table(7, 2)
    b = coloring.build_color_table(7, 2)
    assert a.color_count == b.color_count
    assert np.array_equal(a.colors, b.colors)


def test_capacity_cap():
    with pytest.raises(CapacityError):
        coloring.build_color_table(coloring.MAX_TABLE_LENGTH + 1, 1)


def test_save_load_check(tmp_path):
    t = coloring.build_color_table(6, 1, "indel")
    path = tmp_path / "t.bin"
    coloring.save_table(t, path)
    back = coloring.load_table(path)
    assert back.length == 6 and back.k == 1 and back.variant == "indel"
    assert back.threshold == t.threshold and back.color_count == t.color_count
    assert np.array_equal(back.colors, t.colors)
    # rebuilt table is byte-identical on disk
    path2 = tmp_path / "t2.bin"
    coloring.save_table(coloring.build_color_table(6, 1, "indel"), path2)
    assert path.read_bytes() == path2.read_bytes()


def test_hash1_decode_examples():
    t = coloring.get_table(4, 1)
    d = coloring.hash1("0110", t)
    assert coloring.hash1_decode("010", d, 4, t) == "0110"
    assert coloring.hash1_decode("0110", d, 4, t) == "0110"
    assert coloring.hash1_decode("01", d, 4, t) is None  # below length - k
    assert coloring.hash1(bits.from_int(5, 4), t) == coloring.hash1("0101", t)


def test_hash1_confusable_distinct():
    t = coloring.get_table(5, 1)
    for a in range(32):
        sa = bits.from_int(a, 5)
        for b in range(a + 1, 32):
            sb = bits.from_int(b, 5)
            if bits.lcs_length(sa, sb) >= 4:
                assert t.colors[a] != t.colors[b]


def test_exhaustive_roundtrip_small():
    for L in range(1, 9):
        for k in (1, 2):
            if k > L:
                continue
            assert coloring.exhaustive_hash1_roundtrip(L, k) == 0


def test_decode_map_matches_bfs_oracle():
    for (L, k, var) in [(5, 1, "deletion"), (6, 2, "deletion"), (6, 1, "indel")]:
        tab = coloring.get_table(L, k, var)
        cfgs = [(L - d, d, 0, None) for d in range(k + 1)]
        if var == "indel":
            cfgs += [(L - 2 * k, 3 * k, k, None), (L, k, k, k)]
        for wl, dmax, imax, total in cfgs:
            keys, vals = tab.decode_map(wl, dmax, imax, total)
            entries = {}
            for w_int in range(1 << wl):
                base = w_int << tab.width
                for x in tab._candidates(w_int, wl, dmax, imax, total):
                    key = base | int(tab.colors[x])
                    prev = entries.get(key)
                    entries[key] = x if prev in (None, x) else coloring.AMBIGUOUS
            assert np.array_equal(keys, np.array(sorted(entries), dtype=np.int64))
            assert np.array_equal(
                vals, np.array([entries[int(q)] for q in sorted(entries)]))


def test_indel_roundtrip_exhaustive():
    for L in (4, 6, 8):
        tab = coloring.get_table(L, 1, "indel")
        for s_int in range(1 << L):
            s = bits.from_int(s_int, L)
            dig = coloring.hash1(s, tab)
            for y in bits.channel_indel(s, 1, "adversarial-enumerate"):
                assert coloring.hash1_decode(y, dig, L, tab) == s


def test_verify_deletion_code():
    assert coloring.verify_deletion_code({"0000", "1111"}, 1)
    assert not coloring.verify_deletion_code({"00", "01"}, 1)
    assert coloring.verify_deletion_code({"0110"}, 2)
    with pytest.raises(ValueError):
        coloring.verify_deletion_code({"01", "011"}, 1)


def test_census():
    assert coloring.greedy_code_census(4, 4) == 1
    for n in range(2, 9):
        c = coloring.greedy_code_census(n, 1)
        assert c >= (1 << n) / (2 * n ** 2 + 1)
    # the census codebook itself is produced by accept-if-not-confusable,
    # so rebuild it and verify it is a valid code
    accepted = []
    for v in range(1 << 6):
        s = bits.from_int(v, 6)
        if all(bits.lcs_length(s, a) < 5 for a in accepted):
            accepted.append(s)
    assert len(accepted) == coloring.greedy_code_census(6, 1)
    assert coloring.verify_deletion_code(set(accepted), 1)


def test_max_linear_dimension_small():
    assert coloring.max_linear_dimension(2, 1) == 1
    dim = coloring.max_linear_dimension(4, 1)
    assert 2 <= dim <= 4 // 2 + 4


def test_shift_helpers():
    assert coloring.cyclic_shift(0b0011, 4, 1) == 0b0110
    assert coloring.cyclic_shift(0b1010, 4, 2) == 0b1010
    assert coloring.gf2_rank([0b110, 0b011, 0b101]) == 2
    assert coloring.shift_intersection_dim([0b1100, 0b0011], 4, 0, 0) == 2
