import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from delcode import bits

bitstrings = st.text(alphabet="01", max_size=24)
nonempty_bitstrings = st.text(alphabet="01", min_size=1, max_size=12)


def test_apply_deletions_examples():
    assert bits.apply_deletions("101", [0]) == "01"
    assert bits.apply_deletions("101", []) == "101"
    assert bits.apply_deletions("0110", [1, 2]) == "00"


def test_apply_deletions_errors():
    with pytest.raises(ValueError):
        bits.apply_deletions("101", [3])
    with pytest.raises(ValueError):
        bits.apply_deletions("101", [1, 1])


def test_apply_edit_script():
    assert bits.apply_edit_script("10", [("del", 0)]) == "0"
    assert bits.apply_edit_script("10", [("ins", 1, "1")]) == "110"
    assert bits.apply_edit_script("10", [("del", 1), ("ins", 0, "0")]) == "01"
    with pytest.raises(ValueError):
        bits.apply_edit_script("10", [("ins", 5, "0")])


def test_enumerate_subsequences_examples():
    assert bits.enumerate_subsequences("101", 1) == {"01", "11", "10"}
    assert bits.enumerate_subsequences("000", 1) == {"00"}
    assert bits.enumerate_subsequences("0110", 0) == {"0110"}
    with pytest.raises(ValueError):
        bits.enumerate_subsequences("01", 3)


def test_enumerate_supersequences_small():
    sup = bits.enumerate_supersequences("01", 3)
    assert all(len(s) == 3 and bits.is_subsequence("01", s) for s in sup)
    # every length-3 string containing 01 appears
    want = {s for s in map("".join, itertools.product("01", repeat=3))
            if bits.is_subsequence("01", s)}
    assert sup == want


def test_is_subsequence_examples():
    assert bits.is_subsequence("01", "0110")
    assert not bits.is_subsequence("11", "000")
    assert bits.is_subsequence("", "000")


def test_lcs_examples():
    assert bits.lcs_length("0110", "110") == 3
    assert bits.lcs_length("10101", "10101") == 5
    assert bits.lcs_length("0000", "1111") == 0


@given(bitstrings, bitstrings)
@settings(max_examples=60)
def test_lcs_symmetric(a, b):
    assert bits.lcs_length(a, b) == bits.lcs_length(b, a)


def test_mu_examples():
    assert bits.mu("1010", "11") == "0101"
    assert bits.mu("10110", "00") == "10110"
    assert bits.mu(bits.mu("1101001", "101"), "101") == "1101001"
    with pytest.raises(ValueError):
        bits.mu("01", "")


@given(bitstrings, nonempty_bitstrings)
@settings(max_examples=60)
def test_mu_involution(s, t):
    assert bits.mu(bits.mu(s, t), t) == s


def test_channel_delete_adversarial_stream():
    got = list(bits.channel_delete("101", 1, "adversarial-enumerate"))
    assert got[0] == "101"
    assert set(got) == {"101", "01", "11", "10"}
    assert len(got) == len(set(got))


def test_channel_delete_seeded_deterministic():
    a = bits.channel_delete("0011", 1, "seeded-random", seed=7)
    b = bits.channel_delete("0011", 1, "seeded-random", seed=7)
    assert a == b and a in {"011", "001"}
    assert bits.channel_delete("0011", 0, "seeded-random", seed=1) == "0011"


def test_channel_delete_stream_matches_set_enumeration():
    rng = random.Random(1)
    for _ in range(40):
        n = rng.randint(1, 9)
        s = bits.random_bitstring(n, rng)
        k = rng.randint(0, min(3, n))
        got = list(bits.channel_delete(s, k, "adversarial-enumerate"))
        want = set()
        for d in range(k + 1):
            want |= bits.enumerate_subsequences(s, d)
        assert set(got) == want
        assert len(got) == len(want)  # no duplicates emitted


def test_channel_indel_examples():
    got = set(bits.channel_indel("10", 1, "adversarial-enumerate"))
    assert {"10", "0", "1", "110", "100", "010", "101"} <= got
    assert all(1 <= len(y) <= 3 for y in got)
    assert bits.channel_indel("0110", 0, "seeded-random", seed=3) == "0110"
    y = bits.channel_indel("0110", 2, "seeded-random", seed=9)
    assert 2 <= len(y) <= 6


def test_subsequence_invariants():
    rng = random.Random(5)
    for _ in range(60):
        s = bits.random_bitstring(rng.randint(1, 10), rng)
        dp = sorted(rng.sample(range(len(s)), rng.randint(0, len(s))))
        y = bits.apply_deletions(s, dp)
        assert len(y) == len(s) - len(dp)
        assert bits.is_subsequence(y, s)
        assert bits.lcs_length(s, y) == len(y)


@pytest.mark.parametrize("n,k", [(6, 1), (6, 2), (8, 1), (8, 2)])
def test_confusability_criterion_exhaustive(n, k):
    """sigma_k sets intersect iff LCS >= n - k, checked by set intersection."""
    strings = ["".join(p) for p in itertools.product("01", repeat=n)]
    sigma = {s: bits.enumerate_subsequences(s, k) for s in strings}
    rng = random.Random(0)
    pairs = [(rng.choice(strings), rng.choice(strings)) for _ in range(300)]
    pairs += [(strings[i], strings[i + 1]) for i in range(0, len(strings) - 1, 7)]
    for a, b in pairs:
        meets = bool(sigma[a] & sigma[b])
        assert meets == (bits.lcs_length(a, b) >= n - k)


def test_indel_reach_matches_lcs_threshold():
    # equal-length strings reach a common word under <= k ops each
    # iff LCS >= n - k; justifies LCS-based checks on long codewords
    n, k = 6, 1
    strings = ["".join(p) for p in itertools.product("01", repeat=n)]
    reach = {s: set(bits.channel_indel(s, k, "adversarial-enumerate"))
             for s in strings}
    for a in strings[::5]:
        for b in strings[::3]:
            meets = bool(reach[a] & reach[b])
            assert meets == (bits.lcs_length(a, b) >= n - k)
