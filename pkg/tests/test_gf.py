import random

import numpy as np
import pytest

from delcode import gf
from delcode.errors import CapacityError


def test_pinned_moduli():
    # lexicographically smallest irreducible polynomial per degree
    assert gf.field_ops(2).poly == 0b111
    assert gf.field_ops(3).poly == 0b1011
    assert gf.field_ops(4).poly == 0b10011
    assert gf.field_ops(8).poly == 0x11B
    assert gf.field_ops(8).alpha == 3  # x is not primitive mod 0x11B


def test_field_axioms_exhaustive_w8():
    F = gf.field_ops(8)
    a = np.arange(1, 256)
    assert np.all(F.mul(a, F.inv(a)) == 1)
    assert np.all(F.mul(a, 1) == a)
    assert np.all((a ^ a) == 0)
    rng = random.Random(0)
    for _ in range(200):
        x, y, z = (rng.randrange(256) for _ in range(3))
        assert F.mul_int(x, F.mul_int(y, z)) == F.mul_int(F.mul_int(x, y), z)
        assert F.mul_int(x, y ^ z) == F.mul_int(x, y) ^ F.mul_int(x, z)


def test_inv_zero_raises():
    F = gf.field_ops(8)
    with pytest.raises(ValueError):
        F.inv_int(0)
    with pytest.raises(ValueError):
        F.inv(np.array([1, 0]))


def test_width_range():
    with pytest.raises(ValueError):
        gf.GF(1)
    with pytest.raises(ValueError):
        gf.GF(25)
    F12 = gf.field_ops(12)
    assert F12.mul_int(F12.alpha, F12.inv_int(F12.alpha)) == 1


def test_parity_basics():
    F = gf.field_ops(8)
    assert gf.rs_parity([0, 0, 0], 1, F).symbols == (0, 0)
    a = gf.rs_parity([1, 2, 3], 2, F)
    b = gf.rs_parity([4, 5, 6], 2, F)
    ab = gf.rs_parity([5, 7, 5], 2, F)
    assert tuple(x ^ y for x, y in zip(a.symbols, b.symbols)) == ab.symbols
    assert a == gf.rs_parity([1, 2, 3], 2, F)  # deterministic
    # leading zero symbols do not disturb the parity
    padded = gf.rs_parity([1, 2, 3, 0, 0], 2, F)
    assert padded.symbols == a.symbols


def test_parity_capacity():
    F = gf.field_ops(4)
    with pytest.raises(CapacityError):
        gf.rs_parity(list(range(14)), 1, F)


def test_correct_exhaustive_single():
    F = gf.field_ops(4)
    rng = random.Random(1)
    for _ in range(60):
        m = [rng.randrange(16) for _ in range(3)]
        p = gf.rs_parity(m, 1, F)
        assert list(gf.rs_correct(m, p, 1, F)) == m
        for pos in range(3):
            for val in range(16):
                if val == m[pos]:
                    continue
                r = list(m)
                r[pos] = val
                assert list(gf.rs_correct(r, p, 1, F)) == m


def test_correct_double_and_beyond():
    F = gf.field_ops(8)
    rng = random.Random(2)
    for _ in range(150):
        m = [rng.randrange(256) for _ in range(9)]
        p = gf.rs_parity(m, 2, F)
        r = list(m)
        for pos in rng.sample(range(9), 2):
            r[pos] ^= rng.randrange(1, 256)
        assert list(gf.rs_correct(r, p, 2, F)) == m
    # three errors against budget 2: contract is only no-crash
    m = list(range(9))
    p = gf.rs_parity(m, 2, F)
    r = list(m)
    r[0] ^= 1
    r[3] ^= 2
    r[7] ^= 3
    out = gf.rs_correct(r, p, 2, F)
    assert out is None or len(out) == 9


def test_correct_argument_errors():
    F = gf.field_ops(8)
    p = gf.rs_parity([1, 2, 3], 1, F)
    with pytest.raises(ValueError):
        gf.rs_correct([1, 2], p, 1, F)
    with pytest.raises(ValueError):
        gf.rs_correct([1, 2, 3], p, 2, F)


def test_batch_matches_scalar():
    F = gf.field_ops(8)
    rng = random.Random(3)
    msgs = np.array([[rng.randrange(256) for _ in range(30)]
                     for _ in range(7)]).T
    pars = gf.rs_parity_batch(msgs, 2, F)
    for col in range(30):
        single = gf.rs_parity(msgs[:, col], 2, F)
        assert list(pars[:, col]) == list(single.symbols)
    rec = msgs.copy()
    rec[1, 4] ^= 9
    rec[5, 4] ^= 111
    rec[2, 17] ^= 44
    fixed, ok = gf.rs_correct_batch(rec, pars, 2, F)
    assert ok.all()
    assert np.array_equal(fixed, msgs)


def test_parity_symbols_in_range_random_widths():
    rng = random.Random(4)
    for w in (8, 12, 16):
        F = gf.field_ops(w)
        m = [rng.randrange(F.q) for _ in range(20)]
        p = gf.rs_parity(m, 3, F)
        assert len(p.symbols) == 6
        assert all(0 <= s < F.q for s in p.symbols)
