"""GF(2^w) arithmetic and systematic Reed-Solomon parity with unique decoding.

Field representation is pinned for reproducibility: the modulus is the
lexicographically smallest irreducible polynomial of degree w (as an integer
bit string), and alpha is the smallest primitive element of that field.
Log/antilog tables back the vectorized operations for w <= 20.

The systematic code is the generator-polynomial view: message symbol i is the
coefficient of x^(2e+i), parity symbols are the coefficients of x^0..x^(2e-1)
with parity(x) = m(x) * x^(2e) mod g(x), g(x) = prod_{j=1..2e} (x - alpha^j).
Leading zero message symbols therefore do not change the parity, matching the
all-absent-segments-are-zero convention upstream. Unique decoding is
syndromes + Berlekamp-Massey + Chien + Forney; parity symbols are trusted, so
a corrector that locates an error inside the parity region fails instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError

__all__ = [
    "GF",
    "field_ops",
    "RsParity",
    "rs_parity",
    "rs_correct",
    "rs_parity_batch",
    "rs_syndromes_batch",
    "rs_correct_batch",
]

_TABLE_MAX_W = 20


# polynomial-over-GF(2) helpers on plain ints --------------------------------

def _pmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _pmod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def _pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pmod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(poly: int, w: int) -> bool:
    # Rabin's test: x^(2^w) == x mod poly, and gcd(x^(2^(w/p)) - x, poly) == 1
    t = 2
    squares = [2]
    for _ in range(w):
        t = _pmod(_pmul(t, t), poly)
        squares.append(t)
    if squares[w] != 2:
        return False
    for p in _prime_factors(w):
        if _pgcd(squares[w // p] ^ 2, poly) != 1:
            return False
    return True


def _smallest_irreducible(w: int) -> int:
    for cand in range((1 << w) + 1, 1 << (w + 1), 2):
        if _is_irreducible(cand, w):
            return cand
    raise RuntimeError("unreachable: no irreducible polynomial found")


class GF:
    """Finite field GF(2^w) with a fixed modulus and primitive element."""

    def __init__(self, w: int):
        if not 2 <= w <= 24:
            raise ValueError("symbol width must be in [2, 24]")
        self.w = w
        self.q = 1 << w
        self.poly = _smallest_irreducible(w)
        self.alpha = self._smallest_primitive()
        self.exp: np.ndarray | None = None
        self.log: np.ndarray | None = None
        if w <= _TABLE_MAX_W:
            self._build_tables()

    # scalar arithmetic ------------------------------------------------------

    def mul_int(self, a: int, b: int) -> int:
        return _pmod(_pmul(a, b), self.poly)

    def pow_int(self, a: int, e: int) -> int:
        r = 1
        e %= self.q - 1
        if a == 0:
            return 0 if e else 1
        while e:
            if e & 1:
                r = self.mul_int(r, a)
            a = self.mul_int(a, a)
            e >>= 1
        return r

    def inv_int(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative inverse")
        return self.pow_int(a, self.q - 2)

    def _order_is_full(self, g: int, factors: list[int]) -> bool:
        return all(self.pow_int(g, (self.q - 1) // p) != 1 for p in factors)

    def _smallest_primitive(self) -> int:
        factors = _prime_factors(self.q - 1)
        for g in range(2, self.q):
            if self._order_is_full(g, factors):
                return g
        raise RuntimeError("unreachable: field has a primitive element")

    def _build_tables(self):
        q = self.q
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            x = self.mul_int(x, self.alpha)
        exp[q - 1 :] = exp[: q - 1]
        log = np.zeros(q, dtype=np.int64)
        log[exp[: q - 1]] = np.arange(q - 1)
        self.exp = exp
        self.log = log

    # vectorized arithmetic (requires tables) --------------------------------

    def _need_tables(self):
        if self.exp is None:
            raise CapacityError(
                f"vectorized GF ops require w <= {_TABLE_MAX_W} (got w={self.w})")

    def mul(self, a, b):
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp[self.log[a] + self.log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        self._need_tables()
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ValueError("0 has no multiplicative inverse")
        return self.exp[(self.q - 1) - self.log[a]]

    def alpha_pow(self, e):
        """alpha**e for integer exponent array (any sign)."""
        self._need_tables()
        e = np.asarray(e, dtype=np.int64) % (self.q - 1)
        return self.exp[e]

    def poly_eval(self, coeffs_asc, xs):
        """Evaluate a polynomial (ascending coeffs) at each x, vectorized."""
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros(xs.shape, dtype=np.int64)
        for c in reversed(coeffs_asc):
            acc = self.mul(acc, xs) ^ int(c)
        return acc


@lru_cache(maxsize=None)
def field_ops(w: int) -> GF:
    """The fixed GF(2^w) arithmetic suite for this package."""
    return GF(w)


@lru_cache(maxsize=None)
def _generator_tail(w: int, e: int) -> tuple[int, ...]:
    """g(x) = prod_{j=1..2e}(x - alpha^j); returns ascending coeffs below x^(2e)."""
    gf = field_ops(w)
    g = [1]  # ascending
    for j in range(1, 2 * e + 1):
        root = gf.pow_int(gf.alpha, j)
        nxt = [0] * (len(g) + 1)
        for i, c in enumerate(g):
            nxt[i + 1] ^= c
            nxt[i] ^= gf.mul_int(c, root)
        g = nxt
    assert g[-1] == 1 and len(g) == 2 * e + 1
    return tuple(g[:-1])


@dataclass(frozen=True)
class RsParity:
    """2e parity symbols tying a message into a distance-(2e+1) systematic code."""

    symbols: tuple[int, ...]
    message_len: int
    e: int
    w: int

    def __post_init__(self):
        if len(self.symbols) != 2 * self.e:
            raise ValueError("parity must hold exactly 2e symbols")


def rs_parity_batch(msgs: np.ndarray, e: int, gf: GF) -> np.ndarray:
    """Parity for each column of a (message_len, ncodes) symbol matrix.

    Returns a (2e, ncodes) array, row j = coefficient of x^j.
    """
    msgs = np.asarray(msgs, dtype=np.int64)
    m_len, ncodes = msgs.shape
    if m_len + 2 * e > gf.q - 1:
        raise CapacityError(
            f"message length {m_len} + 2e {2 * e} exceeds field capacity {gf.q - 1}")
    gtail = np.array(_generator_tail(gf.w, e), dtype=np.int64)
    d = 2 * e
    state = np.zeros((d, ncodes), dtype=np.int64)
    lg = gf.log[gtail]

    def step(incoming):
        top = state[d - 1].copy()
        state[1:] = state[:-1].copy()
        state[0] = incoming
        nz = top != 0
        if np.any(nz):
            state[:, nz] ^= gf.exp[lg[:, None] + gf.log[top[nz]][None, :]]

    for srcrow in range(m_len - 1, -1, -1):
        step(msgs[srcrow])
    for _ in range(d):
        step(0)
    return state


def rs_parity(message, e: int, gf: GF | None = None, w: int | None = None) -> RsParity:
    """Systematic parity over the message; deterministic in all inputs."""
    msgs = np.asarray(list(message), dtype=np.int64).reshape(-1, 1)
    if gf is None:
        if w is None:
            raise ValueError("pass a GF instance or a width")
        gf = field_ops(w)
    if msgs.size and (msgs.min() < 0 or msgs.max() >= gf.q):
        raise ValueError("message symbols out of field range")
    par = rs_parity_batch(msgs, e, gf)
    return RsParity(tuple(int(v) for v in par[:, 0]), msgs.shape[0], e, gf.w)


def rs_syndromes_batch(msgs: np.ndarray, parities: np.ndarray, e: int, gf: GF) -> np.ndarray:
    """Syndromes S_1..S_2e per column; all-zero column means codeword-consistent."""
    msgs = np.asarray(msgs, dtype=np.int64)
    parities = np.asarray(parities, dtype=np.int64)
    vec = np.vstack([parities, msgs])  # position == polynomial power
    npos = vec.shape[0]
    pos = np.arange(npos, dtype=np.int64)
    t = np.arange(1, 2 * e + 1, dtype=np.int64)
    a_mat = gf.alpha_pow(t[:, None] * pos[None, :])  # (2e, npos)
    la = gf.log[a_mat]
    lv = gf.log[vec]
    terms = gf.exp[la[:, :, None] + lv[None, :, :]]
    terms[:, vec == 0] = 0
    return np.bitwise_xor.reduce(terms, axis=1)


def _berlekamp_massey(S: list[int], gf: GF) -> tuple[list[int], int]:
    C = [1]
    B = [1]
    L = 0
    m = 1
    b = 1
    for n in range(len(S)):
        d = S[n]
        for i in range(1, L + 1):
            if i < len(C) and C[i] and S[n - i]:
                d ^= gf.mul_int(C[i], S[n - i])
        if d == 0:
            m += 1
            continue
        coef = gf.mul_int(d, gf.inv_int(b))
        T = list(C)
        shifted = [0] * m + [gf.mul_int(coef, c) for c in B]
        if len(shifted) > len(C):
            C = C + [0] * (len(shifted) - len(C))
        for i, v in enumerate(shifted):
            C[i] ^= v
        if 2 * L <= n:
            L = n + 1 - L
            B = T
            b = d
            m = 1
        else:
            m += 1
    while C and C[-1] == 0:
        C.pop()
    return C, L


def _correct_one(msg: np.ndarray, par: np.ndarray, synd: list[int], e: int,
                 gf: GF) -> np.ndarray | None:
    locator, L = _berlekamp_massey(synd, gf)
    if L > e or len(locator) - 1 != L:
        return None
    npos = len(par) + len(msg)
    positions = np.arange(npos, dtype=np.int64)
    xs = gf.alpha_pow(-positions)
    vals = gf.poly_eval(locator, xs)
    roots = np.nonzero(vals == 0)[0]
    if roots.size != L:
        return None
    if np.any(roots < len(par)):
        return None  # parity symbols are trusted; an error there is a lie
    # Forney: omega = S(x) * locator(x) mod x^(2e)
    omega = [0] * (2 * e)
    for i, si in enumerate(synd):
        if si == 0:
            continue
        for j, lj in enumerate(locator):
            if i + j < 2 * e and lj:
                omega[i + j] ^= gf.mul_int(si, lj)
    deriv = [locator[i] for i in range(1, len(locator), 2)]  # formal derivative / odd terms
    out = msg.copy()
    for pos in roots:
        xinv = int(gf.alpha_pow(-int(pos)))
        num = int(gf.poly_eval(omega, np.array([xinv]))[0])
        den_coeffs = deriv
        den = 0
        xp = 1
        x2 = gf.mul_int(xinv, xinv)
        for c in den_coeffs:
            if c:
                den ^= gf.mul_int(c, xp)
            xp = gf.mul_int(xp, x2)
        if den == 0:
            return None
        mag = gf.mul_int(num, gf.inv_int(den))
        out[int(pos) - len(par)] ^= mag
    # final consistency check
    s2 = rs_syndromes_batch(out.reshape(-1, 1), par.reshape(-1, 1), e, gf)
    if np.any(s2):
        return None
    return out


def rs_correct(received, parity: RsParity, e: int, gf: GF | None = None):
    """Correct <= e errors among the message symbols; None on failure.

    The parity symbols are assumed error-free (they travel inside protected
    framing upstream); beyond budget the output is untrusted or None.
    """
    if e != parity.e:
        raise ValueError("error budget does not match the parity")
    gf = gf or field_ops(parity.w)
    msg = np.asarray(list(received), dtype=np.int64)
    if msg.shape[0] != parity.message_len:
        raise ValueError("received length does not match parity.message_len")
    par = np.asarray(parity.symbols, dtype=np.int64)
    synd = rs_syndromes_batch(msg.reshape(-1, 1), par.reshape(-1, 1), e, gf)[:, 0]
    if not np.any(synd):
        return msg.copy()
    return _correct_one(msg, par, [int(v) for v in synd], e, gf)


def rs_correct_batch(msgs: np.ndarray, parities: np.ndarray, e: int, gf: GF):
    """Correct every column; returns (corrected, ok_mask).

    Columns whose decode fails keep their received symbols and get ok=False.
    """
    msgs = np.asarray(msgs, dtype=np.int64)
    parities = np.asarray(parities, dtype=np.int64)
    synd = rs_syndromes_batch(msgs, parities, e, gf)
    out = msgs.copy()
    ncodes = msgs.shape[1]
    ok = np.ones(ncodes, dtype=bool)
    dirty = np.nonzero(np.any(synd != 0, axis=0))[0]
    for col in dirty:
        fixed = _correct_one(msgs[:, col], parities[:, col],
                             [int(v) for v in synd[:, col]], e, gf)
        if fixed is None:
            ok[col] = False
        else:
            out[:, col] = fixed
    return out, ok
