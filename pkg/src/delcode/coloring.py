"""Brute-force coloring hash over short strings, plus exhaustive code oracles.

A color table for (length, k) assigns every string of the given length a
color such that any two confusable strings get distinct colors; the color is
a digest sufficient to invert up-to-k deletions (or a bounded mix of indels)
by candidate enumeration. Tables are canonical: greedy assignment in
lexicographic string order, smallest free color first.

Confusability is the LCS-threshold criterion: equal-length strings are
confusable iff their LCS is >= length - threshold, which is equivalent to
their channel output sets intersecting. The all-pairs LCS matrix is computed
with a bit-parallel row update, cross-checked in the tests against the
classic DP in :mod:`delcode.bits`.
"""

from __future__ import annotations

import io
import itertools
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bits import enumerate_supersequences, from_int, to_int
from .errors import CapacityError

__all__ = [
    "ColorTable",
    "Hash1Digest",
    "build_color_table",
    "get_table",
    "clear_table_registry",
    "hash1",
    "hash1_decode",
    "verify_deletion_code",
    "greedy_code_census",
    "max_linear_dimension",
    "linear_deletion_codes",
    "save_table",
    "load_table",
    "table_cache_dir",
    "exhaustive_hash1_roundtrip",
    "cyclic_shift",
    "gf2_rank",
    "shift_intersection_dim",
    "lcs_lengths_vec",
]

MAX_TABLE_LENGTH = 14  # 2^14 strings, ~2.7e8 ordered pairs worst case

AMBIGUOUS = -2  # sentinel in decode maps: two candidates share the color


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a)


def _bit_reverse(vals: np.ndarray, length: int) -> np.ndarray:
    out = np.zeros_like(vals)
    for j in range(length):
        out |= ((vals >> j) & 1) << (length - 1 - j)
    return out


def lcs_lengths_vec(a_int: int, b_ints: np.ndarray, length: int) -> np.ndarray:
    """LCS of one length-`length` string against many, bit-parallel."""
    full = np.uint32((1 << length) - 1)
    b = b_ints.astype(np.uint32)
    rev = _bit_reverse(b, length)
    m1 = rev
    m0 = np.bitwise_and(np.invert(rev), full)
    V = np.full(b.shape, full, dtype=np.uint32)
    for i in range(length):
        abit = (a_int >> (length - 1 - i)) & 1
        M = m1 if abit else m0
        u = V & M
        V = np.bitwise_and((V + u) | (V - u), full)
    return (length - _popcount(V)).astype(np.int64)


_CROSS_CACHE: dict[tuple[int, int], np.ndarray] = {}


def _lcs_cross(la: int, lb: int) -> np.ndarray:
    """(2^la, 2^lb) int8 matrix of LCS lengths between all value pairs."""
    cached = _CROSS_CACHE.get((la, lb))
    if cached is not None:
        return cached
    na, nb = 1 << la, 1 << lb
    out = np.zeros((na, nb), dtype=np.int8)
    if la and lb:
        full = np.uint32(nb - 1)
        bs = np.arange(nb, dtype=np.uint32)
        rev = _bit_reverse(bs, lb)
        m1 = rev
        m0 = np.bitwise_and(np.invert(rev), full)
        chunk = max(1, (1 << 23) // nb)
        for lo in range(0, na, chunk):
            rows = np.arange(lo, min(na, lo + chunk), dtype=np.uint32)
            V = np.full((rows.size, nb), full, dtype=np.uint32)
            for i in range(la):
                abit = ((rows >> (la - 1 - i)) & 1).astype(bool)
                M = np.where(abit[:, None], m1[None, :], m0[None, :])
                u = V & M
                V = np.bitwise_and((V + u) | (V - u), full)
            out[lo : lo + rows.size] = (lb - _popcount(V)).astype(np.int8)
    if out.nbytes <= 1 << 25:
        _CROSS_CACHE[(la, lb)] = out
    return out


def _lcs_ge_packed(length: int, min_lcs: int) -> np.ndarray:
    """Packed bool matrix over all pairs: row a, bit b set iff LCS(a,b) >= min_lcs."""
    n = 1 << length
    if min_lcs <= 0:
        return np.full((n, n // 8 if n >= 8 else 1), 0xFF, dtype=np.uint8)
    full = np.uint32(n - 1)
    bs = np.arange(n, dtype=np.uint32)
    rev = _bit_reverse(bs, length)
    m1 = rev
    m0 = np.bitwise_and(np.invert(rev), full)
    out = np.zeros((n, (n + 7) // 8), dtype=np.uint8)
    max_pop = length - min_lcs
    chunk = max(1, (1 << 23) // n)
    for lo in range(0, n, chunk):
        rows = np.arange(lo, min(n, lo + chunk), dtype=np.uint32)
        V = np.full((rows.size, n), full, dtype=np.uint32)
        for i in range(length):
            abit = ((rows >> (length - 1 - i)) & 1).astype(bool)
            M = np.where(abit[:, None], m1[None, :], m0[None, :])
            u = V & M
            V = np.bitwise_and((V + u) | (V - u), full)
        ge = _popcount(V) <= max_pop
        out[lo : lo + rows.size] = np.packbits(ge, axis=1)
    return out


def _greedy_colors(conf: np.ndarray, n: int) -> tuple[np.ndarray, int]:
    colors = np.zeros(n, dtype=np.int64)
    ncolors = 1
    for a in range(1, n):
        row = np.unpackbits(conf[a], count=a).astype(bool)
        nb = np.nonzero(row)[0]
        if nb.size == 0:
            continue
        used = np.zeros(ncolors + 1, dtype=bool)
        used[colors[nb]] = True
        c = int(np.argmin(used))
        colors[a] = c
        if c == ncolors:
            ncolors += 1
    return colors, ncolors


@dataclass(frozen=True)
class Hash1Digest:
    color: int
    width: int


class ColorTable:
    """Canonical coloring of all strings of one length under confusability."""

    def __init__(self, length: int, k: int, variant: str, threshold: int,
                 colors: np.ndarray, color_count: int):
        self.length = length
        self.k = k
        self.variant = variant
        self.threshold = threshold
        self.colors = colors
        self.color_count = color_count
        self.width = max(1, (color_count - 1).bit_length())
        self._decode_maps: dict = {}

    def __repr__(self):
        return (f"ColorTable(length={self.length}, k={self.k}, variant={self.variant}, "
                f"threshold={self.threshold}, colors={self.color_count})")

    def color_of(self, s: str) -> int:
        if len(s) != self.length:
            raise ValueError(f"string length {len(s)} != table length {self.length}")
        return int(self.colors[to_int(s)])

    # candidate resolution -------------------------------------------------

    def _candidates(self, w_int: int, w_len: int, dmax: int, imax: int,
                    total: int | None) -> set[int]:
        """All x of table length reachable to the window under the budgets."""
        w = from_int(w_int, w_len)
        outs: set[str] = set()
        zs = {w}
        for i in range(imax + 1):
            need = self.length - (w_len - i)
            d_ok = 0 <= need <= dmax and (total is None or need + i <= total)
            if d_ok:
                for z in zs:
                    outs |= enumerate_supersequences(z, self.length)
            if i < imax:
                zs = {z[:t] + z[t + 1 :] for z in zs for t in range(len(z))}
        return {to_int(x) for x in outs}

    def decode_map(self, w_len: int, dmax: int, imax: int, total: int | None = None):
        """(sorted keys, values) resolving (window, color) -> candidate.

        Keys are (window_int << width) | color. A value of AMBIGUOUS marks a
        color shared by two candidates of the same window; a missing key means
        no candidate carries that color.
        """
        mk = (w_len, dmax, imax, total)
        cached = self._decode_maps.get(mk)
        if cached is not None:
            return cached
        if w_len < 0:
            raise ValueError("negative window length")
        lcs = _lcs_cross(w_len, self.length)
        dd = self.length - lcs.astype(np.int64)
        ii = w_len - lcs.astype(np.int64)
        ok = (dd <= dmax) & (ii <= imax)
        if total is not None:
            ok &= (dd + ii) <= total
        w_idx, x_idx = np.nonzero(ok)
        keys = (w_idx.astype(np.int64) << self.width) | self.colors[x_idx]
        order = np.argsort(keys, kind="stable")
        keys = keys[order]
        xs = x_idx[order].astype(np.int64)
        uniq, first = np.unique(keys, return_index=True)
        counts = np.diff(np.append(first, keys.size))
        vals = xs[first]
        vals[counts > 1] = AMBIGUOUS  # one color, two candidates
        cached = (uniq, vals)
        self._decode_maps[mk] = cached
        return cached

    def resolve(self, w_ints: np.ndarray, colors: np.ndarray, w_len: int,
                dmax: int, imax: int, total: int | None = None) -> np.ndarray:
        """Vectorized (window, color) -> candidate ints; -1 no match, -2 ambiguous."""
        keys, vals = self.decode_map(w_len, dmax, imax, total)
        want = (w_ints.astype(np.int64) << self.width) | colors.astype(np.int64)
        idx = np.searchsorted(keys, want)
        idx_c = np.minimum(idx, len(keys) - 1) if len(keys) else np.zeros_like(idx)
        ok = len(keys) > 0
        hit = (keys[idx_c] == want) if ok else np.zeros(want.shape, dtype=bool)
        out = np.full(want.shape, -1, dtype=np.int64)
        out[hit] = vals[idx_c[hit]] if ok else 0
        return out


def build_color_table(length: int, k: int, variant: str = "deletion",
                      threshold: int | None = None) -> ColorTable:
    """Greedy-color all strings of the given length.

    deletion variant: confusable iff LCS >= length - k. indel variant:
    threshold defaults to 4k (two window candidates can sit at LCS exactly
    length - 4k, so 3k-threshold tables can leave them colored alike).
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    if length > MAX_TABLE_LENGTH:
        raise CapacityError(
            f"color table length {length} exceeds cap {MAX_TABLE_LENGTH}")
    if k < 1:
        raise ValueError("k must be >= 1")
    if variant == "deletion":
        threshold = k if threshold is None else threshold
    elif variant == "indel":
        threshold = 4 * k if threshold is None else threshold
    else:
        raise ValueError(f"unknown variant {variant!r}")
    n = 1 << length
    conf = _lcs_ge_packed(length, length - threshold)
    colors, color_count = _greedy_colors(conf, n)
    return ColorTable(length, k, variant, threshold, colors, color_count)


# table registry and disk cache ---------------------------------------------

_REGISTRY: dict[tuple, ColorTable] = {}


def table_cache_dir() -> Path:
    env = os.environ.get("DELCODE_TABLE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "delcode" / "tables"


def _cache_path(length: int, k: int, variant: str, threshold: int) -> Path:
    return table_cache_dir() / f"ct_len{length}_k{k}_{variant}_t{threshold}.bin"


def get_table(length: int, k: int, variant: str = "deletion",
              threshold: int | None = None, use_disk: bool = True) -> ColorTable:
    if threshold is None:
        threshold = k if variant == "deletion" else 4 * k
    key = (length, k, variant, threshold)
    tab = _REGISTRY.get(key)
    if tab is not None:
        return tab
    path = _cache_path(*key)
    if use_disk and path.exists():
        tab = load_table(path)
        if (tab.length, tab.k, tab.variant, tab.threshold) != key:
            raise ValueError(f"cache file {path} does not match requested table")
    else:
        tab = build_color_table(length, k, variant, threshold)
        if use_disk:
            try:
                save_table(tab, path)
            except OSError:
                pass
    _REGISTRY[key] = tab
    return tab


def clear_table_registry():
    _REGISTRY.clear()


def save_table(table: ColorTable, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    nbytes = max(1, (table.width + 7) // 8)
    buf = io.BytesIO()
    buf.write(b"DELCODE-CT v1\n")
    for key, val in (("length", table.length), ("k", table.k),
                     ("variant", table.variant), ("threshold", table.threshold),
                     ("color_count", table.color_count), ("width", table.width)):
        buf.write(f"{key}={val}\n".encode())
    block = np.zeros((table.colors.size, nbytes), dtype=np.uint8)
    vals = table.colors.astype(np.uint64)
    for b in range(nbytes):  # big-endian fixed width
        block[:, nbytes - 1 - b] = (vals >> (8 * b)) & 0xFF
    buf.write(block.tobytes())
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(buf.getvalue())
    tmp.replace(path)


def load_table(path) -> ColorTable:
    raw = Path(path).read_bytes()
    head, _, rest = raw.partition(b"\n")
    if head != b"DELCODE-CT v1":
        raise ValueError(f"{path}: not a color table cache file")
    meta = {}
    for _ in range(6):
        line, _, rest = rest.partition(b"\n")
        key, _, val = line.decode().partition("=")
        meta[key] = val
    length = int(meta["length"])
    k = int(meta["k"])
    variant = meta["variant"]
    threshold = int(meta["threshold"])
    color_count = int(meta["color_count"])
    width = int(meta["width"])
    nbytes = max(1, (width + 7) // 8)
    n = 1 << length
    block = np.frombuffer(rest, dtype=np.uint8, count=n * nbytes).reshape(n, nbytes)
    vals = np.zeros(n, dtype=np.uint64)
    for b in range(nbytes):
        vals = (vals << 8) | block[:, b].astype(np.uint64)
    table = ColorTable(length, k, variant, threshold, vals.astype(np.int64), color_count)
    if table.width != width:
        raise ValueError(f"{path}: width mismatch")
    return table


# hash1 ----------------------------------------------------------------------

def hash1(s: str, table: ColorTable) -> Hash1Digest:
    return Hash1Digest(table.color_of(s), table.width)


def hash1_decode(y: str, digest: Hash1Digest, length: int, table: ColorTable,
                 del_budget: int | None = None, ins_budget: int | None = None,
                 budget_total: int | None = None) -> str | None:
    """Recover the unique length-`length` candidate carrying the digest's color.

    deletion tables take y with length-k <= |y| <= length. indel tables accept
    either split budgets (del_budget deletions of the source, ins_budget alien
    bits in y) or a total op budget (defaults to the table's k).
    """
    if length != table.length:
        return None
    if table.variant == "deletion":
        delta = length - len(y)
        if delta < 0 or delta > table.k:
            return None
        dmax, imax, total = delta, 0, None
    else:
        if del_budget is not None:
            dmax, imax, total = del_budget, ins_budget or 0, None
        else:
            total = table.k if budget_total is None else budget_total
            dmax, imax = total, total
        if not (length - dmax <= len(y) <= length + imax):
            return None
    res = table.resolve(np.array([to_int(y)]), np.array([digest.color]),
                        len(y), dmax, imax, total)
    v = int(res[0])
    if v < 0:
        return None
    return from_int(v, length)


# exhaustive oracles -----------------------------------------------------------

def verify_deletion_code(codebook, k: int) -> bool:
    """True iff every distinct pair of codewords has LCS < N - k."""
    cws = sorted(set(codebook))
    if not cws:
        return True
    n = len(cws[0])
    if any(len(c) != n for c in cws):
        raise ValueError("codewords must have equal length")
    ints = np.array([to_int(c) for c in cws], dtype=np.uint32)
    for i in range(len(cws) - 1):
        if np.any(lcs_lengths_vec(int(ints[i]), ints[i + 1 :], n) >= n - k):
            return False
    return True


def greedy_code_census(n: int, k: int) -> int:
    """Size of the greedy lexicographic codebook; lower-bounds del(n, k)."""
    if n > MAX_TABLE_LENGTH:
        raise CapacityError(f"census length {n} exceeds cap {MAX_TABLE_LENGTH}")
    accepted = [0]
    arr = np.zeros(1 << n, dtype=np.uint32)
    size = 1
    for x in range(1, 1 << n):
        if np.all(lcs_lengths_vec(x, arr[:size], n) < n - k):
            arr[size] = x
            size += 1
    return size


def _rref_matrices(n: int, r: int):
    """Yield (num, r) int arrays of generator rows, one batch per pivot set."""
    for pivots in itertools.combinations(range(n), r):
        free = [(i, c) for i in range(r) for c in range(n)
                if c > pivots[i] and c not in pivots]
        f = len(free)
        num = 1 << f
        rows = np.zeros((num, r), dtype=np.int64)
        for i in range(r):
            rows[:, i] = 1 << (n - 1 - pivots[i])
        assign = np.arange(num, dtype=np.int64)
        for b, (i, c) in enumerate(free):
            rows[:, i] |= ((assign >> b) & 1) << (n - 1 - c)
        yield rows


def _spans(rows: np.ndarray) -> np.ndarray:
    """(num, r) generator rows -> (num, 2^r) codeword ints."""
    num, r = rows.shape
    cw = np.zeros((num, 1), dtype=np.int64)
    for j in range(r):
        cw = np.concatenate([cw, cw ^ rows[:, j : j + 1]], axis=1)
    return cw


def _conf_bool(n: int, k: int) -> np.ndarray:
    conf = _lcs_ge_packed(n, n - k)
    return np.unpackbits(conf, axis=1, count=1 << n).astype(bool)


def linear_deletion_codes(n: int, k: int, dim: int, limit: int | None = None):
    """Generator matrices (tuples of row ints) of k-deletion linear codes."""
    if n > 9:
        raise CapacityError("linear-code enumeration capped at n <= 9")
    conf = _conf_bool(n, k)
    np.fill_diagonal(conf, False)
    found = 0
    for rows in _rref_matrices(n, dim):
        cw = _spans(rows)
        bad = conf[cw[:, :, None], cw[:, None, :]].any(axis=(1, 2))
        for idx in np.nonzero(~bad)[0]:
            yield tuple(int(v) for v in rows[idx])
            found += 1
            if limit is not None and found >= limit:
                return


def max_linear_dimension(n: int, k: int) -> int:
    """Max dimension of a linear subspace passing verify_deletion_code."""
    if n > 9:
        raise CapacityError("linear-code enumeration capped at n <= 9")
    upper = min(n, n // (k + 1) + (k + 1) ** 2)
    for dim in range(upper, 0, -1):
        for _ in linear_deletion_codes(n, k, dim, limit=1):
            return dim
    return 0


def cyclic_shift(v: int, n: int, i: int) -> int:
    """Rotate an n-bit value left by i: (x_{i+1},...,x_n,x_1,...,x_i)."""
    i %= n
    mask = (1 << n) - 1
    return ((v << i) | (v >> (n - i))) & mask if i else v


def gf2_rank(rows) -> int:
    rank = 0
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
            basis.sort(reverse=True)
            rank += 1
    return rank


def shift_intersection_dim(rows, n: int, i: int, j: int) -> int:
    """dim(C^i ∩ C^j) for the code spanned by the given generator rows."""
    a = [cyclic_shift(r, n, i) for r in rows]
    b = [cyclic_shift(r, n, j) for r in rows]
    ra, rb = gf2_rank(a), gf2_rank(b)
    return ra + rb - gf2_rank(list(a) + list(b))


def exhaustive_hash1_roundtrip(length: int, k: int, table: ColorTable | None = None) -> int:
    """Count (s, deletion-pattern) failures of hash1_decode over all strings.

    Vectorized over all 2^length strings for every deletion pattern with
    delta <= k; exercises the same resolve() path as the scalar decoder.
    """
    table = table or get_table(length, k, "deletion")
    n = 1 << length
    s_ints = np.arange(n, dtype=np.int64)
    cols = table.colors
    shifts = length - 1 - np.arange(length)
    bits = (s_ints[:, None] >> shifts[None, :]) & 1
    failures = 0
    for delta in range(k + 1):
        for drop in itertools.combinations(range(length), delta):
            keep = [i for i in range(length) if i not in drop]
            yb = bits[:, keep]
            w = len(keep)
            pw = (1 << (w - 1 - np.arange(w))) if w else np.zeros(0, dtype=np.int64)
            y_ints = yb @ pw if w else np.zeros(n, dtype=np.int64)
            res = table.resolve(y_ints, cols, w, delta, 0)
            failures += int(np.count_nonzero(res != s_ints))
    return failures
