"""Block-wise coloring hash: split into fixed blocks, color each, concatenate.

The digest of a string is the concatenation of per-block colors (the last
block may be shorter and uses its own table). Decoding against a received
subsequence extracts a positional window per block: with delta total
deletions, block [j, j'] is recovered from y[j .. j'-delta]; with a mixed
insertion/deletion budget k, from y[j+k .. j'-k] clamped to y.

Bit layout (MSB first): [B:8][k:8][variant:4][tail-verbatim:1] then the
fixed-width block colors, then the verbatim tail bits if flagged. A deletion
digest stores a tail of length <= k verbatim (such a block cannot carry a
deletion hash); indel digests always hash the tail, whose tiny tables
degenerate to all-distinct colors.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .bits import from_array, from_int, to_array
from .coloring import MAX_TABLE_LENGTH, ColorTable, get_table
from .errors import FormatError

__all__ = [
    "Hash2Digest",
    "hash2",
    "hash2_decode",
    "hash2_decode_indel",
    "block_spans",
    "digest_length_bits",
    "default_block_length",
    "exhaustive_hash2_roundtrip",
]

HEADER_BITS = 21
_VARIANT_CODE = {"deletion": 0, "indel": 1}
_CODE_VARIANT = {v: k for k, v in _VARIANT_CODE.items()}


def default_block_length(source_length: int, k: int) -> int:
    """ceil(log2(source_length)) clamped to the table cap and forced above k."""
    raw = max(1, (source_length - 1).bit_length())
    return min(max(raw, k + 1), 12, max(source_length, k + 1))


@lru_cache(maxsize=512)
def block_spans(source_length: int, B: int) -> tuple[tuple[int, int], ...]:
    return tuple((s, min(B, source_length - s))
                 for s in range(0, source_length, B))


def _int_pack(bits2d: np.ndarray) -> np.ndarray:
    """(rows, width) bit matrix -> ints, MSB first."""
    width = bits2d.shape[1]
    if width == 0:
        return np.zeros(bits2d.shape[0], dtype=np.int64)
    pw = 1 << (width - 1 - np.arange(width, dtype=np.int64))
    return bits2d.astype(np.int64) @ pw


def _int_unpack(vals: np.ndarray, width: int) -> np.ndarray:
    shifts = width - 1 - np.arange(width, dtype=np.int64)
    return ((vals[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


class Hash2Digest:
    """Concatenated per-block colors of one source string."""

    def __init__(self, B: int, k: int, variant: str, source_length: int,
                 colors: np.ndarray, tail_verbatim: bool, tail_bits: str | None,
                 threshold: int | None = None):
        self.B = B
        self.k = k
        self.variant = variant
        self.threshold = threshold
        self.source_length = source_length
        self.colors = np.asarray(colors, dtype=np.int64)
        self.tail_verbatim = tail_verbatim
        self.tail_bits = tail_bits
        self.total_bits = digest_length_bits(source_length, B, k, variant,
                                             threshold=threshold)

    def __eq__(self, other):
        return (isinstance(other, Hash2Digest)
                and self.to_bits() == other.to_bits()
                and self.source_length == other.source_length)

    def _tables(self) -> tuple[ColorTable, ColorTable | None]:
        full = get_table(self.B, self.k, self.variant, self.threshold) \
            if self.source_length >= self.B else None
        tail = self.source_length % self.B
        if self.source_length < self.B:
            tail = self.source_length
        tail_table = None
        if tail and not self.tail_verbatim:
            tail_table = get_table(tail, self.k, self.variant, self.threshold)
        return full, tail_table

    def to_bits(self) -> str:
        parts = [
            format(self.B, "08b"),
            format(self.k, "08b"),
            format(_VARIANT_CODE[self.variant], "04b"),
            "1" if self.tail_verbatim else "0",
        ]
        full_table, tail_table = self._tables()
        nfull = self.source_length // self.B
        if nfull:
            bits = _int_unpack(self.colors[:nfull], full_table.width)
            parts.append(from_array(bits.reshape(-1)))
        if self.tail_verbatim:
            parts.append(self.tail_bits)
        elif tail_table is not None:
            parts.append(from_int(int(self.colors[-1]), tail_table.width))
        return "".join(parts)

    @classmethod
    def from_bits(cls, bits: str, source_length: int,
                  threshold: int | None = None) -> "Hash2Digest":
        if len(bits) < HEADER_BITS:
            raise FormatError("digest shorter than its header")
        B = int(bits[0:8], 2)
        k = int(bits[8:16], 2)
        vcode = int(bits[16:20], 2)
        flag = bits[20] == "1"
        if vcode not in _CODE_VARIANT:
            raise FormatError(f"unknown digest variant code {vcode}")
        variant = _CODE_VARIANT[vcode]
        if B < 1 or B > MAX_TABLE_LENGTH or k < 1 or B <= k:
            raise FormatError(f"implausible digest header B={B} k={k}")
        if len(bits) != digest_length_bits(source_length, B, k, variant,
                                           threshold=threshold):
            raise FormatError("digest length does not match its geometry")
        tail = source_length % B if source_length >= B else source_length
        expect_flag = variant == "deletion" and 0 < tail <= k
        if flag != expect_flag:
            raise FormatError("tail-verbatim flag inconsistent with geometry")
        nfull = source_length // B
        pos = HEADER_BITS
        colors = np.zeros(0, dtype=np.int64)
        if nfull:
            w_full = get_table(B, k, variant, threshold).width
            seg = bits[pos : pos + nfull * w_full]
            colors = _int_pack(to_array(seg).reshape(nfull, w_full))
            pos += nfull * w_full
        tail_bits = None
        if tail:
            if expect_flag:
                tail_bits = bits[pos : pos + tail]
            else:
                w_tail = get_table(tail, k, variant, threshold).width
                colors = np.concatenate(
                    [colors, [int(bits[pos : pos + w_tail], 2)]])
        return cls(B, k, variant, source_length, colors, expect_flag, tail_bits,
                   threshold=threshold)


def digest_length_bits(source_length: int, B: int, k: int, variant: str,
                       threshold: int | None = None, bound: bool = False) -> int:
    """Exact digest bit length; with bound=True, use the analytic color-count
    bound 2*B^(2k)+1 instead of built tables (for closed-form reporting)."""
    def width(blen: int) -> int:
        if bound:
            count = min(2 * blen ** (2 * k) + 1, 1 << blen)
            return max(1, (count - 1).bit_length())
        return get_table(blen, k, variant, threshold).width

    nfull = source_length // B
    tail = source_length % B if source_length >= B else source_length
    n = HEADER_BITS + (nfull * width(B) if nfull else 0)
    if tail:
        if variant == "deletion" and tail <= k:
            n += tail
        else:
            n += width(tail)
    return n


def hash2(s: str, B: int, k: int, variant: str = "deletion",
          threshold: int | None = None) -> Hash2Digest:
    """Color every length-B block of s (last block may be shorter)."""
    if B <= k:
        raise ValueError(f"block length {B} must exceed k={k}")
    src = len(s)
    if src == 0:
        raise ValueError("cannot hash an empty string")
    nfull = src // B
    tail = src % B if src >= B else src
    ya = to_array(s)
    colors = np.zeros(0, dtype=np.int64)
    if nfull:
        table = get_table(B, k, variant, threshold)
        ints = _int_pack(ya[: nfull * B].reshape(nfull, B))
        colors = table.colors[ints]
    tail_verbatim = variant == "deletion" and 0 < tail <= k
    tail_bits = None
    if tail:
        if tail_verbatim:
            tail_bits = s[nfull * B :]
        else:
            ttab = get_table(tail, k, variant, threshold)
            colors = np.concatenate([colors, [ttab.color_of(s[nfull * B :])]])
    return Hash2Digest(B, k, variant, src, colors, tail_verbatim, tail_bits,
                       threshold=threshold)


def _window_ints(ya: np.ndarray, starts: np.ndarray, wlen: int) -> np.ndarray:
    if wlen == 0:
        return np.zeros(starts.size, dtype=np.int64)
    idx = starts[:, None] + np.arange(wlen)[None, :]
    return _int_pack(ya[idx])


def hash2_decode(y: str, digest: Hash2Digest, source_length: int) -> str | None:
    """Invert up to k deletions using positional windows; None on any anomaly."""
    if digest.variant != "deletion" or source_length != digest.source_length:
        return None
    delta = source_length - len(y)
    if delta < 0 or delta > digest.k:
        return None
    B = digest.B
    nfull = source_length // B
    tail = source_length % B if source_length >= B else source_length
    ya = to_array(y)
    parts: list[str] = []
    if nfull:
        table = get_table(B, k=digest.k, variant="deletion", threshold=digest.threshold)
        starts = np.arange(nfull, dtype=np.int64) * B
        wlen = B - delta
        wins = _window_ints(ya, starts, wlen)
        cands = table.resolve(wins, digest.colors[:nfull], wlen, delta, 0)
        if np.any(cands < 0):
            return None
        parts.append(from_array(_int_unpack(cands, B).reshape(-1)))
    if tail:
        if digest.tail_verbatim:
            parts.append(digest.tail_bits)
        else:
            ttab = get_table(tail, digest.k, "deletion", digest.threshold)
            start = nfull * B
            wlen = tail - delta
            if wlen < 0:
                return None
            win = _window_ints(ya, np.array([start]), wlen)
            cand = ttab.resolve(win, digest.colors[-1:], wlen, delta, 0)
            if cand[0] < 0:
                return None
            parts.append(from_int(int(cand[0]), tail))
    out = "".join(parts)
    return out if len(out) == source_length else None


def hash2_decode_indel(y: str, digest: Hash2Digest, source_length: int,
                       k: int) -> str | None:
    """Invert <= k mixed insertions/deletions; windows cut k bits each side."""
    if digest.variant != "indel" or source_length != digest.source_length:
        return None
    if not source_length - k <= len(y) <= source_length + k:
        return None
    B = digest.B
    dmax, imax = 3 * k, k
    ya = to_array(y)
    ylen = len(y)
    spans = block_spans(source_length, B)
    # uniform interior blocks first, vectorized; the few blocks clamped by
    # y's end (and a short tail) go through the scalar path
    wlen = max(0, B - 2 * k)
    n_int = 0
    while n_int < len(spans):
        start, ln = spans[n_int]
        if ln != B or start + k + wlen > ylen:
            break
        n_int += 1
    out_blocks: dict[int, str] = {}
    interior_bits = ""
    if n_int:
        table = get_table(B, digest.k, "indel", digest.threshold)
        starts = np.arange(n_int, dtype=np.int64) * B + k
        wins = _window_ints(ya, starts, wlen)
        cands = table.resolve(wins, digest.colors[:n_int], wlen, dmax, imax)
        if np.any(cands < 0):
            return None
        interior_bits = from_array(_int_unpack(cands, B).reshape(-1))
    for i in range(n_int, len(spans)):
        start, blen = spans[i]
        table = get_table(blen, digest.k, "indel", digest.threshold)
        lo = min(start + k, ylen)
        hi = max(min(start + blen - k, ylen), lo)
        win = y[lo:hi]
        wint = int(win, 2) if win else 0
        cand = table.resolve(np.array([wint]), digest.colors[i : i + 1],
                             len(win), dmax, imax)
        if cand[0] < 0:
            return None
        out_blocks[i] = from_int(int(cand[0]), blen)
    out = interior_bits + "".join(out_blocks[i] for i in range(n_int, len(spans)))
    return out if len(out) == source_length else None


def exhaustive_hash2_roundtrip(length: int, B: int, k: int) -> int:
    """Failures over all strings x all deletion patterns with delta <= k.

    Vectorized over all 2^length sources per pattern; drives the same
    resolve() machinery as hash2_decode.
    """
    import itertools

    n = 1 << length
    s_ints = np.arange(n, dtype=np.int64)
    shifts = length - 1 - np.arange(length)
    bits = ((s_ints[:, None] >> shifts[None, :]) & 1).astype(np.uint8)
    spans = block_spans(length, B)
    tables = {ln: get_table(ln, k, "deletion") for _, ln in set(spans)}
    true_blocks = [(_int_pack(bits[:, s : s + ln]), s, ln) for s, ln in spans]
    colors = [tables[ln].colors[tb] for tb, _, ln in true_blocks]
    failures = 0
    for delta in range(k + 1):
        for drop in itertools.combinations(range(length), delta):
            keep = [i for i in range(length) if i not in drop]
            yb = bits[:, keep]
            ok = np.ones(n, dtype=bool)
            for bi, (tb, start, ln) in enumerate(true_blocks):
                if ln <= k:  # verbatim tail: always exact
                    continue
                wl = ln - delta
                win = _int_pack(yb[:, start : start + wl])
                res = tables[ln].resolve(win, colors[bi], wl, delta, 0)
                ok &= res == tb
            failures += int(np.count_nonzero(~ok))
    return failures
