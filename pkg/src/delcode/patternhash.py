"""Per-pattern split-point hashes and their majority-vote aggregate.

For a pattern p, a mixed string is cut at every p-occurrence start; each
piece is padded to the mixedness window length, block-hashed, its true length
appended, and the result packed into c field symbols. The c symbol streams
(symbol t of every piece) are protected by c interleaved systematic RS codes
with 2k parities each, so k damaged pieces cost at most k symbol errors per
stream. Only the parities are published; a decoder recomputes the piece
digests from its received string and lets RS point at the pieces that
suffered deletions, then inverts each damaged piece through its block hash.

Deletions touching no p-occurrence leave the split structure intact, so the
per-pattern decode is exact for such patterns; a bitwise majority over all
2^m patterns (strict: a value must win more than half of all slots) recovers
the string because at most k(2m-1) patterns can be disturbed.
"""

from __future__ import annotations

import numpy as np

from .bits import from_array, from_int, is_subsequence, to_array
from .blockhash import Hash2Digest, hash2, hash2_decode, hash2_decode_indel, _int_unpack, _int_pack
from .errors import CapacityError, FormatError, MixednessError
from .gf import field_ops, rs_correct_batch, rs_parity_batch
from .mixer import ParameterSet, find_split_points, is_mixed, pattern_position_table

__all__ = [
    "SegmentSplit",
    "PatternHash",
    "MixedHash",
    "split_by_pattern",
    "segment_digest",
    "h_pattern",
    "g_pattern",
    "H_mixed",
    "G_mixed",
    "pattern_hash_bits",
    "mixed_hash_bits",
]


class SegmentSplit:
    """A string cut at every occurrence start of one pattern."""

    def __init__(self, pattern: str, split_points: list[int], source: str):
        self.pattern = pattern
        self.split_points = list(split_points)
        # w_0 is the prefix before the first occurrence; interior pieces run
        # occurrence-start to next occurrence-start; w_u is the final suffix
        pts = [0] + self.split_points + [len(source)]
        self.segments = [source[pts[i] : pts[i + 1]] for i in range(len(pts) - 1)]
        self.lengths = [len(w) for w in self.segments]

    def __iter__(self):
        return iter(self.segments)


def split_by_pattern(r: str, p: str, params: ParameterSet) -> SegmentSplit:
    split = SegmentSplit(p, find_split_points(r, p), r)
    oversize = [ln for ln in split.lengths if ln > params.d]
    if oversize:
        raise MixednessError(
            f"segment of length {oversize[0]} exceeds the mixedness window {params.d}")
    return split


def pattern_hash_bits(params: ParameterSet) -> int:
    return 2 * params.e * params.c * params.w


def mixed_hash_bits(params: ParameterSet) -> int:
    return (1 << params.m) * pattern_hash_bits(params)


class _Context:
    """Derived per-parameter-set state shared by hash and decode paths."""

    def __init__(self, params: ParameterSet):
        params.validate()
        self.params = params
        self.gf = field_ops(params.w)
        self.lw = params.length_field_bits
        self.digest_bits = params.segment_digest_bits() - self.lw
        self.pad_bits = params.c * params.w - (self.digest_bits + self.lw)
        self._sym_cache: dict[str, np.ndarray] = {}
        self._zero_row = np.zeros(params.c, dtype=np.int64)

    def segment_symbols(self, w_j: str) -> np.ndarray:
        """Digest of one piece as c field symbols; cached by content."""
        cached = self._sym_cache.get(w_j)
        if cached is not None:
            return cached
        p = self.params
        v = "0" * (p.d - len(w_j)) + w_j
        digest = hash2(v, p.B, p.k, p.variant)
        bits = digest.to_bits() + from_int(len(w_j), self.lw) + "0" * self.pad_bits
        syms = _int_pack(to_array(bits).reshape(p.c, p.w))
        if len(self._sym_cache) > 1 << 16:
            self._sym_cache.clear()
        self._sym_cache[w_j] = syms
        return syms

    def recompute_matrix(self, segments: list[str]) -> np.ndarray:
        """(u+1, c) symbol matrix; oversize pieces become all-zero rows.

        A real piece digest always starts with the nonzero header byte B, so
        an all-zero row can never collide with a true digest row and RS sees
        the oversize piece as an ordinary error.
        """
        p = self.params
        rows = [self.segment_symbols(w) if len(w) <= p.d else self._zero_row
                for w in segments]
        return np.vstack(rows) if rows else np.zeros((0, p.c), dtype=np.int64)


_CONTEXTS: dict[ParameterSet, _Context] = {}


def _context(params: ParameterSet) -> _Context:
    ctx = _CONTEXTS.get(params)
    if ctx is None:
        ctx = _Context(params)
        _CONTEXTS[params] = ctx
    return ctx


class PatternHash:
    """RS parities of one pattern's piece digests."""

    def __init__(self, pattern: str, parity: np.ndarray, params: ParameterSet,
                 segment_count: int | None):
        self.pattern = pattern
        self.parity = np.asarray(parity, dtype=np.int64)  # (2e, c)
        self.c = params.c
        self.w = params.w
        self.e = params.e
        self.segment_count = segment_count
        if self.parity.shape != (2 * self.e, self.c):
            raise ValueError("parity shape does not match the parameter set")

    def to_bits(self) -> str:
        bits = _int_unpack(self.parity.reshape(-1), self.w)
        return from_array(bits.reshape(-1))

    @classmethod
    def from_bits(cls, bits: str, pattern: str, params: ParameterSet) -> "PatternHash":
        want = pattern_hash_bits(params)
        if len(bits) != want:
            raise FormatError(f"pattern hash must be {want} bits, got {len(bits)}")
        syms = _int_pack(to_array(bits).reshape(2 * params.e * params.c, params.w))
        return cls(pattern, syms.reshape(2 * params.e, params.c), params, None)


class MixedHash:
    """All 2^m pattern hashes, ascending pattern order, fixed-width packed."""

    def __init__(self, pattern_hashes: list[PatternHash], params: ParameterSet):
        self.pattern_hashes = pattern_hashes
        self.params = params
        self.bits = "".join(ph.to_bits() for ph in pattern_hashes)
        if len(self.bits) != mixed_hash_bits(params):
            raise ValueError("mixed hash length inconsistent with parameters")

    @staticmethod
    def parse_parities(bits: str, params: ParameterSet) -> np.ndarray:
        """(2^m, 2e, c) parity symbols from the packed bit layout."""
        want = mixed_hash_bits(params)
        if len(bits) != want:
            raise FormatError(f"mixed hash must be {want} bits, got {len(bits)}")
        arr = to_array(bits).reshape(-1, params.w)
        syms = _int_pack(arr)
        return syms.reshape(1 << params.m, 2 * params.e, params.c)


def segment_digest(w_j: str, params: ParameterSet) -> str:
    """One piece's digest bit string (block hash, length field, zero pad)."""
    if len(w_j) > params.d:
        raise MixednessError("piece longer than the mixedness window")
    ctx = _context(params)
    syms = ctx.segment_symbols(w_j)
    return from_array(_int_unpack(syms, params.w).reshape(-1))


def h_pattern(r: str, p: str, params: ParameterSet,
              positions: list[int] | None = None) -> PatternHash:
    ctx = _context(params)
    if positions is None:
        positions = find_split_points(r, p)
    split = SegmentSplit(p, list(positions), r)
    if any(ln > params.d for ln in split.lengths):
        raise MixednessError("string is not mixed for this pattern")
    X = ctx.recompute_matrix(split.segments)
    if X.shape[0] + 2 * params.e > ctx.gf.q - 1:
        raise CapacityError(
            f"{X.shape[0]} segments exceed GF(2^{params.w}) capacity; raise w")
    parity = rs_parity_batch(X, params.e, ctx.gf)
    return PatternHash(p, parity, params, X.shape[0])


def _reconstruct_segment(ctx: _Context, w_recv: str, row_syms: np.ndarray) -> str | None:
    """Invert one damaged piece from its corrected digest symbols."""
    p = ctx.params
    bits = from_array(_int_unpack(row_syms, p.w).reshape(-1))
    digest_bits = bits[: ctx.digest_bits]
    ell = int(bits[ctx.digest_bits : ctx.digest_bits + ctx.lw], 2)
    if ctx.pad_bits and bits[ctx.digest_bits + ctx.lw :].strip("0"):
        return None
    if ell > p.d:
        return None
    delta = ell - len(w_recv)
    try:
        digest = Hash2Digest.from_bits(digest_bits, p.d)
    except FormatError:
        return None
    if digest.variant != p.variant or digest.B != p.B or digest.k != p.k:
        return None
    if p.variant == "deletion":
        if not 0 <= delta <= p.k:
            return None
        v_recv = "0" * (p.d - ell) + w_recv
        v = hash2_decode(v_recv, digest, p.d)
    else:
        if abs(delta) > p.k:
            return None
        if p.d - ell < 0:
            return None
        v_recv = "0" * (p.d - ell) + w_recv
        v = hash2_decode_indel(v_recv, digest, p.d, p.k)
    if v is None:
        return None
    head, seg = v[: p.d - ell], v[p.d - ell :]
    if head.strip("0"):
        return None
    return seg


def _g_pattern_core(ctx: _Context, s_recv: str, positions, ph: PatternHash,
                    n: int) -> str | None:
    p = ctx.params
    split = SegmentSplit(ph.pattern, list(positions), s_recv)
    u1 = len(split.segments)
    if ph.segment_count is not None and ph.segment_count != u1:
        return None
    if u1 + 2 * p.e > ctx.gf.q - 1:
        return None
    X = ctx.recompute_matrix(split.segments)
    corrected, ok = rs_correct_batch(X, ph.parity, p.e, ctx.gf)
    if not ok.all():
        return None
    changed = np.nonzero(np.any(corrected != X, axis=1))[0]
    pieces = list(split.segments)
    for j in changed:
        seg = _reconstruct_segment(ctx, split.segments[j], corrected[j])
        if seg is None:
            return None
        pieces[j] = seg
    out = "".join(pieces)
    if len(out) != n:
        return None
    if p.variant == "deletion" and not is_subsequence(s_recv, out):
        return None
    return out


def g_pattern(s_received: str, ph: PatternHash, p: str, n: int,
              params: ParameterSet) -> str | None:
    """Exact inverse for pattern-preserving damage; None (never a crash) else."""
    ctx = _context(params)
    if params.variant == "deletion":
        if not n - params.k <= len(s_received) <= n:
            return None
    else:
        if not n - params.k <= len(s_received) <= n + params.k:
            return None
    if ph.pattern != p:
        raise ValueError("pattern does not match the hash")
    return _g_pattern_core(ctx, s_received, find_split_points(s_received, p), ph, n)


def H_mixed(r: str, params: ParameterSet, verified: bool = False) -> MixedHash:
    """Bundle of all 2^m pattern hashes in ascending pattern order."""
    ctx = _context(params)
    if not verified and not is_mixed(r, params):
        raise MixednessError("H_mixed requires a mixed input string")
    table = pattern_position_table(r, params.m)
    hashes = []
    for pv in range(1 << params.m):
        pat = from_int(pv, params.m)
        hashes.append(h_pattern(r, pat, params,
                                positions=sorted(int(i) for i in table[pv])))
    return MixedHash(hashes, params)


def G_mixed(s_received: str, mixed_hash, n: int, params: ParameterSet) -> str | None:
    """Strict bitwise majority over the per-pattern decodes; None on no majority.

    Fail outputs abstain but still count in the denominator, so a value must
    win more than 2^(m-1) of all pattern slots.
    """
    ctx = _context(params)
    k = params.k
    if params.variant == "deletion":
        if not n - k <= len(s_received) <= n:
            return None
    else:
        if not n - k <= len(s_received) <= n + k:
            return None
    bits = mixed_hash.bits if isinstance(mixed_hash, MixedHash) else mixed_hash
    try:
        parities = MixedHash.parse_parities(bits, params)
    except FormatError:
        return None
    postable = pattern_position_table(s_received, params.m)
    two_m = 1 << params.m
    outputs: list[str | None] = []
    tally: dict[str, int] = {}
    winner = None
    for pv in range(two_m):
        ph = PatternHash(from_int(pv, params.m), parities[pv], params, None)
        out = _g_pattern_core(ctx, s_received,
                              sorted(int(i) for i in postable[pv]), ph, n)
        outputs.append(out)
        if out is not None:
            tally[out] = tally.get(out, 0) + 1
            if tally[out] * 2 > two_m:
                winner = out  # already a strict majority of all slots
                break
    if winner is None:
        votes = [o for o in outputs if o is not None]
        if not votes:
            return None
        mat = np.vstack([to_array(v) for v in votes]).astype(np.int32)
        ones = mat.sum(axis=0)
        zeros = len(votes) - ones
        half = two_m // 2
        if np.any((ones <= half) & (zeros <= half)):
            return None
        winner = from_array((ones > half).astype(np.uint8))
    if params.variant == "deletion" and not is_subsequence(s_received, winner):
        return None
    return winner
