"""Codeword framing: repetition-protected digests around the mixed payload.

A codeword is <r, t, rep(hash2(t)), Hmixed(r), rep(hash2(Hmixed(r)))> with
r = mu(s, t) the pattern-rich payload. Segment offsets are a pure function of
the parameter set, so a decoder slices positional windows: with delta total
deletions the span [a, b] yields y[a .. b-delta]; under a mixed edit budget
the raw spans are sliced and each stage absorbs the boundary fuzz itself.

Decoders return None for any anomaly and never raise on legal-length input.
Parameters always travel out-of-band (deletions would destroy any in-band
header).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bits import from_array, mu, to_array
from .blockhash import (Hash2Digest, default_block_length, digest_length_bits,
                        hash2, hash2_decode, hash2_decode_indel)
from .errors import FormatError, ParameterError
from .mixer import ParameterSet, template_search
from .patternhash import G_mixed, H_mixed, h_pattern, mixed_hash_bits, pattern_hash_bits
from . import patternhash

__all__ = [
    "CodewordGeometry",
    "geometry",
    "rep_encode",
    "rep_decode_deletions",
    "rep_decode_indel",
    "encode",
    "decode",
    "encode_indel",
    "decode_indel",
    "clear_codec_caches",
]


@dataclass(frozen=True)
class CodewordGeometry:
    params: ParameterSet
    rep_factor: int
    B_t: int
    B_hm: int
    t_digest_bits: int
    hm_bits: int
    hm_digest_bits: int
    segments: tuple[tuple[str, int, int], ...]  # (name, offset, length)
    N: int

    def span(self, name: str) -> tuple[int, int]:
        for seg, off, ln in self.segments:
            if seg == name:
                return off, ln
        raise KeyError(name)


def geometry(params: ParameterSet) -> CodewordGeometry:
    p = params
    rep = p.k + 1 if p.variant == "deletion" else 3 * p.k + 1
    B_t = default_block_length(p.L, p.k)
    t_dig = digest_length_bits(p.L, B_t, p.k, p.variant)
    hm = mixed_hash_bits(p)
    B_hm = default_block_length(hm, p.k)
    hm_dig = digest_length_bits(hm, B_hm, p.k, p.variant)
    lengths = [("r", p.n), ("t", p.L), ("rep_hash_t", rep * t_dig),
               ("hmixed", hm), ("rep_hash_hmixed", rep * hm_dig)]
    segments = []
    off = 0
    for name, ln in lengths:
        segments.append((name, off, ln))
        off += ln
    return CodewordGeometry(p, rep, B_t, B_hm, t_dig, hm, hm_dig,
                            tuple(segments), off)


# repetition code --------------------------------------------------------------

def rep_encode(x: str, f: int) -> str:
    if f < 1:
        raise ValueError("repetition factor must be >= 1")
    return from_array(np.repeat(to_array(x), f))


def rep_decode_deletions(y: str, f: int, original_bits: int) -> str | None:
    """Positional decode: bit i of the source survives at y[f*i] when at most
    f-1 bits were deleted overall."""
    if not f * original_bits - (f - 1) <= len(y) <= f * original_bits:
        return None
    if original_bits == 0:
        return ""
    ya = to_array(y)
    return from_array(ya[np.arange(original_bits) * f])


def rep_decode_indel(y: str, f: int, original_bits: int, k: int) -> str | None:
    """Majority over each f-bit window; exact while total edits <= k < f/2."""
    if not f * original_bits - k <= len(y) <= f * original_bits + k:
        return None
    if original_bits == 0:
        return ""
    ya = to_array(y).astype(np.int32)
    idx = np.arange(original_bits)[:, None] * f + np.arange(f)[None, :]
    valid = idx < len(y)
    ones = (np.where(valid, ya[np.minimum(idx, len(y) - 1)], 0)).sum(axis=1)
    size = valid.sum(axis=1)
    if np.any(ones * 2 == size):
        return None  # tie: impossible within budget
    return from_array((ones * 2 > size).astype(np.uint8))


# caches -----------------------------------------------------------------------

class _CodecCtx:
    def __init__(self, params: ParameterSet):
        self.geom = geometry(params)
        self.t_memo: dict = {}
        self.hm_memo: dict = {}
        self.g_memo: dict = {}
        self.digest_memo: dict = {}
        self.rep_memo: dict = {}


_CTXS: dict[ParameterSet, _CodecCtx] = {}


def _ctx(params: ParameterSet) -> _CodecCtx:
    ctx = _CTXS.get(params)
    if ctx is None:
        ctx = _CodecCtx(params)
        _CTXS[params] = ctx
    return ctx


def clear_codec_caches():
    _CTXS.clear()
    patternhash._CONTEXTS.clear()


def _memo(cache: dict, cap: int, key, fn):
    if key in cache:
        return cache[key]
    val = fn()
    if len(cache) >= cap:
        cache.clear()
    cache[key] = val
    return val


# encoding ----------------------------------------------------------------------

def _encode(s: str, params: ParameterSet) -> str:
    p = params
    if len(s) != p.n:
        raise ValueError(f"message must be exactly n={p.n} bits")
    geom = geometry(p)
    t = template_search(s, p)
    r = mu(s, t)
    hm = H_mixed(r, p, verified=True)
    t_digest = hash2(t, geom.B_t, p.k, p.variant).to_bits()
    hm_digest = hash2(hm.bits, geom.B_hm, p.k, p.variant).to_bits()
    cw = "".join([r, t, rep_encode(t_digest, geom.rep_factor), hm.bits,
                  rep_encode(hm_digest, geom.rep_factor)])
    assert len(cw) == geom.N
    return cw


def encode(s: str, params: ParameterSet) -> str:
    if params.variant != "deletion":
        raise ParameterError("encode requires deletion-variant parameters")
    return _encode(s, params)


def encode_indel(s: str, params: ParameterSet) -> str:
    if params.variant != "indel":
        raise ParameterError("encode_indel requires indel-variant parameters")
    return _encode(s, params)


# decoding ------------------------------------------------------------------------

def _parse_digest(ctx: _CodecCtx, bits: str, source_len: int, B_expected: int,
                  params: ParameterSet) -> Hash2Digest | None:
    def build():
        try:
            dig = Hash2Digest.from_bits(bits, source_len)
        except FormatError:
            return None
        if dig.B != B_expected or dig.k != params.k or dig.variant != params.variant:
            return None
        return dig

    return _memo(ctx.digest_memo, 64, (bits, source_len), build)


def decode(y: str, params: ParameterSet) -> str | None:
    """Invert the deletion channel: exact for any <= k deletions of a codeword."""
    if params.variant != "deletion":
        raise ParameterError("decode requires deletion-variant parameters")
    p = params
    ctx = _ctx(p)
    geom = ctx.geom
    delta = geom.N - len(y)
    if not 0 <= delta <= p.k:
        return None

    def window(name: str) -> str:
        off, ln = geom.span(name)
        return y[off : off + ln - delta]

    w_rep_t = window("rep_hash_t")
    rep_bits = _memo(ctx.rep_memo, 1024, ("t", w_rep_t),
                     lambda: rep_decode_deletions(w_rep_t, geom.rep_factor,
                                                  geom.t_digest_bits))
    if rep_bits is None:
        return None
    dig_t = _parse_digest(ctx, rep_bits, p.L, geom.B_t, p)
    if dig_t is None:
        return None
    w_t = window("t")
    t = _memo(ctx.t_memo, 4096, (w_t, rep_bits),
              lambda: hash2_decode(w_t, dig_t, p.L))
    if t is None:
        return None
    w_rep_hm = window("rep_hash_hmixed")
    rep_hm = _memo(ctx.rep_memo, 1024, ("hm", w_rep_hm),
                   lambda: rep_decode_deletions(w_rep_hm, geom.rep_factor,
                                                geom.hm_digest_bits))
    if rep_hm is None:
        return None
    dig_hm = _parse_digest(ctx, rep_hm, geom.hm_bits, geom.B_hm, p)
    if dig_hm is None:
        return None
    w_hm = window("hmixed")
    hm_bits = _memo(ctx.hm_memo, 24, (w_hm, rep_hm),
                    lambda: hash2_decode(w_hm, dig_hm, geom.hm_bits))
    if hm_bits is None:
        return None
    w_r = window("r")
    r = _memo(ctx.g_memo, 512, (w_r, hm_bits),
              lambda: G_mixed(w_r, hm_bits, p.n, p))
    if r is None:
        return None
    return mu(r, t)


def _lcs_banded(a: str, b: str, band: int) -> int:
    """LCS restricted to |i - j| <= band; equals the true LCS when the edit
    distance fits in the band, never exceeds it otherwise."""
    la, lb = len(a), len(b)
    prev = [0] * (lb + 1)
    for i in range(1, la + 1):
        cur = [0] * (lb + 1)
        lo = max(1, i - band)
        hi = min(lb, i + band)
        ai = a[i - 1]
        for j in range(lo, hi + 1):
            if ai == b[j - 1]:
                cur[j] = prev[j - 1] + 1
            else:
                cur[j] = max(prev[j], cur[j - 1])
        prev = cur
    return prev[lb]


def _verify_indel_candidate(ctx: _CodecCtx, cand: str, s_slice: str,
                            parities: np.ndarray, params: ParameterSet) -> bool:
    p = params
    lcs = _lcs_banded(cand, s_slice, 6 * p.k + 2)
    if (len(cand) - lcs) + (len(s_slice) - lcs) > 4 * p.k:
        return False
    # spot-check: the first two per-pattern hashes must match exactly
    from .bits import from_int
    for pv in range(min(2, 1 << p.m)):
        ph = h_pattern(cand, from_int(pv, p.m), p)
        if not np.array_equal(ph.parity, parities[pv]):
            return False
    return True


def decode_indel(y: str, params: ParameterSet) -> str | None:
    """Invert any combination of insertions and deletions totaling <= k."""
    if params.variant != "indel":
        raise ParameterError("decode_indel requires indel-variant parameters")
    p = params
    ctx = _ctx(p)
    geom = ctx.geom
    if not geom.N - p.k <= len(y) <= geom.N + p.k:
        return None

    def window(name: str) -> str:
        off, ln = geom.span(name)
        return y[off : min(off + ln, len(y))]

    w_rep_t = window("rep_hash_t")
    rep_bits = _memo(ctx.rep_memo, 1024, ("t", w_rep_t),
                     lambda: rep_decode_indel(w_rep_t, geom.rep_factor,
                                              geom.t_digest_bits, p.k))
    if rep_bits is None:
        return None
    dig_t = _parse_digest(ctx, rep_bits, p.L, geom.B_t, p)
    if dig_t is None:
        return None
    w_t = window("t")
    t = _memo(ctx.t_memo, 4096, (w_t, rep_bits),
              lambda: hash2_decode_indel(w_t, dig_t, p.L, p.k))
    if t is None:
        return None
    w_rep_hm = window("rep_hash_hmixed")
    rep_hm = _memo(ctx.rep_memo, 1024, ("hm", w_rep_hm),
                   lambda: rep_decode_indel(w_rep_hm, geom.rep_factor,
                                            geom.hm_digest_bits, p.k))
    if rep_hm is None:
        return None
    dig_hm = _parse_digest(ctx, rep_hm, geom.hm_bits, geom.B_hm, p)
    if dig_hm is None:
        return None
    w_hm = window("hmixed")
    hm_bits = _memo(ctx.hm_memo, 24, (w_hm, rep_hm),
                    lambda: hash2_decode_indel(w_hm, dig_hm, geom.hm_bits, p.k))
    if hm_bits is None:
        return None

    def decode_slice(s_slice: str) -> str | None:
        cand = G_mixed(s_slice, hm_bits, p.n, p)
        if cand is None:
            return None
        try:
            parities = patternhash.MixedHash.parse_parities(hm_bits, p)
        except FormatError:
            return None
        if not _verify_indel_candidate(ctx, cand, s_slice, parities, p):
            return None
        return cand

    r = None
    deltas = [0]
    for j in range(1, p.k + 1):
        deltas += [-j, j]
    for dlt in deltas:
        if p.n + dlt > len(y) or p.n + dlt < 1:
            continue
        s_slice = y[: p.n + dlt]
        r = _memo(ctx.g_memo, 512, (s_slice, hm_bits),
                  lambda s=s_slice: decode_slice(s))
        if r is not None:
            break
    if r is None:
        return None
    return mu(r, t)
