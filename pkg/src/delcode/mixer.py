"""Code parameters, the mixedness predicate, and derandomized template search.

A string is mixed when every length-d window contains every length-m pattern;
the encoder forces this by XOR-ing the message with a periodic template found
by the method of conditional expectations. Desk-profile parameters keep every
correctness-critical inequality while dropping the asymptotic constants that
make paper-profile sizes astronomically large at bench scale.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .bits import from_int, mu, to_array
from .blockhash import default_block_length, digest_length_bits
from .errors import ParameterError

__all__ = [
    "ParameterSet",
    "derive_params",
    "minimal_m",
    "paper_m",
    "smallest_desk_n",
    "find_split_points",
    "pattern_position_table",
    "is_mixed",
    "template_search",
    "params_to_text",
    "params_from_text",
]


def minimal_m(k: int) -> int:
    m = 1
    while (1 << m) <= 2 * k * (2 * m - 1):
        m += 1
    return m


def paper_m(k: int) -> int:
    return math.ceil(math.log2(k) + math.log2(math.log2(k + 1)) + 5)


def _existence_ok(n: int, L: int, m: int) -> bool:
    """(1 - 2^-m)^floor(L/m) * floor(n/L) * 2^m < 1, checked in log space."""
    blocks = n // L
    if blocks == 0:
        return True
    return ((L // m) * math.log1p(-(2.0 ** -m))
            + math.log(blocks) + m * math.log(2.0)) < 0.0


def _minimal_L(n: int, m: int) -> int:
    L = m
    while L <= n:
        if L > m and _existence_ok(n, L, m):
            return L
        L += m
    raise ParameterError(
        f"no template length satisfies the existence predicate for n={n}")


def smallest_desk_n(k: int, variant: str = "deletion") -> int:
    """Smallest n accepted by the desk profile (d = 2L = n)."""
    m = minimal_m(k)
    L = 2 * m
    while not _existence_ok(2 * L, L, m):
        L += m
    return 2 * L


@dataclass(frozen=True)
class ParameterSet:
    """All derived code parameters; see validate() for the invariants."""

    n: int       # message length (bits)
    k: int       # deletion / edit budget
    m: int       # pattern length (bits)
    d: int       # mixedness window (bits)
    L: int       # template length (bits)
    B: int       # inner block length for segment digests (bits)
    w: int       # RS symbol width (bits)
    c: int       # RS symbols per segment digest
    profile: str = "desk"
    variant: str = "deletion"

    @property
    def e(self) -> int:
        """RS error budget per interleaved subcode (k wrong segments max)."""
        return self.k

    @property
    def length_field_bits(self) -> int:
        return self.d.bit_length()  # ceil(log2(d+1))

    @property
    def max_frame(self) -> int:
        """Worst-case segment count: every position a split point, plus w_0."""
        return self.n - self.m + 2

    def segment_digest_bits(self, bound: bool = False) -> int:
        return digest_length_bits(self.d, self.B, self.k, self.variant,
                                  bound=bound) + self.length_field_bits

    def validate(self, bound_widths: bool = False) -> "ParameterSet":
        k, m, n, d, L = self.k, self.m, self.n, self.d, self.L
        if k < 1:
            raise ParameterError("k must be >= 1")
        if (1 << m) <= 2 * k * (2 * m - 1):
            raise ParameterError(f"2^m > 2k(2m-1) violated: m={m}, k={k}")
        if not m < L:
            raise ParameterError(f"m < L violated: m={m}, L={L}")
        if d < 2 * L:
            raise ParameterError(f"d >= 2L violated: d={d}, L={L}")
        if d > n:
            raise ParameterError(f"d <= n violated: d={d}, n={n}")
        if not _existence_ok(n, L, m):
            raise ParameterError(
                f"template existence predicate violated for n={n}, L={L}, m={m}")
        if self.B <= k:
            raise ParameterError(f"B > k violated: B={self.B}, k={k}")
        if not 2 <= self.w <= 24:
            raise ParameterError(f"symbol width {self.w} outside [2, 24]")
        if self.max_frame + 2 * self.e > (1 << self.w) - 1:
            raise ParameterError(
                f"RS capacity: frame {self.max_frame} + 2e > 2^w - 1 (w={self.w})")
        need = self.segment_digest_bits(bound=bound_widths)
        if self.c * self.w < need:
            raise ParameterError(
                f"c*w = {self.c * self.w} cannot hold a {need}-bit segment digest")
        return self

    def indel_counterpart(self) -> "ParameterSet":
        return derive_params(self.n, self.k, self.profile, variant="indel")


def _symbol_width(n: int, m: int, k: int) -> int:
    return max(8, (n - m + 2 + 2 * k).bit_length())


def derive_params(n: int, k: int, profile: str = "desk",
                  variant: str = "deletion") -> ParameterSet:
    """Derive and validate a full parameter set.

    desk: m minimal for 2^m > 2k(2m-1); L the minimal template length passing
    the existence predicate; d = 2L. paper: the asymptotic formulas; such sets
    validate but their block length exceeds the color-table cap, so they serve
    redundancy analysis rather than actual encoding.
    """
    if k < 1:
        raise ParameterError("k must be >= 1")
    if variant not in ("deletion", "indel"):
        raise ParameterError(f"unknown variant {variant!r}")
    if profile == "desk":
        m = minimal_m(k)
        L = _minimal_L(n, m)
        d = 2 * L
        B = default_block_length(d, k)
        w = _symbol_width(n, m, k)
        seg = digest_length_bits(d, B, k, variant) + d.bit_length()
        c = -(-seg // w)
        return ParameterSet(n, k, m, d, L, B, w, c, "desk", variant).validate()
    if profile == "paper":
        if k < 2:
            raise ParameterError("paper profile requires k >= 2")
        m = paper_m(k)
        d = math.floor(20000 * k * (math.log2(k) ** 2) * math.log2(n))
        L = math.ceil(m * (1 << m) * (math.log2(n * (1 << m)) + 1))
        B = max(k + 1, (d - 1).bit_length())
        w = _symbol_width(n, m, k)
        seg = digest_length_bits(d, B, k, variant, bound=True) + d.bit_length()
        c = -(-seg // w)
        return ParameterSet(n, k, m, d, L, B, w, c, "paper",
                            variant).validate(bound_widths=True)
    raise ParameterError(f"unknown profile {profile!r}")


# parameter file -------------------------------------------------------------

_PARAM_KEYS = ("n", "k", "m", "d", "L", "B", "w", "c")


def params_to_text(p: ParameterSet) -> str:
    lines = [f"{key} = {getattr(p, key)}" for key in _PARAM_KEYS]
    lines.append(f"profile = {p.profile}")
    lines.append(f"variant = {p.variant}")
    return "\n".join(lines) + "\n"


def params_from_text(text: str) -> ParameterSet:
    vals: dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, val = line.partition("=")
        vals[key.strip()] = val.strip()
    try:
        fields = {key: int(vals[key]) for key in _PARAM_KEYS}
    except KeyError as exc:
        raise ParameterError(f"parameter file missing key {exc}") from None
    p = ParameterSet(profile=vals.get("profile", "custom"),
                     variant=vals.get("variant", "deletion"), **fields)
    return p.validate(bound_widths=p.profile == "paper")


# split points and mixedness ---------------------------------------------------

def find_split_points(s: str, p: str) -> list[int]:
    """Start indices of all (possibly overlapping) occurrences of p in s."""
    if len(p) > len(s):
        raise ValueError("pattern longer than the string")
    if not p:
        raise ValueError("pattern must be non-empty")
    out = []
    i = s.find(p)
    while i != -1:
        out.append(i)
        i = s.find(p, i + 1)
    return out


def _sliding_ints(bits: np.ndarray, m: int) -> np.ndarray:
    """Ints of every length-m window of a bit array."""
    n = bits.size
    if n < m:
        return np.zeros(0, dtype=np.int64)
    v = np.zeros(n - m + 1, dtype=np.int64)
    for j in range(m):
        v = (v << 1) | bits[j : n - m + 1 + j]
    return v


def pattern_position_table(s: str, m: int) -> list[np.ndarray]:
    """For each length-m pattern value, the sorted occurrence start indices."""
    vals = _sliding_ints(to_array(s), m)
    order = np.argsort(vals, kind="stable")
    sorted_vals = vals[order]
    bounds = np.searchsorted(sorted_vals, np.arange((1 << m) + 1))
    return [order[bounds[v] : bounds[v + 1]] for v in range(1 << m)]


def is_mixed(s: str, params: ParameterSet) -> bool:
    """True iff every length-d window of s contains every length-m pattern.

    Vacuously true (with a warning) when s is shorter than d.
    """
    n, d, m = len(s), params.d, params.m
    if n < d:
        warnings.warn("string shorter than the mixedness window; "
                      "predicate is vacuously true", stacklevel=2)
        return True
    table = pattern_position_table(s, m)
    xs = np.arange(n - d + 1, dtype=np.int64)
    for starts in table:
        if starts.size == 0:
            return False
        starts = np.sort(starts)
        idx = np.searchsorted(starts, xs)
        if np.any(idx >= starts.size) or np.any(starts[np.minimum(idx, starts.size - 1)] > xs + d - m):
            return False
    return True


def template_search(s: str, params: ParameterSet, with_trace: bool = False):
    """Find a template t with mu(s, t) mixed, by conditional expectations.

    Processes the template m bits at a time; at each step some chunk value
    removes at least a 2^-m fraction of the pending (block, pattern)
    obstructions (averaging), and ties break toward the smallest chunk value.
    The returned template verifies: the masked string is mixed.
    """
    n, L, m = params.n, params.L, params.m
    if len(s) != n:
        raise ValueError(f"message length {len(s)} != n={n}")
    nb = n // L
    steps = L // m
    two_m = 1 << m
    bits = to_array(s).astype(np.int64)
    pending = np.ones((nb, two_m), dtype=bool)
    b = nb * two_m
    trace = [b]
    rows = np.arange(nb)
    vs = np.arange(two_m, dtype=np.int64)
    chunks: list[str] = []
    for j in range(steps):
        sv = np.zeros(nb, dtype=np.int64)
        for t in range(m):
            sv = (sv << 1) | bits[rows * L + j * m + t]
        counts = pending[rows[:, None], sv[:, None] ^ vs[None, :]].sum(axis=0)
        eligible = counts * two_m >= b
        if not eligible.any():
            raise RuntimeError("conditional-expectation step found no eligible "
                               "chunk; averaging bound violated")
        v = int(np.argmax(eligible))
        pending[rows, sv ^ v] = False
        b -= int(counts[v])
        trace.append(b)
        chunks.append(from_int(v, m))
    template = "".join(chunks) + "0" * (L - steps * m)
    if b != 0 or pending.any():
        raise RuntimeError(f"template search left {b} obstructions")
    masked = mu(s, template)
    if not is_mixed(masked, params):
        raise RuntimeError("template produced a non-mixed string despite "
                           "zero obstructions")
    return (template, trace) if with_trace else template
