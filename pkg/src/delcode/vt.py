"""Varshamov-Tenengolts single-deletion code: membership, census, decoding.

A length-n string x is a codeword iff sum(i * x_i, i=1..n) == 0 mod (n+1).
Decoding a single deletion uses the classic weight/position arithmetic; no
systematic message encoder is provided (enumeration order serves as the
small-n encoder).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bits import from_int
from .errors import CapacityError

__all__ = ["VtSyndrome", "vt_syndrome", "vt_members", "vt_decode"]

_CENSUS_CAP = 20


@dataclass(frozen=True)
class VtSyndrome:
    n: int
    residue: int


def vt_syndrome(x: str) -> VtSyndrome:
    """Position-weighted checksum with 1-based weights, mod len(x)+1."""
    n = len(x)
    total = sum(i + 1 for i, c in enumerate(x) if c == "1")
    return VtSyndrome(n, total % (n + 1))


def vt_members(n: int) -> set[str]:
    """All length-n strings with residue 0; size is at least 2^n/(n+1)."""
    if n > _CENSUS_CAP:
        raise CapacityError(f"vt_members capped at n <= {_CENSUS_CAP}")
    vals = np.arange(1 << n, dtype=np.int64)
    residue = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):  # weight i+1 for position i (leftmost first)
        residue += ((vals >> (n - 1 - i)) & 1) * (i + 1)
    members = vals[residue % (n + 1) == 0]
    return {from_int(int(v), n) for v in members}


def vt_decode(y: str, n: int) -> str | None:
    """The unique residue-0 length-n supersequence of y, or None.

    Accepts |y| == n (identity on codewords) or |y| == n-1 (one deletion,
    reinserted by the deficiency/weight argument).
    """
    if len(y) == n:
        return y if vt_syndrome(y).residue == 0 else None
    if len(y) != n - 1:
        return None
    mod = n + 1
    s = sum(i + 1 for i, c in enumerate(y) if c == "1") % mod
    deficiency = (-s) % mod
    weight = y.count("1")
    if deficiency == 0:
        # a trailing 0 (or a 0 with no 1s to its right) was deleted
        return y + "0"
    if deficiency <= weight:
        # deleted a 0 with `deficiency` ones to its right
        ones = 0
        for i in range(len(y) - 1, -1, -1):
            if y[i] == "1":
                ones += 1
                if ones == deficiency:
                    return y[:i] + "0" + y[i:]
        return None
    # deleted a 1 with (deficiency - weight - 1) zeros to its left
    zeros_needed = deficiency - weight - 1
    if zeros_needed == 0:
        return "1" + y
    zeros = 0
    for i in range(len(y)):
        if y[i] == "0":
            zeros += 1
            if zeros == zeros_needed:
                return y[: i + 1] + "1" + y[i + 1 :]
    return None
