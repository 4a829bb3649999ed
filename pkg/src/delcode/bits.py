"""Bit-sequence primitives: deletions, subsequences, LCS, channels, masking.

Bit strings are plain ``str`` of '0'/'1' characters, leftmost bit first.
All positions are 0-based. Everything here is a pure function; values can be
shared freely across threads.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "to_array",
    "from_array",
    "to_int",
    "from_int",
    "apply_deletions",
    "apply_edit_script",
    "enumerate_subsequences",
    "enumerate_supersequences",
    "is_subsequence",
    "lcs_length",
    "mu",
    "channel_delete",
    "channel_indel",
    "random_bitstring",
]


def to_array(s: str) -> np.ndarray:
    """'0'/'1' string -> uint8 array."""
    if not s:
        return np.zeros(0, dtype=np.uint8)
    return (np.frombuffer(s.encode("ascii"), dtype=np.uint8) - ord("0")).astype(np.uint8)


def from_array(a) -> str:
    a = np.asarray(a, dtype=np.uint8)
    return (a + ord("0")).tobytes().decode("ascii")


def to_int(s: str) -> int:
    """Pack a bit string into an int, leftmost bit most significant."""
    return int(s, 2) if s else 0


def from_int(v: int, length: int) -> str:
    if length == 0:
        return ""
    return format(v, "b").zfill(length)


def apply_deletions(s: str, positions: Iterable[int]) -> str:
    """Delete the given strictly increasing 0-based positions from s."""
    pos = list(positions)
    if any(q < 0 or q >= len(s) for q in pos):
        raise ValueError("deletion position out of range")
    if any(b <= a for a, b in zip(pos, pos[1:])):
        raise ValueError("deletion positions must be strictly increasing")
    pieces = []
    prev = 0
    for q in pos:
        pieces.append(s[prev:q])
        prev = q + 1
    pieces.append(s[prev:])
    return "".join(pieces)


def apply_edit_script(s: str, ops) -> str:
    """Apply an ordered edit script; each op is ('del', pos) or ('ins', pos, bit).

    Positions are interpreted against the current string at application time:
    'del' removes the bit at pos, 'ins' places the new bit so it ends up at pos.
    """
    out = s
    for op in ops:
        if op[0] == "del":
            _, pos = op
            if not 0 <= pos < len(out):
                raise ValueError("edit position out of range")
            out = out[:pos] + out[pos + 1 :]
        elif op[0] == "ins":
            _, pos, bit = op
            if not 0 <= pos <= len(out):
                raise ValueError("edit position out of range")
            if bit not in ("0", "1"):
                raise ValueError("inserted bit must be '0' or '1'")
            out = out[:pos] + bit + out[pos:]
        else:
            raise ValueError(f"unknown edit op {op[0]!r}")
    return out


def enumerate_subsequences(s: str, delta: int) -> set[str]:
    """All distinct strings obtained from s by deleting exactly delta bits."""
    if delta < 0 or delta > len(s):
        raise ValueError("delta must be in [0, len(s)]")
    level = {s}
    for _ in range(delta):
        level = {t[:i] + t[i + 1 :] for t in level for i in range(len(t))}
    return level


def enumerate_supersequences(y: str, length: int) -> set[str]:
    """All distinct strings of the given length containing y as a subsequence."""
    if length < len(y):
        raise ValueError("length must be >= len(y)")
    level = {y}
    for _ in range(length - len(y)):
        level = {t[:i] + b + t[i:] for t in level for i in range(len(t) + 1) for b in "01"}
    return level


def is_subsequence(y: str, s: str) -> bool:
    """True iff y can be obtained from s by deletions (greedy matching)."""
    it = iter(s)
    return all(c in it for c in y)


def lcs_length(a: str, b: str) -> int:
    """Length of the longest common subsequence, classic two-row DP."""
    if not a or not b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for ca in a:
        cur = [0]
        best = 0
        for j, cb in enumerate(b):
            best = prev[j] + 1 if ca == cb else max(prev[j + 1], cur[j])
            cur.append(best)
        prev = cur
    return prev[-1]


def mu(s: str, t: str) -> str:
    """XOR s with t repeated to cover s; self-inverse in s for fixed t."""
    if not t:
        raise ValueError("template must be non-empty")
    if not s:
        return ""
    reps = -(-len(s) // len(t))
    ta = np.tile(to_array(t), reps)[: len(s)]
    return from_array(to_array(s) ^ ta)


def _distinct_deletions_stream(s: str, delta: int) -> Iterator[str]:
    """Yield the distinct exactly-delta-deletion outputs of s lazily.

    Deduplicates by deleting only at run starts relative to the previous
    deletion point, which enumerates each distinct subsequence once without
    materializing the full output set.
    """
    n = len(s)

    def rec(prefix: str, start: int, remaining: int) -> Iterator[str]:
        if remaining == 0:
            yield prefix + s[start:]
            return
        # not enough symbols left to delete
        if n - start < remaining:
            return
        for i in range(start, n):
            # delete s[i]; skip positions equal to their predecessor within
            # the undeleted suffix to avoid emitting duplicates
            if i > start and s[i] == s[i - 1]:
                continue
            yield from rec(prefix + s[start:i], i + 1, remaining - 1)

    return rec("", 0, delta)


def channel_delete(s: str, k: int, mode: str = "seeded-random", seed: int = 0):
    """k-deletion channel.

    seeded-random: one uniformly chosen pattern of exactly-k deletions,
    reproducible from the seed. adversarial-enumerate: a lazy stream of every
    distinct output with exactly delta deletions, for each delta <= k.
    """
    if k < 0 or k > len(s):
        raise ValueError("k must be in [0, len(s)]")
    if mode == "seeded-random":
        rng = random.Random(seed)
        return apply_deletions(s, sorted(rng.sample(range(len(s)), k)))
    if mode == "adversarial-enumerate":
        return itertools.chain.from_iterable(
            _distinct_deletions_stream(s, d) for d in range(k + 1)
        )
    raise ValueError(f"unknown mode {mode!r}")


def _indel_stream(s: str, k: int) -> Iterator[str]:
    seen = {s}
    yield s
    frontier = [s]
    for _ in range(k):
        nxt = []
        for t in frontier:
            children = [t[:i] + t[i + 1 :] for i in range(len(t))]
            children += [t[:i] + b + t[i:] for i in range(len(t) + 1) for b in "01"]
            for c in children:
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
                    yield c
        frontier = nxt


def channel_indel(s: str, k: int, mode: str = "seeded-random", seed: int = 0):
    """Channel applying any combination of insertions and deletions totaling <= k.

    seeded-random draws an op count uniformly in [0, k], then random ops.
    adversarial-enumerate streams every distinct reachable string.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if mode == "seeded-random":
        rng = random.Random(seed)
        out = s
        for _ in range(rng.randint(0, k)):
            if out and rng.random() < 0.5:
                p = rng.randrange(len(out))
                out = out[:p] + out[p + 1 :]
            else:
                p = rng.randrange(len(out) + 1)
                out = out[:p] + rng.choice("01") + out[p:]
        return out
    if mode == "adversarial-enumerate":
        return _indel_stream(s, k)
    raise ValueError(f"unknown mode {mode!r}")


def random_bitstring(n: int, rng: random.Random) -> str:
    if n == 0:
        return ""
    return format(rng.getrandbits(n), "b").zfill(n)
