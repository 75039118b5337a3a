"""Permutations of the three prong slots, stored as image tuples."""
from __future__ import annotations

IDENTITY = (0, 1, 2)


def compose(first, then):
    """Apply ``first`` and then ``then``."""
    return tuple(then[first[i]] for i in range(len(first)))


def inverse(p):
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def sign(p):
    s = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, n = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            n += 1
        if n % 2 == 0:
            s = -s
    return s


def is_perm(p, n=3):
    return len(p) == n and sorted(p) == list(range(n))


def parse(text):
    """``"120"`` -> ``(1, 2, 0)``; raises ValueError on anything else."""
    if len(text) != 3 or not (text.isascii() and text.isdigit()):
        raise ValueError(f"not a 3-digit permutation: {text!r}")
    p = tuple(int(ch) for ch in text)
    if not is_perm(p):
        raise ValueError(f"not a permutation of 012: {text!r}")
    return p


def fmt(p):
    return "".join(str(i) for i in p)


def classify(p):
    """Conjugacy class name used in human-readable output."""
    if tuple(p) == IDENTITY:
        return "identity"
    return "3-cycle" if sign(p) == 1 else "transposition"
