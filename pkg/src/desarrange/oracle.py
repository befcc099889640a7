"""
Brute-force distributions by full enumeration.

This module deliberately depends only on the permutation core (plus the
standard library), never on the generating-function or run-theorem layers,
so a transcription bug over there cannot leak into the reference counts
used to check them.
"""
from __future__ import annotations

from collections import Counter

from .perms import STAT_FUNCTIONS, contains_pattern, enumerate_class


def distribution(n: int, stats, klass: str = "desarrangements", restrict=None):
    """Exact joint counts of the named statistics over a permutation class.

    stats is a list of names from STAT_FUNCTIONS.  With one statistic the
    keys are plain values, otherwise tuples in the order given.  restrict,
    when present, is a set of length-3 patterns the permutations must avoid.
    """
    fns = []
    for name in stats:
        if name not in STAT_FUNCTIONS:
            raise ValueError(f"unknown statistic {name!r}")
        fns.append(STAT_FUNCTIONS[name])
    restrict = tuple(restrict) if restrict else ()
    counts = Counter()
    single = len(fns) == 1
    for p in enumerate_class(n, klass):
        if restrict and any(contains_pattern(p, sigma) for sigma in restrict):
            continue
        if single:
            counts[fns[0](p)] += 1
        else:
            counts[tuple(f(p) for f in fns)] += 1
    return dict(counts)


def marginal(joint: dict, index: int) -> dict:
    """Collapse a tuple-keyed joint distribution onto one coordinate."""
    out = Counter()
    for key, c in joint.items():
        out[key[index]] += c
    return dict(out)


def class_size(n: int, klass: str = "desarrangements") -> int:
    return sum(1 for _ in enumerate_class(n, klass))
