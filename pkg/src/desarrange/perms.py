"""
Permutations in one-line notation and the statistics defined on them.

Permutations are plain tuples of the values 1..n; the empty tuple is the
(unique) permutation of length 0.  All positions and values are 1-based.

Convention warning: an *ascent* of a length-n permutation is any position
i in [n] that is not a descent -- so the last position is always an
ascent.  Most other libraries do not count position n; everything in this
package (most importantly the notion of a desarrangement, a permutation
whose first ascent is even) depends on this convention.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

Perm = tuple[int, ...]

DEFAULT_ENUMERATION_CAP = 11
CAP_ENV_VAR = "DESARRANGE_CAP"

CLASSES = ("all", "desarrangements", "derangements")


class CapExceededError(Exception):
    """Enumeration request above the configured length cap."""


class InvariantError(AssertionError):
    """An internal structural invariant failed; signals a bug."""


def enumeration_cap() -> int:
    """Effective enumeration cap: DESARRANGE_CAP env var, else the default."""
    raw = os.environ.get(CAP_ENV_VAR)
    return int(raw) if raw else DEFAULT_ENUMERATION_CAP


def check_permutation(p) -> Perm:
    """Validate that p is a rearrangement of 1..n and return it as a tuple.

    >>> check_permutation([2, 1, 3])
    (2, 1, 3)
    """
    p = tuple(p)
    if sorted(p) != list(range(1, len(p) + 1)):
        raise ValueError(f"not a permutation of 1..{len(p)}: {p}")
    return p


def standardize(word) -> Perm:
    """Replace the smallest letter by 1, the next smallest by 2, and so on.

    >>> standardize((3, 6, 8, 1, 5))
    (2, 4, 5, 1, 3)
    >>> standardize(())
    ()
    """
    word = tuple(word)
    if len(set(word)) != len(word):
        raise ValueError(f"letters must be distinct: {word}")
    rank = {v: i for i, v in enumerate(sorted(word), 1)}
    return tuple(rank[v] for v in word)


def complement(p) -> Perm:
    """Replace each value v by n+1-v.

    >>> complement((3, 1, 2, 5, 4))
    (3, 5, 4, 1, 2)
    """
    n = len(p)
    return tuple(n + 1 - v for v in p)


def first_ascent(p) -> int | None:
    """Smallest ascent position (position n counts), or None when p is empty.

    >>> first_ascent((4, 3, 2, 1))
    4
    >>> first_ascent((2, 1, 3))
    2
    """
    n = len(p)
    if n == 0:
        return None
    i = 0
    while i < n - 1 and p[i] > p[i + 1]:
        i += 1
    return i + 1


def is_desarrangement(p) -> bool:
    """True iff the first ascent of p is even; the empty permutation counts.

    >>> is_desarrangement((2, 1, 3))
    True
    >>> is_desarrangement((1, 2, 3))
    False
    >>> is_desarrangement(())
    True
    """
    fa = first_ascent(p)
    return fa is None or fa % 2 == 0


def is_derangement(p) -> bool:
    """True iff p has no fixed points."""
    return all(v != i for i, v in enumerate(p, 1))


def des(p) -> int:
    """Number of positions i < n with p_i > p_{i+1}."""
    return sum(1 for i in range(len(p) - 1) if p[i] > p[i + 1])


def asc(p) -> int:
    """Number of non-descent positions in [n]; always includes position n."""
    return len(p) - des(p)


def pk(p) -> int:
    """Number of interior positions with p_{i-1} < p_i > p_{i+1}."""
    return sum(1 for i in range(1, len(p) - 1) if p[i - 1] < p[i] > p[i + 1])


def val(p) -> int:
    """Number of interior positions with p_{i-1} > p_i < p_{i+1}."""
    return sum(1 for i in range(1, len(p) - 1) if p[i - 1] > p[i] < p[i + 1])


def dasc(p) -> int:
    """Number of interior positions with p_{i-1} < p_i < p_{i+1}."""
    return sum(1 for i in range(1, len(p) - 1) if p[i - 1] < p[i] < p[i + 1])


def ddes(p) -> int:
    """Number of interior positions with p_{i-1} > p_i > p_{i+1}."""
    return sum(1 for i in range(1, len(p) - 1) if p[i - 1] > p[i] > p[i + 1])


def rval(p) -> int:
    """Number of right valleys: valleys, plus position n when p ends with a descent."""
    n = len(p)
    r = val(p)
    if n >= 2 and p[n - 2] > p[n - 1]:
        r += 1
    return r


def fix(p) -> int:
    """Number of fixed points."""
    return sum(1 for i, v in enumerate(p, 1) if v == i)


def descent_composition(p) -> tuple[int, ...]:
    """Lengths of the maximal increasing runs of p, in order.

    >>> descent_composition((3, 1, 7, 5, 4, 2, 6, 8, 9))
    (1, 2, 1, 1, 4)
    >>> descent_composition(())
    ()
    """
    n = len(p)
    if n == 0:
        return ()
    parts = []
    run = 1
    for i in range(n - 1):
        if p[i] < p[i + 1]:
            run += 1
        else:
            parts.append(run)
            run = 1
    parts.append(run)
    return tuple(parts)


@dataclass(frozen=True)
class PixedFactorization:
    """The unique split p = iota . delta with iota increasing and delta a desarrangement.

    delta holds the literal suffix letters (not standardized).
    """
    iota_len: int
    delta: Perm


def pixed_factorization(p) -> PixedFactorization:
    """Split p into its increasing prefix iota and desarrangement suffix delta.

    Scans every prefix length from 0 up to the maximal increasing prefix and
    requires exactly one candidate to leave a desarrangement suffix; no
    closed-form rule for the winning length is assumed.

    >>> pixed_factorization((4, 6, 7, 8, 5, 2, 1, 3))
    PixedFactorization(iota_len=3, delta=(8, 5, 2, 1, 3))
    """
    p = tuple(p)
    n = len(p)
    m = 0
    while m < n - 1 and p[m] < p[m + 1]:
        m += 1
    if n:
        m += 1  # maximal increasing prefix length
    valid = [k for k in range(m + 1) if _suffix_is_desarrangement(p, k)]
    if len(valid) != 1:
        raise InvariantError(f"pixed factorization not unique for {p}: splits {valid}")
    k = valid[0]
    return PixedFactorization(iota_len=k, delta=p[k:])


def _suffix_is_desarrangement(p, start: int) -> bool:
    # First-ascent parity only depends on relative order, so the suffix
    # needs no standardization.
    n = len(p)
    if start == n:
        return True
    i = start
    while i < n - 1 and p[i] > p[i + 1]:
        i += 1
    return (i - start + 1) % 2 == 0


def pix(p) -> int:
    """Number of pixed points: the length of the increasing factor."""
    return pixed_factorization(p).iota_len


@dataclass(frozen=True)
class StatRecord:
    des: int
    asc: int
    pk: int
    val: int
    dasc: int
    ddes: int
    rval: int
    fix: int
    pix: int
    first_ascent: int | None


def statistics(p) -> StatRecord:
    """All statistics of p in one record.

    >>> statistics((3, 1, 2, 5, 4)).des
    2
    """
    p = tuple(p)
    return StatRecord(
        des=des(p), asc=asc(p), pk=pk(p), val=val(p), dasc=dasc(p),
        ddes=ddes(p), rval=rval(p), fix=fix(p), pix=pix(p),
        first_ascent=first_ascent(p),
    )


STAT_FUNCTIONS = {
    "des": des, "asc": asc, "pk": pk, "val": val, "dasc": dasc,
    "ddes": ddes, "rval": rval, "fix": fix, "pix": pix,
}


def enumerate_class(n: int, klass: str = "all", cap: int | None = None):
    """Yield the permutations of 1..n in the given class, in lexicographic order.

    klass is one of "all", "desarrangements", "derangements".  Lengths above
    the enumeration cap (default 11, override via the cap argument or the
    DESARRANGE_CAP environment variable) raise CapExceededError.
    """
    if klass not in CLASSES:
        raise ValueError(f"unknown class {klass!r}; expected one of {CLASSES}")
    limit = cap if cap is not None else enumeration_cap()
    if n > limit:
        raise CapExceededError(f"n={n} exceeds enumeration cap {limit}")
    perms = itertools.permutations(range(1, n + 1))
    if klass == "all":
        yield from perms
    elif klass == "desarrangements":
        for p in perms:
            if is_desarrangement(p):
                yield p
    else:
        for p in perms:
            if is_derangement(p):
                yield p


# --- pattern primitives (length-3 patterns only) ---

_TRIPLE_PATTERNS = {}
for _t in itertools.permutations((1, 2, 3)):
    _TRIPLE_PATTERNS[_t] = _t


def triple_pattern(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Standardization of three distinct letters, as a length-3 pattern.

    >>> triple_pattern(5, 3, 4)
    (3, 1, 2)
    """
    return (1 + (a > b) + (a > c), 1 + (b > a) + (b > c), 1 + (c > a) + (c > b))


def contains_pattern(p, sigma) -> bool:
    """True iff some subsequence of p standardizes to the length-3 pattern sigma."""
    sigma = tuple(sigma)
    if sigma not in _TRIPLE_PATTERNS:
        raise ValueError(f"not a length-3 pattern: {sigma}")
    n = len(p)
    for i in range(n - 2):
        for j in range(i + 1, n - 1):
            for k in range(j + 1, n):
                if triple_pattern(p[i], p[j], p[k]) == sigma:
                    return True
    return False


# --- serialization ---

def perm_to_str(p) -> str:
    """Digit string for n <= 9, comma-separated otherwise; empty is "e".

    >>> perm_to_str((3, 1, 2, 5, 4))
    '31254'
    >>> perm_to_str(())
    'e'
    """
    if not p:
        return "e"
    if len(p) <= 9:
        return "".join(str(v) for v in p)
    return ",".join(str(v) for v in p)


def perm_from_str(s: str) -> Perm:
    """Inverse of perm_to_str.

    >>> perm_from_str('31254')
    (3, 1, 2, 5, 4)
    >>> perm_from_str('e')
    ()
    """
    s = s.strip()
    if s == "e" or s == "":
        return ()
    if "," in s:
        values = tuple(int(x) for x in s.split(","))
    else:
        values = tuple(int(ch) for ch in s)
    return check_permutation(values)
