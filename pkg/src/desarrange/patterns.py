"""
Pattern avoidance in desarrangements: brute-force class counts, closed-form
counts for every subset of the six length-3 patterns, the classical
sequences those counts realize, and the bijections that prove them.

Pattern sets are frozensets of length-3 patterns written as tuples; the
canonical listing order is 123, 132, 213, 231, 312, 321.
"""
from __future__ import annotations

import functools
import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

from . import perms
from .perms import (
    Perm, contains_pattern, enumerate_class, is_desarrangement, standardize,
    triple_pattern,
)

PATTERNS: tuple[Perm, ...] = (
    (1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1),
)
P123, P132, P213, P231, P312, P321 = PATTERNS

_HISTOGRAM_MAX = 9  # above this, counting falls back to streaming enumeration


class DomainError(ValueError):
    """Input outside a bijection's stated domain."""


def pattern_name(sigma) -> str:
    return "".join(str(v) for v in sigma)


def parse_patterns(text: str) -> frozenset[Perm]:
    """Parse "213,321" (or "{213,321}") into a pattern set."""
    text = text.strip().strip("{}")
    if not text:
        return frozenset()
    out = set()
    for chunk in text.split(","):
        sigma = tuple(int(ch) for ch in chunk.strip())
        if sigma not in PATTERNS:
            raise ValueError(f"not a length-3 pattern: {chunk.strip()!r}")
        out.add(sigma)
    return frozenset(out)


def patterns_label(patterns) -> str:
    return ",".join(pattern_name(s) for s in sorted(patterns))


def pattern_mask(patterns) -> int:
    return sum(1 << PATTERNS.index(s) for s in patterns)


def all_pattern_sets():
    """All 64 subsets, ordered by size then canonical pattern order."""
    for r in range(7):
        for combo in itertools.combinations(PATTERNS, r):
            yield frozenset(combo)


def complement_patterns(patterns) -> frozenset[Perm]:
    return frozenset(tuple(4 - v for v in s) for s in patterns)


def avoids(p, patterns) -> bool:
    """True iff no subsequence of p standardizes to a pattern in the set."""
    return all(not contains_pattern(p, sigma) for sigma in patterns)


def contains_mask(p) -> int:
    """Bitmask over PATTERNS of which patterns occur in p."""
    n = len(p)
    mask = 0
    idx = PATTERNS.index
    for i in range(n - 2):
        a = p[i]
        for j in range(i + 1, n - 1):
            b = p[j]
            for k in range(j + 1, n):
                mask |= 1 << idx(triple_pattern(a, b, p[k]))
                if mask == 63:
                    return 63
    return mask


@functools.lru_cache(maxsize=None)
def _mask_histogram(n: int, klass: str) -> dict[int, int]:
    counts = Counter()
    for p in enumerate_class(n, klass):
        counts[contains_mask(p)] += 1
    return dict(counts)


@functools.lru_cache(maxsize=None)
def _report_histogram(n: int) -> dict[tuple[int, bool, int, int], int]:
    """Counter over S_n keyed (containment mask, is desarrangement, fix, pix)."""
    counts = Counter()
    for p in enumerate_class(n, "all"):
        counts[(contains_mask(p), is_desarrangement(p), perms.fix(p), perms.pix(p))] += 1
    return dict(counts)


def count_class(n: int, patterns, klass: str = "desarrangements") -> int:
    """Brute-force size of the avoidance class within the given permutation class."""
    patterns = frozenset(patterns)
    if n <= _HISTOGRAM_MAX:
        mset = pattern_mask(patterns)
        return sum(c for m, c in _mask_histogram(n, klass).items() if m & mset == 0)
    return sum(1 for p in enumerate_class(n, klass) if avoids(p, patterns))


# --- classical sequences (indexing pinned to the tables in use) ---

SEQUENCE_IDS = ("catalan", "fine", "jacobsthal", "fibonacci", "a_seq", "derangement")


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def fine(n: int) -> int:
    """Fine numbers with F_0 = 0, F_1 = 1, F_2 = 0, ... via C_m = 2F_{m+1} + F_m."""
    if n == 0:
        return 0
    f = 1
    for m in range(1, n):
        f = (catalan(m) - f) // 2
    return f


def jacobsthal(n: int) -> int:
    a, b = 0, 1  # J_0, J_1
    for _ in range(n):
        a, b = b, b + 2 * a
    return a


def fibonacci(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def a_seq(n: int) -> int:
    """a_0 = 1 and a_{m+1} = C_m - a_m.

    The recurrence gives a_11 = 13035; a printed table elsewhere repeats
    3761 at index 11, which the recurrence (and brute force over the
    213-avoiding desarrangements of length 11) contradicts.
    """
    a = 1
    for m in range(n):
        a = catalan(m) - a
    return a


def derangement(n: int) -> int:
    d = 1
    for m in range(1, n + 1):
        d = m * d + (-1) ** m
    return d


def sequence(tag: str, n: int) -> int:
    if n < 0:
        raise ValueError("sequence index must be non-negative")
    try:
        fn = {"catalan": catalan, "fine": fine, "jacobsthal": jacobsthal,
              "fibonacci": fibonacci, "a_seq": a_seq, "derangement": derangement}[tag]
    except KeyError:
        raise ValueError(f"unknown sequence {tag!r}; have {SEQUENCE_IDS}") from None
    return fn(n)


# --- closed-form counts for all 64 pattern subsets ---
#
# Values at n <= 2 are 1, 0, 1 for every subset (the only permutations are
# too short to contain a length-3 pattern, and 21 is a desarrangement).
# The dispatch below applies for n >= 3.  The handful of subsets containing
# {123, 321} that no other rule covers die out at n >= 5; their n = 3, 4
# values were computed by brute force once and are frozen here.

_EXPLICIT_FORMULAS = {
    frozenset(): derangement,
    frozenset({P123}): lambda n: fine(n + 1),
    frozenset({P132}): lambda n: fine(n + 1),
    frozenset({P231}): lambda n: fine(n + 1),
    frozenset({P213}): a_seq,
    frozenset({P312}): a_seq,
    frozenset({P321}): lambda n: catalan(n - 1),
    frozenset({P132, P321}): lambda n: n - 1,
    frozenset({P132, P231, P321}): lambda n: n - 1,
    frozenset({P132, P231}): lambda n: 2 ** (n - 2),
    frozenset({P231, P321}): lambda n: 2 ** (n - 2),
    frozenset({P312, P321}): lambda n: 2 ** (n - 3),
    frozenset({P123, P213}): lambda n: jacobsthal(n - 1),
    frozenset({P132, P213}): lambda n: jacobsthal(n - 1),
    frozenset({P213, P231}): lambda n: jacobsthal(n - 1),
    frozenset({P132, P312}): lambda n: jacobsthal(n - 1),
    frozenset({P231, P312}): lambda n: jacobsthal(n - 1),
    frozenset({P123, P132}): lambda n: (2 ** (n + 1) + (7 - 3 * n) * (-1) ** n) // 9,
    frozenset({P123, P231}): lambda n: (2 * n * (n - 1) + (5 - 2 * n) * (-1) ** n + 3) // 8,
    frozenset({P123, P312}): lambda n: ((n - 1) ** 2 + 3) // 4,  # ceil((n-1)^2 / 4)
    frozenset({P123, P132, P231}): lambda n: n - 1 if n % 2 else 1,
    frozenset({P123, P132, P312}): lambda n: n // 2,
    frozenset({P123, P231, P312}): lambda n: n // 2,
    frozenset({P123, P213, P231}): lambda n: n // 2,
    frozenset({P132, P213, P231}): lambda n: n // 2,
    frozenset({P132, P231, P312}): lambda n: n // 2,
    frozenset({P123, P132, P213}): lambda n: fibonacci(n - 1),
    frozenset({P231, P312, P321}): lambda n: fibonacci(n - 1),
    # one element for every n >= 3: the decreasing permutation when n is
    # even, and n(n-1)...312 resp. (n-1)...21n when n is odd
    frozenset({P123, P132, P231, P213}): lambda n: 1,
    frozenset({P123, P132, P231, P312}): lambda n: 1,
}

_ERDOS_SZEKERES_SMALL = {
    # subsets containing {123, 321} not covered elsewhere: (value at n=3, at n=4)
    frozenset({P123, P321}): (2, 2),
    frozenset({P123, P132, P321}): (2, 0),
    frozenset({P123, P231, P321}): (2, 1),
    frozenset({P123, P312, P321}): (1, 1),
    frozenset({P123, P132, P231, P321}): (2, 0),
    frozenset({P123, P231, P312, P321}): (1, 1),
}


def closed_form_count(n: int, patterns) -> int:
    """d_n of the avoidance class, by formula dispatch (no enumeration)."""
    patterns = frozenset(patterns)
    if not patterns <= set(PATTERNS):
        raise ValueError("patterns must be length-3 patterns")
    if n < 0:
        raise ValueError("n must be non-negative")
    if n <= 2:
        return (1, 0, 1)[n]
    if patterns in _EXPLICIT_FORMULAS:
        return _EXPLICIT_FORMULAS[patterns](n)
    if {P213, P312} <= patterns:
        # only the decreasing permutation survives, on even lengths
        return 1 if n % 2 == 0 and P321 not in patterns else 0
    if {P213, P321} <= patterns:
        # only n12...(n-1) survives; it contains 312 always, and 123 once n >= 4
        return 1 if P312 not in patterns and (P123 not in patterns or n == 3) else 0
    if {P132, P312, P321} <= patterns:
        # only 2134...n survives; it contains 213 always, and 123 once n >= 4
        return 1 if P213 not in patterns and (P123 not in patterns or n == 3) else 0
    small = _ERDOS_SZEKERES_SMALL[patterns]
    return small[n - 3] if n <= 4 else 0


# --- proof bijections ---

def _require(cond: bool, message: str):
    if not cond:
        raise DomainError(message)


def _desarr_avoiding(p, patterns, what: str):
    _require(is_desarrangement(p), f"{what}: not a desarrangement")
    _require(avoids(p, patterns), f"{what}: does not avoid {patterns_label(patterns)}")


def _insert_one_forward(p):
    _require(len(p) >= 1, "domain is nonempty 321-avoiding permutations")
    _require(avoids(p, {P321}), "input must avoid 321")
    lifted = [v + 1 for v in p]
    return (lifted[0], 1, *lifted[1:])


def _insert_one_inverse(q):
    _desarr_avoiding(q, {P321}, "inverse domain")
    _require(len(q) >= 2, "inverse domain has length >= 2")
    _require(q[1] == 1, "321-avoiding desarrangements carry 1 in position 2")
    return tuple(v - 1 for v in q if v != 1)


def _prepend_max_forward(p):
    _require(avoids(p, {P213}), "input must avoid 213")
    if is_desarrangement(p):
        return tuple(p)
    return (len(p) + 1, *p)


def _prepend_max_inverse(q):
    _desarr_avoiding(q, {P213}, "inverse domain")
    _require(len(q) >= 1, "inverse of the prepend branch needs a nonempty input")
    _require(q[0] == len(q), "213-avoiding desarrangements start with their maximum")
    return q[1:]


def _prepend_lift_forward(p):
    _require(avoids(p, {P312}), "input must avoid 312")
    if is_desarrangement(p):
        return tuple(p)
    head = p[0]
    lifted = tuple(v + 1 if v > head else v for v in p)
    return (head + 1, *lifted)


def _prepend_lift_inverse(q):
    _desarr_avoiding(q, {P312}, "inverse domain")
    _require(len(q) >= 2, "inverse of the lift branch needs length >= 2")
    _require(q[0] == q[1] + 1, "312-avoiding desarrangements have p1 = p2 + 1")
    pivot = q[1]
    return tuple(v - 1 if v > pivot else v for v in q[1:])


def _toggle_max(p):
    _require(len(p) >= 1, "needs a nonempty permutation")
    _require(avoids(p, {P132, P231}), "input must avoid 132 and 231")
    n = len(p)
    if p[0] == n:
        return (*p[1:], p[0])
    _require(p[-1] == n, "class members carry n at an end")
    return (p[-1], *p[:-1])


def _swap_first_two(p):
    _require(len(p) >= 2, "needs length >= 2")
    _require(avoids(p, {P231, P321}), "input must avoid 231 and 321")
    return (p[1], p[0], *p[2:])


def _strip_21_forward(p):
    _desarr_avoiding(p, {P312, P321}, "domain")
    _require(len(p) >= 2, "needs length >= 2")
    _require(p[0] == 2 and p[1] == 1, "class members start 2 1")
    return standardize(p[2:])


def _strip_21_inverse(q):
    _require(avoids(q, {P312, P321}), "input must avoid 312 and 321")
    return (2, 1, *(v + 2 for v in q))


def _fib_left_trim_forward(p):
    _desarr_avoiding(p, {P123, P132, P213}, "domain")
    _require(len(p) >= 3, "defined for length >= 3")
    if p[-2:] == (2, 1):
        return standardize(p[:-2])
    return standardize(p[:-1])


def _fib_left_trim_inverse(q, grow: int):
    _desarr_avoiding(q, {P123, P132, P213}, "inverse domain")
    if grow == 2:
        return (*(v + 2 for v in q), 2, 1)
    _require(len(q) >= 2, "the one-letter branch needs length >= 2")
    if q[-2] == 1:
        return (*(v + 1 for v in q), 1)
    _require(q[-1] == 1, "class members carry 1 in one of the last two positions")
    return (*(v + 1 if v >= 2 else v for v in q), 2)


def _fib_right_trim_forward(p):
    _desarr_avoiding(p, {P231, P312, P321}, "domain")
    _require(len(p) >= 3, "defined for length >= 3")
    n = len(p)
    if p[-2:] == (n, n - 1):
        return p[:-2]
    _require(p[-1] == n, "class members end with n or n(n-1)")
    return p[:-1]


def _fib_right_trim_inverse(q, grow: int):
    _desarr_avoiding(q, {P231, P312, P321}, "inverse domain")
    m = len(q)
    if grow == 2:
        return (*q, m + 2, m + 1)
    return (*q, m + 1)


@dataclass(frozen=True)
class Bijection:
    name: str
    forward: callable
    inverse: callable
    graded: bool  # inverse needs grow in {1, 2} to choose the target length
    description: str


BIJECTIONS = {
    b.name: b for b in [
        Bijection("321_insert", _insert_one_forward, _insert_one_inverse, False,
                  "lift letters by 1 and insert 1 after the first letter: "
                  "321-avoiders of length n-1 onto 321-avoiding desarrangements"),
        Bijection("213_prepend", _prepend_max_forward, _prepend_max_inverse, False,
                  "prepend n+1 to non-desarrangements (identity on desarrangements); "
                  "inverse strips the leading maximum"),
        Bijection("312_prepend", _prepend_lift_forward, _prepend_lift_inverse, False,
                  "lift letters above p1 and prepend p1+1 to non-desarrangements; "
                  "inverse undoes the lift"),
        Bijection("132_231_toggle", _toggle_max, _toggle_max, False,
                  "move n between the ends: swaps desarrangements and "
                  "non-desarrangements within the 132,231-avoiders"),
        Bijection("231_321_swap", _swap_first_two, _swap_first_two, False,
                  "swap the first two letters within the 231,321-avoiders"),
        Bijection("312_321_strip", _strip_21_forward, _strip_21_inverse, False,
                  "drop the forced 21 prefix and standardize"),
        Bijection("123_132_213_trim", _fib_left_trim_forward, _fib_left_trim_inverse, True,
                  "drop the final letter, or the final 21, and standardize"),
        Bijection("231_312_321_trim", _fib_right_trim_forward, _fib_right_trim_inverse, True,
                  "drop a final n, or a final n(n-1)"),
    ]
}


def bijection(name: str, p, direction: str = "forward", grow: int | None = None) -> Perm:
    """Apply a named proof bijection.

    For the two trim maps the image lives in a union of two lengths, so the
    inverse direction needs grow=1 or grow=2 to say how much longer the
    preimage is.
    """
    if name not in BIJECTIONS:
        raise ValueError(f"unknown bijection {name!r}; have {sorted(BIJECTIONS)}")
    if direction not in ("forward", "inverse"):
        raise ValueError("direction must be forward or inverse")
    b = BIJECTIONS[name]
    p = tuple(p)
    if direction == "forward":
        return b.forward(p)
    if b.graded:
        if grow not in (1, 2):
            raise ValueError(f"{name} inverse needs grow=1 or grow=2")
        return b.inverse(p, grow)
    return b.inverse(p)


def simion_schmidt(p) -> Perm:
    """The classic 123-avoiding to 132-avoiding bijection.

    Left-to-right minima stay put; every other position receives the
    smallest unused value exceeding the running minimum.
    """
    _require(avoids(p, {P123}), "input must avoid 123")
    used = set()
    out = []
    cur_min = len(p) + 1
    for v in p:
        if v < cur_min:
            cur_min = v
            out.append(v)
        else:
            c = cur_min + 1
            while c in used:
                c += 1
            out.append(c)
        used.add(out[-1])
    return tuple(out)


def simion_schmidt_inverse(q) -> Perm:
    """Inverse map: non-minima receive the largest unused value instead."""
    _require(avoids(q, {P132}), "input must avoid 132")
    n = len(q)
    used = set()
    out = []
    cur_min = n + 1
    for v in q:
        if v < cur_min:
            cur_min = v
            out.append(v)
        else:
            c = n
            while c in used:
                c -= 1
            out.append(c)
        used.add(out[-1])
    return tuple(out)


# --- derangement comparison and the pix/fix conjecture ---

COUNTS_THEOREM_SETS = tuple(frozenset(parse_patterns(s)) for s in (
    "132", "132,312", "132,321", "213,231", "123,132,312", "123,213,231",
    "123,312,321", "132,312,321", "213,231,312", "213,231,321",
))

PIXFIX_CONJECTURE_SETS = tuple(s for s in COUNTS_THEOREM_SETS
                               if s != frozenset({P132}))


@dataclass(frozen=True)
class PatternSetEvidence:
    patterns: str
    counts_match: bool        # d_n == derangement count for all checked n
    pixfix_match: bool        # pix and fix distributions agree on S_n(Pi)
    in_counts_theorem: bool
    in_pixfix_conjecture: bool


@dataclass
class EquidistributionReport:
    n_max: int
    entries: list[PatternSetEvidence] = field(default_factory=list)

    @property
    def counts_list_exact(self) -> bool:
        return all(e.counts_match == e.in_counts_theorem for e in self.entries)

    @property
    def pixfix_list_exact(self) -> bool:
        return all(e.pixfix_match == e.in_pixfix_conjecture for e in self.entries)

    def entry(self, patterns) -> PatternSetEvidence:
        label = patterns_label(frozenset(patterns))
        return next(e for e in self.entries if e.patterns == label)

    def to_json(self) -> dict:
        return {
            "n_max": self.n_max,
            "counts_list_exact": self.counts_list_exact,
            "pixfix_list_exact": self.pixfix_list_exact,
            "entries": [vars(e) for e in self.entries],
        }


def equidistribution_report(n_max: int = 8) -> EquidistributionReport:
    """Evidence for the derangement-count theorem and the pix/fix conjecture.

    For every pattern set with 1 <= |Pi| <= 3, checks for all n <= n_max
    whether desarrangement and derangement avoidance counts agree, and
    whether the pix and fix distributions over S_n(Pi) agree.  Evidence
    only: agreement up to n_max proves nothing beyond it.
    """
    report = EquidistributionReport(n_max=n_max)
    hists = {n: _report_histogram(n) for n in range(n_max + 1)}
    for size in (1, 2, 3):
        for combo in itertools.combinations(PATTERNS, size):
            pats = frozenset(combo)
            mset = pattern_mask(pats)
            counts_ok = True
            pixfix_ok = True
            for n in range(n_max + 1):
                d = dtil = 0
                fix_dist = Counter()
                pix_dist = Counter()
                for (m, isdes, fx, px), c in hists[n].items():
                    if m & mset:
                        continue
                    if isdes:
                        d += c
                    if fx == 0:
                        dtil += c
                    fix_dist[fx] += c
                    pix_dist[px] += c
                if d != dtil:
                    counts_ok = False
                if fix_dist != pix_dist:
                    pixfix_ok = False
            report.entries.append(PatternSetEvidence(
                patterns=patterns_label(pats),
                counts_match=counts_ok,
                pixfix_match=pixfix_ok,
                in_counts_theorem=pats in COUNTS_THEOREM_SETS,
                in_pixfix_conjecture=pats in PIXFIX_CONJECTURE_SETS,
            ))
    return report
