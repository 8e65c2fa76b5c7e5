"""Permutations of {1, ..., n} as immutable values.

Points are 1-based everywhere a caller can see them. Products compose right to
left: ``p * q`` maps ``i`` to ``p(q(i))``, so ``q`` acts first.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, reduce

MAX_DEGREE = 32


class PermutationError(ValueError):
    pass


class CycleSyntaxError(PermutationError):
    pass


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of ``{1..degree}`` stored as its image sequence.

    ``images[i - 1]`` is the image of point ``i``. Ordering between
    permutations of equal degree is lexicographic on ``images``.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        n = len(images)
        if n < 1:
            raise PermutationError("degree must be at least 1")
        if n > MAX_DEGREE:
            raise PermutationError(f"degree {n} exceeds cap {MAX_DEGREE}")
        if sorted(images) != list(range(1, n + 1)):
            raise PermutationError(f"{images} is not a bijection of 1..{n}")
        object.__setattr__(self, "images", images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return inverse(self) ** (-k)
        result = identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = compose(result, base)
            base = compose(base, base)
            k >>= 1
        return result

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)!r}, n={self.degree})"

    def __str__(self) -> str:
        return format_cycles(self)

    @cached_property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        return cycle_decomposition(self)


def identity(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def from_cycles(cycles, n: int) -> Permutation:
    """Build the permutation whose disjoint cycles are ``cycles``.

    Cycles must be pairwise disjoint; use :func:`parse_cycles` to multiply
    overlapping ones.
    """
    images = list(range(1, n + 1))
    seen: set[int] = set()
    for cyc in cycles:
        cyc = [int(c) for c in cyc]
        for c in cyc:
            if not 1 <= c <= n:
                raise PermutationError(f"point {c} outside 1..{n}")
            if c in seen:
                raise PermutationError(f"point {c} repeated")
            seen.add(c)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a - 1] = b
    return Permutation(tuple(images))


def _check_degrees(p: Permutation, q: Permutation) -> None:
    if p.degree != q.degree:
        raise PermutationError(f"degree mismatch: {p.degree} vs {q.degree}")


def compose(p: Permutation, q: Permutation) -> Permutation:
    _check_degrees(p, q)
    pi = p.images
    return Permutation(tuple(pi[j - 1] for j in q.images))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.degree
    for i, j in enumerate(p.images, start=1):
        inv[j - 1] = i
    return Permutation(tuple(inv))


def conjugate(y: Permutation, x: Permutation) -> Permutation:
    """Return ``y x y^-1``."""
    _check_degrees(y, x)
    return compose(compose(y, x), inverse(y))


def cycle_decomposition(p: Permutation) -> tuple[tuple[int, ...], ...]:
    """Nontrivial cycles, each led by its smallest point, sorted by leader."""
    n = p.degree
    seen = [False] * (n + 1)
    cycles = []
    for start in range(1, n + 1):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        j = p(start)
        while j != start:
            cyc.append(j)
            seen[j] = True
            j = p(j)
        if len(cyc) > 1:
            cycles.append(tuple(cyc))
    return tuple(cycles)


def cycle_type(p: Permutation) -> tuple[int, ...]:
    """Cycle lengths including fixed points, sorted descending."""
    lengths = [len(c) for c in p.cycles]
    lengths += [1] * (p.degree - sum(lengths))
    return tuple(sorted(lengths, reverse=True))


def order(p: Permutation) -> int:
    return reduce(math.lcm, (len(c) for c in p.cycles), 1)


def parity(p: Permutation) -> str:
    flips = sum(len(c) - 1 for c in p.cycles)
    return "even" if flips % 2 == 0 else "odd"


def is_even(p: Permutation) -> bool:
    return parity(p) == "even"


def support(p: Permutation) -> frozenset[int]:
    return frozenset(i for i, j in enumerate(p.images, start=1) if i != j)


def is_identity(p: Permutation) -> bool:
    return all(i == j for i, j in enumerate(p.images, start=1))


def is_involution(p: Permutation) -> bool:
    return order(p) == 2


def transposition_count(p: Permutation) -> int:
    """Number of disjoint 2-cycles of an involution (0 for the identity)."""
    if order(p) > 2:
        raise PermutationError(f"{format_cycles(p)} has order {order(p)}, not an involution")
    return len(p.cycles)


def is_square_in_symmetric(p: Permutation) -> bool:
    """True iff ``p == h * h`` for some ``h`` in the full symmetric group.

    Uses the cycle-type test: for every even length, the number of cycles of
    that length must be even.
    """
    counts = Counter(len(c) for c in p.cycles)
    return all(cnt % 2 == 0 for length, cnt in counts.items() if length % 2 == 0)


def involutions_commute_structural(x: Permutation, y: Permutation) -> bool:
    """Decide ``xy == yx`` for involutions from their transposition blocks.

    Every 2-cycle of ``y`` is either a 2-cycle of ``x``, disjoint from the
    support of ``x``, or one half of a pair of ``y``-transpositions that
    rewires a pair of ``x``-transpositions, either as (a c)(b d) or as
    (a d)(b c) for x-cycles (a b), (c d).
    """
    for p in (x, y):
        if not is_involution(p):
            raise PermutationError(f"{format_cycles(p)} is not an involution")
    _check_degrees(x, y)

    x_pairs = {frozenset(c) for c in x.cycles}
    partner = {}
    for a, b in x.cycles:
        partner[a] = b
        partner[b] = a
    y_pairs = {frozenset(c) for c in y.cycles}

    shared = x_pairs & y_pairs
    remaining = y_pairs - shared
    # each rewired y-transposition (a c) with a, c in different x-cycles must
    # come with its companion (x(a) x(c)).
    for pair in remaining:
        a, c = tuple(pair)
        in_a, in_c = a in partner, c in partner
        if not in_a and not in_c:
            continue
        if in_a != in_c:
            return False
        companion = frozenset((partner[a], partner[c]))
        if companion not in remaining:
            return False
    return True


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int) -> Permutation:
    """Parse cycle notation such as ``"(1 2)(3 4 5)"`` or ``"()"``.

    Adjacent cycles are multiplied, rightmost first. Commas may separate
    points. A point repeated within a single cycle is an error.
    """
    src = text.strip()
    if not src:
        raise CycleSyntaxError("empty cycle expression")
    if src == "()":
        return identity(n)
    pos = 0
    result = identity(n)
    cycles = []
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        m = _CYCLE_RE.match(src, pos)
        if m is None:
            raise CycleSyntaxError(f"malformed cycle expression at offset {pos}: {text!r}")
        body = m.group(1).replace(",", " ").split()
        if len(body) < 2:
            raise CycleSyntaxError(f"cycle needs at least two points: {m.group(0)!r}")
        try:
            points = [int(b) for b in body]
        except ValueError:
            raise CycleSyntaxError(f"non-integer point in {m.group(0)!r}") from None
        if len(set(points)) != len(points):
            raise CycleSyntaxError(f"repeated point in {m.group(0)!r}")
        for pt in points:
            if not 1 <= pt <= n:
                raise CycleSyntaxError(f"point {pt} outside 1..{n}")
        cycles.append(points)
        pos = m.end()
    for points in cycles:
        result = compose(result, from_cycles([points], n))
    return result


def format_cycles(p: Permutation) -> str:
    if not p.cycles:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in p.cycles)
