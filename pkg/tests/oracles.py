"""Slow reference computations on plain Permutation objects.

Nothing here touches the index tables, coset tables or exact-cover search;
these functions exist to cross-check them.
"""

from __future__ import annotations

import itertools

from caysum.perm import Permutation, compose, identity, inverse


def all_perms(n):
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]


def generate(gens, n):
    seen = {identity(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def squares(elems):
    return frozenset(compose(g, g) for g in elems)


def classes(elems):
    left = set(elems)
    out = []
    while left:
        x = min(left)
        orbit = frozenset(compose(compose(g, x), inverse(g)) for g in elems)
        out.append(orbit)
        left -= orbit
    return out


def admissible_sets(elems):
    """Every normal square-free subset, from first principles."""
    sq = squares(elems)
    pool = [c for c in classes(elems) if not (c & sq)]
    out = []
    for r in range(len(pool) + 1):
        for combo in itertools.combinations(pool, r):
            out.append(frozenset().union(*combo))
    return out


def is_perfect_code(elems, S, C):
    """Direct check on the sum graph: x ~ y iff xy in S, x != y."""
    S = frozenset(S)
    C = frozenset(C)
    for a in C:
        for b in C:
            if a != b and compose(a, b) in S:
                return False
    for v in elems:
        if v in C:
            continue
        hits = sum(1 for c in C if compose(v, c) in S)
        if hits != 1:
            return False
    return True


def perfect_connection_sets(elems, H):
    return [S for S in admissible_sets(elems) if is_perfect_code(elems, S, H)]


def subgroups_by_pairs(elems, n):
    """Subgroups generated by at most two elements."""
    elems = sorted(elems)
    found = set()
    for a in elems:
        for b in elems:
            if b < a:
                continue
            found.add(generate([a, b], n))
    return found
