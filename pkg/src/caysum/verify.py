"""Exhaustive desk-scale sweeps over subgroups of S_n and A_n, plus checks of
the supporting permutation-group facts."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field

from .codes import decide_subgroup_perfect_code
from .groups import (
    INFINITY,
    PermGroup,
    alternating_group,
    closure,
    enumerate_subgroups,
    involution_profile,
    normal_subgroups,
    squares_set,
    subgroup_class_sizes,
    symmetric_group,
)
from .perm import (
    Permutation,
    compose,
    conjugate,
    cycle_type,
    format_cycles,
    from_cycles,
    inverse,
    involutions_commute_structural,
    is_even,
    is_involution,
    is_square_in_symmetric,
    parse_cycles,
    support,
)

FAMILIES = ("symmetric", "alternating")
HARD_MAX_N = 7
DEFAULT_MAX_N = 6


class VerificationError(ValueError):
    pass


@dataclass(frozen=True)
class SubgroupCase:
    tag: str
    i_min: float

    def i_min_json(self):
        return None if self.i_min == INFINITY else int(self.i_min)


def ambient(family: str, n: int, max_order: int | None = None) -> PermGroup:
    if family == "symmetric":
        return symmetric_group(n, max_order)
    if family == "alternating":
        return alternating_group(n, max_order)
    raise VerificationError(f"unknown family {family!r}")


def classify(H: PermGroup, G: PermGroup, family: str | None = None) -> SubgroupCase:
    """Which theorem of the sweep covers ``H``: trivial, whole-group,
    odd-order, or imin-1 / imin-2 / imin-gt2 by the smallest transposition
    count among its involutions."""
    prof = involution_profile(H)
    if H.order == 1:
        return SubgroupCase("trivial", prof.i_min)
    if H.order == G.order:
        return SubgroupCase("whole-group", prof.i_min)
    if H.order % 2 == 1:
        return SubgroupCase("odd-order", prof.i_min)
    k = prof.i_min
    if k == 1:
        if family == "alternating" or all(is_even(p) for p in H.generators):
            raise AssertionError("a subgroup of A_n cannot contain a single transposition")
        return SubgroupCase("imin-1", k)
    if k == 2:
        return SubgroupCase("imin-2", k)
    return SubgroupCase("imin-gt2", k)


@dataclass
class VerificationReport:
    family: str
    n: int
    up_to_conjugacy: bool
    rows: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    timing: float = 0.0

    @property
    def theorem_holds(self) -> bool:
        return bool(self.summary.get("theorem_holds"))

    def to_dict(self, with_timing: bool = True) -> dict:
        d = {
            "family": self.family,
            "n": self.n,
            "up_to_conjugacy": self.up_to_conjugacy,
            "rows": self.rows,
            "summary": self.summary,
        }
        if with_timing:
            d["timing"] = round(self.timing, 3)
        return d


_TRIVIAL_NOTE = "S would have to be G minus the identity, which contains squares"


def _row(G: PermGroup, H: PermGroup, family: str, class_size: int | None) -> dict:
    case = classify(H, G, family)
    cert = decide_subgroup_perfect_code(G, H)
    lemma32 = cert.refutation is not None and cert.refutation["lemma32_witness"] is not None
    row = {
        "fingerprint": H.fingerprint,
        "order": H.order,
        "generators": [format_cycles(g) for g in H.generators],
        "case": case.tag,
        "i_min": case.i_min_json(),
        "verdict": cert.verdict,
        "lemma32_found": lemma32,
        "witness_or_refutation": cert.witness_S if cert.is_perfect else cert.refutation,
    }
    if class_size is not None:
        row["class_size"] = class_size
    if case.tag == "trivial" and cert.verdict == "no":
        row["note"] = _TRIVIAL_NOTE
    return row


def verify_degree(family: str, n: int, up_to_conjugacy: bool = False, max_order: int | None = None) -> VerificationReport:
    t0 = time.perf_counter()
    G = ambient(family, n)
    if up_to_conjugacy:
        pairs = subgroup_class_sizes(G, max_order)
    else:
        pairs = [(H, None) for H in enumerate_subgroups(G, max_order=max_order)]
    report = VerificationReport(family, n, up_to_conjugacy)
    for H, size in pairs:
        report.rows.append(_row(G, H, family, size))
    report.rows.sort(key=lambda r: (r["order"], r["fingerprint"]))
    report.summary = summarize(report.rows, G.order)
    report.timing = time.perf_counter() - t0
    return report


def summarize(rows: list[dict], group_order: int) -> dict:
    perfect = [r for r in rows if r["verdict"] == "yes"]
    whole = [r for r in rows if r["order"] == group_order]
    proper_no = [r for r in rows if r["verdict"] == "no" and r["order"] != group_order]
    fired = [r for r in proper_no if r["lemma32_found"]]
    counterexamples = [
        {"fingerprint": r["fingerprint"], "order": r["order"], "case": r["case"], "witness_S": r["witness_or_refutation"]}
        for r in perfect if r["case"] != "whole-group"
    ]
    by_case: dict[str, dict] = {}
    for r in rows:
        c = by_case.setdefault(r["case"], {"total": 0, "perfect": 0})
        c["total"] += 1
        c["perfect"] += r["verdict"] == "yes"
    return {
        "total": len(rows),
        "perfect_count": len(perfect),
        "theorem_holds": len(perfect) == 1 and len(whole) == 1 and perfect[0] is whole[0],
        "lemma32_violations": sum(1 for r in rows if r["lemma32_found"] and r["verdict"] == "yes"),
        "lemma32_fired": len(fired),
        "non_perfect_proper": len(proper_no),
        "lemma32_fraction": round(len(fired) / len(proper_no), 6) if proper_no else None,
        "by_case": dict(sorted(by_case.items())),
        "counterexamples": counterexamples,
    }


def verify_family(family: str, n_min: int, n_max: int, up_to_conjugacy: bool = False,
                  allow_seven: bool = False, max_order: int | None = None) -> list[VerificationReport]:
    """One report per degree in ``n_min..n_max``.

    Degrees above 6 need ``allow_seven`` and run up to conjugacy only.
    """
    if family not in FAMILIES:
        raise VerificationError(f"unknown family {family!r}")
    limit = HARD_MAX_N if allow_seven else DEFAULT_MAX_N
    if not 3 <= n_min <= n_max <= limit:
        raise VerificationError(f"degree range {n_min}..{n_max} outside 3..{limit}")
    if n_max == 7 and not up_to_conjugacy:
        raise VerificationError("degree 7 sweeps run only up to conjugacy")
    if n_max == 7 and max_order is None:
        max_order = math.factorial(7)
    return [verify_degree(family, n, up_to_conjugacy, max_order) for n in range(n_min, n_max + 1)]


# -- preliminaries -----------------------------------------------------------


@dataclass
class LemmaCheck:
    lemma: str
    n: int
    passed: bool
    detail: str = ""
    counterexample: str | None = None
    expected_failure: bool = False

    def to_dict(self) -> dict:
        d = {"lemma": self.lemma, "n": self.n, "passed": self.passed, "detail": self.detail}
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        if self.expected_failure:
            d["expected_failure"] = True
        return d


@dataclass
class PreliminariesReport:
    n_max: int
    checks: list[LemmaCheck] = field(default_factory=list)
    timing: float = 0.0

    @property
    def all_passed(self) -> bool:
        return all(c.passed or c.expected_failure for c in self.checks)

    def to_dict(self, with_timing: bool = True) -> dict:
        d = {"n_max": self.n_max, "all_passed": self.all_passed, "checks": [c.to_dict() for c in self.checks]}
        if with_timing:
            d["timing"] = round(self.timing, 3)
        return d


def _all_perms(n: int) -> list[Permutation]:
    return [Permutation(tuple(p)) for p in itertools.permutations(range(1, n + 1))]


def _relabel(y: Permutation, x: Permutation) -> Permutation:
    return from_cycles([[y(i) for i in c] for c in x.cycles], x.degree)


def check_generation(n: int) -> list[LemmaCheck]:
    order = math.factorial(n)
    out = []
    adjacent = closure(n, [parse_cycles(f"({i} {i + 1})", n) for i in range(1, n)])
    out.append(LemmaCheck("adjacent-transpositions-generate", n, adjacent.order == order, f"order {adjacent.order}"))
    star = closure(n, [parse_cycles(f"(1 {i})", n) for i in range(2, n + 1)])
    out.append(LemmaCheck("star-transpositions-generate", n, star.order == order, f"order {star.order}"))

    long_cycle = Permutation(tuple(list(range(2, n + 1)) + [1]))
    bad = None
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            got = closure(n, [parse_cycles(f"({a} {b})", n), long_cycle]).order == order
            if got != (math.gcd(b - a, n) == 1):
                bad = bad or f"({a} {b})"
    out.append(LemmaCheck("transposition-plus-n-cycle-gcd", n, bad is None,
                          f"{n * (n - 1) // 2} pairs", bad))

    three_cycles = [from_cycles([c], n) for c in itertools.permutations(range(1, n + 1), 3) if c[0] == min(c)]
    alt = closure(n, three_cycles)
    out.append(LemmaCheck("three-cycles-generate-alternating", n, alt.order == order // 2, f"order {alt.order}"))

    A = alternating_group(n)
    invs = [p for p in A.elements if is_involution(p)]
    gen = closure(n, invs)
    ok = gen.order == A.order
    if n >= 5:
        out.append(LemmaCheck("involutions-generate-alternating", n, ok, f"order {gen.order}"))
    else:
        # below degree 5 the involutions of A_n only give the Klein group (n=4)
        # or nothing (n=3); recorded, not asserted
        out.append(LemmaCheck("involutions-generate-alternating", n, ok,
                              f"order {gen.order} vs {A.order}", None if ok else f"<I(A_{n})> has order {gen.order}",
                              expected_failure=not ok))
    return out


def check_squares(n: int) -> LemmaCheck:
    S = symmetric_group(n)
    sq = squares_set(S)
    even = frozenset(i for i, p in enumerate(S.elements) if is_even(p))
    if n <= 5:
        return LemmaCheck("squares-of-symmetric", n, sq == even, f"|squares| = {len(sq)}, |A_n| = {len(even)}")
    proper = sq < even
    sq_perms = {S.elements[i] for i in sq}
    ordered = sorted(sq_perms)
    closed = True
    witness = None
    for a in ordered:
        for b in ordered:
            c = compose(a, b)
            if c not in sq_perms:
                closed = False
                witness = f"{format_cycles(a)} * {format_cycles(b)} = {format_cycles(c)} is not a square"
                break
        if not closed:
            break
    marker = parse_cycles("(1 2)(3 4 5 6)", n)
    marker_ok = is_even(marker) and S.index(marker) not in sq
    ok = proper and not closed and marker_ok
    return LemmaCheck("squares-of-symmetric", n, ok,
                      f"|squares| = {len(sq)} < {len(even)}; closed={closed}; (1 2)(3 4 5 6) non-square={marker_ok}",
                      None if ok else witness)


def check_square_criterion(n: int) -> LemmaCheck:
    perms = _all_perms(n)
    brute = {compose(g, g) for g in perms}
    fast = {p for p in perms if is_square_in_symmetric(p)}
    return LemmaCheck("square-cycle-type-criterion", n, brute == fast, f"{len(brute)} squares")


def check_conjugation(n: int) -> LemmaCheck:
    perms = _all_perms(n)
    bad = None
    for x in perms:
        for y in perms:
            if conjugate(y, x) != _relabel(y, x):
                bad = f"y={format_cycles(y)}, x={format_cycles(x)}"
                break
        if bad:
            break
    return LemmaCheck("conjugation-relabels-cycles", n, bad is None, f"{len(perms) ** 2} pairs", bad)


def check_involution_commutation(n: int) -> LemmaCheck:
    invs = [p for p in _all_perms(n) if is_involution(p)]
    mismatches = 0
    odd_commuting = 0
    first = None
    for x in invs:
        for y in invs:
            direct = compose(x, y) == compose(y, x)
            if involutions_commute_structural(x, y) != direct:
                mismatches += 1
                first = first or f"x={format_cycles(x)}, y={format_cycles(y)}"
            if len(support(x) & support(y)) % 2 == 1 and direct:
                odd_commuting += 1
                first = first or f"odd overlap commutes: x={format_cycles(x)}, y={format_cycles(y)}"
    return LemmaCheck("commuting-involutions", n, mismatches == 0 and odd_commuting == 0,
                      f"{len(invs) ** 2} pairs, {mismatches} mismatches", first)


def check_class_swap(n: int) -> LemmaCheck:
    perms = _all_perms(n)
    invs = [p for p in perms if is_involution(p)]
    bad = None
    count = 0
    for x in invs:
        for a in perms:
            if x == inverse(a):
                continue
            count += 1
            t = cycle_type(compose(x, a))
            if t != cycle_type(compose(x, inverse(a))) or t != cycle_type(compose(a, x)):
                bad = f"x={format_cycles(x)}, a={format_cycles(a)}"
                break
        if bad:
            break
    return LemmaCheck("involution-product-classes", n, bad is None, f"{count} pairs", bad)


def check_simplicity(n: int) -> LemmaCheck:
    A = alternating_group(n)
    cap = max(A.order, 1000)
    normals = normal_subgroups(A, max_order=cap)
    orders = sorted(H.order for H in normals)
    return LemmaCheck("alternating-simple", n, orders == [1, A.order], f"normal subgroup orders {orders}")


def verify_preliminaries(n_max: int = 6, include_a7_simplicity: bool = False) -> PreliminariesReport:
    if not 3 <= n_max <= HARD_MAX_N:
        raise VerificationError(f"n_max must lie in 3..{HARD_MAX_N}")
    t0 = time.perf_counter()
    rep = PreliminariesReport(n_max)
    for n in range(3, n_max + 1):
        rep.checks.extend(check_generation(n))
        rep.checks.append(check_squares(n))
        if n <= 6:
            rep.checks.append(check_square_criterion(n))
            rep.checks.append(check_involution_commutation(n))
        if n <= 5:
            rep.checks.append(check_class_swap(n))
        if n <= 4:
            rep.checks.append(check_conjugation(n))
    if n_max >= 6:
        rep.checks.append(check_simplicity(6))
    if include_a7_simplicity and n_max >= 7:
        rep.checks.append(check_simplicity(7))
    rep.timing = time.perf_counter() - t0
    return rep
