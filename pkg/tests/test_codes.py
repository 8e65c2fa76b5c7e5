import pytest

from caysum.codes import (
    admissible_connection_sets,
    brute_force_perfect,
    certificate_S,
    criterion_graph,
    criterion_index,
    criterion_transversal,
    decide_subgroup_perfect_code,
    lemma32_witness,
    lexmin_exact_cover,
    usable_classes,
)
from caysum.graph import NotNormal, build, is_perfect_code
from caysum.groups import (
    alternating_group,
    cyclic_group,
    enumerate_subgroups,
    parse_group_spec,
    subgroup,
    symmetric_group,
)
from caysum.perm import compose, inverse, parse_cycles

import oracles


def P(text, n):
    return parse_cycles(text, n)


@pytest.fixture(scope="module")
def C4():
    return cyclic_group(4)


@pytest.fixture(scope="module")
def C4_half(C4):
    return subgroup(C4, [P("(1 3)(2 4)", 4)])


def test_criteria_on_c4(C4, C4_half):
    S = [P("(1 2 3 4)", 4)]
    assert criterion_graph(C4, C4_half, S)
    assert criterion_transversal(C4, C4_half, S)
    assert criterion_index(C4, C4_half, S)


def test_empty_connection_set_whole_group(C4):
    for crit in (criterion_graph, criterion_transversal, criterion_index):
        assert crit(C4, C4, [])


def test_criteria_on_s3():
    S3 = symmetric_group(3)
    H = subgroup(S3, [P("(1 2)", 3)])
    transpositions = [P("(1 2)", 3), P("(1 3)", 3), P("(2 3)", 3)]
    assert not criterion_graph(S3, H, transpositions)
    A3 = alternating_group(3)
    # index 2 = |S| + 1 and S S^-1 = {1}, though {(1 2)} is not normal
    assert criterion_index(S3, A3, [P("(1 2)", 3)])
    assert criterion_transversal(S3, A3, [P("(1 2)", 3)])
    with pytest.raises(NotNormal):
        criterion_graph(S3, A3, [P("(1 2)", 3)])


def test_subgroup_minus_identity_is_never_a_transversal():
    S4 = symmetric_group(4)
    for H in enumerate_subgroups(S4):
        if H.order > 1:
            assert not criterion_transversal(S4, H, H.elements[1:])


def test_usable_classes_examples(C4, C4_half):
    S3 = symmetric_group(3)
    assert usable_classes(S3, subgroup(S3, [P("(1 2)", 3)])) == []
    assert usable_classes(S3, alternating_group(3)) == []
    labels = sorted(u.label for u in usable_classes(C4, C4_half))
    assert labels == ["(1 2 3 4)", "(1 4 3 2)"]
    for u in usable_classes(C4, C4_half):
        assert len(u.coset_hits) == u.cls.size


def test_decide_c4(C4, C4_half):
    cert = decide_subgroup_perfect_code(C4, C4_half)
    assert cert.verdict == "yes"
    assert cert.witness_S == ["(1 2 3 4)"]
    # every subset of C4 checked from first principles: exactly two connection sets work
    sets = oracles.perfect_connection_sets(C4.elements, C4_half.elements)
    assert sorted(sorted(map(str, S)) for S in sets) == [["(1 2 3 4)"], ["(1 4 3 2)"]]
    assert min(sorted(map(str, S)) for S in sets) == cert.witness_S


def test_decide_s3_transposition():
    S3 = symmetric_group(3)
    cert = decide_subgroup_perfect_code(S3, subgroup(S3, [P("(1 2)", 3)]))
    assert cert.verdict == "no"
    assert cert.refutation["mode"] == "lemma32"
    assert cert.refutation["lemma32_witness"]["x"] is not None
    assert cert.refutation["usable_classes"] == []
    assert oracles.perfect_connection_sets(S3.elements, [P("()", 3), P("(1 2)", 3)]) == []


@pytest.mark.parametrize("spec", ["S:3", "S:4", "A:4", "A:5", "gens:4:(1 2 3 4)"])
def test_whole_group_is_perfect_with_empty_set(spec):
    G = parse_group_spec(spec)
    cert = decide_subgroup_perfect_code(G, G)
    assert cert.verdict == "yes" and cert.witness_S == []


def test_lemma32_examples(C4, C4_half):
    S3 = symmetric_group(3)
    wit = lemma32_witness(S3, alternating_group(3))
    # the coset of transpositions; (2 3) is its smallest member
    assert wit.x == "(2 3)"
    assert not wit.all_square
    assert {e.z for e in wit.evidence} == {"(1 2)", "(1 3)", "(2 3)"}
    assert all(e.reason == "w-with-double-hit" for e in wit.evidence)

    S4 = symmetric_group(4)
    assert lemma32_witness(S4, subgroup(S4, [P("(1 2 3)", 4)])) is not None
    assert lemma32_witness(C4, C4_half) is None


def test_lemma32_coset_of_squares():
    # in S_5 every even permutation is a square, so the coset A_5 * x for
    # x in A_5 \ H is all squares whenever H is a proper subgroup of A_5
    S5 = symmetric_group(5)
    H = subgroup(S5, [P("(1 2 3 4 5)", 5)])
    wit = lemma32_witness(S5, H)
    assert wit is not None
    assert wit.all_square and wit.evidence == []


def test_lexmin_exact_cover():
    rows = {"a": frozenset({1, 2}), "b": frozenset({3}), "c": frozenset({1}), "d": frozenset({2, 3}), "e": frozenset({1, 2, 3})}
    sol, _ = lexmin_exact_cover({1, 2, 3}, rows)
    assert sol == ["a", "b"]
    sol, _ = lexmin_exact_cover({1, 2, 3}, {"x": frozenset({1, 2}), "y": frozenset({2, 3})})
    assert sol is None
    sol, _ = lexmin_exact_cover(set(), rows)
    assert sol == []


def _all_subgroup_pairs(specs):
    for spec in specs:
        G = parse_group_spec(spec)
        for H in enumerate_subgroups(G):
            yield spec, G, H


SMALL = ["S:3", "S:4", "A:4", "gens:4:(1 2 3 4);(1 3)", "gens:4:(1 2 3 4)", "gens:6:(1 2 3 4 5 6)"]


def test_three_criteria_agree_on_admissible_sets():
    for _, G, H in _all_subgroup_pairs(SMALL):
        for S in admissible_connection_sets(G):
            g = criterion_graph(G, H, S)
            assert g == criterion_transversal(G, H, S) == criterion_index(G, H, S)


def test_decision_matches_first_principles():
    for spec, G, H in _all_subgroup_pairs(SMALL):
        cert = decide_subgroup_perfect_code(G, H)
        sets = oracles.perfect_connection_sets(G.elements, H.elements)
        assert (cert.verdict == "yes") == bool(sets), (spec, H.fingerprint)
        if cert.verdict == "yes":
            S = certificate_S(G, cert)
            assert oracles.is_perfect_code(G.elements, [G.elements[i] for i in S], H.elements)
            assert G.order == H.order * (len(S) + 1)
            assert {frozenset(G.index(p) for p in s) for s in sets} == set(brute_force_perfect(G, H))


def test_lemma32_sound_on_small_groups():
    for _, G, H in _all_subgroup_pairs(SMALL + ["S:5", "A:5"]):
        if lemma32_witness(G, H) is not None:
            assert decide_subgroup_perfect_code(G, H).verdict == "no"


@pytest.mark.parametrize("spec", ["S:4", "S:5"])
def test_conjugation_invariance(spec):
    G = parse_group_spec(spec)
    verdicts = {H.fingerprint: decide_subgroup_perfect_code(G, H).verdict for H in enumerate_subgroups(G)}
    by_key = {}
    for H in enumerate_subgroups(G):
        by_key[frozenset(H.elements)] = verdicts[H.fingerprint]
    for H in enumerate_subgroups(G):
        for g in G.generators:
            conj = frozenset(compose(compose(g, h), inverse(g)) for h in H.elements)
            assert by_key[conj] == by_key[frozenset(H.elements)]


def test_witness_passes_graph_oracle_in_a4():
    A4 = alternating_group(4)
    H = subgroup(A4, [P("(1 2 3)", 4)])
    cert = decide_subgroup_perfect_code(A4, H)
    assert cert.verdict == "yes"
    assert cert.witness_S == ["(1 2)(3 4)"]
    S = certificate_S(A4, cert)
    assert is_perfect_code(build(A4, S), [A4.index(p) for p in H.elements])


def test_certificate_json_shape(C4, C4_half):
    d = decide_subgroup_perfect_code(C4, C4_half).to_dict()
    assert set(d) == {"verdict", "witness_S", "refutation"}
    S3 = symmetric_group(3)
    d = decide_subgroup_perfect_code(S3, alternating_group(3)).to_dict()
    assert d["witness_S"] is None
    ref = d["refutation"]
    assert ref["mode"] == "lemma32"
    assert ref["lemma32_witness"]["x"] == "(2 3)"
    assert {e["reason"] for e in ref["lemma32_witness"]["per_nonsquare"]} == {"w-with-double-hit"}
    assert all("w" in e for e in ref["lemma32_witness"]["per_nonsquare"])

