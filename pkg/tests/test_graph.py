import random

import numpy as np
import pytest

from caysum.graph import NotNormal, NotSquareFree, build, export_dot, is_perfect_code
from caysum.groups import cyclic_group, parse_group_spec, symmetric_group
from caysum.perm import compose, inverse, parse_cycles

import oracles


def P(text, n):
    return parse_cycles(text, n)


@pytest.fixture(scope="module")
def C4():
    return cyclic_group(4)


def test_c4_graph(C4):
    g = build(C4, [P("(1 2 3 4)", 4)])
    assert g.order == 4
    assert len(g.edges()) == 2
    E = C4.elements
    edges = {frozenset((E[a], E[b])) for a, b in g.edges()}
    # brute force: x ~ y iff xy = (1 2 3 4)
    s = P("(1 2 3 4)", 4)
    expected = {frozenset((x, y)) for x in E for y in E if x != y and compose(x, y) == s}
    assert edges == expected


def test_empty_connection_set(C4):
    g = build(C4, [])
    assert not g.adjacency.any()
    assert is_perfect_code(g, range(4))


def test_transposition_graph_is_cubic():
    S3 = symmetric_group(3)
    g = build(S3, [P("(1 2)", 3), P("(1 3)", 3), P("(2 3)", 3)])
    assert (g.adjacency.sum(axis=1) == 3).all()


def test_build_rejects_bad_sets(C4):
    S3 = symmetric_group(3)
    with pytest.raises(NotNormal):
        build(S3, [P("(1 2)", 3)])
    with pytest.raises(NotSquareFree):
        build(C4, [P("(1 3)(2 4)", 4)])


def test_perfect_code_examples(C4):
    g = build(C4, [P("(1 2 3 4)", 4)])
    assert is_perfect_code(g, [P("()", 4), P("(1 3)(2 4)", 4)])
    assert not is_perfect_code(g, [P("()", 4)])


@pytest.mark.parametrize("spec", ["S:3", "S:4", "A:4", "gens:4:(1 2 3 4);(1 3)", "gens:6:(1 2 3 4 5 6)"])
def test_regularity_and_code_size(spec):
    G = parse_group_spec(spec)
    elems = G.elements
    rng = random.Random(7)
    for S in oracles.admissible_sets(elems):
        g = build(G, S)
        assert (g.adjacency.sum(axis=1) == len(S)).all()
        assert np.array_equal(g.adjacency, g.adjacency.T)
        for _ in range(20):
            C = [v for v in range(G.order) if rng.random() < 0.4]
            ok = is_perfect_code(g, C)
            assert ok == oracles.is_perfect_code(elems, S, [elems[i] for i in C])
            if ok:
                assert len(C) * (len(S) + 1) == G.order


def test_conjugating_code_and_connection_set_preserves_perfection():
    S4 = symmetric_group(4)
    E = S4.elements
    codes_checked = 0
    for S in oracles.admissible_sets(E):
        g = build(S4, S)
        for H in [[P("()", 4), P("(1 2)(3 4)", 4), P("(1 3)(2 4)", 4), P("(1 4)(2 3)", 4)],
                  [P("()", 4), P("(1 2 3)", 4), P("(1 3 2)", 4)]]:
            base = is_perfect_code(g, H)
            for x in E:
                conj = [compose(compose(x, h), inverse(x)) for h in H]
                conj_S = {compose(compose(x, s), inverse(x)) for s in S}
                assert is_perfect_code(build(S4, conj_S), conj) == base
            codes_checked += 1
    assert codes_checked > 0


def test_export_dot(C4):
    dot = export_dot(build(C4, [P("(1 2 3 4)", 4)]), highlight=[P("()", 4), P("(1 3)(2 4)", 4)])
    assert dot.count(" -- ") == 2
    assert dot.count("fillcolor") == 2
    assert 'label="(1 2 3 4)"' in dot
    assert dot == export_dot(build(C4, [P("(1 2 3 4)", 4)]), highlight=[P("()", 4), P("(1 3)(2 4)", 4)])
    two = build(cyclic_group(2), [])
    lines = export_dot(two).splitlines()
    assert sum(1 for line in lines if "label=" in line) == 2
    assert sum(1 for line in lines if " -- " in line) == 0
