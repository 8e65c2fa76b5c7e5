"""Cayley sum graphs: vertices are group elements, x ~ y when xy lies in S."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .groups import PermGroup, squares_set


class ConnectionSetError(ValueError):
    pass


class NotNormal(ConnectionSetError):
    pass


class NotSquareFree(ConnectionSetError):
    pass


@dataclass(frozen=True, eq=False)
class CayleySumGraph:
    group: PermGroup
    connection_set: frozenset[int]
    adjacency: np.ndarray

    @property
    def order(self) -> int:
        return self.group.order

    def neighbors(self, v: int) -> list[int]:
        return np.flatnonzero(self.adjacency[v]).tolist()

    def edges(self) -> list[tuple[int, int]]:
        rows, cols = np.nonzero(np.triu(self.adjacency, k=1))
        return list(zip(rows.tolist(), cols.tolist()))


def check_connection_set(G: PermGroup, S: frozenset[int]) -> None:
    """Raise unless ``S`` is closed under conjugation and holds no squares."""
    for gen, cmap in zip(G.generators, G.conjugation_maps):
        for s in sorted(S):
            t = int(cmap[s])
            if t not in S:
                raise NotNormal(
                    f"connection set is not normal: conjugating {G.labels[s]} by {gen} gives {G.labels[t]}, "
                    f"outside S (class of {G.labels[G.classes[int(G.class_index[s])].rep_index]})"
                )
    bad = sorted(S & squares_set(G))
    if bad:
        s = bad[0]
        root = int(np.flatnonzero(G.square_table == s)[0])
        raise NotSquareFree(f"connection set contains the square {G.labels[s]} = ({G.labels[root]})^2")


def build(G: PermGroup, S: Iterable) -> CayleySumGraph:
    """Cayley sum graph of ``G`` with respect to ``S`` (validated first)."""
    s = G.indices(S)
    check_connection_set(G, s)
    in_s = np.zeros(G.order, dtype=bool)
    in_s[list(s)] = True
    adjacency = in_s[G.mult]
    assert not adjacency.diagonal().any(), "loop in a square-free Cayley sum graph"
    assert np.array_equal(adjacency, adjacency.T), "asymmetric adjacency for a normal connection set"
    assert (adjacency.sum(axis=1) == len(s)).all(), "vertex degree differs from |S|"
    return CayleySumGraph(G, s, adjacency)


def is_perfect_code(graph: CayleySumGraph, C: Iterable) -> bool:
    """Independent, and every vertex outside ``C`` has exactly one neighbour in it."""
    c = sorted(graph.group.indices(C))
    adj = graph.adjacency
    if adj[np.ix_(c, c)].any():
        return False
    outside = np.ones(graph.order, dtype=bool)
    outside[c] = False
    hits = adj[:, c].sum(axis=1)
    return bool((hits[outside] == 1).all())


def export_dot(graph: CayleySumGraph, highlight: Iterable = (), name: str = "CayS") -> str:
    """Undirected DOT text; highlighted vertices are filled."""
    G = graph.group
    marked = G.indices(highlight)
    lines = [f"graph {name} {{", "  node [shape=ellipse];"]
    for v in range(G.order):
        attrs = f'label="{G.labels[v]}"'
        if v in marked:
            attrs += ', style=filled, fillcolor="lightblue"'
        lines.append(f"  v{v} [{attrs}];")
    for a, b in graph.edges():
        lines.append(f"  v{a} -- v{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
