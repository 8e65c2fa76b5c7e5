"""Explicitly enumerated permutation groups.

A :class:`PermGroup` keeps every element in a sorted tuple; anything that
talks about subsets of a group (cosets, classes, connection sets) does so
with sets of indices into that tuple. Heavy tables (multiplication,
squares, conjugation by generators) are built lazily with numpy.
"""

from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .perm import (
    Permutation,
    compose,
    format_cycles,
    identity,
    inverse,
    order as perm_order,
    parse_cycles,
    transposition_count,
)

DEFAULT_CLOSURE_CAP = math.factorial(10)
DEFAULT_ENUMERATION_CAP = 1000
INFINITY = math.inf


class GroupError(ValueError):
    pass


class CapExceeded(GroupError):
    pass


class NotInGroup(GroupError):
    pass


def enumeration_cap() -> int:
    """Subgroup-enumeration cap, overridable with ``CAYSUM_MAX_ORDER``."""
    raw = os.environ.get("CAYSUM_MAX_ORDER")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise GroupError(f"CAYSUM_MAX_ORDER must be an integer, got {raw!r}") from None
    return DEFAULT_ENUMERATION_CAP


class PermGroup:
    """A finite permutation group with all elements listed.

    ``elements[0]`` is always the identity, since it is the
    lexicographically smallest image sequence.
    """

    def __init__(self, degree: int, generators: Sequence[Permutation], elements: Sequence[Permutation],
                 ambient: PermGroup | None = None, ambient_indices=None):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self.ambient = ambient
        self.ambient_indices = None if ambient_indices is None else np.asarray(ambient_indices, dtype=np.int64)
        self._index = {p: i for i, p in enumerate(self.elements)}

    # -- basic container protocol --------------------------------------

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p) -> bool:
        return p in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.degree == other.degree and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.degree, self.elements))

    def __repr__(self) -> str:
        return f"<PermGroup degree={self.degree} order={self.order}>"

    @property
    def identity_index(self) -> int:
        return 0

    def index(self, p: Permutation) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise NotInGroup(f"{format_cycles(p)} is not in the group") from None

    def indices(self, items: Iterable) -> frozenset[int]:
        """Index set for a mix of permutations and raw indices."""
        out = set()
        for it in items:
            if isinstance(it, Permutation):
                out.add(self.index(it))
            else:
                i = int(it)
                if not 0 <= i < self.order:
                    raise NotInGroup(f"index {i} out of range")
                out.add(i)
        return frozenset(out)

    def members(self, idx: Iterable[int]) -> list[Permutation]:
        return [self.elements[i] for i in sorted(idx)]

    @cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple(format_cycles(p) for p in self.elements)

    @cached_property
    def fingerprint(self) -> str:
        return "|".join(sorted(self.labels))

    # -- numpy tables ---------------------------------------------------

    @cached_property
    def images(self) -> np.ndarray:
        """``(order, degree)`` array of 0-based images."""
        return np.array([p.images for p in self.elements], dtype=np.int64).reshape(self.order, self.degree) - 1

    @cached_property
    def _lookup_plan(self):
        n = self.degree
        if n <= 15:
            weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
            keys = self.images @ weights
            return ("keys", weights, keys)
        table = {bytes(row.astype(np.int8)): i for i, row in enumerate(self.images)}
        return ("dict", None, table)

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Indices of the permutations whose 0-based images are ``rows``."""
        rows = np.asarray(rows, dtype=np.int64)
        kind, weights, data = self._lookup_plan
        flat = rows.reshape(-1, self.degree)
        if kind == "keys":
            k = flat @ weights
            pos = np.searchsorted(data, k)
            pos = np.minimum(pos, len(data) - 1)
            if not np.array_equal(data[pos], k):
                raise NotInGroup("product escaped the group")
            out = pos
        else:
            try:
                out = np.array([data[bytes(r.astype(np.int8))] for r in flat], dtype=np.int64)
            except KeyError:
                raise NotInGroup("product escaped the group") from None
        return out.reshape(rows.shape[:-1])

    @cached_property
    def inverse_table(self) -> np.ndarray:
        E = self.images
        inv = np.empty_like(E)
        rows = np.arange(self.order)[:, None]
        inv[rows, E] = np.arange(self.degree)[None, :]
        return self.lookup(inv)

    @cached_property
    def square_table(self) -> np.ndarray:
        E = self.images
        return self.lookup(np.take_along_axis(E, E, axis=1))

    @cached_property
    def mult(self) -> np.ndarray:
        """``mult[i, j]`` is the index of ``elements[i] * elements[j]``."""
        E = self.images
        G = self.order
        dtype = np.int16 if G < 2 ** 15 else np.int32
        table = np.empty((G, G), dtype=dtype)
        chunk = max(1, 2_000_000 // max(1, G * self.degree))
        for start in range(0, G, chunk):
            block = E[start:start + chunk]
            # (e_i * e_j)(k) = e_i(e_j(k))
            prod = block[:, E]
            table[start:start + chunk] = self.lookup(prod)
        return table

    @cached_property
    def generator_indices(self) -> tuple[int, ...]:
        return tuple(self.index(g) for g in self.generators)

    @cached_property
    def conjugation_maps(self) -> list[np.ndarray]:
        """For each generator ``g``, the map ``x -> g x g^-1`` on indices."""
        E = self.images
        maps = []
        for g in self.generators:
            ga = np.array(g.images, dtype=np.int64) - 1
            gi = np.array(inverse(g).images, dtype=np.int64) - 1
            maps.append(self.lookup(ga[E[:, gi]]))
        return maps

    # -- derived structure ------------------------------------------------

    def conjugation_orbit(self, seed: Iterable[int]) -> frozenset[int]:
        seen = set(seed)
        queue = deque(seen)
        maps = self.conjugation_maps
        while queue:
            x = queue.popleft()
            for m in maps:
                y = int(m[x])
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    @cached_property
    def classes(self) -> tuple[ConjugacyClass, ...]:
        squares = set(self.square_table.tolist())
        seen = np.zeros(self.order, dtype=bool)
        out = []
        for i in range(self.order):
            if seen[i]:
                continue
            members = self.conjugation_orbit([i])
            seen[list(members)] = True
            flags = {m in squares for m in members}
            if len(flags) != 1:
                raise AssertionError("squareness is not constant on a conjugacy class")
            out.append(ConjugacyClass(self.elements[i], i, members, flags.pop()))
        return tuple(out)

    @cached_property
    def class_index(self) -> np.ndarray:
        cid = np.empty(self.order, dtype=np.int64)
        for k, c in enumerate(self.classes):
            cid[list(c.members)] = k
        return cid


@dataclass(frozen=True)
class ConjugacyClass:
    representative: Permutation
    rep_index: int
    members: frozenset[int]
    is_square_class: bool

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def label(self) -> str:
        return format_cycles(self.representative)


@dataclass(frozen=True)
class CosetTable:
    ambient: PermGroup
    subgroup: PermGroup
    side: str
    cosets: tuple[frozenset[int], ...]
    coset_of: tuple[int, ...]

    @property
    def index(self) -> int:
        return len(self.cosets)

    def transversal(self) -> list[int]:
        return [min(c) for c in self.cosets]


@dataclass(frozen=True)
class InvolutionProfile:
    involutions: frozenset[int]
    by_k: dict[int, frozenset[int]] = field(default_factory=dict)
    i_min: float = INFINITY


# -- construction -------------------------------------------------------


def _closure_tuples(degree: int, gens: list[tuple[int, ...]], cap: int) -> set[tuple[int, ...]]:
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(x[j] for j in g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise CapExceeded(f"group order exceeds cap {cap}")
        frontier = nxt
    return seen


def closure(degree: int, generators: Iterable[Permutation], max_order: int | None = None) -> PermGroup:
    """The group generated by ``generators`` (the trivial group if none)."""
    gens = list(generators)
    for g in gens:
        if g.degree != degree:
            raise GroupError(f"generator {format_cycles(g)} has degree {g.degree}, expected {degree}")
    cap = DEFAULT_CLOSURE_CAP if max_order is None else max_order
    tuples = _closure_tuples(degree, [tuple(v - 1 for v in g.images) for g in gens], cap)
    elements = sorted(Permutation(tuple(v + 1 for v in t)) for t in tuples)
    return PermGroup(degree, gens, elements)


def symmetric_group(n: int, max_order: int | None = None) -> PermGroup:
    gens = [parse_cycles(f"({i} {i + 1})", n) for i in range(1, n)]
    return closure(n, gens, max_order)


def alternating_group(n: int, max_order: int | None = None) -> PermGroup:
    gens = [parse_cycles(f"(1 2 {k})", n) for k in range(3, n + 1)]
    return closure(n, gens, max_order)


def cyclic_group(n: int) -> PermGroup:
    if n == 1:
        return closure(1, [])
    return closure(n, [Permutation(tuple(list(range(2, n + 1)) + [1]))])


def parse_group_spec(spec: str, max_order: int | None = None) -> PermGroup:
    """Parse ``S:n``, ``A:n`` or ``gens:n:<expr>;<expr>;...``."""
    parts = spec.strip().split(":", 2)
    try:
        kind = parts[0].strip()
        n = int(parts[1])
    except (IndexError, ValueError):
        raise GroupError(f"bad group spec {spec!r}") from None
    if n < 1:
        raise GroupError(f"bad degree in {spec!r}")
    if kind == "S" and len(parts) == 2:
        return symmetric_group(n, max_order)
    if kind == "A" and len(parts) == 2:
        return alternating_group(n, max_order)
    if kind == "gens" and len(parts) == 3:
        gens = [parse_cycles(e, n) for e in parts[2].split(";") if e.strip()]
        return closure(n, gens, max_order)
    raise GroupError(f"bad group spec {spec!r}")


def parse_generators(text: str, n: int) -> list[Permutation]:
    return [parse_cycles(e, n) for e in text.split(";") if e.strip()]


def is_subgroup(G: PermGroup, elements: Iterable[Permutation]) -> bool:
    elems = set(elements)
    if not elems or any(p.degree != G.degree for p in elems):
        return False
    if not all(p in G for p in elems):
        return False
    if identity(G.degree) not in elems:
        return False
    return all(compose(a, inverse(b)) in elems for a in elems for b in elems)


def subgroup(G: PermGroup, gens: Iterable[Permutation]) -> PermGroup:
    """``<gens>`` inside ``G``; raises if a generator lies outside ``G``."""
    gens = list(gens)
    for g in gens:
        if g.degree != G.degree:
            raise GroupError(f"degree mismatch: {format_cycles(g)} vs group degree {G.degree}")
        if g not in G:
            raise NotInGroup(f"{format_cycles(g)} is not in the ambient group")
    idx = _closure_indices(G, np.array([0]), [G.index(g) for g in gens])
    return subgroup_from_indices(G, idx, gens)


def subgroup_from_indices(G: PermGroup, idx, gens=None) -> PermGroup:
    idx = np.sort(np.asarray(list(idx) if not isinstance(idx, np.ndarray) else idx, dtype=np.int64))
    if gens is None:
        gens = _small_generating_set(G, idx)
    return PermGroup(G.degree, gens, [G.elements[i] for i in idx], ambient=G, ambient_indices=idx)


def ambient_indices(G: PermGroup, H: PermGroup) -> np.ndarray:
    """Sorted indices of ``H``'s elements inside ``G``."""
    if H.ambient is G and H.ambient_indices is not None:
        return H.ambient_indices
    if H.degree != G.degree:
        raise GroupError(f"degree mismatch: {H.degree} vs {G.degree}")
    return np.array(sorted(G.index(p) for p in H.elements), dtype=np.int64)


def _closure_indices(G: PermGroup, start: np.ndarray, gens: Sequence[int], whole_at_half: bool = False) -> np.ndarray:
    """Close ``start`` (a subgroup or {identity}) under right multiplication by ``gens``."""
    mask = np.zeros(G.order, dtype=bool)
    mask[start] = True
    mask[0] = True
    gens = np.asarray(list(gens), dtype=np.int64)
    if len(gens) == 0:
        return np.flatnonzero(mask)
    mult = G.mult
    frontier = np.flatnonzero(mask)
    count = len(frontier)
    half = G.order // 2
    while len(frontier):
        cand = mult[np.ix_(frontier, gens)].ravel()
        cand = np.unique(cand[~mask[cand]])
        mask[cand] = True
        count += len(cand)
        if whole_at_half and count > half:
            return np.arange(G.order)
        frontier = cand
    return np.flatnonzero(mask)


def _small_generating_set(G: PermGroup, idx: np.ndarray) -> list[Permutation]:
    """Greedy generating set: add the largest-order element not yet covered."""
    target = set(idx.tolist())
    orders = {i: perm_order(G.elements[i]) for i in target}
    candidates = sorted(target, key=lambda i: (-orders[i], i))
    gens: list[int] = []
    current = {0}
    for i in candidates:
        if len(current) == len(target):
            break
        if i in current:
            continue
        gens.append(i)
        current = set(_closure_indices(G, np.array(sorted(current)), gens).tolist())
    return [G.elements[i] for i in gens]


# -- cosets, classes, squares --------------------------------------------


def coset_table(G: PermGroup, H: PermGroup, side: str = "right") -> CosetTable:
    """Partition ``G`` into right cosets ``Hx`` or left cosets ``xH``.

    Cosets are ordered by their smallest member, so coset 0 is ``H``.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    h = ambient_indices(G, H)
    mult = G.mult
    if side == "right":
        labels = mult[h, :].min(axis=0)
    else:
        labels = mult[:, h].min(axis=1)
    labels = labels.astype(np.int64)
    leaders = np.unique(labels)
    coset_id = np.searchsorted(leaders, labels)
    cosets = [set() for _ in leaders]
    for g, c in enumerate(coset_id.tolist()):
        cosets[c].add(g)
    return CosetTable(G, H, side, tuple(frozenset(c) for c in cosets), tuple(coset_id.tolist()))


def conjugacy_classes(G: PermGroup) -> list[ConjugacyClass]:
    return list(G.classes)


def class_of(G: PermGroup, g: Permutation) -> ConjugacyClass:
    return G.classes[int(G.class_index[G.index(g)])]


def squares_set(G: PermGroup) -> frozenset[int]:
    return frozenset(G.square_table.tolist())


def is_square_free(G: PermGroup, S: Iterable) -> bool:
    return not (G.indices(S) & squares_set(G))


def is_normal_subset(G: PermGroup, S: Iterable) -> bool:
    s = G.indices(S)
    return all(set(int(m[x]) for x in s) <= s for m in G.conjugation_maps)


def is_normal_subgroup(G: PermGroup, H: PermGroup) -> bool:
    return is_normal_subset(G, ambient_indices(G, H).tolist())


def involution_profile(H: PermGroup) -> InvolutionProfile:
    by_k: dict[int, set[int]] = {}
    for i, p in enumerate(H.elements):
        if perm_order(p) == 2:
            by_k.setdefault(transposition_count(p), set()).add(i)
    invs = frozenset(i for s in by_k.values() for i in s)
    i_min = min(by_k) if by_k else INFINITY
    return InvolutionProfile(invs, {k: frozenset(v) for k, v in sorted(by_k.items())}, i_min)


# -- subgroup enumeration ------------------------------------------------


def _mask_key(mask: np.ndarray) -> bytes:
    return np.packbits(mask).tobytes()


def _cyclic_subgroups(G: PermGroup) -> list[tuple[int, np.ndarray]]:
    """One ``(generator index, element indices)`` pair per cyclic subgroup."""
    seen = set()
    out = []
    mult = G.mult
    for g in range(G.order):
        powers = [0]
        x = g
        while x != 0:
            powers.append(x)
            x = int(mult[x, g])
        mask = np.zeros(G.order, dtype=bool)
        mask[powers] = True
        key = _mask_key(mask)
        if key not in seen:
            seen.add(key)
            out.append((g, mask))
    return out


def _conjugates(G: PermGroup, mask: np.ndarray) -> list[np.ndarray]:
    """All distinct conjugates of the subgroup with membership ``mask``."""
    maps = G.conjugation_maps
    first = mask
    seen = {_mask_key(first): first}
    queue = deque([first])
    while queue:
        m = queue.popleft()
        idx = np.flatnonzero(m)
        for cmap in maps:
            new = np.zeros(G.order, dtype=bool)
            new[cmap[idx]] = True
            key = _mask_key(new)
            if key not in seen:
                seen[key] = new
                queue.append(new)
    return list(seen.values())


@dataclass
class _SubgroupClass:
    rep_mask: np.ndarray
    gens: list[int]
    members: list[np.ndarray]


def _subgroup_classes(G: PermGroup, max_order: int | None) -> list[_SubgroupClass]:
    cap = enumeration_cap() if max_order is None else max_order
    if G.order > cap:
        raise CapExceeded(f"group order {G.order} exceeds enumeration cap {cap}")
    cyclics = _cyclic_subgroups(G)
    known: dict[bytes, int] = {}
    classes: list[_SubgroupClass] = []

    def register(mask: np.ndarray, gens: list[int]):
        key = _mask_key(mask)
        if key in known:
            return
        conj = _conjugates(G, mask)
        cid = len(classes)
        for m in conj:
            known[_mask_key(m)] = cid
        classes.append(_SubgroupClass(mask, gens, conj))

    trivial = np.zeros(G.order, dtype=bool)
    trivial[0] = True
    register(trivial, [])
    # Every subgroup K is <M, c> for a maximal subgroup M of K and c in K \ M;
    # joining one representative per class with every cyclic subgroup
    # therefore reaches a conjugate of every K.
    done = 0
    while done < len(classes):
        cls = classes[done]
        done += 1
        base = cls.rep_mask
        base_idx = np.flatnonzero(base)
        for g, cmask in cyclics:
            if base[g]:
                continue
            gens = cls.gens + [g]
            idx = _closure_indices(G, base_idx, gens, whole_at_half=True)
            mask = np.zeros(G.order, dtype=bool)
            mask[idx] = True
            register(mask, gens)
    return classes


def _to_group(G: PermGroup, mask: np.ndarray, gens: list[int] | None = None) -> PermGroup:
    idx = np.flatnonzero(mask)
    gperms = None if gens is None else [G.elements[i] for i in gens]
    return subgroup_from_indices(G, idx, gperms)


def enumerate_subgroups(G: PermGroup, up_to_conjugacy: bool = False, max_order: int | None = None) -> list[PermGroup]:
    """All subgroups of ``G`` (or one per conjugacy class), ordered by
    ``(order, fingerprint)``. Class representatives are the members with the
    smallest fingerprint."""
    classes = _subgroup_classes(G, max_order)
    out = []
    for cls in classes:
        groups = [_to_group(G, m) for m in cls.members]
        if up_to_conjugacy:
            out.append(min(groups, key=lambda H: H.fingerprint))
        else:
            out.extend(groups)
    out.sort(key=lambda H: (H.order, H.fingerprint))
    return out


def subgroup_class_sizes(G: PermGroup, max_order: int | None = None) -> list[tuple[PermGroup, int]]:
    """``(representative, number of conjugates)`` per subgroup class."""
    out = []
    for cls in _subgroup_classes(G, max_order):
        groups = [_to_group(G, m) for m in cls.members]
        out.append((min(groups, key=lambda H: H.fingerprint), len(groups)))
    out.sort(key=lambda t: (t[0].order, t[0].fingerprint))
    return out


def normal_subgroups(G: PermGroup, max_order: int | None = None) -> list[PermGroup]:
    """Subgroups equal to all of their conjugates."""
    return [H for H, size in subgroup_class_sizes(G, max_order) if size == 1]
