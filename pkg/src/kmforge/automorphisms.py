"""Automorphism groups of finite groups by backtracking over generator images.

For a finite group every surjective endomorphism is injective, so the list
returned by :func:`automorphism_group` is the whole semigroup of surjective
endomorphisms.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from .caps import CapExceeded, get_caps
from .groups import FiniteGroup, GroupError, Subgroup, _greedy_generators, _mask

__all__ = [
    "Automorphism",
    "automorphism_group",
    "apply",
    "is_characteristic",
    "inner_automorphism",
    "identity_automorphism",
]


class Automorphism:
    """A bijection of element indices preserving the product."""

    __slots__ = ("parent", "map")

    def __init__(self, parent: FiniteGroup, mapping: Sequence[int]):
        self.parent = parent
        self.map = tuple(mapping)

    def __call__(self, x: int) -> int:
        return self.map[x]

    def __eq__(self, other):
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.parent is other.parent and self.map == other.map

    def __hash__(self):
        return hash(self.map)

    def __repr__(self):
        return f"Automorphism({list(self.map)})"

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self o other`` (apply ``other`` first)."""
        return Automorphism(self.parent, [self.map[other.map[x]] for x in range(len(self.map))])

    def inverse(self) -> "Automorphism":
        inv = [0] * len(self.map)
        for x, y in enumerate(self.map):
            inv[y] = x
        return Automorphism(self.parent, inv)

    def is_valid(self) -> bool:
        """Full ``n^2`` homomorphism check plus bijectivity."""
        G, m = self.parent, self.map
        if len(m) != G.order or m[0] != 0 or sorted(m) != list(range(G.order)):
            return False
        t = G.table
        return all(m[t[a][b]] == t[m[a]][m[b]] for a in range(G.order) for b in range(G.order))


def identity_automorphism(G: FiniteGroup) -> Automorphism:
    return Automorphism(G, range(G.order))


def inner_automorphism(G: FiniteGroup, g: int) -> Automorphism:
    """``x -> g^-1 x g``."""
    return Automorphism(G, [G.conj(x, g) for x in G.elements()])


def _words(G: FiniteGroup, gens: Sequence[int]) -> list[list[tuple[int, int]]]:
    """For each prefix ``gens[:j+1]``, the BFS spanning tree of the
    generated subgroup as (element, parent, generator position) edges."""
    t = G.table
    layers = []
    for j in range(len(gens)):
        seen = {0}
        order = [(0, -1, -1)]
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for k in range(j + 1):
                y = t[x][gens[k]]
                if y not in seen:
                    seen.add(y)
                    order.append((y, x, k))
                    queue.append(y)
        layers.append(order)
    return layers


def automorphism_group(G: FiniteGroup) -> list[Automorphism]:
    """Every automorphism of ``G``, sorted lexicographically by map.

    Generators are chosen greedily (lowest index outside the current
    closure).  Images are tried in index order, pruned by element order and
    by consistency of the partial homomorphism on each intermediate
    subgroup; survivors are verified with the full product check.
    """
    cached = G.cache.get("automorphisms")
    if cached is not None:
        return list(cached)
    cap = get_caps().aut_order
    if G.order > cap:
        raise CapExceeded(f"group too large for automorphism enumeration: {G.order} > {cap}")
    n = G.order
    t = G.table
    orders = G.element_orders
    gens = _greedy_generators(t, n)
    layers = _words(G, gens)
    results: list[tuple[int, ...]] = []
    images = [0] * len(gens)

    def build(j: int):
        # extend the map along the BFS tree of <gens[:j+1]>, then check
        # every (element, generator) edge for consistency
        phi = {0: 0}
        for y, x, k in layers[j][1:]:
            phi[y] = t[phi[x]][images[k]]
        if len(set(phi.values())) != len(phi):
            return None
        for x in phi:
            for k in range(j + 1):
                if phi[t[x][gens[k]]] != t[phi[x]][images[k]]:
                    return None
        return phi

    def search(j: int, prev_image_mask: int):
        if j == len(gens):
            phi = build(j - 1) if gens else {0: 0}
            results.append(tuple(phi[x] for x in range(n)))
            return
        want = orders[gens[j]]
        for h in range(1, n):
            if orders[h] != want or prev_image_mask >> h & 1:
                continue
            images[j] = h
            phi = build(j)
            if phi is not None:
                search(j + 1, _mask(phi.values()))

    search(0, 1)
    results.sort()
    auts = [Automorphism(G, m) for m in results]
    for a in auts:
        if not a.is_valid():
            raise AssertionError(f"backtracking produced a non-automorphism: {a}")
    G.cache["automorphisms"] = tuple(auts)
    return auts


def apply(phi: Automorphism, A: Subgroup) -> Subgroup:
    if phi.parent is not A.parent:
        raise GroupError("parent mismatch")
    m = phi.map
    return Subgroup(A.parent, _mask(m[a] for a in A.elements), [m[g] for g in A.generators])


def is_characteristic(A: Subgroup, auts: Iterable[Automorphism]) -> bool:
    """True iff every automorphism in ``auts`` maps ``A`` onto itself."""
    for phi in auts:
        m = phi.map
        if any(not A.mask >> m[g] & 1 for g in A.generators):
            return False
    return True
