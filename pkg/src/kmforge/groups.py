"""Finite groups on element indices and their subgroup calculus.

Elements of a :class:`FiniteGroup` are the integers ``0..n-1`` with the
identity at index 0.  Subgroups are explicit element sets (kept both as a
sorted tuple and as an ``int`` bitmask for fast containment tests).

Permutations are tuples ``p`` with ``p[i]`` the image of ``i``; products act
left to right, ``(a*b)(i) = b(a(i))``.
"""
from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Optional, Sequence

import numpy as np

from .caps import CapExceeded, get_caps

__all__ = [
    "GroupError",
    "FiniteGroup",
    "Subgroup",
    "NOT_SOLVABLE",
    "group_from_permutations",
    "group_from_cayley",
    "subgroup_generate",
    "normal_closure",
    "join",
    "intersect",
    "index",
    "is_normal",
    "normal_core",
    "quotient",
    "commutator_subgroup",
    "derived_series",
    "derived_length",
    "conjugacy_classes",
    "all_subgroups",
    "normal_subgroups",
    "maximal_subgroups",
    "frattini_subgroup",
    "p_rank",
    "is_prime_power_of",
]

NOT_SOLVABLE = "not solvable"


class GroupError(ValueError):
    """Malformed group input or an operation applied outside its domain."""


def _mask(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def _bits(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _cycle_string(perm: Sequence[int]) -> str:
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        j = perm[start]
        while j != start:
            cyc.append(j)
            seen[j] = True
            j = perm[j]
        cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "()"


class FiniteGroup:
    """A finite group given by its complete multiplication table.

    ``generators`` is a tuple of element indices generating the group; for
    permutation input these are the input generators (``g0, g1, ...``).
    Instances are immutable and compare by identity.
    """

    def __init__(self, table, inverse, generators, labels=None, name=None, permutations=None):
        self.table: list[list[int]] = table
        self.inverse: tuple[int, ...] = tuple(inverse)
        self.order: int = len(table)
        self.generators: tuple[int, ...] = tuple(generators)
        self.labels: Optional[tuple[str, ...]] = tuple(labels) if labels is not None else None
        self.name = name
        self.permutations = permutations
        self._orders: Optional[tuple[int, ...]] = None
        self.cache: dict = {}

    def __repr__(self):
        name = f" {self.name}" if self.name else ""
        return f"<FiniteGroup{name} of order {self.order}>"

    def __len__(self):
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, a: int, g: int) -> int:
        """``g^-1 a g``."""
        t = self.table
        return t[t[self.inverse[g]][a]][g]

    def commutator(self, a: int, b: int) -> int:
        """``[a, b] = a^-1 b^-1 a b``."""
        t, inv = self.table, self.inverse
        return t[t[t[inv[a]][inv[b]]][a]][b]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse[a], -k
        r = 0
        t = self.table
        for _ in range(k):
            r = t[r][a]
        return r

    def element_order(self, a: int) -> int:
        return self.element_orders[a]

    @property
    def element_orders(self) -> tuple[int, ...]:
        if self._orders is None:
            t = self.table
            orders = []
            for a in range(self.order):
                k, x = 1, a
                while x != 0:
                    x = t[x][a]
                    k += 1
                orders.append(k)
            self._orders = tuple(orders)
        return self._orders

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels is not None else str(a)

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in self.generators for b in self.generators)

    @property
    def whole(self) -> "Subgroup":
        return Subgroup(self, (1 << self.order) - 1, self.generators)

    @property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, 1, ())


class Subgroup:
    """A subgroup of ``parent`` stored as an explicit element set.

    Equality and hashing use the parent's identity and the element set;
    ``generators`` is informational (the set is its closure).
    """

    __slots__ = ("parent", "mask", "generators", "_elements")

    def __init__(self, parent: FiniteGroup, mask: int, generators: Sequence[int]):
        self.parent = parent
        self.mask = mask
        self.generators = tuple(generators)
        self._elements: Optional[tuple[int, ...]] = None

    @property
    def elements(self) -> tuple[int, ...]:
        if self._elements is None:
            self._elements = _bits(self.mask)
        return self._elements

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    def __len__(self):
        return self.order

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.mask == other.mask

    def __hash__(self):
        return hash((id(self.parent), self.mask))

    def __le__(self, other: "Subgroup") -> bool:
        _same_parent(self, other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "Subgroup") -> bool:
        return self <= other and self.mask != other.mask

    def __ge__(self, other: "Subgroup") -> bool:
        return other <= self

    def __gt__(self, other: "Subgroup") -> bool:
        return other < self

    def sort_key(self):
        return (self.order, self.elements)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def is_trivial(self) -> bool:
        return self.mask == 1

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def __repr__(self):
        return f"<Subgroup of order {self.order} in {self.parent!r}: {list(self.elements)}>"


def _same_parent(a: Subgroup, b: Subgroup) -> None:
    if a.parent is not b.parent:
        raise GroupError("parent mismatch")


# construction

def group_from_permutations(degree: int, generators: Sequence[Sequence[int]], name: Optional[str] = None,
                            max_order: Optional[int] = None) -> FiniteGroup:
    """Close a set of permutations of ``{0..degree-1}`` into a group.

    Elements are numbered in BFS order from the identity, expanding each
    element by the generators in input order, so the numbering is
    reproducible.  The input generators keep their own (possibly repeated)
    positions in ``FiniteGroup.generators``.
    """
    if degree < 1:
        raise GroupError("invalid generator: degree must be positive")
    cap = max_order if max_order is not None else get_caps().group_order
    gens = []
    for g in generators:
        g = tuple(int(x) for x in g)
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise GroupError(f"invalid generator: {list(g)} is not a permutation of 0..{degree - 1}")
        gens.append(g)

    identity = tuple(range(degree))
    perms = [identity]
    index_of = {identity: 0}
    parent = [(-1, -1)]
    right = []  # right[x][k] = index of x * gens[k]
    pos = 0
    while pos < len(perms):
        x = perms[pos]
        row = []
        for k, g in enumerate(gens):
            y = tuple(g[i] for i in x)
            j = index_of.get(y)
            if j is None:
                if len(perms) >= cap:
                    raise CapExceeded(f"group too large: order exceeds cap {cap}")
                j = len(perms)
                index_of[y] = j
                perms.append(y)
                parent.append((pos, k))
            row.append(j)
        right.append(row)
        pos += 1

    n = len(perms)
    # table[a][b] = right[table[a][parent(b)]][gen(b)], filled in BFS order of b
    table = [[0] * n for _ in range(n)]
    for a in range(n):
        row = table[a]
        row[0] = a
        for b in range(1, n):
            pb, k = parent[b]
            row[b] = right[row[pb]][k]
    inverse = [0] * n
    for a in range(n):
        inverse[a] = table[a].index(0)
    gen_idx = [index_of[g] for g in gens]
    labels = [_cycle_string(p) for p in perms]
    return FiniteGroup(table, inverse, gen_idx, labels=labels, name=name, permutations=tuple(perms))


def _greedy_generators(table, order: int) -> list[int]:
    gens: list[int] = []
    mask = 1
    full = (1 << order) - 1
    while mask != full:
        g = next(x for x in range(order) if not mask >> x & 1)
        gens.append(g)
        mask = _closure_mask(table, mask, gens)
    return gens


def _closure_mask(table, start_mask: int, gens: Sequence[int]) -> int:
    """Close ``start_mask`` (which must contain 0 and be a subgroup or {0})
    under right multiplication by ``gens``."""
    mask = start_mask
    queue = deque(_bits(start_mask))
    while queue:
        x = queue.popleft()
        row = table[x]
        for g in gens:
            y = row[g]
            if not mask >> y & 1:
                mask |= 1 << y
                queue.append(y)
    return mask


def group_from_cayley(table: Sequence[Sequence[int]], name: Optional[str] = None) -> FiniteGroup:
    """Validate a Cayley table and wrap it as a group.

    Checks, in order: shape and entry range, identity at index 0, inverses,
    associativity (all ``n^3`` triples).  Errors name a witness.
    """
    n = len(table)
    if n == 0:
        raise GroupError("empty table")
    cap = get_caps().group_order
    if n > cap:
        raise CapExceeded(f"group too large: order {n} exceeds cap {cap}")
    rows = [list(map(int, r)) for r in table]
    for a, r in enumerate(rows):
        if len(r) != n:
            raise GroupError(f"table row {a} has length {len(r)}, expected {n}")
        for b, v in enumerate(r):
            if not 0 <= v < n:
                raise GroupError(f"table entry [{a}][{b}] = {v} out of range")
    for a in range(n):
        if rows[0][a] != a or rows[a][0] != a:
            raise GroupError(f"no identity at index 0: witness element {a}")
    inverse = []
    for a in range(n):
        cand = [b for b in range(n) if rows[a][b] == 0 and rows[b][a] == 0]
        if not cand:
            raise GroupError(f"missing inverse: element {a}")
        inverse.append(cand[0])
    T = np.asarray(rows, dtype=np.int64)
    for a in range(n):
        lhs = T[T[a]]            # (a*b)*c over all b, c
        rhs = T[a][T]            # a*(b*c)
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            b, c = (int(v) for v in bad[0])
            raise GroupError(f"not associative: witness triple ({a}, {b}, {c})")
    gens = _greedy_generators(rows, n)
    return FiniteGroup(rows, inverse, gens, name=name)


def _trusted_group(table, name=None) -> FiniteGroup:
    n = len(table)
    inverse = [table[a].index(0) for a in range(n)]
    return FiniteGroup(table, inverse, _greedy_generators(table, n), name=name)


# subgroup calculus

def _check_indices(G: FiniteGroup, seed: Iterable[int]) -> list[int]:
    out = []
    for s in seed:
        s = int(s)
        if not 0 <= s < G.order:
            raise GroupError(f"element index {s} out of range for group of order {G.order}")
        out.append(s)
    return out


def _dedup_generators(seed: Sequence[int]) -> list[int]:
    seen = set()
    out = []
    for s in seed:
        if s != 0 and s not in seen:
            seen.add(s)
            out.append(s)
    return out


def subgroup_generate(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """Smallest subgroup of ``G`` containing ``seed``."""
    gens = _dedup_generators(_check_indices(G, seed))
    return Subgroup(G, _closure_mask(G.table, 1, gens), gens)


def _normal_closure_mask(G: FiniteGroup, mask: int, gens: list[int]) -> tuple[int, list[int]]:
    gens = list(gens)
    mask = _closure_mask(G.table, mask, gens)
    queue = deque(gens)
    while queue:
        h = queue.popleft()
        for g in G.generators:
            c = G.conj(h, g)
            if not mask >> c & 1:
                gens.append(c)
                mask = _closure_mask(G.table, mask, gens)
                queue.append(c)
    return mask, gens


def normal_closure(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """Smallest normal subgroup of ``G`` containing ``seed``."""
    gens = _dedup_generators(_check_indices(G, seed))
    mask, gens = _normal_closure_mask(G, 1, gens)
    return Subgroup(G, mask, gens)


def join(A: Subgroup, B: Subgroup) -> Subgroup:
    """Subgroup generated by ``A`` and ``B``."""
    _same_parent(A, B)
    if B <= A:
        return A
    if A <= B:
        return B
    G = A.parent
    extra = [g for g in B.generators if not A.mask >> g & 1]
    mask = _closure_mask(G.table, A.mask, list(A.generators) + extra)
    return Subgroup(G, mask, list(A.generators) + extra)


def join_all(subgroups: Iterable[Subgroup], G: Optional[FiniteGroup] = None) -> Subgroup:
    result = None
    for S in subgroups:
        result = S if result is None else join(result, S)
    if result is None:
        if G is None:
            raise GroupError("empty join needs the ambient group")
        return G.trivial
    return result


def _subgroup_from_mask(G: FiniteGroup, mask: int) -> Subgroup:
    gens = []
    cur = 1
    while cur != mask:
        g = next(x for x in _bits(mask & ~cur))
        gens.append(g)
        cur = _closure_mask(G.table, cur, gens)
    return Subgroup(G, mask, gens)


def intersect(A: Subgroup, B: Subgroup) -> Subgroup:
    _same_parent(A, B)
    if A <= B:
        return A
    if B <= A:
        return B
    return _subgroup_from_mask(A.parent, A.mask & B.mask)


def intersect_all(subgroups: Iterable[Subgroup], G: Optional[FiniteGroup] = None) -> Subgroup:
    result = None
    for S in subgroups:
        result = S if result is None else intersect(result, S)
    if result is None:
        if G is None:
            raise GroupError("empty intersection needs the ambient group")
        return G.whole
    return result


def index(A: Subgroup) -> int:
    return A.parent.order // A.order


def is_normal(A: Subgroup) -> bool:
    G = A.parent
    # conjugating generators by generators suffices
    return all(A.mask >> G.conj(h, g) & 1 for h in A.generators for g in G.generators)


def conjugate(A: Subgroup, g: int) -> Subgroup:
    G = A.parent
    mask = _mask(G.conj(a, g) for a in A.elements)
    return Subgroup(G, mask, [G.conj(h, g) for h in A.generators])


def normal_core(A: Subgroup) -> Subgroup:
    """Largest normal subgroup of the parent contained in ``A``."""
    G = A.parent
    mask = A.mask
    for g in G.elements():
        mask &= _mask(G.conj(a, g) for a in A.elements)
        if mask == 1:
            break
    core = A if mask == A.mask else _subgroup_from_mask(G, mask)
    # the permutation action on cosets embeds G/core into Sym(index A)
    if math.factorial(index(A)) % index(core) != 0:
        raise AssertionError(f"normal core index {index(core)} does not divide {index(A)}!")
    return core


def quotient(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Quotient group on cosets of ``N`` and the projection map.

    Cosets are numbered by their smallest element, so the coset of the
    identity is 0.
    """
    if N.parent is not G:
        raise GroupError("parent mismatch")
    if not is_normal(N):
        raise GroupError("subgroup not normal")
    proj = [-1] * G.order
    reps = []
    t = G.table
    for x in G.elements():
        if proj[x] >= 0:
            continue
        c = len(reps)
        reps.append(x)
        for n in N.elements:
            proj[t[x][n]] = c
    m = len(reps)
    table = [[proj[t[reps[i]][reps[j]]] for j in range(m)] for i in range(m)]
    Q = _trusted_group(table, name=f"{G.name}/N" if G.name else None)
    return Q, tuple(proj)


def commutator_subgroup(A: Subgroup, B: Subgroup) -> Subgroup:
    """``[A, B]`` for normal subgroups ``A``, ``B`` of a common parent."""
    _same_parent(A, B)
    G = A.parent
    seeds = [G.commutator(a, b) for a in A.generators for b in B.generators]
    return normal_closure(G, seeds)


def derived_series(G: FiniteGroup) -> list[Subgroup]:
    """``G >= G' >= G'' >= ...`` ending at the first repeated term."""
    series = [G.whole]
    while True:
        nxt = commutator_subgroup(series[-1], series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)


def derived_length(G: FiniteGroup):
    """Number of strict steps down to the trivial group, or ``NOT_SOLVABLE``."""
    series = derived_series(G)
    if not series[-1].is_trivial():
        return NOT_SOLVABLE
    return len(series) - 1


def conjugacy_classes(G: FiniteGroup) -> list[tuple[int, ...]]:
    seen = 0
    classes = []
    for x in G.elements():
        if seen >> x & 1:
            continue
        cls = _mask(G.conj(x, g) for g in G.elements())
        seen |= cls
        classes.append(_bits(cls))
    return classes


def _lattice_cap(G: FiniteGroup) -> None:
    cap = get_caps().lattice_order
    if G.order > cap:
        raise CapExceeded(f"subgroup lattice enumeration limited to order {cap}, got {G.order}")


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup of ``G``, sorted by (order, elements).

    Every subgroup is a join of cyclic subgroups, so joining each found
    subgroup with each cyclic subgroup until nothing new appears reaches
    the whole lattice.
    """
    hit = G.cache.get("all_subgroups")
    if hit is not None:
        return list(hit)
    _lattice_cap(G)
    cyclic = {}
    for x in G.elements():
        C = subgroup_generate(G, [x])
        cyclic.setdefault(C.mask, C)
    found = dict(cyclic)
    found.setdefault(1, G.trivial)
    queue = deque(found.values())
    cyc = list(cyclic.values())
    while queue:
        H = queue.popleft()
        for C in cyc:
            if C.mask & ~H.mask == 0:
                continue
            J = join(H, C)
            if J.mask not in found:
                found[J.mask] = J
                queue.append(J)
    out = sorted(found.values(), key=Subgroup.sort_key)
    G.cache["all_subgroups"] = tuple(out)
    return out


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every normal subgroup, sorted by (order, elements)."""
    hit = G.cache.get("normal_subgroups")
    if hit is not None:
        return list(hit)
    closures = {}
    for cls in conjugacy_classes(G):
        C = normal_closure(G, [cls[0]])
        closures.setdefault(C.mask, C)
    found = dict(closures)
    found.setdefault(1, G.trivial)
    queue = deque(found.values())
    base = list(closures.values())
    while queue:
        H = queue.popleft()
        for C in base:
            if C.mask & ~H.mask == 0:
                continue
            J = join(H, C)
            if J.mask not in found:
                found[J.mask] = J
                queue.append(J)
    out = sorted(found.values(), key=Subgroup.sort_key)
    G.cache["normal_subgroups"] = tuple(out)
    return out


def maximal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    proper = [H for H in all_subgroups(G) if not H.is_whole()]
    return [H for H in proper if not any(H < K for K in proper)]


def is_prime_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def frattini_subgroup(G: FiniteGroup) -> Subgroup:
    """Intersection of all maximal subgroups.

    Above the lattice cap, p-groups fall back to ``G^p [G, G]``.
    """
    if G.order == 1:
        return G.whole
    if G.order <= get_caps().lattice_order:
        return intersect_all(maximal_subgroups(G), G)
    p = _smallest_prime_factor(G.order)
    if not is_prime_power_of(G.order, p):
        _lattice_cap(G)
    powers = [G.power(x, p) for x in G.elements()]
    derived = commutator_subgroup(G.whole, G.whole)
    return join(normal_closure(G, powers), derived)


def _smallest_prime_factor(n: int) -> int:
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


def p_rank(G: FiniteGroup, p: int) -> int:
    """Minimal number of generators of a finite p-group, ``log_p |G/Phi(G)|``."""
    if not is_prime_power_of(G.order, p):
        raise GroupError(f"order not a power of p: |G| = {G.order}, p = {p}")
    frat_index = G.order // frattini_subgroup(G).order
    r = 0
    while frat_index > 1:
        frat_index //= p
        r += 1
    return r
