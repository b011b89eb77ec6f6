"""Built-in named groups, each given by permutation generators.

Generator lists are part of the catalog's contract: element numbering (and
so every report) depends on them.  Changing one is a breaking change and
must bump ``CATALOG_VERSION``.
"""
from __future__ import annotations

from .groups import FiniteGroup, group_from_permutations

CATALOG_VERSION = "1"


def _cycle(points, degree):
    perm = list(range(degree))
    for a, b in zip(points, points[1:] + points[:1]):
        perm[a] = b
    return perm


def _dihedral(n):
    rot = [(i + 1) % n for i in range(n)]
    ref = [(-i) % n for i in range(n)]
    return n, [rot, ref]


def _elementary(p, k):
    degree = p * k
    return degree, [_cycle(list(range(p * i, p * i + p)), degree) for i in range(k)]


_DATA: dict[str, tuple[int, list[list[int]]]] = {}

for _n in range(2, 17):
    _DATA[f"C{_n}"] = (_n, [_cycle(list(range(_n)), _n)])
for _n in range(4, 9):
    _DATA[f"D{2 * _n}"] = _dihedral(_n)

_DATA.update({
    # right regular representations on 8 / 16 points
    "Q8": (8, [[1, 4, 7, 2, 5, 0, 3, 6], [2, 3, 4, 5, 6, 7, 0, 1]]),
    "Q16": (16, [[1, 2, 3, 4, 5, 6, 7, 0, 15, 8, 9, 10, 11, 12, 13, 14],
                 [8, 9, 10, 11, 12, 13, 14, 15, 4, 5, 6, 7, 0, 1, 2, 3]]),
    "M16": (16, [[1, 2, 3, 4, 5, 6, 7, 0, 13, 14, 15, 8, 9, 10, 11, 12],
                 [8, 9, 10, 11, 12, 13, 14, 15, 0, 1, 2, 3, 4, 5, 6, 7]]),
    "S3": (3, [[1, 2, 0], [1, 0, 2]]),
    "S4": (4, [[1, 2, 3, 0], [1, 0, 2, 3]]),
    "A4": (4, [[1, 2, 0, 3], [0, 2, 3, 1]]),
    "A5": (5, [[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]]),
    # action on the 8 nonzero row vectors of F3^2
    "SL(2,3)": (8, [[0, 1, 3, 4, 2, 7, 5, 6], [3, 7, 2, 6, 1, 5, 0, 4]]),
    "C4xC2": (6, [[1, 2, 3, 0, 4, 5], [0, 1, 2, 3, 5, 4]]),
})
for _p in (2, 3):
    for _k in (1, 2, 3):
        _DATA[f"{_p}^{_k}"] = _elementary(_p, _k)

def _prime_of_prime_power(n: int):
    for p in range(2, n + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return p if n == 1 else None
    return None


_CACHE: dict[str, FiniteGroup] = {}


def names() -> list[str]:
    return list(_DATA)


def generators(name: str) -> tuple[int, list[list[int]]]:
    if name not in _DATA:
        raise KeyError(f"unknown catalog group {name!r}; known: {', '.join(_DATA)}")
    degree, gens = _DATA[name]
    return degree, [list(g) for g in gens]


def get(name: str) -> FiniteGroup:
    """The catalog group ``name``, built once and shared."""
    G = _CACHE.get(name)
    if G is None:
        degree, gens = generators(name)
        G = group_from_permutations(degree, gens, name=name)
        _CACHE[name] = G
    return G


def groups(max_order: int | None = None) -> list[FiniteGroup]:
    out = [get(n) for n in _DATA]
    if max_order is not None:
        out = [G for G in out if G.order <= max_order]
    return out


def prime_of(G: FiniteGroup):
    """The prime ``p`` if ``G`` is a nontrivial p-group, else ``None``."""
    return _prime_of_prime_power(G.order) if G.order > 1 else None


def p_groups(max_order: int | None = None) -> list[tuple[FiniteGroup, int]]:
    return [(G, prime_of(G)) for G in groups(max_order) if prime_of(G) is not None]
