"""Exact fields and row-echelon linear algebra over them.

Vectors are tuples of field elements; matrices are tuples of row vectors.
Prime-field elements are ints in ``0..p-1``; rationals are ``Fraction``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = ["PrimeField", "Rationals", "parse_field", "rref", "rank", "nullspace", "row_space_sum",
           "row_space_intersection", "in_row_space", "vec_matrix", "is_invertible"]


class PrimeField:
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"PrimeField needs a prime, got {p}")
        self.p = p
        self.zero = 0
        self.one = 1

    name = property(lambda self: f"F{self.p}")
    is_finite = True

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def parse(self, text) -> int:
        s = str(text).strip()
        if "/" in s:
            num, den = s.split("/")
            return self.mul(int(num) % self.p, self.inv(int(den) % self.p))
        return int(s) % self.p

    def coerce(self, x) -> int:
        if isinstance(x, Fraction):
            return self.mul(x.numerator % self.p, self.inv(x.denominator % self.p))
        return int(x) % self.p

    def format(self, a) -> str:
        return str(a)

    def elements(self) -> range:
        return range(self.p)


class Rationals:
    zero = Fraction(0)
    one = Fraction(1)
    name = "Q"
    is_finite = False

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Rationals()"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / Fraction(a)

    def parse(self, text) -> Fraction:
        return Fraction(str(text).strip())

    def coerce(self, x) -> Fraction:
        return Fraction(x)

    def format(self, a) -> str:
        return str(a)

    def elements(self):
        raise TypeError("the rationals are infinite")


def parse_field(name: str):
    name = name.strip()
    if name == "Q":
        return Rationals()
    if name.startswith("F") and name[1:].isdigit():
        return PrimeField(int(name[1:]))
    raise ValueError(f"unknown field {name!r}; use Q or F<p>")


def rref(rows: Iterable[Sequence], F) -> tuple[tuple, ...]:
    """Canonical reduced row-echelon form with zero rows dropped."""
    m = [list(r) for r in rows]
    if not m:
        return ()
    ncols = len(m[0])
    out_rows = 0
    for col in range(ncols):
        pivot = next((r for r in range(out_rows, len(m)) if m[r][col] != F.zero), None)
        if pivot is None:
            continue
        m[out_rows], m[pivot] = m[pivot], m[out_rows]
        row = m[out_rows]
        inv = F.inv(row[col])
        if inv != F.one:
            row[:] = [F.mul(inv, x) for x in row]
        for r in range(len(m)):
            if r != out_rows and m[r][col] != F.zero:
                f = m[r][col]
                m[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(m[r], row)]
        out_rows += 1
        if out_rows == len(m):
            break
    return tuple(tuple(r) for r in m[:out_rows])


def rank(rows, F) -> int:
    return len(rref(rows, F))


def pivots(basis: Sequence[Sequence], F) -> list[int]:
    return [next(i for i, x in enumerate(r) if x != F.zero) for r in basis]


def in_row_space(v: Sequence, basis: Sequence[Sequence], F) -> bool:
    """Membership test against an RREF basis."""
    v = list(v)
    for r, c in zip(basis, pivots(basis, F)):
        if v[c] != F.zero:
            f = v[c]
            v = [F.sub(a, F.mul(f, b)) for a, b in zip(v, r)]
    return all(x == F.zero for x in v)


def nullspace(matrix: Sequence[Sequence], ncols: int, F) -> list[tuple]:
    """Basis of ``{x : M x = 0}``."""
    R = rref(matrix, F)
    piv = pivots(R, F)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [F.zero] * ncols
        x[f] = F.one
        for r, c in zip(R, piv):
            x[c] = F.neg(r[f])
        basis.append(tuple(x))
    return basis


def row_space_sum(U, V, F):
    return rref(list(U) + list(V), F)


def row_space_intersection(U, V, F, dim: int):
    """RREF basis of ``rowspace(U) & rowspace(V)``."""
    if not U or not V:
        return ()
    # left kernel of [U; V]: coefficients (a, b) with aU + bV = 0
    stacked = list(U) + list(V)
    transpose = [[stacked[r][c] for r in range(len(stacked))] for c in range(dim)]
    kernel = nullspace(transpose, len(stacked), F)
    vecs = []
    for coeffs in kernel:
        v = [F.zero] * dim
        for a, row in zip(coeffs[:len(U)], U):
            if a != F.zero:
                v = [F.add(x, F.mul(a, y)) for x, y in zip(v, row)]
        vecs.append(v)
    return rref(vecs, F)


def vec_matrix(v: Sequence, M: Sequence[Sequence], F) -> tuple:
    """Row vector times matrix."""
    out = [F.zero] * len(M[0])
    for a, row in zip(v, M):
        if a != F.zero:
            out = [F.add(x, F.mul(a, y)) for x, y in zip(out, row)]
    return tuple(out)


def is_invertible(M: Sequence[Sequence], F) -> bool:
    return rank(M, F) == len(M)
