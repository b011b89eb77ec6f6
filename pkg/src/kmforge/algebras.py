"""Finite-dimensional (possibly non-associative) algebras over exact fields.

An :class:`Algebra` is given by structure constants ``e_i * e_j = sum_k
sc[i][j][k] e_k``.  Subspaces carry an ideal *mode*: ``subspace`` (no
closure requirement), ``left``, ``right`` or ``twosided``.  Linear maps act
on row vectors, ``phi(v) = v M``, so row ``i`` of ``M`` is ``phi(e_i)``.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .caps import CapExceeded, get_caps
from .construction import CertificateError
from .exact import f_iter
from .linalg import (
    PrimeField,
    in_row_space,
    is_invertible,
    parse_field,
    rref,
    row_space_intersection,
    vec_matrix,
)

__all__ = [
    "AlgebraError",
    "MODES",
    "Algebra",
    "Subspace",
    "subspace_sum",
    "subspace_intersect",
    "MultiWord",
    "parse_multiword",
    "word_span",
    "LinearEndo",
    "endo_closure",
    "algebra_automorphisms_bruteforce",
    "AlgebraTrace",
    "km_construct_algebra",
    "all_subspaces",
    "maximal_identity_subspaces",
]

MODES = ("subspace", "left", "right", "twosided")


class AlgebraError(ValueError):
    pass


class Algebra:
    def __init__(self, field, dim: int, products=(), name: Optional[str] = None):
        if dim < 1:
            raise AlgebraError("dimension must be positive")
        F = field
        sc = [[[F.zero] * dim for _ in range(dim)] for _ in range(dim)]
        self._entries = []
        for i, j, k, value in products:
            i, j, k = int(i), int(j), int(k)
            if not all(0 <= x < dim for x in (i, j, k)):
                raise AlgebraError(f"structure constant index out of range: {(i, j, k)}")
            v = F.parse(value) if isinstance(value, str) else F.coerce(value)
            sc[i][j][k] = F.add(sc[i][j][k], v)
        self.field = F
        self.dim = dim
        self.sc = tuple(tuple(tuple(vec) for vec in row) for row in sc)
        self.name = name
        self.cache: dict = {}

    def __repr__(self):
        name = f" {self.name}" if self.name else ""
        return f"<Algebra{name} dim {self.dim} over {self.field.name}>"

    @classmethod
    def from_dict(cls, data: dict, name=None) -> "Algebra":
        return cls(parse_field(data["field"]), int(data["dim"]), data.get("products", []),
                   name=name or data.get("name"))

    def to_dict(self) -> dict:
        F = self.field
        prods = [[str(i), str(j), str(k), F.format(self.sc[i][j][k])]
                 for i in range(self.dim) for j in range(self.dim) for k in range(self.dim)
                 if self.sc[i][j][k] != F.zero]
        return {"field": F.name, "dim": self.dim, "products": prods}

    def basis_vector(self, i: int) -> tuple:
        F = self.field
        return tuple(F.one if k == i else F.zero for k in range(self.dim))

    def zero_vector(self) -> tuple:
        return (self.field.zero,) * self.dim

    def mul(self, u: Sequence, v: Sequence) -> tuple:
        F = self.field
        out = [F.zero] * self.dim
        for i, a in enumerate(u):
            if a == F.zero:
                continue
            row = self.sc[i]
            for j, b in enumerate(v):
                if b == F.zero:
                    continue
                ab = F.mul(a, b)
                out = [F.add(x, F.mul(ab, y)) for x, y in zip(out, row[j])]
        return tuple(out)

    def whole(self, mode: str = "subspace") -> "Subspace":
        return Subspace(self, [self.basis_vector(i) for i in range(self.dim)], mode)

    def zero(self, mode: str = "subspace") -> "Subspace":
        return Subspace(self, [], mode)


class Subspace:
    """A subspace stored as its canonical RREF basis."""

    __slots__ = ("parent", "basis", "mode")

    def __init__(self, parent: Algebra, vectors, mode: str = "subspace", check: bool = True):
        if mode not in MODES:
            raise AlgebraError(f"unknown mode {mode!r}")
        self.parent = parent
        self.basis = rref([tuple(v) for v in vectors], parent.field)
        self.mode = mode
        if check and mode != "subspace" and not self.is_closed(mode):
            raise AlgebraError(f"subspace is not a {mode} ideal")

    @classmethod
    def from_dict(cls, A: Algebra, data: dict) -> "Subspace":
        F = A.field
        vecs = []
        for row in data.get("basis", []):
            if len(row) != A.dim:
                raise AlgebraError(f"basis vector has length {len(row)}, expected {A.dim}")
            vecs.append(tuple(F.parse(x) for x in row))
        return cls(A, vecs, data.get("mode", "subspace"))

    def to_dict(self) -> dict:
        F = self.parent.field
        return {"mode": self.mode, "basis": [[F.format(x) for x in r] for r in self.basis]}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def codim(self) -> int:
        return self.parent.dim - self.dim

    def contains(self, v) -> bool:
        return in_row_space(v, self.basis, self.parent.field)

    def __le__(self, other: "Subspace") -> bool:
        _same_parent(self, other)
        return all(other.contains(b) for b in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.parent is other.parent and self.basis == other.basis

    def __hash__(self):
        return hash((id(self.parent), self.basis))

    def __repr__(self):
        return f"<Subspace dim {self.dim} ({self.mode}) basis {[list(r) for r in self.basis]}>"

    def is_closed(self, mode: str) -> bool:
        A = self.parent
        gens = [A.basis_vector(i) for i in range(A.dim)]
        for b in self.basis:
            for e in gens:
                if mode in ("left", "twosided") and not self.contains(A.mul(e, b)):
                    return False
                if mode in ("right", "twosided") and not self.contains(A.mul(b, e)):
                    return False
        return True

    def closure(self, mode: str) -> "Subspace":
        """Smallest ``mode`` ideal containing this subspace."""
        A = self.parent
        gens = [A.basis_vector(i) for i in range(A.dim)]
        cur = self
        while True:
            vecs = list(cur.basis)
            for b in cur.basis:
                for e in gens:
                    if mode in ("left", "twosided"):
                        vecs.append(A.mul(e, b))
                    if mode in ("right", "twosided"):
                        vecs.append(A.mul(b, e))
            nxt = Subspace(A, vecs, "subspace", check=False)
            if nxt.dim == cur.dim:
                return Subspace(A, nxt.basis, mode, check=False)
            cur = nxt

    def with_mode(self, mode: str) -> "Subspace":
        return Subspace(self.parent, self.basis, mode)


def _same_parent(U: Subspace, V: Subspace) -> None:
    if U.parent is not V.parent:
        raise AlgebraError("parent mismatch")


def _combine(U: Subspace, V: Subspace, basis) -> Subspace:
    _same_parent(U, V)
    if U.mode != V.mode:
        raise AlgebraError(f"mode mismatch: {U.mode} vs {V.mode}")
    S = Subspace(U.parent, basis, "subspace", check=False)
    # keep the common mode only when closure is re-verified
    mode = U.mode if S.is_closed(U.mode) else "subspace"
    return Subspace(U.parent, S.basis, mode, check=False)


def subspace_sum(U: Subspace, V: Subspace) -> Subspace:
    return _combine(U, V, list(U.basis) + list(V.basis))


def subspace_intersect(U: Subspace, V: Subspace) -> Subspace:
    _same_parent(U, V)
    A = U.parent
    return _combine(U, V, row_space_intersection(U.basis, V.basis, A.field, A.dim))


# multilinear words

@dataclass(frozen=True)
class MVar:
    var: int

    def render(self) -> str:
        return f"x{self.var}"

    def variables(self) -> list[int]:
        return [self.var]


@dataclass(frozen=True)
class MProd:
    left: "Mono"
    right: "Mono"

    def render(self) -> str:
        return f"({self.left.render()}*{self.right.render()})"

    def variables(self) -> list[int]:
        return self.left.variables() + self.right.variables()


Mono = Union[MVar, MProd]


@dataclass(frozen=True)
class MultiWord:
    """A linear combination of multilinear monomials over one variable set.

    Arguments are matched to variables in increasing variable number.
    """

    field: object
    terms: tuple  # ((coefficient, Mono), ...)
    variables: tuple

    @property
    def weight(self) -> int:
        return len(self.variables)

    def render(self) -> str:
        F = self.field
        parts = []
        for c, mono in self.terms:
            coef = "" if c == F.one else f"{F.format(c)}*"
            parts.append(f"{coef}{mono.render()}")
        return " + ".join(parts)

    def evaluate(self, A: Algebra, args: Sequence[Sequence]) -> tuple:
        if len(args) != self.weight:
            raise AlgebraError(f"arity mismatch: word has weight {self.weight}, got {len(args)}")
        F = A.field
        env = dict(zip(self.variables, args))
        out = A.zero_vector()
        for c, mono in self.terms:
            v = _eval_mono(mono, A, env)
            out = tuple(F.add(x, F.mul(c, y)) for x, y in zip(out, v))
        return out


def _eval_mono(mono: Mono, A: Algebra, env) -> tuple:
    if isinstance(mono, MVar):
        return tuple(env[mono.var])
    return A.mul(_eval_mono(mono.left, A, env), _eval_mono(mono.right, A, env))


class _MParser:
    def __init__(self, text, F):
        self.s = text
        self.i = 0
        self.F = F

    def peek(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1
        return self.s[self.i] if self.i < len(self.s) else ""

    def err(self, what="syntax error"):
        return AlgebraError(f"{what} at position {self.i}")

    def take(self, ch):
        if self.peek() != ch:
            raise self.err(f"syntax error: expected {ch!r}")
        self.i += 1

    def number(self) -> str:
        start = self.i
        while self.i < len(self.s) and (self.s[self.i].isdigit() or self.s[self.i] == "/"):
            self.i += 1
        return self.s[start:self.i]

    def mono(self) -> Mono:
        ch = self.peek()
        if ch == "x":
            self.i += 1
            digits = self.number()
            if not digits.isdigit():
                raise self.err("syntax error: variable needs digits")
            return MVar(int(digits))
        if ch == "(":
            self.i += 1
            left = self.mono()
            self.take("*")
            right = self.mono()
            self.take(")")
            return MProd(left, right)
        raise self.err()

    def term(self):
        F = self.F
        coef = F.one
        if self.peek().isdigit():
            coef = F.parse(self.number())
            self.take("*")
        return coef, self.mono()

    def expr(self):
        terms = []
        sign = F_one = self.F.one
        if self.peek() == "-":
            self.i += 1
            sign = self.F.neg(F_one)
        elif self.peek() == "+":
            self.i += 1
        while True:
            c, m = self.term()
            terms.append((self.F.mul(sign, c), m))
            ch = self.peek()
            if ch == "+":
                sign = F_one
            elif ch in ("-", "−"):
                sign = self.F.neg(F_one)
            elif ch == "":
                return terms
            else:
                raise self.err()
            self.i += 1


def parse_multiword(text: str, field) -> MultiWord:
    """Parse ``[c*]mono (+|- [c*]mono)*`` with ``mono ::= x<k> | (mono*mono)``."""
    p = _MParser(text, field)
    raw = p.expr()
    varset = None
    terms = []
    for c, mono in raw:
        vs = mono.variables()
        if len(set(vs)) != len(vs):
            raise AlgebraError("repeated variable in monomial " + mono.render())
        if varset is None:
            varset = set(vs)
        elif set(vs) != varset:
            raise AlgebraError("variable-set mismatch across terms")
        if c != field.zero:
            terms.append((c, mono))
    cap = get_caps().word_weight
    if len(varset) > cap:
        raise CapExceeded(f"weight exceeds cap: {len(varset)} > {cap}")
    return MultiWord(field, tuple(terms), tuple(sorted(varset)))


def word_span(w: MultiWord, A: Algebra, args: Sequence[Subspace], mode: str = "subspace") -> Subspace:
    """Span of ``w`` on basis tuples of ``args``, closed to ``mode``.

    Multilinearity makes basis tuples enough.
    """
    if len(args) != w.weight:
        raise AlgebraError(f"arity mismatch: word has weight {w.weight}, got {len(args)}")
    for U in args:
        if U.parent is not A:
            raise AlgebraError("parent mismatch")
    if any(U.dim == 0 for U in args):
        return A.zero(mode)
    vals = [w.evaluate(A, combo) for combo in itertools.product(*(U.basis for U in args))]
    S = Subspace(A, vals, "subspace", check=False)
    return S.closure(mode) if mode != "subspace" else S


def satisfies(w: MultiWord, U: Subspace) -> bool:
    return word_span(w, U.parent, [U] * w.weight).dim == 0


# endomorphisms

class LinearEndo:
    """An invertible multiplicative linear map ``v -> v M``."""

    __slots__ = ("parent", "matrix")

    def __init__(self, parent: Algebra, matrix, check: bool = True):
        F = parent.field
        M = tuple(tuple(F.parse(x) if isinstance(x, str) else F.coerce(x) for x in row) for row in matrix)
        if len(M) != parent.dim or any(len(r) != parent.dim for r in M):
            raise AlgebraError(f"endomorphism matrix must be {parent.dim}x{parent.dim}")
        self.parent = parent
        self.matrix = M
        if check:
            if not is_invertible(M, F):
                raise AlgebraError("map not invertible")
            if not self.is_multiplicative():
                raise AlgebraError("map not an algebra endomorphism")

    def __eq__(self, other):
        return isinstance(other, LinearEndo) and other.parent is self.parent and other.matrix == self.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"LinearEndo({[list(r) for r in self.matrix]})"

    def __call__(self, v) -> tuple:
        return vec_matrix(v, self.matrix, self.parent.field)

    def is_multiplicative(self) -> bool:
        A = self.parent
        M = self.matrix
        for i in range(A.dim):
            for j in range(A.dim):
                if self(A.sc[i][j]) != A.mul(M[i], M[j]):
                    return False
        return True

    def image(self, U: Subspace) -> Subspace:
        return Subspace(U.parent, [self(b) for b in U.basis], U.mode, check=False)

    def to_list(self) -> list:
        F = self.parent.field
        return [[F.format(x) for x in r] for r in self.matrix]


def algebra_automorphisms_bruteforce(A: Algebra) -> list[LinearEndo]:
    """All invertible multiplicative matrices, in lexicographic order.

    Rows are chosen one at a time; a product ``e_i e_j`` is checked as soon
    as the rows it involves are fixed.
    """
    cached = A.cache.get("automorphisms")
    if cached is not None:
        return list(cached)
    F = A.field
    if not isinstance(F, PrimeField):
        raise CapExceeded("search space exceeds cap: automorphism enumeration needs a finite field")
    d = A.dim
    cap = get_caps().algebra_search
    if F.p ** (d * d) > cap:
        raise CapExceeded(f"search space exceeds cap: {F.p}^{d * d} > {cap}; supply endomorphisms explicitly")
    ready: list[list[tuple[int, int]]] = [[] for _ in range(d)]
    for i in range(d):
        for j in range(d):
            support = [k for k in range(d) if A.sc[i][j][k] != F.zero]
            ready[max([i, j] + support)].append((i, j))
    vectors = list(itertools.product(F.elements(), repeat=d))
    found = []
    rows: list[tuple] = []

    def search(r: int):
        if r == d:
            found.append(tuple(rows))
            return
        for v in vectors:
            if rows and in_row_space(v, rref(rows, F), F):
                continue
            if not rows and all(x == F.zero for x in v):
                continue
            rows.append(v)
            ok = True
            for i, j in ready[r]:
                lhs = vec_matrix(A.sc[i][j], rows + [A.zero_vector()] * (d - len(rows)), F)
                if lhs != A.mul(rows[i], rows[j]):
                    ok = False
                    break
            if ok:
                search(r + 1)
            rows.pop()

    search(0)
    out = [LinearEndo(A, M, check=False) for M in found]
    for phi in out:
        if not phi.is_multiplicative() or not is_invertible(phi.matrix, F):
            raise AssertionError(f"enumeration produced an invalid map {phi}")
    A.cache["automorphisms"] = tuple(out)
    return out


@dataclass
class ClosureResult:
    total: Subspace
    selected: list  # [(label, image Subspace)]
    meet: Subspace


def endo_closure(U: Subspace, endos: Sequence[LinearEndo], complete: bool = True) -> ClosureResult:
    """Sum of the images of ``U`` under the group generated by ``endos``.

    With ``complete`` the list is taken to be the whole group and scanned
    in order; otherwise the orbit is explored breadth-first by generator
    words.  Each selected image strictly enlarges the running sum, so at
    most ``codim U + 1`` images are selected.  ``meet`` is the intersection
    of the selected images.
    """
    if complete:
        images = [phi.image(U) for phi in endos] or [U]
        total = images[0]
        for V in images[1:]:
            if not V <= total:
                total = subspace_sum(total, V)
        running = None
        selected = []
        for i, V in enumerate(images):
            if running is not None and V <= running:
                continue
            running = V if running is None else subspace_sum(running, V)
            selected.append(((i,), V))
            if running == total:
                break
    else:
        total = U
        selected = [((), U)]
        seen = {U.basis}
        queue = deque([(U, ())])

        def closed(S):
            return all(phi.image(S) <= S for phi in endos)

        while not closed(total):
            V, word = queue.popleft()
            for g, phi in enumerate(endos):
                W = phi.image(V)
                if W.basis in seen:
                    continue
                seen.add(W.basis)
                queue.append((W, word + (g,)))
                if not W <= total:
                    total = subspace_sum(total, W)
                    selected.append((word + (g,), W))
    if len(selected) > U.codim + 1:
        raise CertificateError(f"selected {len(selected)} images for codim {U.codim}")
    meet = selected[0][1]
    for _, V in selected[1:]:
        meet = subspace_intersect(meet, V)
    return ClosureResult(total, selected, meet)


@dataclass
class AlgebraTrace:
    word: str
    mode: str
    scope: str
    steps: list = field(default_factory=list)
    certificate: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"word": self.word, "mode": self.mode, "scope": self.scope, "steps": self.steps,
                "certificate": self.certificate}


def km_construct_algebra(A: Algebra, N: Subspace, w: MultiWord, endos="bruteforce"):
    """Invariant subspace ``H`` with ``w(H, .., H) = 0`` and ``codim H <= f^(t-1)(codim N)``.

    ``endos="bruteforce"`` enumerates the full automorphism group (finite
    fields, tiny dimension); a list of :class:`LinearEndo` makes the
    certificate relative to the group they generate.  ``H`` is an ideal of
    the same mode as ``N``.
    """
    if N.parent is not A:
        raise AlgebraError("parent mismatch")
    if not N.is_closed(N.mode):
        raise AlgebraError(f"N is not a {N.mode} ideal")
    t = w.weight
    if word_span(w, A, [N] * t).dim != 0:
        raise AlgebraError("identity fails on N")
    if isinstance(endos, str):
        if endos != "bruteforce":
            raise AlgebraError(f"unknown endomorphism source {endos!r}")
        maps = algebra_automorphisms_bruteforce(A)
        complete, scope = True, "absolute"
    else:
        maps = list(endos)
        for phi in maps:
            if phi.parent is not A:
                raise AlgebraError("parent mismatch")
            if not is_invertible(phi.matrix, A.field) or not phi.is_multiplicative():
                raise AlgebraError("map not an algebra endomorphism")
        complete, scope = False, "relative to supplied endomorphisms"

    trace = AlgebraTrace(w.render(), N.mode, scope)
    F = A.field
    prev, l_prev = N, N.codim
    l0 = N.codim
    G_k = N
    for k in range(1, t + 1):
        res = endo_closure(prev, maps, complete)
        G_k, N_k = res.total, res.meet
        p_k = len(res.selected) - 1
        l_k = N_k.codim
        trace.steps.append({
            "k": str(k),
            "G_k": [[F.format(x) for x in r] for r in G_k.basis],
            "N_k": [[F.format(x) for x in r] for r in N_k.basis],
            "selected": [[str(g) for g in label] for label, _ in res.selected],
            "p_k": str(p_k),
            "l_k": str(l_k),
        })
        if p_k > l_prev:
            raise CertificateError(f"step {k}: p_k = {p_k} > l_(k-1) = {l_prev}")
        if l_k > f_iter(1, l_prev):
            raise CertificateError(f"step {k}: l_k = {l_k} > f({l_prev})")
        if G_k.codim > l_prev:
            raise CertificateError(f"step {k}: codim G_k > l_(k-1)")
        if word_span(w, A, [N_k] * (t - k) + [G_k] * k).dim != 0:
            raise CertificateError(f"step {k}: w(N_k x {t - k}, G_k x {k}) != 0")
        if N.mode != "subspace" and (G_k.mode != N.mode or N_k.mode != N.mode):
            raise CertificateError(f"step {k}: ideal mode {N.mode} was not preserved")
        prev, l_prev = N_k, l_k

    H = G_k
    if not all(phi.image(H) <= H for phi in maps):
        raise CertificateError("H is not invariant")
    if word_span(w, A, [H] * t).dim != 0:
        raise CertificateError("H does not satisfy the identity")
    if not H.is_closed(N.mode):
        raise CertificateError(f"H is not a {N.mode} ideal")
    H = Subspace(A, H.basis, N.mode, check=False)
    bound = f_iter(t - 1, l0)
    if H.codim > bound:
        raise CertificateError(f"codim H = {H.codim} > f^{t - 1}({l0}) = {bound}")
    trace.certificate = {
        "scope": scope,
        "endomorphisms": str(len(maps)),
        "codim_N": str(l0),
        "codim_H": str(H.codim),
        "bound": f"f^{t - 1}({l0})",
        "bound_value": str(bound),
        "bound_holds": True,
        "invariant": True,
        "satisfies_identity": True,
        "mode_preserved": True,
    }
    return H, trace


# enumeration over finite fields

def all_subspaces(A: Algebra, mode: str = "subspace") -> list[Subspace]:
    """Every ``mode`` ideal of ``A`` (finite field only), sorted by (dim, basis)."""
    F = A.field
    if not isinstance(F, PrimeField):
        raise AlgebraError("subspace enumeration needs a finite field")
    if F.p ** A.dim > get_caps().algebra_search:
        raise CapExceeded("search space exceeds cap")
    vectors = [v for v in itertools.product(F.elements(), repeat=A.dim) if any(v)]
    found = {(): A.zero()}
    queue = deque([A.zero()])
    while queue:
        U = queue.popleft()
        for v in vectors:
            if U.contains(v):
                continue
            V = Subspace(A, list(U.basis) + [v], check=False)
            if V.basis not in found:
                found[V.basis] = V
                queue.append(V)
    out = [Subspace(A, U.basis, mode, check=False) for U in found.values() if U.is_closed(mode)]
    return sorted(out, key=lambda U: (U.dim, U.basis))


def maximal_identity_subspaces(A: Algebra, w: MultiWord, mode: str = "subspace"):
    """Maximal ``mode`` ideals satisfying ``w``, their intersection and its codimension."""
    good = [U for U in all_subspaces(A, mode) if satisfies(w, U)]
    maximal = [U for U in good if not any(U <= V and U != V for V in good)]
    meet = maximal[0]
    for U in maximal[1:]:
        meet = subspace_intersect(meet, U)
    return maximal, meet
