"""The iterated sum-of-images / intersection construction of an
automorphism-invariant subgroup satisfying an outer commutator identity.

Starting from a normal subgroup ``N_0 = N`` with ``w(N, .., N) = 1``, each
step ``k = 1..t`` forms

* ``G_k``: the join of all automorphic images of ``N_{k-1}``, together with
  a small spanning subfamily of those images, and
* ``N_k``: the intersection of the images in that subfamily.

``H = G_t`` is characteristic, satisfies ``w``, and when a codimension is
in play, ``codim H <= f^(t-1)(codim N)`` with ``f(x) = x (x + 1)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .automorphisms import Automorphism, apply, automorphism_group, is_characteristic
from .exact import Log2, ceil_f_iter_log2, certified_le_f_iter, f_iter, le
from .groups import (
    FiniteGroup,
    GroupError,
    Subgroup,
    index,
    intersect,
    intersect_all,
    is_normal,
    is_prime_power_of,
    join,
    join_all,
    p_rank,
    quotient,
)
from .words import AnyWord, OuterWord, satisfies_identity, verbal_subgroup

__all__ = [
    "CodimKind",
    "LOG2_INDEX",
    "NO_CODIM",
    "prank",
    "parse_codim",
    "CertificateError",
    "codim",
    "f_iter",
    "AxiomReport",
    "check_codim_axioms",
    "spanning_subfamily",
    "select_spanning_images",
    "Lemma1Outcome",
    "check_lemma1",
    "Step",
    "ConstructionTrace",
    "km_construct",
]


class CertificateError(AssertionError):
    """A property guaranteed by the theory failed; carries a witness."""


@dataclass(frozen=True)
class CodimKind:
    kind: str  # "log2" | "prank" | "none"
    p: Optional[int] = None

    def __str__(self):
        return f"prank:{self.p}" if self.kind == "prank" else self.kind

    @property
    def defined(self) -> bool:
        return self.kind != "none"


LOG2_INDEX = CodimKind("log2")
NO_CODIM = CodimKind("none")


def prank(p: int) -> CodimKind:
    return CodimKind("prank", int(p))


def parse_codim(text: str) -> CodimKind:
    text = text.strip().lower()
    if text == "log2":
        return LOG2_INDEX
    if text == "none":
        return NO_CODIM
    if text.startswith("prank:"):
        p = int(text.split(":", 1)[1])
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"prank needs a prime, got {p}")
        return prank(p)
    raise ValueError(f"unknown codimension {text!r}; use log2, prank:<p> or none")


def _check_kind(G: FiniteGroup, kind: CodimKind) -> None:
    if kind.kind == "prank" and not is_prime_power_of(G.order, kind.p):
        raise GroupError(f"order not a power of p: |G| = {G.order}, p = {kind.p}")


def codim(N: Subgroup, kind: CodimKind):
    """``log2 |G:N|`` as a :class:`Log2`, or the rank of ``G/N`` as an int."""
    if kind.kind == "log2":
        return Log2(index(N))
    if kind.kind == "prank":
        key = ("prank", kind.p, N.mask)
        cache = N.parent.cache
        if key not in cache:
            _check_kind(N.parent, kind)
            Q, _ = quotient(N.parent, N)
            cache[key] = p_rank(Q, kind.p)
        return cache[key]
    raise ValueError("codimension is not defined for kind 'none'")


def _plus_one_bound(c, r: int) -> bool:
    """``r <= c + 1``."""
    return le(r - 1, c)


# spanning subfamilies

def spanning_subfamily(family: Sequence[Subgroup]) -> tuple[Subgroup, list[int]]:
    """Greedy subfamily whose join equals the join of ``family``.

    Members are scanned largest first (ties in input order) and kept when
    they strictly enlarge the running join.  Returns the total join and
    the kept indices into ``family``.
    """
    total = join_all(family)
    order = sorted(range(len(family)), key=lambda i: -family[i].order)
    running = None
    chosen = []
    for i in order:
        S = family[i]
        if running is not None and S <= running:
            continue
        running = S if running is None else join(running, S)
        chosen.append(i)
        if running == total:
            break
    return total, sorted(chosen)


def select_spanning_images(N: Subgroup, auts: Sequence[Automorphism], kind: CodimKind):
    """Join of all automorphic images of ``N`` and a spanning selection.

    Returns ``(total, selected_indices, images)`` where ``images[i]`` is
    ``auts[i](N)``.  With a codimension, the selection has at most
    ``codim N + 1`` members; otherwise every distinct image is selected.
    """
    images = [apply(phi, N) for phi in auts]
    if not kind.defined:
        seen = {}
        for i, S in enumerate(images):
            seen.setdefault(S, i)
        return join_all(images), sorted(seen.values()), images
    c = codim(N, kind)
    total, chosen = spanning_subfamily(images)
    if not _plus_one_bound(c, len(chosen)):
        raise CertificateError(
            f"codimension axiom 3 violated: {len(chosen)} images selected for codim {c}; "
            f"N = {list(N.elements)}")
    return total, chosen, images


# codimension axioms

@dataclass
class AxiomReport:
    kind: CodimKind
    checked: dict = field(default_factory=lambda: {"0": 0, "1": 0, "2": 0, "3": 0})
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"kind": str(self.kind), "checked": dict(self.checked), "violations": list(self.violations),
                "ok": self.ok}


def check_codim_axioms(kind: CodimKind, G: FiniteGroup, samples: Sequence[Subgroup],
                       auts: Optional[Sequence[Automorphism]] = None, max_family: int = 3) -> AxiomReport:
    """Check codimension properties 0-3 on ``samples`` (normal subgroups).

    Property 3 is checked with the greedy selector on every subfamily of
    at most ``max_family`` samples, on the whole sample list, and on the
    automorphic-image family of each sample.
    """
    if not kind.defined:
        raise ValueError("no codimension to check for kind 'none'")
    _check_kind(G, kind)
    for S in samples:
        if S.parent is not G or not is_normal(S):
            raise GroupError("samples must be normal subgroups of G")
    auts = automorphism_group(G) if auts is None else auts
    rep = AxiomReport(kind)
    cd = {S: codim(S, kind) for S in samples}

    def fmt(S):
        return list(S.elements)

    for A, B in itertools.product(samples, repeat=2):
        if B <= A:
            rep.checked["0"] += 1
            if not le(cd[A], cd[B]):
                rep.violations.append(f"axiom 0: {fmt(A)} >= {fmt(B)} but codim {cd[A]} > {cd[B]}")
    for S in samples:
        for i, phi in enumerate(auts):
            img = apply(phi, S)
            rep.checked["1"] += 1
            if not le(codim(img, kind), cd[S]):
                rep.violations.append(f"axiom 1: aut #{i} raises codim of {fmt(S)}")
    for A, B in itertools.combinations_with_replacement(samples, 2):
        rep.checked["2"] += 1
        c = codim(intersect(A, B), kind)
        bound = _sum_codim(cd[A], cd[B])
        if not le(c, bound):
            rep.violations.append(f"axiom 2: codim({fmt(A)} & {fmt(B)}) = {c} > {cd[A]} + {cd[B]}")

    families = []
    for size in range(1, min(max_family, len(samples)) + 1):
        families.extend(itertools.combinations(samples, size))
    families.append(tuple(samples))
    for S in samples:
        families.append(tuple(apply(phi, S) for phi in auts))
    for fam in families:
        if not fam:
            continue
        rep.checked["3"] += 1
        top = max((codim(S, kind) for S in fam), key=_sort_value)
        _, chosen = spanning_subfamily(fam)
        if not _plus_one_bound(top, len(chosen)):
            rep.violations.append(
                f"axiom 3: greedy selection of {len(chosen)} members from {[fmt(S) for S in fam]} "
                f"exceeds codim {top} + 1")
    return rep


def _sum_codim(a, b):
    if isinstance(a, Log2):
        return Log2(a.n * b.n)
    return a + b


def _sort_value(c):
    return c.n if isinstance(c, Log2) else c


# intersection/join lemma

@dataclass
class Lemma1Outcome:
    hypothesis: bool
    conclusion: Optional[bool]
    n_hat: Optional[Subgroup] = None
    g_hat: Optional[Subgroup] = None
    failing_member: Optional[int] = None


def check_lemma1(w: AnyWord, m: int, G: FiniteGroup, family: Sequence[Subgroup]) -> Lemma1Outcome:
    """Check the hypothesis ``w(N x m, G x (t-m)) = 1`` for each member and,
    if it holds, the conclusion for ``N^ = meet``, ``G^ = join`` with one
    fewer ``N``-slot.
    """
    t = w.weight
    if not 1 <= m <= t:
        raise ValueError(f"need 1 <= m <= {t}, got {m}")
    if not family:
        raise ValueError("family must be nonempty")
    for N in family:
        if N.parent is not G or not is_normal(N):
            raise GroupError("family members must be normal subgroups of G")
    whole = G.whole
    for i, N in enumerate(family):
        if not verbal_subgroup(w, [N] * m + [whole] * (t - m)).is_trivial():
            return Lemma1Outcome(False, None, failing_member=i)
    n_hat = intersect_all(family, G)
    g_hat = join_all(family, G)
    ok = verbal_subgroup(w, [n_hat] * (m - 1) + [g_hat] * (t - m + 1)).is_trivial()
    return Lemma1Outcome(True, ok, n_hat, g_hat)


# the construction

@dataclass
class Step:
    k: int
    G_k: Subgroup
    N_k: Subgroup
    selected_autos: list
    p_k: int
    l_k: object = None
    fixed_point: bool = False


@dataclass
class ConstructionTrace:
    word: OuterWord
    kind: CodimKind
    N: Subgroup
    l_0: object
    steps: list
    H: Subgroup
    bound: Optional[str] = None
    certificate: dict = field(default_factory=dict)

    def to_dict(self, labels: bool = False) -> dict:
        """JSON-ready form; all numbers are exact strings."""
        def sub(S):
            return {"order": str(S.order), "index": str(index(S)), "elements": [str(e) for e in S.elements]}

        return {
            "word": self.word.render(),
            "codim": str(self.kind),
            "N": sub(self.N),
            "l_0": None if self.l_0 is None else str(self.l_0),
            "steps": [
                {
                    "k": str(s.k),
                    "G_k": sub(s.G_k),
                    "N_k": sub(s.N_k),
                    "selected_autos": [str(i) for i in s.selected_autos],
                    "p_k": str(s.p_k),
                    "l_k": None if s.l_k is None else str(s.l_k),
                    "fixed_point": s.fixed_point,
                }
                for s in self.steps
            ],
            "H": sub(self.H),
            "bound": self.bound,
            "certificate": self.certificate,
        }


def _fail(msg: str):
    raise CertificateError(msg)


def km_construct(G: FiniteGroup, N: Subgroup, w: AnyWord, kind: CodimKind = LOG2_INDEX,
                 auts: Optional[Sequence[Automorphism]] = None) -> tuple[Subgroup, ConstructionTrace]:
    """Run the ``t``-step construction from ``N`` and certify the result.

    Raises :class:`GroupError` on bad input and :class:`CertificateError`
    if any guaranteed property fails (which would be a bug).
    """
    if N.parent is not G:
        raise GroupError("parent mismatch")
    if not is_normal(N):
        raise GroupError("not normal")
    if not satisfies_identity(w, N):
        raise GroupError("identity fails on N")
    _check_kind(G, kind)
    auts = automorphism_group(G) if auts is None else list(auts)
    t = w.weight
    whole_cd = kind.defined
    l0 = codim(N, kind) if whole_cd else None

    steps: list[Step] = []
    prev_N, prev_l = N, l0
    for k in range(1, t + 1):
        total, chosen, images = select_spanning_images(prev_N, auts, kind)
        N_k = intersect_all([images[i] for i in chosen], G)
        l_k = codim(N_k, kind) if whole_cd else None
        fixed = total == prev_N and N_k == prev_N
        step = Step(k, total, N_k, list(chosen), len(chosen) - 1, l_k, fixed)
        steps.append(step)

        if not N_k <= total:
            _fail(f"step {k}: N_k not contained in G_k")
        if not verbal_subgroup(w, [N_k] * (t - k) + [total] * k).is_trivial():
            _fail(f"step {k}: w(N_k x {t - k}, G_k x {k}) is not trivial")
        if whole_cd:
            if not le(step.p_k, prev_l):
                _fail(f"step {k}: p_k = {step.p_k} > l_(k-1) = {prev_l}")
            if not certified_le_f_iter(l_k, 1, prev_l):
                _fail(f"step {k}: l_k = {l_k} > f(l_(k-1)), l_(k-1) = {prev_l}")
            if not le(codim(total, kind), prev_l):
                _fail(f"step {k}: codim G_k > l_(k-1)")
        prev_N, prev_l = N_k, l_k

    H = steps[-1].G_k
    if not is_characteristic(H, auts):
        _fail(f"H = {list(H.elements)} is not characteristic")
    if not satisfies_identity(w, H):
        _fail(f"H = {list(H.elements)} does not satisfy {w.render()}")
    trace = ConstructionTrace(w if isinstance(w, OuterWord) else w.base, kind, N, l0, steps, H)
    trace.certificate = {
        "characteristic": True,
        "satisfies_identity": True,
        "automorphisms": str(len(auts)),
        "fixed_point_from_step": next((str(s.k) for s in steps if s.fixed_point), None),
    }
    if whole_cd:
        lH = codim(H, kind)
        ok = certified_le_f_iter(lH, t - 1, l0)
        trace.bound = f"f^{t - 1}({l0})"
        trace.certificate.update({"codim_H": str(lH), "bound": trace.bound, "bound_holds": ok})
        if kind.kind == "log2":
            ceil_bound = ceil_f_iter_log2(t - 1, l0)
            trace.certificate.update({
                "index_N": str(index(N)),
                "index_H": str(index(H)),
                "ceil_bound": str(ceil_bound),
                # |G:H| <= 2^ceil(bound)
                "index_le_2_pow_ceil_bound": (index(H) - 1).bit_length() <= ceil_bound,
            })
            if l0.is_integral:
                trace.certificate["bound_value"] = str(f_iter(t - 1, l0.exact))
        else:
            trace.certificate["bound_value"] = str(f_iter(t - 1, l0))
        if not ok:
            _fail(f"codim H = {lH} exceeds f^{t - 1}({l0})")
    return H, trace
