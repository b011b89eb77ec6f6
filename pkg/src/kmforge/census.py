"""Normal subgroups maximal among those satisfying an outer identity, and
the descending chain ``G_0 >= G_1 >= .. >= G_(t-1)`` that bounds them.

With ``n`` the largest index among the maximal subgroups, their number is
at most ``2 ** F^(t-1)(n)`` where ``F(x) = x * n ** (2 ** x)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .caps import CapExceeded, get_caps
from .construction import LOG2_INDEX, CertificateError, km_construct
from .exact import F_iter
from .groups import FiniteGroup, Subgroup, index, intersect_all, join, normal_subgroups
from .words import OuterWord, PermutedWord, all_permutations, satisfies_identity, verbal_subgroup

__all__ = ["CensusResult", "maximal_identity_subgroups", "census_chain", "seeded_containment", "F_iter"]


def maximal_identity_subgroups(G: FiniteGroup, w: OuterWord) -> list[Subgroup]:
    """Normal subgroups satisfying ``w`` that are inclusion-maximal among such."""
    good = [N for N in normal_subgroups(G) if satisfies_identity(w, N)]
    return [N for N in good if not any(N < M for M in good)]


@dataclass
class CensusResult:
    word: OuterWord
    maximal_subgroups: list
    chain: list = field(default_factory=list)
    subfamilies: list = field(default_factory=list)
    intersection: Optional[Subgroup] = None
    bound_n: Optional[int] = None
    bound_exponent: Optional[int] = None
    bound_value: Optional[int] = None
    checks: list = field(default_factory=list)  # (label, passed)

    @property
    def verified(self) -> bool:
        return all(ok for _, ok in self.checks)

    def to_dict(self) -> dict:
        def sub(S):
            return {"order": str(S.order), "index": str(index(S)),
                    "generators": [str(g) for g in S.generators],
                    "elements": [str(e) for e in S.elements]}

        return {
            "word": self.word.render(),
            "maximal_subgroups": [sub(S) for S in self.maximal_subgroups],
            "count": str(len(self.maximal_subgroups)),
            "chain": [sub(S) for S in self.chain],
            "subfamilies": [[str(i) for i in fam] for fam in self.subfamilies],
            "intersection": sub(self.intersection) if self.intersection is not None else None,
            "bound_n": None if self.bound_n is None else str(self.bound_n),
            "bound_exponent": None if self.bound_exponent is None else str(self.bound_exponent),
            "bound_value": None if self.bound_value is None else str(self.bound_value),
            "checks": [{"check": label, "passed": ok} for label, ok in self.checks],
            "verified": self.verified,
        }


def _all_sigma_trivial(w: OuterWord, args: list, perms) -> bool:
    seen = set()
    for sigma in perms:
        ws = PermutedWord(w, sigma)
        key = tuple(S.mask for S in ws.reorder(args))
        if key in seen:
            continue
        seen.add(key)
        if not verbal_subgroup(ws, args).is_trivial():
            return False
    return True


def census_chain(G: FiniteGroup, w: OuterWord, strict: bool = True) -> CensusResult:
    """Build the chain and verify every identity it is supposed to satisfy.

    Checks, in order: identity ``(k)`` for ``k = 0..t`` over all
    permutations of the variables and all maximal ``N``; containment of
    ``G_(t-1)`` in every maximal subgroup; the count bound.  With
    ``strict`` a failed check raises :class:`CertificateError`.
    """
    t = w.weight
    cap = get_caps().census_weight
    if t > cap:
        raise CapExceeded(f"census limited to weight {cap}, got {t}")
    family = maximal_identity_subgroups(G, w)
    res = CensusResult(w, family)
    if not family:
        return res

    chain = [family[0]]
    for _ in range(1, t):
        prev = chain[-1]
        reps: dict = {}
        for i, N in enumerate(family):
            reps.setdefault(join(N, prev), i)
        chosen = sorted(reps.values())
        res.subfamilies.append(chosen)
        chain.append(intersect_all([prev] + [family[i] for i in chosen]))
    res.chain = chain
    res.intersection = intersect_all(family)

    perms = all_permutations(t)
    res.checks.append(("(0)", _all_sigma_trivial(w, [chain[0]] * t, perms)))
    for k in range(1, t + 1):
        ok = True
        for N in family:
            prod = join(N, chain[k - 1])
            args = ([chain[k]] * (t - k) if k < t else []) + [prod] * k
            if not _all_sigma_trivial(w, args, perms):
                ok = False
                break
        res.checks.append((f"({k})", ok))
    last = chain[t - 1]
    res.checks.append(("G_(t-1) in every N", all(last <= N for N in family)))
    res.checks.append(("G_(t-1) in intersection", last <= res.intersection))

    n = max(index(N) for N in family)
    res.bound_n = n
    count = len(family)
    try:
        e = F_iter(t - 1, n, n, max_bits=get_caps().bound_bits)
    except OverflowError:
        res.checks.append(("count bound (finite only; bound exceeds cap)", True))
    else:
        res.bound_exponent = e
        if e <= get_caps().bound_bits:
            res.bound_value = 1 << e
        # count <= 2^e
        res.checks.append((f"count {count} <= 2^F^{t - 1}({n})", (count - 1).bit_length() <= e))
    if strict and not res.verified:
        failed = [label for label, ok in res.checks if not ok]
        raise CertificateError(f"census checks failed for {w.render()}: {failed}")
    return res


def seeded_containment(G: FiniteGroup, w: OuterWord, family: Optional[list] = None) -> list[dict]:
    """Run the construction seeded at each maximal ``N``.

    The construction itself certifies that each result is characteristic
    and satisfies ``w``; whether it lands inside ``N`` is only observed.
    """
    family = maximal_identity_subgroups(G, w) if family is None else family
    out = []
    for N in family:
        H, _ = km_construct(G, N, w, LOG2_INDEX)
        out.append({"N_index": index(N), "H_index": index(H), "H_inside_N": H <= N})
    return out
