"""The same construction for ideals of small algebras over prime fields."""
from kmforge.algebras import (
    algebra_automorphisms_bruteforce,
    all_subspaces,
    km_construct_algebra,
    maximal_identity_subspaces,
    parse_multiword,
    satisfies,
)
from kmforge.io import algebra_corpus

corpus = algebra_corpus()
A = corpus["abc_f2"]  # a*b = c, everything else zero
print(A, "with", len(algebra_automorphisms_bruteforce(A)), "automorphisms")

w = parse_multiword("(x1*x2)", A.field)  # zero-product identity
maximal, meet = maximal_identity_subspaces(A, w, "twosided")
print("maximal two-sided ideals with zero product:", [U.basis for U in maximal])
print("their intersection:", meet.basis)

for N in all_subspaces(A, "twosided"):
    if satisfies(w, N):
        H, trace = km_construct_algebra(A, N, w)
        print(f"N = {N.basis} -> H = {H.basis}  codim {trace.certificate['codim_N']} -> "
              f"{trace.certificate['codim_H']} (bound {trace.certificate['bound_value']})")

# a Lie algebra: the Heisenberg algebra over F3 and the abelian identity
L = corpus["heisenberg_lie_f3"]
lie = parse_multiword("(x1*x2)", L.field)
for N in all_subspaces(L, "twosided"):
    if satisfies(lie, N) and N.dim == 2:
        H, trace = km_construct_algebra(L, N, lie)
        print("heisenberg:", N.basis, "->", H.basis, trace.certificate["scope"])
