"""Compare the two codimensions on p-groups.

log2|G:N| counts the index in bits; the p-rank of G/N counts the
minimal number of generators of the quotient.  Both give a bound, and
the p-rank bound is often much smaller.
"""
from kmforge import catalog
from kmforge.automorphisms import automorphism_group
from kmforge.construction import LOG2_INDEX, codim, km_construct, prank
from kmforge.groups import normal_subgroups
from kmforge.words import parse_word, satisfies_identity

w = parse_word("[x1,x2]")
print(f"{'group':8s} {'|N|':>4s} {'log2':>6s} {'prank':>6s} {'|H| log2':>9s} {'|H| prank':>9s}")
for G, p in catalog.p_groups(32):
    if satisfies_identity(w, G.whole):
        continue  # abelian: H = G every time
    auts = automorphism_group(G)
    for N in normal_subgroups(G):
        if N.is_whole() or not satisfies_identity(w, N):
            continue
        H1, _ = km_construct(G, N, w, LOG2_INDEX, auts)
        H2, _ = km_construct(G, N, w, prank(p), auts)
        print(f"{G.name:8s} {N.order:4d} {str(codim(N, LOG2_INDEX)):>6s} {str(codim(N, prank(p))):>6s} "
              f"{H1.order:9d} {H2.order:9d}")
