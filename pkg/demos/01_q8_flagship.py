"""Walk through the construction on the quaternion group by hand.

Start from the normal subgroup <i> of Q8, which is abelian but not
characteristic, and push it to a characteristic abelian subgroup of
bounded index.
"""
from kmforge import catalog
from kmforge.automorphisms import apply, automorphism_group
from kmforge.construction import LOG2_INDEX, codim, km_construct
from kmforge.groups import index, subgroup_generate
from kmforge.words import parse_word

Q8 = catalog.get("Q8")
i, j = Q8.generators
print(Q8, "- generators i =", i, "and j =", j)

N = subgroup_generate(Q8, [i])
w = parse_word("[x1,x2]")  # abelian identity, [u,v] = u^-1 v^-1 u v
print("N = <i> =", N.elements, "index", index(N))

# <i> is moved around by automorphisms: the images are <i>, <j>, <k>
auts = automorphism_group(Q8)
images = sorted({apply(phi, N).elements for phi in auts})
print(len(auts), "automorphisms; distinct images of N:", images)

H, trace = km_construct(Q8, N, w, LOG2_INDEX)
for s in trace.steps:
    print(f"step {s.k}: |G_k| = {s.G_k.order}, N_k = {s.N_k.elements}, "
          f"selected {s.selected_autos}, l_k = {s.l_k}")

print("H =", H.elements, "- the centre {1, -1}")
print("codim N =", codim(N, LOG2_INDEX), " codim H =", codim(H, LOG2_INDEX))
print("bound", trace.certificate["bound"], "=", trace.certificate["bound_value"])
# the bound is attained here: |Q8 : Z| = 4 = 2^f(1)
