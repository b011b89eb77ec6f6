"""Count maximal normal subgroups satisfying an identity and check the
descending chain that controls how many there can be."""
from kmforge import catalog
from kmforge.census import census_chain, seeded_containment
from kmforge.words import parse_word

for name, text in [("Q8", "[x1,x2]"), ("D8", "[x1,x2]"), ("S4", "[[x1,x2],x3]"), ("SL(2,3)", "[[x1,x2],x3]")]:
    G = catalog.get(name)
    w = parse_word(text)
    res = census_chain(G, w)
    sizes = [N.order for N in res.maximal_subgroups]
    print(f"{name:8s} {w.render():14s} maximal orders {sizes}, largest index n = {res.bound_n}")
    print("         chain orders", [S.order for S in res.chain], "verified:", res.verified)
    for label, ok in res.checks:
        print("           ", "ok " if ok else "BAD", label)

# seeding the construction at each maximal subgroup: does H land inside it?
obs = seeded_containment(catalog.get("D8"), parse_word("[x1,x2]"))
print("D8 seeds:", obs)
