import pytest
from hypothesis import given, strategies as st

from kmforge import catalog
from kmforge.caps import Caps, CapExceeded
from kmforge.census import census_chain, maximal_identity_subgroups, seeded_containment
from kmforge.construction import CertificateError
from kmforge.exact import F_iter
from kmforge.groups import all_subgroups, is_normal, join, normal_closure, subgroup_generate
from kmforge.words import PermutedWord, outer_words, parse_word, satisfies_identity, verbal_subgroup

from conftest import group_names

COMM = parse_word("[x1,x2]")


def maximal_oracle(G, w):
    """From the full subgroup lattice, not just the normal subgroups."""
    good = [A for A in all_subgroups(G) if is_normal(A) and satisfies_identity(w, A)]
    return {A for A in good if not any(A < B for B in good)}


def test_q8_abelian_census(Q8):
    res = census_chain(Q8, COMM)
    i, j = Q8.generators
    expected = {subgroup_generate(Q8, [x]) for x in (i, j, Q8.mul(i, j))}
    assert set(res.maximal_subgroups) == expected
    assert res.verified and res.bound_n == 2
    assert res.intersection == normal_closure(Q8, [Q8.power(i, 2)])
    assert res.chain[0] == res.maximal_subgroups[0]
    assert res.chain[1] <= res.intersection
    # 3 <= 2^F(2) = 2^(2 * 2^4)
    assert res.bound_exponent == 32 and res.bound_value == 2 ** 32


def test_s3_and_a5():
    S3 = catalog.get("S3")
    res = census_chain(S3, COMM)
    assert [N.order for N in res.maximal_subgroups] == [3] and res.verified
    A5 = catalog.get("A5")
    res = census_chain(A5, COMM)
    assert [N.order for N in res.maximal_subgroups] == [1] and res.verified
    assert res.bound_n == 60


@pytest.mark.parametrize("name", ["C6", "C4xC2", "3^2", "2^3"])
def test_abelian_group_is_its_own_census(name):
    G = catalog.get(name)
    res = census_chain(G, COMM)
    assert res.maximal_subgroups == [G.whole]
    assert res.bound_n == 1 and res.bound_exponent == F_iter(1, 1, 1) == 1
    assert all(S.is_whole() for S in res.chain)


def test_empty_family_for_trivial_identity():
    # a weight-one word never holds except on the trivial group, which is normal
    G = catalog.get("S3")
    res = census_chain(G, parse_word("x1"))
    assert [N.order for N in res.maximal_subgroups] == [1]


def test_census_weight_cap(monkeypatch):
    monkeypatch.setattr("kmforge.census.get_caps", lambda: Caps(census_weight=3))
    with pytest.raises(CapExceeded, match="census limited to weight 3, got 4"):
        census_chain(catalog.get("Q8"), parse_word("[[x1,x2],[x3,x4]]"))


def test_bound_overflow_is_reported(monkeypatch):
    monkeypatch.setattr("kmforge.census.get_caps", lambda: Caps(bound_bits=8))
    res = census_chain(catalog.get("S4"), parse_word("[[x1,x2],x3]"))
    assert res.verified and res.bound_exponent is None
    assert any("bound exceeds cap" in label for label, _ in res.checks)


def test_strict_failure(monkeypatch):
    monkeypatch.setattr("kmforge.census._all_sigma_trivial", lambda w, args, perms: False)
    with pytest.raises(CertificateError, match=r"census checks failed for \[x1,x2\]"):
        census_chain(catalog.get("Q8"), COMM)
    res = census_chain(catalog.get("Q8"), COMM, strict=False)
    assert not res.verified and res.to_dict()["verified"] is False


@pytest.mark.parametrize("name", [G.name for G in catalog.groups(16)])
def test_maximal_matches_oracle(name):
    G = catalog.get(name)
    for t in (2, 3):
        for w in outer_words(t):
            assert set(maximal_identity_subgroups(G, w)) == maximal_oracle(G, w)


@pytest.mark.parametrize("name", [G.name for G in catalog.groups(32)])
def test_all_catalog_groups_verify_strictly(name):
    G = catalog.get(name)
    for w in (COMM, parse_word("[[x1,x2],x3]")):
        res = census_chain(G, w)
        assert res.verified


@given(group_names(24), st.integers(2, 4), st.data())
def test_chain_properties(name, t, data):
    G = catalog.get(name)
    w = data.draw(st.sampled_from(outer_words(t)))
    res = census_chain(G, w)
    fam = res.maximal_subgroups
    assert len(res.chain) == t
    assert all(b <= a for a, b in zip(res.chain, res.chain[1:]))
    assert all(res.chain[-1] <= N for N in fam)
    # identity (k) checked independently for one random permutation
    k = data.draw(st.integers(0, t))
    sigma = tuple(data.draw(st.permutations(range(1, t + 1))))
    ws = PermutedWord(w, sigma)
    if k == 0:
        args = [res.chain[0]] * t
        assert verbal_subgroup(ws, args).is_trivial()
    else:
        for N in fam:
            prod = join(N, res.chain[k - 1])
            args = ([res.chain[k]] * (t - k) if k < t else []) + [prod] * k
            assert verbal_subgroup(ws, args).is_trivial()
    if res.bound_exponent is not None:
        # the exponent itself can have ~10^6 bits; never materialise 2^e
        assert (len(fam) - 1).bit_length() <= res.bound_exponent


def test_seeded_containment_q8(Q8):
    obs = seeded_containment(Q8, COMM)
    assert len(obs) == 3
    assert all(o == {"N_index": 2, "H_index": 4, "H_inside_N": True} for o in obs)


def test_to_dict_is_all_strings():
    d = census_chain(catalog.get("D8"), COMM).to_dict()
    assert d["count"] == "3" and d["verified"] is True

    def walk(x):
        if isinstance(x, dict):
            for v in x.values():
                yield from walk(v)
        elif isinstance(x, list):
            for v in x:
                yield from walk(v)
        else:
            yield x

    assert all(isinstance(v, (str, bool)) or v is None for v in walk(d))
