import math

import pytest
from hypothesis import given, strategies as st

from kmforge import catalog
from kmforge.automorphisms import apply, automorphism_group, is_characteristic
from kmforge.construction import (
    LOG2_INDEX,
    NO_CODIM,
    CertificateError,
    check_codim_axioms,
    check_lemma1,
    codim,
    km_construct,
    parse_codim,
    prank,
    select_spanning_images,
    spanning_subfamily,
)
from kmforge.exact import F_iter, Log2, ceil_f_iter_log2, certified_le_f_iter, f_iter, le
from kmforge.groups import (
    GroupError,
    all_subgroups,
    index,
    intersect_all,
    normal_closure,
    normal_subgroups,
    subgroup_generate,
)
from kmforge.words import outer_words, parse_word, satisfies_identity, verbal_subgroup

from conftest import group_names

COMM = parse_word("[x1,x2]")


def center_of_q8(G):
    return normal_closure(G, [G.power(G.generators[0], 2)])


# exact arithmetic

def test_f_iter_examples():
    assert f_iter(0, 5) == 5
    assert (f_iter(1, 1), f_iter(2, 1), f_iter(3, 1)) == (2, 6, 42)
    assert f_iter(1, 0) == 0
    assert f_iter(2, Log2(4)) == 42


def test_F_iter_examples():
    assert F_iter(0, 3, 2) == 3
    assert F_iter(1, 2, 2) == 32
    assert F_iter(1, 1, 1) == 1
    with pytest.raises(OverflowError, match="value exceeds representable cap"):
        F_iter(3, 2, 2, max_bits=10**6)


def test_log2_values():
    assert Log2(8) == 3 and str(Log2(8)) == "3"
    assert str(Log2(3)) == "log2(3)" and Log2(3) != 2
    assert Log2(3) < 2 and Log2(5) > 2
    assert le(Log2(3), Log2(3)) and le(1, Log2(3))
    with pytest.raises(TypeError):
        f_iter(1, Log2(3))


def test_non_integral_bound_certificate():
    # log2(3) * (log2(3) + 1) = 4.097..., so ceil = 5
    assert ceil_f_iter_log2(1, Log2(3)) == 5
    assert certified_le_f_iter(Log2(17), 1, Log2(3))
    assert not certified_le_f_iter(Log2(18), 1, Log2(3))


@given(st.integers(1, 4000), st.integers(1, 64), st.integers(0, 2))
def test_certified_comparison_agrees_with_integer_bound(a, b, k):
    # f^k(log2 b) compared via 2^lhs exponents when both sides are integral
    lhs, x = Log2(1 << (a % 12)), Log2(1 << (b % 6))
    assert certified_le_f_iter(lhs, k, x) == ((a % 12) <= f_iter(k, b % 6))


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_le_matches_integer_order_of_logs(m, n):
    assert le(Log2(m), Log2(n)) == (m <= n)


# codimension

def test_codim_examples(Q8):
    assert codim(Q8.whole, LOG2_INDEX) == 0
    assert codim(Q8.whole, prank(2)) == 0
    assert codim(catalog.get("C8").trivial, LOG2_INDEX) == 3
    assert codim(center_of_q8(Q8), prank(2)) == 2


def test_parse_codim():
    assert parse_codim("log2") == LOG2_INDEX
    assert parse_codim("prank:3") == prank(3)
    assert parse_codim("none") == NO_CODIM
    with pytest.raises(ValueError, match="prank needs a prime"):
        parse_codim("prank:4")
    with pytest.raises(ValueError, match="unknown codimension"):
        parse_codim("dim")


def test_axioms_examples(Q8):
    assert check_codim_axioms(LOG2_INDEX, Q8, [Q8.whole]).ok
    i, j = Q8.generators
    cyc = [subgroup_generate(Q8, [x]) for x in (i, j, Q8.mul(i, j))]
    rep = check_codim_axioms(LOG2_INDEX, Q8, cyc)
    assert rep.ok and rep.checked["2"] == 6
    assert codim(intersect_all(cyc[:2]), LOG2_INDEX) == 2


@given(st.sampled_from([G.name for G, _ in catalog.p_groups(32)]), st.data())
def test_prank_axioms_on_random_pairs(name, data):
    G = catalog.get(name)
    normals = normal_subgroups(G)
    pair = [data.draw(st.sampled_from(normals)) for _ in range(2)]
    assert check_codim_axioms(prank(catalog.prime_of(G)), G, pair).ok


def test_axioms_report_violations():
    # a fake codimension that is not monotone is reported, not raised
    from kmforge import construction

    G = catalog.get("C4")
    rep = construction.AxiomReport(LOG2_INDEX)
    assert rep.ok
    real = construction.codim
    try:
        construction.codim = lambda N, kind: N.order  # increases with N
        rep = check_codim_axioms(LOG2_INDEX, G, normal_subgroups(G))
    finally:
        construction.codim = real
    assert not rep.ok and any(v.startswith("axiom 0") for v in rep.violations)


# spanning selection

def test_spanning_images_examples(Q8, S3):
    auts = automorphism_group(Q8)
    Z = center_of_q8(Q8)
    total, chosen, _ = select_spanning_images(Z, auts, LOG2_INDEX)
    assert total == Z and chosen == [0]
    A = subgroup_generate(Q8, [Q8.generators[0]])
    total, chosen, images = select_spanning_images(A, auts, LOG2_INDEX)
    assert total.is_whole() and len(chosen) == 2 and chosen[0] == 0
    assert images[chosen[1]] != A
    A3 = subgroup_generate(S3, [S3.generators[0]])
    total, chosen, _ = select_spanning_images(A3, automorphism_group(S3), LOG2_INDEX)
    assert total == A3 and chosen == [0]


def test_spanning_subfamily_prefers_largest_first():
    G = catalog.get("C4")
    C2 = subgroup_generate(G, [2])
    total, chosen = spanning_subfamily([G.trivial, C2, G.whole])
    assert total.is_whole() and chosen == [2]


@given(group_names(24), st.data())
def test_selection_size_bound(name, data):
    G = catalog.get(name)
    N = data.draw(st.sampled_from(normal_subgroups(G)))
    auts = automorphism_group(G)
    kinds = [LOG2_INDEX]
    if catalog.prime_of(G):
        kinds.append(prank(catalog.prime_of(G)))
    for kind in kinds:
        total, chosen, images = select_spanning_images(N, auts, kind)
        assert le(len(chosen) - 1, codim(N, kind))
        assert total == spanning_subfamily([images[i] for i in chosen])[0]


# intersection/join lemma

def test_lemma1_examples(Q8):
    i, j = Q8.generators
    family = [subgroup_generate(Q8, [x]) for x in (i, j, Q8.mul(i, j))]
    out = check_lemma1(COMM, 2, Q8, family)
    assert out.hypothesis and out.conclusion
    assert out.n_hat == center_of_q8(Q8) and out.g_hat.is_whole()
    single = check_lemma1(COMM, 1, Q8, [center_of_q8(Q8)])
    assert single.hypothesis and single.conclusion


def test_lemma1_hypothesis_failure_marker(S3):
    out = check_lemma1(COMM, 2, S3, [S3.whole])
    assert not out.hypothesis and out.conclusion is None and out.failing_member == 0
    with pytest.raises(ValueError):
        check_lemma1(COMM, 3, S3, [S3.whole])


@given(group_names(24), st.integers(1, 4), st.data())
def test_lemma1_property(name, t, data):
    G = catalog.get(name)
    w = data.draw(st.sampled_from(outer_words(t)))
    m = data.draw(st.integers(1, t))
    normals = normal_subgroups(G)
    family = data.draw(st.lists(st.sampled_from(normals), min_size=1, max_size=4))
    out = check_lemma1(w, m, G, family)
    if out.hypothesis:
        assert out.conclusion


# the construction

def test_s3_alternating():
    S3 = catalog.get("S3")
    A3 = subgroup_generate(S3, [S3.generators[0]])
    H, tr = km_construct(S3, A3, COMM, LOG2_INDEX)
    assert H == A3
    assert tr.steps[0].G_k == tr.steps[0].N_k == A3 and tr.steps[1].G_k == A3
    assert tr.certificate["codim_H"] == "1" and tr.certificate["bound_value"] == "2"


def test_q8_flagship(Q8):
    # hand run: images of <i> span Q8, <i> & <j> = {+-1}, and [{+-1}, Q8] = 1
    A = subgroup_generate(Q8, [Q8.generators[0]])
    H, tr = km_construct(Q8, A, COMM, LOG2_INDEX)
    Z = center_of_q8(Q8)
    assert H == Z
    assert tr.steps[0].G_k.is_whole() and tr.steps[0].N_k == Z
    assert tr.steps[1].G_k == Z
    c = tr.certificate
    assert (c["codim_H"], c["bound"], c["bound_value"], c["bound_holds"]) == ("2", "f^1(1)", "2", True)
    assert c["index_H"] == "4" and c["index_le_2_pow_ceil_bound"] is True


def test_q8_prank(Q8):
    A = subgroup_generate(Q8, [Q8.generators[0]])
    H, tr = km_construct(Q8, A, COMM, prank(2))
    assert H == center_of_q8(Q8)
    assert tr.l_0 == 1 and tr.certificate["codim_H"] == "2" and tr.certificate["bound_value"] == "2"


def test_characteristic_input_is_fixed(Q8):
    Z = center_of_q8(Q8)
    H, tr = km_construct(Q8, Z, COMM)
    assert H == Z
    assert all(s.G_k == s.N_k == Z and s.fixed_point for s in tr.steps)
    assert tr.certificate["fixed_point_from_step"] == "1"


def test_non_integral_log2_run():
    G = catalog.get("C3")
    H, tr = km_construct(G, G.trivial, COMM)
    assert H.is_trivial()
    c = tr.certificate
    assert c["codim_H"] == "log2(3)" and c["bound"] == "f^1(log2(3))"
    assert c["ceil_bound"] == "5" and c["index_le_2_pow_ceil_bound"] is True
    assert "bound_value" not in c


def test_none_kind_has_no_codimension(Q8):
    A = subgroup_generate(Q8, [Q8.generators[0]])
    H, tr = km_construct(Q8, A, COMM, NO_CODIM)
    assert H == center_of_q8(Q8)
    assert tr.l_0 is None and all(s.l_k is None for s in tr.steps)
    assert "codim_H" not in tr.certificate
    # every distinct image of <i> is selected
    assert len(tr.steps[0].selected_autos) == 3


def test_errors(S3):
    with pytest.raises(GroupError, match="identity fails on N"):
        km_construct(S3, S3.whole, COMM)
    with pytest.raises(GroupError, match="not normal"):
        km_construct(S3, subgroup_generate(S3, [S3.generators[1]]), COMM)
    with pytest.raises(GroupError, match="order not a power of p"):
        km_construct(S3, S3.trivial, COMM, prank(2))
    with pytest.raises(GroupError, match="parent mismatch"):
        km_construct(catalog.get("Q8"), S3.trivial, COMM)


def test_identity_only_automorphisms_fix_N(Q8):
    A = subgroup_generate(Q8, [Q8.generators[0]])
    H, tr = km_construct(Q8, A, COMM, LOG2_INDEX, auts=[automorphism_group(Q8)[0]])
    assert H == A and tr.certificate["automorphisms"] == "1"


def test_failed_invariance_raises_certificate_error(Q8, monkeypatch):
    monkeypatch.setattr("kmforge.construction.is_characteristic", lambda H, auts: False)
    with pytest.raises(CertificateError, match="not characteristic"):
        km_construct(Q8, center_of_q8(Q8), COMM)


def scratch_construct(G, N, t, auts):
    """Independent set-based rerun of the loop (oracle)."""
    def close(S):
        S = set(S) | {0}
        while True:
            new = S | {G.table[a][b] for a in S for b in S}
            if new == S:
                return frozenset(S)
            S = new

    prev = frozenset(N.elements)
    G_k = prev
    for _ in range(t):
        images = [frozenset(phi.map[x] for x in prev) for phi in auts]
        total = close(set().union(*images))
        order = sorted(range(len(images)), key=lambda i: -len(images[i]))
        running, chosen = frozenset({0}), []
        for i in order:
            if chosen and images[i] <= running:
                continue
            running = close(running | images[i])
            chosen.append(i)
            if running == total:
                break
        prev = frozenset.intersection(*(images[i] for i in chosen))
        G_k = total
    return G_k


@pytest.mark.parametrize("name", ["S3", "Q8", "D8", "A4", "C4xC2", "D12", "SL(2,3)"])
def test_matches_scratch_loop(name):
    G = catalog.get(name)
    auts = automorphism_group(G)
    for N in normal_subgroups(G):
        for w in (COMM, parse_word("[[x1,x2],x3]")):
            if satisfies_identity(w, N):
                H, _ = km_construct(G, N, w, LOG2_INDEX, auts)
                assert set(H.elements) == scratch_construct(G, N, w.weight, auts)


@given(group_names(24), st.integers(1, 4), st.data())
def test_construction_invariants(name, t, data):
    G = catalog.get(name)
    w = data.draw(st.sampled_from(outer_words(t)))
    N = data.draw(st.sampled_from([N for N in normal_subgroups(G) if satisfies_identity(w, N)]))
    auts = automorphism_group(G)
    H, tr = km_construct(G, N, w, LOG2_INDEX, auts)
    assert is_characteristic(H, auts) and satisfies_identity(w, H)
    assert certified_le_f_iter(Log2(index(H)), t - 1, Log2(index(N)))
    prev_l = Log2(index(N))
    for s in tr.steps:
        assert s.N_k <= s.G_k
        assert verbal_subgroup(w, [s.N_k] * (t - s.k) + [s.G_k] * s.k).is_trivial()
        assert le(s.p_k, prev_l)
        assert certified_le_f_iter(s.l_k, 1, prev_l)
        prev_l = s.l_k
    # idempotence
    H2, _ = km_construct(G, H, w, LOG2_INDEX, auts)
    assert H2 == H
    # deterministic trace
    assert km_construct(G, N, w, LOG2_INDEX, auts)[1].to_dict() == tr.to_dict()


@pytest.mark.parametrize("name", [G.name for G in catalog.groups(16)])
def test_result_is_among_characteristic_identity_subgroups(name):
    G = catalog.get(name)
    auts = automorphism_group(G)
    for w in (COMM, parse_word("[[x1,x2],x3]")):
        good = [A for A in all_subgroups(G) if satisfies_identity(w, A)
                and all(apply(phi, A) == A for phi in auts)]
        for N in normal_subgroups(G):
            if not satisfies_identity(w, N):
                continue
            H, _ = km_construct(G, N, w, LOG2_INDEX, auts)
            assert H in good
            assert certified_le_f_iter(Log2(index(H)), w.weight - 1, Log2(index(N)))


def test_p_group_sweep_under_prank():
    for G, p in catalog.p_groups(27):
        auts = automorphism_group(G)
        for N in normal_subgroups(G):
            for w in (COMM, parse_word("[[x1,x2],[x3,x4]]")):
                if satisfies_identity(w, N):
                    H, tr = km_construct(G, N, w, prank(p), auts)
                    assert tr.certificate["bound_holds"] is True
                    assert int(tr.certificate["codim_H"]) <= f_iter(w.weight - 1, codim(N, prank(p)))


def test_index_bound_is_tight_on_q8():
    # |G:H| = 2^f(1) exactly: the bound cannot be improved in general
    G = catalog.get("Q8")
    H, _ = km_construct(G, subgroup_generate(G, [G.generators[0]]), COMM)
    assert index(H) == 2 ** f_iter(1, 1)
    assert math.log2(index(H)) == 2
