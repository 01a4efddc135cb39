from __future__ import annotations

import networkx as nx
import pytest

from ekorlab.admissible import CapExceeded, KSigmaOrder, ParahoricSpec, k_w_set, parahoric, valid_parahorics
from ekorlab.iwahori import FrobSpec, NotQuasiSplit, iwahori_weyl
from ekorlab.newton import b_max, is_sigma_straight, mu_diamond
from ekorlab.rootdata import RootDatum, sorted_orbit
from ekorlab.strata import (all_translations_straight, bmax_straight_elements, cardinality_criterion,
                            classify_star, diagram_automorphisms, ekor_poset, fixed_weyl_group,
                            fixed_weyl_group_bruteforce, frobenius_from_node_perm, group_density_check, is_dense,
                            max_newton_meets_stratum, maximal_ekor, mu_ordinary_strata, qs_criterion,
                            reduce_to_simple_factors, special_vertices)

from support import coweight, datum, frob, gl


def gu4():
    d = datum("A", 3)
    return d, frob(d, [3, 2, 1])


def test_density_verdicts():
    d, s = gu4()
    iw = ParahoricSpec.iwahori(d)
    v = is_dense(d, coweight(d, 2), iw, s)
    assert not v.dense and v.witness is not None
    assert not is_sigma_straight(v.witness, s)
    assert v.qs_criterion is False
    # straight translations form the W_0^sigma-orbit of mu: 8 / |{1, s1 s3}| = 4
    assert len(v.maximal_strata) == 6 and len(v.ordinary_strata) == 4
    v = is_dense(d, coweight(d, 2), parahoric(d, [1, 3]), s)
    assert v.dense and v.witness is None and v.qs_criterion is True
    # K = {1} is not sigma-stable, so only the straightness test is used
    v = is_dense(d, coweight(d, 1), parahoric(d, [1]), s)
    assert v.dense and v.qs_criterion is None


def test_ordinary_strata_equal_maximal_iff_dense():
    d, s = gu4()
    for K in valid_parahorics(d):
        for i in (1, 2, 3):
            mu = coweight(d, i)
            same = mu_ordinary_strata(d, mu, K, s) == maximal_ekor(d, mu, K)
            assert same == is_dense(d, mu, K, s).dense


def test_maximal_ekor_counts():
    d, _ = gu4()
    mu = coweight(d, 2)
    assert len(maximal_ekor(d, mu, ParahoricSpec.iwahori(d))) == 6
    # hyperspecial K = {1,2,3}: only the dominant translation is K-minimal
    assert [t.lam for t in maximal_ekor(d, mu, parahoric(d, [1, 2, 3]))] == [mu]


@pytest.mark.parametrize("d,images,order", [
    (datum("A", 2), [2, 1], 2),
    (datum("A", 3), [3, 2, 1], 8),
    (datum("A", 4), [4, 3, 2, 1], 8),
    (datum("D", 4), [1, 2, 4, 3], 48),
    (datum("D", 4), [3, 2, 4, 1], 12),
    (datum("B", 3), [1, 2, 3], 48),
])
def test_fixed_weyl_group(d, images, order):
    s = frob(d, images)
    fast = fixed_weyl_group(d, s)
    assert len(fast) == order
    assert {u.perm for u in fast} == {u.perm for u in fixed_weyl_group_bruteforce(d, s)}


def test_fixed_weyl_group_e6_is_f4():
    d = datum("E", 6)
    assert len(fixed_weyl_group(d, frob(d, [6, 2, 5, 4, 3, 1]))) == 1152


def test_criteria_require_quasi_split():
    d = datum("A", 2)
    s = frob(d, omega=d.fundamental_coweight((0, 1)))
    with pytest.raises(NotQuasiSplit):
        qs_criterion(d, (1, 0), ParahoricSpec.iwahori(d), s)
    with pytest.raises(NotQuasiSplit):
        cardinality_criterion(d, s, (1, 0))
    with pytest.raises(NotQuasiSplit):
        fixed_weyl_group(d, s)


def test_cardinality_criterion_matches_straightness():
    for d in (datum("A", 3), datum("A", 4), datum("D", 4), datum("A", 5)):
        for delta in diagram_automorphisms(d):
            s = FrobSpec(d, delta)
            for i in range(1, d.rank + 1):
                mu = coweight(d, i)
                assert cardinality_criterion(d, s, mu) == all_translations_straight(d, mu, s)
                assert cardinality_criterion(d, s, mu) == qs_criterion(d, mu, ParahoricSpec.iwahori(d), s)


@pytest.mark.parametrize("fam,n,labels", [
    ("A", 3, [0, 1, 2, 3]), ("B", 3, [0, 1]), ("C", 2, [0, 2]), ("D", 4, [0, 1, 3, 4]),
    ("G", 2, [0]), ("F", 4, [0]), ("E", 6, [0, 1, 6]), ("E", 7, [0, 7]), ("E", 8, [0]),
])
def test_special_vertices(fam, n, labels):
    assert [nd[1] for nd in special_vertices(datum(fam, n))] == labels


def test_classify_examples():
    d = datum("A", 3)
    r = classify_star(d, frob(d), coweight(d, 2))
    assert r.holds and r.case == "trivial" and r.quasi_split
    r = classify_star(d, frob(d, [3, 2, 1]), coweight(d, 1, 2))
    assert r.holds and r.case == "A-odd"
    r = classify_star(d, frob(d, [3, 2, 1]), coweight(d, 2))
    assert not r.holds and r.case == "fails"
    assert classify_star(d, frob(d), (0, 0, 0)).case == "mu-zero"
    g = gl(8)
    r = classify_star(g, FrobSpec(g, {}, [1] + [0] * 7), (1,) * 5 + (0,) * 3)
    assert not r.holds and r.case == "non-qs-(i)" and r.quasi_split is False
    d4 = datum("D", 4)
    r = classify_star(d4, frob(d4, [1, 2, 4, 3]), coweight(d4, 3))
    assert r.holds and r.case == "D"


def res_sp(n, m):
    d = RootDatum([("C", n)] * m, "adjoint")
    return d, FrobSpec(d, {(c, i): ((c + 1) % m, i) for c in range(m) for i in range(1, n + 1)})


def test_multi_component_reduction():
    d, s = res_sp(2, 2)
    both = (0, 1, 0, 1)
    one = (0, 1, 0, 0)
    r = classify_star(d, s, both)
    assert not r.holds and r.case == "several-nonzero"
    r = classify_star(d, s, one)
    # sigma^2 is trivial on one factor
    assert r.holds and r.case == "trivial"
    parts = reduce_to_simple_factors(d, s, one)
    assert len(parts) == 1
    d1, s1, mu1 = parts[0]
    assert d1.types == (("C", 2),) and s1.is_trivial() and mu1 == (0, 1)
    assert reduce_to_simple_factors(d, s, (0, 0, 0, 0)) == ["zero"]
    # two independent factors: the condition holds factorwise
    pair = RootDatum([("A", 1), ("A", 1)])
    r = classify_star(pair, FrobSpec(pair), (1, 1))
    assert r.holds and len(r.detail) == 2


def test_frobenius_from_node_perm():
    d = datum("A", 3)
    rot = {(0, i): (0, (i + 1) % 4) for i in range(4)}
    s = frobenius_from_node_perm(d, rot)
    assert s.affine_node_perm == rot
    with pytest.raises(ValueError):
        frobenius_from_node_perm(d, {(0, 0): (0, 1), (0, 1): (0, 0), (0, 2): (0, 2), (0, 3): (0, 3)})


def test_poset_gl2():
    d = gl(2)
    P = ekor_poset(d, (1, 0), ParahoricSpec.iwahori(d), frob(d))
    assert P.number_of_nodes() == 3
    W = iwahori_weyl(d)
    tau = W.length_zero((1, 0))
    bottom = next(n for n, x in P.nodes(data="element") if x == tau)
    assert P.out_degree(bottom) == 2 and P.in_degree(bottom) == 0


def test_poset_mu_zero_single_node():
    d = datum("A", 2)
    P = ekor_poset(d, (0, 0), ParahoricSpec.iwahori(d), frob(d))
    assert P.number_of_nodes() == 1


def test_poset_structure_gu4():
    d, s = gu4()
    mu = coweight(d, 2)
    K = parahoric(d, [1, 3])
    P = ekor_poset(d, mu, K, s)
    assert P.number_of_nodes() == len(k_w_set(d, mu, K))
    assert nx.is_directed_acyclic_graph(P)
    for a, b in P.edges():
        assert P.nodes[a]["length"] < P.nodes[b]["length"]
    # Hasse diagram: no edge is implied by a longer path
    assert nx.transitive_reduction(P).number_of_edges() == P.number_of_edges()
    maximal = {P.nodes[n]["element"] for n in P if P.out_degree(n) == 0}
    assert maximal == set(maximal_ekor(d, mu, K))
    for n, data in P.nodes(data=True):
        assert data["straight"] == is_sigma_straight(data["element"], s)
    assert any(data["in_bmax"] for _, data in P.nodes(data=True))


def test_poset_iwahori_trivial_sigma_is_bruhat():
    d = datum("A", 2)
    W = iwahori_weyl(d)
    P = ekor_poset(d, (1, 0), ParahoricSpec.iwahori(d), frob(d))
    closure = nx.transitive_closure_dag(P)
    elts = dict(P.nodes(data="element"))
    for a in P:
        for b in P:
            if a != b:
                assert closure.has_edge(a, b) == W.bruhat_leq(elts[a], elts[b])


def test_maximal_newton_stratum_quasi_split():
    d, s = gu4()
    mu = coweight(d, 2)
    top = b_max(d, mu, s)
    assert top.nu == mu_diamond(d, mu, s)
    for v in sorted_orbit(d, mu):
        t = iwahori_weyl(d).translation(v)
        res = max_newton_meets_stratum(d, v, mu, s, top=top)
        if is_sigma_straight(t, s):
            assert res.holds
    assert not group_density_check(d, mu, ParahoricSpec.iwahori(d), s)
    assert group_density_check(d, mu, parahoric(d, [1, 3]), s)
    assert group_density_check(d, (0, 0, 0), ParahoricSpec.iwahori(d), s)
    assert max_newton_meets_stratum(d, (0, 0, 0), (0, 0, 0), s).holds


@pytest.mark.slow
def test_maximal_newton_stratum_division_algebra():
    d = gl(8)
    s = FrobSpec(d, {}, [1] + [0] * 7)
    mu = (1,) * 5 + (0,) * 3
    cands = bmax_straight_elements(d, mu, s)
    assert cands and all(x.length == 10 for x in cands)
    first = sorted_orbit(d, mu)[0]
    res = max_newton_meets_stratum(d, first, mu, s, candidates=cands)
    assert res.holds and res.witness in cands


def test_poset_iwahori_matches_pairwise_order():
    d, s = gu4()
    iw = ParahoricSpec.iwahori(d)
    P = ekor_poset(d, coweight(d, 2), iw, s)
    nodes = k_w_set(d, coweight(d, 2), iw)
    order = KSigmaOrder(iw, s)
    rel = nx.DiGraph()
    rel.add_nodes_from(range(len(nodes)))
    rel.add_edges_from((i, j) for i, a in enumerate(nodes) for j, b in enumerate(nodes) if i != j and order.leq(a, b))
    assert set(P.edges()) == set(nx.transitive_reduction(rel).edges())


def test_poset_comparison_cap():
    d, s = gu4()
    with pytest.raises(CapExceeded):
        ekor_poset(d, coweight(d, 2), parahoric(d, [1, 3]), s, cap=50)
