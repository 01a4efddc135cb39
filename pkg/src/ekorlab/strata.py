"""Maximal EKOR strata, density of the mu-ordinary locus, the classification of when
every translation in W_0(mu) is sigma-straight, and the EKOR closure poset."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from .admissible import (DEFAULT_CAP, CapExceeded, KSigmaOrder, ParahoricSpec, adm, is_K_minimal, k_w_set,
                         normalize_mu)
from .iwahori import ExtAffineElt, FrobSpec, NotQuasiSplit, iwahori_weyl
from .newton import (BClass, b_max, is_sigma_straight, kottwitz_point, newton_data,
                     newton_point)
from .rootdata import FiniteWeylElt, Node, RootDatum, sorted_orbit, weyl_orbit


# --------------------------------------------------------------------------------------
# maximal strata and density


def maximal_ekor(datum: RootDatum, mu: Sequence[int], K: ParahoricSpec) -> list[ExtAffineElt]:
    """Translations t^{mu'}, mu' in W_0(mu), that are minimal in W_K t^{mu'}."""
    W = iwahori_weyl(datum)
    mu = normalize_mu(datum, mu)
    out = []
    for v in sorted_orbit(datum, mu):
        t = W.translation(v)
        if is_K_minimal(t, K):
            out.append(t)
    return out


def mu_ordinary_strata(datum: RootDatum, mu: Sequence[int], K: ParahoricSpec,
                       sigma: FrobSpec) -> list[ExtAffineElt]:
    return [t for t in maximal_ekor(datum, mu, K) if is_sigma_straight(t, sigma)]


@dataclass
class DensityVerdict:
    dense: bool
    maximal_strata: list
    ordinary_strata: list
    witness: ExtAffineElt | None = None
    qs_criterion: bool | None = None


def is_dense(datum: RootDatum, mu: Sequence[int], K: ParahoricSpec, sigma: FrobSpec) -> DensityVerdict:
    """Every maximal EKOR stratum t^{mu'} is sigma-straight.

    When sigma stabilises W_0 and K, the product criterion p(W_K) W_0^sigma W_mu = W_0
    is evaluated as well, and a disagreement is treated as an internal error.  For K not
    stable under sigma the two conditions need not agree, so only the first is used.
    """
    maximal = maximal_ekor(datum, mu, K)
    ordinary = [t for t in maximal if is_sigma_straight(t, sigma)]
    witness = next((t for t in maximal if t not in ordinary), None)
    verdict = DensityVerdict(witness is None, maximal, ordinary, witness)
    if sigma.stabilizes_finite_weyl() and K.is_sigma_stable(sigma):
        verdict.qs_criterion = qs_criterion(datum, mu, K, sigma)
        if verdict.qs_criterion != verdict.dense:
            raise RuntimeError("straightness test and product criterion disagree")
    return verdict


# --------------------------------------------------------------------------------------
# the sigma-fixed part of W_0


def _longest_in(datum: RootDatum, J: Sequence[int]) -> FiniteWeylElt:
    """Longest element of the standard parabolic subgroup generated by the nodes J."""
    w = datum.weyl_identity()
    while True:
        k = next((k for k in J if w.perm[datum.simple_index[k]] < datum.N), None)
        if k is None:
            return w
        w = w * datum.simple_reflection(k)


def _generate(gens: Sequence[tuple], identity: tuple) -> set:
    seen = {identity}
    queue = deque([identity])
    while queue:
        w = queue.popleft()
        for g in gens:
            u = tuple(w[i] for i in g)
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return seen


def fixed_weyl_group(datum: RootDatum, sigma: FrobSpec) -> list[FiniteWeylElt]:
    """W_0^sigma, generated by the longest elements w_J of the sigma-orbits J of finite nodes."""
    perm = sigma.finite_node_perm()
    orbits, done = [], set()
    for nd in datum.nodes:
        if nd in done:
            continue
        orb, cur = [], nd
        while cur not in orb:
            orb.append(cur)
            cur = perm[cur]
        done.update(orb)
        orbits.append([datum.node_index[n] for n in orb])
    gens = [_longest_in(datum, J).perm for J in orbits]
    return [FiniteWeylElt(datum, p) for p in sorted(_generate(gens, datum.identity_perm))]


def fixed_weyl_group_bruteforce(datum: RootDatum, sigma: FrobSpec) -> list[FiniteWeylElt]:
    if not sigma.stabilizes_finite_weyl():
        raise NotQuasiSplit("sigma does not stabilise W_0")
    W = iwahori_weyl(datum)
    return [u for u in datum.weyl_elements() if sigma.apply(W.from_finite(u)).w == u.perm]


def _orbit_under(datum: RootDatum, group: Sequence[FiniteWeylElt], v) -> set:
    return {tuple(u.apply(v)) for u in group}


def qs_criterion(datum: RootDatum, mu: Sequence[int], K: ParahoricSpec, sigma: FrobSpec) -> bool:
    """p(W_K) W_0^sigma W_mu = W_0, tested on the orbit of mu."""
    if not sigma.stabilizes_finite_weyl():
        raise NotQuasiSplit("sigma does not stabilise W_0")
    mu = normalize_mu(datum, mu)
    inner = _orbit_under(datum, fixed_weyl_group(datum, sigma), mu)
    pk = [FiniteWeylElt(datum, p) for p in sorted(K.finite_image)]
    target = len(weyl_orbit(datum, mu))
    reached = set()
    for u in pk:
        for v in inner:
            reached.add(tuple(u.apply(v)))
        if len(reached) == target:
            return True
    return len(reached) == target


def cardinality_criterion(datum: RootDatum, sigma: FrobSpec, mu: Sequence[int]) -> bool:
    """|W_0^sigma / (W_0^sigma cap W_mu)| = |W_0 / W_mu|, i.e. W_0^sigma W_mu = W_0."""
    if not sigma.stabilizes_finite_weyl():
        raise NotQuasiSplit("sigma does not stabilise W_0")
    mu = normalize_mu(datum, mu)
    return len(_orbit_under(datum, fixed_weyl_group(datum, sigma), mu)) == len(weyl_orbit(datum, mu))


# --------------------------------------------------------------------------------------
# classification of "every t^{mu'} is sigma-straight"


@dataclass
class StarResult:
    holds: bool
    case: str
    quasi_split: bool | None = None
    detail: list = field(default_factory=list)


def all_translations_straight(datum: RootDatum, mu: Sequence[int], sigma: FrobSpec) -> bool:
    W = iwahori_weyl(datum)
    return all(is_sigma_straight(W.translation(v), sigma)
               for v in sorted_orbit(datum, normalize_mu(datum, mu)))


def _highest_marks(datum: RootDatum, c: int) -> dict[int, int]:
    comp = datum.components[c]
    coeffs = datum.root_coeffs[datum.highest[c]]
    return {i: coeffs[comp.node_offset + i - 1] for i in range(1, comp.rank + 1)}


def special_vertices(datum: RootDatum, c: int = 0) -> list[Node]:
    """Node 0 and the finite nodes whose highest-root coefficient is 1."""
    marks = _highest_marks(datum, c)
    return [(c, 0)] + [(c, i) for i, m in sorted(marks.items()) if m == 1]


def _perm_order(perm: dict) -> int:
    n, cur = 1, dict(perm)
    while any(cur[k] != k for k in cur):
        cur = {k: perm[v] for k, v in cur.items()}
        n += 1
    return n


def _inner_node_perms(datum: RootDatum) -> list[dict]:
    """Affine diagram permutations induced by conjugation with length-zero elements."""
    W = iwahori_weyl(datum)
    out = []
    for tau in W.omega_elements():
        tinv = W.inv(tau)
        out.append({nd: W._simple_lookup[W.mul(W.mul(tau, s), tinv)] for nd, s in W.simples.items()})
    return out


def classify_star(datum: RootDatum, sigma: FrobSpec, mu: Sequence[int]) -> StarResult:
    """Decide whether t^{mu'} is sigma-straight for every mu' in W_0(mu), and label the case.

    The answer is always obtained by enumerating W_0(mu).  The label describes the
    structure of sigma on one quasi-simple factor: quasi-split means sigma fixes a special
    vertex of the affine diagram; "trivial", "A-odd" and "D" are the situations in which
    the condition can hold, "fails" is a quasi-split configuration where it does not, and
    "non-qs-(i)/(ii)/(iii)" name the non-quasi-split families (inner twist, type A outer,
    type D outer).  Several components, and lattices other than the adjoint one, are
    first reduced to one adjoint factor per sigma-orbit.
    """
    mu = normalize_mu(datum, mu)
    holds = all_translations_straight(datum, mu, sigma)
    if len(datum.components) > 1 or datum.lattice_kind != "adjoint":
        parts = reduce_to_simple_factors(datum, sigma, mu)
        detail = []
        for part in parts:
            if part is None:
                detail.append(StarResult(False, "several-nonzero"))
            elif part == "zero":
                continue
            else:
                d1, s1, mu1 = part
                detail.append(classify_star(d1, s1, mu1))
        if not detail:
            return StarResult(holds, "mu-zero", None, detail)
        reduced = all(r.holds for r in detail)
        if reduced != holds:
            raise RuntimeError("reduction to simple factors disagrees with direct enumeration")
        bad = next((r for r in detail if not r.holds), None)
        case = bad.case if bad else ("trivial" if all(r.case == "trivial" for r in detail) else
                                     next(r.case for r in detail if r.case != "trivial"))
        qs = all(r.quasi_split is not False for r in detail)
        return StarResult(holds, case, qs, detail)

    if not any(mu):
        return StarResult(holds, "mu-zero", None)
    family = datum.components[0].family
    pi = sigma.affine_node_perm
    fixed_special = [v for v in special_vertices(datum) if pi[v] == v]
    if fixed_special:
        if all(pi[n] == n for n in pi):
            case = "trivial"
        elif not holds:
            case = "fails"
        elif family == "A":
            case = "A-odd"
        elif family == "D":
            case = "D"
        else:
            case = "qs-other"
        return StarResult(holds, case, True)
    if pi in _inner_node_perms(datum):
        case = "non-qs-(i)"
    elif family == "A":
        case = "non-qs-(ii)"
    elif family == "D":
        case = "non-qs-(iii)"
    else:
        case = "non-qs-other"
    return StarResult(holds, case, False)


def diagram_automorphisms(datum: RootDatum) -> list[dict]:
    """All permutations of the finite nodes preserving the Cartan matrix."""
    nodes = list(datum.nodes)
    idx = datum.node_index
    C = datum.cartan
    out = []

    def extend(assign: dict, k: int):
        if k == len(nodes):
            out.append(dict(assign))
            return
        a = nodes[k]
        for b in nodes:
            if b in assign.values():
                continue
            if C[idx[b]][idx[b]] != C[idx[a]][idx[a]]:
                continue
            if all(C[idx[b]][idx[assign[p]]] == C[idx[a]][idx[p]] and
                   C[idx[assign[p]]][idx[b]] == C[idx[p]][idx[a]] for p in assign):
                assign[a] = b
                extend(assign, k + 1)
                del assign[a]

    extend({}, 0)
    return out


def _component_orbits(datum: RootDatum, sigma: FrobSpec) -> list[list[int]]:
    pi = sigma.affine_node_perm
    comp_map = {c: pi[(c, 0)][0] for c in range(len(datum.components))}
    orbits, seen = [], set()
    for c in range(len(datum.components)):
        if c in seen:
            continue
        orb, cur = [], c
        while cur not in orb:
            orb.append(cur)
            cur = comp_map[cur]
        seen.update(orb)
        orbits.append(orb)
    return orbits


def reduce_to_simple_factors(datum: RootDatum, sigma: FrobSpec, mu: Sequence[int]) -> list:
    """Per sigma-orbit of components: None if two or more components carry a nonzero part
    of mu, "zero" if none does, and otherwise (adjoint datum, sigma^m, mu_c) for the one
    component c carrying mu, with m the orbit length."""
    out = []
    pi = sigma.affine_node_perm
    for orb in _component_orbits(datum, sigma):
        nonzero = []
        for c in orb:
            comp = datum.components[c]
            pairs = [datum.pair(mu, datum.simple_index[comp.node_offset + i]) for i in range(comp.rank)]
            if any(pairs):
                nonzero.append((c, pairs))
        if len(nonzero) >= 2:
            out.append(None)
            continue
        if not nonzero:
            out.append("zero")
            continue
        c, pairs = nonzero[0]
        m = len(orb)
        comp = datum.components[c]
        d1 = RootDatum([(comp.family, comp.rank)], "adjoint")
        # sigma^m on the affine diagram of component c, relabelled to component 0
        target = {}
        for i in range(comp.rank + 1):
            cur = (c, i)
            for _ in range(m):
                cur = pi[cur]
            target[(0, i)] = (0, cur[1])
        out.append((d1, frobenius_from_node_perm(d1, target), tuple(pairs)))
    return out


def frobenius_from_node_perm(datum: RootDatum, target: dict) -> FrobSpec:
    """A FrobSpec on a single-component adjoint datum inducing ``target`` on the affine
    diagram.  For adjoint data the diagram action determines the automorphism of W~."""
    om = datum.omega
    lifts = []
    for cls in om.elements():
        lam = [0] * datum.dim
        for k, g in zip(cls, om.generators):
            lam = [x + k * y for x, y in zip(lam, g)]
        lifts.append(lam)
    for delta in diagram_automorphisms(datum):
        for lam in lifts:
            s = FrobSpec(datum, delta, lam)
            if s.affine_node_perm == target:
                return s
    raise ValueError("no Frobenius induces the requested diagram permutation")


# --------------------------------------------------------------------------------------
# EKOR poset and the maximal Newton stratum


def ekor_poset(datum: RootDatum, mu: Sequence[int], K: ParahoricSpec, sigma: FrobSpec,
               cap: int = DEFAULT_CAP, classes: list[BClass] | None = None) -> nx.DiGraph:
    """Hasse diagram of <=_{K,sigma} on Adm(mu) cap ^K W~; edges point upward (x' -> x)."""
    nodes = k_w_set(datum, mu, K, cap)
    order = KSigmaOrder(K, sigma)
    top = b_max(datum, mu, sigma, cap, classes)
    rel = nx.DiGraph()
    for i, x in enumerate(nodes):
        nu, r2, _ = newton_data(x, sigma)
        rel.add_node(i, element=x, length=x.length, nu=nu, kappa=kottwitz_point(x, sigma),
                     straight=(r2 == x.length),
                     in_bmax=(nu == top.nu and kottwitz_point(x, sigma) == top.kappa))
    if not K.nodes:
        # Iwahori level: the order is Bruhat, Adm is down-closed and Bruhat is graded,
        # so the Hasse diagram is given by lower covers
        index = {x: i for i, x in enumerate(nodes)}
        W = iwahori_weyl(datum)
        for j, x in enumerate(nodes):
            for xp in W.lower_covers(x):
                rel.add_edge(index[xp], j)
        return rel
    if len(nodes) * (len(nodes) - 1) > cap:
        raise CapExceeded(f"poset on {len(nodes)} elements needs more than {cap} comparisons")
    for i, xp in enumerate(nodes):
        for j, x in enumerate(nodes):
            if i != j and xp.length <= x.length and order.leq(xp, x):
                rel.add_edge(i, j)
    if not nx.is_directed_acyclic_graph(rel):
        raise RuntimeError("K-sigma relation is not antisymmetric on this set")
    hasse = nx.transitive_reduction(rel)
    hasse.add_nodes_from(rel.nodes(data=True))
    return hasse


@dataclass
class MeetResult:
    holds: bool
    witness: ExtAffineElt | None


def bmax_straight_elements(datum: RootDatum, mu: Sequence[int], sigma: FrobSpec, cap: int = DEFAULT_CAP,
                           top: BClass | None = None) -> list[ExtAffineElt]:
    """The sigma-straight elements of Adm(mu) in the class of [b]_max, sorted."""
    top = b_max(datum, mu, sigma, cap) if top is None else top
    out = []
    for x in adm(datum, mu, cap):
        if x.length != top.rho2 or not is_sigma_straight(x, sigma):
            continue
        if kottwitz_point(x, sigma) != top.kappa or newton_point(x, sigma) != top.nu:
            continue
        out.append(x)
    return sorted(out, key=ExtAffineElt.sort_key)


def max_newton_meets_stratum(datum: RootDatum, mu_prime: Sequence[int], mu: Sequence[int],
                             sigma: FrobSpec, cap: int = DEFAULT_CAP, top: BClass | None = None,
                             candidates: list[ExtAffineElt] | None = None) -> MeetResult:
    """Is there a sigma-straight w' in the class of [b]_max with w' <= t^{mu'}?

    Every such w' lies below an admissible translation and so in Adm(mu), which makes
    the scan over the straight elements of Adm(mu) exhaustive.
    """
    W = iwahori_weyl(datum)
    t = W.translation(mu_prime)
    if candidates is None:
        candidates = bmax_straight_elements(datum, mu, sigma, cap, top)
    for x in candidates:
        if W.bruhat_leq(x, t):
            return MeetResult(True, x)
    return MeetResult(False, None)


def group_density_check(datum: RootDatum, mu: Sequence[int], K: ParahoricSpec, sigma: FrobSpec,
                        cap: int = DEFAULT_CAP) -> bool:
    cands = bmax_straight_elements(datum, mu, sigma, cap)
    return all(max_newton_meets_stratum(datum, t.lam, mu, sigma, cap, candidates=cands).holds
               for t in maximal_ekor(datum, mu, K))
