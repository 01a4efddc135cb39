"""Brute-force reference implementations for cross-checking.

Elements are affine maps v -> M v + t on V with exact rational entries.  Nothing here
uses the root-permutation machinery of the main implementation: lengths count the
root hyperplanes separating a generic point of the base alcove from its image, the
Bruhat order is the subword property, and straightness is length additivity of
twisted powers.
"""

from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction
from typing import Sequence

from . import linalg
from .rootdata import RootDatum


class OracleCapExceeded(RuntimeError):
    pass


class AffineMap:
    __slots__ = ("M", "t", "_h")

    def __init__(self, M, t):
        self.M = tuple(tuple(Fraction(x) for x in row) for row in M)
        self.t = tuple(Fraction(x) for x in t)
        self._h = hash((self.M, self.t))

    def __call__(self, v):
        return tuple(sum(a * b for a, b in zip(row, v)) + c for row, c in zip(self.M, self.t))

    def __mul__(self, other: AffineMap) -> AffineMap:
        M = linalg.matmul(self.M, other.M)
        t = [x + y for x, y in zip(linalg.matvec(self.M, other.t), self.t)]
        return AffineMap(M, t)

    def inverse(self) -> AffineMap:
        Minv = linalg.inverse(self.M)
        return AffineMap(Minv, [-x for x in linalg.matvec(Minv, self.t)])

    def __eq__(self, other):
        return isinstance(other, AffineMap) and self._h == other._h and self.M == other.M and self.t == other.t

    def __hash__(self):
        return self._h

    def __repr__(self):
        return f"AffineMap(t={[str(x) for x in self.t]})"


class OracleGroup:
    """The extended affine Weyl group realised by affine maps."""

    def __init__(self, datum: RootDatum):
        self.datum = d = datum
        self.dim = d.dim
        self.ident = AffineMap(linalg.identity(d.dim), [0] * d.dim)
        # positive roots by closure of the simple roots under simple reflections
        self.pos_roots = self._positive_roots()
        # generic point of the base alcove: alpha_i(p) = 1/(h+1) for every simple root
        self.point = self._generic_point()
        self.simples = {}
        for k, nd in enumerate(d.nodes):
            a, av = d.simple_roots[k], d.simple_coroots[k]
            self.simples[nd] = self._reflection(a, av, 0)
        for c, comp in enumerate(d.components):
            theta = max((r for r in self.pos_roots if self._component(r) == c), key=self._height)
            self.simples[(c, 0)] = self._reflection(theta, self._coroot(theta), 1)

    # -- roots --------------------------------------------------------------------------

    def _positive_roots(self):
        d = self.datum
        found = {tuple(a) for a in d.simple_roots}
        queue = deque(found)
        while queue:
            r = queue.popleft()
            for a, av in zip(d.simple_roots, d.simple_coroots):
                p = sum(x * y for x, y in zip(av, r))
                s = tuple(x - p * y for x, y in zip(r, a))
                if s not in found:
                    found.add(s)
                    queue.append(s)
        return sorted(r for r in found if self._is_positive(r))

    def _simple_coeffs(self, r):
        # coefficients of r in the simple roots (solve on the span)
        return linalg.solve_rows(self.datum.simple_roots, r)

    def _is_positive(self, r):
        return all(c >= 0 for c in self._simple_coeffs(r))

    def _height(self, r):
        return sum(self._simple_coeffs(r))

    def _component(self, r):
        c = self._simple_coeffs(r)
        k = next(i for i, x in enumerate(c) if x)
        return self.datum.nodes[k][0]

    def _coroot(self, r):
        # s_r = s_{i1} ... s_{ik} s_j s_{ik} ... s_{i1}: conjugate a simple coroot along a chain
        d = self.datum
        cur, chain = tuple(r), []
        while cur not in [tuple(a) for a in d.simple_roots]:
            k = next(k for k, av in enumerate(d.simple_coroots)
                     if sum(x * y for x, y in zip(av, cur)) > 0 and
                     tuple(cur) != tuple(d.simple_roots[k]))
            p = sum(x * y for x, y in zip(d.simple_coroots[k], cur))
            cur = tuple(x - p * y for x, y in zip(cur, d.simple_roots[k]))
            chain.append(k)
        j = [tuple(a) for a in d.simple_roots].index(cur)
        v = list(d.simple_coroots[j])
        for k in reversed(chain):
            p = sum(x * y for x, y in zip(v, d.simple_roots[k]))
            v = [x - p * y for x, y in zip(v, d.simple_coroots[k])]
        return tuple(v)

    def _reflection(self, a, av, k) -> AffineMap:
        """Reflection in the hyperplane a(v) = k: v -> v - (a(v) - k) a^vee."""
        n = self.dim
        M = [[int(i == j) - av[i] * a[j] for j in range(n)] for i in range(n)]
        return AffineMap(M, [k * x for x in av])

    def _generic_point(self):
        d = self.datum
        h = max(self._height(r) for r in self.pos_roots) + 1
        pairs = [Fraction(1, h + 1)] * d.rank
        return tuple(d.from_pairings(pairs, [0] * len(d.central)))

    # -- elements -----------------------------------------------------------------------

    def translation(self, lam) -> AffineMap:
        return AffineMap(linalg.identity(self.dim), lam)

    def length(self, x: AffineMap) -> int:
        q = x(self.point)
        total = 0
        for r in self.pos_roots:
            val = sum(a * b for a, b in zip(r, q))
            total += abs(val.numerator // val.denominator) if val >= 0 else -(val.numerator // val.denominator)
        return total

    def length_zero(self, lam) -> AffineMap:
        """Fold t^lam back onto the base alcove with affine simple reflections."""
        x = self.translation(lam)
        while True:
            q = x(self.point)
            nd = next((nd for nd, s in sorted(self.simples.items()) if self._outside(nd, q)), None)
            if nd is None:
                return x
            x = self.simples[nd] * x

    def _outside(self, nd, q) -> bool:
        d = self.datum
        c, i = nd
        if i:
            k = d.node_index[nd]
            return sum(a * b for a, b in zip(d.simple_roots[k], q)) < 0
        theta = max((r for r in self.pos_roots if self._component(r) == c), key=self._height)
        return sum(a * b for a, b in zip(theta, q)) > 1

    def omega_reps(self, window: Sequence[int] = (0, 1)) -> list[AffineMap]:
        """Length-zero elements: all of them for finite Omega, else a window of classes."""
        om = self.datum.omega
        ranges = [range(dd) if dd else window for dd in om.invariants]
        out = []
        for cls in itertools.product(*ranges):
            lam = [0] * self.dim
            for c, g in zip(cls, om.generators):
                lam = [x + c * y for x, y in zip(lam, g)]
            out.append(self.length_zero(lam))
        return out

    def reduced_word(self, x: AffineMap):
        """(tau, word) with x = tau s_{w1} ... s_{wk}, from right descents."""
        word = []
        cur = x
        ln = self.length(cur)
        while ln:
            for nd in sorted(self.simples):
                y = cur * self.simples[nd]
                if self.length(y) < ln:
                    word.append(nd)
                    cur, ln = y, ln - 1
                    break
        return cur, tuple(reversed(word))


def ball(datum: RootDatum, L: int, window: Sequence[int] = (0, 1), cap: int = 200_000):
    """All elements of length <= L (for a window of Omega-classes when Omega is infinite).

    Returns a dict element -> (tau, reduced word).
    """
    G = OracleGroup(datum)
    out = {}
    frontier = []
    for tau in G.omega_reps(window):
        out[tau] = (tau, ())
        frontier.append(tau)
    for level in range(1, L + 1):
        nxt = []
        for x in frontier:
            tau, word = out[x]
            for nd in sorted(G.simples):
                y = x * G.simples[nd]
                if y in out:
                    continue
                if G.length(y) != level:
                    continue
                out[y] = (tau, word + (nd,))
                nxt.append(y)
                if len(out) > cap:
                    raise OracleCapExceeded("ball exceeds the oracle cap")
        frontier = nxt
    return G, out


def lower_interval(G: OracleGroup, y: AffineMap) -> set:
    """Products of all subwords of one reduced word of y."""
    tau, word = G.reduced_word(y)
    cur = {tau}
    for nd in word:
        s = G.simples[nd]
        cur = cur | {z * s for z in cur}
    return cur


def bruhat_oracle(G: OracleGroup, x: AffineMap, y: AffineMap) -> bool:
    return x in lower_interval(G, y)


class OracleFrobenius:
    """sigma(x) = A x A^-1 with A = tau o delta as an affine map."""

    def __init__(self, G: OracleGroup, D: Sequence[Sequence[int]], omega_lift: Sequence[int]):
        self.G = G
        tau = G.length_zero(omega_lift)
        self.A = tau * AffineMap(D, [0] * G.dim)
        self.Ainv = self.A.inverse()

    def __call__(self, x: AffineMap) -> AffineMap:
        return self.A * x * self.Ainv

    def linear_order(self) -> int:
        M = [list(r) for r in self.A.M]
        P, n = M, 1
        while P != [list(r) for r in linalg.identity(len(M))]:
            P = linalg.matmul(P, M)
            n += 1
        return n


def straight_oracle(G: OracleGroup, x: AffineMap, sigma: OracleFrobenius, weyl_order: int) -> bool:
    """l(x sigma(x) ... sigma^{n-1}(x)) = n l(x) for all n <= 2 |W_0| ord(p(sigma))."""
    n_max = 2 * weyl_order * sigma.linear_order()
    lx = G.length(x)
    y, cur = G.ident, x
    for n in range(1, n_max + 1):
        y = y * cur
        if G.length(y) != n * lx:
            return False
        cur = sigma(cur)
    return True


def weyl_group_matrices(datum: RootDatum) -> set:
    """W_0 as the closure of the simple reflection matrices."""
    G = OracleGroup(datum)
    gens = [G.simples[nd].M for nd in datum.nodes]
    start = G.ident.M
    seen = {start}
    queue = deque([start])
    while queue:
        m = queue.popleft()
        for g in gens:
            u = tuple(tuple(r) for r in linalg.matmul(m, g))
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return seen


def adm_oracle(datum: RootDatum, mu: Sequence[int]) -> set:
    """Adm(mu) from the length ball and the subword property."""
    G = OracleGroup(datum)
    orbit = {tuple(linalg.matvec(m, mu)) for m in weyl_group_matrices(datum)}
    out = set()
    for v in orbit:
        out |= lower_interval(G, G.translation(v))
    return out


# -- bridges to the main implementation (used by tests only) ------------------------------


def to_main(W, x: AffineMap):
    """Convert an affine map to the main representation."""
    from .rootdata import FiniteWeylElt

    d = W.datum
    Minv = linalg.inverse(x.M)
    perm = tuple(d.root_index[tuple(linalg.as_int(v) for v in linalg.vecmat(r, Minv))] for r in d.roots)
    lam = [linalg.as_int(v) for v in x.t]
    return W.element(lam, FiniteWeylElt(d, perm))


def from_main(x) -> AffineMap:
    return AffineMap(x.finite.matrix, x.lam)


def gl_newton_polygons(mu: Sequence[int], k: int = 0) -> set[tuple]:
    """Newton vectors of B(G, {mu}) for the inner form of GL_n twisted by Ad(tau_1^k).

    Right multiplication by tau_1^k identifies the twisted classes with classes of GL_n;
    it shifts kappa by k and nu by k/n in every coordinate.  The GL_n classes are the
    concave polygons from (0, 0) to (n, sum(mu) + k) with integral break points lying
    below the polygon of mu + k/n.
    """
    n = len(mu)
    mu = sorted(mu, reverse=True)
    shift = Fraction(k, n)
    bound = [sum(mu[:j]) + j * shift for j in range(n + 1)]
    lo, hi = min(mu), max(mu) + 1
    total = sum(mu) + k
    out = set()

    def rec(pos: int, rise: int, last, nu: list):
        if pos == n:
            if rise == total:
                out.add(tuple(x - shift for x in nu))
            return
        for L in range(1, n - pos + 1):
            for r in range(lo * L, hi * L + 1):
                slope = Fraction(r, L)
                if last is not None and slope >= last:
                    continue
                ext = nu + [slope] * L
                if all(sum(ext[:j]) <= bound[j] for j in range(pos + 1, pos + L + 1)):
                    rec(pos + L, rise + r, slope, ext)

    rec(0, 0, None, [])
    return out
