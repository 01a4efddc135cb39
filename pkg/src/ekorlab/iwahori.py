"""The extended affine Weyl group X >< W_0 and its Frobenius automorphisms.

An element t^lam w is stored as

* ``pair``: the pairings <lam, alpha> with every root (2N integers),
* ``cen``: the central coordinates of lam,
* ``w``/``winv``: w and its inverse as permutations of the root indices.

This makes multiplication an index shuffle and the Iwahori-Matsumoto length a single
sum.  The base alcove is the dominant one, {0 < alpha < 1 for alpha > 0}, so the affine
simple reflection of a component is s_0 = t^{theta^vee} s_theta.
"""

from __future__ import annotations

import math
import re
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg
from .rootdata import FiniteWeylElt, Node, RootDatum, RootDatumError, coinvariants


class ExtAffineElt:
    """t^lam w in the Iwahori-Weyl group of a root datum."""

    __slots__ = ("W", "pair", "cen", "w", "winv", "_hash", "_len")

    def __init__(self, W: IwahoriWeyl, pair, cen, w, winv):
        self.W = W
        self.pair = pair
        self.cen = cen
        self.w = w
        self.winv = winv
        self._hash = hash((pair, cen, w))
        self._len = None

    def __eq__(self, other):
        return (isinstance(other, ExtAffineElt) and self._hash == other._hash
                and self.pair == other.pair and self.cen == other.cen and self.w == other.w
                and self.W is other.W)

    def __hash__(self):
        return self._hash

    def __mul__(self, other: ExtAffineElt) -> ExtAffineElt:
        return self.W.mul(self, other)

    def inverse(self) -> ExtAffineElt:
        return self.W.inv(self)

    @property
    def length(self) -> int:
        if self._len is None:
            self._len = self.W.length(self)
        return self._len

    @property
    def lam(self) -> tuple:
        return self.W.lam(self)

    @property
    def finite(self) -> FiniteWeylElt:
        return FiniteWeylElt(self.W.datum, self.w)

    def is_translation(self) -> bool:
        return self.w == self.W.datum.identity_perm

    def sort_key(self):
        return (self.length, self.lam, self.w)

    def __repr__(self):
        return self.W.render(self)


class IwahoriWeyl:
    """Group operations on W~ = X >< W_0 for one root datum."""

    def __init__(self, datum: RootDatum):
        self.datum = d = datum
        self.N = d.N
        n2 = 2 * d.N
        # <beta^vee, alpha> for every pair of roots
        self._cp = tuple(tuple(sum(x * y for x, y in zip(d.coroots[b], d.roots[a])) for a in range(n2))
                         for b in range(n2))
        self._zero_pair = (0,) * n2
        self._zero_cen = (0,) * len(d.central)
        # affine simple roots as (root index, constant)
        self.node_root: dict[Node, tuple[int, int]] = {}
        for k, nd in enumerate(d.nodes):
            self.node_root[nd] = (d.simple_index[k], 0)
        for c, hi in enumerate(d.highest):
            self.node_root[(c, 0)] = (d.neg(hi), 1)
        self.simples = {nd: self.reflection(b, kk) for nd, (b, kk) in self.node_root.items()}
        self._simple_lookup = {x: nd for nd, x in self.simples.items()}
        self._node_order = {nd: i for i, nd in enumerate(sorted(d.affine_nodes))}
        self._tau_cache: dict[tuple, ExtAffineElt] = {}

    # -- constructors --------------------------------------------------------------------

    def make(self, pair, cen, w, winv=None) -> ExtAffineElt:
        if winv is None:
            inv = [0] * len(w)
            for a, b in enumerate(w):
                inv[b] = a
            winv = tuple(inv)
        return ExtAffineElt(self, pair, cen, w, winv)

    @cached_property
    def one(self) -> ExtAffineElt:
        idp = self.datum.identity_perm
        return ExtAffineElt(self, self._zero_pair, self._zero_cen, idp, idp)

    def translation(self, lam: Sequence[int]) -> ExtAffineElt:
        d = self.datum
        lam = tuple(int(x) for x in lam)
        if len(lam) != d.dim:
            raise ValueError(f"expected a vector of length {d.dim}")
        if not d.in_lattice(lam):
            raise ValueError(f"{lam} is not in the lattice X")
        pair = tuple(sum(x * y for x, y in zip(lam, r)) for r in d.roots)
        idp = d.identity_perm
        return ExtAffineElt(self, pair, d.central_coords(lam), idp, idp)

    def from_finite(self, u: FiniteWeylElt) -> ExtAffineElt:
        return self.make(self._zero_pair, self._zero_cen, u.perm)

    def element(self, lam: Sequence[int], u: FiniteWeylElt | None = None) -> ExtAffineElt:
        x = self.translation(lam)
        return x if u is None else x * self.from_finite(u)

    def reflection(self, b: int, k: int) -> ExtAffineElt:
        """Reflection in the affine root root_b + k, i.e. t^{-k beta^vee} s_beta."""
        perm = self.datum.reflection_perm(b)
        pair = tuple(-k * x for x in self._cp[b]) if k else self._zero_pair
        return ExtAffineElt(self, pair, self._zero_cen, perm, perm)

    def simple(self, node: Node) -> ExtAffineElt:
        return self.simples[tuple(node)]

    def from_word(self, word: Iterable[Node], tail: ExtAffineElt | None = None) -> ExtAffineElt:
        x = self.one
        for nd in word:
            x = x * self.simple(nd)
        return x if tail is None else x * tail

    # -- arithmetic ---------------------------------------------------------------------

    def mul(self, x: ExtAffineElt, y: ExtAffineElt) -> ExtAffineElt:
        if x.W is not y.W:
            raise ValueError("elements belong to different root data")
        uinv = x.winv
        p1, p2 = x.pair, y.pair
        pair = tuple([p1[a] + p2[uinv[a]] for a in range(len(p1))])
        cen = tuple([a + b for a, b in zip(x.cen, y.cen)]) if x.cen else x.cen
        u, v = x.w, y.w
        w = tuple([u[i] for i in v])
        vinv = y.winv
        winv = tuple([vinv[i] for i in uinv])
        return ExtAffineElt(self, pair, cen, w, winv)

    def inv(self, x: ExtAffineElt) -> ExtAffineElt:
        # (t^lam w)^-1 = t^{-w^-1 lam} w^-1
        p, w = x.pair, x.w
        pair = tuple([-p[w[a]] for a in range(len(p))])
        return ExtAffineElt(self, pair, tuple(-c for c in x.cen), x.winv, x.w)

    def power(self, x: ExtAffineElt, n: int) -> ExtAffineElt:
        result, base = self.one, x
        if n < 0:
            base, n = self.inv(x), -n
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def length(self, x: ExtAffineElt) -> int:
        """Iwahori-Matsumoto length."""
        N = self.N
        p, winv = x.pair, x.winv
        total = 0
        for a in range(N):
            v = p[a] - 1 if winv[a] >= N else p[a]
            total += v if v >= 0 else -v
        return total

    def lam(self, x: ExtAffineElt) -> tuple:
        d = self.datum
        return tuple(linalg.as_int(v) for v in d.from_pairings([x.pair[a] for a in d.simple_index], x.cen))

    # -- descents, words, components ------------------------------------------------------

    def is_left_descent(self, x: ExtAffineElt, node: Node) -> bool:
        """l(s x) < l(x), i.e. x^-1 sends the affine simple root of ``node`` negative."""
        b, k = self.node_root[node]
        v = x.pair[b] + k
        return v < 0 or (v == 0 and x.winv[b] >= self.N)

    def left_descents(self, x: ExtAffineElt) -> list[Node]:
        return [nd for nd in self._sorted_nodes if self.is_left_descent(x, nd)]

    def is_right_descent(self, x: ExtAffineElt, node: Node) -> bool:
        return self.is_left_descent(self.inv(x), node)

    @cached_property
    def _sorted_nodes(self) -> list[Node]:
        return sorted(self.datum.affine_nodes)

    def lmul_simple(self, node: Node, x: ExtAffineElt) -> ExtAffineElt:
        return self.mul(self.simples[node], x)

    def reduced_word(self, x: ExtAffineElt) -> tuple[tuple[Node, ...], ExtAffineElt]:
        """Lexicographically smallest reduced word: x = s_i1 ... s_il * tau with l(tau) = 0.

        Nodes are ordered as (component, label) pairs, so s0 < s1 < ... within a component.
        """
        word = []
        cur = x
        while True:
            nd = next((nd for nd in self._sorted_nodes if self.is_left_descent(cur, nd)), None)
            if nd is None:
                return tuple(word), cur
            word.append(nd)
            cur = self.mul(self.simples[nd], cur)

    def length_zero_part(self, x: ExtAffineElt) -> ExtAffineElt:
        return self.reduced_word(x)[1]

    def omega_component(self, x: ExtAffineElt) -> tuple[int, ...]:
        return self.datum.omega.project(self.lam(x))

    def length_zero(self, lam: Sequence[int]) -> ExtAffineElt:
        """The length-zero element in the Omega-class of the lattice vector ``lam``."""
        key = self.datum.omega.project(lam)
        if key not in self._tau_cache:
            self._tau_cache[key] = self.length_zero_part(self.translation(lam))
        return self._tau_cache[key]

    def omega_elements(self) -> list[ExtAffineElt]:
        """Length-zero elements, one per class (Omega must be finite)."""
        om = self.datum.omega
        out = []
        for cls in om.elements():
            lam = [0] * self.datum.dim
            for c, g in zip(cls, om.generators):
                lam = [p + c * q for p, q in zip(lam, g)]
            out.append(self.length_zero(lam))
        return out

    # -- Bruhat order -------------------------------------------------------------------

    def bruhat_leq(self, x: ExtAffineElt, y: ExtAffineElt) -> bool:
        """Bruhat order on W~ by descent recursion on y.

        For a left descent s of y: if s is also a descent of x then x <= y iff sx <= sy,
        otherwise x <= y iff x <= sy.
        """
        lx, ly = x.length, y.length
        while True:
            if lx > ly:
                return False
            if ly == 0:
                return x == y
            nd = next(nd for nd in self._sorted_nodes if self.is_left_descent(y, nd))
            s = self.simples[nd]
            y = self.mul(s, y)
            ly -= 1
            if self.is_left_descent(x, nd):
                x = self.mul(s, x)
                lx -= 1

    def lower_covers(self, y: ExtAffineElt) -> list[ExtAffineElt]:
        """Elements r y of length l(y) - 1, r running over affine reflections.

        The reflections with l(ry) < l(y) are those of the positive affine roots f with
        y^-1 f < 0; there are exactly l(y) of them.
        """
        N = self.N
        target = y.length - 1
        p, winv, w = y.pair, y.winv, y.w
        cp = self._cp
        out = []
        for b in range(2 * N):
            kmin = 0 if b < N else 1
            kmax = -p[b] - (0 if winv[b] >= N else 1)
            if kmax < kmin:
                continue
            sb = self.datum.reflection_perm(b)
            base = [p[sb[a]] for a in range(2 * N)]
            nw = tuple([sb[i] for i in w])
            nwinv = tuple([winv[i] for i in sb])
            cb = cp[b]
            for k in range(kmin, kmax + 1):
                pair = tuple([base[a] - k * cb[a] for a in range(2 * N)]) if k else tuple(base)
                z = ExtAffineElt(self, pair, y.cen, nw, nwinv)
                if z.length == target:
                    out.append(z)
        return out

    # -- rendering ----------------------------------------------------------------------

    def letter(self, node: Node) -> str:
        if len(self.datum.components) == 1:
            return f"s{node[1]}"
        return f"s{node[0]}_{node[1]}"

    def render(self, x: ExtAffineElt) -> str:
        lam = ",".join(str(v) for v in self.lam(x))
        word = x.finite.word()
        s = f"t^[{lam}]"
        if word:
            s += " * " + " ".join(self.letter(self.datum.nodes[k]) for k in word)
        return s

    def render_word(self, x: ExtAffineElt) -> str:
        word, tau = self.reduced_word(x)
        letters = " ".join(self.letter(nd) for nd in word)
        om = self.omega_component(tau)
        if any(om):
            tail = "tau[" + ",".join(map(str, om)) + "]"
            return f"{letters} {tail}".strip()
        return letters or "1"

    _token = re.compile(r"\s*(t\^\[[^\]]*\]|\*|s\d+(?:_\d+)?|1)\s*")

    def parse(self, text: str) -> ExtAffineElt:
        """Inverse of :meth:`render`; letters may include affine nodes (s0)."""
        pos, x = 0, self.one
        text = text.strip()
        while pos < len(text):
            m = self._token.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse element {text!r} at position {pos}")
            tok = m.group(1)
            pos = m.end()
            if tok in ("*", "1"):
                continue
            if tok.startswith("t^"):
                body = tok[3:-1].strip()
                lam = [int(v) for v in body.split(",")] if body else []
                x = x * self.translation(lam)
                continue
            nums = tok[1:].split("_")
            node = (0, int(nums[0])) if len(nums) == 1 else (int(nums[0]), int(nums[1]))
            if node not in self.simples:
                raise ValueError(f"unknown simple reflection {tok}")
            x = x * self.simples[node]
        return x


def iwahori_weyl(datum: RootDatum) -> IwahoriWeyl:
    """The (cached) group object of a root datum."""
    W = datum.__dict__.get("_iwahori_weyl")
    if W is None:
        W = datum.__dict__["_iwahori_weyl"] = IwahoriWeyl(datum)
    return W


# --------------------------------------------------------------------------------------
# Frobenius


class FrobSpec:
    """sigma = Ad(tau) o delta.

    ``diagram`` maps finite nodes to finite nodes (a Dynkin diagram automorphism, possibly
    permuting components); ``omega`` is a lattice vector whose Omega-class gives tau.
    """

    def __init__(self, datum: RootDatum, diagram: dict[Node, Node] | None = None,
                 omega: Sequence[int] | None = None):
        self.datum = d = datum
        self.W = W = iwahori_weyl(datum)
        delta = {nd: nd for nd in d.nodes}
        for a, b in (diagram or {}).items():
            delta[tuple(a)] = tuple(b)
        if sorted(delta.values()) != sorted(d.nodes) or set(delta) != set(d.nodes):
            raise RootDatumError("diagram automorphism must permute the finite nodes")
        idx = d.node_index
        for i in d.nodes:
            for j in d.nodes:
                if d.cartan[idx[delta[i]]][idx[delta[j]]] != d.cartan[idx[i]][idx[j]]:
                    raise RootDatumError("diagram map does not preserve the Cartan matrix")
        self.delta = delta
        self.D = self._linear_delta()
        self._check_delta()
        self.omega_lift = tuple(int(x) for x in (omega if omega is not None else [0] * d.dim))
        self.tau = W.length_zero(self.omega_lift)
        self.tau_inv = W.inv(self.tau)

        dinv = linalg.inverse(self.D)
        self._dperm = tuple(d.root_index[tuple(linalg.as_int(x) for x in linalg.vecmat(r, dinv))]
                            for r in d.roots)
        dp_inv = [0] * len(self._dperm)
        for a, b in enumerate(self._dperm):
            dp_inv[b] = a
        self._dperm_inv = tuple(dp_inv)
        cm = []
        for z in d.central:
            zd = linalg.vecmat(z, self.D)
            coeffs = linalg.solve_rows(d.central, zd)
            if coeffs is None:
                raise RootDatumError("diagram map does not preserve the centre")
            cm.append([linalg.as_int(c) for c in coeffs])
        self._cenmat = cm

    # -- construction ---------------------------------------------------------------------

    def _linear_delta(self):
        d = self.datum
        D = [[0] * d.dim for _ in range(d.dim)]
        if d.lattice_kind in ("gl", "gl-explicit"):
            for c, comp in enumerate(d.components):
                images = [self.delta[(c, i)] for i in range(1, comp.rank + 1)]
                c2 = images[0][0]
                if any(im[0] != c2 for im in images):
                    raise RootDatumError("diagram map must send components to components")
                comp2 = d.components[c2]
                labels = [im[1] for im in images]
                n = comp.rank
                if labels == list(range(1, n + 1)):
                    for k in range(n + 1):
                        D[comp2.coord_offset + k][comp.coord_offset + k] = 1
                elif labels == list(range(n, 0, -1)):
                    for k in range(n + 1):
                        D[comp2.coord_offset + k][comp.coord_offset + n - k] = -1
                else:
                    raise RootDatumError("unsupported diagram map on a GL-style component")
        else:
            for i in d.nodes:
                D[d.node_index[self.delta[i]]][d.node_index[i]] = 1
        return D

    def _check_delta(self):
        d = self.datum
        D = self.D
        for i in d.nodes:
            k, k2 = d.node_index[i], d.node_index[self.delta[i]]
            if tuple(linalg.matvec(D, d.simple_coroots[k])) != d.simple_coroots[k2]:
                raise RootDatumError("diagram map does not act on coroots as required")
            if tuple(linalg.vecmat(d.simple_roots[k2], D)) != d.simple_roots[k]:
                raise RootDatumError("diagram map does not act on roots as required")
        for b in d.lattice:
            if not d.in_lattice(linalg.matvec(D, b)):
                raise RootDatumError("diagram map does not preserve the lattice X")

    # -- action ---------------------------------------------------------------------------

    def apply_delta(self, x: ExtAffineElt) -> ExtAffineElt:
        dp, dpi = self._dperm, self._dperm_inv
        p = x.pair
        pair = tuple([p[dpi[a]] for a in range(len(p))])
        cen = tuple(sum(m * c for m, c in zip(row, x.cen)) for row in self._cenmat)
        w = tuple([dp[x.w[dpi[a]]] for a in range(len(p))])
        winv = tuple([dp[x.winv[dpi[a]]] for a in range(len(p))])
        return ExtAffineElt(self.W, pair, cen, w, winv)

    def apply(self, x: ExtAffineElt) -> ExtAffineElt:
        """sigma(x) = tau delta(x) tau^-1."""
        W = self.W
        return W.mul(W.mul(self.tau, self.apply_delta(x)), self.tau_inv)

    __call__ = apply

    def power_apply(self, x: ExtAffineElt, n: int) -> ExtAffineElt:
        for _ in range(n):
            x = self.apply(x)
        return x

    # -- derived data ---------------------------------------------------------------------

    @cached_property
    def linear_part(self) -> list[list[int]]:
        """p(sigma): linear part of the affine map tau o delta on V."""
        return linalg.matmul(self.tau.finite.matrix, self.D)

    @cached_property
    def affine_node_perm(self) -> dict[Node, Node]:
        """sigma(s_j) = s_{perm[j]} on the affine simple reflections."""
        out = {}
        for nd, s in self.W.simples.items():
            img = self.apply(s)
            if img not in self.W._simple_lookup:
                raise AssertionError("sigma is not length preserving")
            out[nd] = self.W._simple_lookup[img]
        return out

    @cached_property
    def order(self) -> int:
        """Order of sigma as an automorphism of W~."""
        W = self.W
        gens = list(W.simples.values())
        om = self.datum.omega
        for g in om.generators:
            gens.append(W.length_zero(g))
        # translations by a basis of X also generate together with W_0
        gens += [W.translation(b) for b in self.datum.lattice]
        cur = list(gens)
        for n in range(1, 100000):
            cur = [self.apply(x) for x in cur]
            if cur == gens:
                return n
        raise AssertionError("sigma has no finite order")

    @cached_property
    def omega_sigma(self):
        return coinvariants(self.datum, self.D)

    def kappa_of_lam(self, lam: Sequence[int]) -> tuple[int, ...]:
        return self.omega_sigma.project(lam)

    def stabilizes_finite_weyl(self) -> bool:
        """sigma(W_0) = W_0, i.e. sigma fixes the special vertex of the base alcove."""
        return all(self.affine_node_perm[nd][1] != 0 for nd in self.datum.nodes)

    def finite_node_perm(self) -> dict[Node, Node]:
        """Permutation of finite nodes induced on W_0 (requires sigma(W_0) = W_0)."""
        if not self.stabilizes_finite_weyl():
            raise NotQuasiSplit("sigma does not stabilise W_0")
        return {nd: self.affine_node_perm[nd] for nd in self.datum.nodes}

    def acts_trivially_on_finite_weyl(self) -> bool:
        return self.stabilizes_finite_weyl() and all(
            self.affine_node_perm[nd] == nd for nd in self.datum.nodes)

    def sigma0(self, v: Sequence) -> tuple:
        """Induced action on the dominant chamber: apply p(sigma), then take the dominant rep."""
        from .rootdata import dominant_rep

        return dominant_rep(self.datum, linalg.matvec(self.linear_part, v))[0]

    def is_trivial(self) -> bool:
        return all(self.affine_node_perm[nd] == nd for nd in self.datum.affine_nodes) and \
            self.tau == self.W.one and all(self.delta[n] == n for n in self.datum.nodes)

    def __repr__(self):
        moved = {self.W.letter(a): self.W.letter(b) for a, b in self.delta.items() if a != b}
        return f"FrobSpec(delta={moved}, tau={self.W.render(self.tau)})"


class NotQuasiSplit(ValueError):
    """The Frobenius does not stabilise the finite Weyl group of the base special vertex."""


def trivial_frobenius(datum: RootDatum) -> FrobSpec:
    return FrobSpec(datum)


def twisted_product(sigma: FrobSpec, x: ExtAffineElt, n: int) -> ExtAffineElt:
    """x sigma(x) ... sigma^{n-1}(x)."""
    W = sigma.W
    y, cur = W.one, x
    for i in range(n):
        y = W.mul(y, cur)
        if i + 1 < n:
            cur = sigma.apply(cur)
    return y


def perm_order(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    order = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        n, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            n += 1
        order = order * n // math.gcd(order, n)
    return order
