"""Root data: finite root systems, translation lattices, Weyl group action and Omega = X/Q^vee.

Coordinates on V = X (x) Q come in two flavours, chosen by the lattice option:

* ``coweight``: one coordinate per finite Dynkin node, the coordinates of v being the
  pairings <v, alpha_i>.  Simple roots are coordinate functionals and simple coroots are
  the rows of the Cartan matrix.  Used for the adjoint, simply-connected and explicit
  semisimple lattices.
* ``gl``: type A only, n+1 coordinates per A_n component with alpha_i^vee = e_i - e_{i+1}.
  This is the GL_{n+1} cocharacter lattice and carries a one-dimensional centre.

Nodes are ``(component, label)`` pairs with Bourbaki labels 1..n; label 0 is the affine node.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg

FAMILIES = ("A", "B", "C", "D", "E", "F", "G")

Node = tuple[int, int]


class RootDatumError(ValueError):
    """Invalid group description (unknown type, bad lattice, bad automorphism)."""


# --------------------------------------------------------------------------------------
# Cartan matrices from Bourbaki's Euclidean realisations


def _e(n, *pairs):
    v = [Fraction(0)] * n
    for i, c in pairs:
        v[i] += Fraction(c)
    return v


def euclidean_simple_roots(family: str, n: int) -> list[list[Fraction]]:
    """Simple roots in Bourbaki's ambient Euclidean space (Plates I-IX)."""
    if family == "A":
        return [_e(n + 1, (i, 1), (i + 1, -1)) for i in range(n)]
    if family in ("B", "C", "D"):
        roots = [_e(n, (i, 1), (i + 1, -1)) for i in range(n - 1)]
        if family == "B":
            roots.append(_e(n, (n - 1, 1)))
        elif family == "C":
            roots.append(_e(n, (n - 1, 2)))
        else:
            roots.append(_e(n, (n - 2, 1), (n - 1, 1)))
        return roots
    if family == "E":
        h = Fraction(1, 2)
        e8 = [[h, -h, -h, -h, -h, -h, -h, h], _e(8, (0, 1), (1, 1))]
        e8.append(_e(8, (0, -1), (1, 1)))
        e8 += [_e(8, (i - 1, -1), (i, 1)) for i in range(2, 7)]
        return e8[:n]
    if family == "F":
        h = Fraction(1, 2)
        return [_e(4, (1, 1), (2, -1)), _e(4, (2, 1), (3, -1)), _e(4, (3, 1)), [h, -h, -h, -h]]
    if family == "G":
        return [_e(3, (0, 1), (1, -1)), _e(3, (0, -2), (1, 1), (2, 1))]
    raise RootDatumError(f"unknown root system family {family!r}")


def _valid_type(family: str, n: int) -> bool:
    if family not in FAMILIES or n < 1:
        return False
    if family == "D":
        return n >= 3
    if family == "E":
        return n in (6, 7, 8)
    if family == "F":
        return n == 4
    if family == "G":
        return n == 2
    return True


def cartan_matrix(family: str, n: int) -> list[list[int]]:
    """Cartan matrix with entries ``C[i][j] = <alpha_i^vee, alpha_j>``."""
    if not _valid_type(family, n):
        raise RootDatumError(f"unknown Dynkin type {family}{n}")
    roots = euclidean_simple_roots(family, n)

    def dot(a, b):
        return sum(x * y for x, y in zip(a, b))

    return [[linalg.as_int(2 * dot(a, b) / dot(a, a)) for b in roots] for a in roots]


POSITIVE_ROOT_COUNT = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
    "F": lambda n: 24,
    "G": lambda n: 6,
}


def _component_roots(cartan: list[list[int]]):
    """Positive roots of one component as (root coefficients, coroot coefficients)."""
    r = len(cartan)
    start = []
    for i in range(r):
        e = tuple(int(i == j) for j in range(r))
        start.append((e, e))
    seen = {s[0]: s[1] for s in start}
    queue = deque(start)
    while queue:
        c, d = queue.popleft()
        for j in range(r):
            pair = sum(c[k] * cartan[j][k] for k in range(r))  # <alpha_j^vee, beta>
            if pair == 0:
                continue
            c2 = tuple(c[k] - (pair if k == j else 0) for k in range(r))
            if any(x < 0 for x in c2):
                continue
            cpair = sum(d[k] * cartan[k][j] for k in range(r))  # <beta^vee, alpha_j>
            d2 = tuple(d[k] - (cpair if k == j else 0) for k in range(r))
            if c2 not in seen:
                seen[c2] = d2
                queue.append((c2, d2))
    return sorted(seen.items(), key=lambda kv: (sum(kv[0]), tuple(-x for x in kv[0])))


# --------------------------------------------------------------------------------------
# Finitely generated abelian groups given as quotients of X


@dataclass(frozen=True)
class AbelianQuotient:
    """X modulo a sublattice, presented by Smith normal form.

    ``invariants`` lists the cyclic factors: an entry d > 1 is Z/d, an entry 0 is Z.
    Elements are tuples of coordinates, one per factor, reduced mod d.
    """

    invariants: tuple[int, ...]
    # X-coordinates (row vector) -> factor coordinates: column indices of c V to keep
    _v: tuple[tuple[int, ...], ...] = field(repr=False)
    _keep: tuple[int, ...] = field(repr=False)
    _binv: tuple[tuple[Fraction, ...], ...] = field(repr=False)
    generators: tuple[tuple[int, ...], ...] = ()

    def project(self, lam: Sequence) -> tuple[int, ...]:
        """Class of the lattice vector ``lam`` (in V coordinates)."""
        c = linalg.vecmat(lam, self._binv)
        c = [linalg.as_int(x) for x in c]
        cv = linalg.vecmat(c, self._v)
        return self.reduce(cv[k] for k in self._keep)

    def reduce(self, coords: Iterable[int]) -> tuple[int, ...]:
        return tuple(x % d if d else x for x, d in zip(coords, self.invariants))

    def add(self, a, b):
        return self.reduce(x + y for x, y in zip(a, b))

    def neg(self, a):
        return self.reduce(-x for x in a)

    @property
    def zero(self) -> tuple[int, ...]:
        return tuple(0 for _ in self.invariants)

    @property
    def is_finite(self) -> bool:
        return all(self.invariants)

    @property
    def order(self) -> int | None:
        return math.prod(self.invariants) if self.is_finite else None

    def elements(self) -> list[tuple[int, ...]]:
        if not self.is_finite:
            raise ValueError("infinite group")
        return [tuple(t) for t in itertools.product(*(range(d) for d in self.invariants))]

    def __str__(self) -> str:
        if not self.invariants:
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.invariants)


def quotient_group(basis: Sequence[Sequence[int]], relations: Sequence[Sequence]) -> AbelianQuotient:
    """X / span(relations), with X spanned by the rows of ``basis`` (V coordinates)."""
    dim = len(basis)
    binv = linalg.inverse(basis)
    rel_x = [[linalg.as_int(x) for x in linalg.vecmat(r, binv)] for r in relations]
    if not rel_x:
        rel_x = [[0] * dim]
    d, _u, v = linalg.smith_normal_form(rel_x)
    diag = [d[i][i] if i < len(d) else 0 for i in range(dim)]
    keep = tuple(i for i in range(dim) if diag[i] != 1)
    invariants = tuple(diag[i] for i in keep)
    vinv = linalg.inverse(v)
    gens = []
    for i in keep:
        cx = [linalg.as_int(x) for x in vinv[i]]
        gens.append(tuple(linalg.as_int(x) for x in linalg.vecmat(cx, basis)))
    return AbelianQuotient(
        invariants=invariants,
        _v=tuple(map(tuple, v)),
        _keep=keep,
        _binv=tuple(map(tuple, binv)),
        generators=tuple(gens),
    )


# --------------------------------------------------------------------------------------


@dataclass(frozen=True)
class Component:
    family: str
    rank: int
    node_offset: int  # global index of node (c, 1)
    coord_offset: int
    ncoords: int


class RootDatum:
    """Finite root system with a translation lattice X in V = Q^dim.

    Roots are indexed 0..2N-1: indices below N are positive, ``a + N`` is ``-root[a]``.
    """

    def __init__(self, types: Sequence[tuple[str, int]], lattice="adjoint"):
        types = [(str(f).upper(), int(n)) for f, n in types]
        if not types:
            raise RootDatumError("empty type list")
        for f, n in types:
            if not _valid_type(f, n):
                raise RootDatumError(f"unknown Dynkin type {f}{n}")
        self.types = tuple(types)
        self.lattice_kind, basis_rows = self._lattice_kind(lattice)
        gl = self.lattice_kind in ("gl", "gl-explicit")

        comps = []
        node_off = coord_off = 0
        for f, n in types:
            nc = n + 1 if gl else n
            comps.append(Component(f, n, node_off, coord_off, nc))
            node_off += n
            coord_off += nc
        self.components = tuple(comps)
        self.rank = node_off
        self.dim = coord_off
        self.nodes: tuple[Node, ...] = tuple(
            (c, i) for c, comp in enumerate(comps) for i in range(1, comp.rank + 1))
        self.node_index = {nd: k for k, nd in enumerate(self.nodes)}
        self.affine_nodes: tuple[Node, ...] = tuple(
            nd for c, comp in enumerate(comps) for nd in [(c, 0)] + [(c, i) for i in range(1, comp.rank + 1)])

        self.cartan = [[0] * self.rank for _ in range(self.rank)]
        for comp in comps:
            cm = cartan_matrix(comp.family, comp.rank)
            o = comp.node_offset
            for i in range(comp.rank):
                for j in range(comp.rank):
                    self.cartan[o + i][o + j] = cm[i][j]

        # simple roots (covectors) and coroots (vectors) in V coordinates
        self.simple_roots = []
        self.simple_coroots = []
        for comp in comps:
            o, co = comp.node_offset, comp.coord_offset
            for i in range(comp.rank):
                a = [0] * self.dim
                v = [0] * self.dim
                if gl:
                    a[co + i], a[co + i + 1] = 1, -1
                    v[co + i], v[co + i + 1] = 1, -1
                else:
                    a[co + i] = 1
                    for j in range(comp.rank):
                        v[co + j] = self.cartan[o + i][o + j]
                self.simple_roots.append(tuple(a))
                self.simple_coroots.append(tuple(v))
        self.simple_roots = tuple(self.simple_roots)
        self.simple_coroots = tuple(self.simple_coroots)

        self._build_roots()

        # central functionals: integer covectors killing every coroot
        self.central = tuple(tuple(r) for r in linalg.nullspace_int(self.simple_coroots, self.dim))
        self._R = [list(a) for a in self.simple_roots] + [list(z) for z in self.central]
        self._Rinv = linalg.inverse(self._R)
        # integer form of _Rinv over a common denominator, for the hot from_pairings path
        self._Rden = math.lcm(*(Fraction(x).denominator for row in self._Rinv for x in row))
        self._Rint = [[int(x * self._Rden) for x in row] for row in self._Rinv]

        if basis_rows is None:
            basis_rows = self._standard_basis()
        self.lattice = tuple(tuple(int(x) for x in row) for row in basis_rows)
        self._check_lattice()
        self.omega = quotient_group(self.lattice, self.simple_coroots)

    # -- construction helpers ----------------------------------------------------------

    def _lattice_kind(self, lattice):
        if isinstance(lattice, str):
            key = lattice.lower().replace("_", "-")
            aliases = {"adjoint": "adjoint", "ad": "adjoint", "sc": "sc",
                       "simply-connected": "sc", "gl": "gl", "gl-style": "gl"}
            if key not in aliases:
                raise RootDatumError(f"unknown lattice option {lattice!r}")
            kind = aliases[key]
            if kind == "gl" and any(f != "A" for f, _ in self.types):
                raise RootDatumError("GL-style lattice requires type A components")
            return kind, None
        rows = [list(r) for r in lattice]
        if not rows:
            raise RootDatumError("explicit lattice basis is empty")
        n_ss = sum(n for _, n in self.types)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise RootDatumError("ragged lattice basis")
        for r in rows:
            for x in r:
                if Fraction(x).denominator != 1:
                    raise RootDatumError("lattice basis entries must be integers")
        if width == n_ss:
            return "explicit", rows
        if all(f == "A" for f, _ in self.types) and width == sum(n + 1 for _, n in self.types):
            # explicit sublattice of the GL ambient space
            return "gl-explicit", rows
        raise RootDatumError(f"lattice rows have length {width}; expected {n_ss}")

    def _standard_basis(self):
        if self.lattice_kind in ("adjoint", "gl"):
            return linalg.identity(self.dim)
        if self.lattice_kind == "sc":
            return [list(v) for v in self.simple_coroots]
        raise AssertionError

    def _check_lattice(self):
        b = self.lattice
        if len(b) != self.dim or linalg.rank(b) != self.dim:
            raise RootDatumError("lattice basis must have full rank in V")
        binv = linalg.inverse(b)
        for v in self.simple_coroots:
            if any(x.denominator != 1 for x in linalg.vecmat(v, binv)):
                raise RootDatumError("lattice does not contain the coroot lattice")
        for row in b:
            for a, v in zip(self.simple_roots, self.simple_coroots):
                s = [x - sum(p * q for p, q in zip(a, row)) * y for x, y in zip(row, v)]
                if any(x.denominator != 1 for x in linalg.vecmat(s, binv)):
                    raise RootDatumError("lattice is not stable under the Weyl group")

    # coweight-style lattices switch to gl coordinates when given gl-width rows
    def _build_roots(self):
        roots, coroots, coeffs = [], [], []
        self.highest = []
        for comp in self.components:
            o = comp.node_offset
            cm = [row[o:o + comp.rank] for row in self.cartan[o:o + comp.rank]]
            comp_roots = _component_roots(cm)
            if len(comp_roots) != POSITIVE_ROOT_COUNT[comp.family](comp.rank):
                raise AssertionError("root enumeration mismatch")
            for k, (c, d) in enumerate(comp_roots):
                gc = [0] * self.rank
                for i, x in enumerate(c):
                    gc[o + i] = x
                cov = [0] * self.dim
                vec = [0] * self.dim
                for i in range(comp.rank):
                    if c[i]:
                        cov = [p + c[i] * q for p, q in zip(cov, self.simple_roots[o + i])]
                    if d[i]:
                        vec = [p + d[i] * q for p, q in zip(vec, self.simple_coroots[o + i])]
                coeffs.append(tuple(gc))
                roots.append(tuple(cov))
                coroots.append(tuple(vec))
            self.highest.append(len(roots) - 1)
        self.N = len(roots)
        self.root_coeffs = tuple(coeffs)
        self.roots = tuple(roots) + tuple(tuple(-x for x in r) for r in roots)
        self.coroots = tuple(coroots) + tuple(tuple(-x for x in r) for r in coroots)
        self.root_index = {r: a for a, r in enumerate(self.roots)}
        self.simple_index = tuple(self.root_index[a] for a in self.simple_roots)
        self.root_component = tuple(
            next(c for c, comp in enumerate(self.components)
                 if any(x for x in cf[comp.node_offset:comp.node_offset + comp.rank]))
            for cf in coeffs)
        self.rho2 = tuple(sum(r[k] for r in roots) for k in range(self.dim))
        self.highest = tuple(self.highest)

    # -- basic queries -----------------------------------------------------------------

    def __repr__(self):
        t = "x".join(f"{f}{n}" for f, n in self.types)
        return f"RootDatum({t}, {self.lattice_kind}, dim={self.dim})"

    @property
    def key(self):
        return (self.types, self.lattice)

    def __eq__(self, other):
        return isinstance(other, RootDatum) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def is_semisimple(self) -> bool:
        return not self.central

    def neg(self, a: int) -> int:
        return a + self.N if a < self.N else a - self.N

    def pair(self, v: Sequence, a: int):
        """<v, root_a>."""
        return sum(x * y for x, y in zip(v, self.roots[a]))

    def pairing(self, v: Sequence, covector: Sequence):
        return sum(x * y for x, y in zip(v, covector))

    def rho2_pairing(self, v: Sequence):
        """<v, 2 rho>."""
        return sum(x * y for x, y in zip(v, self.rho2))

    def in_lattice(self, v: Sequence) -> bool:
        return all(Fraction(x).denominator == 1 for x in self.to_lattice_coords(v))

    def to_lattice_coords(self, v: Sequence) -> list[Fraction]:
        return linalg.vecmat(v, self._lattice_inv)

    @cached_property
    def _lattice_inv(self):
        return linalg.inverse(self.lattice)

    def from_pairings(self, simple_pairs: Sequence, central: Sequence) -> tuple:
        """Vector with prescribed simple-root pairings and central coordinates."""
        vals = list(simple_pairs) + list(central)
        if all(isinstance(x, int) for x in vals):
            den = self._Rden
            out = []
            for row in self._Rint:
                q, r = divmod(sum(x * y for x, y in zip(row, vals)), den)
                out.append(Fraction(q * den + r, den) if r else q)
            return tuple(out)
        out = linalg.matvec(self._Rinv, vals)
        return tuple(x.numerator if x.denominator == 1 else x for x in out)

    def central_coords(self, v: Sequence) -> tuple:
        return tuple(sum(x * y for x, y in zip(v, z)) for z in self.central)

    def fundamental_coweight(self, node: Node) -> tuple:
        """omega_i^vee: pairs to delta_ij with simple roots, zero central part."""
        k = self.node_index[tuple(node)]
        return self.from_pairings([int(j == k) for j in range(self.rank)], [0] * len(self.central))

    def coweight_coefficients(self, v: Sequence) -> tuple:
        """Coefficients of v on the fundamental coweights (its simple-root pairings)."""
        return tuple(self.pairing(v, a) for a in self.simple_roots)

    def is_dominant(self, v: Sequence) -> bool:
        return all(self.pairing(v, a) >= 0 for a in self.simple_roots)

    def component_of_node(self, node: Node) -> Component:
        return self.components[node[0]]

    def height(self, a: int) -> int:
        h = sum(self.root_coeffs[a % self.N])
        return h if a < self.N else -h

    def reflect(self, v: Sequence, a: int) -> tuple:
        """s_alpha(v) = v - <v, alpha> alpha^vee."""
        p = self.pair(v, a)
        return tuple(x - p * y for x, y in zip(v, self.coroots[a]))

    def simple_reflect(self, v: Sequence, k: int) -> tuple:
        return self.reflect(v, self.simple_index[k])

    # -- finite Weyl group as permutations of the roots --------------------------------

    def reflection_perm(self, a: int) -> tuple[int, ...]:
        cache = self.__dict__.setdefault("_refl_cache", {})
        if a in cache:
            return cache[a]
        # covector action: s_beta . gamma = gamma - <beta^vee, gamma> beta
        beta, bv = self.roots[a], self.coroots[a]
        perm = []
        for g in self.roots:
            p = sum(x * y for x, y in zip(bv, g))
            perm.append(self.root_index[tuple(x - p * y for x, y in zip(g, beta))])
        perm = tuple(perm)
        cache[a] = cache[self.neg(a)] = perm
        return perm

    @cached_property
    def identity_perm(self) -> tuple[int, ...]:
        return tuple(range(2 * self.N))

    def weyl_identity(self) -> FiniteWeylElt:
        return FiniteWeylElt(self, self.identity_perm)

    def simple_reflection(self, k: int) -> FiniteWeylElt:
        return FiniteWeylElt(self, self.reflection_perm(self.simple_index[k]))

    def weyl_from_word(self, word: Iterable[int]) -> FiniteWeylElt:
        w = self.weyl_identity()
        for k in word:
            w = w * self.simple_reflection(k)
        return w

    def weyl_elements(self) -> list[FiniteWeylElt]:
        """All of W_0 (only sensible for small groups)."""
        gens = [self.reflection_perm(a) for a in self.simple_index]
        seen = {self.identity_perm}
        queue = deque([self.identity_perm])
        while queue:
            w = queue.popleft()
            for g in gens:
                u = tuple(g[i] for i in w)
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return [FiniteWeylElt(self, p) for p in sorted(seen)]

    @cached_property
    def weyl_order(self) -> int:
        return math.prod(_weyl_order(c.family, c.rank) for c in self.components)


@dataclass(frozen=True)
class FiniteWeylElt:
    """Element of W_0 stored as its permutation of the root indices (w[a] = index of w.root_a)."""

    datum: RootDatum = field(compare=False, repr=False)
    perm: tuple[int, ...]

    def __mul__(self, other: FiniteWeylElt) -> FiniteWeylElt:
        return FiniteWeylElt(self.datum, tuple(self.perm[i] for i in other.perm))

    def inverse(self) -> FiniteWeylElt:
        inv = [0] * len(self.perm)
        for a, b in enumerate(self.perm):
            inv[b] = a
        return FiniteWeylElt(self.datum, tuple(inv))

    @property
    def length(self) -> int:
        n = self.datum.N
        return sum(1 for a in range(n) if self.perm[a] >= n)

    def is_identity(self) -> bool:
        return self.perm == self.datum.identity_perm

    @cached_property
    def matrix(self) -> list[list]:
        """Matrix of the action on V (columns are images of the standard basis)."""
        d = self.datum
        inv = self.inverse().perm
        rows = [list(d.roots[inv[a]]) for a in d.simple_index] + [list(z) for z in d.central]
        m = linalg.matmul(d._Rinv, rows)
        return [[linalg.as_int(x) for x in row] for row in m]

    def apply(self, v: Sequence) -> tuple:
        return tuple(linalg.matvec(self.matrix, v))

    def word(self) -> tuple[int, ...]:
        """Lexicographically smallest reduced word (global node indices)."""
        d = self.datum
        out = []
        w = self
        while True:
            inv = w.inverse().perm
            k = next((k for k, a in enumerate(d.simple_index) if inv[a] >= d.N), None)
            if k is None:
                return tuple(out)
            out.append(k)
            w = d.simple_reflection(k) * w

    def __repr__(self):
        d = self.datum
        return "FiniteWeylElt(" + " ".join(_letter(d, d.nodes[k]) for k in self.word()) + ")"


def _letter(datum: RootDatum, node: Node) -> str:
    if len(datum.components) == 1:
        return f"s{node[1]}"
    return f"s{node[0]}_{node[1]}"


# --------------------------------------------------------------------------------------
# operations


def build_root_datum(config) -> RootDatum:
    """RootDatum from a mapping with ``type`` (list of [family, rank]) and ``lattice``."""
    types = config.get("type")
    if types is None:
        raise RootDatumError("group config needs a 'type' field")
    if isinstance(types, str):
        types = [(types[0], int(types[1:]))]
    try:
        types = [(t[0], int(t[1])) for t in types]
    except (TypeError, ValueError, IndexError) as exc:
        raise RootDatumError(f"bad type list {types!r}") from exc
    return RootDatum(types, config.get("lattice", "adjoint"))


def _weyl_order(family: str, n: int) -> int:
    if family == "A":
        return math.factorial(n + 1)
    if family in "BC":
        return 2 ** n * math.factorial(n)
    if family == "D":
        return 2 ** (n - 1) * math.factorial(n)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600, ("F", 4): 1152, ("G", 2): 12}[(family, n)]


def _as_vec(v) -> tuple:
    return tuple(x if isinstance(x, int) else Fraction(x) for x in v)


def _normalize(v) -> tuple:
    return tuple(x.numerator if isinstance(x, Fraction) and x.denominator == 1 else x for x in v)


def dominant_rep(datum: RootDatum, v: Sequence) -> tuple[tuple, FiniteWeylElt]:
    """(v_dom, w) with v_dom = w(v) dominant.

    Each step reflects in the smallest-index simple root pairing negatively with the
    current vector.
    """
    cur = _as_vec(v)
    perm = datum.identity_perm
    while True:
        k = next((k for k, a in enumerate(datum.simple_roots) if datum.pairing(cur, a) < 0), None)
        if k is None:
            return _normalize(cur), FiniteWeylElt(datum, perm)
        cur = datum.simple_reflect(cur, k)
        s = datum.reflection_perm(datum.simple_index[k])
        perm = tuple(s[i] for i in perm)


def weyl_orbit(datum: RootDatum, v: Sequence) -> set[tuple]:
    """The full W_0-orbit of v."""
    start = _normalize(_as_vec(v))
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for k in range(datum.rank):
            if datum.pairing(u, datum.simple_roots[k]) == 0:
                continue
            w = _normalize(datum.simple_reflect(u, k))
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def sorted_orbit(datum: RootDatum, v: Sequence) -> list[tuple]:
    """Orbit in a fixed order: by distance from the dominant element, then lexicographic."""
    return sorted(weyl_orbit(datum, v), key=lambda u: (-datum.rho2_pairing(u), u))


def coinvariants(datum: RootDatum, delta_matrix: Sequence[Sequence[int]]) -> AbelianQuotient:
    """Omega_sigma = X / (Q^vee + (1 - delta) X), where delta acts linearly on V."""
    rel = [list(v) for v in datum.simple_coroots]
    for b in datum.lattice:
        db = linalg.matvec(delta_matrix, b)
        rel.append([x - y for x, y in zip(b, db)])
    return quotient_group(datum.lattice, rel)


def omega_to_coinvariants(datum: RootDatum, omega_sigma: AbelianQuotient, cls: Sequence[int]):
    """Image in Omega_sigma of an Omega element given by coordinates on Omega's generators."""
    lam = [0] * datum.dim
    for c, g in zip(cls, datum.omega.generators):
        lam = [x + c * y for x, y in zip(lam, g)]
    return omega_sigma.project(lam)
