"""Newton and Kottwitz points, sigma-straight elements and the set B(G, {mu})."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .admissible import DEFAULT_CAP, adm, normalize_mu
from .iwahori import ExtAffineElt, FrobSpec, perm_order, twisted_product
from .rootdata import RootDatum, dominant_rep, sorted_orbit


class NoUniqueMax(RuntimeError):
    """The computed B(G, {mu}) has several dominance-maximal classes."""


@dataclass(frozen=True, order=True)
class NewtonPair:
    """A sigma-conjugacy class, recorded as (dominant Newton vector, Kottwitz class)."""

    nu: tuple
    kappa: tuple


@dataclass(frozen=True)
class BClass:
    pair: NewtonPair
    representative: ExtAffineElt
    rho2: Fraction  # <nu, 2 rho>

    @property
    def nu(self):
        return self.pair.nu

    @property
    def kappa(self):
        return self.pair.kappa


def _frac_vec(v) -> tuple:
    return tuple(Fraction(x) for x in v)


def newton_data(x: ExtAffineElt, sigma: FrobSpec) -> tuple[tuple, Fraction, int]:
    """(nu, <nu, 2 rho>, m) where m is the iteration period used.

    With N the order of sigma as an automorphism of W~, the element (x sigma)^N equals
    y = x sigma(x) ... sigma^{N-1}(x) followed by a trivially acting power of sigma.  Some
    power y^k is a translation t^lam, and then nu = dom(lam / (N k)).
    """
    W = x.W
    n_sig = sigma.order
    y = twisted_product(sigma, x, n_sig)
    k = perm_order(y.w)
    z = W.power(y, k)
    m = n_sig * k
    lam = W.lam(z)
    nu = tuple(Fraction(v, m) for v in dominant_rep(W.datum, lam)[0])
    # <dom(lam), 2 rho> is the sum of |<lam, alpha>| over positive roots
    rho2 = Fraction(sum(abs(z.pair[a]) for a in range(W.N)), m)
    return _frac_vec(nu), rho2, m


def newton_point(x: ExtAffineElt, sigma: FrobSpec) -> tuple:
    return newton_data(x, sigma)[0]


def kottwitz_point(x: ExtAffineElt, sigma: FrobSpec) -> tuple:
    return sigma.kappa_of_lam(x.lam)


def newton_pair(x: ExtAffineElt, sigma: FrobSpec) -> NewtonPair:
    return NewtonPair(newton_point(x, sigma), kottwitz_point(x, sigma))


def is_sigma_straight(x: ExtAffineElt, sigma: FrobSpec) -> bool:
    """l(x) = <nu(x), 2 rho>."""
    if x.length == 0:
        return True
    # cheap necessary condition: l(x sigma(x)) = 2 l(x)
    if x.W.mul(x, sigma.apply(x)).length != 2 * x.length:
        return False
    return newton_data(x, sigma)[1] == x.length


def straight_additivity_check(x: ExtAffineElt, sigma: FrobSpec, n_max: int | None = None) -> bool:
    """l(x sigma(x) ... sigma^{n-1}(x)) = n l(x) for every n <= n_max.

    The default n_max is a period m with (x sigma)^m a translation.  That suffices: the
    lengths of the powers of a translation are additive, and subadditivity then gives
    l((x sigma)^n) >= n l(x) for every n once it holds at m.
    """
    W = x.W
    if n_max is None:
        n_max = sigma.order * perm_order(twisted_product(sigma, x, sigma.order).w)
    y, cur = W.one, x
    for n in range(1, n_max + 1):
        y = W.mul(y, cur)
        if y.length != n * x.length:
            return False
        cur = sigma.apply(cur)
    return True


def sigma0_orbit(datum: RootDatum, mu: Sequence, sigma: FrobSpec) -> list[tuple]:
    start = _frac_vec(dominant_rep(datum, mu)[0])
    orbit = [start]
    cur = _frac_vec(sigma.sigma0(start))
    while cur != start:
        orbit.append(cur)
        cur = _frac_vec(sigma.sigma0(cur))
    return orbit


def mu_diamond(datum: RootDatum, mu: Sequence, sigma: FrobSpec) -> tuple:
    """Average of the sigma_0-orbit of the dominant representative of mu."""
    orbit = sigma0_orbit(datum, mu, sigma)
    return tuple(sum(col, Fraction(0)) / len(orbit) for col in zip(*orbit))


def mu_natural(datum: RootDatum, mu: Sequence, sigma: FrobSpec) -> tuple:
    return sigma.kappa_of_lam(mu)


def mu_pair(datum: RootDatum, mu: Sequence, sigma: FrobSpec) -> NewtonPair:
    return NewtonPair(mu_diamond(datum, mu, sigma), mu_natural(datum, mu, sigma))


def dominance_leq(datum: RootDatum, b1: NewtonPair, b2: NewtonPair) -> bool:
    """kappa_1 = kappa_2 and nu_2 - nu_1 is a non-negative combination of simple coroots."""
    if b1.kappa != b2.kappa:
        return False
    diff = [y - x for x, y in zip(b1.nu, b2.nu)]
    coeffs = linalg.solve_rows(datum.simple_coroots, diff)
    return coeffs is not None and all(c >= 0 for c in coeffs)


def rho2(datum: RootDatum, v: Sequence) -> Fraction:
    return Fraction(datum.rho2_pairing(v))


def b_g_mu(datum: RootDatum, mu: Sequence, sigma: FrobSpec, cap: int = DEFAULT_CAP) -> list[BClass]:
    """Classes of B(G, {mu}) through the sigma-straight elements of Adm(mu).

    Each class keeps one representative of minimal length, ties broken by the
    lexicographically smallest reduced word.  The list is sorted by <nu, 2 rho>, which
    refines the dominance order.
    """
    mu = normalize_mu(datum, mu)
    W = sigma.W
    groups: dict[NewtonPair, list] = {}
    for x in adm(datum, mu, cap):
        if x.length and W.mul(x, sigma.apply(x)).length != 2 * x.length:
            continue
        nu, r2, _ = newton_data(x, sigma)
        if r2 != x.length:
            continue
        key = NewtonPair(nu, kottwitz_point(x, sigma))
        groups.setdefault(key, []).append((x, r2))
    out = []
    for key, members in groups.items():
        lmin = min(x.length for x, _ in members)
        best = min((x for x, _ in members if x.length == lmin), key=lambda x: _word_key(x))
        out.append(BClass(key, best, members[0][1]))
    out.sort(key=lambda b: (b.rho2, b.nu, b.kappa))
    return out


def _word_key(x: ExtAffineElt):
    word, tau = x.W.reduced_word(x)
    return (word, x.W.omega_component(tau))


def b_max(datum: RootDatum, mu: Sequence, sigma: FrobSpec, cap: int = DEFAULT_CAP,
          classes: list[BClass] | None = None) -> BClass:
    classes = b_g_mu(datum, mu, sigma, cap) if classes is None else classes
    maxima = [b for b in classes
              if not any(c is not b and dominance_leq(datum, b.pair, c.pair) for c in classes)]
    if len(maxima) != 1:
        raise NoUniqueMax(f"{len(maxima)} maximal classes in B(G, mu)")
    top = maxima[0]
    if not all(dominance_leq(datum, b.pair, top.pair) for b in classes):
        raise NoUniqueMax("maximal class does not dominate every class")
    return top


def mu_ordinary_exists(datum: RootDatum, mu: Sequence, sigma: FrobSpec) -> bool:
    """Whether mu^diamond is attained as a Newton point in B(G, {mu}).

    A straight element with Newton point mu^diamond has length <mu, 2 rho>, the maximal
    length in Adm(mu), so it is one of the translations t^{mu'}.  Only those W_0(mu)
    translations need to be examined.
    """
    mu = normalize_mu(datum, mu)
    target = mu_diamond(datum, mu, sigma)
    W = sigma.W
    for v in sorted_orbit(datum, mu):
        t = W.translation(v)
        if is_sigma_straight(t, sigma) and newton_point(t, sigma) == target:
            return True
    return False


def virtual_dim(datum: RootDatum, mu: Sequence, nu: Sequence) -> Fraction:
    """<mu, 2 rho> - <nu, 2 rho>."""
    return rho2(datum, mu) - rho2(datum, nu)


def format_nu(datum: RootDatum, nu: Sequence) -> str:
    """nu as a combination of fundamental coweights, plus a central part when present."""
    parts = []
    for k, nd in enumerate(datum.nodes):
        c = Fraction(datum.pair(nu, datum.simple_index[k]))
        if c:
            coef = "" if c == 1 else f"{c}*"
            name = f"w{nd[1]}" if len(datum.components) == 1 else f"w{nd[0]}_{nd[1]}"
            parts.append(f"{coef}{name}")
    s = " + ".join(parts) if parts else "0"
    cen = datum.central_coords(nu)
    if any(cen):
        s += " [central " + ",".join(str(Fraction(c)) for c in cen) + "]"
    return s


def format_vec(v: Sequence) -> str:
    return "(" + ",".join(str(Fraction(x)) for x in v) + ")"
