"""Shared constructors for tests."""

from __future__ import annotations

from functools import cache

from ekorlab.iwahori import FrobSpec, iwahori_weyl
from ekorlab.rootdata import RootDatum


@cache
def datum(family: str, rank: int, lattice: str = "adjoint") -> RootDatum:
    return RootDatum([(family, rank)], lattice)


@cache
def gl(n: int) -> RootDatum:
    return RootDatum([("A", n - 1)], "gl")


def frob(d: RootDatum, images=None, omega=None) -> FrobSpec:
    """images: list of finite labels, image of node i+1 (single component)."""
    diagram = {} if images is None else {(0, i + 1): (0, j) for i, j in enumerate(images)}
    return FrobSpec(d, diagram, omega)


def coweight(d: RootDatum, i: int, scale: int = 1) -> tuple:
    return tuple(scale * x for x in d.fundamental_coweight((0, i)))


def random_element(W, rng, length: int = 8):
    nodes = sorted(W.datum.affine_nodes)
    om = W.datum.omega
    lam = [0] * W.datum.dim
    for g, inv in zip(om.generators, om.invariants):
        c = rng.randrange(inv) if inv else rng.randrange(-2, 3)
        lam = [a + c * b for a, b in zip(lam, g)]
    x = W.length_zero(tuple(lam))
    for _ in range(rng.randrange(length + 1)):
        x = W.mul(x, W.simple(rng.choice(nodes)))
    return x


__all__ = ["datum", "gl", "frob", "coweight", "random_element", "iwahori_weyl"]
