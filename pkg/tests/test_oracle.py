from __future__ import annotations

from fractions import Fraction

from ekorlab.oracle import OracleGroup, adm_oracle, gl_newton_polygons, weyl_group_matrices

from support import datum, gl

half = Fraction(1, 2)


def test_polygons_by_hand():
    # GL2, mu = (1, 0): the basic slope (1/2, 1/2) and the ordinary (1, 0)
    assert gl_newton_polygons((1, 0)) == {(half, half), (1, 0)}
    # quaternion division algebra: the break point (1, 3/2) is not integral, only the basic class remains
    assert gl_newton_polygons((1, 0), 1) == {(half, half)}
    assert gl_newton_polygons((0, 0, 0)) == {(0, 0, 0)}
    third = Fraction(1, 3)
    assert gl_newton_polygons((1, 1, 0, 0)) == {
        (1, 1, 0, 0), (1, half, half, 0), (1, third, third, third), (2 * third,) * 3 + (0,), (half,) * 4}


def test_weyl_matrices():
    assert len(weyl_group_matrices(datum("A", 2))) == 6
    assert len(weyl_group_matrices(datum("G", 2))) == 12


def test_adm_oracle_small():
    assert len(adm_oracle(gl(2), (1, 0))) == 3
    assert len(adm_oracle(datum("A", 1), (1,))) == 3
    G = OracleGroup(gl(2))
    assert all(G.length(x) <= 1 for x in adm_oracle(gl(2), (1, 0)))
