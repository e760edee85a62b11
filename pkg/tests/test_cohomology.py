from math import comb

import pytest

from lie2coh.cohomology import NotARepresentation, betti, betti_report, ce_cohomology, cocycle_basis, is_coboundary, nabla_of
from lie2coh.exactla import Matrix
from lie2coh.fixtures import shipped_systems
from lie2coh.grid import Grid, GridOptions
from lie2coh.liecore import LieAlgebra, TwoVectorSpace, aff1, unit_crossed_module
from lie2coh.rep2 import Rep2


def sl2() -> LieAlgebra:
    # basis h, e, f
    return LieAlgebra.from_triples(3, [(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)], antisymmetrize=True)


def unit_grid(alg, top):
    cm = unit_crossed_module(alg)
    ts = TwoVectorSpace(0, 1, Matrix.zeros(1, 0))
    return Grid(cm, ts, Rep2.zero(cm, ts), GridOptions(max_degree=top + 1))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ce_of_abelian_is_exterior_algebra(n):
    assert ce_cohomology(LieAlgebra.abelian(n), None, 1).betti == tuple(comb(n, k) for k in range(n + 1))


def test_ce_of_sl2():
    assert ce_cohomology(sl2(), None, 1).betti == (1, 0, 0, 1)


def test_ce_of_aff1_adjoint_vanishes():
    a = aff1()
    ad = [Matrix.from_columns([a.br(a.basis(i), a.basis(j)) for j in range(2)], 2) for i in range(2)]
    assert ce_cohomology(a, ad, 2).betti == (0, 0, 0)


def test_ce_rejects_non_representation():
    with pytest.raises(NotARepresentation):
        ce_cohomology(aff1(), [Matrix.identity(1), Matrix.identity(1)], 1)


@pytest.mark.parametrize("alg, expected", [(aff1(), (1, 1, 0)), (sl2(), (1, 0, 0, 1))])
def test_unit_two_algebra_matches_ce(alg, expected):
    g = unit_grid(alg, len(expected) - 1)
    assert betti_report(g, len(expected) - 1).betti == expected


def test_cocycle_basis_dimension_matches_betti():
    s = shipped_systems()["glphi-1-1-adjoint"]
    g = Grid(s.cm, s.ts, s.rep, GridOptions(max_degree=3))
    for n in range(3):
        zs = cocycle_basis(g, n)
        boundaries = sum(1 for z in zs if is_coboundary(g, z) is not None)
        assert all(nabla_of(g, z).is_zero() for z in zs)
        assert len(zs) - boundaries <= betti(g, n)
