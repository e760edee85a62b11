from fractions import Fraction

from lie2coh.exactla import Matrix
from lie2coh.fixtures import shipped_systems
from lie2coh.liecore import (CrossedModuleLA, LieAlgebra, aff1, check_crossed_module, check_lie_algebra,
                             final_target, nerve_basis, nerve_bracket, nerve_face, nerve_from_flat)
from lie2coh.rep2 import glphi_module
from lie2coh.liecore import TwoVectorSpace


def test_shipped_crossed_modules_pass():
    for s in shipped_systems().values():
        assert check_crossed_module(s.cm).passed, s.name


def test_broken_jacobi_is_reported():
    # [e0,e1] = e1, [e1,e2] = e0, [e0,e2] = 0 violates Jacobi
    alg = LieAlgebra.from_triples(3, [(0, 1, 1, 1), (1, 2, 0, 1)], antisymmetrize=True)
    res = check_lie_algebra(alg)
    assert not res.passed and res.witness is not None


def test_broken_peiffer_is_reported():
    a = aff1()
    cm = CrossedModuleLA.build(a, a, Matrix.identity(2))  # no action, so Peiffer fails
    rep = check_crossed_module(cm)
    assert not rep.passed
    assert "Peiffer" in [r.name for r in rep.failures()]


def test_glphi_bracket_and_action():
    mod = glphi_module(TwoVectorSpace(1, 2, Matrix.from_rows([[2], [-1]], 1)))
    assert check_crossed_module(mod.cm).passed
    assert mod.cm.g.dim == 2


def test_face_maps_are_simplicial_and_homomorphic():
    cm = shipped_systems()["aff1-adjoint"].cm
    p = 2
    dim = cm.nerve_dim(p)
    vs = [nerve_basis(cm, p, i) for i in range(dim)]
    for i in range(p + 1):
        for j in range(i + 1, p + 1):
            for v in vs:
                lhs = nerve_face(cm, p - 1, i, nerve_face(cm, p, j, v))
                rhs = nerve_face(cm, p - 1, j - 1, nerve_face(cm, p, i, v))
                assert lhs.flat() == rhs.flat()
    for k in range(p + 1):
        for a in vs:
            for b in vs:
                lhs = nerve_face(cm, p, k, nerve_bracket(cm, p, a, b))
                rhs = nerve_bracket(cm, p - 1, nerve_face(cm, p, k, a), nerve_face(cm, p, k, b))
                assert lhs.flat() == rhs.flat()


def test_final_target_of_zero_arrows():
    cm = shipped_systems()["aff1-adjoint"].cm
    v = nerve_from_flat(cm, 1, [Fraction(0)] * cm.g.dim + [Fraction(1), Fraction(0)])
    assert final_target(cm, v) == [1, 0]
