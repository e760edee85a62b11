from lie2coh.exactla import Matrix
from lie2coh.fixtures import shipped_systems
from lie2coh.rep2 import Rep2, SeriesNotTerminating, check_rep2, exp_glphi1, glphi1_inverse, glphi1_product
from lie2coh.liecore import TwoVectorSpace

import pytest


def test_shipped_representations_pass():
    for s in shipped_systems().values():
        assert check_rep2(s.cm, s.ts, s.rep).passed, s.name


def test_perturbed_representation_fails():
    s = shipped_systems()["aff1-adjoint"]
    r = s.rep
    bad = Rep2(r.rho01, tuple(m + Matrix.identity(m.rows) for m in r.rho00), r.rho1, r.dimW, r.dimV)
    assert not check_rep2(s.cm, s.ts, bad).passed


def test_whitehead_group_law():
    ts = TwoVectorSpace(1, 2, Matrix.from_rows([[1], [0]], 1))
    A = Matrix.from_rows([[0, 3]])
    B = Matrix.from_rows([[2, 1]])
    assert glphi1_product(ts, A, glphi1_inverse(ts, A)).is_zero()
    C = glphi1_product(ts, glphi1_product(ts, A, B), A)
    assert C == glphi1_product(ts, A, glphi1_product(ts, B, A))
    # phi A is nilpotent, so the exponential series terminates exactly
    assert exp_glphi1(ts, A) == A


def test_non_nilpotent_exp_is_an_error():
    ts = TwoVectorSpace(1, 1, Matrix.identity(1))
    with pytest.raises(SeriesNotTerminating):
        exp_glphi1(ts, Matrix.identity(1))
