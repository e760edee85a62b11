import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lie2coh.extensions import coboundary_tuple
from lie2coh.grid import ArityMismatch, Cochain, GridIndex
from lie2coh import vanest
from lie2coh.vanest import (AS_STATED, FIXTURES, GroupCochain, JetBudgetExceeded, JetScalar,
                            NotAGroupCocycle, RationalizationFailed, SingularBase, UnsupportedShape,
                            audit_fixture, bilinear_plane_cocycle, chain_map_report, commutation_report,
                            derived_grid, fixture, gp_delta_ab, jet_oracle, linearize_cocycle, mat_inverse,
                            mat_mul, random_polynomial_cochain, rationalize, sample_element, sample_row, van_est,
                            zero_cochain)

coef = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def jets(draw, gens=3):
    return JetScalar({m: draw(coef) for m in range(1 << gens) if draw(st.booleans())})


@settings(max_examples=200, deadline=None)
@given(jets(), jets(), jets())
def test_jet_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == JetScalar()


@settings(max_examples=200, deadline=None)
@given(jets())
def test_jet_inverse(a):
    if a.base == 0:
        with pytest.raises(SingularBase):
            a.inverse()
    else:
        assert a * a.inverse() == JetScalar({0: Fraction(1)})


def test_generators_square_to_zero():
    e = JetScalar.generator(0)
    assert e * e == JetScalar()
    x = JetScalar({0: 2}) + e
    # d/de (1/x) at base 2 is -1/4
    assert (1 / x).coefficient([0]) == Fraction(-1, 4) or abs((1 / x).coefficient([0]) + 0.25) < 1e-15


def test_jet_oracle():
    rep = jet_oracle(samples=100, seed=3)
    assert rep.passed, rep.max_deviation


def test_ring_generic_inverse_on_jets():
    e = JetScalar.generator(0, coef=Fraction(1))
    m = [[1 + e, e], [0, 1]]
    inv = mat_inverse(m)
    prod = mat_mul(m, inv)
    assert prod[0][0] == JetScalar({0: 1}) and prod[0][1] == JetScalar() and prod[1][1] == 1


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_axioms(name):
    report = audit_fixture(fixture(name))
    assert all(report.values()), report


@pytest.mark.parametrize("name", ["abelian-2", "glphi-1-1", "heis"])
def test_group_face_maps_are_simplicial(name):
    fx = fixture(name)
    rng = random.Random(7)
    row = sample_row(fx, 3, rng)
    for i in range(3):
        for j in range(i + 1, 4):
            lhs = vanest.row_face(fx, i, vanest.row_face(fx, j, row))
            rhs = vanest.row_face(fx, j - 1, vanest.row_face(fx, i, row))
            assert max(abs(a - b) for g1, g2 in zip(lhs.gs, rhs.gs) for ra, rb in zip(g1, g2)
                       for a, b in zip(ra, rb)) < 1e-12
            assert max(abs(a - b) for ra, rb in zip(lhs.h, rhs.h) for a, b in zip(ra, rb)) < 1e-12


@pytest.mark.parametrize("name", ["abelian-2", "glphi-1-1", "heis"])
def test_face_maps_respect_the_product(name):
    fx = fixture(name)
    rng = random.Random(8)
    a, b = sample_row(fx, 2, rng), sample_row(fx, 2, rng)
    for k in range(3):
        lhs = vanest.row_face(fx, k, vanest.row_mul(fx, a, b))
        rhs = vanest.row_mul(fx, vanest.row_face(fx, k, a), vanest.row_face(fx, k, b))
        assert max(abs(x - y) for ra, rb in zip(lhs.h, rhs.h) for x, y in zip(ra, rb)) < 1e-12


def test_group_total_differential_squares_to_zero_from_degree_one():
    for name in ("heis", "abelian-2", "glphi-1-1"):
        fx = fixture(name)
        rng = random.Random(3)
        for src in (GridIndex(1, 0, 0), GridIndex(0, 1, 0), GridIndex(0, 0, 1)):
            c = random_polynomial_cochain(fx, src, rng).as_cochain(fx)
            once = vanest.gp_nabla(fx, [c])
            twice = vanest.gp_nabla(fx, list(once.values()))
            assert twice
            nonzero = worst = 0.0
            for idx, t in twice.items():
                for _ in range(3):
                    rows = [sample_row(fx, idx.p, rng) for _ in range(idx.q)]
                    fs = [sample_element(fx.G, rng) for _ in range(idx.r)]
                    worst = max([worst] + [abs(v) for v in t(rows, fs)])
            for idx, t in once.items():
                rows = [sample_row(fx, idx.p, rng) for _ in range(idx.q)]
                fs = [sample_element(fx.G, rng) for _ in range(idx.r)]
                nonzero = max([nonzero] + [abs(v) for v in t(rows, fs)])
            assert nonzero > 1e-3
            assert worst < 1e-9, (name, src, worst)


@pytest.mark.parametrize("name", ["abelian-1", "abelian-2", "glphi-1-1", "heis"])
def test_commutation_identities(name):
    rep = commutation_report(fixture(name))
    assert rep.passed, "\n".join(rep.lines())


def test_uniform_signs_differ_by_an_exact_sign_flip():
    fx = fixture("heis")
    grid = derived_grid(fx)
    for name, shape in (("Delta_1,1", GridIndex(0, 0, 2)), ("Delta_1,r", GridIndex(0, 0, 3))):
        c = random_polynomial_cochain(fx, shape, random.Random(1)).as_cochain(fx)
        lhs, rhs = vanest.identity_sides(fx, grid, name, c, AS_STATED)
        assert any(abs(v) > 0.5 for v in lhs)
        assert max(abs(a + b) for a, b in zip(lhs, rhs)) < 1e-9


def test_uniform_signs_hold_where_slot_order_is_immaterial():
    rep = commutation_report(fixture("glphi-1-1"), convention=AS_STATED)
    assert rep.passed


@pytest.mark.parametrize("name", ["abelian-2", "heis"])
def test_signed_van_est_is_a_chain_map(name):
    rep = chain_map_report(fixture(name), max_source_degree=2)
    assert rep.passed, "\n".join(rep.lines())


def test_panel_cochains_vanish_when_a_slot_is_the_unit():
    fx = fixture("heis")
    c = random_polynomial_cochain(fx, GridIndex(1, 1, 1), random.Random(2)).as_cochain(fx)
    row = sample_row(fx, 1, random.Random(0))
    assert c([row], [fx.G.unit_list()]) == [0.0]
    assert c([row], [sample_element(fx.G, random.Random(1))]) != [0.0]


def test_bilinear_plane_linearization():
    fx = fixture("unit-R2")
    z = linearize_cocycle(fx, bilinear_plane_cocycle(fx))
    # raw van Est gives y1 y2' - y1' y2; the chain-map sign at (0,2,0) is -1
    assert z.w0.coords == (Fraction(-1),)
    assert not any(z.f.coords) and not any(z.a.coords) and not any(z.w1.coords)


@pytest.mark.parametrize("name", ["abelian-2", "heis", "glphi-1-1"])
def test_group_coboundary_linearizes_to_algebra_coboundary(name):
    fx = fixture(name)
    grid = derived_grid(fx)
    rng = random.Random(4)
    c = random_polynomial_cochain(fx, GridIndex(0, 1, 0), rng).as_cochain(fx)
    b = random_polynomial_cochain(fx, GridIndex(0, 0, 1), rng).as_cochain(fx)
    image = vanest.gp_nabla(fx, [c, b])
    z = linearize_cocycle(fx, [image.get(i) for i in vanest.GROUP_COMPONENTS], grid)
    exact = [Cochain(x.index, tuple(rationalize(v) for v in van_est(fx, x).coords)) for x in (c, b)]
    expected = coboundary_tuple(grid, *exact)
    assert (z.f, z.w0, z.a, z.w1) == (expected.f, expected.w0, expected.a, expected.w1)
    assert any(z.f.coords + z.w0.coords + z.a.coords + z.w1.coords)


def test_first_r_differential_is_a_complex_on_the_linear_fixture():
    fx = fixture("glphi-1-1")
    rng = random.Random(5)
    for shape in (GridIndex(0, 1, 0), GridIndex(1, 1, 0), GridIndex(0, 2, 0)):
        c = random_polynomial_cochain(fx, shape, rng).as_cochain(fx)
        dd = vanest.gp_d_r(fx, vanest.gp_delta_prime(fx, c))
        for _ in range(4):
            rows = [sample_row(fx, shape.p, rng) for _ in range(shape.q)]
            fs = [sample_element(fx.G, rng) for _ in range(2)]
            assert max(abs(v) for v in dd(rows, fs)) < 1e-9


def test_first_difference_map_by_hand_on_the_abelian_fixture():
    # r = 1 at (0,0,1): Delta_{1,1} c (g; h) = phi c(g), twists trivial up to rho00 of the h-part
    fx = fixture("abelian-1")
    c = GroupCochain(GridIndex(0, 0, 1), lambda rows, fs: [fs[0][0][1], 0], "g")
    d = gp_delta_ab(fx, c, 1, 1)
    g, h = sample_element(fx.G, random.Random(1)), sample_element(fx.H, random.Random(2))
    row = vanest.Row((g,), h)
    expected = vanest.mat_vec(fx.rho00(vanest.t_p(fx, vanest.row_face_power(fx, row, 1))),
                              vanest.mat_vec(vanest.from_exact(fx.phi), [g[0][1], 0]))
    assert max(abs(a - b) for a, b in zip(d([row], []), expected)) < 1e-12


def test_non_cocycle_is_rejected():
    fx = fixture("unit-R2")
    w0 = GroupCochain(GridIndex(0, 2, 0), lambda rows, fs: [rows[0].h[0][1] ** 2 * rows[1].h[0][2]])
    with pytest.raises(NotAGroupCocycle):
        linearize_cocycle(fx, [None, w0, None, None])


def test_rationalization_failure():
    with pytest.raises(RationalizationFailed):
        rationalize(3.14159265358979, tol=1e-12)
    assert rationalize(0.2500000000001) == Fraction(1, 4)


def test_jet_budget():
    fx = fixture("abelian-1")
    with pytest.raises(JetBudgetExceeded):
        van_est(fx, zero_cochain(fx, GridIndex(0, 3, 3)))


def test_unsupported_difference_map():
    fx = fixture("abelian-1")
    with pytest.raises(UnsupportedShape):
        gp_delta_ab(fx, zero_cochain(fx, GridIndex(0, 0, 3)), 2, 2)


def test_group_cochain_arity():
    fx = fixture("abelian-1")
    c = zero_cochain(fx, GridIndex(1, 1, 0))
    with pytest.raises(ArityMismatch):
        c([], [])


def test_top_difference_map_is_nonzero_but_differentiates_to_zero():
    fx = fixture("heis")
    rng = random.Random(1)
    for r in (2, 3):
        c = random_polynomial_cochain(fx, GridIndex(0, 0, r), rng).as_cochain(fx)
        d = gp_delta_ab(fx, c, r, 1)
        values = [abs(v) for _ in range(4) for v in d([sample_row(fx, r, rng)], [])]
        assert max(values) > 1e-3
        assert max(abs(v) for v in van_est(fx, d).coords) < 1e-12
