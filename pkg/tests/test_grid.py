import pytest

from lie2coh.fixtures import shipped_systems
from lie2coh.grid import ArityMismatch, Cochain, DegreeTooLarge, Grid, GridIndex, GridOptions, IndexOutOfRange
from lie2coh.liecore import nerve_basis


@pytest.fixture(scope="module")
def grid():
    s = shipped_systems()["aff1-adjoint"]
    return Grid(s.cm, s.ts, s.rep, GridOptions(max_degree=4))


def test_each_direction_squares_to_zero(grid):
    for p in range(2):
        for q in range(2):
            for r in range(2):
                assert (grid.d_p_matrix(p + 1, q, r) @ grid.d_p_matrix(p, q, r)).is_zero()
                assert (grid.d_q_matrix(p, q + 1, r) @ grid.d_q_matrix(p, q, r)).is_zero()
                assert (grid.d_r_matrix(p, q, r + 1) @ grid.d_r_matrix(p, q, r)).is_zero()


def test_p_direction_at_q_zero_alternates(grid):
    for p in range(4):
        m = grid.d_p_matrix(p, 0, 1)
        assert m.is_zero() == (p % 2 == 0)


def test_total_space_dimensions(grid):
    for n in range(3):
        assert grid.total_dim(n) == sum(grid.space(i.p, i.q, i.r).dim for i in grid.indices(n))
    assert grid.nabla_matrix(1).cols == grid.total_dim(1)


def test_difference_map_range(grid):
    with pytest.raises(IndexOutOfRange):
        grid.delta_k_matrix(0, 0, 1, 2)


def test_degree_cap(grid):
    with pytest.raises(DegreeTooLarge):
        grid.nabla_matrix(5)


def test_evaluate_checks_arity(grid):
    idx = GridIndex(0, 1, 0)
    c = Cochain(idx, tuple([0] * grid.space(0, 1, 0).dim))
    with pytest.raises(ArityMismatch):
        grid.evaluate(c, [], [])
    with pytest.raises(ArityMismatch):
        grid.evaluate(c, [nerve_basis(grid.cm, 1, 0)], [])


@pytest.mark.parametrize("name", sorted(shipped_systems()))
def test_nabla_squares_to_zero_through_degree_four_on_small_fixtures(name):
    s = shipped_systems()[name]
    g = Grid(s.cm, s.ts, s.rep, GridOptions(max_degree=6))
    top = 4 if g.total_dim(6) < 2000 else 3
    for n in range(top + 1):
        assert (g.nabla_matrix(n + 1) @ g.nabla_matrix(n)).is_zero(), n
