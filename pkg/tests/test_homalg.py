import random

import pytest
from hypothesis import given, settings, strategies as st

from lie2coh.exactla import Matrix
from lie2coh.homalg import (ComplexMap, FiniteComplex, HypothesisNotMet, NotAChainMap, NotAComplex,
                            below_diagonal_vanishing, complex_with_cohomology, cone_double, cone_equivalence_audit,
                            e1_page, identity_map, mapping_cone, random_chain_map_instance, random_double_complex,
                            total_map)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=4), st.integers(0, 2 ** 20))
def test_prescribed_cohomology_is_realized(betti, seed):
    rng = random.Random(seed)
    pairs = [rng.randint(0, 2) for _ in range(len(betti) - 1)]
    c = complex_with_cohomology(betti, pairs, rng)
    assert [c.betti(n) for n in range(len(betti))] == betti


def test_complex_validation():
    with pytest.raises(NotAComplex):
        FiniteComplex((1, 1, 1), (Matrix.identity(1), Matrix.identity(1)))
    a = FiniteComplex((1, 1), (Matrix.identity(1),))
    with pytest.raises(NotAChainMap):
        ComplexMap(a, a, {0: Matrix.identity(1)})


def test_cone_of_identity_is_acyclic():
    rng = random.Random(3)
    for _ in range(10):
        a = random_chain_map_instance(rng).source
        cone = mapping_cone(identity_map(a))
        assert not any(cone.betti_numbers().values())


def test_cone_long_exact_sequence_euler_characteristic():
    rng = random.Random(8)
    for _ in range(20):
        f = random_chain_map_instance(rng)
        cone = mapping_cone(f)
        chi = lambda c: sum((-1) ** n * b for n, b in c.betti_numbers().items())
        # H(cone) in degree n sits between H^{n+1}(A) and H^n(B)
        assert chi(cone) == chi(f.target) - chi(f.source)


def test_audit_agrees_on_a_handful():
    rng = random.Random(5)
    for _ in range(15):
        f = random_chain_map_instance(rng)
        for k in range(-1, 5):
            assert cone_equivalence_audit(f, k).agree


def test_below_diagonal_needs_its_hypothesis():
    rng = random.Random(6)
    dc = random_double_complex(3, 3, 1, rng)
    assert e1_page(dc).vanishes_below(1)
    assert below_diagonal_vanishing(dc, 1).holds
    with pytest.raises(HypothesisNotMet):
        below_diagonal_vanishing(dc, 6)


def test_cone_double_total_matches_cone_of_totals():
    rng = random.Random(9)
    A = random_double_complex(2, 3, -1, rng, max_dim=2)
    B = A
    phi = {(p, q): Matrix.identity(A.dim(p, q)) for p in range(2) for q in range(3)}
    C = cone_double(A, B, phi)
    lhs = C.total_complex().betti_numbers()
    rhs = mapping_cone(total_map(A, B, phi)).betti_numbers()
    for n in set(lhs) | set(rhs):
        assert lhs.get(n, 0) == rhs.get(n, 0)
