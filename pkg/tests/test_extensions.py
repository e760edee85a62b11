import random

import pytest

from lie2coh.extensions import (ACTION_TERM_SIGN, H_TWIST_SIGN, Cocycle2, NotACocycle,
                                build_candidate, build_extension, calibrate_signs, combine, coboundary_isomorphism,
                                coboundary_tuple, equivalence_audit, extension_report, normalized_cocycle_basis,
                                random_cochain, sample_tuples)
from lie2coh.fixtures import shipped_systems
from lie2coh.grid import Grid, GridIndex, cochain_from_function
from lie2coh.liecore import check_crossed_module


@pytest.fixture(scope="module")
def grids():
    out = {}
    for name in ("aff1-adjoint", "random-seed7"):
        s = shipped_systems()[name]
        out[name] = Grid(s.cm, s.ts, s.rep)
    return out


def test_zero_cocycle_gives_semidirect_product(grids):
    g = grids["aff1-adjoint"]
    ext = build_extension(g, Cocycle2.zero(g))
    assert check_crossed_module(ext.total).passed
    assert ext.total.g.dim == g.cm.g.dim + g.ts.dimW


def test_calibration_singles_out_frozen_signs(grids):
    counts = calibrate_signs(list(grids.values()), 24, 5)
    assert counts[(ACTION_TERM_SIGN, H_TWIST_SIGN)] == 0
    assert all(v > 0 for k, v in counts.items() if k != (ACTION_TERM_SIGN, H_TWIST_SIGN))


def test_non_cocycle_is_rejected(grids):
    g = grids["aff1-adjoint"]
    rng = random.Random(1)
    for z in sample_tuples(g, 12, rng):
        rec = equivalence_audit(g, z)
        if not rec.cocycle:
            with pytest.raises(NotACocycle):
                build_extension(g, z)
            assert not extension_report(build_candidate(g, z)).passed
            return
    pytest.fail("sample contained no non-cocycle")


def test_unit_normalization_is_part_of_the_audit(grids):
    g = grids["aff1-adjoint"]
    V = g.ts.dimV

    def on_unit_arrows(Xi, Z):
        y = Xi[0].y
        return [y[0]] + [0] * (V - 1)

    f = cochain_from_function(g, GridIndex(1, 1, 0), on_unit_arrows)
    z = Cocycle2.zero(g)
    z = Cocycle2(f, z.w0, z.a, z.w1)
    rep = extension_report(build_candidate(g, z))
    assert not rep["f vanishes on unit arrows"].passed


def test_coboundary_isomorphism(grids):
    for g in grids.values():
        rng = random.Random(4)
        basis = normalized_cocycle_basis(g)
        for _ in range(3):
            c = random_cochain(g, GridIndex(0, 1, 0), rng)
            b = random_cochain(g, GridIndex(0, 0, 1), rng)
            z = combine(basis, [rng.randint(-2, 2) for _ in basis])
            z1 = combine([z, coboundary_tuple(g, c, b)], [1, 1])
            coboundary_isomorphism(g, b, c, build_extension(g, z1), build_extension(g, z))
