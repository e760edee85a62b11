"""Shipped algebraic fixtures: crossed module, coefficients and representation."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .exactla import Matrix, inverse
from .liecore import (CrossedModuleLA, LieAlgebra, TwoVectorSpace, aff1, identity_crossed_module,
                      unit_crossed_module)
from .rep2 import Rep2, adjoint_coefficients, adjoint_rep, glphi_module, tautological_rep


@dataclass(frozen=True)
class System:
    name: str
    cm: CrossedModuleLA
    ts: TwoVectorSpace
    rep: Rep2


def abelian_system() -> System:
    """g = h = Q, mu = id, L = 0, with coefficients Q --id--> Q and trivial action."""
    q = LieAlgebra.abelian(1)
    cm = CrossedModuleLA.build(q, q, Matrix.identity(1))
    ts = TwoVectorSpace(1, 1, Matrix.identity(1))
    return System("abelian", cm, ts, Rep2.zero(cm, ts))


def aff1_unit_system() -> System:
    """The unit 2-algebra 0 -> aff(1) with trivial coefficients 0 -> Q."""
    cm = unit_crossed_module(aff1())
    ts = TwoVectorSpace(0, 1, Matrix.zeros(1, 0))
    return System("aff1-unit", cm, ts, Rep2.zero(cm, ts))


def aff1_adjoint_system() -> System:
    cm = identity_crossed_module(aff1())
    return System("aff1-adjoint", cm, adjoint_coefficients(cm), adjoint_rep(cm))


def glphi_adjoint_system(dimW: int = 1, dimV: int = 1, phi: Matrix | None = None) -> System:
    phi = Matrix.identity(1) if phi is None else phi
    cm = glphi_module(TwoVectorSpace(dimW, dimV, phi)).cm
    return System(f"glphi-{dimW}-{dimV}-adjoint", cm, adjoint_coefficients(cm), adjoint_rep(cm))


def glphi_tautological_system(dimW: int, dimV: int, phi: Matrix) -> System:
    mod = glphi_module(TwoVectorSpace(dimW, dimV, phi))
    return System(f"glphi-{dimW}-{dimV}-tautological", mod.cm, mod.ts, tautological_rep(mod))


def _random_invertible(n: int, rng: random.Random) -> Matrix:
    while True:
        m = Matrix.from_rows([[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)]
                              for _ in range(n)], n) if n else Matrix.zeros(0, 0)
        if n == 0 or inverse(m) is not None:
            return m


def change_basis(system: System, Pg: Matrix, Ph: Matrix, name: str | None = None) -> System:
    """Rewrite a system in new bases of g and h: new e_i = sum_k P[k, i] e_k."""
    cm, rep = system.cm, system.rep
    Pg_inv, Ph_inv = inverse(Pg), inverse(Ph)
    n, m = cm.g.dim, cm.h.dim
    gcol = [Pg.column(i) for i in range(n)]
    hcol = [Ph.column(i) for i in range(m)]
    g_tr = [(i, j, k, v) for i in range(n) for j in range(n)
            for k, v in enumerate(Pg_inv.apply(cm.g.br(gcol[i], gcol[j]))) if v]
    h_tr = [(i, j, k, v) for i in range(m) for j in range(m)
            for k, v in enumerate(Ph_inv.apply(cm.h.br(hcol[i], hcol[j]))) if v]
    act_tr = [(a, i, k, v) for a in range(m) for i in range(n)
              for k, v in enumerate(Pg_inv.apply(cm.L(hcol[a], gcol[i]))) if v]
    mu = Ph_inv @ cm.mu @ Pg
    new_cm = CrossedModuleLA.build(LieAlgebra.from_triples(n, g_tr), LieAlgebra.from_triples(m, h_tr), mu, act_tr)
    new_rep = Rep2(tuple(rep.r01(c) for c in hcol), tuple(rep.r00(c) for c in hcol),
                   tuple(rep.r1(c) for c in gcol), rep.dimW, rep.dimV)
    return System(name or system.name + "-rebased", new_cm, system.ts, new_rep)


def random_system(seed: int = 7) -> System:
    """gl(phi) for phi: Q -> Q^2 in randomly chosen rational bases, tautological action."""
    rng = random.Random(seed)
    phi = Matrix.from_rows([[Fraction(rng.randint(1, 4), rng.randint(1, 3))], [Fraction(rng.randint(-4, -1))]], 1)
    base = glphi_tautological_system(1, 2, phi)
    Pg = _random_invertible(base.cm.g.dim, rng)
    Ph = _random_invertible(base.cm.h.dim, rng)
    return change_basis(base, Pg, Ph, name=f"random-seed{seed}")


def acceptance_systems() -> list:
    return [abelian_system(), aff1_unit_system(), glphi_adjoint_system(), random_system()]


def shipped_systems() -> dict:
    """Every shipped system by name."""
    systems = [abelian_system(), aff1_unit_system(), aff1_adjoint_system(), glphi_adjoint_system(),
               glphi_tautological_system(1, 2, Matrix.from_rows([[2], [-1]], 1)), random_system()]
    return {s.name: s for s in systems}
