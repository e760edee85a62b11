"""Write the shipped systems and sample complexes as JSON documents under fixtures/."""

import argparse
import random
from pathlib import Path

from lie2coh.cli import RunOptions, dumps, project_to_json, write_matrix
from lie2coh.extensions import combine, normalized_cocycle_basis
from lie2coh.fixtures import shipped_systems
from lie2coh.grid import Grid, GridOptions
from lie2coh.homalg import random_chain_map_instance, random_double_complex


def complex_doc(c) -> dict:
    return {"start": c.start, "dims": list(c.dims), "d": [write_matrix(m) for m in c.d]}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "fixtures"))
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    systems = shipped_systems()
    for name, s in systems.items():
        rep = "adjoint" if name.endswith("adjoint") else s.rep
        (out / f"{name}.json").write_text(dumps(project_to_json(name, s.cm, s.ts, rep, RunOptions())))

    # an extend example: a fixed nonzero combination of normalized cocycles
    s = systems["aff1-adjoint"]
    grid = Grid(s.cm, s.ts, s.rep, GridOptions(max_degree=3))
    basis = normalized_cocycle_basis(grid)
    z = combine(basis, [(-1) ** k * (k + 1) for k in range(len(basis))])
    doc = project_to_json("aff1-adjoint-extend", s.cm, s.ts, "adjoint", RunOptions())
    doc["cocycle"] = {key: [str(v) for v in c.coords] for key, c in zip(("f", "w0", "a", "w1"),
                                                                       (z.f, z.w0, z.a, z.w1))}
    (out / "aff1-adjoint-extend.json").write_text(dumps(doc))

    rng = random.Random(args.seed)
    f = random_chain_map_instance(rng)
    cone = {"source": complex_doc(f.source), "target": complex_doc(f.target),
            "map": {str(n): write_matrix(m) for n, m in sorted(f.components.items())}, "k": 2}
    (out / "cone-sample.json").write_text(dumps(cone))

    dc = random_double_complex(3, 3, 1, rng)
    double = {"dims": [list(c) for c in dc.dims], "commuting": dc.commuting, "k": 1,
              "horizontal": {f"{p},{q}": write_matrix(m) for (p, q), m in sorted(dc.horizontal.items())},
              "vertical": {f"{p},{q}": write_matrix(m) for (p, q), m in sorted(dc.vertical.items())}}
    (out / "double-sample.json").write_text(dumps(double))
    print("\n".join(sorted(p.name for p in out.glob("*.json"))))


if __name__ == "__main__":
    main()
