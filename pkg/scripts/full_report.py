"""Run every CLI command over the shipped documents and fixtures and print one combined report."""

import argparse
import io
import sys
from pathlib import Path

from lie2coh.cli import run

ROOT = Path(__file__).resolve().parent.parent
DOCS = ROOT / "fixtures"
VANEST_FIXTURES = ("abelian-1", "abelian-2", "glphi-1-1")


def jobs(max_degree: int):
    for path in sorted(DOCS.glob("*.json")):
        if path.stem.startswith("cone"):
            yield ["cone", str(path)]
        elif path.stem.startswith("double"):
            yield ["spectral", str(path)]
        elif path.stem.endswith("-extend"):
            yield ["extend", str(path)]
        else:
            for cmd in ("check", "nabla-squared", "cohomology"):
                yield [cmd, str(path), "--max-degree", str(max_degree)]
    for name in VANEST_FIXTURES:
        yield ["vanest", "--fixture", name]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-degree", type=int, default=3)
    ap.add_argument("--out", type=Path, help="also write the report here")
    args = ap.parse_args()
    report = io.StringIO()
    worst = 0
    for argv in jobs(args.max_degree):
        shown = [Path(a).relative_to(ROOT).as_posix() if a.startswith(str(ROOT)) else a for a in argv]
        report.write("$ lie2coh " + " ".join(shown) + "\n")
        buf = io.StringIO()
        code = run(argv, out=buf)
        report.write(buf.getvalue().replace(str(ROOT) + "/", ""))
        report.write(f"exit {code}\n\n")
        worst = max(worst, code)
    text = report.getvalue()
    sys.stdout.write(text)
    if args.out:
        args.out.write_text(text)
    return worst


if __name__ == "__main__":
    sys.exit(main())
