"""Compiled vs pure-Python search kernel on identical specs.

    python3 benchmarks/bench_search.py [--repeat N] [--quick] [--json]

Both kernels must report the same outcome and node count; the script exits
non-zero otherwise.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time

from homalg import Field
from homalg.search import SearchSpec, codim2_spec, search
from homalg.search import kernel


def cases(quick: bool):
    F2, F3 = Field.gf(2), Field.gf(3)
    out = [
        ("gf2-d2-homassoc-count", SearchSpec(F2, 2, ("hom-associative",), goal="count-models")),
        ("gf3-d2-unital-count", SearchSpec(F3, 2, ("hom-associative", "unital(e1)"), goal="count-models")),
        ("gf2-d3-unital-count", SearchSpec(F2, 3, ("hom-associative", "unital(e1)"), goal="count-models")),
        ("gf2-d4-codim2-explore", codim2_spec(F2, 4, budget=20_000)),
    ]
    if not quick:
        out.insert(2, ("gf3-d2-homassoc-count", SearchSpec(F3, 2, ("hom-associative",), goal="count-models")))
    return out


def timed(spec, backend, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = search(spec, backend=backend)
        times.append(time.perf_counter() - t0)
    return res, statistics.median(times)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="skip the slowest case")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    if kernel.compiled_run is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 2

    rows, ok = [], True
    for name, spec in cases(args.quick):
        rc, tc = timed(spec, "compiled", args.repeat)
        rp, tp = timed(spec, "python", args.repeat)
        same = (rc.label, rc.nodes_explored) == (rp.label, rp.nodes_explored)
        ok &= same
        rows.append({
            "case": name,
            "outcome": rc.label,
            "nodes": rc.nodes_explored,
            "compiled_s": tc,
            "python_s": tp,
            "speedup": tp / tc if tc > 0 else float("inf"),
            "agree": same,
        })

    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'case':<24} {'outcome':<16} {'nodes':>8} {'compiled':>10} {'python':>10} {'speedup':>8}")
        for r in rows:
            print(f"{r['case']:<24} {r['outcome']:<16} {r['nodes']:>8} {r['compiled_s']:>9.4f}s "
                  f"{r['python_s']:>9.4f}s {r['speedup']:>7.1f}x{'' if r['agree'] else '  MISMATCH'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
