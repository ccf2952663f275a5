"""Run one or more canned benchmark tables at a chosen scale and write
each result grid to a CSV.

Usage: python3 scripts/run_benchmarks.py [--tables t1,t4] [--scale 0.1] [--out bench_out]
"""

import argparse
import time
from pathlib import Path

from ccsica.bench import TABLE_IDS, run_bench
from ccsica.fileio import write_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tables", type=str, default="t1,t4,t5",
                        help=f"comma list from {TABLE_IDS}")
    parser.add_argument("--scale", type=float, default=0.1,
                        help="trial-count shrink factor in (0,1]")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", type=str, default="bench_out")
    args = parser.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for table in (t.strip() for t in args.tables.split(",") if t.strip()):
        start = time.perf_counter()
        header, rows = run_bench(table, scale=args.scale, seed=args.seed, jobs=args.jobs)
        runtime = time.perf_counter() - start
        path = out / f"bench_{table.lower()}.csv"
        write_csv(path, header, rows)
        print(f"{table}: {len(rows)} rows in {runtime:.1f}s -> {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
