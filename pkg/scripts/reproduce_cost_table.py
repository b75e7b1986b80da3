"""Print the addition-count table: closed forms next to measured counters.

    python3 scripts/reproduce_cost_table.py [--ns 5 8 10 12 15] [--csv out.csv]
"""

import argparse

from fastmobius.cost import COST_COLUMNS, BenchConfig, comparison_rows, cost_table, run_benchmark, to_text, write_csv


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--ns", type=int, nargs="+", default=[5, 8, 10, 12, 15, 20])
    p.add_argument("--measure-up-to", type=int, default=15, help="largest n run through the kernels")
    p.add_argument("--csv")
    args = p.parse_args()

    print("closed form")
    print(to_text(cost_table(args.ns), COST_COLUMNS))

    measured = []
    for n in args.ns:
        if n > args.measure_up_to:
            continue
        measured += run_benchmark(BenchConfig(n_min=n, n_max=n, trials=1))
    rows = comparison_rows(measured)
    columns = COST_COLUMNS + ["naive_seconds", "fast_seconds"]
    print("measured")
    print(to_text(rows, columns))
    if args.csv:
        write_csv(rows, args.csv, columns)


if __name__ == "__main__":
    main()
