"""Wall-clock scaling of the fast and naive mass-to-belief transforms."""

import argparse
import logging

from fastmobius.cost import BenchConfig, benchmark_rows, run_benchmark, to_text, write_csv


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n-min", type=int, default=5)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--naive-max-n", type=int, default=13)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--csv")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    config = BenchConfig(n_min=args.n_min, n_max=args.n_max, trials=args.trials, naive_max_n=args.naive_max_n)
    rows = benchmark_rows(run_benchmark(config))
    columns = ["n", "arm", "additions", "analytic_additions", "matches_analytic", "wall_time"]
    print(to_text(rows, columns))
    if args.csv:
        write_csv(rows, args.csv, columns)


if __name__ == "__main__":
    main()
