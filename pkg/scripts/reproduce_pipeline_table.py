"""Operation counts of the combine-then-plausibility pipeline, slow vs fast.

    python3 scripts/reproduce_pipeline_table.py [--ns 5 8 10] [--csv out.csv]
"""

import argparse

from fastmobius.cost import (
    PIPELINE_COLUMNS,
    BenchConfig,
    analytic_costs,
    pipeline_comparison_rows,
    pipeline_table,
    run_benchmark,
    to_text,
    write_csv,
)


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--ns", type=int, nargs="+", default=[5, 8, 10])
    p.add_argument("--csv")
    args = p.parse_args()

    steps = []
    for n in args.ns:
        r = analytic_costs(n)
        steps.append({"n": n, "A": r.naive_combination, "B": r.naive_plausibility, "X": r.fast_commonality,
                      "Y": r.fast_product, "Z": r.fast_plausibility})
    print("closed-form (additions, multiplications) per step")
    print(to_text([{k: str(v) for k, v in row.items()} for row in steps]))
    print(to_text(pipeline_table(args.ns), PIPELINE_COLUMNS))

    reports = []
    for n in args.ns:
        reports += run_benchmark(BenchConfig(n_min=n, n_max=n, trials=1, workload="pipeline"))
    rows = pipeline_comparison_rows(reports)
    print("measured")
    print(to_text(rows))
    if args.csv:
        write_csv(rows, args.csv)


if __name__ == "__main__":
    main()
