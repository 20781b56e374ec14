"""Percentile of generated sequences among all sequences of a length, for several lengths."""
import argparse
import os
import sys

from subjrand.analysis import percentile_check
from subjrand.cli import emit


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lengths", type=int, nargs="+", default=[8, 10, 12, 14, 16, 18, 20])
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--rng-seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--format", choices=("human", "csv", "json"), default="human")
    args = parser.parse_args()

    rows = []
    for n in args.lengths:
        report = percentile_check(n, args.samples, args.rng_seed, args.jobs)
        rows.append(report.as_dict())
    columns = ["length", "worst_percentile_context", "worst_percentile_finite",
               "worst_percentile_window_min", "producible_share", "share_meeting_threshold",
               "worst_sample", "worst_sample_value", "seconds"]
    emit(rows, columns, args.format, sys.stdout)


if __name__ == "__main__":
    main()
