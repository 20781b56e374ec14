"""Alternation rate, balance and window ratings of long generated streams."""
import argparse
import sys

from subjrand.analysis import window_audit
from subjrand.cli import emit
from subjrand.generator import GenConfig, generate, stream_stats
from subjrand.rating import SRValue


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--thresholds", nargs="+", default=["4,4.5", "4,4", "3,6", "3,5", "2,6"])
    parser.add_argument("--length", type=int, default=1_000_000)
    parser.add_argument("--rng-seed", type=int, default=0)
    parser.add_argument("--format", choices=("human", "csv", "json"), default="human")
    args = parser.parse_args()

    rows = []
    for text in args.thresholds:
        t = SRValue.parse(text)
        for method in ("walk", "bounds"):
            x = generate(GenConfig(method, t, None, args.length, args.rng_seed))
            s = stream_stats(x)
            audit = window_audit(x, t)
            rows.append({"threshold": str(t), "method": method, "alternation": round(s.alternation, 4),
                         "x_minus_half": s.x_count - args.length / 2, "window_min": str(s.window_min),
                         "window_mean_i": round(s.window_mean[0], 3),
                         "window_mean_j": round(s.window_mean[1], 3), "failures": audit.failures})
    emit(rows, list(rows[0]), args.format, sys.stdout)


if __name__ == "__main__":
    main()
