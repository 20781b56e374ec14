"""Time dp+ against the 72-state Viterbi over all 8-bit windows."""
import argparse
import sys

from subjrand.cli import main as cli_main

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repetitions", type=int, default=20)
    parser.add_argument("--format", choices=("human", "csv", "json"), default="human")
    args = parser.parse_args()
    sys.exit(cli_main(["bench", "--repetitions", str(args.repetitions), "--format", args.format]))
