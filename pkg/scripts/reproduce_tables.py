"""Print the 8-bit rating table, the component table and the theorem verdict."""
import argparse
import sys

from subjrand.analysis import reproduce_table1, table1_discrepancies
from subjrand.cli import TABLE2_COLUMNS, emit
from subjrand.reference import TABLE1_DEVIATION_NOTE, TABLE2
from subjrand.seqgraph import reproduce_table2, verify_theorem1


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--format", choices=("human", "csv", "json"), default="human")
    args = parser.parse_args()
    out = sys.stdout

    groups = reproduce_table1()
    emit([{"group": k, "finite": str(g.finite), "context": str(g.context), "size": len(g.members),
           "members": " ".join(map(str, g.members))} for k, g in enumerate(groups, 1)],
         ["group", "finite", "context", "size", "members"], args.format, out)
    problems = table1_discrepancies(groups)
    print(f"\nrating table: {'matches' if not problems else problems}", file=sys.stderr)
    print(f"note: {TABLE1_DEVIATION_NOTE}\n", file=sys.stderr)

    rows = [r for res in reproduce_table2() for r in res.as_rows()]
    for row, ref in zip([r for r in rows if r["component"] == 1], TABLE2):
        row["published"] = f"{ref.vertices[0]}/{ref.arcs[0]}/{ref.cycle_basis[0]}"
    emit(rows, TABLE2_COLUMNS + ["published"], args.format, out)

    verdict = verify_theorem1()
    print(f"\ntheorem clauses: {verdict.clauses}", file=sys.stderr)
    return 0 if verdict.passed and not problems else 1


if __name__ == "__main__":
    sys.exit(main())
