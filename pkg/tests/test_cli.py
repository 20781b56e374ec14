import csv
import io
import json

import pytest

from subjrand.cli import main, to_csv, to_json

SUBCOMMANDS = {
    "rate": ["rate", "OXOOXXOX"],
    "table1": ["table1"],
    "table2": ["table2"],
    "components": ["components", "--threshold", "4,6"],
    "generate": ["generate", "--length", "30", "--rng-seed", "4", "--stats"],
    "stats": ["stats", "OXOOXXOXOXXOOXOX"],
    "percentile": ["percentile", "--length", "9", "--samples", "5", "--rng-seed", "1"],
    "verify": ["verify"],
    "bench": ["bench", "--repetitions", "1"],
}


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_rate_examples():
    code, out, _ = run("rate", "OXOOXXOX", "--format", "json")
    got = json.loads(out)
    assert code == 0
    assert (got["finite"], got["context"], got["code"]) == ("[5,6]", "[5,6]", 77)
    assert json.loads(run("rate", "XOXOXOX", "--format", "json")[1])["finite"] == "[2,6]"
    assert json.loads(run("rate", "XXXOXOXOOO", "--format", "json")[1])["dp"] == 4


@pytest.mark.parametrize("argv", [["rate", "OXQ"], ["rate"], ["table1", "--bogus"], ["nope"],
                                  ["rate", "OX", "--format", "xml"],
                                  ["components", "--threshold", "4,4.25"], ["components"]])
def test_usage_errors_exit_1(argv):
    code, _, err = run(*argv)
    assert code == 1 and err.startswith("error:")


def test_generate_exit_codes():
    assert run("generate", "--seed", "OOOXOOO", "--rng-seed", "1")[0] == 2
    assert run("generate", "--seed", "OXO", "--rng-seed", "1")[0] == 2
    assert run("generate", "--method", "bounds", "--threshold", "5,3", "--rng-seed", "1")[0] == 3
    assert run("generate", "--threshold", "5,4", "--rng-seed", "1")[0] == 3


def test_generate_symbol_formats():
    _, ox, _ = run("generate", "--length", "20", "--rng-seed", "8")
    _, zo, _ = run("generate", "--length", "20", "--rng-seed", "8", "--format", "01")
    assert ox.strip().translate(str.maketrans("OX", "01")) == zo.strip()


def test_generate_walk_at_split_threshold():
    _, out, _ = run("generate", "--threshold", "5,3", "--seed", "00101100", "--length", "20",
                    "--rng-seed", "0")
    assert out.strip() == "OOXOXXOOXOXXOOXOXXOO"


def test_missing_rng_seed_is_reported():
    code, out, err = run("generate", "--length", "12")
    seed = int(err.split("rng-seed:")[1])
    assert code == 0
    assert run("generate", "--length", "12", "--rng-seed", str(seed))[1] == out


@pytest.mark.parametrize("name", sorted(SUBCOMMANDS))
@pytest.mark.parametrize("fmt", ["human", "csv", "json"])
def test_every_subcommand_takes_every_format(name, fmt):
    code, out, _ = run(*SUBCOMMANDS[name], "--format", fmt)
    assert code == 0 and out


@pytest.mark.parametrize("name", sorted(set(SUBCOMMANDS) - {"bench", "percentile"}))
def test_outputs_round_trip(name):
    _, out, _ = run(*SUBCOMMANDS[name], "--format", "json")
    assert to_json(json.loads(out)) == out
    _, out, _ = run(*SUBCOMMANDS[name], "--format", "csv")
    if name == "generate":
        out = out.split("\n", 1)[1]
    rows = list(csv.reader(io.StringIO(out)))
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    assert buf.getvalue() == out


@pytest.mark.parametrize("name", sorted(set(SUBCOMMANDS) - {"bench", "percentile"}))
def test_deterministic(name):
    assert run(*SUBCOMMANDS[name]) == run(*SUBCOMMANDS[name])


def test_csv_helper_round_trips_awkward_text():
    rows = [{"a": 'say "hi", twice', "b": "line\nbreak"}]
    text = to_csv(rows, ["a", "b"])
    back = list(csv.DictReader(io.StringIO(text)))
    assert back == rows
    assert to_csv(back, ["a", "b"]) == text


def test_table1_csv_columns():
    _, out, _ = run("table1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["group", "finite", "context", "members"]
    assert rows[0]["finite"] == "a^5 d^6" and rows[0]["members"] == "77"
    assert rows[6]["context"] == "a^4 d^4.5"


def test_components_lists_vertices():
    _, out, _ = run("components", "--threshold", "5,3", "--format", "json")
    got = json.loads(out)
    assert got["vertices"] == sorted(got["vertices"])
    assert [c["vertices"] for c in got["nontrivial"]] == [6, 6]


def test_verify_passes_and_carries_row7_note():
    code, out, _ = run("verify")
    assert code == 0
    assert "row 7" in out and "[4,4.5]" in out
    assert "FAIL" not in out


def test_verify_catches_corrupted_motifs():
    code, out, _ = run("verify", "--motifs", "O,X,OX,XO,OOX,OXX,XOO,XXO", "--format", "csv")
    assert code == 4
    assert "FAIL" in out and "row 7" in out
