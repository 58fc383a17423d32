import hashlib
import json
import re
from pathlib import Path

import pytest

from sdbuchi.cli import main
from sdbuchi.fileformat import parse_text
from sdbuchi.generate import count_nodes

FIX = Path(__file__).resolve().parent.parent / "fixtures"
GOLDEN_GEN_SEED_1 = "6f987ad8fddf05f8cb7ca9b9712f7166c2809160c246e9ef55e1dcf3ad0756c7"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def verdicts(out):
    return dict(re.findall(r"^  (\S+:\d+)  (win|lose)$", out, re.M))


def test_check_example_with_refine(capsys):
    code, out, _ = run(capsys, "check", FIX / "example.sdg", "--entrance", "all", "--no-timings")
    assert code == 0
    v = verdicts(out)
    assert v.pop("r.0.0.1:1") == "lose"
    assert set(v.values()) == {"win"} and len(v) == 5


def test_all_methods_agree_on_example(capsys):
    seen = []
    for m in ("monolithic", "bottomup", "shortcut", "refine", "all"):
        code, out, _ = run(capsys, "check", FIX / "example.sdg", "--method", m, "--no-timings")
        assert code == 0
        seen.append(verdicts(out))
    assert all(s == seen[0] for s in seen) and seen[0] == {"r.0.0.0:1": "win"}


def test_empty_diagram(capsys):
    code, out, _ = run(capsys, "check", FIX / "empty.sdg", "--method", "all")
    assert code == 0 and verdicts(out) == {}


def test_json_report_is_deterministic(capsys):
    args = ("check", FIX / "example.sdg", "--format", "json", "--entrance", "all", "--method", "all",
            "--events")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    da, db = json.loads(a), json.loads(b)
    da.pop("timings"), db.pop("timings")
    assert da == db
    assert da["verdicts"]["r.0.0.1:1"] is False
    assert da["stats"]["refine"]["iterations"] == 2
    _, c, _ = run(capsys, *args, "--no-timings")
    assert "timings" not in json.loads(c)


def test_bottomup_rejects_component_entrances(capsys):
    code, _, err = run(capsys, "check", FIX / "example.sdg", "--method", "bottomup", "--entrance", "r.0.0.1:1")
    assert code == 2 and err.startswith("error[")


@pytest.mark.parametrize("name, code, needle", [
    ("bad_alternation.sdg", 2, "error[E_ALTERNATION]"),
    ("bad_arity.sdg", 2, "error[E_ARITY]"),
    ("missing.sdg", 2, "error[E_SYNTAX]"),
])
def test_validation_exit_codes(capsys, name, code, needle):
    got, _, err = run(capsys, "check", FIX / name)
    assert got == code and needle in err


def test_size_guard_exit_code(capsys):
    code, _, err = run(capsys, "check", FIX / "exitblow4.sdg", "--method", "bottomup", "--guard-effects", "8")
    assert code == 3 and "E_SIZE_GUARD" in err and "subtree" in err


def test_invariant_violation_exit_code(capsys, monkeypatch):
    import sdbuchi.decide as dec
    monkeypatch.setitem(dec.RUNNERS, "shortcut", lambda d, e, o: ({ce: False for ce in e}, {}))
    code, _, err = run(capsys, "check", FIX / "example.sdg", "--method", "all")
    assert code == 4 and "E_INVARIANT" in err


def test_gen_golden(capsys):
    _, out, _ = run(capsys, "gen", "--seed", 1)
    assert hashlib.sha256(out.encode()).hexdigest() == GOLDEN_GEN_SEED_1
    _, again, _ = run(capsys, "gen", "--seed", 1)
    assert again == out
    parse_text(out)


def test_gen_profiles(capsys):
    for seed in range(1, 40):
        _, out, _ = run(capsys, "gen", "--seed", seed, "--trace-bias", 0)
        assert count_nodes(parse_text(out).term)["Trace"] == 0
        _, out, _ = run(capsys, "gen", "--seed", seed, "--share", 1, "--leaves", 4)
        names = list(parse_text(out).occurrences().values())
        assert len(names) > len(set(names))


def test_gen_rejects_bad_profile(capsys):
    code, _, err = run(capsys, "gen", "--leaves", 0)
    assert code == 2
    code, _, _ = run(capsys, "gen", "--trace-bias", 1.5)
    assert code == 2


def test_gen_exitblow_and_output_file(capsys, tmp_path):
    target = tmp_path / "x.json"
    code, out, _ = run(capsys, "gen", "--profile", "exitblow", "--k", 3, "--format", "json", "-o", target)
    assert code == 0 and out == ""
    code, out, _ = run(capsys, "check", target, "--method", "all", "--no-timings")
    assert code == 0


def test_bench_table(capsys):
    code, out, _ = run(capsys, "bench", "--family", "exitblow:2..4", "--no-timings")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 4 and all(l.endswith("yes") for l in lines[1:])
    code, out, _ = run(capsys, "bench", FIX / "relay.sdg", "--format", "json")
    row, = json.loads(out)
    assert row["agree"] and set(row["timings"]) == {"bottomup", "refine"}


def test_bench_reports_both_cache_hits(capsys):
    _, out, _ = run(capsys, "bench", FIX / "twins.sdg", "--format", "json", "--no-timings")
    row, = json.loads(out)
    assert row["bottomup"]["hits"] > 0 and row["refine"]["cache_hits"] > 0


def test_bench_records_guard_failures(capsys):
    code, out, _ = run(capsys, "bench", FIX / "exitblow4.sdg", "--guard-effects", 8, "--format", "json",
                       "--no-timings")
    row, = json.loads(out)
    assert code == 0 and "error" in json.dumps(row["bottomup"]).lower()


def test_export(capsys):
    _, out, _ = run(capsys, "export", FIX / "relay.sdg")
    assert len(re.findall(r"^  v\d+ \[", out, re.M)) == 3
    assert len(re.findall(r"->", out)) == 2
    assert 'xlabel="ex1"' in out
    _, again, _ = run(capsys, "export", FIX / "relay.sdg")
    assert again == out


def test_export_shortcut_counts_effects(capsys):
    _, out, _ = run(capsys, "export", FIX / "example.sdg", "--target", "shortcut")
    assert len(re.findall(r"shape=box", out)) == 9
    _, out, _ = run(capsys, "export", FIX / "example.sdg", "--target", "shortcut", "--strict-shortcut")
    assert len(re.findall(r"shape=box", out)) == 14


def test_import(capsys, tmp_path):
    code, out, _ = run(capsys, "import", FIX / "coin.mdp", "--name", "Coin")
    assert code == 0
    d = parse_text(out)
    assert d.leaves["Coin"].arity == (1, 0)
    f = tmp_path / "coin.sdg"
    f.write_text(out)
    _, rep, _ = run(capsys, "check", f, "--method", "all", "--no-timings")
    assert verdicts(rep) == {"r:1": "win"}
    doc = {"states": ["s", "t"], "transitions": [["s", "a", "t", 0.5], ["s", "a", "s", 0.25]],
           "entrances": ["s"]}
    bad = tmp_path / "m.json"
    bad.write_text(json.dumps(doc))
    code, _, err = run(capsys, "import", bad)
    assert code == 2 and "sum" in err
