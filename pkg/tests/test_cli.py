import csv
import io
import json

import pytest

from goodpos.cli import EXIT_CONFIG, EXIT_EXISTENCE, EXIT_OK, EXIT_RESOURCE, EXIT_VIOLATION, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classes(capsys):
    for tr, rows in [(("A", "2", "id"), 3), (("A", "2", "flip"), 3), (("A", "1", "id"), 2), (("D", "4", "rot"), None)]:
        code, out, _ = run(capsys, "classes", "--type", tr[0], "--rank", tr[1], "--twist", tr[2])
        data = json.loads(out)
        assert code == EXIT_OK
        if rows is not None:
            assert len(data) == rows
        assert [r["class_id"] for r in data] == list(range(len(data)))
    code, out, _ = run(capsys, "classes", "--type", "A", "--rank", "2", "--twist", "flip")
    words = {r["representative_word"] for r in json.loads(out)}
    assert words == {"e", "s1", "s1s2s1"}


def test_goodrep(capsys):
    code, out, _ = run(capsys, "goodrep", "--type", "A", "--rank", "3", "--dmax", "24")
    rows = json.loads(out)
    assert code == EXIT_OK and len(rows) == 5 and all(r["status"] == "ok" for r in rows)
    code, out, _ = run(capsys, "goodrep", "--type", "A", "--rank", "2", "--twist", "flip", "--dmax", "12")
    rows = json.loads(out)
    ident = [r for r in rows if r["class_id"] == 0][0]
    assert ident["d"] == 2 and ident["rep_word"] == "s1s2"
    code, out, _ = run(capsys, "goodrep", "--type", "A", "--rank", "1", "--dmax", "4")
    rows = json.loads(out)
    assert [(r["rep_word"], r["d"]) for r in rows if r["rep_word"] == "s1"] == [("s1", 1)]


def test_goodrep_existence_failure_exit(capsys):
    code, out, _ = run(capsys, "goodrep", "--type", "A", "--rank", "2", "--dmax", "1")
    assert code == EXIT_EXISTENCE
    assert "EXISTENCE-FAILURE" in out
    code, _, _ = run(capsys, "goodrep", "--type", "A", "--rank", "4", "--lift", "simple")
    assert code == EXIT_EXISTENCE


def test_dimtable(capsys):
    code, out, _ = run(capsys, "dimtable", "--n", "3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and len(rows) == 3
    assert all(r["identity_holds"] == "True" for r in rows)


def test_flagcheck_isotropy(capsys):
    code, out, _ = run(capsys, "flagcheck", "--n", "2", "--q", "2", "--suite", "isotropy", "--no-timing")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["violations_total"] == 0
    assert all("certificate" in r and "runtime_ms" not in r for r in doc["reports"])


def test_flagcheck_orbits(capsys):
    code, out, _ = run(capsys, "flagcheck", "--n", "3", "--q", "2", "--suite", "orbits", "--no-timing")
    doc = json.loads(out)
    assert code == EXIT_OK
    for r in doc["reports"]:
        assert r["orbit_count"] == 2 ** r["certificate"]["length"]


def test_flagcheck_xtilde(capsys):
    code, out, _ = run(capsys, "flagcheck", "--n", "2", "--q", "2", "--k", "2", "--suite", "xtilde", "--no-timing")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["k"] == 2 and len(doc["reports"]) == 2


def test_slicecheck_exit_codes(capsys):
    code, out, _ = run(capsys, "slicecheck", "--n", "3", "--q", "2", "--no-timing")
    assert code == EXIT_OK and len(json.loads(out)["reports"]) == 3
    code, out, _ = run(capsys, "slicecheck", "--n", "2", "--q", "3", "--no-timing")
    assert code == EXIT_VIOLATION and json.loads(out)["violations_total"] == 1


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["flagcheck", "--n", "5", "--q", "2"], EXIT_RESOURCE),
        (["flagcheck", "--n", "2"], EXIT_CONFIG),
        (["classes", "--type", "E", "--rank", "8"], EXIT_CONFIG),
        (["classes", "--type", "B", "--rank", "3", "--twist", "flip"], EXIT_CONFIG),
        (["flagcheck", "--n", "2", "--q", "6"], EXIT_CONFIG),
        (["nonsense"], EXIT_CONFIG),
    ],
)
def test_error_exit_codes(capsys, argv, expected):
    try:
        code = main(argv)
    except SystemExit as e:
        code = e.code
    capsys.readouterr()
    assert code == expected


def test_byte_stable_and_out_file(capsys, tmp_path):
    argv = ["flagcheck", "--n", "2", "--q", "3", "--suite", "all", "--no-timing"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, *argv, "--out", str(path))
    assert out == "" and path.read_text() == first
    a = run(capsys, "goodrep", "--type", "D", "--rank", "4", "--twist", "rot")[1]
    b = run(capsys, "goodrep", "--type", "D", "--rank", "4", "--twist", "rot")[1]
    assert a == b
