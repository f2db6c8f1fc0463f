import csv
import io
import json
import math

import numpy as np
import pytest

from sobtrace.cli import main, read_samples


def write_csv(path, rows, header="x,f"):
    path.write_text(header + "\n" + "\n".join(",".join(map(str, r)) for r in rows) + "\n")
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def load_table(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array(rows[1:], dtype=float)


@pytest.fixture
def square(tmp_path):
    return write_csv(tmp_path / "sq.csv", [(0, 0), (1, 1), (2, 4)])


def test_analyze_square(square, capsys):
    code, out, _ = run(["analyze", "--input", square, "--m", "2", "--p", "2"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["schema_version"] == 1 and rep["n_points"] == 3
    assert rep["n_sequence"] == pytest.approx(math.sqrt(2))
    assert rep["n_exact"] == pytest.approx(math.sqrt(2))
    assert rep["extension_seminorm"] is not None


def test_analyze_zero_data(tmp_path, capsys):
    path = write_csv(tmp_path / "z.csv", [(x, 0) for x in (0, 1, 2.5, 4, 9)])
    code, out, _ = run(["analyze", "--input", path, "--m", "2"], capsys)
    rep = json.loads(out)
    assert code == 0
    for k in ("n_exact", "n_sequence", "nw_exact", "nw_sequence", "sharp_m_global_norm",
              "n_infty", "jet_sequence", "jet_exact", "extension_seminorm", "extension_wnorm"):
        assert rep[k] == 0.0, k
    assert rep["sharp_norms"] == [0.0, 0.0, 0.0]


def test_analyze_guards_and_inf(tmp_path, capsys):
    path = write_csv(tmp_path / "one.csv", [(0, 1)])
    code, out, _ = run(["analyze", "--input", path, "--m", "2"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["n_exact"] is None and "n_exact" in rep["reasons"]
    assert rep["extension_wnorm"] is not None
    path = write_csv(tmp_path / "sq.csv", [(0, 0), (1, 1), (2, 4), (3, 9)])
    code, out, _ = run(["analyze", "--input", path, "--p", "inf"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["p"] == "inf"
    assert rep["n_exact"] is None and rep["extension_seminorm"] is not None


@pytest.mark.parametrize("rows,line", [
    ([(0, 1), (1, 2), (0, 3)], 4),
    ([(0, 1), (1, "nan")], 3),
    ([(0, 1), ("abc", 2)], 3),
    ([(0, 1), (1, 2, 3)], 3),
])
def test_bad_input_exit_2(tmp_path, capsys, rows, line):
    path = write_csv(tmp_path / "bad.csv", rows)
    code, _, err = run(["analyze", "--input", path], capsys)
    assert code == 2 and f"line {line}" in err


def test_bad_header_and_options(tmp_path, capsys):
    path = write_csv(tmp_path / "h.csv", [(0, 1), (1, 2)], header="a,b")
    code, _, err = run(["analyze", "--input", path], capsys)
    assert code == 2 and "line 1" in err
    good = write_csv(tmp_path / "g.csv", [(0, 1), (1, 2)])
    assert run(["analyze", "--input", good, "--m", "9"], capsys)[0] == 2
    assert run(["analyze", "--input", good, "--p", "1"], capsys)[0] == 2
    assert run(["analyze", "--input", good, "--p", "two"], capsys)[0] == 2
    assert run(["analyze"], capsys)[0] == 2
    assert run(["analyze", "--input", str(tmp_path / "missing.csv")], capsys)[0] == 2
    assert run(["verify", "--p", "inf"], capsys)[0] == 2


def test_unsorted_input_sorted_on_load(tmp_path):
    E = read_samples(write_csv(tmp_path / "u.csv", [(2, 4), (0, 0), (1, 1)]))
    assert list(E.xs) == [0, 1, 2] and list(E.ys) == [0, 1, 4]


def test_extend_lmp(tmp_path, capsys):
    data = [(0, 1.25), (0.7, -2.0), (1.5, 0.3), (4.0, 2.0)]
    path = write_csv(tmp_path / "d.csv", data)
    code, out, _ = run(["extend", "--input", path, "--m", "2", "--samples", "200"], capsys)
    assert code == 0
    header, tab = load_table(out)
    assert header == ["x", "F0", "F1", "F2"]
    for x, y in data:
        row = tab[tab[:, 0] == x]
        assert row.shape[0] == 1 and row[0, 1] == y
    tails = (tab[:, 0] < 0) | (tab[:, 0] > 4.0)
    assert np.all(tab[tails, 3] == 0.0)
    assert tab[0, 0] == pytest.approx(-12) and tab[-1, 0] == pytest.approx(16)
    assert np.all(np.diff(tab[:, 0]) > 0)


def test_extend_wmp_support(tmp_path, capsys):
    data = [(0, 1.0), (0.5, -1.0), (9.0, 2.0)]
    path = write_csv(tmp_path / "d.csv", data)
    m = 2
    out_path = tmp_path / "ext.csv"
    code, _, _ = run(["extend", "--input", path, "--m", str(m), "--mode", "wmp",
                      "--samples", "500", "--out", str(out_path)], capsys)
    assert code == 0
    _, tab = load_table(out_path.read_text())
    x = tab[:, 0]
    d = np.min(np.abs(x[:, None] - np.array([0, 0.5, 9.0])[None, :]), axis=1)
    assert np.all(tab[d > 3 * (m + 2), 1:] == 0.0)
    for xk, y in data:
        assert tab[x == xk, 1][0] == y


def test_extend_too_few_points(tmp_path, capsys):
    path = write_csv(tmp_path / "one.csv", [(0, 1)])
    assert run(["extend", "--input", path, "--m", "2"], capsys)[0] == 2
    assert run(["extend", "--input", path, "--m", "2", "--mode", "wmp"], capsys)[0] == 0


def test_round_trip_through_analyze(tmp_path, capsys):
    rng = np.random.default_rng(5)
    xs = np.cumsum(np.exp(rng.uniform(-1, 1, size=7)))
    data = list(zip(xs, rng.normal(size=7)))
    path = write_csv(tmp_path / "d.csv", [(repr(float(x)), repr(float(y))) for x, y in data])
    _, out, _ = run(["extend", "--input", path, "--m", "2", "--samples", "50"], capsys)
    _, tab = load_table(out)
    knot_rows = tab[np.isin(tab[:, 0], xs)]
    back = write_csv(tmp_path / "back.csv",
                     [(repr(float(x)), repr(float(y))) for x, y in knot_rows[:, :2]])
    _, a, _ = run(["analyze", "--input", path, "--m", "2", "--p", "3"], capsys)
    _, b, _ = run(["analyze", "--input", back, "--m", "2", "--p", "3"], capsys)
    ra, rb = json.loads(a), json.loads(b)
    for k, v in ra.items():
        if isinstance(v, float):
            assert rb[k] == pytest.approx(v, rel=1e-9), k


def test_verify_deterministic_and_fault(tmp_path, capsys):
    argv = ["verify", "--m", "2", "--instances", "3", "--seed", "7"]
    c1, o1, _ = run(argv + ["--out", str(tmp_path / "a.json")], capsys)
    c2, o2, _ = run(argv + ["--out", str(tmp_path / "b.json")], capsys)
    assert c1 == c2 == 0 and o1 == o2
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    c3, o3, _ = run(argv + ["--inject-fault"], capsys)
    assert c3 == 1 and "FAIL" in o3


def test_verify_tolerance_env(monkeypatch, capsys):
    monkeypatch.setenv("SOBTRACE_TOL", "abc")
    assert run(["verify", "--m", "1", "--instances", "1"], capsys)[0] == 2
    monkeypatch.setenv("SOBTRACE_TOL", "-1")
    assert run(["verify", "--m", "1", "--instances", "1"], capsys)[0] == 2
    monkeypatch.setenv("SOBTRACE_TOL", "1e-8")
    assert run(["verify", "--m", "1", "--instances", "1"], capsys)[0] == 0


def test_euler_table(capsys):
    code, out, _ = run(["euler", "--m", "6"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["schema_version"] == 1
    rows = {r["m"]: r for r in doc["rows"]}
    assert rows[1]["c_m"] == pytest.approx(1.0, abs=1e-12)
    assert rows[2]["c_m"] <= doc["K(2)"] + 1e-12
    assert all(rows[m]["chain_holds"] for m in range(3, 7))
    for m in range(1, 7):
        assert rows[m]["euler_top_derivative_sup"] == pytest.approx(rows[m]["c_m*2^m"], rel=1e-6)
