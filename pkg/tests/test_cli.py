import csv
import io
import json

import numpy as np
import pytest

from cpwall import asymptotics, cli
from cpwall.constants import HARTREE_EV, ev_to_angular_frequency, reduce
from cpwall.materials import Ideal, Static, lookup


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture(scope="module")
def he_table_file(tmp_path_factory):
    """Single-oscillator He* data written as a table in atomic units."""
    au = ev_to_angular_frequency(HARTREE_EV)
    w0 = lookup("he-star").omega0 / au
    x = np.linspace(0.0, 40 * w0, 200)
    path = tmp_path_factory.mktemp("tab") / "he.dat"
    lines = ["# xi [a.u.]  alpha(i xi)/alpha(0)"]
    lines += [f"{xi:.17g} {1.0 / (1.0 + (xi / w0) ** 2):.17g}" for xi in x]
    path.write_text("\n".join(lines) + "\n")
    return path


# --- compute ---------------------------------------------------------------


def test_compute_short_example(capsys):
    code, out, _ = run(capsys, "compute", "--atom", "he-star", "--metal", "au", "--a", "150nm",
                       "--T", "300", "--method", "asympt-short", "--quantity", "eta")
    assert code == 0
    (row,) = rows(out)
    assert list(row) == list(cli.COMPUTE_FIELDS)
    assert row["method"] == "asympt_short"
    assert float(row["eta"]) == pytest.approx(0.5050, abs=1e-3)
    assert row["kappa"] == ""


def test_compute_ideal_static_lifshitz(capsys):
    code, out, _ = run(capsys, "compute", "--atom", "he-star", "--metal", "au", "--a", "150nm",
                       "--T", "300", "--ideal-metal", "--static-atom", "--method", "lifshitz")
    assert code == 0
    (row,) = rows(out)
    st = reduce(150e-9, 300.0, Ideal(), Static())
    assert float(row["eta"]) == pytest.approx(asymptotics.eta_large(st), rel=2e-3)
    assert int(row["l_used"]) > 0 and float(row["est_tail"]) >= 0


def test_compute_auto_example(capsys):
    code, out, _ = run(capsys, "compute", "--atom", "na", "--a", "5um", "--method", "auto")
    assert code == 0
    (row,) = rows(out)
    assert row["method"] == "asympt_large"
    assert float(row["eta"]) == pytest.approx(1.402, abs=1e-3)


def test_compute_all_and_alpha0(capsys):
    code, out, _ = run(capsys, "compute", "--atom", "cs", "--a", "0.3um", "2um",
                       "--method", "all", "--alpha0", "1e-29")
    assert code == 0
    got = rows(out)
    assert [r["method"] for r in got] == ["lifshitz", "asympt_short", "asympt_large"] * 2
    assert all(float(r["energy_J"]) < 0 and float(r["force_N"]) < 0 for r in got)


def test_compute_grid_sorted(capsys):
    code, out, _ = run(capsys, "compute", "--grid", "0.2um", "2um", "5", "--method", "lifshitz")
    assert code == 0
    a = [float(r["a_m"]) for r in rows(out)]
    assert len(a) == 5 and a == sorted(a)
    assert a[0] == pytest.approx(0.2e-6) and a[-1] == pytest.approx(2e-6)


def test_compute_failure_exit_code(capsys):
    # beta_A > 1 for He* at 20 nm: the short series is out of regime
    code, out, err = run(capsys, "compute", "--a", "20nm", "--method", "asympt-short")
    assert code != 0
    (row,) = rows(out)
    assert row["validity_flag"] != "ok"


@pytest.mark.parametrize(
    "argv",
    [
        ("compute", "--atom", "xenon", "--a", "1um"),
        ("compute", "--metal", "copper", "--a", "1um"),
        ("compute", "--a", "1um", "--ideal-metal", "--omega-p", "1e16"),
        ("compute", "--a", "-1um"),
        ("compute", "--a", "1 furlong"),
        ("figure", "3"),
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(list(argv))
    assert exc.value.code == 2


@pytest.mark.parametrize(
    "text,expected",
    [("150nm", 150e-9), ("1.5um", 1.5e-6), ("2µm", 2e-6), ("3e-6m", 3e-6), ("4e-6", 4e-6)],
)
def test_parse_length(text, expected):
    assert cli.parse_length(text) == pytest.approx(expected, rel=1e-15)


# --- tables ----------------------------------------------------------------


def _cell(table, atom, a_um):
    return next(r for r in table if r["atom"] == atom and float(r["a_um"]) == a_um)


@pytest.fixture(scope="module")
def table1():
    return cli.table_rows(1, diff=True)


@pytest.fixture(scope="module")
def table2():
    return cli.table_rows(2, diff=True)


def test_table1_examples(table1):
    he = _cell(table1, "he-star", 0.15)
    assert he["b"] == pytest.approx(0.5032, abs=1e-3)
    assert he["d"] == pytest.approx(0.5050, abs=1e-3)
    cs = _cell(table1, "cs", 1.0)
    assert cs["b"] == pytest.approx(0.9418, abs=1e-3)
    assert cs["c"] == pytest.approx(0.9375, abs=1e-3)
    assert cs["d"] == pytest.approx(0.9439, abs=1e-3)


def test_table2_example(table2):
    he = _cell(table2, "he-star", 8.0)
    assert he["b"] == pytest.approx(1.649, abs=1e-3)
    assert he["c"] == pytest.approx(1.649, abs=1e-3)


def test_table_csv_output(capsys):
    code, out, err = run(capsys, "table", "1", "--diff")
    got = rows(out)
    assert list(got[0])[:5] == ["atom", "a_um", "b", "c", "d"]
    assert "max |diff|" in err
    worst = max(float(r[k]) for r in got for k in ("diff_b", "diff_c", "diff_d") if r.get(k))
    assert code == (0 if worst <= 1e-3 else 1)


def test_table_with_synthetic_file(he_table_file):
    got = cli.table_rows(1, tables=cli._load_tables([f"he-star={he_table_file}"]))
    he = [r for r in got if r["atom"] == "he-star"]
    assert all("a" in r for r in he)
    for r in he:
        assert r["a"] == pytest.approx(r["b"], rel=1e-6)


# --- figures ---------------------------------------------------------------


@pytest.fixture(scope="module")
def fig1():
    return cli.figure_rows(1, grid=(0.15e-6, 8e-6, 12))


def test_figure1_high_T_end(fig1):
    assert fig1[-1]["curve4"] == pytest.approx(2.195, abs=1e-3)
    st = reduce(8e-6, 300.0, Ideal(), Static())
    assert fig1[-1]["curve4"] == pytest.approx(st.tau / 6, rel=1e-3)


def test_figure1_curve_ordering():
    (row,) = cli.figure_rows(1, grid=(0.2e-6, 0.2e-6, 1))
    assert row["curve1"] <= row["curve2"] <= row["curve4"]
    assert row["curve1"] <= row["curve3"] <= row["curve4"]


def test_figure2_short_force_correction():
    (row,) = cli.figure_rows(2, grid=(0.15e-6, 0.15e-6, 1))
    assert 1 - row["curve1"] == pytest.approx(0.57, abs=0.01)


def test_figure3_passthrough(capsys, he_table_file):
    code, out, _ = run(capsys, "figure", "3", "--polarizability-file", f"he*={he_table_file}")
    assert code == 0
    got = rows(out)
    assert len(got) == 200 and got[0]["atom"] == "he-star"
    assert float(got[0]["ratio"]) == 1.0


def test_figure_csv_header(capsys):
    code, out, _ = run(capsys, "figure", "2", "--grid", "1um", "2um", "3")
    assert code == 0
    assert out.splitlines()[0] == "a_um,curve1,curve2,curve3,curve4"
    assert len(out.splitlines()) == 4


# --- output determinism ----------------------------------------------------


def test_json_round_trip(capsys):
    code, out, _ = run(capsys, "compute", "--atom", "cs", "--a", "150nm", "1um", "6um",
                       "--method", "all", "--output", "json", "--alpha0", "5e-29")
    assert code == 0
    for line in out.splitlines():
        obj = json.loads(line)
        assert list(obj) == list(cli.COMPUTE_FIELDS)
        assert cli.emit_json(obj, cli.COMPUTE_FIELDS) == line


def test_parallel_matches_serial(capsys, monkeypatch):
    argv = ["compute", "--grid", "0.15um", "8um", "9", "--method", "all", "--output", "json"]
    monkeypatch.setenv("CPK_THREADS", "1")
    _, serial, _ = run(capsys, "--jobs", "1", *argv)
    monkeypatch.setenv("CPK_THREADS", "8")
    _, parallel, _ = run(capsys, "--jobs", "8", *argv)
    assert serial == parallel and serial


def test_worker_cap(monkeypatch):
    monkeypatch.setenv("CPK_THREADS", "2")
    assert cli.worker_count(16) == 2
    monkeypatch.setenv("CPK_THREADS", "junk")
    assert cli.worker_count(3) == 3


def test_selftest_reports(capsys):
    code, out, _ = run(capsys, "selftest")
    lines = out.splitlines()
    assert lines and all(l.startswith(("PASS ", "FAIL ")) for l in lines)
    assert code == (0 if all(l.startswith("PASS") for l in lines) else 1)


def test_auto_routes_drude_to_lifshitz(capsys):
    code, out, _ = run(capsys, "compute", "--a", "1um", "--metal", "drude",
                       "--omega-p", "1.37e16", "--gamma", "5.3e13")
    assert code == 0
    assert rows(out)[0]["method"] == "lifshitz"
