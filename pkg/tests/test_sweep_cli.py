import json
import re

import numpy as np
import pytest

from ddsense.cli import main
from ddsense.output import emit_csv, emit_plot, format_number
from ddsense.sweep import (
    CSV_COLUMNS, ResultRow, ScenarioError, load_scenario, parse_scenario, recipe_path,
    run_point, run_sweep,
)
from ddsense.fim import CrlbReport


def _doc(**over):
    doc = json.loads(recipe_path("fig1").read_text())
    doc.update(over)
    return doc


def test_recipes_parse():
    for name in ("fig1", "fig2", "fig3"):
        spec = load_scenario(name)
        assert spec.M == 12 and spec.N == 12 and len(spec.schemes) == 4
    assert load_scenario("fig3").axis == "snr_db"
    assert len(load_scenario("fig3").paths) == 2


@pytest.mark.parametrize("over, msg", [
    ({"colour": "red"}, "unknown field"),
    ({"axis": "bandwidth"}, "axis"),
    ({"values": [30000, 15000]}, "strictly increasing"),
    ({"values": []}, "non-empty"),
    ({"schemes": ["ofdm"]}, "unknown scheme"),
    ({"seed": -1}, "seed"),
    ({"paths": []}, "paths"),
])
def test_scenario_rejects(over, msg):
    with pytest.raises(ScenarioError, match=msg):
        parse_scenario(_doc(**over))


def test_scenario_rejects_unknown_path_field():
    doc = _doc()
    doc["paths"][0]["delay"] = 1e-6
    with pytest.raises(ScenarioError, match="unknown field"):
        parse_scenario(doc)


def test_scenario_rejects_bad_grid():
    with pytest.raises(ScenarioError):
        parse_scenario(_doc(axis="grid_mn", values=[[1, 4], [4, 4]]))


def test_run_point_fig1():
    results = run_point(load_scenario("fig1"))
    assert len(results) == 4
    for rep in results.values():
        assert isinstance(rep, CrlbReport)
        assert (rep.tau > 0).all() and (rep.nu > 0).all()


def test_run_point_fig3_has_eight_path_rows():
    results = run_point(load_scenario("fig3"))
    assert sum(r.n_paths for r in results.values()) == 8


def test_duplicate_paths_error_isolated():
    doc = _doc(axis=None, values=None)
    doc["paths"] = doc["paths"] * 2
    results = run_point(parse_scenario(doc))
    assert all(isinstance(r, ValueError) for r in results.values())  # validation catches duplicates


def test_singular_fim_error_row():
    # two distinct but numerically indistinguishable paths
    doc = _doc(axis="snr_db", values=[10], schemes=["zak_otfs"])
    p = dict(doc["paths"][0])
    doc["paths"] = [p, dict(p, tau=p["tau"] * (1 + 1e-15))]
    rows = run_sweep(parse_scenario(doc))
    assert len(rows) == 2 and all("SingularFimError" in r.error for r in rows)


def test_sweep_row_count_and_order():
    spec = parse_scenario(_doc(axis="snr_db", values=[0, 10, 20, 30], schemes=["cp_ofdm", "zak_otfs"]))
    rows = run_sweep(spec)
    assert len(rows) == 8
    assert [(r.scheme, r.snr_db) for r in rows][:2] == [("cp_ofdm", 0.0), ("cp_ofdm", 10.0)]
    for scheme in ("cp_ofdm", "zak_otfs"):
        sub = [r for r in rows if r.scheme == scheme]
        for col in ("crlb_tau_s2", "crlb_nu_hz2", "crlb_amp", "crlb_phase_rad2"):
            vals = [getattr(r, col) for r in sub]
            assert all(b < a for a, b in zip(vals, vals[1:]))


def test_scs_sweep_trend():
    rows = run_sweep(parse_scenario(_doc(schemes=["zak_otfs"])))
    tau = [r.crlb_tau_s2 for r in rows]
    nu = [r.crlb_nu_hz2 for r in rows]
    assert tau[0] > tau[1] > tau[2]
    assert nu[0] < nu[1] < nu[2]


def test_cp_default_follows_scs():
    spec = load_scenario("fig1")
    cps = [cfg.T_cp for cfg, _ in spec.points()]
    np.testing.assert_allclose(cps, [0.25 / 15e3, 0.25 / 30e3, 0.25 / 60e3])


def test_emit_csv_empty(tmp_path):
    p = emit_csv([], tmp_path / "e.csv")
    assert p.read_bytes() == (",".join(CSV_COLUMNS) + "\n").encode()


def test_emit_csv_rows_and_format(tmp_path):
    spec = parse_scenario(_doc(axis="snr_db", values=[0, 10, 20, 30], schemes=["cp_ofdm", "zak_otfs"]))
    rows = run_sweep(spec)
    text = emit_csv(rows, tmp_path / "r.csv").read_bytes()
    assert b"\r" not in text
    lines = text.decode().splitlines()
    assert len(lines) == 9
    assert lines[0] == "scheme,M,N,scs_hz,snr_db,path_index,crlb_tau_s2,crlb_nu_hz2,crlb_amp,crlb_phase_rad2,fim_condition,error"
    fields = lines[1].split(",")
    assert fields[:3] == ["cp_ofdm", "12", "12"]
    assert fields[3] == "1.5e+04"
    assert float(fields[6]) == rows[0].crlb_tau_s2  # round trip
    assert re.fullmatch(r"-?\d(\.\d+)?e[+-]\d+", fields[6])


def test_format_number_round_trip():
    for x in (0.1, 1e-17, 123456.789, 2.0 / 3):
        assert float(format_number(x)) == x


def test_emit_plot_series_and_log_axis(tmp_path):
    rows = []
    for s, scheme in enumerate(["a", "b", "c", "d"]):
        for i, snr in enumerate(range(0, 35, 5)):
            rows.append(ResultRow(scheme, 12, 12, 15e3, float(snr), 0, crlb_tau_s2=10.0 ** (-s - i)))
    svg = emit_plot(rows, tmp_path / "p.svg", "crlb_tau_s2").read_text()
    lines = re.findall(r'<polyline[^>]*points="([^"]+)"', svg)
    assert len(lines) == 4
    ys = [float(pt.split(",")[1]) for pt in lines[0].split()]
    steps = np.diff(ys)
    np.testing.assert_allclose(steps, steps[0], atol=0.011)  # each decade the same height
    assert (tmp_path / "p.dat").read_text().count("\n") == 1 + 28


def test_emit_plot_mixed_axes(tmp_path):
    rows = [ResultRow("a", 12, 12, 15e3, 0.0, 0, crlb_tau_s2=1.0),
            ResultRow("a", 6, 6, 30e3, 0.0, 0, crlb_tau_s2=1.0)]
    with pytest.raises(ValueError):
        emit_plot(rows, tmp_path / "p.svg")


def test_cli_sweep_deterministic(tmp_path, capsys):
    assert main(["sweep", "fig3", "--out", str(tmp_path / "a"), "--plot"]) == 0
    assert main(["sweep", "fig3", "--out", str(tmp_path / "b"), "--plot"]) == 0
    for name in ("fig3.csv", "fig3_crlb_tau_s2.svg", "fig3_crlb_nu_hz2.svg", "fig3_crlb_tau_s2.dat"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert len((tmp_path / "a" / "fig3.csv").read_text().splitlines()) == 1 + 4 * 7 * 2


def test_fig1_plot_ordering(tmp_path):
    rows = run_sweep(load_scenario("fig1"))
    svg = emit_plot(rows, tmp_path / "f.svg", "crlb_tau_s2").read_text()
    titles = re.findall(r"<title>([^<]+)</title>", svg)
    lines = re.findall(r'points="([^"]+)"', svg)
    first_y = {t: float(l.split()[0].split(",")[1]) for t, l in zip(titles, lines)}
    at15 = {r.scheme: r.crlb_tau_s2 for r in rows if r.scs_hz == 15e3}
    lowest = min(at15, key=at15.get)
    # SVG y grows downwards, so the lowest bound has the largest y
    assert max(first_y, key=first_y.get) == f"{lowest} path 0"


def test_cli_crlb(capsys):
    assert main(["crlb", "fig3", "--seed", "7"]) == 0
    out = capsys.readouterr().out
    assert "seed=7" in out and out.count("zak_otfs") == 2


def test_cli_seed_override_changes_result(tmp_path):
    main(["sweep", "fig1", "--out", str(tmp_path / "a")])
    main(["sweep", "fig1", "--out", str(tmp_path / "b"), "--seed", "9"])
    assert (tmp_path / "a" / "fig1.csv").read_bytes() != (tmp_path / "b" / "fig1.csv").read_bytes()


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(_doc(typo=1)))
    assert main(["crlb", str(bad)]) == 1
    assert main(["crlb", str(tmp_path / "missing.json")]) == 3

    dup = _doc(axis=None, values=None, schemes=["zak_otfs"])
    p = dup["paths"][0]
    dup["paths"] = [p, dict(p, tau=p["tau"] * (1 + 1e-15))]
    f = tmp_path / "dup.json"
    f.write_text(json.dumps(dup))
    assert main(["crlb", str(f)]) == 2

    invalid = _doc(axis=None, values=None)
    invalid["paths"][0]["tau"] = 1.0
    f2 = tmp_path / "inv.json"
    f2.write_text(json.dumps(invalid))
    assert main(["crlb", str(f2)]) == 1

    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["sweep", "fig1", "--out", str(blocker / "sub")]) == 3


def test_cli_selfcheck(capsys):
    assert main(["selfcheck"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") == 4 * 6
