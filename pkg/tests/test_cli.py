import csv
import io
import json

import pytest

from fdcsi.cli import main
from fdcsi.scenario import dump_config, figure_preset, run_sweep


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_pout(capsys):
    status, out, _ = run(capsys, "pout", "--rho-tilde", "0", "--sigma-e-sq", "0", "--delta-db", "3.0103")
    assert status == 0 and out.strip() == "0.333333"


def test_missing_value_is_usage_error(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["pout", "--rho-tilde", "0", "--delta-db"])
    assert info.value.code == 2
    assert list(tmp_path.iterdir()) == []


def test_unknown_subcommand(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_domain_error_exits_2(capsys):
    status, _, err = run(capsys, "pout", "--rho-tilde", "1.5", "--delta-db", "3")
    assert status == 2 and "error" in err


def test_rate_and_ase(capsys):
    status, out, _ = run(capsys, "rate", "--gamma-hat", "1", "--snr-db", "5", "--delta-db", "3", "--gap-db", "1")
    assert status == 0 and float(out) == pytest.approx(0.81489, abs=1e-5)
    status, out, _ = run(capsys, "ase", "--rho-tilde", "1", "--delta-db", "0", "--snr-db", "0", "--gap-db", "0")
    assert status == 0 and float(out) == pytest.approx(0.596347, abs=1e-6)


def test_throughput_report(capsys):
    status, out, _ = run(capsys, "throughput", "--scheme", "FDDATA@0.2")
    doc = json.loads(out)
    assert status == 0
    assert set(doc["components"]) == {"uplink_mnats", "uplink_pout", "downlink_mnats", "downlink_pout"}
    assert doc["pout"] == doc["components"]["uplink_pout"]


def test_throughput_pcsi(capsys):
    _, out, _ = run(capsys, "throughput", "--scheme", "PCSI")
    assert json.loads(out)["pout"] == 0.0


def test_figure_csv_matches_library(tmp_path, capsys):
    path = tmp_path / "fig4.csv"
    status, _, _ = run(capsys, "figure", "fig4", "--out", str(path))
    assert status == 0
    assert path.read_bytes() == run_sweep(figure_preset("fig4")).to_csv().encode()


def test_sweep_config_with_mc_is_deterministic(tmp_path, capsys):
    cfg_path = tmp_path / "s.json"
    cfg = figure_preset("fig3")
    cfg = type(cfg)(**{**{f: getattr(cfg, f) for f in cfg.__dataclass_fields__}, "values": (0.0, 10.0)})
    dump_config(cfg, cfg_path)
    outs = []
    for workers in ("1", "3"):
        out_path = tmp_path / f"out{workers}.csv"
        args = ["sweep", "--config", str(cfg_path), "--mc", "--samples", "5000", "--seed", "42"]
        status, _, _ = run(capsys, *args, "--workers", workers, "--out", str(out_path))
        assert status == 0
        outs.append(out_path.read_bytes())
    assert outs[0] == outs[1]
    rows = list(csv.DictReader(io.StringIO(outs[0].decode())))
    assert all(r["mc_throughput"] != "NA" for r in rows)


def test_bad_config_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    status, _, _ = run(capsys, "sweep", "--config", str(path))
    assert status == 2
    status, _, _ = run(capsys, "sweep", "--config", str(tmp_path / "missing.json"))
    assert status == 1


def test_svg_output(tmp_path, capsys):
    path = tmp_path / "fig2.svg"
    status, _, _ = run(capsys, "figure", "fig2", "--format", "svg", "--out", str(path))
    assert status == 0 and path.read_text().count("<polyline") == len(figure_preset("fig2").curves)


def test_svg_of_empty_sweep_is_refused(tmp_path, capsys):
    cfg_path = tmp_path / "empty.json"
    cfg_path.write_text(json.dumps({"sweep": {"axis": "inr_db", "values": [0]}, "schemes": []}))
    status, _, _ = run(capsys, "sweep", "--config", str(cfg_path), "--format", "svg")
    assert status == 2
    status, out, _ = run(capsys, "sweep", "--config", str(cfg_path))
    assert status == 0 and out.count("\n") == 1


def test_unwritable_output(tmp_path, capsys):
    status, _, _ = run(capsys, "figure", "fig2", "--out", str(tmp_path / "no" / "such" / "dir.csv"))
    assert status == 1


def test_mc_validate_status_tracks_cells(capsys):
    status, out, _ = run(capsys, "mc-validate", "--samples", "20000", "--seed", "3", "--workers", "4")
    lines = out.strip().splitlines()
    cells = lines[:-1]
    assert len(cells) == 36
    passed = sum(line.startswith("PASS") for line in cells)
    assert lines[-1].startswith(f"{passed}/36")
    assert status == (0 if passed >= 0.99 * 36 else 1)


def test_pilot_sim(capsys):
    status, out, _ = run(capsys, "pilot-sim", "--inr-db", "0", "--blocks", "20000")
    values = dict(line.split() for line in out.strip().splitlines())
    assert status == 0
    assert float(values["simulated"]) == pytest.approx(float(values["expected"]), rel=0.05)


def test_seed_must_be_u64(capsys):
    with pytest.raises(SystemExit) as info:
        main(["mc-validate", "--seed", "-1"])
    assert info.value.code == 2
