import csv
import json

import pytest

from e6lax import cli
from e6lax.errors import ConfigError


def test_config_defaults_roundtrip():
    values = cli.load_config(None)
    assert values["q"] == "1/2"
    assert values["n"] == "1"


def test_config_rejects_unknown_key(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("qq = 1/2\n")
    with pytest.raises(ConfigError):
        cli.load_config(str(cfg))


def test_config_file_overrides(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# comment\nt = 1/6\nseed = 9\n")
    values = cli.load_config(str(cfg))
    assert values["t"] == "1/6"
    assert values["seed"] == "9"


def test_invalid_parameters_exit_code(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("q = 1\n")
    code = cli.main(["--config", str(cfg), "selftest"])
    assert code == 2
    assert "config error" in capsys.readouterr().err


def test_unparsable_rational_exit_code(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("t = one/three\n")
    assert cli.main(["--config", str(cfg), "selftest"]) == 2


def test_verify_lax_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = cli.main(["--json", "--out", str(out), "verify-lax"])
    capsys.readouterr()
    assert code == 0
    report = json.loads(out.read_text())
    groups = {c["group"] for c in report["checks"]}
    assert groups == {"spectral", "recurrence", "deformation",
                      "compatibility"}
    assert report["passed"] is True


def test_correspond_targets(capsys):
    assert cli.main(["correspond", "sakai"]) == 0
    assert cli.main(["correspond", "yamada"]) == 0
    capsys.readouterr()


def test_derive_fg_table(tmp_path, capsys):
    out = tmp_path / "fg.csv"
    code = cli.main(["--out", str(out), "derive-fg", "--times", "1/3,1/6"])
    capsys.readouterr()
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0][0] == "t"
    assert len(rows) == 3
    for row in rows[1:]:
        assert float(row[5]) < 1e-20
        assert float(row[6]) < 1e-20


def test_derive_fg_empty_times(tmp_path, capsys):
    out = tmp_path / "fg.csv"
    assert cli.main(["--out", str(out), "derive-fg"]) == 0
    capsys.readouterr()
    rows = list(csv.reader(out.open()))
    assert len(rows) == 1  # header only


def test_evolve_singular_seed(tmp_path, capsys):
    out = tmp_path / "orbit.csv"
    code = cli.main(["--out", str(out), "evolve", "--f0", "0",
                     "--g0", "1/2", "--steps", "2"])
    capsys.readouterr()
    assert code == 1
    rows = list(csv.reader(out.open()))
    assert "SingularStep" in "".join(rows[-1])


def test_evolve_zero_steps(tmp_path, capsys):
    out = tmp_path / "orbit.csv"
    code = cli.main(["--out", str(out), "evolve", "--f0", "7/4",
                     "--g0", "9/14", "--steps", "0"])
    capsys.readouterr()
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert len(rows) == 2  # header + seed row
