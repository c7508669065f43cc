"""CLI dispatch, formats, determinism and exit codes."""

import json

import pytest

from bfvkit.cli import main
from bfvkit.presets import PRESET_NAMES, load_preset


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_master_so3_passes(capsys):
    code, out = run_cli(capsys, "master", "--scenario", "so3-classical",
                        "--format", "machine")
    assert code == 0
    assert "residual=0" in out
    assert "check.master-equation=pass" in out


def test_master_corrupted_fails(tmp_path, capsys):
    doc = load_preset("so3-classical")
    doc["lie"]["c"] = [[1, 2, 3, 2], [2, 3, 1, 1], [3, 1, 2, 1]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out = run_cli(capsys, "master", "--scenario", str(path),
                        "--format", "machine")
    assert code == 1
    assert "check.master-equation=fail" in out


def test_parse_error_exit_code(tmp_path, capsys):
    doc = load_preset("abelian-translation")
    doc["pi"] = "1 * q1"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _out = run_cli(capsys, "validate", "--scenario", str(path))
    assert code == 2


def test_unknown_key_exit_code(tmp_path, capsys):
    doc = load_preset("abelian-translation")
    doc["zzz"] = True
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _out = run_cli(capsys, "validate", "--scenario", str(path))
    assert code == 2


def test_machine_output_deterministic(capsys):
    _code, first = run_cli(capsys, "extend", "--scenario", "aff1-bialgebra",
                           "--kmax", "2", "--format", "machine")
    _code, second = run_cli(capsys, "extend", "--scenario", "aff1-bialgebra",
                            "--kmax", "2", "--format", "machine")
    assert first == second
    assert "exact=false" in first
    assert "residual.bound=-2" in first


def test_extend_bialgebra_series_shape(capsys):
    code, out = run_cli(capsys, "extend", "--scenario", "aff1-bialgebra",
                        "--kmax", "2", "--ansatz-degree", "4",
                        "--format", "machine")
    assert code == 0
    lines = dict(l.split("=", 1) for l in out.strip().splitlines())
    assert lines["series.-1"] != "0"
    assert int(lines["residual.bound"]) <= -2


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_validate_all_presets(capsys, name):
    code, _out = run_cli(capsys, "validate", "--scenario", name,
                         "--format", "machine")
    assert code == 0


def test_probe_abelian_zero_table(capsys):
    code, out = run_cli(capsys, "probe-h0", "--scenario", "abelian-translation",
                        "--degree", "3", "--format", "machine")
    assert code == 0
    table_lines = [l for l in out.splitlines() if l.startswith("probe.ell2.")]
    assert table_lines
    assert all(l.endswith("=0") for l in table_lines)


def test_bch_so3(capsys):
    code, out = run_cli(capsys, "bch", "--scenario", "group-valued-so3",
                        "--order", "3", "--format", "machine")
    assert code == 0
    assert "check.bch.log-transport=pass" in out
    assert "check.bch.constraint-transport=pass" in out


def test_charge_bfv0(capsys):
    code, out = run_cli(capsys, "charge", "--scenario", "so3-classical",
                        "--bfv0", "--format", "machine")
    assert code == 0
    assert "charge=" in out
    assert "C1" not in out  # no h-ghosts in the degree-zero model


def test_jacobi_quasi(capsys):
    code, out = run_cli(capsys, "jacobi", "--scenario", "quasi-chi",
                        "--format", "machine")
    assert code == 0
    assert "check.homotopy-jacobi=pass" in out


def test_lift_classical(capsys):
    code, out = run_cli(capsys, "lift", "--scenario", "so3-classical",
                        "--format", "machine")
    assert code == 0
    assert "check.lift-closed=pass" in out


def test_usage_error(capsys):
    assert main(["master"]) == 2  # missing --scenario


def test_charge_deg1_abelian(capsys):
    code, out = run_cli(capsys, "charge", "--scenario", "abelian-translation",
                        "--format", "machine")
    assert code == 0
    assert "charge=1 * e2 c1" in out
    assert "charge.grades=(1,2)" in out


def test_brackets_command(capsys):
    code, out = run_cli(capsys, "brackets", "--scenario", "abelian-translation",
                        "--format", "machine")
    assert code == 0
    lines = dict(l.split("=", 1) for l in out.strip().splitlines())
    assert lines["ell1.x2"] == "-1 * c1"
    assert lines["ell2.x1.x2"] == "1"
    assert lines["ell2.x2.x1"] == "-1"


def test_membership_undecided_exit_code(tmp_path, capsys):
    # cofactor needs base degree 2 but the bound is 0: undecided, exit 3
    doc = load_preset("abelian-translation")
    doc["pi"] = "1 * x1^2 x2 e1 e2"
    doc["degree_bound"] = 0
    path = tmp_path / "undecided.json"
    path.write_text(json.dumps(doc))
    code, out = run_cli(capsys, "validate", "--scenario", str(path),
                        "--format", "machine")
    assert code == 3
    assert "check.compatibility.normalizer.psi1=undecided" in out


def test_machine_output_identical_across_processes(tmp_path):
    # determinism must not depend on hash randomization
    import subprocess
    import sys

    outs = []
    for seed in ("0", "424242"):
        env = {"PYTHONHASHSEED": seed, "PATH": "/usr/bin:/bin:/usr/local/bin"}
        proc = subprocess.run(
            [sys.executable, "-m", "bfvkit.cli", "extend",
             "--scenario", "aff1-bialgebra", "--kmax", "2",
             "--format", "machine"],
            capture_output=True, text=True, env=env)
        assert proc.returncode == 0, proc.stderr
        outs.append(proc.stdout)
    assert outs[0] == outs[1]
