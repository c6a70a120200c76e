import json
import subprocess
import sys

import pytest

from symred.cli import dispatch


def run(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog_verify_table(capsys):
    code, out, _ = run(capsys, "catalog", "verify")
    lines = out.strip().splitlines()
    assert code == 0
    assert len(lines) == 13
    assert all(line.split()[1] == "PASS" for line in lines)


def test_catalog_list_and_dump(capsys):
    code, out, _ = run(capsys, "catalog", "list", "--format", "json")
    assert code == 0 and len(json.loads(out)) == 13
    code, out, _ = run(capsys, "catalog", "dump")
    assert code == 0 and len(json.loads(out)["appendix"]) == 13


def test_catalog_verify_single_entry_with_exact_params(capsys):
    code, out, _ = run(capsys, "catalog", "verify", "--entry", "H_recip_quadratic", "--params", "c2=0,c1=3/2")
    assert code == 0 and "PASS" in out


def test_symbolic_commands_need_exact_values(capsys):
    # decimal literals are read as exact decimal fractions
    assert run(capsys, "catalog", "verify", "--entry", "H_recip_quadratic", "--params", "c2=0.5")[0] == 0
    code, _, err = run(capsys, "catalog", "verify", "--params", "c2=inf")
    assert code == 2 and err.startswith("ERROR usage:")


def test_symmetry_check(capsys, tmp_path):
    assert run(capsys, "symmetry", "check", "--ode", "kappa_over_x")[0] == 0
    code, out, _ = run(capsys, "symmetry", "check", "--ode", "kappa_over_x", "--operator", "u1")
    assert code == 1 and "remainder" in out
    f = tmp_path / "ode.txt"
    f.write_text("# heat-like\nu3 = u1\n")
    assert run(capsys, "symmetry", "check", "--file", str(f), "--operator", "u1")[0] == 0


def test_pde_classify_verify(capsys):
    code, out, _ = run(capsys, "pde", "classify-verify", "--case", "B")
    assert code == 0
    code, out, _ = run(capsys, "pde", "classify-verify", "--case", "A", "--format", "json")
    rows = {r["id"]: r["status"] for r in json.loads(out)["generators"]}
    assert code == 1
    assert rows["X3_critical"] == "fail" and rows["X3_critical_derived"] == "pass"
    code, out, _ = run(capsys, "pde", "classify-verify", "--case", "B", "--params", "a4=0,a5=0")
    assert code == 0
    assert "Y2" in out and "NOT-APPLICABLE" in out


def test_reduce_json(capsys):
    code, out, _ = run(capsys, "reduce", "--case", "A", "--json")
    obj = json.loads(out)
    assert code == 0
    assert obj["case"] == "A" and obj["m"] == 1
    assert obj["odes"]["phi0'"] == "-2*a1*phi0 + 2*a2*phi0"


def test_reduce_incompatible_f(capsys):
    code, _, err = run(capsys, "reduce", "--case", "A", "--F", "u1")
    assert code == 1 and err.startswith("ERROR reduction:")


def test_solve_and_csv(capsys, tmp_path):
    path = tmp_path / "traj.csv"
    code, out, _ = run(capsys, "solve", "--case", "A", "--family", "tanh-general", "--rk45",
                       "--csv", str(path), "--format", "json")
    assert code == 0
    assert path.read_text().splitlines()[0] == "t,phi0,phi1,phi2"
    obj = json.loads(out)
    assert obj["max_rel_diff_closed_form"] <= 1e-6


def test_residual_exact(capsys):
    code, out, _ = run(capsys, "residual", "--case", "D", "--family", "erf", "--exact")
    assert code == 0 and "PASS" in out


def test_residual_fd_convergence(capsys):
    code, out, _ = run(capsys, "residual", "--case", "C", "--family", "gamma", "--format", "json")
    assert code == 0
    assert 3.2 <= json.loads(out)["convergence_ratio"] <= 4.8


def test_invariance_example(capsys):
    code, out, _ = run(capsys, "invariance", "--case", "A", "--family", "tanh-general",
                       "--samples", "50", "--seed", "7")
    assert code == 0 and "strictly-non-invariant" in out
    code, _, _ = run(capsys, "invariance", "--case", "A", "--family", "tanh-general",
                     "--expect", "invariant-along")
    assert code == 1


def test_determinism(capsys):
    argv = ["invariance", "--case", "B", "--family", "general", "--params", "a4=0,a5=0,a7=1/2",
            "--format", "json", "--seed", "4"]
    first = run(capsys, *argv)[1]
    assert first == run(capsys, *argv)[1]
    argv = ["solve", "--case", "C", "--family", "gamma", "--format", "csv"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("samples = 20\nseed = 3\nformat = json\n")
    code, out, _ = run(capsys, "--config", str(cfg), "invariance", "--case", "D", "--family", "erf",
                       "--seed", "5")
    obj = json.loads(out)
    assert code == 0 and obj["samples"] == 20 and obj["seed"] == 5


def test_config_unknown_key(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("bogus = 1\n")
    code, _, err = run(capsys, "--config", str(cfg), "reduce", "--case", "A")
    assert code == 2 and err.startswith("ERROR usage:")


@pytest.mark.parametrize("argv,code,prefix", [
    ([], 2, "ERROR usage:"),
    (["reduce"], 2, "ERROR usage:"),
    (["reduce", "--case", "Q"], 2, "ERROR unknown-id:"),
    (["symmetry", "check", "--ode", "kappa_over_x", "--operator", "u1 +"], 2, "ERROR parse:"),
    (["solve", "--case", "C", "--family", "gamma", "--constants", "c0=-1"], 2, "ERROR validity:"),
    (["residual", "--case", "A", "--family", "tanh-general", "--grid", "0,1,40"], 2, "ERROR input:"),
])
def test_error_prefixes(capsys, argv, code, prefix):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err.startswith(prefix)


def test_mol_hint_for_backward_diffusion(capsys):
    code, _, err = run(capsys, "mol", "--case", "A", "--family", "tanh-general", "--grid", "1,2,31")
    assert code == 1 and "kappa < 0" in err


@pytest.mark.parametrize("cmd,needles", [
    ("invariance", ["default: 50", "default: 0", "default: 1e-08"]),
    ("solve", ["default: 1e-10", "default: 1e-12", "default: 0.5"]),
    ("mol", ["default: 0.25", "default: 1e-08", "201 points", "default: 0.001"]),
    ("residual", ["default: 1e-09", "default: 0,0.3"]),
])
def test_help_documents_defaults(capsys, cmd, needles):
    with pytest.raises(SystemExit) as exc:
        dispatch([cmd, "--help"])
    assert exc.value.code == 0
    text = " ".join(capsys.readouterr().out.split())
    for n in needles:
        assert n in text


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "symred.cli", "reduce", "--case", "D", "--json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["odes"]["phi1'"] == "-2*a4"
