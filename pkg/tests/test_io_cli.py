import json
import math
import subprocess
import sys

import numpy as np
import pytest

from antieig import io
from antieig.cli import main
from antieig.errors import InputError


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_matrix_layouts():
    nested = io.matrix_from_json({"rows": 2, "cols": 2, "entries": [[1, 2], [3, 4]]})
    flat = io.matrix_from_json({"rows": 2, "cols": 2, "entries": [1, 2, 3, 4]})
    np.testing.assert_array_equal(nested, flat)
    assert nested.dtype == float
    z = io.matrix_from_json({"rows": 1, "cols": 2, "entries": [[[1, 2], 3]]})
    assert z.dtype == complex and z[0, 0] == 1 + 2j and z[0, 1] == 3
    zf = io.matrix_from_json({"rows": 1, "cols": 2, "entries": [[1, 2], [3, 0]]})
    np.testing.assert_array_equal(zf, [[1 + 2j, 3]])


@pytest.mark.parametrize("obj", [
    [1, 2],
    {"rows": 2, "cols": 2, "entries": [1, 2, 3]},
    {"rows": 0, "cols": 1, "entries": []},
    {"rows": 1, "cols": 1, "entries": [[[1, 2, 3]]]},
    {"rows": 1, "cols": 1, "entries": ["x"]},
    {"rows": 1, "cols": 1, "entries": [True]},
])
def test_matrix_rejects_malformed(obj):
    with pytest.raises(InputError):
        io.matrix_from_json(obj)


def test_round_trip(rng):
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    back = io.matrix_from_json(json.loads(io.dumps(io.matrix_to_json(A))))
    np.testing.assert_array_equal(back, A)


def test_dumps_format():
    text = io.dumps({"a": 0.1, "b": 1.0, "c": math.inf, "d": np.float64(1 / 3), "e": 2 + 1j, "f": True},
                    indent=None)
    assert text == '{"a": 0.10000000000000001,"b": 1.0,"c": null,"d": 0.33333333333333331,"e": [2.0, 1.0],"f": true}'
    assert io.dumps(np.arange(3)) == "[0, 1, 2]"


def test_load_errors(tmp_path):
    with pytest.raises(InputError):
        io.load_matrix(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InputError):
        io.load_matrix(bad)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_mu1_and_echo(tmp_path, capsys):
    m = write(tmp_path, "d.json", {"rows": 2, "cols": 2, "entries": [[1, 0], [0, 4]]})
    code, out, _ = run(capsys, "mu1", "--matrix", m)
    assert code == 0
    d = json.loads(out)
    assert d["mu1"] == pytest.approx(0.8) and d["method"] == "hermitian_pd"
    code, out, _ = run(capsys, "echo", "--matrix", m)
    assert code == 0 and json.loads(out) == {"rows": 2, "cols": 2, "entries": [[1.0, 0.0], [0.0, 4.0]]}
    code, out, _ = run(capsys, "mu1", "--matrix", m, "--field", "real")
    assert json.loads(out)["mu1"] == pytest.approx(0.8)


def test_cli_gamma_check_prange(tmp_path, capsys):
    m = write(tmp_path, "d.json", {"rows": 2, "cols": 2, "entries": [[1, 0], [0, 4]]})
    code, out, _ = run(capsys, "gamma", "--matrix", m, "--p", "4")
    assert code == 0 and json.loads(out)["gamma_best"] == pytest.approx(0.975)
    code, out, _ = run(capsys, "check", "--matrix", m, "--p", "12")
    d = json.loads(out)
    assert code == 0 and d["agree"] and not d["verdict_antieigen"]
    code, out, _ = run(capsys, "prange", "--matrix", m)
    assert json.loads(out) == pytest.approx({"p_lower": 10 / 9, "p_upper": 10.0, "empty": False})
    s = write(tmp_path, "s.json", {"rows": 2, "cols": 2, "entries": [[0, 0], [0, 1]]})
    code, out, _ = run(capsys, "prange", "--matrix", s)
    assert json.loads(out)["empty"] is True


def test_cli_regions(capsys):
    code, out, _ = run(capsys, "regions", "--kind", "kappa", "--grid", "2,4")
    assert code == 0 and out.splitlines()[1] == "2,0,unbounded"
    code, out, _ = run(capsys, "regions", "--kind", "sector", "--grid", "4", "--out", "json")
    assert json.loads(out)[0]["half_angle"] == pytest.approx(math.pi / 3)


def test_cli_kernel_commands(tmp_path, capsys):
    spec = write(tmp_path, "spec.json", {
        "A": {"rows": 1, "cols": 1, "entries": [[[1, 0.5]]]},
        "S": {"rows": 2, "cols": 2, "entries": [[0, -1], [1, 0]]},
        "d": 2})
    code, out, _ = run(capsys, "kernel-eval", "--spec", spec, "--x", "0,0", "--xi", "0,0", "--t", "1")
    H = json.loads(out)["H"][0][0]
    assert code == 0 and complex(*H) == pytest.approx(1 / (4 * math.pi * (1 + 0.5j)))
    code, out, _ = run(capsys, "kernel-mass", "--spec", spec, "--t", "0.5")
    assert code == 0 and json.loads(out)["deviation"] < 1e-10
    code, out, _ = run(capsys, "kernel-chapman", "--spec", spec, "--t", "0.3", "--s", "0.4")
    assert code == 0 and json.loads(out)["deviation"] < 1e-10
    code, out, _ = run(capsys, "kernel-resolvent", "--spec", spec, "--lambda", "2,0", "--p", "3",
                       "--n-time", "100", "--out-stride", "2")
    d = json.loads(out)
    assert code == 0 and d["ratio"] == pytest.approx(0.3403848450477604, abs=1e-9) and d["bound"] == 0.5


def test_cli_exit_codes(tmp_path, capsys):
    nil = write(tmp_path, "n.json", {"rows": 2, "cols": 2, "entries": [[0, 1], [0, 0]]})
    zero = write(tmp_path, "z.json", {"rows": 1, "cols": 1, "entries": [0]})
    bad = write(tmp_path, "b.json", {"rows": 2, "cols": 2, "entries": [1]})
    assert run(capsys, "mu1", "--matrix", bad)[0] == 2
    assert run(capsys, "mu1", "--matrix", str(tmp_path / "nope.json"))[0] == 2
    assert run(capsys, "gamma", "--matrix", nil, "--p", "0.5")[0] == 2
    assert run(capsys, "mu1", "--matrix", zero)[0] == 2
    assert run(capsys, "mu1", "--matrix", nil, "--method", "hermitian")[0] == 4
    spec = write(tmp_path, "spec.json", {
        "A": {"rows": 1, "cols": 1, "entries": [1]},
        "S": {"rows": 2, "cols": 2, "entries": [[1, 0], [0, 1]]}})
    code, _, err = run(capsys, "kernel-mass", "--spec", spec, "--t", "1")
    assert code == 4 and "skew" in err
    spec = write(tmp_path, "spec2.json", {
        "A": {"rows": 1, "cols": 1, "entries": [1]},
        "S": {"rows": 2, "cols": 2, "entries": [[0, 1], [-1, 0]]}})
    code, _, err = run(capsys, "kernel-mass", "--spec", spec, "--t", "50")
    assert code == 2 and "need L" in err


def test_cli_numerical_failure_exit_code(tmp_path, capsys, monkeypatch):
    from antieig import antieigen
    from antieig.errors import NumericalFailure

    def boom(*a, **k):
        raise NumericalFailure("no restart converged")
    monkeypatch.setattr(antieigen, "mu1_brute", boom)
    m = write(tmp_path, "m.json", {"rows": 2, "cols": 2, "entries": [[1, 1], [0, 1]]})
    code, _, err = run(capsys, "mu1", "--matrix", m, "--method", "brute")
    assert code == 3 and "numerical failure" in err


def test_cli_deterministic_across_processes(tmp_path):
    m = write(tmp_path, "m.json", {"rows": 2, "cols": 2, "entries": [[[1, 1], 2], [0, [3, -1]]]})
    cmd = [sys.executable, "-m", "antieig", "mu1", "--matrix", m, "--method", "brute", "--seed", "7"]
    outs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
    assert outs[0] == outs[1] and outs[0]
