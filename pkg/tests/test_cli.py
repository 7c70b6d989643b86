import io
import json

import pytest

from padicweights.cli import RunConfig, config_from_args, main, run
from padicweights.constants import generic_threshold, load_constants


def _run(argv):
    cfg = config_from_args(argv)
    out, err = io.StringIO(), io.StringIO()
    code = run(cfg, out, err)
    return code, out.getvalue(), err.getvalue()


def test_constants_env_override():
    c = load_constants({"PADICWEIGHTS_ZERO_ATOL": "1e-6"})
    assert c["zero_atol"] == 1e-6
    assert load_constants({})["schema_version"] == 1
    assert generic_threshold(13) >= generic_threshold(5)
    with pytest.raises(ValueError):
        load_constants({"PADICWEIGHTS_ZERO_ATOL": "tiny"})


def test_rho_example():
    code, out, _ = _run(["rho", "--p", "7", "--U", "1", "--V", "1", "--Q", "7", "--omega-trivial"])
    assert code == 0
    assert json.loads(out)["records"][0]["re"] == pytest.approx(2 / 49)


def test_dual_weight_zero_example():
    code, out, _ = _run(["dual-weight", "--chi", "p=5,n=3,k=1", "--omega", "p=5,n=4,k=1"])
    rec = json.loads(out)["records"][0]
    assert code == 0 and rec["value_re"] == 0 and rec["value_im"] == 0 and rec["bound_class"] == "zero"


def test_verify_golden_tsv():
    code, out, err = _run(["verify-appendix", "--p", "5", "--max-cond-exp", "3", "--format", "tsv"])
    assert code == 0 and err == ""
    header = out.splitlines()[0].split("\t")
    assert {"U", "V", "expected", "computed_re", "err"} <= set(header)


def test_config_errors_exit_2(capsys):
    assert main(["gauss", "--chi", "p=5,n=2,k=zz"]) == 2
    assert main(["rho", "--p", "7", "--U", "2", "--V", "1", "--Q", "7", "--omega-trivial"]) == 2
    assert main(["nonsense"]) == 2
    assert main(["dfstar", "--chi", "p=3,n=2,k=1", "--nu=-0.5,0.5", "--mode", "brute"]) == 2


def test_verification_failure_exit_1():
    code, _, err = _run(["verify-appendix", "--p", "3", "--max-cond-exp", "1", "--tol", "-1"])
    assert code == 1
    lines = [json.loads(x) for x in err.splitlines()]
    assert lines and all(x["check"] == "golden-table" for x in lines)


def test_runconfig_roundtrip():
    cfg = config_from_args(["atypical-scan", "--chi", "p=5,n=2,k=1", "--workers", "2"])
    assert RunConfig.from_json(cfg.to_json()) == cfg


def test_deterministic_output(tmp_path):
    argv = ["atypical-scan", "--chi", "p=5,n=2,k=1", "--format", "tsv"]
    a = _run(argv)[1]
    b = _run(argv + ["--workers", "2"])[1]
    assert a == b
    path = tmp_path / "o.tsv"
    assert main(argv + ["--out", str(path)]) == 0
    assert path.read_text() == a


def test_other_commands():
    assert _run(["gauss", "--chi", "p=5,n=2,k=1", "--brute"])[0] == 0
    assert _run(["tate-check", "--cases", "10"])[0] == 0
    code, out, _ = _run(["dfstar", "--chi", "p=3,n=2,k=1", "--s", "0.01,0.02,0", "--nu", "0.1,0.05", "--check"])
    assert code == 0 and "cross_rel_err" in json.loads(out)["records"][0]
    code, out, _ = _run(["dfstar", "--chi", "p=5,n=3,k=1", "--alpha", "0.05"])
    assert code == 0 and json.loads(out)["records"][0]["sup_estimate"] > 0
