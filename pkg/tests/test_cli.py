import json
from importlib import resources

import pytest

from contactgb.cli import main

jsonschema = pytest.importorskip("jsonschema")


@pytest.fixture(scope="module")
def schema():
    ref = resources.files("contactgb") / "schemas" / "cli-output.schema.json"
    return json.loads(ref.read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, schema, *argv):
    code, out = run(capsys, *argv)
    payload = json.loads(out)
    jsonschema.validate(payload, schema)
    return code, payload


# ---------------------------------------------------------------------------
# identities


def test_identities_single_pattern(capsys):
    code, out = run(capsys, "identities", "--pattern", "o")
    assert code == 0
    assert out.strip() == "2*l*y - 2*l*x - x + 1"


def test_identities_by_order(capsys):
    code, out = run(capsys, "identities", "--order", "3")
    assert code == 0
    assert len(out.strip().splitlines()) == 4


def test_identities_bad_pattern_is_usage_error(capsys):
    code, _ = run(capsys, "identities", "--pattern", "q")
    assert code == 2


def test_identities_requires_selection(capsys):
    code, _ = run(capsys, "identities")
    assert code == 2


# ---------------------------------------------------------------------------
# ideal / groebner


def test_ideal_order_3(capsys):
    code, out = run(capsys, "ideal", "--order", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 6
    assert lines[-1] == "x*u - y*w"


def test_ideal_custom_relation(capsys):
    code, out = run(
        capsys, "ideal", "--scheme", "custom", "--pattern", "o",
        "--relation", "o*ooxo=oo*oxo",
    )
    assert code == 0
    assert out.strip().splitlines() == ["2*l*y - 2*l*x - x + 1", "x*u - y*w"]


def test_groebner_order_1(capsys):
    code, out = run(capsys, "groebner", "--order", "1")
    assert code == 0
    assert out.strip().splitlines() == ["2*l*x^2 - 2*l*x - x + 1", "y - x^2"]


def test_groebner_json_validates(capsys, schema):
    code, payload = run_json(capsys, schema, "groebner", "--order", "2", "--out", "json")
    assert code == 0
    assert len(payload["basis"]) == 4


# ---------------------------------------------------------------------------
# approx


def test_approx_order_1(capsys):
    code, out = run(capsys, "approx", "--order", "1")
    assert code == 0
    assert "lambda_c = 0.5" in out
    assert "x(l) = (1) / (2*l)" in out


def test_approx_degenerate_exit_status(capsys):
    code, out = run(capsys, "approx", "--order", "2prime")
    assert code == 3
    assert "trivial solution only" in out
    for line in ("x - 1", "y - 1", "z - 1"):
        assert line in out


def test_approx_order_3_json(capsys, schema):
    code, payload = run_json(capsys, schema, "approx", "--order", "3", "--out", "json")
    assert code == 0
    assert payload["degenerate"] is False
    assert abs(payload["lambda_c"]["value"] - 1.1804604217163699) < 1e-9
    assert payload["lambda_c"]["exact"] == "(1 + sqrt(37)) / 6"
    assert "sqrt(D)" in payload["branch"]
    assert payload["discriminant"] == "16*l^4 + 4*l^2 + 4*l + 1"


def test_approx_order_2_exact_bound(capsys, schema):
    code, payload = run_json(capsys, schema, "approx", "--order", "2", "--out", "json")
    assert code == 0
    assert payload["lambda_c"]["exact"] == "1"
    assert payload["lambda_c"]["value"] == 1.0


# ---------------------------------------------------------------------------
# sweep


def test_sweep_csv(capsys):
    code, out = run(
        capsys, "sweep", "--order", "1", "--from", "0.5", "--to", "1.0", "--step", "0.25"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("# ")
    assert lines[1] == "lambda,rho"
    rows = [line.split(",") for line in lines[2:]]
    assert [float(a) for a, _ in rows] == [0.5, 0.75, 1.0]
    assert abs(float(rows[2][1]) - 0.5) < 1e-9


def test_sweep_json(capsys, schema):
    code, payload = run_json(
        capsys, schema, "sweep", "--order", "2", "--from", "1.0", "--to", "2.0",
        "--step", "0.5", "--out", "json",
    )
    assert code == 0
    assert len(payload["rows"]) == 3


# ---------------------------------------------------------------------------
# simulate / compare


SIM_ARGS = ["--lambda", "1.0", "--L", "24", "--T", "4", "--replicas", "16", "--seed", "5"]


def test_simulate_extinction_json(capsys, schema):
    code, payload = run_json(capsys, schema, "simulate", *SIM_ARGS, "--mode", "extinction")
    assert code == 0
    assert payload["mode"] == "extinction"
    assert 0.0 <= payload["mean"] <= 1.0
    assert payload["rng"] == "splitmix64-streams-1"
    assert payload["manifest"]["seed"] == 5


def test_simulate_density_json(capsys, schema):
    code, payload = run_json(capsys, schema, "simulate", *SIM_ARGS, "--mode", "density")
    assert code == 0
    assert payload["mode"] == "density"


def test_simulate_duality_json(capsys, schema):
    code, payload = run_json(capsys, schema, "simulate", *SIM_ARGS, "--mode", "duality")
    assert code == 0
    assert {"vacancy", "extinction", "difference"} <= payload.keys()


def test_simulate_deterministic(capsys):
    _, first = run(capsys, "simulate", *SIM_ARGS)
    _, second = run(capsys, "simulate", *SIM_ARGS)
    a, b = json.loads(first), json.loads(second)
    for doc in (a, b):
        del doc["manifest"]["timestamp"]
        del doc["elapsed"]
    assert a == b


def test_simulate_missing_lambda_is_usage_error(capsys):
    code, _ = run(capsys, "simulate", "--L", "20")
    assert code == 2


def test_compare_json(capsys, schema):
    code, payload = run_json(
        capsys, schema, "compare", "--order", "1", *SIM_ARGS
    )
    assert code == 0
    assert payload["lambda"] == 1.0
    assert 0.0 <= payload["rho_approx"] < 1.0
    assert 0.0 <= payload["extinction_sim"] <= 1.0


def test_compare_subcritical(capsys, schema):
    code, payload = run_json(
        capsys, schema, "compare", "--order", "1",
        "--lambda", "0.3", "--L", "24", "--T", "10", "--replicas", "32", "--seed", "1",
    )
    assert code == 0
    assert payload["rho_approx"] == 0.0
    assert payload["extinction_approx"] == 1.0
    assert payload["extinction_sim"] >= 0.9


def test_version_flag(capsys):
    code, out = run(capsys, "--version")
    assert code == 0
    assert out.startswith("contactgb ")
