import json
import random
import subprocess
import sys

import numpy as np
import pytest

from fdesolve.cli import dumps, main, parse_problem, problem_from_spec, problem_to_spec
from fdesolve.errors import ParseError, ValidationError
from fdesolve.operators import OperatorPoly
from fdesolve.oracle import SampledFunction
from fdesolve.solver import Problem
from fdesolve.terms import FracTerm, TermSum, evaluate_array

EX1 = {"alpha": 1 / 3, "operator": [6, -5, 1],
       "forcing": [{"coeff": 1, "k": 6, "rate_re": 0, "rate_im": 0}]}


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_example_one_run(tmp_path, capsys):
    spec = _write(tmp_path, "ex1.json", json.dumps(EX1))
    code = main([spec, "--tol", "1e-8", "--out-dir", str(tmp_path),
                 "--samples", str(tmp_path / "s.csv")])
    assert code == 0
    sol = json.loads((tmp_path / "solution.json").read_text())
    assert len(sol["particular"]["terms"]) == 7
    assert len(sol["complementary"]) == 2
    assert "residual" in capsys.readouterr().out
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "t,y"
    assert len(lines) == 402
    assert (tmp_path / "solution.txt").read_text().count("t^") >= 6


def test_solve_subcommand_and_dsl(tmp_path):
    spec = _write(tmp_path, "ex2.txt", "let alpha = 0.5\nD^2a y + 4 y = 3 cos(1)\n")
    assert main(["solve", spec, "--format", "dsl", "--out-dir", str(tmp_path)]) == 0
    text = (tmp_path / "solution.txt").read_text()
    assert "1·cos_α(1·t^α)" in text


def test_equation_inside_json(tmp_path):
    spec = _write(tmp_path, "e.json", json.dumps({"alpha": 0.5, "equation": "D^a y - y = E(2)"}))
    assert main([spec, "--out-dir", str(tmp_path)]) == 0


def test_deterministic_output(tmp_path):
    spec = _write(tmp_path, "ex1.json", json.dumps(EX1))
    outs = []
    for d in ("a", "b"):
        assert main([spec, "--out-dir", str(tmp_path / d)]) == 0
        outs.append((tmp_path / d / "solution.json").read_bytes())
    assert outs[0] == outs[1]


def test_exit_codes(tmp_path):
    bad = _write(tmp_path, "bad.json", '{"alpha": 0.5, "operator": [1,')
    assert main([bad, "--out-dir", str(tmp_path)]) == 2
    bad = _write(tmp_path, "bad.dsl", "D^a y = cos(")
    assert main([bad, "--out-dir", str(tmp_path)]) == 2
    invalid = _write(tmp_path, "inv.json", json.dumps({"alpha": 1.5, "operator": [1, 1]}))
    assert main([invalid, "--out-dir", str(tmp_path)]) == 3
    invalid = _write(tmp_path, "inv2.json", json.dumps(
        {"alpha": 0.3, "operator": [1, 1], "forcing": [{"kind": "power", "p": 2}]}))
    assert main([invalid, "--out-dir", str(tmp_path)]) == 3
    # forcing rate numerically on top of a near-double root
    degenerate = _write(tmp_path, "deg.json", json.dumps(
        {"alpha": 0.5, "operator": [1.0000003, -2.0000003, 1],
         "forcing": [{"kind": "ml", "rate": 1.0}]}))
    assert main([degenerate, "--out-dir", str(tmp_path)]) == 4
    spec = _write(tmp_path, "ex1.json", json.dumps(EX1))
    assert main([spec, "--tol", "-1", "--out-dir", str(tmp_path)]) == 5


def test_located_parse_error_message(tmp_path, capsys):
    bad = _write(tmp_path, "bad.dsl", "let alpha = 0.5\nD^a y = 2 ** 3\n")
    assert main([bad, "--out-dir", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "line 2, column 12" in err and "expected one of" in err


def test_quadrature_mode(tmp_path):
    alpha, a = 0.5, -1.0
    g = SampledFunction.from_function(lambda t: np.ones_like(t), 1e-3, 1.0)
    csv_path = _write(tmp_path, "g.csv", g.to_csv())
    spec = _write(tmp_path, "q.json", json.dumps({"alpha": alpha, "operator": [-a, 1]}))
    out = tmp_path / "y.csv"
    code = main([spec, "--quadrature", csv_path, "--quad-method", "volterra",
                 "--samples", str(out), "--out-dir", str(tmp_path)])
    assert code == 0
    y = SampledFunction.from_csv(str(out))
    # constant forcing, y(0) = 0: y = (1 - E_alpha(a t^alpha)) / (-a)
    expect = (1 - evaluate_array(TermSum.ml(alpha, a), y.t).real) / (-a)
    assert np.max(np.abs(y.values - expect)) < 1e-3


def test_quadrature_needs_degree_one(tmp_path):
    g = _write(tmp_path, "g.csv", "t,y\n0,1\n0.5,1\n1,1\n")
    spec = _write(tmp_path, "q.json", json.dumps({"alpha": 0.5, "operator": [1, 0, 1]}))
    assert main([spec, "--quadrature", g, "--out-dir", str(tmp_path)]) == 3


def test_residual_grid_flag(tmp_path, capsys):
    spec = _write(tmp_path, "ex1.json", json.dumps(EX1))
    assert main([spec, "--residual-grid", "0.1,0.7", "--out-dir", str(tmp_path)]) == 0
    assert "[0.1, 0.7]" in capsys.readouterr().out
    assert main([spec, "--residual-grid", "x", "--out-dir", str(tmp_path)]) == 3


def test_module_entry_point(tmp_path):
    spec = _write(tmp_path, "ex1.json", json.dumps(EX1))
    out = subprocess.run([sys.executable, "-m", "fdesolve", spec, "--out-dir", str(tmp_path)],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "residual" in out.stdout


def test_spec_sugar_kinds():
    spec = {"alpha": 0.5, "operator": [1, {"re": 0.0, "im": 1.0}, 1],
            "forcing": [{"kind": "ml", "coeff": 2, "rate": -1},
                        {"kind": "power", "p": 1.0},
                        {"kind": "cos", "rate": 2},
                        {"kind": "sin", "coeff": {"re": 0, "im": 1}, "rate": 3},
                        {"coeff": 1, "k": 2, "rate_re": 0.5, "rate_im": -1}]}
    p = problem_from_spec(spec)
    assert p.op.coeffs[1] == 1j
    expect = (TermSum.ml(0.5, -1, 2) + TermSum.power(0.5, 2) + TermSum.cos(0.5, 2)
              + TermSum.sin(0.5, 3, 1j) + TermSum.atom(0.5, 1, 2, 0.5 - 1j))
    assert p.forcing == expect


@pytest.mark.parametrize("spec", [
    [],
    {"operator": [1, 1]},
    {"alpha": 0.5},
    {"alpha": 0.5, "operator": [1]},
    {"alpha": 0.5, "operator": [1, 0]},
    {"alpha": True, "operator": [1, 1]},
    {"alpha": 0.5, "operator": [1, "x"]},
    {"alpha": 0.5, "operator": [1, 1], "forcing": [{"kind": "exp"}]},
    {"alpha": 0.5, "operator": [1, 1], "forcing": [{"kind": "ml", "k": 1}]},
    {"alpha": 0.5, "operator": [1, 1], "forcing": [{"k": 1.5}]},
    {"alpha": 0.5, "operator": [1, 1], "forcing": [{"k": 1, "p": 0.5}]},
    {"alpha": 0.5, "operator": [1, 1], "forcing": {}},
    {"alpha": 0.5, "operator": [1, 1], "equation": "D^a y = 1"},
    {"alpha": 0.5, "operator": [1, 1], "extra": 1},
])
def test_spec_validation(spec):
    with pytest.raises(ValidationError):
        problem_from_spec(spec)


def test_parse_error_carries_location():
    with pytest.raises(ParseError) as exc:
        parse_problem('{\n  "alpha": 0.5,\n  "operator": [1, 1,]\n}')
    assert exc.value.line == 3


def test_problem_round_trip_randomized():
    rng = random.Random(2)
    for _ in range(200):
        alpha = rng.choice([0.25, 0.5, 1 / 3, rng.uniform(0.05, 1.0)])
        n = rng.randint(1, 4)
        coeffs = [complex(rng.uniform(-5, 5), rng.choice([0.0, rng.uniform(-1, 1)]))
                  for _ in range(n)] + [complex(rng.uniform(0.5, 3), 0)]
        terms = tuple(FracTerm(complex(rng.uniform(-3, 3), rng.choice([0.0, rng.uniform(-3, 3)])),
                               rng.randint(0, 5),
                               complex(rng.choice([0.0, rng.uniform(-3, 3)]),
                                       rng.choice([0.0, rng.uniform(-3, 3)])))
                      for _ in range(rng.randint(0, 4)))
        p = Problem(alpha, OperatorPoly(alpha, tuple(coeffs)), TermSum(alpha, terms))
        text = dumps(problem_to_spec(p))
        assert parse_problem(text) == p


def test_dumps_format():
    assert dumps({"b": 0.1, "a": [1, 2.0]}) == '{\n  "b": 0.10000000000000001,\n  "a": [\n    1,\n    2.0\n  ]\n}'
    with pytest.raises(ValueError):
        dumps(float("nan"))
