"""Command-line front end.

Usage::

    fdesolve [solve] SPEC [--format json|dsl] [--tol TOL] [--samples PATH]
             [--t-max T] [--points N] [--quadrature CSV] [--residual-grid LIST]
             [--out-dir DIR]

Exit codes: 0 success, 2 parse error, 3 validation error, 4 solver error,
5 residual above ``--tol``.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from .errors import FdeError, ParseError, ValidationError
from .operators import OperatorPoly
from .oracle import SampledFunction, residual
from .solver import Problem, render_sum, solve, solve_alpha_order_quadrature
from .terms import TermSum, evaluate_array

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_SOLVER, EXIT_RESIDUAL = 0, 2, 3, 4, 5
P_TOL = 1e-9  # plain exponents must be integer multiples of alpha to this tolerance
DEFAULT_RESIDUAL_GRID = (0.25, 0.5, 1.0, 2.0)


# --- spec parsing -----------------------------------------------------------------

def _number(x, what):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(f"{what} must be a number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError(f"{what} must be finite")
    return x


def _complex(x, what):
    if isinstance(x, dict):
        extra = set(x) - {"re", "im"}
        if extra or "re" not in x:
            raise ValidationError(f"{what} must look like {{\"re\": .., \"im\": ..}}")
        return complex(_number(x["re"], what), _number(x.get("im", 0.0), what))
    return complex(_number(x, what), 0.0)


def _k_from_p(p, alpha, where):
    k = p / alpha
    kr = round(k)
    if abs(k - kr) > P_TOL or kr < 0:
        raise ValidationError(
            f"{where}: exponent {p!r} is not a non-negative integer multiple of alpha={alpha!r}")
    return int(kr)


def _int(x, what):
    if isinstance(x, bool) or not isinstance(x, (int, float)) or x != int(x) or x < 0:
        raise ValidationError(f"{what} must be a non-negative integer, got {x!r}")
    return int(x)


_ATOM_KEYS = {
    None: {"coeff", "k", "p", "rate_re", "rate_im"},
    "ml": {"kind", "coeff", "rate"},
    "power": {"kind", "coeff", "k", "p"},
    "cos": {"kind", "coeff", "rate"},
    "sin": {"kind", "coeff", "rate"},
}


def _forcing_atom(d, alpha, i):
    where = f"forcing[{i}]"
    if not isinstance(d, dict):
        raise ValidationError(f"{where} must be an object")
    kind = d.get("kind")
    if kind not in _ATOM_KEYS:
        raise ValidationError(f"{where}: unknown kind {kind!r}")
    extra = set(d) - _ATOM_KEYS[kind]
    if extra:
        raise ValidationError(f"{where}: unexpected keys {sorted(extra)}")
    coeff = _complex(d.get("coeff", 1.0), f"{where}.coeff")
    if "k" in d and "p" in d:
        raise ValidationError(f"{where}: give k or p, not both")
    if "p" in d:
        k = _k_from_p(_number(d["p"], f"{where}.p"), alpha, where)
    else:
        k = _int(d.get("k", 0), f"{where}.k")
    if kind is None:
        rate = complex(_number(d.get("rate_re", 0.0), f"{where}.rate_re"),
                       _number(d.get("rate_im", 0.0), f"{where}.rate_im"))
        return TermSum.atom(alpha, coeff, k, rate)
    if kind == "power":
        return TermSum.power(alpha, k, coeff)
    rate = _number(d.get("rate", 0.0), f"{where}.rate")
    if kind == "ml":
        return TermSum.ml(alpha, rate, coeff)
    if kind == "cos":
        return TermSum.cos(alpha, rate, coeff)
    return TermSum.sin(alpha, rate, coeff)


def problem_from_spec(spec):
    """Validate a JSON-style dict and build a :class:`Problem`."""
    from .dsl import parse_dsl

    if not isinstance(spec, dict):
        raise ValidationError("problem spec must be a JSON object")
    if "equation" in spec:
        if "operator" in spec or "forcing" in spec:
            raise ValidationError("give either 'equation' or 'operator'+'forcing', not both")
        extra = set(spec) - {"alpha", "equation"}
        if extra:
            raise ValidationError(f"unexpected keys {sorted(extra)}")
        if not isinstance(spec["equation"], str):
            raise ValidationError("'equation' must be a string")
        alpha = _number(spec["alpha"], "alpha") if "alpha" in spec else None
        spec = parse_dsl(spec["equation"], alpha)
    extra = set(spec) - {"alpha", "operator", "forcing"}
    if extra:
        raise ValidationError(f"unexpected keys {sorted(extra)}")
    if "alpha" not in spec:
        raise ValidationError("missing 'alpha'")
    alpha = _number(spec["alpha"], "alpha")
    if not 0.0 < alpha <= 1.0:
        raise ValidationError(f"alpha must lie in (0, 1], got {alpha!r}")
    if "operator" not in spec:
        raise ValidationError("missing 'operator'")
    coeffs = spec["operator"]
    if not isinstance(coeffs, list) or len(coeffs) < 2:
        raise ValidationError("'operator' must be a list of at least 2 coefficients")
    coeffs = [_complex(c, f"operator[{j}]") for j, c in enumerate(coeffs)]
    if coeffs[-1] == 0:
        raise ValidationError("leading operator coefficient must be nonzero")
    op = OperatorPoly(alpha, tuple(coeffs))
    atoms = spec.get("forcing", [])
    if not isinstance(atoms, list):
        raise ValidationError("'forcing' must be a list")
    forcing = TermSum.zero(alpha)
    for i, d in enumerate(atoms):
        forcing = forcing + _forcing_atom(d, alpha, i)
    return Problem(alpha, op, forcing)


def parse_problem(text, fmt="json"):
    """Parse problem text in ``json`` or ``dsl`` format."""
    from .dsl import parse_dsl

    if fmt == "json":
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno, ("JSON value",)) from None
        return problem_from_spec(spec)
    if fmt == "dsl":
        return problem_from_spec(parse_dsl(text))
    raise ValueError(f"unknown format {fmt!r}")


def _cjson(z):
    z = complex(z)
    return z.real if z.imag == 0 else {"re": z.real, "im": z.imag}


def problem_to_spec(problem):
    """Canonical JSON-style dict; :func:`problem_from_spec` inverts it."""
    if not problem.symbolic:
        raise ValidationError("only symbolic problems serialise")
    return {
        "alpha": problem.alpha,
        "operator": [_cjson(c) for c in problem.op.coeffs],
        "forcing": [
            {"coeff": _cjson(t.coeff), "k": t.k, "rate_re": t.a.real, "rate_im": t.a.imag}
            for t in problem.forcing.terms
        ],
    }


# --- deterministic JSON ------------------------------------------------------------

def dumps(obj, indent=2, _level=0):
    """JSON text with floats printed to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError("non-finite float in JSON output")
        text = format(x, ".17g")
        return text if any(ch in text for ch in ".en") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


# --- run --------------------------------------------------------------------------

def _grid(text):
    try:
        ts = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"bad --residual-grid {text!r}") from None
    if not ts or any(not math.isfinite(t) or t < 0 for t in ts):
        raise ValidationError("--residual-grid needs non-negative numbers")
    return ts


def _write_samples(path, h, values):
    SampledFunction(h, values).to_csv(path)


def _detect_format(path, fmt):
    if fmt:
        return fmt
    return "json" if path.endswith(".json") or path == "-" else "dsl"


def run(args, out=None):
    """Carry out one CLI invocation; returns the exit status."""
    out = out or sys.stdout
    fmt = _detect_format(args.spec, args.format)
    text = sys.stdin.read() if args.spec == "-" else open(args.spec, encoding="utf-8").read()
    problem = parse_problem(text, fmt)
    if args.points < 2 or not args.t_max > 0:
        raise ValidationError("--points must be >= 2 and --t-max positive")
    os.makedirs(args.out_dir, exist_ok=True)

    if args.quadrature:
        if problem.op.degree != 1:
            raise ValidationError("quadrature mode needs a degree-1 operator")
        c0, c1 = problem.op.coeffs
        if c0.imag or c1.imag:
            raise ValidationError("quadrature mode needs real operator coefficients")
        g = SampledFunction.from_csv(args.quadrature)
        g = SampledFunction(g.h, g.values / c1.real)
        y = solve_alpha_order_quadrature(-c0.real / c1.real, g, problem.alpha,
                                         tol=args.quad_tol, method=args.quad_method)
        path = args.samples or os.path.join(args.out_dir, "samples.csv")
        y.to_csv(path)
        print(f"quadrature solution written to {path} ({len(y)} points)", file=out)
        return EXIT_OK

    solution = solve(problem)
    grid = _grid(args.residual_grid) if args.residual_grid else DEFAULT_RESIDUAL_GRID
    res = residual(problem, solution, grid)

    with open(os.path.join(args.out_dir, "solution.json"), "w", encoding="utf-8") as fh:
        fh.write(dumps(solution.to_json()) + "\n")
    with open(os.path.join(args.out_dir, "solution.txt"), "w", encoding="utf-8") as fh:
        fh.write(f"alpha = {problem.alpha!r}\n")
        fh.write(f"operator: {problem.op} acting on y\n")
        fh.write(f"forcing: {render_sum(problem.forcing)}\n")
        fh.write(solution.render() + "\n")
    if args.samples:
        ts = np.linspace(0.0, args.t_max, args.points)
        vals = evaluate_array(solution.particular, ts)
        if np.all(np.abs(vals.imag) <= 1e-12 * np.maximum(1.0, np.abs(vals))):
            vals = vals.real
        _write_samples(args.samples, ts[1] - ts[0], vals)

    status = "ok" if res <= args.tol else "EXCEEDED"
    print(f"residual {res:.3e} (tol {args.tol:.1e}) on t = {list(grid)}: {status}", file=out)
    return EXIT_OK if res <= args.tol else EXIT_RESIDUAL


def build_parser():
    p = argparse.ArgumentParser(prog="fdesolve", description="Solve f(D^alpha) y = g in closed form.")
    p.add_argument("spec", help="problem file (JSON or DSL); '-' reads stdin")
    p.add_argument("--format", choices=("json", "dsl"), default=None,
                   help="input format (default: by file extension)")
    p.add_argument("--tol", type=float, default=1e-8, help="largest accepted residual")
    p.add_argument("--samples", default=None, help="write y_p samples to this CSV")
    p.add_argument("--t-max", type=float, default=2.0)
    p.add_argument("--points", type=int, default=401)
    p.add_argument("--quadrature", default=None, metavar="CSV",
                   help="sampled forcing; solve a degree-1 equation numerically")
    p.add_argument("--quad-method", choices=("variation", "volterra"), default="variation")
    p.add_argument("--quad-tol", type=float, default=1e-2)
    p.add_argument("--residual-grid", default=None, metavar="T1,T2,...")
    p.add_argument("--out-dir", default=".")
    return p


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "solve":
        argv = argv[1:]
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, OSError) as exc:
        print(f"invalid problem: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (FdeError, ArithmeticError, ValueError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
