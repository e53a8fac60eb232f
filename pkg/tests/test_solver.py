import math

import numpy as np
import pytest

from fdesolve.errors import DegenerateOperatorError, ValidationError
from fdesolve.operators import OperatorPoly, apply
from fdesolve.oracle import SampledFunction
from fdesolve.solver import (
    GridTooCoarseWarning,
    Problem,
    check_residual,
    complementary,
    particular,
    particular_atom,
    reciprocal_series,
    solve,
    solve_alpha_order_quadrature,
)
from fdesolve.terms import FracTerm, TermSum, evaluate_array, to_real

G = math.gamma


def test_reciprocal_series():
    # 1 / (1 - x) = 1 + x + x^2 + ...
    assert reciprocal_series([1.0, -1.0], 4) == [1.0, 1.0, 1.0, 1.0, 1.0]
    q = reciprocal_series([2.0, 1.0, 3.0], 3)
    # multiply back: coefficients of p*q up to order 3 are (1, 0, 0, 0)
    prod = [sum(p * q[j - i] for i, p in enumerate([2.0, 1.0, 3.0]) if j - i >= 0) for j in range(4)]
    assert prod == pytest.approx([1, 0, 0, 0], abs=1e-15)


def test_complementary_distinct_roots():
    basis = complementary(OperatorPoly(1 / 3, (6.0, -5.0, 1.0)))
    assert len(basis) == 2
    assert basis[0].isclose(TermSum.ml(1 / 3, 2.0), 1e-14)
    assert basis[1].isclose(TermSum.ml(1 / 3, 3.0), 1e-14)


def test_complementary_repeated_root():
    basis = complementary(OperatorPoly.from_roots(0.5, [1.5, 1.5]))
    assert [b.terms for b in basis] == [(FracTerm(1, 0, 1.5),), (FracTerm(1, 1, 1.5),)]


def test_complementary_damped_pair():
    c, w, alpha = 0.5, 2.0, 0.6
    op = OperatorPoly(alpha, (c * c + w * w, 2 * c, 1.0))
    basis = complementary(op)
    kinds = [to_real(b).atoms for b in basis]
    # roots -c +- i w, following the characteristic polynomial
    assert [a[0].kind for a in kinds] == ["cos", "sin"]
    for atoms in kinds:
        assert atoms[0].p == pytest.approx(-c, abs=1e-14)
        assert atoms[0].q == pytest.approx(w, abs=1e-14)
    for b in basis:
        assert check_residual(op, b)[1]


def test_particular_atom_cases():
    alpha, a = 0.4, 1.5
    op = OperatorPoly(alpha, (-a, 1.0))
    c = 0.25
    assert particular_atom(op, 1, 0, c).isclose(TermSum.ml(alpha, c, 1 / (c - a)), 1e-14)
    assert particular_atom(op, 1, 0, a).isclose(TermSum.atom(alpha, 1 / G(1 + alpha), 1, a), 1e-14)
    op2 = OperatorPoly.from_roots(alpha, [a, a])
    assert particular_atom(op2, 1, 0, a).isclose(TermSum.atom(alpha, 1 / G(1 + 2 * alpha), 2, a), 1e-14)
    # polynomial short procedure for a t^alpha forcing
    y = particular_atom(op, 1, 1, 0)
    expect = TermSum(alpha, (FracTerm(-1 / a, 1, 0), FracTerm(-G(1 + alpha) / a ** 2, 0, 0)))
    assert y.isclose(expect, 1e-14)


def test_particular_trig_replacement():
    alpha, a, c = 0.7, 1.2, 0.8
    op = OperatorPoly(alpha, (-a * a, 0.0, 1.0))
    y = particular(op, TermSum.sin(alpha, c))
    assert y.isclose(TermSum.sin(alpha, c, 1 / (-c * c - a * a)), 1e-14)


def test_particular_resonant_trig():
    # forcing at the natural frequency gives t^alpha-weighted terms
    alpha, w = 0.5, 2.0
    op = OperatorPoly(alpha, (w * w, 0.0, 1.0))
    forcing = TermSum.cos(alpha, w)
    y = particular(op, forcing)
    assert max(t.k for t in y.terms) == 1
    assert check_residual(op, y, forcing)[1]
    to_real(y)


def test_particular_complex_operator():
    alpha = 0.5
    op = OperatorPoly(alpha, (1 + 2j, -0.5j, 1.0))
    forcing = TermSum(alpha, (FracTerm(2 - 1j, 2, 0.3 + 0.4j), FracTerm(1.0, 0, 0)))
    y = particular(op, forcing)
    assert apply(op, y).isclose(forcing, 1e-12)


def test_degenerate_operator():
    # two roots closer than the clustering radius are taken as one double
    # root away from the forcing rate, which leaves psi(0) = f(1) = 0
    op = OperatorPoly.from_roots(0.5, [1.0, 1.0 + 3e-7])
    with pytest.raises(DegenerateOperatorError):
        particular_atom(op, 1, 0, 1.0)


def test_solve_examples():
    alpha = 1 / 3
    sol = solve(Problem(alpha, OperatorPoly(alpha, (6.0, -5.0, 1.0)), TermSum.power(alpha, 6)))
    assert len(sol.complementary) == 2
    assert len(sol.particular) == 7
    sol = solve(Problem(0.5, OperatorPoly(0.5, (4.0, 0.0, 1.0)), TermSum.zero(0.5)))
    assert not sol.particular
    assert sol.render().startswith("y = A_1·[1·cos_α(2·t^α)] + A_2·[1·sin_α(2·t^α)]")


def test_solution_json_and_general():
    alpha = 0.5
    sol = solve(Problem(alpha, OperatorPoly(alpha, (-1.0, 1.0)), TermSum.ml(alpha, 2.0)))
    data = sol.to_json()
    assert list(data) == ["alpha", "complementary", "particular", "rendered"]
    y = sol.general([3.0])
    assert apply(OperatorPoly(alpha, (-1.0, 1.0)), y).isclose(TermSum.ml(alpha, 2.0), 1e-13)
    with pytest.raises(ValueError):
        sol.general([])


def test_problem_validation():
    op = OperatorPoly(0.5, (1.0, 1.0))
    with pytest.raises(ValidationError):
        Problem(0.4, op, TermSum.zero(0.4))
    with pytest.raises(ValidationError):
        Problem(0.5, op, TermSum.zero(0.6))
    with pytest.raises(ValidationError):
        Problem(0.5, op, "t^2")
    with pytest.raises(ValidationError):
        Problem(0.5, OperatorPoly(0.5, (1.0,)), TermSum.zero(0.5))
    g = SampledFunction(0.1, np.zeros(5))
    with pytest.raises(ValidationError):
        solve(Problem(0.5, op, g))


def _reference(alpha, a, forcing):
    """Symbolic PI shifted by a complementary multiple so that y(0) = 0."""
    op = OperatorPoly(alpha, (-a, 1.0))
    yp = particular(op, forcing)
    y0 = evaluate_array(yp, np.array([0.0]))[0]
    return yp - TermSum.ml(alpha, a, y0)


def test_quadrature_alpha_one_matches_symbolic():
    alpha, a = 1.0, -0.7
    forcing = TermSum.ml(alpha, 0.4)
    ref = _reference(alpha, a, forcing)
    g = SampledFunction.from_function(lambda t: evaluate_array(forcing, t).real, 1e-3, 2.0)
    y = solve_alpha_order_quadrature(a, g, alpha)
    expect = evaluate_array(ref, y.t).real
    assert np.max(np.abs(y.values - expect)) <= 1e-6 * np.max(np.abs(expect))


def test_quadrature_power_forcing_definite_constant():
    alpha, a = 0.5, 1.0
    g = SampledFunction.from_function(lambda t: t ** alpha, 1e-3, 2.0)
    y = solve_alpha_order_quadrature(a, g, alpha, method="volterra")
    gam = G(1 + alpha)
    t = y.t
    ta = t ** alpha
    ea = evaluate_array(TermSum.ml(alpha, a), t).real
    expect = -(1 / a) * (ta + gam / a) + gam / a ** 2 * ea
    mask = t >= 0.1
    assert np.max(np.abs(y.values[mask] - expect[mask])) <= 1e-3 * np.max(np.abs(expect[mask]))


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
def test_quadrature_volterra_matches_symbolic(alpha):
    a, c = 1.0, 0.5
    forcing = TermSum.ml(alpha, c)
    ref = _reference(alpha, a, forcing)
    g = SampledFunction.from_function(lambda t: evaluate_array(forcing, t).real, 1e-3, 2.0)
    y = solve_alpha_order_quadrature(a, g, alpha, method="volterra")
    mask = y.t >= 0.1
    expect = evaluate_array(ref, y.t[mask]).real
    assert np.max(np.abs(y.values[mask] - expect)) <= 1e-3 * np.max(np.abs(expect))


def test_quadrature_zero_forcing():
    g = SampledFunction(0.01, np.zeros(101))
    y = solve_alpha_order_quadrature(1.0, g, 0.5)
    assert np.all(y.values == 0)


def test_quadrature_coarse_grid_warns():
    g = SampledFunction.from_function(lambda t: np.cos(40 * t), 0.1, 2.0)
    with pytest.warns(GridTooCoarseWarning):
        solve_alpha_order_quadrature(1.0, g, 0.5, tol=1e-4)
    with pytest.raises(ValueError):
        solve_alpha_order_quadrature(1.0, g, 0.5, method="simpson")
