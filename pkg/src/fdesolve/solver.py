"""General solution y = y_c + y_p of f(D^alpha) y = g.

The particular integral of each forcing atom ``C t^{m alpha} E_alpha(c t^alpha)``
comes from one rule.  Let k be the multiplicity of c as a characteristic
root.  Then f(D + c) = D^k psi(D) with psi(0) != 0, and

    y_p = C E_alpha(c t^alpha) * I^k [ psi(D)^{-1} t^{m alpha} ]

where psi^{-1} is the reciprocal power series truncated at order m (higher
powers of D annihilate t^{m alpha}) and I is the fractional antiderivative.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateOperatorError, ResidualError, ValidationError
from .operators import OperatorPoly, apply, char_roots, deflate, shifted
from .oracle import SampledFunction, frac_integral
from .special import gamma_ratio, mittag_leffler_array
from .terms import FracTerm, TermSum, integrate_alpha, render_complex, to_real

RESIDUAL_TOL = 1e-10  # relative to the size of the summands being cancelled


class GridTooCoarseWarning(UserWarning):
    """The quadrature self-convergence estimate exceeds the requested tolerance."""


@dataclass(frozen=True)
class Problem:
    """f(D^alpha) y = forcing, with a symbolic or a sampled forcing."""

    alpha: float
    op: OperatorPoly
    forcing: object

    def __post_init__(self):
        alpha = float(self.alpha)
        if not 0.0 < alpha <= 1.0:
            raise ValidationError(f"alpha must lie in (0, 1], got {alpha!r}")
        if self.op.alpha != alpha:
            raise ValidationError("operator alpha differs from problem alpha")
        if self.op.degree < 1:
            raise ValidationError("operator must have degree >= 1")
        if isinstance(self.forcing, TermSum):
            if self.forcing.alpha != alpha:
                raise ValidationError("forcing alpha differs from problem alpha")
        elif not isinstance(self.forcing, SampledFunction):
            raise ValidationError("forcing must be a TermSum or a SampledFunction")
        object.__setattr__(self, "alpha", alpha)

    @property
    def symbolic(self):
        return isinstance(self.forcing, TermSum)


@dataclass(frozen=True)
class Solution:
    """Basis of the homogeneous solutions (one per free constant) and a PI."""

    alpha: float
    complementary: tuple
    particular: TermSum

    def general(self, constants):
        """y_c + y_p for explicit values of the free constants."""
        if len(constants) != len(self.complementary):
            raise ValueError(f"need {len(self.complementary)} constants")
        y = self.particular
        for a, b in zip(constants, self.complementary):
            y = y + b * a
        return y

    def render(self):
        parts = []
        for i, b in enumerate(self.complementary, 1):
            parts.append(f"A_{i}·[{render_sum(b)}]")
        yp = render_sum(self.particular)
        if self.particular or not parts:
            parts.append(yp)
        return "y = " + " + ".join(parts)

    def to_json(self):
        return {
            "alpha": self.alpha,
            "complementary": [b.to_json() for b in self.complementary],
            "particular": self.particular.to_json(),
            "rendered": self.render(),
        }


def render_sum(s):
    """Real rendering when the sum is real, complex rendering otherwise."""
    try:
        return str(to_real(s))
    except (ValueError, ArithmeticError):
        return render_complex(s)


# --- complementary function -------------------------------------------------

def complementary(op, roots=None):
    """Basis t^{j alpha} E_alpha(m t^alpha), j < multiplicity, for each root m.

    For a real operator each conjugate pair of roots is replaced by the real
    and imaginary parts of its basis functions, which render as fractional
    cosine and sine.
    """
    roots = roots or char_roots(op)
    alpha = op.alpha
    basis = []
    for m, r in roots:
        if op.is_real and m.imag < 0:
            continue
        for j in range(r):
            atom = TermSum.atom(alpha, 1.0, j, m)
            if op.is_real and m.imag > 0:
                conj = TermSum.atom(alpha, 1.0, j, m.conjugate())
                basis.append((atom + conj) * 0.5)
                basis.append((atom - conj) * (-0.5j))
            else:
                basis.append(atom)
    return tuple(basis)


# --- particular integral ------------------------------------------------------

def reciprocal_series(p, order):
    """First ``order + 1`` coefficients of 1 / sum_i p_i x^i (needs p_0 != 0)."""
    p0 = p[0]
    q = [1.0 / p0]
    for j in range(1, order + 1):
        acc = sum(p[i] * q[j - i] for i in range(1, min(j, len(p) - 1) + 1))
        q.append(-acc / p0)
    return q


def particular_atom(op, C, m, c, roots=None):
    """Particular integral for the forcing atom C t^{m alpha} E_alpha(c t^alpha)."""
    alpha = op.alpha
    c = complex(c)
    if op.degree >= 1:
        roots = roots or char_roots(op)
        k = roots.multiplicity(c)
    else:
        k = 0
    phi = deflate(op, c, k)
    psi = shifted(phi, c).coeffs
    # psi(0) = phi(c); vanishing means the multiplicity was underestimated
    if abs(psi[0]) <= 1e-9 * phi.norm:
        raise DegenerateOperatorError(
            f"rate {c} is numerically a root of higher multiplicity than {k}")
    q = reciprocal_series(psi, m)
    terms = []
    for j, qj in enumerate(q):
        # D^j t^{m alpha}
        coeff = qj * gamma_ratio(1.0 + m * alpha, 1.0 + (m - j) * alpha)
        terms.append(FracTerm(coeff, m - j, 0j))
    y = TermSum(alpha, tuple(terms))
    for _ in range(k):
        y = integrate_alpha(y)
    return y.times_ml(c) * C


def particular(op, forcing, roots=None):
    """Sum of :func:`particular_atom` over the atoms of ``forcing``."""
    if forcing.alpha != op.alpha:
        raise ValidationError("forcing alpha differs from operator alpha")
    roots = roots or char_roots(op)
    y = TermSum.zero(op.alpha)
    for t in forcing.terms:
        y = y + particular_atom(op, t.coeff, t.k, t.a, roots)
    return y


# --- solve ------------------------------------------------------------------

def _apply_scale(op, s):
    """Largest coefficient among the summands c_j D^j s, the scale of rounding."""
    from .terms import d_alpha

    worst = 0.0
    cur = s
    for j, c in enumerate(op.coeffs):
        if j:
            cur = d_alpha(cur)
        worst = max(worst, abs(c) * cur.scale())
    return worst


def check_residual(op, s, target=None, tol=RESIDUAL_TOL):
    """Largest leftover coefficient of f(D) s - target relative to the summands."""
    r = apply(op, s)
    if target is not None:
        r = r - target
    scale = max(1.0, _apply_scale(op, s), target.scale() if target is not None else 0.0)
    worst = max((abs(t.coeff) for t in r.terms), default=0.0) / scale
    return worst, worst <= tol


def solve(problem, tol=RESIDUAL_TOL):
    """Complementary basis and particular integral, each checked symbolically."""
    if not problem.symbolic:
        raise ValidationError("solve needs a symbolic forcing; use the quadrature path")
    op = problem.op
    roots = char_roots(op)
    basis = complementary(op, roots)
    yp = particular(op, problem.forcing, roots)
    for b in basis:
        err, ok = check_residual(op, b, None, tol)
        if not ok:
            raise ResidualError(f"basis element {b} leaves relative residual {err:.3g}")
    err, ok = check_residual(op, yp, problem.forcing, tol)
    if not ok:
        raise ResidualError(f"particular integral leaves relative residual {err:.3g}")
    return Solution(problem.alpha, basis, yp)


# --- quadrature path ------------------------------------------------------------

def _quad_once(a, g, alpha, method):
    t = g.t
    ta = t ** alpha
    if method == "variation":
        weight = mittag_leffler_array(alpha, -a * ta)
        integral = frac_integral(SampledFunction(g.h, g.values * weight), alpha).values
        y = mittag_leffler_array(alpha, a * ta) * integral
    else:
        y = _volterra(a, g, alpha)
    if not np.iscomplexobj(g.values) and a.imag == 0:
        y = np.real(y)
    return y


def _volterra(a, g, alpha):
    """y = I^alpha[g + a y] with y(0) = 0, by implicit product integration."""
    from .oracle import pi_weights
    from .special import gamma

    n = len(g)
    b, a0 = pi_weights(alpha, n)
    w = g.h ** alpha / gamma(alpha + 2.0)
    y = np.zeros(n, dtype=complex)
    f = np.asarray(g.values, dtype=complex).copy()
    for i in range(1, n):
        hist = a0[i] * f[0] + np.dot(b[i - 1:0:-1], f[1:i])
        y[i] = w * (hist + b[0] * g.values[i]) / (1.0 - w * b[0] * a)
        f[i] = g.values[i] + a * y[i]
    return y


def solve_alpha_order_quadrature(a, g, alpha, tol=1e-2, method="variation"):
    """Particular solution of (D^alpha - a) y = g for sampled forcing.

    ``method="variation"`` forms E_alpha(a t^alpha) I^alpha[g E_alpha(-a t^alpha)]
    (the variation-of-parameters formula); ``method="volterra"`` solves the
    equivalent integral equation y = I^alpha[g + a y] directly.  Both return
    the solution with y(0) = 0.  A :class:`GridTooCoarseWarning` is issued
    when halving the resolution changes the result by more than ``tol``
    relative to its size.
    """
    if method not in ("variation", "volterra"):
        raise ValueError(f"unknown quadrature method {method!r}")
    a = complex(a)
    alpha = float(alpha)
    y = _quad_once(a, g, alpha, method)
    if len(g) >= 5:
        coarse = SampledFunction(2 * g.h, g.values[::2])
        yc = _quad_once(a, coarse, alpha, method)
        ref = y[::2][: len(yc)]
        est = np.max(np.abs(ref - yc)) / max(np.max(np.abs(ref)), np.finfo(float).tiny)
        if est > tol:
            warnings.warn(
                f"quadrature self-convergence estimate {est:.3g} exceeds {tol:.3g}",
                GridTooCoarseWarning, stacklevel=2)
    return SampledFunction(g.h, y)


__all__ = [
    "GridTooCoarseWarning", "Problem", "Solution", "complementary", "particular",
    "particular_atom", "reciprocal_series", "solve", "solve_alpha_order_quadrature",
    "check_residual", "render_sum",
]
