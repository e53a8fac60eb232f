"""Numeric fractional calculus used to check the symbolic results.

The derivative is a Grünwald-Letnikov sum applied to ``f - f(0)``, which is
the Jumarie derivative for 0 < alpha < 1.  The fractional integral uses
product integration: the data are interpolated linearly between samples and
the kernel (t - s)^(alpha - 1) is integrated exactly on each cell.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, StepUnderflowError, ValidationError
from .special import gamma

# tiny offset used to read off lim_{t->0} of a numeric derivative: tau^alpha
_TAU_ALPHA = 1e-8


@dataclass(frozen=True)
class SampledFunction:
    """Samples ``values[i] = f(i * h)`` on a uniform grid starting at 0."""

    h: float
    values: np.ndarray

    def __post_init__(self):
        h = float(self.h)
        if not h > 0:
            raise ValidationError("step h must be positive")
        values = np.asarray(self.values)
        if values.dtype.kind not in "fc":
            values = values.astype(float)
        if values.ndim != 1 or values.size < 2:
            raise ValidationError("need a one-dimensional array of at least 2 samples")
        if not np.all(np.isfinite(values)):
            raise ValidationError("samples must be finite")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, f, h, t_max):
        """Sample a vectorised callable on [0, t_max] with step close to ``h``."""
        n = max(1, int(round(t_max / h)))
        t = np.linspace(0.0, t_max, n + 1)
        return cls(t_max / n, np.asarray(f(t)))

    @property
    def t(self):
        return self.h * np.arange(self.values.size)

    def __len__(self):
        return self.values.size

    def to_csv(self, path=None):
        """CSV text with header ``t,y`` (``t,y_re,y_im`` for complex samples)."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if np.iscomplexobj(self.values):
            w.writerow(["t", "y_re", "y_im"])
            for t, v in zip(self.t, self.values):
                w.writerow([format(t, ".17g"), format(v.real, ".17g"), format(v.imag, ".17g")])
        else:
            w.writerow(["t", "y"])
            for t, v in zip(self.t, self.values):
                w.writerow([format(t, ".17g"), format(v, ".17g")])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, source):
        """Parse CSV text or a file path written by :meth:`to_csv`."""
        if "\n" not in str(source):
            with open(source, encoding="utf-8") as fh:
                source = fh.read()
        rows = list(csv.reader(io.StringIO(source)))
        if not rows:
            raise ValidationError("empty CSV")
        header = [c.strip() for c in rows[0]]
        body = [r for r in rows[1:] if r]
        try:
            data = np.array([[float(x) for x in r] for r in body])
        except ValueError as exc:
            raise ValidationError(f"bad number in CSV: {exc}") from None
        if header == ["t", "y"] and data.shape[1:] == (2,):
            values = data[:, 1]
        elif header == ["t", "y_re", "y_im"] and data.shape[1:] == (3,):
            values = data[:, 1] + 1j * data[:, 2]
        else:
            raise ValidationError(f"unexpected CSV header {header}")
        t = data[:, 0]
        if t.size < 2 or t[0] != 0.0:
            raise ValidationError("grid must start at t = 0 and have at least 2 points")
        h = (t[-1] - t[0]) / (t.size - 1)
        if np.max(np.abs(np.diff(t) - h)) > 1e-9 * max(1.0, t[-1]):
            raise ValidationError("grid is not uniform")
        return cls(h, values)


@dataclass(frozen=True)
class OracleConfig:
    """Step control for the numeric oracle.

    ``h`` is the base step of the Grünwald-Letnikov sum; with ``richardson``
    the result is extrapolated from steps h and h/2.  Sums never use fewer
    than ``n_min`` or more than ``max_terms`` points.
    """

    h: float = 1e-4
    richardson: bool = True
    quad_tol: float = 1e-2
    n_min: int = 64
    max_terms: int = 4_000_000

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("h must be positive")
        if not self.quad_tol > 0:
            raise ValueError("quad_tol must be positive")
        if self.n_min < 2 or self.max_terms < self.n_min:
            raise ValueError("need 2 <= n_min <= max_terms")


DEFAULT_ORACLE = OracleConfig()


# --- Grünwald-Letnikov ----------------------------------------------------

def gl_weights(alpha, n):
    """(-1)^r binom(alpha, r) for r = 0..n by the ratio recurrence."""
    r = np.arange(1, n + 1, dtype=float)
    w = np.empty(n + 1)
    w[0] = 1.0
    w[1:] = np.cumprod(1.0 - (alpha + 1.0) / r)
    return w


def _conv_head(w, x):
    """First len(x) entries of the full convolution, via FFT."""
    n = x.size
    size = 1 << (2 * n - 1).bit_length()
    fw = np.fft.fft(w[:n], size)
    fx = np.fft.fft(x, size)
    out = np.fft.ifft(fw * fx)[:n]
    return out if np.iscomplexobj(x) else out.real


def _call(f, t):
    t = np.asarray(t, dtype=float)
    try:
        v = np.asarray(f(t))
        if v.shape == t.shape:
            return v
    except (TypeError, ValueError):
        pass
    return np.array([f(float(x)) for x in t])


def _steps(t, h, cfg):
    n = max(cfg.n_min, int(round(t / h)))
    if n > cfg.max_terms:
        raise StepUnderflowError(f"t/h = {t / h:.3g} exceeds the term cap {cfg.max_terms}")
    return n


def _check_alpha(alpha, allow_one=False):
    alpha = float(alpha)
    ok = 0.0 < alpha <= 1.0 if allow_one else 0.0 < alpha < 1.0
    if not ok:
        raise DomainError(f"alpha out of range: {alpha!r}")
    return alpha


def _nested_last(f, alpha, level, t, n, w, samples=None):
    """D^{level*alpha} f at t, computed on n uniform steps of [0, t].

    The sequential derivative needs the value at 0 of each intermediate
    derivative; it is read off from the same computation on a tiny interval
    [0, tau], which has the same relative accuracy for power-law data.
    ``samples`` may supply f on the grid already.
    """
    h = t / n
    cur = _call(f, np.linspace(0.0, t, n + 1)) if samples is None else samples
    scale = h ** -alpha
    for i in range(1, level + 1):
        base = cur - cur[0]
        if i == level:
            return scale * np.dot(w, base[::-1])
        nxt = scale * _conv_head(w, base)
        tau = t * _TAU_ALPHA ** (1.0 / alpha)
        nxt[0] = _nested_last(f, alpha, i, tau, n, w)
        cur = nxt
    return cur[-1]


def _gl_pair(f, alpha, t, cfg, level):
    n = _steps(t, cfg.h, cfg)
    fine = _call(f, np.linspace(0.0, t, 2 * n + 1))
    w2 = gl_weights(alpha, 2 * n)
    d1 = _nested_last(f, alpha, level, t, n, w2[: n + 1], fine[::2])
    d2 = _nested_last(f, alpha, level, t, 2 * n, w2, fine)
    err = abs(d2 - d1)
    value = 2 * d2 - d1 if cfg.richardson else d2
    return value, err


def gl_jumarie_derivative(f, alpha, t, cfg=None):
    """Numeric D^alpha f(t) = GL derivative of f - f(0).

    ``f`` is a callable, preferably vectorised over numpy arrays.  Returns
    ``(value, error_estimate)`` where the estimate is the difference between
    the results at steps h and h/2.
    """
    cfg = cfg or DEFAULT_ORACLE
    alpha = _check_alpha(alpha)
    t = float(t)
    if not t > 0:
        raise DomainError("t must be positive")
    return _gl_pair(f, alpha, t, cfg, 1)


def gl_sequential_derivative(f, alpha, level, t, cfg=None):
    """Numeric (D^alpha)^level f at t; returns ``(value, error_estimate)``."""
    cfg = cfg or DEFAULT_ORACLE
    alpha = _check_alpha(alpha)
    if int(level) != level or level < 0:
        raise ValueError("level must be a non-negative integer")
    t = float(t)
    if not t > 0:
        raise DomainError("t must be positive")
    if level == 0:
        return complex(_call(f, np.array([t]))[0]), 0.0
    return _gl_pair(f, alpha, t, cfg, int(level))


def gl_apply(op, f, t, cfg=None):
    """Numeric sum_j c_j (D^alpha)^j f at t; returns ``(value, error_estimate)``."""
    total = 0j
    err = 0.0
    for j, c in enumerate(op.coeffs):
        if c == 0:
            continue
        v, e = gl_sequential_derivative(f, op.alpha, j, t, cfg)
        total += c * v
        err += abs(c) * e
    return total, err


# --- product integration ----------------------------------------------------

def pi_weights(alpha, n):
    """Convolution weights b_0..b_{n-1} and endpoint weights a0_0..a0_{n-1}."""
    p = alpha + 1.0
    m = np.arange(n, dtype=float)
    b = np.empty(n)
    b[0] = 1.0
    mm = m[1:]
    # (m+1)^p - 2 m^p + (m-1)^p without cancellation
    with np.errstate(divide="ignore"):  # log1p(-1) = -inf at m = 1 is intended
        b[1:] = mm ** p * (np.expm1(p * np.log1p(1.0 / mm)) + np.expm1(p * np.log1p(-1.0 / mm)))
    a0 = np.zeros(n)
    a0[1:] = (mm - 1.0) ** p - (mm - 1.0 - alpha) * mm ** alpha
    return b, a0


def frac_integral(f, alpha):
    """Riemann-Liouville integral of order alpha of sampled data.

    Returns a :class:`SampledFunction` on the same grid.  The scheme is exact
    for piecewise-linear data and first-order accurate at worst.
    """
    alpha = _check_alpha(alpha, allow_one=True)
    n = len(f)
    b, a0 = pi_weights(alpha, n)
    scale = f.h ** alpha / gamma(alpha + 2.0)
    vals = f.values
    if np.iscomplexobj(vals):
        out = kernels.pi_convolve(vals.real, b, a0) + 1j * kernels.pi_convolve(vals.imag, b, a0)
    else:
        out = kernels.pi_convolve(vals, b, a0)
    return SampledFunction(f.h, scale * np.asarray(out))


# --- residuals -----------------------------------------------------------

def residual(problem, solution, grid):
    """Largest |f(D^alpha) s - target| over the grid, for every solution piece.

    The target is zero for complementary basis elements and the forcing for
    the particular integral.  Evaluation is symbolic, so this measures
    rounding only.
    """
    from .operators import apply
    from .terms import evaluate_array

    grid = np.asarray(list(grid), dtype=float)
    worst = 0.0
    pieces = [(b, None) for b in solution.complementary]
    pieces.append((solution.particular, problem.forcing))
    for s, target in pieces:
        r = apply(problem.op, s)
        if target is not None:
            r = r - target
        if r:
            worst = max(worst, float(np.max(np.abs(evaluate_array(r, grid)))))
    return worst


def numeric_residual(op, y, forcing, ts, cfg=None):
    """Largest |GL f(D^alpha) y - forcing| over ``ts`` with y, forcing TermSums.

    This is independent of the symbolic calculus: only evaluation of y and of
    the forcing are shared.
    """
    from .terms import evaluate_array

    worst = 0.0
    for t in ts:
        v, _ = gl_apply(op, lambda x: evaluate_array(y, x), t, cfg)
        g = evaluate_array(forcing, np.array([t]))[0]
        worst = max(worst, abs(v - g))
    return worst
