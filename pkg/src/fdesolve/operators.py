"""The operator f(D^alpha) = sum_j c_j D^{j alpha} as a polynomial in D^alpha.

Roots of the characteristic polynomial are found with the Aberth-Ehrlich
simultaneous iteration and then grouped into clusters to decide
multiplicities.  Each cluster centre is polished by Newton's method on the
derivative of matching order, where the root is simple.
"""

import cmath
import math
import random
from dataclasses import dataclass

from .errors import AlphaMismatchError, ConvergenceError, NotARootError, ValidationError
from .terms import TOL_A, TermSum, d_alpha

_U = 2.0 ** -53
MAX_ITER = 500
CLUSTER_TOL = 1e-6  # relative floor of the clustering radius
CLUSTER_CAP = 0.05  # relative ceiling of the rounding-based widening
DEFLATE_TOL = 1e-9


def _as_complex(x):
    z = complex(x)
    if not (cmath.isfinite(z)):
        raise ValidationError(f"operator coefficient {x!r} is not finite")
    return z


@dataclass(frozen=True)
class OperatorPoly:
    """``coeffs[j]`` multiplies D^{j alpha}.

    Degree-zero operators (a nonzero constant) are allowed; they arise as the
    cofactor after deflating every root.
    """

    alpha: float
    coeffs: tuple

    def __post_init__(self):
        alpha = float(self.alpha)
        if not 0.0 < alpha <= 1.0:
            raise ValidationError(f"alpha must lie in (0, 1], got {alpha!r}")
        coeffs = tuple(_as_complex(c) for c in self.coeffs)
        if not coeffs:
            raise ValidationError("operator needs at least one coefficient")
        if coeffs[-1] == 0:
            raise ValidationError("leading operator coefficient must be nonzero")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_roots(cls, alpha, roots, lead=1.0):
        """``lead * prod (D - r)`` over ``roots`` (repeat a root for multiplicity)."""
        coeffs = [complex(lead)]
        for r in roots:
            coeffs = poly_mul(coeffs, [-complex(r), 1.0])
        return cls(alpha, tuple(coeffs))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def norm(self):
        return max(abs(c) for c in self.coeffs)

    @property
    def is_real(self):
        return all(c.imag == 0 for c in self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, OperatorPoly):
            return NotImplemented
        if other.alpha != self.alpha:
            raise AlphaMismatchError(f"alpha {self.alpha} vs {other.alpha}")
        return OperatorPoly(self.alpha, tuple(poly_mul(self.coeffs, other.coeffs)))

    def __call__(self, s):
        return apply(self, s)

    def to_json(self):
        return [c.real if c.imag == 0 else {"re": c.real, "im": c.imag} for c in self.coeffs]

    def __str__(self):
        parts = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            num = format(c.real, ".12g") if c.imag == 0 else f"({c.real:.12g}{c.imag:+.12g}i)"
            op = "" if j == 0 else ("D^α" if j == 1 else f"D^({j}α)")
            parts.append(num if not op else f"{num}·{op}")
        return " + ".join(reversed(parts)) or "0"


def poly_mul(p, q):
    out = [0j] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _horner(coeffs, m):
    v = 0j
    for c in reversed(coeffs):
        v = v * m + c
    return v


def _horner2(coeffs, m):
    """p(m) and p'(m)."""
    p = 0j
    dp = 0j
    for c in reversed(coeffs):
        dp = dp * m + p
        p = p * m + c
    return p, dp


def _abs_bound(coeffs, m):
    """sum |c_j| |m|^j, the rounding scale of evaluating p at m."""
    am = abs(m)
    v = 0.0
    for c in reversed(coeffs):
        v = v * am + abs(c)
    return v


def _taylor_coeffs(coeffs, m, order):
    """p^{(j)}(m) / j! for j = 0..order (repeated synthetic division)."""
    work = list(coeffs)
    out = []
    for _ in range(order + 1):
        if not work:
            out.append(0j)
            continue
        q = [0j] * (len(work) - 1)
        acc = work[-1]
        for i in range(len(work) - 2, -1, -1):
            q[i] = acc
            acc = work[i] + m * acc
        out.append(acc)
        work = q
    return out


def _derivative(coeffs):
    return [j * coeffs[j] for j in range(1, len(coeffs))]


def eval_poly(op, m):
    """Characteristic polynomial sum c_j m^j at ``m`` (Horner)."""
    return _horner(op.coeffs, complex(m))


def apply(op, s):
    """sum_j c_j (D^alpha)^j s."""
    if not isinstance(s, TermSum):
        raise TypeError("apply expects a TermSum")
    if s.alpha != op.alpha:
        raise AlphaMismatchError(f"operator alpha {op.alpha} vs term alpha {s.alpha}")
    out = TermSum.zero(s.alpha)
    cur = s
    for j, c in enumerate(op.coeffs):
        if j:
            cur = d_alpha(cur)
        if c != 0:
            out = out + cur * c
    return out


def shifted(op, c):
    """Coefficients of f(D^alpha + c) by a Taylor shift."""
    return OperatorPoly(op.alpha, tuple(_taylor_coeffs(op.coeffs, complex(c), op.degree)))


def deflate(op, c, k=1):
    """Divide out (D^alpha - c)^k by synthetic division.

    Each division must leave a remainder no larger than 1e-9 times the
    largest coefficient, otherwise :class:`NotARootError` is raised.
    """
    c = complex(c)
    if int(k) != k or k < 0:
        raise ValueError("k must be a non-negative integer")
    if k > op.degree:
        raise NotARootError(f"cannot remove {k} factors from a degree-{op.degree} operator")
    coeffs = list(op.coeffs)
    scale = op.norm
    for _ in range(int(k)):
        q = [0j] * (len(coeffs) - 1)
        acc = coeffs[-1]
        for i in range(len(coeffs) - 2, -1, -1):
            q[i] = acc
            acc = coeffs[i] + c * acc
        if abs(acc) > DEFLATE_TOL * scale:
            raise NotARootError(f"{c} is not a root: remainder {abs(acc):.3g}")
        coeffs = q
    return OperatorPoly(op.alpha, tuple(coeffs))


# --- roots ------------------------------------------------------------------

@dataclass(frozen=True)
class RootSet:
    """Distinct characteristic roots with multiplicities, as (root, mult) pairs."""

    roots: tuple

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    @property
    def degree(self):
        return sum(r for _, r in self.roots)

    def multiplicity(self, c, tol=TOL_A):
        """Multiplicity of ``c`` (0 if no root lies within ``tol * max(1, |c|)``)."""
        c = complex(c)
        best, mult = None, 0
        for m, r in self.roots:
            d = abs(m - c)
            if d <= tol * max(1.0, abs(c)) and (best is None or d < best):
                best, mult = d, r
        return mult

    def expand(self):
        """Monic polynomial coefficients prod (m - root)^mult."""
        coeffs = [1 + 0j]
        for m, r in self.roots:
            for _ in range(r):
                coeffs = poly_mul(coeffs, [-m, 1.0])
        return coeffs


def _aberth(coeffs, rng):
    n = len(coeffs) - 1
    lead = coeffs[-1]
    a = [c / lead for c in coeffs]
    centre = -a[n - 1] / n
    radius = 2.0 * max(abs(a[j]) ** (1.0 / (n - j)) for j in range(n))
    radius = max(radius, 1e-3)
    for attempt in range(4):
        phase = 0.4 + rng.random() * (0.0 if attempt == 0 else 2 * math.pi)
        scale = 1.0 if attempt == 0 else 0.5 + rng.random()
        z = [centre + scale * radius * cmath.exp(1j * (2 * math.pi * k / n + phase))
             for k in range(n)]
        done = [False] * n
        for _ in range(MAX_ITER):
            for k in range(n):
                p, dp = _horner2(a, z[k])
                if abs(p) <= 8 * n * _U * _abs_bound(a, z[k]):
                    done[k] = True
                    continue
                done[k] = False
                if dp == 0:
                    z[k] += radius * 1e-3 * cmath.exp(2j * math.pi * rng.random())
                    continue
                ratio = p / dp
                acc = 0j
                for j in range(n):
                    if j != k:
                        d = z[k] - z[j]
                        acc += 1.0 / d if d != 0 else 0j
                z[k] -= ratio / (1.0 - ratio * acc)
            if all(done):
                return z
    raise ConvergenceError(f"root finder did not converge after {MAX_ITER} iterations")


def _cluster_radius(coeffs, mu, r):
    """Expected spread of an r-fold root at ``mu`` under rounding of the coefficients.

    Returns 0 when the Taylor expansion at ``mu`` does not look like that of
    an r-fold root, e.g. a conjugate pair whose midpoint is itself a root.
    """
    n = len(coeffs) - 1
    taylor = _taylor_coeffs(coeffs, mu, r)
    lead = abs(taylor[r])
    noise = 8 * n * _U * _abs_bound(coeffs, mu)
    if lead == 0:
        return 0.0
    rho = (noise / lead) ** (1.0 / r)
    for j in range(r):
        if abs(taylor[j]) > 100.0 * lead * rho ** (r - j):
            return 0.0
    return rho


def _cluster(coeffs, zs):
    clusters = [[z] for z in zs]
    merged = True
    while merged and len(clusters) > 1:
        merged = False
        means = [sum(c) / len(c) for c in clusters]
        pairs = sorted(
            ((abs(means[i] - means[j]), i, j)
             for i in range(len(clusters)) for j in range(i + 1, len(clusters))),
        )
        for _, i, j in pairs:
            members = clusters[i] + clusters[j]
            r = len(members)
            mu = sum(members) / r
            size = max(1.0, abs(mu))
            spread = min(10.0 * _cluster_radius(coeffs, mu, r), CLUSTER_CAP * size)
            tol = max(CLUSTER_TOL * size, spread)
            if max(abs(z - mu) for z in members) <= tol:
                clusters[i] = members
                del clusters[j]
                merged = True
                break
    return [(sum(c) / len(c), len(c)) for c in clusters]


def _polish(coeffs, mu, r):
    q = coeffs
    for _ in range(r - 1):
        q = _derivative(q)
    z = mu
    fz = abs(_horner(q, z))
    for _ in range(30):
        p, dp = _horner2(q, z)
        if dp == 0:
            break
        nz = z - p / dp
        fn = abs(_horner(q, nz))
        if fn >= fz and abs(nz - z) > 4 * _U * abs(z):
            break
        step = abs(nz - z)
        z, fz = nz, fn
        if step <= 2 * _U * max(1.0, abs(z)):
            break
    return z


def char_roots(op, seed=0):
    """All characteristic roots with multiplicities.

    Roots whose spread is consistent with a repeated root under coefficient
    rounding (or closer than 1e-6 relative) are merged.  For real operators
    the result is made exactly conjugate-closed.
    """
    n = op.degree
    if n < 1:
        raise ValidationError("characteristic roots need degree >= 1")
    coeffs = list(op.coeffs)
    if n == 1:
        return RootSet(((-coeffs[0] / coeffs[1], 1),))
    zs = _aberth(coeffs, random.Random(seed))
    clusters = [(_polish(coeffs, mu, r), r) for mu, r in _cluster(coeffs, zs)]
    if op.is_real:
        clusters = _symmetrize(clusters)
    clusters.sort(key=lambda x: (x[0].real, x[0].imag))
    return RootSet(tuple(clusters))


def _symmetrize(clusters):
    out = []
    pending = []
    for m, r in clusters:
        if abs(m.imag) <= CLUSTER_TOL * max(1.0, abs(m)):
            out.append((complex(m.real, 0.0), r))
        else:
            pending.append((m, r))
    upper = [x for x in pending if x[0].imag > 0]
    lower = [x for x in pending if x[0].imag < 0]
    for m, r in upper:
        best = min(
            (x for x in lower if x[1] == r),
            key=lambda x: abs(x[0] - m.conjugate()),
            default=None,
        )
        if best is None:
            out.append((m, r))
            continue
        lower.remove(best)
        avg = (m + best[0].conjugate()) / 2
        out.extend([(avg, r), (avg.conjugate(), r)])
    out.extend(lower)
    return out
