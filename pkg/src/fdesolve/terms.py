"""Closed-form algebra over atoms ``coeff * t**(k*alpha) * E_alpha(a * t**alpha)``.

A :class:`TermSum` is a normalised linear combination of such atoms sharing
one order ``alpha``.  Everything is carried with complex coefficients and
complex rates; fractional sine and cosine only appear when a sum is rendered
in real form by :func:`to_real`.

Symbolic Jumarie differentiation uses the eigen-relation of E_alpha together
with the product rule, applied formally::

    D[t^{k a} E(c t^a)] = c t^{k a} E(c t^a)
                          + Gamma(1+k a)/Gamma(1+(k-1) a) t^{(k-1) a} E(c t^a)
"""

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import AlphaMismatchError, DomainError, NotRealError
from .special import gamma_ratio, mittag_leffler, mittag_leffler_array

TOL_A = 1e-9   # absolute distance below which two rates are the same rate
TOL_C = 1e-12  # coefficients below this magnitude are dropped

ALPHA_SYMBOL = "α"


@dataclass(frozen=True)
class FracTerm:
    coeff: complex
    k: int = 0
    a: complex = 0j

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 0:
            raise ValueError(f"power index k must be a non-negative integer, got {self.k!r}")
        coeff, a = complex(self.coeff), complex(self.a)
        if not (cmath.isfinite(coeff) and cmath.isfinite(a)):
            raise ValueError("coefficient and rate must be finite")
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "a", a)


def _normalize(terms, tol_a=TOL_A, tol_c=TOL_C):
    groups = []  # [k, a, coeff]
    for t in terms:
        a = 0j if abs(t.a) <= tol_a else t.a
        for g in groups:
            if g[0] == t.k and abs(g[1] - a) <= tol_a:
                g[2] += t.coeff
                break
        else:
            groups.append([t.k, a, t.coeff])
    out = [FracTerm(c, k, a) for k, a, c in groups if abs(c) >= tol_c]
    out.sort(key=lambda t: (t.k, t.a.real, t.a.imag))
    return tuple(out)


@dataclass(frozen=True)
class TermSum:
    """Normalised sum of :class:`FracTerm` atoms of common order ``alpha``."""

    alpha: float
    terms: tuple = field(default=())

    def __post_init__(self):
        alpha = float(self.alpha)
        if not 0.0 < alpha <= 1.0:
            raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "terms", _normalize(self.terms))

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, alpha):
        return cls(alpha, ())

    @classmethod
    def atom(cls, alpha, coeff=1.0, k=0, a=0j):
        return cls(alpha, (FracTerm(coeff, k, a),))

    @classmethod
    def ml(cls, alpha, a, coeff=1.0):
        """``coeff * E_alpha(a t^alpha)``."""
        return cls.atom(alpha, coeff, 0, a)

    @classmethod
    def power(cls, alpha, k, coeff=1.0):
        """``coeff * t^(k alpha)``."""
        return cls.atom(alpha, coeff, k, 0j)

    @classmethod
    def cos(cls, alpha, b, coeff=1.0):
        """``coeff * cos_alpha(b t^alpha)`` as a conjugate pair of E_alpha atoms."""
        return cls(alpha, (FracTerm(coeff / 2, 0, 1j * b), FracTerm(coeff / 2, 0, -1j * b)))

    @classmethod
    def sin(cls, alpha, b, coeff=1.0):
        """``coeff * sin_alpha(b t^alpha)`` as a conjugate pair of E_alpha atoms."""
        c = coeff / 2j
        return cls(alpha, (FracTerm(c, 0, 1j * b), FracTerm(-c, 0, -1j * b)))

    # arithmetic ---------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, TermSum):
            return NotImplemented
        if other.alpha != self.alpha:
            raise AlphaMismatchError(f"alpha {self.alpha} vs {other.alpha}")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return TermSum(self.alpha, self.terms + other.terms)

    def __neg__(self):
        return TermSum(self.alpha, tuple(FracTerm(-t.coeff, t.k, t.a) for t in self.terms))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, x):
        if isinstance(x, TermSum):
            return NotImplemented
        x = complex(x)
        return TermSum(self.alpha, tuple(FracTerm(t.coeff * x, t.k, t.a) for t in self.terms))

    __rmul__ = __mul__

    def __truediv__(self, x):
        return self * (1.0 / complex(x))

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __bool__(self):
        return bool(self.terms)

    @property
    def rates(self):
        """Distinct rates present, in term order."""
        seen = []
        for t in self.terms:
            if not any(abs(t.a - r) <= TOL_A for r in seen):
                seen.append(t.a)
        return seen

    def scale(self):
        """Largest coefficient magnitude (0 for the empty sum)."""
        return max((abs(t.coeff) for t in self.terms), default=0.0)

    def isclose(self, other, tol=TOL_C, scale=None):
        """Coefficient-wise comparison after normalising the difference.

        The tolerance is relative to ``scale`` (default: the larger
        coefficient magnitude of the two sums, at least 1).
        """
        diff = self - other
        if scale is None:
            scale = max(1.0, self.scale(), other.scale())
        return all(abs(t.coeff) <= tol * scale for t in diff.terms)

    def times_ml(self, c):
        """Multiply a polynomial in t^alpha by E_alpha(c t^alpha).

        Only defined when every term has rate zero; products of two
        Mittag-Leffler atoms are outside the algebra.
        """
        if any(t.a != 0 for t in self.terms):
            raise ValueError("times_ml needs a sum of pure powers of t^alpha")
        return TermSum(self.alpha, tuple(FracTerm(t.coeff, t.k, c) for t in self.terms))

    # serialisation ------------------------------------------------------

    def to_json(self):
        return {
            "alpha": self.alpha,
            "terms": [
                {"re": t.coeff.real, "im": t.coeff.imag, "k": t.k,
                 "a_re": t.a.real, "a_im": t.a.imag}
                for t in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data):
        terms = tuple(
            FracTerm(complex(d["re"], d.get("im", 0.0)), int(d["k"]),
                     complex(d.get("a_re", 0.0), d.get("a_im", 0.0)))
            for d in data["terms"]
        )
        return cls(float(data["alpha"]), terms)

    def __str__(self):
        return render_complex(self)


# --- symbolic calculus ------------------------------------------------

def _power_ratio(alpha, k):
    """Gamma(1 + k alpha) / Gamma(1 + (k-1) alpha): D^alpha t^{k alpha} coefficient."""
    return gamma_ratio(1.0 + k * alpha, 1.0 + (k - 1) * alpha)


def d_alpha(s):
    """Jumarie derivative of order alpha, applied term by term."""
    out = []
    for t in s.terms:
        if t.a != 0:
            out.append(FracTerm(t.coeff * t.a, t.k, t.a))
        if t.k >= 1:
            out.append(FracTerm(t.coeff * _power_ratio(s.alpha, t.k), t.k - 1, t.a))
    return TermSum(s.alpha, tuple(out))


def d_alpha_n(s, n):
    """``n``-fold application of :func:`d_alpha`."""
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    for _ in range(int(n)):
        s = d_alpha(s)
    return s


def integrate_alpha(s):
    """An antiderivative of order alpha, inverse to :func:`d_alpha`.

    Power terms follow the exact fractional integral of t^{k alpha}.  For a
    nonzero rate the constant of integration is chosen so that
    E_alpha(a t^alpha) maps to E_alpha(a t^alpha)/a; higher powers use the
    recurrence obtained by integrating the product rule.
    """
    alpha = s.alpha
    out = []
    for t in s.terms:
        if t.a == 0:
            ratio = gamma_ratio(1.0 + t.k * alpha, 1.0 + (t.k + 1) * alpha)
            out.append(FracTerm(t.coeff * ratio, t.k + 1, 0j))
            continue
        inv = 1.0 / t.a
        # I_0 = E/a ; I_k = (t^k E - r_k I_{k-1}) / a
        coeffs = [inv]
        for k in range(1, t.k + 1):
            r = _power_ratio(alpha, k)
            coeffs = [-r * inv * c for c in coeffs] + [inv]
        out.extend(FracTerm(t.coeff * c, j, t.a) for j, c in enumerate(coeffs))
    return TermSum(alpha, tuple(out))


# --- evaluation --------------------------------------------------------

def evaluate(s, t, cfg=None):
    """Value of the sum at a single time ``t >= 0`` (complex)."""
    t = float(t)
    if t < 0:
        raise DomainError("t must be non-negative")
    total = 0j
    ta = t ** s.alpha
    for term in s.terms:
        if term.k and t == 0.0:
            continue
        e = mittag_leffler(s.alpha, term.a * ta, cfg) if term.a != 0 else 1.0
        total += term.coeff * ta ** term.k * e
    return total


def evaluate_array(s, ts, cfg=None):
    """Vectorised evaluation on an array of non-negative times."""
    ts = np.asarray(ts, dtype=float)
    if np.any(ts < 0):
        raise DomainError("t must be non-negative")
    ta = ts ** s.alpha
    total = np.zeros(ts.shape, dtype=complex)
    cache = {}
    for term in s.terms:
        if term.a == 0:
            e = 1.0
        else:
            if term.a not in cache:
                cache[term.a] = mittag_leffler_array(s.alpha, term.a * ta, cfg)
            e = cache[term.a]
        total += term.coeff * ta ** term.k * e
    return total


# --- real rendering ----------------------------------------------------

@dataclass(frozen=True)
class RealAtom:
    """``coeff * t^{k alpha} * f`` with ``f`` one of

    * ``"exp"``: E_alpha(p t^alpha)
    * ``"cos"``: Re E_alpha((p + i q) t^alpha), which is cos_alpha(q t^alpha) when p = 0
    * ``"sin"``: Im E_alpha((p + i q) t^alpha), which is sin_alpha(q t^alpha) when p = 0
    """

    coeff: float
    k: int
    p: float
    q: float
    kind: str


@dataclass(frozen=True)
class RealRendering:
    alpha: float
    atoms: tuple

    def evaluate(self, t, cfg=None):
        ta = float(t) ** self.alpha
        total = 0.0
        for at in self.atoms:
            if at.k and t == 0:
                continue
            e = mittag_leffler(self.alpha, complex(at.p, at.q) * ta, cfg)
            f = {"exp": e.real, "cos": e.real, "sin": e.imag}[at.kind]
            total += at.coeff * ta ** at.k * f
        return total

    def __str__(self):
        return render_real(self)


def _real_tol(c):
    return max(TOL_C, 1e-10 * abs(c))


def to_real(s, sample_ts=(0.5, 1.0, 2.0), cfg=None):
    """Render a real-valued sum with fractional sine/cosine atoms.

    Conjugate rate pairs ``p +- i q`` with conjugate coefficients merge into a
    cosine and a sine atom; real rates pass through.  Raises
    :class:`NotRealError` when the sum is not real.
    """
    atoms = []
    used = set()
    terms = s.terms
    for i, t in enumerate(terms):
        if i in used:
            continue
        if abs(t.a.imag) <= TOL_A:
            if abs(t.coeff.imag) > _real_tol(t.coeff):
                raise NotRealError(f"complex coefficient {t.coeff} on a real rate")
            atoms.append(RealAtom(t.coeff.real, t.k, t.a.real, 0.0, "exp"))
            used.add(i)
            continue
        partner = None
        for j in range(i + 1, len(terms)):
            u = terms[j]
            if j not in used and u.k == t.k and abs(u.a - t.a.conjugate()) <= TOL_A:
                partner = j
                break
        if partner is None:
            raise NotRealError(f"rate {t.a} has no conjugate partner")
        u = terms[partner]
        if abs(u.coeff - t.coeff.conjugate()) > _real_tol(t.coeff):
            raise NotRealError(
                f"coefficients {t.coeff} and {u.coeff} of a conjugate pair are not conjugate")
        used.update((i, partner))
        # orient so that q > 0
        upper, lower = (t, u) if t.a.imag > 0 else (u, t)
        c = (upper.coeff + lower.coeff.conjugate()) / 2
        a = upper.a
        p, q = (a.real if abs(a.real) > TOL_A else 0.0), a.imag
        if abs(c.real) >= TOL_C:
            atoms.append(RealAtom(2 * c.real, t.k, p, q, "cos"))
        if abs(c.imag) >= TOL_C:
            atoms.append(RealAtom(-2 * c.imag, t.k, p, q, "sin"))
    for ts in sample_ts:
        try:
            v = evaluate(s, ts, cfg)
        except (ArithmeticError, ValueError):
            continue
        bound = TOL_C * max(1.0, sum(abs(t.coeff) for t in terms)) * max(1.0, abs(v))
        if abs(v.imag) > max(bound, 1e-9 * abs(v)):
            raise NotRealError(f"imaginary part {v.imag:.3g} at t={ts}")
    return RealRendering(s.alpha, tuple(atoms))


# --- text ------------------------------------------------------------------

def _num(x):
    return format(x, ".12g")


def _cnum(z):
    if z.imag == 0:
        return _num(z.real)
    if z.real == 0:
        return f"{_num(z.imag)}i"
    sign = "+" if z.imag >= 0 else "-"
    return f"({_num(z.real)}{sign}{_num(abs(z.imag))}i)"


def _power_text(k, sym):
    if k == 0:
        return ""
    return f"t^{sym}" if k == 1 else f"t^({k}{sym})"


def _join(parts):
    if not parts:
        return "0"
    text = parts[0]
    for p in parts[1:]:
        text += " - " + p[1:] if p.startswith("-") else " + " + p
    return text


def render_complex(s, sym=ALPHA_SYMBOL):
    parts = []
    for t in s.terms:
        factors = [_cnum(t.coeff)]
        if t.k:
            factors.append(_power_text(t.k, sym))
        if t.a != 0:
            factors.append(f"E_{sym}({_cnum(t.a)}·t^{sym})")
        parts.append("·".join(factors))
    return _join(parts)


def render_real(r, sym=ALPHA_SYMBOL):
    parts = []
    for at in r.atoms:
        factors = [_num(at.coeff)]
        if at.k:
            factors.append(_power_text(at.k, sym))
        if at.kind == "exp":
            if at.p != 0:
                factors.append(f"E_{sym}({_num(at.p)}·t^{sym})")
        elif at.p == 0:
            factors.append(f"{at.kind}_{sym}({_num(at.q)}·t^{sym})")
        else:
            part = "Re" if at.kind == "cos" else "Im"
            factors.append(f"{part} E_{sym}({_cnum(complex(at.p, at.q))}·t^{sym})")
        parts.append("·".join(factors))
    return _join(parts)
