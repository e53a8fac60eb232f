"""Randomised properties, 200 instances each."""

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from fdesolve.operators import OperatorPoly, char_roots, eval_poly
from fdesolve.solver import check_residual, complementary, particular
from fdesolve.terms import FracTerm, TermSum, d_alpha, integrate_alpha, to_real

N = 200
PROFILE = settings(max_examples=N, deadline=None, derandomize=True,
                   suppress_health_check=[HealthCheck.too_slow])

ALPHAS = st.sampled_from([0.2, 1 / 3, 0.5, 0.6, 0.75, 0.9, 1.0])
GRID = [x / 4 for x in range(-12, 13)]
COEFF = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False).filter(
    lambda z: abs(z) > 1e-3)


@st.composite
def rates(draw):
    z = complex(draw(st.sampled_from(GRID)), draw(st.sampled_from(GRID)))
    return z if abs(z) <= 3 else z / abs(z) * 3


@st.composite
def operators(draw, real=False):
    """Operators of degree <= 4 built from roots in |m| <= 3 with multiplicities."""
    alpha = draw(ALPHAS)
    degree = draw(st.integers(1, 4))
    roots = []
    while len(roots) < degree:
        m = draw(rates())
        if any(abs(m - r) < 0.2 and m != r for r in roots):
            continue
        if real and m.imag != 0:
            if degree - len(roots) < 2:
                m = complex(m.real, 0)
            else:
                roots += [m, m.conjugate()]
                continue
        roots.append(m)
    lead = draw(st.sampled_from([1.0, 2.0, 0.5, -1.5]))
    return OperatorPoly.from_roots(alpha, roots, lead)


@st.composite
def sums(draw, alpha, real_rates=False, max_k=3):
    terms = []
    for _ in range(draw(st.integers(1, 3))):
        a = draw(rates())
        if real_rates:
            a = complex(a.real, 0)
        terms.append(FracTerm(draw(COEFF), draw(st.integers(0, max_k)), a))
    return TermSum(alpha, tuple(terms))


@PROFILE
@given(operators())
def test_annihilation(op):
    basis = complementary(op)
    assert len(basis) == op.degree
    for b in basis:
        err, ok = check_residual(op, b, tol=1e-12)
        assert ok, err


@PROFILE
@given(operators())
def test_root_reconstruction(op):
    expand = char_roots(op).expand()
    target = [c / op.coeffs[-1] for c in op.coeffs]
    assert max(abs(x - y) for x, y in zip(expand, target)) <= 1e-8


@PROFILE
@given(st.data())
def test_residual_exactness(data):
    op = data.draw(operators())
    g = data.draw(sums(op.alpha))
    yp = particular(op, g)
    err, ok = check_residual(op, yp, g, tol=1e-12)
    assert ok, err


@PROFILE
@given(st.data())
def test_pi_linearity(data):
    op = data.draw(operators())
    g1 = data.draw(sums(op.alpha))
    g2 = data.draw(sums(op.alpha))
    lhs = particular(op, g1 + g2)
    rhs = particular(op, g1) + particular(op, g2)
    assert lhs.isclose(rhs, 1e-12, scale=max(1.0, lhs.scale(), rhs.scale()))


@PROFILE
@given(st.data())
def test_round_trip(data):
    s = data.draw(sums(data.draw(ALPHAS)))
    back = d_alpha(integrate_alpha(s))
    scale = max(1.0, max(abs(t.coeff) * max(1.0, abs(t.a)) for t in s.terms))
    assert back.isclose(s, 1e-12, scale=scale)


@PROFILE
@given(st.data())
def test_case_agreement(data):
    op = data.draw(operators())
    c = data.draw(rates())
    value = eval_poly(op, c)
    if abs(value) < 1e-6:
        return
    yp = particular(op, TermSum.ml(op.alpha, c))
    assert len(yp) == 1
    assert abs(yp.terms[0].coeff - 1 / value) <= 1e-12 * abs(1 / value)


@PROFILE
@given(st.data())
def test_reality(data):
    op = data.draw(operators(real=True))
    g = TermSum.zero(op.alpha)
    for _ in range(data.draw(st.integers(1, 3))):
        b = data.draw(st.sampled_from([x for x in GRID if x]))
        kind = data.draw(st.sampled_from(["cos", "sin", "ml", "power"]))
        coeff = data.draw(st.floats(-3, 3).filter(lambda x: abs(x) > 1e-3))
        if kind == "cos":
            g = g + TermSum.cos(op.alpha, b, coeff)
        elif kind == "sin":
            g = g + TermSum.sin(op.alpha, b, coeff)
        elif kind == "ml":
            g = g + TermSum.ml(op.alpha, b, coeff)
        else:
            g = g + TermSum.power(op.alpha, data.draw(st.integers(0, 3)), coeff)
    to_real(particular(op, g))


@PROFILE
@given(st.data())
def test_linearity_of_d_alpha(data):
    alpha = data.draw(ALPHAS)
    s = data.draw(sums(alpha))
    u = data.draw(sums(alpha))
    x = data.draw(COEFF)
    y = data.draw(COEFF)
    lhs = d_alpha(s * x + u * y)
    rhs = d_alpha(s) * x + d_alpha(u) * y
    assert lhs.isclose(rhs, 1e-13, scale=max(1.0, lhs.scale(), rhs.scale()))
