import random

import pytest

from fdesolve.errors import AlphaMismatchError, NotARootError, ValidationError
from fdesolve.operators import (
    OperatorPoly,
    RootSet,
    apply,
    char_roots,
    deflate,
    eval_poly,
    shifted,
)
from fdesolve.terms import FracTerm, TermSum


def _roots_dict(rs):
    return {(round(m.real, 9), round(m.imag, 9)): r for m, r in rs}


def test_operator_validation():
    with pytest.raises(ValidationError):
        OperatorPoly(0.5, (1.0, 0.0))
    with pytest.raises(ValidationError):
        OperatorPoly(1.5, (1.0, 1.0))
    with pytest.raises(ValidationError):
        OperatorPoly(0.5, ())
    with pytest.raises(ValidationError):
        OperatorPoly(0.5, (float("nan"), 1.0))


def test_apply_annihilates():
    op = OperatorPoly(0.5, (-1.5, 1.0))
    assert not apply(op, TermSum.ml(0.5, 1.5))
    op = OperatorPoly(1 / 3, (6.0, -5.0, 1.0))
    assert not apply(op, TermSum.ml(1 / 3, 2.0))
    assert not apply(op, TermSum.ml(1 / 3, 3.0))
    op = OperatorPoly(0.5, (4.0, 0.0, 1.0))
    assert not apply(op, TermSum.cos(0.5, 2.0, 7.0))


def test_apply_alpha_mismatch():
    with pytest.raises(AlphaMismatchError):
        apply(OperatorPoly(0.5, (1.0, 1.0)), TermSum.ml(0.4, 1.0))


def test_char_roots_examples():
    assert _roots_dict(char_roots(OperatorPoly(0.5, (6.0, -5.0, 1.0)))) == {(2.0, 0.0): 1, (3.0, 0.0): 1}
    w = 1.7
    assert _roots_dict(char_roots(OperatorPoly(0.5, (w * w, 0.0, 1.0)))) == {(0.0, w): 1, (0.0, -w): 1}
    rs = char_roots(OperatorPoly.from_roots(0.5, [1.0, 1.0, 1.0]))
    assert rs.roots == ((1.0 + 0j, 3),)


def test_char_roots_residual():
    op = OperatorPoly(0.5, (2.0, -1.0 + 3j, 0.5, 4.0, 1.0 - 1j))
    for m, r in char_roots(op):
        assert r == 1
        assert abs(eval_poly(op, m)) <= 1e-10 * op.norm * max(1.0, abs(m)) ** op.degree


def test_char_roots_conjugate_closed():
    op = OperatorPoly.from_roots(0.5, [-0.5 + 2j, -0.5 - 2j, 1.0, -2.0 + 1j, -2.0 - 1j])
    assert op.is_real
    roots = [m for m, _ in char_roots(op)]
    for m in roots:
        assert m.conjugate() in roots


def test_char_roots_degree_one():
    rs = char_roots(OperatorPoly(0.5, (3.0, 2.0)))
    assert rs.roots == ((-1.5 + 0j, 1),)


def test_rootset_helpers():
    rs = RootSet(((2 + 0j, 2), (-1j, 1)))
    assert rs.degree == 3
    assert rs.multiplicity(2.0) == 2
    assert rs.multiplicity(2.0 + 1e-12) == 2
    assert rs.multiplicity(-1j) == 1
    assert rs.multiplicity(5.0) == 0
    expect = OperatorPoly.from_roots(0.5, [2, 2, -1j]).coeffs
    assert all(abs(a - b) < 1e-15 for a, b in zip(rs.expand(), expect))


def test_deflate_examples():
    a, b = 1.5, -0.5
    op = OperatorPoly.from_roots(0.5, [a, b])
    assert deflate(op, a, 1).coeffs == (-b + 0j, 1 + 0j)
    assert deflate(OperatorPoly.from_roots(0.5, [a, a]), a, 2).coeffs == (1 + 0j,)
    cubic = OperatorPoly.from_roots(0.5, [a, a, b])
    expect = OperatorPoly.from_roots(0.5, [a, b]).coeffs
    assert all(abs(x - y) < 1e-14 for x, y in zip(deflate(cubic, a, 1).coeffs, expect))


def test_deflate_not_a_root():
    with pytest.raises(NotARootError):
        deflate(OperatorPoly.from_roots(0.5, [1.0, 2.0]), 1.5, 1)
    with pytest.raises(NotARootError):
        deflate(OperatorPoly.from_roots(0.5, [1.0, 2.0]), 1.0, 2)
    with pytest.raises(NotARootError):
        deflate(OperatorPoly.from_roots(0.5, [1.0]), 1.0, 2)


def test_shifted_examples():
    a, b = 1.5, -0.5
    assert shifted(OperatorPoly(0.5, (-a, 1.0)), a).coeffs == (0j, 1 + 0j)
    op = OperatorPoly(0.5, (1.0, 0.0, 1.0))
    assert shifted(op, 0).coeffs == op.coeffs
    # (D - a)(D - b) shifted by a is D (D + a - b), expanded by hand
    got = shifted(OperatorPoly.from_roots(0.5, [a, b]), a).coeffs
    assert all(abs(x - y) < 1e-15 for x, y in zip(got, (0, a - b, 1)))


def test_shift_consistency():
    rng = random.Random(11)
    for _ in range(50):
        op = OperatorPoly(0.5, [complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(5)])
        c = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        m = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        lhs = eval_poly(shifted(op, c), m)
        rhs = eval_poly(op, m + c)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_eval_poly_examples():
    assert eval_poly(OperatorPoly(1 / 3, (6.0, -5.0, 1.0)), 0) == 6
    w, a = 2.0, 1.0
    assert eval_poly(OperatorPoly(0.5, (w * w, 0, 1)), 1j * a) == pytest.approx(w * w - a * a)


def test_factor_consistency():
    op = OperatorPoly.from_roots(0.5, [1.0, -2.0, 0.5j])
    s = TermSum(0.5, (FracTerm(1.0, 2, 0.3), FracTerm(-2.0 + 1j, 0, 1.1), FracTerm(0.5, 3, 0)))
    lhs = apply(op, s)
    rhs = apply(OperatorPoly(0.5, (-1.0, 1.0)), apply(deflate(op, 1.0, 1), s))
    assert lhs.isclose(rhs, 1e-12)


def test_operator_product_and_str():
    p = OperatorPoly(0.5, (-1.0, 1.0)) * OperatorPoly(0.5, (-2.0, 1.0))
    assert p.coeffs == (2 + 0j, -3 + 0j, 1 + 0j)
    assert str(p) == "1·D^(2α) + -3·D^α + 2"
    with pytest.raises(AlphaMismatchError):
        OperatorPoly(0.5, (1.0, 1.0)) * OperatorPoly(0.4, (1.0, 1.0))


def test_pair_centred_on_a_root_not_merged():
    # the midpoint of 1.75 +- 2i is itself a root
    op = OperatorPoly.from_roots(0.2, [1.75, 1.75 + 2j, 1.75 - 2j])
    roots = char_roots(op)
    assert len(roots) == 3
    assert all(r == 1 for _, r in roots)
