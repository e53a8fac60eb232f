"""Pure-Python numeric kernels.

This is the fallback for :mod:`fdesolve._ckernels`.  Both modules expose the
same functions with the same signatures and return conventions; the choice is
made once in :mod:`fdesolve.kernels`.
"""

import cmath
import math

import numpy as np

from ._ddtables import RGAMMA_TAYLOR

_SPLITTER = 134217729.0  # 2**27 + 1


# --- double-double primitives -------------------------------------------
# A double-double value is an unevaluated sum hi + lo with |lo| <= ulp(hi)/2.

def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _two_prod(a, b):
    p = a * b
    t = _SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    t, f = _two_sum(al, bl)
    e += t
    s, e = _quick_two_sum(s, e)
    e += f
    return _quick_two_sum(s, e)


def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e += ah * bl + al * bh
    return _quick_two_sum(p, e)


def _dd_div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = _dd_mul(bh, bl, q1, 0.0)
    rh, rl = _dd_add(ah, al, -ph, -pl)
    q2 = rh / bh
    ph, pl = _dd_mul(bh, bl, q2, 0.0)
    rh, rl = _dd_add(rh, rl, -ph, -pl)
    q3 = rh / bh
    q1, q2 = _quick_two_sum(q1, q2)
    return _dd_add(q1, q2, q3, 0.0)


def _rgamma_mid(uh, ul):
    """1/Gamma(3/2 + u) for |u| <= 1/2 in double-double."""
    rh, rl = RGAMMA_TAYLOR[-1]
    for ch, cl in reversed(RGAMMA_TAYLOR[:-1]):
        rh, rl = _dd_mul(rh, rl, uh, ul)
        rh, rl = _dd_add(rh, rl, ch, cl)
    return rh, rl


def _gamma1p_dd(alpha, k, cache):
    """Gamma(1 + alpha*k) as (hi, lo, exp2) with the product alpha*k exact."""
    xh, xl = _two_prod(alpha, float(k))
    n = math.floor(xh)
    fh, fl = _two_sum(xh - n, xl)
    if fh < 0.0:
        n -= 1
        fh, fl = _dd_add(fh, fl, 1.0, 0.0)
    elif fh >= 1.0:
        n += 1
        fh, fl = _dd_add(fh, fl, -1.0, 0.0)
    key = (fh, fl)
    hit = cache.get(key)
    if hit is not None and hit[0] <= n:
        j0, gh, gl, ge = hit
    else:
        uh, ul = _dd_add(fh, fl, -0.5, 0.0)
        rh, rl = _rgamma_mid(uh, ul)
        gh, gl = _dd_div(1.0, 0.0, rh, rl)
        j0, ge = 0, 0
    for j in range(j0 + 1, n + 1):
        ph, pl = _dd_add(fh, fl, float(j), 0.0)
        gh, gl = _dd_mul(gh, gl, ph, pl)
        _, s = math.frexp(gh)
        gh = math.ldexp(gh, -s)
        gl = math.ldexp(gl, -s)
        ge += s
    cache[key] = (n, gh, gl, ge)
    return gh, gl, ge


# --- Mittag-Leffler series -----------------------------------------------

def _neumaier(s, c, x):
    t = s + x
    if abs(s) >= abs(x):
        c += (s - t) + x
    else:
        c += (x - t) + s
    return t, c


def ml_sum(alpha, zr, zi, eps, k_max):
    """Compensated double-precision series for E_alpha(z).

    Returns ``(re, im, last, abs_sum, n_terms, converged)``: ``last`` is the
    magnitude of the final term, ``abs_sum`` the sum of term magnitudes (the
    scale of the rounding error).
    """
    z = complex(zr, zi)
    sr = si = cr = ci = 0.0
    p = 1.0 + 0.0j
    log_z = None
    abs_sum = 0.0
    last = 0.0
    small = 0
    for k in range(k_max):
        x = alpha * k
        if x < 170.0 and math.isfinite(p.real) and math.isfinite(p.imag):
            term = p / math.gamma(1.0 + x)
        elif z == 0:
            term = 0j
        else:
            if log_z is None:
                log_z = cmath.log(z)
            term = cmath.exp(k * log_z - math.lgamma(1.0 + x))
        sr, cr = _neumaier(sr, cr, term.real)
        si, ci = _neumaier(si, ci, term.imag)
        last = abs(term)
        abs_sum += last
        if last < eps * abs(complex(sr + cr, si + ci)):
            small += 1
            if small >= 3:
                return sr + cr, si + ci, last, abs_sum, k + 1, True
        else:
            small = 0
        p *= z
    return sr + cr, si + ci, last, abs_sum, k_max, False


def ml_sum_dd(alpha, zr, zi, eps, k_max):
    """Double-double series for E_alpha(z); same return convention as ml_sum.

    Powers of z and the Gamma values are carried as double-double mantissas
    with separate binary exponents so that neither overflows before the
    quotient is formed.
    """
    cache = {}
    # z**k as (re_hi, re_lo, im_hi, im_lo) * 2**pe
    prh, prl, pih, pil, pe = 1.0, 0.0, 0.0, 0.0, 0
    srh = srl = sih = sil = 0.0
    abs_sum = 0.0
    last = 0.0
    small = 0
    for k in range(k_max):
        gh, gl, ge = _gamma1p_dd(alpha, k, cache)
        trh, trl = _dd_div(prh, prl, gh, gl)
        tih, til = _dd_div(pih, pil, gh, gl)
        shift = pe - ge
        if shift > 1100:
            raise OverflowError("Mittag-Leffler term overflows double range")
        trh, trl = math.ldexp(trh, shift), math.ldexp(trl, shift)
        tih, til = math.ldexp(tih, shift), math.ldexp(til, shift)
        srh, srl = _dd_add(srh, srl, trh, trl)
        sih, sil = _dd_add(sih, sil, tih, til)
        last = math.hypot(trh, tih)
        abs_sum += last
        if not math.isfinite(srh + sih):
            raise OverflowError("Mittag-Leffler sum overflows double range")
        if last < eps * math.hypot(srh, sih):
            small += 1
            if small >= 3:
                return srh + srl, sih + sil, last, abs_sum, k + 1, True
        else:
            small = 0
        # p *= z, then renormalise the mantissa
        ah, al = _dd_mul(prh, prl, zr, 0.0)
        bh, bl = _dd_mul(pih, pil, zi, 0.0)
        nrh, nrl = _dd_add(ah, al, -bh, -bl)
        ah, al = _dd_mul(prh, prl, zi, 0.0)
        bh, bl = _dd_mul(pih, pil, zr, 0.0)
        nih, nil = _dd_add(ah, al, bh, bl)
        m = max(abs(nrh), abs(nih))
        if m == 0.0:
            prh = prl = pih = pil = 0.0
            continue
        _, s = math.frexp(m)
        prh, prl = math.ldexp(nrh, -s), math.ldexp(nrl, -s)
        pih, pil = math.ldexp(nih, -s), math.ldexp(nil, -s)
        pe += s
    return srh + srl, sih + sil, last, abs_sum, k_max, False


def ml_array(alpha, z, eps, k_max):
    """Vectorised double-precision E_alpha over a complex array.

    Returns ``(values, abs_sum, converged)`` where ``abs_sum`` holds the
    per-point sum of term magnitudes, the scale of the rounding error.
    """
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.ravel()
    sr = np.zeros(z.shape)
    si = np.zeros(z.shape)
    cr = np.zeros(z.shape)
    ci = np.zeros(z.shape)
    term = np.ones(z.shape, dtype=complex)
    small = np.zeros(z.shape, dtype=np.int64)
    abs_sum = np.zeros(z.shape)
    lg_prev = 0.0
    for k in range(k_max):
        if k:
            lg = math.lgamma(1.0 + alpha * k)
            term = term * z * math.exp(lg_prev - lg)
            lg_prev = lg
        for s, c, x in ((sr, cr, term.real), (si, ci, term.imag)):
            t = s + x
            c += np.where(np.abs(s) >= np.abs(x), (s - t) + x, (x - t) + s)
            s[...] = t
        mag = np.abs(term)
        abs_sum += mag
        tot = np.hypot(sr + cr, si + ci)
        small = np.where(mag < eps * tot, small + 1, 0)
        if np.all(small >= 3):
            return ((sr + cr) + 1j * (si + ci)).reshape(shape), abs_sum.reshape(shape), True
    return ((sr + cr) + 1j * (si + ci)).reshape(shape), abs_sum.reshape(shape), False


# --- product integration -----------------------------------------------

def pi_convolve(values, b, a0):
    """out[n] = a0[n]*f[0] + sum_{j=1..n} b[n-j]*f[j] for a real array f."""
    f = np.asarray(values, dtype=float)
    n = f.shape[0]
    out = np.convolve(f, b[:n])[:n]
    out -= b[:n] * f[0]
    out += a0[:n] * f[0]
    return out


def ml_array_dd(alpha, z, eps, k_max):
    """Double-double series for E_alpha over an array, vectorised across points.

    The reciprocal Gamma values are shared by every point, so they are formed
    once per index in scalar double-double.  Returns ``(values, last,
    abs_sum, n_terms, converged)`` with per-point ``last`` and ``abs_sum``.
    """
    z = np.asarray(z, dtype=complex).ravel()
    zr, zi = z.real.copy(), z.imag.copy()
    shape = z.shape
    cache = {}
    zero = np.zeros(shape)
    # z**k as (re_hi, re_lo, im_hi, im_lo) * 2**pe
    prh, prl, pih, pil = np.ones(shape), zero.copy(), zero.copy(), zero.copy()
    pe = np.zeros(shape, dtype=np.int64)
    srh, srl, sih, sil = zero.copy(), zero.copy(), zero.copy(), zero.copy()
    abs_sum = zero.copy()
    last = zero.copy()
    small = np.zeros(shape, dtype=np.int64)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(k_max):
            gh, gl, ge = _gamma1p_dd(alpha, k, cache)
            rh, rl = _dd_div(1.0, 0.0, gh, gl)
            trh, trl = _dd_mul(prh, prl, rh, rl)
            tih, til = _dd_mul(pih, pil, rh, rl)
            shift = pe - ge
            if np.any(shift > 1100):
                raise OverflowError("Mittag-Leffler term overflows double range")
            trh, trl = np.ldexp(trh, shift), np.ldexp(trl, shift)
            tih, til = np.ldexp(tih, shift), np.ldexp(til, shift)
            srh, srl = _dd_add(srh, srl, trh, trl)
            sih, sil = _dd_add(sih, sil, tih, til)
            last = np.hypot(trh, tih)
            abs_sum += last
            if not np.all(np.isfinite(srh + sih)):
                raise OverflowError("Mittag-Leffler sum overflows double range")
            small = np.where(last < eps * np.hypot(srh, sih), small + 1, 0)
            if np.all(small >= 3):
                return (srh + srl) + 1j * (sih + sil), last, abs_sum, k + 1, True
            ah, al = _dd_mul(prh, prl, zr, 0.0)
            bh, bl = _dd_mul(pih, pil, zi, 0.0)
            nrh, nrl = _dd_add(ah, al, -bh, -bl)
            ah, al = _dd_mul(prh, prl, zi, 0.0)
            bh, bl = _dd_mul(pih, pil, zr, 0.0)
            nih, nil = _dd_add(ah, al, bh, bl)
            _, s = np.frexp(np.maximum(np.abs(nrh), np.abs(nih)))
            prh, prl = np.ldexp(nrh, -s), np.ldexp(nrl, -s)
            pih, pil = np.ldexp(nih, -s), np.ldexp(nil, -s)
            pe = pe + s
    return (srh + srl) + 1j * (sih + sil), last, abs_sum, k_max, False
