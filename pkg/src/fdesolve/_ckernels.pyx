# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels; see fdesolve._pykernels for the reference versions."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, floor, frexp, ldexp, hypot, tgamma, lgamma, exp, log, atan2, cos, sin, isfinite

from ._ddtables import RGAMMA_TAYLOR

cnp.import_array()

cdef double SPLITTER = 134217729.0

cdef int N_RG = len(RGAMMA_TAYLOR)
cdef double RG_HI[64]
cdef double RG_LO[64]
for _i, (_h, _l) in enumerate(RGAMMA_TAYLOR):
    RG_HI[_i] = _h
    RG_LO[_i] = _l


cdef struct dd:
    double hi
    double lo


cdef inline dd two_sum(double a, double b) nogil:
    cdef dd r
    cdef double bb
    r.hi = a + b
    bb = r.hi - a
    r.lo = (a - (r.hi - bb)) + (b - bb)
    return r


cdef inline dd quick_two_sum(double a, double b) nogil:
    cdef dd r
    r.hi = a + b
    r.lo = b - (r.hi - a)
    return r


cdef inline dd two_prod(double a, double b) nogil:
    cdef dd r
    cdef double t, ah, al, bh, bl
    r.hi = a * b
    t = SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    r.lo = ((ah * bh - r.hi) + ah * bl + al * bh) + al * bl
    return r


cdef inline dd dd_add(dd a, dd b) nogil:
    cdef dd s = two_sum(a.hi, b.hi)
    cdef dd t = two_sum(a.lo, b.lo)
    s.lo += t.hi
    s = quick_two_sum(s.hi, s.lo)
    s.lo += t.lo
    return quick_two_sum(s.hi, s.lo)


cdef inline dd dd_neg(dd a) nogil:
    a.hi = -a.hi
    a.lo = -a.lo
    return a


cdef inline dd dd_mul(dd a, dd b) nogil:
    cdef dd p = two_prod(a.hi, b.hi)
    p.lo += a.hi * b.lo + a.lo * b.hi
    return quick_two_sum(p.hi, p.lo)


cdef inline dd dd_from(double x) nogil:
    cdef dd r
    r.hi = x
    r.lo = 0.0
    return r


cdef inline dd dd_div(dd a, dd b) nogil:
    cdef double q1, q2, q3
    cdef dd r
    q1 = a.hi / b.hi
    r = dd_add(a, dd_neg(dd_mul(b, dd_from(q1))))
    q2 = r.hi / b.hi
    r = dd_add(r, dd_neg(dd_mul(b, dd_from(q2))))
    q3 = r.hi / b.hi
    r = quick_two_sum(q1, q2)
    return dd_add(r, dd_from(q3))


cdef dd gamma1p_dd(double alpha, long k, int *exp2) nogil:
    """Gamma(1 + alpha*k) as a mantissa times 2**exp2; alpha*k formed exactly."""
    cdef dd x = two_prod(alpha, <double>k)
    cdef double n = floor(x.hi)
    cdef dd f = two_sum(x.hi - n, x.lo)
    cdef dd u, r, g
    cdef int i, s
    cdef long j
    if f.hi < 0.0:
        n -= 1.0
        f = dd_add(f, dd_from(1.0))
    elif f.hi >= 1.0:
        n += 1.0
        f = dd_add(f, dd_from(-1.0))
    u = dd_add(f, dd_from(-0.5))
    r.hi = RG_HI[N_RG - 1]
    r.lo = RG_LO[N_RG - 1]
    for i in range(N_RG - 2, -1, -1):
        r = dd_mul(r, u)
        g.hi = RG_HI[i]
        g.lo = RG_LO[i]
        r = dd_add(r, g)
    g = dd_div(dd_from(1.0), r)
    exp2[0] = 0
    for j in range(1, <long>n + 1):
        g = dd_mul(g, dd_add(f, dd_from(<double>j)))
        frexp(g.hi, &s)
        g.hi = ldexp(g.hi, -s)
        g.lo = ldexp(g.lo, -s)
        exp2[0] += s
    return g


cdef inline void neumaier(double *s, double *c, double x) nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


cdef int _ml_sum(double alpha, double zr, double zi, double eps, long k_max,
                 double *out, const double *gtab, long n_tab) nogil:
    """Fills out = [re, im, last, abs_sum, n_terms]; returns 1 on convergence.

    ``gtab[k]`` may hold Gamma(1 + alpha*k) for k < n_tab.
    """
    cdef double sr = 0.0, si = 0.0, cr = 0.0, ci = 0.0
    cdef double pr = 1.0, pi_ = 0.0, tr, ti, g, x, mag, tmp
    cdef double lr = 0.0, lt = 0.0, lmag
    cdef double abs_sum = 0.0, last = 0.0
    cdef int small = 0, have_log = 0
    cdef long k
    for k in range(k_max):
        x = alpha * k
        if x < 170.0 and isfinite(pr) and isfinite(pi_):
            g = gtab[k] if k < n_tab else tgamma(1.0 + x)
            tr = pr / g
            ti = pi_ / g
        elif zr == 0.0 and zi == 0.0:
            tr = 0.0
            ti = 0.0
        else:
            if not have_log:
                lr = log(hypot(zr, zi))
                lt = atan2(zi, zr)
                have_log = 1
            lmag = k * lr - lgamma(1.0 + x)
            if lmag > 709.0:
                return -1
            mag = exp(lmag)
            tr = mag * cos(k * lt)
            ti = mag * sin(k * lt)
        neumaier(&sr, &cr, tr)
        neumaier(&si, &ci, ti)
        last = hypot(tr, ti)
        abs_sum += last
        if last < eps * hypot(sr + cr, si + ci):
            small += 1
            if small >= 3:
                out[0] = sr + cr
                out[1] = si + ci
                out[2] = last
                out[3] = abs_sum
                out[4] = k + 1
                return 1
        else:
            small = 0
        tmp = pr * zr - pi_ * zi
        pi_ = pr * zi + pi_ * zr
        pr = tmp
    out[0] = sr + cr
    out[1] = si + ci
    out[2] = last
    out[3] = abs_sum
    out[4] = k_max
    return 0


def ml_sum(double alpha, double zr, double zi, double eps, long k_max):
    cdef double out[5]
    cdef int ok = _ml_sum(alpha, zr, zi, eps, k_max, out, NULL, 0)
    if ok < 0:
        raise OverflowError("Mittag-Leffler term overflows double range")
    return out[0], out[1], out[2], out[3], <long>out[4], bool(ok)


def ml_sum_dd(double alpha, double zr, double zi, double eps, long k_max):
    cdef dd pr = dd_from(1.0), pim = dd_from(0.0), sr = dd_from(0.0), si = dd_from(0.0)
    cdef dd g, tr, ti, nr, ni, z_r = dd_from(zr), z_i = dd_from(zi)
    cdef int pe = 0, ge = 0, shift, s
    cdef double abs_sum = 0.0, last = 0.0, m
    cdef int small = 0
    cdef long k
    for k in range(k_max):
        g = gamma1p_dd(alpha, k, &ge)
        tr = dd_div(pr, g)
        ti = dd_div(pim, g)
        shift = pe - ge
        if shift > 1100:
            raise OverflowError("Mittag-Leffler term overflows double range")
        tr.hi = ldexp(tr.hi, shift)
        tr.lo = ldexp(tr.lo, shift)
        ti.hi = ldexp(ti.hi, shift)
        ti.lo = ldexp(ti.lo, shift)
        sr = dd_add(sr, tr)
        si = dd_add(si, ti)
        last = hypot(tr.hi, ti.hi)
        abs_sum += last
        if not isfinite(sr.hi + si.hi):
            raise OverflowError("Mittag-Leffler sum overflows double range")
        if last < eps * hypot(sr.hi, si.hi):
            small += 1
            if small >= 3:
                return sr.hi + sr.lo, si.hi + si.lo, last, abs_sum, k + 1, True
        else:
            small = 0
        nr = dd_add(dd_mul(pr, z_r), dd_neg(dd_mul(pim, z_i)))
        ni = dd_add(dd_mul(pr, z_i), dd_mul(pim, z_r))
        m = fabs(nr.hi) if fabs(nr.hi) > fabs(ni.hi) else fabs(ni.hi)
        if m == 0.0:
            pr = dd_from(0.0)
            pim = dd_from(0.0)
            continue
        frexp(m, &s)
        pr.hi = ldexp(nr.hi, -s)
        pr.lo = ldexp(nr.lo, -s)
        pim.hi = ldexp(ni.hi, -s)
        pim.lo = ldexp(ni.lo, -s)
        pe += s
    return sr.hi + sr.lo, si.hi + si.lo, last, abs_sum, k_max, False


def ml_array(double alpha, z, double eps, long k_max):
    arr = np.asarray(z, dtype=complex)
    shape = arr.shape
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zz = np.ascontiguousarray(arr.ravel())
    cdef Py_ssize_t n = zz.shape[0], i
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] res = np.empty(n, dtype=complex)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mags = np.empty(n)
    cdef double out[5]
    cdef int ok, all_ok = 1
    cdef long n_tab = min(k_max, <long>(170.0 / alpha) + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] gtab = np.empty(max(n_tab, 1))
    for i in range(n_tab):
        gtab[i] = tgamma(1.0 + alpha * i)
    for i in range(n):
        ok = _ml_sum(alpha, zz[i].real, zz[i].imag, eps, k_max, out, &gtab[0], n_tab)
        if ok < 0:
            raise OverflowError("Mittag-Leffler term overflows double range")
        if ok == 0:
            all_ok = 0
        res[i] = out[0] + 1j * out[1]
        mags[i] = out[3]
    return res.reshape(shape), mags.reshape(shape), bool(all_ok)


def pi_convolve(values, b, a0):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] f = np.ascontiguousarray(values, dtype=float)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bb = np.ascontiguousarray(b, dtype=float)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] aa = np.ascontiguousarray(a0, dtype=float)
    cdef Py_ssize_t n = f.shape[0], i, j, m
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    cdef double acc[4]
    cdef double c[4]
    cdef double y, t
    cdef int r
    for i in range(n):
        # four interleaved Kahan sums, so the dependency chains overlap
        for r in range(4):
            acc[r] = 0.0
            c[r] = 0.0
        acc[0] = aa[i] * f[0]
        m = 1
        while m + 3 <= i:
            for r in range(4):
                y = bb[i - m - r] * f[m + r] - c[r]
                t = acc[r] + y
                c[r] = (t - acc[r]) - y
                acc[r] = t
            m += 4
        for j in range(m, i + 1):
            y = bb[i - j] * f[j] - c[0]
            t = acc[0] + y
            c[0] = (t - acc[0]) - y
            acc[0] = t
        out[i] = ((acc[0] - c[0]) + (acc[1] - c[1])) + ((acc[2] - c[2]) + (acc[3] - c[3]))
    return out