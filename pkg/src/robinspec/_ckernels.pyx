# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: modified Bessel functions I/K and P1 element assembly.

Line-for-line twin of ``_pykernels.py``; both must return identical results
up to floating-point reassociation.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, log, exp, sqrt, sin, sinh, cosh, M_PI

cnp.import_array()

cdef double _EPS = 1e-16
cdef int _MAXIT = 100000
cdef double _XMIN = 2.0
cdef double _BIG = 1e200
cdef double _LOG_BIG = log(1e200)

cdef double[29] _RG = [
    0.0,
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
    1.4123806553180317816e-18,
]


cdef void _temme_gammas(double mu, double* gam1, double* gam2,
                        double* gampl, double* gammi) nogil:
    cdef double odd = 0.0, even = 0.0, mu2 = mu * mu
    cdef int k
    k = 27
    while k >= 1:
        odd = odd * mu2 + _RG[k]
        k -= 2
    k = 28
    while k >= 2:
        even = even * mu2 + _RG[k]
        k -= 2
    gam1[0] = -even
    gam2[0] = odd
    gampl[0] = odd + mu * even
    gammi[0] = odd - mu * even


def temme_gammas(double mu):
    cdef double g1, g2, gp, gm
    _temme_gammas(mu, &g1, &g2, &gp, &gm)
    return g1, g2, gp, gm


cdef int _bessel_ik(double nu, double x, double* out) nogil:
    cdef int nl, i, it
    cdef double xmu, xmu2, xi, xi2, tiny = 1e-300
    cdef double f1, c, d, b, dl
    cdef double inext, icur, iprev, iscale, n, rmu
    cdef double x2, pimu, fact, e, fact2, gam1, gam2, gampl, gammi
    cdef double ff, total, total1, p, q, dl1, ex
    cdef double h, delh, q1, q2, a1, a, s, qnew, dels
    cdef double rkmu, rk1, rimu, rktemp, kscale

    nl = <int>(nu + 0.5)
    xmu = nu - nl
    xmu2 = xmu * xmu
    xi = 1.0 / x
    xi2 = 2.0 * xi

    f1 = tiny
    c = f1
    d = 0.0
    b = xi2 * nu
    it = 0
    while True:
        b += xi2
        d = b + d
        if d == 0.0:
            d = tiny
        c = b + 1.0 / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        dl = c * d
        f1 *= dl
        if fabs(dl - 1.0) < _EPS:
            break
        it += 1
        if it >= _MAXIT:
            return 1

    inext = f1
    icur = 1.0
    iscale = 0.0
    n = nu
    for i in range(nl):
        iprev = 2.0 * n * xi * icur + inext
        inext = icur
        icur = iprev
        n -= 1.0
        if icur > _BIG:
            icur /= _BIG
            inext /= _BIG
            iscale += _LOG_BIG
    rmu = inext / icur

    if x < _XMIN:
        x2 = 0.5 * x
        pimu = M_PI * xmu
        fact = 1.0 if fabs(pimu) < _EPS else pimu / sin(pimu)
        d = -log(x2)
        e = xmu * d
        fact2 = 1.0 if fabs(e) < _EPS else sinh(e) / e
        _temme_gammas(xmu, &gam1, &gam2, &gampl, &gammi)
        ff = fact * (gam1 * cosh(e) + gam2 * fact2 * d)
        total = ff
        e = exp(e)
        p = 0.5 * e / gampl
        q = 0.5 / (e * gammi)
        c = 1.0
        d = x2 * x2
        total1 = p
        i = 1
        while True:
            ff = (i * ff + p + q) / (i * i - xmu2)
            c *= d / i
            p /= i - xmu
            q /= i + xmu
            dl = c * ff
            total += dl
            dl1 = c * (p - i * ff)
            total1 += dl1
            if fabs(dl) < fabs(total) * _EPS:
                break
            i += 1
            if i >= _MAXIT:
                return 2
        ex = exp(x)
        rkmu = total * ex
        rk1 = total1 * xi2 * ex
    else:
        b = 2.0 * (1.0 + x)
        d = 1.0 / b
        h = d
        delh = d
        q1 = 0.0
        q2 = 1.0
        a1 = 0.25 - xmu2
        q = a1
        c = a1
        a = -a1
        s = 1.0 + q * delh
        i = 2
        while True:
            a -= 2 * (i - 1)
            c = -a * c / i
            qnew = (q1 - b * q2) / a
            q1 = q2
            q2 = qnew
            q += c * qnew
            b += 2.0
            d = 1.0 / (b + a * d)
            delh = (b * d - 1.0) * delh
            h += delh
            dels = q * delh
            s += dels
            if fabs(dels / s) < _EPS:
                break
            i += 1
            if i >= _MAXIT:
                return 3
        h = a1 * h
        rkmu = sqrt(M_PI / (2.0 * x)) / s
        rk1 = rkmu * (xmu + x + 0.5 - h) * xi

    rimu = xi / (rk1 + rmu * rkmu)

    kscale = 0.0
    for i in range(1, nl + 1):
        rktemp = (xmu + i) * xi2 * rk1 + rkmu
        rkmu = rk1
        rk1 = rktemp
        if rk1 > _BIG:
            rk1 /= _BIG
            rkmu /= _BIG
            kscale += _LOG_BIG

    out[0] = log(rimu) - log(icur) - iscale
    out[1] = log(rkmu) + kscale
    out[2] = f1
    out[3] = rk1 / rkmu
    return 0


def bessel_ik(double nu, double x):
    """Modified Bessel functions of real order ``nu >= 0`` at ``x > 0``.

    Returns ``(log_ive, log_kve, i_ratio, k_ratio)``; see the pure-Python
    twin for the definitions.
    """
    cdef double out[4]
    cdef int status
    if not (x > 0.0):
        raise ValueError("x must be positive")
    if nu < 0.0:
        raise ValueError("order must be nonnegative")
    with nogil:
        status = _bessel_ik(nu, x, out)
    if status == 1:
        raise ArithmeticError("CF1 did not converge")
    elif status == 2:
        raise ArithmeticError("Temme series did not converge")
    elif status == 3:
        raise ArithmeticError("CF2 did not converge")
    return out[0], out[1], out[2], out[3]


def assemble_p1(vertices, triangles):
    """Per-triangle P1 stiffness and mass entries in COO layout."""
    cdef double[:, ::1] v = np.ascontiguousarray(vertices, dtype=np.float64)
    cdef cnp.int64_t[:, ::1] t = np.ascontiguousarray(triangles, dtype=np.int64)
    cdef Py_ssize_t nt = t.shape[0], e, i, j, pos
    rows_a = np.empty(9 * nt, dtype=np.int64)
    cols_a = np.empty(9 * nt, dtype=np.int64)
    kv_a = np.empty(9 * nt, dtype=np.float64)
    mv_a = np.empty(9 * nt, dtype=np.float64)
    cdef cnp.int64_t[::1] rows = rows_a, cols = cols_a
    cdef double[::1] kv = kv_a, mv = mv_a
    cdef double gx[3]
    cdef double gy[3]
    cdef double x0, y0, x1, y1, x2, y2, det, area
    cdef Py_ssize_t bad = -1
    with nogil:
        for e in range(nt):
            x0 = v[t[e, 0], 0]; y0 = v[t[e, 0], 1]
            x1 = v[t[e, 1], 0]; y1 = v[t[e, 1], 1]
            x2 = v[t[e, 2], 0]; y2 = v[t[e, 2], 1]
            det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
            if det <= 0.0 and bad < 0:
                bad = e
            area = 0.5 * det
            gx[0] = y1 - y2; gy[0] = x2 - x1
            gx[1] = y2 - y0; gy[1] = x0 - x2
            gx[2] = y0 - y1; gy[2] = x1 - x0
            pos = 9 * e
            for i in range(3):
                for j in range(3):
                    rows[pos] = t[e, i]
                    cols[pos] = t[e, j]
                    kv[pos] = (gx[i] * gx[j] + gy[i] * gy[j]) / (4.0 * area)
                    mv[pos] = area * (2.0 if i == j else 1.0) / 12.0
                    pos += 1
    return rows_a, cols_a, kv_a, mv_a, int(bad)
