"""Pure-Python reference kernels.

These mirror ``_ckernels.pyx`` line by line and are used whenever the
compiled extension is unavailable (or explicitly requested through
:func:`robinspec.kernels.use_backend`).
"""
import math

import numpy as np

_EPS = 1e-16
_MAXIT = 100000
_XMIN = 2.0
_BIG = 1e200
_LOG_BIG = math.log(_BIG)

# Taylor coefficients of 1/Gamma(z) about z = 0 (index = power of z).
RGAMMA_TAYLOR = (
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
)


def temme_gammas(mu):
    """Return (gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu)) for |mu| <= 1/2."""
    c = RGAMMA_TAYLOR
    n = len(c)
    # 1/Gamma(1+mu) = sum_k c[k] mu^(k-1)
    odd = 0.0   # sum over odd k: c[k] mu^(k-1)
    even = 0.0  # sum over even k: c[k] mu^(k-2)
    mu2 = mu * mu
    for k in range(n - 1 if (n - 1) % 2 == 1 else n - 2, 0, -2):
        odd = odd * mu2 + c[k]
    for k in range(n - 1 if (n - 1) % 2 == 0 else n - 2, 1, -2):
        even = even * mu2 + c[k]
    gampl = odd + mu * even
    gammi = odd - mu * even
    return -even, odd, gampl, gammi


def bessel_ik(nu, x):
    """Modified Bessel functions of real order ``nu >= 0`` at ``x > 0``.

    Returns ``(log_ive, log_kve, i_ratio, k_ratio)`` where
    ``log_ive = log(exp(-x) I_nu(x))``, ``log_kve = log(exp(x) K_nu(x))``,
    ``i_ratio = I_{nu+1}(x)/I_nu(x)`` and ``k_ratio = K_{nu+1}(x)/K_nu(x)``.

    Temme's series (x < 2) or Steed's continued fraction (x >= 2) for the
    fractional order, a continued fraction for the I ratio, the Wronskian
    for I, and rescaled recurrences so nothing overflows.
    """
    if not (x > 0.0):
        raise ValueError("x must be positive")
    if nu < 0.0:
        raise ValueError("order must be nonnegative")
    nl = int(nu + 0.5)
    xmu = nu - nl
    xmu2 = xmu * xmu
    xi = 1.0 / x
    xi2 = 2.0 * xi

    # CF1 for I_{nu+1}/I_nu = 1/(b1 + 1/(b2 + ...)), b_k = 2(nu+k)/x
    tiny = 1e-300
    f1 = tiny
    c = f1
    d = 0.0
    b = xi2 * nu
    for _ in range(_MAXIT):
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
        if abs(dl - 1.0) < _EPS:
            break
    else:
        raise ArithmeticError("CF1 did not converge")
    i_ratio = f1

    # downward recurrence I_{n-1} = (2n/x) I_n + I_{n+1}, from nu to mu
    inext = f1
    icur = 1.0
    iscale = 0.0
    n = nu
    for _ in range(nl):
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
        pimu = math.pi * xmu
        fact = 1.0 if abs(pimu) < _EPS else pimu / math.sin(pimu)
        d = -math.log(x2)
        e = xmu * d
        fact2 = 1.0 if abs(e) < _EPS else math.sinh(e) / e
        gam1, gam2, gampl, gammi = temme_gammas(xmu)
        ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
        total = ff
        e = math.exp(e)
        p = 0.5 * e / gampl
        q = 0.5 / (e * gammi)
        c = 1.0
        d = x2 * x2
        total1 = p
        for i in range(1, _MAXIT):
            ff = (i * ff + p + q) / (i * i - xmu2)
            c *= d / i
            p /= i - xmu
            q /= i + xmu
            dl = c * ff
            total += dl
            dl1 = c * (p - i * ff)
            total1 += dl1
            if abs(dl) < abs(total) * _EPS:
                break
        else:
            raise ArithmeticError("Temme series did not converge")
        ex = math.exp(x)
        rkmu = total * ex
        rk1 = total1 * xi2 * ex
    else:
        b = 2.0 * (1.0 + x)
        d = 1.0 / b
        h = delh = d
        q1 = 0.0
        q2 = 1.0
        a1 = 0.25 - xmu2
        q = c = a1
        a = -a1
        s = 1.0 + q * delh
        for i in range(2, _MAXIT):
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
            if abs(dels / s) < _EPS:
                break
        else:
            raise ArithmeticError("CF2 did not converge")
        h = a1 * h
        rkmu = math.sqrt(math.pi / (2.0 * x)) / s
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

    log_ive = math.log(rimu) - math.log(icur) - iscale
    log_kve = math.log(rkmu) + kscale
    return log_ive, log_kve, i_ratio, rk1 / rkmu


def assemble_p1(vertices, triangles):
    """Per-triangle P1 stiffness and mass entries in COO layout.

    Returns ``(rows, cols, kvals, mvals, bad)``; ``bad`` is the index of the
    first triangle with nonpositive area, or -1.
    """
    v = np.asarray(vertices, dtype=float)
    t = np.asarray(triangles, dtype=np.int64)
    p0, p1, p2 = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
    det = (p1[:, 0] - p0[:, 0]) * (p2[:, 1] - p0[:, 1]) - (p2[:, 0] - p0[:, 0]) * (p1[:, 1] - p0[:, 1])
    nonpos = np.nonzero(det <= 0.0)[0]
    bad = int(nonpos[0]) if nonpos.size else -1
    area = 0.5 * det
    # rows of g are (y_j - y_k, x_k - x_j) for the cyclic triple (i, j, k)
    g = np.empty((t.shape[0], 3, 2))
    for i, (pj, pk) in enumerate(((p1, p2), (p2, p0), (p0, p1))):
        g[:, i, 0] = pj[:, 1] - pk[:, 1]
        g[:, i, 1] = pk[:, 0] - pj[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        kloc = np.einsum("tia,tja->tij", g, g) / (4.0 * area)[:, None, None]
    mref = np.array([[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]) / 12.0
    mloc = area[:, None, None] * mref
    rows = np.repeat(t, 3, axis=1).ravel()
    cols = np.tile(t, (1, 3)).ravel()
    return rows, cols, kloc.ravel(), mloc.ravel(), bad
