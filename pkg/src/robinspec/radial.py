"""Exact negative Robin eigenvalues of balls and spherical shells.

Separating variables in dimension nu, the radial part of an eigenfunction
with angular momentum l and energy E = -k^2 is

    r^{1 - nu/2} [A I_lam(k r) + B K_lam(k r)],   lam = nu/2 - 1 + l.

The Robin condition du/dn = alpha u (outward normal) then yields one secular
equation per l. Everything is evaluated with exponentially scaled Bessel
functions and their ratios, so k up to several thousand is fine.
"""
from concurrent.futures import ThreadPoolExecutor
import math
import warnings

from . import kernels
from .geometry import GeometryError
from .model1d import bisect
from .results import RADIAL_EXACT, SpectralResult

ROOT_RTOL = 1e-13


class BesselUnderflowWarning(RuntimeWarning):
    """A scaled Bessel value is below the smallest positive double."""


def _checked_exp(logv, what):
    if logv < -745.0:
        warnings.warn(f"{what} underflows; returning 0", BesselUnderflowWarning, stacklevel=3)
        return 0.0
    return math.exp(logv)


def bessel_i_scaled(order, x):
    """exp(-x) I_order(x) for order >= 0, x > 0."""
    return _checked_exp(kernels.bessel_ik(order, x)[0], "exp(-x) I_nu(x)")


def bessel_k_scaled(order, x):
    """exp(x) K_order(x) for order >= 0, x > 0."""
    return math.exp(kernels.bessel_ik(order, x)[1])


def multiplicity(l, nu):
    """Dimension of the degree-l spherical harmonics on S^{nu-1}."""
    if l == 0:
        return 1
    if nu == 2:
        return 2
    return math.comb(l + nu - 2, l) + math.comb(l + nu - 3, l - 1)


def ball_secular(k, l, nu, R, alpha):
    """u'(R)/u(R) - alpha for u = r^{1-nu/2} I_lam(k r); increasing in k."""
    lam = 0.5 * nu - 1.0 + l
    return l / R + k * kernels.bessel_ik(lam, k * R)[2] - alpha


def shell_secular(k, l, nu, a, b, alpha):
    """2x2 Robin determinant divided by I_lam(kb) K_lam(ka).

    Outer sphere: u'(b) = alpha u(b); inner sphere (outward normal is -r):
    -u'(a) = alpha u(a).
    """
    lam = 0.5 * nu - 1.0 + l
    li_b, lk_b, ri_b, rk_b = kernels.bessel_ik(lam, k * b)
    li_a, lk_a, ri_a, rk_a = kernels.bessel_ik(lam, k * a)
    pb = l / b - alpha + k * ri_b
    qb = l / b - alpha - k * rk_b
    pa = l / a + alpha + k * ri_a
    qa = l / a + alpha - k * rk_a
    x = math.exp(lk_b - lk_a + li_a - li_b - 2.0 * k * (b - a))
    return pb * qa - x * qb * pa


def _ball_root(l, nu, R, alpha):
    if not l / R < alpha:
        return None
    f = lambda k: ball_secular(k, l, nu, R, alpha)
    lo = 1e-10 * max(alpha, 1.0 / R)
    if f(lo) >= 0.0:
        return None
    hi = alpha + (l + nu) / R + 1.0
    while f(hi) <= 0.0:
        hi *= 2.0
    return bisect(f, lo, hi, ROOT_RTOL)


def _shell_roots(l, nu, a, b, alpha):
    if alpha <= 0.0:
        return []
    f = lambda k: shell_secular(k, l, nu, a, b, alpha)
    kmax = 2.0 * alpha + 2.0 * (nu + l) / a + 10.0 / (b - a) + 10.0
    n = 400
    grid = {kmax * (i + 1) / n for i in range(n)}
    # the uncoupled outer (ball-like) and inner (exterior-like) roots sit
    # next to the true ones; put them and midpoints on the grid
    lam = 0.5 * nu - 1.0 + l
    outer = _ball_root(l, nu, b, alpha)
    g_in = lambda k: l / a + alpha - k * kernels.bessel_ik(lam, k * a)[3]
    inner = None
    lo = 1e-10 * max(alpha, 1.0 / a)
    if g_in(lo) > 0.0 and g_in(kmax) < 0.0:
        inner = bisect(g_in, lo, kmax, 1e-10)[0]
    special = [r for r in ((outer[0] if outer else None), inner) if r is not None]
    if len(special) == 2:
        special.append(0.5 * (special[0] + special[1]))
    grid.update(s for s in special if 0.0 < s < kmax)
    grid = sorted(grid)
    grid.insert(0, lo)
    vals = [f(k) for k in grid]
    roots = []
    for k0, k1, f0, f1 in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if f0 == 0.0:
            roots.append((k0, 0.0))
        elif (f0 > 0) != (f1 > 0) and f1 != 0.0:
            roots.append(bisect(f, k0, k1, ROOT_RTOL))
    return sorted(roots, key=lambda r: -r[0])


def _radial_spectrum(roots_for_l, nu, alpha, count, domain_id):
    modes = []  # (E, l, k, width)
    l = 0
    while True:
        roots = roots_for_l(l)
        if not roots:
            break
        if len(modes) >= 1:
            # count-th eigenvalue with multiplicities among the modes so far
            energies = sorted(
                e for e, ll, _, _ in modes for _ in range(multiplicity(ll, nu)))
            if len(energies) >= count and -roots[0][0] ** 2 >= energies[count - 1]:
                break
        for k, width in roots:
            modes.append((-k * k, l, k, width))
        l += 1
        if l > 100000:
            raise ArithmeticError("angular momentum scan did not terminate")
    modes.sort(key=lambda m: (m[0], m[1]))
    out = []
    for E, l, k, width in modes:
        mult = multiplicity(l, nu)
        for _ in range(mult):
            if len(out) == count:
                break
            err = 2.0 * k * width + 4e-13 * abs(E)
            out.append(SpectralResult(
                domain_id=domain_id, alpha=float(alpha), j=len(out) + 1, E=E,
                method=RADIAL_EXACT, err_est=err, disc={"tol": ROOT_RTOL},
                l=l, multiplicity=mult))
    if len(out) < count:
        out = [r.with_flag("truncated") for r in out]
    return out


def ball_negative_spectrum(nu, R, alpha, count, domain_id=""):
    """Lowest ``count`` negative eigenvalues of the Robin ball, with multiplicity."""
    if nu < 2 or R <= 0:
        raise GeometryError("need nu >= 2 and R > 0")
    did = domain_id or f"ball{nu}_R{R:g}"

    def roots_for_l(l):
        r = _ball_root(l, nu, R, alpha)
        return [r] if r else []

    return _radial_spectrum(roots_for_l, nu, alpha, count, did)


def shell_negative_spectrum(nu, a, b, alpha, count, domain_id=""):
    """Lowest ``count`` negative eigenvalues of the Robin shell a < |x| < b."""
    if nu < 2 or not 0 < a < b:
        raise GeometryError("need nu >= 2 and 0 < a < b")
    did = domain_id or f"shell{nu}_a{a:g}_b{b:g}"
    return _radial_spectrum(lambda l: _shell_roots(l, nu, a, b, alpha), nu, alpha, count, did)


def negative_spectrum(spec, alpha, count):
    if spec.kind == "ball":
        return ball_negative_spectrum(spec.dim, spec.radius, alpha, count, spec.domain_id)
    if spec.kind == "shell":
        return shell_negative_spectrum(spec.dim, spec.inner, spec.outer, alpha, count,
                                       spec.domain_id)
    raise GeometryError(f"radial solver needs a ball or shell, got {spec.kind}")


def negative_spectrum_grid(spec, alphas, count, max_workers=1):
    """Spectra over an alpha grid; output ordered by (alpha, j) regardless of workers."""
    alphas = list(alphas)
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            parts = list(pool.map(lambda a: negative_spectrum(spec, a, count), alphas))
    else:
        parts = [negative_spectrum(spec, a, count) for a in alphas]
    out = [r for part in parts for r in part]
    out.sort(key=lambda r: (r.alpha, r.j))
    return out
