"""Integral identities and the H_max isoperimetric-type bound.

For a domain star-shaped about the origin with support function
p(s) = s . n(s) >= 0:

* divergence identity   Vol = (1/nu) int_S p dS
* Minkowski formula     Area(S) = int_S p H dS
* chain of bounds       H_max >= Area/(nu Vol) >= (Vol B_nu / Vol)^(1/nu),

with equality throughout only for balls. ``perturb_reduce_hmax`` implements
a planar volume-preserving deformation that lowers H_max of any non-disk.
"""
from dataclasses import dataclass
import math

import numpy as np

from .geometry import (DomainSpec, GeometryError, boundary_quadrature, curvature_star2d,
                       fourier_eval, geometry_summary, locate_hmax, polar_curvature,
                       mean_curvature_revolution, unit_ball_volume)

IDENTITY_TOL = 1e-8
MARGIN_TOL = -1e-10
BALL_RTOL = 1e-6
BUMP_MODES = 96


def support_function(spec, t):
    """p = s . n(s) from the boundary point and the outward unit normal.

    ``t`` is the polar angle (star2d) or the meridian angle from the
    z-axis (revolution).
    """
    if spec.kind not in ("star2d", "revolution"):
        raise GeometryError("support_function needs a star2d or revolution domain")
    t = np.asarray(t, dtype=float)
    r, r1, _ = fourier_eval(spec.cos, spec.sin, t)
    if spec.kind == "star2d":
        # boundary point and tangent in the plane
        x, y = r * np.cos(t), r * np.sin(t)
        tx, ty = r1 * np.cos(t) - r * np.sin(t), r1 * np.sin(t) + r * np.cos(t)
        nx, ny = ty, -tx
    else:
        # meridian plane (rho, z), angle measured from the z-axis
        x, y = r * np.sin(t), r * np.cos(t)
        tx, ty = r1 * np.sin(t) + r * np.cos(t), r1 * np.cos(t) - r * np.sin(t)
        nx, ny = -ty, tx
    norm = np.hypot(nx, ny)
    p = (x * nx + y * ny) / norm
    return float(p) if p.ndim == 0 else p


def _integrals(spec, quadrature_n):
    summary = geometry_summary(spec, quadrature_n)
    _, ds, h, p = boundary_quadrature(spec, quadrature_n)
    return summary, ds, h, p


def _report(check, spec, lhs, rhs, value, quadrature_n, ok, **extra):
    out = {"check": check, "domain_id": spec.domain_id, "lhs": float(lhs), "rhs": float(rhs),
           "residual_or_margin": float(value), "quadrature_n": int(quadrature_n),
           "pass": bool(ok)}
    out.update(extra)
    return out


def check_divergence_identity(spec, quadrature_n=256):
    """Report with residual |Vol - (1/nu) int p dS| / Vol."""
    summary, ds, _, p = _integrals(spec, quadrature_n)
    rhs = float(np.dot(p, ds)) / spec.dim
    res = abs(summary.volume - rhs) / summary.volume
    return _report("divergence", spec, summary.volume, rhs, res, quadrature_n,
                   res < IDENTITY_TOL)


def check_minkowski(spec, quadrature_n=256):
    """Report with residual |Area - int p H dS| / Area."""
    summary, ds, h, p = _integrals(spec, quadrature_n)
    rhs = float(np.dot(p * h, ds))
    res = abs(summary.boundary_area - rhs) / summary.boundary_area
    return _report("minkowski", spec, summary.boundary_area, rhs, res, quadrature_n,
                   res < IDENTITY_TOL)


def curvature_range(spec, n=4096):
    """(min, max, mean) of the boundary mean curvature on a dense grid."""
    if spec.kind == "star2d":
        h = curvature_star2d(spec, 2.0 * np.pi * np.arange(n) / n)
    elif spec.kind == "revolution":
        h = mean_curvature_revolution(spec, np.linspace(0.0, np.pi, n + 1))
    else:
        h = boundary_quadrature(spec, n)[2]
    h = np.asarray(h)
    return float(np.min(h)), float(np.max(h)), float(np.mean(h))


def is_ball(spec):
    """Constant curvature up to max - min <= 1e-6 * mean."""
    if spec.kind == "ball":
        return True
    if spec.kind == "shell":
        return False
    lo, hi, mean = curvature_range(spec)
    return hi - lo <= BALL_RTOL * abs(mean)


def check_hmax_bound(spec, quadrature_n=256):
    """H_max against (Vol B_nu / Vol)^(1/nu); also reports Area/(nu Vol).

    ``residual_or_margin`` is H_max - (Vol B_nu / Vol)^(1/nu). The check
    passes when the margin is >= -1e-10 and, for non-balls, > 1e-8.
    """
    if spec.kind == "shell":
        raise GeometryError("a spherical shell is not star-shaped")
    summary = geometry_summary(spec, quadrature_n)
    nu = spec.dim
    rhs = (unit_ball_volume(nu) / summary.volume) ** (1.0 / nu)
    rhs_bb1 = summary.boundary_area / (nu * summary.volume)
    margin = summary.h_max - rhs
    ball = is_ball(spec)
    ok = margin >= MARGIN_TOL and (ball or margin > 1e-8)
    return _report("hmax-bound", spec, summary.h_max, rhs, margin, quadrature_n, ok,
                   rhs_bb1=float(rhs_bb1), is_ball=bool(ball))


def star2d_area(spec):
    """Exact area of a star2d domain from its Fourier coefficients (Parseval)."""
    a = np.asarray(spec.cos)
    b = np.asarray(spec.sin)
    return math.pi * (a[0] ** 2 + 0.5 * (np.sum(a[1:] ** 2) + np.sum(b ** 2)))


def hausdorff_estimate(spec_a, spec_b, n=8192):
    """max |r_a - r_b|, an upper bound for the Hausdorff distance of two radial graphs."""
    theta = 2.0 * np.pi * np.arange(n) / n
    ra = fourier_eval(spec_a.cos, spec_a.sin, theta)[0]
    rb = fourier_eval(spec_b.cos, spec_b.sin, theta)[0]
    return float(np.max(np.abs(ra - rb)))


def bump(theta, center, width):
    """(1 - x^2)^4 with x = (theta - center)/width on the circle, zero outside."""
    d = (np.asarray(theta) - center + np.pi) % (2.0 * np.pi) - np.pi
    x = d / width
    return np.where(np.abs(x) < 1.0, (1.0 - x * x) ** 4, 0.0)


def _low_arcs(low):
    """Contiguous runs of True in a periodic boolean array as (start, length)."""
    n = len(low)
    if low.all():
        return [(0, n)]
    start = int(np.argmin(low))  # a False entry; runs never wrap past it
    arcs, run = [], None
    for k in range(1, n + 1):
        i = (start + k) % n
        if low[i]:
            run = (i, 1) if run is None else (run[0], run[1] + 1)
        elif run is not None:
            arcs.append(run)
            run = None
    if run is not None:
        arcs.append(run)
    return arcs


def _bump_site(spec, n=4096):
    """Centre and half-width of the bump, H_max, and the curvature threshold.

    With delta = H_max - 2 pi / L (L the perimeter, 2 pi / L the mean
    curvature), the bump sits on the widest arc where kappa <= H_max - delta/2.
    """
    theta = 2.0 * np.pi * np.arange(n) / n
    r, r1, r2 = fourier_eval(spec.cos, spec.sin, theta)
    kappa = polar_curvature(r, r1, r2)
    perimeter = 2.0 * np.pi * float(np.mean(np.hypot(r, r1)))
    hmax = locate_hmax(spec)[1]
    delta = hmax - 2.0 * np.pi / perimeter
    threshold = hmax - 0.5 * delta
    start, length = max(_low_arcs(kappa <= threshold), key=lambda a: (a[1], -a[0]))
    center = 2.0 * np.pi * (start + 0.5 * (length - 1)) / n
    width = 0.9 * 0.5 * (length - 1) * 2.0 * np.pi / n
    return center, width, hmax, threshold


def _project(func, modes):
    n = 4 * modes
    theta = 2.0 * np.pi * np.arange(n) / n
    c = np.fft.rfft(func(theta)) / n
    cos = [c[0].real] + list(2.0 * c[1:modes + 1].real)
    sin = list(-2.0 * c[1:modes + 1].imag)
    return cos, sin


@dataclass(frozen=True)
class PerturbStep:
    spec: DomainSpec
    eps_used: float
    h_max_before: float
    h_max_after: float
    hausdorff: float


def perturb_step(spec, eps, max_halvings=20):
    """One volume-preserving H_max-lowering step with the epsilon actually used."""
    if spec.kind != "star2d":
        raise GeometryError("perturbation implemented for star2d domains")
    if is_ball(spec):
        raise GeometryError("constant curvature: a disk cannot be perturbed to lower H_max")
    center, width, hmax, threshold = _bump_site(spec)
    if width <= 0.0:
        raise GeometryError("no low-curvature region for the bump")
    area0 = star2d_area(spec)
    modes = max(BUMP_MODES, len(spec.cos) - 1, len(spec.sin))
    e = float(eps)
    for _ in range(max_halvings + 1):
        def radial(theta, e=e):
            return fourier_eval(spec.cos, spec.sin, theta)[0] - e * bump(theta, center, width)

        cos, sin = _project(radial, modes)
        try:
            trial = DomainSpec.star2d(cos, sin, domain_id=spec.domain_id)
        except GeometryError:
            e *= 0.5
            continue
        lam = math.sqrt(area0 / star2d_area(trial))
        out = DomainSpec.star2d([c * lam for c in cos], [s * lam for s in sin],
                                domain_id=spec.domain_id)
        new_hmax = locate_hmax(out)[1]
        # curvature on the bump support must stay below the threshold
        theta = np.linspace(center - width, center + width, 513)
        dent = float(np.max(curvature_star2d(out, theta)))
        if new_hmax < hmax and dent <= threshold:
            return PerturbStep(out, e, hmax, new_hmax, hausdorff_estimate(spec, out))
        e *= 0.5
    raise GeometryError("perturbation failed to lower H_max after halving epsilon")


def perturb_reduce_hmax(spec, eps):
    """Same-area star2d domain within O(eps) of ``spec`` with strictly smaller H_max.

    A smooth bump (1-x^2)^4 is subtracted from r(theta) around the point of
    least curvature, then the domain is rescaled to its original area.
    """
    return perturb_step(spec, eps).spec


def perturb_loop(spec, eps, iters):
    """Iterate ``perturb_step``; returns the list of steps."""
    steps = []
    cur = spec
    for _ in range(iters):
        step = perturb_step(cur, eps)
        steps.append(step)
        cur = step.spec
    return steps
