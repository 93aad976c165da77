"""Domains and boundary geometry.

Four domain families are supported:

* ``star2d``: planar domain bounded by the radial graph r(theta) given by a
  finite Fourier series (cosine coefficients a_0..a_K, sine b_1..b_K);
* ``ball`` and ``shell``: balls and spherical shells in dimension nu >= 2;
* ``revolution``: solid of revolution about the z-axis whose meridian is the
  polar graph R(phi), phi in [0, pi] measured from the positive z-axis,
  again as a Fourier series.

Curvatures are signed with respect to the outward normal, so a circle of
radius R has curvature +1/R and the inner sphere of a shell has mean
curvature -1/a.
"""
from dataclasses import dataclass, field
import math

import numpy as np

KINDS = ("star2d", "ball", "shell", "revolution")
_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


class GeometryError(ValueError):
    """Invalid domain data or a degenerate boundary point."""


@dataclass(frozen=True)
class DomainSpec:
    kind: str
    cos: tuple = ()
    sin: tuple = ()
    dim: int = 2
    radius: float = 1.0
    inner: float = 0.0
    outer: float = 0.0
    domain_id: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GeometryError(f"unknown domain kind {self.kind!r}")
        object.__setattr__(self, "cos", tuple(float(c) for c in self.cos))
        object.__setattr__(self, "sin", tuple(float(s) for s in self.sin))
        if self.kind in ("star2d", "revolution"):
            object.__setattr__(self, "dim", 2 if self.kind == "star2d" else 3)
            if not self.cos:
                raise GeometryError("need at least the constant Fourier coefficient")
            theta = np.linspace(0.0, 2.0 * np.pi, 4096, endpoint=False)
            if self.kind == "revolution":
                theta = np.linspace(0.0, np.pi, 2049)
            if np.min(fourier_eval(self.cos, self.sin, theta)[0]) <= 0.0:
                raise GeometryError("radial function must stay positive")
        elif self.kind == "ball":
            if int(self.dim) != self.dim or self.dim < 2:
                raise GeometryError("ball dimension must be an integer >= 2")
            if not self.radius > 0:
                raise GeometryError("ball radius must be positive")
        else:
            if int(self.dim) != self.dim or self.dim < 2:
                raise GeometryError("shell dimension must be an integer >= 2")
            if not 0 < self.inner < self.outer:
                raise GeometryError("shell radii must satisfy 0 < inner < outer")

    # constructors -------------------------------------------------------
    @classmethod
    def star2d(cls, cos, sin=(), domain_id=""):
        return cls("star2d", cos=cos, sin=sin, domain_id=domain_id)

    @classmethod
    def ball(cls, dim, radius=1.0, domain_id=""):
        return cls("ball", dim=int(dim), radius=float(radius), domain_id=domain_id)

    @classmethod
    def shell(cls, dim, inner, outer, domain_id=""):
        return cls("shell", dim=int(dim), inner=float(inner), outer=float(outer),
                   domain_id=domain_id)

    @classmethod
    def revolution(cls, profile_cos, profile_sin=(), domain_id=""):
        return cls("revolution", cos=profile_cos, sin=profile_sin, domain_id=domain_id)

    @classmethod
    def star2d_from_function(cls, func, order=128, domain_id=""):
        """Fourier-fit a positive 2*pi-periodic radial function (e.g. an ellipse)."""
        n = 4 * order
        theta = 2.0 * np.pi * np.arange(n) / n
        c = np.fft.rfft(np.asarray(func(theta), dtype=float)) / n
        cos = [c[0].real] + list(2.0 * c[1:order + 1].real)
        sin = list(-2.0 * c[1:order + 1].imag)
        return cls.star2d(cos, sin, domain_id=domain_id)

    # serialization -------------------------------------------------------
    def to_dict(self):
        if self.kind == "star2d":
            d = {"kind": "star2d", "cos": list(self.cos), "sin": list(self.sin)}
        elif self.kind == "ball":
            d = {"kind": "ball", "dim": self.dim, "radius": self.radius}
        elif self.kind == "shell":
            d = {"kind": "shell", "dim": self.dim, "inner": self.inner, "outer": self.outer}
        else:
            d = {"kind": "revolution", "profile_cos": list(self.cos),
                 "profile_sin": list(self.sin)}
        if self.domain_id:
            d["id"] = self.domain_id
        return d

    @classmethod
    def from_dict(cls, d, domain_id=""):
        try:
            kind = d["kind"]
            did = d.get("id", domain_id)
            if kind == "star2d":
                return cls.star2d(d["cos"], d.get("sin", ()), domain_id=did)
            if kind == "ball":
                return cls.ball(d["dim"], d["radius"], domain_id=did)
            if kind == "shell":
                return cls.shell(d["dim"], d["inner"], d["outer"], domain_id=did)
            if kind == "revolution":
                return cls.revolution(d["profile_cos"], d.get("profile_sin", ()), domain_id=did)
        except (KeyError, TypeError) as exc:
            raise GeometryError(f"malformed domain description: {exc}") from exc
        raise GeometryError(f"unknown domain kind {kind!r}")

    @property
    def is_radial_graph(self):
        return self.kind in ("star2d", "revolution")


@dataclass(frozen=True)
class GeometrySummary:
    volume: float
    boundary_area: float
    h_max: float
    h_samples: list
    p_samples: list
    quadrature_n: int
    h_argmax: float = 0.0
    flags: tuple = field(default=())


def fourier_eval(cos, sin, theta):
    """Return r, r', r'' of the Fourier series at ``theta`` (array-valued)."""
    theta = np.asarray(theta, dtype=float)
    a = np.asarray(cos, dtype=float)
    b = np.concatenate([[0.0], np.asarray(sin, dtype=float)])
    K = max(len(a), len(b))
    a = np.pad(a, (0, K - len(a)))
    b = np.pad(b, (0, K - len(b)))
    k = np.arange(K, dtype=float)
    flat = theta.reshape(-1)
    r = np.empty(flat.shape)
    r1 = np.empty(flat.shape)
    r2 = np.empty(flat.shape)
    chunk = max(1, 2 ** 20 // K)
    for i in range(0, len(flat), chunk):
        kt = np.outer(flat[i:i + chunk], k)
        ck, sk = np.cos(kt), np.sin(kt)
        r[i:i + chunk] = ck @ a + sk @ b
        r1[i:i + chunk] = ck @ (k * b) - sk @ (k * a)
        r2[i:i + chunk] = -(ck @ (k * k * a) + sk @ (k * k * b))
    shape = theta.shape
    return r.reshape(shape), r1.reshape(shape), r2.reshape(shape)


def unit_ball_volume(nu):
    return math.pi ** (nu / 2.0) / math.gamma(nu / 2.0 + 1.0)


def polar_curvature(r, r1, r2):
    """Signed curvature of a polar graph from r, r', r''."""
    return (r * r + 2.0 * r1 * r1 - r * r2) / (r * r + r1 * r1) ** 1.5


def curvature_star2d(spec, theta):
    if spec.kind != "star2d":
        raise GeometryError("curvature_star2d needs a star2d domain")
    r, r1, r2 = fourier_eval(spec.cos, spec.sin, theta)
    k = polar_curvature(r, r1, r2)
    return float(k) if np.ndim(k) == 0 else k


def profile_curvatures(rho, z, drho, dz, ddrho, ddz):
    """Principal curvatures of a surface of revolution about the z-axis.

    The meridian (rho(t), z(t)) is traversed so that the outward normal is
    (-z', rho')/|.|, i.e. from the north pole towards the south pole.
    Returns ``(kappa_meridian, kappa_parallel)``.
    """
    speed = np.hypot(drho, dz)
    kappa_m = -(drho * ddz - dz * ddrho) / speed ** 3
    kappa_p = -dz / (speed * rho)
    return kappa_m, kappa_p


def degenerate_poles(spec):
    """Poles where the meridian meets the axis at a nonright angle (cone points)."""
    if spec.kind != "revolution":
        return []
    out = []
    for phi in (0.0, math.pi):
        r, r1, _ = fourier_eval(spec.cos, spec.sin, np.array([phi]))
        if abs(r1[0]) > 1e-12 * max(1.0, abs(r[0])):
            out.append(phi)
    return out


def mean_curvature_revolution(spec, phi, angle=0.0):
    """Mean curvature of a revolution domain at polar angle ``phi``.

    ``angle`` (rotation about the axis) does not enter by symmetry. At the
    poles the umbilic limit H = kappa_meridian is used; a pole where the
    profile is not perpendicular to the axis raises :class:`GeometryError`.
    """
    if spec.kind != "revolution":
        raise GeometryError("mean_curvature_revolution needs a revolution domain")
    phi_arr = np.atleast_1d(np.asarray(phi, dtype=float))
    r, r1, r2 = fourier_eval(spec.cos, spec.sin, phi_arr)
    km = polar_curvature(r, r1, r2)
    s, c = np.sin(phi_arr), np.cos(phi_arr)
    speed = np.hypot(r, r1)
    near_pole = np.abs(s) < 1e-7
    with np.errstate(divide="ignore", invalid="ignore"):
        kp = (r * s - r1 * c) / (speed * r * s)
    if np.any(near_pole):
        poles = degenerate_poles(spec)
        for t in phi_arr[near_pole]:
            for pole in poles:
                if abs(t - pole) < 1e-6:
                    raise GeometryError(
                        f"degenerate pole at phi={pole!r}: profile meets the axis at an angle")
        kp = np.where(near_pole, km, kp)
    h = 0.5 * (km + kp)
    return float(h[0]) if np.ndim(phi) == 0 else h


def support_values(spec, t):
    """p = s.n on the boundary of a radial-graph domain at parameter ``t``."""
    r, r1, _ = fourier_eval(spec.cos, spec.sin, t)
    return r * r / np.hypot(r, r1)


def _mean_curvature(spec, t):
    if spec.kind == "star2d":
        return curvature_star2d(spec, t)
    return mean_curvature_revolution(spec, t)


def _golden_max(f, a, b, tol=1e-12):
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    x = 0.5 * (a + b)
    return x, f(x)


def locate_hmax(spec, quadrature_n=256):
    """Return ``(argmax, H_max)`` by dense sampling plus golden-section."""
    m = 4 * quadrature_n
    if spec.kind == "star2d":
        grid = 2.0 * np.pi * np.arange(m) / m
        lo_bound, hi_bound = -np.inf, np.inf
    else:
        grid = np.linspace(0.0, np.pi, m + 1)
        lo_bound, hi_bound = 0.0, np.pi
    vals = np.asarray(_mean_curvature(spec, grid))
    step = grid[1] - grid[0]
    # refine every near-top local maximum: symmetric shapes have near ties
    if spec.kind == "star2d":
        left, right = np.roll(vals, 1), np.roll(vals, -1)
    else:
        left = np.concatenate([[-np.inf], vals[:-1]])
        right = np.concatenate([vals[1:], [-np.inf]])
    peaks = np.nonzero((vals >= left) & (vals >= right))[0]
    top = vals.max()
    near = peaks[vals[peaks] >= top - 1e-3 * max(abs(top), 1.0)]
    near = near[np.argsort(-vals[near])][:16]
    x, h = float(grid[near[0]]), float(vals[near[0]])
    for i in near:
        a = max(grid[i] - step, lo_bound)
        b = min(grid[i] + step, hi_bound)
        xi, hi_ = _golden_max(lambda t: float(_mean_curvature(spec, t)), a, b)
        if hi_ < vals[i]:
            xi, hi_ = float(grid[i]), float(vals[i])
        if hi_ > h:
            x, h = xi, hi_
    if spec.kind == "star2d":
        x = x % (2.0 * np.pi)
    return x, h


def _radial_graph_integrals(spec, n):
    """Volume, area and the node data for a radial-graph domain."""
    if spec.kind == "star2d":
        t = 2.0 * np.pi * np.arange(n) / n
        w = np.full(n, 2.0 * np.pi / n)
        r, r1, _ = fourier_eval(spec.cos, spec.sin, t)
        speed = np.hypot(r, r1)
        volume = 0.5 * np.dot(w, r * r)
        area = np.dot(w, speed)
        jac = speed
    else:
        x, w = np.polynomial.legendre.leggauss(n)
        t = 0.5 * np.pi * (x + 1.0)
        w = 0.5 * np.pi * w
        r, r1, _ = fourier_eval(spec.cos, spec.sin, t)
        speed = np.hypot(r, r1)
        s = np.sin(t)
        volume = 2.0 * np.pi / 3.0 * np.dot(w, r ** 3 * s)
        area = 2.0 * np.pi * np.dot(w, r * s * speed)
        jac = 2.0 * np.pi * r * s * speed
    return float(volume), float(area), t, w, jac


def boundary_quadrature(spec, n):
    """Nodes, surface-measure weights (dS), H and p on the boundary.

    For balls and shells the boundary spheres are returned as lumped
    "nodes" carrying their full area.
    """
    if spec.kind in ("star2d", "revolution"):
        _, _, t, w, jac = _radial_graph_integrals(spec, n)
        h = np.asarray(_mean_curvature(spec, t))
        return t, w * jac, h, support_values(spec, t)
    nu = spec.dim
    sphere = nu * unit_ball_volume(nu)
    if spec.kind == "ball":
        R = spec.radius
        return (np.array([R]), np.array([sphere * R ** (nu - 1)]),
                np.array([1.0 / R]), np.array([R]))
    a, b = spec.inner, spec.outer
    return (np.array([b, a]),
            np.array([sphere * b ** (nu - 1), sphere * a ** (nu - 1)]),
            np.array([1.0 / b, -1.0 / a]), np.array([b, -a]))


def geometry_summary(spec, quadrature_n=256):
    if quadrature_n < 16:
        raise GeometryError("quadrature_n must be at least 16")
    flags = []
    if spec.kind in ("ball", "shell"):
        nu = spec.dim
        omega = unit_ball_volume(nu)
        t, ds, h, p = boundary_quadrature(spec, quadrature_n)
        if spec.kind == "ball":
            volume = omega * spec.radius ** nu
        else:
            volume = omega * (spec.outer ** nu - spec.inner ** nu)
        return GeometrySummary(
            volume=volume, boundary_area=float(np.sum(ds)), h_max=float(np.max(h)),
            h_samples=list(zip(t.tolist(), h.tolist())),
            p_samples=list(zip(t.tolist(), p.tolist())),
            quadrature_n=quadrature_n, h_argmax=float(t[0]), flags=())

    volume, area, t, _, _ = _radial_graph_integrals(spec, quadrature_n)
    v2, a2, _, _, _ = _radial_graph_integrals(spec, 2 * quadrature_n)
    if abs(v2 - volume) > 1e-10 * abs(v2) or abs(a2 - area) > 1e-10 * abs(a2):
        flags.append("quadrature_not_converged")
    h = np.asarray(_mean_curvature(spec, t))
    p = support_values(spec, t)
    arg, hmax = locate_hmax(spec, quadrature_n)
    return GeometrySummary(
        volume=volume, boundary_area=area, h_max=hmax,
        h_samples=list(zip(t.tolist(), h.tolist())),
        p_samples=list(zip(t.tolist(), p.tolist())),
        quadrature_n=quadrature_n, h_argmax=arg, flags=tuple(flags))


def rotate(spec, angle):
    """Rigidly rotate a star2d domain by ``angle`` (phase shift of the series)."""
    if spec.kind != "star2d":
        raise GeometryError("rotation implemented for star2d domains")
    cos, sin = list(spec.cos), [0.0] + list(spec.sin)
    K = max(len(cos), len(sin))
    cos += [0.0] * (K - len(cos))
    sin += [0.0] * (K - len(sin))
    nc, ns = [cos[0]], []
    for k in range(1, K):
        # r_new(theta) = r(theta - angle)
        c, s = math.cos(k * angle), math.sin(k * angle)
        nc.append(cos[k] * c - sin[k] * s)
        ns.append(cos[k] * s + sin[k] * c)
    return DomainSpec.star2d(nc, ns, domain_id=spec.domain_id)


def scale(spec, lam):
    """Dilate a domain about the origin by ``lam > 0``."""
    if lam <= 0:
        raise GeometryError("scale factor must be positive")
    if spec.kind == "ball":
        return DomainSpec.ball(spec.dim, spec.radius * lam, spec.domain_id)
    if spec.kind == "shell":
        return DomainSpec.shell(spec.dim, spec.inner * lam, spec.outer * lam, spec.domain_id)
    return DomainSpec(spec.kind, cos=[c * lam for c in spec.cos],
                      sin=[s * lam for s in spec.sin], domain_id=spec.domain_id)


def inradius_estimate(spec):
    """Radius of a ball about the origin contained in the domain."""
    if spec.kind == "ball":
        return spec.radius
    if spec.kind == "shell":
        return 0.5 * (spec.outer - spec.inner)
    t = np.linspace(0.0, 2.0 * np.pi, 4096, endpoint=False)
    return float(np.min(fourier_eval(spec.cos, spec.sin, t)[0]))
