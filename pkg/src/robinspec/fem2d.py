"""P1 finite elements for the Robin eigenvalue problem on star-shaped planar domains.

The weak form is  int grad u . grad v - alpha int_S u v = E int u v, i.e.
(K - alpha B) x = E M x with stiffness K, mass M and boundary mass B.

Meshes are polar-mapped: the point (s, theta) of the unit polar grid is sent
to s r(theta) (cos theta, sin theta). Radially there is a uniform core
followed by geometrically graded layers towards the boundary, where the
attractive Robin ground state lives in a layer of width ~1/alpha.
"""
from dataclasses import dataclass, field
import json
import math

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import kernels
from .geometry import GeometryError, fourier_eval
from .results import FEM2D, SpectralResult

RESIDUAL_TOL = 1e-8

# (n_angular, n_radial, layers) of the coarsest mesh in a three-level ladder
PRESETS = {
    "coarse": (32, 4, 4),
    "medium": (64, 8, 6),
    "fine": (128, 8, 8),
}


class MeshError(ValueError):
    """Invalid grading parameters or a broken triangulation."""


@dataclass
class Mesh2D:
    vertices: np.ndarray
    triangles: np.ndarray
    boundary_edges: np.ndarray
    boundary_theta: np.ndarray
    grading: dict = field(default_factory=dict)

    @property
    def n_vertices(self):
        return len(self.vertices)

    def edges(self):
        t = self.triangles
        e = np.vstack([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        return np.unique(np.sort(e, axis=1), axis=0)

    def euler_characteristic(self):
        return self.n_vertices - len(self.edges()) + len(self.triangles)

    def areas(self):
        v, t = self.vertices, self.triangles
        p0, p1, p2 = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
        d1, d2 = p1 - p0, p2 - p0
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])

    def boundary_length(self):
        v, e = self.vertices, self.boundary_edges
        return float(np.sum(np.linalg.norm(v[e[:, 1]] - v[e[:, 0]], axis=1)))

    def max_edge(self):
        e = self.edges()
        return float(np.max(np.linalg.norm(self.vertices[e[:, 1]] - self.vertices[e[:, 0]], axis=1)))

    def to_json(self):
        return json.dumps({"vertices": self.vertices.tolist(),
                           "triangles": self.triangles.tolist()})


@dataclass
class AssembledSystem:
    stiffness: sp.csr_matrix
    mass: sp.csr_matrix
    boundary_mass: sp.csr_matrix
    mesh: Mesh2D = None


def radial_nodes(n_radial, q, layers, band):
    """Unit-interval node positions: uniform core on [0, 1-band], then
    ``layers`` geometric layers whose thicknesses shrink by ``q`` towards 1."""
    core = np.linspace(0.0, 1.0 - band, n_radial + 1)
    Q = q ** layers
    i = np.arange(1, layers + 1)
    graded = 1.0 - band * (q ** i - Q) / (1.0 - Q)
    graded[-1] = 1.0
    return np.concatenate([core, graded])


def default_band(n_radial, q, layers):
    """Band width making the first graded layer as thick as a core cell."""
    f = (1.0 - q) / (1.0 - q ** layers)
    return 1.0 / (1.0 + n_radial * f)


def build_mesh(spec, n_angular, n_radial, q, layers, band=None):
    """Polar-mapped triangulation of a star2d domain.

    Parameters
    ----------
    n_angular, n_radial : int
        Angular divisions and uniform core intervals.
    q : float
        Layer ratio in (0, 1); the layer touching the boundary has relative
        thickness ``band*(1-q)*q**(layers-1)/(1-q**layers)``.
    layers : int
        Number of graded layers.
    band : float, optional
        Relative width of the graded band; by default chosen so that the
        band joins the core without a jump in spacing.
    """
    if spec.kind != "star2d":
        raise GeometryError("FEM meshes need a star2d domain")
    if n_angular < 16 or n_radial < 4:
        raise MeshError("need n_angular >= 16 and n_radial >= 4")
    if not 0.0 < q < 1.0:
        raise MeshError("layer ratio q must lie in (0, 1)")
    if layers < 1:
        raise MeshError("need at least one graded layer")
    if band is None:
        band = default_band(n_radial, q, layers)
    if not 0.0 < band < 1.0:
        raise MeshError("band must lie in (0, 1)")

    s = radial_nodes(n_radial, q, layers, band)[1:]
    theta = 2.0 * np.pi * np.arange(n_angular) / n_angular
    r = fourier_eval(spec.cos, spec.sin, theta)[0]
    ring = np.stack([r * np.cos(theta), r * np.sin(theta)], axis=1)
    vertices = np.vstack([np.zeros((1, 2))] + [si * ring for si in s])

    nr, na = len(s), n_angular
    idx = lambda i, j: 1 + i * na + (j % na)
    j = np.arange(na)
    tris = [np.stack([np.zeros(na, dtype=np.int64), idx(0, j), idx(0, j + 1)], axis=1)]
    for i in range(nr - 1):
        a, b, c, d = idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)
        quad = np.empty((2 * na, 3), dtype=np.int64)
        quad[0::2] = np.stack([a, b, c], axis=1)
        quad[1::2] = np.stack([a, c, d], axis=1)
        tris.append(quad)
    triangles = np.vstack(tris).astype(np.int64)
    bedges = np.stack([idx(nr - 1, j), idx(nr - 1, j + 1)], axis=1).astype(np.int64)
    btheta = theta + np.pi / n_angular

    grading = {"n_angular": int(n_angular), "n_radial": int(n_radial), "q": float(q),
               "layers": int(layers), "band": float(band)}
    mesh = Mesh2D(vertices, triangles, bedges, btheta, grading)
    if np.any(mesh.areas() <= 0.0):
        raise MeshError("mesh has inverted triangles")
    if mesh.euler_characteristic() != 1:
        raise MeshError("mesh is not a topological disk")
    return mesh


def refine_params(params, level):
    """Grading after ``level`` ratio-2 refinements; radial nodes nest."""
    f = 2 ** level
    return {"n_angular": params["n_angular"] * f, "n_radial": params["n_radial"] * f,
            "q": params["q"] ** (1.0 / f), "layers": params["layers"] * f,
            "band": params["band"]}


def mesh_params_for_alpha(spec, alpha, preset="medium"):
    """Coarsest-level grading resolving the e^{-alpha t} boundary layer.

    On the finest of three levels the boundary layer is at most 1/(4 alpha)
    thick and at least six layers lie within distance 3/alpha.
    """
    if preset not in PRESETS:
        raise MeshError(f"unknown mesh preset {preset!r}; have {sorted(PRESETS)}")
    n_angular, n_radial, layers = PRESETS[preset]
    theta = np.linspace(0.0, 2.0 * np.pi, 1024, endpoint=False)
    r = fourier_eval(spec.cos, spec.sin, theta)[0]
    rmin, rmax = float(np.min(r)), float(np.max(r))
    a = max(float(alpha), 1.0)
    # finest level layer (levels 0..2, layers*4 layers at ratio q**(1/4))
    target = 1.0 / (4.0 * a * rmax)
    q = 0.7
    for _ in range(200):
        # band of physical width ~8/alpha, capped at half the domain and so
        # that its first layer is no coarser than a core cell
        band = min(0.5, 8.0 / (a * rmin), default_band(n_radial, q, layers))
        p = refine_params({"n_angular": n_angular, "n_radial": n_radial, "q": q,
                           "layers": layers, "band": band}, 2)
        s = radial_nodes(p["n_radial"], p["q"], p["layers"], p["band"])
        finest = s[-1] - s[-2]
        if finest <= target and np.sum(s >= 1.0 - 3.0 / (a * rmax)) >= 7:
            break
        q *= 0.97
    return {"n_angular": n_angular, "n_radial": n_radial, "q": q, "layers": layers,
            "band": band}


def assemble(mesh):
    """Stiffness, mass and boundary mass of the P1 space on ``mesh``."""
    n = mesh.n_vertices
    rows, cols, kv, mv, bad = kernels.assemble_p1(mesh.vertices, mesh.triangles)
    if bad >= 0:
        raise MeshError(f"degenerate triangle {bad}")
    K = sp.csr_matrix((kv, (rows, cols)), shape=(n, n))
    M = sp.csr_matrix((mv, (rows, cols)), shape=(n, n))
    e = mesh.boundary_edges
    L = np.linalg.norm(mesh.vertices[e[:, 1]] - mesh.vertices[e[:, 0]], axis=1)
    brows = np.concatenate([e[:, 0], e[:, 1], e[:, 0], e[:, 1]])
    bcols = np.concatenate([e[:, 0], e[:, 1], e[:, 1], e[:, 0]])
    bvals = np.concatenate([L / 3.0, L / 3.0, L / 6.0, L / 6.0])
    B = sp.csr_matrix((bvals, (brows, bcols)), shape=(n, n))
    sym = lambda A: ((A + A.T) * 0.5).tocsr()
    return AssembledSystem(sym(K), sym(M), sym(B), mesh)


def _shift(system, alpha):
    rho = float(np.min(np.linalg.norm(system.mesh.vertices[system.mesh.boundary_edges[:, 0]], axis=1))) \
        if system.mesh is not None else 1.0
    return -(alpha + 2.0 / rho) ** 2


def solve_lowest(system, alpha, count, domain_id="", sigma=None, max_retries=5):
    """Lowest ``count`` eigenpairs of (K - alpha B) x = E M x by shift-invert Lanczos.

    Results failing the residual test ||A x - E M x|| <= 1e-8 max(|E|, 1) ||M x||
    are flagged ``not_converged``.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if count < 1:
        raise ValueError("count must be >= 1")
    A = (system.stiffness - alpha * system.boundary_mass).tocsc()
    M = system.mass.tocsc()
    n = A.shape[0]
    if count >= n - 1:
        raise ValueError("count too large for this mesh")
    # a few spare Ritz pairs so members of degenerate clusters are not skipped
    k = min(count + 4, n - 2)
    sigma = _shift(system, alpha) if sigma is None else sigma
    v0 = np.random.default_rng(0).standard_normal(n)
    vals = vecs = None
    for _ in range(max_retries):
        try:
            vals, vecs = spla.eigsh(A, k=k, M=M, sigma=sigma, which="LM", v0=v0,
                                    maxiter=5000, tol=1e-13)
            break
        except (RuntimeError, spla.ArpackNoConvergence):
            sigma *= 1.01
    order = np.argsort(vals)[:count] if vals is not None else None
    out = []
    h = system.mesh.max_edge() if system.mesh is not None else float("nan")
    disc = {"h": h, "dofs": int(n)}
    if vals is None:
        return [SpectralResult(domain_id, float(alpha), j + 1, float("nan"), FEM2D,
                               float("inf"), dict(disc), flag="not_converged")
                for j in range(count)]
    for j, i in enumerate(order):
        E, x = float(vals[i]), vecs[:, i]
        Mx = M @ x
        res = float(np.linalg.norm(A @ x - E * Mx) / np.linalg.norm(Mx))
        flag = "" if res <= RESIDUAL_TOL * max(abs(E), 1.0) else "not_converged"
        out.append(SpectralResult(domain_id, float(alpha), j + 1, E, FEM2D, res,
                                  dict(disc), flag=flag))
    return out


def ladder(spec, params, levels=3):
    """Meshes of a ratio-2 refinement ladder starting from ``params``."""
    return [build_mesh(spec, **refine_params(params, m)) for m in range(levels)]


def richardson(coarse, mid, fine):
    """(extrapolated value, observed order, err_est) from three O(h^2) levels.

    Non-monotone sequences return the finest value with an err_est of three
    times the last increment and order ``None``.
    """
    d1, d2 = coarse - mid, mid - fine
    if d2 == 0.0:
        return fine, None, 0.0
    ratio = d1 / d2
    if not ratio > 1.0:
        return fine, None, 3.0 * abs(d2)
    ext = (4.0 * fine - mid) / 3.0
    return ext, math.log2(ratio), abs(fine - ext)


def refine_and_extrapolate(spec, alpha, count, mesh_ladder=None, domain_id="", preset="medium"):
    """Richardson-extrapolated eigenvalues from a ratio-2 mesh ladder (>= 3 meshes).

    ``mesh_ladder`` is a list of Mesh2D; by default a three-level ladder graded
    for ``alpha`` is built from ``preset``.
    """
    if mesh_ladder is None:
        mesh_ladder = ladder(spec, mesh_params_for_alpha(spec, alpha, preset))
    if len(mesh_ladder) < 3:
        raise ValueError("need at least three meshes")
    did = domain_id or spec.domain_id
    runs = [solve_lowest(assemble(m), alpha, count, did) for m in mesh_ladder[-3:]]
    out = []
    for j in range(count):
        c, m, f = (run[j] for run in runs)
        flags = {r.flag for r in (c, m, f) if r.flag}
        ext, order, err = richardson(c.E, m.E, f.E)
        disc = {"h": f.disc["h"], "dofs": f.disc["dofs"]}
        if order is None:
            flags.add("nonmonotone")
        else:
            disc["order"] = order
        err = max(err, f.err_est)
        out.append(SpectralResult(did, float(alpha), j + 1, ext, FEM2D, err, disc,
                                  flag="|".join(sorted(flags))))
    return out
