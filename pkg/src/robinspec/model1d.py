"""One-dimensional model operators on the boundary-layer interval (0, delta).

``T-`` is -d^2/dt^2 with Robin conditions at both ends,

    f'(0) = -(alpha + m_max) f(0),    f'(delta) = beta f(delta),

coming from the form  int |f'|^2 - (alpha+m_max)|f(0)|^2 - beta|f(delta)|^2
on H^1(0, delta).  ``T+`` keeps the condition at 0 and imposes f(delta) = 0.

Negative eigenvalues E = -k^2 are roots of closed-form secular functions in
k, nonnegative ones E = mu^2 of their trigonometric analogues. All secular
functions are written with tanh or exp(-2 k delta) so that large k delta
never overflows.
"""
from dataclasses import dataclass
import math

import numpy as np

TMINUS = "TMinus"
TPLUS = "TPlus"


@dataclass(frozen=True)
class Model1DParams:
    delta: float
    m_max: float
    beta: float
    alpha: float

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")

    @property
    def c(self):
        """Robin coefficient at t = 0."""
        return self.alpha + self.m_max


@dataclass(frozen=True)
class Model1DResult:
    operator: str
    eigenvalues: tuple
    k_values: tuple
    trace0: float
    c1: float = float("nan")
    c2: float = float("nan")


def bisect(f, lo, hi, rtol=1e-13, maxiter=400):
    """Bisection on a sign-changing bracket, to ``rtol`` relative width."""
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo, 0.0
    if fhi == 0.0:
        return hi, 0.0
    if (flo > 0) == (fhi > 0):
        raise ValueError("bracket does not change sign")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rtol * abs(mid) or mid in (lo, hi):
            break
        fm = f(mid)
        if fm == 0.0:
            return mid, 0.0
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi), hi - lo


def _roots_on_grid(f, grid, rtol=1e-13):
    vals = [f(x) for x in grid]
    roots = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            roots.append(a)
        elif (fa > 0) != (fb > 0) and fb != 0.0:
            roots.append(bisect(f, a, b, rtol)[0])
    if vals and vals[-1] == 0.0:
        roots.append(grid[-1])
    return roots


def tplus_secular(k, c, delta):
    """k - c tanh(k delta); zero iff E = -k^2 is an eigenvalue of T+."""
    return k - c * math.tanh(k * delta)


def tminus_secular(k, c, beta, delta):
    """(k-c)(k-beta) - exp(-2 k delta)(k+c)(k+beta).

    Equals (1 + e^{-2k delta}) [(k^2 + beta c) tanh(k delta) - k (c + beta)];
    zeros with k > 0 are the negative eigenvalues of T-.
    """
    return (k - c) * (k - beta) - math.exp(-2.0 * k * delta) * (k + c) * (k + beta)


def tplus_secular_pos(mu, c, delta):
    return mu * math.cos(mu * delta) - c * math.sin(mu * delta)


def tminus_secular_pos(mu, c, beta, delta):
    return (mu * mu - beta * c) * math.sin(mu * delta) + mu * (c + beta) * math.cos(mu * delta)


def _k_grid(special, kmax, count):
    n = 10 * max(count, 2)
    pts = set(np.linspace(0.0, kmax, n + 1)[1:].tolist())
    pts.update(s for s in special if 0.0 < s < kmax)
    return sorted(pts)


def _negative_k(p, operator, count):
    c, d = p.c, p.delta
    kmax = max(c, p.beta, 0.0) + 10.0 / d
    if operator == TPLUS:
        if c * d <= 1.0:
            return []
        f = lambda k: tplus_secular(k, c, d)
        return [bisect(f, 1e-12 * c, c)[0]]
    f = lambda k: tminus_secular(k, c, p.beta, d)
    special = [c, p.beta, 0.5 * (c + p.beta)]
    grid = _k_grid(special, kmax, count)
    # the lowest grid point must sit below the small-k root, if any
    grid.insert(0, 1e-9 * min(x for x in grid if x > 0))
    roots = _roots_on_grid(f, grid)
    return sorted(set(r for r in roots if r > 1e-8), reverse=True)


def _nonnegative_mu(p, operator, n):
    """First ``n`` values mu >= 0 with E = mu^2 in the spectrum."""
    c, d, beta = p.c, p.delta, p.beta
    if operator == TPLUS:
        f = lambda mu: tplus_secular_pos(mu, c, d)
        zero_mode = abs(c * d - 1.0) < 1e-14
    else:
        f = lambda mu: tminus_secular_pos(mu, c, beta, d)
        zero_mode = abs(beta * c * d - c - beta) < 1e-14 * max(1.0, abs(c) + beta)
    out = [0.0] if zero_mode else []
    step = math.pi / (16.0 * d)
    lo = 1e-9 * step
    flo = f(lo)
    while len(out) < n:
        hi = lo + step
        fhi = f(hi)
        if flo == 0.0:
            if lo > 1e-6 * step:
                out.append(lo)
        elif (flo > 0) != (fhi > 0) and fhi != 0.0:
            out.append(bisect(f, lo, hi)[0])
        lo, flo = hi, fhi
    return out[:n]


def _ground_coefficients(k, c, d, operator):
    """Normalized ground state A e^{kt} + B e^{-kt} as (C1, C2) plus |psi(0)|^2.

    Uses the scaled form a e^{-k(d-t)} + b e^{-kt} internally.
    """
    ekd = math.exp(-k * d)
    if operator == TPLUS:
        # psi(delta) = 0: C1 = -e^{-2 k delta} C2
        a, b = -ekd, 1.0
    else:
        # f = k cosh(kt) - c sinh(kt) = (k-c)/2 e^{kt} + (k+c)/2 e^{-kt}
        if k + c == 0.0:
            a, b = 1.0, 0.0
        else:
            ratio = (k - c) / (k + c)  # C1/C2
            if ratio != 0.0 and abs(ratio) > ekd:
                a, b = math.copysign(1.0, ratio), ekd / ratio
            else:
                a, b = ratio * ekd, 1.0
    e2 = ekd * ekd
    norm2 = (a * a + b * b) * (1.0 - e2) / (2.0 * k) + 2.0 * a * b * d * ekd
    s = 1.0 / math.sqrt(norm2)
    a, b = a * s, b * s
    trace0 = (a * ekd + b) ** 2
    return a * ekd, b, trace0


def _eigen(p, operator, count):
    if count < 1:
        raise ValueError("count must be >= 1")
    ks = _negative_k(p, operator, count)
    n_pos = max(count - len(ks), 1)
    mus = _nonnegative_mu(p, operator, n_pos)
    eig = tuple([-k * k for k in ks] + [mu * mu for mu in mus])
    trace0 = c1 = c2 = float("nan")
    if ks:
        c1, c2, trace0 = _ground_coefficients(ks[0], p.c, p.delta, operator)
    return Model1DResult(operator=operator, eigenvalues=eig, k_values=tuple(ks),
                         trace0=trace0, c1=c1, c2=c2)


def tplus_eigenvalues(p, count=2):
    """Low eigenvalues of T+: all negative ones, then nonnegative up to ``count``."""
    return _eigen(p, TPLUS, count)


def tminus_eigenvalues(p, count=2):
    """Low eigenvalues of T- (at most two negative, one per end)."""
    return _eigen(p, TMINUS, count)


def trace_growth(p_grid):
    """(alpha, |psi(0)|^2, |psi(0)|^2 / (2k)) for the T+ ground state."""
    rows = []
    for p in p_grid:
        res = tplus_eigenvalues(p, 1)
        if not res.k_values:
            raise ValueError(f"no negative T+ eigenvalue at alpha={p.alpha}")
        k = res.k_values[0]
        rows.append((p.alpha, res.trace0, res.trace0 / (2.0 * k)))
    return rows
