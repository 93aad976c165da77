"""Two-term asymptotics of eigenvalue curves.

For attractive Robin problems E_j(alpha) = -alpha^2 - c alpha + R(alpha) with
c = (nu-1) H_max and a remainder R growing slower than alpha. The helpers here
estimate c from the sequence c(alpha) = -(E_j + alpha^2)/alpha, estimate the
growth exponent of R, and compare two eigenvalue curves.
"""
from dataclasses import asdict, dataclass, field
import math

import numpy as np

from .results import curve

DEFAULT_EXPONENT = 2.0 / 3.0
# remainder exponents of E used for the sensitivity check; 0 is an O(1) remainder
SENSITIVITY_EXPONENTS = (0.5, 0.0)


class FitError(ValueError):
    """Not enough data for a fit."""


@dataclass(frozen=True)
class AsymptoticFit:
    j: int
    c_hat: float
    c_err: float
    remainder_exponent_hat: float
    alpha_window: tuple
    points_used: int
    exponent_err: float = float("nan")
    domain_id: str = ""
    sensitivity: dict = field(default_factory=dict)
    flags: tuple = ()

    def report(self, reference=None, mode="coeff"):
        """Fit report as a JSON-ready dict."""
        verdict = _verdict(self, reference, mode)
        exp = self.remainder_exponent_hat
        return {"domain_id": self.domain_id, "j": self.j, "c_hat": self.c_hat,
                "c_err": self.c_err, "exponent_hat": None if math.isnan(exp) else exp,
                "window": list(self.alpha_window), "verdict": verdict}


def _verdict(fit, reference, mode):
    if "inconclusive" in fit.flags:
        return "inconclusive"
    if mode == "exponent":
        p, dp = fit.remainder_exponent_hat, fit.exponent_err
        if p <= 0.1:
            return "remainder_bounded"
        return "within_two_thirds" if p <= 2.0 / 3.0 + 3.0 * dp else "exceeds_two_thirds"
    if reference is None:
        return "no_reference"
    tol = max(3.0 * fit.c_err, 0.05 * abs(reference))
    return "consistent" if abs(fit.c_hat - reference) <= tol else "inconsistent"


def _curve(results, j):
    results = list(results)
    if j is None:
        js = {r.j for r in results}
        if len(js) != 1:
            raise FitError(f"results mix indices {sorted(js)}; pass j")
        j = js.pop()
    alphas, energies, errs = (np.asarray(x, dtype=float) for x in curve(results, j))
    dids = {r.domain_id for r in results if r.j == j}
    return j, alphas, energies, errs, (dids.pop() if len(dids) == 1 else "")


def c_sequence(alphas, energies):
    """c(alpha) = -(E + alpha^2)/alpha."""
    alphas = np.asarray(alphas, dtype=float)
    return -(np.asarray(energies, dtype=float) + alphas ** 2) / alphas


def richardson_c(a1, c1, a2, c2, exponent):
    """Eliminate a term ~ alpha^(exponent-1) from c(alpha) using two points."""
    w1, w2 = a1 ** (1.0 - exponent), a2 ** (1.0 - exponent)
    return (c2 * w2 - c1 * w1) / (w2 - w1)


def fit_linear_coefficient(results, j=None, exponent=DEFAULT_EXPONENT):
    """Estimate c in E_j = -alpha^2 - c alpha + O(alpha^exponent).

    Richardson acceleration on the two largest alpha values, assuming the
    remainder of E grows like alpha^exponent. The same step with exponents
    1/2 and 0 gives the sensitivity; ``c_err`` is their largest deviation
    plus the propagated ``err_est`` of the inputs.
    """
    j, alphas, energies, errs, did = _curve(results, j)
    if len(alphas) < 4:
        raise FitError("need at least 4 alpha values")
    if alphas[-1] < 4.0 * alphas[0]:
        raise FitError("alpha window must span a factor of at least 4")
    c = c_sequence(alphas, energies)
    ce = errs / alphas
    a1, a2, c1, c2 = alphas[-2], alphas[-1], c[-2], c[-1]
    c_hat = richardson_c(a1, c1, a2, c2, exponent)
    sens = {repr(float(exponent)): float(c_hat)}
    for p in SENSITIVITY_EXPONENTS:
        sens[repr(float(p))] = float(richardson_c(a1, c1, a2, c2, p))
    w1, w2 = a1 ** (1.0 - exponent), a2 ** (1.0 - exponent)
    propagated = (w2 * ce[-1] + w1 * ce[-2]) / (w2 - w1)
    spread = max(abs(v - c_hat) for v in sens.values())
    flags = []
    # a clean curve has monotone c(alpha) in the upper half of the window
    upper = c[len(c) // 2:]
    noise = ce[len(c) // 2:]
    steps = np.diff(upper)
    if np.any(steps > noise[1:] + noise[:-1]) and np.any(steps < -(noise[1:] + noise[:-1])):
        flags.append("nonmonotone")
    return AsymptoticFit(
        j=j, c_hat=float(c_hat), c_err=float(spread + propagated),
        remainder_exponent_hat=float("nan"),
        alpha_window=(float(alphas[0]), float(alphas[-1])), points_used=len(alphas),
        domain_id=did, sensitivity=sens, flags=tuple(flags))


def fit_remainder_exponent(results, c_reference, j=None, d_reference=0.0):
    """Log-log slope of |E_j + alpha^2 + c_reference alpha + d_reference|.

    Points whose remainder does not exceed ten times their ``err_est`` (or
    1e-12 alpha^2) are dropped; fewer than 4 usable points flag the fit as
    inconclusive.
    """
    j, alphas, energies, errs, did = _curve(results, j)
    if len(alphas) < 4:
        raise FitError("need at least 4 alpha values")
    rem = energies + alphas ** 2 + c_reference * alphas + d_reference
    floor = np.maximum(10.0 * errs, 1e-12 * alphas ** 2)
    keep = np.abs(rem) > floor
    flags = []
    x, y = np.log(alphas[keep]), np.log(np.abs(rem[keep])) if np.any(keep) else np.array([])
    if keep.sum() < 4:
        flags.append("inconclusive")
        slope, serr = float("nan"), float("nan")
    else:
        A = np.vstack([x, np.ones_like(x)]).T
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        slope = float(coef[0])
        resid = y - A @ coef
        dof = len(x) - 2
        s2 = float(resid @ resid) / dof if dof > 0 else 0.0
        serr = math.sqrt(s2 / float(np.sum((x - x.mean()) ** 2)))
    return AsymptoticFit(
        j=j, c_hat=float(c_reference), c_err=0.0, remainder_exponent_hat=slope,
        alpha_window=(float(alphas[0]), float(alphas[-1])), points_used=int(keep.sum()),
        exponent_err=serr, domain_id=did, flags=tuple(flags))


@dataclass(frozen=True)
class CompareReport:
    j: int
    alphas: tuple
    difference: tuple
    signs: tuple
    final_sign: int
    alpha0_bracket: tuple
    c_hat_a: float | None
    c_hat_b: float | None
    predicted_sign: int | None
    verdict: str

    def to_dict(self):
        return asdict(self)


def compare_domains(res_a, res_b, j):
    """Sign pattern of E_j^A - E_j^B on the common alpha grid.

    ``alpha0_bracket`` brackets the last sign change (``(None, alpha_min)``
    when the sign never changes). The asymptotic prediction is
    sign(E_A - E_B) = -sign(c_A - c_B) at large alpha, using linear
    coefficient fits when both curves allow them.
    """
    _, aa, ea, ra, _ = _curve(res_a, j)
    _, ab, eb, rb, _ = _curve(res_b, j)
    common = np.intersect1d(aa, ab)
    if common.size == 0:
        raise FitError("curves share no alpha values")
    ia = np.searchsorted(aa, common)
    ib = np.searchsorted(ab, common)
    diff = ea[ia] - eb[ib]
    noise = ra[ia] + rb[ib]
    signs = np.where(np.abs(diff) <= noise, 0, np.sign(diff)).astype(int)

    nz = np.nonzero(signs)[0]
    if nz.size == 0:
        final, bracket = 0, (None, None)
    else:
        final = int(signs[nz[-1]])
        # last index whose sign is not the final sign
        other = np.nonzero(signs != final)[0]
        if other.size == 0:
            bracket = (None, float(common[0]))
        else:
            k = int(other[-1])
            bracket = (float(common[k]), float(common[min(k + 1, len(common) - 1)]))

    c_a = c_b = pred = None
    try:
        c_a = fit_linear_coefficient(res_a, j).c_hat
        c_b = fit_linear_coefficient(res_b, j).c_hat
    except FitError:
        c_a = c_b = None
    if c_a is not None:
        dc = c_a - c_b
        pred = 0 if dc == 0.0 else (-1 if dc > 0 else 1)

    if final == 0:
        verdict = "inconclusive"
    elif pred is None or pred == 0:
        verdict = "no_prediction"
    else:
        verdict = "agrees" if pred == final else "disagrees"
    return CompareReport(
        j=int(j), alphas=tuple(float(a) for a in common),
        difference=tuple(float(d) for d in diff), signs=tuple(int(s) for s in signs),
        final_sign=final, alpha0_bracket=bracket, c_hat_a=c_a, c_hat_b=c_b,
        predicted_sign=pred, verdict=verdict)


def geometric_grid(lo, hi, n):
    """n geometrically spaced values from lo to hi inclusive."""
    return [float(v) for v in np.geomspace(lo, hi, n)]
