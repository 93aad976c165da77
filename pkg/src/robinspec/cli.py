"""Command-line driver.

Exit codes: 0 success, 2 configuration error, 3 solver non-convergence
(results are still written, with flags).
"""
import argparse
import csv
from dataclasses import replace
import io
import json
import sys

import numpy as np

from . import asympt, fem2d, geominequal, model1d, radial, svgplot
from .geometry import DomainSpec, GeometryError, geometry_summary
from .results import fmt, results_from_csv, results_to_csv

EXIT_CONFIG = 2
EXIT_NONCONVERGED = 3


class ConfigError(Exception):
    pass


def parse_alpha_grid(text):
    """``A:B:N`` (linear) or ``A:B:N:geom`` (geometric) into a list of floats."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "geom"):
        raise ConfigError(f"bad alpha grid {text!r}; expected A:B:N[:geom]")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad alpha grid {text!r}") from exc
    if n < 1 or lo < 0 or hi < lo:
        raise ConfigError(f"bad alpha grid {text!r}")
    if n == 1:
        return [lo]
    if len(parts) == 4:
        if lo <= 0:
            raise ConfigError("geometric alpha grid needs A > 0")
        return asympt.geometric_grid(lo, hi, n)
    return [float(v) for v in np.linspace(lo, hi, n)]


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _dump_json(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def load_domain(path):
    """Domain JSON; a perturbation report (with a "domain" key) is accepted too."""
    try:
        data = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if isinstance(data, dict) and "domain" in data and "kind" not in data:
        data = data["domain"]
    try:
        return DomainSpec.from_dict(data)
    except GeometryError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _domain_id(spec, path):
    if spec.domain_id:
        return spec.domain_id
    name = path.replace("\\", "/").rsplit("/", 1)[-1]
    return name.rsplit(".", 1)[0]


def cmd_eig(args):
    spec = load_domain(args.domain)
    alphas = parse_alpha_grid(args.alpha_grid)
    if args.count < 1:
        raise ConfigError("--count must be >= 1")
    did = _domain_id(spec, args.domain)
    results = []
    if args.method == "radial":
        if spec.kind not in ("ball", "shell"):
            raise ConfigError("method radial needs a ball or shell domain")
        if alphas[0] <= 0:
            raise ConfigError("radial method needs alpha > 0")
        for a in alphas:
            results += radial.negative_spectrum(replace(spec, domain_id=did), a, args.count)
    else:
        if spec.kind != "star2d":
            raise ConfigError("method fem needs a star2d domain")
        if args.mesh_preset not in fem2d.PRESETS:
            raise ConfigError(f"unknown mesh preset {args.mesh_preset!r}")
        for a in alphas:
            results += fem2d.refine_and_extrapolate(spec, a, args.count, domain_id=did,
                                                    preset=args.mesh_preset)
    _write(args.out, results_to_csv(results))
    return EXIT_NONCONVERGED if any("not_converged" in r.flag for r in results) else 0


def _load_results(path):
    try:
        return results_from_csv(_read(path))
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def cmd_fit(args):
    results = [r for r in _load_results(args.in_path) if r.j == args.j]
    if not results:
        raise ConfigError(f"no rows with j={args.j}")
    reference = None
    if args.geometry:
        spec = load_domain(args.geometry)
        reference = (spec.dim - 1) * geometry_summary(spec).h_max
    try:
        if args.mode == "coeff":
            fit = asympt.fit_linear_coefficient(results, args.j)
        else:
            if reference is None:
                raise ConfigError("--mode exponent needs --geometry")
            fit = asympt.fit_remainder_exponent(results, reference, args.j)
    except asympt.FitError as exc:
        raise ConfigError(str(exc)) from exc
    _write(args.out, _dump_json(fit.report(reference, args.mode)))
    return 0


CHECKS = {
    "divergence": geominequal.check_divergence_identity,
    "minkowski": geominequal.check_minkowski,
    "hmax-bound": geominequal.check_hmax_bound,
}


def cmd_geom(args):
    spec = load_domain(args.domain)
    names = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = [c for c in names if c not in CHECKS]
    if unknown or not names:
        raise ConfigError(f"unknown checks {unknown}; have {sorted(CHECKS)}")
    did = _domain_id(spec, args.domain)
    reports = []
    for name in names:
        try:
            rep = CHECKS[name](spec)
        except GeometryError as exc:
            raise ConfigError(f"{name}: {exc}") from exc
        rep["domain_id"] = did
        reports.append(rep)
    _write(args.out, _dump_json(reports))
    return 0


def cmd_compare(args):
    a, b = _load_results(args.a), _load_results(args.b)
    try:
        rep = asympt.compare_domains(a, b, args.j)
    except asympt.FitError as exc:
        raise ConfigError(str(exc)) from exc
    _write(args.out, _dump_json(rep.to_dict()))
    return 0


def cmd_perturb(args):
    spec = load_domain(args.domain)
    if args.iters < 1 or not args.eps > 0:
        raise ConfigError("need --iters >= 1 and --eps > 0")
    try:
        steps = geominequal.perturb_loop(spec, args.eps, args.iters)
    except GeometryError as exc:
        raise ConfigError(str(exc)) from exc
    rows = [{"iter": i + 1, "eps_used": s.eps_used, "h_max_before": s.h_max_before,
             "h_max_after": s.h_max_after, "hausdorff": s.hausdorff,
             "area": geominequal.star2d_area(s.spec)} for i, s in enumerate(steps)]
    _write(args.out, _dump_json({"domain": steps[-1].spec.to_dict(), "steps": rows}))
    return 0


def cmd_plot(args):
    if args.kind == "geometry":
        svg = svgplot.geometry_svg(load_domain(args.in_path))
    else:
        results = _load_results(args.in_path)
        if not results:
            raise ConfigError("no rows to plot")
        svg = svgplot.eig_curve_svg(results) if args.kind == "eig-curve" else svgplot.c_curve_svg(results)
    _write(args.out, svg)
    return 0


def cmd_model1d(args):
    alphas = parse_alpha_grid(args.alpha_grid)
    solve = model1d.tplus_eigenvalues if args.operator == "tplus" else model1d.tminus_eigenvalues
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "operator", "j", "E", "k", "trace0"])
    try:
        for a in alphas:
            res = solve(model1d.Model1DParams(args.delta, args.m_max, args.beta, a), args.count)
            for j, E in enumerate(res.eigenvalues, start=1):
                k = res.k_values[j - 1] if j <= len(res.k_values) else ""
                t0 = res.trace0 if j == 1 and res.k_values else ""
                w.writerow([fmt(a), res.operator, j, fmt(E), fmt(k), fmt(t0)])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _write(args.out, buf.getvalue())
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="robinspec", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eig", help="eigenvalue curves (radial or FEM)")
    e.add_argument("--domain", required=True)
    e.add_argument("--alpha-grid", required=True)
    e.add_argument("--count", type=int, default=1)
    e.add_argument("--method", choices=("radial", "fem"), default="radial")
    e.add_argument("--mesh-preset", default="medium")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_eig)

    f = sub.add_parser("fit", help="linear coefficient or remainder exponent fit")
    f.add_argument("--in", dest="in_path", required=True)
    f.add_argument("--j", type=int, default=1)
    f.add_argument("--mode", choices=("coeff", "exponent"), default="coeff")
    f.add_argument("--geometry")
    f.add_argument("--out", required=True)
    f.set_defaults(func=cmd_fit)

    g = sub.add_parser("geom", help="divergence, Minkowski and H_max checks")
    g.add_argument("--domain", required=True)
    g.add_argument("--checks", default="divergence,minkowski,hmax-bound")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_geom)

    c = sub.add_parser("compare", help="compare two eigenvalue curves")
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    c.add_argument("--j", type=int, default=1)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_compare)

    t = sub.add_parser("perturb", help="area-preserving H_max-lowering perturbations")
    t.add_argument("--domain", required=True)
    t.add_argument("--eps", type=float, default=0.01)
    t.add_argument("--iters", type=int, default=1)
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_perturb)

    pl = sub.add_parser("plot", help="SVG plots")
    pl.add_argument("--in", dest="in_path", required=True)
    pl.add_argument("--kind", choices=("eig-curve", "c-curve", "geometry"), required=True)
    pl.add_argument("--out", required=True)
    pl.set_defaults(func=cmd_plot)

    m = sub.add_parser("model1d", help="eigenvalues of the 1D model operators")
    m.add_argument("--operator", choices=("tplus", "tminus"), default="tplus")
    m.add_argument("--delta", type=float, default=1.0)
    m.add_argument("--m-max", type=float, default=0.0)
    m.add_argument("--beta", type=float, default=0.0)
    m.add_argument("--alpha-grid", required=True)
    m.add_argument("--count", type=int, default=2)
    m.add_argument("--out", required=True)
    m.set_defaults(func=cmd_model1d)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"robinspec: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"robinspec: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
