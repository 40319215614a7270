"""Command-line driver: project / trace / sandwich / sweep.

Exit codes are stable: 0 success, 2 input or validation error, 3 numerical
failure, 4 a proved inequality violated beyond its error estimate.  All CSV
output is written with %.17g floats and no timestamps, so identical
configurations reproduce byte-identical files.
"""

import argparse
import csv
import os
import sys
from dataclasses import dataclass

from . import bergman, content, geometry, specfile, tracer
from .errors import (
    BasisError,
    EmptyTraceError,
    GeometryError,
    InequalityError,
    ZbarfitError,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_INEQUALITY = 4

_VALIDATION = (GeometryError, BasisError, EmptyTraceError)


@dataclass
class RunConfig:
    command: str
    domains: tuple = ()            # spec strings / paths, in order
    family: str = ""
    degree: int = 12
    pole_orders: int = 3
    extra_poles: tuple = ()        # ((complex, maxorder), ...)
    grid_h: float = 0.0            # 0 -> per-domain default
    norm_h: float = 0.0
    window: tuple = (-2.5, 2.5, -2.5, 2.5)
    resolution: int = 512
    c0: float = 1.0
    terms: tuple = ()              # explicit level-set terms for trace
    out_dir: str = "."
    seed: int = 0


class _StageFailure(Exception):
    def __init__(self, stage, cause):
        super().__init__(f"error in {stage}: {cause}")
        self.stage = stage
        self.cause = cause


def _call(stage, fn, *args, **kwargs):
    """Run one pipeline stage, tagging any package error with its module."""
    try:
        return fn(*args, **kwargs)
    except ZbarfitError as exc:
        raise _StageFailure(stage, exc) from exc


# ---------------------------------------------------------------------------
# domain specs
# ---------------------------------------------------------------------------

BUILTIN_SWEEP = ("disk", "annulus:0.5,1", "ellipse:2,1", "square", "rect:2,1")


def parse_domain(spec):
    """Built-in name (disk, annulus:r,R, ellipse:a,b, square, rect:w,h) or
    a spec file path."""
    name, _, args = spec.partition(":")
    try:
        if name == "disk" and not args:
            return geometry.disk()
        if name == "square" and not args:
            return geometry.square()
        if name == "annulus":
            r, big = (float(v) for v in args.split(","))
            return geometry.annulus(r, big)
        if name == "ellipse":
            a, b = (float(v) for v in args.split(","))
            return geometry.ellipse(a, b)
        if name == "rect":
            w, h = (float(v) for v in args.split(","))
            return geometry.rectangle(w, h)
    except ValueError as exc:
        raise GeometryError(f"bad domain spec {spec!r}: {exc}") from exc
    if os.path.exists(spec):
        return specfile.load_domain(spec)
    raise GeometryError(
        f"unknown domain {spec!r}: not a built-in name and not a file")


def _domain_basis(config, domain):
    if config.extra_poles:
        return bergman.default_basis(domain, config.degree, pole_orders=0,
                                     extra_poles=config.extra_poles)
    return bergman.default_basis(domain, config.degree, config.pole_orders)


def _out_path(config, name):
    os.makedirs(config.out_dir, exist_ok=True)
    return os.path.join(config.out_dir, name)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_project(config):
    domain = _call("geometry", parse_domain, config.domains[0])
    basis = _call("basis", _domain_basis, config, domain)
    result = _call("bergman", bergman.project_zbar, domain, basis)
    F = bergman.antiderivative(result)
    c0, defect = _call("bergman", bergman.boundary_defect, domain, F)
    ortho = _call("bergman", bergman.orthogonality_report, domain, result)
    coef_path = _out_path(config, "coefficients.csv")
    bergman.coefficients_csv(result, coef_path)
    summary_path = _out_path(config, "summary.csv")
    rows = [("lambda", result.lam), ("lambda_sq", result.lambda_sq),
            ("c0", c0), ("boundary_defect", defect),
            ("orthogonality_max", ortho),
            ("gram_condition", result.gram_condition)]
    with open(summary_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["quantity", "value"])
        for key, val in rows:
            w.writerow([key, "%.17g" % val])
    print(f"domain {config.domains[0]}: basis size {len(result.basis)}")
    for key, val in rows:
        print(f"  {key} = {val:.12g}")
    print(f"wrote {coef_path}, {summary_path}")
    return EXIT_OK


def _trace_family(config):
    if config.family:
        fams = tracer.figure_families(config.resolution)
        if config.family not in fams:
            raise GeometryError(
                f"unknown family {config.family!r}; expected one of "
                f"{', '.join(sorted(fams))}")
        return fams[config.family]
    if not config.terms:
        raise GeometryError("trace needs --family or explicit F terms "
                            "(--power/--log/--pole)")
    from .basis import expansion_from_pairs

    return tracer.LevelSetFamily(expansion_from_pairs(config.terms),
                                 c0=config.c0, window=config.window,
                                 resolution=config.resolution)


def cmd_trace(config):
    family = _call("tracer", _trace_family, config)
    curveset = _call("tracer", tracer.trace, family)
    csv_path = _out_path(config, "curves.csv")
    svg_path = _out_path(config, "curves.svg")
    tracer.curves_csv(curveset, csv_path)
    tracer.curves_svg(curveset, svg_path)
    print(f"{len(curveset)} closed curve(s)"
          + (f", {curveset.n_discarded_open} open chain(s) dropped"
             if curveset.n_discarded_open else ""))
    best = None
    for i, curve in enumerate(curveset):
        print(f"  curve {i}: {len(curve.vertices)} vertices, "
              f"area {curve.area:.9g}, {curve.orientation}")
        if best is None or curve.area > best.area:
            best = curve
    if best is not None:
        defects = {k: tracer.rotation_symmetry_defect(best, k)
                   for k in (2, 3, 4, 5, 6)}
        k = min(defects, key=defects.get)
        print(f"  symmetry: best {k}-fold, Hausdorff defect {defects[k]:.3g}")
    print(f"wrote {csv_path}, {svg_path}")
    return EXIT_OK


def _report_domain(config, spec, writer):
    domain = _call("geometry", parse_domain, spec)
    basis = _call("basis", _domain_basis, config, domain)
    h = config.grid_h or domain.diameter / 128.0
    rep = _call("content", content.sandwich, domain, basis, h=h, label=spec)
    nh = config.norm_h or domain.diameter / 128.0
    cn = _call("content", content.cauchy_norm_conjecture, domain, nh,
               label=spec)
    writer.writerow([spec] + ["%.17g" % v for v in (
        geometry.area(domain), geometry.perimeter(domain), rep.sqrt_rho,
        rep.lam, rep.upper, cn.norm, rep.margin_lower, rep.margin_upper,
        cn.margin, rep.rho_error, rep.lambda_error)])
    print(f"{spec}: sqrt_rho={rep.sqrt_rho:.9g} lambda={rep.lam:.9g} "
          f"upper={rep.upper:.9g} cauchy_norm={cn.norm:.9g}")
    if not domain.holes:
        sv = _call("content", content.st_venant_check, domain, h=h,
                   label=spec)
        print(f"  st_venant margin {sv.margin:+.6g} "
              f"(estimate {sv.estimated_error:.2g})")


def _sweep(config, specs):
    path = _out_path(config, "sweep.csv")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(content.SWEEP_COLUMNS)
        for spec in specs:
            _report_domain(config, spec, writer)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_sandwich(config):
    return _sweep(config, config.domains[:1])


def cmd_sweep(config):
    specs = config.domains
    if len(specs) == 1 and specs[0] == "builtin":
        specs = BUILTIN_SWEEP
    return _sweep(config, specs)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _parse_complex(text):
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    return complex(float(parts[0]), float(parts[1]))


def _parse_poles(values):
    out = []
    for item in values or ():
        loc, _, order = item.rpartition(":")
        if not _:
            raise ValueError(f"--poles needs 'x,y:maxorder', got {item!r}")
        out.append((_parse_complex(loc), int(order)))
    return tuple(out)


def _parse_terms(args):
    from .basis import AnalyticTerm

    pairs = []
    for item in args.power or ():
        p, _, c = item.partition(":")
        pairs.append((AnalyticTerm("power", int(p)), _parse_complex(c)))
    for item in args.log or ():
        loc, _, c = item.rpartition(":")
        pairs.append((AnalyticTerm("log", 0, _parse_complex(loc)),
                      _parse_complex(c)))
    for item in args.pole or ():
        bits = item.split(":")
        if len(bits) != 3:
            raise ValueError(f"--pole needs 'x,y:order:coeff', got {item!r}")
        pairs.append((AnalyticTerm("invpow", int(bits[1]),
                                   _parse_complex(bits[0])),
                      _parse_complex(bits[2])))
    return tuple(pairs)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="zbarfit",
        description="Best analytic approximation of zbar: projection, "
                    "level-set tracing, rigidity bounds, and reports.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, domain_required=True):
        p.add_argument("--domain", dest="domains", action="append",
                       required=domain_required,
                       help="built-in name (disk, annulus:r,R, ellipse:a,b, "
                            "square, rect:w,h) or a spec file path")
        p.add_argument("--degree", type=int, default=12,
                       help="max monomial degree (default 12)")
        p.add_argument("--pole-orders", type=int, default=3,
                       help="pole orders added at each hole marker")
        p.add_argument("--poles", action="append", metavar="X,Y:MAXORDER",
                       help="explicit pole group; replaces automatic "
                            "hole poles")
        p.add_argument("--out", default=None,
                       help="output directory (default $ZBARFIT_OUT or .)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized test points")

    p_project = sub.add_parser("project", help="project zbar on a domain")
    common(p_project)

    p_trace = sub.add_parser("trace", help="trace a level-set family")
    p_trace.add_argument("--family",
                         help="circle or fig3.1 ... fig3.9")
    p_trace.add_argument("--power", action="append", metavar="P:RE[,IM]",
                         help="power term coefficient of F")
    p_trace.add_argument("--log", action="append", metavar="X,Y:COEFF",
                         help="log term at a location")
    p_trace.add_argument("--pole", action="append", metavar="X,Y:ORDER:COEFF",
                         help="inverse-power term at a location")
    p_trace.add_argument("--c0", type=float, default=1.0,
                         help="level constant (default 1)")
    p_trace.add_argument("--window", default="-2.5,2.5,-2.5,2.5",
                         metavar="X0,X1,Y0,Y1", help="tracing window")
    p_trace.add_argument("--resolution", type=int, default=512,
                         help="grid resolution (default 512)")
    p_trace.add_argument("--out", default=None)
    p_trace.add_argument("--seed", type=int, default=0)

    for name, helptext in (("sandwich", "rigidity/projection/area sandwich"),
                           ("sweep", "sandwich + Cauchy norm over domains")):
        p = sub.add_parser(name, help=helptext)
        common(p, domain_required=(name == "sandwich"))
        p.add_argument("--grid-h", type=float, default=0.0,
                       help="Poisson grid spacing (default diameter/128)")
        p.add_argument("--norm-h", type=float, default=0.0,
                       help="Cauchy norm grid spacing (default diameter/128)")
    return parser


def config_from_args(args):
    out_dir = args.out or os.environ.get("ZBARFIT_OUT", ".")
    cfg = RunConfig(command=args.command, out_dir=out_dir, seed=args.seed)
    if args.command == "trace":
        cfg.family = args.family or ""
        cfg.terms = _parse_terms(args)
        cfg.c0 = args.c0
        window = tuple(float(v) for v in args.window.split(","))
        if len(window) != 4:
            raise ValueError("--window needs X0,X1,Y0,Y1")
        cfg.window = window
        cfg.resolution = args.resolution
        return cfg
    cfg.domains = tuple(args.domains or ())
    cfg.degree = args.degree
    cfg.pole_orders = args.pole_orders
    cfg.extra_poles = _parse_poles(args.poles)
    if args.command in ("sandwich", "sweep"):
        cfg.grid_h = args.grid_h
        cfg.norm_h = args.norm_h
    return cfg


COMMANDS = {"project": cmd_project, "trace": cmd_trace,
            "sandwich": cmd_sandwich, "sweep": cmd_sweep}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = config_from_args(args)
    except (ValueError, GeometryError) as exc:
        print(f"zbarfit: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.command == "sweep" and not config.domains:
        config.domains = ("builtin",)
    try:
        return COMMANDS[config.command](config)
    except _StageFailure as failure:
        print(f"zbarfit {config.command}: {failure}", file=sys.stderr)
        cause = failure.cause
        if isinstance(cause, InequalityError):
            return EXIT_INEQUALITY
        if isinstance(cause, _VALIDATION):
            return EXIT_INPUT
        return EXIT_NUMERICAL
    except InequalityError as exc:
        print(f"zbarfit {config.command}: {exc}", file=sys.stderr)
        return EXIT_INEQUALITY
    except ZbarfitError as exc:
        print(f"zbarfit {config.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
