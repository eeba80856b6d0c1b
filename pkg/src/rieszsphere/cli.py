"""Command-line entry point.

    rieszsphere potential --d 3 --s 2 --r 2
    rieszsphere critical --d 2 --s 1 --q 1 --side exterior
    rieszsphere poly --kind B --d 12 --q 1 --export svg
    rieszsphere cap --d 2 --s 1 --R 2.6180339887 --q -5 --solve
    rieszsphere verify --level quick

Every command except ``verify`` prints one JSON record on stdout.  Exit
codes: 0 ok, 1 verification failure, 2 usage error, 3 domain error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import config, export
from .errors import DomainError, RieszError

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


@dataclass
class OutputRecord:
    command: str
    inputs: dict
    results: dict
    warnings: list = field(default_factory=list)
    schema_version: str = export.SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {"schema_version": self.schema_version, "command": self.command,
                "inputs": export.to_jsonable(self.inputs), "results": export.to_jsonable(self.results),
                "warnings": list(self.warnings)}

    def to_json(self) -> str:
        return export.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        data = json.loads(text)
        return cls(data["command"], data["inputs"], data["results"], data["warnings"], data["schema_version"])


class UsageError(Exception):
    pass


def _s_value(text: str):
    if text.strip().lower() == "log":
        return "log"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"s must be a number or 'log', got {text!r}")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number such as -1 or 1/10, got {text!r}")


def _params(d, s):
    from .potential import LOG, RieszParams
    return RieszParams(d, LOG if s == "log" else s)


# --------------------------------------------------------------------------
# commands

def cmd_potential(args) -> OutputRecord:
    from .potential import (NotAvailable, potential_closed_special, potential_sigma, potential_sigma_log,
                            potential_sigma_log_quadrature, potential_sigma_quadrature)
    p = _params(args.d, args.s)
    rows, warnings = [], []
    for R in args.r:
        if p.is_log:
            if args.method == "special":
                raise DomainError("no special closed forms exist for the logarithmic kernel")
            rep = (potential_sigma_log_quadrature if args.method == "quadrature" else potential_sigma_log)(p.d, R)
        elif args.method == "quadrature":
            rep = potential_sigma_quadrature(p, R)
        elif args.method == "special":
            rep = potential_closed_special(p, R)
            if rep is NotAvailable:
                raise DomainError(f"no special closed form for d={p.d}, s={p.s} at R={R}")
        elif args.method == "closed":
            rep = potential_sigma(p, R)
        else:
            rep = potential_closed_special(p, R)
            if rep is NotAvailable:
                rep = potential_sigma(p, R)
        warnings.extend(f"R={R}: {f}" for f in rep.flags)
        rows.append({"R": R, "value": rep.value, "method": rep.method, "err_estimate": rep.err_estimate})
    return OutputRecord("potential", {"d": args.d, "s": args.s, "r": list(args.r), "method": args.method},
                        {"table": rows}, warnings)


def cmd_critical(args) -> OutputRecord:
    from .sphere_equilibrium import critical_distance, critical_distance_log
    if args.s == "log":
        res = critical_distance_log(args.d, args.q, args.side)
    else:
        res = critical_distance(_params(args.d, args.s), args.q, args.side)
    out = res.to_dict()
    out["distance_to_sphere"] = list(res.distances())
    dist = ", ".join(f"{x:.10f}" for x in res.distances()) or "none"
    print(f"# {res.kind.value}: distance to the sphere {dist}", file=sys.stderr)
    return OutputRecord("critical", {"d": args.d, "s": args.s, "q": args.q, "side": args.side}, out)


def cmd_poly(args) -> OutputRecord:
    from .gonchar_poly import PolyKind, build_poly, roots, trinomial
    kind = PolyKind(args.kind)
    poly = trinomial(args.d, args.q) if kind == PolyKind.P else build_poly(kind, args.d, args.q, args.m)
    rs = roots(poly, seed=args.seed)
    warnings = [] if rs.converged else ["root residuals exceed the acceptance bound"]
    results = {
        "degree": poly.degree,
        "coefficients": [f"{c.numerator}/{c.denominator}" for c in poly.coeffs],
        "roots": [complex(z) for z in rs.roots],
        "residuals": [float(r) for r in rs.residuals],
        "converged": rs.converged,
        "real_roots": rs.real_roots(),
    }
    stem = args.out or f"poly_{kind.value}_d{args.d}_m{args.m}"
    files = []
    if args.export == "csv":
        path = stem + ".csv"
        export.write_csv(path, ["re", "im", "residual"],
                         [(complex(z).real, complex(z).imag, float(r)) for z, r in zip(rs.roots, rs.residuals)])
        files.append(path)
    elif args.export == "svg":
        path = stem + ".svg"
        export.write_svg(path, rs.roots, title=f"zeros of {kind.value}, d={args.d}, q={args.q}, m={args.m}")
        files.append(path)
    results["files"] = files
    inputs = {"kind": kind.value, "d": args.d, "q": args.q, "m": args.m, "export": args.export}
    return OutputRecord("poly", inputs, results, warnings)


def cmd_cap(args) -> OutputRecord:
    from . import cap_equilibrium as ce
    cfg = ce.CapConfig(args.d, args.s, args.R, args.q)
    inputs = {"d": args.d, "s": args.s, "R": args.R, "q": args.q,
              "t": args.t, "solve": args.solve, "samples": args.samples}
    n = args.samples
    if args.solve:
        st = ce.solve_tc_exceptional(cfg) if cfg.exceptional else ce.solve_tc(cfg)
    else:
        if args.t is None:
            raise UsageError("cap needs --t or --solve")
        st = ce.exceptional_state(cfg, args.t) if cfg.exceptional else ce.state(cfg, args.t)
    t, ph = st.t, st.phi
    results = {"state": st.to_dict(), "exceptional": cfg.exceptional,
               "threshold": cfg.threshold(t) if t < 1 else None}
    warnings = list(st.flags)
    if t < 1:
        us = [-1 + (t + 1) * k / n for k in range(n)]
        dens = [ce.eta_density(cfg, t, u, ph) for u in us]
        results["density"] = [{"u": u, "density": v} for u, v in zip(us, dens)]
        results["density_min"] = min(dens)
        xis = [min(1.0, t + (1 - t) * k / n) for k in range(1, n + 1)]
        results["weighted_potential"] = (
            [{"xi": x, "value": ph} for x in us]
            + [{"xi": x, "value": ce.weighted_potential_outside(cfg, t, x, ph)} for x in xis])
        # density is nonnegative exactly when phi reaches the boundary threshold
        results["nonnegative"] = bool(ph >= cfg.threshold(t) or math.isclose(ph, cfg.threshold(t), rel_tol=1e-12))
    else:
        results["support"] = "sphere"
        results["nonnegative"] = True
    if cfg.exceptional and t < 1:
        results["boundary_charge"] = ce.boundary_charge_from(cfg, t, ph)
    return OutputRecord("cap", inputs, results, warnings)


def cmd_verify(args) -> int:
    from . import acceptance
    results = acceptance.run(args.level)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (": failed " + ", ".join(r.name for r in failed) if failed else ""))
    if args.json:
        export.write_json(args.json, {"schema_version": export.SCHEMA_VERSION, "level": args.level,
                                      "criteria": [r.to_dict() for r in results]})
    return EXIT_VERIFY if failed else EXIT_OK


# --------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rieszsphere",
                                 description="Riesz potentials, signed equilibria and critical distances on spheres.")
    ap.add_argument("--config", help="JSON file of tolerance overrides (default: $%s)" % config.CONFIG_ENV_VAR)
    ap.add_argument("--output", "-o", help="write the JSON record here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("potential", help="potential of the normalized surface measure at radii R")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=_s_value, required=True, help="Riesz exponent, or 'log'")
    p.add_argument("--r", type=float, nargs="+", required=True, help="one or more radii")
    p.add_argument("--method", choices=["auto", "closed", "quadrature", "special"], default="auto")
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("critical", help="critical distances for a point charge")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=_s_value, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--side", choices=["exterior", "interior"], required=True)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("poly", help="build a polynomial family member and compute its zeros")
    p.add_argument("--kind", choices=["A", "B", "C", "D", "P"], required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", type=_rational, required=True, help="rational charge, e.g. -1 or 1/10")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--export", choices=["json", "csv", "svg"], default="json")
    p.add_argument("--out", help="file stem for csv/svg exports")
    p.add_argument("--seed", type=int, default=20120901)
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("cap", help="signed equilibrium on a spherical cap")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--t", type=float)
    g.add_argument("--solve", action="store_true")
    p.add_argument("--samples", type=int, default=41)
    p.set_defaults(func=cmd_cap)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--level", choices=["quick", "full"], default="quick")
    p.add_argument("--json", help="also write the results as JSON")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config.set_active(config.load(args.config))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        out = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RieszError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    finally:
        config.set_active(config.DEFAULT)
    if isinstance(out, int):
        return out
    text = out.to_json()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
