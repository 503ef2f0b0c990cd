"""Command-line front end.

Exit codes: 0 pass/converged, 1 witnesses found, 2 no convergence,
3 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from . import catalog
from .conditions import check_all
from .space import DEFAULT_TOL, DomainError, Region, contains_center, left_closed_ball
from .solver import Status, iterate, verify_ledger

EXIT_OK, EXIT_WITNESSES, EXIT_NO_CONVERGENCE, EXIT_CONFIG = 0, 1, 2, 3


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, "%s: error: %s\n" % (self.prog, message))


@dataclass
class RunConfig:
    scenario_name: str = "example1"
    resolution: int = 41
    tol: float = 1e-9
    max_iter: int = 10000
    j_max: int = 64
    output_format: str = "json"
    output_path: str | None = None
    limit: int = 20

    def validate(self):
        if self.resolution < 1:
            raise ConfigError("--resolution must be a positive integer")
        if not self.tol > 0:
            raise ConfigError("--tol must be > 0")
        if self.max_iter < 1:
            raise ConfigError("--max-iter must be a positive integer")
        if self.j_max < 1:
            raise ConfigError("--j-max must be a positive integer")
        if self.limit < 1:
            raise ConfigError("--limit must be a positive integer")

    def entry(self) -> catalog.CatalogEntry:
        try:
            return catalog.get(self.scenario_name)
        except KeyError:
            known = ", ".join(e.name for e in catalog.entries())
            raise ConfigError("unknown scenario %r (known: %s)" % (self.scenario_name, known))


def _emit(text: str, cfg: RunConfig):
    if cfg.output_path:
        with open(cfg.output_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_list(cfg: RunConfig) -> int:
    items = catalog.listing()
    if cfg.output_format == "csv":
        _emit(_rows_csv(["name", "domain", "s", "epsilon"],
                        [[i["name"], i["domain"], i["s"], i["epsilon"]] for i in items]), cfg)
    else:
        _emit(_json(items), cfg)
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    sc = cfg.entry().scenario
    report = check_all(sc, cfg.resolution, cfg.j_max, limit=cfg.limit)
    if cfg.output_format == "csv":
        d = report.to_dict()
        rows = []
        for key in ("axioms", "dominance_U", "dominance_V", "triangular", "cond1", "cond2"):
            r = d[key]
            rows.append([key, r["passed"], r["checked"], r.get("violations", len(r["witnesses"]))])
        for key, r in d["psi"].items():
            passed = r["verdict"] == "convergent-evidence" if key == "series" else r["passed"]
            rows.append(["psi_" + key, passed, r.get("checked", ""), ""])
        rows.append(["cond3", d["cond3"]["passed"], len(d["cond3"]["partial_sums"]), ""])
        _emit(_rows_csv(["check", "passed", "checked", "violations"], rows), cfg)
    else:
        _emit(_json(report.to_dict()), cfg)
    print("check %s: %s" % (sc.name, report.verdict), file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_WITNESSES


def _solve(cfg: RunConfig):
    sc = cfg.entry().scenario
    result = iterate(sc, cfg.max_iter, cfg.tol)
    return sc, result


def cmd_solve(cfg: RunConfig) -> int:
    try:
        sc, result = _solve(cfg)
    except DomainError as exc:
        print("solve: %s" % exc, file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    if cfg.output_format == "csv":
        _emit(result.trace.to_csv(), cfg)
    else:
        d = {"scenario": sc.name, **result.to_dict(),
             "ledger": verify_ledger(result.trace, sc.psi).to_dict()}
        _emit(_json(d), cfg)
    print("solve %s: %s after %d iterations" % (sc.name, result.status.value, result.iterations),
          file=sys.stderr)
    return EXIT_OK if result.status is Status.COMMON_FIXED_POINT else EXIT_NO_CONVERGENCE


def cmd_trace(cfg: RunConfig) -> int:
    try:
        sc, result = _solve(cfg)
    except DomainError as exc:
        print("trace: %s" % exc, file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    tr = result.trace
    _emit(tr.to_csv() if cfg.output_format == "csv" else tr.to_jsonl(), cfg)
    ledger = verify_ledger(tr, sc.psi)
    print("trace %s: %s, ledger %s" % (sc.name, result.status.value,
                                       "ok" if ledger.passed else "violated"), file=sys.stderr)
    return EXIT_OK if result.status is Status.COMMON_FIXED_POINT else EXIT_NO_CONVERGENCE


def cmd_ball(cfg: RunConfig, center: float | None, radius: float | None) -> int:
    sc = cfg.entry().scenario
    center = sc.x0 if center is None else center
    radius = sc.epsilon if radius is None else radius
    if radius < 0:
        raise ConfigError("--radius must be >= 0")
    if center not in sc.domain:
        raise ConfigError("--center %r is outside the domain %s" % (center, sc.domain))
    grid = sc.domain.sample(cfg.resolution).union([center])
    ball = left_closed_ball(sc.space, center, radius, grid)
    note = None
    if not contains_center(ball, center):
        note = "center excluded: q(c,c) = %r > radius" % sc.space.q(center, center)
    if cfg.output_format == "csv":
        _emit(_rows_csv(["x"], [[p] for p in ball]), cfg)
    else:
        _emit(_json({"scenario": sc.name, "center": center, "radius": radius,
                     "resolution": cfg.resolution, "size": len(ball),
                     "points": list(ball.points), "note": note}), cfg)
    if note:
        print("ball: " + note, file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--scenario", default="example1")
    common.add_argument("--resolution", type=int, default=41,
                        help="grid points per unit interval")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--max-iter", type=int, default=10000)
    common.add_argument("--j-max", type=int, default=64)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--limit", type=int, default=20,
                        help="witnesses kept per report (largest margins first)")

    p = _Parser(prog="qpbfix", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("list", parents=[common], help="list catalog scenarios")
    sub.add_parser("check", parents=[common], help="run every hypothesis check")
    sub.add_parser("solve", parents=[common], help="run the alternating iteration")
    sub.add_parser("trace", parents=[common], help="solve and dump the per-step trace")
    b = sub.add_parser("ball", parents=[common], help="materialize a left closed ball")
    b.add_argument("--center", type=float, default=None)
    b.add_argument("--radius", type=float, default=None)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.scenario, args.resolution, args.tol, args.max_iter, args.j_max,
                    args.format, args.out, args.limit)
    try:
        cfg.validate()
        if args.command == "list":
            return cmd_list(cfg)
        if args.command == "check":
            return cmd_check(cfg)
        if args.command == "solve":
            return cmd_solve(cfg)
        if args.command == "trace":
            return cmd_trace(cfg)
        return cmd_ball(cfg, args.center, args.radius)
    except ConfigError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
