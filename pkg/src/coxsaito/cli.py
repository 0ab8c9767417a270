"""Command-line front end.

    coxsaito verify --type B --rank 2 --kmax 3 --mmax 7 --format json
    coxsaito verify --invariants my_group.json --suite lemma21,flat
    coxsaito basis --type B --rank 2 -m 3

Exit codes: 0 all selected checks passed (skipped does not count as failed),
1 at least one check failed, 2 configuration or parse error, 3 internal
integrity error (e.g. a polynomiality certification failure).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .coxeter import build_datum, builtin_invariants
from .errors import (ConfigError, CoxsaitoError, ParseError, RankOutOfRange,
                     UnsupportedType, ValidationError)
from .invariants_io import ingest_invariants, store_from_env
from .saito import build_context, derivation_degree, xi_basis
from .verify import SUITE_ORDER, CheckReport, run_suites

FORM_NOTE = "hyperplane forms are normalized to leading coefficient 1"


@dataclass
class RunConfig:
    type_label: str | None = None
    rank: int | None = None
    i2_m: int | None = None
    invariants_path: str | None = None
    suites: list | None = None  # None means all
    k_max: int = 3
    m_max: int = 7
    p_max: int = 3
    fmt: str = "text"
    out: str | None = None

    def validate(self):
        if self.invariants_path is None and self.type_label is None:
            raise ConfigError("select a group with --type or --invariants")
        if self.k_max < 1 or self.m_max < 1 or self.p_max < 1:
            raise ConfigError("bounds must be >= 1")
        if self.suites is not None:
            unknown = [s for s in self.suites if s not in SUITE_ORDER]
            if unknown:
                raise ConfigError(
                    f"unknown suite(s) {unknown}; available: {', '.join(SUITE_ORDER)}")
        if self.fmt not in ("text", "json"):
            raise ConfigError("format must be text or json")


def _build_pair(config: RunConfig):
    if config.invariants_path is not None:
        return ingest_invariants(config.invariants_path)
    label = config.type_label
    if label.upper().startswith("I"):
        if config.i2_m is None:
            raise ConfigError("I2 groups need --m")
        datum = build_datum("I2", config.i2_m)
    else:
        if config.rank is None:
            raise ConfigError(f"type {label} needs --rank")
        datum = build_datum(label, config.rank)
    return datum, builtin_invariants(datum)


def render_text(report: CheckReport) -> str:
    lines = [f"group {report.group}  field {report.field_desc}  "
             f"invariants {report.invariants_id}"]
    for r in report.results:
        line = f"{r.status.upper():7s} {r.name:20s} [{r.paper_ref}] ({r.ms:.1f} ms)"
        lines.append(line)
        if r.witness:
            lines.append(f"        witness: {r.witness}")
    c = report.counts
    lines.append(f"summary: total={c['total']} pass={c['pass']} "
                 f"fail={c['fail']} skipped={c['skipped']}")
    lines.append(f"note: {FORM_NOTE}")
    return "\n".join(lines)


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def run(config: RunConfig, context_transform=None) -> int:
    """Execute a verification run; `context_transform` is a fault-injection
    seam used by the test harness to perturb cached values."""
    config.validate()
    datum, invariants = _build_pair(config)
    store = store_from_env(datum, invariants)
    ctx = build_context(datum, invariants, dkx_store=store)
    if context_transform is not None:
        context_transform(ctx)
    report = run_suites(ctx, config.suites if config.suites else "all",
                        config.k_max, config.m_max, config.p_max,
                        invariants_id=invariants.source)
    if config.fmt == "json":
        _emit(json.dumps(report.to_dict(), indent=2, sort_keys=True), config.out)
    else:
        _emit(render_text(report), config.out)
    if report.integrity_error:
        return 3
    return 1 if report.failed else 0


def run_basis(config: RunConfig, m: int) -> int:
    config.validate()
    if m < 0:
        raise ConfigError("basis order must be >= 0")
    datum, invariants = _build_pair(config)
    ctx = build_context(datum, invariants)
    xis = xi_basis(m, ctx)
    if config.fmt == "json":
        doc = {"group": datum.label(), "field": datum.field.describe(), "m": m,
               "basis": [{"j": j + 1,
                          "degree": derivation_degree(theta, ctx),
                          "derivation": theta.render()}
                         for j, theta in enumerate(xis)],
               "note": FORM_NOTE}
        _emit(json.dumps(doc, indent=2, sort_keys=True), config.out)
    else:
        lines = [f"group {datum.label()}  field {datum.field.describe()}  m={m}"]
        for j, theta in enumerate(xis):
            deg = derivation_degree(theta, ctx)
            lines.append(f"xi^({m})_{j + 1}  (degree {deg})")
            lines.append(f"  = {theta.render()}")
        lines.append(f"note: {FORM_NOTE}")
        _emit("\n".join(lines), config.out)
    return 0


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--type", dest="type_label",
                        help="group family: A, B, D or I2")
    parser.add_argument("--rank", type=int, help="rank for A/B/D")
    parser.add_argument("--m", dest="i2_m", type=int,
                        help="m for the dihedral group I2(m)")
    parser.add_argument("--invariants", dest="invariants_path",
                        help="path to an invariants file (custom group)")
    parser.add_argument("--format", dest="fmt", choices=("text", "json"),
                        default="text")
    parser.add_argument("--out", help="write the report to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxsaito",
        description="Exact verification of contact-order / Hodge filtration "
                    "identities for finite Coxeter arrangements.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run check suites")
    _add_common(p_verify)
    p_verify.add_argument("--suite", default="all",
                          help="comma-separated suites "
                               f"({', '.join(SUITE_ORDER)}) or 'all'")
    p_verify.add_argument("--kmax", type=int, default=3)
    p_verify.add_argument("--mmax", type=int, default=7)
    p_verify.add_argument("--pmax", type=int, default=3)

    p_basis = sub.add_parser("basis", help="print a contact-order basis")
    _add_common(p_basis)
    p_basis.add_argument("-m", "--order", dest="order", type=int, required=True,
                         help="contact order of the basis to print")
    return parser


def _config_from_args(args) -> RunConfig:
    suites = None
    if getattr(args, "suite", "all") != "all":
        suites = [s.strip() for s in args.suite.split(",") if s.strip()]
    return RunConfig(type_label=args.type_label, rank=args.rank, i2_m=args.i2_m,
                     invariants_path=args.invariants_path, suites=suites,
                     k_max=getattr(args, "kmax", 3),
                     m_max=getattr(args, "mmax", 7),
                     p_max=getattr(args, "pmax", 3),
                     fmt=args.fmt, out=args.out)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        if args.command == "verify":
            return run(config)
        return run_basis(config, args.order)
    except (ParseError, ValidationError, UnsupportedType, RankOutOfRange,
            ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CoxsaitoError as exc:
        # anything else escaping a run is an internal integrity problem
        print(f"integrity error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
