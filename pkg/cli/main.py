"""
pwsingleton CLI - 삼각표 출력, 단일 값, 분할 열거, Bell 값, EGF 검사, 항등식 검사/스위트.

Exit codes:
  0  성공 (검사 명령은 전부 pass)
  1  항등식/EGF 불일치
  2  잘못된 인자 또는 EngineError
"""
from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Literal, Sequence

from pydantic import BaseModel, ValidationError, field_validator, model_validator

from cli import render
from engine import combinatorics, egf, partitions, singleton
from engine.combinatorics import WeightFamily
from shared.config import settings
from shared.errors import EngineError
from shared.logger import get_logger, setup_logging
from shared.models import FamilyKind, OutputFormat
from verification import identities, suite

logger = get_logger(__name__)

Command = Literal["tables", "value", "enumerate", "bell", "egf-check", "check", "suite"]
EgfWhich = Literal["lemma21", "permutation", "involution", "forest", "tree", "fibonacci"]

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


# ── Request models ──
class CliConfig(BaseModel):
    """Validated invocation; bad combinations are rejected before any computation."""

    command: Command
    format: OutputFormat = OutputFormat.TEXT
    out: Path | None = None
    budget: int | None = None
    oracle_cap: int | None = None
    log_level: str | None = None

    family: FamilyKind = FamilyKind.SYMBOLIC
    weights: tuple[Fraction, ...] | None = None
    n: int | None = None
    m: int | None = None
    k: int | None = None
    r: int | None = None
    nmax: int | None = None
    mmax: int | None = None
    kmax: int | None = None
    order: int | None = None
    which: EgfWhich | None = None
    identity_id: str | None = None
    workers: int | None = None
    timings: bool = False
    no_singletons: bool = False

    model_config = {"arbitrary_types_allowed": True}

    @field_validator("weights", mode="before")
    @classmethod
    def _parse_weights(cls, v):
        if v is None or isinstance(v, tuple):
            return v
        try:
            return tuple(Fraction(x.strip()) for x in str(v).split(",") if x.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"--weights must be comma-separated rationals: {e}") from None

    @model_validator(mode="after")
    def _check_combination(self):
        for name in ("n", "m", "k", "r", "nmax", "mmax", "kmax", "order"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"--{name} must be nonnegative")
        for name in ("budget", "oracle_cap", "workers"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"--{name.replace('_', '-')} must be positive")
        if self.format == OutputFormat.CSV and self.command != "tables":
            raise ValueError("--format csv is only available for `tables`")
        if self.family == FamilyKind.CUSTOM and not self.weights:
            raise ValueError("--family custom needs --weights")
        if self.weights and self.family != FamilyKind.CUSTOM:
            raise ValueError("--weights only applies to --family custom")

        match self.command:
            case "tables":
                if self.nmax is None:
                    raise ValueError("tables needs --nmax")
            case "value":
                if self.n is None or self.k is None:
                    raise ValueError("value needs --n and --k")
                if self.k > self.n:
                    raise ValueError("value needs k ≤ n")
            case "enumerate":
                if self.n is None or self.n < 1:
                    raise ValueError("enumerate needs --n ≥ 1")
            case "bell":
                if self.n is None:
                    raise ValueError("bell needs --n")
            case "egf-check":
                if self.which is None:
                    raise ValueError("egf-check needs --which")
            case "check":
                if not self.identity_id:
                    raise ValueError("check needs --id")
        return self

    def weight_family(self) -> WeightFamily:
        if self.family == FamilyKind.CUSTOM:
            return WeightFamily.from_values(self.weights or ())
        return WeightFamily(kind=self.family)

    def bindings(self) -> dict[str, int]:
        return {p: v for p, v in (("n", self.n), ("m", self.m), ("k", self.k)) if v is not None}


# ── Parser ──
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default="text",
                        help="Output format (default: text).")
    common.add_argument("--out", type=Path, default=None,
                        help="Also write the output to this file.")
    common.add_argument("--budget", type=int, default=None,
                        help=f"Symbolic weight budget N (default: {settings.PW_VARIABLE_BUDGET}).")
    common.add_argument("--oracle-cap", type=int, default=None, dest="oracle_cap",
                        help=f"Brute-force enumeration cap (default: {settings.PW_ORACLE_CAP}).")
    common.add_argument("--log-level", default=None, dest="log_level",
                        help="Log level for stderr (default: WARNING).")

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("--family", choices=[f.value for f in FamilyKind], default=None)
    family.add_argument("--weights", default=None,
                        help="Custom weights w(1),w(2),... as comma-separated rationals.")

    p = argparse.ArgumentParser(
        prog="pwsingleton",
        description="Exact tables and identity checks for the weighted largest-singleton statistic.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("tables", parents=[common, family], help="Print rows 0..nmax of A_{n,k}.")
    s.add_argument("--nmax", type=int, required=True)

    s = sub.add_parser("value", parents=[common, family], help="Print one entry A_{n,k}.")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)

    s = sub.add_parser("enumerate", parents=[common, family],
                       help="List the set partitions of [n] with their weights.")
    s.add_argument("--n", type=int, required=True)

    s = sub.add_parser("bell", parents=[common, family],
                       help="Partial (with --r) or complete Bell value.")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, default=None)
    s.add_argument("--no-singletons", action="store_true", dest="no_singletons",
                   help="Set w(1) = 0 (complete Bell only).")

    s = sub.add_parser("egf-check", parents=[common, family],
                       help="Coefficientwise generating-function check.")
    s.add_argument("--which", choices=list(EgfWhich.__args__), required=True)
    s.add_argument("--order", type=int, default=None)

    s = sub.add_parser("check", parents=[common], help="Check one identity at one binding.")
    s.add_argument("--id", required=True, dest="identity_id")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--m", type=int, default=None)
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--timings", action="store_true")

    s = sub.add_parser("suite", parents=[common], help="Check every identity over its grid.")
    s.add_argument("--nmax", type=int, default=None)
    s.add_argument("--mmax", type=int, default=None)
    s.add_argument("--kmax", type=int, default=None)
    s.add_argument("--workers", type=int, default=None,
                   help=f"Worker processes (default: {settings.PW_WORKERS}).")
    s.add_argument("--timings", action="store_true")
    return p


def parse_config(argv: Sequence[str] | None = None) -> CliConfig:
    args = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(args).items() if v is not None}
    if values.get("family") is None:
        values.pop("family", None)
    return CliConfig(**values)


@contextmanager
def _overridden_settings(cfg: CliConfig):
    saved = (settings.PW_VARIABLE_BUDGET, settings.PW_ORACLE_CAP)
    if cfg.budget is not None:
        settings.PW_VARIABLE_BUDGET = cfg.budget
    if cfg.oracle_cap is not None:
        settings.PW_ORACLE_CAP = cfg.oracle_cap
    changed = saved != (settings.PW_VARIABLE_BUDGET, settings.PW_ORACLE_CAP)
    if changed:
        combinatorics.clear_caches()
        singleton.clear_caches()
    try:
        yield
    finally:
        settings.PW_VARIABLE_BUDGET, settings.PW_ORACLE_CAP = saved
        if changed:
            combinatorics.clear_caches()
            singleton.clear_caches()


def _emit(text: str, out: Path | None) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()
    if out is not None:
        out.write_text(text, encoding="utf-8")


# ── Commands ──
def _cmd_tables(cfg: CliConfig) -> int:
    tri = singleton.build_triangle(cfg.weight_family(), cfg.nmax)
    match cfg.format:
        case OutputFormat.CSV:
            text = render.triangle_csv(tri)
        case OutputFormat.JSON:
            text = render.triangle_json(tri)
        case _:
            text = render.triangle_text(tri)
    _emit(text, cfg.out)
    return EXIT_OK


def _cmd_value(cfg: CliConfig) -> int:
    w = cfg.weight_family()
    value = singleton.triangle_value(w, cfg.n, cfg.k)
    if cfg.format == OutputFormat.JSON:
        text = render.to_json(
            {"family": w.label, "n": cfg.n, "k": cfg.k, "value": render.json_scalar(value)}
        )
    else:
        text = value.to_text() + "\n"
    _emit(text, cfg.out)
    return EXIT_OK


def _cmd_enumerate(cfg: CliConfig) -> int:
    w = cfg.weight_family()
    items = [(p, partitions.weight(p, w)) for p in partitions.enumerate_partitions(cfg.n)]
    if cfg.format == OutputFormat.JSON:
        text = render.partitions_json(items)
    else:
        text = render.partitions_text(items)
    _emit(text, cfg.out)
    return EXIT_OK


def _cmd_bell(cfg: CliConfig) -> int:
    w = cfg.weight_family()
    if cfg.r is not None:
        value = combinatorics.partial_bell(cfg.n, cfg.r, w)
    else:
        value = combinatorics.complete_bell(cfg.n, w, cfg.no_singletons)
    if cfg.format == OutputFormat.JSON:
        payload = {"family": w.label, "n": cfg.n, "r": cfg.r, "value": render.json_scalar(value)}
        text = render.to_json(payload)
    else:
        text = value.to_text() + "\n"
    _emit(text, cfg.out)
    return EXIT_OK


def _cmd_egf_check(cfg: CliConfig) -> int:
    if cfg.which == "lemma21":
        w = cfg.weight_family()
        default = settings.PW_EGF_SYMBOLIC_ORDER if w.is_symbolic else settings.PW_EGF_NUMERIC_ORDER
        report = egf.check_lemma21(default if cfg.order is None else cfg.order, w)
    else:
        order = settings.PW_EGF_NUMERIC_ORDER if cfg.order is None else cfg.order
        report = egf.check_family_gf(cfg.which, order)
    if cfg.format == OutputFormat.JSON:
        text = render.egf_report_json(report)
    else:
        text = render.egf_report_text(report)
    _emit(text, cfg.out)
    return EXIT_OK if report.passed else EXIT_MISMATCH


def _cmd_check(cfg: CliConfig) -> int:
    report = identities.check(cfg.identity_id, cfg.bindings())
    if not cfg.timings:
        report = report.model_copy(update={"elapsed_ms": None})
    if cfg.format == OutputFormat.JSON:
        text = render.reports_json([report])
    else:
        text = render.reports_text([report])
    _emit(text, cfg.out)
    return EXIT_OK if report.passed else EXIT_MISMATCH


def _cmd_suite(cfg: CliConfig) -> int:
    ranges = {"n": cfg.nmax, "m": cfg.mmax, "k": cfg.kmax}
    reports = suite.run_suite(ranges, workers=cfg.workers, timings=cfg.timings)
    if cfg.format == OutputFormat.JSON:
        text = render.reports_json(reports)
    else:
        text = render.reports_text(reports)
    _emit(text, cfg.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_MISMATCH


_COMMANDS = {
    "tables": _cmd_tables,
    "value": _cmd_value,
    "enumerate": _cmd_enumerate,
    "bell": _cmd_bell,
    "egf-check": _cmd_egf_check,
    "check": _cmd_check,
    "suite": _cmd_suite,
}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    except ValidationError as e:
        for err in e.errors():
            print(f"pwsingleton: error: {err['msg']}", file=sys.stderr)
        return EXIT_USAGE

    if cfg.log_level:
        setup_logging(cfg.log_level)

    with _overridden_settings(cfg):
        try:
            return _COMMANDS[cfg.command](cfg)
        except EngineError as e:
            logger.error("command_failed", command=cfg.command, error=str(e))
            print(f"pwsingleton: error: {e}", file=sys.stderr)
            return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
