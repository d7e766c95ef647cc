"""Command line front end.

Data goes to standard output, progress and errors to standard error.  The
KL cache is the only persistent state: ``--cache FILE`` or, failing that,
a file inside ``$TILTCHAR_CACHE_DIR`` when that variable is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .charring import NotDivisible, freudenthal, to_json
from .kl import KLTable
from .order import AffineContext, up_down_set
from .rootdata import RootSystem, build_root_system, format_weight, parse_type, parse_weight
from .steinberg import AlgorithmError, compare, minimal_character, t_zeta

log = logging.getLogger("tiltchar")

COMMANDS = ("weyl", "downset", "mp", "tzeta", "compare", "klcache")
FORMATS = ("json", "csv", "text")
CACHE_ENV = "TILTCHAR_CACHE_DIR"


class SpecError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class JobSpec:
    command: str
    type_label: str
    rank: int
    p: int | None = None
    weight: tuple[int, ...] | None = None
    fmt: str = "text"
    cache: Path | None = None
    max_length: int | None = None
    report_dir: Path | None = None

    def validate(self) -> RootSystem:
        if self.command not in COMMANDS:
            raise SpecError(f"unknown command {self.command!r}")
        if self.fmt not in FORMATS:
            raise SpecError(f"unknown format {self.fmt!r}")
        rs = build_root_system(self.type_label, self.rank)
        if self.command != "klcache":
            if self.weight is None:
                raise SpecError(f"{self.command} needs a weight (-w)")
            if len(self.weight) != self.rank:
                raise SpecError(f"weight {format_weight(self.weight)} has {len(self.weight)} coordinates, {rs.name} needs {self.rank}")
            if min(self.weight) < 0:
                raise SpecError(f"weight {format_weight(self.weight)} is not dominant")
        if self.command not in ("weyl", "klcache"):
            if self.p is None:
                raise SpecError(f"{self.command} needs a prime (-p)")
        if self.p is not None and not is_prime(self.p):
            raise SpecError(f"p={self.p} is not prime")
        if self.command == "klcache":
            if self.max_length is None or self.max_length < 0:
                raise SpecError("klcache needs --max-length N with N >= 0")
            if self.cache_path() is None:
                raise SpecError(f"klcache needs --cache FILE or ${CACHE_ENV}")
        return rs

    def cache_path(self) -> Path | None:
        if self.cache is not None:
            return self.cache
        env = os.environ.get(CACHE_ENV)
        if env:
            return Path(env) / f"kl_{self.type_label}{self.rank}.txt"
        return None


# ---------------------------------------------------------------------------
# rendering


def _csv(header, rows) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(header)
    out.writerows(rows)
    return buf.getvalue()


def _render_character(eta, spec: JobSpec) -> str:
    if spec.fmt == "json":
        return to_json(eta, spec.p) + "\n"
    rows = eta.sorted_items()
    if spec.fmt == "csv":
        return _csv(["weight", "coeff"], [(format_weight(w), c) for w, c in rows])
    sym = "chi" if eta.basis == "weyl" else "s"
    lines = [f"{c} {sym}({format_weight(w)})" for w, c in rows]
    lines.append(f"orbits {len(rows)}")
    return "\n".join(lines) + "\n"


def _render_downset(weights, spec: JobSpec, rs: RootSystem) -> str:
    ordered = sorted(weights)
    if spec.fmt == "json":
        doc = {
            "type": rs.name,
            "p": spec.p,
            "weight": list(spec.weight),
            "count": len(ordered),
            "weights": [list(w) for w in ordered],
        }
        return json.dumps(doc) + "\n"
    if spec.fmt == "csv":
        return _csv(["weight"], [(format_weight(w),) for w in ordered])
    return "\n".join([format_weight(w) for w in ordered] + [f"count {len(ordered)}"]) + "\n"


def _render_report(report, spec: JobSpec) -> str:
    if spec.fmt == "csv":
        return report.to_csv()
    if spec.fmt == "json":
        doc = {
            "type": report.type_label,
            "p": report.p,
            "weight": list(report.lam),
            "agrees": report.agrees,
            "rows": [{"weight": list(mu), "t_zeta": t, "m_p": m, "diff": t - m} for mu, t, m in report.rows],
        }
        return json.dumps(doc) + "\n"
    width = max(len(format_weight(mu)) for mu, _, _ in report.rows)
    lines = [f"{'weight':<{width}}  t_zeta  m_p"]
    for mu, t, m in report.rows:
        mark = "  *" if t != m else ""
        lines.append(f"{format_weight(mu):<{width}}  {t:>6}  {m:>3}{mark}")
    lines.append(f"rows {len(report.rows)}")
    lines.append(f"agrees={'true' if report.agrees else 'false'}")
    return "\n".join(lines) + "\n"


def _write_report_files(report, spec: JobSpec) -> list[Path]:
    from .plotting import plot_report

    stem = f"compare_{report.type_label}_p{report.p}_{'-'.join(map(str, report.lam))}"
    spec.report_dir.mkdir(parents=True, exist_ok=True)
    csv_path = spec.report_dir / f"{stem}.csv"
    csv_path.write_text(report.to_csv())
    fig_path = plot_report(report, spec.report_dir / f"{stem}.png")
    return [csv_path, fig_path]


def _write_character_files(eta, spec: JobSpec, rs: RootSystem) -> list[Path]:
    from .plotting import plot_character

    stem = f"{spec.command}_{rs.name}_p{spec.p}_{'-'.join(map(str, spec.weight))}"
    spec.report_dir.mkdir(parents=True, exist_ok=True)
    csv_path = spec.report_dir / f"{stem}.csv"
    csv_path.write_text(_csv(["weight", "coeff"], [(format_weight(w), c) for w, c in eta.sorted_items()]))
    title = f"{spec.command} {rs.name} p={spec.p} ({format_weight(spec.weight)})"
    return [csv_path, plot_character(eta, spec.report_dir / f"{stem}.png", title)]


# ---------------------------------------------------------------------------


def _table(spec: JobSpec, rs: RootSystem) -> KLTable:
    path = spec.cache_path()
    if path is not None:
        log.info("KL cache %s", path)
    return KLTable(rs, "spherical", path)


def run(spec: JobSpec, out=None) -> int:
    """Execute one job; return the process exit status."""
    out = out or sys.stdout
    try:
        rs = spec.validate()
    except (SpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    lam = spec.weight
    try:
        ctx = AffineContext(rs, spec.p) if spec.p is not None else None
        extra: list[Path] = []
        if spec.command == "weyl":
            eta = freudenthal(rs, lam)
            text = _render_character(eta, spec)
        elif spec.command == "downset":
            text = _render_downset(up_down_set(lam, ctx), spec, rs)
        elif spec.command in ("mp", "tzeta"):
            if spec.command == "mp":
                eta = minimal_character(lam, ctx)
            else:
                eta = t_zeta(lam, ctx, _table(spec, rs))
            text = _render_character(eta, spec)
            if spec.report_dir is not None:
                extra = _write_character_files(eta, spec, rs)
        elif spec.command == "compare":
            report = compare(lam, ctx, _table(spec, rs))
            text = _render_report(report, spec)
            if spec.report_dir is not None:
                extra = _write_report_files(report, spec)
        else:
            table = _table(spec, rs)
            count = table.warm(spec.max_length)
            if spec.fmt == "json":
                text = json.dumps({"type": rs.name, "max_length": spec.max_length, "columns": count}) + "\n"
            elif spec.fmt == "csv":
                text = _csv(["type", "max_length", "columns"], [(rs.name, spec.max_length, count)])
            else:
                text = f"columns {count}\n"
    except NotDivisible as exc:
        print(f"error: not divisible at weight {format_weight(lam)}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, AlgorithmError) as exc:
        where = f" at weight {format_weight(lam)}" if lam is not None else ""
        print(f"error{where}: {exc}", file=sys.stderr)
        return 1
    out.write(text)
    for path in extra:
        log.info("wrote %s", path)
    log.info("%s done in %.2fs", spec.command, time.perf_counter() - t0)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tiltchar", description="Steinberg quotient and minimal character computations.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("type", help="root system, e.g. A3")
    ap.add_argument("-p", type=int, help="prime")
    ap.add_argument("-w", "--weight", help="dominant weight, comma separated, e.g. 4,4,4")
    ap.add_argument("-f", "--format", default="text", choices=FORMATS)
    ap.add_argument("--cache", type=Path, help=f"KL cache file (default: a file in ${CACHE_ENV} if set)")
    ap.add_argument("--max-length", type=int, help="klcache: warm all dominant alcoves up to this length")
    ap.add_argument("--report", type=Path, metavar="DIR", help="also write CSV and PNG files into DIR")
    ap.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")
    return ap


def _configure_logging(verbose: bool) -> None:
    # own handler bound to the current stderr, so repeated in-process calls behave alike
    for h in list(log.handlers):
        log.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if verbose else logging.WARNING)
    log.propagate = False


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        label, rank = parse_type(args.type)
        weight = parse_weight(args.weight) if args.weight else None
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    spec = JobSpec(
        command=args.command,
        type_label=label,
        rank=rank,
        p=args.p,
        weight=weight,
        fmt=args.format,
        cache=args.cache,
        max_length=args.max_length,
        report_dir=args.report,
    )
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())
