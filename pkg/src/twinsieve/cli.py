"""Command-line entry point.

Data goes to stdout (or ``--out``) as CSV with a header row; progress and
the wall-time summary go to stderr.  Exit codes: 0 success, 1 violation or
engine mismatch under ``--strict``, 2 usage error, 3 capacity or budget
exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import bounds, inclusion_exclusion, lemma_checks, prime_basis, residue_sieve
from .errors import CapacityError, PreconditionError

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3
ENGINES = ("brute", "sieve", "ie")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    n: int | None = None
    n_range: tuple[int, int] | None = None
    basis: tuple[int, ...] | None = None
    engine: str = "sieve"
    id: str | None = None
    pmax: int = 97
    mmax: int | None = None
    nmax: int = 2000
    vmin: int = 3
    vmax: int = 30
    out: str | None = None
    dump_all: bool = False
    strict: bool = False


def _prime_list(text: str) -> tuple[int, ...]:
    try:
        ps = tuple(int(x) for x in text.replace("+", ",").split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a prime list: {text!r}")
    bad = [p for p in ps if not prime_basis.is_prime(p)]
    if bad:
        raise argparse.ArgumentTypeError(f"not prime: {bad}")
    if len(set(ps)) != len(ps):
        raise argparse.ArgumentTypeError(f"repeated prime in {text!r}")
    return ps


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twinsieve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--out", help="write CSV here instead of stdout")
        p.add_argument("--strict", action="store_true", help="exit 1 on any violation or mismatch")
        p.add_argument("--config", help="flat key=value file; command-line flags win")

    def n_args(p, with_range=True):
        p.add_argument("--n", type=_positive)
        if with_range:
            p.add_argument("--nmin", type=_positive)
            p.add_argument("--nmax", type=_positive)

    p = sub.add_parser("count", help="twin-pair counts from the selected engines")
    n_args(p)
    p.add_argument("--engine", choices=ENGINES + ("all",), default="sieve")
    common(p)

    p = sub.add_parser("trace", help="step-by-step deletion listing")
    n_args(p, with_range=False)
    p.add_argument("--basis", type=_prime_list, help="comma-separated primes (default: primes <= sqrt n)")
    common(p)

    p = sub.add_parser("expand", help="inclusion-exclusion term dump")
    n_args(p, with_range=False)
    p.add_argument("--basis", type=_prime_list, help="comma-separated primes (default: primes <= sqrt n)")
    common(p)

    p = sub.add_parser("lemmas", help="scan an identity over its default grid")
    p.add_argument("--id", required=True, choices=[i.value for i in lemma_checks.IdentityId])
    p.add_argument("--pmax", type=_positive, default=97)
    p.add_argument("--mmax", type=_positive)
    p.add_argument("--nmax", type=_positive, default=2000, help="sequence length for EQ3_1")
    p.add_argument("--dump-all", action="store_true", help="one row per cell, not just violations")
    common(p)

    p = sub.add_parser("bounds", help="figure table: D'(n) vs actual twin count")
    p.add_argument("--vmin", type=int, default=3)
    p.add_argument("--vmax", type=int, default=30)
    common(p)

    p = sub.add_parser("pi", help="Legendre prime count vs direct sieve count")
    n_args(p)
    common(p)
    return parser


def _config_args(path: str) -> list[str]:
    args = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"{path}: expected key=value, got {raw!r}")
        flag = "--" + key.strip().replace("_", "-")
        value = value.strip()
        if value.lower() in ("true", "yes", "1") and flag in ("--strict", "--dump-all"):
            args.append(flag)
        elif value.lower() in ("false", "no", "0") and flag in ("--strict", "--dump-all"):
            continue
        else:
            args += [flag, value]
    return args


def parse_args(argv: list[str]) -> RunConfig:
    """Validated configuration; usage problems exit with status 2."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.config:
        try:
            extra = _config_args(ns.config)
        except (OSError, argparse.ArgumentTypeError) as exc:
            parser.error(f"argument --config: {exc}")
        # later occurrences win, so config values go first
        ns = parser.parse_args([argv[0] if argv else ""] + extra + list(argv[1:]))

    n_range = None
    if ns.subcommand in ("count", "pi"):
        if ns.n is not None and (ns.nmin is not None or ns.nmax is not None):
            parser.error("argument --n: not allowed with --nmin/--nmax")
        if ns.n is None:
            if ns.nmin is None or ns.nmax is None:
                parser.error("argument --n: required (or both --nmin and --nmax)")
            if ns.nmin > ns.nmax:
                parser.error("argument --nmin: must not exceed --nmax")
            n_range = (ns.nmin, ns.nmax)
    elif ns.subcommand in ("trace", "expand") and ns.n is None:
        parser.error("argument --n: required")
    if ns.subcommand == "bounds" and not 3 <= ns.vmin <= ns.vmax:
        parser.error("argument --vmin: need 3 <= vmin <= vmax")

    return RunConfig(
        subcommand=ns.subcommand,
        n=getattr(ns, "n", None),
        n_range=n_range,
        basis=getattr(ns, "basis", None),
        engine=getattr(ns, "engine", "sieve"),
        id=getattr(ns, "id", None),
        pmax=getattr(ns, "pmax", 97),
        mmax=getattr(ns, "mmax", None),
        nmax=getattr(ns, "nmax", None) or 2000,
        vmin=getattr(ns, "vmin", 3),
        vmax=getattr(ns, "vmax", 30),
        out=ns.out,
        dump_all=getattr(ns, "dump_all", False),
        strict=ns.strict,
    )


def _ns(cfg: RunConfig) -> range:
    if cfg.n is not None:
        return range(cfg.n, cfg.n + 1)
    lo, hi = cfg.n_range
    return range(lo, hi + 1)


def ie_twin_count(n: int) -> int:
    """Twin count with D0 taken from the inclusion-exclusion engine."""
    if n < residue_sieve.ASSEMBLY_THRESHOLD:
        return residue_sieve.brute_twin_count(n)
    d0 = inclusion_exclusion.d0_via_ie(n, prime_basis.basis_for(n).primes)
    return d0 + residue_sieve.d_sqrt(n) - residue_sieve.d1_correction(n)


_COUNTERS = {
    "brute": residue_sieve.brute_twin_count,
    "sieve": residue_sieve.twin_count,
    "ie": ie_twin_count,
}


def _run_count(cfg, out, log):
    engines = ENGINES if cfg.engine == "all" else (cfg.engine,)
    out.write("n,engine,twin_count\n")
    mismatches = 0
    for n in _ns(cfg):
        values = {}
        for name in engines:
            values[name] = _COUNTERS[name](n)
            out.write(f"{n},{name},{values[name]}\n")
        if len(set(values.values())) > 1:
            mismatches += 1
            log(f"engine mismatch at n={n}: {values}")
    return mismatches


def _run_trace(cfg, out, log):
    basis = cfg.basis if cfg.basis is not None else prime_basis.basis_for(cfg.n).primes
    steps = residue_sieve.deletion_trace(range(1, cfg.n + 1), residue_sieve.zeros_first_order(basis))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["step", "rule", "count", "remaining"])
    writer.writerow([0, "start", cfg.n, "[1, ..., %d]" % cfg.n])
    for i, step in enumerate(steps, 1):
        writer.writerow([i, f"k mod {step.prime} != {step.residue}", len(step.remaining), str(list(step.remaining))])
    return 0


def _run_expand(cfg, out, log):
    basis = cfg.basis if cfg.basis is not None else prime_basis.basis_for(cfg.n).primes
    lines = inclusion_exclusion.term_rows(cfg.n, basis)
    out.write("\n".join(lines) + "\n")
    total = sum(int(line.split(",")[0]) * int(line.split(",")[-1]) for line in lines[1:])
    log(f"D0({cfg.n}) via {len(lines) - 1} terms = {total}")
    return 0


def _run_lemmas(cfg, out, log):
    grid = lemma_checks.default_grid(cfg.id, pmax=cfg.pmax, mmax=cfg.mmax, nmax=cfg.nmax)
    log(f"{grid.description} ({grid.size} cells)")
    out.write(lemma_checks.CSV_HEADER + "\n")
    checked = skipped = violations = 0
    for result in lemma_checks.iter_checks(cfg.id, grid):
        if result is None:
            skipped += 1
            continue
        checked += 1
        if not result.holds:
            violations += 1
        if cfg.dump_all or not result.holds:
            out.write(result.csv() + "\n")
    log(f"{cfg.id}: checked={checked} skipped={skipped} violations={violations}")
    return violations


def _run_bounds(cfg, out, log):
    rows = bounds.figure_table(cfg.vmin, cfg.vmax)
    out.write("\n".join(bounds.figure_csv(rows)) + "\n")
    below = sum(1 for r in rows if r.d_actual < r.d_prime)
    if below:
        log(f"{below} rows with d_actual < d_prime")
    return below


def _run_pi(cfg, out, log):
    out.write("n,legendre_pi,direct_pi,match\n")
    bad = 0
    for n in _ns(cfg):
        a, b = prime_basis.legendre_pi(n), prime_basis.prime_pi(n)
        bad += a != b
        out.write(f"{n},{a},{b},{str(a == b).lower()}\n")
    return bad


_RUNNERS = {
    "count": _run_count,
    "trace": _run_trace,
    "expand": _run_expand,
    "lemmas": _run_lemmas,
    "bounds": _run_bounds,
    "pi": _run_pi,
}


def execute(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    def log(msg):
        print(msg, file=stderr)

    buf = io.StringIO()
    start = time.perf_counter()
    try:
        failures = _RUNNERS[cfg.subcommand](cfg, buf, log)
    except CapacityError as exc:
        log(f"capacity: {exc}")
        return EXIT_CAPACITY
    except PreconditionError as exc:
        log(f"usage: {exc}")
        return EXIT_USAGE
    finally:
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(buf.getvalue())
        else:
            stdout.write(buf.getvalue())
    log(f"{cfg.subcommand}: done in {time.perf_counter() - start:.3f} s")
    if failures and cfg.strict:
        return EXIT_VIOLATION
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return execute(cfg)
