"""Command-line interface: table and figure emitters, conjecture scans,
store management.

Figures are emitted as the plotted series in CSV (two columns plus a
provenance comment), never as images.  Exit codes: 0 success, 1 a check
reported violations, 2 usage, 3 file parse error, 4 incomplete data,
5 factoring budget exhausted.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import arith, cyclotomic, hcn, mersenne, render
from .errors import IncompleteDataError, StoreCorruptionError, StoreParseError
from .factoring import Deadline, FactorPolicy
from .mersenne import MINUS, PLUS
from .store import BFileKind, FactorStore, Kind, StoreKey

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INCOMPLETE = 4
EXIT_BUDGET = 5

ENV_PREFIX = "MERSENNETAU_"

_BFILE_PREFIXES = {
    "tau-m-": BFileKind.TAU_MERSENNE_MINUS,
    "tau-m+": BFileKind.TAU_MERSENNE_PLUS,
    "omega-phi2": BFileKind.OMEGA_PHI2,
}


@dataclass
class RunConfig:
    store_path: str | None
    import_paths: list[str]
    policy: FactorPolicy
    budget_secs: float | None
    workers: int
    output_format: str  # "csv" | "tsv"
    out_path: str | None
    store: FactorStore = field(init=False)

    def __post_init__(self):
        self.store = FactorStore(self.policy)

    @property
    def sep(self) -> str:
        return "\t" if self.output_format == "tsv" else ","

    def deadline(self) -> Deadline:
        return Deadline(self.budget_secs)


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name, default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mersennetau",
        description="Exact divisor statistics of 2^n +/- 1 via cyclotomic factorization.")
    parser.add_argument("--store", default=_env("STORE"),
                        help="factor store file (loaded if present, written back on exit)")
    parser.add_argument("--import", dest="imports", action="append",
                        default=None, metavar="PATH or KIND=PATH",
                        help="store file, or b-file as tau-m-=PATH / tau-m+=PATH / omega-phi2=PATH")
    parser.add_argument("--budget-secs", type=float,
                        default=float(_env("BUDGET_SECS", 60.0)),
                        help="wall-clock soft limit per Phi_d(2) factoring job (default 60)")
    parser.add_argument("--seed", type=int, default=int(_env("SEED", 1)),
                        help="rng seed for the factoring policy (default 1)")
    parser.add_argument("--workers", type=int, default=int(_env("WORKERS", 1)),
                        help="parallel factoring jobs within one command (default 1)")
    parser.add_argument("--format", choices=("csv", "tsv"),
                        default=_env("FORMAT", "csv"))
    parser.add_argument("--out", default=_env("OUT"),
                        help="output file (default stdout)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table1", help="record-breaking indices N with tau(2^N-1) and tau(2^N+1)/N")
    p.add_argument("limit", type=int)
    p = sub.add_parser("table2", help="omega(Phi_d(2)) and omega/log d for d <= max_d")
    p.add_argument("max_d", type=int)
    p = sub.add_parser("figure1", help="tau(2^n-1) series")
    p.add_argument("max_n", type=int)
    p = sub.add_parser("figure2", help="f(2n)/f(n) ratio series")
    p.add_argument("max_n", type=int)
    p = sub.add_parser("figure3", help="omega(Phi_d(2)) series")
    p.add_argument("max_d", type=int)
    p = sub.add_parser("hcn", help="highly composite numbers with the tau-growth exponent")
    p.add_argument("limit", type=int)
    p = sub.add_parser("log-sum", help="sum of log(2^k-1) versus n(n+1)log2/2")
    p.add_argument("n", type=int)
    p = sub.add_parser("omega-dist", help="counts of n <= x with big_omega(n) = K")
    p.add_argument("x", type=int)
    p.add_argument("--k-max", type=int, default=None)
    p = sub.add_parser("factor", help="factor one Phi_d(2) or 2^n +/- 1")
    p.add_argument("kind", choices=[k.value for k in Kind])
    p.add_argument("index", type=int)
    p = sub.add_parser("import", help="merge store files / b-files into the store")
    p.add_argument("paths", nargs="+", metavar="PATH or KIND=PATH")
    sub.add_parser("export", help="write the store to --out (or stdout)")
    p = sub.add_parser("check-conj1", help="tau(2^N+1)/N over record indices (trend data)")
    p.add_argument("limit", type=int)
    p = sub.add_parser("check-conj2", help="exceptions to omega(Phi_d(2)) <= c log d")
    p.add_argument("max_d", type=int)
    p.add_argument("--c", type=float, default=10.0)
    sub.add_parser("check-invariants", help="run the quick self-check battery")
    return parser


def _parse_import_arg(arg: str):
    for prefix, kind in _BFILE_PREFIXES.items():
        if arg.startswith(prefix + "="):
            return kind, arg[len(prefix) + 1:]
    return None, arg


def _load_inputs(config: RunConfig) -> None:
    if config.store_path and Path(config.store_path).is_file():
        config.store.import_store_file(config.store_path, check_primality=False)
    for arg in config.import_paths:
        kind, path = _parse_import_arg(arg)
        if kind is None:
            config.store.import_store_file(path, check_primality=False)
        else:
            config.store.attach_bfile(kind, path)


def _save_store(config: RunConfig) -> None:
    if config.store_path and config.store.records:
        config.store.export_store_file(config.store_path)


def _emit(config: RunConfig, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if config.out_path:
        Path(config.out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _tau_source_comment(config: RunConfig, kinds: list[BFileKind]) -> str:
    parts = []
    for kind in kinds:
        source = config.store.bfile_sources.get(kind, "native")
        parts.append(f"{kind.value}: {source}")
    return "# source " + "; ".join(parts)


def _ensure_many(config: RunConfig, ds: list[int]) -> None:
    """Populate Phi_2 records for the given d values, possibly in parallel;
    results land in the store in sorted order so runs are reproducible."""
    pending = sorted(d for d in set(ds)
                     if (rec := config.store.get(StoreKey(Kind.PHI2, d))) is None
                     or not rec.factorization.complete)
    if not pending:
        return
    if config.workers <= 1:
        for d in pending:
            config.store.ensure_phi2(d, config.deadline())
        return
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        results = list(pool.map(_phi2_job,
                                [(d, config.policy, config.budget_secs) for d in pending]))
    from .store import StoreRecord
    for d, fac in sorted(results):
        config.store.upsert(StoreRecord(StoreKey(Kind.PHI2, d), fac, "computed"),
                            check_primality=False)


def _phi2_job(args):
    d, policy, budget = args
    return d, cyclotomic.factor_phi2(d, policy, Deadline(budget))


# -- commands -----------------------------------------------------------


def cmd_table1(config: RunConfig, limit: int) -> int:
    if not config.store.tau_tables[BFileKind.TAU_MERSENNE_MINUS]:
        _ensure_many(config, [d for n in range(1, limit + 1) for d in arith.divisors(n)])
    rows = mersenne.hcm_indices(limit, config.store, config.deadline())
    sep = config.sep
    lines = [_tau_source_comment(config, [BFileKind.TAU_MERSENNE_MINUS,
                                          BFileKind.TAU_MERSENNE_PLUS]),
             sep.join(("N", "tau_minus", "ratio_plus"))]
    for row in rows:
        lines.append(sep.join((str(row.n), str(row.tau_minus),
                               render.format_tau_ratio(row.ratio_plus))))
    _emit(config, lines)
    return EXIT_OK


def cmd_table2(config: RunConfig, max_d: int) -> int:
    _ensure_many(config, list(range(1, max_d + 1)))
    sep = config.sep
    lines = [sep.join(("d", "omega", "ratio"))]
    incomplete = []
    for d in range(1, max_d + 1):
        if d == 1:
            lines.append(sep.join(("1", "0", "")))
            continue
        w = mersenne.omega_phi2_lookup(d, config.store, config.deadline())
        if w is None:
            fac = config.store.ensure_phi2(d, config.deadline())
            incomplete.append(d)
            lines.append(sep.join((str(d), f">={fac.omega_lower_bound()}", "")))
        else:
            lines.append(sep.join((str(d), str(w), render.format_omega_ratio(w, d))))
    _emit(config, lines)
    if incomplete:
        print(f"incomplete at d in {incomplete}", file=sys.stderr)
        return EXIT_INCOMPLETE
    return EXIT_OK


def cmd_figure1(config: RunConfig, max_n: int) -> int:
    if not config.store.tau_tables[BFileKind.TAU_MERSENNE_MINUS]:
        _ensure_many(config, [d for n in range(1, max_n + 1) for d in arith.divisors(n)])
    sep = config.sep
    lines = [_tau_source_comment(config, [BFileKind.TAU_MERSENNE_MINUS]),
             sep.join(("n", "tau"))]
    missing = []
    for n in range(1, max_n + 1):
        t = mersenne.tau_lookup(n, MINUS, config.store, config.deadline())
        if t is None:
            missing.append(n)
        else:
            lines.append(sep.join((str(n), str(t))))
    _emit(config, lines)
    if missing:
        print(f"missing tau(2^n-1) for n in {missing}", file=sys.stderr)
        return EXIT_INCOMPLETE
    return EXIT_OK


def cmd_figure2(config: RunConfig, max_n: int) -> int:
    if not config.store.tau_tables[BFileKind.TAU_MERSENNE_MINUS]:
        _ensure_many(config, [d for n in range(1, 2 * max_n + 1) for d in arith.divisors(n)])
    try:
        series = mersenne.ratio_series(max_n, config.store, config.deadline())
    except IncompleteDataError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INCOMPLETE
    sep = config.sep
    lines = [_tau_source_comment(config, [BFileKind.TAU_MERSENNE_MINUS]),
             sep.join(("n", "ratio", "ratio_exact"))]
    for n, ratio in enumerate(series.ratio, 1):
        lines.append(sep.join((str(n), repr(float(ratio)), str(ratio))))
    _emit(config, lines)
    return EXIT_OK


def cmd_figure3(config: RunConfig, max_d: int) -> int:
    if not config.store.omega_phi2_table:
        _ensure_many(config, list(range(2, max_d + 1)))
    sep = config.sep
    lines = [_tau_source_comment(config, [BFileKind.OMEGA_PHI2]),
             sep.join(("d", "omega"))]
    missing = []
    for d in range(2, max_d + 1):
        w = mersenne.omega_phi2_lookup(d, config.store, config.deadline())
        if w is None:
            missing.append(d)
        else:
            lines.append(sep.join((str(d), str(w))))
    _emit(config, lines)
    if missing:
        print(f"missing omega(Phi_d(2)) for d in {missing}", file=sys.stderr)
        return EXIT_INCOMPLETE
    return EXIT_OK


def cmd_hcn(config: RunConfig, limit: int) -> int:
    """Emit (N, tau(N), tau-growth exponent) for every HCN <= limit; the
    exponent column is blank where log log N is undefined (N <= 2)."""
    sep = config.sep
    lines = [sep.join(("N", "tau", "tau_exponent"))]
    for rec in hcn.enumerate_hcn(limit):
        exponent = repr(hcn.hcn_tau_exponent(rec)) if rec.n >= 3 else ""
        lines.append(sep.join((str(rec.n), str(rec.tau), exponent)))
    _emit(config, lines)
    return EXIT_OK


def cmd_log_sum(config: RunConfig, n: int) -> int:
    report = render.log_sum_check(n)
    sep = config.sep
    _emit(config, [sep.join(("quantity", "value")),
                   sep.join(("n", str(report.n))),
                   sep.join(("exact_sum", report.exact_sum)),
                   sep.join(("main_term", report.main_term)),
                   sep.join(("residual", repr(report.residual))),
                   sep.join(("residual_limit", repr(report.limit)))])
    return EXIT_OK


def cmd_omega_dist(config: RunConfig, x: int, k_max: int | None) -> int:
    rows = render.omega_distribution(x, k_max)
    sep = config.sep
    lines = [sep.join(("K", "count", "normalized"))]
    for row in rows:
        norm = "" if row.normalized is None else repr(row.normalized)
        lines.append(sep.join((str(row.k), str(row.count), norm)))
    _emit(config, lines)
    return EXIT_OK


def cmd_factor(config: RunConfig, kind_token: str, index: int) -> int:
    kind = Kind(kind_token)
    if kind is Kind.PHI2:
        print(f"factoring Phi_{index}(2) ...", file=sys.stderr)
        fac = config.store.ensure_phi2(index, config.deadline())
    else:
        sign = MINUS if kind is Kind.MERSENNE_MINUS else PLUS
        for d in mersenne.phi2_divisor_set(index, sign):
            piece = config.store.ensure_phi2(d, config.deadline())
            state = "complete" if piece.complete else "partial"
            print(f"phi2 {d}: {state} ({len(piece.factors)} primes)", file=sys.stderr)
        fac = mersenne.factor_mersenne(index, sign, config.store, config.deadline())
    parts = []
    for p, e in sorted(fac.factors.items()):
        token = str(p) if e == 1 else f"{p}^{e}"
        if p in fac.probable:
            token += "?"
        parts.append(token)
    if fac.cofactor is not None:
        parts.append(f"C:{fac.cofactor}")
    _emit(config, [" ".join(parts) if parts else "1"])
    return EXIT_OK if fac.complete else EXIT_BUDGET


def cmd_import(config: RunConfig, paths: list[str]) -> int:
    for arg in paths:
        kind, path = _parse_import_arg(arg)
        if kind is None:
            count = config.store.import_store_file(path)
            print(f"{path}: {count} records", file=sys.stderr)
        else:
            bfile = config.store.attach_bfile(kind, path)
            print(f"{path}: {len(bfile.entries)} {kind.value} entries", file=sys.stderr)
    return EXIT_OK


def cmd_export(config: RunConfig) -> int:
    if config.out_path:
        config.store.export_store_file(config.out_path)
    else:
        sys.stdout.write(config.store.export_text())
    return EXIT_OK


def cmd_check_conj1(config: RunConfig, limit: int) -> int:
    if not config.store.tau_tables[BFileKind.TAU_MERSENNE_MINUS]:
        _ensure_many(config, [d for n in range(1, limit + 1) for d in arith.divisors(n)])
    rows = mersenne.conjecture1_table(limit, config.store, config.deadline())
    sep = config.sep
    lines = [sep.join(("N", "ratio", "ratio_exact"))]
    for n, ratio in rows:
        lines.append(sep.join((str(n), render.format_tau_ratio(ratio), str(ratio))))
    _emit(config, lines)
    return EXIT_OK


def cmd_check_conj2(config: RunConfig, max_d: int, c: float) -> int:
    if not config.store.omega_phi2_table:
        _ensure_many(config, list(range(2, max_d + 1)))
    result = mersenne.conjecture2_scan(max_d, config.store, c, config.deadline())
    sep = config.sep
    lines = [sep.join(("quantity", "value")),
             sep.join(("max_d", str(max_d))),
             sep.join(("c", repr(c))),
             sep.join(("exceptions", " ".join(map(str, result.exceptions)) or "none")),
             sep.join(("sup_ratio", f"{result.sup_ratio:.4f}")),
             sep.join(("argmax_d", str(result.argmax_d)))]
    _emit(config, lines)
    return EXIT_OK if not result.exceptions else EXIT_CHECK_FAILED


def cmd_check_invariants(config: RunConfig) -> int:
    """Quick self-check battery over small ranges."""
    checks: list[tuple[str, bool]] = []

    total = 0
    ok = True
    for k in range(1, 501):
        total += arith.tau(k)
        if total != sum(k // l for l in range(1, k + 1)):
            ok = False
            break
    checks.append(("dirichlet identity n<=500", ok))
    checks.append(("tau between 2^omega and 2^big_omega n<=2000",
                   all((1 << arith.omega(n)) <= arith.tau(n) <= (1 << arith.big_omega(n))
                       for n in range(1, 2001))))
    checks.append(("cyclotomic product identity n<=128",
                   all(cyclotomic.product_identity_check(n) for n in range(1, 129))))
    checks.append(("phi2(d) <= 3^phi(d) d<=128",
                   all(cyclotomic.phi2(d) <= 3 ** arith.euler_phi(d)
                       for d in range(2, 129))))
    checks.append(("primitive divisor exists except m in {1,6}, m<=100",
                   [m for m in range(1, 101)
                    if not cyclotomic.has_primitive_prime_divisor(m)] == [1, 6]))
    brute = []
    best = 0
    for n in range(1, 2001):
        t = arith.tau(n)
        if t > best:
            best = t
            brute.append(n)
    checks.append(("hcn enumeration matches record scan <=2000",
                   [r.n for r in hcn.enumerate_hcn(2000)] == brute))
    checks.append(("tau jump identity for hcn <= 10^5",
                   all(hcn.tau_jump(r) >= 1 for r in hcn.enumerate_hcn(100_000))))
    _ensure_many(config, [d for n in range(1, 41) for d in arith.divisors(n)])
    checks.append(("compare bound k<=40",
                   all(mersenne.compare_lower_bound(k, config.store) for k in range(1, 41))))
    checks.append(("tau upper bound n<=40",
                   all(mersenne.tau_upper_bound_check(n, config.store) for n in range(2, 41))))

    failed = [name for name, passed in checks if not passed]
    for name, passed in checks:
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
    return EXIT_OK if not failed else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    imports = args.imports
    if imports is None:
        env_imports = _env("IMPORT")
        imports = env_imports.split(os.pathsep) if env_imports else []
    config = RunConfig(
        store_path=args.store,
        import_paths=imports,
        policy=FactorPolicy(rng_seed=args.seed),
        budget_secs=args.budget_secs,
        workers=args.workers,
        output_format=args.format,
        out_path=args.out,
    )
    try:
        _load_inputs(config)
        if args.command == "table1":
            code = cmd_table1(config, args.limit)
        elif args.command == "table2":
            code = cmd_table2(config, args.max_d)
        elif args.command == "figure1":
            code = cmd_figure1(config, args.max_n)
        elif args.command == "figure2":
            code = cmd_figure2(config, args.max_n)
        elif args.command == "figure3":
            code = cmd_figure3(config, args.max_d)
        elif args.command == "hcn":
            code = cmd_hcn(config, args.limit)
        elif args.command == "log-sum":
            code = cmd_log_sum(config, args.n)
        elif args.command == "omega-dist":
            code = cmd_omega_dist(config, args.x, args.k_max)
        elif args.command == "factor":
            code = cmd_factor(config, args.kind, args.index)
        elif args.command == "import":
            code = cmd_import(config, args.paths)
        elif args.command == "export":
            code = cmd_export(config)
        elif args.command == "check-conj1":
            code = cmd_check_conj1(config, args.limit)
        elif args.command == "check-conj2":
            code = cmd_check_conj2(config, args.max_d, args.c)
        elif args.command == "check-invariants":
            code = cmd_check_invariants(config)
        else:  # pragma: no cover
            parser.error(f"unknown command {args.command}")
        _save_store(config)
        return code
    except StoreParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except StoreCorruptionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except IncompleteDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCOMPLETE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
