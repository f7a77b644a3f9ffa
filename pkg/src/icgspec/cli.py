"""Command-line front end: single-N inspection and range scans.

Commands: matrix, spectrum, nar, check, pairs, rownars, scan.  Exit codes
are 0 when the ISAP is established, 1 when a counterexample is found,
2 when undecided, and 3 on usage or arithmetic errors.  Scans append one
JSON record per order to a .jsonl file and can resume.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import __version__
from .isap import (
    DEFAULT_CAP,
    STATUS_COUNTEREXAMPLE,
    STATUS_UNKNOWN,
    IsapVerdict,
    brute_force_search,
    classify,
    extract_row_nars,
    phi_vector,
)
from .nar import has_nar, has_nar_mod
from .numtheory import factorize, is_prime, primes_in
from .spectra import (
    compact_matrix,
    divisor_for_column,
    spectrum,
    symbol_divisors,
    symbol_from_divisors,
)

CAP_ENV_VAR = "ICGSPEC_CAP"

EXIT_ESTABLISHED = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 means "unknown" here, so
    # remap every usage problem to the error code.
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_ERROR)


def _parse_divisors(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"bad divisor list {text!r}; expected comma-separated integers")


def _resolve_cap(args) -> int:
    if getattr(args, "cap", None) is not None:
        return args.cap
    env = os.environ.get(CAP_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{CAP_ENV_VAR} must be an integer, got {env!r}")
    return DEFAULT_CAP


def _reject_seed(args) -> None:
    if getattr(args, "seed", None) is not None:
        raise ValueError("the search is deterministic; --seed is not supported")


def _emit(args, human_lines: list[str], payload: dict, csv_rows: list[list] | None = None) -> None:
    fmt = getattr(args, "format", "table")
    if fmt == "json":
        print(json.dumps(payload))
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        for row in csv_rows if csv_rows is not None else [list(payload.keys()), list(payload.values())]:
            writer.writerow(row)
        sys.stdout.write(buf.getvalue())
    else:
        for line in human_lines:
            print(line)


def cmd_matrix(args) -> int:
    f = factorize(args.n)
    mat = compact_matrix(f)
    divs = [divisor_for_column(f, label) for label in mat.index]
    header = f"N = {f.n} = {f}; {mat.size} rows, column divisors {divs}"
    lines = [header]
    width = max(len(str(e)) for row in mat.entries for e in row)
    for label, row, m in zip(mat.index, mat.entries, mat.row_mult):
        cells = " ".join(f"{e:>{width}}" for e in row)
        lines.append(f"{label}  [{cells}]  x{m}")
    payload = {
        "n": f.n,
        "factors": [list(pe) for pe in f.factors],
        "index": [list(label) for label in mat.index],
        "column_divisors": divs,
        "entries": [list(row) for row in mat.entries],
        "row_mult": list(mat.row_mult),
    }
    csv_rows = [["row"] + [str(d) for d in divs] + ["mult"]]
    csv_rows += [
        [str(label)] + list(row) + [m]
        for label, row, m in zip(mat.index, mat.entries, mat.row_mult)
    ]
    _emit(args, lines, payload, csv_rows)
    return EXIT_ESTABLISHED


def cmd_spectrum(args) -> int:
    f = factorize(args.n)
    if f.n < 2:
        raise ValueError("spectrum needs N >= 2")
    sym = symbol_from_divisors(f, _parse_divisors(args.divisors))
    spec = spectrum(f, sym)
    pairs = " ".join(f"({v}, {m})" for v, m in spec.pairs)
    lines = [f"N = {f.n}, divisors {sorted(symbol_divisors(f, sym))}", f"spectrum: {pairs}"]
    payload = {
        "n": f.n,
        "divisors": list(symbol_divisors(f, sym)),
        "spectrum": [list(p) for p in spec.pairs],
    }
    csv_rows = [["eigenvalue", "multiplicity"]] + [list(p) for p in spec.pairs]
    _emit(args, lines, payload, csv_rows)
    return EXIT_ESTABLISHED


def cmd_nar(args) -> int:
    f = factorize(args.n)
    if f.n < 2:
        raise ValueError("totient vector needs N >= 2")
    values = phi_vector(f)
    if args.modulus is not None:
        rel = has_nar_mod(values, args.modulus)
    else:
        rel = has_nar(values)
    lines = [f"N = {f.n} = {f}", f"totient vector {list(values)}"]
    if args.modulus is not None:
        lines.append(f"modulus {args.modulus}")
    witness = None
    if rel is None:
        lines.append("no nontrivial additive relation")
    else:
        lines.append(f"witness: {rel.render(values)}")
        witness = {
            "left": sorted(rel.s1),
            "right": sorted(rel.s2),
            "left_values": sorted(values[i] for i in rel.s1),
            "right_values": sorted(values[i] for i in rel.s2),
        }
    payload = {
        "n": f.n,
        "phi_vector": list(values),
        "modulus": args.modulus,
        "witness": witness,
    }
    _emit(args, lines, payload)
    return EXIT_ESTABLISHED


def _verdict_payload(verdict: IsapVerdict, f) -> dict:
    pair = None
    if verdict.counterexample is not None:
        pair = {
            "a": sorted(symbol_divisors(f, verdict.counterexample.a)),
            "b": sorted(symbol_divisors(f, verdict.counterexample.b)),
        }
    return {
        "n": verdict.n,
        "factors": [list(pe) for pe in f.factors],
        "status": verdict.status,
        "method": verdict.method,
        "evidence": verdict.evidence,
        "distinct_spectra": verdict.distinct_spectra,
        "counterexample": pair,
    }


def _verdict_exit(verdict: IsapVerdict) -> int:
    if verdict.status == STATUS_COUNTEREXAMPLE:
        return EXIT_COUNTEREXAMPLE
    if verdict.status == STATUS_UNKNOWN:
        return EXIT_UNKNOWN
    return EXIT_ESTABLISHED


def cmd_check(args) -> int:
    _reject_seed(args)
    f = factorize(args.n)
    verdict = classify(f, cap=_resolve_cap(args), jobs=args.jobs)
    lines = [
        f"n = {verdict.n} = {f}",
        f"status: {verdict.status}",
        f"method: {verdict.method}",
        f"evidence: {verdict.evidence}",
    ]
    if verdict.distinct_spectra is not None:
        lines.append(f"distinct spectra: {verdict.distinct_spectra}")
    _emit(args, lines, _verdict_payload(verdict, f))
    return _verdict_exit(verdict)


def cmd_pairs(args) -> int:
    _reject_seed(args)
    f = factorize(args.n)
    verdict = classify(f, cap=_resolve_cap(args), jobs=args.jobs)
    if verdict.counterexample is not None:
        a = sorted(symbol_divisors(f, verdict.counterexample.a))
        b = sorted(symbol_divisors(f, verdict.counterexample.b))
        lines = [f"n = {verdict.n}: cospectral pair found", f"a: {a}", f"b: {b}"]
    else:
        lines = [f"n = {verdict.n}: no cospectral pair ({verdict.status} via {verdict.method})"]
    _emit(args, lines, _verdict_payload(verdict, f))
    return _verdict_exit(verdict)


def cmd_rownars(args) -> int:
    f = factorize(args.n)
    sym_a = symbol_from_divisors(f, _parse_divisors(args.a))
    sym_b = symbol_from_divisors(f, _parse_divisors(args.b))
    matching = extract_row_nars(f, sym_a, sym_b)
    lines = [f"n = {f.n}; fixed rows: {list(matching.fixed_labels)}"]
    rel_payload = []
    for rowrel in matching.relations:
        rel = rowrel.relation
        left = sorted(rel.s1)
        right = sorted(rel.s2)
        lines.append(
            f"relation [value {rowrel.value}]: "
            f"{' + '.join(str(matching.weights[i]) for i in left)} = "
            f"{' + '.join(str(matching.weights[i]) for i in right)}"
        )
        rel_payload.append(
            {
                "value": rowrel.value,
                "left_rows": [list(matching.index[i]) for i in left],
                "right_rows": [list(matching.index[i]) for i in right],
                "left_weights": [matching.weights[i] for i in left],
                "right_weights": [matching.weights[i] for i in right],
            }
        )
    payload = {
        "n": f.n,
        "fixed_rows": [list(label) for label in matching.fixed_labels],
        "relations": rel_payload,
    }
    _emit(args, lines, payload)
    return EXIT_ESTABLISHED


@dataclass(frozen=True)
class ScanRecord:
    """One scanned order, serialized as a single JSON line."""

    n: int
    factors: tuple[tuple[int, int], ...]
    status: str
    method: str
    distinct_spectra: int | None
    elapsed_ms: int
    version: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "factors": [list(pe) for pe in self.factors],
                "status": self.status,
                "method": self.method,
                "distinct_spectra": self.distinct_spectra,
                "elapsed_ms": self.elapsed_ms,
                "version": self.version,
            }
        )

    @classmethod
    def from_json(cls, line: str) -> "ScanRecord":
        obj = json.loads(line)
        return cls(
            n=obj["n"],
            factors=tuple((int(p), int(e)) for p, e in obj["factors"]),
            status=obj["status"],
            method=obj["method"],
            distinct_spectra=obj["distinct_spectra"],
            elapsed_ms=obj["elapsed_ms"],
            version=obj["version"],
        )


def _scan_one(task: tuple[int, int, bool]) -> ScanRecord:
    n, cap, brute_only = task
    start = time.perf_counter()
    f = factorize(n)
    if brute_only:
        verdict = brute_force_search(f, cap=cap)
    else:
        verdict = classify(f, cap=cap)
    elapsed = int(round((time.perf_counter() - start) * 1000))
    return ScanRecord(
        n, f.factors, verdict.status, verdict.method, verdict.distinct_spectra, elapsed, __version__
    )


def _load_recorded(path: str) -> set[int]:
    recorded: set[int] = set()
    if not os.path.exists(path):
        return recorded
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                recorded.add(ScanRecord.from_json(line).n)
    return recorded


def cmd_scan(args) -> int:
    _reject_seed(args)
    cap = _resolve_cap(args)
    if args.p2q2 is not None:
        p = args.p2q2
        if not is_prime(p):
            raise ValueError(f"--p2q2 needs a prime, got {p}")
        ns = [p * p * q * q for q in primes_in(p + 1, p**3)]
        brute_only = True
    else:
        if args.lo is None or args.hi is None:
            raise ValueError("scan needs LO and HI (or --p2q2 P)")
        if not 2 <= args.lo <= args.hi:
            raise ValueError(f"need 2 <= lo <= hi, got {args.lo}..{args.hi}")
        ns = list(range(args.lo, args.hi + 1))
        brute_only = False

    recorded = _load_recorded(args.out) if args.resume else set()
    todo = [n for n in ns if n not in recorded]
    tasks = [(n, cap, brute_only) for n in todo]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_scan_one, tasks, chunksize=8))
    else:
        records = [_scan_one(t) for t in tasks]

    with open(args.out, "a", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")

    methods: dict[str, int] = {}
    counterexamples = 0
    for rec in records:
        methods[rec.method] = methods.get(rec.method, 0) + 1
        counterexamples += rec.status == STATUS_COUNTEREXAMPLE
    summary = " ".join(f"{m}={c}" for m, c in sorted(methods.items())) or "nothing to do"
    print(
        f"scan: {len(records)} new records, {len(ns) - len(todo)} skipped, "
        f"{counterexamples} counterexamples; methods: {summary}"
    )
    return EXIT_COUNTEREXAMPLE if counterexamples else EXIT_ESTABLISHED


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="icgspec", description=__doc__)
    parser.add_argument("--version", action="version", version=f"icgspec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("matrix", help="print the compact spectral matrix of N")
    p.add_argument("n", type=int)
    _add_format(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("spectrum", help="spectrum of the symbol given by -d divisors")
    p.add_argument("n", type=int)
    p.add_argument("-d", "--divisors", required=True, help="comma-separated proper divisors")
    _add_format(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("nar", help="additive-relation witness on the totient vector of N")
    p.add_argument("n", type=int)
    p.add_argument("--modulus", type=int, default=None)
    _add_format(p)
    p.set_defaults(func=cmd_nar)

    for name, func in (("check", cmd_check), ("pairs", cmd_pairs)):
        p = sub.add_parser(name, help=f"{name}: ISAP verdict for N")
        p.add_argument("n", type=int)
        p.add_argument("--cap", type=int, default=None, help=f"brute-force cap on tau-1 (default {DEFAULT_CAP} or ${CAP_ENV_VAR})")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--seed", type=int, default=None, help=argparse.SUPPRESS)
        _add_format(p)
        p.set_defaults(func=func)

    p = sub.add_parser("rownars", help="row relations induced by two equal-spectrum symbols")
    p.add_argument("n", type=int)
    p.add_argument("-a", required=True, help="comma-separated divisors of the first symbol")
    p.add_argument("-b", required=True, help="comma-separated divisors of the second symbol")
    _add_format(p)
    p.set_defaults(func=cmd_rownars)

    p = sub.add_parser("scan", help="classify a range of orders, appending JSONL records")
    p.add_argument("lo", type=int, nargs="?", default=None)
    p.add_argument("hi", type=int, nargs="?", default=None)
    p.add_argument("--out", default="results.jsonl")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--p2q2", type=int, default=None, metavar="P", help="sweep N = P^2 q^2 over primes P < q < P^3 by brute force")
    p.add_argument("--seed", type=int, default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_scan)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
