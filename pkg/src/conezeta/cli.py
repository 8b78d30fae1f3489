"""Command-line front end: ``cone-zeta <command> [options]``.

Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 input
schema error, 4 unknown example.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .cone_geometry import ConeSpec, Decomposition, decompose
from .cone_integral import (
    ConeIntegralData,
    ResolutionData,
    cone_zeta_geom,
    explicit_formula,
    lie_zeta_geom,
    load_resolution,
    monomial_resolution,
    zeta_from_geom,
)
from .examples import Example, UnknownExample, data_path, get_example
from .exact_algebra import mr_canonical_text, mr_equal, mr_series, mr_specialize
from .lie_input import LieAlgebraZ, gen_conditions, monomiality_report, triangular_cone_data
from .oracle import count_subalgebras, count_submodules_fqt
from .topological import top_zeta_of_charts

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_SCHEMA, EXIT_UNKNOWN = 0, 1, 2, 3, 4

COMMANDS = ("decompose", "zeta-geom", "zeta-p", "zeta-top", "series", "oracle", "verify")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class JobSpec:
    command: str
    input: Path | None
    example: str | None
    p: int | None
    n: int | None
    q: int | None
    order: int | None
    mode: str
    rank: int | None
    fmt: str


# ---------------------------------------------------------------------------
# Input resolution
# ---------------------------------------------------------------------------


@dataclass
class Source:
    """What a job operates on: a bare cone, resolution charts and/or a Lie ring."""

    label: str
    cone: ConeSpec | None = None
    charts: tuple[ResolutionData, ...] = ()
    lie: LieAlgebraZ | None = None
    rank: int | None = None
    example: Example | None = None


def _read_json(path: Path) -> dict:
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise CliError(EXIT_USAGE, f"input file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_SCHEMA, f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(data, dict):
        raise CliError(EXIT_SCHEMA, f"{path}: top-level JSON value must be an object")
    return data


def _source_from_json(data: dict, label: str) -> Source:
    try:
        if "charts" in data or "Nf" in data:
            return Source(label, charts=tuple(load_resolution(data)))
        if "variables" in data:
            cid = ConeIntegralData.from_json(data)
            if not cid.monomial:
                raise CliError(EXIT_SCHEMA, f"{label}: non-monomial cone data needs resolution data instead")
            return Source(label, charts=(monomial_resolution(cid),))
        if "inequalities" in data or ("t" in data and "dim" not in data):
            return Source(label, cone=ConeSpec.from_json(data))
        if "dim" in data:
            lie = LieAlgebraZ.from_json(data)
            lie.check_jacobi()
            report = monomiality_report(gen_conditions(lie))
            charts = ()
            if report.monomial_reducible and all(c.content == 1 for c in report.conditions):
                charts = (monomial_resolution(triangular_cone_data(lie, report)),)
            return Source(label, charts=charts, lie=lie, rank=lie.d)
    except CliError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise CliError(EXIT_SCHEMA, f"{label}: {exc}") from None
    raise CliError(EXIT_SCHEMA, f"{label}: unrecognised input (expected cone, cone data, resolution or Lie JSON)")


def resolve_source(job: JobSpec) -> Source:
    if job.input and job.example:
        raise CliError(EXIT_USAGE, "--input and --example are mutually exclusive")
    if job.example:
        try:
            ex = get_example(job.example, job.rank)
        except UnknownExample as exc:
            raise CliError(EXIT_UNKNOWN, str(exc.args[0])) from None
        except ValueError as exc:
            raise CliError(EXIT_USAGE, str(exc)) from None
        return Source(ex.name, charts=ex.charts, lie=ex.lie, rank=ex.d, example=ex)
    if job.input:
        src = _source_from_json(_read_json(job.input), str(job.input))
        if job.rank is not None:
            if src.lie is not None and job.rank != src.lie.d:
                raise CliError(EXIT_USAGE, f"--rank {job.rank} conflicts with the algebra's rank {src.lie.d}")
            src.rank = job.rank
        return src
    raise CliError(EXIT_USAGE, "one of --input or --example is required")


def _need_charts(src: Source) -> tuple[ResolutionData, ...]:
    if not src.charts:
        raise CliError(
            EXIT_USAGE, f"{src.label}: needs cone integral or resolution data (conditions are not monomial)"
        )
    return src.charts


def _need_rank(src: Source) -> int:
    if src.rank is None:
        raise CliError(EXIT_USAGE, "this command needs --rank (the rank of the algebra)")
    return src.rank


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _table_rows(d: Decomposition, r: ResolutionData | None) -> list[dict]:
    rows = []
    for k, piece in enumerate(d.pieces):
        cls = r.stratum(piece.I).label() if r is not None else "-"
        rows.append({"piece": d.label(k), "M": list(piece.M), "I": list(piece.I), "size_I": len(piece.I), "size_M": len(piece.M), "class": cls})
    return rows


def _format_table(rows: list[dict]) -> list[str]:
    head = ("R_k", "|I_k|", "|M_k|", "E°_I_k")
    body = [(r["piece"], str(r["size_I"]), str(r["size_M"]), r["class"]) for r in rows]
    widths = [max(len(x[i]) for x in [head] + body) for i in range(4)]
    return ["  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() for line in [head] + body]


def cmd_decompose(job: JobSpec, out) -> int:
    src = resolve_source(job)
    if src.cone is not None:
        parts = [(None, decompose(src.cone), None)]
    else:
        parts = [(r, res.decomposition, res.constants) for r in _need_charts(src) for res in [explicit_formula(r)]]
    payload = []
    for idx, (r, d, e) in enumerate(parts):
        edges = [{"index": j + 1, "vector": list(v)} for j, v in enumerate(d.edges)]
        if e is not None:
            for item, (a, b) in zip(edges, e.pairs()):
                item["A"], item["B"] = a, b
        payload.append({"chart": idx + 1, "t": d.t, "edges": edges, "pieces": _table_rows(d, r)})
    if job.fmt == "json":
        print(json.dumps({"source": src.label, "charts": payload}, sort_keys=True), file=out)
        return EXIT_OK
    for chart in payload:
        if len(payload) > 1:
            print(f"chart {chart['chart']}", file=out)
        for e in chart["edges"]:
            extra = f"  A={e['A']} B={e['B']}" if "A" in e else ""
            print(f"R{e['index']} = {tuple(e['vector'])}{extra}", file=out)
        for line in _format_table(chart["pieces"]):
            print(line, file=out)
    return EXIT_OK


def _zeta_geom(src: Source):
    z = cone_zeta_geom(_need_charts(src))
    if src.rank is not None:
        z = lie_zeta_geom(z, src.rank)
    return z


def _emit(job: JobSpec, out, key: str, text: str, extra: dict | None = None) -> None:
    if job.fmt == "json":
        print(json.dumps({key: text, **(extra or {})}, sort_keys=True), file=out)
    else:
        print(text, file=out)


def cmd_zeta_geom(job: JobSpec, out) -> int:
    src = resolve_source(job)
    z = _zeta_geom(src)
    den = src.example.zgeom_den if src.example else None
    _emit(job, out, "zeta_geom", mr_canonical_text(z, den))
    return EXIT_OK


def _zeta_p(src: Source):
    return zeta_from_geom(_zeta_geom(src), _need_rank(src))


def cmd_zeta_p(job: JobSpec, out) -> int:
    src = resolve_source(job)
    P = _zeta_p(src)
    if job.p is not None:
        _emit(job, out, "zeta_p", str(mr_specialize(P, job.p)), {"p": job.p})
    else:
        den = src.example.P_den if src.example else None
        _emit(job, out, "zeta_p", mr_canonical_text(P, den))
    return EXIT_OK


def cmd_zeta_top(job: JobSpec, out) -> int:
    src = resolve_source(job)
    _emit(job, out, "zeta_top", str(top_zeta_of_charts(_need_charts(src))))
    return EXIT_OK


def _fraction_text(x) -> str:
    return str(Fraction(x))


def cmd_series(job: JobSpec, out) -> int:
    if job.order is None:
        raise CliError(EXIT_USAGE, "series needs --order")
    src = resolve_source(job)
    P = _zeta_p(src)
    if job.p is not None:
        coeffs = [_fraction_text(c) for c in mr_specialize(P, job.p).series(job.order)]
    else:
        coeffs = [str(c) for c in mr_series(P, job.order)]
    if job.fmt == "json":
        print(json.dumps({"order": job.order, "p": job.p, "coefficients": coeffs}, sort_keys=True), file=out)
    else:
        for n, c in enumerate(coeffs):
            print(f"T^{n}: {c}", file=out)
    return EXIT_OK


def cmd_oracle(job: JobSpec, out) -> int:
    if job.n is None:
        raise CliError(EXIT_USAGE, "oracle needs --n")
    if job.q is not None:
        if job.p is not None or job.input or job.example:
            raise CliError(EXIT_USAGE, "--q counts F_q[[t]]-submodules and takes no --p, --input or --example")
        start = time.perf_counter()
        try:
            count = count_submodules_fqt(job.q, job.n)
        except ValueError as exc:
            raise CliError(EXIT_USAGE, str(exc)) from None
        result = {"q": job.q, "n": job.n, "count": count, "elapsed_ms": round(1000 * (time.perf_counter() - start), 3)}
    else:
        if job.p is None:
            raise CliError(EXIT_USAGE, "oracle needs --p (or --q for F_q[[t]]-submodules)")
        src = resolve_source(job)
        if src.lie is None:
            raise CliError(EXIT_USAGE, f"{src.label}: oracle needs a Lie algebra input")
        start = time.perf_counter()
        count = count_subalgebras(src.lie, job.p, job.n, job.mode)
        result = {"p": job.p, "n": job.n, "mode": job.mode, "count": count, "elapsed_ms": round(1000 * (time.perf_counter() - start), 3)}
    if job.fmt == "json":
        print(json.dumps(result, sort_keys=True), file=out)
    else:
        print(" ".join(f"{k}={v}" for k, v in result.items()), file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


def golden_text(ex: Example, kind: str) -> str:
    return data_path("golden", f"{ex.name}_{kind}.txt").read_text().strip()


def verify_example(ex: Example, max_n: int = 3) -> list[tuple[str, bool, str]]:
    """Run the full pipeline on ``ex``; returns ``(check, ok, detail)`` lines."""
    checks: list[tuple[str, bool, str]] = []
    results = [explicit_formula(r) for r in ex.charts]
    if ex.table:
        (res,) = results
        d, r = res.decomposition, res.resolution
        got = Counter(
            (len(p.I), len(p.M), r.stratum(p.I).cls, frozenset(d.edge(j) for j in p.M)) for p in d.pieces
        )
        want = Counter(ex.table)
        checks.append((f"{len(d.pieces)}-piece table", got == want, f"{len(d.pieces)} pieces"))
    if ex.edge_targets:
        pairs = {pair for res in results for pair in res.constants.pairs()}
        checks.append(("edge constants", pairs == set(ex.edge_targets), str(sorted(pairs))))
    z = lie_zeta_geom(sum((res.value for res in results[1:]), results[0].value), ex.d)
    P = zeta_from_geom(z, ex.d)
    top = top_zeta_of_charts(ex.charts)
    for kind, value, den, target in (("zeta_geom", z, ex.zgeom_den, ex.zgeom), ("zeta_p", P, ex.P_den, ex.P)):
        text = mr_canonical_text(value, den)
        ok = mr_equal(value, target) and text == golden_text(ex, kind)
        checks.append((kind, ok, text))
    top_text = str(top)
    checks.append(("zeta_top", top.value == ex.ztop and top_text == golden_text(ex, "zeta_top"), top_text))
    series = mr_series(ex.P, max_n)
    for p in ex.oracle_primes:
        want = [int(c(p)) for c in series]
        got = [count_subalgebras(ex.lie, p, n) for n in range(max_n + 1)]
        checks.append((f"oracle p={p} n<={max_n}", got == want, f"counts {got}"))
    return checks


def cmd_verify(job: JobSpec, out) -> int:
    if not job.example:
        raise CliError(EXIT_USAGE, "verify needs --example")
    if job.input:
        raise CliError(EXIT_USAGE, "verify takes --example, not --input")
    try:
        ex = get_example(job.example, job.rank)
    except UnknownExample as exc:
        raise CliError(EXIT_UNKNOWN, str(exc.args[0])) from None
    except ValueError as exc:
        raise CliError(EXIT_USAGE, str(exc)) from None
    checks = verify_example(ex, job.n if job.n is not None else 3)
    ok = all(c[1] for c in checks)
    if job.fmt == "json":
        print(
            json.dumps(
                {
                    "example": ex.name,
                    "ok": ok,
                    "checks": [{"check": n, "ok": o, "detail": d} for n, o, d in checks],
                    "notes": ex.notes,
                },
                sort_keys=True,
            ),
            file=out,
        )
    else:
        print(f"example {ex.name}", file=out)
        if ex.notes:
            print(f"note: {ex.notes}", file=out)
        for name, passed, detail in checks:
            print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}", file=out)
        print("all checks passed" if ok else "MISMATCH", file=out)
    return EXIT_OK if ok else EXIT_MISMATCH


HANDLERS = {
    "decompose": cmd_decompose,
    "zeta-geom": cmd_zeta_geom,
    "zeta-p": cmd_zeta_p,
    "zeta-top": cmd_zeta_top,
    "series": cmd_series,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cone-zeta", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", type=Path, help="cone, cone data, resolution or Lie algebra JSON")
    parser.add_argument("--example", help="built-in example: abelian, heisenberg, sl2")
    parser.add_argument("--p", type=int, help="prime (or value of L) to specialise at")
    parser.add_argument("--q", type=int, help="field size for F_q[[t]]-submodule counts")
    parser.add_argument("--n", type=int, help="index exponent for oracle counts")
    parser.add_argument("--order", type=int, help="number of series coefficients minus one")
    parser.add_argument("--mode", choices=("sub", "ideal"), default="sub")
    parser.add_argument("--rank", type=int, help="rank d of the algebra (abelian example, P normalisation)")
    parser.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    return parser


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % k for k in range(2, int(n**0.5) + 1))


def _validate(job: JobSpec) -> None:
    for name in ("p", "q", "n", "order", "rank"):
        v = getattr(job, name)
        if v is not None and v < 0:
            raise CliError(EXIT_USAGE, f"--{name} must be non-negative")
    if job.p is not None and job.command == "oracle" and not _is_prime(job.p):
        raise CliError(EXIT_USAGE, "--p must be a prime")
    if job.p is not None and job.p == 0:
        raise CliError(EXIT_USAGE, "--p must be nonzero")
    if job.mode == "ideal" and job.command != "oracle":
        raise CliError(EXIT_USAGE, "--mode ideal only applies to the oracle command")


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    job = JobSpec(
        args.command,
        args.input,
        args.example,
        args.p,
        args.n,
        args.q,
        args.order,
        "ideal" if args.mode == "ideal" else "subalgebra",
        args.rank,
        args.fmt,
    )
    try:
        _validate(job)
        return HANDLERS[job.command](job, out)
    except CliError as exc:
        print(f"cone-zeta: error: {exc}", file=sys.stderr)
        return exc.code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
