"""Command-line front end.

Exit codes: 0 success (whatever the verdicts), 1 a verify-examples check
failed, 2 invalid input, 3 bad reduction, 4 unsupported or undefined case,
5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from . import __version__
from .arith import factorize
from .catalog import run_all
from .classify import classify_report
from .curve import parse_curve
from .errors import BadReductionError, EllCarmError, PreconditionError, UnsupportedCaseError
from .experiments import (
    census_csv,
    density_csv,
    sample_density,
    trace_census,
    verify_anomalous_trichotomy,
    hurwitz_class_number,
)
from .lseries import find_anomalous, trace_of_frobenius

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BAD_REDUCTION, EXIT_UNSUPPORTED, EXIT_IO = 0, 1, 2, 3, 4, 5


class SpecError(ValueError):
    """A job spec field that does not parse."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class JobSpec:
    command: str
    curve: str | None = None
    n: str | None = None
    point: str | None = None
    d: int | None = None
    min: int | None = None
    max: int | None = None
    m: str | None = None
    p: int | None = None
    trials: int | None = None
    seed: int = 0
    out: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "JobSpec":
        known = {f.name for f in fields(cls)}
        extra = sorted(set(data) - known)
        if extra:
            raise SpecError(extra[0], "unknown field")
        if "command" not in data:
            raise SpecError("command", "missing")
        kw = dict(data)
        for name in ("n", "curve", "point", "m"):
            if kw.get(name) is not None:
                v = kw[name]
                if name == "point" and isinstance(v, (list, tuple)):
                    v = ",".join(str(c) for c in v)
                kw[name] = str(v)
        for name in ("d", "min", "max", "p", "trials", "seed"):
            if kw.get(name) is not None:
                try:
                    kw[name] = int(kw[name])
                except (TypeError, ValueError):
                    raise SpecError(name, f"not an integer: {kw[name]!r}") from None
        return cls(**kw)

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def parsed_curve(self):
        if self.curve is None:
            raise SpecError("curve", "missing")
        try:
            return parse_curve(self.curve)
        except (ValueError, EllCarmError) as exc:
            raise SpecError("curve", str(exc)) from None

    def parsed_n(self) -> int:
        if self.n is None:
            raise SpecError("n", "missing")
        try:
            return int(self.n)
        except ValueError:
            raise SpecError("n", f"not a decimal integer: {self.n!r}") from None

    def parsed_point(self):
        if self.point is None:
            return None
        parts = self.point.replace("(", "").replace(")", "").split(",")
        try:
            x, y = (int(c) for c in parts)
        except ValueError:
            raise SpecError("point", f"expected x,y, got {self.point!r}") from None
        return x, y

    def parsed_ms(self) -> list[int]:
        try:
            ms = [int(c) for c in (self.m or "200,2000").split(",")]
        except ValueError:
            raise SpecError("m", f"expected comma-separated integers, got {self.m!r}") from None
        if any(M < 7 for M in ms):
            raise SpecError("m", "every M must be at least 7")
        return ms


def write_atomic(path: str | Path, text: str) -> None:
    """Write through a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _png_path(out: str | None, flag: str) -> Path:
    if not out:
        raise SpecError(flag, "--plot needs --out; the figure is written next to it")
    return Path(out).with_suffix(".png")


# commands

def _classify_lines(spec: JobSpec, fmt: str) -> str:
    rep = classify_report(spec.parsed_n(), spec.parsed_curve(), spec.parsed_point(), spec.d)
    if fmt == "json":
        return rep.to_json_line() + "\n"
    row = rep.to_dict()
    cols = ["N", "curve", "point", "a_N", *rep.flags]
    cells = []
    for c in cols:
        v = row[c]
        if isinstance(v, list):
            v = f"{v[0]};{v[1]}"
        cells.append("" if v is None else str(v).lower() if isinstance(v, bool) else str(v))
    return ",".join(cols) + "\n" + ",".join(f'"{c}"' if "," in c else c for c in cells) + "\n"


def cmd_classify(spec: JobSpec, fmt: str = "json") -> int:
    _emit(_classify_lines(spec, fmt), spec.out)
    return EXIT_OK


def cmd_verify_examples(fmt: str = "text", out: str | None = None) -> int:
    results = run_all()
    if fmt == "json":
        text = "".join(
            json.dumps({"check": r.name, "status": r.status, "detail": r.detail}) + "\n" for r in results
        )
    else:
        width = max(len(r.name) for r in results)
        text = "".join(f"{r.status:<13} {r.name:<{width}}  {r.detail}\n" for r in results)
        text += f"{sum(r.status != 'FAIL' for r in results)}/{len(results)} checks as expected\n"
    _emit(text, out)
    return EXIT_FAIL if any(r.status == "FAIL" for r in results) else EXIT_OK


def cmd_anomalous(spec: JobSpec, products: bool = False) -> int:
    E = spec.parsed_curve()
    lo = spec.min if spec.min is not None else 5
    if spec.max is None:
        raise SpecError("max", "missing")
    if lo < 5 or spec.max < lo:
        raise SpecError("max", f"need 5 <= min <= max, got {lo}..{spec.max}")
    rows = ["kind,N,p,q,a_p,a_q,branch"]
    for p in find_anomalous(E, lo, spec.max):
        rows.append(f"anomalous_prime,{p},{p},,1,,")
    if products:
        rep = verify_anomalous_trichotomy(E, spec.max)
        for N in rep.korselt_numbers:
            p, q = factorize(N).primes
            ap, aq = trace_of_frobenius(E, p), trace_of_frobenius(E, q)
            if p <= 13:
                branch = "p<=13"
            elif ap == aq == 1:
                branch = "anomalous"
            else:
                branch = "p>=sqrt(q)/16"
            rows.append(f"type1_product,{N},{p},{q},{ap},{aq},{branch}")
        for p, q, ap, aq in rep.counterexamples:
            rows.append(f"counterexample,{p * q},{p},{q},{ap},{aq},")
    _emit("\n".join(rows) + "\n", spec.out)
    return EXIT_OK


def cmd_density(spec: JobSpec, plot: bool = False) -> int:
    ms = spec.parsed_ms()
    trials = spec.trials if spec.trials is not None else 100_000
    if trials < 1:
        raise SpecError("trials", "must be positive")
    png = _png_path(spec.out, "plot") if plot else None
    estimates = [sample_density(M, trials, spec.seed) for M in ms]
    _emit(density_csv(estimates), spec.out)
    if png:
        from .plotting import plot_density

        plot_density(estimates, png)
    return EXIT_OK


def cmd_census(spec: JobSpec, plot: bool = False) -> int:
    if spec.p is not None:
        primes = [spec.p]
    elif spec.max is not None:
        from .arith import primes_between

        primes = primes_between(max(5, spec.min or 5), spec.max)
    else:
        raise SpecError("p", "give --p or --max")
    png = _png_path(spec.out, "plot") if plot else None
    try:
        censuses = [trace_census(p) for p in primes]
    except ValueError as exc:
        raise SpecError("p", str(exc)) from None
    _emit(census_csv(censuses), spec.out)
    if png:
        from .plotting import plot_census

        plot_census(censuses, hurwitz_class_number, png)
    return EXIT_OK


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, BadReductionError):
        return EXIT_BAD_REDUCTION
    if isinstance(exc, UnsupportedCaseError):
        return EXIT_UNSUPPORTED
    if isinstance(exc, (SpecError, PreconditionError, ValueError)):
        return EXIT_INPUT
    if isinstance(exc, OSError):
        return EXIT_IO
    if isinstance(exc, EllCarmError):
        return EXIT_UNSUPPORTED
    raise exc


def cmd_batch(path: str, out: str | None, fmt: str = "json") -> int:
    """Classify one JobSpec per input line; results are ordered by N."""
    results, worst = [], EXIT_OK
    with open(path) as fh:
        lines = [ln for ln in fh if ln.strip()]
    for lineno, line in enumerate(lines, 1):
        try:
            try:
                spec = JobSpec.from_dict(json.loads(line))
            except json.JSONDecodeError as exc:
                raise SpecError("line", f"invalid JSON: {exc.msg}") from None
            if spec.command != "classify":
                raise SpecError("command", f"batch runs classify jobs only, got {spec.command!r}")
            key = spec.parsed_n()
            results.append((key, lineno, _classify_lines(spec, "json")))
        except Exception as exc:  # noqa: BLE001 - mapped to an exit code or re-raised
            code = _exit_code(exc)
            worst = max(worst, code)
            err = {"line": lineno, "error": str(exc), "exit": code}
            if isinstance(exc, SpecError):
                err["field"] = exc.field
            results.append((-1, lineno, json.dumps(err) + "\n"))
    results.sort(key=lambda r: (r[0], r[1]))
    _emit("".join(r[2] for r in results), out)
    return worst


# argument parsing

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ellcarm", description="Elliptic pseudoprime and Carmichael toolkit")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, *, curve=False, seed=False):
        if curve:
            p.add_argument("--curve", required=True, help="[A,B] or [a1,a2,a3,a4,a6]")
        if seed:
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output file, written atomically (default stdout)")

    p = sub.add_parser("classify", help="run every predicate on (N, E[, P])")
    common(p, curve=True)
    p.add_argument("--n", required=True, help="N as a decimal string")
    p.add_argument("--point", help="x,y")
    p.add_argument("--d", type=int, help="CM discriminant for the Gordon test")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("verify-examples", help="check every worked example")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")

    p = sub.add_parser("anomalous", help="anomalous primes and type I products pq")
    common(p, curve=True)
    p.add_argument("--min", type=int, default=5)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--products", action="store_true", help="also list type I Korselt numbers pq <= max^2")

    p = sub.add_parser("density", help="Monte Carlo density of anomalous type I products")
    common(p, seed=True)
    p.add_argument("--m", default="200,2000", help="comma-separated bounds M")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--plot", action="store_true", help="also write a PNG next to --out")

    p = sub.add_parser("census", help="curves over F_p by trace against Hurwitz class numbers")
    common(p)
    p.add_argument("--p", type=int)
    p.add_argument("--min", type=int)
    p.add_argument("--max", type=int)
    p.add_argument("--plot", action="store_true", help="also write a PNG next to --out")

    p = sub.add_parser("batch", help="classify JobSpecs read one JSON object per line")
    p.add_argument("input")
    p.add_argument("--out")
    return ap


def _spec_from_args(args) -> JobSpec:
    names = {f.name for f in fields(JobSpec)}
    return JobSpec.from_dict({k: v for k, v in vars(args).items() if k in names and v is not None})


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify-examples":
            return cmd_verify_examples(args.format, args.out)
        if args.command == "batch":
            return cmd_batch(args.input, args.out)
        spec = _spec_from_args(args)
        if args.command == "classify":
            return cmd_classify(spec, args.format)
        if args.command == "anomalous":
            return cmd_anomalous(spec, args.products)
        if args.command == "density":
            return cmd_density(spec, args.plot)
        return cmd_census(spec, args.plot)
    except Exception as exc:  # noqa: BLE001 - mapped to an exit code or re-raised
        code = _exit_code(exc)
        print(f"ellcarm: error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
