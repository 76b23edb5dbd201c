"""Command-line pipeline over files: build q-expansions, extract product
exponents, fit growth rates, check bounds, and query level/Kloosterman data.

Commands are pure pipeline stages; identical inputs produce byte-identical
outputs.  Exit codes: 0 success (or a passing check), 1 a failing bound
verdict, 2 usage or validation errors.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import asymptotics, forms, prodexp
from .arith import kloosterman
from .errors import QprodError

__all__ = ["RunConfig", "build_parser", "main", "main_entry"]


class UsageError(QprodError):
    """Bad flag combination or out-of-range CLI argument."""


@dataclass
class RunConfig:
    """Everything a single CLI invocation needs, parsed and validated."""

    command: str
    spec_path: Path | None = None
    coeffs_path: Path | None = None
    terms: int | None = None
    window: tuple[int, int] | None = None
    y_r: float | None = None
    slope_tol: float = 0.05
    out_path: Path | None = None
    format: str | None = None
    jobs: int = 1
    kind: str | None = None
    level: int | None = None
    bound: int | None = None
    a: int | None = None
    b: int | None = None
    c_max: int | None = None


def _parse_window(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        window = (int(lo), int(hi))
    except ValueError:
        raise UsageError(f"window must look like M0:M1, got {text!r}") from None
    if not 1 <= window[0] <= window[1]:
        raise UsageError(f"window bounds must satisfy 1 <= M0 <= M1, got {text!r}")
    return window


def _emit(text: str, out_path: Path | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text, encoding="utf-8")


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _require_terms(config: RunConfig, minimum: int = 1) -> int:
    if config.terms is None:
        raise UsageError("--terms is required here")
    if config.terms < minimum:
        raise UsageError(f"--terms must be >= {minimum}")
    if config.window is not None and config.terms < config.window[1]:
        raise UsageError(
            f"--terms {config.terms} is below the window upper bound {config.window[1]}"
        )
    return config.terms


def _load_form(config: RunConfig):
    """The (series, provenance) pair named by --spec or --coeffs."""
    terms = _require_terms(config)
    if config.spec_path is not None:
        spec = forms.load_spec(config.spec_path)
        return forms.build(spec, terms), spec.describe()
    series = forms.ingest_coefficients(config.coeffs_path, terms)
    return series, f"file:{config.coeffs_path}"


def _sniff_header(path: Path) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.readline().strip()


def _load_exponents(config: RunConfig) -> prodexp.ExponentSeries:
    """Exponents for fit/check: either an m,c_m CSV directly, or computed
    from a coefficient CSV / form spec (--terms sets the expansion order,
    which yields exponents up to terms - 1)."""
    if config.coeffs_path is not None and _sniff_header(config.coeffs_path) == "m,c_m":
        return prodexp.read_exponents(config.coeffs_path)
    series, source = _load_form(config)
    return prodexp.extract(series, int(series.lead), source=source)


# -- commands -------------------------------------------------------------------


def cmd_expand(config: RunConfig) -> int:
    terms = _require_terms(config)
    spec = forms.load_spec(config.spec_path)
    series = forms.build(spec, terms)
    h = int(series.lead)
    top = min(terms, int(series.max_exponent))
    rows = [(n, str(series.coefficient(n))) for n in range(h, top + 1)]
    if config.format == "json":
        _emit(_dump_json({"form": spec.describe(), "rows": rows}), config.out_path)
    else:
        lines = ["n,a_n"] + [f"{n},{a}" for n, a in rows]
        _emit("\n".join(lines) + "\n", config.out_path)
    return 0


def cmd_exponents(config: RunConfig) -> int:
    _require_terms(config, minimum=2)
    series, source = _load_form(config)
    exponents = prodexp.extract(series, int(series.lead), source=source)
    if config.format == "json":
        rows = [[m, str(c)] for m, c in enumerate(exponents.values, start=1)]
        _emit(_dump_json({"form": source, "h": exponents.h, "rows": rows}), config.out_path)
    else:
        lines = ["m,c_m"] + [
            f"{m},{c}" for m, c in enumerate(exponents.values, start=1)
        ]
        _emit("\n".join(lines) + "\n", config.out_path)
    return 0


def cmd_fit(config: RunConfig) -> int:
    if config.window is None:
        raise UsageError("--window is required for fit")
    exponents = _load_exponents(config)
    fit = asymptotics.growth_fit(exponents, config.window)
    payload = fit.as_dict()
    payload["source"] = exponents.source
    _emit(_dump_json(payload), config.out_path)
    return 0


def cmd_check(config: RunConfig) -> int:
    if config.window is None:
        raise UsageError("--window is required for check")
    exponents = _load_exponents(config)
    report = asymptotics.check_bound(
        exponents,
        config.kind,
        y_r=config.y_r,
        window=config.window,
        slope_tol=config.slope_tol,
    )
    payload = report.as_dict()
    payload["source"] = exponents.source
    _emit(_dump_json(payload), config.out_path)
    return 0 if report.verdict else 1


def cmd_level(config: RunConfig) -> int:
    data = forms.level_data(config.level)
    _emit(_dump_json(data.as_dict()), config.out_path)
    return 0


def cmd_kloosterman(config: RunConfig) -> int:
    step = config.level or 1
    if step < 1:
        raise UsageError("--level must be a positive integer")
    if config.c_max is None or config.c_max < 1:
        raise UsageError("--c-max must be a positive integer")
    rows = []
    for c in range(step, config.c_max + 1, step):
        rows.append((c, float(kloosterman(config.a, config.b, c).exact_real)))
    if config.format == "json":
        _emit(
            _dump_json({"a": config.a, "b": config.b, "rows": [[c, k] for c, k in rows]}),
            config.out_path,
        )
    else:
        lines = ["c,K"] + [f"{c},{k!r}" for c, k in rows]
        _emit("\n".join(lines) + "\n", config.out_path)
    return 0


def cmd_vanishing(config: RunConfig) -> int:
    if config.bound is None or config.bound < 1:
        raise UsageError("--bound must be a positive integer")
    if config.terms is None:
        config.terms = config.bound
    if config.spec_path is None and config.coeffs_path is None:
        spec = forms.newform_spec(config.level)
        series = forms.build(spec, config.terms)
        source = spec.describe()
    else:
        series, source = _load_form(config)
    indices = prodexp.vanishing_indices(series, config.bound)
    _emit(
        _dump_json(
            {
                "level": config.level,
                "bound": config.bound,
                "source": source,
                "indices": indices,
            }
        ),
        config.out_path,
    )
    return 0


_COMMANDS = {
    "expand": cmd_expand,
    "exponents": cmd_exponents,
    "fit": cmd_fit,
    "check": cmd_check,
    "level": cmd_level,
    "kloosterman": cmd_kloosterman,
    "vanishing": cmd_vanishing,
}


# -- argument parsing -------------------------------------------------------------


def _add_source_options(parser, *, spec_only=False, required=True):
    if spec_only:
        parser.add_argument("--spec", type=Path, required=required, metavar="PATH",
                            help="FormSpec JSON file")
        return
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--spec", type=Path, metavar="PATH", help="FormSpec JSON file")
    group.add_argument("--coeffs", type=Path, metavar="PATH",
                       help="coefficient CSV (n,a_n) or, for fit/check, an exponent CSV (m,c_m)")


def _add_common_options(parser, *, formats=("csv", "json"), default_format="csv"):
    parser.add_argument("--out", type=Path, metavar="PATH",
                        help="output file (default: stdout)")
    parser.add_argument("--format", choices=formats, default=default_format)
    parser.add_argument("--jobs", type=int, default=1, metavar="K",
                        help="reserved for batch parallelism; single-form commands run one job")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qprod",
        description="Exact infinite-product exponents of modular forms and "
        "growth-rate verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="write the q-expansion of a form spec")
    _add_source_options(p, spec_only=True)
    p.add_argument("--terms", type=int, required=True, metavar="M")
    _add_common_options(p)

    p = sub.add_parser("exponents", help="extract product exponents c(m)")
    _add_source_options(p)
    p.add_argument("--terms", type=int, required=True, metavar="M")
    _add_common_options(p)

    p = sub.add_parser("fit", help="estimate the zero height y_r from exponent growth")
    _add_source_options(p)
    p.add_argument("--terms", type=int, metavar="M")
    p.add_argument("--window", required=True, metavar="M0:M1")
    _add_common_options(p, formats=("json",), default_format="json")

    p = sub.add_parser("check", help="verify an exponent growth bound")
    p.add_argument("kind", choices=("upper", "omega", "kohnen"))
    _add_source_options(p)
    p.add_argument("--terms", type=int, metavar="M")
    p.add_argument("--window", required=True, metavar="M0:M1")
    p.add_argument("--y-r", dest="y_r", type=float, metavar="X",
                   help="zero height for the upper/omega envelopes")
    p.add_argument("--slope-tol", dest="slope_tol", type=float, default=0.05, metavar="X")
    _add_common_options(p, formats=("json",), default_format="json")

    p = sub.add_parser("level", help="index, elliptic points, cusps and genus of X_0(N)")
    p.add_argument("level", type=int, metavar="N")
    _add_common_options(p, formats=("json",), default_format="json")

    p = sub.add_parser("kloosterman", help="Kloosterman sums K(a, b; c) over multiples of a level")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--c-max", dest="c_max", type=int, required=True, metavar="C")
    p.add_argument("--level", type=int, default=1, metavar="N",
                   help="take c = N, 2N, ... (default 1)")
    _add_common_options(p)

    p = sub.add_parser("vanishing", help="odd indices certified by a vanishing prime coefficient")
    p.add_argument("level", type=int, metavar="N")
    p.add_argument("--bound", type=int, required=True, metavar="B")
    _add_source_options(p, required=False)
    p.add_argument("--terms", type=int, metavar="M")
    _add_common_options(p, formats=("json",), default_format="json")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    window = _parse_window(args.window) if getattr(args, "window", None) else None
    config = RunConfig(
        command=args.command,
        spec_path=getattr(args, "spec", None),
        coeffs_path=getattr(args, "coeffs", None),
        terms=getattr(args, "terms", None),
        window=window,
        y_r=getattr(args, "y_r", None),
        slope_tol=getattr(args, "slope_tol", 0.05),
        out_path=getattr(args, "out", None),
        format=getattr(args, "format", None),
        jobs=getattr(args, "jobs", 1),
        kind=getattr(args, "kind", None),
        level=getattr(args, "level", None),
        bound=getattr(args, "bound", None),
        a=getattr(args, "a", None),
        b=getattr(args, "b", None),
        c_max=getattr(args, "c_max", None),
    )
    if config.jobs < 1:
        raise UsageError("--jobs must be a positive integer")
    return config


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        return _COMMANDS[config.command](config)
    except (QprodError, OSError) as exc:
        print(f"qprod {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
