"""Command-line front end.

Usage::

    fatcantor fig34 --out results --cache ~/.cache/fatcantor
    fatcantor alpha --gamma 3/4 --F thue-morse --n 4095 --eigvec
    fatcantor coeffs --gamma 0.25 --K 4095
    fatcantor check-theorem31 --config run.cfg

A config file holds one ``key = value`` per line (``#`` starts a comment);
keys are the long flag names. Flags given on the command line win.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import traceback
from fractions import Fraction
from pathlib import Path

from .cantor_set import as_fraction
from .harness import EXPERIMENTS, ExperimentSpec, SpecError, run
from .symbolic_sequences import bits_csv, parse_index_set


def parse_grid(text: str) -> list[Fraction]:
    """``a:step:b`` (inclusive) or a comma list; values may be decimals or fractions."""
    text = text.strip()
    if text.count(":") == 2:
        a, step, b = (as_fraction(x) for x in text.split(":"))
        if step <= 0:
            raise SpecError("grid step must be positive")
        out, g = [], a
        while g <= b:
            out.append(g)
            g += step
        return out
    return [as_fraction(x) for x in text.split(",") if x.strip()]


def parse_schedule(text: str) -> list[int]:
    """Comma list of ``n`` or ``pow2:m0:m1`` for ``n = 2**m - 1``."""
    text = text.strip()
    if text.startswith("pow2:"):
        _, m0, m1 = text.split(":")
        return [2**m - 1 for m in range(int(m0), int(m1) + 1)]
    return [int(x) for x in text.split(",") if x.strip()]


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


# flag name -> (spec field, converter)
OPTIONS = {
    "gamma": ("gamma", as_fraction),
    "gamma-grid": ("gamma_grid", parse_grid),
    "K": ("K", int),
    "eps": ("eps", float),
    "schedule": ("schedule", parse_schedule),
    "n": ("n", int),
    "F": ("F", str),
    "out": ("out", Path),
    "cache": ("cache", Path),
    "s": ("s", _floats),
    "j-max": ("j_max", int),
    "J": ("J", int),
    "window": ("window", int),
    "search": ("search", int),
    "shifts": ("shifts", int),
    "radius": ("cover_radius", int),
    "jobs": ("jobs", int),
}


def read_config(path: str | Path) -> dict[str, str]:
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lstrip("-").replace("_", "-")
        if key not in OPTIONS and key not in ("eigvec", "experiment"):
            raise SpecError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fatcantor", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key = value file; flags override it")
        for flag in OPTIONS:
            p.add_argument(f"--{flag}", dest=flag, default=argparse.SUPPRESS)
        p.add_argument("--eigvec", action="store_true", default=argparse.SUPPRESS,
                       help="dump the minimizing eigenvector (alpha)")
    bits = sub.add_parser("bits", help="dump an index set as n,bit CSV")
    bits.add_argument("--F", default="thue-morse")
    bits.add_argument("a", type=int)
    bits.add_argument("b", type=int)
    return parser


def spec_from_args(command: str, args: dict) -> ExperimentSpec:
    raw: dict[str, str] = {}
    if args.get("config"):
        raw.update(read_config(args["config"]))
    raw.update({k: v for k, v in args.items() if k in OPTIONS})
    kwargs = {}
    for key, value in raw.items():
        if key == "experiment":
            continue
        if key == "eigvec":
            kwargs["eigvec"] = str(value).lower() in ("1", "true", "yes", "on")
            continue
        field, convert = OPTIONS[key]
        try:
            kwargs[field] = convert(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"bad value for {key}: {value!r} ({exc})") from exc
    if args.get("eigvec"):
        kwargs["eigvec"] = True
    return ExperimentSpec(experiment=command, **kwargs)


def _fail(exc: BaseException, code: int) -> int:
    err = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(err), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if ns.command == "bits":
            sys.stdout.write(bits_csv(parse_index_set(ns.F), ns.a, ns.b))
            return 0
        spec = spec_from_args(ns.command, vars(ns))
        result = run(spec)
    except (SpecError, ValueError, OSError) as exc:
        return _fail(exc, 2)
    except Exception as exc:  # noqa: BLE001
        if ns.verbose:
            traceback.print_exc()
        return _fail(exc, 1)
    print(json.dumps(result.summary()))
    return 0


if __name__ == "__main__":
    sys.exit(main())
