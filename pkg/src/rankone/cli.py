"""Command-line surface: descriptor in, CSV/JSON/SVG out.

Five subcommands share one descriptor argument, which is either a path to a
JSON file or the name of a bundled fixture (an optional fixtures/ prefix
and .json suffix are accepted, so shell completion on the repository layout
works too).

Exit codes: 0 success, 1 validation error, 2 undecided at the precision
cap, 3 resource cap exceeded.  Output is deterministic: identical flags
and descriptor produce byte-identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys as _sys
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import subdynamics as sd
from . import svg as svgmod
from .balls import DEFAULT_PRECISION_ENV, MAX_PRECISION_ENV, default_precision, max_precision
from .errors import (
    DescriptorError,
    FitAmbiguityError,
    FitInconsistencyError,
    ResourceCapError,
    UndecidedError,
    UnsupportedOperationError,
)
from .periodic import grid
from .system import SystemDescriptor, fixture_names, load_fixture, parse_descriptor
from .zeta import inverse_roots, is_expansive_element

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_UNDECIDED = 2
EXIT_RESOURCE = 3


def _load_descriptor(arg: str) -> SystemDescriptor:
    if os.path.exists(arg):
        with open(arg, "rb") as fh:
            return parse_descriptor(fh.read())
    name = os.path.basename(arg)
    if name.endswith(".json"):
        name = name[: -len(".json")]
    if name in fixture_names():
        return load_fixture(name)
    raise DescriptorError(
        "", f"no such file, and no bundled fixture named {name!r} "
        f"(available: {', '.join(fixture_names())})"
    )


def _parse_ranges(text: str, d: int) -> List[Tuple[int, int]]:
    parts = text.split(",")
    if len(parts) != d:
        raise DescriptorError("", f"--range needs {d} comma-separated spans, got {len(parts)}")
    out = []
    for part in parts:
        lo, sep, hi = part.partition("..")
        if not sep:
            raise DescriptorError("", f"span {part!r} is not of the form lo..hi")
        try:
            out.append((int(lo), int(hi)))
        except ValueError:
            raise DescriptorError("", f"span {part!r} has non-integer endpoints")
    return out


def _parse_direction(text: str, d: int) -> Tuple[int, ...]:
    parts = text.split(",")
    if len(parts) != d:
        raise DescriptorError("", f"--n needs {d} comma-separated integers, got {len(parts)}")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise DescriptorError("", f"--n components must be integers: {text!r}")


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv_cell(value: str) -> str:
    if any(ch in value for ch in ',"\n'):
        return '"' + value.replace('"', '""') + '"'
    return value


def _exact_json(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


# --------------------------------------------------------------------------
# subcommands


def _cmd_periodic(args) -> int:
    system = _load_descriptor(args.descriptor)
    ranges = _parse_ranges(args.range, system.d)
    result = grid(system, ranges, args.j)
    if args.format == "csv":
        _emit(result.to_csv(), args.output)
    else:
        doc = {
            "command": "periodic",
            "descriptor_hash": system.descriptor_hash(),
            "label": system.label,
            "convention": args.convention,
            "j": args.j,
        }
        doc.update(result.to_json())
        _emit(_json_text(doc), args.output)
    return EXIT_OK


def _cmd_zeta(args) -> int:
    system = _load_descriptor(args.descriptor)
    n = _parse_direction(args.n, system.d)
    zf = inverse_roots(
        system, n, precision=args.precision_bits, force=args.force, j_check=args.jmax
    )
    def sort_key(c):
        if c.exact is not None:
            return (0, c.exact, 0.0)
        ball = c.ball(zf.precision)
        return (1, Fraction(0), abs(ball.re.mid_float()) + abs(ball.im.mid_float()))

    factors = sorted(zf.factors, key=sort_key)
    doc = {
        "command": "zeta",
        "descriptor_hash": system.descriptor_hash(),
        "label": system.label,
        "c": [
            _exact_json(c.exact) if c.exact is not None
            else c.value_json(zf.precision)
            for c in factors
        ],
        "lambda": [c.coefficient for c in factors],
    }
    doc.update(zf.to_json())
    _emit(_json_text(doc), args.output)
    return EXIT_OK


def _portrait_directions(system: SystemDescriptor, samples: Optional[int]):
    if samples is None:
        # structural by default for d >= 3; curves are cheap on the circle
        samples = 720 if system.d == 2 else 0
    if samples <= 0:
        return None
    if system.d == 2:
        return sd.circle_directions(samples)
    if system.d == 3:
        return sd.sphere_directions(samples)
    return None


def _cmd_portrait(args) -> int:
    system = _load_descriptor(args.descriptor)
    if args.format == "svg":
        directions = _portrait_directions(system, args.samples or 0)
    else:
        directions = _portrait_directions(system, args.samples)
    portrait = sd.build_portrait(
        system, directions, convention=args.convention, prec=args.precision_bits
    )
    for warning in portrait.warnings:
        print(f"warning: {warning}", file=_sys.stderr)
    if args.format == "svg":
        _emit(svgmod.portrait_svg(portrait), args.output)
    else:
        doc = {"command": "portrait"}
        doc.update(portrait.to_json())
        _emit(_json_text(doc), args.output)
    return EXIT_OK


def _cmd_omega(args) -> int:
    system = _load_descriptor(args.descriptor)
    samples = args.samples
    if samples is None:
        samples = 720 if system.d == 2 else 180
    if system.d == 2:
        directions = sd.circle_directions(samples)
    elif system.d == 3:
        directions = sd.sphere_directions(samples)
    else:
        raise UnsupportedOperationError("omega sampling is available for d = 2 and d = 3 only")
    rows = sd.omega_samples(system, directions, args.convention, args.precision_bits)
    if args.format == "csv":
        d = system.d
        header = ",".join(f"v{i + 1}" for i in range(d)) + ",branch,lo,hi"
        lines = [header]
        for direction, subset, value in rows:
            lo, hi = value.float_bounds()
            branch = "{" + ",".join(str(i) for i in subset) + "}"
            lines.append(
                ",".join(f"{x:.12e}" for x in direction)
                + f",{_csv_cell(branch)},{lo:.12e},{hi:.12e}"
            )
        _emit("\n".join(lines) + "\n", args.output)
    else:
        doc = {
            "command": "omega",
            "descriptor_hash": system.descriptor_hash(),
            "label": system.label,
            "convention": args.convention,
            "precision_bits": args.precision_bits,
            "samples": [
                {
                    "direction": [float(f"{x:.12e}") for x in direction],
                    "branch": list(subset),
                    "value": [float(f"{b:.12e}") for b in value.float_bounds()],
                }
                for direction, subset, value in rows
            ],
        }
        _emit(_json_text(doc), args.output)
    return EXIT_OK


def _analyze_zeta_entry(system: SystemDescriptor, n: Tuple[int, ...], prec: int) -> dict:
    entry: dict = {"n": list(n)}
    expansive = is_expansive_element(system, n)
    if expansive is None:
        entry["status"] = "undecided-expansiveness"
        return entry
    entry["expansive"] = expansive
    if not expansive:
        entry["status"] = "skipped: not expansive, rationality not guaranteed"
        return entry
    try:
        zf = inverse_roots(system, n, precision=prec)
    except (UndecidedError, FitInconsistencyError, FitAmbiguityError, ResourceCapError) as exc:
        entry["status"] = f"failed: {exc}"
        return entry
    entry["status"] = "ok"
    entry["mu"] = zf.mu
    entry["factors"] = [
        {
            "c": _exact_json(c.exact) if c.exact is not None else c.value_json(zf.precision),
            "lambda": c.coefficient,
        }
        for c in zf.factors
    ]
    return entry


def _cmd_analyze(args) -> int:
    system = _load_descriptor(args.descriptor)
    prec = args.precision_bits
    ergodicity, ergodicity_warnings = system.ergodicity()
    portrait = sd.build_portrait(system, None, convention=args.convention, prec=prec)
    directions = [
        tuple(1 if i == k else 0 for i in range(system.d)) for k in range(system.d)
    ]
    directions.append(tuple(1 for _ in range(system.d)))
    zeta_entries = [_analyze_zeta_entry(system, n, prec) for n in directions]
    warnings = list(ergodicity_warnings) + list(portrait.warnings)
    doc = {
        "command": "analyze",
        "descriptor_hash": system.descriptor_hash(),
        "label": system.label,
        "d": system.d,
        "convention": args.convention,
        "precision_bits": prec,
        "validation": {
            "ok": True,
            "ergodicity": ergodicity,
            "components": [comp.canonical(mult) for comp, mult in system.components],
        },
        "characters": [chi.describe() for chi in system.all_characters()],
        "portrait": portrait.to_json(),
        "zeta": zeta_entries,
        "warnings": warnings,
    }
    for warning in warnings:
        print(f"warning: {warning}", file=_sys.stderr)
    _emit(_json_text(doc), args.output)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser and dispatch


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("descriptor", help="descriptor JSON path or bundled fixture name")
    p.add_argument("-o", "--output", help="write to this path instead of stdout")
    p.add_argument(
        "--precision-bits", type=int, default=None,
        help=f"working precision (default: ${DEFAULT_PRECISION_ENV} or 64)",
    )
    p.add_argument(
        "--max-precision-bits", type=int, default=None,
        help=f"escalation cap (default: ${MAX_PRECISION_ENV} or 4096)",
    )
    p.add_argument(
        "--convention", choices=list(sd.CONVENTIONS), default=sd.INVERSE_ROOT,
        help="pole/zero value convention for reported magnitudes",
    )


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankone",
        description="periodic points, zeta data and expansive subdynamics "
        "of algebraic Z^d-actions of entropy rank one",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="validation, portrait and zeta summary in one JSON")
    _add_common(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("periodic", help="periodic-point counts over a lattice box")
    _add_common(p)
    p.add_argument("--range", required=True, help="per-coordinate spans, e.g. -5..5,0..5")
    p.add_argument("--j", type=int, default=1, help="period multiplier (default 1)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=_cmd_periodic)

    p = sub.add_parser("zeta", help="inverse-root factorization of one direction zeta")
    _add_common(p)
    p.add_argument("--n", required=True, help="integer direction, e.g. 1,1")
    p.add_argument("--jmax", type=int, default=None, help="periods used to anchor the fit")
    p.add_argument(
        "--force", action="store_true",
        help="attempt the fit even when the direction is not expansive",
    )
    p.set_defaults(func=_cmd_zeta)

    p = sub.add_parser("portrait", help="non-expansive hyperplanes, crossings and samples")
    _add_common(p)
    p.add_argument(
        "--samples", type=int, default=None,
        help="sampling density (d=2: points on the circle, default 720; "
        "d=3: grid side, default structural only)",
    )
    p.add_argument("--format", choices=["json", "svg"], default="json")
    p.set_defaults(func=_cmd_portrait)

    p = sub.add_parser("omega", help="raw branch-value samples over directions")
    _add_common(p)
    p.add_argument(
        "--samples", type=int, default=None,
        help="sampling density (d=2 default 720, d=3 default 180)",
    )
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=_cmd_omega)

    return parser


def _join_dash_values(argv: Sequence[str]) -> List[str]:
    """Fold values starting with '-' into flag=value form for argparse.

    Lets `--range -5..5,0..5` and `--n -1,2` work as documented instead of
    being read as unknown option strings.
    """
    out: List[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--range", "--n") and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    if argv is None:
        argv = _sys.argv[1:]
    args = _parser().parse_args(_join_dash_values(argv))
    if args.max_precision_bits is not None:
        os.environ[MAX_PRECISION_ENV] = str(args.max_precision_bits)
    if args.precision_bits is not None:
        os.environ[DEFAULT_PRECISION_ENV] = str(args.precision_bits)
    else:
        args.precision_bits = default_precision()
    if args.precision_bits > max_precision():
        print(
            f"error: --precision-bits {args.precision_bits} exceeds the cap {max_precision()}",
            file=_sys.stderr,
        )
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except DescriptorError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_VALIDATION
    except (UnsupportedOperationError, ValueError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_VALIDATION
    except (FitInconsistencyError, FitAmbiguityError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_UNDECIDED
    except UndecidedError as exc:
        print(f"error: undecided at the precision cap: {exc.what}", file=_sys.stderr)
        return EXIT_UNDECIDED
    except ResourceCapError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    raise SystemExit(main())
