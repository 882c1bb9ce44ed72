"""Command-line front end.

Exit codes: 0 success, 1 mathematically infeasible request (w in the
spectrum, w0 in the exceptional set, too few scan records), 2 input or
parse failure.  Diagnostics go to stderr; data goes to files or stdout.
All CSV output carries a header row and locale-independent decimals with
17 significant digits, so identical configurations produce byte-identical
artifacts.  The TOEPRES_THREADS environment variable caps scan workers.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .errors import MathDomainError, SymbolFormatError
from .regularity import build_domain, classify, contains
from .resolvent import (
    DEFAULT_PROBES,
    DEFAULT_SEED,
    DEFAULT_TRUNCATION,
    estimate_norm,
)
from .scan import default_radii, flower_preset, grid_scan, ray_scan
from .spectral import TAU_DEFAULT, exceptional_set, partition, spectrum_curve
from .symbol import load_symbol


def parse_complex(text: str) -> complex:
    """Parse 're,im' into a complex number."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 're,im', got {text!r}")
    return complex(float(parts[0]), float(parts[1]))


def parse_direction(text: str) -> complex:
    """Parse a direction: 're,im', or angle sugar 'deg:x' / 'rad:x'."""
    if text.startswith("deg:"):
        return np.exp(1j * np.deg2rad(float(text[4:])))
    if text.startswith("rad:"):
        return np.exp(1j * float(text[4:]))
    return parse_complex(text)


def parse_radii(text: str) -> np.ndarray:
    """Parse radii: 'log:rmax:rmin:per_decade' or a comma list."""
    if text.startswith("log:"):
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError("log radii spec is log:rmax:rmin:per_decade")
        return default_radii(float(parts[1]), float(parts[2]), int(parts[3]))
    vals = np.array([float(x) for x in text.split(",")])
    return vals


def _fmt(x) -> str:
    return f"{x:.17g}"


def _write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_json(path, obj):
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _info(msg):
    print(msg, file=sys.stderr)


def _cmd_spectrum(args):
    b = load_symbol(args.symbol)
    curve = spectrum_curve(b, args.N)
    lines = ["theta,re,im"]
    for th, v in zip(curve.thetas, curve.values):
        lines.append(f"{_fmt(th)},{_fmt(v.real)},{_fmt(v.imag)}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_roots(args):
    b = load_symbol(args.symbol)
    w = parse_complex(args.w)
    div = partition(b, w, args.tau)
    payload = div.root_set.to_dict()
    payload["labels"] = div.label_names()
    payload["tau"] = args.tau
    _write_json(args.out, payload)
    return 0


def _cmd_exceptional(args):
    b = load_symbol(args.symbol)
    exc = exceptional_set(b)
    lines = ["lambda_re,lambda_im,K_re,K_im"]
    for lam, val in zip(exc.lambdas, exc.values):
        lines.append(f"{_fmt(lam.real)},{_fmt(lam.imag)},{_fmt(val.real)},{_fmt(val.imag)}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_regularity(args):
    b = load_symbol(args.symbol)
    w0 = parse_complex(args.w0)
    report = classify(b, w0, args.tau)
    _write_json(args.out, report.to_dict())
    return 0


def _cmd_domain(args):
    b = load_symbol(args.symbol)
    w0 = parse_complex(args.w0)
    dom = build_domain(b, w0, C13=args.C13, eps=args.eps, tau=args.tau)
    xs = np.linspace(w0.real - args.eps, w0.real + args.eps, args.grid)
    ys = np.linspace(w0.imag - args.eps, w0.imag + args.eps, args.grid)
    lines = ["w_re,w_im,member"]
    for y in ys:
        for x in xs:
            member = contains(dom, b, complex(x, y), args.tau)
            lines.append(f"{_fmt(x)},{_fmt(y)},{1 if member else 0}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_resolvent(args):
    b = load_symbol(args.symbol)
    w = parse_complex(args.w)
    est = estimate_norm(
        b,
        w,
        probes=args.probes,
        N=args.N,
        section_n=args.sections,
        seed=args.seed,
        tau=args.tau,
    )
    payload = est.to_dict()
    payload["N"] = args.N
    payload["seed"] = args.seed
    _write_json(args.out, payload)
    return 0


def _cmd_scan(args):
    b = load_symbol(args.symbol)
    w0 = parse_complex(args.w0)
    dom = build_domain(b, w0, C13=args.C13, eps=args.eps, tau=args.tau)
    if args.mode == "ray":
        report = ray_scan(
            b,
            w0,
            parse_direction(args.direction),
            parse_radii(args.radii),
            dom,
            probes=args.probes,
            N=args.N,
            tau=args.tau,
            seed=args.seed,
        )
    else:
        report = grid_scan(
            b,
            w0,
            args.eps,
            args.grid_n,
            dom,
            probes=args.probes,
            N=args.N,
            tau=args.tau,
            seed=args.seed,
        )
    _write_text(args.out, report.csv_text())
    summary = report.summary_dict()
    summary["delta"] = args.delta
    _info(json.dumps(summary, sort_keys=True))
    return 0


def _cmd_example(args):
    if args.name != "flower":
        raise ValueError(f"unknown example {args.name!r}")
    import os

    preset = flower_preset()
    b = preset.symbol
    outdir = args.outdir
    os.makedirs(outdir, exist_ok=True)
    curve = spectrum_curve(b, 2048)

    lines = ["theta,re,im"]
    for th, v in zip(curve.thetas, curve.values):
        lines.append(f"{_fmt(th)},{_fmt(v.real)},{_fmt(v.imag)}")
    _write_text(os.path.join(outdir, "curve.csv"), "\n".join(lines) + "\n")
    _info("wrote curve.csv")

    grid = args.grid
    xs = np.linspace(-preset.eps, preset.eps, grid)
    lines = ["w_re,w_im,member"]
    for y in xs:
        for x in xs:
            member = contains(preset.domain, b, complex(x, y))
            lines.append(f"{_fmt(x)},{_fmt(y)},{1 if member else 0}")
    _write_text(os.path.join(outdir, "membership.csv"), "\n".join(lines) + "\n")
    _info("wrote membership.csv")

    radii = default_radii(1e-1, 1e-4, 8)
    report = ray_scan(
        b,
        preset.w0,
        np.exp(1j * np.pi / 3),
        radii,
        preset.domain,
        probes=args.probes,
        N=args.N,
        seed=args.seed,
        curve=curve,
        preset_name="flower",
    )
    _write_text(os.path.join(outdir, "ray.csv"), report.csv_text())
    _info("wrote ray.csv")

    summary = report.summary_dict()
    summary.update(
        {
            "symbol": b.to_dict(),
            "w0": [0.0, 0.0],
            "direction_deg": 60.0,
            "C13": preset.C13,
            "eps": preset.eps,
            "delta": preset.delta,
            "sectors": [[lo, hi] for lo, hi in preset.sectors],
            "sectors_delta": [[lo, hi] for lo, hi in preset.sectors_delta],
            "probes": args.probes,
            "N": args.N,
            "seed": args.seed,
            "version": __version__,
        }
    )
    _write_json(os.path.join(outdir, "summary.json"), summary)
    _info("wrote summary.json")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="toepres",
        description="banded Toeplitz symbols: spectra, factorizations, "
        "resolvent bounds and growth scans",
    )
    ap.add_argument("--version", action="version", version=f"toepres {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, symbol=True):
        if symbol:
            p.add_argument("--symbol", required=True, help="symbol JSON path")
        p.add_argument("--tau", type=float, default=TAU_DEFAULT,
                       help="unimodular band half-width")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("spectrum", help="sample the curve b(T) as CSV")
    add_common(p)
    p.add_argument("--N", type=int, default=2048)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("roots", help="divisor roots at w as JSON")
    add_common(p)
    p.add_argument("--w", required=True, help="complex point 're,im'")
    p.set_defaults(func=_cmd_roots)

    p = sub.add_parser("exceptional", help="critical points and values as CSV")
    add_common(p)
    p.set_defaults(func=_cmd_exceptional)

    p = sub.add_parser("regularity", help="local-regularity report at w0 as JSON")
    add_common(p)
    p.add_argument("--w0", required=True, help="complex point 're,im'")
    p.set_defaults(func=_cmd_regularity)

    p = sub.add_parser("domain", help="approach-domain membership grid as CSV")
    add_common(p)
    p.add_argument("--w0", required=True)
    p.add_argument("--C13", type=float, default=1.0 / 12.0)
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--grid", type=int, default=101)
    p.set_defaults(func=_cmd_domain)

    p = sub.add_parser("resolvent", help="two-sided resolvent bounds at w as JSON")
    add_common(p)
    p.add_argument("--w", required=True)
    p.add_argument("--probes", type=int, default=DEFAULT_PROBES)
    p.add_argument("--N", type=int, default=DEFAULT_TRUNCATION)
    p.add_argument("--sections", type=int, default=None,
                   help="finite-section size (omit to skip)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_resolvent)

    p = sub.add_parser("scan", help="growth scan near a boundary point (CSV)")
    p.add_argument("mode", choices=["ray", "grid"])
    add_common(p)
    p.add_argument("--w0", required=True)
    p.add_argument("--direction", default="deg:60",
                   help="'re,im' or 'deg:x' (ray mode)")
    p.add_argument("--radii", default="log:1e-1:1e-4:8",
                   help="'log:rmax:rmin:per_decade' or comma list (ray mode)")
    p.add_argument("--grid-n", type=int, default=41, help="grid mode side count")
    p.add_argument("--C13", type=float, default=1.0 / 12.0)
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--delta", type=float, default=np.pi / 36.0,
                   help="recorded sector-interior margin")
    p.add_argument("--probes", type=int, default=DEFAULT_PROBES)
    p.add_argument("--N", type=int, default=DEFAULT_TRUNCATION)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("example", help="run a packaged experiment end to end")
    p.add_argument("name", help="currently: flower")
    p.add_argument("--outdir", default=".")
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--probes", type=int, default=DEFAULT_PROBES)
    p.add_argument("--N", type=int, default=DEFAULT_TRUNCATION)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_example)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except MathDomainError as exc:
        _info(f"error: {exc}")
        return 1
    except (SymbolFormatError, OSError, ValueError) as exc:
        _info(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
