#!/usr/bin/env python3
"""Render the CSV artifacts written by the toepres CLI.

    render.py --kind curve      --in curve.csv      --out curve.png
    render.py --kind membership --in membership.csv --out membership.png
    render.py --kind loglog     --in ray.csv        --out ray.png

Pure post-processing: the only computation is the least-squares slope on the
loglog plot, recomputed from the CSV as a visual cross-check against the
scan summary (the fitted value is also printed to stdout as
`slope_fit_upper=...`).  Rendering is deterministic: fixed figure sizes and
no timestamp metadata, so identical CSVs give identical PNG bytes.

Exit status is 0 on success and 1 on any input problem; schema mismatches
name the offending columns on stderr.
"""
import argparse
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGSIZE = (6.0, 6.0)
DPI = 150

SCHEMAS = {
    "curve": ["theta", "re", "im"],
    "membership": ["w_re", "w_im", "member"],
    "loglog": [
        "w_re", "w_im", "r", "dist", "in_omega_prime",
        "lower", "upper", "product_lower", "product_upper",
    ],
}


class SchemaError(Exception):
    pass


def read_csv(path, expected_columns):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}")
    if not lines:
        raise SchemaError(f"{path} is empty")
    header = lines[0].split(",")
    if header != expected_columns:
        raise SchemaError(
            f"{path} columns {header} do not match expected {expected_columns}"
        )
    if len(lines) == 1:
        raise SchemaError(f"{path} has a header but no data rows")
    data = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])
    if data.shape[1] != len(expected_columns):
        raise SchemaError(f"{path} row width {data.shape[1]} != header width")
    return {name: data[:, i] for i, name in enumerate(expected_columns)}


def save(fig, out):
    fig.savefig(out, dpi=DPI, metadata={"Software": None})
    plt.close(fig)


def render_curve(cols, out):
    re = np.append(cols["re"], cols["re"][0])
    im = np.append(cols["im"], cols["im"][0])
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(re, im, "-", lw=1.2, color="tab:blue")
    ax.set_aspect("equal")
    ax.set_xlabel("Re w")
    ax.set_ylabel("Im w")
    ax.set_title("symbol curve b(T)")
    ax.grid(True, alpha=0.3)
    save(fig, out)


def render_membership(cols, out):
    member = cols["member"] > 0.5
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.scatter(cols["w_re"][~member], cols["w_im"][~member], s=4,
               color="lightgray", marker="s", linewidths=0)
    ax.scatter(cols["w_re"][member], cols["w_im"][member], s=4,
               color="tab:green", marker="s", linewidths=0)
    ax.set_aspect("equal")
    ax.set_xlabel("Re w")
    ax.set_ylabel("Im w")
    ax.set_title("non-tangential domain membership")
    save(fig, out)


def fit_upper_slope(cols):
    """Slope of log(upper) against log(dist) over member rows, matching the
    scan report's fit (members with positive finite data)."""
    keep = (
        (cols["in_omega_prime"] > 0.5)
        & np.isfinite(cols["upper"])
        & np.isfinite(cols["dist"])
        & (cols["upper"] > 0)
        & (cols["dist"] > 0)
    )
    if keep.sum() < 2:
        raise SchemaError("too few member rows to fit a slope")
    return float(
        np.polyfit(np.log(cols["dist"][keep]), np.log(cols["upper"][keep]), 1)[0]
    )


def render_loglog(cols, out):
    member = cols["in_omega_prime"] > 0.5
    slope = fit_upper_slope(cols)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    d = cols["dist"][member]
    ax.loglog(d, cols["upper"][member], "o-", ms=3, label="upper bound")
    ax.loglog(d, cols["lower"][member], "s-", ms=3, label="probe lower bound")
    ax.loglog(d, cols["product_upper"][member], "^--", ms=3,
              label="upper bound x dist")
    ax.loglog(d, cols["product_lower"][member], "v--", ms=3,
              label="lower bound x dist")
    ax.set_xlabel("dist(w, spectrum)")
    ax.set_ylabel("resolvent bound")
    ax.set_title("resolvent growth along the scan")
    ax.annotate(
        f"fitted upper slope: {slope:.6f}",
        xy=(0.05, 0.05), xycoords="axes fraction",
    )
    ax.legend(loc="upper right", fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    save(fig, out)
    print(f"slope_fit_upper={slope:.17g}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--kind", required=True, choices=sorted(SCHEMAS))
    ap.add_argument("--in", dest="inp", required=True, help="input CSV")
    ap.add_argument("--out", required=True, help="output image path")
    args = ap.parse_args(argv)
    try:
        cols = read_csv(args.inp, SCHEMAS[args.kind])
        if args.kind == "curve":
            render_curve(cols, args.out)
        elif args.kind == "membership":
            render_membership(cols, args.out)
        else:
            render_loglog(cols, args.out)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
