"""Command-line surface: instance generation, verification runs, and
corpus sweeps.

Outputs are deterministic functions of the flags and input files, up to
the wall-time fields in verification reports.  Exit codes: 0 when no
selected check fails (timeouts are reported but do not fail a run),
1 on check failure, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import verify as vf
from .blowup import (
    DEFAULT_CHAR,
    DegenerateInstance,
    ValidationError,
    build_instance,
    instance_from_presentation,
    instance_to_json,
    presentation_from_json,
)

REQUIRED_GRID = ((3, 5), (4, 5), (5, 5))
EXTENDED_GRID = REQUIRED_GRID + ((3, 7), (4, 7))


def _budget_defaults(args):
    scale = 10 if getattr(args, "tier", "required") == "extended" else 1
    pairs = args.budget_pairs
    terms = args.budget_terms
    if pairs is None:
        env = os.environ.get("REESFIBER_BUDGET_PAIRS")
        pairs = int(env) if env else 1_000_000 * scale
    if terms is None:
        env = os.environ.get("REESFIBER_BUDGET_TERMS")
        terms = int(env) if env else 2_000_000_000 * scale
    return pairs, terms


def _parse_checks(text):
    if not text:
        return None
    return [part.strip() for part in text.split(",") if part.strip()]


def cmd_gen(args):
    try:
        inst = build_instance(args.d, args.n, args.char, args.seed)
    except (ValueError, DegenerateInstance) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = instance_to_json(inst)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if inst.presentation.resamples:
        print(
            f"note: {inst.presentation.resamples} degenerate draw(s) resampled",
            file=sys.stderr,
        )
    return 0


def _print_table(report, out=None):
    out = out or sys.stdout
    meta = report.instance
    print(
        f"instance d={meta['d']} n={meta['n']} char={meta['char']} "
        f"seed={meta['seed']}",
        file=out,
    )
    width = max(len(r.name) for r in report.records)
    for r in report.records:
        extra = ""
        if r.name == "multiplicity" and "multiplicity" in r.certificate:
            extra = (
                f"e={r.certificate['multiplicity']} "
                f"expected={r.certificate['expected_multiplicity']}"
            )
        elif r.name == "annihilator" and r.certificate.get("minimal_exponent") is not None:
            extra = (
                f"N={r.certificate['minimal_exponent']} "
                f"bound={r.certificate['bound']}"
            )
        elif r.status == "fail":
            extra = "; ".join(f"{k}={v}" for k, v in list(r.certificate.items())[:3])
        print(f"  {r.name:<{width}}  {r.status:<8} {r.seconds:8.2f}s  {extra}", file=out)


def cmd_verify(args):
    try:
        with open(args.instance, "r", encoding="utf-8") as fh:
            pres = presentation_from_json(fh.read())
        inst = instance_from_presentation(pres)
    except OSError as exc:
        print(f"error: cannot read instance: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, DegenerateInstance, ValueError) as exc:
        print(f"error: invalid instance: {exc}", file=sys.stderr)
        return 2
    try:
        selection = _parse_checks(args.checks)
        pairs, terms = _budget_defaults(args)
        report = vf.run_checks(inst, selection, pairs, terms)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _print_table(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    return 0 if report.all_pass() else 1


def _sweep_worker(task):
    d, n, char, seed, selection, pairs, terms = task
    try:
        inst = build_instance(d, n, char, seed)
    except DegenerateInstance as exc:
        return [
            {
                "d": d,
                "n": n,
                "seed": seed,
                "check": "build",
                "status": "fail",
                "seconds": "",
                "multiplicity": "",
                "expected_multiplicity": "",
                "note": str(exc),
            }
        ]
    report = vf.run_checks(inst, selection, pairs, terms)
    rows = []
    want = ""
    if d <= n:
        want = vf.expected_multiplicity(d, n)
    for r in report.records:
        rows.append(
            {
                "d": d,
                "n": n,
                "seed": seed,
                "check": r.name,
                "status": r.status,
                "seconds": f"{r.seconds:.2f}",
                "multiplicity": r.certificate.get("multiplicity", ""),
                "expected_multiplicity": want,
                "note": "" if r.status != "fail" else "failed",
            }
        )
    return rows


_CSV_FIELDS = (
    "d",
    "n",
    "seed",
    "check",
    "status",
    "seconds",
    "multiplicity",
    "expected_multiplicity",
    "note",
)


def cmd_sweep(args):
    grid = EXTENDED_GRID if args.tier == "extended" else REQUIRED_GRID
    if args.d is not None and args.n is not None:
        grid = ((args.d, args.n),)
    selection = _parse_checks(args.checks)
    pairs, terms = _budget_defaults(args)
    tasks = [
        (d, n, args.char, seed, selection, pairs, terms)
        for (d, n) in grid
        for seed in range(args.seed, args.seed + args.count)
    ]
    rows = []
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for chunk in pool.map(_sweep_worker, tasks):
                rows.extend(chunk)
    else:
        for task in tasks:
            rows.extend(_sweep_worker(task))
    order = {name: i for i, name in enumerate(vf.CHECK_ORDER)}
    order["build"] = len(order)
    rows.sort(key=lambda r: (r["d"], r["n"], r["seed"], order.get(r["check"], 99)))
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    text = buf.getvalue()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    bad = [r for r in rows if r["status"] == "fail"]
    return 1 if bad else 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="reesfiber",
        description=(
            "Construct candidate defining ideals of Rees and special fiber "
            "rings of random linearly presented height three Gorenstein "
            "ideals, and verify them by independent Groebner computation."
        ),
    )
    sub = ap.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a random instance JSON")
    gen.add_argument("--d", type=int, required=True, help="number of x variables")
    gen.add_argument("--n", type=int, required=True, help="matrix size (odd)")
    gen.add_argument("--char", type=int, default=DEFAULT_CHAR)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--output", default=None)
    gen.set_defaults(func=cmd_gen)

    ver = sub.add_parser("verify", help="run checks against an instance file")
    ver.add_argument("instance", help="instance JSON path")
    ver.add_argument(
        "--checks",
        default=None,
        help="comma list from: gd, main, multiplicity, hilbert, annihilator, radical, residual",
    )
    ver.add_argument("--budget-pairs", type=int, default=None)
    ver.add_argument("--budget-terms", type=int, default=None)
    ver.add_argument("--tier", choices=("required", "extended"), default="required")
    ver.add_argument("-o", "--output", default=None, help="report JSON path")
    ver.set_defaults(func=cmd_verify)

    sw = sub.add_parser("sweep", help="verify a grid of instances, emit CSV")
    sw.add_argument("--tier", choices=("required", "extended"), default="required")
    sw.add_argument("--d", type=int, default=None, help="restrict to one (d,n)")
    sw.add_argument("--n", type=int, default=None)
    sw.add_argument("--char", type=int, default=DEFAULT_CHAR)
    sw.add_argument("--seed", type=int, default=0, help="first seed")
    sw.add_argument("--count", type=int, default=3, help="seeds per (d,n)")
    sw.add_argument("--checks", default=None)
    sw.add_argument("--budget-pairs", type=int, default=None)
    sw.add_argument("--budget-terms", type=int, default=None)
    sw.add_argument("--jobs", type=int, default=1)
    sw.add_argument("-o", "--output", default=None)
    sw.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
