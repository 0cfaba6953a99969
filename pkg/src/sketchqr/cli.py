"""Command-line harness: factor, quality, counters, cdf, image, synth.

Every CSV output starts with '#' comment lines recording the code version
and the complete parameter set, so a result file is enough to rerun it.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .mmio import read_matrix_market, write_matrix_market
from .pgm import read_pgm, write_pgm
from .quality import (
    ALGORITHMS,
    ExperimentSpec,
    emit_cdf_table,
    make_factorization,
    run_counters,
    run_quality,
    write_csv,
)
from .randomized import tuxv
from .synth import synth_matrix

_QR_ALGOS = ("qrcp2", "qrcp3", "qr", "ssrqrcp", "rqrcp", "rsrqrcp", "trqrcp")


def parse_seed(text: str) -> int:
    """Decimal or 0x-prefixed hex; leading-zero decimals stay decimal."""
    t = text.strip().lower()
    if t.startswith("0x") or t.startswith("-0x"):
        return int(t, 16)
    return int(t, 10)


def parse_synth(desc: str):
    """Parse 'kind:key=val,key=val' into (kind, params)."""
    kind, _, tail = desc.partition(":")
    kind = kind.strip()
    if not kind:
        raise ValueError(f"empty synth kind in {desc!r}")
    params = {}
    for item in filter(None, (s.strip() for s in tail.split(","))):
        key, sep, val = item.partition("=")
        if not sep:
            raise ValueError(f"synth parameter {item!r} is not key=value")
        try:
            params[key.strip()] = int(val)
        except ValueError:
            params[key.strip()] = float(val)
    return kind, params


def load_matrix(args) -> tuple[np.ndarray, str]:
    """Matrix plus a source tag for the CSV header."""
    if (args.matrix is None) == (args.synth is None):
        raise ValueError("exactly one of --matrix and --synth is required")
    if args.matrix is not None:
        ext = os.path.splitext(args.matrix)[1].lower()
        A = read_pgm(args.matrix) if ext == ".pgm" else read_matrix_market(args.matrix)
        return A, f"file:{args.matrix}"
    kind, params = parse_synth(args.synth)
    return synth_matrix(kind, seed=args.seed, **params), f"synth:{args.synth}"


def _spec(args, A, reps=1) -> ExperimentSpec:
    m, n = A.shape
    rank = args.rank if args.rank is not None else min(m, n)
    return ExperimentSpec(args.algo, args.source_tag, m, n, rank,
                          args.block, args.pad, args.seed, reps)


def cmd_factor(args) -> int:
    A, args.source_tag = load_matrix(args)
    spec = _spec(args, A)
    pf = make_factorization(A, args.algo, spec.rank, args.block, args.pad, args.seed)
    c = pf.counters
    comments = spec.comment_lines() + [
        f"achieved_rank={pf.achieved_rank} rel_residual={pf.rel_residual(A)!r}",
        f"trailing_passes={c.trailing_passes} blas2_volume={c.blas2_volume} "
        f"blas3_volume={c.blas3_volume}",
    ]
    rows = [(j, int(pf.perm[j]), float(pf.r_diag[j])) for j in range(pf.achieved_rank)]
    write_csv(args.out, comments, ["index", "column", "r_diag"], rows)
    return 0


def cmd_quality(args) -> int:
    A, args.source_tag = load_matrix(args)
    spec = _spec(args, A, reps=args.reps)
    records = run_quality(A, args.algo, spec.rank, args.block, args.pad,
                          args.seed, args.reps)
    rows = [(r.algorithm, r.rank, r.reps, r.err_min, r.err_median, r.err_max)
            for r in records]
    comments = spec.comment_lines()
    if args.algo == "qr":
        comments.append("qr rows use the presorted variant: columns ordered by "
                        "descending 2-norm before the unpivoted factorization")
    write_csv(args.out, comments,
              ["algorithm", "rank", "reps", "err_min", "err_median", "err_max"], rows)
    return 0


def cmd_counters(args) -> int:
    A, args.source_tag = load_matrix(args)
    spec = _spec(args, A)
    report = run_counters(A, args.algo, spec.rank, args.block, args.pad, args.seed)
    write_csv(args.out, spec.comment_lines(), list(report), [list(report.values())])
    return 0


def cmd_cdf(args) -> int:
    ells = [int(s) for s in args.ells.split(",") if s.strip()]
    taus = [float(s) for s in args.taus.split(",") if s.strip()]
    columns, rows = emit_cdf_table(ells, taus)
    comments = [f"sketchqr {__version__}",
                f"cdf ells={args.ells} taus={args.taus}"]
    write_csv(args.out, comments, columns, rows)
    return 0


def cmd_image(args) -> int:
    A, args.source_tag = load_matrix(args)
    spec = _spec(args, A)
    if args.algo == "tuxv":
        res = tuxv(A, spec.rank, b=args.block, p=args.pad, seed=args.seed,
                   allow_large_k=True)
        approx = res.reconstruct()
    elif args.algo in _QR_ALGOS:
        pf = make_factorization(A, args.algo, spec.rank, args.block, args.pad,
                                args.seed, presort_qr=True)
        approx = pf.reconstruct()
    else:
        raise ValueError(f"image supports tuxv and the QR family, not {args.algo!r}")
    err = float(np.linalg.norm(A - approx) / np.linalg.norm(A))
    print(f"algorithm={args.algo} rank={spec.rank} m={spec.m} n={spec.n} "
          f"seed={args.seed:#x} rel_error={err!r}")
    if args.out:
        write_pgm(approx, args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_synth(args) -> int:
    kind, params = parse_synth(args.synth)
    A = synth_matrix(kind, seed=args.seed, **params)
    write_matrix_market(A, args.out, comments=[
        f"sketchqr {__version__}",
        f"synth {args.synth} seed={args.seed:#x}",
    ])
    print(f"wrote {args.out} ({A.shape[0]}x{A.shape[1]})")
    return 0


def _add_matrix_args(sp, algos, default_algo) -> None:
    sp.add_argument("--algo", choices=algos, default=default_algo)
    sp.add_argument("--matrix", metavar="PATH",
                    help="Matrix Market (.mtx) or PGM (.pgm) input")
    sp.add_argument("--synth", metavar="KIND:PARAMS",
                    help="synthetic input, e.g. decay:m=128,n=128,ratio=0.8")
    sp.add_argument("--rank", type=int, default=None,
                    help="truncation rank (default: min(m, n))")
    sp.add_argument("--block", type=int, default=32)
    sp.add_argument("--pad", type=int, default=8)
    sp.add_argument("--seed", type=parse_seed, default=0,
                    help="decimal or hex, e.g. 42 or 0x2a")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sketchqr",
                                 description="randomized pivoted QR toolkit")
    ap.add_argument("--version", action="version", version=f"sketchqr {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("factor", help="factor one matrix, emit pivots and R diagonal")
    _add_matrix_args(sp, _QR_ALGOS, "rqrcp")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_factor)

    sp = sub.add_parser("quality", help="error-vs-rank table over repetitions")
    _add_matrix_args(sp, ALGORITHMS, "rqrcp")
    sp.add_argument("--reps", type=int, default=100)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_quality)

    sp = sub.add_parser("counters", help="communication counters of one run")
    _add_matrix_args(sp, [a for a in ALGORITHMS if a != "svd"], "rqrcp")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_counters)

    sp = sub.add_parser("cdf", help="sample-scaling CDF table")
    sp.add_argument("--ells", default="4,8,16,32,64")
    sp.add_argument("--taus", default="0.0625,0.125,0.25,0.5,0.75,1.0")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_cdf)

    sp = sub.add_parser("image", help="low-rank image reconstruction to PGM")
    _add_matrix_args(sp, ("tuxv",) + _QR_ALGOS, "tuxv")
    sp.add_argument("--out", default=None, help="output PGM path")
    sp.set_defaults(func=cmd_image)

    sp = sub.add_parser("synth", help="write a synthetic matrix as Matrix Market")
    sp.add_argument("--synth", metavar="KIND:PARAMS", required=True)
    sp.add_argument("--seed", type=parse_seed, default=0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_synth)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
