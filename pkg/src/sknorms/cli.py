"""Command-line front end: norm bounds, reference tables, random-state
distributions, projection reports, undistillability checks.

Exit codes: 0 success / certified, 1 negative verdict, 2 usage or unreadable
input, 3 invalid operator input, 4 solver failure, 5 dimension cap exceeded,
6 undecided verdict.  Human-readable tables round to 4 decimals; CSV and
JSON carry full 17-significant-digit values.  All sampling commands are
deterministic for a fixed seed.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import norms, states
from .qops import (
    OperatorFormatError,
    load_operator,
    reduction_map,
    transpose_map,
)
from .schmidt import schmidt_decompose
from .sdp import SdpSolverError, SolverOptions
from .states import DimensionCapError

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_BAD_INPUT = 3
EXIT_SOLVER = 4
EXIT_DIM_CAP = 5
EXIT_UNKNOWN = 6


# ---------------------------------------------------------------------------
# Output helpers


def _json17(obj, indent=0) -> str:
    """Serialize to JSON with floats at 17 significant digits (lossless)."""
    pad = "  " * indent
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, float):
        return f"{obj:.17g}"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f"{pad}  {json.dumps(str(k))}: {_json17(v, indent + 1)}" for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        inner = ",\n".join(f"{pad}  {_json17(v, indent + 1)}" for v in seq)
        return "[\n" + inner + "\n" + pad + "]"
    return json.dumps(obj)


def _emit_json(command: str, inputs: dict, results: dict, solver: dict | None):
    doc = {"command": command, "inputs": inputs, "results": results, "solver": solver}
    print(_json17(doc))


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _csv_cell(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _write_csv(path: str | None, header: list, rows: list):
    lines = [",".join(header)]
    lines += [",".join(_csv_cell(c) for c in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# Commands


def _maps_for(choice: str, k: int, m: int):
    """Map selection for an S(k) upper bound; transpose/reduction certify
    only k = 1, so larger k falls back to the unconstrained bound."""
    if k >= 2:
        return [], "unconstrained"
    table = {
        "transpose": [transpose_map(m)],
        "reduction": [reduction_map(m)],
        "both": [transpose_map(m), reduction_map(m)],
    }
    maps = table[choice]
    return maps, ",".join(p.name for p in maps)


def cmd_norm(args) -> int:
    op = load_operator(args.input)
    n, m = op.bipartite
    if not 1 <= args.k <= m:
        raise ValueError(f"k must lie in [1, {m}] for this operator, got {args.k}")
    maps, used = _maps_for(args.maps, args.k, m)
    if args.k >= 2 and args.maps != "both":
        print(
            f"note: map choice {args.maps!r} certifies only k = 1; "
            "using the unconstrained bound",
            file=sys.stderr,
        )
    elif args.k >= 2:
        print("note: k >= 2 uses the unconstrained upper bound", file=sys.stderr)

    lower = norms.sk_lower_bound_seesaw(
        op, args.k, restarts=args.restarts, seed=args.seed
    )
    if maps:
        upper = norms.sk_upper_bound(op, args.k, maps)
    else:
        upper = norms.cone_norm(op, [])
        upper.lower = None
    bound = lower.merged(upper)
    lam = bound.upper_certificate[0] if bound.upper_certificate else None
    coeffs = schmidt_decompose(bound.lower_witness, (n, m)).coeffs

    if args.format == "json":
        _emit_json(
            "norm",
            {
                "input": args.input,
                "k": args.k,
                "maps": args.maps,
                "restarts": args.restarts,
                "seed": args.seed,
                "dims": [n, m],
            },
            {
                "lower": bound.lower,
                "upper": bound.upper,
                "gap": bound.upper - bound.lower,
                "certificate_lambda": lam,
                "witness_schmidt_coeffs": [float(c) for c in coeffs],
                "maps_used": used,
            },
            bound.solver_stats,
        )
    else:
        print(f"operator          {args.input}  ({n} x {m}, k={args.k})")
        print(f"lower bound       {_fmt(bound.lower)}")
        print(f"upper bound       {_fmt(bound.upper)}  (maps: {used})")
        print(f"gap               {_fmt(bound.upper - bound.lower)}")
        if lam is not None:
            print(f"certificate       lambda = {_fmt(lam)}")
        print("witness schmidt   " + " ".join(_fmt(float(c)) for c in coeffs))
    return EXIT_OK


WERNER_TABLE_ROWS = [(2, 0.5), (2, -0.5), (3, 0.5), (3, -0.5)]


def cmd_werner_table(args) -> int:
    rows = []
    solver = None
    for n, alpha in WERNER_TABLE_ROWS:
        rho = states.werner(n, alpha)
        exact = states.werner_norm_exact(n, alpha, 1)
        vals = {}
        for phi in (transpose_map(n), reduction_map(n)):
            bound = norms.sk_upper_bound(rho, 1, [phi])
            vals[phi.name] = bound.upper
            solver = bound.solver_stats
        rows.append((n, alpha, exact, vals["transpose"], vals["reduction"]))
    if args.format == "json":
        _emit_json(
            "werner-table",
            {},
            {
                "rows": [
                    {
                        "n": n,
                        "alpha": alpha,
                        "exact": round(e, 4),
                        "transpose": round(t, 4),
                        "reduction": round(rd, 4),
                    }
                    for n, alpha, e, t, rd in rows
                ]
            },
            solver,
        )
        return EXIT_OK
    header = ["n", "alpha", "exact", "transpose", "reduction"]
    printable = [
        (n, f"{alpha:.4f}", f"{e:.4f}", f"{t:.4f}", f"{rd:.4f}") for n, alpha, e, t, rd in rows
    ]
    _write_csv(args.out, header, printable)
    return EXIT_OK


def cmd_bures_dist(args) -> int:
    if args.format == "json" and args.out is None:
        print("--format json requires --out for the CSV rows", file=sys.stderr)
        return EXIT_USAGE
    dim = args.dim
    split = {4: (2, 2), 9: (3, 3)}[dim]
    if dim == 4:
        header = ["sample"] + [f"lambda{i + 1}" for i in range(dim)] + ["s1"]
    else:
        header = (
            ["sample"]
            + [f"lambda{i + 1}" for i in range(dim)]
            + ["s1_lower", "s1_upper", "s2_lower", "s2_upper"]
        )
    both = [transpose_map(split[1]), reduction_map(split[1])]
    rows = []
    failures = 0
    solver = None
    for i in range(args.samples):
        rho = states.bures_sample(split, seed=np.random.default_rng([args.seed, i]))
        eigs = np.linalg.eigvalsh(np.asarray(rho))
        row = [i] + [float(v) for v in eigs]
        seesaw_seed = args.seed + 7919 * i + 1
        try:
            if dim == 4:
                row.append(norms.sk_exact_small(rho))
            else:
                lo1 = norms.sk_lower_bound_seesaw(rho, 1, seed=seesaw_seed)
                up1 = norms.sk_upper_bound(rho, 1, both)
                lo2 = norms.sk_lower_bound_seesaw(rho, 2, seed=seesaw_seed)
                up2 = norms.cone_norm(rho, [])
                solver = up2.solver_stats
                row += [lo1.lower, up1.upper, lo2.lower, up2.upper]
        except SdpSolverError:
            failures += 1
            row += [float("nan")] * (len(header) - len(row))
        rows.append(tuple(row))
    _write_csv(args.out, header, rows)
    if args.format == "json":
        _emit_json(
            "bures-dist",
            {"dim": dim, "samples": args.samples, "seed": args.seed, "out": args.out},
            {"rows_written": len(rows), "solver_failures": failures},
            solver,
        )
    if failures > 0.01 * args.samples:
        print(f"solver failed on {failures}/{args.samples} samples", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_proj(args) -> int:
    fam = states.proj_family(args.n, args.r)
    P = fam.matrix
    s1 = states.proj_s1_exact(args.n, args.r)
    nn = args.n**args.r
    upper = norms.sk_upper_bound(P, 1, [transpose_map(nn)])
    lo2 = norms.sk_lower_bound_seesaw(P, 2, seed=args.seed)
    s2_formula = states.proj_s2_upper(args.n, args.r)
    if args.format == "json":
        _emit_json(
            "proj",
            {"n": args.n, "r": args.r, "seed": args.seed},
            {
                "rank": fam.rank,
                "s1_exact": s1,
                "s1_sdp_upper": upper.upper,
                "s2_upper_formula": s2_formula,
                "s2_seesaw_lower": lo2.lower,
            },
            upper.solver_stats,
        )
    else:
        print(f"projection        n={args.n} r={args.r}  (dim {nn * nn}, rank {fam.rank})")
        print(f"s1 closed form    {_fmt(s1)}")
        print(f"s1 sdp upper      {_fmt(upper.upper)}")
        print(f"s2 upper formula  {_fmt(s2_formula)}")
        print(f"s2 seesaw lower   {_fmt(lo2.lower)}")
    return EXIT_OK


def cmd_undistill(args) -> int:
    if args.alpha is not None:
        rep = states.check_r_undistillable(args.n, args.r, args.alpha)
    else:
        rep = states.UndistillabilityReport(
            n=args.n,
            r=args.r,
            alpha=float("nan"),
            p=states.p_value(args.n, args.r),
            threshold=states.undistill_threshold(args.n, args.r),
            simple_threshold=states.undistill_threshold_simple(args.n, args.r),
            certified=False,
        )
    if args.format == "json":
        _emit_json(
            "undistill",
            {"n": args.n, "r": args.r, "alpha": args.alpha},
            {
                "p": rep.p,
                "threshold": rep.threshold,
                "simple_threshold": rep.simple_threshold,
                "certified": rep.certified if args.alpha is not None else None,
            },
            None,
        )
    else:
        print(f"copies            n={args.n} r={args.r}")
        print(f"p                 {_fmt(rep.p)}")
        thr = "undefined (p < 1)" if rep.threshold is None else _fmt(rep.threshold)
        print(f"threshold         {thr}")
        print(f"simple threshold  {_fmt(rep.simple_threshold)}")
        if args.alpha is not None:
            verdict = "certified" if rep.certified else "not certified"
            print(f"alpha {_fmt(args.alpha):<12}{verdict}")
    if args.alpha is not None and not rep.certified:
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_check_bp(args) -> int:
    op = load_operator(args.input)
    n, m = op.bipartite
    if not 1 <= args.k <= m:
        raise ValueError(f"k must lie in [1, {m}] for this operator, got {args.k}")
    cert = norms.is_k_block_positive(op, args.k, restarts=args.restarts, seed=args.seed)
    ev = cert.evidence
    witness_coeffs = None
    if "witness" in ev:
        witness_coeffs = [float(c) for c in schmidt_decompose(ev["witness"], (n, m)).coeffs]
    if args.format == "json":
        results = {
            "verdict": cert.verdict.value,
            "shift": ev.get("shift"),
            "upper": ev.get("upper"),
            "lower": ev.get("lower"),
            "maps": ev.get("maps"),
            "witness_value": ev.get("witness_value"),
            "witness_schmidt_coeffs": witness_coeffs,
        }
        _emit_json(
            "check-bp",
            {"input": args.input, "k": args.k, "dims": [n, m]},
            results,
            None,
        )
    else:
        print(f"operator          {args.input}  ({n} x {m}, k={args.k})")
        print(f"verdict           {cert.verdict.value}")
        print(f"shift c           {_fmt(ev['shift'])}")
        print(f"norm upper        {_fmt(ev['upper'])}  (maps: {ev['maps']})")
        if "lower" in ev:
            print(f"norm lower        {_fmt(ev['lower'])}")
        if witness_coeffs is not None:
            print(f"witness value     {_fmt(ev['witness_value'])}  (negative form value)")
            print("witness schmidt   " + " ".join(_fmt(c) for c in witness_coeffs))
    if cert.verdict is norms.Verdict.CertifiedYes:
        return EXIT_OK
    if cert.verdict is norms.Verdict.CertifiedNo:
        return EXIT_NEGATIVE
    return EXIT_UNKNOWN


def cmd_brandao(args) -> int:
    if args.format == "json" and args.out is None:
        print("--format json requires --out for the CSV rows", file=sys.stderr)
        return EXIT_USAGE
    rhs = states.brandao_rhs(args.n, args.rank, args.eps)
    both = [transpose_map(args.n), reduction_map(args.n)]
    rows = []
    solver = None
    for t in range(args.trials):
        P = states.random_projection(args.n, args.rank, seed=np.random.default_rng([args.seed, t]))
        lo = norms.sk_lower_bound_seesaw(P, 1, seed=args.seed + 7919 * t + 1)
        up = norms.sk_upper_bound(P, 1, both)
        solver = up.solver_stats
        rows.append((t, lo.lower, up.upper, rhs))
    _write_csv(args.out, ["trial", "s1_lower", "s1_upper", "rhs"], rows)
    if args.format == "json":
        _emit_json(
            "brandao",
            {
                "n": args.n,
                "rank": args.rank,
                "eps": args.eps,
                "trials": args.trials,
                "seed": args.seed,
                "out": args.out,
            },
            {
                "rhs": rhs,
                "trials_run": len(rows),
                "upper_always_at_least_rhs": bool(all(r[2] >= rhs - 1e-9 for r in rows)),
            },
            solver,
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sknorms",
        description="Schmidt-restricted operator norm bounds and certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("norm", help="two-sided S(k) norm bounds for an operator file")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--maps", choices=["transpose", "reduction", "both"], default="both")
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    add_format(p)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("werner-table", help="reference table of Werner-state norm bounds")
    p.add_argument("--out", default=None)
    add_format(p)
    p.set_defaults(func=cmd_werner_table)

    p = sub.add_parser("bures-dist", help="norm distribution over Bures-random states")
    p.add_argument("--dim", type=int, choices=[4, 9], required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    add_format(p)
    p.set_defaults(func=cmd_bures_dist)

    p = sub.add_parser("proj", help="norm report for the recursive projection family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    add_format(p)
    p.set_defaults(func=cmd_proj)

    p = sub.add_parser("undistill", help="undistillability thresholds and certification")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--alpha", type=float, default=None)
    add_format(p)
    p.set_defaults(func=cmd_undistill)

    p = sub.add_parser("check-bp", help="certify k-block positivity of an operator file")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    add_format(p)
    p.set_defaults(func=cmd_check_bp)

    p = sub.add_parser("brandao", help="S(1) brackets of random projections vs. the conjectured bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--eps", type=float, default=0.99)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    add_format(p)
    p.set_defaults(func=cmd_brandao)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OperatorFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DimensionCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIM_CAP
    except SdpSolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
