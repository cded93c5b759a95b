"""Command-line entry point: ``treericci <command> --tree FILE [options]``.

Exit codes: 0 success, 2 input error, 3 numerical failure,
4 precondition violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Sequence

import numpy as np

from .asymptotics import (
    asymptotics,
    convergence_diagnostics,
    lambda_infinity,
    lambda_sequence,
)
from .errors import NumericalError, PreconditionError, RicciError, TreeError, UnknownVertex
from .growth import one_step_guarantee, theta
from .reduction import DIMENSION_CAP, full_lambda, read_orbits, reduced_system
from .ricci import einstein_check, schrodinger_split
from .tree import edge_label, read_tree

EXIT_INPUT, EXIT_NUMERICAL, EXIT_PRECONDITION = 2, 3, 4


class InputError(Exception):
    pass


def parse_ks(spec: str) -> list[int]:
    """Parse ``"0..10,20,1e3"`` into a sorted list of distinct integers."""
    out: set[int] = set()
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..")
                lo, hi = _as_int(lo), _as_int(hi)
                if hi < lo:
                    raise InputError(f"empty range {part!r}")
                out.update(range(lo, hi + 1))
            else:
                out.add(_as_int(part))
        except ValueError as exc:
            raise InputError(f"bad k spec {part!r}") from exc
    if not out:
        raise InputError("empty k spec")
    if min(out) < 0:
        raise InputError("k must be nonnegative")
    return sorted(out)


def _as_int(text: str) -> int:
    x = float(text)
    if not x.is_integer():
        raise ValueError(text)
    return int(x)


def g6(x: float) -> str:
    return "inf" if math.isinf(x) else f"{x:.6g}"


def j12(x):
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "inf"
    if math.isnan(x):
        return None
    return float(f"{x:.12g}")


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _load(args):
    t = read_tree(args.tree)
    classes = read_orbits(args.orbits, t) if getattr(args, "orbits", None) else None
    if getattr(args, "pivot", None) is not None and args.pivot not in t.vertices:
        raise UnknownVertex(args.pivot)
    return t, classes


def cmd_eig(args) -> str:
    t, _ = _load(args)
    lam, w, dev = einstein_check(t)
    labels = [edge_label(e) for e in t.edges]
    if args.format == "json":
        return _dump_json({
            "lambda_max": j12(lam),
            "kappa": j12(-lam),
            "perron": {lab: j12(x) for lab, x in zip(labels, w)},
            "max_deviation": j12(dev),
        })
    if args.format == "csv":
        return _csv([["edge", "perron"], *([lab, f"{x:.12g}"] for lab, x in zip(labels, w))])
    lines = [f"lambda_max     {g6(lam)}", f"kappa          {g6(-lam)}",
             f"max_deviation  {dev:.3g}", "perron vector:"]
    lines += [f"  {lab:<20} {g6(x)}" for lab, x in zip(labels, w)]
    return "\n".join(lines) + "\n"


def cmd_grow(args) -> str:
    t, classes = _load(args)
    ks = parse_ks(args.ks)
    rs = reduced_system(t, args.pivot, classes)
    lam_inf = lambda_infinity(rs).value
    rows = []
    for k, lam in lambda_sequence(t, args.pivot, ks, rs=rs):
        row = {"k": k, "lambda": lam, "g": (lam - lam_inf) * (rs.d + k)}
        if args.oracle:
            if t.n_edges + k <= DIMENSION_CAP:
                full = full_lambda(t, args.pivot, k)
                row["full"], row["diff"] = full, abs(full - lam)
            else:
                row["full"] = row["diff"] = None
        rows.append(row)
    diag = None
    if args.diag_ks:
        diag = convergence_diagnostics(t, args.pivot, parse_ks(args.diag_ks), rs=rs)
    cols = ["k", "lambda", "g"] + (["full", "diff"] if args.oracle else [])
    if args.format == "json":
        out = {"lambda_inf": j12(lam_inf), "d": rs.d,
               "rows": [{c: (r[c] if c == "k" else j12(r[c])) for c in cols} for r in rows]}
        if diag is not None:
            out["diagnostics"] = diag.to_dict()
        return _dump_json(out)
    table = [cols] + [[r["k"]] + ["" if r[c] is None else f"{r[c]:.12g}" for c in cols[1:]]
                      for r in rows]
    text = _csv(table)
    if diag is not None:
        d = diag.to_dict()
        text += "\n" + _csv([["alpha_hat", "alpha", "error"],
                             ["" if d[c] is None else d[c] for c in ("alpha_hat", "alpha", "error")]])
    return text


def cmd_alpha(args) -> str:
    t, classes = _load(args)
    rs = reduced_system(t, args.pivot, classes)
    rep = asymptotics(rs)
    if args.diag_ks:
        rep.diagnostics = convergence_diagnostics(t, args.pivot, parse_ks(args.diag_ks), rs=rs).to_dict()
    out = rep.to_dict()
    out["d"] = rs.d
    out["coordinates"] = [[edge_label(t.edges[i]) for i in cls] for cls in rs.classes] + [["y"]]
    return _dump_json(out)


def cmd_limit(args) -> str:
    t, classes = _load(args)
    rs = reduced_system(t, args.pivot, classes)
    lim = lambda_infinity(rs)
    roots = [rs.tree.edges[rs.classes[s.start][0]] for s in rs.branch_slices]
    achievers = list(lim.achievers)
    if args.format == "json":
        return _dump_json({
            "lambda_inf": j12(lim.value),
            "achievers": achievers,
            "d": rs.d,
            "branches": [
                {"root_edge": edge_label(e), "lambda_max": j12(m),
                 "A": [[j12(x) for x in row] for row in a]}
                for e, m, a in zip(roots, lim.block_maxima, rs.branch_blocks)
            ],
        })
    lines = [f"lambda_inf  {g6(lim.value)}", f"achievers   {' '.join(map(str, achievers))}"]
    for j, (e, m) in enumerate(zip(roots, lim.block_maxima)):
        lines.append(f"branch {j}  root {edge_label(e):<12} lambda_max(A) {g6(m)}")
    return "\n".join(lines) + "\n"


def cmd_criterion(args) -> str:
    t, _ = _load(args)
    guaranteed, a = one_step_guarantee(t, args.pivot)
    th = theta(a.d)
    data = {
        "d": a.d, "mu": a.mu, "S": a.S, "A": a.A, "rho": a.rho, "theta": th,
        "coarse_holds": a.coarse_holds, "applicable": a.applicable,
        "criterion_holds": a.criterion_holds, "y_star": a.y_star,
        "max_gain": a.max_gain, "guaranteed": guaranteed,
    }
    if args.format == "json":
        return _dump_json({k: (v if isinstance(v, (bool, int)) else j12(v)) for k, v in data.items()})
    lines = []
    for key, v in data.items():
        lines.append(f"{key:<16}{v if isinstance(v, (bool, int)) else g6(v)}")
    return "\n".join(lines) + "\n"


def cmd_split(args) -> str:
    t, _ = _load(args)
    sp = schrodinger_split(t)
    labels = [edge_label(e) for e in t.edges]
    rows = [["edge", *labels, "potential"]]
    for lab, row, pot in zip(labels, sp.laplacian, sp.potential):
        rows.append([lab, *(f"{x:.12g}" for x in row), f"{pot:.12g}"])
    return _csv(rows)


COMMANDS = {
    "eig": (cmd_eig, False, "top eigenpair of R_T and Einstein curvature check"),
    "grow": (cmd_grow, True, "lambda_k table for leaf growth at the pivot"),
    "alpha": (cmd_alpha, True, "limit, first-order coefficient and tail direction (JSON)"),
    "limit": (cmd_limit, True, "lambda_inf and the Dirichlet branch blocks"),
    "criterion": (cmd_criterion, True, "one-step leaf attachment criterion at the pivot"),
    "split": (cmd_split, False, "Laplacian/potential split of R_T as CSV"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treericci", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, needs_pivot, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("--tree", required=True, metavar="PATH", help="edge-list file")
        if needs_pivot:
            p.add_argument("--pivot", required=True, metavar="LABEL")
        if name in ("grow", "alpha", "limit"):
            p.add_argument("--orbits", metavar="PATH", help="JSON list of edge-label classes")
        if name == "grow":
            p.add_argument("--ks", default="0..20", metavar="SPEC", help="e.g. 0..100 or 1,5,10")
            p.add_argument("--oracle", action="store_true", help="add full-matrix check columns")
        if name in ("grow", "alpha"):
            p.add_argument("--diag-ks", metavar="SPEC", help="large k for the slope fit, e.g. 1e3,1e4,1e5")
        if name != "split":
            choices = {"eig": ["text", "csv", "json"], "grow": ["csv", "json"],
                       "alpha": ["json"]}.get(name, ["text", "json"])
            p.add_argument("--format", choices=choices, default=choices[0])
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func = COMMANDS[args.command][0]
    try:
        text = func(args)
    except (InputError, TreeError, UnknownVertex, OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except RicciError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
