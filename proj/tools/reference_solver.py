#!/usr/bin/env python3
"""Reference MILP backend over the exported model format.

Usage: reference_solver.py [--gap G] [--time-limit S] MODEL_FILE SOLUTION_FILE

Reads a MILPCF model, solves it with scipy (HiGHS), and writes:
    STATUS optimal|infeasible|limit
    OBJ <value>
    BOUND <best dual bound>
    X <var-index> <value>      (nonzero entries only)
"""

import argparse
import sys

import numpy as np
from scipy import sparse
from scipy.optimize import milp, Bounds, LinearConstraint


def parse(path):
    nvars = 0
    lb, ub, cost, integrality = [], [], [], []
    rows = []  # (sense, rhs)
    entries = []  # (row, var, coef)

    def num(tok):
        if tok == "inf":
            return np.inf
        if tok == "-inf":
            return -np.inf
        return float(tok)

    with open(path) as fh:
        header = fh.readline().split()
        assert header[:1] == ["MILPCF"], "unrecognized model file"
        for line in fh:
            parts = line.split()
            if not parts or parts[0] in ("VARS", "ROWS", "END"):
                continue
            if parts[0] == "V":
                _, _name, kind, lo, hi, c = parts
                lb.append(num(lo))
                ub.append(num(hi))
                cost.append(num(c))
                integrality.append(1 if kind == "INT" else 0)
                nvars += 1
            elif parts[0] == "R":
                rows.append((parts[2], num(parts[3])))
            elif parts[0] == "C":
                entries.append((int(parts[1]), int(parts[2]), num(parts[3])))
    return nvars, lb, ub, cost, integrality, rows, entries


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--gap", type=float, default=1e-9)
    ap.add_argument("--time-limit", type=float, default=None)
    ap.add_argument("model")
    ap.add_argument("solution")
    args = ap.parse_args()
    model_path, sol_path = args.model, args.solution
    nvars, lb, ub, cost, integrality, rows, entries = parse(model_path)

    nrows = len(rows)
    if nrows:
        data = np.array([e[2] for e in entries])
        ri = np.array([e[0] for e in entries])
        ci = np.array([e[1] for e in entries])
        a = sparse.csr_matrix((data, (ri, ci)), shape=(nrows, nvars))
        cl = np.array([-np.inf if s == "LE" else r for s, r in rows])
        cu = np.array([r for _s, r in rows])
        constraints = [LinearConstraint(a, cl, cu)]
    else:
        constraints = []

    options = {"mip_rel_gap": args.gap}
    if args.time_limit is not None:
        options["time_limit"] = args.time_limit
    res = milp(
        c=np.array(cost),
        constraints=constraints,
        bounds=Bounds(np.array(lb), np.array(ub)),
        integrality=np.array(integrality),
        options=options,
    )

    def write_solution(out):
        out.write(f"OBJ {res.fun:.17g}\n")
        bound = getattr(res, "mip_dual_bound", None)
        if bound is not None:
            out.write(f"BOUND {bound:.17g}\n")
        for i, v in enumerate(res.x):
            if abs(v) > 1e-12:
                out.write(f"X {i} {v:.17g}\n")

    with open(sol_path, "w") as out:
        if res.status == 0:
            out.write("STATUS optimal\n")
            write_solution(out)
        elif res.status == 2:
            out.write("STATUS infeasible\n")
        else:
            out.write("STATUS limit\n")
            if res.x is not None:
                write_solution(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
