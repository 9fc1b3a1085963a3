#!/usr/bin/env python3
"""Independent check of exported SDPA sparse files.

Parses each *.dat-s file passed on the command line, solves

    minimize c.x  subject to  sum_i x_i F_i - F_0 >= 0 (block diagonal)

with cvxpy (CLARABEL, falling back to SCS), and prints one line per file:

    <path> <optimal c.x>

Used by the acceptance suite to cross-validate the built-in solver.
"""
import sys

import numpy as np
import cvxpy as cp


def parse_sdpa(path):
    with open(path) as f:
        lines = [ln for ln in f
                 if ln.strip() and ln[0] not in "*\"" ]
    clean = []
    for ln in lines:
        for ch in ",{}()":
            ln = ln.replace(ch, " ")
        clean.append(ln)
    mdim = int(clean[0].split()[0])
    nblock = int(clean[1].split()[0])
    struct = [abs(int(t)) for t in clean[2].split()[:nblock]]
    c = np.array([float(t) for t in clean[3].split()[:mdim]])
    mats = [[np.zeros((d, d)) for d in struct] for _ in range(mdim + 1)]
    for ln in clean[4:]:
        parts = ln.split()
        matno, blk, i, j = (int(parts[0]), int(parts[1]), int(parts[2]), int(parts[3]))
        val = float(parts[4])
        m = mats[matno][blk - 1]
        m[i - 1, j - 1] += val
        if i != j:
            m[j - 1, i - 1] += val
    return mdim, struct, c, mats


def solve_file(path):
    mdim, struct, c, mats = parse_sdpa(path)
    x = cp.Variable(mdim)
    cons = []
    for b, d in enumerate(struct):
        expr = cp.Constant(-mats[0][b])
        for i in range(mdim):
            if np.any(mats[i + 1][b]):
                expr = expr + x[i] * mats[i + 1][b]
        if d > 1:
            cons.append((expr + expr.T) / 2 >> 0)
        else:
            cons.append(expr[0, 0] >= 0)
    prob = cp.Problem(cp.Minimize(c @ x), cons)
    try:
        prob.solve(solver=cp.CLARABEL)
    except (cp.SolverError, Exception):
        prob.solve(solver=cp.SCS, eps=1e-10, max_iters=200000)
    return prob.value


def main():
    if len(sys.argv) < 2:
        print("usage: sdpa_check.py FILE [FILE...]", file=sys.stderr)
        return 2
    for path in sys.argv[1:]:
        value = solve_file(path)
        print(f"{path} {value:.12f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
