"""Solve an exported LP-format file with SciPy's HiGHS backend.

Usage: python lp_crosscheck.py FILE.lp [--expect P/Q] [--tol 1e-7]

Prints `optimum <float>`. With --expect, exits 1 unless the float optimum
is within the tolerance of the given fraction.
"""

import argparse
import re
import sys
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

TERM = re.compile(r"([+-])\s*([0-9./]+)\s+([A-Za-z_][A-Za-z0-9_]*)")
ROW = re.compile(r"^\s*[A-Za-z0-9_]+:\s*(.*?)\s*(<=|>=|=)\s*(-?[0-9./]+)\s*$")


def parse(text):
    sense, objective, rows, free = None, {}, [], set()
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low in ("maximize", "minimize"):
            sense, section = low, "objective"
            continue
        if low == "subject to":
            section = "rows"
            continue
        if low == "bounds":
            section = "bounds"
            continue
        if low == "end":
            break
        if section == "objective":
            body = line.split(":", 1)[1]
            for sign, coef, name in TERM.findall(body):
                objective[name] = objective.get(name, 0.0) + float(Fraction(sign + coef))
        elif section == "rows":
            m = ROW.match(line)
            if not m:
                raise ValueError(f"cannot parse row: {line}")
            body, rel, rhs = m.groups()
            terms = [(name, float(Fraction(sign + coef))) for sign, coef, name in TERM.findall(body)]
            rows.append((terms, rel, float(Fraction(rhs))))
        elif section == "bounds":
            parts = line.split()
            if len(parts) == 2 and parts[1].lower() == "free":
                free.add(parts[0])
            else:
                raise ValueError(f"unsupported bound: {line}")
    if sense is None:
        raise ValueError("missing objective sense")
    return sense, objective, rows, free


def solve(text):
    sense, objective, rows, free = parse(text)
    names = sorted({n for terms, _, _ in rows for n, _ in terms} | set(objective))
    index = {n: i for i, n in enumerate(names)}
    c = np.zeros(len(names))
    for n, v in objective.items():
        c[index[n]] = v
    if sense == "maximize":
        c = -c
    parts = {"ub": ([], [], [], []), "eq": ([], [], [], [])}
    for terms, rel, rhs in rows:
        r_idx, c_idx, vals, b = parts["eq" if rel == "=" else "ub"]
        flip = -1.0 if rel == ">=" else 1.0
        r = len(b)
        for n, v in terms:
            r_idx.append(r)
            c_idx.append(index[n])
            vals.append(flip * v)
        b.append(flip * rhs)

    def matrix(part):
        r_idx, c_idx, vals, b = part
        if not b:
            return None, None
        return csr_matrix((vals, (r_idx, c_idx)), shape=(len(b), len(names))), np.array(b)

    a_ub, b_ub = matrix(parts["ub"])
    a_eq, b_eq = matrix(parts["eq"])
    bounds = [(None, None) if n in free else (0, None) for n in names]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status != 0:
        raise RuntimeError(f"solver status {res.status}: {res.message}")
    return -res.fun if sense == "maximize" else res.fun


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("file")
    ap.add_argument("--expect")
    ap.add_argument("--tol", type=float, default=1e-7)
    args = ap.parse_args()
    with open(args.file) as fh:
        value = solve(fh.read())
    print(f"optimum {value:.12g}")
    if args.expect is not None:
        want = float(Fraction(args.expect))
        if abs(value - want) > args.tol:
            print(f"mismatch: expected {args.expect}", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
