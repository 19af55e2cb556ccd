#!/usr/bin/env python3
"""Solve an exported look-optimization MILP and write `name value` lines.

Uses highspy when installed, else scipy.optimize.milp (MPS input only).
Exit status: 0 solution written, 1 no feasible solution, 2 usage error,
4 no solver backend available.
"""

import argparse
import math
import sys


def backend():
    try:
        import highspy  # noqa: F401
        return "highspy"
    except ImportError:
        pass
    try:
        from scipy.optimize import milp  # noqa: F401
        return "scipy"
    except ImportError:
        return None


def read_assignment(path):
    values = {}
    with open(path) as f:
        for line in f:
            tok = line.split()
            if len(tok) == 2 and not tok[0].startswith("#"):
                values[tok[0]] = float(tok[1])
    return values


def parse_option(text):
    key, _, raw = text.partition("=")
    for cast in (int, float):
        try:
            return key, cast(raw)
        except ValueError:
            pass
    if raw.lower() in ("true", "false"):
        return key, raw.lower() == "true"
    return key, raw


def solve_highspy(args):
    import highspy

    h = highspy.Highs()
    h.setOptionValue("output_flag", args.verbose)
    if h.readModel(args.model) != highspy.HighsStatus.kOk:
        print(f"cannot read {args.model}", file=sys.stderr)
        return 2, None
    h.setOptionValue("mip_rel_gap", args.gap)
    if args.gap == 0:
        h.setOptionValue("mip_abs_gap", 0.0)
    if args.time_limit > 0:
        h.setOptionValue("time_limit", args.time_limit)
    for opt in args.options:
        key, value = parse_option(opt)
        h.setOptionValue(key, value)

    names = list(h.getLp().col_names_)
    if args.warmstart:
        start = read_assignment(args.warmstart)
        sol = highspy.HighsSolution()
        sol.col_value = [start.get(n, 0.0) for n in names]
        sol.value_valid = True
        h.setSolution(sol)

    h.run()
    if h.getInfo().primal_solution_status != 2:
        print("no feasible solution: " + h.modelStatusToString(h.getModelStatus()), file=sys.stderr)
        return 1, None
    return 0, dict(zip(names, h.getSolution().col_value))


def read_mps(path):
    rows, row_sense, rhs = [], {}, {}
    cols, col_index = [], {}
    obj_row, section, integer = None, None, False
    with open(path) as f:
        for line in f:
            if not line.strip() or line.startswith("*"):
                continue
            tok = line.split()
            if not line[0].isspace():
                section = tok[0]
                continue
            if section == "ROWS":
                if tok[0] == "N":
                    obj_row = obj_row or tok[1]
                else:
                    row_sense[tok[1]] = tok[0]
                    rows.append(tok[1])
            elif section == "COLUMNS":
                if len(tok) >= 3 and tok[1] == "'MARKER'":
                    integer = tok[2] == "'INTORG'"
                    continue
                if tok[0] not in col_index:
                    col_index[tok[0]] = len(cols)
                    cols.append({"name": tok[0], "obj": 0.0, "lb": 0.0, "ub": math.inf,
                                 "int": integer, "coef": {}})
                col = cols[col_index[tok[0]]]
                for r, v in zip(tok[1::2], tok[2::2]):
                    if r == obj_row:
                        col["obj"] = float(v)
                    else:
                        col["coef"][r] = float(v)
            elif section == "RHS":
                pairs = tok if len(tok) % 2 == 0 else tok[1:]
                for r, v in zip(pairs[0::2], pairs[1::2]):
                    rhs[r] = float(v)
            elif section == "BOUNDS":
                col = cols[col_index[tok[2]]]
                v = float(tok[3]) if len(tok) > 3 else 0.0
                if tok[0] == "UP":
                    col["ub"] = v
                elif tok[0] == "LO":
                    col["lb"] = v
                elif tok[0] == "FX":
                    col["lb"] = col["ub"] = v
                elif tok[0] == "BV":
                    col["lb"], col["ub"], col["int"] = 0.0, 1.0, True
                elif tok[0] == "FR":
                    col["lb"], col["ub"] = -math.inf, math.inf
                elif tok[0] == "MI":
                    col["lb"] = -math.inf
    return rows, row_sense, rhs, cols


def solve_scipy(args):
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import lil_matrix

    if not args.model.lower().endswith(".mps"):
        print("scipy backend reads MPS files only", file=sys.stderr)
        return 2, None
    rows, sense, rhs, cols = read_mps(args.model)
    index = {r: i for i, r in enumerate(rows)}
    a = lil_matrix((len(rows), len(cols)))
    for j, col in enumerate(cols):
        for r, v in col["coef"].items():
            a[index[r], j] = v
    lo = np.array([rhs.get(r, 0.0) if sense[r] in ("G", "E") else -np.inf for r in rows])
    hi = np.array([rhs.get(r, 0.0) if sense[r] in ("L", "E") else np.inf for r in rows])
    options = {"mip_rel_gap": args.gap, "disp": args.verbose}
    if args.time_limit > 0:
        options["time_limit"] = args.time_limit
    res = milp(
        c=np.array([col["obj"] for col in cols]),
        constraints=[LinearConstraint(a.tocsr(), lo, hi)] if rows else [],
        integrality=np.array([1 if col["int"] else 0 for col in cols]),
        bounds=Bounds([col["lb"] for col in cols], [col["ub"] for col in cols]),
        options=options,
    )
    if res.x is None:
        print("no feasible solution: " + res.message, file=sys.stderr)
        return 1, None
    return 0, {col["name"]: float(v) for col, v in zip(cols, res.x)}


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("model", nargs="?")
    p.add_argument("--solution")
    p.add_argument("--warmstart", default="")
    p.add_argument("--gap", type=float, default=0.05)
    p.add_argument("--time-limit", type=float, default=0.0)
    p.add_argument("--backend", choices=["highspy", "scipy"])
    p.add_argument("--check", action="store_true", help="print the backend and exit")
    p.add_argument("--verbose", action="store_true")
    p.add_argument("options", nargs="*", help="solver options as key=value")
    args = p.parse_args()

    chosen = args.backend or backend()
    if args.check:
        if chosen is None:
            return 4
        print(chosen)
        return 0
    if not args.model or not args.solution:
        p.print_usage(sys.stderr)
        return 2
    if chosen is None:
        print("neither highspy nor scipy is installed", file=sys.stderr)
        return 4

    status, values = (solve_highspy if chosen == "highspy" else solve_scipy)(args)
    if status != 0:
        return status
    with open(args.solution, "w") as f:
        for name, v in values.items():
            f.write(f"{name} {v!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
