#!/usr/bin/env python3
"""Solve a covering program written by `tgp export-ip` and print its optimum."""
import re
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp


def parse(text):
    section, obj, rows, current = None, [], [], None
    for line in text.splitlines():
        s = line.strip()
        if not s or s.startswith("\\"):
            continue
        low = s.lower()
        if low in ("minimize", "subject to", "binary", "end"):
            section = low
            continue
        if section == "minimize":
            obj += re.findall(r"x_(\d+)", s)
        elif section == "subject to":
            if re.match(r"w_\d+:", s):
                current = []
                rows.append(current)
            current += re.findall(r"x_(\d+)", s)
    n = max([int(v) for v in obj] + [int(v) for r in rows for v in r], default=-1) + 1
    return n, [[int(v) for v in r] for r in rows]


def main():
    n, rows = parse(open(sys.argv[1]).read())
    if not rows:
        print(0)
        return
    a = np.zeros((len(rows), n))
    for i, r in enumerate(rows):
        a[i, r] = 1
    res = milp(np.ones(n), constraints=LinearConstraint(a, lb=1), integrality=np.ones(n), bounds=Bounds(0, 1))
    if not res.success:
        sys.exit(f"milp failed: {res.message}")
    print(round(res.fun))


if __name__ == "__main__":
    main()
