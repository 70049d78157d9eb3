#!/usr/bin/env python3
"""Generate expansion-grid fixtures for the trefoil and figure-eight knots.

The normalized colored Jones polynomial J'_N(q) is expanded jointly in
A = N h and h, where q = exp(2h). Multiplying by the quantum dimension
[N] = K a (sum_m A^(2m)/(2m+1)!) (h/sinh h) gives the grid

    d[m][n] = coefficient of A^(2m) h^n,

kept for m + n <= ORDER. Everything is exact (fractions.Fraction).

Usage: python3 gen_knot_fixtures.py [output_dir]
"""

import json
import sys
from fractions import Fraction
from math import factorial
from pathlib import Path

ORDER = 6
DEG = 2 * ORDER  # total degree in (A, h) needed to fill the window


def trunc(s):
    return {k: v for k, v in s.items() if k[0] + k[1] <= DEG and v != 0}


def add(a, b, c=1):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + c * v
    return trunc(out)


def mul(a, b):
    out = {}
    for (i1, j1), v1 in a.items():
        for (i2, j2), v2 in b.items():
            if i1 + i2 + j1 + j2 <= DEG:
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + v1 * v2
    return trunc(out)


ONE = {(0, 0): Fraction(1)}


def q_power(a, b):
    """q^(a N + b) = exp(2 a A + 2 b h)."""
    x = {}
    if a:
        x[(1, 0)] = Fraction(2 * a)
    if b:
        x[(0, 1)] = Fraction(2 * b)
    out, term = dict(ONE), dict(ONE)
    for t in range(1, DEG + 1):
        term = {k: v / t for k, v in mul(term, x).items()}
        out = add(out, term)
    return out


def trefoil_left():
    # q^(1-N) sum_n q^(-nN) prod_{k=1}^n (1 - q^(k-N)); every product
    # factor has no constant term, so n <= DEG suffices.
    total = {}
    prod = dict(ONE)
    for n in range(DEG + 1):
        if n > 0:
            prod = mul(prod, add(ONE, q_power(-1, n), -1))
        total = add(total, mul(q_power(-n, 0), prod))
    return mul(q_power(-1, 1), total)


def cyclotomic(sign):
    """sum_n (-1)^n q^(sign n(n+3)/2) prod_{k=1}^n (q^N + q^-N - q^k - q^-k).

    sign = +1 is the right-handed trefoil, sign = -1 the left-handed one.
    """
    total = {}
    prod = dict(ONE)
    for n in range(DEG // 2 + 1):
        if n > 0:
            f = add(add(q_power(1, 0), q_power(-1, 0)), add(q_power(0, n), q_power(0, -n)), -1)
            prod = mul(prod, f)
        total = add(total, mul(q_power(0, Fraction(sign * n * (n + 3), 2)), prod), (-1) ** n)
    return total


def figure_eight():
    # sum_n prod_{k=1}^n (q^N + q^-N - q^k - q^-k); factors are O(degree 2).
    total = {}
    prod = dict(ONE)
    for n in range(DEG // 2 + 1):
        if n > 0:
            f = add(add(q_power(1, 0), q_power(-1, 0)), add(q_power(0, n), q_power(0, -n)), -1)
            prod = mul(prod, f)
        total = add(total, prod)
    return total


def quantum_dimension_factor():
    """sum_m A^(2m)/(2m+1)! times h/sinh h."""
    row = {(2 * m, 0): Fraction(1, factorial(2 * m + 1)) for m in range(DEG // 2 + 1)}
    # sinh(h)/h, then invert
    s = {(0, j): Fraction(1, factorial(j + 1)) for j in range(0, DEG + 1, 2)}
    inv = dict(ONE)
    resid = add(ONE, s, -1)
    power = dict(ONE)
    for _ in range(DEG):
        power = mul(power, resid)
        inv = add(inv, power)
    return mul(row, inv)


def grid(jprime, name):
    full = mul(quantum_dimension_factor(), jprime)
    for (i, j), v in full.items():
        if i % 2 and v != 0:
            raise ValueError(f"{name}: odd power A^{i} h^{j} has coefficient {v}")
    entries = []
    for (i, j), v in sorted(full.items()):
        m, n = i // 2, j
        if m + n <= ORDER and v != 0:
            value = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
            entries.append({"m": m, "n": n, "multi": [m], "value": value})
    return {"name": name, "N": 1, "class": "BL", "order": ORDER, "entries": entries}


def main():
    if trefoil_left() != cyclotomic(-1):
        raise SystemExit("trefoil expansions disagree")
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "fixtures" / "v1"
    out.mkdir(parents=True, exist_ok=True)
    for fname, name, j in [
        ("trefoil_left.json", "left-handed trefoil", trefoil_left()),
        ("figure_eight.json", "figure-eight knot", figure_eight()),
    ]:
        (out / fname).write_text(json.dumps(grid(j, name), indent=1) + "\n")
        print(f"wrote {out / fname}")


if __name__ == "__main__":
    main()
