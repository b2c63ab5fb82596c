"""Independent reference for the Taylor coefficients of log(phi_hat(xi0 + xi) / phi_hat(xi0)).

Reads a lattice fixture, expands with sympy in exact arithmetic and prints
selected coefficients. Values printed here are pinned in the C++ tests.
"""
import sys
from fractions import Fraction

import sympy as sp

t, z = sp.symbols("t z")


def load(path):
    rows = []
    for line in open(path):
        line = line.split("#")[0].split()
        if not line:
            continue
        x, y = int(line[0]), int(line[1])
        re, im = sp.Rational(line[2]), sp.Rational(line[3])
        rows.append((x, y, re + sp.I * im))
    return rows


def truncate(expr, deg):
    p = sp.Poly(sp.expand(expr), t, z)
    return sum(c * t**a * z**b for (a, b), c in p.terms() if a + b <= deg)


def gamma(rows, xi0, deg):
    s = 0
    for x, y, c in rows:
        phase = sp.exp(sp.I * (x * xi0[0] + y * xi0[1]))
        e = sum((sp.I * (x * t + y * z)) ** j / sp.factorial(j) for j in range(deg + 1))
        s += c * phase * e
    s = truncate(s, deg)
    c0 = s.subs({t: 0, z: 0})
    u = truncate(sp.expand(s / c0 - 1), deg)
    out, power = 0, 1
    for j in range(1, deg + 1):
        power = truncate(sp.expand(power * u), deg)
        out += sp.Rational((-1) ** (j + 1), j) * power
    return sp.simplify(c0), sp.Poly(sp.expand(out), t, z)


if __name__ == "__main__":
    path, a, b, deg = sys.argv[1], sys.argv[2], sys.argv[3], int(sys.argv[4])
    xi0 = (sp.pi if a == "pi" else 0, sp.pi if b == "pi" else 0)
    c0, g = gamma(load(path), xi0, deg)
    print("phi_hat(xi0) =", c0)
    for (i, j), c in sorted(g.terms()):
        print(i, j, sp.nsimplify(sp.re(c)), sp.nsimplify(sp.im(c)))
