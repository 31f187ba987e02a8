#!/usr/bin/env python3
"""Offline symbolic-differentiation reference for renormalized stress values.

Differentiates the closed-form cone/Dowker/wedge kernels with sympy and
evaluates the coincidence limits with mpmath at 200 digits.  Output is a
CSV consumed by the C++ tests (stress_fixture.csv).  Run once; the values
are frozen in the repository.
"""
import sympy as sp
import mpmath as mp

mp.mp.dps = 200
t, r, rp, th, thp, z, zp, b = sp.symbols("t r rp th thp z zp b", real=True)
u = 2 * sp.asinh(sp.sqrt(((r - rp) ** 2 + (z - zp) ** 2 + t ** 2) / (4 * r * rp)))


def cone(period, phi):
    k = 2 * sp.pi / period
    return (-1 / (2 * sp.pi * period * r * rp * sp.sinh(u))
            * sp.sinh(k * u) / (sp.cosh(k * u) - sp.cos(k * phi)))


def dowker(phi):
    return -1 / (2 * sp.pi ** 2 * r * rp * sp.sinh(u)) * u / (u ** 2 + phi ** 2)


def minkowski(phi):
    return -1 / (2 * sp.pi ** 2 * (r ** 2 + rp ** 2 + t ** 2 + (z - zp) ** 2
                                   - 2 * r * rp * sp.cos(phi)))


def components(kernel):
    d = lambda *a: sp.diff(kernel, *a)
    radial = d(r, rp) + d(r, 2) + d(r) / r
    angular = (d(th, thp) + d(th, 2)) / r ** 2
    t00 = -sp.Rational(1, 2) * d(t, 2) + b * radial + b * angular
    trr = -sp.Rational(1, 4) * (d(r, rp) - d(r, 2)) - b / r * d(r) - b * angular
    tpp = (d(r) / (4 * r) + (d(th, 2) - d(th, thp)) / (4 * r ** 2)
           - b * (d(r, rp) + d(r, 2)))
    tzz = -sp.Rational(1, 4) * (d(z, zp) - d(z, 2)) - b * radial - b * angular
    return [t00, trr, tpp, tzz]


def lam(exprs):
    return sp.lambdify((t, r, rp, th, thp, z, zp, b), exprs, "mpmath")


phi = th - thp
cases = []
geoms = {
    "cone_pi": cone(sp.pi, phi) - minkowski(phi),
    "cone_4pi": cone(4 * sp.pi, phi) - minkowski(phi),
    "cone_0.8pi": cone(sp.Rational(4, 5) * sp.pi, phi) - minkowski(phi),
    "dowker": dowker(phi) - minkowski(phi),
    "wedge_pi/2_D": (cone(sp.pi, phi) - cone(sp.pi, th + thp) - minkowski(phi)),
    "wedge_pi/3_D": (cone(2 * sp.pi / 3, phi) - cone(2 * sp.pi / 3, th + thp)
                     - minkowski(phi)),
}
zero = mp.mpf("1e-15")
points = {
    "cone_pi": [(1, 0, 0), (1, 0, 1), (1, 0, mp.mpf(-1) / 12), (2, 0, 0),
                (1, mp.mpf("0.01"), 0), (1, mp.mpf("0.5"), 0), (1, mp.mpf("0.5"), 1)],
    "cone_4pi": [(1, 0, 0), (1, 0, 1), (1, mp.mpf("0.5"), 0)],
    "cone_0.8pi": [(1, 0, 0), (1, 0, mp.mpf(-1) / 12)],
    "dowker": [(1, 0, 0), (1, 0, 1), (1, 0, mp.mpf(-1) / 12), (1, mp.mpf("0.5"), 1)],
    "wedge_pi/2_D": [(8, 0, mp.mpf(-1) / 12), (8, 0, 0), (2, mp.mpf("0.25"), 0),
                     (2, mp.mpf("0.25"), 1)],
    "wedge_pi/3_D": [(8, 0, mp.mpf(-1) / 12)],
}
angles = {"wedge_pi/2_D": [mp.pi / 16, mp.pi / 8, mp.pi / 4],
          "wedge_pi/3_D": [mp.pi / 12, mp.pi / 6]}

with open("stress_fixture.csv", "w") as out:
    out.write("geometry,r,t,beta,theta,T00,Trr,Tperp,Tzz\n")
    for name, kernel in geoms.items():
        f = lam(components(kernel))
        for (rv, tv, bv) in points[name]:
            for a in angles.get(name, [mp.mpf("0.3")]):
                tt = zero * rv if tv == 0 else tv
                vals = f(tt, rv, rv, a, a, 0, 0, bv)
                row = [name, mp.nstr(rv, 17), mp.nstr(tv, 17), mp.nstr(bv, 20),
                       mp.nstr(a, 20)] + [mp.nstr(v, 20) for v in vals]
                out.write(",".join(row) + "\n")
                print(",".join(row), flush=True)
