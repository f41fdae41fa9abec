#!/usr/bin/env python3
"""Reference values for the unit tests, computed with mpmath at 30 digits.

Run: python3 tools/gen_oracles.py
The printed constants are pasted into tests/test_specfun.cpp and
tests/test_correlator.cpp.
"""

import mpmath as mp

mp.mp.dps = 30


def show(label, value):
    value = mp.mpc(value)
    print(f"{label}: {mp.nstr(value.real, 17)} {mp.nstr(value.imag, 17)}")


def varpi(z, e):
    G = mp.barnesg
    return G(1 - e - z) * G(2 - e + z) / (G(1 + e + z) * G(e - z))


def min_ff(beta, b):
    bh = mp.mpf(1) / 2 - b
    z = 1j * beta / (2 * mp.pi)
    return -mp.sin(mp.pi * z) / mp.pi * varpi(z, b) * varpi(z, bh)


def s_matrix(beta, b):
    sb = mp.sin(2 * mp.pi * b)
    return (mp.sinh(beta) - 1j * sb) / (mp.sinh(beta) + 1j * sb)


def rho(x, y):
    d0, d1 = x[0] - y[0], x[1] - y[1]
    return mp.sqrt(d1 * d1 - d0 * d0)


def main():
    print("# log Gamma")
    for z in [mp.mpc(5.3, 2.1), mp.mpc(0.5, 0), mp.mpc(-2.5, 0.3), mp.mpc(0.1, -7)]:
        show(f"loggamma({z})", mp.loggamma(z))

    print("# Barnes G")
    for z in [mp.mpc(2.5, 0), mp.mpc(0.5, 1), mp.mpc(10, 3), mp.mpc(-1.5, 0.5), mp.mpc(3, -20)]:
        show(f"barnesg({z})", mp.barnesg(z))

    b = mp.mpf("0.3")
    print("# minimal form factor, b = 0.3")
    for beta in [mp.mpc(1, 0), mp.mpc(2.5, 0), mp.mpc(0.5, 1), mp.mpc(0, mp.pi), mp.mpc(-0.7, 2)]:
        show(f"F({beta})", min_ff(beta, b))

    print("# S-matrix, b = 0.3")
    for beta in [mp.mpc(0.7, 0), mp.mpc(0.4, 0.3)]:
        show(f"S({beta})", s_matrix(beta, b))

    print("# two-point unit fixture, m = 1")
    for r in ["0.5", "1", "2"]:
        k0 = mp.besselk(0, mp.mpf(r))
        show(f"K0({r})/pi", k0 / mp.pi)
        show(f"K0({r})^2/(2 pi^2)", k0**2 / (2 * mp.pi**2))

    print("# three-point unit fixture, r = (1,1)")
    x = [(mp.mpf("0.1"), mp.mpf("1.2")), (mp.mpf(0), mp.mpf(0)),
         (mp.mpf("-0.15"), mp.mpf("-1.1"))]
    k21 = mp.besselk(0, rho(x[1], x[0]))
    k31 = mp.besselk(0, rho(x[2], x[0]))
    k32 = mp.besselk(0, rho(x[2], x[1]))
    show("I(0,1,0)", 2 * k31)
    show("I(1,0,1)", 4 * k21 * k32)
    show("W", 2 * k31 / (2 * mp.pi) + 4 * k21 * k32 / (4 * mp.pi**2))

    print("# smeared two-point unit fixture, centers (0,2),(0,0), equal widths s")
    for s in ["0.1", "0.05"]:
        s = mp.mpf(s)
        f = lambda g: mp.cos(2 * mp.sinh(g)) * mp.exp(-s * s * mp.cosh(2 * g))
        # Integrand is even and negligible beyond |gamma| = 8.
        cuts = [mp.mpf(j) / 40 for j in range(0, 321)]
        show(f"smeared(s={s})", 2 * mp.quad(f, cuts) / (2 * mp.pi))


if __name__ == "__main__":
    main()
