#!/usr/bin/env python3
"""Normaliser c0 of h(t) = c0 / (t ln^1.1(2/t)) on (0, 1).

With u = ln(2/t) the integral of 1/(t ln^1.1(2/t)) becomes the integral of
u^-1.1 over (ln 2, inf), which is 10 (ln 2)^-0.1. Also checks the value of
the vc entropy integral used in the tests.
"""

import argparse

import mpmath


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--digits", type=int, default=30)
    args = parser.parse_args()
    mpmath.mp.dps = args.digits

    closed = 10 * mpmath.log(2) ** mpmath.mpf("-0.1")
    # u = e^v turns the slow power tail into exp(-v / 10).
    numeric = mpmath.quad(lambda v: mpmath.exp(-v / 10), [mpmath.log(mpmath.log(2)), mpmath.inf])
    c0 = 1 / closed
    print(f"integral closed form : {mpmath.nstr(closed, 20)}")
    print(f"integral quadrature  : {mpmath.nstr(numeric, 20)}")
    print(f"c0 = (ln 2)^0.1 / 10 : {mpmath.nstr(c0, 20)}")

    vc = mpmath.quad(lambda t: mpmath.sqrt(mpmath.log(2 / t)), [0, 1])
    gamma = 2 * mpmath.gammainc(mpmath.mpf(1.5), mpmath.log(2))
    print(f"int_0^1 sqrt(ln(2/t)) dt : {mpmath.nstr(vc, 20)} (2 Gamma(3/2, ln 2) = {mpmath.nstr(gamma, 20)})")


if __name__ == "__main__":
    main()
