#!/usr/bin/env python3
"""Regenerates src/bessel_zeros.inc.

Zeros of J_m and J'_m for m = 0..10 (first 30 positive zeros each) are
located by a sign-change scan of a high-precision power series followed
by bisection. Only mpmath arithmetic is used; no special-function library.

    python3 tools/gen_bessel_zeros.py > src/bessel_zeros.inc
"""
import mpmath as mp

mp.mp.dps = 140
ORDERS = 11
COUNT = 30


def besselj(m, x):
    # sum_k (-1)^k (x/2)^(2k+m) / (k! (k+m)!)
    half = x / 2
    term = half ** m / mp.factorial(m)
    total = term
    k = 0
    while True:
        k += 1
        term *= -(half * half) / (k * (k + m))
        total += term
        if abs(term) < mp.mpf(10) ** (-120) and k > x:
            return total


def besselj_prime(m, x):
    if m == 0:
        return -besselj(1, x)
    return (besselj(m - 1, x) - besselj(m + 1, x)) / 2


def zeros(fn, m):
    out = []
    step = mp.mpf("0.05")
    a = mp.mpf("0.01")
    fa = fn(m, a)
    while len(out) < COUNT:
        b = a + step
        fb = fn(m, b)
        if fa == 0:
            out.append(a)
        elif fa * fb < 0:
            lo, hi, flo = a, b, fa
            for _ in range(110):
                mid = (lo + hi) / 2
                fm = fn(m, mid)
                if flo * fm <= 0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            out.append((lo + hi) / 2)
        a, fa = b, fb
    return out


def emit(name, fn):
    print(f"inline constexpr double {name}[{ORDERS}][{COUNT}] = {{")
    for m in range(ORDERS):
        zs = zeros(fn, m)
        body = ", ".join(mp.nstr(z, 17, strip_zeros=False) for z in zs)
        print(f"    {{{body}}},")
    print("};")


if __name__ == "__main__":
    print("// Generated by tools/gen_bessel_zeros.py. Do not edit.")
    print(f"inline constexpr int kBesselOrders = {ORDERS};")
    print(f"inline constexpr int kBesselZerosPerOrder = {COUNT};")
    emit("kBesselJZeros", besselj)
    emit("kBesselJPrimeZeros", besselj_prime)
