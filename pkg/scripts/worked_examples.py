#!/usr/bin/env python3
"""Solve a handful of boundary problems and print the exact answers.

Run from the repository root after installing the package:

    python scripts/worked_examples.py
"""

import time
from fractions import Fraction

from quadharm import (
    NonhyperbolicQuadratic,
    format_polynomial,
    parse_polynomial,
    solve_dirichlet,
    verify_solution,
)


def show(title: str, boundary: str, quadric: NonhyperbolicQuadratic) -> None:
    p = parse_polynomial(boundary, quadric.n)
    t0 = time.perf_counter()
    dec = solve_dirichlet(p, quadric)
    elapsed = (time.perf_counter() - t0) * 1000.0
    report = verify_solution(p, quadric, dec, check_oracle=True)
    print(f"== {title}")
    print(f"   boundary  p = {boundary}")
    print(f"   surface   q = {format_polynomial(quadric.to_polynomial())} = 0")
    print(f"   harmonic  h = {format_polynomial(dec.h)}")
    print(f"   multiplier f = {format_polynomial(dec.f)}")
    print(f"   h(0) = {dec.h.coefficient((0,) * quadric.n)}")
    print(f"   checks: harmonic={report.harmonic_ok} residual_zero={report.residual_ok} "
          f"oracle={report.oracle_match}  ({elapsed:.1f} ms)")
    print()


def main() -> None:
    ellipsoid = NonhyperbolicQuadratic((2, 3, 4), (0, 0, 0), -1)
    show("degree-7 boundary on a 3-axis ellipsoid", "x1^4*x2^3", ellipsoid)

    sphere = NonhyperbolicQuadratic((1, 1, 1), (0, 0, 0), -1)
    p10 = parse_polynomial("x1^10", 3)
    dec = solve_dirichlet(p10, sphere)
    print("== x1^10 on the unit sphere")
    print(f"   h(0) = {dec.h.coefficient((0, 0, 0))}  (exact)")
    largest_den = max(c.denominator for c in dec.h.terms.values())
    print(f"   largest coefficient denominator: {largest_den}")
    print()

    dec = solve_dirichlet(p10, ellipsoid)
    print("== x1^10 on the ellipsoid 2x1^2 + 3x2^2 + 4x3^2 = 1")
    value = dec.h.coefficient((0, 0, 0))
    assert value == Fraction(
        500945213823452554440546462385400584789,
        397263369506735959801289842040922215251461,
    )
    print(f"   h(0) = {value.numerator}")
    print(f"          / {value.denominator}")
    print()

    paraboloid = NonhyperbolicQuadratic((1, 1, 0), (0, 0, 1), 0)
    show("paraboloid with a linear axis", "x1^2", paraboloid)

    cylinder = NonhyperbolicQuadratic((1, 0, 1), (0, 0, 0), -4)
    show("elliptic cylinder", "x1^2*x2^2", cylinder)


if __name__ == "__main__":
    main()
