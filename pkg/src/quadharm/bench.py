"""Operation-count predictions and timing comparisons.

Eliminating a dense s x s system costs about (2/3) s^3 flops.  The level
system over all multi-indices of order m in n variables has
s = comb(m + n - 1, m) rows; splitting it into the 2^(n-1) parity blocks
of roughly equal size divides the predicted work by 2^(2n-2), and monomial
boundaries gain another factor 2^(n-1) because only one block per level
carries a nonzero right-hand side.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .polynomial import Poly, Scalar, canonical_key, multi_indices, taylor_reconstruct
from .quadric import NonhyperbolicQuadratic
from .solver import (
    IllConditionedSystemError,
    SingularSystemError,
    SolveStats,
    parity_class,
    solve_dirichlet,
)
from .verify import assemble_full_system

CSV_HEADER = "n,m,kind,classes,full_ms,part_ms,ratio_pred,ratio_meas,nonzero_rhs_classes"


@dataclass
class BenchRecord:
    n: int
    m: int
    boundary_kind: str
    class_count: int
    class_sizes: list[int]
    predicted_full_ops: Fraction
    predicted_partitioned_ops: Fraction
    predicted_ratio: Fraction
    measured_full_ms: float | None
    measured_partitioned_ms: float | None
    nonzero_rhs_classes: int


def predicted_full_ops(m: int, n: int) -> Fraction:
    """Elimination cost of the unpartitioned order-m system: (2/3) comb^3."""
    size = math.comb(m + n - 1, m)
    return Fraction(2, 3) * size**3


def predicted_partitioned_ops(m: int, n: int) -> Fraction:
    """Cost with 2^(n-1) equal parity blocks: full cost / 2^(2n-2)."""
    return predicted_full_ops(m, n) / 2 ** (2 * n - 2)


def predicted_ratio(n: int) -> Fraction:
    """Predicted full/partitioned ratio, independent of m."""
    return Fraction(2 ** (2 * n - 2))


def monomial_combined_factor(n: int) -> int:
    """Partition gain times the single-active-block gain for monomials."""
    return 2 ** (3 * n - 3)


def class_census(n: int, order: int) -> dict[tuple[int, ...], int]:
    """Sizes of the inhabited parity classes at one order, canonical order."""
    counts: dict[tuple[int, ...], int] = {}
    for alpha in multi_indices(n, order):
        key = parity_class(alpha)
        counts[key] = counts.get(key, 0) + 1
    return {
        key: counts[key]
        for key in sorted(counts, key=canonical_key, reverse=True)
    }


def monomial_boundary(n: int, degree: int) -> Poly:
    """x1^degree in n variables."""
    return Poly.monomial(n, (degree,) + (0,) * (n - 1))


def dense_boundary(n: int, degree: int) -> Poly:
    """Every monomial of the given degree, coefficients cycling 1, 2, 3."""
    terms = {}
    for i, alpha in enumerate(multi_indices(n, degree)):
        terms[alpha] = Fraction(i % 3 + 1)
    return Poly(n, terms)


def _plain_elimination(matrix: list[list[Scalar]], rhs: list[Scalar]) -> list[Scalar]:
    """Dense elimination that never skips a zero entry.

    The unpartitioned reference must pay the full cubic cost that the
    operation-count model assigns it.  Cross-class entries of the level
    matrix are zero and stay zero under row operations, so an elimination
    with skip-zero guards would quietly do block-by-block work and measure
    nothing but bookkeeping overhead.
    """
    size = len(rhs)
    is_float = size > 0 and isinstance(matrix[0][0], float)
    zero: Scalar = 0.0 if is_float else Fraction(0)
    for col in range(size):
        if is_float:
            best = max(range(col, size), key=lambda r: abs(matrix[r][col]))
            if matrix[best][col] == 0.0:
                raise IllConditionedSystemError(f"zero pivot column {col}")
        else:
            best = -1
            for r in range(col, size):
                if matrix[r][col] != 0:
                    best = r
                    break
            if best < 0:
                raise SingularSystemError(f"reference system singular at column {col}")
        if best != col:
            matrix[col], matrix[best] = matrix[best], matrix[col]
            rhs[col], rhs[best] = rhs[best], rhs[col]
        prow = matrix[col]
        pivot = prow[col]
        for r in range(col + 1, size):
            row = matrix[r]
            factor = row[col] / pivot
            row[col] = zero
            for cc in range(col + 1, size):
                row[cc] = row[cc] - factor * prow[cc]
            rhs[r] = rhs[r] - factor * rhs[col]
    out: list[Scalar] = [zero] * size
    for r in range(size - 1, -1, -1):
        acc = rhs[r]
        row = matrix[r]
        for cc in range(r + 1, size):
            acc = acc - row[cc] * out[cc]
        out[r] = acc / row[r]
    return out


def full_reference_solver(ph: Poly, q2: Poly) -> Poly:
    """Unpartitioned homogeneous-level solve at the dense-model cost.

    Same equations as the production path, one matrix over all order-m
    multi-indices, eliminated without zero shortcuts.  Plug into
    solve_dirichlet(..., homogeneous_solver=...) for timing comparisons.
    """
    order = ph.degree() - 2
    members, matrix, rhs = assemble_full_system(ph.laplacian(), q2, order)
    values = dict(zip(members, _plain_elimination(matrix, rhs)))
    return taylor_reconstruct(order, values, ph.n)


def _median_time_ms(fn: Callable[[], object], repetitions: int) -> float:
    samples = []
    for _ in range(repetitions):
        t0 = time.perf_counter()
        fn()
        samples.append((time.perf_counter() - t0) * 1000.0)
    return statistics.median(samples)


def run_comparison(
    p: Poly,
    quadric: NonhyperbolicQuadratic,
    repetitions: int = 5,
    *,
    compare_full: bool = True,
    parallel: bool = False,
) -> BenchRecord:
    """Time the partitioned solver, optionally against the unpartitioned one.

    Both paths must produce identical results (exact mode; float mode is
    compared to 1e-9); a mismatch raises.  Timings are medians over the
    given repetition count.
    """
    deg = p.degree()
    if deg is None:
        raise ValueError("boundary must be nonzero")
    m = max(deg - 2, 0)
    census = class_census(p.n, m)

    stats = SolveStats()
    base = solve_dirichlet(p, quadric, parallel=parallel, stats=stats)

    part_ms = _median_time_ms(
        lambda: solve_dirichlet(p, quadric, parallel=parallel), repetitions
    )

    full_ms = None
    if compare_full:
        def run_full():
            return solve_dirichlet(p, quadric, homogeneous_solver=full_reference_solver)

        other = run_full()
        if p.is_float():
            drift = max(
                float((other.h - base.h).max_abs_coefficient()),
                float((other.f - base.f).max_abs_coefficient()),
            )
            if drift > 1e-9:
                raise RuntimeError(f"partitioned and full paths drift by {drift:.3e}")
        elif other.h != base.h or other.f != base.f:
            raise RuntimeError("partitioned and full paths disagree")
        full_ms = _median_time_ms(run_full, repetitions)

    return BenchRecord(
        n=p.n,
        m=m,
        boundary_kind="monomial" if len(p.terms) == 1 else "dense",
        class_count=len(census),
        class_sizes=list(census.values()),
        predicted_full_ops=predicted_full_ops(m, p.n),
        predicted_partitioned_ops=predicted_partitioned_ops(m, p.n),
        predicted_ratio=predicted_ratio(p.n),
        measured_full_ms=full_ms,
        measured_partitioned_ms=part_ms,
        nonzero_rhs_classes=stats.max_nonzero_rhs_classes(),
    )


def census_record(n: int, m: int, boundary_kind: str = "monomial") -> BenchRecord:
    """Prediction-only record (no timing runs)."""
    census = class_census(n, m)
    return BenchRecord(
        n=n,
        m=m,
        boundary_kind=boundary_kind,
        class_count=len(census),
        class_sizes=list(census.values()),
        predicted_full_ops=predicted_full_ops(m, n),
        predicted_partitioned_ops=predicted_partitioned_ops(m, n),
        predicted_ratio=predicted_ratio(n),
        measured_full_ms=None,
        measured_partitioned_ms=None,
        nonzero_rhs_classes=0,
    )


def _fmt_ms(value: float | None) -> str:
    return "" if value is None else f"{value:.3f}"


def record_to_csv_row(record: BenchRecord) -> str:
    ratio_meas = ""
    if record.measured_full_ms is not None and record.measured_partitioned_ms:
        ratio_meas = f"{record.measured_full_ms / record.measured_partitioned_ms:.2f}"
    ratio_pred = record.predicted_ratio
    ratio_text = (
        str(ratio_pred.numerator)
        if ratio_pred.denominator == 1
        else f"{ratio_pred.numerator}/{ratio_pred.denominator}"
    )
    return ",".join(
        [
            str(record.n),
            str(record.m),
            record.boundary_kind,
            str(record.class_count),
            _fmt_ms(record.measured_full_ms),
            _fmt_ms(record.measured_partitioned_ms),
            ratio_text,
            ratio_meas,
            str(record.nonzero_rhs_classes),
        ]
    )


def records_to_csv(records: list[BenchRecord]) -> str:
    return "\n".join([CSV_HEADER] + [record_to_csv_row(r) for r in records])


def record_to_text(record: BenchRecord, stats: SolveStats | None = None) -> str:
    lines = [
        f"dimension n = {record.n}, top system order m = {record.m}, "
        f"boundary = {record.boundary_kind}",
        f"inhabited parity classes: {record.class_count} with sizes {record.class_sizes}",
        f"predicted ops: full = {float(record.predicted_full_ops):.4g}, "
        f"partitioned = {float(record.predicted_partitioned_ops):.4g}, "
        f"ratio = {record.predicted_ratio}",
    ]
    if record.measured_partitioned_ms is not None:
        lines.append(f"measured partitioned: {record.measured_partitioned_ms:.3f} ms")
    if record.measured_full_ms is not None:
        lines.append(f"measured full: {record.measured_full_ms:.3f} ms")
        if record.measured_partitioned_ms:
            lines.append(
                "measured ratio: "
                f"{record.measured_full_ms / record.measured_partitioned_ms:.2f}"
            )
    lines.append(f"nonzero-rhs classes per level (max): {record.nonzero_rhs_classes}")
    if stats is not None:
        for lv in stats.levels:
            lines.append(
                f"  level deg {lv.carry_degree}: order {lv.system_order}, "
                f"{lv.class_count} classes {lv.class_sizes}, "
                f"{lv.nonzero_rhs_classes} with nonzero rhs, "
                f"assemble {lv.assemble_ms:.3f} ms, solve {lv.solve_ms:.3f} ms"
            )
    return "\n".join(lines)
