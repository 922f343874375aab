"""Independent checks for computed decompositions.

Two cross-check routes exist beside the production solver:

* ``oracle_full_system`` assembles the level system over all multi-indices
  of one order as a single dense matrix, skipping the parity partition, so
  it exercises the same row equations through a different layout.
* ``oracle_operator_matrix`` never differentiates products at all: it
  builds the matrix of the map f -> laplacian(q * f) on the full monomial
  basis of degree <= deg(p) - 2, column by column from plain polynomial
  products, and solves that.  Agreement with the production path is strong
  evidence against a shared derivation bug.

Both oracles use their own textbook elimination (first nonzero pivot)
rather than the solver's tuned routine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .polynomial import (
    DimensionMismatchError,
    Poly,
    Scalar,
    multi_indices,
    multi_indices_upto,
    taylor_reconstruct,
)
from .quadric import NonhyperbolicQuadratic
from .solver import HarmonicDecomposition, SingularSystemError, _axis_squares

FLOAT_RESIDUAL_TOL = 1e-9


@dataclass
class VerificationReport:
    harmonic_ok: bool
    residual_ok: bool
    residual: Poly
    surface_nondegenerate: bool
    oracle_match: bool | None = None
    notes: list[str] = field(default_factory=list)

    def ok(self) -> bool:
        return self.harmonic_ok and self.residual_ok and self.oracle_match is not False


def _dense_solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    # Plain textbook elimination, first nonzero pivot; independent of the
    # production solver's pivot strategy on purpose.
    size = len(rhs)
    for col in range(size):
        pivot_row = -1
        for r in range(col, size):
            if matrix[r][col] != 0:
                pivot_row = r
                break
        if pivot_row < 0:
            raise SingularSystemError(
                f"oracle system singular at column {col}; the operator should be bijective"
            )
        if pivot_row != col:
            matrix[col], matrix[pivot_row] = matrix[pivot_row], matrix[col]
            rhs[col], rhs[pivot_row] = rhs[pivot_row], rhs[col]
        prow = matrix[col]
        pivot = prow[col]
        for r in range(col + 1, size):
            v = matrix[r][col]
            if v == 0:
                continue
            factor = v / pivot
            row = matrix[r]
            row[col] = Fraction(0)
            for cc in range(col + 1, size):
                if prow[cc]:
                    row[cc] -= factor * prow[cc]
            rhs[r] -= factor * rhs[col]
    out = [Fraction(0)] * size
    for r in range(size - 1, -1, -1):
        acc = rhs[r]
        for cc in range(r + 1, size):
            if matrix[r][cc] and out[cc]:
                acc -= matrix[r][cc] * out[cc]
        out[r] = acc / matrix[r][r]
    return out


def assemble_full_system(
    rhs_source: Poly, q2: Poly, order: int
) -> tuple[list[tuple[int, ...]], list[list[Scalar]], list[Scalar]]:
    """One dense matrix over all order-m multi-indices, no parity partition.

    Returns (members, matrix, rhs) with rows in canonical member order.
    Shared by the full-system oracle and by the benchmark's unpartitioned
    reference path, which differ only in how they eliminate.
    """
    n = rhs_source.n
    zero: Scalar = 0.0 if q2.is_float() else Fraction(0)
    a = _axis_squares(q2, zero)
    two_s = 2 * sum(a, zero)
    members = list(multi_indices(n, order))
    col = {alpha: i for i, alpha in enumerate(members)}
    size = len(members)
    matrix: list[list[Scalar]] = [[zero] * size for _ in range(size)]
    rhs: list[Scalar] = []
    for i, alpha in enumerate(members):
        row = matrix[i]
        diag = two_s
        for j, aj in enumerate(alpha):
            diag = diag + 4 * aj * a[j]
        row[i] = row[i] + diag
        for j, aj in enumerate(alpha):
            w = aj * (aj - 1) * a[j]
            if w == 0:
                continue
            for k in range(n):
                beta = list(alpha)
                beta[j] -= 2
                beta[k] += 2
                row[col[tuple(beta)]] += w
        deriv = rhs_source.d_alpha(alpha)
        rhs.append(deriv.coefficient((0,) * n) + zero)
    return members, matrix, rhs


def oracle_full_system(ph: Poly, q2: Poly, order: int) -> Poly:
    """Level solve without the parity partition (same equations, one matrix).

    Solves for all constants D^alpha f, |alpha| = order, in a single dense
    system and rebuilds f.  Drop-in replacement for the homogeneous solver,
    used to check that partitioning changes nothing.
    """
    if ph.n != q2.n:
        raise DimensionMismatchError(f"operands have dimensions {ph.n} and {q2.n}")
    n = ph.n
    deg = ph.degree()
    if deg is None or deg < 2:
        return Poly.zero(n)
    if order != deg - 2:
        raise ValueError(f"order {order} does not match boundary degree {deg}")
    members, matrix, rhs = assemble_full_system(ph.laplacian(), q2, order)
    values = _dense_solve_exact(matrix, rhs)
    return taylor_reconstruct(order, dict(zip(members, values)), n)


def _operator_matrix(q_poly: Poly, order: int) -> tuple[list[list[Fraction]], list[tuple[int, ...]]]:
    """Matrix of f -> laplacian(q_poly * f) on the monomial basis of P_order.

    The basis is every monomial of degree <= order in canonical order;
    column j holds the expansion of laplacian(q_poly * basis_j).
    """
    n = q_poly.n
    basis = list(multi_indices_upto(n, order))
    index = {alpha: i for i, alpha in enumerate(basis)}
    size = len(basis)
    matrix = [[Fraction(0)] * size for _ in range(size)]
    for j, alpha in enumerate(basis):
        image = (q_poly * Poly.monomial(n, alpha)).laplacian()
        for beta, c in image.terms.items():
            matrix[index[beta]][j] = Fraction(c)
    return matrix, basis


def oracle_operator_matrix(p: Poly, quadric: NonhyperbolicQuadratic) -> HarmonicDecomposition:
    """Decompose p by inverting the map f -> laplacian(q*f) directly.

    Exact mode only.  The multiplier f is the unique solution of
    laplacian(q*f) = laplacian(p) in the space of polynomials of degree
    <= deg(p) - 2, and h = p - q*f.
    """
    if p.n != quadric.n:
        raise DimensionMismatchError(f"operands have dimensions {p.n} and {quadric.n}")
    if p.is_float():
        raise ValueError("the operator-matrix oracle runs in exact mode only")
    n = p.n
    deg = p.degree()
    if deg is None or deg < 2:
        return HarmonicDecomposition(h=p, f=Poly.zero(n), p=p, q=quadric)
    order = deg - 2
    q_poly = quadric.to_polynomial()
    matrix, basis = _operator_matrix(q_poly, order)
    lap = p.laplacian()
    rhs = [Fraction(lap.coefficient(alpha)) for alpha in basis]
    values = _dense_solve_exact(matrix, rhs)
    f = Poly(n, {alpha: v for alpha, v in zip(basis, values) if v != 0})
    return HarmonicDecomposition(h=p - q_poly * f, f=f, p=p, q=quadric)


def operator_kernel(q: NonhyperbolicQuadratic | Poly, order: int) -> list[Poly]:
    """Basis of the kernel of f -> laplacian(q*f) on P_order.

    Empty for every valid surface; nonhyperbolicity is exactly what makes
    the map bijective.  Accepts a raw Poly so that hyperbolic
    counterexamples can be probed in tests.
    """
    q_poly = q.to_polynomial() if isinstance(q, NonhyperbolicQuadratic) else q
    matrix, basis = _operator_matrix(q_poly, order)
    size = len(basis)
    # Reduced row echelon form.
    pivot_cols: list[int] = []
    row = 0
    for col in range(size):
        pivot = -1
        for r in range(row, size):
            if matrix[r][col] != 0:
                pivot = r
                break
        if pivot < 0:
            continue
        matrix[row], matrix[pivot] = matrix[pivot], matrix[row]
        pv = matrix[row][col]
        matrix[row] = [v / pv for v in matrix[row]]
        for r in range(size):
            if r != row and matrix[r][col] != 0:
                factor = matrix[r][col]
                matrix[r] = [a - factor * b for a, b in zip(matrix[r], matrix[row])]
        pivot_cols.append(col)
        row += 1
        if row == size:
            break
    free_cols = [c for c in range(size) if c not in pivot_cols]
    kernel = []
    for fc in free_cols:
        vec = [Fraction(0)] * size
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivot_cols):
            vec[pc] = -matrix[r][fc]
        kernel.append(Poly(q_poly.n, {basis[i]: v for i, v in enumerate(vec) if v != 0}))
    return kernel


def operator_is_bijective(q: NonhyperbolicQuadratic | Poly, order: int) -> bool:
    """Whether f -> laplacian(q*f) is a bijection of P_order onto itself."""
    return not operator_kernel(q, order)


def verify_solution(
    p: Poly,
    quadric: NonhyperbolicQuadratic,
    dec: HarmonicDecomposition,
    *,
    check_oracle: bool = False,
) -> VerificationReport:
    """Check a decomposition against its defining equations.

    Exact mode demands exact zeros.  Float mode compares the largest
    absolute coefficient of laplacian(h) and of the residual against
    FLOAT_RESIDUAL_TOL and records the measured values in the notes.
    """
    q_poly = quadric.to_polynomial()
    float_mode = p.is_float() or dec.h.is_float() or dec.f.is_float()
    if float_mode:
        q_poly = q_poly.to_float()
    residual = p - dec.h - q_poly * dec.f
    lap_h = dec.h.laplacian()
    notes: list[str] = []
    if float_mode:
        lap_max = float(lap_h.max_abs_coefficient())
        res_max = float(residual.max_abs_coefficient())
        harmonic_ok = lap_max <= FLOAT_RESIDUAL_TOL
        residual_ok = res_max <= FLOAT_RESIDUAL_TOL
        notes.append(f"float mode: max |laplacian(h)| coefficient = {lap_max:.3e}")
        notes.append(f"float mode: max |residual| coefficient = {res_max:.3e}")
    else:
        harmonic_ok = lap_h.is_zero()
        residual_ok = residual.is_zero()
    nondeg = quadric.is_nondegenerate_zero_set()
    if not nondeg:
        notes.append(
            "surface zero set may be empty or degenerate; "
            "the decomposition is still unique"
        )
    oracle_match: bool | None = None
    if check_oracle:
        if float_mode:
            raise ValueError("oracle comparison runs in exact mode only")
        reference = oracle_operator_matrix(p, quadric)
        oracle_match = reference.h == dec.h and reference.f == dec.f
        if not oracle_match:
            notes.append("operator-matrix oracle disagrees with the solver")
    return VerificationReport(
        harmonic_ok=harmonic_ok,
        residual_ok=residual_ok,
        residual=residual,
        surface_nondegenerate=nondeg,
        oracle_match=oracle_match,
        notes=notes,
    )
