"""Harmonic decomposition of polynomials relative to a quadric surface.

Given a boundary polynomial p and a surface q, there is exactly one pair
(h, f) with p = h + q*f and laplacian(h) = 0, and h solves the Dirichlet
problem for p on the zero set of q.  The solver finds f one homogeneous
level at a time.

For a homogeneous component of p of degree m + 2 with q = q2 + q1 + q0
split by degree, applying D^alpha for |alpha| = m to the harmonicity
condition laplacian(p - q2*f) = 0 yields, per multi-index alpha,

    D^alpha(lap p) = (2*S + 4*sum_j alpha_j a_j) * D^alpha f
                   + sum_j alpha_j (alpha_j - 1) a_j * sum_k D^(alpha + 2e_k - 2e_j) f

where a_j are the square coefficients of q2 and S = sum_j a_j.  The
unknowns are the constants D^alpha f over all alpha of order m.  Every
multi-index reachable from alpha differs from it by an even amount in each
coordinate, so the system splits into independent blocks indexed by the
coordinatewise parity of alpha; blocks whose right-hand side is zero
contribute only zeros and are skipped.  The solved constants determine f
through its Taylor expansion, and lower degrees follow by a descending
cascade that feeds q1/q0 cross terms back in as new right-hand sides.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .polynomial import (
    DimensionMismatchError,
    Poly,
    Scalar,
    canonical_key,
    multi_indices,
    taylor_reconstruct,
)
from .quadric import NonhyperbolicQuadratic

FLOAT_PIVOT_RTOL = 1e-12


class SingularSystemError(ArithmeticError):
    """A class system was singular in exact mode (internal invariant breach)."""


class IllConditionedSystemError(ArithmeticError):
    """Float-mode elimination met a pivot below the conditioning threshold."""


def parity_class(alpha: Sequence[int]) -> tuple[int, ...]:
    """Coordinatewise parity signature of a multi-index."""
    return tuple(e & 1 for e in alpha)


@dataclass(frozen=True)
class ClassSystem:
    """One parity block of the level-m linear system.

    Rows and columns follow ``members`` (canonical order, highest first).
    """

    parity: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]
    matrix: tuple[tuple[Scalar, ...], ...]
    rhs: tuple[Scalar, ...]

    def has_nonzero_rhs(self) -> bool:
        return any(v != 0 for v in self.rhs)


@dataclass(frozen=True)
class HarmonicDecomposition:
    """Result pair (h, f) with p = h + q*f and laplacian(h) = 0."""

    h: Poly
    f: Poly
    p: Poly
    q: NonhyperbolicQuadratic


@dataclass
class LevelStats:
    """Instrumentation for one cascade level (carry of one degree)."""

    carry_degree: int
    system_order: int
    class_count: int
    class_sizes: list[int]
    nonzero_rhs_classes: int
    rhs_is_zero: bool
    assemble_ms: float
    solve_ms: float


@dataclass
class SolveStats:
    levels: list[LevelStats] = field(default_factory=list)

    def max_nonzero_rhs_classes(self) -> int:
        return max((lv.nonzero_rhs_classes for lv in self.levels), default=0)


def _axis_squares(q2: Poly, zero: Scalar) -> list[Scalar]:
    """Extract the diagonal coefficients a_j from q2 = sum a_j x_j^2."""
    a: list[Scalar] = [zero] * q2.n
    for alpha, c in q2.terms.items():
        if sum(alpha) != 2 or max(alpha) != 2:
            raise ValueError(f"quadratic part has a non-diagonal term at {alpha}")
        a[alpha.index(2)] = c
    return a


def assemble_class_systems(rhs_source: Poly, q2: Poly, order: int) -> list[ClassSystem]:
    """Build every parity block of the order-m system.

    ``rhs_source`` is the polynomial whose D^alpha values (constants, since
    it is homogeneous of degree m) form the right-hand sides.  All blocks
    are assembled even when their right-hand side vanishes, so the census
    of classes is complete.
    """
    if rhs_source.n != q2.n:
        raise DimensionMismatchError(
            f"operands have dimensions {rhs_source.n} and {q2.n}"
        )
    n = q2.n
    zero: Scalar = 0.0 if q2.is_float() else Fraction(0)
    a = _axis_squares(q2, zero)
    two_s = 2 * sum(a, zero)

    groups: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for alpha in multi_indices(n, order):
        groups.setdefault(parity_class(alpha), []).append(alpha)

    systems = []
    for key in sorted(groups, key=canonical_key, reverse=True):
        members = groups[key]
        col = {alpha: i for i, alpha in enumerate(members)}
        size = len(members)
        matrix = [[zero] * size for _ in range(size)]
        rhs = []
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
        systems.append(
            ClassSystem(
                parity=key,
                members=tuple(members),
                matrix=tuple(tuple(r) for r in matrix),
                rhs=tuple(rhs),
            )
        )
    return systems


def _solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination over the rationals.

    Pivot choice: among the nonzero candidates in the column, take the entry
    of minimal combined numerator/denominator bit length (first row wins
    ties), which keeps intermediate fractions small.
    """
    size = len(rhs)
    for col in range(size):
        best_row = -1
        best_bits = -1
        for r in range(col, size):
            v = matrix[r][col]
            if v != 0:
                bits = v.numerator.bit_length() + v.denominator.bit_length()
                if best_row < 0 or bits < best_bits:
                    best_row, best_bits = r, bits
        if best_row < 0:
            raise SingularSystemError(
                f"singular system at column {col}; the operator should be bijective"
            )
        if best_row != col:
            matrix[col], matrix[best_row] = matrix[best_row], matrix[col]
            rhs[col], rhs[best_row] = rhs[best_row], rhs[col]
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
    out: list[Fraction] = [Fraction(0)] * size
    for r in range(size - 1, -1, -1):
        acc = rhs[r]
        row = matrix[r]
        for cc in range(r + 1, size):
            if row[cc] and out[cc]:
                acc -= row[cc] * out[cc]
        out[r] = acc / row[r]
    return out


def _solve_float(matrix: list[list[float]], rhs: list[float]) -> list[float]:
    """Partial-pivoting elimination; small pivots raise instead of smearing."""
    size = len(rhs)
    for col in range(size):
        best_row = max(range(col, size), key=lambda r: abs(matrix[r][col]))
        pivot = matrix[best_row][col]
        row_max = max(abs(v) for v in matrix[best_row][col:])
        if pivot == 0.0 or abs(pivot) < FLOAT_PIVOT_RTOL * row_max:
            raise IllConditionedSystemError(
                f"pivot {pivot!r} at column {col} is below {FLOAT_PIVOT_RTOL} of row max {row_max!r}"
            )
        if best_row != col:
            matrix[col], matrix[best_row] = matrix[best_row], matrix[col]
            rhs[col], rhs[best_row] = rhs[best_row], rhs[col]
        prow = matrix[col]
        for r in range(col + 1, size):
            v = matrix[r][col]
            if v == 0.0:
                continue
            factor = v / pivot
            row = matrix[r]
            row[col] = 0.0
            for cc in range(col + 1, size):
                row[cc] -= factor * prow[cc]
            rhs[r] -= factor * rhs[col]
    out = [0.0] * size
    for r in range(size - 1, -1, -1):
        acc = rhs[r]
        row = matrix[r]
        for cc in range(r + 1, size):
            acc -= row[cc] * out[cc]
        out[r] = acc / row[r]
    return out


def solve_class(system: ClassSystem) -> dict[tuple[int, ...], Scalar]:
    """Solve one parity block, mapping each member to its D^alpha f constant.

    A block with an all-zero right-hand side is returned as all zeros
    without elimination; this is what makes sparse boundaries cheap.
    """
    is_float = isinstance(system.matrix[0][0], float)
    if not system.has_nonzero_rhs():
        zero: Scalar = 0.0 if is_float else Fraction(0)
        return {alpha: zero for alpha in system.members}
    matrix = [list(row) for row in system.matrix]
    rhs = list(system.rhs)
    if is_float:
        values = _solve_float(matrix, rhs)
    else:
        values = _solve_exact(matrix, rhs)
    return dict(zip(system.members, values))


def solve_homogeneous(
    ph: Poly,
    q2: Poly,
    *,
    parallel: bool = False,
    stats: SolveStats | None = None,
) -> Poly:
    """Find homogeneous f of degree deg(ph) - 2 with lap(q2*f) = lap(ph).

    For ph of degree below 2 (already harmonic) the answer is zero.
    """
    if ph.n != q2.n:
        raise DimensionMismatchError(f"operands have dimensions {ph.n} and {q2.n}")
    if not ph.is_homogeneous():
        raise ValueError("boundary component must be homogeneous")
    deg = ph.degree()
    if deg is None or deg < 2:
        return Poly.zero(ph.n)
    order = deg - 2

    t0 = time.perf_counter()
    rhs_source = ph.laplacian()
    systems = assemble_class_systems(rhs_source, q2, order)
    t1 = time.perf_counter()

    if parallel and len(systems) > 1:
        with ThreadPoolExecutor() as pool:
            solutions = list(pool.map(solve_class, systems))
    else:
        solutions = [solve_class(s) for s in systems]
    t2 = time.perf_counter()

    values: dict[tuple[int, ...], Scalar] = {}
    for sol in solutions:
        values.update(sol)

    if stats is not None:
        stats.levels.append(
            LevelStats(
                carry_degree=deg,
                system_order=order,
                class_count=len(systems),
                class_sizes=[len(s.members) for s in systems],
                nonzero_rhs_classes=sum(1 for s in systems if s.has_nonzero_rhs()),
                rhs_is_zero=rhs_source.is_zero(),
                assemble_ms=(t1 - t0) * 1000.0,
                solve_ms=(t2 - t1) * 1000.0,
            )
        )
    return taylor_reconstruct(order, values, ph.n)


HomogeneousSolver = Callable[[Poly, Poly], Poly]


def cascade(
    ph: Poly,
    quadric: NonhyperbolicQuadratic,
    *,
    homogeneous_solver: HomogeneousSolver | None = None,
    parallel: bool = False,
    stats: SolveStats | None = None,
) -> tuple[Poly, Poly]:
    """Decompose one homogeneous boundary component.

    Writing M = deg(ph) and q = q2 + q1 + q0, the harmonic parts h_k and the
    multiplier parts f_k satisfy, level by level,

        carry_M     = ph
        carry_k     = h_k + q2 * f_(k-2)                   (k = M .. 2)
        carry_(k-1) = -q1 * f_(k-2) - q0 * f_(k-1)
        h_1         = carry_1,   h_0 = -q0 * f_0

    Summing the levels gives ph = sum h_k + q * sum f_k with every h_k
    harmonic.  Returns (h, f).
    """
    if ph.n != quadric.n:
        raise DimensionMismatchError(
            f"operands have dimensions {ph.n} and {quadric.n}"
        )
    if not ph.is_homogeneous():
        raise ValueError("cascade input must be homogeneous")
    n = ph.n
    zero = Poly.zero(n)
    deg = ph.degree()
    if deg is None or deg < 2:
        return ph, zero

    q2, q1, q0 = quadric.parts()
    if ph.is_float():
        q2, q1, q0 = q2.to_float(), q1.to_float(), q0.to_float()

    if homogeneous_solver is None:
        def homogeneous_solver(s: Poly, q2_: Poly) -> Poly:
            return solve_homogeneous(s, q2_, parallel=parallel, stats=stats)

    f_levels: dict[int, Poly] = {}
    h_total = zero
    f_total = zero
    carry = ph
    for k in range(deg, 1, -1):
        # The carry is homogeneous of degree k or identically zero; zero
        # carries occur whenever q has no linear part, so skip the solver
        # rather than make every solver handle the degenerate input.
        if carry.is_zero():
            f_k2 = zero
        else:
            f_k2 = homogeneous_solver(carry, q2)
        f_levels[k - 2] = f_k2
        h_total = h_total + (carry - q2 * f_k2)
        f_total = f_total + f_k2
        carry = -(q1 * f_k2) - q0 * f_levels.get(k - 1, zero)
    h_total = h_total + carry  # h_1, degree <= 1, harmonic by construction
    h_total = h_total - q0 * f_levels.get(0, zero)  # h_0
    return h_total, f_total


def solve_dirichlet(
    p: Poly,
    quadric: NonhyperbolicQuadratic,
    *,
    homogeneous_solver: HomogeneousSolver | None = None,
    parallel: bool = False,
    stats: SolveStats | None = None,
) -> HarmonicDecomposition:
    """Full decomposition p = h + q*f with h harmonic.

    The restriction of h to the zero set of q equals that of p, so h solves
    the Dirichlet problem there.  Each homogeneous component of p cascades
    independently; the pieces sum because the decomposition is linear in p.
    """
    if p.n != quadric.n:
        raise DimensionMismatchError(
            f"operands have dimensions {p.n} and {quadric.n}"
        )
    h_total = Poly.zero(p.n)
    f_total = Poly.zero(p.n)
    for _, component in p.homogeneous_components():
        h, f = cascade(
            component,
            quadric,
            homogeneous_solver=homogeneous_solver,
            parallel=parallel,
            stats=stats,
        )
        h_total = h_total + h
        f_total = f_total + f
    return HarmonicDecomposition(h=h_total, f=f_total, p=p, q=quadric)
