"""Exact rational linear algebra on small dense matrices.

Thin wrappers around sympy's DomainMatrix over QQ; values travel in and out as
fractions.Fraction.
"""
from collections.abc import Sequence
from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

Rational = Fraction | int


def _qq(value: Rational):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    r = QQ.to_sympy(value)
    return Fraction(int(r.p), int(r.q))


def qq_matrix(rows: Sequence[Sequence[Rational]], ncols: int | None = None) -> DomainMatrix:
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return DomainMatrix([[_qq(v) for v in row] for row in rows], (nrows, ncols), QQ)


def rank(rows: Sequence[Sequence[Rational]]) -> int:
    if not rows or not rows[0]:
        return 0
    return qq_matrix(rows).rank()


def det(rows: Sequence[Sequence[Rational]]) -> Fraction:
    if not rows:
        return Fraction(1)
    return _fraction(qq_matrix(rows).det())


def sign(value: Rational) -> int:
    return (value > 0) - (value < 0)


def solve(rows: Sequence[Sequence[Rational]], rhs: Sequence[Rational]) -> list[Fraction]:
    """Unique solution of a square nonsingular system."""
    a = qq_matrix(rows)
    b = qq_matrix([[v] for v in rhs], 1)
    x = a.lu_solve(b).to_Matrix()
    return [Fraction(int(x[i, 0].p), int(x[i, 0].q)) for i in range(len(rhs))]


def kernel_direction(rows: Sequence[Sequence[Rational]], dim: int) -> list[Fraction]:
    """Spanning vector of the kernel of ``dim - 1`` independent rows in Q^dim.

    Uses the generalized cross product: coordinate k is (-1)^k times the minor
    with column k removed.
    """
    if len(rows) != dim - 1:
        msg = f"expected {dim - 1} rows in dimension {dim}, got {len(rows)}"
        raise ValueError(msg)
    if dim == 1:
        return [Fraction(1)]
    vector = []
    for k in range(dim):
        minor = [[v for j, v in enumerate(row) if j != k] for row in rows]
        vector.append(det(minor) * (-1) ** k)
    return vector


def dot(u: Sequence[Rational], v: Sequence[Rational]) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v, strict=True)), Fraction(0))
