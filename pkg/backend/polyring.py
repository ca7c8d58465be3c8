"""Exact integer and integer-polynomial arithmetic.

Entries of the intersection matrices live in Z[q]. Determinants are computed by
fraction-free elimination in which every division is exact, so no rational
arithmetic is ever needed.
"""
import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from typing import TypeVar

from backend.errors import ExactDivisionError, InputError

logger = logging.getLogger(__name__)

CROSS_CHECK_POINTS = (1, 2, 3)

T = TypeVar("T")


class IntPoly:
    """Dense univariate polynomial in q with integer coefficients.

    ``coeffs[k]`` is the coefficient of q**k. Trailing zeros are stripped, so the
    zero polynomial has an empty coefficient tuple and degree ``None``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()) -> None:
        values = [int(c) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        self.coeffs: tuple[int, ...] = tuple(values)

    @classmethod
    def constant(cls, value: int) -> "IntPoly":
        return cls((value,))

    @classmethod
    def monomial(cls, coefficient: int, exponent: int) -> "IntPoly":
        if exponent < 0:
            msg = f"negative exponent {exponent=}"
            raise InputError(msg)
        return cls([0] * exponent + [coefficient])

    @classmethod
    def from_strings(cls, coeffs: Sequence[str]) -> "IntPoly":
        return cls(int(c) for c in coeffs)

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    def lowest_term(self) -> tuple[int, int] | None:
        """(exponent, coefficient) of the lowest nonzero term."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k, c
        return None

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = IntPoly.constant(other)
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                power = "q" if k == 1 else f"q^{k}"
                head = "" if c == 1 else "-" if c == -1 else f"{c}*"
                terms.append(f"{head}{power}")
        return " + ".join(terms).replace("+ -", "- ")

    def __neg__(self) -> "IntPoly":
        return IntPoly(-c for c in self.coeffs)

    def __add__(self, other: "IntPoly | int") -> "IntPoly":
        other = _as_poly(other)
        longer, shorter = (self.coeffs, other.coeffs)
        if len(longer) < len(shorter):
            longer, shorter = shorter, longer
        out = list(longer)
        for k, c in enumerate(shorter):
            out[k] += c
        return IntPoly(out)

    __radd__ = __add__

    def __sub__(self, other: "IntPoly | int") -> "IntPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other: int) -> "IntPoly":
        return _as_poly(other) - self

    def __mul__(self, other: "IntPoly | int") -> "IntPoly":
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "IntPoly":
        if exponent < 0:
            msg = f"negative power {exponent=}"
            raise InputError(msg)
        result, base = IntPoly.constant(1), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def divexact(self, other: "IntPoly | int") -> "IntPoly":
        """Quotient of an exact division in Z[q]; raises on any remainder."""
        other = _as_poly(other)
        if not other:
            msg = "division by the zero polynomial"
            raise ExactDivisionError(msg)
        num = list(self.coeffs)
        den = other.coeffs
        shift = len(den) - 1
        lead = den[-1]
        if len(num) < len(den):
            if num:
                msg = f"{self} is not divisible by {other}"
                raise ExactDivisionError(msg)
            return IntPoly()
        quotient = [0] * (len(num) - shift)
        for i in range(len(quotient) - 1, -1, -1):
            c, rem = divmod(num[i + shift], lead)
            if rem:
                msg = f"{self} is not divisible by {other}"
                raise ExactDivisionError(msg)
            quotient[i] = c
            if c:
                for j, d in enumerate(den):
                    num[i + j] -= c * d
        if any(num[:shift]):
            msg = f"{self} is not divisible by {other}"
            raise ExactDivisionError(msg)
        return IntPoly(quotient)


def _as_poly(value: "IntPoly | int") -> IntPoly:
    if isinstance(value, IntPoly):
        return value
    return IntPoly.constant(value)


ZERO = IntPoly()
ONE = IntPoly.constant(1)


def q_integer(n: int) -> IntPoly:
    """[n]_{q^2} = 1 + q^2 + ... + q^(2n-2)."""
    if n < 1:
        msg = f"q-integers are defined for n >= 1, got {n=}"
        raise InputError(msg)
    coeffs = [0] * (2 * n - 1)
    coeffs[::2] = [1] * n
    return IntPoly(coeffs)


def poly_eval(p: IntPoly, x: int) -> int:
    result = 0
    for c in reversed(p.coeffs):
        result = result * x + c
    return result


@dataclass(frozen=True)
class PolyMatrix:
    labels: tuple[str, ...]
    entries: tuple[tuple[IntPoly, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.labels)
        if len(set(self.labels)) != n:
            msg = f"matrix labels are not distinct: {self.labels}"
            raise InputError(msg)
        if len(self.entries) != n or any(len(row) != n for row in self.entries):
            msg = f"matrix is not square with {n} labelled rows and columns"
            raise InputError(msg)

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[IntPoly | int]], labels: Sequence[str] | None = None
    ) -> "PolyMatrix":
        if labels is None:
            labels = [str(i) for i in range(len(rows))]
        return cls(
            labels=tuple(labels),
            entries=tuple(tuple(_as_poly(v) for v in row) for row in rows),
        )

    @property
    def n(self) -> int:
        return len(self.labels)

    def __getitem__(self, index: tuple[int, int]) -> IntPoly:
        i, j = index
        return self.entries[i][j]

    def at(self, x: int) -> list[list[int]]:
        return [[poly_eval(p, x) for p in row] for row in self.entries]

    def is_symmetric(self) -> bool:
        return all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )


def block_diag(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    n, m = a.n, b.n
    rows = [list(row) + [ZERO] * m for row in a.entries]
    rows += [[ZERO] * n + list(row) for row in b.entries]
    labels = [f"a:{x}" for x in a.labels] + [f"b:{x}" for x in b.labels]
    return PolyMatrix.from_rows(rows, labels)


def _int_divexact(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        msg = f"{a} is not divisible by {b}"
        raise ExactDivisionError(msg)
    return q


def _fraction_free_det(
    rows: Sequence[Sequence[T]], zero: T, one: T, divide: Callable[[T, T], T]
) -> T:
    """Bareiss elimination with deferred rescaling of untouched rows.

    A row whose entry in the pivot column is zero is only multiplied by
    pivot/previous_pivot at that step. Those factors telescope, so such rows are
    left alone and brought up to date with a single multiply and exact divide
    when they are next needed.
    """
    n = len(rows)
    if n == 0:
        return one
    m = [list(row) for row in rows]
    level = [0] * n
    # pivots[t] is the pivot of step t - 1; pivots[0] is the unit.
    pivots = [one]
    sign = 1

    def catch_up(i: int, k: int) -> None:
        s = level[i]
        if s == k:
            return
        row = m[i]
        for j in range(k, n):
            if row[j]:
                row[j] = divide(row[j] * pivots[k], pivots[s])
        level[i] = k

    for k in range(n):
        pivot_row = next((i for i in range(k, n) if m[i][k]), None)
        if pivot_row is None:
            return zero
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            level[k], level[pivot_row] = level[pivot_row], level[k]
            sign = -sign
        catch_up(k, k)
        row_k = m[k]
        pivot, prev = row_k[k], pivots[k]
        for i in range(k + 1, n):
            row_i = m[i]
            if not row_i[k]:
                continue
            catch_up(i, k)
            factor = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = divide(pivot * row_i[j] - factor * row_k[j], prev)
            row_i[k] = zero
            level[i] = k + 1
        pivots.append(pivot)
    return pivots[-1] if sign > 0 else -pivots[-1]


def int_det(m: Sequence[Sequence[int]]) -> int:
    if any(len(row) != len(m) for row in m):
        msg = f"determinant of a non-square matrix with {len(m)} rows"
        raise InputError(msg)
    return _fraction_free_det([[int(v) for v in row] for row in m], 0, 1, _int_divexact)


def poly_det(m: PolyMatrix, cross_check: bool = True) -> IntPoly:
    """Exact determinant over Z[q].

    With ``cross_check`` the result is compared against integer determinants of
    the matrix evaluated at q = 1, 2, 3.
    """
    det = _fraction_free_det(
        [list(row) for row in m.entries], ZERO, ONE, IntPoly.divexact
    )
    if cross_check:
        for x in CROSS_CHECK_POINTS:
            expected = int_det(m.at(x))
            if poly_eval(det, x) != expected:
                msg = (
                    f"polynomial determinant {det} evaluates to {poly_eval(det, x)} "
                    f"at q={x}, integer elimination gives {expected}"
                )
                raise ExactDivisionError(msg)
        logger.debug("poly_det of size %d cross-checked at %s", m.n, CROSS_CHECK_POINTS)
    return det
