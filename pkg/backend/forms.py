"""Intersection matrices S and S_q of bounded topes and their determinant formulas."""
import logging
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import prod
from typing import Literal

from backend.errors import InvariantViolation, SizeLimitError
from backend.matroid import Matroid
from backend.oriented_matroid import (
    AffineOrientedMatroid,
    FVector,
    Tope,
    bounded_topes,
    cocircuit_faces,
    meet_faces,
    separation,
)
from backend.polyring import (
    ONE,
    ZERO,
    IntPoly,
    PolyMatrix,
    int_det,
    poly_det,
    poly_eval,
    q_integer,
)

logger = logging.getLogger(__name__)

Q_SQUARED_MINUS_ONE = IntPoly([-1, 0, 1])
MINUS_Q = IntPoly([0, -1])

Meets = dict[tuple[int, int], FVector | None]


def h_poly(f: FVector) -> IntPoly:
    """h(q^2) = sum_i f_i (q^2 - 1)^i."""
    total = ZERO
    power = ONE
    for fi in f.f:
        total = total + fi * power
        power = power * Q_SQUARED_MINUS_ONE
    return total


def h_vector(f: FVector) -> tuple[int, ...]:
    """Coefficients h_0..h_d of h(x) = f(x - 1)."""
    coeffs = h_poly(f).coeffs
    return tuple(coeffs[2 * k] if 2 * k < len(coeffs) else 0 for k in range(f.d + 1))


@dataclass(frozen=True)
class IntersectionForm:
    topes: tuple[Tope, ...]
    s: PolyMatrix
    q_deformed: bool

    @property
    def labels(self) -> tuple[str, ...]:
        return self.s.labels


def compute_meets(
    om: AffineOrientedMatroid, topes: Sequence[Tope], jobs: int = 1
) -> Meets:
    """Meets of every pair (i, j), i <= j, of bounded topes."""
    pairs = [(i, j) for i in range(len(topes)) for j in range(i, len(topes))]

    def work(pair: tuple[int, int]) -> FVector | None:
        return meet_faces(om, topes[pair[0]], topes[pair[1]])

    start = time.perf_counter()
    if jobs > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, pairs))
    else:
        results = [work(pair) for pair in pairs]
    logger.debug(
        "%d tope meets in %.3fs with %d job(s)", len(pairs), time.perf_counter() - start, jobs
    )
    return dict(zip(pairs, results, strict=True))


def _meet(meets: Meets, i: int, j: int) -> FVector | None:
    return meets[(i, j) if i <= j else (j, i)]


def _form(
    topes: Sequence[Tope], meets: Meets, entry, q_deformed: bool
) -> IntersectionForm:
    n = len(topes)
    rows = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            f = _meet(meets, i, j)
            if f is None:
                continue
            value = entry(separation(topes[i], topes[j]), f)
            rows[i][j] = rows[j][i] = value
    matrix = PolyMatrix.from_rows(rows, [t.key for t in topes])
    return IntersectionForm(tuple(topes), matrix, q_deformed)


def _s_entry(d: int, f: FVector) -> IntPoly:
    return IntPoly.constant((-1) ** d * f.f0)


def _sq_entry(d: int, f: FVector) -> IntPoly:
    return MINUS_Q**d * h_poly(f)


def build_S(
    om: AffineOrientedMatroid,
    topes: Sequence[Tope] | None = None,
    meets: Meets | None = None,
) -> IntersectionForm:
    topes = bounded_topes(om) if topes is None else topes
    meets = compute_meets(om, topes) if meets is None else meets
    return _form(topes, meets, _s_entry, q_deformed=False)


def build_Sq(
    om: AffineOrientedMatroid,
    topes: Sequence[Tope] | None = None,
    meets: Meets | None = None,
) -> IntersectionForm:
    topes = bounded_topes(om) if topes is None else topes
    meets = compute_meets(om, topes) if meets is None else meets
    return _form(topes, meets, _sq_entry, q_deformed=True)


@dataclass(frozen=True)
class Forms:
    """S and S_q built from one bounded-tope enumeration and one meet table."""

    topes: tuple[Tope, ...]
    meets: Meets = field(repr=False)
    s: IntersectionForm
    sq: IntersectionForm


def intersection_forms(
    om: AffineOrientedMatroid, jobs: int = 1, cap: int | None = None
) -> Forms:
    topes = tuple(bounded_topes(om, cap))
    meets = compute_meets(om, topes, jobs)
    return Forms(
        topes,
        meets,
        _form(topes, meets, _s_entry, q_deformed=False),
        _form(topes, meets, _sq_entry, q_deformed=True),
    )


@dataclass(frozen=True)
class Factor:
    flat: tuple[str, ...]
    base: int
    exponent: int


def rhs_factors(m: Matroid) -> list[Factor]:
    """One factor |I - K| ^ (beta(M/K) * mu^+((M|K)*)) per coloop-free flat K != I."""
    everything = frozenset(m.ground)
    factors = []
    for k in m.coloop_free_flats():
        if k.elements == everything:
            continue
        exponent = m.contract_set(k.elements).beta() * m.dual_restriction_mobius_plus(k)
        factors.append(Factor(m.sorted_elements(k.elements), len(everything - k.elements), exponent))
    return factors


def classical_product(factors: Sequence[Factor]) -> int:
    return prod(f.base**f.exponent for f in factors)


def q_product(factors: Sequence[Factor]) -> IntPoly:
    value = ONE
    for f in factors:
        if f.exponent:
            value = value * q_integer(f.base) ** f.exponent
    return value


def rhs_classical(m: Matroid) -> tuple[int, list[Factor]]:
    factors = rhs_factors(m)
    return classical_product(factors), factors


def rhs_q(m: Matroid) -> tuple[IntPoly, list[Factor]]:
    factors = rhs_factors(m)
    return q_product(factors), factors


@dataclass(frozen=True)
class DeterminantVerdict:
    lhs: IntPoly
    rhs: IntPoly
    rhs_factors: tuple[Factor, ...]
    match: bool


def verify(
    om: AffineOrientedMatroid, forms: Forms | None = None, jobs: int = 1
) -> tuple[DeterminantVerdict, DeterminantVerdict]:
    """Compare det S and det S_q with their closed product formulas.

    A mismatch for S is a broken identity and raises; a mismatch for S_q is
    returned as a finding.
    """
    forms = intersection_forms(om, jobs) if forms is None else forms
    start = time.perf_counter()
    det_s = int_det(forms.s.s.at(0))
    det_sq = poly_det(forms.sq.s)
    logger.info(
        "determinants of %d x %d forms in %.3fs", forms.s.s.n, forms.s.s.n, time.perf_counter() - start
    )
    factors = rhs_factors(om.matroid)
    rhs_s, rhs_sq = classical_product(factors), q_product(factors)
    theorem = DeterminantVerdict(
        IntPoly.constant(det_s), IntPoly.constant(rhs_s), tuple(factors), det_s == rhs_s
    )
    if not theorem.match:
        msg = f"det S = {det_s} but the flat product gives {rhs_s}"
        raise InvariantViolation(msg)
    conjecture = DeterminantVerdict(det_sq, rhs_sq, tuple(factors), det_sq == rhs_sq)
    if not conjecture.match:
        logger.warning("det S_q = %s differs from the flat product %s", det_sq, rhs_sq)
    return theorem, conjecture


def brylawski_varchenko_det(n: Matroid) -> int:
    """prod over nonempty cyclic flats K of N of |K| ^ (beta(N|K) * mu^+(N/K))."""
    total = 1
    for k in n.coloop_free_flats():
        if not k.elements:
            continue
        exponent = n.restrict(k.elements).beta() * n.contract_set(k.elements).top_mobius_plus()
        total *= len(k.elements) ** exponent
    return total


Status = Literal["pass", "fail", "skip"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: Status
    witness: str | None = None

    @property
    def passed(self) -> bool:
        return self.status != "fail"


def check(name: str, ok: bool, witness: str | None = None) -> CheckResult:
    return CheckResult(name, "pass" if ok else "fail", None if ok else witness)


def _first(items) -> str | None:
    return next(iter(items), None)


def structural_checks(
    om: AffineOrientedMatroid, forms: Forms, det_s: int | None = None
) -> list[CheckResult]:
    s, sq = forms.s.s, forms.sq.s
    n = s.n
    r = om.rank
    cells = [(i, j) for i in range(n) for j in range(n)]
    results = [
        check("S symmetric", s.is_symmetric()),
        check("S_q symmetric", sq.is_symmetric()),
        check(
            "S_q at q=1 equals S",
            all(poly_eval(sq[i, j], 1) == poly_eval(s[i, j], 0) for i, j in cells),
            _first(f"{s.labels[i]},{s.labels[j]}" for i, j in cells if poly_eval(sq[i, j], 1) != poly_eval(s[i, j], 0)),
        ),
    ]
    diagonal = [sq[i, i] for i in range(n)]
    results.append(
        check(
            "S_q diagonal constant term 1",
            all(p.coeffs and p.coeffs[0] == 1 for p in diagonal),
            _first(sq.labels[i] for i, p in enumerate(diagonal) if not p.coeffs or p.coeffs[0] != 1),
        )
    )
    results.append(
        check(
            f"S_q diagonal degree {2 * r}",
            all(p.degree == 2 * r for p in diagonal),
            _first(sq.labels[i] for i, p in enumerate(diagonal) if p.degree != 2 * r),
        )
    )
    vertex_counts = [len(cocircuit_faces(om, t)) for t in forms.topes]
    results.append(
        check(
            "S diagonal equals vertex counts",
            all(poly_eval(s[i, i], 0) == vertex_counts[i] for i in range(n)),
            _first(s.labels[i] for i in range(n) if poly_eval(s[i, i], 0) != vertex_counts[i]),
        )
    )
    bad_lowest, bad_euler, bad_palindrome = [], [], []
    for (i, j), f in sorted(forms.meets.items()):
        if f is None:
            continue
        d = separation(forms.topes[i], forms.topes[j])
        if sq[i, j].lowest_term() != (d, (-1) ** d):
            bad_lowest.append(f"{sq.labels[i]},{sq.labels[j]}")
        if f.euler_characteristic() != 1:
            bad_euler.append(f"{sq.labels[i]},{sq.labels[j]}: f={list(f.f)}")
        h = h_vector(f)
        if h != h[::-1]:
            bad_palindrome.append(f"{sq.labels[i]},{sq.labels[j]}: h={list(h)}")
    results.append(check("S_q lowest terms (-1)^d q^d", not bad_lowest, _first(bad_lowest)))
    results.append(check("meet Euler relation", not bad_euler, _first(bad_euler)))
    results.append(check("meet h-vectors palindromic", not bad_palindrome, _first(bad_palindrome)))
    expected = om.matroid.dual_mobius_plus()
    results.append(
        check("matrix size equals mu^+(M*)", n == expected, f"{n} topes, mu^+(M*) = {expected}")
    )
    if det_s is not None:
        results.append(check("det S positive", det_s > 0, str(det_s)))
    results.append(_brylawski_varchenko_check(om.matroid))
    return results


def _brylawski_varchenko_check(m: Matroid) -> CheckResult:
    name = "dual cyclic-flat product equals flat product"
    try:
        dual_product = brylawski_varchenko_det(m.dual())
    except SizeLimitError as err:
        return CheckResult(name, "skip", str(err))
    expected, _ = rhs_classical(m)
    return check(name, dual_product == expected, f"{dual_product} != {expected}")
