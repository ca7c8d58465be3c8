"""Top-degree exterior monomials on bases and the vectors phi(A) of bounded topes.

Coordinates are stored against sorted monomials i_1 ^ ... ^ i_r (i's in ground
order). The oriented monomial e_b is chi(b) times the sorted monomial, so the
pairing <e_b, e_b'> = delta is the plain dot product in these coordinates.
"""
import itertools
import logging
import os
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass, field
from math import prod

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from backend import exact
from backend.arrangement import Arrangement, sign_vector_of_point, vertices
from backend.errors import InvariantViolation, RetryExhaustedError
from backend.forms import CheckResult, IntersectionForm, check
from backend.oriented_matroid import AffineOrientedMatroid, SignVector, Tope
from backend.polyring import ZERO, IntPoly, PolyMatrix, int_det, poly_det, poly_eval

logger = logging.getLogger(__name__)

XI_RANGE = 10_000
SNF_BASIS_LIMIT = 500

Monomial = tuple[str, ...]


def xi_retries() -> int:
    return int(os.environ.get("INTERSECTION_FORMS_XI_RETRIES", "64"))


@dataclass(frozen=True)
class BasisMonomial:
    basis: Monomial
    sign: int


@dataclass(frozen=True)
class FlagVector:
    coords: dict[Monomial, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", {b: c for b, c in self.coords.items() if c})

    def __getitem__(self, b: Monomial) -> int:
        return self.coords.get(b, 0)


def basis_monomials(om: AffineOrientedMatroid) -> list[BasisMonomial]:
    position = {e: i for i, e in enumerate(om.ground)}
    monomials = [
        BasisMonomial(om.matroid.sorted_elements(b), om.central.basis_sign(b))
        for b in om.matroid.bases
    ]
    return sorted(monomials, key=lambda m: [position[e] for e in m.basis])


def _phi_signs(om: AffineOrientedMatroid, signs: Sequence[int]) -> FlagVector:
    coords = {}
    for y in om.feasible_cocircuits:
        if all(not s or s == t for s, t in zip(y.signs, signs)):
            basis = om.matroid.sorted_elements(y.zero_set())
            coefficient = prod(signs[om.ground.index(e)] for e in basis)
            coords[basis] = coefficient * om.central.basis_sign(basis)
    return FlagVector(coords)


def phi(om: AffineOrientedMatroid, a: Tope | SignVector) -> FlagVector:
    """Sum over vertices Y_b of a of (prod_{i in b} a(i)) e_b."""
    sign = a.sign if isinstance(a, Tope) else a
    return _phi_signs(om, sign.signs)


def pairing(u: FlagVector, v: FlagVector) -> int:
    return sum(c * v[b] for b, c in u.coords.items())


def boundary(v: FlagVector) -> dict[Monomial, int]:
    """d(i_1 ^ ... ^ i_r) = sum_k (-1)^(k-1) i_1 ^ .. omit i_k .. ^ i_r."""
    out: dict[Monomial, int] = defaultdict(int)
    for b, c in v.coords.items():
        for k in range(len(b)):
            out[b[:k] + b[k + 1 :]] += (-1) ** k * c
    return {face: c for face, c in sorted(out.items()) if c}


def gram_check(om: AffineOrientedMatroid, form: IntersectionForm) -> CheckResult:
    vectors = [phi(om, t) for t in form.topes]
    s = form.s
    for i, j in itertools.product(range(s.n), repeat=2):
        value = pairing(vectors[i], vectors[j])
        if s[i, j] != value:
            return check(
                "Gram identity <phi(A), phi(B)> = S(A, B)",
                False,
                f"{s.labels[i]},{s.labels[j]}: pairing {value}, S entry {s[i, j]}",
            )
    return check("Gram identity <phi(A), phi(B)> = S(A, B)", True)


@dataclass(frozen=True)
class KernelReport:
    checks: tuple[CheckResult, ...]
    rank: int
    n_topes: int
    dual_mobius_plus: int
    divisors: tuple[int, ...] | None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def check_basis_of_kernel(om: AffineOrientedMatroid, topes: Sequence[Tope]) -> KernelReport:
    """phi(A) lies in ker d, the phi(A) are independent, and they span a saturated lattice."""
    monomials = basis_monomials(om)
    vectors = [phi(om, t) for t in topes]
    not_closed = [t.key for t, v in zip(topes, vectors) if boundary(v)]
    results = [
        check("phi(A) in kernel of boundary", not not_closed, next(iter(not_closed), None))
    ]
    rows = [[v[m.basis] for m in monomials] for v in vectors]
    rank = exact.rank(rows)
    dual_mu = om.matroid.dual_mobius_plus()
    results.append(
        check(
            "rank of phi equals #bounded topes equals mu^+(M*)",
            rank == len(topes) == dual_mu,
            f"rank {rank}, {len(topes)} topes, mu^+(M*) = {dual_mu}",
        )
    )
    divisors = None
    if len(monomials) > SNF_BASIS_LIMIT:
        results.append(
            CheckResult(
                "Smith divisors all 1",
                "skip",
                f"{len(monomials)} bases exceed the limit of {SNF_BASIS_LIMIT}",
            )
        )
    else:
        divisors = smith_divisors(rows)
        results.append(
            check(
                "Smith divisors all 1",
                len(divisors) == rank and all(d == 1 for d in divisors),
                f"divisors {list(divisors)}",
            )
        )
    return KernelReport(tuple(results), rank, len(topes), dual_mu, divisors)


def smith_divisors(rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero elementary divisors of an integer matrix."""
    if not rows or not rows[0]:
        return ()
    m = DomainMatrix([[ZZ(v) for v in row] for row in rows], (len(rows), len(rows[0])), ZZ)
    return tuple(abs(int(d)) for d in invariant_factors(m) if d)


def draw_xi(arr: Arrangement, seed: int) -> tuple[int, ...]:
    """Integer functional nonconstant on every line spanned by r-1 independent normals."""
    rng = np.random.default_rng(seed)
    r = arr.dim
    directions = []
    normals = arr.normals
    for idx in itertools.combinations(range(len(normals)), r - 1):
        rows = [normals[i] for i in idx]
        if exact.rank(rows) == r - 1:
            directions.append(exact.kernel_direction(rows, r))
    retries = xi_retries()
    for attempt in range(retries):
        xi = tuple(int(v) for v in rng.integers(-XI_RANGE, XI_RANGE + 1, size=r))
        if all(exact.dot(xi, v) for v in directions):
            logger.debug("generic functional %s after %d draws", xi, attempt + 1)
            return xi
    msg = f"no generic functional after {retries} draws with {seed=}; try another seed"
    raise RetryExhaustedError(msg)


@dataclass(frozen=True)
class YMatrix:
    """Rows: xi-bounded regions mu(b) in canonical order; columns: bases in ground order."""

    xi: tuple[int, ...]
    bases: tuple[Monomial, ...]
    regions: tuple[SignVector, ...]
    mu: dict[Monomial, SignVector]
    y: tuple[tuple[int, ...], ...]
    yq: PolyMatrix
    det_y: int
    det_yq: IntPoly


def _hamming(a: SignVector, b: SignVector) -> int:
    return sum(1 for x, y in zip(a.signs, b.signs) if x != y)


def build_y_matrix(arr: Arrangement, om: AffineOrientedMatroid, seed: int) -> YMatrix:
    xi = draw_xi(arr, seed)
    index = {h.label: h for h in arr.hyperplanes}
    points = vertices(arr, om.central)
    cocircuit = {b: sign_vector_of_point(arr, p) for b, p in points.items()}
    bases = tuple(m.basis for m in basis_monomials(om))
    mu: dict[Monomial, SignVector] = {}
    for b in bases:
        signs = dict(zip(arr.labels, cocircuit[frozenset(b)].signs))
        for j in b:
            rest = [index[e].normal for e in b if e != j]
            v = exact.kernel_direction(rest, arr.dim)
            if exact.dot(xi, v) > 0:
                v = [-c for c in v]
            signs[j] = exact.sign(exact.dot(index[j].normal, v))
        mu[b] = SignVector.from_mapping(arr.labels, signs)
    regions = tuple(sorted(mu.values(), key=lambda x: tuple(0 if s > 0 else 1 for s in x.signs)))
    if len(set(regions)) != len(regions):
        msg = "local cone analysis assigned one region to two bases"
        raise InvariantViolation(msg)
    y_rows, yq_rows = [], []
    for a in regions:
        row, row_q = [], []
        for b in bases:
            face = cocircuit[frozenset(b)]
            if all(not s or s == t for s, t in zip(face.signs, a.signs)):
                d = _hamming(a, mu[b])
                row.append((-1) ** d)
                row_q.append(IntPoly.monomial((-1) ** d, d))
            else:
                row.append(0)
                row_q.append(ZERO)
        y_rows.append(tuple(row))
        yq_rows.append(row_q)
    det_y = int_det(y_rows)
    if det_y not in (1, -1):
        logger.warning("det y = %d is not a unit (xi = %s)", det_y, xi)
    yq = PolyMatrix.from_rows(yq_rows, [a.key for a in regions])
    det_yq = poly_det(yq)
    logger.info("y matrix of size %d with det %d for xi = %s", len(bases), det_y, xi)
    return YMatrix(xi, bases, regions, mu, tuple(y_rows), yq, det_y, det_yq)


def extended_gram_check(om: AffineOrientedMatroid, ym: YMatrix) -> CheckResult:
    """<phi(A), phi(B)> = (-1)^d(A,B) * #common feasible vertices over xi-bounded regions."""
    name = "extended Gram identity over xi-bounded regions"
    vectors = [phi(om, a) for a in ym.regions]
    corners = [set(v.coords) for v in vectors]
    for (i, a), (j, b) in itertools.product(enumerate(ym.regions), repeat=2):
        common = len(corners[i] & corners[j])
        expected = (-1) ** _hamming(a, b) * common
        value = pairing(vectors[i], vectors[j])
        if value != expected:
            return check(name, False, f"{a.key},{b.key}: pairing {value}, expected {expected}")
    return check(name, True)


def expansion_check(
    om: AffineOrientedMatroid, topes: Sequence[Tope], ym: YMatrix
) -> CheckResult:
    """In the basis (prod_{i in b} mu(b)(i)) e_b, phi(A) has the row of y at A."""
    name = "phi(A) expands along the y matrix"
    row_of = {a.key: row for a, row in zip(ym.regions, ym.y)}
    for t in topes:
        row = row_of.get(t.key)
        if row is None:
            return check(name, False, f"bounded tope {t.key} is not a xi-bounded region")
        v = phi(om, t)
        for b, expected in zip(ym.bases, row):
            region = ym.mu[b]
            scale = prod(region.value(e) for e in b) * om.central.basis_sign(b)
            if v[b] * scale != expected:
                return check(name, False, f"{t.key} at basis {list(b)}: {v[b] * scale} != {expected}")
    return check(name, True)


def y_checks(om: AffineOrientedMatroid, topes: Sequence[Tope], ym: YMatrix) -> list[CheckResult]:
    return [
        check("det y is a unit", ym.det_y in (1, -1), str(ym.det_y)),
        check("det Y_q at q=1 equals det y", poly_eval(ym.det_yq, 1) == ym.det_y, str(ym.det_yq)),
        extended_gram_check(om, ym),
        expansion_check(om, topes, ym),
    ]
