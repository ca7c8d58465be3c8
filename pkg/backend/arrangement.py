"""Exact rational geometry of affine hyperplane arrangements.

A hyperplane is the set {x : <normal, x> = offset}; its positive side is
<normal, x> > offset.
"""
import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from backend import exact
from backend.errors import GenericityError, InputError, InvariantViolation, RetryExhaustedError
from backend.matroid import Matroid
from backend.oriented_matroid import (
    AffineOrientedMatroid,
    Chirotope,
    SignVector,
    Tope,
    cocircuit_faces,
)

logger = logging.getLogger(__name__)

RANDOM_RETRIES = 200
NORMAL_RANGE = 5
OFFSET_NUMERATOR_RANGE = 30
OFFSET_DENOMINATOR_MAX = 4

Point = tuple[Fraction, ...]


def parse_rational(text: str | int) -> Fraction:
    """Parse ``"p/q"`` or an integer string."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as err:
        msg = f"not a rational number: {text!r}"
        raise InputError(msg) from err


def format_rational(value: Fraction) -> str:
    return str(value)


@dataclass(frozen=True)
class Hyperplane:
    label: str
    normal: tuple[Fraction, ...]
    offset: Fraction

    def __post_init__(self) -> None:
        if not self.label or self.label.startswith("-") or any(c.isspace() for c in self.label):
            msg = f"invalid hyperplane label {self.label!r}"
            raise InputError(msg)
        if not any(self.normal):
            msg = f"hyperplane {self.label} has a zero normal"
            raise InputError(msg)

    def side(self, x: Sequence[Fraction]) -> int:
        return exact.sign(exact.dot(self.normal, x) - self.offset)

    def to_dict(self) -> dict[str, object]:
        return {
            "label": self.label,
            "normal": [format_rational(v) for v in self.normal],
            "offset": format_rational(self.offset),
        }


@dataclass(frozen=True)
class Arrangement:
    dim: int
    hyperplanes: tuple[Hyperplane, ...]

    def __post_init__(self) -> None:
        if self.dim < 1:
            msg = f"arrangement dimension must be positive, got {self.dim=}"
            raise InputError(msg)
        if not self.hyperplanes:
            msg = "an arrangement needs at least one hyperplane"
            raise InputError(msg)
        for h in self.hyperplanes:
            if len(h.normal) != self.dim:
                msg = f"hyperplane {h.label} has a normal of length {len(h.normal)} in dimension {self.dim}"
                raise InputError(msg)
        labels = self.labels
        if len(set(labels)) != len(labels):
            msg = f"hyperplane labels are not distinct: {labels}"
            raise InputError(msg)

    @classmethod
    def build(
        cls,
        dim: int,
        rows: Iterable[tuple[str, Sequence[Fraction | int | str], Fraction | int | str]],
    ) -> "Arrangement":
        return cls(
            dim,
            tuple(
                Hyperplane(label, tuple(parse_rational(v) for v in normal), parse_rational(offset))
                for label, normal, offset in rows
            ),
        )

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(h.label for h in self.hyperplanes)

    @property
    def normals(self) -> list[tuple[Fraction, ...]]:
        return [h.normal for h in self.hyperplanes]

    def hyperplane(self, label: str) -> Hyperplane:
        for h in self.hyperplanes:
            if h.label == label:
                return h
        msg = f"no hyperplane labelled {label!r}"
        raise InputError(msg)

    def with_offsets(self, offsets: Sequence[Fraction]) -> "Arrangement":
        return Arrangement(
            self.dim,
            tuple(Hyperplane(h.label, h.normal, c) for h, c in zip(self.hyperplanes, offsets, strict=True)),
        )

    def reordered(self, order: Sequence[int]) -> "Arrangement":
        return Arrangement(self.dim, tuple(self.hyperplanes[i] for i in order))

    def to_dict(self) -> dict[str, object]:
        return {"dim": self.dim, "hyperplanes": [h.to_dict() for h in self.hyperplanes]}


def is_essential(arr: Arrangement) -> bool:
    return exact.rank(arr.normals) == arr.dim


def check_essential(arr: Arrangement) -> None:
    rank = exact.rank(arr.normals)
    if rank != arr.dim:
        msg = f"normals span a space of dimension {rank}, not {arr.dim}: the arrangement is not essential"
        raise InputError(msg)


def central_chirotope(arr: Arrangement) -> Chirotope:
    """Orientation chi(i_1..i_r) = sign det of the normals in that order."""
    normals = arr.normals
    values = [
        exact.sign(exact.det([normals[i] for i in idx]))
        for idx in itertools.combinations(range(len(normals)), arr.dim)
    ]
    return Chirotope(arr.dim, arr.labels, values)


def normal_matroid(arr: Arrangement) -> Matroid:
    return Matroid.from_vectors(arr.labels, arr.normals)


def vertices(arr: Arrangement, chirotope: Chirotope | None = None) -> dict[frozenset[str], Point]:
    """Intersection point of the hyperplanes of every basis."""
    chirotope = central_chirotope(arr) if chirotope is None else chirotope
    index = {h.label: h for h in arr.hyperplanes}
    points = {}
    for basis in chirotope.bases():
        hs = [index[e] for e in arr.labels if e in basis]
        points[basis] = tuple(exact.solve([h.normal for h in hs], [h.offset for h in hs]))
    return points


def genericity_violation(arr: Arrangement, matroid: Matroid | None = None) -> GenericityError | None:
    """First circuit of the normal matroid whose hyperplanes share a point."""
    matroid = normal_matroid(arr) if matroid is None else matroid
    index = {h.label: h for h in arr.hyperplanes}
    position = {e: i for i, e in enumerate(arr.labels)}
    circuits = sorted(
        (tuple(sorted(c, key=position.__getitem__)) for c in matroid.circuits()),
        key=lambda c: (len(c), [position[e] for e in c]),
    )
    for circuit in circuits:
        hs = [index[e] for e in circuit]
        rank = exact.rank([h.normal for h in hs])
        augmented = exact.rank([h.normal + (h.offset,) for h in hs])
        if rank == augmented:
            return GenericityError(circuit, rank, augmented)
    return None


def validate_generic(arr: Arrangement, matroid: Matroid | None = None) -> None:
    violation = genericity_violation(arr, matroid)
    if violation is not None:
        raise violation


def sign_vector_of_point(arr: Arrangement, x: Sequence[Fraction]) -> SignVector:
    if len(x) != arr.dim:
        msg = f"point of dimension {len(x)} for an arrangement in dimension {arr.dim}"
        raise InputError(msg)
    return SignVector(arr.labels, tuple(h.side(x) for h in arr.hyperplanes))


def compile_arrangement(arr: Arrangement) -> AffineOrientedMatroid:
    """Affine oriented matroid of a validated generic arrangement."""
    check_essential(arr)
    chirotope = central_chirotope(arr)
    validate_generic(arr, chirotope.matroid())
    points = vertices(arr, chirotope)
    feasible = [sign_vector_of_point(arr, p) for p in points.values()]
    logger.info(
        "compiled %d hyperplanes in dimension %d: %d vertices",
        len(arr.hyperplanes),
        arr.dim,
        len(feasible),
    )
    return AffineOrientedMatroid(chirotope, feasible)


def interior_point(arr: Arrangement, om: AffineOrientedMatroid, tope: Tope) -> Point:
    """Average of the vertices of a bounded tope; lies strictly inside it."""
    points = vertices(arr, om.central)
    corners = [points[y.zero_set()] for y in cocircuit_faces(om, tope)]
    if not corners:
        msg = f"tope {tope.key} has no vertices"
        raise InputError(msg)
    centre = tuple(sum(coords, Fraction(0)) / len(corners) for coords in zip(*corners))
    if sign_vector_of_point(arr, centre).signs != tope.sign.signs:
        msg = f"vertex average of tope {tope.key} is not inside it"
        raise InvariantViolation(msg)
    return centre


@dataclass(frozen=True)
class PlanarFaces:
    vertices: tuple[SignVector, ...]
    segments: tuple[SignVector, ...]
    unbounded_edges: tuple[SignVector, ...]
    regions: tuple[SignVector, ...]
    bounded_regions: tuple[SignVector, ...]

    def bounded_faces(self) -> tuple[SignVector, ...]:
        return tuple(sorted(self.vertices + self.segments + self.bounded_regions, key=lambda v: v.key))


def planar_faces(arr: Arrangement) -> PlanarFaces:
    """Direct geometric face enumeration of a generic line arrangement in the plane.

    Edges are cut out of each line by the vertices on it and represented by an
    exact sample point. Both sides of an edge are regions; a region is bounded
    iff none of its edges is a ray or a full line.
    """
    if arr.dim != 2:
        msg = f"planar face enumeration needs dimension 2, got {arr.dim}"
        raise InputError(msg)
    check_essential(arr)
    validate_generic(arr)
    points = vertices(arr)
    vertex_vectors = {sign_vector_of_point(arr, p) for p in points.values()}
    segments: set[SignVector] = set()
    unbounded: set[SignVector] = set()
    region_edges: dict[SignVector, list[bool]] = {}
    for i, h in enumerate(arr.hyperplanes):
        direction = (-h.normal[1], h.normal[0])
        on_line = sorted(
            {p for basis, p in points.items() if h.label in basis},
            key=lambda p: exact.dot(direction, p),
        )
        samples: list[tuple[Point, bool]] = []
        if on_line:
            first, last = on_line[0], on_line[-1]
            samples.append((tuple(a - b for a, b in zip(first, direction)), False))
            samples.append((tuple(a + b for a, b in zip(last, direction)), False))
            for p, p2 in itertools.pairwise(on_line):
                samples.append((tuple((a + b) / 2 for a, b in zip(p, p2)), True))
        else:
            scale = h.offset / exact.dot(h.normal, h.normal)
            samples.append((tuple(scale * a for a in h.normal), False))
        for sample, bounded in samples:
            edge = sign_vector_of_point(arr, sample)
            (segments if bounded else unbounded).add(edge)
            for side in (1, -1):
                signs = list(edge.signs)
                signs[i] = side
                region_edges.setdefault(SignVector(arr.labels, tuple(signs)), []).append(bounded)

    def ordered(vectors: Iterable[SignVector]) -> tuple[SignVector, ...]:
        return tuple(sorted(vectors, key=lambda v: v.key))

    return PlanarFaces(
        vertices=ordered(vertex_vectors),
        segments=ordered(segments),
        unbounded_edges=ordered(unbounded),
        regions=ordered(region_edges),
        bounded_regions=ordered(r for r, flags in region_edges.items() if all(flags)),
    )


def _random_offset(rng: np.random.Generator) -> Fraction:
    p = int(rng.integers(-OFFSET_NUMERATOR_RANGE, OFFSET_NUMERATOR_RANGE + 1))
    q = int(rng.integers(1, OFFSET_DENOMINATOR_MAX + 1))
    return Fraction(p, q)


def nudge(arr: Arrangement, seed: int, retries: int = RANDOM_RETRIES) -> Arrangement:
    """Shift every offset by a small random rational until the arrangement is generic."""
    check_essential(arr)
    rng = np.random.default_rng(seed)
    matroid = normal_matroid(arr)
    for attempt in range(retries):
        shifts = [
            Fraction(int(rng.integers(-9, 10)), int(rng.integers(10, 100)))
            for _ in arr.hyperplanes
        ]
        candidate = arr.with_offsets([h.offset + s for h, s in zip(arr.hyperplanes, shifts)])
        if genericity_violation(candidate, matroid) is None:
            logger.info("nudged offsets generic after %d draws", attempt + 1)
            return candidate
    msg = f"no generic offsets after {retries} draws with {seed=}; try another seed"
    raise RetryExhaustedError(msg)


def random_arrangement(
    dim: int,
    n: int,
    rng: np.random.Generator,
    general_position: bool = False,
    retries: int = RANDOM_RETRIES,
) -> Arrangement:
    """Random integer normals in [-5, 5] and rational offsets p/q, |p| <= 30, 1 <= q <= 4."""
    if dim < 1 or n < dim:
        msg = f"need 1 <= dim <= n, got {dim=} {n=}"
        raise InputError(msg)
    labels = [f"H{i}" for i in range(1, n + 1)]
    for _ in range(retries):
        normals = rng.integers(-NORMAL_RANGE, NORMAL_RANGE + 1, size=(n, dim))
        if (normals == 0).all(axis=1).any():
            continue
        rows = [tuple(Fraction(int(v)) for v in row) for row in normals]
        if exact.rank(rows) != dim:
            continue
        if general_position and any(
            exact.rank([rows[i] for i in idx]) != dim
            for idx in itertools.combinations(range(n), dim)
        ):
            continue
        matroid = Matroid.from_vectors(labels, rows)
        for _ in range(retries):
            arr = Arrangement(
                dim,
                tuple(Hyperplane(e, row, _random_offset(rng)) for e, row in zip(labels, rows)),
            )
            if genericity_violation(arr, matroid) is None:
                return arr
    msg = f"no generic arrangement with {dim=} {n=} after {retries} draws"
    raise RetryExhaustedError(msg)
