"""Sign-vector combinatorics of affine oriented matroids.

Covectors are handled internally as tuples over {-1, 0, +1} in ground order;
``SignVector`` wraps such a tuple together with its ground set.
"""
import itertools
import logging
import os
from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from math import comb

from backend.errors import InputError, InvariantViolation, SizeLimitError
from backend.matroid import Matroid

logger = logging.getLogger(__name__)

SIGN_CHARS = {1: "+", -1: "-", 0: "0"}
CHAR_SIGNS = {"+": 1, "-": -1, "0": 0}

Raw = tuple[int, ...]


def covector_cap() -> int:
    return int(os.environ.get("INTERSECTION_FORMS_COVECTOR_CAP", "1000000"))


@dataclass(frozen=True)
class SignVector:
    ground: tuple[str, ...]
    signs: Raw

    def __post_init__(self) -> None:
        if len(self.ground) != len(self.signs):
            msg = f"sign vector of length {len(self.signs)} on {len(self.ground)} elements"
            raise InputError(msg)
        if any(s not in (-1, 0, 1) for s in self.signs):
            msg = f"signs must be -1, 0 or +1: {self.signs}"
            raise InputError(msg)

    @classmethod
    def from_mapping(cls, ground: Sequence[str], values: Mapping[str, int]) -> "SignVector":
        return cls(tuple(ground), tuple(values.get(e, 0) for e in ground))

    @classmethod
    def from_text(cls, text: str, ground: Sequence[str]) -> "SignVector":
        """Parse ``"5 6 -7 -8"``: listed elements carry their sign, the rest are zero."""
        values: dict[str, int] = {}
        for token in text.split():
            sign, label = (-1, token[1:]) if token.startswith("-") else (1, token)
            if label not in ground:
                msg = f"unknown element {label!r} in sign vector {text!r}"
                raise InputError(msg)
            if label in values:
                msg = f"element {label!r} repeated in sign vector {text!r}"
                raise InputError(msg)
            values[label] = sign
        return cls.from_mapping(ground, values)

    def to_text(self) -> str:
        return " ".join(
            e if s > 0 else f"-{e}" for e, s in zip(self.ground, self.signs) if s
        )

    @property
    def key(self) -> str:
        return "".join(SIGN_CHARS[s] for s in self.signs)

    def value(self, e: str) -> int:
        return self.signs[self.ground.index(e)]

    def support(self) -> frozenset[str]:
        return frozenset(e for e, s in zip(self.ground, self.signs) if s)

    def zero_set(self) -> frozenset[str]:
        return frozenset(e for e, s in zip(self.ground, self.signs) if not s)

    def __neg__(self) -> "SignVector":
        return SignVector(self.ground, tuple(-s for s in self.signs))


def _check_ground(x: SignVector, y: SignVector) -> None:
    if x.ground != y.ground:
        msg = f"sign vectors on different ground sets {x.ground} and {y.ground}"
        raise InputError(msg)


def _compose(x: Raw, y: Raw) -> Raw:
    return tuple(a if a else b for a, b in zip(x, y))


def _conforms(x: Raw, t: Raw) -> bool:
    return all(not a or a == b for a, b in zip(x, t))


def compose(x: SignVector, y: SignVector) -> SignVector:
    _check_ground(x, y)
    return SignVector(x.ground, _compose(x.signs, y.signs))


def conforms(x: SignVector, t: SignVector) -> bool:
    """True iff x is a face of t."""
    _check_ground(x, t)
    return _conforms(x.signs, t.signs)


@dataclass(frozen=True)
class Tope:
    sign: SignVector

    def __post_init__(self) -> None:
        if 0 in self.sign.signs:
            msg = f"a tope needs full support, got {self.sign.key}"
            raise InputError(msg)

    @property
    def key(self) -> str:
        return self.sign.key

    @property
    def sort_key(self) -> tuple[int, ...]:
        return tuple(0 if s > 0 else 1 for s in self.sign.signs)

    def value(self, e: str) -> int:
        return self.sign.value(e)


def _parity(indices: Sequence[int]) -> int:
    inversions = sum(
        1 for i, j in itertools.combinations(range(len(indices)), 2) if indices[i] > indices[j]
    )
    return -1 if inversions % 2 else 1


class Chirotope:
    """Basis orientation stored on lexicographically sorted r-subsets."""

    def __init__(self, rank: int, ground: Sequence[str], values: Sequence[int]) -> None:
        self.rank = rank
        self.ground: tuple[str, ...] = tuple(ground)
        self._position = {e: i for i, e in enumerate(self.ground)}
        subsets = list(itertools.combinations(range(len(self.ground)), rank))
        if len(values) != len(subsets):
            msg = (
                f"chirotope of rank {rank} on {len(self.ground)} elements needs "
                f"{comb(len(self.ground), rank)} signs, got {len(values)}"
            )
            raise InputError(msg)
        self._table: dict[tuple[int, ...], int] = dict(zip(subsets, values, strict=True))
        if not any(self._table.values()):
            msg = "chirotope is identically zero"
            raise InputError(msg)
        self._matroid: Matroid | None = None

    @classmethod
    def from_string(cls, rank: int, ground: Sequence[str], text: str) -> "Chirotope":
        text = "".join(text.split())
        unknown = set(text) - CHAR_SIGNS.keys()
        if unknown:
            msg = f"chirotope string may only contain '+', '-', '0', found {sorted(unknown)}"
            raise InputError(msg)
        return cls(rank, ground, [CHAR_SIGNS[c] for c in text])

    def to_string(self) -> str:
        return "".join(SIGN_CHARS[v] for v in self._table.values())

    def _indices(self, elements: Iterable[str]) -> tuple[int, ...]:
        try:
            return tuple(self._position[e] for e in elements)
        except KeyError as err:
            msg = f"element {err.args[0]!r} is not in the ground set"
            raise InputError(msg) from err

    def sign_of_indices(self, indices: Sequence[int]) -> int:
        if len(set(indices)) != len(indices):
            return 0
        return _parity(indices) * self._table[tuple(sorted(indices))]

    def sign(self, ordered: Sequence[str]) -> int:
        """Alternating extension: stored sign times the parity of the ordering."""
        if len(ordered) != self.rank:
            msg = f"chirotope of rank {self.rank} evaluated on {len(ordered)} elements"
            raise InputError(msg)
        return self.sign_of_indices(self._indices(ordered))

    def basis_sign(self, basis: Iterable[str]) -> int:
        """Sign on the basis listed in ground order."""
        return self._table[tuple(sorted(self._indices(basis)))]

    def bases(self) -> list[frozenset[str]]:
        return [
            frozenset(self.ground[i] for i in idx) for idx, v in self._table.items() if v
        ]

    def matroid(self) -> Matroid:
        if self._matroid is None:
            self._matroid = Matroid(self.ground, self.bases())
        return self._matroid

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Chirotope):
            return NotImplemented
        return (self.rank, self.ground, self._table) == (other.rank, other.ground, other._table)

    def __neg__(self) -> "Chirotope":
        return Chirotope(self.rank, self.ground, [-v for v in self._table.values()])


def chirotope_sign(c: Chirotope, ordered: Sequence[str]) -> int:
    return c.sign(ordered)


def cocircuits_from_chirotope(c: Chirotope) -> list[SignVector]:
    """Cocircuits Y_s(j) = chi(s, j) over hyperplanes spanned by (r-1)-subsets s."""
    n = len(c.ground)
    found: dict[Raw, None] = {}
    for s in itertools.combinations(range(n), c.rank - 1):
        members = set(s)
        values = tuple(
            0 if j in members else c.sign_of_indices(s + (j,)) for j in range(n)
        )
        if not any(values):
            continue
        found.setdefault(values)
        found.setdefault(tuple(-v for v in values))
    vectors = [SignVector(c.ground, v) for v in found]
    return sorted(vectors, key=lambda y: y.key)


def chirotope_from_feasible_cocircuits(
    ground: Sequence[str], feasible: Sequence[SignVector]
) -> Chirotope:
    """Basis orientation of M = M~/g determined by the feasible cocircuits.

    Along a basis exchange b = S+x -> b' = S+j the orientations satisfy
    chi(S, j) = -Y_b(j) * Y_b'(x) * chi(S, x). The orientation of the first
    basis in lexicographic order is fixed to +.
    """
    ground = tuple(ground)
    by_zero: dict[tuple[int, ...], Raw] = {}
    for y in feasible:
        zero = tuple(i for i, s in enumerate(y.signs) if not s)
        by_zero[zero] = y.signs
    if not by_zero:
        msg = "no feasible cocircuits given"
        raise InputError(msg)
    rank = len(next(iter(by_zero)))
    root = min(by_zero)
    orientation: dict[tuple[int, ...], int] = {root: 1}
    queue = deque([root])
    while queue:
        b = queue.popleft()
        y_b = by_zero[b]
        for x in b:
            rest = tuple(i for i in b if i != x)
            chi_sx = orientation[b] * _parity(rest + (x,))
            for j in range(len(ground)):
                if j in b:
                    continue
                b2 = tuple(sorted(rest + (j,)))
                if b2 not in by_zero:
                    continue
                chi_sj = -y_b[j] * by_zero[b2][x] * chi_sx
                value = chi_sj * _parity(rest + (j,))
                known = orientation.get(b2)
                if known is None:
                    orientation[b2] = value
                    queue.append(b2)
                elif known != value:
                    names = [ground[i] for i in b2]
                    msg = f"feasible cocircuits induce conflicting orientations on basis {names}"
                    raise InvariantViolation(msg)
    if len(orientation) != len(by_zero):
        msg = "zero sets of the feasible cocircuits are not connected by basis exchanges"
        raise InvariantViolation(msg)
    values = [
        orientation.get(idx, 0)
        for idx in itertools.combinations(range(len(ground)), rank)
    ]
    return Chirotope(rank, ground, values)


@dataclass(frozen=True)
class FVector:
    d: int
    f: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.f) != self.d + 1:
            msg = f"f-vector {self.f} does not match dimension {self.d}"
            raise InputError(msg)

    @property
    def f0(self) -> int:
        return self.f[0]

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * fi for i, fi in enumerate(self.f))


class AffineOrientedMatroid:
    """A generic affine oriented matroid (M~, g) with M~/g = M.

    ``feasible_cocircuits`` are the cocircuits with g = + restricted to I;
    ``infinite_cocircuits`` are the cocircuits of M (g = 0), in +/- pairs.
    """

    def __init__(
        self,
        central: Chirotope,
        feasible_cocircuits: Sequence[SignVector],
        lift: str = "g",
    ) -> None:
        if lift in central.ground:
            msg = f"lift element {lift!r} collides with a ground element"
            raise InputError(msg)
        self.central = central
        self.lift = lift
        self.ground = central.ground
        self.matroid = central.matroid()
        self.feasible_cocircuits: tuple[SignVector, ...] = tuple(
            sorted(feasible_cocircuits, key=lambda y: y.key)
        )
        self.infinite_cocircuits: tuple[SignVector, ...] = tuple(
            cocircuits_from_chirotope(central)
        )
        self._by_zero_set: dict[frozenset[str], SignVector] = {}
        self.validate()

    @property
    def rank(self) -> int:
        return self.central.rank

    def validate(self) -> None:
        bases = self.matroid.bases
        for y in self.feasible_cocircuits:
            if y.ground != self.ground:
                msg = f"feasible cocircuit {y.to_text()!r} is not on the ground set {self.ground}"
                raise InputError(msg)
            zero = y.zero_set()
            if zero not in bases:
                msg = (
                    f"feasible cocircuit {y.to_text()!r} has zero set {sorted(zero)}, "
                    "which is not a basis: the lift is not generic"
                )
                raise InvariantViolation(msg)
            if zero in self._by_zero_set:
                msg = f"two feasible cocircuits share the zero set {sorted(zero)}"
                raise InvariantViolation(msg)
            self._by_zero_set[zero] = y
        if len(self._by_zero_set) != len(bases):
            msg = (
                f"{len(self._by_zero_set)} feasible cocircuits for {len(bases)} bases: "
                "feasible cocircuits must be in bijection with bases"
            )
            raise InvariantViolation(msg)
        derived = chirotope_from_feasible_cocircuits(self.ground, self.feasible_cocircuits)
        if derived != self.central and -derived != self.central:
            msg = "chirotope and feasible cocircuits are not orientations of the same lift"
            raise InvariantViolation(msg)

    def basis_to_cocircuit(self, b: Iterable[str]) -> SignVector:
        b = frozenset(b)
        try:
            return self._by_zero_set[b]
        except KeyError:
            msg = f"no feasible cocircuit with zero set {sorted(b)}"
            raise InvariantViolation(msg) from None

    def face_dimension(self, x: Raw) -> int:
        zero = [e for e, s in zip(self.ground, x) if not s]
        return self.rank - self.matroid.rank(zero)


def basis_to_cocircuit(om: AffineOrientedMatroid, b: Iterable[str]) -> SignVector:
    return om.basis_to_cocircuit(b)


def _closure(generators: Sequence[Raw], cap: int) -> set[Raw]:
    seen = set(generators)
    frontier = list(seen)
    while frontier:
        fresh = []
        for x in frontier:
            if 0 not in x:
                continue
            for y in generators:
                z = _compose(x, y)
                if z not in seen:
                    seen.add(z)
                    fresh.append(z)
        if len(seen) > cap:
            msg = f"composition closure exceeded {cap} covectors"
            raise SizeLimitError(msg)
        frontier = fresh
    return seen


def feasible_covectors(om: AffineOrientedMatroid, cap: int | None = None) -> list[SignVector]:
    """All compositions of feasible cocircuits."""
    cap = covector_cap() if cap is None else cap
    raw = _closure([y.signs for y in om.feasible_cocircuits], cap)
    return sorted((SignVector(om.ground, x) for x in raw), key=lambda v: v.key)


def bounded_topes(om: AffineOrientedMatroid, cap: int | None = None) -> list[Tope]:
    cap = covector_cap() if cap is None else cap
    covectors = _closure([y.signs for y in om.feasible_cocircuits], cap)
    infinite = [y.signs for y in om.infinite_cocircuits]
    topes = [
        Tope(SignVector(om.ground, x))
        for x in covectors
        if 0 not in x and not any(_conforms(y, x) for y in infinite)
    ]
    topes.sort(key=lambda t: t.sort_key)
    logger.info(
        "%d covectors from %d feasible cocircuits, %d bounded topes",
        len(covectors),
        len(om.feasible_cocircuits),
        len(topes),
    )
    return topes


def cocircuit_faces(om: AffineOrientedMatroid, t: Tope) -> list[SignVector]:
    return [
        y
        for y in om.feasible_cocircuits + om.infinite_cocircuits
        if _conforms(y.signs, t.sign.signs)
    ]


def separation(a: Tope, b: Tope) -> int:
    _check_ground(a.sign, b.sign)
    return sum(1 for x, y in zip(a.sign.signs, b.sign.signs) if x != y)


def meet_faces(om: AffineOrientedMatroid, a: Tope, b: Tope) -> FVector | None:
    """f-vector of the common face of a and b, or None when they share no vertex."""
    common = [
        y.signs
        for y in cocircuit_faces(om, a)
        if _conforms(y.signs, b.sign.signs)
    ]
    if not common:
        return None
    faces = _closure(common, covector_cap())
    top = common[0]
    for y in common[1:]:
        top = _compose(top, y)
    d = om.face_dimension(top)
    f = [0] * (d + 1)
    for x in faces:
        f[om.face_dimension(x)] += 1
    return FVector(d, tuple(f))
