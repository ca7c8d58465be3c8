"""Unoriented matroid invariants entering the determinant formulas.

Matroids are stored by their explicit basis lists; every invariant (rank,
closure, flats, Moebius values, beta) is derived from that list.
"""
import itertools
import logging
import os
import threading
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from backend import exact
from backend.errors import InputError, InvariantViolation, SizeLimitError

logger = logging.getLogger(__name__)

EXCHANGE_CHECK_LIMIT = 12
FLAT_COUNT_CAP = 200_000
CROSS_CHECK_GROUND_LIMIT = 10


def flat_ground_limit() -> int:
    return int(os.environ.get("INTERSECTION_FORMS_FLAT_GROUND_LIMIT", "64"))


def cross_check_enabled() -> bool:
    return os.environ.get("INTERSECTION_FORMS_CROSS_CHECK", "0") == "1"


@dataclass(frozen=True)
class Flat:
    elements: frozenset[str]
    rank: int

    def __len__(self) -> int:
        return len(self.elements)


class Matroid:
    def __init__(
        self,
        ground: Sequence[str],
        bases: Iterable[Iterable[str]],
        check: bool = True,
    ) -> None:
        self.ground: tuple[str, ...] = tuple(ground)
        self.bases: frozenset[frozenset[str]] = frozenset(frozenset(b) for b in bases)
        self._position = {e: i for i, e in enumerate(self.ground)}
        if len(self._position) != len(self.ground):
            msg = f"ground set has repeated elements: {self.ground}"
            raise InputError(msg)
        if not self.bases:
            msg = "a matroid needs at least one basis"
            raise InputError(msg)
        sizes = {len(b) for b in self.bases}
        if len(sizes) != 1:
            msg = f"bases of different cardinalities {sorted(sizes)}"
            raise InputError(msg)
        self.r: int = sizes.pop()
        stray = set().union(*self.bases) - set(self.ground)
        if stray:
            msg = f"bases use elements outside the ground set: {sorted(stray)}"
            raise InputError(msg)
        if check and len(self.ground) <= EXCHANGE_CHECK_LIMIT:
            self._check_exchange()
        self._rank_cache: dict[frozenset[str], int] = {}
        self._flats: list[Flat] | None = None
        self._mobius: dict[frozenset[str], int] | None = None
        self._circuits: frozenset[frozenset[str]] | None = None
        self._lock = threading.Lock()

    @classmethod
    def from_vectors(
        cls, labels: Sequence[str], vectors: Sequence[Sequence[Fraction | int]]
    ) -> "Matroid":
        """Linear matroid of a vector configuration."""
        r = exact.rank(vectors)
        bases = [
            [labels[i] for i in idx]
            for idx in itertools.combinations(range(len(labels)), r)
            if exact.rank([vectors[i] for i in idx]) == r
        ]
        return cls(labels, bases)

    @classmethod
    def uniform(cls, r: int, n: int) -> "Matroid":
        ground = [str(i) for i in range(1, n + 1)]
        return cls(ground, itertools.combinations(ground, r))

    def _check_exchange(self) -> None:
        for b1 in self.bases:
            for b2 in self.bases:
                for x in b1 - b2:
                    if not any((b1 - {x}) | {y} in self.bases for y in b2 - b1):
                        msg = (
                            f"basis exchange fails for {sorted(b1)}, {sorted(b2)} "
                            f"at element {x!r}"
                        )
                        raise InputError(msg)

    @property
    def key(self) -> tuple[tuple[str, ...], frozenset[frozenset[str]]]:
        return self.ground, self.bases

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matroid):
            return NotImplemented
        return set(self.ground) == set(other.ground) and self.bases == other.bases

    def __hash__(self) -> int:
        return hash((frozenset(self.ground), self.bases))

    def __repr__(self) -> str:
        return f"Matroid(n={len(self.ground)}, r={self.r}, bases={len(self.bases)})"

    def sorted_elements(self, s: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(s, key=self._position.__getitem__))

    def _subset(self, s: Iterable[str]) -> frozenset[str]:
        s = frozenset(s)
        unknown = s - self._position.keys()
        if unknown:
            msg = f"elements {sorted(unknown)} are not in the ground set"
            raise InputError(msg)
        return s

    def rank(self, s: Iterable[str]) -> int:
        s = self._subset(s)
        cached = self._rank_cache.get(s)
        if cached is not None:
            return cached
        best = 0
        bound = min(len(s), self.r)
        for b in self.bases:
            size = len(s & b)
            if size > best:
                best = size
                if best == bound:
                    break
        self._rank_cache[s] = best
        return best

    def closure(self, s: Iterable[str]) -> Flat:
        s = self._subset(s)
        r = self.rank(s)
        elements = frozenset(
            e for e in self.ground if e in s or self.rank(s | {e}) == r
        )
        return Flat(elements, r)

    def is_flat(self, k: Flat | Iterable[str]) -> bool:
        elements = k.elements if isinstance(k, Flat) else frozenset(k)
        return self.closure(elements).elements == elements

    def _as_flat(self, k: Flat | Iterable[str]) -> Flat:
        elements = k.elements if isinstance(k, Flat) else self._subset(k)
        flat = self.closure(elements)
        if flat.elements != elements:
            msg = f"{sorted(elements)} is not a flat"
            raise InputError(msg)
        return flat

    def flat_key(self, k: Flat) -> tuple[int, tuple[int, ...]]:
        return k.rank, tuple(sorted(self._position[e] for e in k.elements))

    def flats(self) -> list[Flat]:
        """All flats, sorted by rank and then lexicographically in ground order."""
        with self._lock:
            if self._flats is None:
                self._flats = self._enumerate_flats()
            return self._flats

    def _enumerate_flats(self) -> list[Flat]:
        limit = flat_ground_limit()
        if len(self.ground) > limit:
            msg = f"flat enumeration is limited to {limit} elements, got {len(self.ground)}"
            raise SizeLimitError(msg)
        bound = 1 + sum(comb(len(self.ground), k) for k in range(self.r))
        if bound > FLAT_COUNT_CAP:
            msg = f"up to {bound} flats of rank {self.r} on {len(self.ground)} elements, cap is {FLAT_COUNT_CAP}"
            raise SizeLimitError(msg)
        level = {self.closure(()).elements: self.closure(())}
        found = dict(level)
        for _ in range(self.r):
            next_level: dict[frozenset[str], Flat] = {}
            for flat in level.values():
                for e in self.ground:
                    if e in flat.elements:
                        continue
                    cover = self.closure(flat.elements | {e})
                    next_level.setdefault(cover.elements, cover)
            found.update(next_level)
            if len(found) > FLAT_COUNT_CAP:
                msg = f"more than {FLAT_COUNT_CAP} flats"
                raise SizeLimitError(msg)
            level = next_level
        logger.debug("enumerated %d flats of %r", len(found), self)
        return sorted(found.values(), key=self.flat_key)

    def _mobius_table(self) -> dict[frozenset[str], int]:
        flats = self.flats()
        with self._lock:
            if self._mobius is None:
                table: dict[frozenset[str], int] = {}
                for k in flats:
                    if k.rank == 0:
                        table[k.elements] = 1
                        continue
                    table[k.elements] = -sum(
                        table[f.elements]
                        for f in flats
                        if f.rank < k.rank and f.elements < k.elements
                    )
                self._mobius = table
            return self._mobius

    def mobius(self, k: Flat | Iterable[str]) -> int:
        """mu(closure of the empty set, K)."""
        return self._mobius_table()[self._as_flat(k).elements]

    def mobius_plus(self, k: Flat | Iterable[str]) -> int:
        flat = self._as_flat(k)
        return (-1) ** flat.rank * self.mobius(flat)

    def top(self) -> Flat:
        return self.closure(self.ground)

    def fundamental_circuit(self, basis: frozenset[str], e: str) -> frozenset[str]:
        return frozenset({e}) | frozenset(
            x for x in basis if (basis - {x}) | {e} in self.bases
        )

    def nbc_basis_count(self, k: Flat | Iterable[str]) -> int:
        """Bases of M|K containing no broken circuit for the ground-list order."""
        flat = self._as_flat(k)
        sub = self.restrict(flat.elements)
        count = 0
        for basis in sub.bases:
            for e in sub.ground:
                if e in basis:
                    continue
                circuit = sub.fundamental_circuit(basis, e)
                if min(circuit, key=sub._position.__getitem__) == e:
                    break
            else:
                count += 1
        return count

    def restrict(self, s: Iterable[str]) -> "Matroid":
        s = self._subset(s)
        r = self.rank(s)
        bases = {b & s for b in self.bases if len(b & s) == r}
        return Matroid(self.sorted_elements(s), bases, check=False)

    def delete(self, e: str) -> "Matroid":
        self._subset([e])
        ground = [x for x in self.ground if x != e]
        if self.is_coloop(e):
            bases = {b - {e} for b in self.bases}
        else:
            bases = {b for b in self.bases if e not in b}
        return Matroid(ground, bases, check=False)

    def contract(self, e: str) -> "Matroid":
        self._subset([e])
        ground = [x for x in self.ground if x != e]
        if self.is_loop(e):
            bases = set(self.bases)
        else:
            bases = {b - {e} for b in self.bases if e in b}
        return Matroid(ground, bases, check=False)

    def contract_set(self, s: Iterable[str]) -> "Matroid":
        m = self
        for e in self.sorted_elements(self._subset(s)):
            m = m.contract(e)
        return m

    def dual(self) -> "Matroid":
        everything = frozenset(self.ground)
        return Matroid(self.ground, {everything - b for b in self.bases}, check=False)

    def is_loop(self, e: str) -> bool:
        self._subset([e])
        return not any(e in b for b in self.bases)

    def is_coloop(self, e: str) -> bool:
        self._subset([e])
        return all(e in b for b in self.bases)

    def circuits(self) -> frozenset[frozenset[str]]:
        if self._circuits is None:
            self._circuits = frozenset(
                self.fundamental_circuit(b, e)
                for b in self.bases
                for e in self.ground
                if e not in b
            )
        return self._circuits

    def is_connected(self) -> bool:
        if len(self.ground) <= 1:
            return True
        parent = {e: e for e in self.ground}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for circuit in self.circuits():
            first, *rest = circuit
            for other in rest:
                parent[find(other)] = find(first)
        return len({find(e) for e in self.ground}) == 1

    def beta(self) -> int:
        """Crapo's beta; compared with ``beta_sum`` when cross-checks are enabled."""
        value = _beta(self)
        if (
            cross_check_enabled()
            and len(self.ground) <= CROSS_CHECK_GROUND_LIMIT
            and not any(self.is_loop(e) for e in self.ground)
        ):
            expected = self.beta_sum(self.ground)
            if value != expected:
                msg = f"beta of {self!r} is {value} by recursion but {expected} by the flat sum"
                raise InvariantViolation(msg)
        return value

    def beta_sum(self, k: Flat | Iterable[str]) -> int:
        """(-1)^r(K) * sum over flats K' <= K of mu(K') r(K')."""
        flat = self._as_flat(k)
        total = sum(
            self.mobius(f) * f.rank
            for f in self.flats()
            if f.elements <= flat.elements
        )
        return (-1) ** flat.rank * total

    def coloop_free_flats(self) -> list[Flat]:
        result = []
        for k in self.flats():
            sub = self.restrict(k.elements)
            if not any(sub.is_coloop(e) for e in sub.ground):
                result.append(k)
        return result

    def top_mobius_plus(self) -> int:
        """mu^+ of the top flat, counted as nbc bases.

        Agrees with ``mobius_plus(top())`` on loopless matroids and is 0 when
        there are loops. No flats are enumerated.
        """
        return self.nbc_basis_count(self.ground)

    def dual_mobius_plus(self) -> int:
        """mu^+(M*)."""
        return self.dual().top_mobius_plus()

    def dual_restriction_mobius_plus(self, k: Flat | Iterable[str]) -> int:
        """mu^+ of the top flat of (M|K)*."""
        flat = self._as_flat(k)
        return self.restrict(flat.elements).dual_mobius_plus()

    def zaslavsky_count(self) -> int:
        """Bounded-region count (-1)^(r*-1) * sum of mu over proper flats of M*."""
        dual = self.dual()
        if dual.r == 0:
            return 0
        top = dual.top().elements
        total = sum(dual.mobius(f) for f in dual.flats() if f.elements != top)
        return (-1) ** (dual.r - 1) * total


@lru_cache(maxsize=8192)
def _beta(m: Matroid) -> int:
    if not m.ground:
        return 0
    if len(m.ground) == 1:
        return 1 if m.is_coloop(m.ground[0]) else 0
    if not m.is_connected():
        return 0
    e = next(
        x for x in m.ground if not m.is_loop(x) and not m.is_coloop(x)
    )
    return _beta(m.delete(e)) + _beta(m.contract(e))
