from pathlib import Path

import pytest

from backend.adapter.instance_source.oriented_matroid_file_source import (
    OrientedMatroidFileSource,
)
from backend.arrangement import Arrangement, compile_arrangement
from backend.errors import InputError, InvariantViolation, SizeLimitError
from backend.oriented_matroid import (
    AffineOrientedMatroid,
    Chirotope,
    FVector,
    SignVector,
    Tope,
    basis_to_cocircuit,
    bounded_topes,
    chirotope_from_feasible_cocircuits,
    chirotope_sign,
    cocircuits_from_chirotope,
    compose,
    conforms,
    feasible_covectors,
    meet_faces,
    separation,
)

GROUND = ("1", "2", "3")


def sv(key: str, ground: tuple[str, ...] = GROUND) -> SignVector:
    return SignVector(ground, tuple({"+": 1, "-": -1, "0": 0}[c] for c in key))


def triangle() -> AffineOrientedMatroid:
    arr = Arrangement.build(
        2, [("1", (1, 0), 0), ("2", (0, 1), 0), ("3", (1, 1), 1)]
    )
    return compile_arrangement(arr)


@pytest.fixture(scope="module")
def vamos(fixtures_dir: Path) -> AffineOrientedMatroid:
    return OrientedMatroidFileSource(fixtures_dir / "vamos.json").load().om


class TestSignVector:
    def test_text_form(self) -> None:
        ground = tuple("12345678")
        y = SignVector.from_text("5 6 -7 -8", ground)
        assert y.key == "0000++--"
        assert y.to_text() == "5 6 -7 -8"
        assert y.zero_set() == frozenset("1234")
        assert y.support() == frozenset("5678")
        assert (-y).key == "0000--++"

    def test_text_form_errors(self) -> None:
        with pytest.raises(InputError):
            SignVector.from_text("1 9", GROUND)
        with pytest.raises(InputError):
            SignVector.from_text("1 -1", GROUND)
        with pytest.raises(InputError):
            SignVector(GROUND, (1, 0))
        with pytest.raises(InputError):
            SignVector(GROUND, (1, 0, 2))

    def test_compose_and_conform(self) -> None:
        assert compose(sv("+0-"), sv("-+0")) == sv("++-")
        assert conforms(sv("+00"), sv("+-+"))
        assert not conforms(sv("-00"), sv("+-+"))
        with pytest.raises(InputError):
            compose(sv("+0-"), SignVector(("a", "b", "c"), (1, 0, 0)))

    def test_topes(self) -> None:
        with pytest.raises(InputError):
            Tope(sv("+0-"))
        a, b = Tope(sv("++-")), Tope(sv("-+-"))
        assert separation(a, b) == 1
        assert separation(a, a) == 0
        assert sorted([b, a], key=lambda t: t.sort_key) == [a, b]


class TestChirotope:
    def test_string_round_trip_and_alternation(self) -> None:
        c = Chirotope.from_string(2, GROUND, "+ + -")
        assert c.to_string() == "++-"
        assert c.sign(["1", "2"]) == 1
        assert c.sign(["2", "1"]) == -1
        assert chirotope_sign(c, ["3", "2"]) == 1
        assert c.sign(["1", "1"]) == 0
        assert c.basis_sign(["3", "2"]) == -1

    def test_errors(self) -> None:
        with pytest.raises(InputError):
            Chirotope.from_string(2, GROUND, "++")
        with pytest.raises(InputError):
            Chirotope.from_string(2, GROUND, "+x-")
        with pytest.raises(InputError):
            Chirotope.from_string(2, GROUND, "000")
        with pytest.raises(InputError):
            Chirotope.from_string(2, GROUND, "+++").sign(["1"])

    def test_matroid_and_negation(self) -> None:
        c = Chirotope.from_string(2, ("a", "b", "c", "d"), "+0++++")
        assert len(c.matroid().bases) == 5
        assert -(-c) == c
        assert -c != c

    def test_cocircuits_of_triangle(self) -> None:
        cocircuits = cocircuits_from_chirotope(Chirotope.from_string(2, GROUND, "+++"))
        assert [y.key for y in cocircuits] == ["++0", "+0-", "--0", "-0+", "0++", "0--"]


class TestAffineOrientedMatroid:
    def test_triangle(self) -> None:
        om = triangle()
        assert om.rank == 2
        assert [y.to_text() for y in om.feasible_cocircuits] == ["1", "2", "-3"]
        assert basis_to_cocircuit(om, ["1", "2"]).to_text() == "-3"
        topes = bounded_topes(om)
        assert [t.key for t in topes] == ["++-"]

    def test_feasible_covectors_of_triangle(self) -> None:
        keys = {v.key for v in feasible_covectors(triangle())}
        # three vertices, three edges and the interior
        assert keys == {"00-", "+00", "0+0", "0+-", "+0-", "++0", "++-"}

    def test_derived_orientation_matches_central(self) -> None:
        om = triangle()
        derived = chirotope_from_feasible_cocircuits(om.ground, om.feasible_cocircuits)
        assert derived == om.central or -derived == om.central

    def test_missing_cocircuit(self) -> None:
        om = triangle()
        with pytest.raises(InvariantViolation):
            AffineOrientedMatroid(om.central, om.feasible_cocircuits[:2])

    def test_zero_set_not_a_basis(self) -> None:
        c = Chirotope.from_string(2, GROUND, "++0")
        with pytest.raises(InvariantViolation):
            AffineOrientedMatroid(c, [sv("00+"), sv("0+0"), sv("+00")])

    def test_inconsistent_orientation(self) -> None:
        om = triangle()
        flipped = [om.feasible_cocircuits[0], om.feasible_cocircuits[1], -om.feasible_cocircuits[2]]
        with pytest.raises(InvariantViolation):
            AffineOrientedMatroid(om.central, flipped)

    def test_lift_label_collision(self) -> None:
        om = triangle()
        with pytest.raises(InputError):
            AffineOrientedMatroid(om.central, om.feasible_cocircuits, lift="1")

    def test_covector_cap(self) -> None:
        with pytest.raises(SizeLimitError):
            bounded_topes(triangle(), cap=3)


class TestMeets:
    def test_fvector(self) -> None:
        f = FVector(2, (3, 3, 1))
        assert f.f0 == 3
        assert f.euler_characteristic() == 1
        with pytest.raises(InputError):
            FVector(1, (1,))

    def test_tope_meets_itself_in_its_face_lattice(self) -> None:
        om = triangle()
        (t,) = bounded_topes(om)
        assert meet_faces(om, t, t) == FVector(2, (3, 3, 1))


class TestVamos:
    def test_bounded_topes(self, vamos: AffineOrientedMatroid, fixtures_dir: Path) -> None:
        listed = (fixtures_dir / "vamos-bounded-topes.txt").read_text().splitlines()
        expected = {SignVector.from_text(line, vamos.ground).key for line in listed if line}
        topes = bounded_topes(vamos)
        assert len(topes) == 30
        assert {t.key for t in topes} == expected
        assert [t.sort_key for t in topes] == sorted(t.sort_key for t in topes)

    def test_cocircuits_biject_with_bases(self, vamos: AffineOrientedMatroid) -> None:
        assert len(vamos.feasible_cocircuits) == 65
        assert len(vamos.matroid.bases) == 65
        assert len(vamos.infinite_cocircuits) == 2 * 41

    def test_every_tope_meet_satisfies_euler(self, vamos: AffineOrientedMatroid) -> None:
        topes = bounded_topes(vamos)
        for a in topes[:6]:
            for b in topes:
                f = meet_faces(vamos, a, b)
                if f is not None:
                    assert f.euler_characteristic() == 1
