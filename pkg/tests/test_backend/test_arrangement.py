from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from backend import exact
from backend.adapter.instance_source.arrangement_file_source import ArrangementFileSource
from backend.arrangement import (
    Arrangement,
    Hyperplane,
    central_chirotope,
    compile_arrangement,
    genericity_violation,
    interior_point,
    is_essential,
    normal_matroid,
    nudge,
    parse_rational,
    planar_faces,
    random_arrangement,
    sign_vector_of_point,
    validate_generic,
    vertices,
)
from backend.errors import GenericityError, InputError, RetryExhaustedError
from backend.oriented_matroid import bounded_topes, feasible_covectors


def concurrent_lines() -> Arrangement:
    return Arrangement.build(
        2, [("A", (1, 0), 0), ("B", (0, 1), 0), ("C", (1, 1), 0), ("D", (1, -1), 3)]
    )


class TestParsing:
    def test_rationals(self) -> None:
        assert parse_rational("3/6") == Fraction(1, 2)
        assert parse_rational(-4) == -4
        assert parse_rational(" 7 ") == 7
        for bad in ("abc", "1/0", ""):
            with pytest.raises(InputError):
                parse_rational(bad)

    def test_hyperplane_validation(self) -> None:
        with pytest.raises(InputError):
            Hyperplane("H", (Fraction(0), Fraction(0)), Fraction(1))
        with pytest.raises(InputError):
            Hyperplane("-H", (Fraction(1),), Fraction(1))
        with pytest.raises(InputError):
            Hyperplane("H 1", (Fraction(1),), Fraction(1))

    def test_arrangement_validation(self) -> None:
        with pytest.raises(InputError):
            Arrangement.build(2, [("A", (1, 0), 0), ("A", (0, 1), 0)])
        with pytest.raises(InputError):
            Arrangement.build(2, [("A", (1, 0, 0), 0)])
        with pytest.raises(InputError):
            Arrangement.build(2, [])

    def test_to_dict_uses_rational_strings(self) -> None:
        arr = Arrangement.build(1, [("H", (2,), "1/3")])
        assert arr.to_dict() == {
            "dim": 1,
            "hyperplanes": [{"label": "H", "normal": ["2"], "offset": "1/3"}],
        }


class TestExact:
    def test_linear_algebra(self) -> None:
        assert exact.rank([(1, 2), (2, 4)]) == 1
        assert exact.det([(1, 2), (3, 4)]) == -2
        assert exact.solve([(2, 0), (0, 4)], [1, 1]) == [Fraction(1, 2), Fraction(1, 4)]
        assert exact.kernel_direction([(1, 1, 0), (0, 1, 1)], 3) == [1, -1, 1]
        assert exact.dot((1, 2), (Fraction(1, 2), 3)) == Fraction(13, 2)


class TestGenericity:
    def test_concurrent_lines_are_reported(self) -> None:
        violation = genericity_violation(concurrent_lines())
        assert violation is not None
        assert violation.circuit == ("A", "B", "C")
        assert violation.rank == violation.augmented_rank == 2
        with pytest.raises(GenericityError, match=r"\['A', 'B', 'C'\]"):
            compile_arrangement(concurrent_lines())

    def test_repeated_hyperplane_is_a_two_element_circuit(self) -> None:
        arr = Arrangement.build(1, [("A", (1,), 2), ("B", (2,), 4), ("C", (1,), 0)])
        with pytest.raises(GenericityError) as info:
            validate_generic(arr)
        assert info.value.circuit == ("A", "B")

    def test_parallel_hyperplanes_are_generic(self) -> None:
        arr = Arrangement.build(1, [("A", (1,), 1), ("B", (1,), 2)])
        assert genericity_violation(arr) is None

    def test_not_essential(self) -> None:
        arr = Arrangement.build(2, [("A", (1, 0), 0), ("B", (2, 0), 1)])
        assert not is_essential(arr)
        with pytest.raises(InputError, match="not essential"):
            compile_arrangement(arr)


class TestCompile:
    def test_example_arrangement(self, fixtures_dir: Path) -> None:
        arr = ArrangementFileSource(fixtures_dir / "four-lines.json").load().arrangement
        chirotope = central_chirotope(arr)
        assert chirotope.to_string() == "0-+-++"
        assert len(normal_matroid(arr).bases) == 5
        points = vertices(arr)
        assert points[frozenset({"H3", "H4"})] == (0, 0)
        assert sign_vector_of_point(arr, (0, 0)).key == "-+00"
        om = compile_arrangement(arr)
        assert [t.key for t in bounded_topes(om)] == ["-+++", "-+--"]

    def test_interior_points(self, fixtures_dir: Path) -> None:
        instance = ArrangementFileSource(fixtures_dir / "eight-lines.json").load()
        for tope in bounded_topes(instance.om):
            point = interior_point(instance.arrangement, instance.om, tope)
            assert sign_vector_of_point(instance.arrangement, point) == tope.sign

    def test_points_on_a_line(self) -> None:
        arr = Arrangement.build(1, [(f"H{i}", (1,), -i) for i in range(1, 7)])
        om = compile_arrangement(arr)
        assert len(bounded_topes(om)) == 5


class TestPlanarOracle:
    def test_eight_lines(self, fixtures_dir: Path) -> None:
        arr = ArrangementFileSource(fixtures_dir / "eight-lines.json").load().arrangement
        faces = planar_faces(arr)
        om = compile_arrangement(arr)
        assert len(faces.vertices) == 28
        assert len(faces.regions) == 1 + 8 + 28
        assert [t.sign for t in bounded_topes(om)] == sorted(
            faces.bounded_regions, key=lambda v: tuple(0 if s > 0 else 1 for s in v.signs)
        )
        assert len(faces.bounded_regions) == 21

    def test_needs_the_plane(self) -> None:
        with pytest.raises(InputError):
            planar_faces(Arrangement.build(1, [("A", (1,), 0)]))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=2, max_value=7), st.integers(min_value=0, max_value=2**32))
    def test_random_lines(self, n: int, seed: int) -> None:
        arr = random_arrangement(2, n, np.random.default_rng(seed))
        om = compile_arrangement(arr)
        faces = planar_faces(arr)
        assert {t.sign for t in bounded_topes(om)} == set(faces.bounded_regions)
        assert set(faces.bounded_faces()) <= set(feasible_covectors(om))
        assert set(faces.vertices) == set(om.feasible_cocircuits)


class TestRandom:
    def test_seeded_draws_repeat(self) -> None:
        first = random_arrangement(3, 6, np.random.default_rng(11))
        second = random_arrangement(3, 6, np.random.default_rng(11))
        assert first == second
        assert is_essential(first)
        assert genericity_violation(first) is None

    def test_general_position(self) -> None:
        for seed in range(5):
            arr = random_arrangement(2, 8, np.random.default_rng(seed), general_position=True)
            assert len(normal_matroid(arr).bases) == 28
            assert len(bounded_topes(compile_arrangement(arr))) == 21

    def test_bad_sizes(self) -> None:
        with pytest.raises(InputError):
            random_arrangement(3, 2, np.random.default_rng(0))

    def test_retry_exhaustion(self) -> None:
        with pytest.raises(RetryExhaustedError):
            random_arrangement(3, 3, np.random.default_rng(0), general_position=True, retries=0)


class TestNudge:
    def test_concurrent_lines_become_generic(self) -> None:
        nudged = nudge(concurrent_lines(), seed=5)
        assert genericity_violation(nudged) is None
        assert nudged.normals == concurrent_lines().normals
        assert nudged == nudge(concurrent_lines(), seed=5)

    def test_retry_exhaustion(self) -> None:
        with pytest.raises(RetryExhaustedError):
            nudge(concurrent_lines(), seed=5, retries=0)
