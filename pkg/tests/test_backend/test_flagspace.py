from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from backend import exact
from backend.adapter.instance_source.arrangement_file_source import ArrangementFileSource
from backend.adapter.instance_source.oriented_matroid_file_source import (
    OrientedMatroidFileSource,
)
from backend.arrangement import compile_arrangement, random_arrangement
from backend.errors import RetryExhaustedError
from backend.flagspace import (
    FlagVector,
    basis_monomials,
    boundary,
    build_y_matrix,
    check_basis_of_kernel,
    draw_xi,
    gram_check,
    pairing,
    phi,
    smith_divisors,
    y_checks,
)
from backend.forms import intersection_forms
from backend.oriented_matroid import bounded_topes
from backend.polyring import poly_eval

ARRANGEMENTS = ["four-lines.json", "four-lines-moved.json", "line-n5.json", "eight-lines.json"]


class TestFlagVectors:
    def test_zero_coordinates_are_dropped(self) -> None:
        v = FlagVector({("a", "b"): 2, ("a", "c"): 0})
        assert v.coords == {("a", "b"): 2}
        assert v[("a", "c")] == 0

    def test_pairing(self) -> None:
        u = FlagVector({("a", "b"): 2, ("a", "c"): 1})
        v = FlagVector({("a", "b"): -1, ("b", "c"): 5})
        assert pairing(u, v) == -2

    def test_boundary(self) -> None:
        assert boundary(FlagVector({("a", "b"): 1})) == {("a",): -1, ("b",): 1}
        # the boundary of a boundary vanishes
        triangle = FlagVector({("a", "b"): 1, ("a", "c"): -1, ("b", "c"): 1})
        assert boundary(triangle) == {}

    def test_smith_divisors(self) -> None:
        assert smith_divisors([[2, 0], [0, 3]]) == (1, 6)
        assert smith_divisors([[1, 1], [1, -1]]) == (1, 2)
        assert smith_divisors([]) == ()


class TestPhi:
    def test_four_lines(self, fixtures_dir: Path) -> None:
        om = ArrangementFileSource(fixtures_dir / "four-lines.json").load().om
        monomials = basis_monomials(om)
        assert [m.basis for m in monomials] == [
            ("H1", "H3"), ("H1", "H4"), ("H2", "H3"), ("H2", "H4"), ("H3", "H4"),
        ]
        upper, lower = bounded_topes(om)
        assert len(phi(om, upper).coords) == 3
        assert pairing(phi(om, upper), phi(om, lower)) == 1
        assert pairing(phi(om, upper), phi(om, upper)) == 3
        assert not boundary(phi(om, upper))

    @pytest.mark.parametrize("name", ARRANGEMENTS + ["vamos.json"])
    def test_kernel_basis(self, fixtures_dir: Path, name: str) -> None:
        path = fixtures_dir / name
        source = OrientedMatroidFileSource(path) if name == "vamos.json" else ArrangementFileSource(path)
        om = source.load().om
        forms = intersection_forms(om)
        assert gram_check(om, forms.s).passed
        report = check_basis_of_kernel(om, forms.topes)
        assert report.passed, [c for c in report.checks if not c.passed]
        assert report.rank == len(forms.topes) == report.dual_mobius_plus
        assert report.divisors == (1,) * report.rank

    def test_four_lines_counts(self, fixtures_dir: Path) -> None:
        om = ArrangementFileSource(fixtures_dir / "four-lines.json").load().om
        report = check_basis_of_kernel(om, bounded_topes(om))
        assert report.dual_mobius_plus == 2
        assert report.divisors == (1, 1)

    def test_snf_skipped_above_limit(self, fixtures_dir: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setattr("backend.flagspace.SNF_BASIS_LIMIT", 3)
        om = ArrangementFileSource(fixtures_dir / "four-lines.json").load().om
        report = check_basis_of_kernel(om, bounded_topes(om))
        assert report.divisors is None
        assert report.checks[-1].status == "skip"
        assert report.passed


class TestYMatrix:
    def test_draw_xi_is_seeded_and_generic(self, fixtures_dir: Path) -> None:
        arr = ArrangementFileSource(fixtures_dir / "eight-lines.json").load().arrangement
        xi = draw_xi(arr, 3)
        assert xi == draw_xi(arr, 3)
        for h in arr.hyperplanes:
            direction = exact.kernel_direction([h.normal], 2)
            assert exact.dot(xi, direction) != 0

    def test_draw_xi_retries(self, fixtures_dir: Path, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("INTERSECTION_FORMS_XI_RETRIES", "0")
        arr = ArrangementFileSource(fixtures_dir / "line-n5.json").load().arrangement
        with pytest.raises(RetryExhaustedError):
            draw_xi(arr, 0)

    @pytest.mark.parametrize("name", ARRANGEMENTS)
    def test_fixtures(self, fixtures_dir: Path, name: str) -> None:
        instance = ArrangementFileSource(fixtures_dir / name).load()
        om = instance.om
        ym = build_y_matrix(instance.arrangement, om, seed=0)
        assert ym.det_y in (1, -1)
        assert poly_eval(ym.det_yq, 1) == ym.det_y
        assert len(ym.regions) == len(om.matroid.bases)
        results = y_checks(om, bounded_topes(om), ym)
        assert [c.name for c in results if not c.passed] == []

    def test_non_unit_determinant_is_reported(self, fixtures_dir: Path) -> None:
        instance = ArrangementFileSource(fixtures_dir / "four-lines.json").load()
        om = instance.om
        ym = replace(build_y_matrix(instance.arrangement, om, seed=0), det_y=2)
        results = {c.name: c for c in y_checks(om, bounded_topes(om), ym)}
        assert not results["det y is a unit"].passed
        assert results["det y is a unit"].witness == "2"

    def test_line_regions(self, fixtures_dir: Path) -> None:
        instance = ArrangementFileSource(fixtures_dir / "line-n5.json").load()
        ym = build_y_matrix(instance.arrangement, instance.om, seed=0)
        # five bounded intervals plus the one ray on the xi-bounded side
        assert len(ym.regions) == 6
        assert len(ym.bases) == 6


class TestRandomOracle:
    @settings(max_examples=25, deadline=None)
    @given(
        st.integers(min_value=1, max_value=3).flatmap(
            lambda dim: st.tuples(
                st.just(dim),
                st.integers(min_value=dim, max_value=6),
                st.integers(min_value=0, max_value=2**32),
            )
        )
    )
    def test_flag_space_identities(self, params: tuple[int, int, int]) -> None:
        dim, n, seed = params
        arr = random_arrangement(dim, n, np.random.default_rng(seed))
        om = compile_arrangement(arr)
        forms = intersection_forms(om)
        assert gram_check(om, forms.s).passed
        assert check_basis_of_kernel(om, forms.topes).passed
        ym = build_y_matrix(arr, om, seed)
        assert all(c.passed for c in y_checks(om, forms.topes, ym))
