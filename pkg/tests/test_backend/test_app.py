from pathlib import Path

import pytest

from backend.adapter.instance_source.arrangement_file_source import ArrangementFileSource
from backend.adapter.instance_source.oriented_matroid_file_source import (
    OrientedMatroidFileSource,
)
from backend.app import Backend
from backend.errors import InputError
from backend.polyring import q_integer
from backend.ports.instance_source import Instance


@pytest.fixture
def four_lines(fixtures_dir: Path) -> Instance:
    return ArrangementFileSource(fixtures_dir / "four-lines.json").load()


class TestBackend:
    def test_check(self, four_lines: Instance) -> None:
        analysis = Backend().run("check", four_lines)
        assert analysis.theorem.match
        assert analysis.conjecture.match
        assert not analysis.conjecture_mismatch
        assert len(analysis.forms.topes) == 2
        assert analysis.checks == []
        assert set(analysis.timings) == {"forms", "determinants"}

    def test_matrix_stops_before_determinants(self, four_lines: Instance) -> None:
        analysis = Backend().run("matrix", four_lines)
        assert analysis.forms.s.s.at(0) == [[3, 1], [1, 3]]
        assert analysis.theorem is None

    def test_det(self, four_lines: Instance) -> None:
        analysis = Backend(jobs=2).run("det", four_lines)
        assert analysis.theorem.lhs == 8
        assert analysis.conjecture.lhs == q_integer(4) * q_integer(2)

    def test_rhs_needs_no_topes(self, four_lines: Instance) -> None:
        analysis = Backend().run("rhs", four_lines)
        assert analysis.forms is None
        assert analysis.rhs_s == 8
        assert analysis.rhs_sq == q_integer(4) * q_integer(2)
        assert [f.base for f in analysis.factors] == [4, 2]

    def test_invariants_on_an_arrangement(self, four_lines: Instance) -> None:
        analysis = Backend(seed=3).run("invariants", four_lines)
        assert not analysis.invariants_failed, [c.name for c in analysis.checks if not c.passed]
        assert analysis.kernel.rank == 2
        assert analysis.y_matrix is not None
        assert analysis.y_matrix.det_y in (1, -1)

    def test_invariants_on_an_oriented_matroid(self, fixtures_dir: Path) -> None:
        instance = OrientedMatroidFileSource(fixtures_dir / "vamos.json").load()
        analysis = Backend(jobs=4).run("invariants", instance)
        assert not analysis.invariants_failed
        assert analysis.y_matrix is None

    def test_unknown_command(self, four_lines: Instance) -> None:
        with pytest.raises(InputError, match="unknown command"):
            Backend().run("plot", four_lines)

    def test_jobs_must_be_positive(self) -> None:
        with pytest.raises(InputError):
            Backend(jobs=0)
