from pathlib import Path

import pytest
from pydantic import ValidationError

from frontend.config import RunConfig, load_environment


class TestRunConfig:
    def test_file_commands_need_an_input(self) -> None:
        with pytest.raises(ValidationError, match="check needs --input"):
            RunConfig(command="check")
        config = RunConfig(command="det", input=Path("a.json"))
        assert config.jobs == 1
        assert config.nudge is None

    def test_one_input_source(self) -> None:
        with pytest.raises(ValidationError, match="exactly one input source"):
            RunConfig(command="check", input=Path("a.json"), dim=2, n=4)
        with pytest.raises(ValidationError, match="takes no --input"):
            RunConfig(command="random", input=Path("a.json"), dim=2, n=4)

    def test_random_ranges(self) -> None:
        assert RunConfig(command="random", dim=4, n=10).count == 1
        with pytest.raises(ValidationError, match="needs --dim and --n"):
            RunConfig(command="random", dim=2)
        with pytest.raises(ValidationError, match="--dim"):
            RunConfig(command="random", dim=5, n=6)
        with pytest.raises(ValidationError, match="--n"):
            RunConfig(command="random", dim=3, n=2)
        with pytest.raises(ValidationError):
            RunConfig(command="random", dim=2, n=4, count=0)

    def test_jobs_and_seed(self) -> None:
        with pytest.raises(ValidationError):
            RunConfig(command="rhs", input=Path("a.json"), jobs=0)
        with pytest.raises(ValidationError):
            RunConfig(command="rhs", input=Path("a.json"), seed=-1)

    def test_limits_come_from_the_environment(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("INTERSECTION_FORMS_MATRIX_LIMIT", "7")
        monkeypatch.setenv("INTERSECTION_FORMS_COVECTOR_CAP", "99")
        config = RunConfig(command="random", dim=1, n=2)
        assert config.matrix_limit == 7
        assert config.covector_cap == 99


class TestLoadEnvironment:
    def test_missing_file_warns(self, tmp_path: Path) -> None:
        with pytest.warns(UserWarning, match="built-in defaults"):
            load_environment(str(tmp_path / "CONFIG.env"))
