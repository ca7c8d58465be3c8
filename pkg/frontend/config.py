import os
import warnings
from pathlib import Path
from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, Field, model_validator

CONFIG_FILE = "CONFIG.env"


def load_environment(path: str = CONFIG_FILE) -> None:
    if not Path(path).exists():
        msg = f"{path} not found, using built-in defaults"
        warnings.warn(msg)
        return
    load_dotenv(path)


def _env_int(name: str, default: int) -> int:
    return int(os.environ.get(name, str(default)))


class RunConfig(BaseModel):
    command: Literal["check", "matrix", "det", "rhs", "invariants", "random"]
    input: Path | None = None
    out: Path | None = None
    seed: int = Field(default=0, ge=0, lt=2**64)
    dim: int | None = None
    n: int | None = None
    count: int = Field(default=1, ge=1)
    jobs: int = Field(default=1, ge=1)
    include_matrices: bool = False
    nudge: int | None = Field(default=None, ge=0)
    general_position: bool = False
    timings: bool = False
    covector_cap: int = Field(
        default_factory=lambda: _env_int("INTERSECTION_FORMS_COVECTOR_CAP", 1_000_000), ge=1
    )
    matrix_limit: int = Field(
        default_factory=lambda: _env_int("INTERSECTION_FORMS_MATRIX_LIMIT", 40), ge=0
    )

    @model_validator(mode="after")
    def one_input_source(self) -> "RunConfig":
        if self.command == "random":
            if self.input is not None:
                msg = "random draws its own instances and takes no --input"
                raise ValueError(msg)
            if self.dim is None or self.n is None:
                msg = "random needs --dim and --n"
                raise ValueError(msg)
            if not 1 <= self.dim <= 4:
                msg = f"--dim must lie in [1, 4], got {self.dim}"
                raise ValueError(msg)
            if not self.dim <= self.n <= 10:
                msg = f"--n must lie in [dim, 10], got {self.n}"
                raise ValueError(msg)
        else:
            if self.input is None:
                msg = f"{self.command} needs --input"
                raise ValueError(msg)
            if self.dim is not None or self.n is not None:
                msg = "--dim and --n only apply to random; give exactly one input source"
                raise ValueError(msg)
        return self
