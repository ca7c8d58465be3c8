from pydantic import BaseModel, ConfigDict, Field, ValidationError

from backend.errors import InputError


class HyperplaneModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    label: str
    normal: list[str | int]
    offset: str | int


class ArrangementModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int = Field(ge=1)
    hyperplanes: list[HyperplaneModel] = Field(min_length=1)


class LiftModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    g: str = "g"
    feasible_cocircuits: list[str] = Field(min_length=1)


class OrientedMatroidModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rank: int = Field(ge=1)
    elements: list[str] = Field(min_length=1)
    chirotope: str
    lift: LiftModel


def validation_error(source: str, err: ValidationError) -> InputError:
    first = err.errors()[0]
    location = ".".join(str(part) for part in first["loc"]) or "<root>"
    msg = f"{source}: field {location}: {first['msg']}"
    return InputError(msg)
