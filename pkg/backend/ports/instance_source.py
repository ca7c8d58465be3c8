import abc
from abc import ABC
from dataclasses import dataclass, field
from typing import Any, Literal

from backend.arrangement import Arrangement
from backend.oriented_matroid import AffineOrientedMatroid


@dataclass(frozen=True)
class Instance:
    name: str
    kind: Literal["arrangement", "oriented_matroid"]
    om: AffineOrientedMatroid
    digest: str
    arrangement: Arrangement | None = None
    data: dict[str, Any] = field(default_factory=dict, repr=False)


class InstanceSource(ABC):
    @abc.abstractmethod
    def load(self) -> Instance:
        raise NotImplementedError
