import numpy as np

from backend.arrangement import compile_arrangement, random_arrangement
from backend.ports.instance_source import Instance, InstanceSource
from utils.ReadInstanceFile import instance_digest


class RandomArrangementSource(InstanceSource):
    """The index-th random generic arrangement of a seeded sweep.

    Each index draws from its own generator seeded with (seed, index), so
    instances do not depend on the order in which a sweep visits them.
    """

    def __init__(
        self, dim: int, n: int, seed: int, index: int = 0, general_position: bool = False
    ) -> None:
        self.dim = dim
        self.n = n
        self.seed = seed
        self.index = index
        self.general_position = general_position

    @property
    def name(self) -> str:
        return f"random-r{self.dim}-n{self.n}-s{self.seed}-{self.index}"

    def load(self) -> Instance:
        rng = np.random.default_rng([self.seed, self.index])
        arr = random_arrangement(self.dim, self.n, rng, general_position=self.general_position)
        data = arr.to_dict()
        return Instance(
            name=self.name,
            kind="arrangement",
            om=compile_arrangement(arr),
            digest=instance_digest(data),
            arrangement=arr,
            data=data,
        )
