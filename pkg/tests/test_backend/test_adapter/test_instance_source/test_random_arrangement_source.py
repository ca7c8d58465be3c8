from backend.adapter.instance_source.random_arrangement_source import RandomArrangementSource
from backend.arrangement import genericity_violation


class TestRandomArrangementSource:
    def test_draws_are_reproducible(self) -> None:
        first = RandomArrangementSource(2, 4, seed=7, index=3).load()
        second = RandomArrangementSource(2, 4, seed=7, index=3).load()
        assert first.digest == second.digest
        assert first.name == "random-r2-n4-s7-3"
        assert genericity_violation(first.arrangement) is None

    def test_indices_draw_independently(self) -> None:
        digests = {RandomArrangementSource(3, 5, seed=1, index=i).load().digest for i in range(4)}
        assert len(digests) == 4

    def test_general_position(self) -> None:
        instance = RandomArrangementSource(2, 5, seed=2, general_position=True).load()
        assert len(instance.om.matroid.bases) == 10
