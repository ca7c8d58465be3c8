import logging
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from backend.adapter.instance_source.models import ArrangementModel, validation_error
from backend.arrangement import Arrangement, compile_arrangement, nudge
from backend.ports.instance_source import Instance, InstanceSource
from utils.ReadInstanceFile import instance_digest, read_instance_file

logger = logging.getLogger(__name__)


class ArrangementFileSource(InstanceSource):
    """Affine hyperplane arrangement read from a JSON file."""

    def __init__(
        self,
        path: Path,
        nudge_seed: int | None = None,
        document: tuple[dict[str, Any], str] | None = None,
    ) -> None:
        """

        Args:
            path:
                JSON file of the form
                {"dim": r, "hyperplanes": [{"label": "H1", "normal": ["0", "1"], "offset": "1"}, ...]}
            nudge_seed:
                When given, offsets are re-randomized by small rationals until generic.
            document:
                The parsed file and its digest, when the caller has already read it.

        """
        self.path = path
        self.nudge_seed = nudge_seed
        self.document = document

    def load(self) -> Instance:
        data, digest = self.document or read_instance_file(self.path)
        try:
            model = ArrangementModel.model_validate(data)
        except ValidationError as err:
            raise validation_error(str(self.path), err) from err
        arr = Arrangement.build(
            model.dim, ((h.label, h.normal, h.offset) for h in model.hyperplanes)
        )
        if self.nudge_seed is not None:
            arr = nudge(arr, self.nudge_seed)
            data = arr.to_dict()
            digest = instance_digest(data)
            logger.info("offsets of %s nudged with seed %d", self.path, self.nudge_seed)
        return Instance(
            name=self.path.stem,
            kind="arrangement",
            om=compile_arrangement(arr),
            digest=digest,
            arrangement=arr,
            data=data,
        )
