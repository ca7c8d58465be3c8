from pathlib import Path
from typing import Any

from pydantic import ValidationError

from backend.adapter.instance_source.models import OrientedMatroidModel, validation_error
from backend.errors import InputError
from backend.oriented_matroid import AffineOrientedMatroid, Chirotope, SignVector
from backend.ports.instance_source import Instance, InstanceSource
from utils.ReadInstanceFile import read_instance_file


class OrientedMatroidFileSource(InstanceSource):
    """Affine oriented matroid given by its central chirotope and feasible cocircuits."""

    def __init__(self, path: Path, document: tuple[dict[str, Any], str] | None = None) -> None:
        self.path = path
        self.document = document

    def load(self) -> Instance:
        data, digest = self.document or read_instance_file(self.path)
        try:
            model = OrientedMatroidModel.model_validate(data)
        except ValidationError as err:
            raise validation_error(str(self.path), err) from err
        if len(set(model.elements)) != len(model.elements):
            msg = f"{self.path}: field elements: repeated element labels"
            raise InputError(msg)
        chirotope = Chirotope.from_string(model.rank, model.elements, model.chirotope)
        feasible = [
            SignVector.from_text(text, model.elements)
            for text in model.lift.feasible_cocircuits
        ]
        return Instance(
            name=self.path.stem,
            kind="oriented_matroid",
            om=AffineOrientedMatroid(chirotope, feasible, lift=model.lift.g),
            digest=digest,
            data=data,
        )
