import hashlib
import json
from pathlib import Path
from typing import Any

from backend.errors import InputError


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def instance_digest(data: Any) -> str:
    """sha256 of the canonical JSON form, so formatting does not change the digest."""
    return "sha256:" + hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


def read_instance_file(path: Path) -> tuple[dict[str, Any], str]:
    """
    Read a JSON instance file.

    Parameters:
    -----------
    path : Path
        Arrangement or oriented matroid JSON file.

    Returns:
    --------
    The parsed JSON object and its digest.
    """
    if not path.exists():
        msg = f"{path=} does not exist"
        raise InputError(msg)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as err:
        msg = f"{path}: cannot read the file as UTF-8 text: {err}"
        raise InputError(msg) from err
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        msg = f"{path}: invalid JSON at line {err.lineno}, column {err.colno}: {err.msg}"
        raise InputError(msg) from err
    if not isinstance(data, dict):
        msg = f"{path}: expected a JSON object at the top level, got {type(data).__name__}"
        raise InputError(msg)
    return data, instance_digest(data)
