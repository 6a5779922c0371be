import json
import os
from pathlib import Path
from typing import Any, Union


def write_json(path: Union[str, Path], data: Any) -> None:
    """Stable key order; written to a temp file, fsynced, then moved into place"""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    temp_path = f"{path}.tmp"
    with open(temp_path, "w", encoding="utf-8") as file_handle:
        json.dump(data, file_handle, indent=2, sort_keys=True)
        file_handle.flush()
        os.fsync(file_handle.fileno())
    os.replace(temp_path, path)


def read_json(path: Union[str, Path]) -> Any:
    with open(path, "r", encoding="utf-8") as file_handle:
        return json.load(file_handle)
