import json
import os
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator, List, Optional, Union

from filelock import FileLock

from config.config import TRAIN_LOG_NAME


class RunLogService:
    """Append-only JSON-lines log of training records"""

    def __init__(self, run_dir: Union[str, Path], log_name: str = TRAIN_LOG_NAME) -> None:
        self.path = Path(run_dir) / log_name
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.lock = FileLock(f"{self.path}.lock", timeout=10)

    def reset(self) -> None:
        """Start an empty log, dropping the records of any earlier run"""
        with self.lock:
            with open(self.path, "w", encoding="utf-8") as file_handle:
                file_handle.flush()
                os.fsync(file_handle.fileno())

    def append(self, record: dict) -> None:
        entry = {"logged_at": datetime.now(timezone.utc).isoformat(), **record}
        with self.lock:
            with open(self.path, "a", encoding="utf-8") as file_handle:
                file_handle.write(json.dumps(entry, sort_keys=True) + "\n")
                file_handle.flush()
                os.fsync(file_handle.fileno())

    def __iter__(self) -> Iterator[dict]:
        if not self.path.exists():
            return iter(())
        with self.lock:
            with open(self.path, "r", encoding="utf-8") as file_handle:
                lines = file_handle.readlines()
        return (json.loads(line) for line in lines if line.strip())

    def records(self, kind: Optional[str] = None) -> List[dict]:
        return [r for r in self if kind is None or r.get("kind") == kind]
