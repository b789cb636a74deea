"""Embedded document store: one JSON file per poll, atomic whole-file writes.

Writes go to a temp file in the same directory and land via os.replace, so a
crash at any point leaves either the old document or the new one, never a
torn mix. The store is single-writer by design: exactly one service process
owns a storage directory, and per-poll locks serialize writers within it.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Iterator

from .state import PollState, poll_from_doc, poll_to_doc


class UnknownPollError(KeyError):
    pass


class DuplicatePollError(RuntimeError):
    pass


def _safe_name(poll_id: str) -> str:
    if not poll_id or any(c in poll_id for c in "/\\\0") or poll_id.startswith("."):
        raise ValueError(f"unusable poll id {poll_id!r}")
    return f"{poll_id}.json"


class PollStore:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._registry = threading.Lock()

    def lock(self, poll_id: str) -> threading.Lock:
        with self._registry:
            return self._locks.setdefault(poll_id, threading.Lock())

    def _path(self, poll_id: str) -> Path:
        return self.root / _safe_name(poll_id)

    def exists(self, poll_id: str) -> bool:
        return self._path(poll_id).is_file()

    def create(self, poll: PollState) -> None:
        if self.exists(poll.poll_id):
            raise DuplicatePollError(f"poll {poll.poll_id!r} already exists")
        self.save(poll)

    def save(self, poll: PollState) -> None:
        path = self._path(poll.poll_id)
        tmp = path.with_name(path.name + f".tmp{os.getpid()}")
        payload = json.dumps(poll_to_doc(poll), indent=1, sort_keys=True)
        tmp.write_text(payload, encoding="utf-8")
        os.replace(tmp, path)

    def load(self, poll_id: str) -> PollState:
        path = self._path(poll_id)
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise UnknownPollError(poll_id) from None
        return poll_from_doc(doc)

    def poll_ids(self) -> Iterator[str]:
        for entry in sorted(self.root.glob("*.json")):
            yield entry.stem
