"""Append-only JSON-lines result cache keyed by (canonical form, command, parameters)."""
from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def cache_key(form: str, command: str, params: dict) -> str:
    return canonical_json([form, command, params])


@dataclass
class ResultCache:
    """Verdicts plus certificate digests; later lines never overwrite earlier ones."""

    path: Path | None = None
    entries: dict[str, dict] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if self.path is not None:
            self.path = Path(self.path)
            if self.path.exists():
                for line in self.path.read_text().splitlines():
                    if line.strip():
                        rec = json.loads(line)
                        self.entries.setdefault(rec["key"], rec)

    def get(self, form: str, command: str, params: dict) -> dict | None:
        return self.entries.get(cache_key(form, command, params))

    def put(self, form: str, command: str, params: dict, verdict: str, certificate=None) -> dict:
        key = cache_key(form, command, params)
        with self._lock:
            if key in self.entries:
                return self.entries[key]
            rec = {
                "key": key,
                "verdict": verdict,
                "digest": digest(certificate) if certificate is not None else None,
            }
            self.entries[key] = rec
            if self.path is not None:
                with self.path.open("a") as fh:
                    fh.write(canonical_json(rec) + "\n")
            return rec

    def __len__(self) -> int:
        return len(self.entries)
