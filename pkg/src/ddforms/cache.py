"""Content-addressed JSON cache for computed coefficient tables."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from . import __version__

ENV_VAR = "DDFORMS_CACHE"


def default_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "ddforms"


def cache_key(kind: str, name: str, window: dict) -> str:
    blob = json.dumps({"kind": kind, "name": name, "window": window, "version": __version__},
                      sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:32]


class Cache:
    """Files ``<key>.json`` under ``root``; writes go through a temp file and a rename."""

    def __init__(self, root: os.PathLike | str | None = None):
        self.root = Path(root) if root is not None else default_dir()

    def path(self, key: str) -> Path:
        return self.root / (key + ".json")

    def get(self, key: str):
        p = self.path(key)
        if not p.exists():
            return None
        with open(p) as fh:
            return json.load(fh)

    def put(self, key: str, payload: dict) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(payload, fh, sort_keys=True)
            os.replace(tmp, self.path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return self.path(key)

    def entries(self) -> list[dict]:
        if not self.root.exists():
            return []
        out = []
        for p in sorted(self.root.glob("*.json")):
            try:
                with open(p) as fh:
                    d = json.load(fh)
                out.append({"key": p.stem, "kind": d.get("kind"), "name": d.get("name"),
                            "window": d.get("window"), "bytes": p.stat().st_size})
            except (OSError, ValueError):
                out.append({"key": p.stem, "kind": "unreadable"})
        return out

    def clear(self) -> int:
        n = 0
        if self.root.exists():
            for p in self.root.glob("*.json"):
                p.unlink()
                n += 1
        return n
