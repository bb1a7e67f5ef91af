"""On-disk cache of Hecke matrices.

Each entry is a JSON file holding the matrix as decimal strings and a
SHA-256 checksum of its canonical encoding.  Writes go to a temporary file
that is renamed into place, so concurrent readers never see a partial
entry; an entry whose checksum does not match is ignored and recomputed.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from . import __version__

log = logging.getLogger(__name__)

CACHE_FORMAT = 1


def default_cache_dir() -> Path:
    return Path(os.environ.get("CONGLAB_CACHE", "./.conglab-cache"))


def _digest(payload: str) -> str:
    return hashlib.sha256(payload.encode()).hexdigest()


class HeckeCache:
    def __init__(self, root: str | os.PathLike | None = None, version: str = __version__):
        self.root = Path(root) if root is not None else default_cache_dir()
        self.version = version
        self.hits = 0
        self.misses = 0

    def path(self, N: int, ell: int) -> Path:
        return self.root / f"hecke-N{N}-l{ell}-v{self.version}.json"

    def get(self, N: int, ell: int) -> list[list[int]] | None:
        path = self.path(N, ell)
        try:
            doc = json.loads(path.read_text())
            payload = json.dumps(doc["matrix"], separators=(",", ":"))
            if doc.get("format") != CACHE_FORMAT or doc.get("key") != [N, ell, self.version]:
                raise ValueError("key mismatch")
            if doc.get("sha256") != _digest(payload):
                raise ValueError("checksum mismatch")
            matrix = [[int(x) for x in row] for row in doc["matrix"]]
        except FileNotFoundError:
            self.misses += 1
            return None
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("discarding corrupt cache entry %s: %s", path, exc)
            self.misses += 1
            return None
        self.hits += 1
        return matrix

    def put(self, N: int, ell: int, matrix) -> None:
        rows = [[str(int(x)) for x in row] for row in matrix]
        payload = json.dumps(rows, separators=(",", ":"))
        doc = {
            "format": CACHE_FORMAT,
            "key": [N, ell, self.version],
            "matrix": rows,
            "sha256": _digest(payload),
        }
        self.root.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(doc, fh)
            os.replace(tmp, self.path(N, ell))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
