"""Persistent memo cache for small relative Davenport constants.

One record per line::

    {"invariant_factors":[2,6]}|<sha256 of canonical subset>|<d>|<witness json>

The cache is advisory.  Unparseable lines are skipped with a warning and a
cached record is only trusted after its witness re-verifies.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

log = logging.getLogger(__name__)

ENV_VAR = "RELDAV_CACHE"
DEFAULT_PATH = Path.home() / ".cache" / "reldav" / "dS.cache"


def default_cache_path() -> Path:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else DEFAULT_PATH


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def group_key(factors) -> str:
    return _dumps({"invariant_factors": list(factors)})


def subset_hash(subset) -> str:
    return hashlib.sha256(_dumps([list(x) for x in subset]).encode()).hexdigest()


class DavenportCache:
    """Map (group, subset) -> (d, witness), optionally backed by a file.

    With `path=None` the cache lives in memory only.  New records are
    appended to the file as they are produced; there is a single writer per
    process and inserts are idempotent, so a racing duplicate line is harmless.
    """

    def __init__(self, path: Path | str | None = None):
        self.path = Path(path) if path is not None else None
        self.records: dict[tuple[str, str], tuple[int, list | None]] = {}
        self.hits = 0
        self.misses = 0
        self.skipped = 0
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self):
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    gkey, shash, value, witness = line.split("|")
                    json.loads(gkey)
                    val = int(value)
                    wit = json.loads(witness)
                    if val < 0 or (wit is not None and not isinstance(wit, list)):
                        raise ValueError("bad record")
                except (ValueError, json.JSONDecodeError):
                    self.skipped += 1
                    log.warning("cache %s line %d is corrupted; skipping", self.path, lineno)
                    continue
                self.records[(gkey, shash)] = (val, wit)

    def get(self, factors, subset):
        rec = self.records.get((group_key(factors), subset_hash(subset)))
        if rec is None:
            self.misses += 1
        else:
            self.hits += 1
        return rec

    def discard(self, factors, subset):
        self.records.pop((group_key(factors), subset_hash(subset)), None)

    def put(self, factors, subset, value: int, witness) -> None:
        key = (group_key(factors), subset_hash(subset))
        wit = None if witness is None else [list(x) for x in witness]
        if self.records.get(key) == (value, wit):
            return
        self.records[key] = (value, wit)
        self._append([(key, value, wit)])

    def _append(self, rows) -> None:
        if self.path is None or not rows:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            for (gkey, shash), value, wit in rows:
                fh.write(f"{gkey}|{shash}|{value}|{_dumps(wit)}\n")

    def records_for(self, factors) -> dict:
        gk = group_key(factors)
        return {k: v for k, v in self.records.items() if k[0] == gk}

    def merge(self, records: dict) -> None:
        """Fold in records computed elsewhere (e.g. by a worker process), in sorted order."""
        new = []
        for key, (value, wit) in sorted(records.items()):
            if key in self.records:
                continue
            self.records[key] = (value, wit)
            new.append((key, value, wit))
        self._append(new)

    def stats(self) -> dict:
        return {"hits": self.hits, "misses": self.misses, "corrupted_lines": self.skipped}
