"""Append-only JSON-lines count cache, one file per (p, a)."""
from __future__ import annotations

import json
import math
import os
import random
import threading
import warnings
from pathlib import Path

CACHE_ENV = "MIRRORCOUNT_CACHE_DIR"


def default_cache_dir():
    return os.environ.get(CACHE_ENV) or None


def canonical_key(key: dict) -> str:
    return json.dumps(key, sort_keys=True, separators=(",", ":"))


class CountCache:
    """Maps canonical keys to (value, provenance, config).

    Lines that fail to parse, or were written by another engine version, are
    skipped with a warning and the count is recomputed on demand.
    """

    def __init__(self, directory, p, a, engine):
        self.path = Path(directory) / f"counts-p{p}-a{a}.jsonl"
        self.engine = engine
        self._lock = threading.Lock()
        self._entries = {}
        self._load()

    def _load(self):
        if not self.path.exists():
            return
        with self.path.open() as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    key = canonical_key(rec["key"])
                    value = int(rec["value"])
                    prov = rec["provenance"]
                    engine = rec["engine"]
                except (ValueError, KeyError, TypeError):
                    warnings.warn(f"{self.path}:{lineno}: corrupt cache line ignored", stacklevel=2)
                    continue
                if engine != self.engine:
                    continue
                self._entries[key] = (value, prov, rec.get("config"))

    def __len__(self):
        return len(self._entries)

    def get(self, key: dict):
        hit = self._entries.get(canonical_key(key))
        return None if hit is None else hit[:2]

    def put(self, key: dict, value: int, provenance: str, config: dict | None = None):
        ck = canonical_key(key)
        rec = {"key": key, "value": str(value), "provenance": provenance,
               "engine": self.engine, "config": config}
        with self._lock:
            if ck in self._entries:
                return
            self._entries[ck] = (value, provenance, config)
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a") as fh:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")

    def items(self):
        return sorted(self._entries.items())

    def verify(self, recompute, fraction=0.05, seed=0):
        """Recompute a seeded random sample; returns (checked, mismatches).

        ``recompute(key_dict, config)`` must return the exact count.
        """
        items = self.items()
        if not items:
            return 0, []
        size = max(1, math.ceil(fraction * len(items)))
        sample = random.Random(seed).sample(items, size)
        bad = []
        for ck, (value, _, config) in sample:
            got = recompute(json.loads(ck), config)
            if got != value:
                bad.append({"key": ck, "cached": str(value), "recomputed": str(got)})
        return size, bad
