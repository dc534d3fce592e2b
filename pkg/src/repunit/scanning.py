"""Resumable, sharded range scans.

A scan walks an ascending list of indices up to a bound, maps one worker over
them and keeps the results in index order.  Shards only change who computes
an item, never what is computed or the order it is stored in, so the results
do not depend on the shard count.  Checkpoints are replaced atomically after
every chunk.
"""
from __future__ import annotations

import json
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from . import screening
from .numkernel import _small_primes
from .records import SCHEMA_VERSION


class CheckpointError(Exception):
    pass


@dataclass
class ScanCheckpoint:
    scan_id: str
    params: dict
    # None until the first index is done
    last_index: int | None = None
    hits: list = field(default_factory=list)
    wall_clock: float = 0.0

    def to_dict(self) -> dict:
        return {
            "kind": "checkpoint",
            "schema": SCHEMA_VERSION,
            "payload": {
                "scan_id": self.scan_id,
                "params": self.params,
                "last_index": self.last_index,
                "hits": self.hits,
                "wall_clock": self.wall_clock,
            },
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "ScanCheckpoint":
        if obj.get("kind") != "checkpoint" or obj.get("schema") != SCHEMA_VERSION:
            raise ValueError("not a checkpoint record of this schema version")
        p = obj["payload"]
        return cls(p["scan_id"], p["params"], p["last_index"], p["hits"], p["wall_clock"])


def write_checkpoint(cp: ScanCheckpoint, path: str | os.PathLike) -> str:
    """Write to a temporary file in the same directory, then rename over ``path``."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(prefix=".checkpoint-", dir=directory)
        with os.fdopen(fd, "w") as fh:
            json.dump(cp.to_dict(), fh, separators=(",", ":"))
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except OSError as exc:
        raise CheckpointError(f"cannot write checkpoint {path}: {exc}") from exc
    return path


def load_checkpoint(path: str | os.PathLike) -> ScanCheckpoint:
    try:
        with open(path) as fh:
            return ScanCheckpoint.from_dict(json.load(fh))
    except FileNotFoundError:
        raise
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise CheckpointError(f"checkpoint unreadable: {path}: {exc}") from exc


def _primes_between(lo: int, hi: int) -> list[int]:
    return [p for p in _small_primes(hi) if p >= lo] if hi >= 2 else []


@dataclass(frozen=True)
class ScanDef:
    items: Callable[[dict, int], list[int]]
    worker: Callable[..., dict]
    # index key in each hit payload
    key: str


SCANS: dict[str, ScanDef] = {
    "primes": ScanDef(
        lambda params, bound: _primes_between(2, bound),
        lambda i, params: screening.prime_repunit_item(i, params["x_bound"], params["rounds"]),
        "index",
    ),
    "squarefree": ScanDef(
        lambda params, bound: _primes_between(2, bound),
        lambda i, params: screening.squarefree_item(i, params["q_bound"]),
        "p",
    ),
    "divisors": ScanDef(
        lambda params, bound: _primes_between(5, bound),
        lambda i, params: screening.divisors_item(i, params["x_bound"]),
        "p",
    ),
    "epp": ScanDef(
        lambda params, bound: _primes_between(2, bound),
        lambda i, params: screening.epp_item(i, params["effort"]),
        "p",
    ),
    "fermat": ScanDef(
        lambda params, bound: list(range(0, bound + 1)),
        lambda i, params: screening.fermat_item(i, params["base"], params["rounds"]),
        "n",
    ),
    "sophie": ScanDef(
        lambda params, bound: _primes_between(7, bound),
        lambda i, params: screening.sophie_germain_check(i),
        "p",
    ),
}


def _run_shard(scan_id: str, params: dict, items: list[int]) -> list[dict]:
    worker = SCANS[scan_id].worker
    return [worker(i, params) for i in items]


def _split(items: list[int], shards: int) -> list[list[int]]:
    size, extra = divmod(len(items), shards)
    out, start = [], 0
    for s in range(shards):
        end = start + size + (s < extra)
        if end > start:
            out.append(items[start:end])
        start = end
    return out


def run_scan(
    scan_id: str,
    params: dict,
    bound: int,
    shards: int = 1,
    checkpoint_path: str | os.PathLike | None = None,
    stop_after: int | None = None,
    chunk_size: int | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> ScanCheckpoint:
    """Run (or resume) a scan over every index <= ``bound``.

    ``stop_after`` processes at most that many new items and returns early,
    leaving a checkpoint to resume from.  The returned checkpoint's ``hits``
    hold one payload per index, ascending.
    """
    if scan_id not in SCANS:
        raise ValueError(f"unknown scan {scan_id!r}")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    scan = SCANS[scan_id]
    params = json.loads(json.dumps(params))
    cp = None
    if checkpoint_path is not None and os.path.exists(checkpoint_path):
        cp = load_checkpoint(checkpoint_path)
        if cp.scan_id != scan_id or cp.params != params:
            raise CheckpointError(
                f"checkpoint {checkpoint_path} belongs to scan {cp.scan_id} with params {cp.params}"
            )
    if cp is None:
        cp = ScanCheckpoint(scan_id, params)

    todo = [i for i in scan.items(params, bound) if cp.last_index is None or i > cp.last_index]
    if stop_after is not None:
        todo = todo[:stop_after]
    chunk = chunk_size or max(4 * shards, 8)
    pool = ProcessPoolExecutor(max_workers=shards) if shards > 1 and todo else None
    try:
        for start in range(0, len(todo), chunk):
            batch = todo[start : start + chunk]
            t0 = time.monotonic()
            if pool is None:
                results = _run_shard(scan_id, params, batch)
            else:
                parts = _split(batch, shards)
                futures = [pool.submit(_run_shard, scan_id, params, part) for part in parts]
                results = [r for f in futures for r in f.result()]
            cp.hits.extend(results)
            cp.last_index = batch[-1]
            cp.wall_clock += time.monotonic() - t0
            if checkpoint_path is not None:
                write_checkpoint(cp, checkpoint_path)
            if progress is not None:
                progress(start + len(batch), len(todo))
    finally:
        if pool is not None:
            pool.shutdown()

    remaining = [i for i in scan.items(params, bound) if cp.last_index is None or i > cp.last_index]
    if not remaining and (cp.last_index is None or cp.last_index < bound):
        cp.last_index = bound
        if checkpoint_path is not None:
            write_checkpoint(cp, checkpoint_path)
    return cp


def hits_up_to(cp: ScanCheckpoint, bound: int) -> list[dict]:
    """Hits with index <= bound (a checkpoint may have run further)."""
    key = SCANS[cp.scan_id].key
    return [h for h in cp.hits if h[key] <= bound]

