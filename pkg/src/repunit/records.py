"""Result records and their JSON-lines / CSV serialization."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import IO, Iterable

SCHEMA_VERSION = 1

KINDS = (
    "header",
    "evaluation",
    "gcd-report",
    "valuation",
    "screen-verdict",
    "divisor-witness",
    "conjecture-record",
    "scan-hit",
)

# payload["verdict"] values that mean a checked claim failed
COUNTEREXAMPLE_VERDICTS = frozenset({"counterexample", "mismatch"})


@dataclass(frozen=True)
class ResultRecord:
    kind: str
    payload: dict
    schema: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown record kind {self.kind!r}")

    @property
    def is_counterexample(self) -> bool:
        return self.payload.get("verdict") in COUNTEREXAMPLE_VERDICTS

    def to_json(self) -> str:
        return json.dumps(
            {"kind": self.kind, "schema": self.schema, "payload": self.payload},
            sort_keys=False,
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, line: str) -> "ResultRecord":
        obj = json.loads(line)
        return cls(obj["kind"], obj["payload"], obj["schema"])


def to_cell(value) -> str:
    """CSV cell text: scalars as-is, containers and booleans as JSON, None empty."""
    if value is None:
        return ""
    if isinstance(value, (bool, list, dict)):
        return json.dumps(value, separators=(",", ":"))
    return str(value)


class RecordWriter:
    """Single ordered sink for records; JSON-lines, optionally mirrored to CSV."""

    def __init__(self, stream: IO[str], header: dict | None = None):
        self.stream = stream
        self.records: list[ResultRecord] = []
        self.counterexamples = 0
        if header is not None:
            self.stream.write(ResultRecord("header", header).to_json() + "\n")

    def emit(self, kind: str, payload: dict) -> ResultRecord:
        rec = ResultRecord(kind, payload)
        self.stream.write(rec.to_json() + "\n")
        self.records.append(rec)
        if rec.is_counterexample:
            self.counterexamples += 1
        return rec

    def write_csv(self, stream: IO[str]):
        write_csv(self.records, stream)


def write_csv(records: Iterable[ResultRecord], stream: IO[str]):
    records = list(records)
    columns: list[str] = []
    for rec in records:
        for key in rec.payload:
            if key not in columns:
                columns.append(key)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["kind", "schema", *columns])
    for rec in records:
        writer.writerow([rec.kind, rec.schema, *(to_cell(rec.payload.get(c)) if c in rec.payload else "" for c in columns)])


def read_jsonl(text: str) -> list[ResultRecord]:
    return [ResultRecord.from_json(line) for line in io.StringIO(text) if line.strip()]


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))
