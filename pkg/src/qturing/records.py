"""Serialized correlation values (CSV / JSON)."""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Optional, TextIO

FIELDS = ("m", "j", "index", "value", "source")
SOURCES = ("bruteforce", "analytic")


@dataclass(frozen=True)
class CorrelationRecord:
    m: int
    j: int
    index: str
    value: float
    source: str = "bruteforce"

    @property
    def sort_key(self):
        return (self.m, self.j, self.index, self.source)


def _fmt(value: float) -> str:
    return format(value, ".17g")


def infer_format(path: Optional[str | os.PathLike], fmt: Optional[str] = None) -> str:
    if fmt:
        if fmt not in ("csv", "json"):
            raise ValueError(f"unknown record format {fmt!r}")
        return fmt
    if path is not None and str(path).endswith(".json"):
        return "json"
    return "csv"


def dump_records(records: Iterable[CorrelationRecord], stream: TextIO, fmt: str = "csv") -> None:
    rows = sorted(records, key=lambda r: r.sort_key)
    if fmt == "json":
        json.dump([asdict(r) for r in rows], stream, indent=1)
        stream.write("\n")
        return
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(FIELDS)
    for r in rows:
        writer.writerow([r.m, r.j, r.index, _fmt(r.value), r.source])


def load_records(stream: TextIO, fmt: str = "csv") -> list[CorrelationRecord]:
    if fmt == "json":
        return [
            CorrelationRecord(int(d["m"]), int(d["j"]), str(d["index"]), float(d["value"]), d["source"])
            for d in json.load(stream)
        ]
    reader = csv.DictReader(stream)
    return [
        CorrelationRecord(int(row["m"]), int(row["j"]), row["index"], float(row["value"]), row["source"])
        for row in reader
    ]


def write_records(path: str | os.PathLike, records: Iterable[CorrelationRecord], fmt: Optional[str] = None) -> None:
    fmt = infer_format(path, fmt)
    with open(path, "w", newline="") as fh:
        dump_records(records, fh, fmt)


def read_records(path: str | os.PathLike, fmt: Optional[str] = None) -> list[CorrelationRecord]:
    fmt = infer_format(path, fmt)
    with open(path, newline="") as fh:
        return load_records(fh, fmt)


def records_to_text(records: Iterable[CorrelationRecord], fmt: str = "csv") -> str:
    buf = io.StringIO()
    dump_records(records, buf, fmt)
    return buf.getvalue()


def resolve_output(path: str | os.PathLike) -> Path:
    """Relative output paths land under $QTURING_OUTPUT_DIR when it is set."""
    path = Path(path)
    base = os.environ.get("QTURING_OUTPUT_DIR")
    if base and not path.is_absolute():
        Path(base).mkdir(parents=True, exist_ok=True)
        return Path(base) / path
    return path
