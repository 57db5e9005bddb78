"""File ingestion and envelope serialization.

Input formats: CSV `id,p[,x...]` for p-values, CSV `id,w` for knockoff
statistics, and JSON Lines for online streams.  Envelope curves round-trip
through CSV with 17 significant digits so re-parsing reproduces the
in-memory values exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from .envelopes import EnvelopeCurve
from .errors import DuplicateId, ParseError, ValueOutOfRange

ENVELOPE_HEADER = ["k", "size", "v_hat", "v_bar", "fdp_bar_raw", "fdp_bar"]

KINDS = ("pvalues", "knockoff-w", "online-stream")


def _fmt(x: float) -> str:
    return format(x, ".17g")


@dataclass(frozen=True)
class InputDataset:
    kind: str
    ids: list[str]
    values: np.ndarray                  # p or w
    side_info: list[list[str]] = field(default_factory=list)
    records: list[dict] = field(default_factory=list)  # online streams only
    source: str = ""

    def __len__(self) -> int:
        return len(self.records) if self.kind == "online-stream" else len(self.ids)


def _parse_float(text: str, line: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"cannot parse {what} {text!r}", line)
    if math.isnan(value):
        raise ValueOutOfRange(f"{what} is NaN", line)
    return value


def _parse_csv(handle: TextIO, kind: str, source: str) -> InputDataset:
    value_col = "p" if kind == "pvalues" else "w"
    reader = csv.reader(handle)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty file", 1)
    header = [col.strip() for col in header]
    if len(header) < 2 or header[0] != "id" or header[1] != value_col:
        raise ParseError(
            f"expected header starting 'id,{value_col}', got {','.join(header)}", 1)
    ids: list[str] = []
    seen: set[str] = set()
    values: list[float] = []
    side: list[list[str]] = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) < 2:
            raise ParseError("expected at least 2 columns", lineno)
        hyp_id = row[0].strip()
        if hyp_id in seen:
            raise DuplicateId(f"duplicate id {hyp_id!r}", lineno)
        seen.add(hyp_id)
        value = _parse_float(row[1], lineno, value_col)
        if kind == "pvalues" and not 0.0 <= value <= 1.0:
            raise ValueOutOfRange(f"p-value {value} outside [0,1]", lineno)
        ids.append(hyp_id)
        values.append(value)
        side.append([cell.strip() for cell in row[2:]])
    if not ids:
        raise ParseError("no data rows", 2)
    return InputDataset(kind=kind, ids=ids, values=np.asarray(values),
                        side_info=side, source=source)


def _parse_stream(handle: TextIO, source: str) -> InputDataset:
    records = []
    for lineno, line in enumerate(handle, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", lineno)
        for key in ("j", "alpha", "p"):
            if key not in rec:
                raise ParseError(f"missing field {key!r}", lineno)
        alpha = _parse_float(str(rec["alpha"]), lineno, "alpha")
        p = _parse_float(str(rec["p"]), lineno, "p")
        if not 0.0 <= p <= 1.0:
            raise ValueOutOfRange(f"p-value {p} outside [0,1]", lineno)
        if not 0.0 < alpha < 1.0:
            raise ValueOutOfRange(f"alpha {alpha} outside (0,1)", lineno)
        lam = rec.get("lambda")
        records.append({"j": int(rec["j"]), "alpha": alpha,
                        "lambda": None if lam is None else float(lam), "p": p})
    if not records:
        raise ParseError("no records", 1)
    return InputDataset(kind="online-stream", ids=[str(r["j"]) for r in records],
                        values=np.asarray([r["p"] for r in records]),
                        records=records, source=source)


def parse_dataset(path: str, kind: str) -> InputDataset:
    if kind not in KINDS:
        raise ParseError(f"unknown dataset kind {kind!r}; one of {KINDS}")
    with open(path, "r", encoding="utf-8") as handle:
        if kind == "online-stream":
            return _parse_stream(handle, path)
        return _parse_csv(handle, kind, path)


def write_envelope_csv(curve: EnvelopeCurve, handle: TextIO) -> None:
    handle.write(",".join(ENVELOPE_HEADER) + "\n")
    for k, size, v_hat, v_bar, raw, clamped in curve.rows():
        handle.write(f"{k},{size},{_fmt(v_hat)},{v_bar},"
                     f"{_fmt(raw)},{_fmt(clamped)}\n")


def envelope_csv_text(curve: EnvelopeCurve) -> str:
    buf = io.StringIO()
    write_envelope_csv(curve, buf)
    return buf.getvalue()


def read_envelope_csv(handle: TextIO) -> dict[str, np.ndarray]:
    """Parse the envelope CSV schema back into column arrays."""
    reader = csv.reader(handle)
    header = next(reader)
    if header != ENVELOPE_HEADER:
        raise ParseError(f"unexpected header {','.join(header)}", 1)
    cols: dict[str, list[float]] = {name: [] for name in ENVELOPE_HEADER}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(ENVELOPE_HEADER):
            raise ParseError("wrong column count", lineno)
        for name, cell in zip(ENVELOPE_HEADER, row):
            cols[name].append(_parse_float(cell, lineno, name))
    out: dict[str, np.ndarray] = {}
    for name in ("k", "size", "v_bar"):
        out[name] = np.asarray(cols[name], dtype=np.int64)
    for name in ("v_hat", "fdp_bar_raw", "fdp_bar"):
        out[name] = np.asarray(cols[name], dtype=float)
    return out
