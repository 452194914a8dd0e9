"""Session logs: JSONL, one record per line.

Tick records:

    {"t": ..., "leader": [x,y,z], "clutch": bool, "follower": [x,y,z],
     "s": ..., "label_pred": "coarse"|"fine"|null, "label_true": ...}

Event records carry an "event" key instead ("header", "params",
"retrain", "end"). A loaded log replayed through the engine reproduces
the identical scale sequence; see :mod:`intentscale.service.replay`.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from ..errors import LogSchemaError

KNOWN_EVENTS = ("header", "params", "retrain", "end")
_LABELS = ("coarse", "fine", None)


def append_log(path, record: dict) -> None:
    """Append one record (sample or event) to a JSONL log."""
    with open(path, "a", encoding="utf-8") as handle:
        handle.write(json.dumps(record, allow_nan=False, separators=(",", ":")))
        handle.write("\n")


def write_log(path, records) -> None:
    """Write a whole record sequence, replacing any existing file."""
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, allow_nan=False, separators=(",", ":")))
            handle.write("\n")


def _check_vec3(record: dict, key: str, line: int) -> None:
    v = record.get(key)
    if (
        not isinstance(v, list)
        or len(v) != 3
        or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in v)
        or any(not math.isfinite(x) for x in v)
    ):
        raise LogSchemaError(line, key, "expected list of 3 finite numbers")


def _check_tick(record: dict, line: int) -> None:
    if "t" not in record:
        raise LogSchemaError(line, "t", "missing field")
    t = record["t"]
    if isinstance(t, bool) or not isinstance(t, (int, float)) or not math.isfinite(t):
        raise LogSchemaError(line, "t", "expected finite number")
    _check_vec3(record, "leader", line)
    _check_vec3(record, "follower", line)
    if not isinstance(record.get("clutch"), bool):
        raise LogSchemaError(line, "clutch", "expected boolean")
    s = record.get("s")
    if isinstance(s, bool) or not isinstance(s, (int, float)) or not math.isfinite(s):
        raise LogSchemaError(line, "s", "expected finite number")
    for key in ("label_pred", "label_true"):
        if record.get(key) not in _LABELS:
            raise LogSchemaError(line, key, "expected coarse/fine/null")


def load_log(path) -> list[dict]:
    """Load and validate a JSONL session log.

    Raises :class:`LogSchemaError` carrying the 1-based line number and
    offending field on the first violation.
    """
    records: list[dict] = []
    text = Path(path).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise LogSchemaError(line_no, "json", f"invalid JSON: {exc}") from exc
        if not isinstance(record, dict):
            raise LogSchemaError(line_no, "json", "record is not an object")
        if "event" in record:
            if record["event"] not in KNOWN_EVENTS:
                raise LogSchemaError(line_no, "event", f"unknown event {record['event']!r}")
        else:
            _check_tick(record, line_no)
        records.append(record)
    return records
