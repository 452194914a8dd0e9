"""Wire protocol: one UTF-8 JSON object per frame.

Message types and canonical field order:

    pose    {"type","seq","t","position"}          client -> engine
    clutch  {"type","seq","pressed"}               client -> engine
    params  {"type","seq","v"}                     client -> engine
    state   {"type","seq","t","s_intent","fused","label","follower",
             "clutched","n_clutch","degraded","params_norm","params","rings"}
    hello   {"type","seq","version","scenario","dt","decimation",
             "workspace_radius","bounds","pegs","rings","params_norm",
             "params","theta_min","theta_max"}
    error   {"type","seq","code","message"}

``seq`` increases strictly per direction. Unknown types and malformed
frames decode to typed errors, never crashes; state frames may be
dropped by the server under backpressure, input frames may not.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from ..errors import (
    MalformedFrameError,
    ParamRangeError,
    SchemaError,
    UnknownMessageTypeError,
)

PROTOCOL_VERSION = 1


@dataclass(frozen=True)
class PoseMessage:
    seq: int
    t: float
    position: tuple[float, float, float]


@dataclass(frozen=True)
class ClutchMessage:
    seq: int
    pressed: bool


@dataclass(frozen=True)
class ParamsMessage:
    seq: int
    v: tuple[float, float, float]


@dataclass(frozen=True)
class StateMessage:
    seq: int
    t: float
    s_intent: float
    fused: tuple[float, float]
    label: str | None
    follower: tuple[float, float, float]
    clutched: bool
    n_clutch: int
    degraded: bool
    params_norm: tuple[float, float, float]
    params: dict
    rings: tuple[dict, ...] = ()


@dataclass(frozen=True)
class HelloMessage:
    seq: int
    version: int
    scenario: str
    dt: float
    decimation: int
    workspace_radius: float
    bounds: tuple
    pegs: tuple[dict, ...]
    rings: tuple[dict, ...]
    params_norm: tuple[float, float, float]
    params: dict
    theta_min: tuple[float, float, float]
    theta_max: tuple[float, float, float]


@dataclass(frozen=True)
class ErrorMessage:
    seq: int
    code: str
    message: str


WireMessage = (
    PoseMessage | ClutchMessage | ParamsMessage | StateMessage | HelloMessage | ErrorMessage
)

_TYPE_NAMES = {
    PoseMessage: "pose",
    ClutchMessage: "clutch",
    ParamsMessage: "params",
    StateMessage: "state",
    HelloMessage: "hello",
    ErrorMessage: "error",
}


def _to_plain(value):
    if isinstance(value, tuple):
        return [_to_plain(v) for v in value]
    if isinstance(value, list):
        return [_to_plain(v) for v in value]
    if isinstance(value, dict):
        return {k: _to_plain(v) for k, v in value.items()}
    return value


def encode_message(msg: WireMessage) -> bytes:
    """Serialize a message to one canonical JSON frame."""
    name = _TYPE_NAMES.get(type(msg))
    if name is None:
        raise UnknownMessageTypeError(f"cannot encode {type(msg).__name__}")
    doc: dict = {"type": name, "seq": msg.seq}
    for fname in msg.__dataclass_fields__:
        if fname == "seq":
            continue
        doc[fname] = _to_plain(getattr(msg, fname))
    try:
        return json.dumps(doc, allow_nan=False, separators=(",", ":")).encode("utf-8")
    except ValueError as exc:
        raise SchemaError("payload", f"non-finite numeric field: {exc}") from exc


def _require(doc: dict, key: str):
    if key not in doc:
        raise SchemaError(key, "missing field")
    return doc[key]


def _number(doc: dict, key: str) -> float:
    v = _require(doc, key)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(key, f"expected number, got {type(v).__name__}")
    if not math.isfinite(v):
        raise SchemaError(key, "non-finite number")
    return float(v)


def _integer(doc: dict, key: str) -> int:
    v = _require(doc, key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(key, f"expected integer, got {type(v).__name__}")
    return v


def _boolean(doc: dict, key: str) -> bool:
    v = _require(doc, key)
    if not isinstance(v, bool):
        raise SchemaError(key, f"expected boolean, got {type(v).__name__}")
    return v


def _vec(doc: dict, key: str, n: int) -> tuple:
    v = _require(doc, key)
    if not isinstance(v, list) or len(v) != n:
        raise SchemaError(key, f"expected list of {n} numbers")
    out = []
    for item in v:
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise SchemaError(key, "expected numeric components")
        if not math.isfinite(item):
            raise SchemaError(key, "non-finite component")
        out.append(float(item))
    return tuple(out)


def _label(doc: dict, key: str) -> str | None:
    v = _require(doc, key)
    if v is None:
        return None
    if v not in ("coarse", "fine"):
        raise SchemaError(key, f"expected coarse/fine/null, got {v!r}")
    return v


def decode_message(data: bytes | str) -> WireMessage:
    """Parse one frame; inverse of :func:`encode_message` on valid input."""
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedFrameError(f"frame is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedFrameError("frame is not a JSON object")
    mtype = doc.get("type")
    if not isinstance(mtype, str):
        raise SchemaError("type", "missing or non-string type")
    seq = _integer(doc, "seq")
    if seq < 0:
        raise SchemaError("seq", "must be non-negative")

    if mtype == "pose":
        return PoseMessage(seq=seq, t=_number(doc, "t"), position=_vec(doc, "position", 3))
    if mtype == "clutch":
        return ClutchMessage(seq=seq, pressed=_boolean(doc, "pressed"))
    if mtype == "params":
        v = _vec(doc, "v", 3)
        for i, x in enumerate(v):
            if not 0.0 <= x <= 1.0:
                raise ParamRangeError(f"v[{i}] = {x} outside [0, 1]")
        return ParamsMessage(seq=seq, v=v)
    if mtype == "state":
        return StateMessage(
            seq=seq,
            t=_number(doc, "t"),
            s_intent=_number(doc, "s_intent"),
            fused=_vec(doc, "fused", 2),
            label=_label(doc, "label"),
            follower=_vec(doc, "follower", 3),
            clutched=_boolean(doc, "clutched"),
            n_clutch=_integer(doc, "n_clutch"),
            degraded=_boolean(doc, "degraded"),
            params_norm=_vec(doc, "params_norm", 3),
            params=dict(_require(doc, "params")),
            rings=tuple(_require(doc, "rings")),
        )
    if mtype == "hello":
        return HelloMessage(
            seq=seq,
            version=_integer(doc, "version"),
            scenario=str(_require(doc, "scenario")),
            dt=_number(doc, "dt"),
            decimation=_integer(doc, "decimation"),
            workspace_radius=_number(doc, "workspace_radius"),
            bounds=tuple(tuple(b) for b in _require(doc, "bounds")),
            pegs=tuple(_require(doc, "pegs")),
            rings=tuple(_require(doc, "rings")),
            params_norm=_vec(doc, "params_norm", 3),
            params=dict(_require(doc, "params")),
            theta_min=_vec(doc, "theta_min", 3),
            theta_max=_vec(doc, "theta_max", 3),
        )
    if mtype == "error":
        return ErrorMessage(
            seq=seq, code=str(_require(doc, "code")), message=str(_require(doc, "message"))
        )
    raise UnknownMessageTypeError(f"unknown message type {mtype!r}")


class SeqCounter:
    """Strictly increasing per-direction sequence numbers."""

    def __init__(self, start: int = 0):
        self._next = start

    def take(self) -> int:
        value = self._next
        self._next += 1
        return value
