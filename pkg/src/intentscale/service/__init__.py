from .logs import append_log, load_log, write_log
from .protocol import (
    ClutchMessage,
    ErrorMessage,
    HelloMessage,
    ParamsMessage,
    PoseMessage,
    SeqCounter,
    StateMessage,
    decode_message,
    encode_message,
)
from .replay import ReplayResult, replay_records
from .snapshot import load_snapshot, save_snapshot

__all__ = [
    "ClutchMessage",
    "ErrorMessage",
    "HelloMessage",
    "ParamsMessage",
    "PoseMessage",
    "ReplayResult",
    "SeqCounter",
    "StateMessage",
    "append_log",
    "decode_message",
    "encode_message",
    "load_log",
    "load_snapshot",
    "replay_records",
    "save_snapshot",
    "write_log",
]
