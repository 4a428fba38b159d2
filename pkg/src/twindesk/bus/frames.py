"""Binary frame layout shared by the in-process bus and the WebSocket bridge.

Layout, all little-endian:

    magic "IMTW" | version u8 = 1 | topic_len u16 | topic bytes
    | schema_id u8 | timestamp_ns u64 | payload_len u32 | payload

Fixed overhead is 20 bytes.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

MAGIC = b"IMTW"
VERSION = 1
HEADER_OVERHEAD = 20

SCHEMA_POSE = 1
SCHEMA_JOINT_STATE = 2
SCHEMA_POINT_CLOUD = 3
SCHEMA_EVENT = 4
SCHEMA_DEPTH_FRAME = 5
SCHEMA_COLOR_FRAME = 6
SCHEMA_GRIPPER_CMD = 7
SCHEMA_TWIN_STATE = 8

VALID_SCHEMA_IDS = frozenset(range(1, 9))

_PREFIX = struct.Struct("<4sBH")
_SUFFIX = struct.Struct("<BQI")


class FrameError(ValueError):
    """Malformed or unencodable frame."""


@dataclass(frozen=True)
class Envelope:
    topic: str
    schema_id: int
    timestamp_ns: int = 0
    payload: bytes = field(default=b"", repr=False)

    def validate(self) -> "Envelope":
        raw = self.topic.encode("utf-8")
        if not raw:
            raise FrameError("empty topic")
        if len(raw) > 255:
            raise FrameError(f"topic too long ({len(raw)} bytes, max 255)")
        if any(c.isspace() for c in self.topic):
            raise FrameError(f"topic contains whitespace: {self.topic!r}")
        if self.schema_id not in VALID_SCHEMA_IDS:
            raise FrameError(f"unknown schema_id {self.schema_id}")
        if not 0 <= self.timestamp_ns < 2**64:
            raise FrameError(f"timestamp out of u64 range: {self.timestamp_ns}")
        if len(self.payload) >= 2**32:
            raise FrameError("payload too large")
        return self


def encode_frame(e: Envelope) -> bytes:
    e.validate()
    topic = e.topic.encode("utf-8")
    return b"".join(
        (
            _PREFIX.pack(MAGIC, VERSION, len(topic)),
            topic,
            _SUFFIX.pack(e.schema_id, e.timestamp_ns, len(e.payload)),
            e.payload,
        )
    )


def decode_frame(b) -> tuple[Envelope, bytes]:
    """Parse exactly one frame from the front of b; returns (envelope, remainder)."""
    b = bytes(b)
    if len(b) < _PREFIX.size:
        raise FrameError(f"truncated frame: {len(b)} bytes, need at least {_PREFIX.size}")
    magic, version, topic_len = _PREFIX.unpack_from(b, 0)
    if magic != MAGIC:
        raise FrameError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FrameError(f"unsupported frame version {version}")
    off = _PREFIX.size
    if len(b) < off + topic_len + _SUFFIX.size:
        raise FrameError("truncated frame: header overruns buffer")
    topic_raw = b[off : off + topic_len]
    off += topic_len
    schema_id, timestamp_ns, payload_len = _SUFFIX.unpack_from(b, off)
    off += _SUFFIX.size
    if schema_id not in VALID_SCHEMA_IDS:
        raise FrameError(f"unknown schema_id {schema_id}")
    if len(b) < off + payload_len:
        raise FrameError(
            f"truncated frame: declared payload {payload_len} bytes, {len(b) - off} available"
        )
    try:
        topic = topic_raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FrameError(f"topic is not valid UTF-8: {exc}") from exc
    payload = b[off : off + payload_len]
    env = Envelope(topic, schema_id, timestamp_ns, payload).validate()
    return env, b[off + payload_len :]
