"""Byte-level reader/writer for fixed-width fields and length-prefixed blobs."""

from __future__ import annotations

import struct

from silentledger.groups import (
    G1_BYTES,
    G2_BYTES,
    SCALAR_BYTES,
    LengthError,
    decode_g1,
    decode_g2,
    decode_scalar,
    encode_scalar,
)


class Writer:
    def __init__(self):
        self._parts: list[bytes] = []

    def raw(self, b: bytes) -> "Writer":
        self._parts.append(bytes(b))
        return self

    def point(self, *pts) -> "Writer":
        for p in pts:
            self._parts.append(p.to_bytes())
        return self

    def scalar(self, *ss: int) -> "Writer":
        for s in ss:
            self._parts.append(encode_scalar(s))
        return self

    def u8(self, v: int) -> "Writer":
        return self.raw(struct.pack(">B", v))

    def u16(self, v: int) -> "Writer":
        return self.raw(struct.pack(">H", v))

    def blob16(self, b: bytes) -> "Writer":
        if len(b) > 0xFFFF:
            raise ValueError("blob too long for 2-byte prefix")
        return self.u16(len(b)).raw(b)

    def blob32(self, b: bytes) -> "Writer":
        return self.raw(struct.pack(">I", len(b))).raw(b)

    def getvalue(self) -> bytes:
        return b"".join(self._parts)


class Reader:
    def __init__(self, data: bytes):
        self.data = bytes(data)
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise LengthError("truncated input")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def g1(self):
        return decode_g1(self.take(G1_BYTES))

    def g2(self):
        return decode_g2(self.take(G2_BYTES))

    def scalar(self) -> int:
        return decode_scalar(self.take(SCALAR_BYTES))

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack(">H", self.take(2))[0]

    def blob16(self) -> bytes:
        return self.take(self.u16())

    def blob32(self) -> bytes:
        return self.take(struct.unpack(">I", self.take(4))[0])

    def at_end(self) -> bool:
        return self.pos == len(self.data)

    def finish(self):
        if not self.at_end():
            raise LengthError("trailing bytes")
