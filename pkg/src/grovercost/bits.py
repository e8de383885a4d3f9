"""Bit-order helpers.

Everywhere in the package a block of bytes maps to a bit list most
significant bit first: bit ``8*k`` is the top bit of byte ``k``.
"""

from __future__ import annotations

from typing import Sequence


def bytes_to_bits(data: bytes) -> list[int]:
    return [(byte >> (7 - j)) & 1 for byte in data for j in range(8)]


def bits_to_bytes(bits: Sequence[int]) -> bytes:
    if len(bits) % 8:
        raise ValueError("bit count is not a multiple of 8")
    out = bytearray()
    for k in range(0, len(bits), 8):
        v = 0
        for bit in bits[k:k + 8]:
            v = (v << 1) | (bit & 1)
        out.append(v)
    return bytes(out)


def hex_to_bits(text: str) -> list[int]:
    return bytes_to_bits(bytes.fromhex(text))


def bits_to_hex(bits: Sequence[int]) -> str:
    return bits_to_bytes(bits).hex()


def int_to_bits(value: int, n: int) -> list[int]:
    """``n``-bit big-endian expansion of ``value``."""
    return [(value >> (n - 1 - i)) & 1 for i in range(n)]


def bits_to_int(bits: Sequence[int]) -> int:
    v = 0
    for bit in bits:
        v = (v << 1) | (bit & 1)
    return v
