"""Small shared helpers: bit packing and binomial confidence intervals."""

from __future__ import annotations

import math

import numpy as np

# popcount per byte value
POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)


def bytes_to_bits(data: bytes | np.ndarray) -> np.ndarray:
    """MSB-first unpacking of a byte buffer into a uint8 bit array."""
    arr = np.frombuffer(bytes(data), dtype=np.uint8) if isinstance(data, (bytes, bytearray)) else np.asarray(data, dtype=np.uint8)
    return np.unpackbits(arr)


def bits_to_bytes(bits: np.ndarray) -> bytes:
    """MSB-first packing; bit count must be a multiple of 8."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size % 8:
        raise ValueError("bit count must be a multiple of 8")
    return np.packbits(bits).tobytes()


def bit_errors(a: np.ndarray, b: np.ndarray) -> int:
    """Hamming distance between two equal-shape uint8 byte arrays."""
    return int(POPCOUNT[np.bitwise_xor(a, b)].sum())


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a Bernoulli proportion."""
    if trials <= 0:
        return (0.0, 1.0)
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = p + z2 / (2.0 * trials)
    half = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
    return ((center - half) / denom, (center + half) / denom)
