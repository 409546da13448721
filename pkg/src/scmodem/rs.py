"""Reed-Solomon (255, 239) codec over GF(256), 8-byte correction capacity.

Systematic encoding by polynomial division; decoding via syndromes,
Berlekamp-Massey, Chien search and Forney's formula.  Generator roots are
alpha^1 .. alpha^16 with alpha = 0x02.  Block (vectorized) variants of the
encoder and syndrome computation are provided for the Monte Carlo harnesses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf256 import (
    EXP_TABLE,
    GF_EXP,
    GF_LOG,
    LOG_TABLE,
    ORDER,
    gf_inv,
    gf_mul,
    poly_mul,
)

N = 255
K = 239
PARITY = N - K  # 16
T = PARITY // 2  # 8
FIRST_ROOT = 1  # generator roots alpha^FIRST_ROOT .. alpha^(FIRST_ROOT+15)


def _generator_poly() -> list[int]:
    g = [1]
    for i in range(FIRST_ROOT, FIRST_ROOT + PARITY):
        g = poly_mul(g, [1, EXP_TABLE[i]])
    return g


GENERATOR = _generator_poly()  # monic, degree 16, descending order

# log of the non-leading generator coefficients, used by the encoders
_GEN_LOG = [LOG_TABLE[c] for c in GENERATOR[1:]]

# _SYND_LOGPOW[j, i] = log(alpha^((j+1) * deg(i))) with byte i carrying x^(254-i)
_SYND_LOGPOW = np.array(
    [[((j + 1) * (N - 1 - i)) % ORDER for i in range(N)] for j in range(PARITY)],
    dtype=np.int64,
)

_CHIEN_K = np.arange(ORDER, dtype=np.int64)


@dataclass(frozen=True)
class DecodeOutcome:
    corrected_data: bytes
    errors_corrected: int
    uncorrectable: bool


def rs_encode(data: bytes) -> bytes:
    """Encode 239 data bytes into a systematic 255-byte codeword."""
    if len(data) != K:
        raise ValueError(f"data must be exactly {K} bytes, got {len(data)}")
    rem = [0] * PARITY
    for byte in data:
        fb = byte ^ rem[0]
        rem = rem[1:] + [0]
        if fb:
            lf = LOG_TABLE[fb]
            for j in range(PARITY):
                rem[j] ^= EXP_TABLE[lf + _GEN_LOG[j]]
    return bytes(data) + bytes(rem)


def rs_encode_block(data: np.ndarray) -> np.ndarray:
    """Encode an (n, 239) uint8 array into an (n, 255) codeword array."""
    data = np.asarray(data, dtype=np.uint8)
    if data.ndim != 2 or data.shape[1] != K:
        raise ValueError(f"data must have shape (n, {K})")
    n = data.shape[0]
    rem = np.zeros((n, PARITY), dtype=np.uint8)
    for i in range(K):
        fb = rem[:, 0] ^ data[:, i]
        rem[:, :-1] = rem[:, 1:]
        rem[:, -1] = 0
        nz = np.nonzero(fb)[0]
        if nz.size:
            lf = GF_LOG[fb[nz]]
            for j in range(PARITY):
                rem[nz, j] ^= GF_EXP[lf + _GEN_LOG[j]]
    return np.hstack([data, rem])


def syndromes_block(codewords: np.ndarray) -> np.ndarray:
    """Syndromes S_1..S_16 for each row of an (n, 255) uint8 array."""
    cw = np.asarray(codewords, dtype=np.uint8)
    if cw.ndim != 2 or cw.shape[1] != N:
        raise ValueError(f"codewords must have shape (n, {N})")
    zero = cw == 0
    logs = GF_LOG[cw]
    out = np.zeros((cw.shape[0], PARITY), dtype=np.uint8)
    for j in range(PARITY):
        term = GF_EXP[logs + _SYND_LOGPOW[j]]
        term[zero] = 0
        out[:, j] = np.bitwise_xor.reduce(term, axis=1)
    return out


def syndromes(received: bytes | np.ndarray) -> list[int]:
    arr = np.frombuffer(bytes(received), dtype=np.uint8)
    return [int(s) for s in syndromes_block(arr[None, :])[0]]


def _berlekamp_massey(synd: list[int]) -> tuple[list[int], int]:
    """Error-locator polynomial (ascending coefficients) and its degree bound L."""
    c = [1]
    b = [1]
    L = 0
    m = 1
    bb = 1
    for n in range(len(synd)):
        d = synd[n]
        for i in range(1, L + 1):
            if i < len(c):
                d ^= gf_mul(c[i], synd[n - i])
        if d == 0:
            m += 1
            continue
        coef = gf_mul(d, gf_inv(bb))
        if 2 * L <= n:
            t = c[:]
            need = len(b) + m
            if len(c) < need:
                c = c + [0] * (need - len(c))
            for i, bi in enumerate(b):
                if bi:
                    c[i + m] ^= gf_mul(coef, bi)
            L = n + 1 - L
            b = t
            bb = d
            m = 1
        else:
            need = len(b) + m
            if len(c) < need:
                c = c + [0] * (need - len(c))
            for i, bi in enumerate(b):
                if bi:
                    c[i + m] ^= gf_mul(coef, bi)
            m += 1
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c, L


def _chien_roots(lam: list[int]) -> list[int]:
    """Exponents k with Lambda(alpha^k) = 0, evaluated over all 255 points."""
    acc = np.zeros(ORDER, dtype=np.uint8)
    for i, ci in enumerate(lam):
        if ci:
            acc ^= GF_EXP[(LOG_TABLE[ci] + (_CHIEN_K * i) % ORDER)]
    return [int(k) for k in np.nonzero(acc == 0)[0]]


def _forney(synd: list[int], lam: list[int], root_exps: list[int]) -> list[int]:
    """Error magnitudes for each located root, first generator root = alpha^1."""
    # Omega(x) = S(x) * Lambda(x) mod x^16, all ascending order
    omega = [0] * PARITY
    for i, si in enumerate(synd):
        if si == 0:
            continue
        for j, cj in enumerate(lam):
            if cj and i + j < PARITY:
                omega[i + j] ^= gf_mul(si, cj)
    # formal derivative keeps odd-power terms only (characteristic 2)
    deriv = [lam[j] if j % 2 == 1 else 0 for j in range(1, len(lam))]
    mags = []
    for k in root_exps:
        x_inv = EXP_TABLE[k]
        num = 0
        for j in range(PARITY - 1, -1, -1):
            num = gf_mul(num, x_inv) ^ omega[j]
        den = 0
        for j in range(len(deriv) - 1, -1, -1):
            den = gf_mul(den, x_inv) ^ deriv[j]
        if den == 0:
            return []
        mags.append(gf_mul(num, gf_inv(den)))
    return mags


def rs_decode(received: bytes | np.ndarray) -> DecodeOutcome:
    """Bounded-distance decode of a 255-byte word.

    Corrects up to 8 byte errors.  Uncorrectable words are flagged and the
    data field is passed through unchanged.
    """
    raw = bytes(received)
    if len(raw) != N:
        raise ValueError(f"received word must be exactly {N} bytes, got {len(raw)}")
    arr = np.frombuffer(raw, dtype=np.uint8).copy()
    synd = [int(s) for s in syndromes_block(arr[None, :])[0]]
    if not any(synd):
        return DecodeOutcome(raw[:K], 0, False)

    def failed() -> DecodeOutcome:
        return DecodeOutcome(raw[:K], 0, True)

    lam, L = _berlekamp_massey(synd)
    if L > T or L == 0 or len(lam) - 1 != L:
        return failed()
    roots = _chien_roots(lam)
    if len(roots) != L:
        return failed()
    mags = _forney(synd, lam, roots)
    if len(mags) != L or any(m == 0 for m in mags):
        return failed()
    for k, m in zip(roots, mags):
        # root alpha^k is X^-1, so the error sits at degree (-k) mod 255
        deg = (-k) % ORDER
        arr[N - 1 - deg] ^= m
    if syndromes_block(arr[None, :])[0].any():
        return failed()
    return DecodeOutcome(arr[:K].tobytes(), L, False)
