"""End-to-end acceptance checks for the modem library.

Each test exercises one headline claim of the system and prints a single
``ACCEPTANCE n: PASS``/``FAIL`` line (run pytest with ``-s`` to see them).
"""

import math
import time

import numpy as np
import pytest
from scipy.stats import binom

from scmodem import framing, scrambler
from scmodem.channel import apply_awgn, apply_multipath
from scmodem.cli import main as cli_main
from scmodem.framing import (
    F1_MHZ,
    F2_MHZ,
    FRAME_BITS,
    READS_PER_FRAME,
    TICKS_PER_FRAME,
    build_frame,
    build_frames_block,
    parse_frame,
    simulate_fifo,
)
from scmodem.modem import diff_demod, diff_encode, map_bpsk
from scmodem.rs import K, N, rs_decode, rs_encode
from scmodem.sync import (
    DEFAULT_PREAMBLE,
    align,
    detect,
    detection_curve,
    false_alarm_curve,
    optimize_extra_byte,
)

from oracles import brute_best_k


def _verdict(n: int, ok: bool) -> None:
    print(f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'}")
    assert ok


def test_acceptance_1_rs_correction_capacity():
    rng = np.random.default_rng(101)
    trials = 1000
    ok = True
    for w in range(0, 17):
        failures = 0
        for _ in range(trials):
            data = rng.integers(0, 256, K, dtype=np.uint8).tobytes()
            cw = bytearray(rs_encode(data))
            pos = rng.choice(N, size=w, replace=False)
            for p in pos:
                cw[p] ^= int(rng.integers(1, 256))
            out = rs_decode(bytes(cw))
            if w <= 8:
                if out.uncorrectable or out.corrected_data != data:
                    failures += 1
            else:
                if not out.uncorrectable:
                    failures += 1
        if w <= 8:
            ok &= failures == 0
        else:
            ok &= failures <= trials // 100  # >= 99% flagged
    _verdict(1, ok)


def test_acceptance_2_chain_identity_all_offsets():
    rng = np.random.default_rng(102)
    per_offset = 1250  # 8 offsets x 1250 = 10^4 frames total
    ok = True
    for shift in range(8):
        data = rng.integers(0, 256, (per_offset, 239), dtype=np.uint8)
        frames = build_frames_block(data, DEFAULT_PREAMBLE, 64)
        bits = np.unpackbits(frames.reshape(-1))
        shifted = np.concatenate([np.full(shift, shift % 2, np.uint8), bits])
        dec = detect(shifted)
        ok &= dec.detected and dec.frame_start_bit == shift
        aligned = align(dec, shifted)
        for i in range(per_offset):
            raw = aligned[i * 260 : (i + 1) * 260]
            payload, outcome = parse_frame(raw, DEFAULT_PREAMBLE)
            ok &= payload == data[i].tobytes()
            ok &= outcome.errors_corrected == 0 and not outcome.uncorrectable
        if not ok:
            break
    _verdict(2, ok)


def test_acceptance_3_uncoded_dbpsk_awgn_ber():
    rng = np.random.default_rng(103)
    # sized so every point collects well over 100 error events
    sizing = {4.0: 200_000, 6.0: 500_000, 8.0: 1_000_000, 10.0: 6_000_000}
    ok = True
    for ebno_db, n in sizing.items():
        bits = rng.integers(0, 2, n, dtype=np.uint8)
        sym = apply_awgn(map_bpsk(diff_encode(bits)), ebno_db, seed=int(ebno_db))
        errors = int(np.count_nonzero(diff_demod(sym) != bits))
        p = 0.5 * math.exp(-(10 ** (ebno_db / 10)))
        sigma = math.sqrt(p * (1 - p) * n)
        ok &= errors >= 100
        ok &= abs(errors - p * n) <= 3 * sigma
    _verdict(3, ok)


def test_acceptance_4_detection_probability_vs_closed_form():
    ok = True
    n_trials = 20_000
    for p in (0.01, 0.05, 0.1):
        for s in (24, 28, 32):
            pts = detection_curve(
                p_list=[p], threshold=s, n_trials=n_trials, seed=1000 * s + int(p * 100)
            )
            q = float(binom.sf(s - 1, 32, 1 - p)) ** 2
            sigma = math.sqrt(q * (1 - q) / n_trials)
            ok &= abs(pts[0].estimate - q) <= max(3 * sigma, 1e-12)
    _verdict(4, ok)


def test_acceptance_5_false_alarm_curve():
    pts = false_alarm_curve(n_frames=10_000, seed=105)
    estimates = [p.estimate for p in pts]
    ok = len(pts) == 32
    ok &= all(a >= b for a, b in zip(estimates, estimates[1:]))
    ok &= estimates[-1] == 0.0  # S = 32: per-position rate 2^-64
    _verdict(5, ok)


def test_acceptance_6_extra_byte_optimizer_vs_brute_force():
    rng = np.random.default_rng(106)
    preambles = [DEFAULT_PREAMBLE] + [
        rng.integers(0, 256, 4, dtype=np.uint8).tobytes() for _ in range(100)
    ]
    t0 = time.perf_counter()
    choices = [optimize_extra_byte(p) for p in preambles]
    elapsed = time.perf_counter() - t0
    ok = elapsed < 1.0
    for pre, choice in zip(preambles, choices):
        bk, bm = brute_best_k(pre)
        ok &= (choice.k, choice.mcor) == (bk, bm)
    _verdict(6, ok)


def test_acceptance_7_extra_byte_serialization():
    frame = build_frame(bytes(239), DEFAULT_PREAMBLE, extra_k=64)
    body = scrambler.descramble(frame[4:])
    extra = body[-1]
    ok = extra == 0b01000000
    # MSB-first: d(8)..d(1) = [0 1 0 0 0 0 0 0], i.e. only d(7) set
    ok &= [(extra >> (8 - i)) & 1 for i in range(1, 9)] == [0, 1, 0, 0, 0, 0, 0, 0]
    _verdict(7, ok)


def test_acceptance_8_fifo_rates_and_stability():
    from fractions import Fraction

    ok = F2_MHZ == Fraction(875, 8)
    ok &= F1_MHZ == F2_MHZ * Fraction(239, 260)
    ok &= Fraction(READS_PER_FRAME, TICKS_PER_FRAME) == Fraction(239, 260)
    rep = simulate_fifo(n_frames=10_000)
    ok &= rep.underflow_count == 0 and rep.overflow_count == 0
    ok &= 0 < rep.min_occupancy and rep.max_occupancy < rep.depth
    _verdict(8, ok)


def test_acceptance_9_isi_power_quadratic_in_rho():
    rng = np.random.default_rng(109)
    rhos = [0.1, 0.2, 0.3]
    measured = []
    ok = True
    for rho in rhos:
        bits = rng.integers(0, 2, 100_000, dtype=np.uint8)
        sym = map_bpsk(diff_encode(bits)).astype(np.complex128)
        rx = apply_multipath(sym, [1, rho * np.exp(1j * np.pi / 2)])
        ok &= np.array_equal(diff_demod(rx)[: bits.size], bits)  # zero bit errors
        y = np.real(rx[1:] * np.conj(rx[:-1]))[: sym.size - 1]
        desired = np.real(sym[1:] * sym[:-1])
        resid = y - desired
        measured.append(math.sqrt(float(np.mean(resid[1:] ** 2))))
    c = sum(m / r**2 for m, r in zip(measured, rhos)) / len(rhos)
    for m, r in zip(measured, rhos):
        ok &= abs(m - c * r**2) / (c * r**2) < 0.10
    _verdict(9, ok)


def test_acceptance_10_cli_replay_determinism(tmp_path):
    ok = True
    base = tmp_path / "orig"
    ok &= cli_main([
        "ber", "--ebno-list", "5,7", "--frames", "30", "--seed", "42",
        "--out", str(base),
    ]) == 0
    reps = []
    for name in ("r1", "r2"):
        out = tmp_path / name
        ok &= cli_main(["replay", str(base / "manifest.json"), "--out", str(out)]) == 0
        reps.append(out)
    for fname in ("ber.csv", "manifest.json"):
        blobs = [(d / fname).read_bytes() for d in (base, *reps)]
        ok &= blobs[0] == blobs[1] == blobs[2]
    _verdict(10, ok)
