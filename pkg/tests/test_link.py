import math

import pytest
from scipy.stats import binom

from scmodem.channel import ChannelSpec
from scmodem.link import LinkConfig, ber_sweep, run_link


def test_noiseless_chain_is_lossless():
    rep = run_link(LinkConfig(n_frames=100, channel=None, seed=0))
    assert rep.sync_acquired
    assert rep.frames_detected == 100 and rep.frames_missed == 0
    assert rep.ber_raw == 0.0 and rep.ber_coded == 0.0 and rep.fer == 0.0
    assert rep.errors_corrected_hist == {0: 100}


def test_lossless_across_configs():
    for preamble, k, s in [
        (b"\x1a\xcf\xfc\x1d", 64, 28),
        (b"\xde\xad\xbe\xef", 1, 32),
        (b"\x0f\xf0\xaa\x55", 200, 16),
    ]:
        rep = run_link(LinkConfig(n_frames=20, preamble=preamble, extra_k=k, threshold=s, seed=3))
        assert rep.fer == 0.0 and rep.ber_raw == 0.0


def test_determinism():
    cfg = LinkConfig(n_frames=50, channel=ChannelSpec("awgn", ebno_db=7.0), coding=True, seed=11)
    assert run_link(cfg) == run_link(cfg)


def test_conservation_and_report_bounds():
    cfg = LinkConfig(n_frames=80, channel=ChannelSpec("awgn", ebno_db=5.0), coding=True, seed=4)
    rep = run_link(cfg)
    assert rep.frames_sent == rep.frames_detected + rep.frames_missed
    for rate in (rep.ber_raw, rep.ber_coded, rep.fer):
        assert 0.0 <= rate <= 1.0


def test_validates_n_frames():
    with pytest.raises(ValueError):
        run_link(LinkConfig(n_frames=0))


def test_awgn_uncoded_ber_matches_closed_form():
    cfg = LinkConfig(
        n_frames=1000, channel=ChannelSpec("awgn", ebno_db=8.0), coding=False, seed=5
    )
    rep = run_link(cfg)
    p = 0.5 * math.exp(-(10**0.8))
    sigma = math.sqrt(p * (1 - p) * rep.n_raw_bits)
    assert abs(rep.n_raw_bit_errors - p * rep.n_raw_bits) <= 3 * sigma


def test_bsc_coded_fer_matches_binomial_tail():
    # expected byte errors per codeword ~2 at p = 1e-3, well inside the
    # 8-byte capacity; frame errors follow the binomial tail P(>8 bad bytes)
    p = 1e-3
    n_frames = 20000
    rep = run_link(LinkConfig(n_frames=n_frames, channel=ChannelSpec("bsc", p=p), seed=6))
    p_byte = 1 - (1 - p) ** 8
    q = binom.sf(8, 255, p_byte)
    sigma = math.sqrt(q * (1 - q) / n_frames)
    assert rep.frames_detected == n_frames
    assert abs(rep.fer - q) <= 4 * sigma
    assert rep.uncorrectable_frames == rep.frame_errors


def test_multipath_noiseless_is_error_free():
    cfg = LinkConfig(
        n_frames=30, channel=ChannelSpec("multipath", taps=(1, 0.2j)), coding=False, seed=7
    )
    rep = run_link(cfg)
    assert rep.ber_raw == 0.0 and rep.fer == 0.0


def test_redetect_mode_clean_channel():
    rep = run_link(LinkConfig(n_frames=30, seed=8, redetect=True))
    assert rep.frames_detected == 30 and rep.fer == 0.0


def test_sync_never_acquired_reports_unavailable():
    # a frame of pure noise at an exact-match threshold cannot sync
    cfg = LinkConfig(
        n_frames=2, channel=ChannelSpec("bsc", p=0.5, seed=0), threshold=32, seed=9
    )
    rep = run_link(cfg)
    assert not rep.sync_acquired
    assert rep.frames_detected == 0
    assert rep.ber_raw is None and rep.ber_coded is None and rep.fer is None


def test_ber_sweep_monotone_and_coding_gain():
    base = LinkConfig(n_frames=400, coding=False, seed=10)
    pts = ber_sweep(base, [4, 6, 8])
    bers = [p.ber for p in pts]
    assert bers == sorted(bers, reverse=True)
    for p in pts:
        q = 0.5 * math.exp(-(10 ** (p.ebno_db / 10)))
        sigma = math.sqrt(q * (1 - q) / p.n_bits)
        assert abs(p.ber - q) <= 3 * sigma
    coded = ber_sweep(LinkConfig(n_frames=400, coding=True, seed=10), [8])
    # waterfall region: raw BER ~1e-3, RS wipes nearly everything
    assert coded[0].ber < pts[-1].ber
