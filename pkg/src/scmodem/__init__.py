"""Single-carrier DBPSK baseband modem and link simulator.

Framing, scrambling, RS(255,239) coding, differential BPSK, channel models
and correlator-based joint frame/byte synchronization, with Monte Carlo
harnesses for BER, detection and false-alarm curves.
"""

from .channel import ChannelSpec, apply_awgn, apply_bsc, apply_multipath
from .framing import (
    DEFAULT_EXTRA_K,
    F1_MHZ,
    F2_MHZ,
    FRAME_BITS,
    FRAME_LEN,
    build_frame,
    parse_frame,
    simulate_fifo,
)
from .link import BerPoint, LinkConfig, LinkReport, ber_sweep, run_link
from .modem import (
    DiffDemod,
    WaveformConfig,
    diff_decode,
    diff_encode,
    diff_demod,
    map_bpsk,
    render_waveform,
)
from .rs import DecodeOutcome, rs_decode, rs_encode
from .scrambler import descramble, generate_sequence, scramble, sequence_bytes
from .sync import (
    DEFAULT_PREAMBLE,
    DEFAULT_THRESHOLD,
    SyncDecision,
    align,
    correlate,
    detect,
    detection_curve,
    false_alarm_curve,
    mcor,
    optimize_extra_byte,
)

__version__ = "0.1.0"
