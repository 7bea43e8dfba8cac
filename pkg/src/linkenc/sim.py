"""Experiment orchestration: SNR sweeps comparing fixed and adaptive block
length selection in ECB/CBC, with CSV and tradeoff-curve emission.

The whole pipeline is a pure function of (config, seed): every random draw
comes from a substream keyed by (seed, stream tag, point index, frame index),
so results are byte-identical regardless of worker count or scheduling. The
sweep trace is treated as one message: the adaptive optimizer's geometric
mean spans all SNR points, which is what makes low-SNR frames get short
blocks and high-SNR frames long ones.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .adaptive import SecurityConstraint, select_adaptive, select_fixed
from .channel import MODELS, ChannelTrace, generate_trace, load_ber_table, substream, transmit
from .metrics import (
    AdversaryModel,
    empirical_throughput,
    message_throughput,
    security_level,
    vulnerability,
)
from .modes import (
    cbc_decrypt_frames,
    cbc_encrypt_frames,
    ecb_decrypt_frames,
    ecb_encrypt_frames,
)
from .rijndael import BLOCK_BITS_CHOICES, CipherParams, key_expand, key_states

# Substream tags: one namespace per kind of draw.
_TAG_TRACE, _TAG_KEY, _TAG_IV, _TAG_PT, _TAG_NOISE = range(5)

# The optimizer rejects zero error probabilities; noiseless frames are clamped
# to this floor before block-length selection (transmission still uses the
# true value).
BER_OPTIMIZER_FLOOR = 1e-12

CSV_COLUMNS = (
    "snr_db",
    "scheme",
    "mode",
    "mean_block_len_bits",
    "cipher_strength_bits",
    "throughput_analytic",
    "throughput_empirical",
    "security_norm",
    "vulnerability",
)

DEFAULT_TRADEOFF_LENGTHS = (1,) + tuple(range(16, 257, 16))


@dataclass
class ExperimentConfig:
    """Full description of one sweep run; validate() rejects bad fields."""

    mode: str = "ecb"
    scheme: str = "both"
    snr_min: float = 8.0
    snr_max: float = 16.0
    snr_step: float = 2.0
    frames: int = 200
    frame_bits: int = 4096
    s_req: float = 0.97
    allowed: Sequence[int] = (128, 160, 192, 224, 256)
    fixed_len: int = 128
    channel: str = "awgn-bpsk"
    channel_table: str | None = None
    snr_policy: str = "constant"
    rate: float = 1.0
    seed: int = 0
    out: str | None = None
    workers: int = 1
    ber_override: float | None = None

    def validate(self) -> None:
        if self.mode not in ("ecb", "cbc"):
            raise ValueError(f"mode: expected 'ecb' or 'cbc', got {self.mode!r}")
        if self.scheme not in ("fixed", "adaptive", "both"):
            raise ValueError(f"scheme: expected 'fixed', 'adaptive' or 'both', got {self.scheme!r}")
        if self.snr_step <= 0:
            raise ValueError(f"snr_step: must be > 0, got {self.snr_step}")
        if self.snr_max < self.snr_min:
            raise ValueError(f"snr_max: {self.snr_max} is below snr_min {self.snr_min}")
        if self.frames < 1:
            raise ValueError(f"frames: must be >= 1, got {self.frames}")
        allowed = tuple(self.allowed)
        if not allowed:
            raise ValueError("allowed: block length set is empty")
        bad = [n for n in allowed if n not in BLOCK_BITS_CHOICES]
        if bad:
            raise ValueError(f"allowed: unsupported block lengths {bad}; pick from {BLOCK_BITS_CHOICES}")
        if list(allowed) != sorted(set(allowed)):
            raise ValueError("allowed: block lengths must be ascending and unique")
        if self.fixed_len not in allowed:
            raise ValueError(f"fixed_len: {self.fixed_len} not in allowed set {allowed}")
        if self.frame_bits < max(allowed):
            raise ValueError(f"frame_bits: must be >= the largest allowed block ({max(allowed)}), "
                             f"got {self.frame_bits}")
        if not 0.0 < self.s_req <= 1.0:
            raise ValueError(f"s_req: must be in (0, 1], got {self.s_req}")
        if self.channel not in MODELS:
            raise ValueError(f"channel: unknown model {self.channel!r}; pick from {MODELS}")
        if self.channel == "table" and not self.channel_table:
            raise ValueError("channel_table: required when channel='table'")
        if self.snr_policy not in ("constant", "rayleigh"):
            raise ValueError(f"snr_policy: expected 'constant' or 'rayleigh', got {self.snr_policy!r}")
        if self.rate <= 0:
            raise ValueError(f"rate: must be > 0, got {self.rate}")
        if self.workers < 1:
            raise ValueError(f"workers: must be >= 1, got {self.workers}")
        if self.ber_override is not None and not 0.0 <= self.ber_override <= 1.0:
            raise ValueError(f"ber_override: must be in [0, 1], got {self.ber_override}")

    def snr_points(self) -> np.ndarray:
        return np.arange(self.snr_min, self.snr_max + 0.5 * self.snr_step, self.snr_step)

    def schemes(self) -> tuple[str, ...]:
        return ("fixed", "adaptive") if self.scheme == "both" else (self.scheme,)


@dataclass
class SweepRow:
    snr_db: float
    scheme: str
    mode: str
    mean_block_len_bits: float
    cipher_strength_bits: float
    throughput_analytic: float
    throughput_empirical: float
    security_norm: float
    vulnerability: float


@dataclass
class SweepReport:
    rows: list[SweepRow] = field(default_factory=list)

    def select(self, scheme: str | None = None, mode: str | None = None) -> list[SweepRow]:
        return [r for r in self.rows
                if (scheme is None or r.scheme == scheme) and (mode is None or r.mode == mode)]

    def csv_text(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for r in self.rows:
            lines.append(",".join([
                _fmt(r.snr_db), r.scheme, r.mode,
                _fmt(r.mean_block_len_bits), _fmt(r.cipher_strength_bits),
                _fmt(r.throughput_analytic), _fmt(r.throughput_empirical),
                _fmt(r.security_norm), _fmt(r.vulnerability),
            ]))
        return "\n".join(lines) + "\n"


def _fmt(x: float) -> str:
    return format(float(x), ".6g")


def _point_trace(config: ExperimentConfig, i: int, snr: float, table) -> ChannelTrace:
    trace = generate_trace(
        config.frames,
        (config.snr_policy, snr),
        model=config.channel,
        rng=substream(config.seed, _TAG_TRACE, i),
        table=table,
    )
    if config.ber_override is not None:
        trace = ChannelTrace(trace.snr_db, np.full(len(trace), float(config.ber_override)))
    return trace


def _run_cell(config: ExperimentConfig, i: int, snr: float, trace: ChannelTrace,
              lengths: np.ndarray, raw: np.ndarray, scheme: str,
              constraint: SecurityConstraint, adversary: AdversaryModel) -> SweepRow:
    """Encrypt, transmit and decrypt every frame of one (SNR point, scheme) cell."""
    n_frames = config.frames
    orig_bits: list = [None] * n_frames
    dec_bits: list = [None] * n_frames

    for length in np.unique(lengths):
        idx = np.flatnonzero(lengths == length)
        params = CipherParams.for_block_bits(int(length))
        bb = params.block_bytes
        blocks_per_frame = -(-config.frame_bits // int(length))
        padded_bits = blocks_per_frame * int(length)

        pts = np.zeros((idx.size, padded_bits), dtype=np.uint8)
        keys = np.empty((idx.size, params.nr + 1, 4, params.nb), dtype=np.uint8)
        ivs = np.zeros((idx.size, bb), dtype=np.uint8)
        for k, f in enumerate(idx):
            f = int(f)
            pts[k, :config.frame_bits] = substream(config.seed, _TAG_PT, i, f).integers(
                0, 2, config.frame_bits, dtype=np.uint8)
            key = substream(config.seed, _TAG_KEY, i, f).bytes(bb)
            keys[k] = key_states(key_expand(key, params), params)
            if config.mode == "cbc":
                ivs[k] = np.frombuffer(substream(config.seed, _TAG_IV, i, f).bytes(bb), dtype=np.uint8)

        pt_blocks = np.packbits(pts.reshape(idx.size, blocks_per_frame, int(length)), axis=2)
        if config.mode == "ecb":
            ct_blocks = ecb_encrypt_frames(pt_blocks, keys, params)
        else:
            ct_blocks = cbc_encrypt_frames(pt_blocks, keys, ivs, params)

        ct_bits = np.unpackbits(ct_blocks.reshape(idx.size, blocks_per_frame * bb), axis=1)
        rx_bits = np.empty_like(ct_bits)
        for k, f in enumerate(idx):
            rng = substream(config.seed, _TAG_NOISE, i, int(f))
            rx_bits[k] = transmit(ct_bits[k], float(trace.ber[int(f)]), rng)
        rx_blocks = np.packbits(rx_bits.reshape(idx.size, blocks_per_frame, int(length)), axis=2)

        if config.mode == "ecb":
            out_blocks = ecb_decrypt_frames(rx_blocks, keys, params)
        else:
            out_blocks = cbc_decrypt_frames(rx_blocks, keys, ivs, params)
        out_bits = np.unpackbits(out_blocks.reshape(idx.size, blocks_per_frame * bb), axis=1)

        for k, f in enumerate(idx):
            orig_bits[int(f)] = pts[k]
            dec_bits[int(f)] = out_bits[k]

    return SweepRow(
        snr_db=snr,
        scheme=scheme,
        mode=config.mode,
        mean_block_len_bits=float(lengths.mean()),
        cipher_strength_bits=float(np.rint(raw).mean()),
        throughput_analytic=message_throughput(lengths, trace.ber),
        throughput_empirical=empirical_throughput(orig_bits, dec_bits, lengths),
        security_norm=float(np.mean(security_level(lengths, constraint.n_max))),
        vulnerability=vulnerability(lengths, adversary),
    )


def run_sweep(config: ExperimentConfig) -> SweepReport:
    """Run the configured sweep; deterministic for a given (config, seed)."""
    config.validate()
    snrs = config.snr_points()
    table = load_ber_table(config.channel_table) if config.channel == "table" else None

    traces = [_point_trace(config, i, float(s), table) for i, s in enumerate(snrs)]

    # The optimizer sees the whole sweep as one message; its geometric mean of
    # error probabilities spans every point.
    constraint = SecurityConstraint(config.s_req, max(config.allowed))
    bers_opt = np.maximum(np.concatenate([t.ber for t in traces]), BER_OPTIMIZER_FLOOR)
    allocations = {}
    for s in config.schemes():
        if s == "adaptive":
            allocations[s] = select_adaptive(bers_opt, constraint, config.allowed)
        else:
            allocations[s] = select_fixed(bers_opt, config.fixed_len, constraint)

    adversary = AdversaryModel.geometric_tail(config.allowed)
    cells = [(i, s) for i in range(len(snrs)) for s in config.schemes()]

    def run(job):
        i, s = job
        alloc = allocations[s]
        window = slice(i * config.frames, (i + 1) * config.frames)
        return _run_cell(config, i, float(snrs[i]), traces[i],
                         alloc.lengths[window], alloc.raw[window], s, constraint, adversary)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(run, cells))
    else:
        rows = [run(c) for c in cells]

    report = SweepReport(rows=rows)
    if config.out:
        emit_csv(report, config.out)
    return report


def emit_csv(report: SweepReport, path) -> None:
    """Write the report as CSV, one row per (snr, scheme, mode)."""
    try:
        with open(path, "w", newline="") as fh:
            fh.write(report.csv_text())
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def emit_tradeoff_curve(ber: float, lengths=None, path=None, n_max: int | None = None,
                        svg_path=None) -> list[tuple[int, float, float]]:
    """Emit (N, normalized throughput, normalized security) triples.

    Throughput is (1-ber)^N and security log2(N)/log2(n_max); the two curves
    cross, which is the whole tradeoff. Writes CSV to `path` when given and
    optionally a small standalone SVG with both curves.
    """
    if not 0.0 < ber < 1.0:
        raise ValueError(f"ber must be in (0, 1), got {ber}")
    if lengths is None:
        lengths = DEFAULT_TRADEOFF_LENGTHS
    lens = sorted(int(v) for v in lengths)
    if any(v < 1 for v in lens):
        raise ValueError("block lengths must be >= 1")
    if n_max is None:
        n_max = max(lens)
    rows = [(n, float((1.0 - ber) ** n), float(np.log2(n) / np.log2(n_max))) for n in lens]
    if path is not None:
        try:
            with open(path, "w", newline="") as fh:
                fh.write("block_len_bits,throughput_norm,security_norm\n")
                for n, t, s in rows:
                    fh.write(f"{n},{_fmt(t)},{_fmt(s)}\n")
        except OSError as exc:
            raise OSError(f"cannot write curve to {path}: {exc}") from exc
    if svg_path is not None:
        _write_tradeoff_svg(rows, ber, svg_path)
    return rows


def _write_tradeoff_svg(rows, ber, path) -> None:
    width, height, margin = 640, 440, 60
    n_lo, n_hi = rows[0][0], rows[-1][0]

    def x(n):
        return margin + (n - n_lo) / (n_hi - n_lo) * (width - 2 * margin)

    def y(v):
        return height - margin - v * (height - 2 * margin)

    def poly(idx):
        return " ".join(f"{x(n):.1f},{y(r[idx]):.1f}" for r in rows for n in [r[0]])

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<polyline points="{poly(1)}" fill="none" stroke="crimson" stroke-width="2"/>',
        f'<polyline points="{poly(2)}" fill="none" stroke="steelblue" stroke-width="2"/>',
        f'<text x="{width / 2:.0f}" y="{height - margin / 3:.0f}" text-anchor="middle" font-size="14">block length (bits)</text>',
        f'<text x="{margin + 8}" y="{margin - 12}" font-size="14">normalized value, bit error {ber:g}</text>',
        f'<text x="{width - margin - 4}" y="{y(rows[-1][1]) - 8:.0f}" text-anchor="end" font-size="13" fill="crimson">throughput</text>',
        f'<text x="{width - margin - 4}" y="{y(rows[-1][2]) - 8:.0f}" text-anchor="end" font-size="13" fill="steelblue">security</text>',
        "</svg>",
    ]
    try:
        with open(path, "w") as fh:
            fh.write("\n".join(parts) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc}") from exc
