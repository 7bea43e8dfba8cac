"""Per-frame channel states (SNR -> bit error probability) and the memoryless
bit-error channel itself.

The trace for a whole transmission is generated up front: block fading with
channel state known ahead of time. Randomness comes from numpy Generators;
callers that need scheduling-independent reproducibility key one substream per
frame via substream().
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

MODELS = ("awgn-bpsk", "rayleigh-bpsk", "table")


@dataclass(frozen=True)
class ChannelState:
    snr_db: float
    ber: float


@dataclass
class ChannelTrace:
    """Ordered per-frame channel states, known before transmission."""

    snr_db: np.ndarray
    ber: np.ndarray

    def __len__(self) -> int:
        return len(self.snr_db)

    def __getitem__(self, i: int) -> ChannelState:
        return ChannelState(float(self.snr_db[i]), float(self.ber[i]))

    @property
    def states(self) -> list[ChannelState]:
        return [self[i] for i in range(len(self))]


def substream(seed: int, *path: int) -> np.random.Generator:
    """Independent generator keyed by (seed, *path); same key, same stream."""
    return np.random.default_rng(tuple(int(v) for v in (seed, *path)))


def load_ber_table(path) -> tuple[np.ndarray, np.ndarray]:
    """Read "snr_db,ber" pairs, one per line, '#' comments allowed."""
    snrs, bers = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.split(",")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'snr_db,ber', got {line.strip()!r}")
            snrs.append(float(parts[0]))
            bers.append(float(parts[1]))
    if not snrs:
        raise ValueError(f"{path}: empty channel table")
    order = np.argsort(snrs)
    return np.asarray(snrs, dtype=float)[order], np.asarray(bers, dtype=float)[order]


def ber_from_snr(snr_db, model: str = "awgn-bpsk", table=None):
    """Bit error probability for a given SNR in dB.

    awgn-bpsk is Q(sqrt(2*gamma)) with gamma the linear SNR; rayleigh-bpsk is
    the fading average 0.5*(1 - sqrt(gamma/(1+gamma))); table interpolates a
    user-supplied (snr_db, ber) list and rejects out-of-range queries. All
    results are clamped to [0, 0.5].
    """
    snr = np.asarray(snr_db, dtype=float)
    if model == "awgn-bpsk":
        gamma = 10.0 ** (snr / 10.0)
        ber = 0.5 * erfc(np.sqrt(gamma))
    elif model == "rayleigh-bpsk":
        gamma = 10.0 ** (snr / 10.0)
        ber = 0.5 * (1.0 - np.sqrt(gamma / (1.0 + gamma)))
    elif model == "table":
        if table is None:
            raise ValueError("table model needs a (snr_db, ber) table")
        tab_snr, tab_ber = table
        if np.any(snr < tab_snr[0]) or np.any(snr > tab_snr[-1]):
            raise ValueError(f"snr outside table range [{tab_snr[0]}, {tab_snr[-1]}] dB")
        ber = np.interp(snr, tab_snr, tab_ber)
    else:
        raise ValueError(f"unknown channel model {model!r}; pick from {MODELS}")
    ber = np.clip(ber, 0.0, 0.5)
    return float(ber) if np.isscalar(snr_db) or np.ndim(snr_db) == 0 else ber


def transmit(bits, ber: float, rng: np.random.Generator) -> np.ndarray:
    """Flip each payload bit independently with probability ber.

    Header/control bits never pass through here; the framing layer keeps them
    on an error-free side channel.
    """
    if not 0.0 <= ber <= 1.0:
        raise ValueError(f"ber must be in [0, 1], got {ber}")
    arr = np.asarray(bits, dtype=np.uint8)
    flips = (rng.random(arr.shape) < ber).astype(np.uint8)
    return arr ^ flips


def generate_trace(n: int, snr_policy, model: str = "awgn-bpsk", rng=None, table=None) -> ChannelTrace:
    """Build an n-frame trace under one of three SNR policies.

    snr_policy is a tuple: ("constant", snr_db), ("explicit", [snr_db, ...]),
    or ("rayleigh", mean_snr_db). The rayleigh policy draws per-frame linear
    SNR exponentially around the given mean (flat fading) and maps each draw
    through the configured model, awgn-bpsk by default.
    """
    if n < 1:
        raise ValueError(f"trace needs at least one frame, got n={n}")
    kind, value = snr_policy
    if kind == "constant":
        snrs = np.full(n, float(value))
    elif kind == "explicit":
        snrs = np.asarray(value, dtype=float)
        if snrs.size == 0:
            raise ValueError("explicit SNR list is empty")
        if snrs.size != n:
            raise ValueError(f"explicit SNR list has {snrs.size} entries for n={n} frames")
    elif kind == "rayleigh":
        if rng is None:
            rng = np.random.default_rng()
        gamma_bar = 10.0 ** (float(value) / 10.0)
        gamma = np.maximum(rng.exponential(gamma_bar, size=n), 1e-300)
        snrs = 10.0 * np.log10(gamma)
    else:
        raise ValueError(f"unknown SNR policy {kind!r}")
    bers = np.atleast_1d(ber_from_snr(snrs, model=model, table=table))
    return ChannelTrace(snr_db=snrs, ber=bers)
