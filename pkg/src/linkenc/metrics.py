"""Security and throughput measures, analytic and measured.

Analytic side: the per-block survival probability (1-p)^N, the linearized
per-frame throughput R*(1 - N*p) normalized by the top rate, normalized
security log2(N)/log2(N_max), and the adversary-exposure fraction. Measured
side: goodput counted from actual decryption, a block being good only if it
decrypts bit-exactly (padding included).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _lengths_of(allocation) -> np.ndarray:
    arr = np.asarray(getattr(allocation, "lengths", allocation), dtype=float)
    return np.atleast_1d(arr)


def _bers_of(trace) -> np.ndarray:
    arr = np.asarray(getattr(trace, "ber", trace), dtype=float)
    return np.atleast_1d(arr)


def _rate_weights(rates, n: int) -> np.ndarray:
    if rates is None:
        return np.ones(n)
    r = np.atleast_1d(np.asarray(rates, dtype=float))
    if r.size == 1:
        r = np.full(n, float(r[0]))
    if r.size != n:
        raise ValueError(f"rates length {r.size} does not match {n} frames")
    if np.any(r <= 0):
        raise ValueError("transmission rates must be positive")
    return r / r.max()


def analytic_block_throughput(ber, n_bits):
    """Probability that an N-bit block crosses the channel unharmed: (1-p)^N."""
    return (1.0 - np.asarray(ber, dtype=float)) ** np.asarray(n_bits, dtype=float)


def message_throughput(allocation, trace, rates=None) -> float:
    """Linearized normalized message throughput, mean of R_i*(1 - N_i*P_i)/R_max.

    Each per-frame term is floored at zero: the linearization is only valid
    for N*p well below 1 and goes negative outside that regime.
    """
    lengths = _lengths_of(allocation)
    bers = _bers_of(trace)
    if lengths.shape != bers.shape:
        raise ValueError(f"allocation has {lengths.size} frames but trace has {bers.size}")
    weights = _rate_weights(rates, lengths.size)
    per_frame = np.maximum(1.0 - lengths * bers, 0.0)
    return float((weights * per_frame).mean())


def empirical_throughput(originals, decrypted, allocation, rates=None) -> float:
    """Measured normalized throughput from actual decryption.

    originals/decrypted are per-frame zero-padded bit sequences; the block
    structure comes from the allocation's per-frame lengths. A block counts
    only if every bit, padding included, came back exact.
    """
    lengths = _lengths_of(allocation).astype(int)
    if len(originals) != len(decrypted) or len(originals) != lengths.size:
        raise ValueError(f"got {len(originals)} original / {len(decrypted)} decrypted frames "
                         f"for an allocation of {lengths.size}")
    weights = _rate_weights(rates, lengths.size)
    goodput = np.empty(lengths.size)
    for i, (orig, dec) in enumerate(zip(originals, decrypted)):
        o = np.asarray(orig, dtype=np.uint8)
        d = np.asarray(dec, dtype=np.uint8)
        n = lengths[i]
        if o.size != d.size or o.size % n:
            raise ValueError(f"frame {i}: {o.size} original vs {d.size} decrypted bits, "
                             f"block length {n}")
        if o.size == 0:
            goodput[i] = 1.0
            continue
        good = (o.reshape(-1, n) == d.reshape(-1, n)).all(axis=1)
        goodput[i] = good.mean()
    return float((weights * goodput).mean())


def security_level(n_bits, n_max: int):
    """Normalized security of a block length: log2(N)/log2(N_max)."""
    return np.log2(np.asarray(n_bits, dtype=float)) / math.log2(n_max)


@dataclass(frozen=True)
class AdversaryModel:
    """Discrete pmf over the largest block length the adversary can crack."""

    strengths: tuple  # bits, ascending
    probs: tuple

    def __post_init__(self):
        s = np.asarray(self.strengths, dtype=float)
        p = np.asarray(self.probs, dtype=float)
        if s.size == 0 or s.size != p.size:
            raise ValueError("adversary pmf needs matching, non-empty strengths and probs")
        if np.any(p < 0):
            raise ValueError("adversary probabilities must be non-negative")
        if abs(p.sum() - 1.0) > 1e-9:
            raise ValueError(f"adversary probabilities sum to {p.sum()}, not 1")

    @classmethod
    def geometric_tail(cls, strengths) -> "AdversaryModel":
        """Placeholder pmf over candidate strengths: P(A=a_k) proportional to 2^-k,
        strongest adversaries exponentially least likely."""
        s = sorted(int(v) for v in strengths)
        w = np.array([2.0 ** -(k + 1) for k in range(len(s))])
        w /= w.sum()
        return cls(strengths=tuple(s), probs=tuple(w))


def vulnerability(allocation, adversary: AdversaryModel, weights=None) -> float:
    """Expected fraction of the message an adversary decrypts.

    For each strength a_k, the exposed fraction is the share of message bits
    carried in frames whose block length is <= a_k; the result averages those
    fractions under the adversary pmf. weights defaults to equal frame sizes.
    """
    lengths = _lengths_of(allocation)
    if weights is None:
        w = np.ones(lengths.size)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != lengths.shape:
            raise ValueError(f"weights shape {w.shape} does not match {lengths.shape}")
    total = w.sum()
    phi = 0.0
    for a, pa in zip(adversary.strengths, adversary.probs):
        phi += pa * (w[lengths <= a].sum() / total)
    return float(phi)
