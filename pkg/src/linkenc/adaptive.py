"""Block-length selection: the closed-form constrained optimizer, its
quantization onto the discrete cipher block sizes, and the fixed baseline.

The optimizer maximizes linearized throughput subject to a mean-security
constraint over the whole trace. Its closed form makes each raw length
inversely proportional to that frame's bit error probability,

    N_i = (geometric mean of the error weights / weight_i) * 2**(s_req*s_max),

with weight_i = P_i at a fixed transmission rate and R_i*P_i otherwise. The
unquantized lengths meet the security constraint with equality by
construction, which the tests assert as an algebraic identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LN2 = math.log(2.0)


@dataclass(frozen=True)
class SecurityConstraint:
    """Required mean normalized security and the block-length ceiling."""

    s_req: float
    n_max: int

    def __post_init__(self):
        if not 0.0 < self.s_req <= 1.0:
            raise ValueError(f"s_req must be in (0, 1], got {self.s_req}")
        if self.n_max < 2:
            raise ValueError(f"n_max must be at least 2 bits, got {self.n_max}")

    @property
    def s_max(self) -> float:
        return math.log2(self.n_max)


@dataclass
class Allocation:
    """Per-frame block-length decisions for one trace."""

    raw: np.ndarray       # unquantized optimal lengths, real bits
    lengths: np.ndarray   # quantized lengths from the allowed set
    constraint: SecurityConstraint

    @property
    def cipher_strength(self) -> np.ndarray:
        """Raw optimal length rounded to whole bits, per frame."""
        return np.rint(self.raw).astype(np.int64)

    @property
    def security(self) -> np.ndarray:
        """Per-frame normalized security of the quantized lengths."""
        return np.log2(self.lengths) / self.constraint.s_max

    @property
    def achieved_security(self) -> float:
        return required_security(self.lengths, self.constraint.n_max)

    def __len__(self) -> int:
        return len(self.lengths)


def _bers_of(trace) -> np.ndarray:
    arr = np.asarray(getattr(trace, "ber", trace), dtype=float)
    return np.atleast_1d(arr)


def required_security(lengths, n_max: int) -> float:
    """Mean of per-frame log2 block lengths, normalized by log2(n_max)."""
    arr = np.asarray(lengths, dtype=float)
    if arr.size == 0:
        raise ValueError("security of an empty length sequence is undefined")
    if np.any(arr <= 0):
        raise ValueError("block lengths must be positive")
    return float(np.log2(arr).mean() / math.log2(n_max))


def optimal_block_length(bers, constraint: SecurityConstraint, rates=None) -> np.ndarray:
    """Closed-form raw optimal block lengths for a trace of bit error rates.

    Computed in the log domain so the security identity holds to rounding
    error. Rejects any zero error probability: the geometric-mean ratio is
    undefined there, and callers are expected to clamp to a small floor first.
    """
    p = _bers_of(bers)
    if p.size == 0:
        raise ValueError("need at least one frame")
    if np.any(p <= 0.0):
        raise ValueError("degenerate channel: every bit error probability must be > 0 "
                         "(clamp noiseless frames to a small floor first)")
    if rates is not None:
        r = np.atleast_1d(np.asarray(rates, dtype=float))
        if r.shape != p.shape:
            raise ValueError(f"rates shape {r.shape} does not match {p.shape} frames")
        if np.any(r <= 0.0):
            raise ValueError("transmission rates must be positive")
        w = np.log(r) + np.log(p)
    else:
        w = np.log(p)
    log_n = w.mean() - w + constraint.s_req * constraint.s_max * LN2
    return np.exp(log_n)


def quantize(raw, allowed) -> np.ndarray:
    """Largest allowed length not exceeding each raw value, clamped at the ends."""
    allowed_arr = np.asarray(allowed, dtype=np.int64)
    if allowed_arr.size == 0:
        raise ValueError("allowed length set is empty")
    if np.any(np.diff(allowed_arr) <= 0):
        raise ValueError("allowed lengths must be sorted ascending without repeats")
    idx = np.searchsorted(allowed_arr, np.atleast_1d(np.asarray(raw, dtype=float)), side="right") - 1
    return allowed_arr[np.clip(idx, 0, allowed_arr.size - 1)]


def select_adaptive(trace, constraint: SecurityConstraint, allowed, rates=None) -> Allocation:
    """Channel-adaptive allocation: raw closed-form lengths, then quantization."""
    raw = optimal_block_length(trace, constraint, rates=rates)
    return Allocation(raw=raw, lengths=quantize(raw, allowed), constraint=constraint)


def select_fixed(trace, fixed_len: int, constraint: SecurityConstraint, rates=None) -> Allocation:
    """Fixed baseline: one length everywhere, with the per-frame raw strength
    still evaluated so the two schemes' strength columns are comparable."""
    raw = optimal_block_length(trace, constraint, rates=rates)
    lengths = np.full(raw.shape, int(fixed_len), dtype=np.int64)
    return Allocation(raw=raw, lengths=lengths, constraint=constraint)
