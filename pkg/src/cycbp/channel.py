"""BPSK modulation over AWGN, with rate-adjusted (Eb/N0) SNR bookkeeping.

Bits map 0 -> +1, 1 -> -1; the receiver sees y = symbol + sigma * N(0,1)
and the per-bit LLR is 2*y/sigma^2 (log P(y|0)/P(y|1), positive favoring
bit 0).  "SNR" throughout the package means Eb/N0 in dB with the code-rate
adjustment sigma^2 = 1 / (2 * (k/n) * 10^(SNR/10)); all absolute error-rate
comparisons hinge on this normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def snr_to_sigma(snr_db: float, rate: float) -> float:
    """Noise standard deviation for a given Eb/N0 (dB) and code rate k/n."""
    if rate <= 0:
        raise ValueError("code rate must be positive")
    return float(np.sqrt(1.0 / (2.0 * rate * 10.0 ** (snr_db / 10.0))))


@dataclass(frozen=True)
class ChannelSample:
    """One transmitted frame and everything the decoder needs about it."""

    bits: np.ndarray       # codeword, shape (n,)
    symbols: np.ndarray    # BPSK symbols +-1
    received: np.ndarray   # symbols + noise
    llr: np.ndarray        # 2 * received / sigma^2
    snr_db: float
    sigma: float


def sample(code, codeword, snr_db: float, rng: np.random.Generator) -> ChannelSample:
    """Transmit one codeword of `code` at the given SNR."""
    bits = np.asarray(codeword, dtype=np.uint8)
    if bits.shape != (code.n,):
        raise ValueError(f"codeword must have length {code.n}")
    sigma = snr_to_sigma(snr_db, code.rate)
    symbols = 1.0 - 2.0 * bits
    received = symbols + sigma * rng.standard_normal(code.n)
    llr = 2.0 * received / sigma**2
    return ChannelSample(bits, symbols, received, llr, snr_db, sigma)


def sample_llrs(codewords: np.ndarray, snr_db: float, rate: float,
                rng: np.random.Generator) -> np.ndarray:
    """Batched LLRs for a (batch, n) block of codewords at one SNR."""
    bits = np.asarray(codewords, dtype=np.uint8)
    sigma = snr_to_sigma(snr_db, rate)
    received = (1.0 - 2.0 * bits) + sigma * rng.standard_normal(bits.shape)
    return 2.0 * received / sigma**2


def stream_rng(seed: int, stream_id: int) -> np.random.Generator:
    """Independent, reproducible RNG stream for worker `stream_id`.

    Uses numpy's SeedSequence keyed on (seed, stream_id), so streams can be
    drawn in any order or in parallel without changing their contents.
    """
    return np.random.default_rng(np.random.SeedSequence([seed, stream_id]))
