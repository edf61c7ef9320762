"""Affine-translation permutations and list decoding for extended codes.

Prepending an overall parity bit to an (n, k) BCH or punctured RM codeword
gives a codeword of the (n+1, k) extended code, which is invariant under
the affine group.  The list decoder uses the n+1 translations
sigma_j(v) = f^-1(f(v) + f(j)), where f maps index 0 to the zero field
element and index i to alpha^(i-1); every sigma_j is an involution in
characteristic 2.  Decoding runs each permuted LLR vector through the
inner decoder and keeps the most likely surviving candidate.
"""

from __future__ import annotations

import numpy as np

from .codes import CyclicCode
from .decoder import hard_decision
from .galois import GaloisField


class AffinePermutationSet:
    """The n+1 translation permutations sigma_0..sigma_n on {0, ..., n}.

    ``perms[j, v] = sigma_j(v)``; sigma_0 is the identity.  The set only
    depends on the code length (the field), not on the code dimension.
    """

    def __init__(self, field: GaloisField):
        n = field.n
        # f(0) = 0, f(i) = alpha^(i-1); a permutation of {0, .., n} onto the
        # field, so f_inv is its argsort-free inverse lookup.
        f = np.empty(n + 1, dtype=np.int64)
        f[0] = 0
        for i in range(1, n + 1):
            f[i] = field.antilog_table[i - 1]
        f_inv = np.empty(n + 1, dtype=np.int64)
        f_inv[f] = np.arange(n + 1)

        perms = np.empty((n + 1, n + 1), dtype=np.int64)
        for j in range(n + 1):
            perms[j] = f_inv[f ^ f[j]]

        self.m = field.m
        self.n = n
        self.f = f
        self.f_inv = f_inv
        self.perms = perms

    def __len__(self) -> int:
        return self.n + 1

    def sigma(self, j: int) -> np.ndarray:
        return self.perms[j]

    def inverse(self, j: int) -> np.ndarray:
        return np.argsort(self.perms[j])


def build_affine_set(field: GaloisField) -> AffinePermutationSet:
    """The permutation set S = {sigma_0, ..., sigma_n} for length 2^m - 1."""
    return AffinePermutationSet(field)


def extended_is_codeword(code: CyclicCode, ext_bits) -> bool | np.ndarray:
    """True iff bits 1..n form a codeword and bit 0 is their overall parity.

    Accepts a single (n+1,) word or a (batch, n+1) block.
    """
    arr = np.asarray(ext_bits, dtype=np.uint8)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.shape[1] != code.n + 1:
        raise ValueError(f"extended word must have length {code.n + 1}")
    inner_ok = code.syndromes(arr[:, 1:])
    parity_ok = (arr.sum(axis=1) & 1) == 0
    ok = inner_ok & parity_ok
    return bool(ok[0]) if single else ok


def list_decode(code: CyclicCode, perm_set: AffinePermutationSet, llr,
                ell: int, decoder_fn, drop_failed: bool = False) -> np.ndarray:
    """List decoding over ell affine translations of the extended word.

    1. prepend a dummy LLR L_0 = 0 for the unknown overall-parity bit;
    2. permute by sigma_0 .. sigma_(ell-1) (identity first, so the list
       decoder never does worse than the bare decoder on its own branch);
    3. run the inner decoder on positions 1..n of each permuted vector;
    4. hard-decide; any candidate that fails the parity-check test is
       replaced by the all-zero word (or dropped when ``drop_failed``);
    5. prepend the overall parity; 6. un-permute; 7. keep the candidate
    minimizing sum_v L_v * C_v (lowest branch index wins ties); 8. drop
    bit 0.

    ``decoder_fn`` maps a (batch, n) LLR block to output LLRs.  The
    all-zero fallback of step 4 is a valid codeword with metric 0, so with
    ``drop_failed`` unset it competes in step 7 exactly as specified.
    """
    if not 1 <= ell <= perm_set.n + 1:
        raise ValueError(f"list size {ell} outside [1, {perm_set.n + 1}]")
    if perm_set.n != code.n:
        raise ValueError("permutation set length does not match the code")
    arr = np.asarray(llr, dtype=np.float64)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    batch, n = arr.shape
    if n != code.n:
        raise ValueError(f"LLR length {n} != code length {code.n}")

    ext_llr = np.concatenate([np.zeros((batch, 1)), arr], axis=1)
    metrics = np.empty((ell, batch))
    candidates = np.empty((ell, batch, n + 1), dtype=np.uint8)
    for i in range(ell):
        sigma = perm_set.perms[i]
        permuted = ext_llr[:, sigma]
        bits = hard_decision(decoder_fn(permuted[:, 1:]))
        ok = code.syndromes(bits)
        bits[~ok] = 0
        parity = bits.sum(axis=1) & 1
        ext_bits = np.concatenate([parity[:, None].astype(np.uint8), bits], axis=1)
        inv = np.argsort(sigma)
        cand = ext_bits[:, inv]
        candidates[i] = cand
        metrics[i] = (ext_llr * cand).sum(axis=1)
        if drop_failed:
            metrics[i, ~ok] = np.inf

    best = np.argmin(metrics, axis=0)  # first minimum = lowest branch index
    chosen = candidates[best, np.arange(batch)]
    if drop_failed:
        # every branch failed: fall back to the all-zero word
        all_failed = np.isinf(metrics).all(axis=0)
        chosen[all_failed] = 0
    out = chosen[:, 1:]
    return out[0] if single else out
