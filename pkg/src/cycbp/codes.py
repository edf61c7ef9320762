"""Construction of BCH and punctured Reed-Muller codes of length 2^m - 1.

A cyclic code here carries its generator polynomial g, parity polynomial
h = (x^n + 1)/g, the k x n band generator matrix, the standard
(n-k) x n parity check matrix, and the redundant n x n circulant parity
check matrix whose rows are all n cyclic shifts of the first row.
"""

from __future__ import annotations

import re

import numpy as np

from .galois import BinaryPoly, GaloisField, field_new, minimal_polynomial, poly_divide, poly_lcm


class CodeConstructionError(ValueError):
    """Raised when the requested code parameters cannot be realized."""


class CyclicCode:
    """A binary cyclic code with its polynomials and parity-check matrices.

    Immutable after construction.  ``kind`` is "BCH" or "PRM"; ``param`` is
    the designed-distance parameter delta for BCH and the order r for PRM.
    """

    def __init__(self, field: GaloisField, kind: str, param: int, g: BinaryPoly):
        n = field.n
        if not 0 < g.degree < n:
            raise CodeConstructionError(
                f"generator degree {g.degree} must lie strictly between 0 and n={n}"
            )
        x_n_1 = BinaryPoly((1 << n) | 1)
        h, rem = poly_divide(x_n_1, g)
        if not rem.is_zero():
            raise AssertionError("generator polynomial does not divide x^n + 1")

        self.field = field
        self.kind = kind
        self.param = param
        self.n = n
        self.k = n - g.degree
        self.g = g
        self.h = h

        self.G = _band_matrix(g.coeffs(), self.k, n)
        h_rev = h.coeffs()[::-1]  # (h_k, ..., h_1, h_0)
        self.H_std = _band_matrix(h_rev, n - self.k, n)
        first_row = np.zeros(n, dtype=np.uint8)
        first_row[: len(h_rev)] = h_rev
        self.H_cyc = _circulant(first_row)

    @property
    def name(self) -> str:
        return f"{self.kind}({self.n},{self.k})"

    @property
    def rate(self) -> float:
        return self.k / self.n

    def is_codeword(self, bits) -> bool:
        """True iff H_std * bits^T = 0 over GF(2)."""
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.shape != (self.n,):
            raise ValueError(f"expected {self.n} bits, got shape {bits.shape}")
        return not np.any(self.H_std @ bits & 1)

    def syndromes(self, words: np.ndarray) -> np.ndarray:
        """Batch syndrome check: True per row iff the row is a codeword."""
        words = np.atleast_2d(np.asarray(words, dtype=np.uint8))
        return ~np.any((words @ self.H_std.T) & 1, axis=1)

    def random_codewords(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Sample codewords by spanning rows of G with random messages."""
        msgs = rng.integers(0, 2, size=(count, self.k), dtype=np.uint8)
        return (msgs @ self.G) & 1

    def __repr__(self) -> str:
        return f"CyclicCode({self.name}, g={self.g!r})"


def _band_matrix(row, rows: int, n: int) -> np.ndarray:
    """rows x n matrix whose i-th row is `row` shifted right by i."""
    out = np.zeros((rows, n), dtype=np.uint8)
    for i in range(rows):
        out[i, i : i + len(row)] = row
    return out


def _circulant(first_row: np.ndarray) -> np.ndarray:
    n = len(first_row)
    out = np.empty((n, n), dtype=np.uint8)
    for i in range(n):
        out[i] = np.roll(first_row, i)
    return out


def bch_code(m: int, delta: int) -> CyclicCode:
    """BCH code of length 2^m - 1 and designed distance 2*delta + 1.

    The generator polynomial is the lcm of the minimal polynomials of
    alpha^1, alpha^3, ..., alpha^(2*delta - 1).
    """
    if m < 3:
        raise CodeConstructionError(f"BCH construction needs m >= 3, got {m}")
    if delta < 1:
        raise CodeConstructionError(f"designed-distance parameter delta={delta} must be >= 1")
    field = field_new(m)
    if 2 * delta - 1 > field.n - 1:
        raise CodeConstructionError(f"delta={delta} too large for n={field.n}")
    mps = [minimal_polynomial(field, 2 * i - 1) for i in range(1, delta + 1)]
    g = poly_lcm(mps)
    if g.degree >= field.n:
        raise CodeConstructionError(f"delta={delta} yields degenerate generator for n={field.n}")
    return CyclicCode(field, "BCH", delta, g)


def prm_code(m: int, r: int) -> CyclicCode:
    """Punctured Reed-Muller code of order r and length 2^m - 1.

    The generator polynomial is the lcm of the minimal polynomials of
    alpha^j over all j whose binary weight lies in [1, m - r - 1]; the
    dimension comes out to sum_{i<=r} C(m, i).
    """
    if not 1 <= r <= m - 2:
        raise CodeConstructionError(f"PRM order r={r} outside [1, {m - 2}] for m={m}")
    field = field_new(m)
    w_hi = m - r - 1
    js = [j for j in range(1, field.n) if 1 <= j.bit_count() <= w_hi]
    g = poly_lcm([minimal_polynomial(field, j) for j in js])
    return CyclicCode(field, "PRM", r, g)


def generator_matrix(code: CyclicCode) -> np.ndarray:
    """The k x n band matrix with row i holding g shifted right by i."""
    return code.G


def standard_parity_matrix(code: CyclicCode) -> np.ndarray:
    """The (n-k) x n band matrix built from reversed h coefficients."""
    return code.H_std


def cyclic_parity_matrix(code: CyclicCode) -> np.ndarray:
    """The n x n circulant of all n cyclic right shifts of H_std's first row."""
    return code.H_cyc


def random_extended_matrix(code: CyclicCode, seed: int) -> np.ndarray:
    """H_std extended with k random nonzero combinations of its rows.

    The appended rows are parity checks drawn uniformly from the dual code's
    row space minus zero; deterministic for a fixed seed.  Only used for the
    matrix-shape ablation.
    """
    rng = np.random.default_rng(seed)
    extra = np.empty((code.k, code.n), dtype=np.uint8)
    for i in range(code.k):
        while True:
            combo = rng.integers(0, 2, size=code.n - code.k, dtype=np.uint8)
            if combo.any():
                break
        extra[i] = (combo @ code.H_std) & 1
    return np.vstack([code.H_std, extra])


def is_codeword(code: CyclicCode, bits) -> bool:
    return code.is_codeword(bits)


_NAME_RE = re.compile(r"^(BCH|PRM)\((\d+),(\d+)\)$")

# n = 2^m - 1 for the supported field sizes
_LENGTH_TO_M = {(1 << m) - 1: m for m in range(3, 11)}


def code_from_name(name: str) -> CyclicCode:
    """Resolve "BCH(n,k)" / "PRM(n,k)" by searching the free parameter.

    The BCH designed distance (or PRM order) realizing a given dimension is
    not part of the name, so delta (or r) is swept until k matches.
    """
    match = _NAME_RE.match(name.replace(" ", ""))
    if not match:
        raise CodeConstructionError(f"unparseable code name {name!r}; want BCH(n,k) or PRM(n,k)")
    kind, n, k = match.group(1), int(match.group(2)), int(match.group(3))
    if n not in _LENGTH_TO_M:
        raise CodeConstructionError(f"length {n} is not 2^m - 1 for m in [3, 10]")
    m = _LENGTH_TO_M[n]
    if kind == "BCH":
        delta = 1
        while True:
            try:
                code = bch_code(m, delta)
            except CodeConstructionError:
                break
            if code.k == k:
                return code
            if code.k < k:
                break
            delta += 1
    else:
        for r in range(1, m - 1):
            code = prm_code(m, r)
            if code.k == k:
                return code
    raise CodeConstructionError(f"no {kind} code of length {n} has dimension {k}")
