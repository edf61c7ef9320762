import math

import numpy as np
import pytest

from cycbp.codes import (
    CodeConstructionError,
    bch_code,
    code_from_name,
    cyclic_parity_matrix,
    generator_matrix,
    is_codeword,
    prm_code,
    random_extended_matrix,
    standard_parity_matrix,
)

TABLE1_CODES = [
    ("BCH(63,24)", 63, 24), ("BCH(63,36)", 63, 36), ("BCH(63,45)", 63, 45),
    ("BCH(127,36)", 127, 36), ("BCH(127,64)", 127, 64), ("BCH(127,99)", 127, 99),
    ("PRM(63,22)", 63, 22), ("PRM(63,42)", 63, 42),
    ("PRM(127,64)", 127, 64), ("PRM(127,99)", 127, 99),
]

FIG2_MATRIX = np.array([
    [1, 0, 1, 1, 1, 0, 0],
    [0, 1, 0, 1, 1, 1, 0],
    [0, 0, 1, 0, 1, 1, 1],
    [1, 0, 0, 1, 0, 1, 1],
    [1, 1, 0, 0, 1, 0, 1],
    [1, 1, 1, 0, 0, 1, 0],
    [0, 1, 1, 1, 0, 0, 1],
], dtype=np.uint8)


class TestHamming74:
    def test_parity_coefficients(self, code74):
        assert code74.h.coeffs()[::-1] == [1, 0, 1, 1, 1]  # (h_4..h_0)

    def test_standard_matrix_rows(self, code74):
        assert np.array_equal(standard_parity_matrix(code74), FIG2_MATRIX[:3])

    def test_cyclic_matrix_is_fig2(self, code74):
        assert np.array_equal(cyclic_parity_matrix(code74), FIG2_MATRIX)

    def test_cyclic_matrix_column_support(self, code74):
        support = [i + 1 for i in range(7) if code74.H_cyc[i, 0]]
        assert support == [1, 4, 5, 6]

    def test_generator_first_row(self, code74):
        assert generator_matrix(code74)[0].tolist() == [1, 1, 0, 1, 0, 0, 0]


class TestConstruction:
    @pytest.mark.parametrize("name,n,k", TABLE1_CODES)
    def test_table1_dimensions(self, name, n, k):
        code = code_from_name(name)
        assert (code.n, code.k) == (n, k)
        assert code.name == name

    @pytest.mark.parametrize("name,n,k", TABLE1_CODES)
    def test_polynomial_identities(self, name, n, k):
        code = code_from_name(name)
        assert code.g.degree == n - k
        assert code.h.degree == k
        prod = code.g * code.h
        assert prod.bits == (1 << n) | 1  # g * h = x^n + 1

    @pytest.mark.parametrize("name,n,k", TABLE1_CODES)
    def test_parity_orthogonality(self, name, n, k):
        code = code_from_name(name)
        assert not np.any((code.G @ code.H_std.T) & 1)
        assert not np.any((code.G @ code.H_cyc.T) & 1)

    def test_prm_dimension_identity(self):
        # k = sum_{i<=r} C(m, i) for every valid (m, r)
        for m in range(3, 8):
            for r in range(1, m - 1):
                code = prm_code(m, r)
                assert code.k == sum(math.comb(m, i) for i in range(r + 1))

    def test_generator_rank(self, code6336):
        rows = [int("".join(map(str, row)), 2) for row in code6336.G]
        rank = 0
        while rows:
            pivot = max(rows)
            if pivot == 0:
                break
            rank += 1
            top = pivot.bit_length()
            rows = [r ^ pivot if r.bit_length() == top else r for r in rows]
            rows = [r for r in rows if r]
        assert rank == code6336.k

    def test_cyclic_matrix_shift_structure(self, code6345):
        H = code6345.H_cyc
        for i in range(1, code6345.n):
            assert np.array_equal(H[i], np.roll(H[i - 1], 1))
        for j in range(1, code6345.n):
            assert np.array_equal(H[:, j], np.roll(H[:, j - 1], 1))

    def test_bch_delta_too_large(self):
        with pytest.raises(CodeConstructionError):
            bch_code(3, 4)

    def test_prm_r_out_of_range(self):
        with pytest.raises(CodeConstructionError):
            prm_code(6, 0)
        with pytest.raises(CodeConstructionError):
            prm_code(6, 5)

    def test_unknown_name(self):
        with pytest.raises(CodeConstructionError):
            code_from_name("BCH(63,37)")
        with pytest.raises(CodeConstructionError):
            code_from_name("LDPC(63,32)")


class TestCodewords:
    def test_all_zero_is_codeword(self, code6336):
        assert is_codeword(code6336, np.zeros(63, dtype=np.uint8))

    def test_generator_rows_are_codewords(self, code6336):
        for row in code6336.G:
            assert is_codeword(code6336, row)

    def test_single_flip_is_detected(self):
        # all listed codes have minimum distance >= 3, so one flipped bit
        # in a generator row can never land on another codeword
        rng = np.random.default_rng(23)
        for name, _, _ in TABLE1_CODES:
            code = code_from_name(name)
            word = code.G[0].copy()
            word[rng.integers(code.n)] ^= 1
            assert not is_codeword(code, word)

    def test_cyclic_shift_closure(self, code6345):
        rng = np.random.default_rng(17)
        words = code6345.random_codewords(200, rng)
        for shift in range(code6345.n):
            shifted = np.roll(words, shift, axis=1)
            assert bool(np.all(code6345.syndromes(shifted)))

    def test_every_cyclic_row_checks_g(self, code74):
        for row in code74.H_cyc:
            assert not np.any((code74.G @ row) & 1)

    def test_cyclic_rows_extend_standard(self, code6336):
        assert np.array_equal(code6336.H_cyc[: 63 - 36], code6336.H_std)


class TestRandomExtended:
    def test_rows_are_parity_checks(self, code6336):
        H = random_extended_matrix(code6336, seed=3)
        assert H.shape == (63, 63)
        assert not np.any((code6336.G @ H.T) & 1)

    def test_deterministic(self, code6336):
        a = random_extended_matrix(code6336, seed=9)
        b = random_extended_matrix(code6336, seed=9)
        assert np.array_equal(a, b)
        c = random_extended_matrix(code6336, seed=10)
        assert not np.array_equal(a, c)

    def test_appended_rows_nonzero(self, code6336):
        H = random_extended_matrix(code6336, seed=4)
        assert H[63 - 36 :].any(axis=1).all()
