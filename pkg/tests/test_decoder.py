import numpy as np
import pytest

from cycbp.codes import code_from_name
from cycbp.decoder import (
    LLR_CLIP,
    WeightBank,
    _cyclic_forward,
    _cyclic_plan,
    boost,
    bp_decode,
    hard_decision,
    neural_bp_decode,
)
from cycbp.tanner import build_graph

from reference_bp import reference_bp


class TestNumericAssumptions:
    """Canaries for properties the exact-equivariance guarantee rests on."""

    def test_ufuncs_are_position_independent(self):
        # same input value at a different array position must give the same
        # output bits (no lane-dependent rounding)
        rng = np.random.default_rng(0)
        for size in (7, 63, 127, 1000):
            v = rng.normal(0, 3, size)
            w = np.tanh(rng.normal(0, 1, size))
            for shift in (1, size // 2, size - 1):
                np.testing.assert_array_equal(np.tanh(np.roll(v, shift)),
                                              np.roll(np.tanh(v), shift))
                np.testing.assert_array_equal(np.arctanh(np.roll(w, shift)),
                                              np.roll(np.arctanh(w), shift))

    def test_multiply_by_one_is_identity(self):
        v = np.random.default_rng(1).normal(0, 10, 4096)
        np.testing.assert_array_equal(1.0 * v, v)


class TestVanillaBp:
    def test_matches_scalar_reference(self, code74, code157):
        rng = np.random.default_rng(2)
        for code in (code74, code157):
            for H in (code.H_std, code.H_cyc):
                g = build_graph(H)
                llr = rng.normal(0, 2, code.n)
                got = bp_decode(g, llr, 4)
                want = reference_bp(H.tolist(), llr.tolist(), 4)
                np.testing.assert_allclose(got, want, rtol=1e-9, atol=1e-11)

    def test_first_odd_layer_is_tanh_half_llr(self, graph74_cyc):
        llr = np.array([1.0, -2.0, 0.5, 3.0, -1.0, 0.25, 2.0])
        _, trace = _cyclic_forward(_cyclic_plan(graph74_cyc), None, llr[None], 1,
                                   record=True)
        xo = trace[0]["xo"]
        for b in range(graph74_cyc.u):
            np.testing.assert_array_equal(xo[b, 0], np.tanh(0.5 * llr))

    def test_zero_llr_zeroes_check_messages(self, code74, graph74_cyc):
        # L_1 = 0 makes every first-layer message out of v_1 zero, so each
        # check touching v_1 sends exactly 0 to its other variables
        llr = np.array([0.0, 1.5, -2.0, 1.0, 0.5, -1.0, 2.5])
        _, trace = _cyclic_forward(_cyclic_plan(graph74_cyc), None, llr[None], 1,
                                   record=True)
        x_even = trace[1]["x_final"]
        for b, e in enumerate(graph74_cyc.var_neighbors[0]):
            check = graph74_cyc.edges[e][0]
            for e2 in graph74_cyc.check_neighbors[check]:
                var2 = graph74_cyc.edges[e2][1]
                if var2 == 0:
                    continue
                slot = graph74_cyc.var_neighbors[var2].index(e2)
                assert x_even[slot, 0, var2] == 0.0

    def test_noiseless_codeword_recovered(self, code6336):
        rng = np.random.default_rng(3)
        g = build_graph(code6336.H_cyc)
        words = code6336.random_codewords(16, rng)
        llr = (1.0 - 2.0 * words) * 15.0
        out = bp_decode(g, llr, 5)
        assert np.array_equal(hard_decision(out), words)

    def test_t_must_be_positive(self, graph74_cyc):
        with pytest.raises(ValueError):
            bp_decode(graph74_cyc, np.zeros(7), 0)

    def test_input_clipped_on_entry(self, graph74_cyc):
        big = np.array([50.0, -80.0, 10.0, 5.0, -3.0, 30.0, -50.0])
        clipped = np.clip(big, -LLR_CLIP, LLR_CLIP)
        np.testing.assert_array_equal(bp_decode(graph74_cyc, big, 3),
                                      bp_decode(graph74_cyc, clipped, 3))


class TestWeightBank:
    def test_parameter_count(self, graph74_cyc):
        bank = WeightBank.ones(graph74_cyc, "cyclic", 3)
        assert bank.num_parameters == 4 * 4 * 3 + 4  # u^2 t + u

    def test_ff_parameter_count(self, graph74_std):
        bank = WeightBank.ones(graph74_std, "ff", 2)
        n_pairs = sum(d * (d - 1) for d in map(graph74_std.var_degree, range(7)))
        assert bank.num_parameters == 2 * n_pairs + 2 * 12 + 12

    def test_flat_roundtrip(self, graph74_cyc):
        rng = np.random.default_rng(8)
        bank = WeightBank.randomized(graph74_cyc, "cyclic", 2, rng)
        again = bank.with_flat(bank.flat_parameters())
        assert np.array_equal(bank.w_in, again.w_in)
        assert np.array_equal(bank.w_llr, again.w_llr)
        assert np.array_equal(bank.w_out, again.w_out)

    def test_with_flat_rejects_wrong_size(self, graph74_cyc):
        bank = WeightBank.ones(graph74_cyc, "cyclic", 2)
        with pytest.raises(ValueError):
            bank.with_flat(np.zeros(bank.num_parameters + 1))

    def test_cyclic_needs_circulant(self, graph74_std):
        with pytest.raises(ValueError):
            WeightBank.ones(graph74_std, "cyclic", 2)


class TestReduction:
    @pytest.mark.parametrize("name", ["BCH(7,4)", "BCH(15,7)", "PRM(63,22)"])
    def test_all_ones_cyclic_equals_vanilla(self, name):
        code = code_from_name(name)
        g = build_graph(code.H_cyc)
        rng = np.random.default_rng(4)
        llr = rng.normal(0, 3, (50, code.n))
        ones = WeightBank.ones(g, "cyclic", 5)
        np.testing.assert_array_equal(neural_bp_decode(g, ones, llr),
                                      bp_decode(g, llr, 5))

    @pytest.mark.parametrize("matrix", ["std", "cyclic"])
    def test_all_ones_ff_equals_vanilla(self, code6336, matrix):
        H = code6336.H_std if matrix == "std" else code6336.H_cyc
        g = build_graph(H)
        rng = np.random.default_rng(5)
        llr = rng.normal(0, 3, (50, 63))
        ones = WeightBank.ones(g, "ff", 5)
        np.testing.assert_array_equal(neural_bp_decode(g, ones, llr),
                                      bp_decode(g, llr, 5))


class TestEquivariance:
    def test_cyclic_bank_is_exactly_equivariant(self, code6345):
        g = build_graph(code6345.H_cyc)
        rng = np.random.default_rng(6)
        bank = WeightBank.randomized(g, "cyclic", 5, rng)
        llr = rng.normal(0, 2, 63)
        base = neural_bp_decode(g, bank, llr)
        for shift in range(63):
            out = neural_bp_decode(g, bank, np.roll(llr, -shift))
            np.testing.assert_array_equal(out, np.roll(base, -shift))

    def test_random_ff_weights_break_equivariance(self, code6336):
        # per-edge weights on the circulant matrix: sharing really is what
        # buys the symmetry, so random unshared weights must violate it
        g = build_graph(code6336.H_cyc)
        rng = np.random.default_rng(7)
        bank = WeightBank.randomized(g, "ff", 5, rng)
        violated = False
        for _ in range(5):
            llr = rng.normal(0, 2, 63)
            base = neural_bp_decode(g, bank, llr)
            for shift in range(1, 63):
                out = neural_bp_decode(g, bank, np.roll(llr, -shift))
                if not np.allclose(out, np.roll(base, -shift), atol=1e-9):
                    violated = True
                    break
            if violated:
                break
        assert violated


class TestRangeAndSymmetry:
    def test_odd_messages_in_open_interval(self, graph74_cyc):
        rng = np.random.default_rng(9)
        llr = rng.normal(0, 2, (20, 7))
        _, trace = _cyclic_forward(_cyclic_plan(graph74_cyc), None, llr, 3,
                                   record=True)
        for layer in range(3):
            xo = trace[layer]["xo"]
            assert np.all(np.abs(xo) < 1.0)

    def test_even_messages_finite_under_saturation(self, graph74_cyc):
        llr = np.full((4, 7), LLR_CLIP)
        out = bp_decode(graph74_cyc, llr, 5)
        assert np.all(np.isfinite(out))

    @pytest.mark.parametrize("variant", ["vanilla", "cyclic"])
    def test_codeword_sign_symmetry(self, code6336, variant):
        # decoding L * signs(c) errs at the same positions relative to c as
        # decoding L errs relative to the all-zero word
        g = build_graph(code6336.H_cyc)
        rng = np.random.default_rng(10)
        bank = (None if variant == "vanilla"
                else WeightBank.randomized(g, "cyclic", 5, rng))
        sigma = 0.7
        noise = sigma * rng.standard_normal((30, 63))
        llr_zero = 2.0 * (1.0 + noise) / sigma**2
        words = code6336.random_codewords(30, rng)
        signs = 1.0 - 2.0 * words
        llr_word = llr_zero * signs

        def run(llr):
            if bank is None:
                return bp_decode(g, llr, 5)
            return neural_bp_decode(g, bank, llr)

        errors_zero = hard_decision(run(llr_zero))          # vs all-zero word
        errors_word = hard_decision(run(llr_word)) ^ words  # vs codeword
        assert np.array_equal(errors_zero, errors_word)


class TestBoostAndHardDecision:
    def test_boost_zero_is_plain_decode(self, code6336):
        g = build_graph(code6336.H_cyc)
        rng = np.random.default_rng(11)
        bank = WeightBank.randomized(g, "cyclic", 5, rng)
        llr = rng.normal(0, 2, (8, 63))
        np.testing.assert_array_equal(boost(g, bank, llr, 5, 0),
                                      neural_bp_decode(g, bank, llr))

    def test_boost_feeds_output_back(self, code6336):
        g = build_graph(code6336.H_cyc)
        rng = np.random.default_rng(12)
        bank = WeightBank.randomized(g, "cyclic", 5, rng)
        llr = rng.normal(0, 2, 63)
        once = neural_bp_decode(g, bank, llr)
        twice = neural_bp_decode(g, bank, once)
        np.testing.assert_array_equal(boost(g, bank, llr, 5, 1), twice)

    def test_boost_rejects_negative(self, graph74_cyc):
        with pytest.raises(ValueError):
            boost(graph74_cyc, None, np.zeros(7), 2, -1)

    def test_hard_decision_signs(self):
        o = np.array([1.0, -1.0, 0.5, -0.2])
        assert hard_decision(o).tolist() == [0, 1, 0, 1]

    def test_hard_decision_tie_is_zero(self):
        assert hard_decision(np.zeros(5)).tolist() == [0] * 5

    def test_sign_flip_flips_bits(self):
        rng = np.random.default_rng(13)
        o = rng.normal(0, 1, 100)
        o = o[o != 0]
        assert np.array_equal(hard_decision(-o), 1 - hard_decision(o))


class TestValidation:
    def test_t_mismatch(self, graph74_cyc):
        bank = WeightBank.ones(graph74_cyc, "cyclic", 3)
        with pytest.raises(ValueError):
            neural_bp_decode(graph74_cyc, bank, np.zeros(7), t=4)

    def test_u_mismatch(self, code6336, code6345):
        g36 = build_graph(code6336.H_cyc)
        g45 = build_graph(code6345.H_cyc)
        bank = WeightBank.ones(g36, "cyclic", 5)
        with pytest.raises(ValueError):
            neural_bp_decode(g45, bank, np.zeros(63))

    def test_ff_edge_mismatch(self, code6336):
        g_std = build_graph(code6336.H_std)
        g_cyc = build_graph(code6336.H_cyc)
        bank = WeightBank.ones(g_std, "ff", 5)
        with pytest.raises(ValueError):
            neural_bp_decode(g_cyc, bank, np.zeros(63))

    def test_bad_llr_shape(self, graph74_cyc):
        with pytest.raises(ValueError):
            bp_decode(graph74_cyc, np.zeros((2, 3, 7)), 2)

    def test_batch_matches_single(self, code6336):
        g = build_graph(code6336.H_cyc)
        rng = np.random.default_rng(14)
        bank = WeightBank.randomized(g, "cyclic", 5, rng)
        llr = rng.normal(0, 2, (7, 63))
        batched = neural_bp_decode(g, bank, llr)
        for i in range(7):
            np.testing.assert_array_equal(batched[i],
                                          neural_bp_decode(g, bank, llr[i]))
