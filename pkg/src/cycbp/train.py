"""Training for the weighted decoders: loss, exact backprop, Adam loop.

The backward pass is hand-rolled reverse-mode differentiation through the
unrolled decoder (the forward graph is small and fixed, so a full autodiff
framework buys nothing here).  Clipped values propagate zero gradient, and
the rare exactly-zero check-node message also gets a zero (sub)gradient;
everywhere else the derivatives are exact and are cross-checked against
central finite differences in the test suite.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .channel import snr_to_sigma
from .codes import CyclicCode, random_extended_matrix
from .decoder import (
    ATANH_EPS,
    LLR_CLIP,
    WeightBank,
    _check_shapes,
    _cyclic_forward,
    _cyclic_plan,
    _edge_forward,
    _edge_plan,
)
from .tanner import TannerGraph, build_graph


class TrainingDiverged(RuntimeError):
    """Loss became non-finite; carries the offending step index."""

    def __init__(self, step: int, loss_value: float):
        super().__init__(f"training diverged at step {step} (loss={loss_value})")
        self.step = step
        self.loss_value = loss_value


@dataclass
class TrainConfig:
    """Batch composition and optimizer settings.

    The default batch is 20 all-zero-codeword samples from each SNR in
    snr_grid_db (1..8 dB), 160 per step.
    """

    samples_per_snr: int = 20
    snr_grid_db: tuple = (1, 2, 3, 4, 5, 6, 7, 8)
    t: int = 5
    steps: int = 2000
    learning_rate: float = 1e-3
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0
    matrix: str | None = None   # std | cyclic | random-extended; None = by variant
    trace_path: str | None = None

    @property
    def batch_size(self) -> int:
        return self.samples_per_snr * len(self.snr_grid_db)


def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def loss(outputs, target) -> float:
    """Mean binary cross-entropy of sigmoid(-o) against the target bits.

    sigmoid(-o_j) is the decoder's probability of bit 1 (positive LLR means
    bit 0), so for target bit y the per-bit term is
    y*softplus(o) + (1-y)*softplus(-o), computed stably via logaddexp.
    """
    o = np.asarray(outputs, dtype=np.float64)
    y = np.broadcast_to(np.asarray(target, dtype=np.float64), o.shape)
    per_bit = y * np.logaddexp(0.0, o) + (1.0 - y) * np.logaddexp(0.0, -o)
    return float(per_bit.mean())


def _loss_grad(outputs, target) -> np.ndarray:
    """d(mean BCE)/d(o); same shape as outputs."""
    o = np.asarray(outputs, dtype=np.float64)
    y = np.broadcast_to(np.asarray(target, dtype=np.float64), o.shape)
    return (_sigmoid(o) - (1.0 - y)) / o.size


def _safe_div(num, den):
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den != 0)
    return out


def _atanh_grad_factor(p):
    """d(2*atanh(clip(p)))/dp: zero where the clip bound was exceeded."""
    pc = np.clip(p, -1.0 + ATANH_EPS, 1.0 - ATANH_EPS)
    inside = np.abs(p) <= 1.0 - ATANH_EPS
    return np.where(inside, 2.0 / (1.0 - pc * pc), 0.0)


def _cyclic_backward(plan, weights: WeightBank, trace, llr, g_out) -> WeightBank:
    """Reverse sweep through the cyclic-engine trace; returns the grad bank."""
    u = plan.u
    t = weights.t
    llr_flat = llr.ravel()

    g_w_in = np.zeros_like(weights.w_in)
    g_w_llr = np.zeros_like(weights.w_llr)

    x_final = trace[t]["x_final"]
    g_w_out = x_final.reshape(u, -1) @ g_out.ravel()
    g_x = weights.w_out[:, None, None] * g_out[None]

    for layer in range(t - 1, -1, -1):
        rec = trace[layer]
        xo, y, prods = rec["xo"], rec["y"], rec["prods"]

        # even layer: leave-one-out products, division trick per check
        q = np.empty_like(g_x)
        for a0 in range(u):
            g_z = g_x[plan.b_of_a[a0]][:, plan.gather[a0]]
            q[a0] = g_z * _atanh_grad_factor(prods[a0])
        s_tot = np.einsum("abn,abn->bn", q, prods)
        g_xo = np.empty_like(g_x)
        for a in range(u):
            g_y = _safe_div(s_tot - q[a] * prods[a], y[a])
            g_xo[plan.b_of_a[a]] = g_y[:, plan.scatter[a]]

        # odd layer: tanh and the weighted linear combination
        g_pre = g_xo * (0.5 * (1.0 - xo * xo))
        g_pre_flat = g_pre.reshape(u, -1)
        g_w_llr[layer] = g_pre_flat @ llr_flat
        if layer > 0:
            x_prev_flat = rec["x_prev"].reshape(u, -1)
            g_in = x_prev_flat @ g_pre_flat.T      # [b_src, b_dst]
            g_in[np.diag_indices(u)] = 0.0
            g_w_in[layer] = g_in
            # g_x[b_src] = sum_b w_in[b_src, b] * g_pre[b]; diag weight is 0
            g_x = (weights.w_in[layer] @ g_pre_flat).reshape(g_pre.shape)
        # layer 0 consumes the all-zero init, so no upstream message gradient

    return WeightBank("cyclic", t, g_w_in, g_w_llr, g_w_out)


def _edge_backward(plan, weights: WeightBank, trace, llr, g_out) -> WeightBank:
    """Reverse sweep through the per-edge engine trace."""
    t = weights.t
    llr_e = llr[:, plan.var_of_edge].T
    g_ot = g_out.T

    g_w_in = np.zeros_like(weights.w_in)
    g_w_llr = np.zeros_like(weights.w_llr)

    x_final = trace[t]["x_final"]
    g_o_edge = g_ot[plan.var_of_edge]
    g_w_out = (g_o_edge * x_final).sum(axis=1)
    g_x = weights.w_out[:, None] * g_o_edge

    src, dst = plan.pair_src, plan.pair_dst
    for layer in range(t - 1, -1, -1):
        rec = trace[layer]
        xo, prods = rec["xo"], rec["prods"]

        q = g_x * _atanh_grad_factor(prods)
        qp = q * prods
        s_tot = np.add.reduceat(qp, plan.check_seg_starts, axis=0)
        g_xo = _safe_div(s_tot[plan.check_of_edge] - qp, xo)

        g_pre = g_xo * (0.5 * (1.0 - xo * xo))
        g_w_llr[layer] = np.einsum("eb,eb->e", g_pre, llr_e)
        if layer > 0:
            x_prev = rec["x_prev"]
            gd = g_pre[dst]
            g_w_in[layer] = np.einsum("pb,pb->p", gd, x_prev[src])
            g_x = np.zeros_like(g_pre)
            if plan.n_pairs:
                contrib = weights.w_in[layer][plan.pair_order, None] \
                    * g_pre[dst[plan.pair_order]]
                g_x[plan.pair_seg_src] = np.add.reduceat(
                    contrib, plan.pair_seg_starts, axis=0
                )

    return WeightBank("ff", t, g_w_in, g_w_llr, g_w_out, weights.pair_index)


def backward(graph: TannerGraph, weights: WeightBank, llr, target):
    """Loss and its exact gradient w.r.t. every weight in the bank.

    Shared weights accumulate contributions from all positions they are
    used at.  Returns (loss_value, gradient WeightBank).
    """
    t = _check_shapes(graph, weights, None)
    arr = np.asarray(llr, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    arr = np.clip(arr, -LLR_CLIP, LLR_CLIP)

    if weights.variant == "cyclic":
        plan = _cyclic_plan(graph)
        out, trace = _cyclic_forward(plan, weights, arr, t, record=True)
    else:
        plan = _edge_plan(graph)
        out, trace = _edge_forward(plan, weights, arr, t, record=True)

    loss_value = loss(out, target)
    g_out = _loss_grad(out, target)
    if weights.variant == "cyclic":
        grad = _cyclic_backward(plan, weights, trace, arr, g_out)
    else:
        grad = _edge_backward(plan, weights, trace, arr, g_out)
    return loss_value, grad


class Adam:
    """Plain Adam on a flat parameter vector."""

    def __init__(self, size: int, lr: float = 1e-3, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = np.zeros(size)
        self.v = np.zeros(size)
        self.step_count = 0

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        self.step_count += 1
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * grad * grad
        m_hat = self.m / (1.0 - self.beta1**self.step_count)
        v_hat = self.v / (1.0 - self.beta2**self.step_count)
        return params - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def default_matrix(variant: str) -> str:
    """cyclic sharing needs the circulant; vanilla/FF default to H_std."""
    return "cyclic" if variant == "cyclic" else "std"


def graph_for(code: CyclicCode, variant: str, matrix: str | None = None,
              extension_seed: int = 0) -> TannerGraph:
    """Build the Tanner graph a decoder variant trains/runs on."""
    if matrix is None:
        matrix = default_matrix(variant)
    if matrix == "cyclic":
        return build_graph(code.H_cyc)
    if matrix == "std":
        return build_graph(code.H_std)
    if matrix == "random-extended":
        return build_graph(random_extended_matrix(code, extension_seed))
    raise ValueError(f"unknown matrix kind {matrix!r}")


@dataclass
class TrainResult:
    weights: WeightBank
    losses: np.ndarray
    graph: TannerGraph = field(repr=False, default=None)


def _training_batch(n: int, rate: float, config: TrainConfig,
                    rng: np.random.Generator) -> np.ndarray:
    """All-zero-codeword LLR batch: samples_per_snr rows per grid SNR."""
    blocks = []
    for snr_db in config.snr_grid_db:
        sigma = snr_to_sigma(snr_db, rate)
        received = 1.0 + sigma * rng.standard_normal((config.samples_per_snr, n))
        blocks.append(2.0 * received / sigma**2)
    return np.concatenate(blocks, axis=0)


def train(code: CyclicCode, variant: str, config: TrainConfig) -> TrainResult:
    """Train a weight bank from the all-ones (vanilla BP) starting point.

    All training samples are AWGN corruptions of the all-zero codeword drawn
    from the configured SNR grid; the target is therefore the zero vector.
    Deterministic for a fixed config seed.
    """
    if variant not in ("cyclic", "ff"):
        raise ValueError(f"cannot train variant {variant!r}")
    graph = graph_for(code, variant, config.matrix)
    bank = WeightBank.ones(graph, variant, config.t)
    rng = np.random.default_rng(config.seed)
    target = np.zeros(code.n)

    opt = Adam(bank.num_parameters, lr=config.learning_rate,
               beta1=config.adam_beta1, beta2=config.adam_beta2,
               eps=config.adam_eps)
    params = bank.flat_parameters()
    losses = np.empty(config.steps)
    for step in range(config.steps):
        llr = _training_batch(code.n, code.rate, config, rng)
        loss_value, grad = backward(graph, bank, llr, target)
        if not np.isfinite(loss_value):
            raise TrainingDiverged(step, loss_value)
        losses[step] = loss_value
        params = opt.step(params, grad.flat_parameters())
        bank = bank.with_flat(params)

    if config.trace_path:
        write_loss_trace(config.trace_path, losses)
    return TrainResult(bank, losses, graph)


def write_loss_trace(path: str, losses) -> None:
    """Loss trace CSV: one (step, loss) row per training step."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["step", "loss"])
        for step, value in enumerate(losses):
            writer.writerow([step, repr(float(value))])
