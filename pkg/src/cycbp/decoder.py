"""Unrolled sum-product decoders: vanilla BP, per-edge weighted, and
cyclically weight-shared.

Message layout
--------------
On a circulant parity matrix every variable has degree u, so the per-edge
messages live in a dense (u, batch, n) array: slot b of variable j is the
edge whose check sits at offset col_support[b] above j (mod n).  Check
updates gather the same array by row offset.  All reductions run in a fixed
slot order, identically for every j, which makes a cyclic shift of the
input produce the bit-identical shift of every intermediate array -- the
decoder is exactly equivariant, not merely up to rounding.

On a general parity matrix messages are kept per edge id and reductions
follow the graph's canonical neighbor order via precomputed index arrays.

Numerical conventions: input LLRs are clipped to +-LLR_CLIP on entry, and
check-node products are clipped to +-(1 - ATANH_EPS) before the arctanh.
"""

from __future__ import annotations

import numpy as np

from .tanner import TannerGraph

LLR_CLIP = 20.0
ATANH_EPS = 1e-7


class WeightBank:
    """Trainable decoder weights, either cyclically shared or per edge.

    Cyclic variant (for circulant matrices): per odd layer l an (u, u)
    block ``w_in[l, b_src, b_dst]`` (diagonal unused, kept at zero), u LLR
    weights ``w_llr[l, b]``, and u output weights ``w_out[b]`` -- exactly
    u^2 * t + u parameters.  FF variant: one weight per (source edge, target
    edge) pair sharing a variable, one per (variable, edge), and one output
    weight per edge, each per layer where applicable.
    """

    def __init__(self, variant, t, w_in, w_llr, w_out, pair_index=None):
        self.variant = variant
        self.t = t
        self.w_in = w_in      # cyclic: (t, u, u); ff: (t, n_pairs)
        self.w_llr = w_llr    # cyclic: (t, u);    ff: (t, n_edges)
        self.w_out = w_out    # cyclic: (u,);      ff: (n_edges,)
        self.pair_index = pair_index  # ff only: (n_pairs, 2) [src, dst] edge ids
        if variant == "cyclic":
            self.u = w_out.shape[0]
            self._offdiag = ~np.eye(self.u, dtype=bool)
        elif variant == "ff":
            self.n_edges = w_out.shape[0]
            self.n_pairs = w_in.shape[1]
        else:
            raise ValueError(f"unknown weight variant {variant!r}")

    # -- construction ------------------------------------------------------

    @classmethod
    def ones(cls, graph: TannerGraph, variant: str, t: int) -> "WeightBank":
        """All-ones bank; the decoder then reproduces vanilla BP bit-for-bit."""
        if variant == "cyclic":
            if not graph.cyclic:
                raise ValueError("cyclic weight sharing requires a circulant parity matrix")
            u = graph.u
            w_in = np.ones((t, u, u))
            w_in[:, np.eye(u, dtype=bool)] = 0.0
            return cls("cyclic", t, w_in, np.ones((t, u)), np.ones(u))
        if variant == "ff":
            pairs = _variable_pairs(graph)
            return cls(
                "ff", t,
                np.ones((t, len(pairs))),
                np.ones((t, graph.n_edges)),
                np.ones(graph.n_edges),
                pair_index=pairs,
            )
        raise ValueError(f"unknown weight variant {variant!r}")

    @classmethod
    def randomized(cls, graph: TannerGraph, variant: str, t: int,
                   rng: np.random.Generator, spread: float = 0.5) -> "WeightBank":
        """Random bank centered on the all-ones point (for tests/inits)."""
        bank = cls.ones(graph, variant, t)
        flat = 1.0 + spread * rng.standard_normal(bank.num_parameters)
        return bank.with_flat(flat)

    # -- parameter vector view --------------------------------------------

    @property
    def num_parameters(self) -> int:
        if self.variant == "cyclic":
            u = self.u
            return self.t * u * (u - 1) + self.t * u + u
        return self.w_in.size + self.w_llr.size + self.w_out.size

    def flat_parameters(self) -> np.ndarray:
        """All trainable parameters as one vector (fixed documented order)."""
        if self.variant == "cyclic":
            cross = self.w_in[:, self._offdiag].ravel()
        else:
            cross = self.w_in.ravel()
        return np.concatenate([cross, self.w_llr.ravel(), self.w_out.ravel()])

    def with_flat(self, flat: np.ndarray) -> "WeightBank":
        """New bank with parameters replaced from a flat vector."""
        flat = np.asarray(flat, dtype=np.float64)
        if flat.shape != (self.num_parameters,):
            raise ValueError(
                f"flat vector has {flat.shape}, bank needs ({self.num_parameters},)"
            )
        if self.variant == "cyclic":
            u = self.u
            n_cross = self.t * u * (u - 1)
            w_in = np.zeros((self.t, u, u))
            w_in[:, self._offdiag] = flat[:n_cross].reshape(self.t, u * (u - 1))
        else:
            n_cross = self.w_in.size
            w_in = flat[:n_cross].reshape(self.w_in.shape).copy()
        n_llr = self.w_llr.size
        w_llr = flat[n_cross : n_cross + n_llr].reshape(self.w_llr.shape).copy()
        w_out = flat[n_cross + n_llr :].copy()
        return WeightBank(self.variant, self.t, w_in, w_llr, w_out, self.pair_index)

    def zeros_like(self) -> "WeightBank":
        return self.with_flat(np.zeros(self.num_parameters))

    def copy(self) -> "WeightBank":
        return self.with_flat(self.flat_parameters())

    def __repr__(self) -> str:
        return (
            f"WeightBank({self.variant}, t={self.t}, "
            f"{self.num_parameters} parameters)"
        )


def _variable_pairs(graph: TannerGraph) -> np.ndarray:
    """(src, dst) edge-id pairs sharing a variable, in canonical order."""
    pairs = []
    for j in range(graph.n_vars):
        nb = graph.var_neighbors[j]
        for dst in nb:
            for src in nb:
                if src != dst:
                    pairs.append((src, dst))
    return np.asarray(pairs, dtype=np.int64)


# ---------------------------------------------------------------------------
# cyclic engine
# ---------------------------------------------------------------------------


class _CyclicPlan:
    """Precomputed gather/scatter index tables for a circulant graph."""

    def __init__(self, graph: TannerGraph):
        n = graph.n_vars
        u = graph.u
        c0 = np.asarray(graph.col_support0, dtype=np.int64)
        r0 = np.asarray(graph.row_support0, dtype=np.int64)
        lookup = {int(c): b for b, c in enumerate(c0)}
        # Slot b of the edge that sits at row offset r0[a] within its check.
        self.b_of_a = np.array([lookup[int((n - a) % n)] for a in r0], dtype=np.int64)
        idx = np.arange(n)
        self.gather = np.stack([(idx + int(a)) % n for a in r0])   # (u, n)
        self.scatter = np.stack([(idx - int(a)) % n for a in r0])  # (u, n)
        self.offdiag = [
            np.asarray([b for b in range(u) if b != b_src], dtype=np.int64)
            for b_src in range(u)
        ]
        self.n = n
        self.u = u


def _cyclic_plan(graph: TannerGraph) -> _CyclicPlan:
    plan = graph._plan_cache.get("cyclic")
    if plan is None:
        plan = graph._plan_cache["cyclic"] = _CyclicPlan(graph)
    return plan


def _cyclic_forward(plan: _CyclicPlan, weights, llr, t, record=False):
    """Run 2t message layers plus output on (batch, n) LLRs.

    With ``weights=None`` this is vanilla BP; otherwise Eq-style shared
    weights multiply the LLR and cross terms of odd layers and the output
    sum.  Returns (output, trace); the trace holds per-layer intermediates
    for the backward sweep when ``record`` is set.
    """
    u, n = plan.u, plan.n
    batch = llr.shape[0]
    x = np.zeros((u, batch, n))
    trace = [] if record else None

    for layer in range(t):
        x_prev = x
        # odd layer: per-variable tanh update, slot-b destinations one at a
        # time, sources accumulated in ascending slot order
        acc = np.empty_like(x)
        for b in range(u):
            if weights is None:
                dst = llr.copy()
            else:
                dst = weights.w_llr[layer, b] * llr
            for b_src in range(u):
                if b_src == b:
                    continue
                if weights is None:
                    dst += x_prev[b_src]
                else:
                    dst += weights.w_in[layer, b_src, b] * x_prev[b_src]
            acc[b] = dst
        xo = np.tanh(0.5 * acc)

        # even layer: leave-one-out products per check, in row-offset order,
        # assembled from running prefix/suffix products (same grouping as
        # the per-edge engine, so the two stay bit-identical)
        y = np.empty_like(xo)
        for a in range(u):
            y[a] = xo[plan.b_of_a[a]][:, plan.gather[a]]
        pref = np.empty_like(y)
        suf = np.empty_like(y)
        pref[0] = y[0]
        for a in range(1, u):
            pref[a] = pref[a - 1] * y[a]
        suf[u - 1] = y[u - 1]
        for a in range(u - 2, -1, -1):
            suf[a] = y[a] * suf[a + 1]
        prods = np.empty_like(xo) if record else None
        x = np.empty_like(xo)
        for a0 in range(u):
            if u == 1:
                p = np.ones((batch, n))
            elif a0 == 0:
                p = suf[1].copy()
            elif a0 == u - 1:
                p = pref[u - 2].copy()
            else:
                p = pref[a0 - 1] * suf[a0 + 1]
            if record:
                prods[a0] = p
            pc = np.clip(p, -1.0 + ATANH_EPS, 1.0 - ATANH_EPS)
            z = 2.0 * np.arctanh(pc)
            x[plan.b_of_a[a0]] = z[:, plan.scatter[a0]]
        if record:
            trace.append({"x_prev": x_prev, "xo": xo, "y": y, "prods": prods})

    out = llr.copy()
    for b in range(u):
        if weights is None:
            out += x[b]
        else:
            out += weights.w_out[b] * x[b]
    if record:
        trace.append({"x_final": x})
    return out, trace


# ---------------------------------------------------------------------------
# generic per-edge engine
# ---------------------------------------------------------------------------


class _EdgePlan:
    """Step-sliced index tables for message passing on an arbitrary graph.

    Step r of the variable (check) phase applies, for every target edge that
    has at least r+1 sources, its r-th source in canonical neighbor order.
    Within a step each target appears once, so plain fancy-indexed in-place
    updates are safe and the per-target accumulation order is exactly the
    neighbor order.
    """

    def __init__(self, graph: TannerGraph):
        self.n_edges = graph.n_edges
        self.var_of_edge = graph.var_of_edge
        self.check_of_edge = graph.check_of_edge
        self.n_vars = graph.n_vars
        self.n_checks = graph.n_checks

        pairs = _variable_pairs(graph)
        self.pair_src = pairs[:, 0]
        self.pair_dst = pairs[:, 1]
        self.n_pairs = len(pairs)
        # segment view of the pairs grouped by source edge (for the backward
        # scatter-add) and of the edges grouped by check
        order = np.argsort(self.pair_src, kind="stable")
        sorted_src = self.pair_src[order]
        seg_starts = np.flatnonzero(
            np.r_[True, sorted_src[1:] != sorted_src[:-1]]
        ) if len(sorted_src) else np.empty(0, dtype=np.int64)
        self.pair_order = order
        self.pair_seg_starts = seg_starts
        self.pair_seg_src = sorted_src[seg_starts] if len(sorted_src) else sorted_src
        self.check_seg_starts = np.flatnonzero(
            np.r_[True, graph.check_of_edge[1:] != graph.check_of_edge[:-1]]
        )

        # variable phase: pair slots grouped by source position per target
        slot_of_pair = {(int(s), int(d)): slot for slot, (s, d) in enumerate(pairs)}
        var_steps = []
        max_vdeg = max(len(nb) for nb in graph.var_neighbors)
        for r in range(max_vdeg - 1):
            dst_ids, src_ids, slots = [], [], []
            for j in range(graph.n_vars):
                nb = graph.var_neighbors[j]
                for dst in nb:
                    srcs = [e for e in nb if e != dst]
                    if r < len(srcs):
                        dst_ids.append(dst)
                        src_ids.append(srcs[r])
                        slots.append(slot_of_pair[(srcs[r], dst)])
            var_steps.append((
                np.asarray(dst_ids, dtype=np.int64),
                np.asarray(src_ids, dtype=np.int64),
                np.asarray(slots, dtype=np.int64),
            ))
        self.var_steps = var_steps

        # check phase: running prefix/suffix products along each check's
        # neighbor list, leave-one-out = prefix[before] * suffix[after]
        prev_edge = np.full(graph.n_edges, -1, dtype=np.int64)
        next_edge = np.full(graph.n_edges, -1, dtype=np.int64)
        max_cdeg = max(len(nb) for nb in graph.check_neighbors)
        pos_edges = [[] for _ in range(max_cdeg)]
        for nb in graph.check_neighbors:
            for pos, e in enumerate(nb):
                pos_edges[pos].append(e)
                if pos > 0:
                    prev_edge[e] = nb[pos - 1]
                if pos < len(nb) - 1:
                    next_edge[e] = nb[pos + 1]
        self.prefix_steps = [
            np.asarray([e for e in pos_edges[r] if prev_edge[e] >= 0], dtype=np.int64)
            for r in range(1, max_cdeg)
        ]
        self.suffix_steps = [
            np.asarray([e for e in pos_edges[r] if next_edge[e] >= 0], dtype=np.int64)
            for r in range(max_cdeg - 2, -1, -1)
        ]
        self.prev_edge = prev_edge
        self.next_edge = next_edge
        all_edges = np.arange(graph.n_edges)
        self.loo_both = all_edges[(prev_edge >= 0) & (next_edge >= 0)]
        self.loo_first = all_edges[(prev_edge < 0) & (next_edge >= 0)]
        self.loo_last = all_edges[(prev_edge >= 0) & (next_edge < 0)]
        self.loo_alone = all_edges[(prev_edge < 0) & (next_edge < 0)]

        # output phase: edge of each variable at neighbor position p
        out_steps = []
        for p in range(max_vdeg):
            var_ids = [j for j in range(graph.n_vars) if p < len(graph.var_neighbors[j])]
            edge_ids = [graph.var_neighbors[j][p] for j in var_ids]
            out_steps.append((
                np.asarray(var_ids, dtype=np.int64),
                np.asarray(edge_ids, dtype=np.int64),
            ))
        self.out_steps = out_steps


def _edge_plan(graph: TannerGraph) -> _EdgePlan:
    plan = graph._plan_cache.get("edge")
    if plan is None:
        plan = graph._plan_cache["edge"] = _EdgePlan(graph)
    return plan


def _edge_forward(plan: _EdgePlan, weights, llr, t, record=False):
    """Generic-engine twin of `_cyclic_forward`, messages indexed by edge id."""
    batch = llr.shape[0]
    llr_e = llr[:, plan.var_of_edge].T.copy()  # (n_edges, batch)
    llr_t = llr.T.copy()                       # (n_vars, batch)
    x = np.zeros((plan.n_edges, batch))
    trace = [] if record else None

    for layer in range(t):
        x_prev = x
        if weights is None:
            acc = llr_e.copy()
        else:
            acc = weights.w_llr[layer][:, None] * llr_e
        for dst, src, slots in plan.var_steps:
            if weights is None:
                acc[dst] += x_prev[src]
            else:
                acc[dst] += weights.w_in[layer][slots][:, None] * x_prev[src]
        xo = np.tanh(0.5 * acc)

        pref = xo.copy()
        for sel in plan.prefix_steps:
            pref[sel] = pref[plan.prev_edge[sel]] * xo[sel]
        suf = xo.copy()
        for sel in plan.suffix_steps:
            suf[sel] = xo[sel] * suf[plan.next_edge[sel]]
        p = np.ones((plan.n_edges, batch))
        sel = plan.loo_both
        p[sel] = pref[plan.prev_edge[sel]] * suf[plan.next_edge[sel]]
        sel = plan.loo_first
        p[sel] = suf[plan.next_edge[sel]]
        sel = plan.loo_last
        p[sel] = pref[plan.prev_edge[sel]]
        pc = np.clip(p, -1.0 + ATANH_EPS, 1.0 - ATANH_EPS)
        x = 2.0 * np.arctanh(pc)
        if record:
            trace.append({"x_prev": x_prev, "xo": xo, "prods": p})

    out = llr_t.copy()
    for var_ids, edge_ids in plan.out_steps:
        if weights is None:
            out[var_ids] += x[edge_ids]
        else:
            out[var_ids] += weights.w_out[edge_ids][:, None] * x[edge_ids]
    if record:
        trace.append({"x_final": x})
    return out.T.copy(), trace


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def _prep_llr(llr):
    arr = np.asarray(llr, dtype=np.float64)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"LLR input must be (n,) or (batch, n), got shape {arr.shape}")
    return np.clip(arr, -LLR_CLIP, LLR_CLIP), single


def _check_shapes(graph: TannerGraph, weights: WeightBank, t):
    if t is None:
        t = weights.t
    if weights.t != t:
        raise ValueError(f"weight bank was built for t={weights.t}, decode asked for t={t}")
    if weights.variant == "cyclic":
        if not graph.cyclic:
            raise ValueError("cyclic weight bank needs a circulant parity matrix")
        if weights.u != graph.u:
            raise ValueError(f"weight bank has u={weights.u}, graph has u={graph.u}")
    else:
        if weights.n_edges != graph.n_edges:
            raise ValueError(
                f"weight bank has {weights.n_edges} edges, graph has {graph.n_edges}"
            )
    return t


def bp_decode(graph: TannerGraph, llr, t: int):
    """Vanilla sum-product decoding; returns output LLRs o_j."""
    if t is None or t < 1:
        raise ValueError("iteration count t must be >= 1")
    arr, single = _prep_llr(llr)
    if graph.cyclic:
        out, _ = _cyclic_forward(_cyclic_plan(graph), None, arr, t)
    else:
        out, _ = _edge_forward(_edge_plan(graph), None, arr, t)
    return out[0] if single else out


def neural_bp_decode(graph: TannerGraph, weights: WeightBank, llr, t: int | None = None):
    """Weighted BP decoding with a cyclic or per-edge (FF) weight bank."""
    t = _check_shapes(graph, weights, t)
    arr, single = _prep_llr(llr)
    if weights.variant == "cyclic":
        out, _ = _cyclic_forward(_cyclic_plan(graph), weights, arr, t)
    else:
        out, _ = _edge_forward(_edge_plan(graph), weights, arr, t)
    return out[0] if single else out


def boost(graph: TannerGraph, weights: WeightBank | None, llr, t: int | None = None,
          B: int = 0):
    """Decode B+1 times, re-feeding each output LLR vector as the next input."""
    if B < 0:
        raise ValueError("boost count B must be >= 0")
    out = llr
    for _ in range(B + 1):
        if weights is None:
            out = bp_decode(graph, out, t)
        else:
            out = neural_bp_decode(graph, weights, out, t)
    return out


def hard_decision(o) -> np.ndarray:
    """LLR sign convention: positive -> bit 0, negative -> bit 1, tie -> 0."""
    return (np.asarray(o) < 0).astype(np.uint8)
