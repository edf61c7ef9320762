"""Tanner graphs with the canonical edge ordering used for weight sharing.

For a circulant parity matrix, every variable node v_j touches exactly the
checks c at offsets col_support above j (mod n), and every check c_i touches
the variables at offsets row_support to its right (mod n).  Neighbor lists
are ordered by that offset slot, not by absolute index: slot b means the
same structural role at every node, which is what makes shared weights
well-defined and lets a cyclic shift of the input map the whole message
schedule onto itself.  Non-circulant matrices fall back to row-major scan
order.
"""

from __future__ import annotations

import numpy as np


def shift_index(i: int, b: int, n: int) -> int:
    """The cyclic shift pi_b(i) on [1, n]: i + b - 1, wrapped past n."""
    if not (1 <= i <= n and 1 <= b <= n):
        raise ValueError(f"need 1 <= i, b <= {n}, got i={i}, b={b}")
    s = i + b - 1
    return s if s <= n else s - n


class TannerGraph:
    """Bipartite variable/check graph of a parity matrix, with edge ids.

    edges[e] = (check index i, variable index j), listed in row-major scan
    order of H.  var_neighbors[j] and check_neighbors[i] hold edge ids in
    the canonical order described in the module docstring.  For circulant H,
    ``col_support`` is the 1-indexed set {i_1, ..., i_u} of first-column
    check rows and ``u`` the column weight.
    """

    def __init__(self, H: np.ndarray):
        H = np.asarray(H)
        if H.ndim != 2 or not np.isin(H, (0, 1)).all():
            raise ValueError("parity matrix must be a 2D 0/1 array")
        H = H.astype(np.uint8)
        if not H.any():
            raise ValueError("parity matrix is all zero")
        zero_cols = np.flatnonzero(~H.any(axis=0))
        if zero_cols.size:
            raise ValueError(f"variable(s) {zero_cols.tolist()} have no parity checks")
        zero_rows = np.flatnonzero(~H.any(axis=1))
        if zero_rows.size:
            raise ValueError(f"check(s) {zero_rows.tolist()} involve no variables")

        self.H = H
        self.n_checks, self.n_vars = H.shape
        checks, vars_ = np.nonzero(H)  # row-major scan order
        self.edges = list(zip(checks.tolist(), vars_.tolist()))
        self.n_edges = len(self.edges)
        self.check_of_edge = checks.astype(np.int64)
        self.var_of_edge = vars_.astype(np.int64)

        self.cyclic = self._is_circulant(H)
        edge_id = {edge: e for e, edge in enumerate(self.edges)}

        if self.cyclic:
            n = self.n_vars
            c0 = np.flatnonzero(H[:, 0])          # 0-indexed column support
            r0 = np.flatnonzero(H[0, :])          # 0-indexed row support
            self.u = len(c0)
            self.col_support = tuple(int(i) + 1 for i in c0)
            self.col_support0 = c0
            self.row_support0 = r0
            self.var_neighbors = [
                [edge_id[((int(c) + j) % n, j)] for c in c0] for j in range(n)
            ]
            self.check_neighbors = [
                [edge_id[(i, (i + int(a)) % n)] for a in r0] for i in range(n)
            ]
        else:
            self.u = None
            self.col_support = None
            self.col_support0 = None
            self.row_support0 = None
            self.var_neighbors = [[] for _ in range(self.n_vars)]
            self.check_neighbors = [[] for _ in range(self.n_checks)]
            for e, (i, j) in enumerate(self.edges):
                self.var_neighbors[j].append(e)
                self.check_neighbors[i].append(e)

        self._plan_cache: dict = {}

    @staticmethod
    def _is_circulant(H: np.ndarray) -> bool:
        if H.shape[0] != H.shape[1]:
            return False
        first = H[0]
        return all(np.array_equal(H[i], np.roll(first, i)) for i in range(1, H.shape[0]))

    def var_degree(self, j: int) -> int:
        return len(self.var_neighbors[j])

    def check_degree(self, i: int) -> int:
        return len(self.check_neighbors[i])

    def __repr__(self) -> str:
        kind = "cyclic" if self.cyclic else "general"
        return (
            f"TannerGraph({kind}, {self.n_checks} checks x {self.n_vars} vars, "
            f"{self.n_edges} edges)"
        )


def build_graph(H: np.ndarray) -> TannerGraph:
    """Build the Tanner graph of a parity matrix."""
    return TannerGraph(H)
