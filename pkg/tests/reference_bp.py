"""Deliberately naive scalar sum-product decoder used as a test oracle.

Implements the textbook update rules with dict-of-edges bookkeeping and
math.tanh, sharing no code or data layout with the package's vectorized
engines.  Kept slow and obvious on purpose.
"""

import math


def reference_bp(H, llr, t, llr_clip=20.0, eps=1e-7):
    n_checks = len(H)
    n_vars = len(H[0])
    rows = [[j for j in range(n_vars) if H[i][j]] for i in range(n_checks)]
    cols = [[i for i in range(n_checks) if H[i][j]] for j in range(n_vars)]
    L = [min(max(float(v), -llr_clip), llr_clip) for v in llr]

    c2v = {(i, j): 0.0 for i in range(n_checks) for j in rows[i]}
    for _ in range(t):
        v2c = {}
        for j in range(n_vars):
            for i in cols[j]:
                total = L[j] + sum(c2v[(i2, j)] for i2 in cols[j] if i2 != i)
                v2c[(i, j)] = math.tanh(0.5 * total)
        new_c2v = {}
        for i in range(n_checks):
            for j in rows[i]:
                prod = 1.0
                for j2 in rows[i]:
                    if j2 != j:
                        prod *= v2c[(i, j2)]
                prod = min(max(prod, -1.0 + eps), 1.0 - eps)
                new_c2v[(i, j)] = 2.0 * math.atanh(prod)
        c2v = new_c2v

    return [L[j] + sum(c2v[(i, j)] for i in cols[j]) for j in range(n_vars)]
