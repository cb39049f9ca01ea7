"""Pure-Python evaluation kernels, used when the compiled core is absent.

Single evaluations walk the gate list directly.  Batch evaluations are
columnar: each gate's value is a vector over all input rows, so numpy
does the per-row work.
"""

from __future__ import annotations

import numpy as np

OP_INPUT, OP_CONST0, OP_CONST1, OP_AND, OP_OR, OP_NOT = range(6)


def eval_single(ops, args, bits):
    """Evaluate one input vector; returns the full per-gate value list."""
    values = [0] * len(ops)
    for g, op in enumerate(ops):
        a = args[g]
        if op == OP_AND:
            v = 1
            for idx in a:
                if not values[idx]:
                    v = 0
                    break
        elif op == OP_OR:
            v = 0
            for idx in a:
                if values[idx]:
                    v = 1
                    break
        elif op == OP_NOT:
            v = 1 - values[a[0]]
        elif op == OP_INPUT:
            v = 1 if bits[a[0]] else 0
        elif op == OP_CONST1:
            v = 1
        else:
            v = 0
        values[g] = v
    return values


def eval_batch(ops, args, out_ids, inputs):
    """Evaluate many rows at once; returns a (rows, outputs) uint8 array."""
    rows = inputs.shape[0]
    ones = np.ones(rows, dtype=np.uint8)
    zeros = np.zeros(rows, dtype=np.uint8)
    vals: list[np.ndarray] = [zeros] * len(ops)
    for g, op in enumerate(ops):
        a = args[g]
        if op == OP_AND:
            v = vals[a[0]]
            for idx in a[1:]:
                v = v & vals[idx]
        elif op == OP_OR:
            v = vals[a[0]]
            for idx in a[1:]:
                v = v | vals[idx]
        elif op == OP_NOT:
            v = vals[a[0]] ^ 1
        elif op == OP_INPUT:
            v = inputs[:, a[0]]
        elif op == OP_CONST1:
            v = ones
        else:
            v = zeros
        vals[g] = v
    if not out_ids:
        return np.zeros((rows, 0), dtype=np.uint8)
    return np.stack([vals[o] for o in out_ids], axis=1).astype(np.uint8, copy=False)
