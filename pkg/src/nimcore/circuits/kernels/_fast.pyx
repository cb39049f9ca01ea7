# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled gate-evaluation kernel.

Opcode table matches kernels.pure: 0 INPUT, 1 CONST0, 2 CONST1, 3 AND,
4 OR, 5 NOT.  Gates are topologically ordered so a single forward sweep
per row suffices.
"""


def run_batch(const unsigned char[:] ops,
              const int[:] arg_off,
              const int[:] args,
              const int[:] out_ids,
              const unsigned char[:, :] inputs,
              unsigned char[:, :] outputs,
              unsigned char[:] values):
    cdef Py_ssize_t rows = inputs.shape[0]
    cdef Py_ssize_t n_gates = ops.shape[0]
    cdef Py_ssize_t n_out = out_ids.shape[0]
    cdef Py_ssize_t r, g, k
    cdef int op, lo, hi
    cdef unsigned char v
    for r in range(rows):
        for g in range(n_gates):
            op = ops[g]
            lo = arg_off[g]
            hi = arg_off[g + 1]
            if op == 3:  # AND
                v = 1
                for k in range(lo, hi):
                    if values[args[k]] == 0:
                        v = 0
                        break
            elif op == 4:  # OR
                v = 0
                for k in range(lo, hi):
                    if values[args[k]] != 0:
                        v = 1
                        break
            elif op == 5:  # NOT
                v = 1 - values[args[lo]]
            elif op == 0:  # INPUT
                v = inputs[r, args[lo]]
            elif op == 2:  # CONST1
                v = 1
            else:  # CONST0
                v = 0
            values[g] = v
        for k in range(n_out):
            outputs[r, k] = values[out_ids[k]]
