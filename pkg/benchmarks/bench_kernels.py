"""Benchmark: compiled evaluation kernel vs the pure-Python fallback.

Measures the two workloads that matter in practice: single evaluations
(an agent scoring one position per move) and batched evaluation (the
verification sweeps).  Run as ``python3 benchmarks/bench_kernels.py``.
"""

import random
import time

import numpy as np

from nimcore.circuits.builders import (
    build_move_validator_circuit,
    build_nimber_diff_circuit,
)
from nimcore.circuits.encoding import PositionEncoding
from nimcore.circuits.kernels import HAVE_FAST, pure

if HAVE_FAST:
    from nimcore.circuits.kernels import _fast


def pure_single(prog, bits):
    values = pure.eval_single(prog.ops, prog.args, bits)
    return tuple(values[o] for o in prog.out_ids)


def fast_single(prog, arr1, out1, values):
    _fast.run_batch(
        prog.np_ops, prog.np_arg_off, prog.np_args, prog.np_out, arr1, out1, values
    )
    return out1[0]


def bench(label, fn, repeats):
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    elapsed = time.perf_counter() - start
    per = elapsed / repeats
    print(f"  {label:28s} {per * 1e6:10.1f} us/call   ({repeats} calls, {elapsed:.2f}s)")
    return per


def main():
    rng = random.Random(1)
    cases = [
        ("nimber-diff n=8 l=8 k=2", build_nimber_diff_circuit(8, 8, 2)),
        (
            "move-validator n=6 l=4",
            build_move_validator_circuit(PositionEncoding(6, 4, 3), 2),
        ),
    ]
    batch_rows = 10_000
    for label, circuit in cases:
        prog = circuit._ensure_program()
        m = circuit.metrics()
        print(f"{label}: {len(circuit.gates)} gates, depth {m.depth}, size {m.size}")
        bits = [rng.randint(0, 1) for _ in range(circuit.input_arity)]
        batch = np.array(
            [
                [rng.randint(0, 1) for _ in range(circuit.input_arity)]
                for _ in range(batch_rows)
            ],
            dtype=np.uint8,
        )

        t_pure_single = bench("pure single eval", lambda: pure_single(prog, bits), 200)
        t_pure_batch = bench(
            f"pure batch ({batch_rows} rows)",
            lambda: pure.eval_batch(prog.ops, prog.args, prog.out_ids, batch),
            3,
        )
        if HAVE_FAST:
            arr1 = np.array([bits], dtype=np.uint8)
            out1 = np.empty((1, len(prog.out_ids)), dtype=np.uint8)
            values = np.empty(len(prog.ops), dtype=np.uint8)
            t_fast_single = bench(
                "compiled single eval", lambda: fast_single(prog, arr1, out1, values), 2000
            )
            out = np.empty((batch_rows, len(prog.out_ids)), dtype=np.uint8)

            def fast_batch():
                _fast.run_batch(
                    prog.np_ops, prog.np_arg_off, prog.np_args, prog.np_out,
                    batch, out, values,
                )

            t_fast_batch = bench(f"compiled batch ({batch_rows} rows)", fast_batch, 3)
            print(
                f"  speedup: single {t_pure_single / t_fast_single:6.1f}x, "
                f"batch {t_pure_batch / t_fast_batch:6.1f}x"
            )
        else:
            print("  compiled kernel not built; only the fallback was measured")
        print()


if __name__ == "__main__":
    main()
