import random

import numpy as np
import pytest

from nimcore.circuits.ir import (
    AND,
    Circuit,
    Gate,
    INPUT,
    NOT,
    OR,
    parse,
    serialize,
    validate_ac0,
)
from nimcore.circuits.kernels import HAVE_FAST, pure
from nimcore.errors import CircuitFormatError, EncodingError


def and2():
    return Circuit([Gate(INPUT), Gate(INPUT), Gate(AND, (0, 1))], [2], 2)


def reference_eval(circuit, bits):
    """Definitional evaluator used to check both kernels."""
    values = []
    slot = 0
    for g in circuit.gates:
        if g.kind == INPUT:
            values.append(1 if bits[slot] else 0)
            slot += 1
        elif g.kind == "CONST0":
            values.append(0)
        elif g.kind == "CONST1":
            values.append(1)
        elif g.kind == AND:
            values.append(1 if all(values[a] for a in g.args) else 0)
        elif g.kind == OR:
            values.append(1 if any(values[a] for a in g.args) else 0)
        else:
            values.append(1 - values[g.args[0]])
    return tuple(values[o] for o in circuit.outputs)


def random_circuit(rng):
    n_inputs = rng.randint(2, 6)
    gates = [Gate(INPUT) for _ in range(n_inputs)]
    gates.append(Gate("CONST0"))
    gates.append(Gate("CONST1"))
    for _ in range(rng.randint(5, 50)):
        kind = rng.choice((AND, OR, NOT))
        if kind == NOT:
            args = (rng.randrange(len(gates)),)
        else:
            fan = rng.randint(1, min(6, len(gates)))
            args = tuple(rng.sample(range(len(gates)), fan))
        gates.append(Gate(kind, args))
    outputs = tuple(rng.randrange(len(gates)) for _ in range(rng.randint(1, 4)))
    return Circuit(gates, outputs, n_inputs)


class TestEvaluate:
    def test_and_gate(self):
        c = and2()
        assert c.evaluate([1, 1]) == (1,)
        assert c.evaluate([1, 0]) == (0,)

    def test_const_circuit(self):
        c = Circuit([Gate(INPUT), Gate("CONST1")], [1], 1)
        assert c.evaluate([0]) == (1,)
        assert c.evaluate([1]) == (1,)

    def test_arity_mismatch(self):
        with pytest.raises(EncodingError):
            and2().evaluate([1])

    def test_batch_matches_single(self):
        rng = random.Random(11)
        c = random_circuit(rng)
        rows = np.array(
            [[rng.randint(0, 1) for _ in range(c.input_arity)] for _ in range(64)],
            dtype=np.uint8,
        )
        batch = c.evaluate_batch(rows)
        for row, out in zip(rows, batch):
            assert tuple(out) == c.evaluate(list(row))

    def test_kernels_agree_with_reference(self):
        rng = random.Random(23)
        for _ in range(30):
            c = random_circuit(rng)
            prog = c._ensure_program()
            rows = [
                [rng.randint(0, 1) for _ in range(c.input_arity)] for _ in range(20)
            ]
            arr = np.array(rows, dtype=np.uint8)
            pure_out = pure.eval_batch(prog.ops, prog.args, prog.out_ids, arr)
            for bits, prow in zip(rows, pure_out):
                expected = reference_eval(c, bits)
                assert tuple(prow) == expected
                assert c.evaluate(bits) == expected

    @pytest.mark.skipif(not HAVE_FAST, reason="compiled kernel not built")
    def test_fast_kernel_matches_pure(self):
        from nimcore.circuits.kernels import _fast

        rng = random.Random(37)
        for _ in range(30):
            c = random_circuit(rng)
            prog = c._ensure_program()
            arr = np.array(
                [[rng.randint(0, 1) for _ in range(c.input_arity)] for _ in range(50)],
                dtype=np.uint8,
            )
            expected = pure.eval_batch(prog.ops, prog.args, prog.out_ids, arr)
            out = np.empty((arr.shape[0], len(prog.out_ids)), dtype=np.uint8)
            values = np.empty(len(prog.ops), dtype=np.uint8)
            _fast.run_batch(
                prog.np_ops, prog.np_arg_off, prog.np_args, prog.np_out, arr, out, values
            )
            assert np.array_equal(out, expected)


class TestStructure:
    def test_forward_reference_rejected(self):
        with pytest.raises(CircuitFormatError):
            Circuit([Gate(INPUT), Gate(AND, (0, 2)), Gate(INPUT)], [1], 2)

    def test_not_needs_one_operand(self):
        with pytest.raises(CircuitFormatError):
            Circuit([Gate(INPUT), Gate(NOT, ())], [1], 1)

    def test_input_count_must_match(self):
        with pytest.raises(CircuitFormatError):
            Circuit([Gate(INPUT)], [0], 2)

    def test_metrics(self):
        c = Circuit([Gate(INPUT) for _ in range(8)] + [Gate(AND, tuple(range(8)))], [8], 8)
        m = c.metrics()
        assert (m.depth, m.size, m.fan_in_max) == (1, 1, 8)


class TestValidateAc0:
    def test_not_chain_violation_names_gate(self):
        gates = [Gate(INPUT)]
        for i in range(10):
            gates.append(Gate(NOT, (i,)))
        c = Circuit(gates, [10], 1)
        report = validate_ac0(c, depth_bound=3, size_bound=100)
        assert not report.ok
        assert any("g4" in v and "depth 4" in v for v in report.violations)

    def test_size_bound_zero(self):
        report = validate_ac0(and2(), depth_bound=5, size_bound=0)
        assert not report.ok
        assert any("size" in v for v in report.violations)

    def test_ok_report(self):
        report = validate_ac0(and2(), depth_bound=1, size_bound=1)
        assert report.ok and report.violations == []

    def test_threshold_circuit_within_depth_two(self):
        from nimcore.circuits.builders import threshold_at_least

        report = validate_ac0(threshold_at_least(8, 2), depth_bound=2, size_bound=100)
        assert report.ok


class TestSerialization:
    def test_format(self):
        text = serialize(and2())
        assert text.splitlines()[0] == "ac0 v1 inputs=2 outputs=2"
        assert text.splitlines()[1] == "g0 INPUT"
        assert text.splitlines()[3] == "g2 AND 0 1"

    def test_round_trip_exact(self):
        rng = random.Random(3)
        for _ in range(25):
            c = random_circuit(rng)
            text = serialize(c)
            back = parse(text)
            assert serialize(back) == text
            assert back.metrics() == c.metrics()
            rows = np.array(
                [[rng.randint(0, 1) for _ in range(c.input_arity)] for _ in range(100)],
                dtype=np.uint8,
            )
            assert np.array_equal(c.evaluate_batch(rows), back.evaluate_batch(rows))

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "ac0 v2 inputs=1 outputs=0\ng0 INPUT",
            "ac0 v1 inputs=1 outputs=0\ng1 INPUT",
            "ac0 v1 inputs=1 outputs=0\ng0 XOR 0",
            "ac0 v1 inputs=1 outputs=5\ng0 INPUT",
        ],
    )
    def test_parse_errors(self, text):
        with pytest.raises(CircuitFormatError):
            parse(text)
