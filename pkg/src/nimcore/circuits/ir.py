"""Boolean-circuit IR: unbounded fan-in AND/OR, NOT, inputs and constants.

Gates live in a topologically ordered list and reference earlier gates by
index, which makes the DAG acyclic by construction, evaluation a single
forward sweep, and the text serialization canonical (identical circuits
serialize to identical bytes).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import CircuitFormatError, EncodingError
from .kernels import BACKEND, HAVE_FAST, _fast, pure

INPUT = "INPUT"
CONST0 = "CONST0"
CONST1 = "CONST1"
AND = "AND"
OR = "OR"
NOT = "NOT"

LOGIC_KINDS = (AND, OR, NOT)
_OPCODES = {INPUT: 0, CONST0: 1, CONST1: 2, AND: 3, OR: 4, NOT: 5}


@dataclass(frozen=True)
class Gate:
    kind: str
    args: tuple[int, ...] = ()


@dataclass(frozen=True)
class CircuitMetrics:
    depth: int
    size: int
    fan_in_max: int


class _Program:
    """Flattened gate arrays shared by both evaluation kernels."""

    __slots__ = ("ops", "args", "np_ops", "np_arg_off", "np_args", "np_out", "out_ids")

    def __init__(self, circuit: "Circuit"):
        ops: list[int] = []
        args: list[tuple[int, ...]] = []
        slot = 0
        for g in circuit.gates:
            ops.append(_OPCODES[g.kind])
            if g.kind == INPUT:
                args.append((slot,))
                slot += 1
            else:
                args.append(g.args)
        self.ops = ops
        self.args = args
        self.out_ids = list(circuit.outputs)
        self.np_ops = np.array(ops, dtype=np.uint8)
        flat: list[int] = []
        off = [0]
        for a in args:
            flat.extend(a)
            off.append(len(flat))
        self.np_arg_off = np.array(off, dtype=np.intc)
        self.np_args = np.array(flat, dtype=np.intc)
        self.np_out = np.array(self.out_ids, dtype=np.intc)


class Circuit:
    """Immutable layered circuit; safe to evaluate from any thread."""

    __slots__ = ("gates", "outputs", "input_arity", "_program")

    def __init__(self, gates: Sequence[Gate], outputs: Sequence[int], input_arity: int):
        gates = tuple(gates)
        outputs = tuple(outputs)
        n_inputs = 0
        for idx, g in enumerate(gates):
            if g.kind not in _OPCODES:
                raise CircuitFormatError(f"gate g{idx} has unknown kind {g.kind!r}")
            if g.kind in (INPUT, CONST0, CONST1):
                if g.args:
                    raise CircuitFormatError(f"gate g{idx} ({g.kind}) takes no operands")
                if g.kind == INPUT:
                    n_inputs += 1
            elif g.kind == NOT:
                if len(g.args) != 1:
                    raise CircuitFormatError(f"NOT gate g{idx} needs exactly one operand")
            else:
                if len(g.args) < 1:
                    raise CircuitFormatError(f"{g.kind} gate g{idx} needs at least one operand")
            for a in g.args:
                if not 0 <= a < idx:
                    raise CircuitFormatError(
                        f"gate g{idx} references g{a}, which is not an earlier gate"
                    )
        if n_inputs != input_arity:
            raise CircuitFormatError(
                f"circuit declares {input_arity} inputs but has {n_inputs} INPUT gates"
            )
        if not outputs:
            raise CircuitFormatError("circuit needs at least one output")
        for o in outputs:
            if not 0 <= o < len(gates):
                raise CircuitFormatError(f"output references unknown gate g{o}")
        self.gates = gates
        self.outputs = outputs
        self.input_arity = input_arity
        self._program = None

    def _ensure_program(self) -> _Program:
        if self._program is None:
            self._program = _Program(self)
        return self._program

    def gate_depths(self) -> list[int]:
        """Per-gate depth counting AND/OR/NOT gates along the longest path."""
        depths = [0] * len(self.gates)
        for idx, g in enumerate(self.gates):
            if g.kind in LOGIC_KINDS:
                depths[idx] = 1 + max((depths[a] for a in g.args), default=0)
            elif g.args:
                depths[idx] = max(depths[a] for a in g.args)
        return depths

    def metrics(self) -> CircuitMetrics:
        depths = self.gate_depths()
        size = 0
        fan_in = 0
        for g in self.gates:
            if g.kind in LOGIC_KINDS:
                size += 1
                if len(g.args) > fan_in:
                    fan_in = len(g.args)
        return CircuitMetrics(max(depths, default=0), size, fan_in)

    def evaluate(self, bits: Sequence[int]) -> tuple[int, ...]:
        """Run one input vector through the circuit."""
        if len(bits) != self.input_arity:
            raise EncodingError(
                f"circuit takes {self.input_arity} input bits, got {len(bits)}"
            )
        prog = self._ensure_program()
        if HAVE_FAST:
            arr = np.asarray(bits, dtype=np.uint8).reshape(1, -1)
            out = np.empty((1, len(prog.out_ids)), dtype=np.uint8)
            values = np.empty(len(prog.ops), dtype=np.uint8)
            _fast.run_batch(
                prog.np_ops, prog.np_arg_off, prog.np_args, prog.np_out, arr, out, values
            )
            return tuple(int(x) for x in out[0])
        values = pure.eval_single(prog.ops, prog.args, bits)
        return tuple(values[o] for o in prog.out_ids)

    def evaluate_batch(self, rows) -> np.ndarray:
        """Run many input vectors; returns a (rows, outputs) uint8 array.

        Small batches go through the compiled row loop when it is built;
        large ones use the columnar evaluator, which vectorizes across
        rows and wins past a few hundred of them (see benchmarks/).
        """
        arr = np.ascontiguousarray(rows, dtype=np.uint8)
        if arr.ndim != 2 or arr.shape[1] != self.input_arity:
            raise EncodingError(
                f"batch must have shape (rows, {self.input_arity}), got {arr.shape}"
            )
        prog = self._ensure_program()
        if HAVE_FAST and arr.shape[0] < 256:
            out = np.empty((arr.shape[0], len(prog.out_ids)), dtype=np.uint8)
            values = np.empty(len(prog.ops), dtype=np.uint8)
            _fast.run_batch(
                prog.np_ops, prog.np_arg_off, prog.np_args, prog.np_out, arr, out, values
            )
            return out
        return pure.eval_batch(prog.ops, prog.args, prog.out_ids, arr)


@dataclass
class Ac0Report:
    ok: bool
    violations: list[str]


def validate_ac0(c: Circuit, depth_bound: int, size_bound: int) -> Ac0Report:
    """Check depth/size bounds, naming the offending gates."""
    violations: list[str] = []
    for idx, d in enumerate(c.gate_depths()):
        if d > depth_bound:
            violations.append(f"gate g{idx} sits at depth {d}, above bound {depth_bound}")
    m = c.metrics()
    if m.size > size_bound:
        violations.append(f"size {m.size} exceeds bound {size_bound}")
    return Ac0Report(not violations, violations)


_HEADER = re.compile(r"^ac0 v1 inputs=(\d+) outputs=([\d,]+)$")
_GATE_LINE = re.compile(r"^g(\d+) ([A-Z01]+)((?: \d+)*)$")


def serialize(c: Circuit) -> str:
    lines = [
        "ac0 v1 inputs=%d outputs=%s" % (c.input_arity, ",".join(map(str, c.outputs)))
    ]
    for i, g in enumerate(c.gates):
        if g.args:
            lines.append("g%d %s %s" % (i, g.kind, " ".join(map(str, g.args))))
        else:
            lines.append("g%d %s" % (i, g.kind))
    return "\n".join(lines) + "\n"


def parse(text: str) -> Circuit:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise CircuitFormatError("empty circuit text")
    m = _HEADER.match(lines[0])
    if not m:
        raise CircuitFormatError(f"bad header line: {lines[0]!r}")
    input_arity = int(m.group(1))
    outputs = tuple(int(x) for x in m.group(2).split(","))
    gates: list[Gate] = []
    for lineno, line in enumerate(lines[1:], start=2):
        gm = _GATE_LINE.match(line)
        if not gm:
            raise CircuitFormatError(f"line {lineno}: cannot parse {line!r}")
        gid = int(gm.group(1))
        if gid != len(gates):
            raise CircuitFormatError(
                f"line {lineno}: expected gate g{len(gates)}, found g{gid}"
            )
        args = tuple(int(x) for x in gm.group(3).split()) if gm.group(3) else ()
        gates.append(Gate(gm.group(2), args))
    return Circuit(gates, outputs, input_arity)


def save_circuit(c: Circuit, path) -> None:
    Path(path).write_text(serialize(c))


def load_circuit(path) -> Circuit:
    return parse(Path(path).read_text())


__all__ = [
    "AND",
    "BACKEND",
    "Ac0Report",
    "CONST0",
    "CONST1",
    "Circuit",
    "CircuitMetrics",
    "Gate",
    "INPUT",
    "NOT",
    "OR",
    "load_circuit",
    "parse",
    "save_circuit",
    "serialize",
    "validate_ac0",
]
