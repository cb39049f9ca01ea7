"""Match driver, exhaustive adversary sweeps and seeded experiment tables.

Everything is reproducible from a seed: per-game seeds are derived with a
stable mixer, agents draw randomness only from the match generator, and
result rows are ordered by (heap count, agent, game index) regardless of
how matches were scheduled.
"""

from __future__ import annotations

import csv
import io
import json
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import nimber
from .agents import (
    AgentPolicy,
    FrameHistory,
    Mirror71Agent,
    Mirror72Agent,
    MultiFrameAgent,
    OracleAgent,
    RandomAgent,
    RolloutBudget,
    ScriptAgent,
    SingleFrameCircuitAgent,
    stable_mix,
)
from .circuits.ir import load_circuit
from .errors import (
    ContractViolationError,
    EncodingError,
    IllegalMoveError,
    InvalidPositionError,
    NimcoreError,
    StrategyDomainError,
)
from .games import (
    GameMove,
    GameRules,
    Position,
    Variant,
    apply_move,
    is_terminal,
    legal_moves,
)

RNG_ALGORITHM = "mersenne-twister (CPython random.Random)"
THREADS_ENV = "NIMCORE_THREADS"

_AGENT_FAILURES = (
    IllegalMoveError,
    StrategyDomainError,
    EncodingError,
    ContractViolationError,
    InvalidPositionError,
)


@dataclass(frozen=True)
class MoveDiagnostic:
    """Outside-view instrumentation of one move (NIM only): the position
    value before and after, measured by the oracle-side NIM sum."""

    mover: str
    nim_sum_before: int | None
    nim_sum_after: int | None


@dataclass
class MatchRecord:
    rules_id: str
    start: tuple[int, ...]
    first: str
    second: str
    seed: int
    moves: list[GameMove]
    winner: str  # "first" | "second"
    forfeit: str | None
    diagnostics: list[MoveDiagnostic]

    def to_json(self) -> dict:
        return {
            "rules": self.rules_id,
            "start": list(self.start),
            "first": self.first,
            "second": self.second,
            "seed": self.seed,
            "moves": [_move_text(m) for m in self.moves],
            "winner": self.winner,
            "forfeit": self.forfeit,
            "diagnostics": [
                {
                    "mover": d.mover,
                    "nim_sum_before": d.nim_sum_before,
                    "nim_sum_after": d.nim_sum_after,
                }
                for d in self.diagnostics
            ],
        }


def _move_text(m: GameMove) -> str:
    if m.split_count:
        return f"{m.heap_index}:{m.new_count}:{m.split_count}"
    return f"{m.heap_index}:{m.new_count}"


def parse_move(text: str) -> GameMove:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ValueError(f"cannot parse move {text!r}, expected heap:new[:split]")
    return GameMove(*(int(p) for p in parts))


def _history_for(history: FrameHistory, agent: AgentPolicy) -> FrameHistory:
    return history.last_k(agent.required_frames)


def play_match(
    rules: GameRules,
    start: Position,
    first: AgentPolicy,
    second: AgentPolicy,
    seed: int,
) -> MatchRecord:
    """Alternating play to a terminal position; the last mover wins.

    An agent raising or returning an illegal move forfeits (the record
    carries the reason); the game never crashes on a buggy policy.
    """
    if is_terminal(start, rules):
        raise IllegalMoveError("match needs a non-terminal start position")
    rng = random.Random(seed)
    names = (first.name, second.name)
    seats = ("first", "second")
    agents = (first, second)
    history = FrameHistory.start(start)
    moves: list[GameMove] = []
    diagnostics: list[MoveDiagnostic] = []
    mover = 0
    forfeit = None
    while True:
        p = history.current
        if is_terminal(p, rules):
            winner = seats[1 - mover]
            break
        agent = agents[mover]
        try:
            move = agent.choose(_history_for(history, agent), rng)
            nxt = apply_move(p, move, rules)
        except _AGENT_FAILURES as exc:
            winner = seats[1 - mover]
            forfeit = f"{seats[mover]} ({names[mover]}): {exc}"
            break
        if rules.variant is Variant.NIM:
            diagnostics.append(
                MoveDiagnostic(seats[mover], nimber.nim_sum(p), nimber.nim_sum(nxt))
            )
        else:
            diagnostics.append(MoveDiagnostic(seats[mover], None, None))
        moves.append(move)
        history = history.advance(move, nxt)
        mover = 1 - mover
    return MatchRecord(
        rules.game_id, start.heaps, names[0], names[1], seed, moves, winner, forfeit, diagnostics
    )


def replay_match(rules: GameRules, record: MatchRecord) -> str:
    """Re-apply the transcript and return the winner seat it implies."""
    p = Position(record.start, rules.game_id)
    for m in record.moves:
        p = apply_move(p, m, rules)
    if record.forfeit is not None:
        return record.winner
    if not is_terminal(p, rules):
        raise NimcoreError("transcript does not reach a terminal position")
    return "first" if len(record.moves) % 2 == 1 else "second"


@dataclass
class AdversaryReport:
    agent_always_wins: bool
    counterexample: list[GameMove] | None
    nodes: int
    complete: bool


class _NodeBudgetExceeded(Exception):
    pass


def exhaustive_adversary(
    rules: GameRules,
    start: Position,
    agent: AgentPolicy,
    role: str = "first",
    node_budget: int = 500_000,
) -> AdversaryReport:
    """Check the agent against every opposing line below ``start``.

    The adversary enumerates all of its moves; the agent plays its policy
    (with a fixed generator, so the sweep is deterministic).  Reports the
    first losing line as a counterexample.  Exceeding the node budget
    yields an explicit partial result instead of an answer.
    """
    if role not in ("first", "second"):
        raise ValueError("role must be 'first' or 'second'")
    if is_terminal(start, rules):
        raise IllegalMoveError("adversary sweep needs a non-terminal start")
    nodes = 0

    def walk(history: FrameHistory, agent_to_move: bool) -> tuple[bool, list[GameMove]]:
        nonlocal nodes
        p = history.current
        if is_terminal(p, rules):
            # the previous mover took the last object
            return (not agent_to_move, [])
        if agent_to_move:
            try:
                move = agent.choose(_history_for(history, agent), random.Random(0))
                nxt = apply_move(p, move, rules)
            except _AGENT_FAILURES:
                return (False, [])
            ok, line = walk(history.advance(move, nxt), False)
            return (ok, [move] + line)
        for move in legal_moves(p, rules):
            nodes += 1
            if nodes > node_budget:
                raise _NodeBudgetExceeded
            nxt = apply_move(p, move, rules)
            ok, line = walk(history.advance(move, nxt), True)
            if not ok:
                return (False, [move] + line)
        return (True, [])

    try:
        ok, line = walk(FrameHistory.start(start), role == "first")
    except _NodeBudgetExceeded:
        return AdversaryReport(False, None, nodes, complete=False)
    return AdversaryReport(ok, None if ok else line, nodes, complete=True)


@dataclass
class ExperimentConfig:
    """One tournament sweep: (heap count x agent) cells of seeded games."""

    rules: GameRules
    heap_counts: list[int]
    max_heap_size: int
    agents: list[str]
    opponent: str
    games_per_cell: int
    seed: int
    start_mode: str = "winning"  # winning | any
    budget: RolloutBudget = field(default_factory=RolloutBudget)
    out_dir: str | None = None

    def __post_init__(self):
        if not self.heap_counts or not self.agents:
            raise ValueError("heap_counts and agents must be non-empty")
        if self.games_per_cell < 0:
            raise ValueError("games_per_cell must be >= 0")
        if self.seed is None:
            raise ValueError("a seed is mandatory")
        if self.start_mode not in ("winning", "any"):
            raise ValueError("start_mode must be 'winning' or 'any'")

    @classmethod
    def from_json(cls, doc: dict) -> "ExperimentConfig":
        budget = doc.get("budget", {})
        return cls(
            rules=parse_rules(doc.get("rules", "nim"), int(doc.get("max_heap_size", 255))),
            heap_counts=list(doc["heap_counts"]),
            max_heap_size=int(doc.get("max_heap_size", 255)),
            agents=list(doc["agents"]),
            opponent=doc.get("opponent", "oracle"),
            games_per_cell=int(doc["games_per_cell"]),
            seed=int(doc["seed"]),
            start_mode=doc.get("start_mode", "winning"),
            budget=RolloutBudget(
                exhaustive_cap=int(budget.get("exhaustive_cap", 512)),
                samples=int(budget.get("samples", 8)),
                ply_cap=int(budget.get("ply_cap", 512)),
                oracle_probe=bool(budget.get("oracle_probe", True)),
            ),
            out_dir=doc.get("out_dir"),
        )

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        return cls.from_json(json.loads(Path(path).read_text()))


def parse_rules(text: str, max_heap_size: int = 255) -> GameRules:
    """Parse a rules spec: ``nim``, ``kayles`` or ``subtraction:1,2``."""
    text = text.strip().lower()
    if text == "nim":
        return GameRules.nim(max_heap_size)
    if text == "kayles":
        return GameRules.kayles(max_heap_size)
    if text.startswith("subtraction:"):
        removals = [int(x) for x in text.split(":", 1)[1].split(",") if x]
        return GameRules.subtraction(removals, max_heap_size)
    raise ValueError(f"unknown rules spec {text!r}")


def make_agent(
    spec: str,
    rules: GameRules,
    *,
    heap_count: int | None = None,
    budget: RolloutBudget | None = None,
    seed: int = 0,
) -> AgentPolicy:
    """Build an agent from its CLI name.

    Recognized specs: ``oracle``, ``random``, ``multiframe``,
    ``singleframe-heuristic``, ``singleframe:<circuit-file>``,
    ``mirror71:<k>``, ``mirror72:<k>:<role>`` and
    ``script:<h:v[;h:v...]>``.
    """
    if spec == "oracle":
        return OracleAgent(rules)
    if spec == "random":
        return RandomAgent(rules)
    if spec == "multiframe":
        return MultiFrameAgent(budget or RolloutBudget(), seed=seed)
    if spec == "singleframe-heuristic":
        if heap_count is None:
            raise ValueError("singleframe-heuristic needs the board's heap count")
        return SingleFrameCircuitAgent.heuristic(heap_count, nimber.bit_width(rules.max_heap_size))
    if spec.startswith("singleframe:"):
        path = spec.split(":", 1)[1]
        if heap_count is None:
            raise ValueError("singleframe circuits need the board's heap count")
        return SingleFrameCircuitAgent(
            load_circuit(path), heap_count, nimber.bit_width(rules.max_heap_size)
        )
    if spec.startswith("mirror71:"):
        return Mirror71Agent(int(spec.split(":", 1)[1]))
    if spec.startswith("mirror72:"):
        _, k, role = spec.split(":")
        return Mirror72Agent(int(k), role)
    if spec.startswith("script:"):
        body = spec.split(":", 1)[1]
        return ScriptAgent([parse_move(part) for part in body.split(";") if part])
    raise ValueError(f"unknown agent spec {spec!r}")


@dataclass(frozen=True)
class ExperimentRow:
    heap_count: int
    agent: str
    games: int
    wins: int
    win_rate: float
    mean_plies: float
    preservation_failures: int


CSV_COLUMNS = (
    "heap_count",
    "agent",
    "games",
    "wins",
    "win_rate",
    "mean_plies",
    "preservation_failures",
)


def _draw_start(rules: GameRules, heap_count: int, max_size: int, seed: int, winning: bool) -> Position:
    rng = random.Random(seed)
    while True:
        heaps = tuple(rng.randint(1, max_size) for _ in range(heap_count))
        p = Position(heaps, rules.game_id)
        if not winning:
            return p
        if rules.variant is Variant.NIM and nimber.nim_sum(p) != 0:
            return p
        if rules.variant is not Variant.NIM:
            return p


def _preservation_failures(record: MatchRecord) -> int:
    # squandered wins by the first seat: it held a non-zero value and left one
    count = 0
    for d in record.diagnostics:
        if d.mover != "first" or d.nim_sum_before is None:
            continue
        if d.nim_sum_before != 0 and d.nim_sum_after != 0:
            count += 1
    return count


def run_experiment(cfg: ExperimentConfig) -> list[ExperimentRow]:
    """Run the sweep; returns ordered rows and writes CSV/JSON when
    ``cfg.out_dir`` is set.  Byte-identical output for identical configs."""
    cells = [(hc, ai) for hc in cfg.heap_counts for ai in range(len(cfg.agents))]
    matches: dict[tuple[int, int, int], MatchRecord] = {}

    def run_cell(cell: tuple[int, int]) -> list[tuple[tuple[int, int, int], MatchRecord]]:
        hc, ai = cell
        agent_seed = stable_mix(cfg.seed, hc, ai)
        agent = make_agent(
            cfg.agents[ai], cfg.rules, heap_count=hc, budget=cfg.budget, seed=agent_seed
        )
        opponent = make_agent(
            cfg.opponent, cfg.rules, heap_count=hc, budget=cfg.budget, seed=agent_seed + 1
        )
        out = []
        for gi in range(cfg.games_per_cell):
            game_seed = stable_mix(cfg.seed, hc, ai, gi)
            start = _draw_start(
                cfg.rules, hc, cfg.max_heap_size, game_seed, cfg.start_mode == "winning"
            )
            record = play_match(cfg.rules, start, agent, opponent, seed=game_seed)
            out.append(((hc, ai, gi), record))
        return out

    workers = int(os.environ.get(THREADS_ENV, "1") or "1")
    if workers > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(run_cell, cells):
                for key, record in chunk:
                    matches[key] = record
    else:
        for cell in cells:
            for key, record in run_cell(cell):
                matches[key] = record

    rows: list[ExperimentRow] = []
    for hc in cfg.heap_counts:
        for ai, agent_spec in enumerate(cfg.agents):
            cell_records = [matches[(hc, ai, gi)] for gi in range(cfg.games_per_cell)]
            games = len(cell_records)
            wins = sum(1 for r in cell_records if r.winner == "first")
            plies = [len(r.moves) for r in cell_records]
            failures = sum(_preservation_failures(r) for r in cell_records)
            rows.append(
                ExperimentRow(
                    hc,
                    agent_spec,
                    games,
                    wins,
                    wins / games if games else 0.0,
                    sum(plies) / games if games else 0.0,
                    failures,
                )
            )
    if cfg.out_dir is not None:
        _write_outputs(cfg, rows, matches)
    return rows


def rows_to_csv(rows: list[ExperimentRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow(
            [
                r.heap_count,
                r.agent,
                r.games,
                r.wins,
                f"{r.win_rate:.4f}",
                f"{r.mean_plies:.2f}",
                r.preservation_failures,
            ]
        )
    return buf.getvalue()


def _write_outputs(cfg, rows, matches) -> None:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_text(rows_to_csv(rows))
    doc = {
        "metadata": {
            "rng": RNG_ALGORITHM,
            "seed": cfg.seed,
            "rules": cfg.rules.game_id,
            "opponent": cfg.opponent,
            "start_mode": cfg.start_mode,
        },
        "rows": [
            {
                "heap_count": r.heap_count,
                "agent": r.agent,
                "games": r.games,
                "wins": r.wins,
                "win_rate": round(r.win_rate, 4),
                "mean_plies": round(r.mean_plies, 2),
                "preservation_failures": r.preservation_failures,
            }
            for r in rows
        ],
        "matches": [
            matches[key].to_json() for key in sorted(matches)
        ],
    }
    (out / "results.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
