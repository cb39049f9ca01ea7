"""Playing policies.

The interesting one is :class:`MultiFrameAgent`: it evaluates each
candidate move by rolling the game forward while answering every
opponent move with a value-preserving reply, computed purely from the
(at most two) heaps that changed.  A candidate whose rollouts all end in
wins without a preservation failure is a safe move; the agent never
needs the global NIM sum of the board it is searching.

The mirror agents implement the two paired-heap demonstration
strategies for boards of duplicated components plus one odd heap.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from math import prod

from .circuits.builders import build_even_nonempty_scorer
from .circuits.encoding import PositionEncoding
from .circuits.ir import Circuit
from .errors import (
    ContractViolationError,
    EncodingError,
    IllegalMoveError,
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
    solver_for,
)
from .nimber import winning_moves

_MASK64 = (1 << 64) - 1


def stable_mix(*parts: int) -> int:
    """Deterministic 64-bit hash of an int sequence (splitmix64 folding).

    Used to derive independent RNG seeds; stable across runs and
    platforms, unlike built-in hashing.
    """
    acc = 0x9E3779B97F4A7C15
    for p in parts:
        acc = (acc ^ (p & _MASK64)) & _MASK64
        acc = (acc + 0x9E3779B97F4A7C15) & _MASK64
        acc = ((acc ^ (acc >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        acc = ((acc ^ (acc >> 27)) * 0x94D049BB133111EB) & _MASK64
        acc = acc ^ (acc >> 31)
    return acc


@dataclass(frozen=True)
class FrameHistory:
    """The most recent positions of a game, oldest first, plus the moves
    linking consecutive frames."""

    frames: tuple[Position, ...]
    moves: tuple[GameMove, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "frames", tuple(self.frames))
        object.__setattr__(self, "moves", tuple(self.moves))
        if not self.frames:
            raise ValueError("history needs at least one frame")
        if len(self.moves) != len(self.frames) - 1:
            raise ValueError("history needs exactly one move between consecutive frames")

    @property
    def current(self) -> Position:
        return self.frames[-1]

    @classmethod
    def start(cls, p: Position) -> "FrameHistory":
        return cls((p,))

    def advance(
        self, move: GameMove, new_pos: Position, keep: int | None = None
    ) -> "FrameHistory":
        """Extended history; pass ``keep`` to truncate to that many frames."""
        frames = self.frames + (new_pos,)
        moves = self.moves + (move,)
        if keep is not None and len(frames) > keep:
            frames = frames[-keep:]
            moves = moves[-(keep - 1) :] if keep > 1 else ()
        return FrameHistory(frames, moves)

    def last_k(self, k: int) -> "FrameHistory":
        """View of the newest ``k`` frames (everything when k < 1)."""
        if k < 1 or k >= len(self.frames):
            return self
        return FrameHistory(self.frames[-k:], self.moves[-(k - 1):] if k > 1 else ())


class AgentPolicy:
    """Base playing policy.

    ``required_frames`` tells the match driver how much history to hand
    over (0 means the full transcript).  ``choose`` must return a move
    legal in the newest frame; stochastic policies draw from the supplied
    generator so matches replay exactly from a seed.
    """

    name = "agent"
    required_frames = 1

    def choose(self, history: FrameHistory, rng: random.Random) -> GameMove:
        raise NotImplementedError


class OracleAgent(AgentPolicy):
    """Perfect play: a value-zero move when one exists, else the
    tie-break-minimal legal move."""

    def __init__(self, rules: GameRules):
        self.rules = rules
        self.name = "oracle"

    def choose(self, history: FrameHistory, rng: random.Random) -> GameMove:
        p = history.current
        moves = legal_moves(p, self.rules)
        if not moves:
            raise IllegalMoveError("no legal moves from a terminal position")
        if self.rules.variant is Variant.NIM:
            wins = winning_moves(p)
            return min(wins) if wins else min(moves)
        solver = solver_for(self.rules)
        zeroing = [m for m in moves if solver.grundy(apply_move(p, m, self.rules)) == 0]
        return min(zeroing) if zeroing else min(moves)


class RandomAgent(AgentPolicy):
    name = "random"

    def __init__(self, rules: GameRules):
        self.rules = rules

    def choose(self, history: FrameHistory, rng: random.Random) -> GameMove:
        moves = legal_moves(history.current, self.rules)
        if not moves:
            raise IllegalMoveError("no legal moves from a terminal position")
        return moves[rng.randrange(len(moves))]


class ScriptAgent(AgentPolicy):
    """Plays a fixed move list; running out of script forfeits."""

    name = "script"
    required_frames = 0  # needs the full transcript to count its own turns

    def __init__(self, moves):
        self.moves = tuple(moves)

    def choose(self, history: FrameHistory, rng: random.Random) -> GameMove:
        index = len(history.moves) // 2
        if index >= len(self.moves):
            raise IllegalMoveError("scripted move list exhausted")
        return self.moves[index]


class SingleFrameCircuitAgent(AgentPolicy):
    """Scores candidate moves with a circuit over the current frame only.

    The circuit sees one encoded position and emits one score bit per
    candidate slot.  The agent picks the highest-scoring legal candidate
    (ties broken lowest heap, lowest new count).  This is the history-free
    baseline; no optimality is claimed for it.
    """

    def __init__(self, circuit: Circuit, n: int, l: int, name: str = "singleframe"):
        enc = PositionEncoding(n, l, frames=1)
        if circuit.input_arity != enc.frame_bits:
            raise EncodingError(
                f"circuit takes {circuit.input_arity} bits, frame encoding has {enc.frame_bits}"
            )
        if len(circuit.outputs) != enc.slot_count:
            raise EncodingError(
                f"circuit emits {len(circuit.outputs)} scores, expected {enc.slot_count} slots"
            )
        self.circuit = circuit
        self.enc = enc
        self.name = name

    @classmethod
    def heuristic(cls, n: int, l: int) -> "SingleFrameCircuitAgent":
        """The even-nonempty-heap-count heuristic baseline."""
        return cls(build_even_nonempty_scorer(n, l), n, l, name="singleframe-heuristic")

    def choose(self, history: FrameHistory, rng: random.Random) -> GameMove:
        heaps = history.current.heaps
        scores = self.circuit.evaluate(self.enc.encode_heaps(heaps))
        best: GameMove | None = None
        best_score = -1
        for i, c in enumerate(heaps):
            for v in range(c):
                s = scores[self.enc.candidate_slot(i, v)]
                if s > best_score:
                    best, best_score = GameMove(i, v), s
        if best is None:
            raise IllegalMoveError("no legal moves from a terminal position")
        return best


def _diff_indices(a: tuple[int, ...], b: tuple[int, ...]) -> list[int]:
    return [i for i, (x, y) in enumerate(zip(a, b)) if x != y]


def _single_diff(a: Position, b: Position) -> int:
    if len(a.heaps) != len(b.heaps):
        raise ContractViolationError("positions must have the same length")
    d = _diff_indices(a.heaps, b.heaps)
    if len(d) != 1:
        raise ContractViolationError(
            f"positions must differ in exactly one heap, found {len(d)} differences"
        )
    return d[0]


def _reply_restore(pb: tuple[int, ...], q: tuple[int, ...], d: int):
    """Reply from q cancelling the value change of the move pb -> q.

    Only the changed heap d and the reply heap are touched: the reply on
    heap r must satisfy (pb[d] ^ q[d]) ^ (q[r] ^ v) == 0, i.e. v is
    determined per heap and at most one candidate per heap is legal.
    Returns (heap, new_count) or None; lowest heap index wins.
    """
    delta = pb[d] ^ q[d]
    for r in range(len(q)):
        v = pb[d] if r == d else q[r] ^ delta
        if v < q[r]:
            return (r, v)
    return None


def preserving_reply(p_before: Position, q_after: Position) -> GameMove | None:
    """Reply to the opponent move (p_before -> q_after) that restores the
    value held at p_before, or None when no such reply exists."""
    d = _single_diff(p_before, q_after)
    hit = _reply_restore(p_before.heaps, q_after.heaps, d)
    return GameMove(*hit) if hit else None


def _reply_matching_change(q: tuple[int, ...], target: int):
    """Reply from q whose own value change equals ``target``, or None."""
    for r in range(len(q)):
        v = q[r] ^ target
        if v < q[r]:
            return (r, v)
    return None


def preserving_reply_literal(
    p_prev: Position, p_own: Position, q_after: Position
) -> GameMove | None:
    """Alternate preservation reading: the reply's value change must equal
    the change of the agent's own earlier move (p_prev -> p_own).

    This condition does not restore the pre-opponent value, so it does not
    carry the win guarantee of :func:`preserving_reply`; it exists for
    comparison.
    """
    a = _single_diff(p_prev, p_own)
    _single_diff(p_own, q_after)
    hit = _reply_matching_change(q_after.heaps, p_prev.heaps[a] ^ p_own.heaps[a])
    return GameMove(*hit) if hit else None


class RolloutResult(enum.Enum):
    AGENT = "agent"
    OPPONENT = "opponent"
    CAPPED = "capped"


@dataclass(frozen=True)
class RolloutOutcome:
    winner: RolloutResult
    preservation_failed: bool
    plies: int
    transcript: tuple[GameMove, ...]


@dataclass(frozen=True)
class RolloutBudget:
    """Search effort knobs for the multi-frame agent.

    Boards whose state-count bound (product of heap+1) fits under
    ``exhaustive_cap`` get a full adversary sweep per candidate; larger
    boards get ``samples`` seeded random-opponent rollouts plus, when
    ``oracle_probe`` is set, one deterministic perfect-opponent rollout.
    The probe costs one playout and refutes every non-preserving
    candidate, which pure random sampling cannot guarantee.
    """

    exhaustive_cap: int = 512
    samples: int = 8
    ply_cap: int = 512
    oracle_probe: bool = True


def _opp_oracle(heaps: tuple[int, ...], rng) -> tuple[int, int]:
    s = 0
    for h in heaps:
        s ^= h
    if s:
        for i, h in enumerate(heaps):
            t = h ^ s
            if t < h:
                return (i, t)
    for i, h in enumerate(heaps):
        if h:
            return (i, 0)
    raise IllegalMoveError("no legal moves from a terminal position")


def _opp_random(heaps: tuple[int, ...], rng: random.Random) -> tuple[int, int]:
    total = sum(heaps)
    if not total:
        raise IllegalMoveError("no legal moves from a terminal position")
    k = rng.randrange(total)
    for i, h in enumerate(heaps):
        if k < h:
            return (i, k)
        k -= h
    raise AssertionError("unreachable")


def _fast_rollout(pb, opp, rng, ply_cap):
    """Tuple-level preserving rollout; returns (result, failed, plies)."""
    plies = 0
    while True:
        if not any(pb):
            return RolloutResult.AGENT, False, plies
        if plies >= ply_cap:
            return RolloutResult.CAPPED, False, plies
        i, v = opp(pb, rng)
        q = pb[:i] + (v,) + pb[i + 1 :]
        plies += 1
        if not any(q):
            return RolloutResult.OPPONENT, False, plies
        if plies >= ply_cap:
            return RolloutResult.CAPPED, False, plies
        hit = _reply_restore(pb, q, i)
        if hit is None:
            return RolloutResult.OPPONENT, True, plies
        r, w = hit
        pb = q[:r] + (w,) + q[r + 1 :]
        plies += 1


def rollout(
    history: FrameHistory,
    opponent: AgentPolicy,
    seed: int,
    ply_cap: int,
    mode: str = "restore",
) -> RolloutOutcome:
    """Play out a line from the newest frame (a position the agent just
    moved to), answering every opponent move with a preserving reply.

    Ends at a terminal position, on preservation failure (scored
    pessimistically as an opponent win), or at the ply cap (reported as
    its own outcome, distinct from a win or loss).  ``mode`` selects the
    preservation predicate: "restore" (default, cancels the opponent's
    change) or "literal" (matches the agent's original move change; no
    win guarantee).
    """
    if mode not in ("restore", "literal"):
        raise ValueError(f"unknown rollout mode {mode!r}")
    anchor = history.current
    rules = GameRules.nim(max(255, max(anchor.heaps, default=1)))
    target = 0
    if mode == "literal":
        if len(history.frames) < 2:
            raise ContractViolationError(
                "literal mode needs the agent's own move in history"
            )
        # literal mode compares every reply against the change of the
        # initiating move, fixed for the whole playout
        own = _single_diff(history.frames[-2], history.frames[-1])
        target = history.frames[-2].heaps[own] ^ history.frames[-1].heaps[own]
    rng = random.Random(seed)
    hist = history
    transcript: list[GameMove] = []
    plies = 0
    failed = False
    winner = RolloutResult.AGENT
    while True:
        cur = hist.current
        if is_terminal(cur, rules):
            winner = RolloutResult.AGENT
            break
        if plies >= ply_cap:
            winner = RolloutResult.CAPPED
            break
        move = opponent.choose(hist.last_k(opponent.required_frames), rng)
        q = apply_move(cur, move, rules)
        transcript.append(move)
        plies += 1
        hist = hist.advance(move, q)
        if is_terminal(q, rules):
            winner = RolloutResult.OPPONENT
            break
        if plies >= ply_cap:
            winner = RolloutResult.CAPPED
            break
        if mode == "restore":
            reply = preserving_reply(anchor, q)
        else:
            hit = _reply_matching_change(q.heaps, target)
            reply = GameMove(*hit) if hit else None
        if reply is None:
            failed = True
            winner = RolloutResult.OPPONENT
            break
        nxt = apply_move(q, reply, rules)
        transcript.append(reply)
        plies += 1
        hist = hist.advance(reply, nxt)
        if mode == "restore":
            anchor = nxt
    return RolloutOutcome(winner, failed, plies, tuple(transcript))


class MultiFrameAgent(AgentPolicy):
    """Value-preserving rollout agent for NIM.

    For each candidate move it asks: starting from the candidate, do all
    rollouts end in wins with every reply preserving value?  The first
    candidate (tie-break order) that qualifies is played; if none does,
    the candidate with the best win fraction is.  Decisions depend only
    on the current position, so they are cached.
    """

    name = "multiframe"
    required_frames = 2

    def __init__(self, budget: RolloutBudget | None = None, seed: int = 0):
        self.budget = budget or RolloutBudget()
        self.seed = seed
        self._decisions: dict[tuple[int, ...], GameMove] = {}
        self._exhaustive: dict[tuple[int, ...], bool] = {}

    def choose(self, history: FrameHistory, rng: random.Random) -> GameMove:
        heaps = history.current.heaps
        if not any(heaps):
            raise IllegalMoveError("no legal moves from a terminal position")
        cached = self._decisions.get(heaps)
        if cached is None:
            cached = self._decide(heaps)
            self._decisions[heaps] = cached
        return cached

    def _decide(self, heaps: tuple[int, ...]) -> GameMove:
        exhaustive = prod(c + 1 for c in heaps) <= self.budget.exhaustive_cap
        fallback: GameMove | None = None
        fallback_frac = -1.0
        for ci, (i, v) in enumerate(
            (i, v) for i, c in enumerate(heaps) for v in range(c)
        ):
            child = heaps[:i] + (v,) + heaps[i + 1 :]
            if exhaustive:
                ok = self._all_lines_win(child)
                frac = 1.0 if ok else 0.0
            else:
                ok, frac = self._sampled(child, ci)
            if ok:
                return GameMove(i, v)
            if frac > fallback_frac:
                fallback, fallback_frac = GameMove(i, v), frac
        assert fallback is not None
        return fallback

    def _all_lines_win(self, pb: tuple[int, ...]) -> bool:
        """Exhaustive adversary below ``pb``: every opponent line must end
        with the agent's reply taking the last object, never failing
        preservation."""
        if not any(pb):
            return True
        memo = self._exhaustive
        hit = memo.get(pb)
        if hit is not None:
            return hit
        result = True
        for i, c in enumerate(pb):
            for v in range(c):
                q = pb[:i] + (v,) + pb[i + 1 :]
                if not any(q):
                    result = False
                    break
                reply = _reply_restore(pb, q, i)
                if reply is None:
                    result = False
                    break
                r, w = reply
                if not self._all_lines_win(q[:r] + (w,) + q[r + 1 :]):
                    result = False
                    break
            if not result:
                break
        memo[pb] = result
        return result

    def _sampled(self, child: tuple[int, ...], ci: int) -> tuple[bool, float]:
        wins = 0
        total = 0
        if self.budget.oracle_probe:
            res, _, _ = _fast_rollout(child, _opp_oracle, None, self.budget.ply_cap)
            total += 1
            if res is RolloutResult.AGENT:
                wins += 1
            else:
                return False, wins / total
        for s in range(self.budget.samples):
            rng = random.Random(stable_mix(self.seed, len(child), *child, ci, s))
            res, _, _ = _fast_rollout(child, _opp_random, rng, self.budget.ply_cap)
            total += 1
            if res is RolloutResult.AGENT:
                wins += 1
        if total == 0:
            return False, 0.0
        return wins == total, wins / total


class Mirror71Agent(AgentPolicy):
    """Pair-parity strategy for boards of 2k single-object heaps plus one
    heap of two.

    Opening as first player empties the two-object heap, leaving an even
    number of singles; afterwards every move keeps the count of non-empty
    singles even.  Only positions reachable from that family are accepted.
    """

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.name = f"mirror71:{k}"

    def choose(self, history: FrameHistory, rng: random.Random) -> GameMove:
        heaps = history.current.heaps
        if len(heaps) != 2 * self.k + 1:
            raise StrategyDomainError(
                f"expected {2 * self.k + 1} heaps, got {len(heaps)}"
            )
        if any(h > 2 for h in heaps):
            raise StrategyDomainError("heaps above two objects are outside the family")
        twos = [i for i, h in enumerate(heaps) if h == 2]
        if len(twos) > 1:
            raise StrategyDomainError("more than one two-object heap")
        ones = sum(1 for h in heaps if h == 1)
        if twos:
            return GameMove(twos[0], 0) if ones % 2 == 0 else GameMove(twos[0], 1)
        for i, h in enumerate(heaps):
            if h:
                return GameMove(i, 0)
        raise IllegalMoveError("no legal moves from a terminal position")


class Mirror72Agent(AgentPolicy):
    """Duplication strategy for boards of 2k two-object heaps plus one
    heap of three (heaps i and k+i are paired; the odd heap sits last).

    First-player mode empties the odd heap, then mirrors the opponent
    inside the paired heaps.  Second-player mode starts from the losing
    side: it converts any winning position the opponent leaves, and while
    still losing it follows the scripted plan (drop the first heap to
    one, split the view into the small two-heap subgame and the remaining
    pairs, duplicate on the pairs, answer in the small subgame when the
    opponent plays there).
    """

    required_frames = 2

    def __init__(self, k: int, role: str = "first"):
        if k < 1:
            raise ValueError("k must be >= 1")
        if role not in ("first", "second"):
            raise ValueError("role must be 'first' or 'second'")
        self.k = k
        self.role = role
        self.name = f"mirror72:{k}:{role}"

    @property
    def initial(self) -> tuple[int, ...]:
        return (2,) * (2 * self.k) + (3,)

    def _validate(self, heaps: tuple[int, ...]) -> None:
        k = self.k
        if len(heaps) != 2 * k + 1:
            raise StrategyDomainError(f"expected {2 * k + 1} heaps, got {len(heaps)}")
        if any(h > 2 for h in heaps[:-1]) or heaps[-1] > 3:
            raise StrategyDomainError("position is outside the duplication family")

    def choose(self, history: FrameHistory, rng: random.Random) -> GameMove:
        heaps = history.current.heaps
        self._validate(heaps)
        k = self.k
        odd = 2 * k
        if self.role == "first":
            if heaps == self.initial:
                return GameMove(odd, 0)
            for i in range(k):
                a, b = heaps[i], heaps[k + i]
                if a != b:
                    return GameMove(i if a > b else k + i, min(a, b))
            if heaps[odd]:
                return GameMove(odd, 0)
            raise StrategyDomainError("no duplication move available")

        # second player: grab any win the opponent leaves, else play the plan
        s = 0
        for h in heaps:
            s ^= h
        if s:
            return min(winning_moves(Position(heaps)))
        if heaps[0] == 2:
            return GameMove(0, 1)
        last = None
        if len(history.frames) >= 2:
            changed = _diff_indices(history.frames[-2].heaps, heaps)
            if len(changed) == 1:
                last = changed[0]
        if last is not None and last not in (0, k, odd):
            partner = last + k if last < k else last - k
            if heaps[partner] > heaps[last]:
                return GameMove(partner, heaps[last])
        if last in (0, k, odd):
            for idx in (0, k, odd):
                if heaps[idx]:
                    return GameMove(idx, heaps[idx] - 1)
        for i, h in enumerate(heaps):
            if h:
                return GameMove(i, 0)
        raise IllegalMoveError("no legal moves from a terminal position")
