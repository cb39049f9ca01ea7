"""Impartial-game engine: NIM, subtraction games and Kayles.

Positions are immutable heap vectors.  Grundy numbers and the win/loss
oracle are computed by two independent memoized recursions so that each
can cross-check the other (and the closed-form NIM arithmetic in
:mod:`nimcore.nimber`).

All operations here are pure.  Memo tables are plain dicts whose
single-key updates are atomic under the GIL, and every entry is a
deterministic function of its key, so concurrent callers always observe
bit-identical results regardless of thread count.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import IllegalMoveError, InvalidPositionError, MemoLimitError

DEFAULT_MEMO_CAP = 1 << 22


class Variant(enum.Enum):
    NIM = "nim"
    SUBTRACTION = "subtraction"
    KAYLES = "kayles"


@dataclass(frozen=True)
class GameRules:
    """A rule set: the variant plus the heap-size bound used by encoders."""

    variant: Variant
    max_heap_size: int = 255
    removal_set: frozenset[int] | None = None

    def __post_init__(self):
        if self.max_heap_size < 1:
            raise ValueError("max_heap_size must be positive")
        if self.variant is Variant.SUBTRACTION:
            if not self.removal_set:
                raise ValueError("a subtraction game needs a non-empty removal set")
            if any(r < 1 for r in self.removal_set):
                raise ValueError("every allowed removal must be >= 1")
            object.__setattr__(self, "removal_set", frozenset(self.removal_set))
        elif self.removal_set is not None:
            raise ValueError(f"{self.variant.value} does not take a removal set")

    @property
    def game_id(self) -> str:
        if self.variant is Variant.SUBTRACTION:
            return "subtraction(%s)" % ",".join(map(str, sorted(self.removal_set)))
        return self.variant.value

    @classmethod
    def nim(cls, max_heap_size: int = 255) -> "GameRules":
        return cls(Variant.NIM, max_heap_size)

    @classmethod
    def subtraction(cls, removals: Iterable[int], max_heap_size: int = 255) -> "GameRules":
        return cls(Variant.SUBTRACTION, max_heap_size, frozenset(removals))

    @classmethod
    def kayles(cls, max_heap_size: int = 255) -> "GameRules":
        return cls(Variant.KAYLES, max_heap_size)


@dataclass(frozen=True)
class Position:
    """Heap-count vector plus the identifier of the rule set it belongs to.

    The heap list never shrinks during NIM or subtraction play: emptied
    heaps stay as zeros so move indices remain stable.  Kayles rows may
    split, which appends the new row at the end.
    """

    heaps: tuple[int, ...]
    game_id: str = "nim"

    def __post_init__(self):
        object.__setattr__(self, "heaps", tuple(self.heaps))
        if not self.heaps:
            raise InvalidPositionError("a position needs at least one heap")
        for i, h in enumerate(self.heaps):
            if h < 0:
                raise InvalidPositionError(f"heap {i} has negative count {h}")

    @property
    def total(self) -> int:
        return sum(self.heaps)

    @classmethod
    def from_text(cls, text: str, game_id: str = "nim") -> "Position":
        try:
            heaps = tuple(int(part) for part in text.split(","))
        except ValueError:
            raise InvalidPositionError(f"cannot parse position {text!r}") from None
        return cls(heaps, game_id)

    def to_text(self) -> str:
        return ",".join(map(str, self.heaps))


@dataclass(frozen=True, order=True)
class GameMove:
    """Reduce heap ``heap_index`` to ``new_count``.

    ``split_count`` is only used by Kayles: taking pins from the middle of
    a row leaves two rows, the in-place ``new_count`` and an appended row
    of ``split_count`` pins.  It is 0 for NIM and subtraction games.

    Field order doubles as the deterministic tie-break ordering used by
    every agent (lowest heap index, then lowest new count).
    """

    heap_index: int
    new_count: int
    split_count: int = 0


class WinLoss(enum.Enum):
    WIN = "win"
    LOSS = "loss"


def validate_position(p: Position, rules: GameRules) -> None:
    if p.game_id != rules.game_id:
        raise InvalidPositionError(
            f"position belongs to {p.game_id!r}, rules are {rules.game_id!r}"
        )
    for i, h in enumerate(p.heaps):
        if h > rules.max_heap_size:
            raise InvalidPositionError(
                f"heap {i} has {h} objects, above the rule bound {rules.max_heap_size}"
            )


def _iter_moves(heaps: tuple[int, ...], rules: GameRules) -> Iterator[GameMove]:
    variant = rules.variant
    if variant is Variant.NIM:
        for i, c in enumerate(heaps):
            for v in range(c):
                yield GameMove(i, v)
    elif variant is Variant.SUBTRACTION:
        removals = sorted(rules.removal_set)
        for i, c in enumerate(heaps):
            for r in removals:
                if r <= c:
                    yield GameMove(i, c - r)
    else:  # Kayles: remove 1 or 2 adjacent pins, possibly splitting the row
        for i, c in enumerate(heaps):
            for taken in (1, 2):
                if taken > c:
                    continue
                rest = c - taken
                # canonical split: the kept row is the larger piece
                for small in range(rest // 2 + 1):
                    yield GameMove(i, rest - small, small)


def legal_moves(p: Position, rules: GameRules) -> list[GameMove]:
    """All legal moves, duplicate-free; empty exactly at terminal positions."""
    validate_position(p, rules)
    return list(_iter_moves(p.heaps, rules))


def is_terminal(p: Position, rules: GameRules) -> bool:
    validate_position(p, rules)
    return next(_iter_moves(p.heaps, rules), None) is None


def apply_move(p: Position, m: GameMove, rules: GameRules) -> Position:
    """Apply ``m`` to ``p``, rejecting illegal moves with a reason."""
    validate_position(p, rules)
    heaps = p.heaps
    if not 0 <= m.heap_index < len(heaps):
        raise IllegalMoveError(f"heap index {m.heap_index} out of range")
    old = heaps[m.heap_index]
    if not 0 <= m.new_count < old:
        raise IllegalMoveError(
            f"heap {m.heap_index} must strictly decrease ({old} -> {m.new_count})"
        )
    if rules.variant is Variant.KAYLES:
        if not 0 <= m.split_count <= m.new_count:
            raise IllegalMoveError("kayles split must satisfy 0 <= split <= new_count")
        removed = old - m.new_count - m.split_count
        if removed not in (1, 2):
            raise IllegalMoveError("kayles removes exactly one or two adjacent pins")
    else:
        if m.split_count:
            raise IllegalMoveError("split moves only exist in kayles")
        if rules.variant is Variant.SUBTRACTION:
            removed = old - m.new_count
            if removed not in rules.removal_set:
                raise IllegalMoveError(f"removal of {removed} objects is not allowed")
    new = heaps[: m.heap_index] + (m.new_count,) + heaps[m.heap_index + 1 :]
    if m.split_count:
        new = new + (m.split_count,)
    return Position(new, p.game_id)


def mex(values: Iterable[int]) -> int:
    """Minimal excludant: smallest non-negative integer absent from ``values``."""
    present = set(values)
    m = 0
    while m in present:
        m += 1
    return m


def _apply_key(key: tuple[int, ...], m: GameMove) -> tuple[int, ...]:
    new = list(key)
    new[m.heap_index] = m.new_count
    if m.split_count:
        new.append(m.split_count)
    return tuple(sorted(new))


class GrundySolver:
    """Memoized Grundy-number and win/loss evaluation for one rule set.

    Memo keys are sorted heap tuples: all supported variants have
    permutation-invariant values and symmetric move sets, which shrinks
    the state space dramatically.  Tables are capacity-bounded; hitting
    the cap raises instead of silently evicting so results stay
    reproducible.
    """

    def __init__(self, rules: GameRules, memo_cap: int = DEFAULT_MEMO_CAP):
        self.rules = rules
        self.memo_cap = memo_cap
        self._grundy: dict[tuple[int, ...], int] = {}
        self._outcome: dict[tuple[int, ...], WinLoss] = {}

    def _canon(self, p: Position) -> tuple[int, ...]:
        validate_position(p, self.rules)
        return tuple(sorted(p.heaps))

    def _successor_keys(self, key: tuple[int, ...]) -> list[tuple[int, ...]]:
        return sorted({_apply_key(key, m) for m in _iter_moves(key, self.rules)})

    def _reserve(self, table: dict) -> None:
        if len(table) >= self.memo_cap:
            raise MemoLimitError(
                f"memo table reached its cap of {self.memo_cap} entries; "
                "construct a GrundySolver with a larger memo_cap"
            )

    def grundy(self, p: Position) -> int:
        return self._grundy_key(self._canon(p))

    def _grundy_key(self, key: tuple[int, ...]) -> int:
        memo = self._grundy
        if key in memo:
            return memo[key]
        stack = [key]
        while stack:
            k = stack[-1]
            if k in memo:
                stack.pop()
                continue
            succ = self._successor_keys(k)
            missing = [s for s in succ if s not in memo]
            if missing:
                stack.extend(missing)
            else:
                self._reserve(memo)
                memo[k] = mex(memo[s] for s in succ)
                stack.pop()
        return memo[key]

    def win_loss(self, p: Position) -> WinLoss:
        """Exhaustive game-value oracle, independent of Grundy numbers.

        A position is a WIN for the player to move iff some successor is
        a LOSS; terminal positions are LOSSes (the previous mover took
        the last object).
        """
        return self._win_loss_key(self._canon(p))

    def _win_loss_key(self, key: tuple[int, ...]) -> WinLoss:
        memo = self._outcome
        if key in memo:
            return memo[key]
        stack = [key]
        while stack:
            k = stack[-1]
            if k in memo:
                stack.pop()
                continue
            succ = self._successor_keys(k)
            missing = [s for s in succ if s not in memo]
            if missing:
                stack.extend(missing)
            else:
                self._reserve(memo)
                if any(memo[s] is WinLoss.LOSS for s in succ):
                    memo[k] = WinLoss.WIN
                else:
                    memo[k] = WinLoss.LOSS
                stack.pop()
        return memo[key]


_SOLVERS: dict[GameRules, GrundySolver] = {}


def solver_for(rules: GameRules) -> GrundySolver:
    try:
        return _SOLVERS[rules]
    except KeyError:
        return _SOLVERS.setdefault(rules, GrundySolver(rules))


def grundy(p: Position, rules: GameRules) -> int:
    """Grundy number (nimber) of ``p``: mex over the successors' values."""
    return solver_for(rules).grundy(p)


def win_loss_oracle(p: Position, rules: GameRules) -> WinLoss:
    """Brute-force WIN/LOSS value of ``p`` for the player to move."""
    return solver_for(rules).win_loss(p)


def disjunctive_sum(p: Position, q: Position) -> Position:
    """Compound position where a move is made in exactly one component."""
    if p.game_id != q.game_id:
        raise InvalidPositionError(
            f"cannot sum positions from different games ({p.game_id!r} vs {q.game_id!r})"
        )
    return Position(p.heaps + q.heaps, p.game_id)
