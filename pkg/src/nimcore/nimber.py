"""Closed-form NIM arithmetic and the local nimber-difference primitive.

The key identity: for two equal-length positions, XOR contributions from
identical heaps cancel, so the difference of their NIM values equals the
XOR of per-heap differences over the changed heaps only.  When at most a
constant number of heaps changed, that is a constant-size computation,
which is what makes it circuit-friendly (see ``circuits.builders``).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractViolationError, InvalidPositionError
from .games import GameMove, Position

NIM_ID = "nim"
DEFAULT_K_MAX = 2


def bit_width(max_heap_size: int) -> int:
    """Bits needed to encode every count in 0..max_heap_size (at least 1)."""
    if max_heap_size < 0:
        raise ValueError("max_heap_size must be non-negative")
    return max(1, int(max_heap_size).bit_length())


def _require_nim(p: Position) -> None:
    if p.game_id != NIM_ID:
        raise InvalidPositionError(
            f"NIM-sum arithmetic applies to NIM positions, got {p.game_id!r}"
        )


def nim_sum(p: Position) -> int:
    """Bitwise XOR fold of the heap sizes."""
    _require_nim(p)
    s = 0
    for h in p.heaps:
        s ^= h
    return s


def is_winning(p: Position) -> bool:
    """True iff the player to move can force a win (NIM sum non-zero)."""
    return nim_sum(p) != 0


def winning_moves(p: Position) -> list[GameMove]:
    """Exactly the moves that leave the opponent a zero NIM sum.

    For each heap there is at most one candidate, ``heap XOR s``, legal
    when it is an actual decrease; the list is empty iff ``p`` is losing.
    """
    _require_nim(p)
    s = 0
    for h in p.heaps:
        s ^= h
    if s == 0:
        return []
    out = []
    for i, h in enumerate(p.heaps):
        t = h ^ s
        if t < h:
            out.append(GameMove(i, t))
    return out


@dataclass(frozen=True)
class DiffMask:
    """Indices of the heaps where two positions differ, strictly increasing."""

    changed: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "changed", tuple(self.changed))
        if any(b <= a for a, b in zip(self.changed, self.changed[1:])):
            raise ValueError("diff mask indices must be strictly increasing")

    def __len__(self) -> int:
        return len(self.changed)


def diff_mask(p1: Position, p2: Position) -> DiffMask:
    """Which heaps changed between two equal-length positions."""
    if len(p1.heaps) != len(p2.heaps):
        raise InvalidPositionError(
            f"positions have different lengths ({len(p1.heaps)} vs {len(p2.heaps)})"
        )
    return DiffMask(
        tuple(i for i, (a, b) in enumerate(zip(p1.heaps, p2.heaps)) if a != b)
    )


def nimber_diff(p1: Position, p2: Position, k_max: int = DEFAULT_K_MAX) -> int:
    """XOR of per-heap differences over the changed heaps.

    Equals ``nim_sum(p1) ^ nim_sum(p2)`` but only touches the heaps that
    actually differ.  The bounded-difference contract is enforced eagerly:
    more than ``k_max`` changed heaps raises, because callers that rely on
    the constant-size property must notice they broke it.
    """
    mask = diff_mask(p1, p2)
    if len(mask) > k_max:
        raise ContractViolationError(
            f"positions differ in {len(mask)} heaps, above the k_max={k_max} contract"
        )
    acc = 0
    for i in mask.changed:
        acc ^= p1.heaps[i] ^ p2.heaps[i]
    return acc
