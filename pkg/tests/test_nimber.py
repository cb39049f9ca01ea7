import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nimcore.errors import ContractViolationError, InvalidPositionError
from nimcore.games import GameMove, GameRules, Position, WinLoss, apply_move, win_loss_oracle
from nimcore.nimber import (
    bit_width,
    diff_mask,
    is_winning,
    nim_sum,
    nimber_diff,
    winning_moves,
)

from oracles import xor_fold

NIM8 = GameRules.nim(8)


class TestNimSum:
    def test_worked_example(self):
        assert nim_sum(Position((3, 5, 7))) == 1

    def test_equal_pair_cancels(self):
        for k in range(20):
            assert nim_sum(Position((k, k))) == 0

    def test_all_zero(self):
        assert nim_sum(Position((0, 0, 0, 0))) == 0

    def test_rejects_non_nim(self):
        with pytest.raises(InvalidPositionError):
            nim_sum(Position((1, 2), "kayles"))

    @given(st.lists(st.integers(0, 1023), min_size=1, max_size=10))
    def test_matches_fold(self, heaps):
        assert nim_sum(Position(tuple(heaps))) == xor_fold(heaps)


class TestIsWinning:
    def test_examples(self):
        assert is_winning(Position((3, 5, 7)))
        assert not is_winning(Position((1, 2, 3)))
        assert not is_winning(Position((0,)))


class TestWinningMoves:
    def test_three_five_seven(self):
        assert winning_moves(Position((3, 5, 7))) == [
            GameMove(0, 2),
            GameMove(1, 4),
            GameMove(2, 6),
        ]

    def test_losing_position_has_none(self):
        assert winning_moves(Position((1, 2, 3))) == []

    def test_single_heap_takes_all(self):
        assert winning_moves(Position((5,))) == [GameMove(0, 0)]

    def test_every_winning_move_wins(self):
        for heaps in itertools.product(range(7), repeat=3):
            p = Position(heaps)
            for m in winning_moves(p):
                child = apply_move(p, m, NIM8)
                assert nim_sum(child) == 0
                assert win_loss_oracle(child, NIM8) is WinLoss.LOSS


class TestDiffMask:
    def test_single_change(self):
        assert diff_mask(Position((3, 5, 7)), Position((3, 5, 2))).changed == (2,)

    def test_identical(self):
        p = Position((4, 4))
        assert diff_mask(p, p).changed == ()

    def test_all_changed(self):
        assert diff_mask(Position((1, 1)), Position((0, 0))).changed == (0, 1)

    def test_length_mismatch(self):
        with pytest.raises(InvalidPositionError):
            diff_mask(Position((1,)), Position((1, 2)))


class TestNimberDiff:
    def test_example(self):
        assert nimber_diff(Position((3, 5, 7)), Position((3, 5, 2)), 1) == 5

    def test_identity(self):
        p = Position((9, 4, 2))
        assert nimber_diff(p, p) == 0

    def test_two_heap_example(self):
        assert nimber_diff(Position((3, 5, 7)), Position((2, 5, 6)), 2) == 0

    def test_contract_enforced(self):
        with pytest.raises(ContractViolationError):
            nimber_diff(Position((1, 2, 3)), Position((0, 0, 0)), 2)

    @settings(max_examples=200)
    @given(
        st.lists(st.integers(0, 255), min_size=3, max_size=10),
        st.data(),
    )
    def test_equals_global_difference(self, heaps, data):
        k = data.draw(st.integers(1, 3))
        idxs = data.draw(
            st.lists(
                st.integers(0, len(heaps) - 1), min_size=0, max_size=k, unique=True
            )
        )
        other = list(heaps)
        for i in idxs:
            other[i] = data.draw(st.integers(0, 255))
        p1, p2 = Position(tuple(heaps)), Position(tuple(other))
        assert nimber_diff(p1, p2, k) == nim_sum(p1) ^ nim_sum(p2)


class TestBitWidth:
    @pytest.mark.parametrize("m,l", [(0, 1), (1, 1), (7, 3), (8, 4), (15, 4), (255, 8)])
    def test_values(self, m, l):
        assert bit_width(m) == l

    def test_every_count_fits(self):
        for m in range(1, 300):
            assert m < (1 << bit_width(m))
