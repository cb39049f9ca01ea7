import itertools
import random
from concurrent.futures import ThreadPoolExecutor

import pytest

from nimcore.errors import (
    IllegalMoveError,
    InvalidPositionError,
    MemoLimitError,
)
from nimcore.games import (
    GameMove,
    GameRules,
    GrundySolver,
    Position,
    Variant,
    WinLoss,
    apply_move,
    disjunctive_sum,
    grundy,
    is_terminal,
    legal_moves,
    mex,
    win_loss_oracle,
)

from oracles import (
    brute_kayles_grundy,
    brute_nim_grundy,
    brute_nim_win,
    make_brute_grundy,
    subtraction_successors,
)

NIM8 = GameRules.nim(8)


class TestPosition:
    def test_basic(self):
        p = Position((3, 5, 7))
        assert p.heaps == (3, 5, 7)
        assert p.total == 15

    def test_rejects_negative_heap(self):
        with pytest.raises(InvalidPositionError):
            Position((1, -2))

    def test_rejects_empty(self):
        with pytest.raises(InvalidPositionError):
            Position(())

    def test_text_round_trip(self):
        p = Position.from_text("3,5,7")
        assert p.heaps == (3, 5, 7)
        assert p.to_text() == "3,5,7"

    def test_bad_text(self):
        with pytest.raises(InvalidPositionError):
            Position.from_text("3,x")


class TestRules:
    def test_subtraction_requires_removals(self):
        with pytest.raises(ValueError):
            GameRules(Variant.SUBTRACTION)

    def test_game_ids(self):
        assert GameRules.nim().game_id == "nim"
        assert GameRules.kayles().game_id == "kayles"
        assert GameRules.subtraction({2, 1}).game_id == "subtraction(1,2)"

    def test_removals_must_be_positive(self):
        with pytest.raises(ValueError):
            GameRules.subtraction({0, 1})


class TestLegalMoves:
    def test_nim_single_heap(self):
        moves = legal_moves(Position((2,)), NIM8)
        assert set(moves) == {GameMove(0, 0), GameMove(0, 1)}

    def test_terminal_is_empty(self):
        assert legal_moves(Position((0, 0)), NIM8) == []
        assert is_terminal(Position((0, 0)), NIM8)

    def test_subtraction(self):
        rules = GameRules.subtraction({1, 2}, 8)
        moves = legal_moves(Position((3,), rules.game_id), rules)
        assert set(moves) == {GameMove(0, 2), GameMove(0, 1)}

    def test_subtraction_terminal_above_zero(self):
        rules = GameRules.subtraction({2}, 8)
        assert is_terminal(Position((1,), rules.game_id), rules)

    def test_kayles_splits(self):
        rules = GameRules.kayles(8)
        moves = legal_moves(Position((4,), rules.game_id), rules)
        # take 1: splits (3,0),(2,1); take 2: (2,0),(1,1)
        assert set(moves) == {
            GameMove(0, 3, 0),
            GameMove(0, 2, 1),
            GameMove(0, 2, 0),
            GameMove(0, 1, 1),
        }

    def test_duplicate_free(self):
        for rules in (NIM8, GameRules.kayles(8), GameRules.subtraction({1, 3}, 8)):
            p = Position((5, 3), rules.game_id)
            moves = legal_moves(p, rules)
            assert len(moves) == len(set(moves))

    def test_wrong_game_id_rejected(self):
        with pytest.raises(InvalidPositionError):
            legal_moves(Position((2,), "kayles"), NIM8)


class TestApplyMove:
    def test_single_heap_changes(self):
        p = apply_move(Position((3, 5, 7)), GameMove(2, 6), NIM8)
        assert p.heaps == (3, 5, 6)

    def test_more_examples(self):
        assert apply_move(Position((1,)), GameMove(0, 0), NIM8).heaps == (0,)
        assert apply_move(Position((2, 2)), GameMove(1, 0), NIM8).heaps == (2, 0)

    def test_rejects_out_of_range(self):
        with pytest.raises(IllegalMoveError, match="out of range"):
            apply_move(Position((3,)), GameMove(1, 0), NIM8)

    def test_rejects_non_decrease(self):
        with pytest.raises(IllegalMoveError, match="strictly decrease"):
            apply_move(Position((3,)), GameMove(0, 3), NIM8)

    def test_rejects_bad_removal(self):
        rules = GameRules.subtraction({1, 2}, 8)
        with pytest.raises(IllegalMoveError, match="not allowed"):
            apply_move(Position((5,), rules.game_id), GameMove(0, 1), rules)

    def test_kayles_split_appends_row(self):
        rules = GameRules.kayles(8)
        p = apply_move(Position((5,), rules.game_id), GameMove(0, 2, 1), rules)
        assert p.heaps == (2, 1)

    def test_closure_strictly_reduces_total(self):
        for rules in (NIM8, GameRules.kayles(8), GameRules.subtraction({1, 2}, 8)):
            p = Position((4, 3), rules.game_id)
            for m in legal_moves(p, rules):
                q = apply_move(p, m, rules)
                assert q.total < p.total
                # pre-existing heaps other than the moved one are unchanged
                for i in range(len(p.heaps)):
                    if i != m.heap_index:
                        assert q.heaps[i] == p.heaps[i]


class TestMex:
    @pytest.mark.parametrize(
        "values,expected",
        [(set(), 0), ({0, 1, 3}, 2), ({1, 2, 3}, 0), ({0, 1, 2}, 3)],
    )
    def test_examples(self, values, expected):
        assert mex(values) == expected


class TestGrundy:
    def test_single_nim_heap_is_itself(self):
        for n in range(9):
            assert grundy(Position((n,)), NIM8) == n

    def test_three_five_seven(self):
        assert grundy(Position((3, 5, 7)), NIM8) == 1

    def test_matches_brute_force_nim(self):
        for heaps in itertools.product(range(6), repeat=3):
            assert grundy(Position(heaps), NIM8) == brute_nim_grundy(heaps)

    def test_kayles_rows_match_independent_oracle(self):
        rules = GameRules.kayles(8)
        for row in range(9):
            engine = grundy(Position((row,), rules.game_id), rules)
            assert engine == brute_kayles_grundy((row,))

    def test_kayles_multirow_matches_oracle(self):
        rules = GameRules.kayles(6)
        for rows in itertools.product(range(5), repeat=2):
            assert grundy(Position(rows, rules.game_id), rules) == brute_kayles_grundy(rows)

    def test_subtraction_game_matches_oracle(self):
        rules = GameRules.subtraction({1, 2}, 21)
        oracle = make_brute_grundy(subtraction_successors({1, 2}))
        for n in range(22):
            assert grundy(Position((n,), rules.game_id), rules) == oracle((n,))

    def test_memo_cap_raises(self):
        solver = GrundySolver(GameRules.nim(8), memo_cap=3)
        with pytest.raises(MemoLimitError):
            solver.grundy(Position((3, 5, 7)))


class TestWinLossOracle:
    def test_terminal_is_loss(self):
        assert win_loss_oracle(Position((0, 0)), NIM8) is WinLoss.LOSS

    def test_single_object_wins(self):
        assert win_loss_oracle(Position((1,)), NIM8) is WinLoss.WIN

    def test_one_two_three_loses(self):
        assert win_loss_oracle(Position((1, 2, 3)), NIM8) is WinLoss.LOSS

    def test_matches_brute_force(self):
        for heaps in itertools.product(range(5), repeat=3):
            expected = WinLoss.WIN if brute_nim_win(heaps) else WinLoss.LOSS
            assert win_loss_oracle(Position(heaps), NIM8) is expected


class TestDisjunctiveSum:
    def test_concatenates(self):
        assert disjunctive_sum(Position((1, 2)), Position((3,))).heaps == (1, 2, 3)

    def test_grundy_is_xor(self):
        p, q = Position((1, 2)), Position((3,))
        s = disjunctive_sum(p, q)
        assert grundy(s, NIM8) == grundy(p, NIM8) ^ grundy(q, NIM8) == 0

    def test_mixed_variants_rejected(self):
        with pytest.raises(InvalidPositionError):
            disjunctive_sum(Position((1,)), Position((1,), "kayles"))


def test_thread_safety_bit_identical():
    solver = GrundySolver(NIM8)
    positions = [Position(h) for h in itertools.product(range(7), repeat=3)]
    sequential = [GrundySolver(NIM8).grundy(p) for p in positions]
    rng = random.Random(5)
    shuffled = positions[:]
    rng.shuffle(shuffled)
    with ThreadPoolExecutor(max_workers=4) as pool:
        list(pool.map(solver.grundy, shuffled))
    assert [solver.grundy(p) for p in positions] == sequential
