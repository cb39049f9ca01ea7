"""nimcore: impartial games, constant-depth circuits, preserving rollouts.

The package covers the whole pipeline: exact game theory for NIM-like
games (Grundy numbers, win/loss oracles), the local nimber-difference
primitive, a boolean-circuit IR with constructive builders for the
fixed-depth subcircuits, constant-precision threshold networks with a
circuit compiler, playing agents (including the multi-frame
value-preserving rollout agent), and a reproducible experiment harness.
"""

from .circuits import (
    BACKEND,
    Circuit,
    CircuitMetrics,
    PositionEncoding,
    build_diff_mask_circuit,
    build_even_nonempty_scorer,
    build_move_validator_circuit,
    build_nimber_diff_circuit,
    threshold_at_least,
    validate_ac0,
    xor_word,
)
from .agents import (
    AgentPolicy,
    FrameHistory,
    Mirror71Agent,
    Mirror72Agent,
    MultiFrameAgent,
    OracleAgent,
    RandomAgent,
    RolloutBudget,
    RolloutOutcome,
    RolloutResult,
    SingleFrameCircuitAgent,
    preserving_reply,
    preserving_reply_literal,
    rollout,
)
from .games import (
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
from .harness import (
    ExperimentConfig,
    MatchRecord,
    exhaustive_adversary,
    make_agent,
    parse_rules,
    play_match,
    replay_match,
    run_experiment,
)
from .models import (
    ModelKind,
    ThresholdNetwork,
    certify_compilation,
    compile_to_ac0,
    eval_model,
)
from .nimber import (
    DiffMask,
    bit_width,
    diff_mask,
    is_winning,
    nim_sum,
    nimber_diff,
    winning_moves,
)
from .verify import verify_suite

__version__ = "0.1.0"

__all__ = [
    "AgentPolicy",
    "BACKEND",
    "Circuit",
    "CircuitMetrics",
    "DiffMask",
    "ExperimentConfig",
    "FrameHistory",
    "GameMove",
    "GameRules",
    "GrundySolver",
    "MatchRecord",
    "Mirror71Agent",
    "Mirror72Agent",
    "ModelKind",
    "MultiFrameAgent",
    "OracleAgent",
    "Position",
    "PositionEncoding",
    "RandomAgent",
    "RolloutBudget",
    "RolloutOutcome",
    "RolloutResult",
    "SingleFrameCircuitAgent",
    "ThresholdNetwork",
    "Variant",
    "WinLoss",
    "apply_move",
    "bit_width",
    "build_diff_mask_circuit",
    "build_even_nonempty_scorer",
    "build_move_validator_circuit",
    "build_nimber_diff_circuit",
    "certify_compilation",
    "compile_to_ac0",
    "diff_mask",
    "disjunctive_sum",
    "eval_model",
    "exhaustive_adversary",
    "grundy",
    "is_terminal",
    "is_winning",
    "legal_moves",
    "make_agent",
    "mex",
    "nim_sum",
    "nimber_diff",
    "parse_rules",
    "play_match",
    "preserving_reply",
    "preserving_reply_literal",
    "replay_match",
    "rollout",
    "run_experiment",
    "threshold_at_least",
    "validate_ac0",
    "verify_suite",
    "win_loss_oracle",
    "winning_moves",
    "xor_word",
]
