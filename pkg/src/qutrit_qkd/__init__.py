"""Intercept-resend QKD with several eavesdroppers, for qubits and biphoton qutrits."""

from .chain import SimConfig, SimulationStats, exact_enumeration, run_round, simulate
from .information import (
    AttackVector,
    InfoReport,
    ProtocolParams,
    chain_fidelity,
    info_report,
    intercept_pattern_weight,
    mutual_info,
    p_ab,
    p_ab_uniform,
    p_ae,
    p_ae_uniform,
    quantum_error,
)
from .mubs import MubTable, born_probabilities, evolution_phases, mub_table, phase_states

__version__ = "0.1.0"
