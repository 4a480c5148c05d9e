"""
Configuration management for the coexistence toolkit.

This module centralizes all configuration values and provides a clean interface
for accessing environment-specific settings.
"""

import os
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class CoexistenceConfig:
    """Configuration class for verification sweeps, sampling and search."""

    log_level: str = "INFO"

    # Exhaustive sweep caps
    max_s: int = 5
    exhaustive_threshold: int = 256
    diagram_max_a: int = 3
    preimage_sweep_limit: int = 16

    # Sampled verification
    sample_count: int = 100_000
    seed: int = 0

    # Backtracking search budget
    search_max_nodes: int = 1_000_000
    search_time_limit: float = 120.0

    # Reporting
    max_recorded_violations: int = 100
    result_log_path: Optional[str] = None

    @classmethod
    def from_environment(cls) -> 'CoexistenceConfig':
        """Create configuration from environment variables."""
        return cls(
            log_level=os.environ.get('COEXIST_LOG_LEVEL', 'INFO'),
            max_s=int(os.environ.get('COEXIST_MAX_S', '5')),
            sample_count=int(os.environ.get('COEXIST_SAMPLES', '100000')),
            seed=int(os.environ.get('COEXIST_SEED', '0')),
            search_max_nodes=int(os.environ.get('COEXIST_SEARCH_MAX_NODES', '1000000')),
            search_time_limit=float(os.environ.get('COEXIST_SEARCH_TIME_LIMIT', '120')),
            result_log_path=os.environ.get('COEXIST_RESULT_LOG') or None,
        )


# Effect algebra axioms
EFFECT_ALGEBRA_AXIOMS = {
    'E1': 'if a⊕b is defined, then b⊕a is defined and a⊕b = b⊕a',
    'E2': 'if a⊕b and (a⊕b)⊕c are defined, then b⊕c and a⊕(b⊕c) are defined and equal',
    'E3': "every a has a unique a' with a⊕a' = 1",
    'E4': 'if a⊕1 is defined, then a = 0',
    'cancellative': 'a⊕b = a⊕c implies b = c',
    'partial_order': '≤ is reflexive, antisymmetric and transitive with bounds 0 and 1',
}

# Compatibility support mapping conditions
CSM_AXIOMS = {
    '(a)': 'if V1 ⊆ V2, then ⟨U|V1⟩ ≤ ⟨U|V2⟩',
    '(b)': '⟨U|V⟩ ≤ ⟨U|{1}⟩',
    '(c)': '⟨U|∅⟩ = 0',
    '(d)': '⟨∅|{c}⟩ = c',
    '(e)': 'if c ∉ U∪V, then ⟨U∪{c}|{1}⟩ ⊖ ⟨U∪{c}|V⟩ = ⟨U|V∪{c}⟩ ⊖ ⟨U|V⟩',
    '(e*)': 'for all c, ⟨U∪{c}|{1}⟩ ⊖ ⟨U∪{c}|V⟩ = ⟨U|V∪{c}⟩ ⊖ ⟨U|V⟩',
}

# Witness mapping conditions
WITNESS_AXIOMS = {
    '(A1)': 'β(∅) = 1',
    '(A2)': 'β({c}) = c for every c ∈ S',
    '(A3)': 'D_β(X,A) ≥ 0 for every X ⊆ A',
}

# Process exit codes
EXIT_SUCCESS = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2
EXIT_INCONCLUSIVE = 3
