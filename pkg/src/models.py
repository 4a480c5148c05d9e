"""
Data models for the coexistence toolkit.

This module defines the report and result structures shared by the
verifiers, the constructions and the command-line front end.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple


class SearchOutcome(Enum):
    """Outcome of a bounded backtracking search."""
    FOUND = "found"
    EXHAUSTED = "exhausted"
    BUDGET_OUT = "budget-out"


class SearchMode(Enum):
    """What a search query is looking for."""
    CSM = "csm"
    STRONG_CSM = "strong-csm"
    WITNESS = "witness"
    EXTEND_WITNESS = "extend-witness"


class VerificationMode(Enum):
    """How an observable was verified."""
    EXHAUSTIVE = "exhaustive"
    SAMPLED = "sampled"


@dataclass
class Violation:
    """
    A single failed instance of an axiom or property.

    ``witness`` holds a serializable description of the arguments (element
    names, subsets as name lists); ``left`` and ``right`` keep the raw values
    of both sides when the condition is an equation or inequality.
    """
    axiom: str
    witness: Dict[str, Any]
    detail: str = ''
    left: Any = None
    right: Any = None
    left_text: Optional[str] = None
    right_text: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        """Convert the violation to a dictionary."""
        entry: Dict[str, Any] = {
            'axiom': self.axiom,
            'witness': self.witness,
            'detail': self.detail,
        }
        if self.left_text is not None or self.right_text is not None:
            entry['left'] = self.left_text
            entry['right'] = self.right_text
        return entry


@dataclass
class ValidationReport:
    """Result of validating the effect algebra axioms on an explicit algebra."""
    subject: str
    checked: Tuple[str, ...]
    violations: List[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def holds(self, axiom: str) -> bool:
        return all(v.axiom != axiom for v in self.violations)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'subject': self.subject,
            'valid': self.valid,
            'statuses': {axiom: ('holds' if self.holds(axiom) else 'fails') for axiom in self.checked},
            'violations': [v.to_dict() for v in self.violations],
        }


@dataclass
class MVCheck:
    """Result of the MV-effect algebra test; ``witness`` is the first failing pair."""
    is_mv: bool
    exhaustive: bool = True
    clause: Optional[str] = None
    witness: Optional[Tuple[Any, Any]] = None

    def to_dict(self, format_element=str) -> Dict[str, Any]:
        return {
            'is_mv': self.is_mv,
            'exhaustive': self.exhaustive,
            'clause': self.clause,
            'witness': [format_element(w) for w in self.witness] if self.witness else None,
        }


@dataclass
class AxiomReport:
    """
    Per-axiom result of verifying a compatibility support mapping.

    Only the first ``max_recorded`` violations of each axiom are stored;
    ``violation_counts`` always holds the totals.
    """
    subject: str
    axioms: Tuple[str, ...]
    violations: Dict[str, List[Violation]] = field(default_factory=dict)
    violation_counts: Dict[str, int] = field(default_factory=dict)
    checked_instances: Dict[str, int] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def holds(self, axiom: str) -> bool:
        return axiom in self.axioms and self.violation_counts.get(axiom, 0) == 0

    def status(self, axiom: str) -> str:
        if axiom not in self.axioms:
            return 'not checked'
        return 'holds' if self.holds(axiom) else 'fails'

    @property
    def passed(self) -> bool:
        return all(self.holds(axiom) for axiom in self.axioms)

    @property
    def is_valid(self) -> bool:
        """True when (a)-(e) were all checked and hold."""
        return all(self.holds(axiom) for axiom in ('(a)', '(b)', '(c)', '(d)', '(e)'))

    @property
    def is_strong(self) -> bool:
        return self.holds('(e*)')

    def first_violation(self, axiom: str) -> Optional[Violation]:
        recorded = self.violations.get(axiom) or []
        return recorded[0] if recorded else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'subject': self.subject,
            'statuses': {axiom: self.status(axiom) for axiom in self.axioms},
            'violation_counts': dict(self.violation_counts),
            'checked_instances': dict(self.checked_instances),
            'violations': {
                axiom: [v.to_dict() for v in recorded]
                for axiom, recorded in self.violations.items() if recorded
            },
            'notes': list(self.notes),
        }


@dataclass
class PropertyReport:
    """Evaluation of derived properties; holds counts and first failures per property."""
    subject: str
    properties: Tuple[str, ...]
    failures: Dict[str, List[Violation]] = field(default_factory=dict)
    asserted: bool = True

    def holds(self, name: str) -> bool:
        return not self.failures.get(name)

    @property
    def all_hold(self) -> bool:
        return all(self.holds(name) for name in self.properties)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'subject': self.subject,
            'asserted': self.asserted,
            'statuses': {name: ('holds' if self.holds(name) else 'fails') for name in self.properties},
            'failures': {
                name: [v.to_dict() for v in recorded]
                for name, recorded in self.failures.items() if recorded
            },
        }


@dataclass
class DecompositionCheck:
    """Whether the family (D(X,A))_{X⊆A} sums to 1; ``residual`` is 1 ⊖ total."""
    ground: Tuple[Any, ...]
    holds: bool
    total: Any = None
    residual: Any = None
    detail: str = ''


@dataclass
class DiagramCheck:
    """Whether α_B ∘ g^A_B = α_A; ``mismatch`` is the first failing family."""
    lower: Tuple[Any, ...]
    upper: Tuple[Any, ...]
    holds: bool
    exhaustive: bool = True
    families_checked: int = 0
    mismatch: Optional[Any] = None
    detail: str = ''


@dataclass
class ObservableReport:
    """Result of checking bounds and additivity of an observable."""
    mode: VerificationMode
    domain_size: int
    pairs_checked: int
    violations: List[Violation] = field(default_factory=list)
    seed: Optional[int] = None

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mode': self.mode.value,
            'domain_size': self.domain_size,
            'pairs_checked': self.pairs_checked,
            'seed': self.seed,
            'passed': self.passed,
            'violations': [v.to_dict() for v in self.violations],
        }


@dataclass
class WitnessReport:
    """Result of checking (A1)-(A3) for a witness mapping."""
    subject: str
    pairs_checked: int
    violations: Dict[str, List[Violation]] = field(default_factory=dict)

    def holds(self, axiom: str) -> bool:
        return not self.violations.get(axiom)

    @property
    def passed(self) -> bool:
        return all(self.holds(axiom) for axiom in ('(A1)', '(A2)', '(A3)'))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'subject': self.subject,
            'pairs_checked': self.pairs_checked,
            'statuses': {axiom: ('holds' if self.holds(axiom) else 'fails')
                         for axiom in ('(A1)', '(A2)', '(A3)')},
            'violations': {
                axiom: [v.to_dict() for v in recorded]
                for axiom, recorded in self.violations.items() if recorded
            },
        }


@dataclass
class DEqualityCheck:
    """Comparison of the effect-algebra D with the group-valued D_β."""
    holds: bool
    pairs_checked: int
    mismatch: Optional[Violation] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'holds': self.holds,
            'pairs_checked': self.pairs_checked,
            'mismatch': self.mismatch.to_dict() if self.mismatch else None,
        }


@dataclass(frozen=True)
class SearchBudget:
    """Limits of a backtracking search; ``value_order`` overrides the canonical element order."""
    max_nodes: int = 1_000_000
    time_limit: float = 120.0
    value_order: Optional[Sequence[str]] = None


@dataclass
class SearchResult:
    """Outcome of one search query, with the solution when one was found."""
    mode: SearchMode
    outcome: SearchOutcome
    nodes: int
    elapsed_seconds: float
    instance_hash: str
    solution: Any = None

    @property
    def found(self) -> bool:
        return self.outcome is SearchOutcome.FOUND

    def to_log_record(self) -> Dict[str, Any]:
        """Convert the result to a JSON-lines record."""
        return {
            'log_type': 'search_result',
            'mode': self.mode.value,
            'instance_hash': self.instance_hash,
            'outcome': self.outcome.value,
            'nodes': self.nodes,
            'elapsed_seconds': round(self.elapsed_seconds, 6),
        }


@dataclass
class CommandResult:
    """What a CLI command produced: exit code, machine-readable payload and text lines."""
    command: str
    exit_code: int
    payload: Dict[str, Any] = field(default_factory=dict)
    lines: List[str] = field(default_factory=list)
