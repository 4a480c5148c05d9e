"""
Rendering of command results as text or JSON.

Text reports cite the axiom labels ((a)-(e*), (A1)-(A3), E1-E4) verbatim,
followed by the statement of the condition and the recorded violations.
"""

import json
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Mapping

from .config import CSM_AXIOMS, EFFECT_ALGEBRA_AXIOMS, WITNESS_AXIOMS
from .models import (
    AxiomReport,
    CommandResult,
    DEqualityCheck,
    ObservableReport,
    PropertyReport,
    SearchResult,
    ValidationReport,
    Violation,
    WitnessReport,
)

MAX_LISTED_VIOLATIONS = 5


def _witness_text(witness: Mapping[str, Any]) -> str:
    parts = []
    for key, value in witness.items():
        if isinstance(value, list):
            value = '{' + ', '.join(str(v) for v in value) + '}'
        parts.append(f"{key}={value}")
    return ' '.join(parts)


def violation_line(violation: Violation) -> str:
    line = f"      {violation.axiom} at {_witness_text(violation.witness)}"
    if violation.detail:
        line += f": {violation.detail}"
    if violation.left_text is not None or violation.right_text is not None:
        line += f" (left {violation.left_text}, right {violation.right_text})"
    return line


def _status_lines(name: str, holds: bool, statement: str, recorded: List[Violation],
                  total: int) -> List[str]:
    status = 'holds' if holds else 'fails'
    lines = [f"  {name:<14} {status:<6} {statement}".rstrip()]
    if not holds:
        if total > len(recorded):
            lines.append(f"      {total} violations, first {len(recorded)} recorded")
        lines.extend(violation_line(v) for v in recorded[:MAX_LISTED_VIOLATIONS])
    return lines


def validation_lines(report: ValidationReport) -> List[str]:
    lines = [f"effect algebra axioms for {report.subject}"]
    for axiom in report.checked:
        recorded = [v for v in report.violations if v.axiom == axiom]
        lines.extend(_status_lines(axiom, not recorded, EFFECT_ALGEBRA_AXIOMS.get(axiom, ''),
                                   recorded, len(recorded)))
    return lines


def axiom_report_lines(report: AxiomReport) -> List[str]:
    lines = [f"conditions for {report.subject}"]
    for axiom in report.axioms:
        lines.extend(_status_lines(axiom, report.holds(axiom), CSM_AXIOMS.get(axiom, ''),
                                   report.violations.get(axiom, []),
                                   report.violation_counts.get(axiom, 0)))
    lines.extend(f"  note: {note}" for note in report.notes)
    return lines


def property_lines(report: PropertyReport, title: str) -> List[str]:
    qualifier = '' if report.asserted else ' (reported only; the mapping is not strong)'
    lines = [f"{title}{qualifier}"]
    for name in report.properties:
        recorded = report.failures.get(name, [])
        lines.extend(_status_lines(name, report.holds(name), '', recorded, len(recorded)))
    return lines


def witness_lines(report: WitnessReport) -> List[str]:
    lines = [f"witness conditions for {report.subject} ({report.pairs_checked} pairs X ⊆ A)"]
    for axiom, statement in WITNESS_AXIOMS.items():
        recorded = report.violations.get(axiom, [])
        lines.extend(_status_lines(axiom, report.holds(axiom), statement, recorded, len(recorded)))
    return lines


def d_equality_lines(check: DEqualityCheck, title: str) -> List[str]:
    status = 'holds' if check.holds else 'fails'
    lines = [f"{title}: {status} ({check.pairs_checked} pairs checked)"]
    if check.mismatch is not None:
        lines.append(violation_line(check.mismatch))
    return lines


def observable_lines(report: ObservableReport) -> List[str]:
    seed = f", seed {report.seed}" if report.seed is not None else ''
    lines = [
        f"observable check ({report.mode.value}, {report.domain_size} elements, "
        f"{report.pairs_checked} disjoint pairs{seed}): {'passes' if report.passed else 'fails'}",
    ]
    lines.extend(violation_line(v) for v in report.violations[:MAX_LISTED_VIOLATIONS])
    return lines


def search_lines(result: SearchResult) -> List[str]:
    return [
        f"search {result.mode.value}: {result.outcome.value} after {result.nodes} nodes "
        f"in {result.elapsed_seconds:.3f}s",
        f"  instance {result.instance_hash}",
    ]


class ReportFormatter(ABC):
    """Strategy turning a command result into the text written to stdout."""

    @abstractmethod
    def format(self, result: CommandResult) -> str:
        """Render a command result."""


class TextReportFormatter(ReportFormatter):
    def format(self, result: CommandResult) -> str:
        return '\n'.join(result.lines)


class JsonReportFormatter(ReportFormatter):
    def format(self, result: CommandResult) -> str:
        document: Dict[str, Any] = {'command': result.command, 'exit_code': result.exit_code}
        document.update(result.payload)
        return json.dumps(document, indent=2, ensure_ascii=False, default=str)


class ReportFormatterFactory:
    """Maps the ``--format`` choice to a formatter."""

    def __init__(self):
        self._formatters = {
            'text': TextReportFormatter(),
            'json': JsonReportFormatter(),
        }

    @property
    def formats(self) -> List[str]:
        return list(self._formatters)

    def get_formatter(self, name: str) -> ReportFormatter:
        """
        Raises:
            ValueError: If the format is not supported
        """
        if name not in self._formatters:
            raise ValueError(f"Unsupported report format: {name}")
        return self._formatters[name]
