"""
Command pipelines for the coexistence toolkit.

Each public method loads its description files, runs one verification or
construction and returns a CommandResult; errors are mapped to exit codes
here so the CLI stays a thin argument parser.
"""

import time
from typing import Any, Callable, Dict, List, Optional

from .config import EXIT_INCONCLUSIVE, EXIT_INPUT_ERROR, EXIT_SUCCESS, EXIT_VIOLATION, CoexistenceConfig
from .csm import CSM, csm_from_observable, is_strong, iter_csms_from_observable, verify_csm, verify_strong
from .csm_properties import check_csm_lemmas, check_strong_properties
from .description_parser import DescriptionParser, csm_to_dict, witness_to_dict, write_json
from .effect_algebra import EffectAlgebra, is_mv_effect_algebra, is_orthoalgebra, validate_effect_algebra
from .errors import CoexistenceError, ConstructionError, InputError
from .logging_manager import MonitoringManager
from .models import CommandResult, SearchBudget, SearchOutcome, SearchResult
from .observable import CoexistenceCertificate, build_alpha_S, recheck_certificate, verify_observable
from .report_formatter import (
    axiom_report_lines,
    d_equality_lines,
    observable_lines,
    property_lines,
    search_lines,
    validation_lines,
    witness_lines,
)
from .search import csm_extending_witness, search_csm, search_witness
from .witness import (
    check_beta_recursion,
    check_D_equality,
    compare_D_beta_implementations,
    verify_witness,
    witness_from_csm,
)


class CoexistenceOrchestrator:
    """
    Facade over parsing, verification, construction and search.

    One instance serves one CLI invocation; all randomness comes from the
    configured seed.
    """

    def __init__(self, config: Optional[CoexistenceConfig] = None):
        """
        Initialize the orchestrator with all components.

        Args:
            config: Optional configuration object. If not provided,
                   configuration will be loaded from environment variables.
        """
        self.config = config or CoexistenceConfig.from_environment()
        self.parser = DescriptionParser(self.config)
        self.monitoring_manager = MonitoringManager(self.config)

    def _run(self, command: str, pipeline: Callable[[], CommandResult]) -> CommandResult:
        started = time.time()
        try:
            result = pipeline()
        except InputError as e:
            self.monitoring_manager.record_error(e.message, e.context)
            result = CommandResult(command, EXIT_INPUT_ERROR, {'error': e.to_dict()}, [f"input error: {e.message}"])
        except CoexistenceError as e:
            self.monitoring_manager.record_error(e.message, e.context)
            result = CommandResult(command, EXIT_VIOLATION, {'error': e.to_dict()}, [f"{command} failed: {e.message}"])
        self.monitoring_manager.record_performance_metric(command, (time.time() - started) * 1000)
        self.monitoring_manager.record_command(command, result.exit_code)
        return result

    def _load_algebra(self, path: str) -> EffectAlgebra:
        return self.parser.parse_algebra(self.parser.load_json(path))

    def _load_subset(self, path: Optional[str], algebra: EffectAlgebra) -> Optional[List[Any]]:
        if path is None:
            return None
        return self.parser.parse_subset(self.parser.load_json(path), algebra)

    def _require_subset(self, path: Optional[str], algebra: EffectAlgebra) -> List[Any]:
        elements = self._load_subset(path, algebra)
        if elements is None:
            raise InputError("this command needs --subset")
        return elements

    def _budget(self) -> SearchBudget:
        return SearchBudget(max_nodes=self.config.search_max_nodes, time_limit=self.config.search_time_limit)

    # validate

    def validate(self, algebra_path: str, check_mv: bool = False) -> CommandResult:
        def pipeline() -> CommandResult:
            algebra = self._load_algebra(algebra_path)
            report = validate_effect_algebra(algebra)
            payload: Dict[str, Any] = {'validation': report.to_dict()}
            lines = validation_lines(report)
            ok = report.valid
            if check_mv:
                try:
                    mv = is_mv_effect_algebra(algebra)
                    payload['mv'] = mv.to_dict(algebra.format_element)
                    if mv.is_mv:
                        lines.append('MV-effect algebra: yes')
                    else:
                        a, b = mv.witness
                        lines.append(f"MV-effect algebra: no, '{mv.clause}' fails for "
                                     f"({algebra.format_element(a)}, {algebra.format_element(b)})")
                except InputError as e:
                    mv = None
                    payload['mv'] = {'is_mv': False, 'clause': 'lattice ordered', 'detail': e.message}
                    lines.append(f"MV-effect algebra: no, {e.message}")
                ok = ok and mv is not None and mv.is_mv
            if algebra.is_enumerable:
                ortho, offender = is_orthoalgebra(algebra)
                payload['orthoalgebra'] = ortho
                lines.append('orthoalgebra: yes' if ortho else
                             f"orthoalgebra: no, {algebra.format_element(offender)} ⊥ itself")
            return CommandResult('validate', EXIT_SUCCESS if ok else EXIT_VIOLATION, payload, lines)

        return self._run('validate', pipeline)

    # verify-csm

    def verify_csm(self, algebra_path: str, subset_path: Optional[str], csm_path: str,
                   strong: bool = False) -> CommandResult:
        def pipeline() -> CommandResult:
            algebra = self._load_algebra(algebra_path)
            elements = self._load_subset(subset_path, algebra)
            csm = self.parser.parse_csm(self.parser.load_json(csm_path), algebra, elements)
            report = verify_csm(csm, self.config.max_s, self.config.max_recorded_violations)
            payload: Dict[str, Any] = {'csm': report.to_dict()}
            lines = axiom_report_lines(report)
            if report.is_valid:
                lemmas = check_csm_lemmas(csm, self.config.max_s, self.config.max_recorded_violations)
                properties = check_strong_properties(csm, self.config.max_s, self.config.max_recorded_violations)
                payload['lemmas'] = lemmas.to_dict()
                payload['strong_properties'] = properties.to_dict()
                lines += property_lines(lemmas, 'derived identities')
                lines += property_lines(properties, 'strong-mapping properties')
            ok = report.is_valid and (report.is_strong or not strong)
            return CommandResult('verify-csm', EXIT_SUCCESS if ok else EXIT_VIOLATION, payload, lines)

        return self._run('verify-csm', pipeline)

    # coexist

    def coexist(self, algebra_path: str, subset_path: Optional[str], csm_path: Optional[str],
                out_path: Optional[str] = None, certificate_path: Optional[str] = None) -> CommandResult:
        def pipeline() -> CommandResult:
            algebra = self._load_algebra(algebra_path)
            if certificate_path is not None:
                return self._recheck(algebra, certificate_path)
            if csm_path is None:
                raise InputError("coexist needs --csm (or --certificate to re-check a certificate)")
            elements = self._load_subset(subset_path, algebra)
            csm = self.parser.parse_csm(self.parser.load_json(csm_path), algebra, elements)
            try:
                observable, certificate = build_alpha_S(
                    csm,
                    max_s=self.config.max_s,
                    diagram_max_a=self.config.diagram_max_a,
                    exhaustive_threshold=self.config.exhaustive_threshold,
                    sample_count=self.config.sample_count,
                    seed=self.config.seed,
                )
            except ConstructionError as e:
                return CommandResult(
                    'coexist', EXIT_VIOLATION,
                    {'error': e.to_dict()},
                    [f"construction aborted, {e.failed_property} fails: {e.message}"],
                )
            if out_path is not None:
                write_json(out_path, certificate.to_dict())
            lines = [
                f"limit observable on {observable.domain.size} elements "
                f"({certificate.boolean_atoms} atoms) for S = {{{', '.join(certificate.elements)}}}",
            ]
            lines += [f"  {name}: {'holds' if ok else 'fails'}" for name, ok in certificate.checks.items()]
            lines += [f"  witness for {w['element']}: {len(w['family'])} subsets" for w in certificate.witnesses]
            if out_path is not None:
                lines.append(f"certificate written to {out_path}")
            exit_code = EXIT_SUCCESS if certificate.passed else EXIT_VIOLATION
            return CommandResult('coexist', exit_code, {'certificate': certificate.to_dict()}, lines)

        return self._run('coexist', pipeline)

    def _recheck(self, algebra: EffectAlgebra, certificate_path: str) -> CommandResult:
        certificate = CoexistenceCertificate.from_dict(self.parser.load_json(certificate_path))
        recheck = recheck_certificate(certificate, algebra, self.config.exhaustive_threshold,
                                      self.config.sample_count, self.config.seed)
        lines = [f"certificate {certificate_path}: {'verified' if recheck.passed else 'rejected'}"]
        lines += observable_lines(recheck.observable)
        lines += [f"  witness for {name} does not evaluate to it" for name in recheck.witness_failures]
        exit_code = EXIT_SUCCESS if recheck.passed else EXIT_VIOLATION
        return CommandResult('coexist', exit_code, {'recheck': recheck.to_dict()}, lines)

    # reverse

    def reverse(self, algebra_path: str, observable_path: str, subset_path: Optional[str],
                out_path: Optional[str] = None, all_preimages: bool = False) -> CommandResult:
        def pipeline() -> CommandResult:
            algebra = self._load_algebra(algebra_path)
            elements = self._require_subset(subset_path, algebra)
            observable = self.parser.parse_observable(self.parser.load_json(observable_path), algebra)
            observable_report = verify_observable(observable, self.config.exhaustive_threshold,
                                                  self.config.sample_count, self.config.seed)
            lines = observable_lines(observable_report)
            payload: Dict[str, Any] = {'observable': observable_report.to_dict()}
            if not observable_report.passed:
                return CommandResult('reverse', EXIT_VIOLATION, payload, lines + ['input is not an observable'])

            csm = csm_from_observable(observable, elements)
            report = verify_strong(csm, self.config.max_s, self.config.max_recorded_violations)
            payload['strong'] = report.to_dict()
            lines += axiom_report_lines(report)
            ok = report.passed
            if all_preimages:
                total = strong_count = 0
                for candidate in iter_csms_from_observable(observable, elements, self.config.preimage_sweep_limit):
                    total += 1
                    strong_count += is_strong(candidate, self.config.max_s)
                payload['preimage_sweep'] = {'choices': total, 'strong': strong_count}
                lines.append(f"preimage sweep: {strong_count} of {total} choices give a strong mapping")
                ok = ok and strong_count == total
            if out_path is not None:
                write_json(out_path, csm_to_dict(csm))
                lines.append(f"CSM table written to {out_path}")
            payload['table'] = csm_to_dict(csm)
            return CommandResult('reverse', EXIT_SUCCESS if ok else EXIT_VIOLATION, payload, lines)

        return self._run('reverse', pipeline)

    # witness

    def witness(self, algebra_path: str, subset_path: Optional[str], csm_path: str,
                witness_path: Optional[str] = None, out_path: Optional[str] = None) -> CommandResult:
        def pipeline() -> CommandResult:
            algebra = self._load_algebra(algebra_path)
            if not algebra.is_interval:
                raise InputError(f"{algebra.describe()} is not an interval effect algebra")
            elements = self._load_subset(subset_path, algebra)
            csm = self.parser.parse_csm(self.parser.load_json(csm_path), algebra, elements)
            if witness_path is not None:
                beta = self.parser.parse_witness(self.parser.load_json(witness_path), algebra)
            else:
                beta = witness_from_csm(csm)
            report = verify_witness(beta, self.config.max_s, self.config.max_recorded_violations)
            equality = check_D_equality(csm, beta)
            recursion = check_beta_recursion(beta)
            implementations = compare_D_beta_implementations(beta)
            lines = witness_lines(report)
            lines += d_equality_lines(equality, 'D(X,A) = D_β(X,A)')
            lines += d_equality_lines(recursion, 'D_β recursion')
            lines += d_equality_lines(implementations, 'closed form = recursion')
            if out_path is not None:
                write_json(out_path, witness_to_dict(beta))
                lines.append(f"witness mapping written to {out_path}")
            payload = {
                'witness': report.to_dict(),
                'd_equality': equality.to_dict(),
                'recursion': recursion.to_dict(),
                'implementations': implementations.to_dict(),
                'beta': witness_to_dict(beta),
            }
            ok = report.passed and equality.holds and recursion.holds and implementations.holds
            return CommandResult('witness', EXIT_SUCCESS if ok else EXIT_VIOLATION, payload, lines)

        return self._run('witness', pipeline)

    # search

    def search(self, algebra_path: str, subset_path: Optional[str], strong: bool = False,
               witness_mode: bool = False, extend_path: Optional[str] = None,
               out_path: Optional[str] = None) -> CommandResult:
        def pipeline() -> CommandResult:
            algebra = self._load_algebra(algebra_path)
            budget = self._budget()
            lines: List[str] = []
            payload: Dict[str, Any] = {}
            if extend_path is not None:
                beta = self.parser.parse_witness(self.parser.load_json(extend_path), algebra)
                beta_report = verify_witness(beta, self.config.max_s, self.config.max_recorded_violations)
                if not beta_report.passed:
                    return CommandResult('search', EXIT_VIOLATION, {'witness': beta_report.to_dict()},
                                         witness_lines(beta_report) + ['input is not a witness mapping'])
                result = csm_extending_witness(beta, strong=strong, budget=budget)
            elif witness_mode:
                result = search_witness(algebra, self._require_subset(subset_path, algebra), budget)
            else:
                result = search_csm(algebra, self._require_subset(subset_path, algebra), strong, budget)

            self.monitoring_manager.record_search_result(result)
            payload['search'] = result.to_log_record()
            lines += search_lines(result)
            exit_code = self._search_exit_code(result, strong, payload, lines)
            if result.found and out_path is not None:
                if isinstance(result.solution, CSM):
                    write_json(out_path, csm_to_dict(result.solution))
                else:
                    write_json(out_path, witness_to_dict(result.solution))
                lines.append(f"solution written to {out_path}")
            return CommandResult('search', exit_code, payload, lines)

        return self._run('search', pipeline)

    def _search_exit_code(self, result: SearchResult, strong: bool,
                          payload: Dict[str, Any], lines: List[str]) -> int:
        if result.outcome is SearchOutcome.BUDGET_OUT:
            lines.append('inconclusive: the search budget ran out')
            return EXIT_INCONCLUSIVE
        if result.outcome is SearchOutcome.EXHAUSTED:
            lines.append('no solution exists over this algebra')
            return EXIT_VIOLATION
        if isinstance(result.solution, CSM):
            report = verify_csm(result.solution, self.config.max_s, self.config.max_recorded_violations)
            ok = report.is_valid and (report.is_strong or not strong)
            payload['solution'] = csm_to_dict(result.solution)
            payload['verification'] = report.to_dict()
        else:
            report = verify_witness(result.solution, self.config.max_s, self.config.max_recorded_violations)
            ok = report.passed
            payload['solution'] = witness_to_dict(result.solution)
            payload['verification'] = report.to_dict()
        lines.append('solution re-verified' if ok else 'solution failed re-verification')
        return EXIT_SUCCESS if ok else EXIT_VIOLATION
