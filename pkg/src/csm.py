"""
Compatibility support mappings.

A mapping ⟨U|V⟩ on pairs of finite subsets of S is held as a ``CSM``: a
domain (algebra and ordered S with 1 ∈ S) plus an evaluator strategy. Subsets
of S are int bitmasks over the order of S. This module provides the closed
form instances, table-backed instances, the axiom verifier, the difference
operator D, the construction from an observable and the reconstruction of a
strong mapping from its D values.
"""

import itertools
import logging
from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .boolean_algebra import mask_positions, submasks
from .effect_algebra import EffectAlgebra, TupleEffectAlgebra, is_mv_effect_algebra
from .errors import AxiomBreachError, ContractError, DecompositionBreachError, InputError
from .models import AxiomReport, Violation

if TYPE_CHECKING:
    from .observable import Observable

logger = logging.getLogger('coexistence.csm')

CSM_CONDITIONS = ('(a)', '(b)', '(c)', '(d)', '(e)', '(e*)')


class CSMDomain:
    """
    The ordered set S ⊆ E a mapping is defined on.

    The unit is appended to S when it is missing; ``unit_adjoined`` records
    that for reports. Witness mappings pass ``adjoin_unit=False``.
    """

    def __init__(self, algebra: EffectAlgebra, elements: Iterable[Hashable], adjoin_unit: bool = True):
        members = [algebra.require(e) for e in elements]
        if len(set(members)) != len(members):
            raise InputError("S contains repeated elements")
        self.unit_adjoined = adjoin_unit and algebra.unit not in members
        if self.unit_adjoined:
            members.append(algebra.unit)
        self.algebra = algebra
        self.elements: Tuple[Hashable, ...] = tuple(members)
        self.unit_index = self.elements.index(algebra.unit) if algebra.unit in self.elements else None

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def unit_mask(self) -> int:
        if self.unit_index is None:
            raise InputError("1 is not an element of S")
        return 1 << self.unit_index

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def subsets(self) -> range:
        return range(1 << self.size)

    def mask_of(self, members: Iterable[Hashable]) -> int:
        mask = 0
        for e in members:
            if e not in self.elements:
                raise InputError(f"{self.algebra.format_element(e)} is not in S")
            mask |= 1 << self.elements.index(e)
        return mask

    def subset(self, mask: int) -> Tuple[Hashable, ...]:
        return tuple(self.elements[i] for i in mask_positions(mask))

    def names(self, mask: int) -> List[str]:
        return [self.algebra.format_element(e) for e in self.subset(mask)]

    def element_names(self) -> List[str]:
        return [self.algebra.format_element(e) for e in self.elements]

    def check_cap(self, max_s: int) -> None:
        if self.size > max_s:
            raise InputError(f"|S| = {self.size} exceeds the configured cap {max_s}")

    def describe(self) -> str:
        return f"S = {{{', '.join(self.element_names())}}} in {self.algebra.describe()}"


class CSMEvaluator(ABC):
    """
    Strategy computing ⟨U|V⟩ for subset masks U and V.

    New closed forms can be added without touching the verifier.
    """

    kind = 'abstract'

    @abstractmethod
    def evaluate(self, domain: CSMDomain, u_mask: int, v_mask: int) -> Hashable:
        """Return ⟨U|V⟩."""


class JoinMeetEvaluator(CSMEvaluator):
    """⟨U|V⟩ = (⋀U) ∧ (⋁V) in a lattice-ordered algebra; ⋀∅ = 1 and ⋁∅ = 0."""

    kind = 'join-meet'

    def evaluate(self, domain: CSMDomain, u_mask: int, v_mask: int) -> Hashable:
        algebra = domain.algebra
        return algebra.meet(algebra.big_meet(domain.subset(u_mask)),
                            algebra.big_join(domain.subset(v_mask)))


class ProductEvaluator(CSMEvaluator):
    """⟨U|V⟩ = (⨅U).(⨆V) with a ⊔ b = a + b − ab, ⨅∅ = 1 and ⨆∅ = 0."""

    kind = 'product'

    def evaluate(self, domain: CSMDomain, u_mask: int, v_mask: int) -> Hashable:
        algebra = domain.algebra
        product = algebra.unit
        for a in domain.subset(u_mask):
            product = algebra.multiply(product, a)
        co_join = algebra.zero
        for b in domain.subset(v_mask):
            co_join = algebra.co_join(co_join, b)
        return algebra.multiply(product, co_join)


class TableEvaluator(CSMEvaluator):
    """Explicit values for all 2^|S| × 2^|S| pairs, indexed by the mask pair."""

    kind = 'table'

    def __init__(self, domain: CSMDomain, values: Mapping[Tuple[int, int], Hashable]):
        missing = [
            (u, v) for u in domain.subsets() for v in domain.subsets() if (u, v) not in values
        ]
        if missing:
            u, v = missing[0]
            raise InputError(
                f"CSM table is not total: ⟨{domain.names(u)}|{domain.names(v)}⟩ is missing "
                f"({len(missing)} entries absent)",
            )
        self.values = dict(values)

    def evaluate(self, domain: CSMDomain, u_mask: int, v_mask: int) -> Hashable:
        return self.values[(u_mask, v_mask)]


class ObservableEvaluator(CSMEvaluator):
    """⟨U|V⟩ = α((⋀_{a∈U} p_a) ∧ (⋁_{b∈V} p_b)) for fixed preimages p_a."""

    kind = 'observable-derived'

    def __init__(self, observable: 'Observable', preimages: Sequence[int]):
        self.observable = observable
        self.preimages = tuple(preimages)

    def evaluate(self, domain: CSMDomain, u_mask: int, v_mask: int) -> Hashable:
        boolean = self.observable.domain
        meet_part = boolean.top
        for i in mask_positions(u_mask):
            meet_part &= self.preimages[i]
        join_part = boolean.bottom
        for i in mask_positions(v_mask):
            join_part |= self.preimages[i]
        value = self.observable.evaluate(meet_part & join_part)
        if value is None:
            raise DecompositionBreachError("observable is undefined on a domain element")
        return value


class CSM:
    """A candidate compatibility support mapping; values are cached per pair."""

    def __init__(self, domain: CSMDomain, evaluator: CSMEvaluator):
        self.domain = domain
        self.evaluator = evaluator
        self._values: Dict[Tuple[int, int], Hashable] = {}
        self._strength: Optional[bool] = None

    @property
    def algebra(self) -> EffectAlgebra:
        return self.domain.algebra

    @property
    def kind(self) -> str:
        return self.evaluator.kind

    def value(self, u_mask: int, v_mask: int) -> Hashable:
        """Return ⟨U|V⟩; a value outside E is an input error."""
        key = (u_mask, v_mask)
        if key not in self._values:
            limit = 1 << self.domain.size
            if not (0 <= u_mask < limit and 0 <= v_mask < limit):
                raise InputError(f"subset masks {u_mask:#b}, {v_mask:#b} are not subsets of S")
            result = self.evaluator.evaluate(self.domain, u_mask, v_mask)
            if not self.algebra.contains(result):
                raise InputError(
                    f"⟨{self.domain.names(u_mask)}|{self.domain.names(v_mask)}⟩ = {result!r} "
                    f"is not an element of {self.algebra.describe()}",
                )
            self._values[key] = result
        return self._values[key]

    def evaluate(self, u_members: Iterable[Hashable], v_members: Iterable[Hashable]) -> Hashable:
        """⟨U|V⟩ for subsets given as element collections."""
        return self.value(self.domain.mask_of(u_members), self.domain.mask_of(v_members))

    def table(self) -> Dict[Tuple[int, int], Hashable]:
        return {
            (u, v): self.value(u, v)
            for u in self.domain.subsets() for v in self.domain.subsets()
        }

    def to_table(self) -> 'CSM':
        return CSM(self.domain, TableEvaluator(self.domain, self.table()))

    def differing_pairs(self, other: 'CSM') -> List[Tuple[int, int]]:
        """Pairs (U, V) where two mappings on the same S disagree."""
        if other.domain.elements != self.domain.elements:
            raise InputError("mappings are defined on different S")
        return [
            (u, v) for u in self.domain.subsets() for v in self.domain.subsets()
            if self.value(u, v) != other.value(u, v)
        ]

    def describe(self) -> str:
        return f"{self.kind} mapping on {self.domain.describe()}"


def csm_joinmeet(algebra: EffectAlgebra, elements: Iterable[Hashable]) -> CSM:
    """The join-meet mapping of an MV-effect algebra."""
    check = is_mv_effect_algebra(algebra)
    if not check.is_mv:
        a, b = check.witness
        raise InputError(
            f"{algebra.describe()} is not an MV-effect algebra: '{check.clause}' fails for "
            f"({algebra.format_element(a)}, {algebra.format_element(b)})",
            {'clause': check.clause},
        )
    return CSM(CSMDomain(algebra, elements), JoinMeetEvaluator())


def csm_product(algebra: EffectAlgebra, elements: Iterable[Hashable]) -> CSM:
    """The product mapping on commuting effects represented as rational tuples."""
    if not isinstance(algebra, TupleEffectAlgebra):
        raise InputError(f"the product mapping needs a tuple effect algebra, got {algebra.describe()}")
    return CSM(CSMDomain(algebra, elements), ProductEvaluator())


def csm_from_table(domain: CSMDomain, values: Mapping[Tuple[int, int], Hashable]) -> CSM:
    return CSM(domain, TableEvaluator(domain, values))


class _ViolationRecorder:
    """Counts violations per axiom and keeps the first few of each."""

    def __init__(self, axioms: Sequence[str], max_recorded: int):
        self.max_recorded = max_recorded
        self.violations: Dict[str, List[Violation]] = {axiom: [] for axiom in axioms}
        self.counts: Dict[str, int] = {axiom: 0 for axiom in axioms}
        self.checked: Dict[str, int] = {axiom: 0 for axiom in axioms}

    def check(self, axiom: str, ok: bool, make_violation) -> None:
        self.checked[axiom] += 1
        if not ok:
            self.counts[axiom] += 1
            if len(self.violations[axiom]) < self.max_recorded:
                self.violations[axiom].append(make_violation())


def _text(algebra: EffectAlgebra, value) -> str:
    return 'undefined' if value is None else algebra.format_element(value)


def _e_sides(csm: CSM, u: int, v: int, c: int) -> Tuple[Optional[Hashable], Optional[Hashable]]:
    algebra = csm.algebra
    one = csm.domain.unit_mask
    left = algebra.ominus(csm.value(u | c, one), csm.value(u | c, v))
    right = algebra.ominus(csm.value(u, v | c), csm.value(u, v))
    return left, right


def _e_violation(csm: CSM, axiom: str, u: int, v: int, index: int, left, right) -> Violation:
    domain, algebra = csm.domain, csm.algebra
    return Violation(
        axiom=axiom,
        witness={'U': domain.names(u), 'V': domain.names(v),
                 'c': algebra.format_element(domain.elements[index])},
        detail='⟨U∪{c}|{1}⟩ ⊖ ⟨U∪{c}|V⟩ ≠ ⟨U|V∪{c}⟩ ⊖ ⟨U|V⟩',
        left=left,
        right=right,
        left_text=_text(algebra, left),
        right_text=_text(algebra, right),
    )


def verify_csm(csm: CSM, max_s: int = 5, max_recorded: int = 100) -> AxiomReport:
    """
    Check (a)-(e) and (e*) exhaustively over all subsets of S.

    An undefined ⊖ on either side of (e) counts as a violation of (e).
    """
    domain, algebra = csm.domain, csm.algebra
    domain.check_cap(max_s)
    recorder = _ViolationRecorder(CSM_CONDITIONS, max_recorded)
    subsets = domain.subsets()
    one = domain.unit_mask

    for u in subsets:
        for v2 in subsets:
            for v1 in submasks(v2):
                if v1 == v2:
                    continue
                low, high = csm.value(u, v1), csm.value(u, v2)
                recorder.check('(a)', algebra.leq(low, high), lambda: Violation(
                    axiom='(a)',
                    witness={'U': domain.names(u), 'V1': domain.names(v1), 'V2': domain.names(v2)},
                    detail='⟨U|V1⟩ ≰ ⟨U|V2⟩',
                    left=low, right=high,
                    left_text=_text(algebra, low), right_text=_text(algebra, high),
                ))

    for u in subsets:
        bound = csm.value(u, one)
        for v in subsets:
            current = csm.value(u, v)
            recorder.check('(b)', algebra.leq(current, bound), lambda: Violation(
                axiom='(b)',
                witness={'U': domain.names(u), 'V': domain.names(v)},
                detail='⟨U|V⟩ ≰ ⟨U|{1}⟩',
                left=current, right=bound,
                left_text=_text(algebra, current), right_text=_text(algebra, bound),
            ))

    for u in subsets:
        empty = csm.value(u, 0)
        recorder.check('(c)', empty == algebra.zero, lambda: Violation(
            axiom='(c)',
            witness={'U': domain.names(u)},
            detail='⟨U|∅⟩ ≠ 0',
            left=empty, right=algebra.zero,
            left_text=_text(algebra, empty), right_text=_text(algebra, algebra.zero),
        ))

    for index, c in enumerate(domain.elements):
        single = csm.value(0, 1 << index)
        recorder.check('(d)', single == c, lambda: Violation(
            axiom='(d)',
            witness={'c': algebra.format_element(c)},
            detail='⟨∅|{c}⟩ ≠ c',
            left=single, right=c,
            left_text=_text(algebra, single), right_text=_text(algebra, c),
        ))

    for u in subsets:
        for v in subsets:
            for index in range(domain.size):
                c = 1 << index
                left, right = _e_sides(csm, u, v, c)
                ok = left is not None and right is not None and left == right
                if not (u | v) & c:
                    recorder.check('(e)', ok, lambda: _e_violation(csm, '(e)', u, v, index, left, right))
                recorder.check('(e*)', ok, lambda: _e_violation(csm, '(e*)', u, v, index, left, right))

    report = _build_report(csm, CSM_CONDITIONS, recorder)
    logger.info('csm verification finished', extra={
        'subject': report.subject,
        'statuses': {axiom: report.status(axiom) for axiom in report.axioms},
        'violation_counts': report.violation_counts,
    })
    return report


def verify_strong(csm: CSM, max_s: int = 5, max_recorded: int = 100) -> AxiomReport:
    """Check (e*) for every c ∈ S, including c ∈ U∪V."""
    domain = csm.domain
    domain.check_cap(max_s)
    recorder = _ViolationRecorder(('(e*)',), max_recorded)
    for u in domain.subsets():
        for v in domain.subsets():
            for index in range(domain.size):
                left, right = _e_sides(csm, u, v, 1 << index)
                ok = left is not None and right is not None and left == right
                recorder.check('(e*)', ok, lambda: _e_violation(csm, '(e*)', u, v, index, left, right))
    report = _build_report(csm, ('(e*)',), recorder)
    csm._strength = report.passed
    logger.info('strength verification finished', extra={
        'subject': report.subject,
        'strong': report.passed,
        'violation_count': report.violation_counts['(e*)'],
    })
    return report


def _build_report(csm: CSM, axioms: Sequence[str], recorder: _ViolationRecorder) -> AxiomReport:
    notes = []
    if csm.domain.unit_adjoined:
        notes.append('1 was adjoined to S')
    return AxiomReport(
        subject=csm.describe(),
        axioms=tuple(axioms),
        violations={axiom: recorded for axiom, recorded in recorder.violations.items()},
        violation_counts=dict(recorder.counts),
        checked_instances=dict(recorder.checked),
        notes=notes,
    )


def D(csm: CSM, x_mask: int, a_mask: int) -> Hashable:
    """D(X,A) = ⟨X|{1}⟩ ⊖ ⟨X|A∖X⟩ for X ⊆ A ⊆ S."""
    if x_mask & ~a_mask:
        raise InputError("D(X,A) requires X ⊆ A")
    domain = csm.domain
    whole = csm.value(x_mask, domain.unit_mask)
    part = csm.value(x_mask, a_mask & ~x_mask)
    result = csm.algebra.ominus(whole, part)
    if result is None:
        raise AxiomBreachError(
            f"D({domain.names(x_mask)}, {domain.names(a_mask)}) is undefined: "
            f"⟨X|A∖X⟩ ≰ ⟨X|{{1}}⟩, so condition (b) (or (a)) fails",
            {'X': domain.names(x_mask), 'A': domain.names(a_mask), 'conditions': ['(b)', '(a)']},
        )
    return result


def is_strong(csm: CSM, max_s: int = 5) -> bool:
    """Whether the mapping satisfies (e*); the answer is cached on the mapping."""
    if csm._strength is None:
        verify_strong(csm, max_s=max_s, max_recorded=1)
    return bool(csm._strength)


def reconstruct_from_D(csm: CSM, u_mask: int, v_mask: int) -> Hashable:
    """
    Compute ⟨U|V⟩ of a strong mapping from D alone.

    For U∩V ≠ ∅ the value is D(U,U); otherwise it is the orthogonal sum of
    D(U∪Y, U∪V) over the nonempty Y ⊆ V.
    """
    if not is_strong(csm):
        raise ContractError(f"{csm.describe()} is not strong; reconstruction from D requires (e*)")
    return d_expansion(csm, u_mask, v_mask)


def d_expansion(csm: CSM, u_mask: int, v_mask: int) -> Hashable:
    """The D-value expansion of ⟨U|V⟩, computed without the strength precondition."""
    if u_mask & v_mask:
        return D(csm, u_mask, u_mask)
    terms = [D(csm, u_mask | y, u_mask | v_mask) for y in submasks(v_mask) if y]
    total = csm.algebra.big_oplus(terms)
    if total is None:
        raise DecompositionBreachError(
            f"D terms for U = {csm.domain.names(u_mask)}, V = {csm.domain.names(v_mask)} are not orthogonal",
        )
    return total


class PreimagePolicy(ABC):
    """Chooses one preimage p_a ∈ α⁻¹(a) for every a ∈ S."""

    @abstractmethod
    def choose(self, domain: CSMDomain, candidates: Sequence[Sequence[int]]) -> Tuple[int, ...]:
        """Return one chosen Boolean element per element of S."""


class FirstPreimagePolicy(PreimagePolicy):
    """The first preimage in the canonical (numeric) order of the Boolean algebra."""

    def choose(self, domain: CSMDomain, candidates: Sequence[Sequence[int]]) -> Tuple[int, ...]:
        return tuple(options[0] for options in candidates)


class FixedPreimagePolicy(PreimagePolicy):
    """Explicit choices keyed by element of S; elements not listed fall back to the first preimage."""

    def __init__(self, choices: Mapping[Hashable, int]):
        self.choices = dict(choices)

    def choose(self, domain: CSMDomain, candidates: Sequence[Sequence[int]]) -> Tuple[int, ...]:
        chosen = []
        for element, options in zip(domain.elements, candidates):
            if element in self.choices:
                if self.choices[element] not in options:
                    raise InputError(
                        f"{self.choices[element]} is not a preimage of "
                        f"{domain.algebra.format_element(element)}",
                    )
                chosen.append(self.choices[element])
            else:
                chosen.append(options[0])
        return tuple(chosen)


def preimage_candidates(observable: 'Observable', domain: CSMDomain) -> List[List[int]]:
    """α⁻¹(a) for every a ∈ S, in canonical order; an empty preimage is an input error."""
    preimages = observable.preimages()
    candidates = []
    for element in domain.elements:
        options = preimages.get(element, [])
        if not options:
            raise InputError(
                f"{domain.algebra.format_element(element)} is not in range of the observable",
                {'element': domain.algebra.format_element(element)},
            )
        candidates.append(options)
    return candidates


def csm_from_observable(observable: 'Observable', elements: Iterable[Hashable],
                        policy: Optional[PreimagePolicy] = None) -> CSM:
    """The strong mapping ⟨U|V⟩ = α((⋀_{a∈U} p_a) ∧ (⋁_{b∈V} p_b)) of an observable."""
    domain = CSMDomain(observable.codomain, elements)
    candidates = preimage_candidates(observable, domain)
    chosen = (policy or FirstPreimagePolicy()).choose(domain, candidates)
    return CSM(domain, ObservableEvaluator(observable, chosen))


def iter_csms_from_observable(observable: 'Observable', elements: Iterable[Hashable],
                              max_domain_size: int = 16) -> Iterator[CSM]:
    """Every mapping obtainable from the observable, one per choice of preimages."""
    if observable.domain.size > max_domain_size:
        raise InputError(
            f"preimage sweep is limited to Boolean algebras with at most {max_domain_size} elements",
        )
    domain = CSMDomain(observable.codomain, elements)
    candidates = preimage_candidates(observable, domain)
    for chosen in itertools.product(*candidates):
        yield CSM(domain, ObservableEvaluator(observable, chosen))
