"""
Observables on finite Boolean algebras and the limit observable of a CSM.

An observable is stored by its values on the atoms of a powerset algebra and
extended additively; explicit overrides let a file describe (or a test
inject) values that break additivity, which ``verify_observable`` then
reports. ``build_alpha_S`` assembles the observable on 2^(2^S) from the D
values of a verified mapping, checks the decomposition of unit and the
commuting diagrams, and emits a coexistence certificate.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from .boolean_algebra import GroundSet, LimitAlgebra, PowersetAlgebra, SubsetFamily, g_embed, mask_positions, submasks
from .csm import CSM, D
from .effect_algebra import EffectAlgebra, powerset_effect_algebra
from .errors import CoexistenceError, ConstructionError, DecompositionBreachError, InputError
from .models import DecompositionCheck, DiagramCheck, ObservableReport, VerificationMode, Violation

logger = logging.getLogger('coexistence.observable')


class Observable:
    """A bounded, additive map from a powerset algebra into an effect algebra."""

    def __init__(self, domain: PowersetAlgebra, codomain: EffectAlgebra,
                 atom_values: Sequence[Hashable],
                 overrides: Optional[Mapping[int, Hashable]] = None,
                 name: str = 'observable'):
        if len(atom_values) != domain.atom_count:
            raise InputError(
                f"observable needs {domain.atom_count} atom values, got {len(atom_values)}",
            )
        self.domain = domain
        self.codomain = codomain
        self.atom_values = tuple(codomain.require(v) for v in atom_values)
        self.overrides = {domain.require(x): codomain.require(v) for x, v in (overrides or {}).items()}
        self.name = name
        self._values: Dict[int, Optional[Hashable]] = {}

    def evaluate(self, x: int) -> Optional[Hashable]:
        """α(x); None when the atom values below x are not orthogonal."""
        if x in self.overrides:
            return self.overrides[x]
        if x not in self._values:
            self._values[x] = self.codomain.big_oplus(
                self.atom_values[i] for i in self.domain.atoms_below(x)
            )
        return self._values[x]

    def preimages(self) -> Dict[Hashable, List[int]]:
        """α⁻¹ of every value in the range, domain elements in canonical order."""
        result: Dict[Hashable, List[int]] = {}
        for x in self.domain.elements():
            value = self.evaluate(x)
            if value is not None:
                result.setdefault(value, []).append(x)
        return result

    def describe(self) -> str:
        return f"{self.name} on {self.domain.describe()} into {self.codomain.describe()}"


class LimitObservable(Observable):
    """α_S on the limit algebra 2^(2^S); atom X carries D(X,S)."""

    def __init__(self, csm: CSM, limit: LimitAlgebra, atom_values: Sequence[Hashable]):
        algebra = csm.algebra
        super().__init__(limit.powerset(algebra.format_element), algebra, atom_values, name='α_S')
        self.csm = csm
        self.limit = limit

    def evaluate_family(self, family: SubsetFamily) -> Optional[Hashable]:
        """α_S([(𝕏,A)]≡) for any pair, through its canonical image over S."""
        return self.evaluate(self.limit.canonical(family).representative.bits)

    def range_witness(self, index: int) -> SubsetFamily:
        """The family g^{{a}}_S({{a}}) for the element of S at ``index``."""
        single = GroundSet(self.limit.universe, 1 << index)
        return g_embed(single, self.limit.ground, SubsetFamily.from_members(single, [1 << index]))


def identity_observable(atom_count: int) -> Observable:
    """The inclusion of 2^n into itself viewed as an effect algebra of 0/1 vectors."""
    domain = PowersetAlgebra([f"ω{i}" for i in range(atom_count)])
    codomain = powerset_effect_algebra(atom_count)
    atoms = [codomain.element(*(1 if j == i else 0 for j in range(atom_count))) for i in range(atom_count)]
    return Observable(domain, codomain, atoms, name='identity')


def alpha_A(csm: CSM, ground: GroundSet, family: SubsetFamily) -> Hashable:
    """α_A(𝕏) = ⊕_{X∈𝕏} D(X,A)."""
    if family.ground != ground:
        raise InputError("family is not grounded on A")
    if ground.universe != csm.domain.elements:
        raise InputError("ground set belongs to a different S")
    terms = [D(csm, x, ground.mask) for x in family.members()]
    total = csm.algebra.big_oplus(terms)
    if total is None:
        raise DecompositionBreachError(
            f"D(X,A) terms are not orthogonal for A = {csm.domain.names(ground.mask)}; "
            f"the mapping breaks the decomposition of unit",
            {'A': csm.domain.names(ground.mask), 'family': family.to_names(csm.algebra.format_element)},
        )
    return total


def check_decomposition(csm: CSM, ground: GroundSet) -> DecompositionCheck:
    """Whether (D(X,A))_{X⊆A} is a decomposition of unit."""
    algebra = csm.algebra
    names = tuple(csm.domain.names(ground.mask))
    try:
        terms = [D(csm, x, ground.mask) for x in ground.subsets()]
    except CoexistenceError as e:
        return DecompositionCheck(ground=names, holds=False, detail=str(e))
    total = algebra.big_oplus(terms)
    if total is None:
        return DecompositionCheck(ground=names, holds=False, detail='D(X,A) terms are not orthogonal')
    residual = algebra.ominus(algebra.unit, total)
    holds = total == algebra.unit
    detail = '' if holds else f"sum is {algebra.format_element(total)}, short of 1"
    return DecompositionCheck(ground=names, holds=holds, total=total, residual=residual, detail=detail)


def check_diagram(csm: CSM, lower: GroundSet, upper: GroundSet, max_a: int = 3) -> DiagramCheck:
    """
    Compare α_B(g^A_B(𝕏)) with α_A(𝕏).

    All 2^(2^|A|) families are compared when |A| ≤ ``max_a``; above the cap
    only the atoms {X} are compared, which decides the rest by additivity.
    """
    if not lower.issubset(upper):
        raise InputError("diagram check requires A ⊆ B")
    algebra = csm.algebra
    exhaustive = lower.size <= max_a
    if exhaustive:
        families = (SubsetFamily(lower, bits) for bits in range(1 << (1 << lower.size)))
    else:
        families = (SubsetFamily(lower, 1 << k) for k in range(1 << lower.size))
    lower_names = tuple(csm.domain.names(lower.mask))
    upper_names = tuple(csm.domain.names(upper.mask))
    checked = 0
    for family in families:
        checked += 1
        try:
            direct = alpha_A(csm, lower, family)
            lifted = alpha_A(csm, upper, g_embed(lower, upper, family))
        except CoexistenceError as e:
            return DiagramCheck(lower_names, upper_names, holds=False, exhaustive=exhaustive,
                                families_checked=checked,
                                mismatch=family.to_names(algebra.format_element), detail=str(e))
        if direct != lifted:
            return DiagramCheck(
                lower_names, upper_names, holds=False, exhaustive=exhaustive,
                families_checked=checked,
                mismatch=family.to_names(algebra.format_element),
                detail=f"α_A gives {algebra.format_element(direct)}, "
                       f"α_B∘g gives {algebra.format_element(lifted)}",
            )
    return DiagramCheck(lower_names, upper_names, holds=True, exhaustive=exhaustive, families_checked=checked)


@dataclass
class CoexistenceCertificate:
    """Serializable evidence that S lies in the range of an observable."""
    elements: List[str]
    boolean_atoms: int
    witnesses: List[Dict[str, Any]]
    checks: Dict[str, bool]
    atoms: List[Dict[str, Any]] = field(default_factory=list)
    unit_adjoined: bool = False

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'S': list(self.elements),
            'boolean_atoms': self.boolean_atoms,
            'witnesses': list(self.witnesses),
            'checks': dict(self.checks),
            'atoms': list(self.atoms),
            'unit_adjoined': self.unit_adjoined,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'CoexistenceCertificate':
        try:
            return cls(
                elements=[str(e) for e in data['S']],
                boolean_atoms=int(data['boolean_atoms']),
                witnesses=list(data['witnesses']),
                checks=dict(data.get('checks', {})),
                atoms=list(data.get('atoms', [])),
                unit_adjoined=bool(data.get('unit_adjoined', False)),
            )
        except (AttributeError, KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed certificate: {e}") from e


def build_alpha_S(csm: CSM, max_s: int = 5, diagram_max_a: int = 3,
                  exhaustive_threshold: int = 256, sample_count: int = 100_000,
                  seed: int = 0) -> Tuple[LimitObservable, CoexistenceCertificate]:
    """
    Build α_S for a verified mapping and certify that S is in its range.

    Raises ConstructionError naming the failed property when a
    decomposition of unit, a diagram or a range witness fails.
    """
    domain, algebra = csm.domain, csm.algebra
    limit = LimitAlgebra(domain.elements, max_size=max_s)

    for a in domain.subsets():
        check = check_decomposition(csm, GroundSet(domain.elements, a))
        if not check.holds:
            raise ConstructionError(
                f"decomposition of unit fails for A = {list(check.ground)}: {check.detail}",
                'decomposition of unit',
                {'A': list(check.ground)},
            )
    logger.info('decomposition of unit verified', extra={'ground_sets': 1 << domain.size})

    diagrams = 0
    for b in domain.subsets():
        for a in submasks(b):
            check = check_diagram(csm, GroundSet(domain.elements, a), GroundSet(domain.elements, b),
                                  max_a=diagram_max_a)
            diagrams += 1
            if not check.holds:
                raise ConstructionError(
                    f"diagram does not commute for A = {list(check.lower)} ⊆ B = {list(check.upper)}: "
                    f"{check.detail}",
                    'diagram commutation',
                    {'A': list(check.lower), 'B': list(check.upper), 'family': check.mismatch},
                )
    logger.info('diagram commutation verified', extra={'pairs': diagrams})

    atom_values = [D(csm, x, domain.full_mask) for x in limit.ground.subsets()]
    observable = LimitObservable(csm, limit, atom_values)

    witnesses = []
    for index, element in enumerate(domain.elements):
        family = observable.range_witness(index)
        value = observable.evaluate(family.bits)
        if value != element:
            raise ConstructionError(
                f"range witness for {algebra.format_element(element)} evaluates to "
                f"{'undefined' if value is None else algebra.format_element(value)}",
                'range witness',
            )
        witnesses.append({
            'element': algebra.format_element(element),
            'family': family.to_names(algebra.format_element),
        })

    report = verify_observable(observable, exhaustive_threshold, sample_count, seed)
    certificate = CoexistenceCertificate(
        elements=domain.element_names(),
        boolean_atoms=limit.atom_count,
        witnesses=witnesses,
        checks={'decomposition': True, 'diagram': True, 'observable': report.passed},
        atoms=[
            {'subset': domain.names(x), 'value': algebra.format_element(v)}
            for x, v in zip(limit.ground.subsets(), atom_values)
        ],
        unit_adjoined=domain.unit_adjoined,
    )
    logger.info('coexistence certificate assembled', extra={
        'S': certificate.elements,
        'boolean_atoms': certificate.boolean_atoms,
        'observable_mode': report.mode.value,
        'passed': certificate.passed,
    })
    return observable, certificate


def verify_observable(observable: Observable, exhaustive_threshold: int = 256,
                      sample_count: int = 100_000, seed: int = 0,
                      max_recorded: int = 100) -> ObservableReport:
    """
    Check α(⊥) = 0, α(⊤) = 1 and additivity on disjoint pairs.

    Domains with at most ``exhaustive_threshold`` elements are swept over
    every disjoint pair; larger ones are sampled with a seeded generator that
    puts each atom in x, in y or in neither with equal probability.
    """
    domain, codomain = observable.domain, observable.codomain
    violations: List[Violation] = []

    def text(value) -> str:
        return 'undefined' if value is None else codomain.format_element(value)

    bounds = ((domain.bottom, codomain.zero, 'α(⊥) = 0'), (domain.top, codomain.unit, 'α(⊤) = 1'))
    for x, expected, label in bounds:
        value = observable.evaluate(x)
        if value != expected:
            violations.append(Violation(
                axiom='bounds', witness={'x': domain.label(x)}, detail=f"{label} fails",
                left=value, right=expected, left_text=text(value), right_text=text(expected),
            ))

    def check_pair(x: int, y: int) -> None:
        joined = observable.evaluate(x | y)
        left, right = observable.evaluate(x), observable.evaluate(y)
        summed = codomain.oplus(left, right) if left is not None and right is not None else None
        if joined is None or joined != summed:
            if len(violations) < max_recorded:
                violations.append(Violation(
                    axiom='additivity', witness={'x': domain.label(x), 'y': domain.label(y)},
                    detail='α(x∨y) ≠ α(x)⊕α(y)',
                    left=joined, right=summed, left_text=text(joined), right_text=text(summed),
                ))

    pairs = 0
    if domain.size <= exhaustive_threshold:
        mode = VerificationMode.EXHAUSTIVE
        for x in domain.elements():
            for y in submasks(domain.top & ~x):
                check_pair(x, y)
                pairs += 1
        used_seed = None
    else:
        mode = VerificationMode.SAMPLED
        rng = random.Random(seed)
        for _ in range(sample_count):
            x = y = 0
            for i in range(domain.atom_count):
                slot = rng.randrange(3)
                if slot == 1:
                    x |= 1 << i
                elif slot == 2:
                    y |= 1 << i
            check_pair(x, y)
            pairs += 1
        used_seed = seed

    report = ObservableReport(mode=mode, domain_size=domain.size, pairs_checked=pairs,
                              violations=violations, seed=used_seed)
    logger.info('observable verification finished', extra={
        'observable': observable.describe(),
        'mode': mode.value,
        'pairs_checked': pairs,
        'passed': report.passed,
    })
    return report


def range_contains(observable: Observable, elements: Sequence[Hashable],
                   max_domain_size: int = 1 << 16) -> Dict[Hashable, Optional[int]]:
    """
    A domain element mapped to each requested value, or None when absent.

    Limit observables answer with their constructive family for elements of
    S; everything else is found by sweeping the domain in canonical order.
    """
    found: Dict[Hashable, Optional[int]] = {}
    pending = []
    for element in elements:
        element = observable.codomain.require(element)
        if isinstance(observable, LimitObservable) and element in observable.limit.universe:
            bits = observable.range_witness(observable.limit.universe.index(element)).bits
            if observable.evaluate(bits) == element:
                found[element] = bits
                continue
        pending.append(element)
    if pending:
        if observable.domain.size > max_domain_size:
            raise InputError(f"range search is limited to domains of {max_domain_size} elements")
        preimages = observable.preimages()
        for element in pending:
            options = preimages.get(element)
            found[element] = options[0] if options else None
    return found


@dataclass
class CertificateRecheck:
    """Outcome of re-verifying a certificate from its serialized form."""
    observable: ObservableReport
    witness_failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.observable.passed and not self.witness_failures

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'observable': self.observable.to_dict(),
            'witness_failures': list(self.witness_failures),
        }


def _certificate_field(entry: Any, name: str, kind: type, where: str) -> Any:
    if not isinstance(entry, dict):
        raise InputError(f"certificate {where} must be a JSON object")
    if name not in entry:
        raise InputError(f"certificate {where} is missing field {name!r}")
    value = entry[name]
    if not isinstance(value, kind):
        raise InputError(f"certificate {where} field {name!r} must be of type {kind.__name__}")
    return value


def recheck_certificate(certificate: CoexistenceCertificate, algebra: EffectAlgebra,
                        exhaustive_threshold: int = 256, sample_count: int = 100_000,
                        seed: int = 0) -> CertificateRecheck:
    """Rebuild the observable from the certificate's atom values and re-check everything."""
    names = certificate.elements
    if len(set(names)) != len(names):
        raise InputError("certificate S contains repeated names")
    index = {name: i for i, name in enumerate(names)}
    if certificate.boolean_atoms != 1 << len(names) or len(certificate.atoms) != certificate.boolean_atoms:
        raise InputError(
            f"certificate lists {len(certificate.atoms)} atoms for |S| = {len(names)}; "
            f"expected {1 << len(names)}",
        )

    def subset_mask(subset: Sequence[str]) -> int:
        mask = 0
        for name in subset:
            if not isinstance(name, str) or name not in index:
                raise InputError(f"certificate subset mentions {name!r}, which is not in S")
            mask |= 1 << index[name]
        return mask

    values: List[Optional[Hashable]] = [None] * certificate.boolean_atoms
    for entry in certificate.atoms:
        subset = _certificate_field(entry, 'subset', list, 'atom')
        if 'value' not in entry:
            raise InputError("certificate atom is missing field 'value'")
        values[subset_mask(subset)] = algebra.parse_element(entry['value'])
    if any(v is None for v in values):
        raise InputError("certificate does not list a value for every subset of S")

    labels = ['{' + ','.join(names[i] for i in mask_positions(x)) + '}' for x in range(certificate.boolean_atoms)]
    observable = Observable(PowersetAlgebra(labels), algebra, values, name='certificate observable')
    report = verify_observable(observable, exhaustive_threshold, sample_count, seed)

    failures = []
    covered = set()
    for witness in certificate.witnesses:
        bits = 0
        for subset in _certificate_field(witness, 'family', list, 'witness'):
            if not isinstance(subset, list):
                raise InputError(f"certificate witness family member {subset!r} must be a list")
            bits |= 1 << subset_mask(subset)
        if 'element' not in witness:
            raise InputError("certificate witness is missing field 'element'")
        target = algebra.parse_element(witness['element'])
        covered.add(str(witness['element']))
        if observable.evaluate(bits) != target:
            failures.append(str(witness['element']))
    failures.extend(sorted(set(names) - covered))
    return CertificateRecheck(observable=report, witness_failures=failures)
