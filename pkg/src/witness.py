"""
Witness mappings on interval effect algebras.

β assigns an element of E to every subset of S; D_β(X,A) is the signed
inclusion-exclusion sum of β over X ⊆ Z ⊆ A, computed in the ambient group
where it may be negative.
"""

import logging
from typing import Callable, Dict, Hashable, Iterable, Mapping, Optional, Tuple

from .boolean_algebra import popcount, submasks
from .csm import CSM, CSMDomain, D
from .effect_algebra import EffectAlgebra, Vector, format_rational, group_add, group_sub, is_nonnegative
from .errors import CoexistenceError, InputError
from .models import DEqualityCheck, Violation, WitnessReport

logger = logging.getLogger('coexistence.witness')

WITNESS_CONDITIONS = ('(A1)', '(A2)', '(A3)')


def format_group(vector: Vector) -> str:
    """
    Format a vector of the ambient group, which may leave [0, u].

    Args:
        vector: Group vector with rational coordinates

    Returns:
        'p/q' for one coordinate, '(p/q,...)' otherwise
    """
    if len(vector) == 1:
        return format_rational(vector[0])
    return '(' + ','.join(format_rational(c) for c in vector) + ')'


class WitnessMapping:
    """A candidate β: Fin(S) → E, one value per subset mask."""

    def __init__(self, algebra: EffectAlgebra, elements: Iterable[Hashable],
                 values: Mapping[int, Hashable], name: str = 'β'):
        if not algebra.is_interval:
            raise InputError(f"witness mappings need an interval effect algebra, got {algebra.describe()}")
        self.domain = CSMDomain(algebra, elements, adjoin_unit=False)
        missing = [x for x in self.domain.subsets() if x not in values]
        if missing:
            raise InputError(
                f"witness mapping is not total: β({self.domain.names(missing[0])}) is missing "
                f"({len(missing)} values absent)",
            )
        self.values = {x: algebra.require(values[x]) for x in self.domain.subsets()}
        self.name = name
        self._recursive: Dict[Tuple[int, int], Vector] = {}

    @classmethod
    def from_function(cls, algebra: EffectAlgebra, elements: Iterable[Hashable],
                      rule: Callable[[Tuple[Hashable, ...]], Hashable], name: str = 'β') -> 'WitnessMapping':
        domain = CSMDomain(algebra, elements, adjoin_unit=False)
        return cls(algebra, domain.elements, {x: rule(domain.subset(x)) for x in domain.subsets()}, name)

    @property
    def algebra(self) -> EffectAlgebra:
        return self.domain.algebra

    def value(self, x_mask: int) -> Hashable:
        return self.values[x_mask]

    def group_value(self, x_mask: int) -> Vector:
        return self.algebra.to_group(self.values[x_mask])

    def replace(self, x_mask: int, value: Hashable) -> 'WitnessMapping':
        """A copy with β(X) changed; used to perturb a mapping."""
        values = dict(self.values)
        values[x_mask] = value
        return WitnessMapping(self.algebra, self.domain.elements, values, self.name)

    def describe(self) -> str:
        return f"witness mapping {self.name} on {self.domain.describe()}"


def D_beta(beta: WitnessMapping, x_mask: int, a_mask: int) -> Vector:
    """D_β(X,A) = Σ_{X⊆Z⊆A} (−1)^{|X|+|Z|} β(Z), in the ambient group."""
    if x_mask & ~a_mask:
        raise InputError("D_β(X,A) requires X ⊆ A")
    total = tuple(0 * c for c in beta.group_value(x_mask))
    for extra in submasks(a_mask & ~x_mask):
        term = beta.group_value(x_mask | extra)
        total = group_sub(total, term) if popcount(extra) % 2 else group_add(total, term)
    return total


def D_beta_recursive(beta: WitnessMapping, x_mask: int, a_mask: int) -> Vector:
    """D_β by the recursion D_β(X,A) = D_β(X,A∖{c}) − D_β(X∪{c},A) with D_β(X,X) = β(X)."""
    if x_mask & ~a_mask:
        raise InputError("D_β(X,A) requires X ⊆ A")
    key = (x_mask, a_mask)
    if key not in beta._recursive:
        rest = a_mask & ~x_mask
        if not rest:
            result = beta.group_value(x_mask)
        else:
            c = rest & -rest
            result = group_sub(D_beta_recursive(beta, x_mask, a_mask & ~c),
                               D_beta_recursive(beta, x_mask | c, a_mask))
        beta._recursive[key] = result
    return beta._recursive[key]


def verify_witness(beta: WitnessMapping, max_s: int = 5, max_recorded: int = 100) -> WitnessReport:
    """Check (A1), (A2) and (A3) over all 3^|S| pairs X ⊆ A."""
    domain, algebra = beta.domain, beta.algebra
    domain.check_cap(max_s)
    violations = {axiom: [] for axiom in WITNESS_CONDITIONS}

    empty = beta.value(0)
    if empty != algebra.unit:
        violations['(A1)'].append(Violation(
            axiom='(A1)', witness={'X': []}, detail='β(∅) ≠ 1',
            left=empty, right=algebra.unit,
            left_text=algebra.format_element(empty), right_text=algebra.format_element(algebra.unit),
        ))

    for index, c in enumerate(domain.elements):
        single = beta.value(1 << index)
        if single != c:
            violations['(A2)'].append(Violation(
                axiom='(A2)', witness={'c': algebra.format_element(c)}, detail='β({c}) ≠ c',
                left=single, right=c,
                left_text=algebra.format_element(single), right_text=algebra.format_element(c),
            ))

    pairs = 0
    for a in domain.subsets():
        for x in submasks(a):
            pairs += 1
            difference = D_beta(beta, x, a)
            if not is_nonnegative(difference) and len(violations['(A3)']) < max_recorded:
                violations['(A3)'].append(Violation(
                    axiom='(A3)', witness={'X': domain.names(x), 'A': domain.names(a)},
                    detail='D_β(X,A) is not ≥ 0',
                    left=difference, left_text=format_group(difference), right_text='0',
                ))

    report = WitnessReport(subject=beta.describe(), pairs_checked=pairs, violations=violations)
    logger.info('witness verification finished', extra={
        'subject': report.subject,
        'statuses': {axiom: report.holds(axiom) for axiom in WITNESS_CONDITIONS},
        'pairs_checked': pairs,
    })
    return report


def witness_from_csm(csm: CSM) -> WitnessMapping:
    """β(X) = ⟨X|{1}⟩."""
    if not csm.algebra.is_interval:
        raise InputError(f"{csm.algebra.describe()} is not an interval effect algebra")
    one = csm.domain.unit_mask
    values = {x: csm.value(x, one) for x in csm.domain.subsets()}
    return WitnessMapping(csm.algebra, csm.domain.elements, values, name=f"β from {csm.kind} mapping")


def check_D_equality(csm: CSM, beta: WitnessMapping) -> DEqualityCheck:
    """Compare D(X,A), embedded in the group, with D_β(X,A) on every X ⊆ A ⊆ S."""
    if beta.domain.elements != csm.domain.elements:
        raise InputError("witness mapping and CSM are defined on different S")
    domain, algebra = csm.domain, csm.algebra
    pairs = 0
    for a in domain.subsets():
        for x in submasks(a):
            pairs += 1
            group_side = D_beta(beta, x, a)
            try:
                effect_side: Optional[Vector] = algebra.to_group(D(csm, x, a))
                effect_text = format_group(effect_side)
            except CoexistenceError:
                effect_side, effect_text = None, 'undefined'
            if effect_side != group_side:
                return DEqualityCheck(holds=False, pairs_checked=pairs, mismatch=Violation(
                    axiom='D = D_β', witness={'X': domain.names(x), 'A': domain.names(a)},
                    detail='D(X,A) ≠ D_β(X,A)',
                    left=effect_side, right=group_side,
                    left_text=effect_text, right_text=format_group(group_side),
                ))
    return DEqualityCheck(holds=True, pairs_checked=pairs)


def check_beta_recursion(beta: WitnessMapping) -> DEqualityCheck:
    """D_β(X,A) = D_β(X,A∪{c}) + D_β(X∪{c},A∪{c}) for c ∉ A; holds for any β."""
    domain = beta.domain
    pairs = 0
    for a in domain.subsets():
        for x in submasks(a):
            for index in range(domain.size):
                c = 1 << index
                if a & c:
                    continue
                pairs += 1
                whole = D_beta(beta, x, a)
                split = group_add(D_beta(beta, x, a | c), D_beta(beta, x | c, a | c))
                if whole != split:
                    return DEqualityCheck(holds=False, pairs_checked=pairs, mismatch=Violation(
                        axiom='recursion',
                        witness={'X': domain.names(x), 'A': domain.names(a),
                                 'c': beta.algebra.format_element(domain.elements[index])},
                        left=whole, right=split,
                        left_text=format_group(whole), right_text=format_group(split),
                    ))
    return DEqualityCheck(holds=True, pairs_checked=pairs)


def compare_D_beta_implementations(beta: WitnessMapping) -> DEqualityCheck:
    """The closed-form alternating sum against the recursion, on every X ⊆ A."""
    domain = beta.domain
    pairs = 0
    for a in domain.subsets():
        for x in submasks(a):
            pairs += 1
            closed, recursive = D_beta(beta, x, a), D_beta_recursive(beta, x, a)
            if closed != recursive:
                return DEqualityCheck(holds=False, pairs_checked=pairs, mismatch=Violation(
                    axiom='closed form = recursion',
                    witness={'X': domain.names(x), 'A': domain.names(a)},
                    left=closed, right=recursive,
                    left_text=format_group(closed), right_text=format_group(recursive),
                ))
    return DEqualityCheck(holds=True, pairs_checked=pairs)
