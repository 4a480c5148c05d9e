"""
Derived properties of compatibility support mappings.

``check_csm_lemmas`` covers the consequences of (a)-(e) every mapping has;
``check_strong_properties`` covers the consequences of (e*). For a mapping
that is not strong the latter are evaluated and reported with
``asserted=False``; nothing is claimed about them.
"""

import logging
from typing import Dict, Hashable, List, Optional

from .boolean_algebra import mask_positions, submasks
from .csm import CSM, D, d_expansion, is_strong
from .errors import CoexistenceError
from .models import PropertyReport, Violation

logger = logging.getLogger('coexistence.csm')

CSM_LEMMAS = ('singleton_unit', 'split', 'orthogonal_family')

STRONG_PROPERTIES = (
    'nondisjoint_collapse',
    'unit_shift',
    'antitone_in_U',
    'lower_bound_of_U',
    'upper_bound_of_V',
    'reconstruction',
)


class _FailureLog:
    def __init__(self, names, max_recorded: int):
        self.max_recorded = max_recorded
        self.failures: Dict[str, List[Violation]] = {name: [] for name in names}

    def record(self, name: str, ok: bool, make) -> None:
        if not ok and len(self.failures[name]) < self.max_recorded:
            self.failures[name].append(make())


def _safe_D(csm: CSM, x: int, a: int) -> Optional[Hashable]:
    try:
        return D(csm, x, a)
    except CoexistenceError:
        return None


def _text(csm: CSM, value) -> str:
    return 'undefined' if value is None else csm.algebra.format_element(value)


def check_csm_lemmas(csm: CSM, max_s: int = 5, max_recorded: int = 100) -> PropertyReport:
    """
    Check the identities every valid mapping satisfies.

    singleton_unit: ⟨{c}|{1}⟩ = c.
    split: D(X,A) = D(X,A∪{c}) ⊕ D(X∪{c},A∪{c}) for c ∉ A.
    orthogonal_family: for C disjoint from A the family D(X∪Y,A∪C), Y ⊆ C,
    is orthogonal and sums to D(X,A).
    """
    domain, algebra = csm.domain, csm.algebra
    domain.check_cap(max_s)
    log = _FailureLog(CSM_LEMMAS, max_recorded)
    one = domain.unit_mask

    for index, c in enumerate(domain.elements):
        value = csm.value(1 << index, one)
        log.record('singleton_unit', value == c, lambda: Violation(
            axiom='singleton_unit',
            witness={'c': algebra.format_element(c)},
            detail='⟨{c}|{1}⟩ ≠ c',
            left=value, right=c,
            left_text=_text(csm, value), right_text=_text(csm, c),
        ))

    for a in domain.subsets():
        for x in submasks(a):
            whole = _safe_D(csm, x, a)
            for index in range(domain.size):
                c = 1 << index
                if a & c:
                    continue
                split = None
                first, second = _safe_D(csm, x, a | c), _safe_D(csm, x | c, a | c)
                if first is not None and second is not None:
                    split = algebra.oplus(first, second)
                log.record('split', whole is not None and split == whole, lambda: Violation(
                    axiom='split',
                    witness={'X': domain.names(x), 'A': domain.names(a),
                             'c': algebra.format_element(domain.elements[index])},
                    detail='D(X,A) ≠ D(X,A∪{c}) ⊕ D(X∪{c},A∪{c})',
                    left=whole, right=split,
                    left_text=_text(csm, whole), right_text=_text(csm, split),
                ))

            rest = domain.full_mask & ~a
            for extra in submasks(rest):
                if not extra:
                    continue
                terms = [_safe_D(csm, x | y, a | extra) for y in submasks(extra)]
                total = None if any(t is None for t in terms) else algebra.big_oplus(terms)
                log.record('orthogonal_family', whole is not None and total == whole, lambda: Violation(
                    axiom='orthogonal_family',
                    witness={'X': domain.names(x), 'A': domain.names(a), 'C': domain.names(extra)},
                    detail='⊕_{Y⊆C} D(X∪Y,A∪C) ≠ D(X,A)',
                    left=total, right=whole,
                    left_text=_text(csm, total), right_text=_text(csm, whole),
                ))

    report = PropertyReport(subject=csm.describe(), properties=CSM_LEMMAS, failures=log.failures)
    logger.info('csm lemma check finished', extra={
        'subject': report.subject,
        'statuses': {name: report.holds(name) for name in CSM_LEMMAS},
    })
    return report


def check_strong_properties(csm: CSM, max_s: int = 5, max_recorded: int = 100) -> PropertyReport:
    """Evaluate the consequences of (e*); asserted only when the mapping is strong."""
    domain, algebra = csm.domain, csm.algebra
    domain.check_cap(max_s)
    log = _FailureLog(STRONG_PROPERTIES, max_recorded)
    one = domain.unit_mask
    subsets = domain.subsets()

    for u in subsets:
        bound = csm.value(u, one)
        for v in subsets:
            value = csm.value(u, v)
            if u & v:
                log.record('nondisjoint_collapse', value == bound, lambda: Violation(
                    axiom='nondisjoint_collapse',
                    witness={'U': domain.names(u), 'V': domain.names(v)},
                    detail='U∩V ≠ ∅ but ⟨U|V⟩ ≠ ⟨U|{1}⟩',
                    left=value, right=bound,
                    left_text=_text(csm, value), right_text=_text(csm, bound),
                ))
            for u_small in submasks(u):
                wider = csm.value(u_small, v)
                log.record('antitone_in_U', algebra.leq(value, wider), lambda: Violation(
                    axiom='antitone_in_U',
                    witness={'U1': domain.names(u_small), 'U2': domain.names(u), 'V': domain.names(v)},
                    detail='U1 ⊆ U2 but ⟨U2|V⟩ ≰ ⟨U1|V⟩',
                    left=value, right=wider,
                    left_text=_text(csm, value), right_text=_text(csm, wider),
                ))
            for index in mask_positions(u):
                a = domain.elements[index]
                for candidate in (bound, value):
                    log.record('lower_bound_of_U', algebra.leq(candidate, a), lambda: Violation(
                        axiom='lower_bound_of_U',
                        witness={'U': domain.names(u), 'V': domain.names(v), 'a': algebra.format_element(a)},
                        detail='⟨U|{1}⟩ or ⟨U|V⟩ is not below a ∈ U',
                        left=candidate, right=a,
                        left_text=_text(csm, candidate), right_text=_text(csm, a),
                    ))
            try:
                rebuilt = d_expansion(csm, u, v)
            except CoexistenceError:
                rebuilt = None
            log.record('reconstruction', rebuilt == value, lambda: Violation(
                axiom='reconstruction',
                witness={'U': domain.names(u), 'V': domain.names(v)},
                detail='D-value expansion differs from ⟨U|V⟩',
                left=rebuilt, right=value,
                left_text=_text(csm, rebuilt), right_text=_text(csm, value),
            ))
        for index, c in enumerate(domain.elements):
            shifted = csm.value(u | 1 << index, one)
            single = csm.value(u, 1 << index)
            log.record('unit_shift', shifted == single, lambda: Violation(
                axiom='unit_shift',
                witness={'U': domain.names(u), 'c': algebra.format_element(c)},
                detail='⟨U∪{c}|{1}⟩ ≠ ⟨U|{c}⟩',
                left=shifted, right=single,
                left_text=_text(csm, shifted), right_text=_text(csm, single),
            ))

    for v in subsets:
        top = csm.value(0, v)
        for index in mask_positions(v):
            b = domain.elements[index]
            log.record('upper_bound_of_V', algebra.leq(b, top), lambda: Violation(
                axiom='upper_bound_of_V',
                witness={'V': domain.names(v), 'b': algebra.format_element(b)},
                detail='b ∈ V is not below ⟨∅|V⟩',
                left=b, right=top,
                left_text=_text(csm, b), right_text=_text(csm, top),
            ))

    asserted = is_strong(csm, max_s=max_s)
    report = PropertyReport(
        subject=csm.describe(),
        properties=STRONG_PROPERTIES,
        failures=log.failures,
        asserted=asserted,
    )
    logger.info('strong property check finished', extra={
        'subject': report.subject,
        'asserted': asserted,
        'statuses': {name: report.holds(name) for name in STRONG_PROPERTIES},
    })
    return report
