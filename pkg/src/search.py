"""
Finite-model search for compatibility support mappings and witness mappings.

Every unknown value (a table entry ⟨U|V⟩ or β(X)) is a variable over the
elements of an explicit finite algebra. Variables are assigned in a fixed
order and each axiom instance is checked as soon as its last variable is
assigned, so "exhausted" means no E-valued table exists. Running out of
nodes or time is reported separately as "budget-out".
"""

import hashlib
import itertools
import json
import logging
import time
from typing import Any, Callable, Dict, Hashable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .boolean_algebra import PowersetAlgebra, popcount, submasks
from .csm import CSMDomain, csm_from_table
from .effect_algebra import EffectAlgebra, group_add, group_sub, is_nonnegative
from .errors import InputError
from .models import SearchBudget, SearchMode, SearchOutcome, SearchResult
from .observable import Observable
from .witness import WitnessMapping

logger = logging.getLogger('coexistence.search')

Check = Callable[[List[Any]], bool]


def _require_searchable(algebra: EffectAlgebra) -> None:
    """
    Reject algebras whose elements cannot be listed.

    Args:
        algebra: Algebra to search over

    Raises:
        InputError: If the algebra is not enumerable
    """
    if not algebra.is_enumerable:
        raise InputError(f"{algebra.describe()} is not an explicit finite algebra; only those are searchable")


def _value_order(algebra: EffectAlgebra, budget: SearchBudget) -> List[Hashable]:
    """
    Order in which candidate values are tried.

    Args:
        algebra: Enumerable algebra supplying the candidates
        budget: Search budget; its ``value_order`` lists element names

    Returns:
        Every element exactly once, in the budget's order or the algebra's own

    Raises:
        InputError: If the configured order is not a permutation of the elements
    """
    members = list(algebra.elements())
    if budget.value_order is None:
        return members
    ordered = [algebra.parse_element(name) for name in budget.value_order]
    if len(ordered) != len(members) or set(ordered) != set(members):
        raise InputError("value order must list every element of the algebra exactly once")
    return ordered


def instance_hash(algebra: EffectAlgebra, elements: Sequence[Hashable], mode: SearchMode,
                  extra: Optional[Mapping[str, Any]] = None) -> str:
    """SHA-256 of a canonical JSON description of the query."""
    members = algebra.elements()
    description = {
        'mode': mode.value,
        'algebra': {
            'elements': [algebra.format_element(a) for a in members],
            'sum': sorted(
                [algebra.format_element(a), algebra.format_element(b), algebra.format_element(c)]
                for a in members for b in members
                for c in [algebra.oplus(a, b)] if c is not None
            ),
            'zero': algebra.format_element(algebra.zero),
            'unit': algebra.format_element(algebra.unit),
        },
        'S': [algebra.format_element(e) for e in elements],
        'extra': dict(extra or {}),
    }
    canonical = json.dumps(description, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


class _Backtracker:
    """Depth-first assignment of variables 0..n-1 with per-variable checks."""

    def __init__(self, domains: Sequence[Sequence[Hashable]], checks: Sequence[Sequence[Check]],
                 budget: SearchBudget):
        self.domains = domains
        self.checks = checks
        self.budget = budget
        self.nodes = 0

    def run(self) -> Tuple[SearchOutcome, Optional[List[Any]]]:
        count = len(self.domains)
        assignment: List[Any] = [None] * count
        cursor = [0] * count
        started = time.monotonic()
        depth = 0
        while 0 <= depth < count:
            options = self.domains[depth]
            if cursor[depth] == len(options):
                cursor[depth] = 0
                assignment[depth] = None
                depth -= 1
                continue
            assignment[depth] = options[cursor[depth]]
            cursor[depth] += 1
            self.nodes += 1
            if self.nodes > self.budget.max_nodes:
                return SearchOutcome.BUDGET_OUT, None
            if self.nodes % 1024 == 0 and time.monotonic() - started > self.budget.time_limit:
                return SearchOutcome.BUDGET_OUT, None
            if all(check(assignment) for check in self.checks[depth]):
                depth += 1
        if depth == count:
            return SearchOutcome.FOUND, assignment
        return SearchOutcome.EXHAUSTED, None


def _finish(mode: SearchMode, outcome: SearchOutcome, nodes: int, started: float,
            digest: str, solution: Any) -> SearchResult:
    result = SearchResult(
        mode=mode,
        outcome=outcome,
        nodes=nodes,
        elapsed_seconds=time.monotonic() - started,
        instance_hash=digest,
        solution=solution,
    )
    logger.info('search finished', extra=result.to_log_record())
    return result


def search_csm(algebra: EffectAlgebra, elements: Sequence[Hashable], strong: bool = False,
               budget: Optional[SearchBudget] = None,
               fixed_units: Optional[Mapping[int, Hashable]] = None,
               mode: Optional[SearchMode] = None) -> SearchResult:
    """
    Search for a CSM table on S, optionally strong.

    ``fixed_units`` pins ⟨X|{1}⟩ for the given subset masks. Entries are
    assigned in increasing (|U|+|V|, U, V) order; (c), (d) and ⟨{c}|{1}⟩ = c
    restrict single entries, the remaining conditions are checked when their
    last entry is assigned.
    """
    _require_searchable(algebra)
    budget = budget or SearchBudget()
    mode = mode or (SearchMode.STRONG_CSM if strong else SearchMode.CSM)
    started = time.monotonic()
    domain = CSMDomain(algebra, elements)
    one = domain.unit_mask
    values = _value_order(algebra, budget)
    subsets = list(domain.subsets())

    pairs = sorted(
        ((u, v) for u in subsets for v in subsets),
        key=lambda pair: (popcount(pair[0]) + popcount(pair[1]), pair[0], pair[1]),
    )
    position = {pair: index for index, pair in enumerate(pairs)}

    forced: Dict[Tuple[int, int], Hashable] = {}

    def force(pair: Tuple[int, int], value: Hashable) -> bool:
        if pair in forced and forced[pair] != value:
            return False
        forced[pair] = value
        return True

    consistent = True
    for u in subsets:
        consistent &= force((u, 0), algebra.zero)
    for index, c in enumerate(domain.elements):
        consistent &= force((0, 1 << index), c)
        consistent &= force((1 << index, one), c)
    for x, value in (fixed_units or {}).items():
        consistent &= force((x, one), algebra.require(value))

    domains = [[forced[pair]] if pair in forced else values for pair in pairs]
    if not consistent:
        domains = [[] for _ in pairs]
    checks: List[List[Check]] = [[] for _ in pairs]

    def attach(involved: Sequence[Tuple[int, int]], check: Check) -> None:
        checks[max(position[p] for p in involved)].append(check)

    def leq_check(low: int, high: int) -> Check:
        return lambda assignment: algebra.leq(assignment[low], assignment[high])

    def e_check(a: int, b: int, c: int, d: int) -> Check:
        def check(assignment: List[Any]) -> bool:
            left = algebra.ominus(assignment[a], assignment[b])
            return left is not None and left == algebra.ominus(assignment[c], assignment[d])
        return check

    for u in subsets:
        for v in subsets:
            attach([(u, v), (u, one)], leq_check(position[(u, v)], position[(u, one)]))
            for index in range(domain.size):
                c = 1 << index
                if not v & c:
                    attach([(u, v), (u, v | c)], leq_check(position[(u, v)], position[(u, v | c)]))
                if strong or not (u | v) & c:
                    involved = [(u | c, one), (u | c, v), (u, v | c), (u, v)]
                    attach(involved, e_check(*(position[p] for p in involved)))

    backtracker = _Backtracker(domains, checks, budget)
    outcome, assignment = backtracker.run()
    solution = None
    if assignment is not None:
        solution = csm_from_table(domain, {pair: assignment[position[pair]] for pair in pairs})
    extra = {'strong': strong}
    if fixed_units:
        extra['fixed_units'] = {
            ','.join(domain.names(x)): algebra.format_element(value) for x, value in sorted(fixed_units.items())
        }
    digest = instance_hash(algebra, domain.elements, mode, extra)
    return _finish(mode, outcome, backtracker.nodes, started, digest, solution)


def search_witness(algebra: EffectAlgebra, elements: Sequence[Hashable],
                   budget: Optional[SearchBudget] = None) -> SearchResult:
    """
    Search for a witness mapping on S over an interval-tagged explicit algebra.

    β(X) is assigned in increasing (|X|, X) order; (A1) and (A2) fix ∅ and
    the singletons, and D_β(X,A) ≥ 0 is checked once β(A) is known.
    """
    _require_searchable(algebra)
    if not algebra.is_interval:
        raise InputError(f"{algebra.describe()} has no interval embedding; witness search needs one")
    budget = budget or SearchBudget()
    started = time.monotonic()
    domain = CSMDomain(algebra, elements, adjoin_unit=False)
    values = _value_order(algebra, budget)
    order = sorted(domain.subsets(), key=lambda x: (popcount(x), x))
    position = {x: index for index, x in enumerate(order)}

    domains: List[List[Hashable]] = []
    for x in order:
        if x == 0:
            domains.append([algebra.unit])
        elif popcount(x) == 1:
            domains.append([domain.subset(x)[0]])
        else:
            domains.append(values)

    def positivity(x: int, a: int) -> Check:
        def check(assignment: List[Any]) -> bool:
            total = tuple(0 * c for c in algebra.to_group(assignment[position[x]]))
            for extra in submasks(a & ~x):
                term = algebra.to_group(assignment[position[x | extra]])
                total = group_sub(total, term) if popcount(extra) % 2 else group_add(total, term)
            return is_nonnegative(total)
        return check

    checks: List[List[Check]] = [[] for _ in order]
    for a in order:
        for x in submasks(a):
            checks[position[a]].append(positivity(x, a))

    backtracker = _Backtracker(domains, checks, budget)
    outcome, assignment = backtracker.run()
    solution = None
    if assignment is not None:
        solution = WitnessMapping(algebra, domain.elements,
                                  {x: assignment[position[x]] for x in order}, name='β found by search')
    digest = instance_hash(algebra, domain.elements, SearchMode.WITNESS)
    return _finish(SearchMode.WITNESS, outcome, backtracker.nodes, started, digest, solution)


def csm_extending_witness(beta: WitnessMapping, strong: bool = False,
                          budget: Optional[SearchBudget] = None) -> SearchResult:
    """Search for a CSM with ⟨X|{1}⟩ = β(X) for every X ⊆ S."""
    domain = beta.domain
    if beta.algebra.unit not in domain.elements:
        raise InputError("extending a witness mapping to a CSM requires 1 ∈ S")
    return search_csm(beta.algebra, domain.elements, strong=strong, budget=budget,
                      fixed_units=dict(beta.values), mode=SearchMode.EXTEND_WITNESS)


def enumerate_observables(algebra: EffectAlgebra, max_atoms: int = 3) -> Iterator[Observable]:
    """Every observable from a powerset algebra with at most ``max_atoms`` atoms into the algebra."""
    _require_searchable(algebra)
    members = algebra.elements()
    for count in range(1, max_atoms + 1):
        boolean = PowersetAlgebra([f"ω{i}" for i in range(count)])
        for atoms in itertools.product(members, repeat=count):
            if algebra.big_oplus(atoms) == algebra.unit:
                yield Observable(boolean, algebra, atoms, name=f"{count}-atom observable")


def find_coexistence_observable(algebra: EffectAlgebra, elements: Sequence[Hashable],
                                max_atoms: int = 3) -> Optional[Observable]:
    """The first enumerated observable whose range contains every element, if any."""
    targets = {algebra.require(e) for e in elements}
    for observable in enumerate_observables(algebra, max_atoms):
        reached = {observable.evaluate(x) for x in observable.domain.elements()}
        if targets <= reached:
            return observable
    return None
