"""
Effect algebra foundations with exact arithmetic.

Two carrier representations share one interface: explicit tables over string
identifiers (finite and enumerable) and interval algebras [0, u] of rational
vector groups (tuple algebras and products of MV chains). Undefined partial
sums and differences are returned as ``None``; only malformed inputs raise.
"""

import itertools
from abc import ABC, abstractmethod
from fractions import Fraction
from numbers import Rational
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from typing_extensions import TypeAlias

from .errors import InputError
from .models import MVCheck, ValidationReport, Violation

Element: TypeAlias = Hashable
Vector: TypeAlias = Tuple[Fraction, ...]


def to_fraction(value) -> Fraction:
    """Convert an int, Fraction or 'p/q' string to a Fraction; floats are rejected."""
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"inexact or non-numeric value {value!r}; use 'p/q' strings")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"cannot parse rational {value!r}") from e
    raise InputError(f"cannot interpret {value!r} as a rational")


def format_rational(value: Fraction) -> str:
    """Format a rational as 'p/q', or 'p' when it is an integer."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def group_add(x: Vector, y: Vector) -> Vector:
    """
    Add two vectors of the ambient group coordinatewise.

    Args:
        x: First vector
        y: Second vector of the same dimension

    Returns:
        The sum x + y
    """
    return tuple(a + b for a, b in zip(x, y))


def group_sub(x: Vector, y: Vector) -> Vector:
    """
    Subtract two vectors of the ambient group coordinatewise.

    Args:
        x: Minuend
        y: Subtrahend of the same dimension

    Returns:
        The difference x - y, which may have negative coordinates
    """
    return tuple(a - b for a, b in zip(x, y))


def group_zero(dimension: int) -> Vector:
    """
    Build the zero vector.

    Args:
        dimension: Number of coordinates

    Returns:
        A tuple of ``dimension`` zero Fractions
    """
    return tuple(Fraction(0) for _ in range(dimension))


def is_nonnegative(x: Vector) -> bool:
    """
    Check membership in the positive cone.

    Args:
        x: Vector to test

    Returns:
        True if every coordinate is at least zero
    """
    return all(c >= 0 for c in x)


class EffectAlgebra(ABC):
    """
    Abstract partial algebra (E; ⊕, 0, 1).

    Subclasses implement the raw partial sum and difference on members;
    the public operations validate membership first so that elements of a
    different algebra are reported as input errors.
    """

    kind = 'abstract'
    mv_by_construction = False

    @property
    @abstractmethod
    def zero(self) -> Element:
        """The neutral element 0."""

    @property
    @abstractmethod
    def unit(self) -> Element:
        """The unit 1."""

    @abstractmethod
    def contains(self, a: Element) -> bool:
        """Check membership without raising."""

    @abstractmethod
    def _sum(self, a: Element, b: Element) -> Optional[Element]:
        """Partial sum of two members."""

    @abstractmethod
    def _difference(self, b: Element, a: Element) -> Optional[Element]:
        """The c with a ⊕ c = b, if any."""

    @abstractmethod
    def format_element(self, a: Element) -> str:
        """Human-readable and serializable name of an element."""

    @abstractmethod
    def parse_element(self, raw) -> Element:
        """Inverse of ``format_element``; also accepts JSON lists for vectors."""

    @abstractmethod
    def describe(self) -> str:
        """Short description used in reports and error messages."""

    def require(self, a: Element) -> Element:
        """
        Return ``a`` unchanged if it belongs to this algebra.

        Raises:
            InputError: If ``a`` is not an element
        """
        if not self.contains(a):
            raise InputError(
                f"{a!r} is not an element of {self.describe()}",
                {'algebra': self.describe()},
            )
        return a

    def oplus(self, a: Element, b: Element) -> Optional[Element]:
        """Return a ⊕ b, or None when the sum is undefined."""
        return self._sum(self.require(a), self.require(b))

    def ominus(self, b: Element, a: Element) -> Optional[Element]:
        """Return b ⊖ a, defined iff a ≤ b."""
        return self._difference(self.require(b), self.require(a))

    def complement(self, a: Element) -> Element:
        """
        The unique a′ with a ⊕ a′ = 1.

        Args:
            a: Element of this algebra

        Returns:
            1 ⊖ a

        Raises:
            InputError: If 1 ⊖ a is undefined, which only a broken table allows
        """
        result = self.ominus(self.unit, a)
        if result is None:
            raise InputError(f"{self.format_element(a)} has no complement in {self.describe()}")
        return result

    def leq(self, a: Element, b: Element) -> bool:
        """a ≤ b iff b ⊖ a is defined."""
        return self.ominus(b, a) is not None

    def orthogonal(self, a: Element, b: Element) -> bool:
        return self.oplus(a, b) is not None

    def big_oplus(self, family: Iterable[Element]) -> Optional[Element]:
        """Left fold of ⊕ over a finite family; the empty sum is 0."""
        total: Optional[Element] = None
        for a in family:
            total = self.require(a) if total is None else self.oplus(total, a)
            if total is None:
                return None
        return self.zero if total is None else total

    # Enumeration

    @property
    def is_enumerable(self) -> bool:
        return False

    def elements(self) -> Tuple[Element, ...]:
        raise InputError(f"{self.describe()} is not enumerable")

    # Lattice structure

    @property
    def is_lattice_ordered(self) -> bool:
        return False

    def meet(self, a: Element, b: Element) -> Element:
        raise InputError(f"{self.describe()} has no lattice operations")

    def join(self, a: Element, b: Element) -> Element:
        raise InputError(f"{self.describe()} has no lattice operations")

    def big_meet(self, family: Iterable[Element]) -> Element:
        result = self.unit
        for a in family:
            result = self.meet(result, a)
        return result

    def big_join(self, family: Iterable[Element]) -> Element:
        result = self.zero
        for a in family:
            result = self.join(result, a)
        return result

    def mv_plus(self, a: Element, b: Element) -> Element:
        """Total MV-algebra sum a ⊞ b = a ⊕ (a′ ∧ b)."""
        result = self.oplus(a, self.meet(self.complement(a), b))
        if result is None:
            raise InputError(f"{self.describe()} is not an MV-effect algebra")
        return result

    # Interval structure

    @property
    def is_interval(self) -> bool:
        return False

    def to_group(self, a: Element) -> Vector:
        raise InputError(f"{self.describe()} is not an interval effect algebra")

    def from_group(self, v: Vector) -> Optional[Element]:
        raise InputError(f"{self.describe()} is not an interval effect algebra")


class IntervalEffectAlgebra(EffectAlgebra):
    """
    Interval [0, u] of the group of rational vectors with componentwise order,
    u the all-ones vector. Elements are tuples of Fractions.
    """

    kind = 'interval'
    mv_by_construction = True

    def __init__(self, dimension: int):
        if dimension < 1:
            raise InputError(f"dimension must be positive, got {dimension}")
        self.dimension = dimension
        self._zero = group_zero(dimension)
        self._unit = tuple(Fraction(1) for _ in range(dimension))

    @property
    def zero(self) -> Vector:
        return self._zero

    @property
    def unit(self) -> Vector:
        return self._unit

    def _valid_coordinate(self, index: int, c) -> bool:
        return 0 <= c <= 1

    def contains(self, a) -> bool:
        if not isinstance(a, tuple) or len(a) != self.dimension:
            return False
        for index, c in enumerate(a):
            if isinstance(c, (bool, float)) or not isinstance(c, Rational):
                return False
            if not self._valid_coordinate(index, c):
                return False
        return True

    def element(self, *coords) -> Vector:
        """Build an element from ints, Fractions or 'p/q' strings."""
        vector = tuple(to_fraction(c) for c in coords)
        return self.require(vector)

    def _sum(self, a: Vector, b: Vector) -> Optional[Vector]:
        return self.from_group(group_add(a, b))

    def _difference(self, b: Vector, a: Vector) -> Optional[Vector]:
        return self.from_group(group_sub(b, a))

    def format_element(self, a: Vector) -> str:
        if self.dimension == 1:
            return format_rational(a[0])
        return '(' + ','.join(format_rational(c) for c in a) + ')'

    def parse_element(self, raw) -> Vector:
        if isinstance(raw, (list, tuple)):
            return self.element(*raw)
        if isinstance(raw, str):
            text = raw.strip()
            if text.startswith('(') and text.endswith(')'):
                return self.element(*text[1:-1].split(','))
        return self.element(raw)

    @property
    def is_lattice_ordered(self) -> bool:
        return True

    def meet(self, a: Vector, b: Vector) -> Vector:
        self.require(a)
        self.require(b)
        return tuple(min(x, y) for x, y in zip(a, b))

    def join(self, a: Vector, b: Vector) -> Vector:
        self.require(a)
        self.require(b)
        return tuple(max(x, y) for x, y in zip(a, b))

    @property
    def is_interval(self) -> bool:
        return True

    def to_group(self, a: Vector) -> Vector:
        return self.require(a)

    def from_group(self, v: Vector) -> Optional[Vector]:
        vector = tuple(Fraction(c) for c in v)
        return vector if self.contains(vector) else None


class TupleEffectAlgebra(IntervalEffectAlgebra):
    """Commuting effects as simultaneously diagonalized rational tuples in [0,1]^n."""

    kind = 'tuple'

    def describe(self) -> str:
        return f"tuple effect algebra [0,1]^{self.dimension}"

    def multiply(self, a: Vector, b: Vector) -> Vector:
        """Coordinatewise product a.b of commuting effects."""
        self.require(a)
        self.require(b)
        return tuple(x * y for x, y in zip(a, b))

    def co_join(self, a: Vector, b: Vector) -> Vector:
        """a ⊔ b = a + b − ab."""
        self.require(a)
        self.require(b)
        return tuple(x + y - x * y for x, y in zip(a, b))


class MVChainProduct(IntervalEffectAlgebra):
    """Product of finite MV chains C_k = {0, 1/k, ..., 1}."""

    kind = 'mv-chain-product'

    def __init__(self, orders: Sequence[int]):
        try:
            orders = tuple(int(k) for k in orders)
        except (TypeError, ValueError) as e:
            raise InputError(f"chain orders must be positive integers, got {orders!r}") from e
        if not orders or any(k < 1 for k in orders):
            raise InputError(f"chain orders must be positive integers, got {list(orders)}")
        super().__init__(len(orders))
        self.orders = orders

    def describe(self) -> str:
        return f"MV chain product {list(self.orders)}"

    def _valid_coordinate(self, index: int, c) -> bool:
        return 0 <= c <= 1 and (Fraction(c) * self.orders[index]).denominator == 1

    @property
    def is_enumerable(self) -> bool:
        return True

    @property
    def size(self) -> int:
        size = 1
        for k in self.orders:
            size *= k + 1
        return size

    def elements(self) -> Tuple[Vector, ...]:
        chains = [[Fraction(j, k) for j in range(k + 1)] for k in self.orders]
        return tuple(itertools.product(*chains))


def powerset_effect_algebra(atoms: int) -> MVChainProduct:
    """The Boolean algebra 2^n as an effect algebra (product of n two-element chains)."""
    return MVChainProduct([1] * atoms)


class TableEffectAlgebra(EffectAlgebra):
    """
    Finite effect algebra given by an explicit partial sum table.

    A listed triple (a, b, c) defines both a⊕b and b⊕a; two listed
    orientations with different results are kept and reported as E1
    violations. An optional embedding into a rational vector group marks the
    table as an interval effect algebra.
    """

    kind = 'table'

    def __init__(self, elements: Sequence[str], sums: Iterable[Sequence[str]],
                 zero: str, unit: str,
                 embedding: Optional[Mapping[str, Sequence]] = None,
                 name: str = 'table'):
        self.name = name
        self._elements: Tuple[str, ...] = tuple(elements)
        if len(set(self._elements)) != len(self._elements):
            raise InputError(f"duplicate element identifiers in {name}")
        self._index = {e: i for i, e in enumerate(self._elements)}
        for ident, role in ((zero, 'zero'), (unit, 'unit')):
            if ident not in self._index:
                raise InputError(f"{role} identifier {ident!r} is not a listed element")
        self._zero = zero
        self._unit = unit

        declared: Dict[Tuple[str, str], str] = {}
        for entry in sums:
            if not isinstance(entry, (list, tuple)) or len(entry) != 3:
                raise InputError(f"sum entry {entry!r} must have the form [a, b, c]")
            a, b, c = entry
            for ident in (a, b, c):
                if not isinstance(ident, str) or ident not in self._index:
                    raise InputError(
                        f"sum entry {list(entry)!r} references unknown identifier {ident!r}",
                        {'entry': list(entry)},
                    )
            previous = declared.get((a, b))
            if previous is not None and previous != c:
                raise InputError(f"{a}⊕{b} is listed with two results: {previous!r} and {c!r}")
            declared[(a, b)] = c

        self._table: Dict[Tuple[str, str], str] = dict(declared)
        self.conflicts: List[Tuple[str, str, str, str]] = []
        for (a, b), c in declared.items():
            if (b, a) not in declared:
                self._table[(b, a)] = c
            elif declared[(b, a)] != c and self._index[a] < self._index[b]:
                self.conflicts.append((a, b, c, declared[(b, a)]))

        self._differences: Dict[Tuple[str, str], str] = {}
        for a in self._elements:
            for c in self._elements:
                s = self._table.get((a, c))
                if s is not None:
                    self._differences.setdefault((s, a), c)

        self._embedding: Optional[Dict[str, Vector]] = None
        if embedding is not None:
            self._embedding = self._build_embedding(embedding)
        self._lattice: Optional[Tuple[Dict, Dict]] = None
        self._lattice_checked = False

    def _build_embedding(self, embedding: Mapping[str, Sequence]) -> Dict[str, Vector]:
        vectors: Dict[str, Vector] = {}
        for ident in self._elements:
            if ident not in embedding:
                raise InputError(f"embedding has no vector for {ident!r}")
            raw = embedding[ident]
            if isinstance(raw, (str, int, Fraction)):
                raw = [raw]
            if not isinstance(raw, (list, tuple)):
                raise InputError(f"embedding vector for {ident!r} must be a list of rationals")
            vectors[ident] = tuple(to_fraction(c) for c in raw)
        unknown = set(embedding) - set(self._elements)
        if unknown:
            raise InputError(f"embedding references unknown identifiers {sorted(unknown)}")
        dimensions = {len(v) for v in vectors.values()}
        if len(dimensions) != 1:
            raise InputError("embedding vectors must share one dimension")
        if len(set(vectors.values())) != len(vectors):
            raise InputError("embedding must be injective")
        return vectors

    @property
    def zero(self) -> str:
        return self._zero

    @property
    def unit(self) -> str:
        return self._unit

    def contains(self, a) -> bool:
        return isinstance(a, str) and a in self._index

    def _sum(self, a: str, b: str) -> Optional[str]:
        return self._table.get((a, b))

    def _difference(self, b: str, a: str) -> Optional[str]:
        return self._differences.get((b, a))

    def format_element(self, a: str) -> str:
        return a

    def parse_element(self, raw) -> str:
        return self.require(raw)

    def describe(self) -> str:
        return f"table effect algebra {self.name!r} ({len(self._elements)} elements)"

    def index_of(self, a: str) -> int:
        return self._index[self.require(a)]

    def sum_entries(self) -> List[Tuple[str, str, str]]:
        """Defined sums in canonical order, one orientation per unordered pair."""
        entries = []
        for i, a in enumerate(self._elements):
            for b in self._elements[i:]:
                c = self._table.get((a, b))
                if c is not None:
                    entries.append((a, b, c))
        return entries

    @property
    def is_enumerable(self) -> bool:
        return True

    def elements(self) -> Tuple[str, ...]:
        return self._elements

    @property
    def is_interval(self) -> bool:
        return self._embedding is not None

    def to_group(self, a: str) -> Vector:
        if self._embedding is None:
            return super().to_group(a)
        return self._embedding[self.require(a)]

    def from_group(self, v: Vector) -> Optional[str]:
        if self._embedding is None:
            return super().from_group(v)
        vector = tuple(Fraction(c) for c in v)
        for ident, image in self._embedding.items():
            if image == vector:
                return ident
        return None

    def _compute_lattice(self) -> Optional[Tuple[Dict, Dict]]:
        if not self._lattice_checked:
            self._lattice_checked = True
            meets: Dict[Tuple[str, str], str] = {}
            joins: Dict[Tuple[str, str], str] = {}
            for a in self._elements:
                for b in self._elements:
                    lower = [x for x in self._elements if self.leq(x, a) and self.leq(x, b)]
                    upper = [x for x in self._elements if self.leq(a, x) and self.leq(b, x)]
                    greatest = [m for m in lower if all(self.leq(x, m) for x in lower)]
                    least = [j for j in upper if all(self.leq(j, x) for x in upper)]
                    if len(greatest) != 1 or len(least) != 1:
                        return None
                    meets[(a, b)] = greatest[0]
                    joins[(a, b)] = least[0]
            self._lattice = (meets, joins)
        return self._lattice

    @property
    def is_lattice_ordered(self) -> bool:
        return self._compute_lattice() is not None

    def meet(self, a: str, b: str) -> str:
        lattice = self._compute_lattice()
        if lattice is None:
            return super().meet(a, b)
        return lattice[0][(self.require(a), self.require(b))]

    def join(self, a: str, b: str) -> str:
        lattice = self._compute_lattice()
        if lattice is None:
            return super().join(a, b)
        return lattice[1][(self.require(a), self.require(b))]

    @classmethod
    def from_algebra(cls, algebra: EffectAlgebra, name: Optional[str] = None) -> 'TableEffectAlgebra':
        """
        Enumerate a finite algebra into a table over formatted element names.

        Interval algebras keep their group embedding, so the table can be
        used wherever the ambient group is needed.
        """
        if isinstance(algebra, TableEffectAlgebra):
            return algebra
        members = algebra.elements()
        names = {a: algebra.format_element(a) for a in members}
        sums = []
        for a in members:
            for b in members:
                c = algebra.oplus(a, b)
                if c is not None:
                    sums.append((names[a], names[b], names[c]))
        embedding = None
        if algebra.is_interval:
            embedding = {names[a]: algebra.to_group(a) for a in members}
        return cls(
            elements=[names[a] for a in members],
            sums=sums,
            zero=names[algebra.zero],
            unit=names[algebra.unit],
            embedding=embedding,
            name=name or algebra.describe(),
        )


def horizontal_sum(blocks: Sequence[Sequence[str]], name: str = 'horizontal sum') -> TableEffectAlgebra:
    """
    Horizontal sum of Boolean algebras given by their atom names.

    Each block contributes the joins of its atoms; only 0 and 1 are shared,
    and elements of different blocks are never orthogonal unless one is 0.
    ``horizontal_sum([["a", "a'"], ["b", "b'"]])`` is MO2.
    """
    zero, unit = '0', '1'
    elements: List[str] = [zero]
    sums: List[Tuple[str, str, str]] = []
    seen = {zero, unit}
    for block in blocks:
        if not isinstance(block, (list, tuple)) or not all(isinstance(atom, str) for atom in block):
            raise InputError(f"block {block!r} must be a list of atom names")
        atoms = list(block)
        if len(atoms) < 2:
            raise InputError("every block needs at least two atoms")
        count = len(atoms)
        full = (1 << count) - 1

        def label(mask: int) -> str:
            if mask == 0:
                return zero
            if mask == full:
                return unit
            return '+'.join(atoms[i] for i in range(count) if mask >> i & 1)

        for mask in range(1, full):
            ident = label(mask)
            if ident in seen:
                raise InputError(f"element {ident!r} appears in more than one block")
            seen.add(ident)
            elements.append(ident)
        for x in range(full + 1):
            for y in range(full + 1):
                if x & y == 0 and (x <= y):
                    sums.append((label(x), label(y), label(x | y)))
    elements.append(unit)
    unique_sums = list(dict.fromkeys(sums))
    return TableEffectAlgebra(elements, unique_sums, zero, unit, name=name)


def validate_effect_algebra(algebra: EffectAlgebra) -> ValidationReport:
    """
    Check E1-E4, cancellativity and the derived partial order exhaustively.

    Every violation carries a witnessing tuple of element names.
    """
    table = TableEffectAlgebra.from_algebra(algebra)
    members = table.elements()
    zero, unit = table.zero, table.unit
    violations: List[Violation] = []

    def record(axiom: str, witness: Dict, detail: str) -> None:
        violations.append(Violation(axiom=axiom, witness=witness, detail=detail))

    for a, b, c, d in table.conflicts:
        record('E1', {'a': a, 'b': b}, f"{a}⊕{b} = {c} but {b}⊕{a} = {d}")

    for a in members:
        for b in members:
            ab = table.oplus(a, b)
            if ab is None:
                continue
            for c in members:
                ab_c = table.oplus(ab, c)
                if ab_c is None:
                    continue
                bc = table.oplus(b, c)
                a_bc = table.oplus(a, bc) if bc is not None else None
                if a_bc != ab_c:
                    record('E2', {'a': a, 'b': b, 'c': c},
                           f"(a⊕b)⊕c = {ab_c} but a⊕(b⊕c) is {a_bc if a_bc is not None else 'undefined'}")

    for a in members:
        complements = [b for b in members if table.oplus(a, b) == unit]
        if len(complements) != 1:
            record('E3', {'a': a, 'complements': complements},
                   f"{a} has {len(complements)} complements")

    for a in members:
        if a != zero and table.oplus(a, unit) is not None:
            record('E4', {'a': a}, f"{a}⊕1 is defined although {a} ≠ 0")

    for a in members:
        for j, b in enumerate(members):
            for c in members[j + 1:]:
                ab = table.oplus(a, b)
                if ab is not None and ab == table.oplus(a, c):
                    record('cancellative', {'a': a, 'b': b, 'c': c},
                           f"{a}⊕{b} = {a}⊕{c} = {ab}")

    for a in members:
        if not table.leq(a, a):
            record('partial_order', {'a': a}, f"{a} ≤ {a} fails")
        if not table.leq(zero, a):
            record('partial_order', {'a': a}, f"0 ≤ {a} fails")
        if not table.leq(a, unit):
            record('partial_order', {'a': a}, f"{a} ≤ 1 fails")
        for b in members:
            if a != b and table.leq(a, b) and table.leq(b, a):
                if table.index_of(a) < table.index_of(b):
                    record('partial_order', {'a': a, 'b': b}, f"{a} ≤ {b} ≤ {a} with {a} ≠ {b}")
            for c in members:
                if table.leq(a, b) and table.leq(b, c) and not table.leq(a, c):
                    record('partial_order', {'a': a, 'b': b, 'c': c},
                           f"{a} ≤ {b} ≤ {c} but not {a} ≤ {c}")

    return ValidationReport(
        subject=algebra.describe(),
        checked=('E1', 'E2', 'E3', 'E4', 'cancellative', 'partial_order'),
        violations=violations,
    )


def is_mv_effect_algebra(algebra: EffectAlgebra) -> MVCheck:
    """
    Decide whether a lattice-ordered algebra is an MV-effect algebra.

    Enumerable algebras are swept over all pairs for "a∧b = 0 implies a ≤ b′"
    and for the identity (a∨b)⊖a = b⊖(a∧b); interval algebras of rational
    vectors are MV by construction.
    """
    if not algebra.is_lattice_ordered:
        raise InputError(f"{algebra.describe()} is not lattice ordered")
    if not algebra.is_enumerable:
        if algebra.mv_by_construction:
            return MVCheck(is_mv=True, exhaustive=False)
        raise InputError(f"{algebra.describe()} cannot be swept and is not MV by construction")

    members = algebra.elements()
    for a in members:
        for b in members:
            if algebra.meet(a, b) == algebra.zero and not algebra.leq(a, algebra.complement(b)):
                return MVCheck(is_mv=False, clause='a∧b = 0 implies a ≤ b′', witness=(a, b))
    for a in members:
        for b in members:
            left = algebra.ominus(algebra.join(a, b), a)
            right = algebra.ominus(b, algebra.meet(a, b))
            if left is None or left != right:
                return MVCheck(is_mv=False, clause='(a∨b)⊖a = b⊖(a∧b)', witness=(a, b))
    return MVCheck(is_mv=True)


def is_orthoalgebra(algebra: EffectAlgebra) -> Tuple[bool, Optional[Element]]:
    """An orthoalgebra has no nonzero self-orthogonal element; returns the first offender."""
    for a in algebra.elements():
        if a != algebra.zero and algebra.orthogonal(a, a):
            return False, a
    return True, None

