"""
Finite powerset Boolean algebras 2^(2^A), the embeddings g^A_B and their
direct limit over a finite S.

Subsets of S are int bitmasks over the fixed order of S. A family of subsets
of A is a bitset over the 2^|A| subsets of A, the subset X sitting at the
bit given by its characteristic mask relative to A. Because S is finite the
limit is realized by sending every pair (𝕏, A) to its image over S.
"""

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import InputError


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in increasing numeric order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def popcount(mask: int) -> int:
    """
    Count the members of a subset.

    Args:
        mask: Subset as a bitmask

    Returns:
        Number of set bits
    """
    return bin(mask).count('1')


def mask_positions(mask: int) -> Tuple[int, ...]:
    """
    List the positions of the set bits.

    Args:
        mask: Subset as a bitmask

    Returns:
        Bit indices in increasing order
    """
    positions = []
    index = 0
    while mask >> index:
        if mask >> index & 1:
            positions.append(index)
        index += 1
    return tuple(positions)


@dataclass(frozen=True)
class GroundSet:
    """A finite subset A of the ordered set S, stored as a mask over S."""
    universe: Tuple[Hashable, ...]
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> len(self.universe):
            raise InputError(f"ground mask {self.mask:#b} exceeds |S| = {len(self.universe)}")

    @classmethod
    def of(cls, universe: Sequence[Hashable], members: Iterable[Hashable]) -> 'GroundSet':
        """
        Build the ground set holding ``members``.

        Args:
            universe: The ordered set S
            members: Elements of S to include

        Returns:
            GroundSet whose mask marks the members

        Raises:
            InputError: If a member is not in S
        """
        universe = tuple(universe)
        index = {e: i for i, e in enumerate(universe)}
        mask = 0
        for e in members:
            if e not in index:
                raise InputError(f"{e!r} is not an element of S")
            mask |= 1 << index[e]
        return cls(universe, mask)

    @classmethod
    def full(cls, universe: Sequence[Hashable]) -> 'GroundSet':
        universe = tuple(universe)
        return cls(universe, (1 << len(universe)) - 1)

    @property
    def positions(self) -> Tuple[int, ...]:
        return mask_positions(self.mask)

    @property
    def size(self) -> int:
        return popcount(self.mask)

    @property
    def elements(self) -> Tuple[Hashable, ...]:
        return tuple(self.universe[i] for i in self.positions)

    def _same_universe(self, other: 'GroundSet') -> None:
        if self.universe != other.universe:
            raise InputError("ground sets belong to different S")

    def issubset(self, other: 'GroundSet') -> bool:
        """A ⊆ B for ground sets over the same S."""
        self._same_universe(other)
        return self.mask & ~other.mask == 0

    def union(self, other: 'GroundSet') -> 'GroundSet':
        self._same_universe(other)
        return GroundSet(self.universe, self.mask | other.mask)

    def difference(self, other: 'GroundSet') -> 'GroundSet':
        self._same_universe(other)
        return GroundSet(self.universe, self.mask & ~other.mask)

    def to_local(self, subset: int) -> int:
        """Characteristic mask of a subset of A relative to A."""
        if subset & ~self.mask:
            raise InputError(f"subset {subset:#b} is not contained in the ground set")
        local = 0
        for bit, position in enumerate(self.positions):
            if subset >> position & 1:
                local |= 1 << bit
        return local

    def to_global(self, local: int) -> int:
        """
        Inverse of ``to_local``.

        Args:
            local: Characteristic mask relative to A

        Returns:
            The same subset as a mask over S
        """
        subset = 0
        for bit, position in enumerate(self.positions):
            if local >> bit & 1:
                subset |= 1 << position
        return subset

    def subsets(self) -> Iterator[int]:
        """Subsets of A as masks over S, in bitmask order."""
        return submasks(self.mask)


@dataclass(frozen=True)
class SubsetFamily:
    """An element 𝕏 ⊆ 2^A of the powerset algebra 2^(2^A)."""
    ground: GroundSet
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> (1 << self.ground.size):
            raise InputError(f"family bitset exceeds 2^|A| = {1 << self.ground.size} positions")

    @classmethod
    def from_members(cls, ground: GroundSet, members: Iterable[int]) -> 'SubsetFamily':
        """
        Build a family from member subsets given as masks over S.

        Raises:
            InputError: If a member is not contained in the ground set
        """
        bits = 0
        for subset in members:
            bits |= 1 << ground.to_local(subset)
        return cls(ground, bits)

    @classmethod
    def bottom(cls, ground: GroundSet) -> 'SubsetFamily':
        return cls(ground, 0)

    @classmethod
    def top(cls, ground: GroundSet) -> 'SubsetFamily':
        return cls(ground, (1 << (1 << ground.size)) - 1)

    def members(self) -> Iterator[int]:
        """Member subsets as masks over S, in bitmask order."""
        for local in mask_positions(self.bits):
            yield self.ground.to_global(local)

    def __contains__(self, subset: int) -> bool:
        return bool(self.bits >> self.ground.to_local(subset) & 1)

    def __len__(self) -> int:
        return popcount(self.bits)

    def _check(self, other: 'SubsetFamily') -> None:
        if self.ground != other.ground:
            raise InputError("families are grounded on different sets")

    def union(self, other: 'SubsetFamily') -> 'SubsetFamily':
        self._check(other)
        return SubsetFamily(self.ground, self.bits | other.bits)

    def intersection(self, other: 'SubsetFamily') -> 'SubsetFamily':
        self._check(other)
        return SubsetFamily(self.ground, self.bits & other.bits)

    def complement(self) -> 'SubsetFamily':
        """All subsets of A not in the family."""
        return SubsetFamily(self.ground, SubsetFamily.top(self.ground).bits & ~self.bits)

    def is_disjoint(self, other: 'SubsetFamily') -> bool:
        self._check(other)
        return self.bits & other.bits == 0

    def to_names(self, format_element: Callable[[Hashable], str] = str) -> List[List[str]]:
        """Serialize as a list of subsets, each a list of element names in S order."""
        universe = self.ground.universe
        return [
            [format_element(universe[i]) for i in mask_positions(subset)]
            for subset in self.members()
        ]


def g_embed(lower: GroundSet, upper: GroundSet, family: SubsetFamily) -> SubsetFamily:
    """g^A_B(𝕏) = {X ∪ C₀ : X ∈ 𝕏, C₀ ⊆ B∖A}."""
    if family.ground != lower:
        raise InputError("family is not grounded on the lower set")
    if not lower.issubset(upper):
        raise InputError("embedding requires A ⊆ B")
    pads = list(submasks(upper.mask & ~lower.mask))
    bits = 0
    for subset in family.members():
        for pad in pads:
            bits |= 1 << upper.to_local(subset | pad)
    return SubsetFamily(upper, bits)


def equiv(first: SubsetFamily, second: SubsetFamily) -> bool:
    """(𝕏,A) ≡ (𝕐,B) iff g^A_{A∪B}(𝕏) = g^B_{A∪B}(𝕐)."""
    common = first.ground.union(second.ground)
    return g_embed(first.ground, common, first) == g_embed(second.ground, common, second)


def pair_join(first: SubsetFamily, second: SubsetFamily) -> SubsetFamily:
    """Join of two pairs computed at the index A∪B."""
    common = first.ground.union(second.ground)
    return g_embed(first.ground, common, first).union(g_embed(second.ground, common, second))


def pair_meet(first: SubsetFamily, second: SubsetFamily) -> SubsetFamily:
    """Meet of two pairs computed at the index A∪B."""
    common = first.ground.union(second.ground)
    return g_embed(first.ground, common, first).intersection(g_embed(second.ground, common, second))


@dataclass(frozen=True)
class LimitElement:
    """An equivalence class [(𝕏, A)]≡, held by its canonical image over S."""
    representative: SubsetFamily


class LimitAlgebra:
    """
    The direct limit F_B(S) of the algebras 2^(2^A), A ⊆ S, for a finite S.

    Every pair is canonicalized by g^A_S, which makes the limit the powerset
    algebra 2^(2^S).
    """

    def __init__(self, universe: Sequence[Hashable], max_size: Optional[int] = None):
        self.universe = tuple(universe)
        if max_size is not None and len(self.universe) > max_size:
            raise InputError(f"|S| = {len(self.universe)} exceeds the configured cap {max_size}")
        self.ground = GroundSet.full(self.universe)

    @property
    def atom_count(self) -> int:
        return 1 << self.ground.size

    @property
    def size(self) -> int:
        return 1 << self.atom_count

    def canonical(self, family: SubsetFamily) -> LimitElement:
        """
        Map a pair (𝕏, A) to its class.

        Args:
            family: Family of subsets grounded on some A ⊆ S

        Returns:
            The class, represented by g^A_S(𝕏)

        Raises:
            InputError: If the family is grounded on a different S
        """
        if family.ground.universe != self.universe:
            raise InputError("family belongs to a different S")
        return LimitElement(g_embed(family.ground, self.ground, family))

    @property
    def top(self) -> LimitElement:
        return LimitElement(SubsetFamily.top(self.ground))

    @property
    def bottom(self) -> LimitElement:
        return LimitElement(SubsetFamily.bottom(self.ground))

    def elements(self) -> Iterator[LimitElement]:
        for bits in range(self.size):
            yield LimitElement(SubsetFamily(self.ground, bits))

    def powerset(self, format_element: Callable[[Hashable], str] = str) -> 'PowersetAlgebra':
        """The limit as a powerset algebra whose atoms are the subsets X of S."""
        labels = tuple(
            '{' + ','.join(format_element(self.universe[i]) for i in mask_positions(subset)) + '}'
            for subset in self.ground.subsets()
        )
        return PowersetAlgebra(labels)


def limit_join(x: LimitElement, y: LimitElement) -> LimitElement:
    """
    Join in the limit algebra.

    Args:
        x: Canonical element
        y: Canonical element of the same limit

    Returns:
        The class of the union of the representatives
    """
    return LimitElement(x.representative.union(y.representative))


def limit_meet(x: LimitElement, y: LimitElement) -> LimitElement:
    """
    Meet in the limit algebra.

    Args:
        x: Canonical element
        y: Canonical element of the same limit

    Returns:
        The class of the intersection of the representatives
    """
    return LimitElement(x.representative.intersection(y.representative))


def limit_complement(x: LimitElement) -> LimitElement:
    """
    Complement in the limit algebra.

    Args:
        x: Canonical element

    Returns:
        The class of the family of all subsets of S not in x
    """
    return LimitElement(x.representative.complement())


class PowersetAlgebra:
    """
    The finite Boolean algebra of all subsets of a labelled set of atoms.

    Elements are int bitmasks over the atoms; ⊥ = 0 and ⊤ has every bit set.
    """

    def __init__(self, atom_labels: Sequence[str]):
        self.atom_labels = tuple(atom_labels)
        if not self.atom_labels:
            raise InputError("a powerset algebra needs at least one atom")
        if len(set(self.atom_labels)) != len(self.atom_labels):
            raise InputError("atom labels must be distinct")

    @property
    def atom_count(self) -> int:
        return len(self.atom_labels)

    @property
    def size(self) -> int:
        return 1 << self.atom_count

    @property
    def top(self) -> int:
        return self.size - 1

    @property
    def bottom(self) -> int:
        return 0

    def contains(self, x) -> bool:
        return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.size

    def require(self, x: int) -> int:
        if not self.contains(x):
            raise InputError(f"{x!r} is not an element of the {self.size}-element Boolean algebra")
        return x

    def elements(self) -> Iterator[int]:
        return iter(range(self.size))

    def atoms(self) -> Tuple[int, ...]:
        return tuple(1 << i for i in range(self.atom_count))

    def join(self, x: int, y: int) -> int:
        return self.require(x) | self.require(y)

    def meet(self, x: int, y: int) -> int:
        return self.require(x) & self.require(y)

    def complement(self, x: int) -> int:
        return self.top & ~self.require(x)

    def is_disjoint(self, x: int, y: int) -> bool:
        return self.meet(x, y) == 0

    def atoms_below(self, x: int) -> Tuple[int, ...]:
        return mask_positions(self.require(x))

    def label(self, x: int) -> List[str]:
        return [self.atom_labels[i] for i in self.atoms_below(x)]

    def describe(self) -> str:
        return f"Boolean algebra with {self.atom_count} atoms"
