"""
Unit tests for powerset Boolean algebras, the embeddings g^A_B and the
finite direct limit.
"""

import unittest

from hypothesis import given
from hypothesis import strategies as st

from src.boolean_algebra import (
    GroundSet,
    LimitAlgebra,
    LimitElement,
    PowersetAlgebra,
    SubsetFamily,
    equiv,
    g_embed,
    limit_complement,
    limit_join,
    limit_meet,
    mask_positions,
    pair_join,
    popcount,
    submasks,
)
from src.errors import InputError

UNIVERSE = ('a', 'b', 'c')


class TestBitHelpers(unittest.TestCase):
    """Test cases for mask helpers."""

    def test_submasks_in_order(self):
        self.assertEqual(list(submasks(0b101)), [0b000, 0b001, 0b100, 0b101])
        self.assertEqual(list(submasks(0)), [0])

    def test_popcount_and_positions(self):
        self.assertEqual(popcount(0b1011), 3)
        self.assertEqual(mask_positions(0b1010), (1, 3))


class TestGroundSet(unittest.TestCase):
    """Test cases for ground sets A ⊆ S."""

    def test_local_global_round_trip(self):
        ground = GroundSet.of(UNIVERSE, ['a', 'c'])
        self.assertEqual(ground.to_local(0b100), 0b10)
        self.assertEqual(ground.to_global(0b10), 0b100)

    def test_subset_outside_ground(self):
        ground = GroundSet.of(UNIVERSE, ['a'])
        with self.assertRaises(InputError):
            ground.to_local(0b010)

    def test_unknown_member(self):
        with self.assertRaises(InputError):
            GroundSet.of(UNIVERSE, ['z'])


class TestEmbedding(unittest.TestCase):
    """Test cases for g^A_B."""

    def setUp(self):
        """Set up test fixtures."""
        self.a = GroundSet.of(UNIVERSE, ['a'])
        self.b = GroundSet.of(UNIVERSE, ['b'])
        self.ab = GroundSet.of(UNIVERSE, ['a', 'b'])

    def test_singleton_family(self):
        """Test A={a}, B={a,b}, {{a}} ↦ {{a},{a,b}}."""
        family = SubsetFamily.from_members(self.a, [0b001])
        image = g_embed(self.a, self.ab, family)
        self.assertEqual(sorted(image.members()), [0b001, 0b011])

    def test_preserves_bounds(self):
        self.assertEqual(g_embed(self.a, self.ab, SubsetFamily.bottom(self.a)), SubsetFamily.bottom(self.ab))
        self.assertEqual(g_embed(self.a, self.ab, SubsetFamily.top(self.a)), SubsetFamily.top(self.ab))

    def test_identity_embedding(self):
        family = SubsetFamily.from_members(self.ab, [0b001, 0b010])
        self.assertEqual(g_embed(self.ab, self.ab, family), family)

    def test_requires_inclusion(self):
        with self.assertRaises(InputError):
            g_embed(self.ab, self.a, SubsetFamily.bottom(self.ab))

    def test_equiv(self):
        """Test directedness and the separation of distinct singletons."""
        family = SubsetFamily.from_members(self.a, [0b001])
        self.assertTrue(equiv(family, g_embed(self.a, self.ab, family)))
        other = SubsetFamily.from_members(self.b, [0b010])
        self.assertFalse(equiv(family, other))
        self.assertTrue(equiv(SubsetFamily.bottom(self.a), SubsetFamily.bottom(self.ab)))

    def test_pair_join_over_union(self):
        """Test canonical({{a}}) ∨ canonical({{b}}) = {{a},{b},{a,b}} over S={a,b}."""
        universe = ('a', 'b')
        a, b = GroundSet.of(universe, ['a']), GroundSet.of(universe, ['b'])
        joined = pair_join(SubsetFamily.from_members(a, [0b01]), SubsetFamily.from_members(b, [0b10]))
        self.assertEqual(sorted(joined.members()), [0b01, 0b10, 0b11])

    @given(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3))
    def test_embedding_is_homomorphism(self, x_bits, y_bits):
        x, y = SubsetFamily(self.a, x_bits), SubsetFamily(self.a, y_bits)
        embed = lambda f: g_embed(self.a, self.ab, f)  # noqa: E731
        self.assertEqual(embed(x.union(y)), embed(x).union(embed(y)))
        self.assertEqual(embed(x.intersection(y)), embed(x).intersection(embed(y)))
        self.assertEqual(embed(x.complement()), embed(x).complement())


class TestLimitAlgebra(unittest.TestCase):
    """Test cases for the direct limit over a finite S."""

    def setUp(self):
        """Set up test fixtures."""
        self.limit = LimitAlgebra(UNIVERSE)

    def test_sizes(self):
        self.assertEqual(self.limit.atom_count, 8)
        self.assertEqual(self.limit.size, 256)

    def test_complement_and_top(self):
        element = self.limit.canonical(SubsetFamily.from_members(GroundSet.of(UNIVERSE, ['a']), [0b001]))
        self.assertEqual(limit_join(element, limit_complement(element)), self.limit.top)
        self.assertEqual(limit_meet(element, self.limit.top), element)

    def test_cap(self):
        with self.assertRaises(InputError):
            LimitAlgebra(UNIVERSE, max_size=2)

    def test_powerset_labels(self):
        boolean = self.limit.powerset()
        self.assertEqual(boolean.atom_labels[0], '{}')
        self.assertEqual(boolean.atom_labels[0b101], '{a,c}')


class TestPowersetAlgebra(unittest.TestCase):
    """Test cases for labelled powerset algebras."""

    def test_operations(self):
        boolean = PowersetAlgebra(['x', 'y', 'z'])
        self.assertEqual(boolean.top, 0b111)
        self.assertEqual(boolean.complement(0b001), 0b110)
        self.assertTrue(boolean.is_disjoint(0b001, 0b010))
        self.assertEqual(boolean.label(0b101), ['x', 'z'])

    def test_rejects_out_of_range(self):
        with self.assertRaises(InputError):
            PowersetAlgebra(['x']).require(2)

    def test_duplicate_labels(self):
        with self.assertRaises(InputError):
            PowersetAlgebra(['x', 'x'])


def all_families(ground):
    return [SubsetFamily(ground, bits) for bits in range(1 << (1 << ground.size))]


def all_ground_sets(universe, max_size=None):
    full = (1 << len(universe)) - 1
    return [GroundSet(universe, mask) for mask in submasks(full)
            if max_size is None or popcount(mask) <= max_size]


class TestEmbeddingExhaustive(unittest.TestCase):
    """Exhaustive checks of g^A_B over S = {a, b, c, d}."""

    UNIVERSE = ('a', 'b', 'c', 'd')

    def test_composition(self):
        """Test g^B_C ∘ g^A_B = g^A_C for every chain A ⊆ B ⊆ C with |A| ≤ 3."""
        full = (1 << len(self.UNIVERSE)) - 1
        chains = 0
        for lower in all_ground_sets(self.UNIVERSE, max_size=3):
            families = all_families(lower)
            for middle_mask in submasks(full & ~lower.mask):
                middle = GroundSet(self.UNIVERSE, lower.mask | middle_mask)
                for upper_mask in submasks(full & ~middle.mask):
                    upper = GroundSet(self.UNIVERSE, middle.mask | upper_mask)
                    chains += 1
                    for family in families:
                        self.assertEqual(g_embed(middle, upper, g_embed(lower, middle, family)),
                                         g_embed(lower, upper, family))
        self.assertEqual(chains, 80)

    def test_injective(self):
        full = (1 << len(self.UNIVERSE)) - 1
        for lower in all_ground_sets(self.UNIVERSE, max_size=3):
            families = all_families(lower)
            for extra in submasks(full & ~lower.mask):
                upper = GroundSet(self.UNIVERSE, lower.mask | extra)
                images = {g_embed(lower, upper, family) for family in families}
                self.assertEqual(len(images), len(families))


class TestEquivalenceExhaustive(unittest.TestCase):
    """Exhaustive checks of the relation ≡ on pairs (𝕏, A)."""

    def relation(self, universe, max_size=None):
        pairs = [family for ground in all_ground_sets(universe, max_size) for family in all_families(ground)]
        return pairs, [[equiv(x, y) for y in pairs] for x in pairs]

    def test_equivalence_relation_two_elements(self):
        pairs, related = self.relation(('a', 'b'))
        self.assertEqual(len(pairs), 26)
        indices = range(len(pairs))
        for i in indices:
            self.assertTrue(related[i][i])
            for j in indices:
                self.assertEqual(related[i][j], related[j][i])
                if not related[i][j]:
                    continue
                for k in indices:
                    if related[j][k]:
                        self.assertTrue(related[i][k], (pairs[i], pairs[j], pairs[k]))

    def test_equivalence_relation_three_elements(self):
        """Test pairs with |A| ≤ 2 over S = {a, b, c}."""
        pairs, related = self.relation(UNIVERSE, max_size=2)
        self.assertEqual(len(pairs), 62)
        indices = range(len(pairs))
        for i in indices:
            self.assertTrue(related[i][i])
            for j in indices:
                self.assertEqual(related[i][j], related[j][i])
                if related[i][j]:
                    self.assertTrue(all(related[i][k] for k in indices if related[j][k]))

    def test_matches_canonical_forms(self):
        for universe, max_size in ((('a', 'b'), None), (UNIVERSE, 2)):
            limit = LimitAlgebra(universe)
            pairs, related = self.relation(universe, max_size)
            canonical = [limit.canonical(x) for x in pairs]
            for i, row in enumerate(related):
                for j, holds in enumerate(row):
                    self.assertEqual(holds, canonical[i] == canonical[j])


class TestLimitBooleanAxioms(unittest.TestCase):
    """The limit operations satisfy the Boolean algebra axioms for |S| ≤ 3."""

    def assert_pair_axioms(self, limit, x, y):
        top, bottom = limit.top, limit.bottom
        self.assertEqual(limit_join(x, y), limit_join(y, x))
        self.assertEqual(limit_meet(x, y), limit_meet(y, x))
        self.assertEqual(limit_join(x, limit_meet(x, y)), x)
        self.assertEqual(limit_meet(x, limit_join(x, y)), x)
        self.assertEqual(limit_complement(limit_join(x, y)),
                         limit_meet(limit_complement(x), limit_complement(y)))
        self.assertEqual(limit_complement(limit_meet(x, y)),
                         limit_join(limit_complement(x), limit_complement(y)))
        self.assertEqual(limit_join(x, bottom), x)
        self.assertEqual(limit_meet(x, top), x)

    def assert_triple_axioms(self, x, y, z):
        self.assertEqual(limit_join(x, limit_join(y, z)), limit_join(limit_join(x, y), z))
        self.assertEqual(limit_meet(x, limit_meet(y, z)), limit_meet(limit_meet(x, y), z))
        self.assertEqual(limit_meet(x, limit_join(y, z)), limit_join(limit_meet(x, y), limit_meet(x, z)))
        self.assertEqual(limit_join(x, limit_meet(y, z)), limit_meet(limit_join(x, y), limit_join(x, z)))

    def test_complements(self):
        for universe in ((), ('a',), ('a', 'b'), UNIVERSE):
            limit = LimitAlgebra(universe)
            for x in limit.elements():
                self.assertEqual(limit_join(x, limit_complement(x)), limit.top)
                self.assertEqual(limit_meet(x, limit_complement(x)), limit.bottom)
                self.assertEqual(limit_complement(limit_complement(x)), x)

    def test_all_axioms_up_to_two_elements(self):
        for universe in ((), ('a',), ('a', 'b')):
            limit = LimitAlgebra(universe)
            elements = list(limit.elements())
            for x in elements:
                for y in elements:
                    self.assert_pair_axioms(limit, x, y)
                    for z in elements:
                        self.assert_triple_axioms(x, y, z)

    def test_pair_axioms_three_elements(self):
        limit = LimitAlgebra(UNIVERSE)
        elements = list(limit.elements())
        for x in elements:
            for y in elements:
                self.assert_pair_axioms(limit, x, y)

    @given(st.integers(min_value=0, max_value=255),
           st.integers(min_value=0, max_value=255),
           st.integers(min_value=0, max_value=255))
    def test_triple_axioms_three_elements(self, x_bits, y_bits, z_bits):
        ground = GroundSet.full(UNIVERSE)
        x, y, z = (LimitElement(SubsetFamily(ground, bits)) for bits in (x_bits, y_bits, z_bits))
        self.assert_triple_axioms(x, y, z)


if __name__ == '__main__':
    unittest.main()
