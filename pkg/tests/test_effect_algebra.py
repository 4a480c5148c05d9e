"""
Unit tests for the effect algebra layer.

Covers partial sums and differences on tuple algebras, MV chain products and
explicit tables, the axiom validator and the MV-effect algebra test.
"""

import itertools
import unittest
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from src.effect_algebra import (
    MVChainProduct,
    TableEffectAlgebra,
    TupleEffectAlgebra,
    format_rational,
    horizontal_sum,
    is_mv_effect_algebra,
    is_orthoalgebra,
    powerset_effect_algebra,
    to_fraction,
    validate_effect_algebra,
)
from src.errors import InputError

unit_fractions = st.fractions(min_value=0, max_value=1, max_denominator=12)


def three_chain() -> TableEffectAlgebra:
    return TableEffectAlgebra(
        elements=['0', 'h', '1'],
        sums=[['0', '0', '0'], ['0', 'h', 'h'], ['0', '1', '1'], ['h', 'h', '1']],
        zero='0',
        unit='1',
        name='three chain',
    )


class TestRationals(unittest.TestCase):
    """Test cases for rational parsing and formatting."""

    def test_parse_fraction_string(self):
        """Test that 'p/q' strings become exact fractions."""
        self.assertEqual(to_fraction('2/4'), Fraction(1, 2))
        self.assertEqual(to_fraction(1), Fraction(1))

    def test_reject_float(self):
        """Test that floats are refused as inexact."""
        with self.assertRaises(InputError):
            to_fraction(0.5)

    def test_reject_garbage(self):
        with self.assertRaises(InputError):
            to_fraction('one half')

    def test_format(self):
        self.assertEqual(format_rational(Fraction(3, 6)), '1/2')
        self.assertEqual(format_rational(Fraction(2)), '2')


class TestTupleEffectAlgebra(unittest.TestCase):
    """Test cases for rational tuple algebras."""

    def setUp(self):
        """Set up test fixtures."""
        self.pair = TupleEffectAlgebra(2)
        self.scalar = TupleEffectAlgebra(1)

    def test_oplus_defined(self):
        """Test (1/2,1/3) ⊕ (1/2,1/3) = (1,2/3)."""
        a = self.pair.element('1/2', '1/3')
        self.assertEqual(self.pair.oplus(a, a), self.pair.element(1, '2/3'))

    def test_oplus_undefined(self):
        """Test that a sum exceeding 1 is undefined."""
        self.assertIsNone(self.scalar.oplus(self.scalar.element('3/4'), self.scalar.element('1/2')))

    def test_ominus(self):
        half = self.scalar.element('1/2')
        self.assertEqual(self.scalar.ominus(half, half), self.scalar.zero)
        self.assertIsNone(self.scalar.ominus(self.scalar.element('1/4'), half))

    def test_complement(self):
        a = self.pair.element('1/3', '3/4')
        self.assertEqual(self.pair.complement(a), self.pair.element('2/3', '1/4'))
        self.assertEqual(self.pair.oplus(a, self.pair.complement(a)), self.pair.unit)

    def test_big_oplus(self):
        """Test empty, complementary and overflowing families."""
        scalar = self.scalar
        self.assertEqual(scalar.big_oplus([]), scalar.zero)
        a = scalar.element('2/5')
        self.assertEqual(scalar.big_oplus([a, scalar.complement(a)]), scalar.unit)
        third, half = scalar.element('1/3'), scalar.element('1/2')
        self.assertIsNone(scalar.big_oplus([third, third, half]))

    def test_foreign_element_is_input_error(self):
        """Test that elements of another algebra are reported."""
        with self.assertRaises(InputError):
            self.pair.oplus((Fraction(1, 2),), self.pair.zero)

    def test_co_join_and_product(self):
        a, b = self.scalar.element('1/3'), self.scalar.element('1/2')
        self.assertEqual(self.scalar.co_join(a, b), self.scalar.element('2/3'))
        self.assertEqual(self.scalar.multiply(a, b), self.scalar.element('1/6'))

    def test_parse_element_forms(self):
        """Test list, parenthesized string and scalar forms."""
        self.assertEqual(self.pair.parse_element(['1/2', 0]), self.pair.element('1/2', 0))
        self.assertEqual(self.pair.parse_element('(1/2,0)'), self.pair.element('1/2', 0))
        self.assertEqual(self.scalar.parse_element('1/2'), self.scalar.element('1/2'))

    @given(unit_fractions, unit_fractions)
    def test_leq_matches_numeric_order(self, x, y):
        a, b = self.scalar.element(x), self.scalar.element(y)
        self.assertEqual(self.scalar.leq(a, b), x <= y)

    @given(unit_fractions, unit_fractions)
    def test_sum_then_difference(self, x, y):
        a, b = self.scalar.element(x), self.scalar.element(y)
        total = self.scalar.oplus(a, b)
        if x + y <= 1:
            self.assertEqual(self.scalar.ominus(total, a), b)
        else:
            self.assertIsNone(total)


class TestMVChainProduct(unittest.TestCase):
    """Test cases for products of finite MV chains."""

    def test_size_and_elements(self):
        algebra = MVChainProduct([3, 4])
        self.assertEqual(algebra.size, 20)
        self.assertEqual(len(algebra.elements()), 20)

    def test_off_grid_element_rejected(self):
        algebra = MVChainProduct([2])
        with self.assertRaises(InputError):
            algebra.element('1/3')

    def test_invalid_orders(self):
        with self.assertRaises(InputError):
            MVChainProduct([])
        with self.assertRaises(InputError):
            MVChainProduct([0, 2])
        with self.assertRaises(InputError):
            MVChainProduct(['x'])
        with self.assertRaises(InputError):
            MVChainProduct([[2], 3])

    def test_is_mv(self):
        """Test that [3,4] passes the exhaustive MV sweep."""
        self.assertTrue(is_mv_effect_algebra(MVChainProduct([3, 4])).is_mv)

    def test_boolean_square_is_mv(self):
        self.assertTrue(is_mv_effect_algebra(powerset_effect_algebra(2)).is_mv)

    def test_boolean_algebra_is_orthoalgebra(self):
        ortho, offender = is_orthoalgebra(powerset_effect_algebra(2))
        self.assertTrue(ortho)
        self.assertIsNone(offender)

    def test_chain_is_not_orthoalgebra(self):
        algebra = MVChainProduct([2])
        ortho, offender = is_orthoalgebra(algebra)
        self.assertFalse(ortho)
        self.assertEqual(offender, algebra.element('1/2'))

    def test_mv_plus(self):
        algebra = MVChainProduct([4])
        a, b = algebra.element('3/4'), algebra.element('1/2')
        self.assertEqual(algebra.mv_plus(a, b), algebra.unit)


class TestTableEffectAlgebra(unittest.TestCase):
    """Test cases for explicit tables and the axiom validator."""

    def test_two_element_algebra_valid(self):
        algebra = TableEffectAlgebra(['0', '1'], [['0', '0', '0'], ['0', '1', '1']], '0', '1')
        self.assertTrue(validate_effect_algebra(algebra).valid)

    def test_three_chain_valid(self):
        report = validate_effect_algebra(three_chain())
        self.assertTrue(report.valid, [v.detail for v in report.violations])

    def test_two_complements_reported(self):
        """Test that a table with two complements of h violates E3."""
        algebra = TableEffectAlgebra(
            elements=['0', 'h', 'k', '1'],
            sums=[['0', '0', '0'], ['0', 'h', 'h'], ['0', 'k', 'k'], ['0', '1', '1'],
                  ['h', 'h', '1'], ['h', 'k', '1']],
            zero='0',
            unit='1',
        )
        report = validate_effect_algebra(algebra)
        self.assertFalse(report.holds('E3'))
        self.assertTrue(any(v.witness.get('a') == 'h' for v in report.violations if v.axiom == 'E3'))

    def test_unit_sum_breaks_e4(self):
        algebra = TableEffectAlgebra(
            ['0', 'h', '1'],
            [['0', '0', '0'], ['0', 'h', 'h'], ['0', '1', '1'], ['h', 'h', '1'], ['h', '1', '1']],
            '0', '1',
        )
        self.assertFalse(validate_effect_algebra(algebra).holds('E4'))

    def test_conflicting_sum_listing(self):
        with self.assertRaises(InputError):
            TableEffectAlgebra(['0', '1'], [['0', '1', '1'], ['0', '1', '0']], '0', '1')

    def test_unknown_identifier(self):
        with self.assertRaises(InputError):
            TableEffectAlgebra(['0', '1'], [['0', 'x', 'x']], '0', '1')

    def test_sum_entry_must_be_a_triple(self):
        """Test that scalars and unhashable identifiers in the sum list are input errors."""
        with self.assertRaises(InputError):
            TableEffectAlgebra(['0', '1'], [5], '0', '1')
        with self.assertRaises(InputError):
            TableEffectAlgebra(['0', '1'], [['0', ['1'], '1']], '0', '1')

    def test_from_algebra_keeps_embedding(self):
        table = TableEffectAlgebra.from_algebra(MVChainProduct([2]))
        self.assertTrue(table.is_interval)
        self.assertEqual(table.to_group('1/2'), (Fraction(1, 2),))
        self.assertEqual(table.oplus('1/2', '1/2'), '1')

    def test_lattice_of_chain(self):
        algebra = three_chain()
        self.assertTrue(algebra.is_lattice_ordered)
        self.assertEqual(algebra.meet('h', '1'), 'h')
        self.assertEqual(algebra.join('0', 'h'), 'h')


class TestHorizontalSum(unittest.TestCase):
    """Test cases for MO2 built as a horizontal sum."""

    def setUp(self):
        """Set up test fixtures."""
        self.mo2 = horizontal_sum([['a', "a'"], ['b', "b'"]])

    def test_elements(self):
        self.assertEqual(self.mo2.elements(), ('0', 'a', "a'", 'b', "b'", '1'))

    def test_valid_orthoalgebra(self):
        self.assertTrue(validate_effect_algebra(self.mo2).valid)
        self.assertTrue(is_orthoalgebra(self.mo2)[0])

    def test_blocks_not_orthogonal(self):
        self.assertIsNone(self.mo2.oplus('a', 'b'))
        self.assertEqual(self.mo2.oplus('a', "a'"), '1')

    def test_not_mv(self):
        """Test that the MV sweep fails on a pair of atoms from distinct blocks."""
        check = is_mv_effect_algebra(self.mo2)
        self.assertFalse(check.is_mv)
        self.assertEqual(check.clause, 'a∧b = 0 implies a ≤ b′')
        self.assertEqual(check.witness, ('a', 'b'))

    def test_single_atom_block_rejected(self):
        with self.assertRaises(InputError):
            horizontal_sum([['a']])

    def test_block_must_list_names(self):
        with self.assertRaises(InputError):
            horizontal_sum([7, ['b', "b'"]])
        with self.assertRaises(InputError):
            horizontal_sum([['a', 1]])


SQUARE = TupleEffectAlgebra(2)
CHAIN_PRODUCT = MVChainProduct([2, 3])

square_elements = st.tuples(unit_fractions, unit_fractions).map(lambda coords: SQUARE.element(*coords))
chain_elements = st.sampled_from(CHAIN_PRODUCT.elements())


class TestIntervalAlgebraLaws(unittest.TestCase):
    """Property-based checks of the partial sum on interval algebras."""

    def assert_order_free(self, algebra, family):
        results = {algebra.big_oplus(order) for order in itertools.permutations(family)}
        self.assertEqual(len(results), 1, results)
        return results.pop()

    @given(st.lists(square_elements, max_size=4))
    def test_big_oplus_permutation_invariant_on_square(self, family):
        total = self.assert_order_free(SQUARE, family)
        sums = tuple(sum((a[i] for a in family), Fraction(0)) for i in range(2))
        if all(s <= 1 for s in sums):
            self.assertEqual(total, sums)
        else:
            self.assertIsNone(total)

    @given(st.lists(chain_elements, max_size=4))
    def test_big_oplus_permutation_invariant_on_chain_product(self, family):
        self.assert_order_free(CHAIN_PRODUCT, family)

    @given(square_elements)
    def test_square_complement_involution(self, a):
        self.assertEqual(SQUARE.complement(SQUARE.complement(a)), a)
        self.assertEqual(SQUARE.oplus(a, SQUARE.zero), a)

    @given(chain_elements)
    def test_chain_product_complement_involution(self, a):
        self.assertEqual(CHAIN_PRODUCT.complement(CHAIN_PRODUCT.complement(a)), a)
        self.assertEqual(CHAIN_PRODUCT.oplus(a, CHAIN_PRODUCT.zero), a)
        self.assertEqual(CHAIN_PRODUCT.oplus(CHAIN_PRODUCT.zero, a), a)


if __name__ == '__main__':
    unittest.main()
