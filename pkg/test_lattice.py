"""
Unit tests for the integer lattice kernel.

Run with: python -m pytest test_lattice.py -v
Or: python test_lattice.py
"""

import unittest
from fractions import Fraction

from lattice import (check_entries, gcd_vec, kappa, lattice_points_oracle, minor_gcd, minors, oracle_kappa,
                     s_projection, smith_invariants, smith_minor_product, sweep_lattice_lemma)


class TestCheckEntries(unittest.TestCase):
    """Test the check_entries function."""

    def test_returns_tuple(self):
        """Test that lists are returned as tuples."""
        self.assertEqual(check_entries([1, -2, 3]), (1, -2, 3))

    def test_rejects_large_entry(self):
        """Test that entries of magnitude 2^31 raise OverflowError."""
        with self.assertRaises(OverflowError):
            check_entries([2 ** 31, 0])

    def test_accepts_entry_below_limit(self):
        """Test that 2^31 - 1 is still accepted."""
        self.assertEqual(check_entries([2 ** 31 - 1, 0]), (2 ** 31 - 1, 0))

    def test_rejects_float(self):
        """Test that non-integer entries raise ValueError."""
        with self.assertRaises(ValueError):
            check_entries([1.5, 2])

    def test_rejects_bool(self):
        """Test that booleans are not accepted as integers."""
        with self.assertRaises(ValueError):
            check_entries([True, 2])

    def test_rejects_bad_length(self):
        """Test that too short and too long vectors raise ValueError."""
        with self.assertRaises(ValueError):
            check_entries([1])
        with self.assertRaises(ValueError):
            check_entries(range(7))


class TestMinorGcd(unittest.TestCase):
    """Test gcd_vec, minors and minor_gcd."""

    def test_gcd_vec(self):
        """Test gcd of absolute values and the zero vector."""
        self.assertEqual(gcd_vec([4, -6, 10]), 2)
        self.assertEqual(gcd_vec([0, 0]), 0)

    def test_minors_order(self):
        """Test minors are listed for i < j in lexicographic order."""
        self.assertEqual(minors((1, 2, 3), (4, 5, 6)), [-3, -6, -3])

    def test_planar_minor_gcd_is_abs_det(self):
        """Test that in the plane the minor gcd is |det|."""
        self.assertEqual(minor_gcd((2, 0), (0, 3)), 6)
        self.assertEqual(minor_gcd((1, 2), (3, -1)), 7)

    def test_dependent_pair(self):
        """Test that dependent vectors give 0."""
        self.assertEqual(minor_gcd((1, 2), (2, 4)), 0)
        self.assertEqual(minor_gcd((1, -1, 0), (-3, 3, 0)), 0)

    def test_length_mismatch(self):
        """Test that vectors of different length raise ValueError."""
        with self.assertRaises(ValueError):
            minor_gcd((1, 2), (1, 2, 3))


class TestKappa(unittest.TestCase):
    """Test the kappa function."""

    def test_not_symmetric(self):
        """Test kappa((2,0),(0,3)) = 3 but kappa((0,3),(2,0)) = 2."""
        self.assertEqual(kappa((2, 0), (0, 3)), 3)
        self.assertEqual(kappa((0, 3), (2, 0)), 2)

    def test_three_dimensional(self):
        """Test a primitive vector in dimension 3."""
        self.assertEqual(kappa((1, 2, 3), (4, 5, 6)), 3)

    def test_non_primitive_v(self):
        """Test division by gcd(v)."""
        self.assertEqual(kappa((2, 4), (1, 0)), 2)

    def test_zero_v(self):
        """Test that v = 0 raises ValueError."""
        with self.assertRaises(ValueError):
            kappa((0, 0, 0), (1, 2, 3))


class TestSmith(unittest.TestCase):
    """Test the sympy Smith-form cross-check."""

    def test_invariant_factors(self):
        """Test diag(2,3) has invariant factors (1, 6)."""
        self.assertEqual(smith_invariants((2, 0), (0, 3)), (1, 6))

    def test_product_equals_minor_gcd(self):
        """Test d1*d2 equals the minor gcd for independent pairs."""
        for v, w in [((1, 2, 3), (4, 5, 6)), ((2, 0), (0, 3)), ((3, 1, -4), (0, 2, -2)), ((6, 0, 0, 2), (0, 4, 2, 0))]:
            self.assertEqual(smith_minor_product(v, w), minor_gcd(v, w))

    def test_dependent_pair(self):
        """Test the product is 0 for a dependent pair."""
        self.assertEqual(smith_minor_product((1, 2), (2, 4)), 0)


class TestLatticeOracle(unittest.TestCase):
    """Test the brute-force lattice-point oracle."""

    def test_rectangle_points(self):
        """Test the six points of the 2 x 3 rectangle."""
        points = lattice_points_oracle((2, 0), (0, 3))
        self.assertEqual(len(points), 6)
        self.assertEqual(s_projection(points), {Fraction(0), Fraction(1, 3), Fraction(2, 3)})

    def test_oracle_kappa_matches_formula(self):
        """Test the distinct s-count on the asymmetric example."""
        self.assertEqual(oracle_kappa((2, 0), (0, 3)), 3)
        self.assertEqual(oracle_kappa((0, 3), (2, 0)), 2)

    def test_points_in_half_open_square(self):
        """Test every returned coordinate lies in [0, 1)."""
        for point in lattice_points_oracle((1, 2, 3), (4, 5, 6)):
            self.assertTrue(0 <= point.t < 1)
            self.assertTrue(0 <= point.s < 1)

    def test_three_dimensional_count(self):
        """Test the oracle count equals the minor gcd in dimension 3."""
        self.assertEqual(len(lattice_points_oracle((1, 2, 3), (4, 5, 6))), 3)
        self.assertEqual(oracle_kappa((1, 2, 3), (4, 5, 6)), 3)

    def test_dependent_rejected(self):
        """Test dependent vectors raise ValueError."""
        with self.assertRaises(ValueError):
            lattice_points_oracle((1, 2), (2, 4))

    def test_box_limit(self):
        """Test that an oversized box raises ValueError."""
        with self.assertRaises(ValueError):
            lattice_points_oracle((100, 0), (0, 100), box_limit=10)


class TestSweepLatticeLemma(unittest.TestCase):
    """Test the lemma sweep."""

    def test_full_sweep(self):
        """Test exhaustive n=2 on [-8,8] and 10^4 random pairs for n=3,4 report no mismatches."""
        result = sweep_lattice_lemma(bound=8, dimensions=(2, 3, 4), samples=10000, seed=7)
        self.assertTrue(result.ok, result.mismatches[:3])
        self.assertGreater(result.checked, 90000)

    def test_sweep_is_seeded(self):
        """Test that the same seed checks the same number of pairs."""
        first = sweep_lattice_lemma(bound=2, dimensions=(3,), samples=100, seed=3)
        second = sweep_lattice_lemma(bound=2, dimensions=(3,), samples=100, seed=3)
        self.assertEqual(first.checked, second.checked)


if __name__ == '__main__':
    unittest.main()
