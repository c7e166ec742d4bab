"""
Unit tests for isotropy orders and singular loci of circle actions.

Run with: python -m pytest test_action.py -v
Or: python test_action.py
"""

import random
import unittest
from fractions import Fraction

from action import (KERNEL, ActionSpec, NotAlmostFreeError, face_vectors, is_almost_free, is_free_action,
                    isotropy_oracle, isotropy_profile, kappa0, kappa_face, kappa_sigma, lens_params,
                    reduce_action, relabel, singular_locus, torus_quotient_locus)
from space import FACES, PERM_BY_NAME, PERMUTATIONS, WeightPair, incident_vertices, is_orbifold


def coho_one(d):
    return WeightPair((1, 1, d), (0, 0, d + 2))


def coho_two(c, d, e):
    return WeightPair((c, d, e), (0, 0, c + d + e))


SIGMA = PERM_BY_NAME
COHO_TWO_ACTION = ActionSpec((0, 0, 0), (1, -1, 0))


def random_almost_free(rng, count, bound=6):
    """Random almost free pairs with every entry, derived ones included, in [-bound, bound]."""
    found = 0
    while found < count:
        p = [rng.randint(-bound, bound) for _ in range(3)]
        q = [rng.randint(-bound, bound) for _ in range(2)]
        a = [rng.randint(-bound, bound) for _ in range(3)]
        b = [rng.randint(-bound, bound) for _ in range(2)]
        wp = WeightPair(tuple(p), (q[0], q[1], sum(p) - q[0] - q[1]))
        act = ActionSpec(tuple(a), (b[0], b[1], sum(a) - b[0] - b[1]))
        if max(abs(x) for x in wp.q + act.b) > bound:
            continue
        if not is_orbifold(wp) or not is_almost_free(wp, act):
            continue
        found += 1
        yield wp, act


class TestActionSpec(unittest.TestCase):
    """Test ActionSpec validation and shifts."""

    def test_trace_imbalance(self):
        """Test unequal sums raise ValueError."""
        with self.assertRaises(ValueError):
            ActionSpec((0, 1, 1), (0, 0, 1))

    def test_shifted(self):
        """Test (a,b) + n(p,q) + m(Id,Id)."""
        act = ActionSpec((0, 1, 1), (0, 0, 2)).shifted(coho_one(5), 2, -1)
        self.assertEqual(act, ActionSpec((1, 2, 10), (-1, -1, 15)))

    def test_face_vectors(self):
        """Test the four entries of L_13 are taken from rows 2,3 and columns 1,2."""
        self.assertEqual(face_vectors((1, 1, 5), (0, 0, 7), 1, 3), (1, 1, 5, 5))


class TestVertexAndFaceOrders(unittest.TestCase):
    """Test raw orders on cohomogeneity one and two examples."""

    def test_coho_two_vertices(self):
        """Test a=0, b=(1,-1,0) on (1,2,3): vertex orders |c+d|, |c+e|, |d+e|."""
        wp = coho_two(1, 2, 3)
        expected = {'id': 3, '(12)': 3, '(23)': 4, '(123)': 4, '(13)': 5, '(132)': 5}
        for name, order in expected.items():
            self.assertEqual(kappa_sigma(wp, COHO_TWO_ACTION, SIGMA[name]), order)

    def test_coho_two_faces(self):
        """Test only L_23 is singular, with order 2, and the kernel is trivial."""
        wp = coho_two(1, 2, 3)
        self.assertEqual(kappa0(wp, COHO_TWO_ACTION), 1)
        for i, j in FACES:
            self.assertEqual(kappa_face(wp, COHO_TWO_ACTION, i, j), 2 if (i, j) == (2, 3) else 1)

    def test_coho_two_kernel(self):
        """Test (1,3,5) has a kernel of order 2."""
        self.assertEqual(kappa0(coho_two(1, 3, 5), COHO_TWO_ACTION), 2)

    def test_theorem_c_iv_orders(self):
        """Test a=(0,1,1), b=(0,0,2) on E_d: C_(13), C_(132) and L_13 have order d-1."""
        act = ActionSpec((0, 1, 1), (0, 0, 2))
        for d in range(3, 9):
            wp = coho_one(d)
            self.assertEqual(kappa0(wp, act), 1)
            self.assertEqual(kappa_sigma(wp, act, SIGMA['(13)']), d - 1)
            self.assertEqual(kappa_sigma(wp, act, SIGMA['(132)']), d - 1)
            self.assertEqual(kappa_sigma(wp, act, SIGMA['id']), 1)
            self.assertEqual(kappa_face(wp, act, 1, 3), d - 1)

    def test_theorem_c_iii_orders(self):
        """Test a=(0,1,1), b=(2,0,0) on E_5 has four singular circles."""
        act = ActionSpec((0, 1, 1), (2, 0, 0))
        wp = coho_one(5)
        orders = {sigma.name: kappa_sigma(wp, act, sigma) for sigma in PERMUTATIONS}
        self.assertEqual(orders, {'id': 3, '(12)': 1, '(13)': 6, '(23)': 11, '(123)': 1, '(132)': 6})

    def test_not_almost_free(self):
        """Test an action parallel to (p,q) is rejected."""
        wp = coho_one(5)
        act = ActionSpec(wp.p, wp.q)
        self.assertFalse(is_almost_free(wp, act))
        with self.assertRaises(NotAlmostFreeError):
            kappa0(wp, act)
        with self.assertRaises(NotAlmostFreeError):
            singular_locus(wp, act)
        self.assertEqual(kappa_sigma(wp, act, SIGMA['id']), 0)


class TestIsotropyOracle(unittest.TestCase):
    """Test the order formulas against lattice enumeration."""

    def test_unknown_target(self):
        """Test an unknown target raises ValueError."""
        with self.assertRaises(ValueError):
            isotropy_oracle(coho_one(5), ActionSpec((0, 1, 1), (0, 0, 2)), (4, 4))

    def test_random_actions(self):
        """Test kappa0, every vertex and every face against the oracle on 1000 random inputs."""
        for wp, act in random_almost_free(random.Random(11), 1000):
            self.assertEqual(kappa0(wp, act), isotropy_oracle(wp, act, KERNEL))
            for sigma in PERMUTATIONS:
                self.assertEqual(kappa_sigma(wp, act, sigma), isotropy_oracle(wp, act, sigma))
            for i, j in FACES:
                self.assertEqual(kappa_face(wp, act, i, j), isotropy_oracle(wp, act, (i, j)))


class TestLensParams(unittest.TestCase):
    """Test lens-space parameters."""

    def test_theorem_c_iv_lens(self):
        """Test L_13 of E_5 is L(1,1,-6), smooth."""
        lens = lens_params(coho_one(5), 1, 3)
        self.assertEqual(lens.triple, (1, 1, -6))
        self.assertTrue(lens.smooth)
        self.assertIsNone(lens.special)

    def test_three_sphere(self):
        """Test |d| = 1 is tagged S3."""
        lens = lens_params(coho_one(5), 1, 1)
        self.assertEqual(lens.triple, (1, -6, 1))
        self.assertEqual(lens.special, 'S3')

    def test_degenerate(self):
        """Test d = 0 gives S^1 x CP^1, singular unless both weights are units."""
        lens = lens_params(WeightPair((0, 1, 2), (0, 1, 2)), 1, 1)
        self.assertEqual(lens.triple, (0, -1, 0))
        self.assertEqual(lens.special, 'S1xCP1')
        self.assertFalse(lens.smooth)


class TestSingularLocus(unittest.TestCase):
    """Test the assembled locus graph."""

    def test_coho_two_one_sphere_four_points(self):
        """Test (1,2,3): one singular sphere and four isolated points."""
        locus = singular_locus(coho_two(1, 2, 3), COHO_TWO_ACTION)
        self.assertEqual([f.face for f in locus.singular_faces], [(2, 3)])
        self.assertEqual(len(locus.isolated_vertices), 4)
        self.assertFalse(locus.face(2, 3).smooth_sphere)
        self.assertEqual(locus.face(2, 3).angles, (Fraction(1, 2), Fraction(1, 2)))

    def test_coho_two_smooth_sphere(self):
        """Test (1,2,-3): a smooth sphere of order 2 and two isolated points."""
        locus = singular_locus(coho_two(1, 2, -3), COHO_TWO_ACTION)
        self.assertEqual(len(locus.singular_faces), 1)
        self.assertTrue(locus.face(2, 3).smooth_sphere)
        self.assertEqual(locus.face(2, 3).order, 2)
        self.assertEqual({v.sigma.name: v.order for v in locus.isolated_vertices}, {'id': 3, '(12)': 3})

    def test_face_orders_divide_vertex_orders(self):
        """Test every face order divides both incident vertex orders on random actions."""
        for wp, act in random_almost_free(random.Random(5), 400):
            locus = singular_locus(wp, act)
            for i, j in FACES:
                face = kappa_face(wp, act, i, j)
                for sigma in incident_vertices(i, j):
                    self.assertEqual(kappa_sigma(wp, act, sigma) % face, 0)
                    self.assertEqual(locus.vertex(sigma).order % locus.face(i, j).order, 0)

    def test_effective_orders_divide_kernel(self):
        """Test (1,3,5): raw orders are all singular, effective ones are divided by 2."""
        locus = singular_locus(coho_two(1, 3, 5), COHO_TWO_ACTION)
        self.assertEqual(locus.kappa0, 2)
        self.assertTrue(all(v.raw > 1 for v in locus.vertices))
        self.assertTrue(all(f.raw > 1 for f in locus.faces))
        self.assertEqual([v.order for v in locus.vertices], [2, 2, 4, 3, 3, 4])
        self.assertEqual(len(locus.singular_faces), 2)

    def test_theorem_c_iv_locus(self):
        """Test the smooth totally geodesic sphere with orbifold group Z_{d-1}."""
        locus = singular_locus(coho_one(5), ActionSpec((0, 1, 1), (0, 0, 2)))
        self.assertEqual(len(locus.singular_faces), 1)
        face = locus.face(1, 3)
        self.assertTrue(face.smooth_sphere)
        self.assertEqual(face.order, 4)
        self.assertEqual(face.vertices, (SIGMA['(13)'], SIGMA['(132)']))
        self.assertEqual(locus.isolated_vertices, [])
        self.assertEqual(tuple(locus.summary), (1, 2, 4, 12))

    def test_free_actions(self):
        """Test known free actions on E_2 and W_{1,1}."""
        self.assertTrue(is_free_action(coho_one(2), ActionSpec((0, 1, 1), (0, 0, 2))))
        self.assertTrue(is_free_action(WeightPair((0, 0, 0), (1, 1, -2)), ActionSpec((0, 0, 0), (1, 0, -1))))
        self.assertFalse(is_free_action(coho_one(5), ActionSpec((0, 1, 1), (0, 0, 2))))

    def test_to_json(self):
        """Test the JSON form lists six vertices and nine faces."""
        data = singular_locus(coho_one(5), ActionSpec((0, 1, 1), (0, 0, 2))).to_json()
        self.assertEqual(len(data['vertices']), 6)
        self.assertEqual(len(data['faces']), 9)
        self.assertEqual(data['view'], 'circle')


class TestTorusView(unittest.TestCase):
    """Test the SU(3)//T^2 orbifold structure."""

    def test_one_point_orbifold(self):
        """Test p=(3,2,1), q=(4,2,0), a=(1,1,0), b=(2,0,0) has one singular point of order 3."""
        locus = torus_quotient_locus(WeightPair((3, 2, 1), (4, 2, 0)), ActionSpec((1, 1, 0), (2, 0, 0)))
        self.assertEqual([(v.sigma.name, v.order) for v in locus.singular_vertices], [('(13)', 3)])
        self.assertEqual(locus.singular_faces, [])
        self.assertEqual(locus.view, 'torus')

    def test_symmetric_in_both_circles(self):
        """Test swapping (p,q) and (a,b) keeps all orders."""
        pairs = [
            (coho_one(5), ActionSpec((0, 1, 1), (0, 0, 2))),
            (WeightPair((3, 2, 1), (4, 2, 0)), ActionSpec((1, 1, 0), (2, 0, 0))),
            (coho_two(1, 2, 3), COHO_TWO_ACTION),
        ]
        for wp, act in pairs:
            forward = torus_quotient_locus(wp, act)
            backward = torus_quotient_locus(act.as_weight_pair(), ActionSpec.from_weight_pair(wp))
            self.assertEqual(forward.orders(), backward.orders())
            self.assertEqual(forward.kappa0, backward.kappa0)

    def test_lens_parameters_follow_first_argument(self):
        """Test each view reports the lens spaces of its own first pair."""
        wp, act = WeightPair((3, 2, 1), (4, 2, 0)), ActionSpec((1, 1, 0), (2, 0, 0))
        forward = torus_quotient_locus(wp, act)
        backward = torus_quotient_locus(act.as_weight_pair(), ActionSpec.from_weight_pair(wp))
        for f, g in zip(forward.faces, backward.faces):
            self.assertEqual(f.face, g.face)
            self.assertEqual(f.lens, lens_params(wp, *f.face))
            self.assertEqual(g.lens, lens_params(act.as_weight_pair(), *g.face))

    def test_agrees_with_circle_view_on_manifolds(self):
        """Test both views give the same effective orders when E_{p,q} is a manifold."""
        wp, act = coho_one(5), ActionSpec((0, 1, 1), (0, 0, 2))
        self.assertEqual(torus_quotient_locus(wp, act).orders(), singular_locus(wp, act).orders())


class TestSymmetries(unittest.TestCase):
    """Test covariance and invariance of the profile."""

    def setUp(self):
        self.wp = WeightPair((3, -1, 4), (1, 5, 0))
        self.act = ActionSpec((2, 0, -1), (0, 1, 0))

    def test_shift_invariance(self):
        """Test (a,b) + n(p,q) + m(Id,Id) has the same profile."""
        base = isotropy_profile(self.wp, self.act)
        for n, m in ((1, 0), (-2, 3), (0, 5)):
            shifted = isotropy_profile(self.wp, self.act.shifted(self.wp, n, m))
            self.assertEqual(shifted.vertex, base.vertex)
            self.assertEqual(shifted.face, base.face)
            self.assertEqual(shifted.kappa0, base.kappa0)

    def test_relabel_covariance(self):
        """Test relabeling permutes the orders without changing them."""
        base = isotropy_profile(self.wp, self.act)
        for tau in PERMUTATIONS:
            for rho in PERMUTATIONS:
                wp, act = relabel(self.wp, self.act, tau, rho)
                profile = isotropy_profile(wp, act)
                self.assertEqual(sorted(profile.vertex.values()), sorted(base.vertex.values()))
                self.assertEqual(sorted(profile.face.values()), sorted(base.face.values()))
                self.assertEqual(profile.kappa0, base.kappa0)

    def test_reduce_action(self):
        """Test every shift and the reversal reduce to the same representative."""
        key = reduce_action(self.wp, self.act)
        self.assertEqual(reduce_action(self.wp, self.act.shifted(self.wp, 3, -2)), key)
        reversed_act = ActionSpec(tuple(-x for x in self.act.a), tuple(-x for x in self.act.b))
        self.assertEqual(reduce_action(self.wp, reversed_act), key)
        self.assertEqual(reduce_action(self.wp, key), key)
        self.assertEqual(key.b[0], 0)


if __name__ == '__main__':
    unittest.main()
