import os
import random
import unittest

import mpmath

from zetacensus.tasks import zero_census
from zetacensus.tasks.mpc_eval import ComplexValue, PrecisionContext
from zetacensus.tasks.utils import BoundaryZero, DomainError
from zetacensus.tasks.zero_census import Rect, Zero


SLOW = os.environ.get("ZC_SLOW") == "1"


def hardy_z_ordinates(t_max, step=0.1, dps=30):
    """Zeros of Hardy's Z on (2, t_max] by sign changes and bisection."""
    ordinates = []
    with mpmath.workdps(dps):
        t = mpmath.mpf(2)
        previous = mpmath.siegelz(t)
        while t + step <= t_max:
            nxt = t + step
            value = mpmath.siegelz(nxt)
            if previous * value < 0:
                a, b, fa = t, nxt, previous
                for _ in range(80):
                    m = (a + b) / 2
                    fm = mpmath.siegelz(m)
                    if fa * fm <= 0:
                        b = m
                    else:
                        a, fa = m, fm
                ordinates.append((a + b) / 2)
            t, previous = nxt, value
    return ordinates


class Rectangles(unittest.TestCase):

    def test_from_string(self):
        rect = Rect.from_string("-1,2,10,20")
        self.assertEqual((rect.sigma_min, rect.sigma_max, rect.t_min, rect.t_max), (-1, 2, 10, 20))
        self.assertEqual(rect.width, 3)
        self.assertEqual(rect.height, 10)

    def test_validate(self):
        self.assertRaises(DomainError, Rect(2, 1, 0, 1).validate)
        self.assertRaises(DomainError, Rect(0, 1, 5, 5).validate)
        self.assertEqual(Rect(0, 1, 5, 5).validate(degenerate=True), Rect(0, 1, 5, 5))

    def test_quarters_tile(self):
        mp = PrecisionContext().mp
        rect = Rect(0, 1, 10, 12)
        quarters = rect.quarters(mp, zero_census.SPLIT_FRACTIONS[0])
        area = sum(q.width * q.height for q in quarters)
        self.assertLess(abs(area - 2), 1e-40)
        self.assertEqual(quarters[0].sigma_min, 0)
        self.assertEqual(quarters[3].t_max, 12)

    def test_conjugate(self):
        self.assertEqual(Rect(0, 1, 10, 20).conjugate(), Rect(0, 1, -20, -10))


class Windings(unittest.TestCase):

    def setUp(self):
        self.ctx = PrecisionContext()

    def test_first_zeros(self):
        self.assertEqual(zero_census.winding_count(self.ctx, "zeta", Rect(0, 1, 10, 20)), 1)
        self.assertEqual(zero_census.winding_count(self.ctx, "zeta", Rect(0, 1, 10, 30)), 3)

    def test_zero_free_half_plane_of_zeta2(self):
        self.assertEqual(zero_census.winding_count(self.ctx, "zeta2", Rect(5, 8, 2, 40)), 0)

    def test_zero_on_the_contour_is_perturbed_away(self):
        # the left edge runs through the first zero
        self.assertEqual(zero_census.winding_count(self.ctx, "zeta", Rect(0.5, 1, 10, 20)), 1)

    def test_zero_on_the_edge_is_located(self):
        mp = self.ctx.mp
        zeros = zero_census.locate_zeros(self.ctx, "zeta", Rect(0.5, 1, 10, 20))
        self.assertEqual(len(zeros), 1)
        self.assertEqual(zeros[0].multiplicity, 1)
        self.assertLess(abs(zeros[0].position.z - mp.zetazero(1)), 1e-30)

    def test_winding_adds_over_quadrants(self):
        rect = Rect(-1, 2, 10, 30)
        total = zero_census.winding_count(self.ctx, "zeta", rect)
        quarters = rect.quarters(self.ctx.mp, zero_census.SPLIT_FRACTIONS[0])
        self.assertEqual(len(quarters), 4)
        self.assertEqual(sum(zero_census.winding_count(self.ctx, "zeta", q) for q in quarters), total)
        self.assertEqual(total, 3)

    def test_edge_through_a_zero(self):
        mp = self.ctx.mp
        self.assertRaises(BoundaryZero, zero_census.edge_change, self.ctx, "zeta",
                          mp.mpc(0.5, 14), mp.mpc(0.5, 15))

    def test_bad_input(self):
        self.assertRaises(DomainError, zero_census.winding_count, self.ctx, "zeta", Rect(0, 1, 10, 10))
        self.assertRaises(DomainError, zero_census.winding_count, self.ctx, "zeta3", Rect(0, 1, 10, 20))


class Localisation(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.ctx = PrecisionContext()
        cls.zeros = zero_census.locate_zeros(cls.ctx, "zeta", Rect(-1, 2, 2, 50))

    def test_against_hardy_z(self):
        ordinates = hardy_z_ordinates(50)
        self.assertEqual(len(ordinates), 10)
        self.assertEqual(len(self.zeros), 10)
        for zero, gamma in zip(self.zeros, ordinates):
            self.assertLess(abs(zero.gamma - gamma), 1e-8)

    def test_on_the_critical_line(self):
        for zero in self.zeros:
            self.assertLess(abs(zero.beta - self.ctx.mp.mpf(0.5)), 1e-20)
            self.assertEqual(zero.multiplicity, 1)
            self.assertEqual(zero.target, "zeta")

    def test_sorted(self):
        self.assertEqual(self.zeros, sorted(self.zeros, key=Zero.sort_key))

    def test_quality(self):
        for zero in self.zeros:
            slope = zero_census.derivative_z(self.ctx, "zeta", zero.position.z)
            self.assertLess(zero.residual, self.ctx.newton_tol * max(1, abs(slope)))

    def test_doubled_precision_agrees(self):
        first = self.zeros[0]
        doubled, _ = zero_census.polish_zero(self.ctx.doubled(), "zeta", first.position.z)
        self.assertLess(abs(doubled - first.position.z), 10 * self.ctx.newton_tol)

    def test_conjugate_rectangle(self):
        below = zero_census.locate_zeros(self.ctx, "zeta", Rect(0, 1, -30, -10))
        above = [zero for zero in self.zeros if 10 <= zero.gamma <= 30]
        self.assertEqual(len(below), len(above))
        for low in below:
            self.assertTrue(any(abs(low.position.z - high.position.z.conjugate()) < 1e-30 for high in above))

    def test_pole_rectangle(self):
        self.assertRaises(DomainError, zero_census.locate_zeros, self.ctx, "zeta", Rect(0, 2, -1, 1))

    def test_polish_matches_mpmath(self):
        mp = self.ctx.mp
        z, residual = zero_census.polish_zero(self.ctx, "zeta", mp.mpc(0.5, 14.1))
        self.assertLess(abs(z - mp.zetazero(1)), 1e-35)


class Counting(unittest.TestCase):

    def setUp(self):
        self.ctx = PrecisionContext()

    def test_n_of_100(self):
        self.assertEqual(zero_census.count_Nk(self.ctx, 0, 100), 29)

    def test_count_agrees_with_zero_list(self):
        zeros = zero_census.census_zeros(self.ctx, 0, 50)
        self.assertEqual(zero_census.count_from_zeros(zeros, 50), zero_census.count_Nk(self.ctx, 0, 50))

    def test_height_on_a_zero_is_nudged(self):
        gamma = self.ctx.mp.zetazero(1).imag
        count = zero_census.census_count(self.ctx, 0, gamma)
        self.assertNotEqual(count.perturbation, 0)
        self.assertLess(abs(count.perturbation), 1e-10)
        self.assertEqual(count.count, 1 if count.perturbation > 0 else 0)

    def test_census_targets(self):
        self.assertEqual(zero_census.census_target(0), "zeta")
        self.assertEqual(zero_census.census_target(2), "zeta2")
        self.assertRaises(DomainError, zero_census.census_target, 1)
        self.assertRaises(DomainError, zero_census.count_Nk, self.ctx, 0, 1)

    def test_zeta2_census_rectangles(self):
        rects = zero_census.census_rects(2, 30)
        self.assertEqual(rects[0], Rect(-2, 6, 0.05, 2))
        self.assertEqual(rects[1], Rect(-2, 6, 2, 30))
        self.assertEqual(zero_census.census_rects(0, 30), [Rect(-1, 2, 2, 30)])

    def test_sums_from_zero_lists(self):
        ctx = self.ctx
        mp = ctx.mp
        zeros = [
            Zero(ComplexValue.of(ctx, mp.mpc(0.75, 10)), 1, 0, "zeta2"),
            Zero(ComplexValue.of(ctx, mp.mpc(1.5, 20)), 2, 0, "zeta2"),
            Zero(ComplexValue.of(ctx, mp.mpc(-0.25, 0.5)), 1, 0, "zeta2"),
        ]
        self.assertEqual(zero_census.count_from_zeros(zeros, 15), 2)
        self.assertEqual(zero_census.count_from_zeros(zeros, 20), 4)
        self.assertEqual(zero_census.s2_from_zeros(ctx, zeros, 20), mp.mpf(0.25) + 2 - mp.mpf(0.75))
        self.assertEqual(zero_census.s2_from_zeros(ctx, zeros, 20, T_from=5), mp.mpf(0.25) + 2)
        self.assertTrue(zeros[2].left_of_origin)
        self.assertFalse(zeros[0].left_of_origin)

    def test_s2_needs_t_above_two_pi(self):
        self.assertRaises(DomainError, zero_census.sum_S2, self.ctx, 6)


class SecondDerivativeZeros(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.ctx = PrecisionContext()
        cls.T = 20
        cls.zeros = zero_census.census_zeros(cls.ctx, 2, cls.T)

    def test_count_agrees_with_zero_list(self):
        count = zero_census.census_count(self.ctx, 2, self.T)
        self.assertEqual(zero_census.count_from_zeros(self.zeros, count.height), count.count)

    def test_left_of_origin(self):
        left = [zero for zero in self.zeros if zero.left_of_origin]
        self.assertEqual(len(left), 1)
        self.assertGreater(left[0].gamma, 0)

    def test_right_boundary(self):
        for zero in self.zeros:
            self.assertLess(zero.beta, 5)
            self.assertEqual(zero.target, "zeta2")

    def test_s2_matches_zero_list(self):
        mp = self.ctx.mp
        expected = sum((zero.multiplicity * (zero.beta - mp.mpf(0.5)) for zero in self.zeros), mp.mpf(0))
        self.assertEqual(zero_census.s2_from_zeros(self.ctx, self.zeros, self.T + 1), expected)


class ContinuousArgument(unittest.TestCase):

    def setUp(self):
        self.ctx = PrecisionContext()

    def test_g2_is_almost_constant_far_right(self):
        trace = zero_census.arg_continuous(self.ctx, "G2", 50, 30)
        self.assertLess(trace.total_variation, 0.05)
        self.assertTrue(trace.branch_consistent)
        self.assertEqual(trace.samples[-1][0], 30)

    def test_marks_are_sampled(self):
        trace = zero_census.arg_continuous(self.ctx, "zeta", 40, 0.5, [0.75, 2.5])
        self.assertIsNotNone(trace.at(0.75))
        self.assertEqual(trace.at(0.5), trace.final)
        self.assertRaises(KeyError, trace.at, 0.6)
        sigmas = [s for s, _ in trace.samples]
        self.assertEqual(sigmas, sorted(sigmas, reverse=True))

    def test_marks_right_of_forty(self):
        trace = zero_census.arg_continuous(self.ctx, "zeta", 30, 0.5, [45])
        self.assertLess(abs(trace.at(45)), 1e-10)
        self.assertRaises(DomainError, zero_census.arg_continuous, self.ctx, "zeta", 30, 0.5, [0.25])

    def test_zero_on_the_line(self):
        gamma = self.ctx.mp.zetazero(1).imag
        self.assertRaises(BoundaryZero, zero_census.arg_continuous, self.ctx, "zeta", gamma, 0.5)

    def test_bad_input(self):
        self.assertRaises(DomainError, zero_census.arg_continuous, self.ctx, "zeta", 1, 0.5)
        self.assertRaises(DomainError, zero_census.arg_continuous, self.ctx, "zeta2", 30, 0.5)


@unittest.skipUnless(SLOW, "set ZC_SLOW=1 for acceptance-scale checks")
class AcceptanceScale(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.ctx = PrecisionContext()
        cls.zeros = zero_census.census_zeros(cls.ctx, 2, 300)

    def test_winding_matches_zero_list(self):
        rng = random.Random(2)
        for T in sorted(rng.uniform(10, 300) for _ in range(20)):
            count = zero_census.census_count(self.ctx, 2, T)
            self.assertEqual(zero_census.count_from_zeros(self.zeros, count.height), count.count, T)

    def test_structure_below_300(self):
        self.assertEqual(len([zero for zero in self.zeros if zero.left_of_origin]), 1)
        self.assertTrue(all(zero.beta < 5 for zero in self.zeros))
