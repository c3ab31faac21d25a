import random
import unittest

from zetacensus.tasks import functional_eq, zeta_deriv
from zetacensus.tasks.mpc_eval import PrecisionContext
from zetacensus.tasks.utils import DomainError, PoleError


def strip_points(count, seed=5):
    rng = random.Random(seed)
    return [complex(rng.uniform(-10, 10), rng.uniform(2, 60)) for _ in range(count)]


class FunctionalEquation(unittest.TestCase):

    def setUp(self):
        self.ctx = PrecisionContext()
        self.mp = self.ctx.mp

    def test_zeta_from_its_reflection(self):
        for point in strip_points(10):
            z = self.ctx.z(point)
            zeta = zeta_deriv.jet_z(self.ctx, z, 0)[0]
            reflected = functional_eq.F(self.ctx, z).z * zeta_deriv.jet_z(self.ctx, 1 - z, 0)[0]
            self.assertLess(abs(zeta - reflected), self.ctx.newton_tol * (1 + abs(zeta)), point)

    def test_even_integers(self):
        # zeta(2) = F(2) zeta(-1) with F(2) = -2 pi^2
        value = functional_eq.F(self.ctx, 2).z
        self.assertLess(abs(value + 2 * self.mp.pi ** 2), 1e-45)
        self.assertLess(abs(functional_eq.F(self.ctx, 4).z - 16 * self.mp.pi ** 4 / 12), 1e-40)

    def test_odd_integers_are_poles(self):
        self.assertRaises(PoleError, functional_eq.F, self.ctx, 1)
        self.assertRaises(PoleError, functional_eq.F, self.ctx, 3)

    def test_against_the_closed_form(self):
        z = self.ctx.z(-2.5 + 7j)
        mp = self.mp
        expected = mp.power(2, z) * mp.power(mp.pi, z - 1) * mp.sin(mp.pi * z / 2) * mp.gamma(1 - z)
        self.assertLess(abs(functional_eq.F(self.ctx, z).z - expected), 1e-40 * abs(expected))


class LogDerivatives(unittest.TestCase):

    def setUp(self):
        self.ctx = PrecisionContext()
        self.mp = self.ctx.mp

    def test_logderiv_by_differences(self):
        h = self.mp.mpf(10) ** -20
        for point in (0.3 + 35j, -12 + 4j, 5 + 2.5j):
            z = self.ctx.z(point)
            f = lambda w: functional_eq.f_z(self.ctx, w)
            slope = (f(z + h) - f(z - h)) / (2 * h) / f(z)
            value = functional_eq.F_logderiv(self.ctx, z).z
            self.assertLess(abs(value - slope), 1e-30 * max(1, abs(value)), point)

    def test_second_derivative_by_differences(self):
        h = self.mp.mpf(10) ** -15
        for point in (0.3 + 35j, -12 + 4j, 5 + 2.5j):
            z = self.ctx.z(point)
            f = lambda w: functional_eq.f_z(self.ctx, w)
            curvature = (f(z + h) - 2 * f(z) + f(z - h)) / (h * h) / f(z)
            value = functional_eq.F2_over_F(self.ctx, z).z
            self.assertLess(abs(value - curvature), 1e-20 * max(1, abs(value)), point)

    def test_logderiv_prime_by_differences(self):
        h = self.mp.mpf(10) ** -20
        z = self.ctx.z(-4 + 31j)
        g = lambda w: functional_eq.flogd_z(self.ctx, w)
        slope = (g(z + h) - g(z - h)) / (2 * h)
        self.assertLess(abs(functional_eq.flogd_prime_z(self.ctx, z) - slope), 1e-30)

    def test_quotients_are_consistent(self):
        z = self.ctx.z(-7 + 40j)
        term = functional_eq.func_eq_term(self.ctx, z)
        self.assertLess(abs(term.f2_over_f1.z * term.flogd.z - term.f2_over_f.z), 1e-45 * abs(term.f2_over_f.z))
        self.assertEqual(term.f2_over_f, functional_eq.F2_over_F(self.ctx, z))
        self.assertEqual(term.f, functional_eq.F(self.ctx, z))

    def test_height_is_enforced(self):
        self.assertRaises(DomainError, functional_eq.F2_over_F, self.ctx, 0.5 + 1j)
        self.assertRaises(DomainError, functional_eq.F2_over_F1, self.ctx, -3 - 1.5j)
        self.assertRaises(DomainError, functional_eq.func_eq_term, self.ctx, 0.5 + 1j)
        self.assertRaises(DomainError, functional_eq.remainder_term, self.ctx, -20 + 1j)

    def test_reflection(self):
        tol = self.ctx.tolerance
        z = self.ctx.z(-6 + 33j)
        for fn in (functional_eq.F, functional_eq.F_logderiv, functional_eq.F2_over_F,
                   functional_eq.F2_over_F1, functional_eq.G2):
            a = fn(self.ctx, self.mp.conj(z)).z
            b = self.mp.conj(fn(self.ctx, z).z)
            self.assertLessEqual(abs(a - b), 4 * tol * max(1, abs(b)), fn.__name__)

    def test_modulus_of_f2_over_f_on_the_left(self):
        # |F''/F| >= 1 in the left half of the strip at t >= 29
        for point in (0.5 + 29j, -30 + 29j, -10 + 100j, 0 + 200j):
            self.assertGreaterEqual(abs(functional_eq.F2_over_F(self.ctx, point)), 1, point)


class SecondDerivative(unittest.TestCase):

    def setUp(self):
        self.ctx = PrecisionContext()
        self.mp = self.ctx.mp

    def test_g2_tends_to_one(self):
        for sigma in (12, 20, 30):
            z = self.ctx.z(complex(sigma, 5))
            bound = (self.mp.mpf(2) / 3) ** (self.mp.mpf(sigma) / 2) / 2
            self.assertLess(abs(functional_eq.G2(self.ctx, z).z - 1), bound, sigma)

    def test_g2_scaling(self):
        z = self.ctx.z(0.5 + 20j)
        zeta2 = zeta_deriv.zeta_deriv(self.ctx, 2, z).z
        expected = self.mp.power(2, z) * zeta2 / self.mp.ln2 ** 2
        self.assertLess(abs(functional_eq.G2(self.ctx, z).z - expected), 1e-45 * abs(expected))


class Remainder(unittest.TestCase):

    def setUp(self):
        self.ctx = PrecisionContext()

    def test_identity(self):
        for point in (-20 + 10j, -3 + 30j, 0.25 + 40j, -45 + 2j):
            self.assertLess(functional_eq.remainder_residual(self.ctx, point), 1e-40, point)

    def test_small_far_left(self):
        mp = self.ctx.mp
        for sigma in (-10, -30, -60):
            z = self.ctx.z(complex(sigma, 5))
            bound = 32 * mp.power(2, z.real) / mp.log(1 - z.real)
            self.assertLess(abs(functional_eq.remainder_term(self.ctx, z)), bound, sigma)
