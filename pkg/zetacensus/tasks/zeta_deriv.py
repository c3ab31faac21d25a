"""zeta(s) and its derivatives anywhere off s = 1, plus the logarithmic
derivative ratios zeta'/zeta, zeta''/zeta' and zeta''/zeta.

The continuation is Euler-Maclaurin summation with every term differentiated
in closed form, so one pass yields the whole jet zeta, zeta', ..., zeta^(k).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import mpmath
import numpy

from zetacensus.tasks import utils
from zetacensus.tasks.mpc_eval import ComplexValue
from zetacensus.tasks.utils import DenominatorZero, DomainError, PoleError, PrecisionError


# full-plane evaluation supports k <= 2; higher orders only where the
# Dirichlet series converges absolutely with room to spare
FULL_PLANE_MAX_ORDER = 2
SERIES_SIGMA = 1.5


@dataclass(frozen=True)
class DerivOrder:
    k: int

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 0:
            raise DomainError("derivative order must be a non-negative integer, got %r" % (self.k,))

    def check(self, z):
        if self.k > FULL_PLANE_MAX_ORDER and not z.real > SERIES_SIGMA:
            raise DomainError("derivative order %d is only available for Re(s) > %s" % (self.k, SERIES_SIGMA))


class RatioKind(Enum):
    ZP_OVER_Z = "zp_over_z"
    ZPP_OVER_ZP = "zpp_over_zp"
    ZPP_OVER_Z = "zpp_over_z"


def _order(order):
    if isinstance(order, DerivOrder):
        return order
    return DerivOrder(order)


def initial_cut(ctx, t):
    return max(20, int(math.ceil(1.3 * abs(float(t)))) + ctx.mantissa_bits // 4)


def _extra_bits(ctx, sigma, cut):
    extra = ctx.guard_bits
    if sigma < 1:
        extra += int(math.ceil((1 - float(sigma)) * math.log2(cut)))
    return extra


def _multiply_linear(mp, poly, q):
    # derivatives of P(s) * (s + c) from those of P(s)
    out = [p * q for p in poly]
    for r in range(1, len(poly)):
        out[r] += r * poly[r - 1]
    return out


def _em_attempt(ctx, z, k, cut):
    mp = ctx.extended(_extra_bits(ctx, z.real, cut))
    s = mp.convert(z)
    u = s - 1
    L = mp.log(cut)

    jet = [mp.mpc(0) for _ in range(k + 1)]
    for n in range(1, cut):
        ln = mp.log(n)
        term = mp.exp(-s * ln)
        for m in range(k + 1):
            jet[m] += term
            term *= -ln

    ns = mp.exp(-s * L)
    tail = ns * cut
    for m in range(k + 1):
        total = mp.mpc(0)
        for j in range(m + 1):
            total += mp.binomial(m, j) * (-L) ** (m - j) * (-1) ** j * mp.factorial(j) / u ** (j + 1)
        jet[m] += tail * total
        jet[m] += (-L) ** m * ns / 2

    scale = [abs(v) for v in jet]
    eps = mp.ldexp(1, -mp.prec)

    poly = [mp.mpc(1)] + [mp.mpc(0)] * k
    power = ns / cut
    last = None
    for j in range(1, 4 * mp.prec):
        if j == 1:
            poly = _multiply_linear(mp, poly, s)
        else:
            poly = _multiply_linear(mp, poly, s + (2 * j - 3))
            poly = _multiply_linear(mp, poly, s + (2 * j - 2))
        c = mp.bernoulli(2 * j) / mp.factorial(2 * j)
        terms = []
        for m in range(k + 1):
            total = mp.mpc(0)
            for r in range(m + 1):
                total += mp.binomial(m, r) * poly[r] * (-L) ** (m - r)
            terms.append(c * total * power)

        sizes = [abs(x) for x in terms]
        if all(sizes[m] <= eps * max(scale[m], abs(jet[m])) for m in range(k + 1)):
            return [jet[m] + terms[m] for m in range(k + 1)]
        size = max(sizes)
        if last is not None and size > last:
            return None
        for m in range(k + 1):
            jet[m] += terms[m]
        last = size
        power /= cut * cut
    return None


def jet_z(ctx, z, k):
    """zeta^(m)(z) for m = 0..k as working-precision mpc numbers."""
    if abs(z - 1) < ctx.newton_tol:
        raise PoleError("zeta has a pole at s = 1")
    DerivOrder(k).check(z)

    cut = initial_cut(ctx, z.imag)
    max_cut = int(utils.setting("zeta", "max_cut", 1 << 16))
    while cut <= max_cut:
        jet = _em_attempt(ctx, z, k, cut)
        if jet is not None:
            return [+ctx.mp.convert(v) for v in jet]
        logging.debug("[zeta] Bernoulli terms turned at N=%d for s=%s, doubling" % (cut, ctx.mp.nstr(z, 10)))
        cut *= 2
    raise PrecisionError("Euler-Maclaurin remainder not met below N=%d at s=%s" % (max_cut, ctx.mp.nstr(z, 15)))


def zeta_jet(ctx, s, k):
    return [ComplexValue.of(ctx, v) for v in jet_z(ctx, ctx.z(s), k)]


def zeta_deriv(ctx, order, s):
    order = _order(order)
    return ComplexValue.of(ctx, jet_z(ctx, ctx.z(s), order.k)[order.k])


# von Mangoldt function. The smallest-prime-factor table is built once and
# never mutated afterwards; larger arguments fall back to trial division.

SIEVE_LIMIT = 1 << 16


@lru_cache(maxsize=None)
def _smallest_factors(limit):
    spf = numpy.zeros(limit + 1, dtype=numpy.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    spf.setflags(write=False)
    return spf


def _smallest_factor(n):
    if n <= SIEVE_LIMIT:
        p = int(_smallest_factors(SIEVE_LIMIT)[n])
        return p or n
    if n % 2 == 0:
        return 2
    for p in range(3, math.isqrt(n) + 1, 2):
        if n % p == 0:
            return p
    return n


def prime_power_base(n):
    """The prime p with n = p^m, or None if n is not a prime power."""
    if int(n) != n or n < 1:
        raise DomainError("von Mangoldt needs a positive integer, got %r" % (n,))
    n = int(n)
    if n == 1:
        return None
    p = _smallest_factor(n)
    while n % p == 0:
        n //= p
    return p if n == 1 else None


def von_mangoldt(n, ctx=None):
    p = prime_power_base(n)
    mp = ctx.mp if ctx is not None else mpmath.mp
    if p is None:
        return mp.mpf(0)
    return mp.log(p)


# Dirichlet series regime

def _series_cut(ctx, sigma, power):
    # smallest M (doubling) whose tail sum_{n>M} (log n)^power n^-sigma is
    # below tolerance relative to the leading n = 2 term; None if too many
    max_terms = int(utils.setting("zeta", "series_max_terms", 4096))
    sigma = float(sigma)
    if sigma <= SERIES_SIGMA:
        return None
    target = float(ctx.mantissa_bits + ctx.guard_bits) * math.log(2) + sigma * math.log(2)
    M = 64
    while M <= max_terms:
        log_m = math.log(M)
        if (sigma - 1) * log_m > power:
            log_tail = (1 - sigma) * log_m + power * math.log(log_m) - math.log(sigma - 1) + math.log(2)
            if -log_tail > target:
                return M
        M *= 2
    return None


def _series_sums(ctx, z, cut):
    # -zeta'/zeta = sum Lambda(n) n^-s and (zeta'/zeta)' = sum Lambda(n) log(n) n^-s
    mp = ctx.extended(ctx.guard_bits)
    s = mp.convert(z)
    first = mp.mpc(0)
    second = mp.mpc(0)
    for n in range(2, cut + 1):
        p = prime_power_base(n)
        if p is None:
            continue
        ln = mp.log(n)
        term = mp.log(p) * mp.exp(-s * ln)
        first += term
        second += term * ln
    return -first, second


def _checked_quotient(ctx, num, den, label):
    if abs(den) <= ctx.newton_tol * abs(num) or den == 0:
        raise DenominatorZero("%s: denominator vanishes" % label)
    return num / den


def ratio_z(ctx, kind, z):
    kind = RatioKind(kind)
    if abs(z - 1) < ctx.newton_tol:
        raise PoleError("zeta has a pole at s = 1")

    power = 2 if kind == RatioKind.ZP_OVER_Z else 3
    cut = _series_cut(ctx, z.real, power)
    if cut is not None:
        logd, logd_prime = _series_sums(ctx, z, cut)
        if kind == RatioKind.ZP_OVER_Z:
            value = logd
        else:
            zpp_over_z = logd_prime + logd * logd
            if kind == RatioKind.ZPP_OVER_Z:
                value = zpp_over_z
            else:
                value = _checked_quotient(ctx, zpp_over_z, logd, kind.value)
        return +ctx.mp.convert(value)

    jet = jet_z(ctx, z, 2)
    if kind == RatioKind.ZP_OVER_Z:
        return _checked_quotient(ctx, jet[1], jet[0], kind.value)
    if kind == RatioKind.ZPP_OVER_ZP:
        return _checked_quotient(ctx, jet[2], jet[1], kind.value)
    return _checked_quotient(ctx, jet[2], jet[0], kind.value)


def log_deriv_ratio(ctx, kind, s):
    return ComplexValue.of(ctx, ratio_z(ctx, kind, ctx.z(s)))
