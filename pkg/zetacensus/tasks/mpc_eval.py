"""Multiprecision complex kernel: precision policy, immutable complex values
and the Gamma-family special functions the rest of the package builds on.

Every function takes an explicit PrecisionContext. Arithmetic happens in an
mpmath context private to the calling thread, so values can be shared freely
between worker threads while no precision state is.
"""

import threading
from dataclasses import dataclass

from mpmath import fp
from mpmath.ctx_mp import MPContext

from zetacensus.tasks import utils
from zetacensus.tasks.utils import DomainError, PoleError, PrecisionError, ZeroArgument


_local = threading.local()


def working_context(bits):
    contexts = getattr(_local, "contexts", None)
    if contexts is None:
        contexts = _local.contexts = {}
    mp = contexts.get(bits)
    if mp is None:
        mp = MPContext()
        mp._fp = fp
        mp.prec = bits
        contexts[bits] = mp
    return mp


@dataclass(frozen=True)
class PrecisionContext:
    mantissa_bits: int = 192
    guard_bits: int = 16

    def __post_init__(self):
        if int(self.mantissa_bits) != self.mantissa_bits or int(self.guard_bits) != self.guard_bits:
            raise DomainError("precision fields must be integers")
        if self.mantissa_bits < 64:
            raise DomainError("mantissa_bits must be at least 64, got %s" % self.mantissa_bits)
        if self.guard_bits < 16:
            raise DomainError("guard_bits must be at least 16, got %s" % self.guard_bits)
        if self.mantissa_bits <= 8 * self.guard_bits:
            raise DomainError("mantissa_bits (%d) must exceed 8 * guard_bits (%d)" % (self.mantissa_bits, 8 * self.guard_bits))

    @classmethod
    def from_config(cls, mantissa_bits=None, guard_bits=None):
        return cls(
            int(mantissa_bits or utils.setting("precision", "mantissa_bits", 192)),
            int(guard_bits or utils.setting("precision", "guard_bits", 16)))

    @property
    def mp(self):
        return working_context(self.mantissa_bits)

    def extended(self, extra_bits):
        # scratch context for intermediate work above the working precision
        return working_context(self.mantissa_bits + int(extra_bits))

    @property
    def newton_tol(self):
        return self.mp.ldexp(1, -(self.mantissa_bits - 4 * self.guard_bits))

    @property
    def tolerance(self):
        return self.mp.ldexp(1, -(self.mantissa_bits - self.guard_bits))

    def doubled(self):
        return PrecisionContext(2 * self.mantissa_bits, self.guard_bits)

    def real(self, x):
        if isinstance(x, ComplexValue):
            x = x.re
        return +self.mp.convert(x)

    def z(self, s):
        """The working-precision mpc for anything number-like."""
        if isinstance(s, ComplexValue):
            return self.mp.mpc(s.re, s.im)
        if isinstance(s, str):
            s = utils.parse_complex(s)
        return +self.mp.mpc(self.mp.convert(s))

    def value(self, s):
        if isinstance(s, ComplexValue) and s.bits == self.mantissa_bits:
            return s
        return ComplexValue.of(self, self.z(s))


@dataclass(frozen=True)
class ComplexValue:
    re: object
    im: object
    bits: int

    @classmethod
    def of(cls, ctx, z):
        mp = ctx.mp
        z = +mp.mpc(mp.convert(z))
        if not (mp.isfinite(z.real) and mp.isfinite(z.imag)):
            raise DomainError("non-finite value %s" % mp.nstr(z, 10))
        return cls(z.real, z.imag, ctx.mantissa_bits)

    @property
    def z(self):
        return working_context(self.bits).mpc(self.re, self.im)

    def conjugate(self):
        return ComplexValue(self.re, -self.im, self.bits)

    def __abs__(self):
        return abs(self.z)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        mp = working_context(self.bits)
        sign = "-" if self.im < 0 else "+"
        return "%s%s%si" % (mp.nstr(self.re, 20), sign, mp.nstr(abs(self.im), 20))


# Stirling series helpers. Arguments are shifted right until Re(z) reaches
# max(10, bits/8), where the series reaches the target before diverging.

def _shift_threshold(bits):
    return max(10, bits // 8)


def _is_nonpositive_integer(mp, z, tol):
    if abs(z.imag) > tol or z.real > tol:
        return False
    return abs(z.real - mp.nint(z.real)) <= tol


def _check_pole(ctx, z, name):
    if _is_nonpositive_integer(ctx.mp, z, ctx.newton_tol):
        raise PoleError("%s has a pole at %s" % (name, ctx.mp.nstr(z, 15)))


def _shift_count(mp, z):
    gap = _shift_threshold(mp.prec) - z.real
    return int(mp.ceil(gap)) if gap > 0 else 0


def _stirling_terms(mp, w, power_offset, coefficient):
    # sum_k coefficient(k) * B_2k / w^(2k - 1 + power_offset), stopped at the
    # working epsilon; raises when the asymptotic series turns before that
    eps = mp.ldexp(1, -(mp.prec + 4))
    w2 = w * w
    wpow = w ** (1 + power_offset)
    total = mp.mpc(0)
    last = None
    for k in range(1, 4 * mp.prec):
        term = coefficient(k) * mp.bernoulli(2 * k) / wpow
        size = abs(term)
        if size < eps * max(1, abs(total)):
            return total
        if last is not None and size > last:
            raise PrecisionError("Stirling series diverged at |z| = %s" % mp.nstr(abs(w), 8))
        total += term
        last = size
        wpow *= w2
    raise PrecisionError("Stirling series did not converge at |z| = %s" % mp.nstr(abs(w), 8))


def _loggamma_z(mp, z):
    n = _shift_count(mp, z)
    w = z + n
    series = _stirling_terms(mp, w, 0, lambda k: mp.mpf(1) / (2 * k * (2 * k - 1)))
    value = (w - 0.5) * mp.log(w) - w + mp.log(2 * mp.pi) / 2 + series
    for j in range(n):
        value -= mp.log(z + j)
    return value


def _gamma_z(mp, z):
    n = _shift_count(mp, z)
    w = z + n
    series = _stirling_terms(mp, w, 0, lambda k: mp.mpf(1) / (2 * k * (2 * k - 1)))
    value = mp.exp((w - 0.5) * mp.log(w) - w + mp.log(2 * mp.pi) / 2 + series)
    product = mp.mpc(1)
    for j in range(n):
        product *= z + j
    return value / product


def _digamma_z(mp, z):
    n = _shift_count(mp, z)
    w = z + n
    series = _stirling_terms(mp, w, 1, lambda k: mp.mpf(1) / (2 * k))
    value = mp.log(w) - 1 / (2 * w) - series
    for j in range(n):
        value -= 1 / (z + j)
    return value


def _trigamma_z(mp, z):
    n = _shift_count(mp, z)
    w = z + n
    series = _stirling_terms(mp, w, 2, lambda k: 1)
    value = 1 / w + 1 / (2 * w * w) + series
    for j in range(n):
        value += 1 / ((z + j) * (z + j))
    return value


def _run(ctx, name, kernel, s, check_pole=True):
    z = ctx.z(s)
    if check_pole:
        _check_pole(ctx, z, name)
    mp = ctx.extended(ctx.guard_bits)
    result = kernel(mp, mp.convert(z))
    return ComplexValue.of(ctx, result)


def gamma(ctx, s):
    return _run(ctx, "gamma", _gamma_z, s)


def loggamma(ctx, s):
    return _run(ctx, "loggamma", _loggamma_z, s)


def digamma(ctx, s):
    return _run(ctx, "digamma", _digamma_z, s)


def trigamma(ctx, s):
    return _run(ctx, "trigamma", _trigamma_z, s)


def log_principal(ctx, s):
    z = ctx.z(s)
    if abs(z) < ctx.newton_tol:
        raise ZeroArgument("log of %s" % ctx.mp.nstr(z, 15))
    return ComplexValue.of(ctx, ctx.mp.log(z))


# Raw-mpc entry points for the other kernels, which keep their inner loops
# in mpmath numbers and only wrap results at the API boundary.

def gamma_z(ctx, z):
    _check_pole(ctx, z, "gamma")
    mp = ctx.extended(ctx.guard_bits)
    return +ctx.mp.convert(_gamma_z(mp, mp.convert(z)))


def digamma_z(ctx, z):
    _check_pole(ctx, z, "digamma")
    mp = ctx.extended(ctx.guard_bits)
    return +ctx.mp.convert(_digamma_z(mp, mp.convert(z)))


def trigamma_z(ctx, z):
    _check_pole(ctx, z, "trigamma")
    mp = ctx.extended(ctx.guard_bits)
    return +ctx.mp.convert(_trigamma_z(mp, mp.convert(z)))


def loggamma_z(ctx, z):
    _check_pole(ctx, z, "loggamma")
    mp = ctx.extended(ctx.guard_bits)
    return +ctx.mp.convert(_loggamma_z(mp, mp.convert(z)))
