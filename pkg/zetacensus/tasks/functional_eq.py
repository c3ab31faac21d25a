"""The functional-equation factor F(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s)
with zeta(s) = F(s) zeta(1-s), its logarithmic derivatives, the normalised
second derivative G2(s) = 2^s zeta''(s) / (log 2)^2 and the remainder term
left over when zeta''/zeta is divided by F''/F.
"""

from dataclasses import dataclass

from zetacensus.tasks import mpc_eval, zeta_deriv
from zetacensus.tasks.mpc_eval import ComplexValue
from zetacensus.tasks.utils import DenominatorZero, DomainError, PoleError
from zetacensus.tasks.zeta_deriv import RatioKind


# the F''/F family is only used (and only tested) away from the real axis,
# where F has neither zeros nor poles
MIN_HEIGHT = 2


@dataclass(frozen=True)
class FuncEqTerm:
    f: ComplexValue
    flogd: ComplexValue
    f2_over_f: ComplexValue
    f2_over_f1: ComplexValue


def _positive_integer(mp, z, tol):
    if abs(z.imag) > tol or z.real < 1 - tol:
        return None
    n = int(mp.nint(z.real))
    if abs(z.real - n) <= tol:
        return n
    return None


def _check_height(ctx, z, name):
    if abs(z.imag) < MIN_HEIGHT:
        raise DomainError("%s needs |Im s| >= %d, got s = %s" % (name, MIN_HEIGHT, ctx.mp.nstr(z, 15)))


def f_z(ctx, z):
    mp = ctx.extended(ctx.guard_bits)
    s = mp.convert(z)
    n = _positive_integer(mp, s, ctx.newton_tol)
    if n is not None:
        if n % 2:
            raise PoleError("F has a pole at s = %d" % n)
        # sin(pi s/2) cancels the pole of Gamma(1-s) at even s
        value = mp.power(2, n) * mp.power(mp.pi, n - 1) * (mp.pi / 2) * (-1) ** (n // 2) / mp.factorial(n - 1)
        return +ctx.mp.convert(mp.mpc(value))
    value = mp.power(2, s) * mp.power(mp.pi, s - 1) * mp.sinpi(s / 2) * mpc_eval.gamma_z(ctx, 1 - z)
    return +ctx.mp.convert(value)


def flogd_z(ctx, z):
    mp = ctx.mp
    sin = mp.sinpi(z / 2)
    if abs(sin) < ctx.newton_tol:
        raise PoleError("cot(pi s/2) has a pole at s = %s" % mp.nstr(z, 15))
    cot = mp.cospi(z / 2) / sin
    return mp.log(2 * mp.pi) + mp.pi / 2 * cot - mpc_eval.digamma_z(ctx, 1 - z)


def flogd_prime_z(ctx, z):
    mp = ctx.mp
    sin = mp.sinpi(z / 2)
    if abs(sin) < ctx.newton_tol:
        raise PoleError("csc(pi s/2) has a pole at s = %s" % mp.nstr(z, 15))
    return -(mp.pi ** 2 / 4) / (sin * sin) + mpc_eval.trigamma_z(ctx, 1 - z)


def f2_over_f_z(ctx, z):
    _check_height(ctx, z, "F''/F")
    flogd = flogd_z(ctx, z)
    return flogd_prime_z(ctx, z) + flogd * flogd


def f2_over_f1_z(ctx, z):
    _check_height(ctx, z, "F''/F'")
    flogd = flogd_z(ctx, z)
    if abs(flogd) < ctx.newton_tol:
        raise DenominatorZero("F'/F vanishes at s = %s" % ctx.mp.nstr(z, 15))
    return (flogd_prime_z(ctx, z) + flogd * flogd) / flogd


def F(ctx, s):
    return ComplexValue.of(ctx, f_z(ctx, ctx.z(s)))


def F_logderiv(ctx, s):
    return ComplexValue.of(ctx, flogd_z(ctx, ctx.z(s)))


def F2_over_F(ctx, s):
    return ComplexValue.of(ctx, f2_over_f_z(ctx, ctx.z(s)))


def F2_over_F1(ctx, s):
    return ComplexValue.of(ctx, f2_over_f1_z(ctx, ctx.z(s)))


def func_eq_term(ctx, s):
    z = ctx.z(s)
    _check_height(ctx, z, "functional equation term")
    flogd = flogd_z(ctx, z)
    f2_over_f = flogd_prime_z(ctx, z) + flogd * flogd
    if abs(flogd) < ctx.newton_tol:
        raise DenominatorZero("F'/F vanishes at s = %s" % ctx.mp.nstr(z, 15))
    return FuncEqTerm(
        f=ComplexValue.of(ctx, f_z(ctx, z)),
        flogd=ComplexValue.of(ctx, flogd),
        f2_over_f=ComplexValue.of(ctx, f2_over_f),
        f2_over_f1=ComplexValue.of(ctx, f2_over_f / flogd),
    )


def g2_z(ctx, z, zeta2=None):
    mp = ctx.mp
    if zeta2 is None:
        zeta2 = zeta_deriv.jet_z(ctx, z, 2)[2]
    return mp.power(2, z) / mp.ln2 ** 2 * zeta2


def G2(ctx, s):
    return ComplexValue.of(ctx, g2_z(ctx, ctx.z(s)))


def remainder_z(ctx, z):
    _check_height(ctx, z, "remainder term")
    flogd = flogd_z(ctx, z)
    f2_over_f = flogd_prime_z(ctx, z) + flogd * flogd
    if abs(flogd) < ctx.newton_tol:
        raise DenominatorZero("F'/F vanishes at s = %s" % ctx.mp.nstr(z, 15))
    if abs(f2_over_f) < ctx.newton_tol:
        raise DenominatorZero("F''/F vanishes at s = %s" % ctx.mp.nstr(z, 15))
    f2_over_f1 = f2_over_f / flogd
    w = 1 - z
    zp_over_z = zeta_deriv.ratio_z(ctx, RatioKind.ZP_OVER_Z, w)
    zpp_over_z = zeta_deriv.ratio_z(ctx, RatioKind.ZPP_OVER_Z, w)
    return 2 * zp_over_z / f2_over_f1 - zpp_over_z / f2_over_f


def remainder_term(ctx, s):
    return ComplexValue.of(ctx, remainder_z(ctx, ctx.z(s)))


def remainder_residual(ctx, s):
    """|1 - remainder_term(s) - (zeta''/zeta)(s) / (F''/F)(s)|"""
    z = ctx.z(s)
    remainder = remainder_z(ctx, z)
    zpp_over_z = zeta_deriv.ratio_z(ctx, RatioKind.ZPP_OVER_Z, z)
    return abs(1 - remainder - zpp_over_z / f2_over_f_z(ctx, z))
