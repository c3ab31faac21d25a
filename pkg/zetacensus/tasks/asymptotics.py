"""Closed-form main terms for the zero counts and the distribution sum of
zeta'' zeros, and the census that sets them against computed values.
"""

import logging
import math
from dataclasses import dataclass

import mpmath
import numpy

from zetacensus.tasks import mpc_eval, utils, zero_census
from zetacensus.tasks.utils import DomainError, NonConvergence


def _mp(ctx):
    return ctx.mp if ctx is not None else mpmath.mp


# Li(x) = int_2^x dt / log t

def _li_panel_sum(mp, x, panels):
    nodes = [2 + (x - 2) * mp.mpf(j) / panels for j in range(panels + 1)]
    return mp.quad(lambda t: 1 / mp.log(t), nodes, method="gauss-legendre")


def li_from2(ctx, x):
    mp = ctx.extended(ctx.guard_bits)
    x = mp.convert(ctx.real(x))
    if x < 2:
        raise DomainError("Li(x) is defined here for x >= 2, got %s" % mp.nstr(x, 15))
    if x == 2:
        return ctx.mp.mpf(0)

    tol = ctx.tolerance
    panels = 1
    previous = _li_panel_sum(mp, x, panels)
    for _ in range(20):
        panels *= 2
        current = _li_panel_sum(mp, x, panels)
        if abs(current - previous) <= tol * abs(current):
            return +ctx.mp.convert(current)
        previous = current
    raise NonConvergence("Li(%s) did not settle after %d panels" % (mp.nstr(x, 15), panels))


# Main terms

def main_term_Nk(T, ctx=None):
    """(T/2pi) log(T/4pi) - T/2pi, shared by every k >= 1."""
    mp = _mp(ctx)
    T = mp.mpf(T)
    if T <= 0:
        raise DomainError("main term needs T > 0, got %s" % T)
    return T / (2 * mp.pi) * mp.log(T / (4 * mp.pi)) - T / (2 * mp.pi)


def _check_distribution_height(mp, T):
    if T <= 2 * mp.pi:
        raise DomainError("needs T > 2 pi, got %s" % mp.nstr(T, 15))
    if T / (2 * mp.pi) < 2:
        # Li starts at 2, so T/2pi < 2 has no value under this definition
        raise DomainError("Li(T/2pi) needs T >= 4 pi, got %s" % mp.nstr(T, 15))


def distribution_rhs(k, T, ctx=None):
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise DomainError("k must be a positive integer, got %r" % (k,))
    if ctx is None:
        ctx = mpc_eval.PrecisionContext()
    mp = ctx.mp
    T = mp.mpf(T)
    _check_distribution_height(mp, T)
    x = T / (2 * mp.pi)
    loglog2 = mp.log(mp.ln2)
    return (k * T / (2 * mp.pi) * mp.log(mp.log(x))
            + (mp.ln2 / 2 - k * loglog2) * T / (2 * mp.pi)
            - k * li_from2(ctx, x))


def window_rhs(T, U, ctx=None):
    mp = _mp(ctx)
    T, U = mp.mpf(T), mp.mpf(U)
    if not 0 < U < T:
        raise DomainError("window needs 0 < U < T, got T=%s U=%s" % (T, U))
    if T <= 2 * mp.pi:
        raise DomainError("window needs T > 2 pi, got %s" % T)
    return (2 * U / (2 * mp.pi) * mp.log(mp.log(T / (2 * mp.pi)))
            + (mp.ln2 / 2 - 2 * mp.log(mp.ln2)) * U / (2 * mp.pi))


def window_error_shapes(T, U, ctx=None):
    """The two error shapes of the window formula: U^2/(T log T), (loglog T)^2."""
    mp = _mp(ctx)
    T, U = mp.mpf(T), mp.mpf(U)
    return U * U / (T * mp.log(T)), mp.log(mp.log(T)) ** 2


def window_sum(zeros, T, U, ctx=None):
    mp = _mp(ctx)
    total = mp.mpf(0)
    for zero in zeros:
        if T < zero.gamma <= T + U:
            total += zero.multiplicity * (zero.beta - mp.mpf(0.5))
    return total


def riemann_siegel_theta(ctx, T):
    mp = ctx.mp
    T = mp.mpf(T)
    return mpc_eval.loggamma_z(ctx, mp.mpc(0.25, T / 2)).imag - T / 2 * mp.log(mp.pi)


def rvm_main_term(ctx, T):
    """theta(T)/pi + 1; N(T) differs from it by arg zeta(1/2 + iT)/pi."""
    return riemann_siegel_theta(ctx, T) / ctx.mp.pi + 1


def _legendre(mp, n, x):
    # P_n(x) and P_n'(x) by the three-term recurrence
    previous, current = mp.mpf(1), x
    for k in range(2, n + 1):
        previous, current = current, ((2 * k - 1) * x * current - (k - 1) * previous) / k
    return current, n * (x * current - previous) / (x * x - 1)


def gauss_legendre(mp, n, polish_steps=6):
    """Gauss-Legendre nodes and weights on [-1, 1] at the precision of mp:
    numpy's double-precision nodes polished by Newton's method on P_n."""
    guesses, _ = numpy.polynomial.legendre.leggauss(n)
    nodes, weights = [], []
    for guess in guesses:
        x = mp.mpf(float(guess))
        for _ in range(polish_steps):
            p, dp = _legendre(mp, n, x)
            x -= p / dp
        p, dp = _legendre(mp, n, x)
        nodes.append(x)
        weights.append(2 / ((1 - x * x) * dp * dp))
    return nodes, weights


def arg_integral(ctx, T, a=12, panel_nodes=8):
    """(1/2pi) int_{1/2}^a arg(G2/zeta)(sigma + iT) dsigma, the argument
    correction in the sum over zeta'' zeros, by composite Gauss-Legendre on
    unit panels over a single continuous argument trace."""
    mp = ctx.mp
    x, w = gauss_legendre(mp, panel_nodes)
    edges = [mp.mpf(0.5)] + [mp.mpf(j) for j in range(1, int(math.ceil(a)))] + [mp.mpf(a)]
    marks, weights = [], []
    for left, right in zip(edges[:-1], edges[1:]):
        if right <= left:
            continue
        half = (right - left) / 2
        for xi, wi in zip(x, w):
            marks.append(left + half * (1 + xi))
            weights.append(half * wi)
    trace = zero_census.arg_continuous(ctx, "G2_over_zeta", T, mp.mpf(0.5), marks)
    total = mp.mpf(0)
    for mark, weight in zip(marks, weights):
        total += weight * trace.at(mark)
    return total / (2 * mp.pi)


def bounded_ratio(values, factor=None):
    """Whether max |v| <= factor * median |v|; returns (ok, max, median)."""
    if factor is None:
        factor = utils.setting("harness", "ratio_factor", 4)
    values = numpy.abs(numpy.array([float(v) for v in values]))
    if len(values) == 0:
        raise DomainError("bounded ratio of an empty list")
    top = float(values.max())
    median = float(numpy.median(values))
    return top <= factor * median, top, median


# Census

COLUMNS = ["T", "N2", "N2_main", "N2_resid", "S2", "S2_rhs", "S2_resid", "arg_zeta_half", "arg_G2_half", "flags"]
WINDOW_COLUMNS = ["U", "W2", "W2_rhs", "W2_resid", "W2_err_short", "W2_err_loglog"]


@dataclass(frozen=True)
class CensusRow:
    T: object
    n2_count: int
    n2_main: object
    n2_residual: object
    s2_sum: object
    s2_rhs: object
    s2_residual: object
    arg_zeta_half: object
    arg_g2_half: object
    flags: tuple = ()
    height: object = None
    # N2 - main - (arg G2 + arg zeta)(1/2 + iT) / 2pi, bounded as T grows
    arg_discrepancy: object = None
    # (U, sum, rhs, U^2/(T log T), (loglog T)^2) for T < gamma'' <= T + U
    window: tuple = None

    def to_row(self):
        row = {
            'T': self.T,
            'N2': self.n2_count,
            'N2_main': self.n2_main,
            'N2_resid': self.n2_residual,
            'S2': self.s2_sum,
            'S2_rhs': self.s2_rhs,
            'S2_resid': self.s2_residual,
            'arg_zeta_half': self.arg_zeta_half,
            'arg_G2_half': self.arg_g2_half,
            'flags': ";".join(self.flags),
        }
        if self.window is not None:
            U, total, rhs, short, loglog = self.window
            row.update({
                'U': U,
                'W2': total,
                'W2_rhs': rhs,
                'W2_resid': total - rhs,
                'W2_err_short': short,
                'W2_err_loglog': loglog,
            })
        return row


def window_row(ctx, zeros, T, U):
    mp = ctx.mp
    T, U = mp.mpf(T), mp.mpf(U)
    rhs = window_rhs(T, U, ctx)
    short, loglog = window_error_shapes(T, U, ctx)
    return U, window_sum(zeros, T, U, ctx), rhs, short, loglog


def _census_row(T, ctx, zeros, U=None):
    mp = ctx.mp
    logging.info("[census T=%s] counting" % T)
    count = zero_census.census_count(ctx, 2, T)
    height = count.height
    located = zero_census.count_from_zeros(zeros, height)
    s2 = zero_census.s2_from_zeros(ctx, zeros, height)

    main = main_term_Nk(T, ctx)
    rhs = distribution_rhs(2, T, ctx)
    half = mp.mpf(0.5)
    arg_zeta = zero_census.arg_continuous(ctx, "zeta", height, half).final
    arg_g2 = zero_census.arg_continuous(ctx, "G2", height, half).final

    flags = []
    if count.perturbation:
        flags.append("perturbed")
    if located != count.count:
        logging.warning("[census T=%s] winding gives %d, located zeros %d" % (T, count.count, located))
        flags.append("count_mismatch")
    if any(zero.left_of_origin and zero.gamma <= height for zero in zeros):
        flags.append("left_pair")

    residual = count.count - main
    discrepancy = residual - (arg_g2 + arg_zeta) / (2 * mp.pi)
    if abs(discrepancy) > utils.setting("harness", "arg_slack", 3):
        flags.append("arg_relation")

    window = window_row(ctx, zeros, T, U) if U is not None else None
    return CensusRow(mp.mpf(T), count.count, main, residual, s2, rhs, s2 - rhs,
                     arg_zeta, arg_g2, tuple(flags), height, discrepancy, window)


def build_census(ctx, T_grid, U=None):
    """One CensusRow per height. With a window length U each row also
    compares the sum over T < gamma'' <= T + U with window_rhs."""
    grid = [float(T) for T in T_grid]
    if not grid:
        raise DomainError("empty census grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("census grid must be strictly ascending: %s" % grid)
    for T in grid:
        _check_distribution_height(ctx.mp, ctx.mp.mpf(T))
    top = grid[-1]
    if U is not None:
        U = float(U)
        if not 0 < U < grid[0]:
            raise DomainError("window needs 0 < U < T for every T, got U=%s" % U)
        top += U

    zeros = zero_census.census_zeros(ctx, 2, top)
    logging.info("[census] %d zeta'' zeros up to T = %s" % (len(zeros), top))
    return utils.parallel_map(_census_row, grid, ctx, zeros, U)
