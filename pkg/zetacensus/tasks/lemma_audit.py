"""Grid audits of the inequalities the zero-distribution argument rests on,
at heights and depths a desk computation can reach.

Every audit evaluates a margin (bound minus measured quantity, so positive
means the inequality holds) at each node of a closed grid and reports the
smallest one.
"""

import logging
import math
from dataclasses import dataclass

import numpy

from zetacensus.tasks import functional_eq, utils, zero_census, zeta_deriv
from zetacensus.tasks.mpc_eval import ComplexValue
from zetacensus.tasks.utils import DomainError, GridNodeError, ZetaCensusError
from zetacensus.tasks.zero_census import Rect
from zetacensus.tasks.zeta_deriv import RatioKind


CONDITIONS = ("C1", "C2", "C3", "C4", "C5", "L23", "L25", "L26")

NOTES = {
    "C2": "audited in the intermediate form 32 * 2^sigma / log(1 - sigma); 2^sigma itself needs log(1 - sigma) >= 32",
    "C5": "no zero found at resolution h",
    "L23": "measured / shape against the configured threshold",
    "L25": "measured / shape against the configured threshold",
    "L26": "measured / shape against the configured threshold",
}

# upper end of the sigma range for the zeta'' growth bound
GROWTH_SIGMA_MAX = 6


@dataclass(frozen=True)
class AuditReport:
    condition_id: str
    region: Rect
    grid_step: float
    worst_point: ComplexValue
    worst_margin: object
    passed: bool
    nodes: int = 0
    note: str = ""

    def to_row(self):
        return {
            'condition': self.condition_id,
            'sigma_min': self.region.sigma_min,
            'sigma_max': self.region.sigma_max,
            't_min': self.region.t_min,
            't_max': self.region.t_max,
            'step': self.grid_step,
            'worst_sigma': self.worst_point.re,
            'worst_t': self.worst_point.im,
            'worst_margin': self.worst_margin,
            'pass': self.passed,
            'nodes': self.nodes,
            'note': self.note,
        }


REPORT_COLUMNS = ["condition", "sigma_min", "sigma_max", "t_min", "t_max", "step",
                  "worst_sigma", "worst_t", "worst_margin", "pass", "nodes", "note"]


def grid_axis(low, high, step):
    """Closed grid low, low + step, ..., high. Halving the step gives a
    superset of the nodes."""
    low, high = float(low), float(high)
    if high == low:
        return numpy.array([low])
    count = int(math.floor((high - low) / step + 1e-9)) + 1
    axis = low + step * numpy.arange(count)
    if axis[-1] < high - 1e-12:
        axis = numpy.append(axis, high)
    return axis


def _threshold(condition_id):
    defaults = {"L23": 10, "L25": 10, "L26": 4}
    thresholds = utils.setting("audit", "thresholds", None) or {}
    return thresholds.get(condition_id, defaults[condition_id])


def epsilon_zero(mp, t):
    # any value below 3 / (8 log T) will do
    return 1 / (4 * mp.log(t))


def check_region(condition_id, region):
    region.validate(degenerate=True)
    a = utils.setting("audit", "a", 12)
    s_min, s_max, t_min, t_max = (float(x) for x in (region.sigma_min, region.sigma_max, region.t_min, region.t_max))

    def need(ok, message):
        if not ok:
            raise DomainError("%s: %s, got %s" % (condition_id, message, region))

    if condition_id == "C1":
        need(s_min >= a, "needs sigma >= %s" % a)
    elif condition_id == "C2":
        need(s_max <= -10 and t_min >= 2, "needs sigma <= -10 and t >= 2")
    elif condition_id in ("C3", "C4"):
        need(s_max <= 0.5 and t_min >= 29, "needs sigma <= 1/2 and t >= 29")
    elif condition_id == "C5":
        need(t_min == t_max, "audits a single horizontal line t = t0")
    elif condition_id == "L23":
        need(t_min >= 30, "needs T >= 30")
        need(s_min >= 0.5 + 3 / (8 * math.log(t_min)) and s_max <= a, "needs 1/2 + 3/(8 log T) <= sigma <= %s" % a)
    elif condition_id == "L25":
        need(t_min >= 30 and 0.5 <= s_min and s_max <= 0.75, "needs T >= 30 and 1/2 <= sigma <= 3/4")
    elif condition_id == "L26":
        need(t_min >= 30, "needs T >= 30")
        need(s_min >= 0.5 - 1 / math.log(math.log(t_min)) and s_max <= GROWTH_SIGMA_MAX,
             "needs 1/2 - 1/loglog T <= sigma <= %s" % GROWTH_SIGMA_MAX)
    else:
        raise DomainError("unknown condition %r (expected one of %s)" % (condition_id, ", ".join(CONDITIONS)))


def default_region(condition_id):
    """The audit region built from the desk stand-ins for sigma0, t0 and a."""
    a = utils.setting("audit", "a", 12)
    sigma0 = utils.setting("audit", "sigma0_desk", -30)
    t0 = utils.setting("audit", "t0_desk", 30)
    top = max(200, t0 + 10)
    regions = {
        "C1": (a, a + 18, 0, 100),
        "C2": (2 * sigma0, -10, 2, 50),
        "C3": (sigma0, 0.49, t0 - 1, top),
        "C4": (sigma0, 0.49, t0 - 1, top),
        "C5": (sigma0, a, t0, t0),
        "L23": (0.5 + 3 / (8 * math.log(t0)) + 0.01, 3, t0, top),
        "L25": (0.5, 0.75, t0, top),
        "L26": (0.5, 2, t0, top),
    }
    if condition_id not in regions:
        raise DomainError("unknown condition %r (expected one of %s)" % (condition_id, ", ".join(CONDITIONS)))
    return Rect(*regions[condition_id])


# Node margins. Each returns bound - measured at s = sigma + it.

def _margin_c1(ctx, z, step):
    mp = ctx.mp
    bound = (mp.mpf(2) / 3) ** (z.real / 2) / 2
    return bound - abs(functional_eq.g2_z(ctx, z) - 1)


def _margin_c2(ctx, z, step):
    mp = ctx.mp
    bound = 32 * mp.power(2, z.real) / mp.log(1 - z.real)
    return bound - abs(functional_eq.remainder_z(ctx, z))


def _margin_c3(ctx, z, step):
    mp = ctx.mp
    value = functional_eq.f2_over_f_z(ctx, z)
    margin = abs(value) - 1
    if z.imag >= utils.setting("audit", "arg_window_tmin", 100):
        margin = min(margin, mp.pi / 6 - abs(mp.arg(value)))
    return margin


def _margin_c4(ctx, z, step):
    zp_over_z = zeta_deriv.ratio_z(ctx, RatioKind.ZP_OVER_Z, z)
    zpp_over_zp = zeta_deriv.ratio_z(ctx, RatioKind.ZPP_OVER_ZP, z)
    zpp_over_z = zeta_deriv.ratio_z(ctx, RatioKind.ZPP_OVER_Z, z)
    return min(-zp_over_z.real, -zpp_over_zp.real, abs(zpp_over_z))


def _margin_c5(ctx, z, step):
    jet = zeta_deriv.jet_z(ctx, z, 2)
    third = zero_census.derivative_z(ctx, "zeta2", z)
    return min(abs(jet[0]) - abs(jet[1]) * step / 2, abs(jet[2]) - abs(third) * step / 2)


def _margin_l26(ctx, z, step):
    mp = ctx.mp
    log_t = mp.log(z.imag)
    shape = log_t ** (2 * (1 - z.real)) / mp.log(log_t) + log_t ** mp.mpf(0.1)
    growth = max(mp.log(abs(zeta_deriv.jet_z(ctx, z, 2)[2])), 0)
    return _threshold("L26") - growth / shape


NODE_MARGINS = {
    "C1": _margin_c1,
    "C2": _margin_c2,
    "C3": _margin_c3,
    "C4": _margin_c4,
    "C5": _margin_c5,
    "L26": _margin_l26,
}


def _arg_row(ctx, condition_id, t, sigmas):
    # L23 and L25 need the continuous argument: one trace per height
    mp = ctx.mp
    log_t = mp.log(t)
    if condition_id == "L23":
        trace = zero_census.arg_continuous(ctx, "G2_over_zeta", t, min(sigmas), sigmas)
        eps0 = epsilon_zero(mp, t)
        shapes = [mp.log(log_t / eps0) / (s - mp.mpf(0.5) - eps0) for s in sigmas]
    else:
        trace = zero_census.arg_continuous(ctx, "G2", t, min(sigmas), sigmas)
        shapes = [log_t ** (2 * (1 - s)) / mp.sqrt(mp.log(log_t)) for s in sigmas]
    threshold = _threshold(condition_id)
    return [threshold - abs(trace.at(s)) / shape for s, shape in zip(sigmas, shapes)]


def _audit_row(t, ctx, condition_id, sigmas, step):
    mp = ctx.mp
    t = mp.mpf(t)
    sigmas = [mp.mpf(s) for s in sigmas]
    try:
        if condition_id in ("L23", "L25"):
            margins = _arg_row(ctx, condition_id, t, sigmas)
        else:
            node = NODE_MARGINS[condition_id]
            margins = []
            for sigma in sigmas:
                try:
                    margins.append(node(ctx, mp.mpc(sigma, t), step))
                except ZetaCensusError as error:
                    raise GridNodeError(sigma, t, error)
    except GridNodeError:
        raise
    except ZetaCensusError as error:
        raise GridNodeError(sigmas[0], t, error)
    return [(margin, sigma, t) for margin, sigma in zip(margins, sigmas)]


def audit(ctx, condition_id, region, grid_step):
    if condition_id not in CONDITIONS:
        raise DomainError("unknown condition %r (expected one of %s)" % (condition_id, ", ".join(CONDITIONS)))
    grid_step = float(grid_step)
    if not grid_step > 0:
        raise DomainError("grid step must be positive, got %s" % grid_step)
    check_region(condition_id, region)

    sigmas = [float(s) for s in grid_axis(region.sigma_min, region.sigma_max, grid_step)]
    heights = [float(t) for t in grid_axis(region.t_min, region.t_max, grid_step)]
    logging.info("[audit %s] %d x %d nodes on %s" % (condition_id, len(sigmas), len(heights), region))

    rows = utils.parallel_map(_audit_row, heights, ctx, condition_id, sigmas, grid_step)
    results = [node for row in rows for node in row]
    margin, sigma, t = min(results, key=lambda node: (node[0], node[1], node[2]))

    report = AuditReport(
        condition_id=condition_id,
        region=region,
        grid_step=grid_step,
        worst_point=ComplexValue.of(ctx, ctx.mp.mpc(sigma, t)),
        worst_margin=margin,
        passed=bool(margin > 0),
        nodes=len(results),
        note=NOTES.get(condition_id, ""),
    )
    if not report.passed:
        logging.warning("[audit %s] fails at %s with margin %s" % (condition_id, report.worst_point, ctx.mp.nstr(margin, 10)))
    return report


def measure_arg_profile(ctx, T, sigma_list):
    """(sigma, arg G2, arg zeta, G2 bound shape, zeta bound shape) rows at
    height T, from one continuous trace per function."""
    mp = ctx.mp
    T = mp.mpf(T)
    if T < 30:
        raise DomainError("argument profile needs T >= 30, got %s" % T)
    sigmas = [mp.mpf(s) for s in sigma_list]
    if not sigmas:
        raise DomainError("empty sigma list")
    if min(sigmas) < mp.mpf(0.5):
        raise DomainError("argument profile needs sigma >= 1/2")

    stop = min(sigmas)
    g2 = zero_census.arg_continuous(ctx, "G2", T, stop, sigmas)
    zeta = zero_census.arg_continuous(ctx, "zeta", T, stop, sigmas)
    log_t = mp.log(T)
    loglog_t = mp.log(log_t)
    rows = []
    for sigma in sigmas:
        growth = log_t ** (2 * (1 - sigma))
        rows.append((sigma, g2.at(sigma), zeta.at(sigma), growth / mp.sqrt(loglog_t), growth / loglog_t))
    return rows
