import logging

from zetacensus.tasks import asymptotics, functional_eq, mpc_eval, utils, zeta_deriv
from zetacensus.tasks.utils import ConfigError
from zetacensus.tasks.zeta_deriv import RatioKind


COLUMNS = ["fn", "s", "re", "im"]


def _zeta_order(k):
    return lambda ctx, s: zeta_deriv.zeta_deriv(ctx, k, s)


def _ratio(kind):
    return lambda ctx, s: zeta_deriv.log_deriv_ratio(ctx, kind, s)


# complex-valued functions of s
FUNCTIONS = {
    "zeta": _zeta_order(0),
    "zeta1": _zeta_order(1),
    "zeta2": _zeta_order(2),
    "gamma": mpc_eval.gamma,
    "loggamma": mpc_eval.loggamma,
    "digamma": mpc_eval.digamma,
    "trigamma": mpc_eval.trigamma,
    "log": mpc_eval.log_principal,
    "F": functional_eq.F,
    "F_logderiv": functional_eq.F_logderiv,
    "F2_over_F": functional_eq.F2_over_F,
    "F2_over_F1": functional_eq.F2_over_F1,
    "G2": functional_eq.G2,
    "remainder": functional_eq.remainder_term,
    "zp_over_z": _ratio(RatioKind.ZP_OVER_Z),
    "zpp_over_zp": _ratio(RatioKind.ZPP_OVER_ZP),
    "zpp_over_z": _ratio(RatioKind.ZPP_OVER_Z),
}

# real-valued functions of the real part of s
REAL_FUNCTIONS = {
    "Li": asymptotics.li_from2,
    "theta": asymptotics.riemann_siegel_theta,
}


def evaluate(ctx, name, s, k=None):
    if name == "zeta_k":
        if k is None:
            raise ConfigError("--fn zeta_k needs --k")
        return zeta_deriv.zeta_deriv(ctx, k, s)
    if name in FUNCTIONS:
        return FUNCTIONS[name](ctx, s)
    if name in REAL_FUNCTIONS:
        value = REAL_FUNCTIONS[name](ctx, ctx.z(s).real)
        return mpc_eval.ComplexValue.of(ctx, value)
    names = sorted(list(FUNCTIONS) + list(REAL_FUNCTIONS) + ["zeta_k"])
    raise ConfigError("Unknown function %r (expected one of %s)" % (name, ", ".join(names)))


def run(config):
    ctx = config.context()
    name = config.options["fn"]
    s = ctx.value(config.options["s"])
    logging.info("[eval] %s(%s) at %d bits" % (name, s, ctx.mantissa_bits))

    value = evaluate(ctx, name, s, config.k)
    row = {'fn': name, 's': str(s), 're': value.re, 'im': value.im}
    return utils.write_rows([row], COLUMNS, config.output_options())
