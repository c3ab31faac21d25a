from zetacensus.tasks import lemma_audit, utils


COLUMNS = ["T", "sigma", "arg_G2", "arg_zeta", "bound_G2", "bound_zeta"]

DEFAULT_SIGMAS = "0.5,0.5625,0.625,0.6875,0.75"


def run(config):
    ctx = config.context()
    sigmas = utils.parse_floats(config.options.get("sigmas", DEFAULT_SIGMAS))
    rows = []
    for T in config.heights():
        for sigma, arg_g2, arg_zeta, bound_g2, bound_zeta in lemma_audit.measure_arg_profile(ctx, T, sigmas):
            rows.append({
                'T': ctx.mp.mpf(T),
                'sigma': sigma,
                'arg_G2': arg_g2,
                'arg_zeta': arg_zeta,
                'bound_G2': bound_g2,
                'bound_zeta': bound_zeta,
            })
    return utils.write_rows(rows, COLUMNS, config.output_options())
