import logging

from zetacensus.tasks import asymptotics, utils, zero_census
from zetacensus.tasks.utils import ConfigError


COLUMNS = ["k", "T", "count", "main", "residual", "perturbation"]


def count_row(ctx, k, T):
    count = zero_census.census_count(ctx, k, T)
    if k == 0:
        # N(T) against theta(T)/pi + 1
        main = asymptotics.rvm_main_term(ctx, count.height)
    else:
        main = asymptotics.main_term_Nk(T, ctx)
    logging.info("[count k=%d T=%s] %d zeros" % (k, T, count.count))
    return {
        'k': k,
        'T': ctx.mp.mpf(T),
        'count': count.count,
        'main': main,
        'residual': count.count - main,
        'perturbation': count.perturbation,
    }


def run(config):
    ctx = config.context()
    k = 2 if config.k is None else config.k
    if k not in (0, 2):
        raise ConfigError("--k must be 0 or 2, got %s" % k)
    rows = [count_row(ctx, k, T) for T in config.heights()]
    return utils.write_rows(rows, COLUMNS, config.output_options())
