import logging

from zetacensus.tasks import utils, zero_census
from zetacensus.tasks.utils import ConfigError


COLUMNS = ["target", "re", "im", "multiplicity", "residual"]


def target_for(config):
    target = config.options.get("target", None)
    if target is None:
        target = zero_census.census_target(config.k or 0)
    if target not in zero_census.TARGETS:
        raise ConfigError("--target must be one of %s, got %r" % (", ".join(zero_census.TARGETS), target))
    return target


def run(config):
    ctx = config.context()
    target = target_for(config)
    zeros = zero_census.locate_zeros(ctx, target, config.rect)
    logging.info("[zeros] %d zeros of %s in %s" % (len(zeros), target, config.rect))
    return utils.write_rows([zero.to_row() for zero in zeros], COLUMNS, config.output_options())
