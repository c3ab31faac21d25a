from zetacensus.tasks import lemma_audit, utils
from zetacensus.tasks.utils import ConfigError


def run(config):
    ctx = config.context()
    try:
        step = float(config.options.get("step", 0.5))
    except (TypeError, ValueError):
        raise ConfigError("--step must be a number, got %r" % (config.options.get("step"),))

    condition_id = config.options["condition"]
    region = config.rect or lemma_audit.default_region(condition_id)
    report = lemma_audit.audit(ctx, condition_id, region, step)
    return utils.write_rows([report.to_row()], lemma_audit.REPORT_COLUMNS, config.output_options())
