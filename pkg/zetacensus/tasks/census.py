import logging

from zetacensus.tasks import asymptotics, utils


def run(config):
    ctx = config.context()
    rows = asymptotics.build_census(ctx, config.heights(), config.window)
    flagged = [row for row in rows if row.flags]
    if flagged:
        logging.warning("[census] %d of %d rows flagged" % (len(flagged), len(rows)))

    columns = asymptotics.COLUMNS
    if config.window is not None:
        columns = columns + asymptotics.WINDOW_COLUMNS
    return utils.write_rows([row.to_row() for row in rows], columns, config.output_options())
