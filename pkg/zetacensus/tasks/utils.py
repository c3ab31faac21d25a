import os
import os.path
import errno
import sys
import traceback
import csv
import io
import json
import logging

import mpmath
import yaml
from joblib import Parallel, delayed


# read in an opt-in config file for precision, census and audit settings
# returns None if it's not there, and this should always be handled gracefully
path = os.environ.get("ZC_CONFIG", "config.yml")
if os.path.exists(path):
    with open(path) as f:
        config = yaml.safe_load(f)
else:
    config = None


def setting(section, key, default=None):
    if config:
        values = config.get(section, None)
        if values and key in values:
            return values[key]
    return default


# Errors. Domain errors map to exit code 2 on the command line,
# numerical failures to exit code 3.

class ZetaCensusError(Exception):
    pass


class ConfigError(ZetaCensusError):
    pass


class DomainError(ZetaCensusError, ValueError):
    pass


class PoleError(DomainError):
    pass


class ZeroArgument(DomainError):
    pass


class DenominatorZero(DomainError):
    pass


class NumericalError(ZetaCensusError, ArithmeticError):
    pass


class PrecisionError(NumericalError):
    pass


class BoundaryZero(NumericalError):
    pass


class NonConvergence(NumericalError):
    pass


class NewtonStall(NumericalError):
    pass


class GridNodeError(ZetaCensusError):

    def __init__(self, sigma, t, error):
        super(GridNodeError, self).__init__("node (%s, %s): %s: %s" % (sigma, t, type(error).__name__, error))
        self.sigma = sigma
        self.t = t
        self.error = error


def exit_code_for(exception):
    if isinstance(exception, GridNodeError):
        exception = exception.error
    if isinstance(exception, ConfigError):
        return 1
    if isinstance(exception, DomainError):
        return 2
    if isinstance(exception, NumericalError):
        return 3
    return 1


# Run `func` over `items` on the active joblib pool. The CLI sets the pool
# size with --threads; results always come back in input order.

def parallel_map(func, items, *extra_args):
    items = list(items)
    if len(items) < 2:
        return [func(item, *extra_args) for item in items]
    return Parallel(prefer="threads")(delayed(func)(item, *extra_args) for item in items)


# Parse the comma separated command line values.

def parse_floats(value, count=None):
    try:
        values = [float(v) for v in str(value).split(",") if v.strip() != ""]
    except ValueError:
        raise ConfigError("Not a comma separated list of numbers: %s" % value)
    if count is not None and len(values) != count:
        raise ConfigError("Expected %d comma separated numbers, got: %s" % (count, value))
    return values


def parse_complex(value):
    try:
        return complex(str(value).replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ConfigError("Not a complex number: %s" % value)


# Serialization. Reals are written as the shortest decimal at working
# precision, cut to 25 significant digits; integers and strings pass through.

def format_number(x, digits=25):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return x
    return mpmath.nstr(x, digits, min_fixed=-6, max_fixed=digits)


def format_row(row):
    return dict((key, format_number(value)) for key, value in row.items())


def rows_to_csv(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        row = format_row(row)
        writer.writerow(["" if row.get(c) is None else row.get(c) for c in columns])
    return buf.getvalue()


def rows_to_json(rows, columns):
    return json.dumps(
        [dict((c, format_row(row).get(c)) for c in columns) for row in rows],
        sort_keys=True,
        indent=2
    ) + "\n"


def write(content, destination):
    mkdir_p(os.path.dirname(destination))
    with open(destination, 'wb') as f:
        f.write(content.encode('utf-8'))


def write_rows(rows, columns, options):
    if options.get("format", "csv") == "json":
        content = rows_to_json(rows, columns)
    else:
        content = rows_to_csv(rows, columns)

    destination = options.get("out", None)
    if destination:
        if not os.path.isabs(destination) and os.path.dirname(destination) == "":
            destination = os.path.join(data_dir(), destination)
        write(content, destination)
        logging.info("Wrote %d rows to %s" % (len(rows), destination))
    else:
        sys.stdout.write(content)
    return content


# mkdir -p in python, from:
# http://stackoverflow.com/questions/600268/mkdir-p-functionality-in-python


def mkdir_p(path):
    if not path:
        return
    try:
        os.makedirs(path)
    except OSError as exc:  # Python >2.5
        if exc.errno == errno.EEXIST:
            pass
        else:
            raise

# uses config values if present


def data_dir():
    data = setting("output", "data", None)
    if not data:
        data = "data"
    return data


def admin(body):
    try:
        if isinstance(body, Exception):
            body = format_exception(body)
        logging.error(body)
    except Exception as exception:
        print("Exception logging message to admin, halting as to avoid loop")
        print(format_exception(exception))


def format_exception(exception):
    exc_type, exc_value, exc_traceback = sys.exc_info()
    if exc_value is None:
        return "%s: %s" % (type(exception).__name__, exception)
    return "\n".join(traceback.format_exception(exc_type, exc_value, exc_traceback))
