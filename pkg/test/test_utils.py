import csv
import io
import json
import os
import tempfile
import unittest
from unittest import mock

from joblib import parallel_config

from zetacensus.tasks import utils
from zetacensus.tasks.mpc_eval import PrecisionContext
from zetacensus.tasks.utils import (BoundaryZero, ConfigError, DomainError, GridNodeError,
                                    NonConvergence, PoleError, PrecisionError)


class Parsing(unittest.TestCase):

    def test_floats(self):
        self.assertEqual(utils.parse_floats("1,2.5,-3"), [1.0, 2.5, -3.0])
        self.assertEqual(utils.parse_floats("-60,-10,2,50", 4), [-60.0, -10.0, 2.0, 50.0])

    def test_floats_wrong_count(self):
        self.assertRaises(ConfigError, utils.parse_floats, "1,2,3", 4)

    def test_floats_garbage(self):
        self.assertRaises(ConfigError, utils.parse_floats, "1,two")

    def test_complex(self):
        self.assertEqual(utils.parse_complex("2+0i"), 2 + 0j)
        self.assertEqual(utils.parse_complex("-1 + 50i"), -1 + 50j)
        self.assertEqual(utils.parse_complex("3"), 3 + 0j)
        self.assertRaises(ConfigError, utils.parse_complex, "2+i0x")


class ExitCodes(unittest.TestCase):

    def test_classes(self):
        self.assertEqual(utils.exit_code_for(ConfigError("x")), 1)
        self.assertEqual(utils.exit_code_for(DomainError("x")), 2)
        self.assertEqual(utils.exit_code_for(PoleError("x")), 2)
        self.assertEqual(utils.exit_code_for(BoundaryZero("x")), 3)
        self.assertEqual(utils.exit_code_for(PrecisionError("x")), 3)
        self.assertEqual(utils.exit_code_for(RuntimeError("x")), 1)

    def test_grid_node_keeps_the_inner_class(self):
        error = GridNodeError(-10, 2, NonConvergence("edge"))
        self.assertEqual(utils.exit_code_for(error), 3)
        self.assertIn("NonConvergence", str(error))
        self.assertEqual(error.sigma, -10)


class Output(unittest.TestCase):

    def setUp(self):
        mp = PrecisionContext().mp
        self.rows = [
            {'name': 'third', 'value': mp.mpf(1) / 3, 'count': 3, 'ok': True},
            {'name': 'big', 'value': mp.mpf(10) ** 40 / 7, 'count': -1, 'ok': False},
        ]
        self.columns = ["name", "value", "count", "ok"]

    def test_number_format(self):
        mp = PrecisionContext().mp
        self.assertEqual(utils.format_number(mp.mpf(1) / 3), "0.3333333333333333333333333")
        self.assertEqual(utils.format_number(7), 7)
        self.assertEqual(utils.format_number("zeta"), "zeta")
        self.assertIsNone(utils.format_number(None))

    def test_csv_and_json_agree(self):
        from_csv = list(csv.DictReader(io.StringIO(utils.rows_to_csv(self.rows, self.columns))))
        from_json = json.loads(utils.rows_to_json(self.rows, self.columns))
        self.assertEqual(len(from_csv), len(from_json))
        for a, b in zip(from_csv, from_json):
            for column in self.columns:
                self.assertEqual(a[column], str(b[column]))

    def test_csv_header_and_line_endings(self):
        content = utils.rows_to_csv(self.rows, self.columns)
        self.assertTrue(content.startswith("name,value,count,ok\n"))
        self.assertNotIn("\r", content)

    def test_bare_names_go_to_the_data_dir(self):
        with tempfile.TemporaryDirectory() as tmp:
            with mock.patch.object(utils, "data_dir", return_value=tmp):
                utils.write_rows(self.rows, self.columns, {"format": "csv", "out": "rows.csv"})
            self.assertTrue(os.path.exists(os.path.join(tmp, "rows.csv")))

    def test_stdout_without_out(self):
        with mock.patch("sys.stdout", new_callable=io.StringIO) as out:
            utils.write_rows(self.rows, self.columns, {"format": "json"})
        self.assertEqual(json.loads(out.getvalue())[0]["name"], "third")


class ParallelMap(unittest.TestCase):

    def test_order_is_kept(self):
        with parallel_config(backend="threading", n_jobs=4):
            result = utils.parallel_map(lambda x, y: x * y, range(20), 3)
        self.assertEqual(result, [3 * x for x in range(20)])

    def test_single_item_runs_inline(self):
        self.assertEqual(utils.parallel_map(lambda x: x + 1, [1]), [2])


class Settings(unittest.TestCase):

    def test_defaults_without_config(self):
        with mock.patch.object(utils, "config", None):
            self.assertEqual(utils.setting("census", "slab_height", 4.0), 4.0)

    def test_config_values_win(self):
        with mock.patch.object(utils, "config", {"census": {"slab_height": 2.0}}):
            self.assertEqual(utils.setting("census", "slab_height", 4.0), 2.0)
            self.assertEqual(utils.setting("census", "t_floor", 0.05), 0.05)
