import io
import json
import os
import tempfile
import unittest
from unittest.mock import patch

from silver_bullet.main import EXIT_ERROR, EXIT_OK, EXIT_UNSAFE, EXIT_VIOLATION, main
from silver_bullet.utils import to_json, to_text
from silver_bullet.analytics import hammer_bounds, table_geometry
from tests.factories import ddr4_pair

TABLE_1KB = """\
uhc_dram = 9600
blast_radius = 4
bank_rows = 65536
refresh_burst_r = 8
window_t = 177
d = 64
subbank_rows = 128
"""

LOWEST_THC = TABLE_1KB.replace("refresh_burst_r = 8", "refresh_burst_r = 16").replace(
    "d = 64", "d = 32").replace("subbank_rows = 128", "subbank_rows = 8")

TINY = """\
uhc_dram = 1000
blast_radius = 1
bank_rows = 8
refresh_burst_r = 1
window_t = 1
d = 4
subbank_rows = 2
tie_policy = adversarial
target_subbank = 3
"""

ORACLE = """\
uhc_dram = 1000
blast_radius = 1
bank_rows = 4
refresh_burst_r = 1
window_t = 1
d = 4
subbank_rows = 2
"""


class TestCli(unittest.TestCase):
    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmpdir.cleanup)

    def write(self, name, text):
        path = os.path.join(self.tmpdir.name, name)
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(text)
        return path

    def run_cli(self, *argv):
        with patch('sys.stdout', new_callable=io.StringIO) as out, \
                patch('sys.stderr', new_callable=io.StringIO):
            code = main(list(argv))
        return code, out.getvalue()

    def test_validate_safe_point(self):
        code, out = self.run_cli('validate', '--config', self.write('a.cfg', TABLE_1KB))
        self.assertEqual(code, EXIT_OK)
        self.assertIn("THC=8953", out)

    def test_validate_d_below_minimum(self):
        code, out = self.run_cli('validate', '--config', self.write('a.cfg', TABLE_1KB), '--set', 'd=2',
                                 '--set', 'refresh_burst_r=1')
        self.assertEqual(code, EXIT_VIOLATION)
        self.assertIn("D_BELOW_MIN", out)
        self.assertIn("356", out)

    def test_validate_missing_file(self):
        code, _ = self.run_cli('validate', '--config', os.path.join(self.tmpdir.name, 'absent.cfg'))
        self.assertEqual(code, EXIT_ERROR)

    def test_validate_malformed_file(self):
        code, _ = self.run_cli('validate', '--config', self.write('a.cfg', TABLE_1KB + "d = 3\n"))
        self.assertEqual(code, EXIT_ERROR)

    def test_analyze_text(self):
        code, out = self.run_cli('analyze', '--config', self.write('a.cfg', LOWEST_THC))
        self.assertEqual(code, EXIT_OK)
        self.assertIn("thc=857\n", out)
        self.assertIn("p_p1max=13\n", out)

    def test_analyze_json(self):
        code, out = self.run_cli('analyze', '--config', self.write('a.cfg', TABLE_1KB), '--json')
        self.assertEqual(code, EXIT_OK)
        report = json.loads(out)
        self.assertEqual(report['thc'], 8953)
        self.assertEqual(report['table']['table_bytes'], 1088)
        self.assertEqual(report['scheme'], 'ecr')

    def test_analyze_bad_p_ref(self):
        code, _ = self.run_cli('analyze', '--config', self.write('a.cfg', TABLE_1KB), '--p-ref', '0')
        self.assertEqual(code, EXIT_VIOLATION)

    def test_analyze_invalid_config(self):
        code, _ = self.run_cli('analyze', '--config', self.write('a.cfg', TABLE_1KB), '--set', 'd=2')
        self.assertEqual(code, EXIT_VIOLATION)

    def test_simulate_empty_trace(self):
        trace = self.write('empty.txt', "")
        code, out = self.run_cli('simulate', '--config', self.write('a.cfg', TINY), '--trace', trace)
        self.assertEqual(code, EXIT_OK)
        self.assertIn("max_window=0\n", out)
        self.assertNotIn("max_window_per_row", out)

    def test_simulate_bad_trace(self):
        trace = self.write('bad.txt', "A 1\nA one\n")
        code, _ = self.run_cli('simulate', '--config', self.write('a.cfg', TINY), '--trace', trace)
        self.assertEqual(code, EXIT_ERROR)

    def test_simulate_unsafe_trace(self):
        trace = self.write('hammer.txt', "A 7\n" * 4)
        code, out = self.run_cli('simulate', '--config', self.write('a.cfg', TINY), '--trace', trace,
                                 '--set', 'uhc_dram=5', '--allow-unsafe')
        self.assertEqual(code, EXIT_UNSAFE)
        self.assertIn("safe=false", out)

    def test_simulate_wave(self):
        out_path = os.path.join(self.tmpdir.name, 'wave.txt')
        code, out = self.run_cli('simulate', '--config', self.write('a.cfg', TINY), '--wave', '--out', out_path)
        self.assertEqual(code, EXIT_OK)
        self.assertIn("bound_gap=11\n", out)
        with open(out_path, encoding='utf-8') as handle:
            self.assertIn("# phase: phase2", handle.read())

    def test_simulate_fuzz_is_reproducible(self):
        config = self.write('a.cfg', TINY)
        args = ('simulate', '--config', config, '--fuzz', '--seed', '7', '--count', '100', '--len', '60')
        first = self.run_cli(*args)
        second = self.run_cli(*args)
        self.assertEqual(first, second)
        self.assertEqual(first[0], EXIT_OK)

    def test_simulate_needs_one_mode(self):
        trace = self.write('empty.txt', "")
        code, _ = self.run_cli('simulate', '--config', self.write('a.cfg', TINY), '--trace', trace, '--wave')
        self.assertEqual(code, EXIT_VIOLATION)

    def test_oracle(self):
        code, out = self.run_cli('oracle', '--config', self.write('o.cfg', ORACLE), '--horizon', '8')
        self.assertEqual(code, EXIT_OK)
        self.assertIn("bound=13\n", out)
        self.assertIn("oracle <= 13", out)

    def test_oracle_guard(self):
        code, _ = self.run_cli('oracle', '--config', self.write('o.cfg', ORACLE), '--horizon', '50')
        self.assertEqual(code, EXIT_VIOLATION)

    def test_sweep(self):
        out_path = os.path.join(self.tmpdir.name, 'fig5.csv')
        code, out = self.run_cli('sweep', '--preset', 'fig5', '--out', out_path)
        self.assertEqual(code, EXIT_OK)
        self.assertIn("wrote 100 rows", out)
        with open(out_path, encoding='utf-8') as handle:
            lines = handle.read().splitlines()
        self.assertTrue(any(line.startswith("32,8,8192,4,177,1,ecr,857,") for line in lines))
        self.assertTrue(any(line.startswith("2,8,8192,4,177,1,ecr,227,") for line in lines))

    def test_sweep_fig7_writes_protocol_limits(self):
        out_path = os.path.join(self.tmpdir.name, 'fig7.csv')
        code, out = self.run_cli('sweep', '--preset', 'fig7', '--out', out_path)
        self.assertEqual(code, EXIT_OK)
        marker_path = os.path.join(self.tmpdir.name, 'fig7_markers.csv')
        self.assertIn(f"wrote 4 protocol limits to {marker_path}", out)
        with open(marker_path, encoding='utf-8') as handle:
            self.assertEqual(handle.read(), "r,min_d\n1,356\n2,179\n4,91\n8,47\n")

    def test_sweep_unknown_preset(self):
        code, _ = self.run_cli('sweep', '--preset', 'fig10', '--out', os.path.join(self.tmpdir.name, 'x.csv'))
        self.assertEqual(code, EXIT_VIOLATION)

    def test_sweep_unwritable_path(self):
        out_path = os.path.join(self.tmpdir.name, 'missing', 'dir', 'fig5.csv')
        code, _ = self.run_cli('sweep', '--preset', 'fig9', '--out', out_path)
        self.assertEqual(code, EXIT_ERROR)

    def test_exit_code_matrix(self):
        good = self.write('good.cfg', TINY)
        bad = self.write('bad.cfg', TINY.replace("d = 4", "d = 2"))
        missing = os.path.join(self.tmpdir.name, 'absent.cfg')
        trace = self.write('empty.txt', "")
        commands = [('validate',), ('analyze',), ('simulate', '--trace', trace), ('oracle', '--horizon', '4')]
        for command in commands:
            with self.subTest(command=command[0]):
                self.assertEqual(self.run_cli(*command, '--config', missing)[0], EXIT_ERROR)
                self.assertEqual(self.run_cli(*command, '--config', good)[0], EXIT_OK)
                if command[0] != 'oracle':
                    self.assertEqual(self.run_cli(*command, '--config', bad)[0], EXIT_VIOLATION)


class TestReporting(unittest.TestCase):
    def test_nested_text_keys(self):
        device, config = ddr4_pair(64, 128)
        report = hammer_bounds(device, config).model_copy(update={'table': table_geometry(config, 1)})
        text = to_text(report)
        self.assertIn("thc=8953", text.splitlines())
        self.assertIn("table.entry_bits=17", text.splitlines())
        self.assertIn("p_ref_used=-", text.splitlines())

    def test_json_is_stable(self):
        device, config = ddr4_pair(64, 128)
        report = hammer_bounds(device, config)
        self.assertEqual(to_json(report), to_json(report))
        self.assertEqual(list(json.loads(to_json(report)))[:3], ['scheme', 'n_sb', 'min_d'])


if __name__ == '__main__':
    unittest.main()
