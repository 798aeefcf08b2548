"""End-to-end checks of the analytic model against the simulator and the attack engines"""
import math
import time
import unittest

from silver_bullet.analytics import hammer_bounds, min_d, table_geometry
from silver_bullet.config.settings import Settings
from silver_bullet.attacks import FuzzCampaign, execute, exhaustive_oracle, oracle_bound, plan_wave
from silver_bullet.explorer import sweep
from silver_bullet.mechanism import BankState
from silver_bullet.models import Scheme, TiePolicy, derive_window_t
from tests.factories import SUITE, make_pair, ddr4_pair, suite_pair

ECR_SUITE = [name for name, ((*_, scheme), _) in SUITE.items() if scheme == Scheme.ECR]
MULTI_ITERATION = ['three_iterations', 'four_iterations']
FUZZED = [name for name in SUITE if name not in MULTI_ITERATION]


def pending_ceiling(device, config):
    return math.ceil(math.log2(config.n_subbanks_nsb) + device.refresh_burst_r / 2)


class TestOperatingPoints(unittest.TestCase):
    def test_quoted_thc_values(self):
        start = time.perf_counter()
        points = [((32, 8, 4), 857), ((64, 128, 4), 8953), ((64, 128, 1), 8947),
                  ((2, 8, 4), 227), ((32, 8, 1), 851), ((2, 2, 1), 213)]
        for (d, s_sb, b), thc in points:
            device, config = ddr4_pair(d, s_sb, b=b)
            self.assertEqual(hammer_bounds(device, config).thc, thc)
        self.assertLess(time.perf_counter() - start, 1.0)

    def test_table_sizes(self):
        self.assertEqual(table_geometry(ddr4_pair(64, 128)[1], 1).table_bits, 8704)
        self.assertEqual(table_geometry(ddr4_pair(256, 16)[1], 1).table_bytes, 8192)

    def test_window_and_protocol_limits(self):
        self.assertEqual(derive_window_t(7800, 350, 46), 177)
        self.assertEqual({r: min_d(177, r) for r in (1, 2, 4, 8)}, {1: 356, 2: 179, 4: 91, 8: 47})
        self.assertEqual(min_d(177, 1, Scheme.EPRR), 178)

    def test_sensitivity_claims(self):
        rows = [row for row in sweep('fig8a')]
        for d in (16, 32, 64, 128):
            by_bank = {row.n_sb * row.s_sb: row.thc for row in rows if row.d == d}
            self.assertEqual(by_bank[524288] - by_bank[16384], 5 * d)
        rows = sweep('fig9')
        for d in (16, 32, 64, 128):
            for s_sb in {row.s_sb for row in rows}:
                thc = {row.b: row.thc for row in rows if row.d == d and row.s_sb == s_sb}
                self.assertLess(thc[8] / thc[1], 1.03)


class TestSoundnessSuite(unittest.TestCase):
    def test_wave_attacks(self):
        for name, (_, thc) in SUITE.items():
            with self.subTest(config=name):
                device, config = suite_pair(name)
                outcome = execute(device, config, plan_wave(device, config))
                self.assertLessEqual(outcome.max_victim_window, thc)
                self.assertLessEqual(outcome.max_pending, pending_ceiling(device, config))

    def test_tightness_floor(self):
        for name in ECR_SUITE:
            with self.subTest(config=name):
                device, config = suite_pair(name)
                outcome = execute(device, config, plan_wave(device, config))
                self.assertTrue(outcome.victim_refreshed)
                self.assertGreaterEqual(outcome.max_victim_window, config.d * config.subbank_rows_ssb)

    def test_fuzz_campaigns(self):
        start = time.perf_counter()
        for name in FUZZED:
            with self.subTest(config=name):
                device, config = suite_pair(name)
                thc = SUITE[name][1]
                report = FuzzCampaign(device, config).run(seed=2024, count=1000, length=10 * thc, progress=False)
                self.assertEqual(report.thc_violations, 0)
                self.assertLessEqual(report.worst_window, thc)
                self.assertLessEqual(report.worst_pending, pending_ceiling(device, config))
                geometry = table_geometry(config, device.refresh_burst_r)
                self.assertLess(report.worst_pending, 2 ** geometry.pending_bits)
        self.assertLess(time.perf_counter() - start, 60.0)

    def test_fuzz_multi_iteration(self):
        for name in MULTI_ITERATION:
            with self.subTest(config=name):
                device, config = suite_pair(name)
                thc = SUITE[name][1]
                report = FuzzCampaign(device, config).run(seed=2024, count=100, length=10 * thc, progress=False)
                self.assertEqual(report.thc_violations, 0)
                self.assertLessEqual(report.worst_pending, pending_ceiling(device, config))

    def test_multi_iteration_waves_climb(self):
        for name in ['two_iterations'] + MULTI_ITERATION:
            with self.subTest(config=name):
                device, config = suite_pair(name)
                plan = plan_wave(device, config)
                self.assertGreaterEqual(plan.schedule.i_last, 1)
                self.assertGreaterEqual(plan.achieved_p, 1)
                self.assertLessEqual(plan.achieved_p, plan.schedule.achieved_p)
                state = BankState(device, config)
                self.assertEqual(plan.victim_row, state.geometry.schedules[plan.target_subbank][0])
                for event in plan.phase1_events:
                    state.apply_event(event)
                # only the refresh at plan start
                self.assertEqual(state.subbank_refreshes[plan.target_subbank], 1)
                self.assertEqual(state.entries[plan.target_subbank].pending, plan.achieved_p)


class TestOracleEquivalence(unittest.TestCase):
    SETTINGS = Settings(oracle_max_horizon=20)

    def configs(self):
        lowest = TiePolicy.lowest_index_first()
        return [
            make_pair(4, 1, 1, 1, 2, 2, policy=lowest),
            make_pair(4, 1, 1, 1, 2, 2, scheme=Scheme.EPRR, policy=lowest),
            make_pair(6, 2, 1, 1, 2, 2, policy=lowest),
        ]

    def test_oracle_between_wave_and_bound(self):
        for device, config in self.configs():
            with self.subTest(scheme=config.scheme, d=config.d):
                plan = plan_wave(device, config)
                horizon = len(plan.events)
                self.assertLessEqual(horizon, self.SETTINGS.oracle_max_horizon)
                value = exhaustive_oracle(device, config, horizon, settings=self.SETTINGS)
                self.assertLessEqual(value, oracle_bound(device, config))
                self.assertGreaterEqual(value, execute(device, config, plan).max_victim_window)

    def test_full_plan_lengths(self):
        lengths = [len(plan_wave(device, config).events) for device, config in self.configs()]
        self.assertEqual(lengths, [10, 16, 16])

    def test_wave_reaches_full_cycle_within_horizon(self):
        device, config = self.configs()[0]
        plan = plan_wave(device, config)
        self.assertEqual(len(plan.events), 10)
        self.assertEqual(execute(device, config, plan).max_victim_window, 8)
        self.assertGreaterEqual(exhaustive_oracle(device, config, 10), 8)


if __name__ == '__main__':
    unittest.main()
