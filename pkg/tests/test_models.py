import unittest
from unittest.mock import patch

from pydantic import ValidationError

from silver_bullet.models import (
    DeviceProfile,
    MechanismConfig,
    Scheme,
    TiePolicy,
    TieRule,
    TimingError,
    ViolationCode,
    WindowDerivation,
    derive_window_t,
    validate,
)
from tests.factories import make_device, ddr4_pair


class TestDeriveWindow(unittest.TestCase):
    def test_ddr4_timings(self):
        self.assertEqual(derive_window_t(7800, 350, 46), 177)

    def test_single_activation_window(self):
        self.assertEqual(derive_window_t(46, 0, 46), 1)

    def test_integer_division(self):
        self.assertEqual(derive_window_t(7800, 350, 45), 181)

    def test_refi_only_derivation(self):
        self.assertEqual(derive_window_t(7800, 350, 46, WindowDerivation.REFI_ONLY), 169)

    def test_invalid_timings(self):
        with self.assertRaises(TimingError):
            derive_window_t(7800, 350, 0)
        with self.assertRaises(TimingError):
            derive_window_t(0, 350, 46)
        with self.assertRaises(TimingError):
            derive_window_t(10, 0, 46)

    def test_monotonic(self):
        self.assertLessEqual(derive_window_t(7000, 350, 46), derive_window_t(7800, 350, 46))
        self.assertLessEqual(derive_window_t(7800, 100, 46), derive_window_t(7800, 350, 46))
        self.assertGreaterEqual(derive_window_t(7800, 350, 40), derive_window_t(7800, 350, 46))


class TestDeviceProfile(unittest.TestCase):
    def test_window_from_timings(self):
        device = DeviceProfile(uhc_dram=9600, blast_radius_b=4, bank_rows_sb=65536,
                               refresh_burst_r=1, t_refi_ns=7800, t_rfc_ns=350, t_rc_ns=46)
        self.assertEqual(device.window_t, 177)
        self.assertTrue(device.has_timings)

    def test_window_disagreeing_with_timings(self):
        with self.assertRaises(ValidationError):
            DeviceProfile(uhc_dram=9600, blast_radius_b=4, bank_rows_sb=65536, refresh_burst_r=1,
                          window_t=100, t_refi_ns=7800, t_rfc_ns=350, t_rc_ns=46)

    def test_partial_timings(self):
        with self.assertRaises(ValidationError):
            DeviceProfile(uhc_dram=9600, blast_radius_b=4, bank_rows_sb=65536, refresh_burst_r=1,
                          window_t=177, t_rc_ns=46)

    def test_positive_fields(self):
        with self.assertRaises(ValidationError):
            make_device(b=0)

    def test_frozen(self):
        device = make_device()
        with self.assertRaises(ValidationError):
            device.window_t = 5


class TestMechanismConfig(unittest.TestCase):
    def test_adversarial_needs_target(self):
        with self.assertRaises(ValidationError):
            TiePolicy(rule=TieRule.ADVERSARIAL)
        self.assertEqual(TiePolicy.adversarial(2).target_subbank, 2)

    def test_target_inside_bank(self):
        with self.assertRaises(ValidationError):
            MechanismConfig(d=4, subbank_rows_ssb=2, n_subbanks_nsb=4, tie_policy=TiePolicy.adversarial(4))

    def test_defaults(self):
        config = MechanismConfig(d=4, subbank_rows_ssb=2, n_subbanks_nsb=4)
        self.assertEqual(config.scheme, Scheme.ECR)
        self.assertEqual(config.tie_policy.rule, TieRule.LOWEST)
        self.assertEqual(config.sharing_factor_n, 1)
        self.assertEqual(config.covered_rows, 8)


class TestValidate(unittest.TestCase):
    def codes(self, device, config):
        return [v.code for v in validate(device, config)]

    def test_table_1kb_point_with_protocol_refresh_rate(self):
        device, config = ddr4_pair(64, 128, r=8)
        self.assertEqual(validate(device, config), [])

    def test_table_1kb_point_at_one_refresh_per_window(self):
        device, config = ddr4_pair(64, 128, r=1)
        self.assertEqual(self.codes(device, config), [ViolationCode.D_BELOW_MIN])

    def test_d_below_minimum(self):
        device, config = ddr4_pair(2, 128)
        violations = validate(device, config)
        self.assertEqual(violations[0].code, ViolationCode.D_BELOW_MIN)
        self.assertEqual(violations[0].values['min_d'], 356)
        self.assertIn("356", str(violations[0]))

    def test_subbank_below_twice_blast_radius(self):
        device, config = ddr4_pair(64, 4, r=8)
        self.assertIn(ViolationCode.SUBBANK_BELOW_2B, self.codes(device, config))

    def test_subbank_count_mismatch(self):
        device = make_device(s_b=10, t=1)
        config = MechanismConfig(d=4, subbank_rows_ssb=4, n_subbanks_nsb=2)
        self.assertIn(ViolationCode.N_SB_MISMATCH, self.codes(device, config))

    def test_subbank_above_bank(self):
        device = make_device(s_b=8, t=1)
        config = MechanismConfig(d=4, subbank_rows_ssb=16, n_subbanks_nsb=1)
        codes = self.codes(device, config)
        self.assertIn(ViolationCode.SUBBANK_ABOVE_BANK, codes)
        self.assertIn(ViolationCode.N_SB_MISMATCH, codes)

    def test_uhc_checks(self):
        device, config = ddr4_pair(64, 128, r=8, uhc=177)
        codes = self.codes(device, config)
        self.assertEqual(codes, [ViolationCode.T_NOT_BELOW_UHC, ViolationCode.UHC_NOT_ABOVE_THC])

    def test_uhc_equal_to_thc_is_unsafe(self):
        device, config = ddr4_pair(64, 128, r=8, uhc=8953)
        self.assertEqual(self.codes(device, config), [ViolationCode.UHC_NOT_ABOVE_THC])
        device, config = ddr4_pair(64, 128, r=8, uhc=8954)
        self.assertEqual(self.codes(device, config), [])

    def test_pure(self):
        device, config = ddr4_pair(2, 4)
        self.assertEqual(validate(device, config), validate(device, config))

    def test_violations_logged_at_warning(self):
        device, config = ddr4_pair(2, 128)
        with self.assertLogs('silver_bullet.models.validation', level='WARNING') as logs:
            violations = validate(device, config)
        self.assertEqual(len(logs.output), len(violations))
        self.assertTrue(all(line.startswith("WARNING:") for line in logs.output))
        self.assertIn("356", logs.output[0])

    def test_silent_validation(self):
        device, config = ddr4_pair(2, 128)
        with patch('silver_bullet.models.validation.logger') as log:
            self.assertTrue(validate(device, config, log_violations=False))
        log.warning.assert_not_called()


if __name__ == '__main__':
    unittest.main()
