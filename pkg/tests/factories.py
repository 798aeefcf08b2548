"""Small bank configurations shared by the test modules"""
from silver_bullet.models import DeviceProfile, MechanismConfig, Scheme, TiePolicy


def make_device(uhc=1000, b=1, s_b=8, r=1, t=1):
    return DeviceProfile(uhc_dram=uhc, blast_radius_b=b, bank_rows_sb=s_b,
                         refresh_burst_r=r, window_t=t)


def make_config(d, s_sb, n, scheme=Scheme.ECR, target=None, policy=None):
    if policy is None:
        policy = TiePolicy.adversarial(n - 1 if target is None else target)
    return MechanismConfig(d=d, subbank_rows_ssb=s_sb, n_subbanks_nsb=n, scheme=scheme, tie_policy=policy)


def make_pair(d, t, r, b, s_sb, n, scheme=Scheme.ECR, uhc=1000, policy=None):
    return (make_device(uhc=uhc, b=b, s_b=s_sb * n, r=r, t=t),
            make_config(d, s_sb, n, scheme=scheme, policy=policy))


# name -> ((D, T, R, B, S_SB, N_SB, scheme), THC)
SUITE = {
    'tiny': ((4, 1, 1, 1, 2, 4, Scheme.ECR), 19),
    'wide_d': ((10, 2, 1, 1, 4, 4, Scheme.ECR), 64),
    'double_burst': ((8, 2, 2, 2, 4, 4, Scheme.ECR), 54),
    'eight_subbanks': ((8, 1, 1, 1, 8, 8, Scheme.ECR), 91),
    'blast_two': ((8, 1, 1, 2, 4, 8, Scheme.ECR), 61),
    'eprr': ((4, 2, 1, 1, 4, 4, Scheme.EPRR), 52),
    'two_iterations': ((6, 2, 1, 1, 4, 4, Scheme.ECR), 40),
    'three_iterations': ((18, 8, 1, 1, 4, 8, Scheme.ECR), 136),
    'four_iterations': ((18, 8, 1, 1, 4, 16, Scheme.ECR), 154),
}


def suite_pair(name, **kwargs):
    (d, t, r, b, s_sb, n, scheme), _ = SUITE[name]
    return make_pair(d, t, r, b, s_sb, n, scheme=scheme, **kwargs)


def ddr4_pair(d, s_sb, b=4, r=1, uhc=9600, scheme=Scheme.ECR):
    """A 64k-row bank with T = 177"""
    device = DeviceProfile(uhc_dram=uhc, blast_radius_b=b, bank_rows_sb=65536,
                           refresh_burst_r=r, window_t=177)
    config = MechanismConfig(d=d, subbank_rows_ssb=s_sb, n_subbanks_nsb=65536 // s_sb, scheme=scheme)
    return device, config
