__author__ = "The hytrans Authors"
__copyright__ = "Copyright The hytrans Authors"
__license__ = "Apache-2.0"

import math

# Largest spin system the dense engine accepts (4096-dimensional)
max_spins = 12

# Largest system for the literal pulse-by-pulse engine
max_explicit_spins = 4

# Gyromagnetic ratios in rad s^-1 T^-1, keyed by isotope id
gyromagnetic_ratios = {
    "1H": 2 * math.pi * 42.6e6,
    "13C": 2 * math.pi * 10.7e6,
    "15N": -2 * math.pi * 4.3e6,
    "31P": 2 * math.pi * 17.235e6,
    "19F": 2 * math.pi * 40.078e6,
}

# Hydrogen gyromagnetic ratio used in the classical sample field amplitude
gamma_h_field = 2 * math.pi * 42.57e6


class environment:
    b_field = 2.0  # Tesla
    temperature = 300.0  # Kelvin


class readout:
    omega = 2 * math.pi * 20e3  # RF Rabi frequency on hydrogen, rad/s
    t2_nv = 10e-6
    contrast = 0.07
    t_exp = 1e3
    rho_h = 6.6e28  # hydrogen density, m^-3
    f3 = 4.1
    shot_noise = 1.0
    rotation_periods = 1
    dead_time = 0.0
    samples_per_period = 20


# Numerical tolerances
hermitian_tol = 1e-12
trace_tol = 1e-10
spectrum_tol = 1e-10
imaginary_tol = 1e-10

# Third-order amplitude above this share of first order is flagged
third_order_warning = 0.1

# Spectral analysis
zero_padding = 4
peak_window_bins = 2
noise_exclusion_widths = 5
min_noise_bins = 10
snr_cap = 1e12

# Largest detection count searched when optimizing M and M1
m_max = 500

# Valid range for the NV coherence sweep, seconds
t2nv_range = (1e-7, 1e-3)

# Thresholds used by the validation harness
oracle_threshold = 1e-8
explicit_threshold = 1e-8

# Environment variable naming the default output root
outdir_envar = "HYTRANS_OUTDIR"
default_outdir = "hytrans-out"
