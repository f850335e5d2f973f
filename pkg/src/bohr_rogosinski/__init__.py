"""Certified Bohr-Rogosinski radii for bounded analytic and harmonic functions."""

from .functionals import (
    FunctionalResult,
    HarmonicPair,
    functional_A,
    functional_B,
    functional_C,
    functional_D,
    functional_E,
    rogosinski_bound,
    rogosinski_partial,
    sharpness_gap,
)
from .harness import SampleSpec, probe_sharpness, verify_family, verify_rogosinski
from .radii import (
    RadiusFamily,
    RootCertificate,
    classical_constants,
    compute_radius,
    equation_value,
    limit_radius,
)
from .series import TruncatedSeries, mobius_coeffs, schwarz_pick_bound

__version__ = "0.1.0"
