"""Exact q-series arithmetic and infinite-product exponent analysis for
modular forms: eta quotients, Eisenstein series, the weight-2 completion of
theta(f)/f, Kloosterman sums, Bessel-type constant-term approximations, and
growth-rate recovery of the highest zero height from the exponents c(m) of
f = q^h prod (1 - q^m)^c(m)."""

from .arith import KloostermanSum, divisors, kloosterman, mobius, sigma, tau
from .asymptotics import (
    BoundReport,
    GrowthFit,
    JApproximation,
    b_coeff_truncated,
    bessel_I1,
    bessel_I_half,
    bessel_K_half,
    check_bound,
    growth_fit,
    j_approx,
)
from .errors import QprodError
from .forms import (
    FormSpec,
    LevelData,
    build,
    delta,
    eisenstein,
    eta,
    f_theta,
    ingest_coefficients,
    level_data,
    load_spec,
    newform,
    newform_spec,
    write_coefficients,
)
from .prodexp import (
    ExponentSeries,
    extract,
    extract_oracle,
    read_exponents,
    reconstruct,
    vanishing_indices,
    write_exponents,
)
from .qseries import QSeries

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "ExponentSeries",
    "FormSpec",
    "GrowthFit",
    "JApproximation",
    "KloostermanSum",
    "LevelData",
    "QSeries",
    "QprodError",
    "b_coeff_truncated",
    "bessel_I1",
    "bessel_I_half",
    "bessel_K_half",
    "build",
    "check_bound",
    "delta",
    "divisors",
    "eisenstein",
    "eta",
    "extract",
    "extract_oracle",
    "f_theta",
    "growth_fit",
    "ingest_coefficients",
    "j_approx",
    "kloosterman",
    "level_data",
    "load_spec",
    "mobius",
    "newform",
    "newform_spec",
    "read_exponents",
    "reconstruct",
    "sigma",
    "tau",
    "vanishing_indices",
    "write_coefficients",
    "write_exponents",
]
