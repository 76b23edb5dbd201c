import random
from fractions import Fraction

import pytest

from qprod.errors import (
    DomainError,
    FractionalExponentError,
    IncompatibleExponentError,
    InsufficientPrecisionError,
    NonInvertibleError,
)
from qprod.forms import eisenstein
from qprod.qseries import QSeries

F = Fraction


def series(lead, *coeffs):
    return QSeries(F(lead), [F(c) for c in coeffs])


def assert_agree(a: QSeries, b: QSeries):
    """Exact agreement of two series over their common guaranteed range."""
    top = min(a.max_exponent, b.max_exponent)
    lo = min(a.lead, b.lead)
    assert top >= lo, "no overlapping range to compare"
    e = lo
    while e <= top:
        assert a.coefficient(e) == b.coefficient(e), f"coefficient of q^{e}"
        e += F(1, 24)


def random_series(rng, trunc=None, lead_range=(-3, 3)):
    m = trunc if trunc is not None else rng.randint(4, 32)
    coeffs = [rng.randint(-10, 10) for _ in range(m + 1)]
    while coeffs[0] == 0:
        coeffs[0] = rng.randint(-10, 10)
    return QSeries(rng.randint(*lead_range), coeffs)


# -- construction and normalization ----------------------------------------


def test_construction_strips_leading_zeros():
    f = series(0, 0, 0, 5, 1)
    assert f.lead == 2
    assert f.coeffs == (F(5), F(1))
    assert f.trunc == 1
    assert f.max_exponent == 3  # absolute guaranteed order is preserved


def test_zero_series():
    z = QSeries.zero(5)
    assert z.is_zero and z.trunc == 5
    assert z.coefficient(3) == 0


def test_trunc_at_least_one():
    with pytest.raises(InsufficientPrecisionError):
        QSeries(0, [1])
    with pytest.raises(InsufficientPrecisionError):
        QSeries(0, [0, 7])  # stripping would leave a single coefficient


def test_lead_denominator_restricted():
    QSeries(F(1, 24), [1, 2])
    QSeries(F(5, 8), [1, 2])
    with pytest.raises(FractionalExponentError):
        QSeries(F(1, 5), [1, 2])
    with pytest.raises(FractionalExponentError):
        QSeries(F(1, 48), [1, 2])


def test_floats_rejected():
    with pytest.raises(TypeError):
        QSeries(0, [1.5, 2])
    with pytest.raises(TypeError):
        QSeries(0.5, [1, 2])


def test_coefficient_access():
    f = series(1, 1, -24, 252)
    assert f.coefficient(2) == -24
    assert f[3] == 252
    assert f.coefficient(0) == 0  # below the lead: exactly zero
    assert f.coefficient(F(3, 2)) == 0  # off the integer lattice of the lead
    with pytest.raises(InsufficientPrecisionError):
        f.coefficient(4)  # beyond the guaranteed order: unknown, not zero


# -- add --------------------------------------------------------------------


def test_add_examples():
    one_plus = series(0, 1, 1, 0)
    one_minus = series(0, 1, -1, 0)
    assert one_plus + one_minus == series(0, 2, 0, 0)

    f = series(0, 3, 1, 4)
    assert f + QSeries.zero(5) == f  # identity


def test_add_cancellation_relocates_lead():
    f = series(1, 1, 0, 0)  # q + O(q^4)
    g = series(1, -1, 1, 0)  # -q + q^2 + O(q^4)
    total = f + g
    assert total.lead == 2
    assert total.coeffs == (F(1), F(0))
    assert total.max_exponent == 3


def test_add_fractional_leads():
    f = QSeries(F(1, 24), [1, 1, 0, 0])
    g = QSeries(F(49, 24), [3, 0])  # difference is the integer 2
    total = f + g
    assert total.lead == F(1, 24)
    assert total.coefficient(F(49, 24)) == 3


def test_add_incompatible_exponents():
    f = QSeries(F(1, 24), [1, 1])
    g = QSeries(F(1, 2), [1, 1])
    with pytest.raises(IncompatibleExponentError):
        f + g


def test_add_truncation_is_conservative():
    f = series(0, 1, 2, 3, 4, 5)  # valid to q^4
    g = series(2, 7, 8)  # valid to q^3
    total = f + g
    assert total.max_exponent == 3


# -- mul --------------------------------------------------------------------


def test_mul_examples():
    one_plus = series(0, 1, 1, 0)
    one_minus = series(0, 1, -1, 0)
    assert one_plus * one_minus == series(0, 1, 0, -1)

    f = series(0, 2, 5, -1)
    assert f * QSeries.one(10) == f


def test_mul_fractional_leads_add():
    f = QSeries(F(1, 24), [1, -1, 0])
    sq = f * f
    assert sq.lead == F(1, 12)
    assert sq.coeffs == (F(1), F(-2), F(1))


def test_mul_zero_short_circuits():
    f = series(1, 3, 4, 5)
    z = QSeries.zero(2, lead=2)
    prod = f * z
    assert prod.is_zero
    assert prod.lead == 3
    assert prod.trunc == 2


def test_scalar_multiplication():
    f = series(0, 1, 2)
    assert f * 3 == series(0, 3, 6)
    assert F(1, 2) * f == QSeries(0, [F(1, 2), F(1)])
    assert (f * 0).is_zero


# -- reciprocal / pow --------------------------------------------------------


def test_reciprocal_geometric():
    f = series(0, 1, -1, 0, 0, 0, 0)  # 1 - q
    assert f.reciprocal() == QSeries(0, [1] * 6)


def test_reciprocal_is_involution():
    rng = random.Random(7)
    for _ in range(20):
        f = random_series(rng)
        assert f.reciprocal().reciprocal() == f


def test_reciprocal_of_e4():
    inv = eisenstein(4, 8).reciprocal()
    assert inv.coefficient(1) == -240  # triangular back-substitution by hand


def test_reciprocal_errors():
    with pytest.raises(NonInvertibleError):
        QSeries.zero(4).reciprocal()


def test_mul_by_reciprocal_is_one():
    rng = random.Random(11)
    for _ in range(20):
        f = random_series(rng)
        assert f * f.reciprocal() == QSeries.one(f.trunc)


def test_pow_examples():
    f = series(2, 1, 5, -2)
    assert f.pow_int(0) == QSeries.one(2)
    assert series(0, 1, -1, 0).pow_int(2) == series(0, 1, -2, 1)
    assert QSeries(F(1, 24), [1, 0]).pow_int(24).lead == 1


def test_pow_negative():
    f = series(0, 1, 1, 0, 0)
    assert f.pow_int(-2) == f.reciprocal() * f.reciprocal()
    with pytest.raises(NonInvertibleError):
        QSeries.zero(3).pow_int(-1)


def test_pow_matches_repeated_multiplication():
    rng = random.Random(13)
    for _ in range(10):
        f = random_series(rng, trunc=12)
        direct = f
        for e in range(2, 6):
            direct = direct * f
            assert f.pow_int(e) == direct


# -- theta / truncate / reindexing -------------------------------------------


def test_theta_examples():
    assert QSeries.one(4).theta().is_zero  # theta(1) = 0
    q = series(1, 1, 0)
    assert q.theta() == q  # theta(q) = q
    e2 = eisenstein(2, 6)
    assert e2.theta().coefficient(1) == -24


def test_theta_fractional_lead_rejected():
    with pytest.raises(DomainError):
        QSeries(F(1, 24), [1, 1]).theta()


def test_theta_multiplies_every_index_including_lead():
    f = series(3, 2, 0, 7)
    assert f.theta() == series(3, 6, 0, 35)


def test_truncate_contract():
    f = series(0, 1, 2, 3)
    assert f.truncate(f.trunc) == f
    assert f.truncate(1) == series(0, 1, 2)
    with pytest.raises(InsufficientPrecisionError):
        f.truncate(f.trunc + 1)  # never silently extend
    with pytest.raises(DomainError):
        f.truncate(0)


def test_shift_and_rescale():
    f = series(0, 1, -1, 2)
    assert f.shift(3).lead == 3
    g = f.rescale(2)
    assert g.lead == 0
    assert g.coefficient(2) == -1
    assert g.coefficient(3) == 0
    assert g.max_exponent == 5  # gaps are exact zeros, so order extends
    e2 = eisenstein(2, 4)
    assert e2.rescale(3).coefficient(3) == -24


# -- algebraic laws on randomized series ---------------------------------------


def test_ring_axioms_randomized():
    rng = random.Random(20250810)
    for _ in range(30):
        f = random_series(rng)
        g = random_series(rng)
        h = random_series(rng)
        assert_agree((f + g) + h, f + (g + h))
        assert_agree(f + g, g + f)
        assert_agree((f * g) * h, f * (g * h))
        assert_agree(f * g, g * f)
        assert_agree(f * (g + h), f * g + f * h)


def test_theta_leibniz_rule():
    rng = random.Random(99)
    for _ in range(30):
        f = random_series(rng, lead_range=(0, 4))
        g = random_series(rng, lead_range=(0, 4))
        assert_agree((f * g).theta(), f.theta() * g + f * g.theta())


def test_all_coefficients_are_exact_fractions():
    rng = random.Random(5)
    f, g = random_series(rng), random_series(rng)
    for result in (f + g, f * g, f.reciprocal(), f.theta(), f.pow_int(3)):
        assert all(isinstance(c, Fraction) for c in result.coeffs)
