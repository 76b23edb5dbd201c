"""Truncated formal power series in q with exact rational coefficients.

A :class:`QSeries` represents

    sum_{i=0}^{M} coeffs[i] * q**(lead + i)  +  O(q**(lead + M + 1))

where ``lead`` is an exact rational whose denominator divides 24 (enough
for anything built out of eta factors, which carry q**(1/24)) and every
coefficient is a :class:`fractions.Fraction`.  ``M = trunc >= 1`` is the
guaranteed relative order; coefficients beyond ``lead + M`` are *unknown*,
never assumed zero.  Every operation returns the smallest conservative
truncation and raises :class:`InsufficientPrecisionError` rather than
zero-padding, because silent extension corrupts exponent extraction.

Instances are immutable; all operations are pure and safe to use from
multiple threads.  No floating point is used anywhere in this module.
"""

from fractions import Fraction
from typing import Iterable, Union

from .errors import (
    DomainError,
    FractionalExponentError,
    IncompatibleExponentError,
    InsufficientPrecisionError,
    NonInvertibleError,
)

Rational = Union[int, Fraction]

__all__ = ["QSeries", "Rational"]


def _as_fraction(x: Rational) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"exact rational required, got {type(x).__name__}")


def _int_values(coeffs: tuple[Fraction, ...]) -> "list[int] | None":
    """The coefficients as plain ints, or None if any is non-integral."""
    if all(c.denominator == 1 for c in coeffs):
        return [c.numerator for c in coeffs]
    return None


class QSeries:
    __slots__ = ("_lead", "_coeffs")

    def __init__(self, lead: Rational, coeffs: Iterable[Rational]):
        lead = _as_fraction(lead)
        cs = [_as_fraction(c) for c in coeffs]
        if len(cs) < 2:
            raise InsufficientPrecisionError(
                "a series needs at least two guaranteed coefficients (trunc >= 1)"
            )
        # Strip leading zeros, keeping the absolute guaranteed order fixed;
        # an all-zero coefficient list is the zero series (kept as-is).
        k = 0
        while k < len(cs) and cs[k] == 0:
            k += 1
        if 0 < k < len(cs):
            lead += k
            cs = cs[k:]
            if len(cs) < 2:
                raise InsufficientPrecisionError(
                    "leading-term cancellation consumed all guaranteed precision"
                )
        if 24 % lead.denominator:
            raise FractionalExponentError(
                f"leading exponent {lead} has denominator {lead.denominator}, "
                "which does not divide 24"
            )
        self._lead = lead
        self._coeffs = tuple(cs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, trunc: int, lead: Rational = 0) -> "QSeries":
        return cls(lead, [0] * (trunc + 1))

    @classmethod
    def one(cls, trunc: int) -> "QSeries":
        return cls(0, [1] + [0] * trunc)

    @classmethod
    def constant(cls, value: Rational, trunc: int) -> "QSeries":
        return cls(0, [value] + [0] * trunc)

    # -- basic queries -----------------------------------------------------

    @property
    def lead(self) -> Fraction:
        """Exponent of the first represented term (the first nonzero one,
        unless the series is zero to its guaranteed order)."""
        return self._lead

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def trunc(self) -> int:
        """Guaranteed relative order M: coefficients of q^(lead..lead+M)
        are exact, later ones unknown."""
        return len(self._coeffs) - 1

    @property
    def max_exponent(self) -> Fraction:
        return self._lead + self.trunc

    @property
    def is_zero(self) -> bool:
        return self._coeffs[0] == 0

    def coefficient(self, exponent: Rational) -> Fraction:
        """Coefficient of q**exponent.  Exponents below the lead (or off the
        lead's integer lattice) are exactly zero; exponents beyond the
        guaranteed order raise."""
        off = _as_fraction(exponent) - self._lead
        if off.denominator != 1:
            return Fraction(0)
        i = int(off)
        if i < 0:
            return Fraction(0)
        if i > self.trunc:
            raise InsufficientPrecisionError(
                f"coefficient of q^{exponent} is beyond the guaranteed order "
                f"q^{self.max_exponent}"
            )
        return self._coeffs[i]

    __getitem__ = coefficient

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self._lead == other._lead and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self._lead, self._coeffs))

    def __repr__(self):
        if self.is_zero:
            return f"QSeries(0 + O(q^{self.max_exponent + 1}))"
        terms = []
        for i, c in enumerate(self._coeffs):
            if not c:
                continue
            e = self._lead + i
            terms.append(f"{c}*q^{e}" if e else str(c))
            if len(terms) == 6:
                terms.append("...")
                break
        return f"QSeries({' + '.join(terms)} + O(q^{self.max_exponent + 1}))"

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        diff = other._lead - self._lead
        if diff.denominator != 1:
            raise IncompatibleExponentError(
                f"cannot add series with leading exponents {self._lead} and {other._lead}"
            )
        lead = min(self._lead, other._lead)
        valid = min(self.max_exponent, other.max_exponent)
        n = int(valid - lead)
        if n < 1:
            raise InsufficientPrecisionError(
                "operands share no overlapping guaranteed range"
            )
        out = [Fraction(0)] * (n + 1)
        for series in (self, other):
            off = int(series._lead - lead)
            for i, c in enumerate(series._coeffs):
                j = off + i
                if j > n:
                    break
                if c:
                    out[j] += c
        return QSeries(lead, out)

    def __neg__(self):
        return QSeries(self._lead, [-c for c in self._coeffs])

    def __sub__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        m = min(self.trunc, other.trunc)
        lead = self._lead + other._lead
        if self.is_zero or other.is_zero:
            return QSeries.zero(m, lead)
        # integer-coefficient series (the common case for eta quotients and
        # Eisenstein expansions) multiply ~10x faster on plain ints
        a = _int_values(self._coeffs)
        b = _int_values(other._coeffs)
        if a is None or b is None:
            a, b = self._coeffs, other._coeffs
            out = [Fraction(0)] * (m + 1)
        else:
            out = [0] * (m + 1)
        for i in range(min(len(a), m + 1)):
            ai = a[i]
            if not ai:
                continue
            for j in range(min(len(b), m + 1 - i)):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return QSeries(lead, out)

    __rmul__ = __mul__

    def scale(self, factor: Rational) -> "QSeries":
        """Multiply every coefficient by an exact scalar."""
        f = _as_fraction(factor)
        if f == 0:
            return QSeries.zero(self.trunc, self._lead)
        return QSeries(self._lead, [f * c for c in self._coeffs])

    def reciprocal(self) -> "QSeries":
        """Multiplicative inverse to the same relative order, by the
        triangular recurrence b_n = -(1/a_0) sum_{k>=1} a_k b_{n-k}."""
        if self._coeffs[0] == 0:
            raise NonInvertibleError("leading coefficient is zero")
        m = self.trunc
        a = _int_values(self._coeffs)
        if a is not None and a[0] in (1, -1):
            # unit integer lead: the inverse stays integral
            inv0 = a[0]
            out = [0] * (m + 1)
        else:
            a = self._coeffs
            inv0 = 1 / a[0]
            out = [Fraction(0)] * (m + 1)
        out[0] = inv0
        for n in range(1, m + 1):
            s = 0
            for k in range(1, n + 1):
                if a[k]:
                    s += a[k] * out[n - k]
            out[n] = -inv0 * s
        return QSeries(-self._lead, out)

    def pow_int(self, e: int) -> "QSeries":
        """Integer power by square-and-multiply; negative e inverts first."""
        if not isinstance(e, int):
            raise DomainError("exponent must be an integer")
        if e == 0:
            return QSeries.one(self.trunc)
        base = self if e > 0 else self.reciprocal()
        k = abs(e)
        result = None
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    __pow__ = pow_int

    # -- calculus and reindexing -------------------------------------------

    def theta(self) -> "QSeries":
        """Ramanujan theta operator q*d/dq: the coefficient of q^n is
        multiplied by n.  Defined only for integer leading exponents."""
        if self._lead.denominator != 1:
            raise DomainError(
                f"theta requires an integer leading exponent, got {self._lead}"
            )
        h = int(self._lead)
        return QSeries(self._lead, [(h + i) * c for i, c in enumerate(self._coeffs)])

    def truncate(self, order: int) -> "QSeries":
        """Forget coefficients beyond relative order ``order``.  Requesting
        more precision than held is an error, never zero-padding."""
        if order < 1:
            raise DomainError("truncation order must be a positive integer")
        if order > self.trunc:
            raise InsufficientPrecisionError(
                f"requested order {order} exceeds guaranteed order {self.trunc}"
            )
        return QSeries(self._lead, self._coeffs[: order + 1])

    def shift(self, delta: Rational) -> "QSeries":
        """Multiply by q**delta (adjusts only the leading exponent)."""
        return QSeries(self._lead + _as_fraction(delta), self._coeffs)

    def rescale(self, d: int) -> "QSeries":
        """Substitute q -> q**d.  The result is guaranteed to relative order
        d*(trunc+1) - 1, since the gaps between old coefficients are exact
        zeros."""
        if d < 1:
            raise DomainError("rescale factor must be a positive integer")
        if d == 1:
            return self
        out = [Fraction(0)] * (d * (self.trunc + 1))
        for i, c in enumerate(self._coeffs):
            out[d * i] = c
        return QSeries(self._lead * d, out)
