"""Infinite-product exponents of a normalized q-expansion.

A normalized expansion f = q^h (1 + ...) factors uniquely as

    f = q^h prod_{m>=1} (1 - q^m)^{c(m)}.

:func:`extract` recovers the c(m) exactly through the logarithmic
derivative: writing theta(f)/f = h + sum_{n>=1} A(n) q^n one has
A(n) = -sum_{d|n} d*c(d), so Möbius inversion gives

    c(m) = -(1/m) sum_{d|m} mu(m/d) A(d).

:func:`extract_oracle` is an independent brute-force route (peel one
factor (1 - q^m)^{c(m)} at a time) kept deliberately separate for
cross-checking; :func:`reconstruct` multiplies the product back out.
When f has integer coefficients and leading coefficient 1, every c(m)
is an integer.
"""

import csv
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Union

from .arith import divisors, mobius, primes_upto
from .errors import (
    DomainError,
    InsufficientPrecisionError,
    NormalizationError,
    ParseError,
)
from .qseries import QSeries, Rational

__all__ = [
    "ExponentSeries",
    "extract",
    "extract_oracle",
    "one_minus_qpow",
    "read_exponents",
    "reconstruct",
    "vanishing_indices",
    "write_exponents",
]

_ORACLE_LIMIT = 64


@dataclass(frozen=True)
class ExponentSeries:
    """The exponents c(1..M) of an infinite-product expansion, exact.

    ``h`` is the leading order of the source form (the q^h prefactor);
    ``source`` is a free-form provenance string carried into reports.
    """

    values: tuple[Fraction, ...]
    h: int
    source: str | None = None

    @property
    def order(self) -> int:
        """Largest m for which c(m) is known."""
        return len(self.values)

    def c(self, m: int) -> Fraction:
        if not 1 <= m <= self.order:
            raise DomainError(f"c({m}) outside the computed range [1, {self.order}]")
        return self.values[m - 1]

    def __add__(self, other: "ExponentSeries") -> "ExponentSeries":
        """Termwise sum to the common order (exponents of a product of forms)."""
        if not isinstance(other, ExponentSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return ExponentSeries(
            values=tuple(a + b for a, b in zip(self.values[:n], other.values[:n])),
            h=self.h + other.h,
            source=None,
        )

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values)


def _check_normalized(f: QSeries, h: int) -> None:
    if not isinstance(h, int):
        raise DomainError("h must be an integer")
    if f.lead != h:
        raise NormalizationError(f"series has leading exponent {f.lead}, expected {h}")
    if f.coefficient(h) != 1:
        raise NormalizationError(
            f"leading coefficient a({h}) = {f.coefficient(h)}, expected 1"
        )


def extract(f: QSeries, h: int, source: str | None = None) -> ExponentSeries:
    """Product exponents of f = q^h(1 + ...), valid to order trunc(f) - 1.

    Exact: the series division runs over Fractions and the Möbius inversion
    is a finite divisor sum.
    """
    _check_normalized(f, h)
    order = f.trunc - 1
    if order < 1:
        raise InsufficientPrecisionError(
            "need at least trunc >= 2 to extract one exponent"
        )
    unit = f.shift(-h)
    log_deriv = unit.theta() * unit.reciprocal()  # theta(f)/f - h
    a = [Fraction(0)] * (order + 1)
    for n in range(1, order + 1):
        a[n] = log_deriv.coefficient(n)
    values = []
    for m in range(1, order + 1):
        s = Fraction(0)
        for d in divisors(m):
            mu = mobius(m // d)
            if mu:
                s += mu * a[d]
        values.append(-s / m)
    return ExponentSeries(values=tuple(values), h=h, source=source)


def one_minus_qpow(m: int, exponent: Rational, order: int) -> QSeries:
    """(1 - q^m)^exponent to relative order ``order``, by the binomial
    series; ``exponent`` may be any exact rational."""
    if m < 1:
        raise DomainError("m must be a positive integer")
    if order < 1:
        raise DomainError("truncation order must be >= 1")
    e = Fraction(exponent)
    coeffs = [Fraction(0)] * (order + 1)
    coeffs[0] = Fraction(1)
    term = Fraction(1)
    for j in range(1, order // m + 1):
        term = term * (e - (j - 1)) / j  # binom(e, j), built incrementally
        coeffs[m * j] = -term if j & 1 else term
    return QSeries(0, coeffs)


def extract_oracle(
    f: QSeries, h: int, order: int, source: str | None = None
) -> ExponentSeries:
    """Brute-force exponent extraction for cross-checks (order <= 64).

    At step m the working series is prod_{j>=m} (1 - q^j)^{c(j)}
    = 1 - c(m) q^m + O(q^{m+1}), which forces c(m); dividing that factor
    out moves on to m + 1.  Independent of :func:`extract`.
    """
    if order > _ORACLE_LIMIT:
        raise DomainError(f"oracle is test-scale only (order <= {_ORACLE_LIMIT})")
    if order < 1:
        raise DomainError("order must be >= 1")
    _check_normalized(f, h)
    if f.trunc < order:
        raise InsufficientPrecisionError(
            f"series holds {f.trunc} guaranteed orders, need {order}"
        )
    work = f.shift(-h).truncate(order)
    values = []
    for m in range(1, order + 1):
        cm = -work.coefficient(m)
        values.append(cm)
        if cm:
            work = work * one_minus_qpow(m, -cm, order)
    return ExponentSeries(values=tuple(values), h=h, source=source)


def reconstruct(exponents: ExponentSeries) -> QSeries:
    """q^h prod_{m<=M} (1 - q^m)^{c(m)}, exact to absolute order h + M."""
    order = exponents.order
    out = QSeries.one(order)
    for m, cm in enumerate(exponents.values, start=1):
        if cm:
            out = out * one_minus_qpow(m, cm, order)
    return out.shift(exponents.h)


def vanishing_indices(a: QSeries, bound: int) -> list[int]:
    """Odd m <= bound whose expansion certifies a vanishing coefficient at
    some prime divisor: a(p) = 0 for some p | m.

    ``a`` must be a normalized weight-2 expansion with a(1) = 1 and
    coefficients valid through ``bound``.
    """
    if a.lead != 1 or a.coefficient(1) != 1:
        raise NormalizationError("expected a normalized expansion with a(1) = 1")
    if bound < 1:
        return []
    if a.max_exponent < bound:
        raise InsufficientPrecisionError(
            f"expansion valid to q^{a.max_exponent}, need q^{bound}"
        )
    zero_primes = [
        p for p in primes_upto(bound) if p > 2 and a.coefficient(p) == 0
    ]
    return [
        m
        for m in range(1, bound + 1, 2)
        if any(m % p == 0 for p in zero_primes)
    ]


# -- exponent CSV --------------------------------------------------------------

_EXACT_RE = re.compile(r"^[+-]?\d+(?:/[1-9]\d*)?$")


def write_exponents(path: Union[str, Path], exponents: ExponentSeries) -> None:
    """Emit an ``m,c_m`` CSV, m ascending from 1, exact values."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("m,c_m\n")
        for m, cm in enumerate(exponents.values, start=1):
            fh.write(f"{m},{cm}\n")


def read_exponents(path: Union[str, Path]) -> ExponentSeries:
    """Read an ``m,c_m`` CSV back.  The file format does not carry h, so the
    result has h = 0; growth fits and bound checks never use h."""
    values: list[Fraction] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError("empty file", line=1)
        if [h.strip() for h in header] != ["m", "c_m"]:
            raise ParseError(f"expected header 'm,c_m', got {','.join(header)!r}", line=1)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"expected two fields, got {len(row)}", line=line_no)
            try:
                m = int(row[0])
            except ValueError:
                raise ParseError(f"bad index {row[0]!r}", line=line_no) from None
            if m != len(values) + 1:
                raise ParseError(
                    f"indices must ascend contiguously from 1; got {m}", line=line_no
                )
            text = row[1].strip()
            if not _EXACT_RE.match(text):
                raise ParseError(f"not an exact rational: {text!r}", line=line_no)
            values.append(Fraction(text))
    if not values:
        raise ParseError("no data rows", line=1)
    return ExponentSeries(values=tuple(values), h=0, source=str(path))
