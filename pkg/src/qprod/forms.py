"""Constructors for classical q-expansions and level data.

Covers eta quotients prod_d eta(d z)^{r_d}, the Eisenstein series E_2, E_4,
E_6 (optionally rescaled q -> q^d), the discriminant Delta = eta^24, the
weight-2 completion of the logarithmic derivative theta(f)/f, the standard
index/elliptic-point/cusp/genus data of X_0(N), and ingestion of externally
tabulated coefficient files.

Only q-expansions are manipulated here; modular transformation behavior is
never verified.
"""

import csv
import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Union

from .arith import divisors, euler_phi, factorize, sigma
from .errors import (
    DomainError,
    FractionalExponentError,
    InsufficientPrecisionError,
    InternalConsistencyError,
    NormalizationError,
    ParseError,
    SpecValidationError,
)
from .qseries import QSeries

__all__ = [
    "ETA_NEWFORM_EXPONENTS",
    "FormSpec",
    "LevelData",
    "build",
    "delta",
    "eisenstein",
    "eta",
    "f_theta",
    "ingest_coefficients",
    "level_data",
    "load_spec",
    "newform",
    "newform_spec",
    "write_coefficients",
]


# -- basic expansions -------------------------------------------------------


def eta(scale: int, order: int) -> QSeries:
    """q-expansion of eta(scale*z) = q^(scale/24) prod_m (1 - q^(scale*m)).

    Expanded through Euler's pentagonal-number identity
    prod (1 - q^m) = sum_k (-1)^k q^(k(3k-1)/2), exact to relative order
    scale*order (factors with m > order start beyond that range).
    """
    if scale < 1:
        raise DomainError("eta scale must be a positive integer")
    if order < 1:
        raise DomainError("truncation order must be >= 1")
    coeffs = [Fraction(0)] * (scale * order + 1)
    coeffs[0] = Fraction(1)
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > order:
            break
        s = -1 if k & 1 else 1
        coeffs[scale * g1] += s
        g2 = k * (3 * k + 1) // 2
        if g2 <= order:
            coeffs[scale * g2] += s
        k += 1
    return QSeries(Fraction(scale, 24), coeffs)


def delta(order: int) -> QSeries:
    """The discriminant form eta(z)^24 = q - 24q^2 + 252q^3 - ..."""
    return eta(1, order).pow_int(24)


_EISENSTEIN = {2: (-24, 1), 4: (240, 3), 6: (-504, 5)}


def eisenstein(weight: int, order: int, scale: int = 1) -> QSeries:
    """Normalized Eisenstein series of weight 2, 4 or 6:

        E_2 = 1 - 24 sum sigma_1(n) q^n
        E_4 = 1 + 240 sum sigma_3(n) q^n
        E_6 = 1 - 504 sum sigma_5(n) q^n

    ``scale`` substitutes q -> q^scale (i.e. E_k(scale*z)).
    """
    if weight not in _EISENSTEIN:
        raise SpecValidationError("Eisenstein weight must be 2, 4 or 6")
    if scale < 1:
        raise DomainError("scale must be a positive integer")
    if order < 1:
        raise DomainError("truncation order must be >= 1")
    mult, j = _EISENSTEIN[weight]
    base_order = max(-(-(order + 1) // scale) - 1, 1)
    coeffs = [Fraction(1)]
    coeffs += [Fraction(mult * sigma(j, n)) for n in range(1, base_order + 1)]
    series = QSeries(0, coeffs)
    if scale > 1:
        series = series.rescale(scale)
    return series.truncate(order)


# -- declarative form specifications ----------------------------------------

_KINDS = (
    "eta_quotient",
    "eisenstein",
    "delta",
    "file",
    "product",
    "linear_combination",
    "power",
)

_SPEC_FIELDS = {
    "kind",
    "level",
    "weight",
    "eta_exponents",
    "eisenstein_weight",
    "eisenstein_scale",
    "path",
    "children",
    "coefficients",
    "exponent",
}


@dataclass
class FormSpec:
    """Declarative description of a modular form construction.

    ``kind`` selects the constructor; the remaining fields apply per kind:

    - ``eta_quotient``: ``level`` N, ``eta_exponents`` {d: r_d} with every d
      dividing N and sum(d*r_d) divisible by 24; declared ``weight`` (if
      given) must equal sum(r_d)/2.
    - ``eisenstein``: ``eisenstein_weight`` in {2, 4, 6}, optional
      ``eisenstein_scale`` d meaning E_k(d*z).
    - ``delta``: no parameters.
    - ``file``: ``path`` of an ``n,a_n`` coefficient CSV.
    - ``product`` / ``linear_combination``: ``children`` sub-specs; a linear
      combination takes optional exact ``coefficients`` (default all 1).
    - ``power``: a single child and an integer ``exponent``.
    """

    kind: str
    level: int | None = None
    weight: int | None = None
    eta_exponents: dict[int, int] | None = None
    eisenstein_weight: int | None = None
    eisenstein_scale: int = 1
    path: Union[str, Path, None] = None
    children: tuple["FormSpec", ...] = ()
    coefficients: tuple[Fraction, ...] = ()
    exponent: int | None = None

    def validate(self) -> None:
        if self.kind not in _KINDS:
            raise SpecValidationError(f"unknown kind {self.kind!r}")
        getattr(self, f"_validate_{self.kind}")()

    def _validate_eta_quotient(self) -> None:
        if not self.eta_exponents:
            raise SpecValidationError("eta_quotient requires eta_exponents")
        if self.level is None or self.level < 1:
            raise SpecValidationError("eta_quotient requires a positive level")
        for d in self.eta_exponents:
            if d < 1 or self.level % d:
                raise SpecValidationError(
                    f"eta exponent key {d} does not divide level {self.level}"
                )
        weighted = sum(d * r for d, r in self.eta_exponents.items())
        if weighted % 24:
            raise FractionalExponentError(
                f"sum of d*r_d is {weighted}, not divisible by 24: "
                "the quotient would have a fractional leading exponent"
            )
        total = sum(self.eta_exponents.values())
        if total % 2 or total < 0:
            raise SpecValidationError(
                f"sum of eta exponents is {total}; the weight {total}/2 "
                "must be a non-negative integer"
            )
        if self.weight is not None and self.weight != total // 2:
            raise SpecValidationError(
                f"declared weight {self.weight} != sum(r_d)/2 = {total // 2}"
            )

    def _validate_eisenstein(self) -> None:
        if self.eisenstein_weight not in _EISENSTEIN:
            raise SpecValidationError("eisenstein_weight must be 2, 4 or 6")
        if self.eisenstein_scale < 1:
            raise SpecValidationError("eisenstein_scale must be a positive integer")

    def _validate_delta(self) -> None:
        pass

    def _validate_file(self) -> None:
        if not self.path:
            raise SpecValidationError("file kind requires a path")

    def _validate_product(self) -> None:
        if not self.children:
            raise SpecValidationError("product requires at least one child")
        for child in self.children:
            child.validate()

    def _validate_linear_combination(self) -> None:
        if not self.children:
            raise SpecValidationError("linear_combination requires children")
        if self.coefficients and len(self.coefficients) != len(self.children):
            raise SpecValidationError(
                f"{len(self.coefficients)} coefficients for {len(self.children)} children"
            )
        for child in self.children:
            child.validate()

    def _validate_power(self) -> None:
        if len(self.children) != 1:
            raise SpecValidationError("power requires exactly one child")
        if self.exponent is None:
            raise SpecValidationError("power requires an integer exponent")
        self.children[0].validate()

    @property
    def eta_lead(self) -> int:
        """Leading exponent h = sum(d*r_d)/24 of an eta quotient."""
        if self.kind != "eta_quotient":
            raise DomainError("eta_lead is defined for eta_quotient specs only")
        return sum(d * r for d, r in self.eta_exponents.items()) // 24

    # -- JSON (de)serialization; unknown fields are rejected ----------------

    @classmethod
    def from_dict(cls, data: dict) -> "FormSpec":
        if not isinstance(data, dict):
            raise SpecValidationError("form spec must be a JSON object")
        unknown = set(data) - _SPEC_FIELDS
        if unknown:
            raise SpecValidationError(f"unknown spec fields: {sorted(unknown)}")
        if "kind" not in data:
            raise SpecValidationError("spec is missing the 'kind' field")
        kwargs: dict = {"kind": data["kind"]}
        for name in ("level", "weight", "eisenstein_weight", "exponent"):
            if name in data:
                kwargs[name] = _spec_int(name, data[name])
        if "eisenstein_scale" in data:
            kwargs["eisenstein_scale"] = _spec_int("eisenstein_scale", data["eisenstein_scale"])
        if "path" in data:
            kwargs["path"] = data["path"]
        if "eta_exponents" in data:
            raw = data["eta_exponents"]
            if not isinstance(raw, dict):
                raise SpecValidationError("eta_exponents must be an object {d: r_d}")
            try:
                kwargs["eta_exponents"] = {int(d): _spec_int("r_d", r) for d, r in raw.items()}
            except ValueError:
                raise SpecValidationError("eta_exponents keys must be integers") from None
        if "children" in data:
            kwargs["children"] = tuple(cls.from_dict(ch) for ch in data["children"])
        if "coefficients" in data:
            try:
                kwargs["coefficients"] = tuple(
                    Fraction(str(x)) for x in data["coefficients"]
                )
            except (ValueError, ZeroDivisionError):
                raise SpecValidationError("coefficients must be exact rationals") from None
        return cls(**kwargs)

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.level is not None:
            out["level"] = self.level
        if self.weight is not None:
            out["weight"] = self.weight
        if self.eta_exponents is not None:
            out["eta_exponents"] = {str(d): r for d, r in sorted(self.eta_exponents.items())}
        if self.eisenstein_weight is not None:
            out["eisenstein_weight"] = self.eisenstein_weight
        if self.eisenstein_scale != 1:
            out["eisenstein_scale"] = self.eisenstein_scale
        if self.path is not None:
            out["path"] = str(self.path)
        if self.children:
            out["children"] = [ch.to_dict() for ch in self.children]
        if self.coefficients:
            out["coefficients"] = [str(c) for c in self.coefficients]
        if self.exponent is not None:
            out["exponent"] = self.exponent
        return out

    def describe(self) -> str:
        """Short human-readable provenance string for reports."""
        if self.kind == "eta_quotient":
            parts = "*".join(
                f"eta({d}z)^{r}" for d, r in sorted(self.eta_exponents.items())
            )
            return f"{parts} [level {self.level}]"
        if self.kind == "eisenstein":
            tag = f"E{self.eisenstein_weight}"
            return tag if self.eisenstein_scale == 1 else f"{tag}({self.eisenstein_scale}z)"
        if self.kind == "delta":
            return "delta"
        if self.kind == "file":
            return f"file:{self.path}"
        return self.kind


def _spec_int(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecValidationError(f"{name} must be an integer")
    return value


def load_spec(path: Union[str, Path]) -> FormSpec:
    """Read and validate a FormSpec JSON file."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from None
    spec = FormSpec.from_dict(data)
    spec.validate()
    return spec


# -- building q-expansions from specs ----------------------------------------


def build(spec: FormSpec, order: int) -> QSeries:
    """q-expansion of ``spec`` to relative order ``order``, exact.

    Eta quotients come out with integer lead h = sum(d*r_d)/24, integer
    coefficients and leading coefficient 1; the constructed lead is
    cross-checked against the declared exponents.
    """
    spec.validate()
    if order < 1:
        raise DomainError("truncation order must be >= 1")
    kind = spec.kind
    if kind == "delta":
        return delta(order)
    if kind == "eisenstein":
        return eisenstein(spec.eisenstein_weight, order, spec.eisenstein_scale)
    if kind == "file":
        return ingest_coefficients(spec.path, order)
    if kind == "eta_quotient":
        return _build_eta_quotient(spec, order)
    if kind == "product":
        out = build(spec.children[0], order)
        for child in spec.children[1:]:
            out = out * build(child, order)
        return out
    if kind == "linear_combination":
        weights = spec.coefficients or tuple(Fraction(1) for _ in spec.children)
        out = build(spec.children[0], order).scale(weights[0])
        for child, w in zip(spec.children[1:], weights[1:]):
            out = out + build(child, order).scale(w)
        return out
    if kind == "power":
        return build(spec.children[0], order).pow_int(spec.exponent)
    raise SpecValidationError(f"unknown kind {kind!r}")


def _build_eta_quotient(spec: FormSpec, order: int) -> QSeries:
    out = None
    for d in sorted(spec.eta_exponents):
        r = spec.eta_exponents[d]
        if r == 0:
            continue
        factor = eta(d, -(-order // d)).pow_int(r).truncate(order)
        out = factor if out is None else out * factor
    if out is None:
        out = QSeries.one(order)
    if out.lead != spec.eta_lead:
        raise InternalConsistencyError(
            f"constructed lead {out.lead} != sum(d*r_d)/24 = {spec.eta_lead}"
        )
    return out


# -- weight-2 completion of the logarithmic derivative ------------------------


def f_theta(f: QSeries, weight: int, h: int, level: int, order: int) -> QSeries:
    """Weight-2 completion of theta(f)/f for a normalized form of weight
    ``weight``, vanishing order ``h`` at infinity and level ``level`` >= 2:

        theta(f)/f + (weight/12 - h)/(level-1) * level * E_2(level*z)
                   + (h - level*weight/12)/(level-1) * E_2(z)

    expanded to absolute order ``order``, exact rationals throughout.  The
    constant term cancels identically, so the result starts at q^1 or later.
    """
    if level < 2:
        raise DomainError(
            "level must be >= 2: the weight-2 completion divides by level - 1"
        )
    if not isinstance(h, int):
        raise DomainError("h must be an integer")
    if f.lead != h:
        raise NormalizationError(f"series has leading exponent {f.lead}, expected {h}")
    if f.coefficient(h) != 1:
        raise NormalizationError("leading coefficient must be 1")
    if order < 1:
        raise DomainError("truncation order must be >= 1")
    if f.trunc < order:
        raise InsufficientPrecisionError(
            f"series holds {f.trunc} guaranteed orders, need {order}"
        )
    unit = f.shift(-h)
    log_deriv = unit.theta() * unit.reciprocal()  # theta(f)/f - h
    w_scaled = (Fraction(weight, 12) - h) * level / (level - 1)
    w_plain = (h - Fraction(level * weight, 12)) / (level - 1)
    total = QSeries.constant(h, order)
    total = total + eisenstein(2, order, scale=level).scale(w_scaled)
    total = total + eisenstein(2, order).scale(w_plain)
    total = total + log_deriv
    if total.is_zero:
        return total
    return total.truncate(int(order - total.lead))


# -- X_0(N) level data --------------------------------------------------------


@dataclass(frozen=True)
class LevelData:
    """Index, elliptic point counts, cusp count and genus of X_0(N)."""

    level: int
    index: int
    nu2: int
    nu3: int
    nu_inf: int
    genus: int

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "index": self.index,
            "nu2": self.nu2,
            "nu3": self.nu3,
            "nu_inf": self.nu_inf,
            "genus": self.genus,
        }


def _legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, by Euler's criterion."""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def level_data(level: int) -> LevelData:
    """Standard X_0(N) data:

        index  = N prod_{p|N} (1 + 1/p)
        nu2    = 0 if 4|N else prod (1 + (-1/p))   [(-1/2) = 0]
        nu3    = 0 if 9|N else prod (1 + (-3/p))   [(-3/2) = -1, (-3/3) = 0]
        nu_inf = sum_{d|N} phi(gcd(d, N/d))
        genus  = 1 + index/12 - nu2/4 - nu3/3 - nu_inf/2
    """
    if level < 1:
        raise DomainError("level must be a positive integer")
    primes = list(factorize(level))
    index = level
    for p in primes:
        index = index // p * (p + 1)

    if level % 4 == 0:
        nu2 = 0
    else:
        nu2 = 1
        for p in primes:
            nu2 *= 1 + (0 if p == 2 else _legendre(-1, p))
    if level % 9 == 0:
        nu3 = 0
    else:
        nu3 = 1
        for p in primes:
            nu3 *= 1 + (-1 if p == 2 else _legendre(-3, p))

    nu_inf = sum(euler_phi(math.gcd(d, level // d)) for d in divisors(level))

    genus = (
        Fraction(1)
        + Fraction(index, 12)
        - Fraction(nu2, 4)
        - Fraction(nu3, 3)
        - Fraction(nu_inf, 2)
    )
    if genus.denominator != 1 or genus < 0:
        raise InternalConsistencyError(
            f"genus formula returned {genus} for level {level}"
        )
    return LevelData(
        level=level, index=index, nu2=nu2, nu3=nu3, nu_inf=nu_inf, genus=int(genus)
    )


# -- built-in weight-2 newforms ----------------------------------------------

# The eight levels whose (unique, genus-relevant) weight-2 newform is an eta
# quotient; exponents {d: r_d}.  All have lead h = 1 and weight 2.
ETA_NEWFORM_EXPONENTS: dict[int, dict[int, int]] = {
    11: {1: 2, 11: 2},
    14: {1: 1, 2: 1, 7: 1, 14: 1},
    15: {1: 1, 3: 1, 5: 1, 15: 1},
    20: {2: 2, 10: 2},
    24: {2: 1, 4: 1, 6: 1, 12: 1},
    27: {3: 2, 9: 2},
    32: {4: 2, 8: 2},
    36: {6: 4},
}


def newform_spec(level: int) -> FormSpec:
    """FormSpec of the built-in weight-2 eta-quotient newform at ``level``."""
    try:
        exponents = ETA_NEWFORM_EXPONENTS[level]
    except KeyError:
        raise DomainError(
            f"no built-in eta-quotient newform at level {level}; "
            f"available levels: {sorted(ETA_NEWFORM_EXPONENTS)}"
        ) from None
    return FormSpec(kind="eta_quotient", level=level, weight=2, eta_exponents=dict(exponents))


def newform(level: int, order: int) -> QSeries:
    return build(newform_spec(level), order)


# -- coefficient CSV ----------------------------------------------------------

_EXACT_RE = re.compile(r"^[+-]?\d+(?:/[1-9]\d*)?$")


def _parse_exact(text: str, line_no: int) -> Fraction:
    text = text.strip()
    if not _EXACT_RE.match(text):
        raise ParseError(
            f"not an exact integer or p/q rational: {text!r}", line=line_no
        )
    return Fraction(text)


def ingest_coefficients(path: Union[str, Path], order: int) -> QSeries:
    """Read an ``n,a_n`` coefficient CSV into a QSeries valid to relative
    order ``order``.

    Exponents must ascend contiguously; values are exact decimal integers or
    p/q strings (no floats, no scientific notation).  The first nonzero
    coefficient must be exactly 1 and at least ``order`` rows must follow it.
    """
    if order < 1:
        raise DomainError("truncation order must be >= 1")
    rows: list[tuple[int, Fraction]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ParseError("empty file", line=1)
        if [h.strip() for h in header] != ["n", "a_n"]:
            raise ParseError(
                f"expected header 'n,a_n', got {','.join(header)!r}", line=1
            )
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"expected two fields, got {len(row)}", line=line_no)
            try:
                n = int(row[0])
            except ValueError:
                raise ParseError(f"bad exponent {row[0]!r}", line=line_no) from None
            if rows and n != rows[-1][0] + 1:
                raise ParseError(
                    f"exponents must ascend contiguously; {n} follows {rows[-1][0]}",
                    line=line_no,
                )
            rows.append((n, _parse_exact(row[1], line_no)))
    if not rows:
        raise ParseError("no data rows", line=1)
    first = next((i for i, (_, a) in enumerate(rows) if a != 0), None)
    if first is None:
        raise NormalizationError("all coefficients are zero")
    h, lead_coeff = rows[first]
    if lead_coeff != 1:
        raise NormalizationError(
            f"leading coefficient a({h}) = {lead_coeff}, expected 1"
        )
    if len(rows) - first < order + 1:
        raise InsufficientPrecisionError(
            f"{len(rows) - first - 1} rows past the lead, need {order}"
        )
    return QSeries(h, [a for _, a in rows[first : first + order + 1]])


def write_coefficients(path: Union[str, Path], series: QSeries, max_exponent: int | None = None) -> None:
    """Emit a QSeries as an ``n,a_n`` CSV (exact values, one row per exponent
    from the lead, optionally capped at ``max_exponent``)."""
    if series.lead.denominator != 1:
        raise FractionalExponentError(
            f"coefficient CSV requires an integer lead, got {series.lead}"
        )
    h = int(series.lead)
    top = int(series.max_exponent)
    if max_exponent is not None:
        top = min(top, max_exponent)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("n,a_n\n")
        for n in range(h, top + 1):
            fh.write(f"{n},{series.coefficient(n)}\n")
