"""Number-theoretic primitives: factorization, Möbius, divisor sums,
Euler phi, and Kloosterman sums with a high-precision real accumulator.

Everything here is a pure function of its arguments; results for the
trigonometric tables are cached per modulus.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .errors import DomainError

__all__ = [
    "KloostermanSum",
    "divisors",
    "euler_phi",
    "factorize",
    "kloosterman",
    "mobius",
    "primes_upto",
    "sigma",
    "tau",
]

# Fixed-point scale of the high-precision cosine accumulator.  Each table
# entry is exact to 2^-_ACC_BITS, so a sum of c < 2^20 terms keeps well over
# 100 significant bits: >= 50 bits beyond IEEE double, as required for the
# Weil-bound checks to be meaningful.
_ACC_BITS = 140
_TABLE_PREC = _ACC_BITS + 20


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division, as ``{prime: multiplicity}``."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(n: int) -> int:
    """Möbius function: 0 on non-squarefree n, else (-1)^(number of primes)."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def sigma(j: int, n: int) -> int:
    """Divisor power sum sigma_j(n) = sum of d^j over d | n, exact."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    if j < 0:
        raise DomainError("power j must be non-negative")
    total = 1
    for p, e in factorize(n).items():
        if j == 0:
            total *= e + 1
        else:
            pj = p**j
            total *= (pj ** (e + 1) - 1) // (pj - 1)
    return total


def tau(n: int) -> int:
    """Number of divisors of n."""
    return sigma(0, n)


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p**i for d in out for i in range(e + 1)]
    out.sort()
    return out


def euler_phi(n: int) -> int:
    """Euler totient."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    total = n
    for p in factorize(n):
        total = total // p * (p - 1)
    return total


def primes_upto(n: int) -> list[int]:
    """Primes <= n by a byte sieve (desk scale)."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(2, n + 1) if sieve[p]]


@dataclass(frozen=True)
class KloostermanSum:
    """K(a, b; c) = sum over units d mod c of exp(2*pi*i*(a*d + b*d*)/c),
    where d* is the inverse of d mod c.

    ``value`` is the double-precision complex sum.  ``exact_real`` is the
    real part accumulated in fixed point with ~140 significant bits; the
    sum itself is real (d <-> -d pairs terms into conjugates) and is an
    algebraic integer.  Satisfies the Weil bound
    |K| <= tau(c) * sqrt(gcd(a, b, c)) * sqrt(c) and K(a,b;c) = K(b,a;c).
    """

    a: int
    b: int
    c: int
    value: complex
    exact_real: mpmath.mpf

    @property
    def weil_bound(self) -> float:
        return tau(self.c) * math.sqrt(math.gcd(self.a, self.b, self.c)) * math.sqrt(self.c)


@lru_cache(maxsize=None)
def _unit_inverse_pairs(c: int) -> tuple[tuple[int, int], ...]:
    """(d, d^-1 mod c) for every unit d mod c.  For c = 1 the single
    residue 0 is its own inverse (empty exponent)."""
    if c == 1:
        return ((0, 0),)
    return tuple((d, pow(d, -1, c)) for d in range(c) if math.gcd(d, c) == 1)


@lru_cache(maxsize=None)
def _trig_tables(c: int):
    """cos/sin(2*pi*k/c) for k = 0..c-1: fixed-point cosines plus float
    cos/sin tables.  Mirrored around c/2 so conjugate residues share bits."""
    cos_fixed = [0] * c
    cos_f = [0.0] * c
    sin_f = [0.0] * c
    with mpmath.workprec(_TABLE_PREC):
        two_pi = 2 * mpmath.pi
        for k in range(c // 2 + 1):
            ck = mpmath.cos(two_pi * k / c)
            sk = mpmath.sin(two_pi * k / c)
            fixed = int(mpmath.nint(mpmath.ldexp(ck, _ACC_BITS)))
            cos_fixed[k] = fixed
            cos_f[k] = float(ck)
            sin_f[k] = float(sk)
            if k and k != c - k:
                cos_fixed[c - k] = fixed
                cos_f[c - k] = cos_f[k]
                sin_f[c - k] = -sin_f[k]
    return tuple(cos_fixed), tuple(cos_f), tuple(sin_f)


def kloosterman(a: int, b: int, c: int) -> KloostermanSum:
    """Evaluate K(a, b; c) by direct enumeration over the units mod c.

    O(c) terms; the modular inverses and the trigonometric tables are
    cached per modulus, so sweeps over many (a, b) at a fixed c are cheap.
    """
    if c < 1:
        raise DomainError("modulus c must be a positive integer")
    pairs = _unit_inverse_pairs(c)
    cos_fixed, cos_f, sin_f = _trig_tables(c)
    acc = 0
    re = 0.0
    im = 0.0
    for d, dinv in pairs:
        k = (a * d + b * dinv) % c
        acc += cos_fixed[k]
        re += cos_f[k]
        im += sin_f[k]
    with mpmath.workprec(_TABLE_PREC):
        exact = mpmath.ldexp(mpmath.mpf(acc), -_ACC_BITS)
    return KloostermanSum(a=a, b=b, c=c, value=complex(re, im), exact_real=exact)
