"""Exact rational arithmetic backbone.

Bernoulli numbers and polynomials, Hurwitz zeta values at non-positive
integers, generalized binomials, Pochhammer symbols, and reduction of
rationals modulo odd prime powers.  Everything here is computed in
``fractions.Fraction`` (eagerly normalized, positive denominator) so the
congruence machinery built on top stays well defined.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb
from typing import Union

Rat = Fraction
RatLike = Union[Fraction, int]

__all__ = [
    "Rat",
    "DenominatorNotInvertible",
    "bernoulli_number",
    "bernoulli_poly",
    "hurwitz_zeta_nonpos",
    "binom_general",
    "pochhammer",
    "rational_mod_prime_power",
    "padic_valuation",
]


class DenominatorNotInvertible(ArithmeticError):
    """Reduction of x mod p^e requested while p divides the denominator of x."""


class _BernoulliCache:
    """Lazy shared table of B_0, B_1, ... (convention B_1 = -1/2).

    Values are produced by the Akiyama-Tanigawa triangle, which natively
    yields the B_1 = +1/2 convention; the single sign flip at index 1 is
    applied on read.  The table only ever grows and entries are immutable,
    so concurrent readers are safe; extension happens under a lock.
    """

    def __init__(self) -> None:
        self._row: list[Fraction] = []
        self._values: list[Fraction] = []
        self._lock = threading.Lock()

    def get(self, k: int) -> Fraction:
        if k < len(self._values):
            return self._values[k]
        with self._lock:
            while len(self._values) <= k:
                m = len(self._values)
                self._row.append(Fraction(1, m + 1))
                for j in range(m, 0, -1):
                    self._row[j - 1] = j * (self._row[j - 1] - self._row[j])
                self._values.append(self._row[0])
        return self._values[k]


_BERNOULLI = _BernoulliCache()


def bernoulli_number(k: int) -> Fraction:
    """B_k for the generating function t/(e^t - 1); B_1 = -1/2."""
    if k < 0:
        raise ValueError("Bernoulli index must be non-negative")
    if k == 1:
        return Fraction(-1, 2)
    return _BERNOULLI.get(k)


def bernoulli_poly(k: int, x: RatLike) -> Fraction:
    """Bernoulli polynomial B_k(x) = sum_j C(k,j) B_j x^(k-j), exact."""
    if k < 0:
        raise ValueError("Bernoulli index must be non-negative")
    x = Fraction(x)
    acc = Fraction(0)
    xpow = Fraction(1)
    # accumulate from j = k down so the running power of x stays incremental
    for j in range(k, -1, -1):
        acc += comb(k, j) * bernoulli_number(j) * xpow
        xpow *= x
    return acc


def hurwitz_zeta_nonpos(k: int, tau: RatLike) -> Fraction:
    """zeta(-k, tau) = -B_{k+1}(tau)/(k+1), exact for integer k >= 0."""
    if k < 0:
        raise ValueError("expected a non-positive argument -k with k >= 0")
    return -bernoulli_poly(k + 1, tau) / (k + 1)


def binom_general(a: RatLike, k: int) -> Fraction:
    """Generalized binomial a(a-1)...(a-k+1)/k! for rational a."""
    if k < 0:
        raise ValueError("lower index must be non-negative")
    a = Fraction(a)
    num = Fraction(1)
    for i in range(k):
        num *= a - i
    den = 1
    for i in range(2, k + 1):
        den *= i
    return num / den


def pochhammer(a: RatLike, n: int) -> Fraction:
    """Rising factorial (a)_n = a(a+1)...(a+n-1), with (a)_0 = 1."""
    if n < 0:
        raise ValueError("Pochhammer index must be non-negative")
    a = Fraction(a)
    out = Fraction(1)
    for i in range(n):
        out *= a + i
    return out


def padic_valuation(x: RatLike, p: int) -> int:
    """v_p(x) for a nonzero rational; raises on x = 0."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero is undefined")
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def rational_mod_prime_power(x: RatLike, p: int, e: int = 1) -> int:
    """x mod p^e in [0, p^e), via the modular inverse of the denominator.

    Raises DenominatorNotInvertible when p divides the denominator.
    """
    if e < 1:
        raise ValueError("exponent must be positive")
    x = Fraction(x)
    if x.denominator % p == 0:
        raise DenominatorNotInvertible(
            f"denominator {x.denominator} is divisible by p={p}"
        )
    modulus = p**e
    return (x.numerator * pow(x.denominator, -1, modulus)) % modulus
