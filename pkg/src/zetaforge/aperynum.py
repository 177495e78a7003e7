"""Apery numbers, Apery-like numbers and their congruence verifiers.

The classical Apery pairs (A2, B2) and (A3, B3) come from their three-term
recurrences with the binomial-sum closed forms as a second, independent
route.  The oscillator-model families J_k(n) (values in the Q-span of
{1, zeta(2,1/2), zeta(3,1/2), zeta(4,1/2)}) and their rational
normalizations tJ_k(n) are defined by closed binomial/harmonic sums; the
common three-term recurrence with a lower-index inhomogeneity is kept as
the oracle in the test-suite, never as the definition.

Congruence checkers return structured pass/fail reports with both residues;
they never raise on a failed congruence (the suite doubles as a research
probe).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from .exact import (
    DenominatorNotInvertible,
    Rat,
    binom_general,
    padic_valuation,
    rational_mod_prime_power,
)

ONE = "ONE"
HZ2 = "HZ2"  # zeta(2, 1/2)
HZ3 = "HZ3"  # zeta(3, 1/2)
HZ4 = "HZ4"  # zeta(4, 1/2)
_BASIS = (ONE, HZ2, HZ3, HZ4)

__all__ = [
    "ZetaCombo",
    "UnsupportedIndex",
    "IndexNotIntegral",
    "CongruenceReport",
    "apery2",
    "apery2_b",
    "apery2_closed",
    "apery3",
    "apery3_b",
    "apery3_closed",
    "aperylike_J",
    "aperylike_tJ",
    "tj_table",
    "congruence_pary_product",
    "supercongruence_check",
    "tj_supercongruence_check",
    "los_square_sum_check",
    "asd_congruence_check",
    "eta_coefficient",
]


class UnsupportedIndex(ValueError):
    """Requested family index outside the supported range."""


class IndexNotIntegral(ValueError):
    """A derived sequence index (mp^j - 1)/2 is not a non-negative integer."""


@dataclass(frozen=True)
class ZetaCombo:
    """Finite Q-linear combination over the basis {1, z2, z3, z4} with
    z_k = zeta(k, 1/2).  Zero coefficients are never stored."""

    coeffs: tuple  # sorted tuple of (symbol, Fraction)

    @classmethod
    def of(cls, mapping: dict) -> "ZetaCombo":
        items = []
        for sym, c in mapping.items():
            if sym not in _BASIS:
                raise UnsupportedIndex(f"unknown basis symbol {sym!r}")
            c = Fraction(c)
            if c != 0:
                items.append((sym, c))
        items.sort(key=lambda t: _BASIS.index(t[0]))
        return cls(tuple(items))

    @classmethod
    def zero(cls) -> "ZetaCombo":
        return cls(())

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def get(self, sym: str) -> Fraction:
        return dict(self.coeffs).get(sym, Fraction(0))

    def __add__(self, other: "ZetaCombo") -> "ZetaCombo":
        out = dict(self.coeffs)
        for sym, c in other.coeffs:
            out[sym] = out.get(sym, Fraction(0)) + c
        return ZetaCombo.of(out)

    def __sub__(self, other: "ZetaCombo") -> "ZetaCombo":
        return self + other.scale(-1)

    def scale(self, c) -> "ZetaCombo":
        c = Fraction(c)
        return ZetaCombo.of({sym: c * v for sym, v in self.coeffs})

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return all(sym == ONE for sym, _ in self.coeffs)

    def to_json(self) -> dict:
        return {sym: f"{c.numerator}/{c.denominator}" for sym, c in self.coeffs}


# ---------------------------------------------------------------------------
# classical Apery sequences
# ---------------------------------------------------------------------------

import threading

_SEQ_LOCK = threading.Lock()
_A2: list = [1, 3]
_B2: list = [Fraction(0), Fraction(5)]
_A3: list = [1, 5]
_B3: list = [Fraction(0), Fraction(6)]


def _extend_zeta2(table: list, n: int) -> None:
    with _SEQ_LOCK:
        integral = isinstance(table[0], int)
        while len(table) <= n:
            m = len(table)
            val = (11 * m * m - 11 * m + 3) * table[m - 1] + (m - 1) ** 2 * table[m - 2]
            table.append(_exact_div(val, m * m) if integral else val / (m * m))


def _extend_zeta3(table: list, n: int) -> None:
    with _SEQ_LOCK:
        integral = isinstance(table[0], int)
        while len(table) <= n:
            m = len(table)
            val = (
                (34 * m**3 - 51 * m * m + 27 * m - 5) * table[m - 1]
                - (m - 1) ** 3 * table[m - 2]
            )
            table.append(_exact_div(val, m**3) if integral else val / (m**3))


def _exact_div(val: int, den: int) -> int:
    q, r = divmod(val, den)
    if r != 0:
        raise ArithmeticError("integer Apery recurrence produced a non-integer")
    return q


def apery2(n: int) -> int:
    """n-th Apery number for zeta(2) via its recurrence; integrality asserted."""
    if n < 0:
        raise ValueError("index must be non-negative")
    _extend_zeta2(_A2, n)
    return _A2[n]


def apery2_b(n: int) -> Fraction:
    """Companion sequence B2(n) (rational) from the same recurrence."""
    if n < 0:
        raise ValueError("index must be non-negative")
    _extend_zeta2(_B2, n)
    return _B2[n]


def apery3(n: int) -> int:
    """n-th Apery number for zeta(3) via its recurrence; integrality asserted."""
    if n < 0:
        raise ValueError("index must be non-negative")
    _extend_zeta3(_A3, n)
    return _A3[n]


def apery3_b(n: int) -> Fraction:
    if n < 0:
        raise ValueError("index must be non-negative")
    _extend_zeta3(_B3, n)
    return _B3[n]


def apery2_closed(n: int) -> int:
    """Binomial-sum route: sum_k C(n,k)^2 C(n+k,k)."""
    return sum(comb(n, k) ** 2 * comb(n + k, k) for k in range(n + 1))


def apery3_closed(n: int) -> int:
    """Binomial-sum route: sum_k C(n,k)^2 C(n+k,k)^2."""
    return sum(comb(n, k) ** 2 * comb(n + k, k) ** 2 for k in range(n + 1))


# ---------------------------------------------------------------------------
# Apery-like families for the oscillator model
# ---------------------------------------------------------------------------


def _central_sq(k: int) -> Fraction:
    """C(-1/2, k)^2 = (C(2k,k)/4^k)^2."""
    c = Fraction(comb(2 * k, k), 4**k)
    return c * c


def _zsum_even(s: int, kmax: int) -> list:
    """Prefix tables of the nested even sums:

    e_s(k) = sum_{k > j1 > ... > js >= 0} prod 1/(j_i + 1/2)^2, e_0(k) = 1.
    """
    e = [Fraction(1)] * (kmax + 1)
    for _ in range(s):
        nxt = [Fraction(0)] * (kmax + 1)
        acc = Fraction(0)
        for k in range(1, kmax + 1):
            j = k - 1
            acc += e[j] / (Fraction(2 * j + 1, 2) ** 2)
            nxt[k] = acc
        e = nxt
    return e


def _zsum_odd(s: int, kmax: int) -> list:
    """Nested odd sums: innermost factor 1/(j+1/2)^3 * C(-1/2,j)^{-2}."""
    o = [Fraction(0)] * (kmax + 1)
    acc = Fraction(0)
    for k in range(1, kmax + 1):
        j = k - 1
        acc += 1 / (Fraction(2 * j + 1, 2) ** 3 * _central_sq(j))
        o[k] = acc
    for _ in range(s - 1):
        nxt = [Fraction(0)] * (kmax + 1)
        acc = Fraction(0)
        for k in range(1, kmax + 1):
            j = k - 1
            acc += o[j] / (Fraction(2 * j + 1, 2) ** 2)
            nxt[k] = acc
        o = nxt
    return o


def tj_table(k: int, n_max: int) -> list:
    """tJ_k(0..n_max) as exact rationals.

    Even k = 2s+2: tJ_k(n) = sum_j (-1)^j C(-1/2,j)^2 C(n,j) Zeven_s(j);
    odd  k = 2s+1 (s >= 1): same with Zodd_s(j).
    """
    if k < 2 or k > 6:
        raise UnsupportedIndex(f"tJ_{k} outside the supported range 2..6")
    if k % 2 == 0:
        s = (k - 2) // 2
        z = _zsum_even(s, n_max)
        sign = (-1) ** s
        weights = [Fraction(sign) * z[j] for j in range(n_max + 1)]
    else:
        s = (k - 1) // 2
        z = _zsum_odd(s, n_max)
        sign = (-1) ** s
        weights = [Fraction(sign, 2) * z[j] for j in range(n_max + 1)]
    core = [(-1) ** j * _central_sq(j) * weights[j] for j in range(n_max + 1)]
    out = []
    for n in range(n_max + 1):
        out.append(sum((core[j] * comb(n, j) for j in range(n + 1)), Fraction(0)))
    return out


def aperylike_tJ(k: int, n: int) -> Fraction:
    """Normalized Apery-like number tJ_k(n), exact rational."""
    if n < 0:
        raise ValueError("index must be non-negative")
    return tj_table(k, n)[n]


def _j1(n: int) -> Fraction:
    """J_1(n) = 2^n n! / (2n+1)!!."""
    num = 2**n
    for i in range(2, n + 1):
        num *= i
    den = 1
    for i in range(1, 2 * n + 2, 2):
        den *= i
    return Fraction(num, den)


def aperylike_J(k: int, n: int) -> ZetaCombo:
    """Apery-like number J_k(n) for k in 0..4 as a ZetaCombo.

    Closed forms: J_2 = z2 * tJ2(n); J_3 = tJ3(n) + 2 z3 * tJ2(n);
    J_4 = z2 * tJ4(n) + 3 z4 * tJ2(n); J_1 rational; J_0 = 0.
    """
    if n < 0:
        raise ValueError("index must be non-negative")
    if k == 0:
        return ZetaCombo.zero()
    if k == 1:
        return ZetaCombo.of({ONE: _j1(n)})
    if k == 2:
        return ZetaCombo.of({HZ2: aperylike_tJ(2, n)})
    if k == 3:
        return ZetaCombo.of({ONE: aperylike_tJ(3, n), HZ3: 2 * aperylike_tJ(2, n)})
    if k == 4:
        return ZetaCombo.of(
            {HZ2: aperylike_tJ(4, n), HZ4: 3 * aperylike_tJ(2, n)}
        )
    raise UnsupportedIndex(f"J_{k} outside the supported range 0..4")


# ---------------------------------------------------------------------------
# congruence reports
# ---------------------------------------------------------------------------


@dataclass
class CongruenceReport:
    kind: str
    params: dict
    lhs_residue: Optional[int]
    rhs_residue: Optional[int]
    modulus: int
    ok: bool
    note: str = ""

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "params": self.params,
            "lhs_residue": self.lhs_residue,
            "rhs_residue": self.rhs_residue,
            "modulus": self.modulus,
            "ok": self.ok,
        }
        if self.note:
            out["note"] = self.note
        return out


def _p_digits(n: int, p: int) -> list:
    if n == 0:
        return [0]
    digits = []
    while n:
        n, d = divmod(n, p)
        digits.append(d)
    return digits


_PARY_SEQ = {
    "A2": lambda n: Fraction(apery2(n)),
    "A3": lambda n: Fraction(apery3(n)),
    "TJ2": lambda n: aperylike_tJ(2, n),
}


def congruence_pary_product(kind: str, p: int, n: int) -> CongruenceReport:
    """Digit-product congruence: A(n) = prod_j A(n_j) mod p over the base-p
    digits n_j of n."""
    if kind not in _PARY_SEQ:
        raise UnsupportedIndex(f"unsupported kind {kind!r}")
    if kind == "TJ2" and p == 2:
        raise ValueError("TJ2 reduction needs an odd prime")
    seq = _PARY_SEQ[kind]
    lhs = rational_mod_prime_power(seq(n), p, 1)
    rhs = 1
    for d in _p_digits(n, p):
        rhs = (rhs * rational_mod_prime_power(seq(d), p, 1)) % p
    return CongruenceReport(
        kind=f"pary-{kind}",
        params={"p": p, "n": n},
        lhs_residue=lhs,
        rhs_residue=rhs,
        modulus=p,
        ok=lhs == rhs,
    )


def supercongruence_check(kind: str, p: int, m: int, r: int) -> CongruenceReport:
    """A(m p^r - 1) = A(m p^{r-1} - 1) mod p^{3r} for p >= 5 (mod p^r for p = 3)."""
    if kind not in ("A2", "A3"):
        raise UnsupportedIndex(f"unsupported kind {kind!r}")
    if m < 1 or r < 1:
        raise ValueError("m and r must be positive")
    seq = apery2 if kind == "A2" else apery3
    exponent = 3 * r if p >= 5 else r
    modulus = p**exponent
    lhs = seq(m * p**r - 1) % modulus
    rhs = seq(m * p ** (r - 1) - 1) % modulus
    return CongruenceReport(
        kind=f"super-{kind}",
        params={"p": p, "m": m, "r": r},
        lhs_residue=lhs,
        rhs_residue=rhs,
        modulus=modulus,
        ok=lhs == rhs,
        note="" if p >= 5 else "p < 5: modulus relaxed to p^r",
    )


def tj_supercongruence_check(s: int, p: int, m: int, n: int) -> CongruenceReport:
    """p^{2sn} tJ_{2s+2}(m p^n) = p^{2s(n-1)} tJ_{2s+2}(m p^{n-1}) mod p^n,
    for odd p and 1 <= m < p/2."""
    if s < 0 or n < 1:
        raise ValueError("need s >= 0 and n >= 1")
    if not (1 <= m and 2 * m < p):
        raise ValueError("need 1 <= m < p/2")
    k = 2 * s + 2
    lhs_val = Fraction(p) ** (2 * s * n) * aperylike_tJ(k, m * p**n)
    rhs_val = Fraction(p) ** (2 * s * (n - 1)) * aperylike_tJ(k, m * p ** (n - 1))
    modulus = p**n
    diff = lhs_val - rhs_val
    ok = diff == 0 or padic_valuation(diff, p) >= n
    try:
        lhs_res: Optional[int] = rational_mod_prime_power(lhs_val, p, n)
        rhs_res: Optional[int] = rational_mod_prime_power(rhs_val, p, n)
    except DenominatorNotInvertible:
        lhs_res = rhs_res = None
    return CongruenceReport(
        kind=f"tj-super-TJ{k}",
        params={"s": s, "p": p, "m": m, "n": n},
        lhs_residue=lhs_res,
        rhs_residue=rhs_res,
        modulus=modulus,
        ok=ok,
        note="" if lhs_res is not None else "residues via difference valuation",
    )


def los_square_sum_check(p: int) -> CongruenceReport:
    """sum_{n<p} tJ2(n)^2 = (-1)^{(p-1)/2} mod p^3 for odd prime p."""
    if p < 3 or p % 2 == 0:
        raise ValueError("p must be an odd prime")
    table = tj_table(2, p - 1)
    total = sum((v * v for v in table), Fraction(0))
    modulus = p**3
    lhs = rational_mod_prime_power(total, p, 3)
    rhs = 1 if (p - 1) // 2 % 2 == 0 else modulus - 1
    return CongruenceReport(
        kind="los-square-sum",
        params={"p": p},
        lhs_residue=lhs,
        rhs_residue=rhs,
        modulus=modulus,
        ok=lhs == rhs,
    )


def eta_coefficient(which: str, n: int) -> int:
    """Fourier coefficient at q^n of eta(4tau)^6 (``lambda``) or
    eta(2tau)^4 eta(4tau)^4 (``gamma``)."""
    from . import series

    powers = {4: 6} if which == "lambda" else {2: 4, 4: 4}
    qs = series.eta_product_qseries(powers, n)
    c = qs.coefficient(n)
    if c.denominator != 1:
        raise ArithmeticError("eta product coefficient is not an integer")
    return c.numerator


def asd_congruence_check(kind: str, p: int, m: int, r: int) -> CongruenceReport:
    """Three-term Atkin-Swinnerton-Dyer style congruence mod p^r:

    A2((mp^r-1)/2) - lambda_p A2((mp^{r-1}-1)/2)
        + (-1)^{(p-1)/2} p^2 A2((mp^{r-2}-1)/2) = 0,
    A3(...) - gamma_p A3(...) + p^3 A3(...) = 0,

    with lambda/gamma the eta-product coefficients at q^p.
    """
    if kind not in ("A2", "A3"):
        raise UnsupportedIndex(f"unsupported kind {kind!r}")
    if p % 2 == 0 or m % 2 == 0 or r < 2:
        raise ValueError("need odd p, odd m and r >= 2")
    idx = []
    for j in (r, r - 1, r - 2):
        t = m * p**j - 1
        if t < 0 or t % 2 != 0:
            raise IndexNotIntegral(f"(m p^{j} - 1)/2 is not a non-negative integer")
        idx.append(t // 2)
    modulus = p**r
    if kind == "A2":
        coeff = eta_coefficient("lambda", p)
        total = (
            apery2(idx[0])
            - coeff * apery2(idx[1])
            + (-1) ** ((p - 1) // 2) * p * p * apery2(idx[2])
        )
    else:
        coeff = eta_coefficient("gamma", p)
        total = apery3(idx[0]) - coeff * apery3(idx[1]) + p**3 * apery3(idx[2])
    lhs = total % modulus
    return CongruenceReport(
        kind=f"asd-{kind}",
        params={"p": p, "m": m, "r": r, "eta_coefficient": coeff},
        lhs_residue=lhs,
        rhs_residue=0,
        modulus=modulus,
        ok=lhs == 0,
    )
