"""Fixed-precision p-adic arithmetic for odd primes.

A value is p^v * u with u a unit known modulo p^N; precision tracking is
explicit (subtraction records valuation loss, results below four certified
digits raise PrecisionExhausted).  On top of the field arithmetic live the
Teichmuller character, the principal-unit projection, Volkenborn integrals
of polynomials, the p-adic Hurwitz zeta function (integer order) with a
certified tail valuation, its shifted variant, and the p-adic convergence
ledger of the archimedean-divergent formal series.

Convention for |tau|_p > 1: tau = p^v u splits into the tracked valuation
factor p^v and the unit u; <tau> = u/omega(u) and the extended character is
omega(tau) = p^v omega(u).  All cross-route identities are checked under
this convention and report the normalization factor explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .exact import bernoulli_number, bernoulli_poly, binom_general, padic_valuation

__all__ = [
    "NotAUnit",
    "TauInZp",
    "SAtOne",
    "DomainViolated",
    "PrecisionExhausted",
    "Padic",
    "PadicContext",
    "teichmuller",
    "angle_bracket",
    "omega_extended",
    "volkenborn_poly",
    "padic_hurwitz_zeta",
    "padic_hurwitz_shifted",
    "padic_divergence_report",
]


class NotAUnit(ValueError):
    """Operation requires a p-adic unit (valuation zero)."""


class TauInZp(ValueError):
    """tau must lie outside Z_p (|tau|_p > 1)."""


class SAtOne(ZeroDivisionError):
    """The p-adic Hurwitz zeta has its pole at s = 1."""


class DomainViolated(ValueError):
    """Shifted-series domain condition |tau|_p > |x|_p not met."""


class PrecisionExhausted(ArithmeticError):
    """Cancellation left fewer than four certified digits."""


_MIN_DIGITS = 4


def _is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Padic:
    """p^val * unit with unit known modulo p^prec (canonical zero: unit 0).

    The absolute precision is val + prec: the value is known modulo
    p^(val+prec).
    """

    p: int
    val: int
    unit: int
    prec: int

    def __post_init__(self):
        if not _is_odd_prime(self.p):
            raise ValueError("p must be an odd prime")
        if self.prec < 1:
            raise PrecisionExhausted("no certified digits left")
        if self.unit != 0 and self.unit % self.p == 0:
            raise ValueError("unit part must not be divisible by p")

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_rational(cls, x, p: int, prec: int = 20) -> "Padic":
        x = Fraction(x)
        if x == 0:
            return cls(p, 0, 0, prec)
        v = padic_valuation(x, p)
        num, den = x.numerator, x.denominator
        if v >= 0:
            num //= p**v
        else:
            den //= p**-v
        modulus = p**prec
        unit = (num * pow(den, -1, modulus)) % modulus
        return cls(p, v, unit, prec)

    @classmethod
    def zero(cls, p: int, prec: int = 20) -> "Padic":
        return cls(p, 0, 0, prec)

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def valuation(self) -> Optional[int]:
        return None if self.is_zero() else self.val

    def digits(self, count: Optional[int] = None) -> list:
        n = self.unit
        count = count if count is not None else self.prec
        out = []
        for _ in range(count):
            n, d = divmod(n, self.p)
            out.append(d)
        return out

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "valuation": self.val if not self.is_zero() else None,
            "digits": self.digits(),
            "precision": self.prec,
        }

    def expansion_str(self, show: int = 8) -> str:
        if self.is_zero():
            return f"O({self.p}^{self.prec})"
        parts = []
        for i, d in enumerate(self.digits(min(show, self.prec))):
            if d:
                e = self.val + i
                parts.append(f"{d}*{self.p}^{e}" if e != 0 else f"{d}")
        parts.append(f"O({self.p}^{self.val + self.prec})")
        return " + ".join(parts)

    # -- arithmetic ----------------------------------------------------------

    def _check_same(self, other: "Padic") -> None:
        if self.p != other.p:
            raise ValueError("mixed primes")

    def __add__(self, other: "Padic") -> "Padic":
        self._check_same(other)
        p = self.p
        if self.is_zero():
            abs_prec = min(other.val + other.prec, self.val + self.prec)
            return Padic(p, other.val, other.unit % p ** (abs_prec - other.val), abs_prec - other.val) if not other.is_zero() else Padic(p, 0, 0, min(self.prec, other.prec))
        if other.is_zero():
            return other + self
        abs_prec = min(self.val + self.prec, other.val + other.prec)
        v = min(self.val, other.val)
        digits = abs_prec - v
        if digits < _MIN_DIGITS:
            raise PrecisionExhausted("addition out of certified range")
        modulus = p**digits
        total = (
            self.unit * p ** (self.val - v) + other.unit * p ** (other.val - v)
        ) % modulus
        if total == 0:
            return Padic(p, 0, 0, digits)
        shift = 0
        while total % p == 0:
            total //= p
            shift += 1
        new_prec = digits - shift
        if new_prec < _MIN_DIGITS:
            raise PrecisionExhausted(
                f"cancellation lost {shift} digits; {new_prec} remain"
            )
        return Padic(p, v + shift, total % p**new_prec, new_prec)

    def __neg__(self) -> "Padic":
        if self.is_zero():
            return self
        return Padic(self.p, self.val, (-self.unit) % self.p**self.prec, self.prec)

    def __sub__(self, other: "Padic") -> "Padic":
        return self + (-other)

    def __mul__(self, other: "Padic") -> "Padic":
        self._check_same(other)
        prec = min(self.prec, other.prec)
        if self.is_zero() or other.is_zero():
            return Padic(self.p, 0, 0, prec)
        unit = (self.unit * other.unit) % self.p**prec
        return Padic(self.p, self.val + other.val, unit, prec)

    def inverse(self) -> "Padic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of p-adic zero")
        inv = pow(self.unit, -1, self.p**self.prec)
        return Padic(self.p, -self.val, inv, self.prec)

    def __truediv__(self, other: "Padic") -> "Padic":
        return self * other.inverse()

    def pow_int(self, e: int) -> "Padic":
        if e < 0:
            return self.inverse().pow_int(-e)
        out = Padic(self.p, 0, 1, self.prec)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def reduce_mod(self, e: int) -> int:
        """The value mod p^e as an integer, for 0 <= e <= val + prec and
        val >= 0."""
        if self.is_zero():
            return 0
        if self.val < 0:
            raise ValueError("negative valuation has no residue mod p^e")
        if e > self.val + self.prec:
            raise PrecisionExhausted("requested residue beyond certified digits")
        return (self.unit * self.p**self.val) % self.p**e

    def agrees_with(self, other: "Padic", digits: Optional[int] = None) -> bool:
        """Equality modulo p^(min certified absolute precision), optionally
        capped at ``digits`` absolute digits.  Computed on raw residues, so
        total cancellation counts as agreement rather than tripping the
        precision guard."""
        self._check_same(other)
        d = min(self.val + self.prec, other.val + other.prec)
        if digits is not None:
            d = min(d, digits)
        v = min(self.val if not self.is_zero() else d, other.val if not other.is_zero() else d)
        rel = d - v
        if rel <= 0:
            return True
        modulus = self.p**rel
        lhs = self.unit * self.p ** (self.val - v) if not self.is_zero() else 0
        rhs = other.unit * self.p ** (other.val - v) if not other.is_zero() else 0
        return (lhs - rhs) % modulus == 0


@dataclass
class PadicContext:
    """Shared prime/precision plus a lazily filled Teichmuller table."""

    p: int
    prec: int = 20

    def __post_init__(self):
        if not _is_odd_prime(self.p):
            raise ValueError("p must be an odd prime")
        self._teich: dict = {}

    def from_rational(self, x) -> Padic:
        return Padic.from_rational(x, self.p, self.prec)

    def teichmuller_of_residue(self, r: int) -> Padic:
        r %= self.p
        if r == 0:
            raise NotAUnit("no Teichmuller lift for residue 0")
        if r not in self._teich:
            self._teich[r] = teichmuller(Padic(self.p, 0, r, self.prec))
        return self._teich[r]


def teichmuller(u: Padic) -> Padic:
    """The (p-1)-st root of unity congruent to u mod p, via the fixed point
    of x -> x^p at working precision."""
    if u.is_zero() or u.val != 0:
        raise NotAUnit("Teichmuller character needs |u|_p = 1")
    p, N = u.p, u.prec
    modulus = p**N
    x = u.unit % modulus
    for _ in range(N + 1):
        nxt = pow(x, p, modulus)
        if nxt == x:
            break
        x = nxt
    return Padic(p, 0, x, N)


def angle_bracket(tau: Padic) -> Padic:
    """Principal-unit part <tau> = unit(tau)/omega(unit(tau)) = 1 mod p.

    For |tau|_p != 1 the valuation factor p^v is deliberately not folded in;
    callers track it separately (see module docstring).
    """
    if tau.is_zero():
        raise NotAUnit("zero has no principal-unit part")
    u = Padic(tau.p, 0, tau.unit, tau.prec)
    return u / teichmuller(u)


def omega_extended(tau: Padic) -> Padic:
    """omega(tau) = p^v omega(unit(tau)): the multiplicative extension used
    by the interpolation identity at non-positive integers."""
    if tau.is_zero():
        raise NotAUnit("zero has no Teichmuller projection")
    u = Padic(tau.p, 0, tau.unit, tau.prec)
    w = teichmuller(u)
    return Padic(tau.p, tau.val, w.unit, w.prec)


# ---------------------------------------------------------------------------
# Volkenborn integral
# ---------------------------------------------------------------------------


def _power_sum(j: int, M: int) -> Fraction:
    """sum_{k=0}^{M-1} k^j = (B_{j+1}(M) - B_{j+1})/(j+1), exact."""
    return (bernoulli_poly(j + 1, M) - bernoulli_number(j + 1)) / (j + 1)


def volkenborn_poly(
    coeffs: Sequence, p: int, r_max: int, prec: int = 20
) -> Tuple[list, list]:
    """Volkenborn approximants (1/p^r) sum_{k<p^r} f(k) for a polynomial f
    given by rational coefficients (ascending powers), r = 1..r_max.

    Returns (approximants as Padic, valuations of successive differences);
    the exact average is computed with closed-form power sums, so deep
    levels cost nothing.
    """
    coeffs = [Fraction(c) for c in coeffs]
    approx = []
    exact_values = []
    for r in range(1, r_max + 1):
        M = p**r
        total = sum((c * _power_sum(j, M) for j, c in enumerate(coeffs)), Fraction(0))
        value = total / M
        exact_values.append(value)
        approx.append(Padic.from_rational(value, p, prec))
    gains = []
    for r in range(1, len(exact_values)):
        diff = exact_values[r] - exact_values[r - 1]
        gains.append(None if diff == 0 else padic_valuation(diff, p))
    return approx, gains


# ---------------------------------------------------------------------------
# p-adic Hurwitz zeta
# ---------------------------------------------------------------------------


def _require_outside_zp(tau: Padic) -> None:
    if tau.is_zero() or tau.val >= 0:
        raise TauInZp("need |tau|_p > 1")


def padic_hurwitz_zeta(
    s: int, tau, p: Optional[int] = None, K: Optional[int] = None, prec: int = 20
) -> Padic:
    """zeta_p(s, tau) = (<tau>^{1-s}/(s-1)) sum_k C(1-s, k) B_k tau^{-k}
    for integer s != 1 and |tau|_p > 1.

    ``tau`` may be a Padic or a rational (then ``p`` is required).  The sum
    is truncated at K with a certified tail: term k has valuation at least
    k*|v(tau)| - 1, so K defaults to enough terms for the requested
    precision.  The rational part of the series is accumulated exactly.
    """
    if isinstance(tau, Padic):
        tau_p = tau.p
        tau_rat = None
        tau_padic = tau
    else:
        if p is None:
            raise ValueError("p required when tau is rational")
        tau_p = p
        tau_rat = Fraction(tau)
        tau_padic = Padic.from_rational(tau_rat, p, prec)
    if s == 1:
        raise SAtOne("pole at s = 1")
    _require_outside_zp(tau_padic)
    a = -tau_padic.val  # per-term valuation gain, >= 1
    if K is None:
        K = max(10, (prec + 2) // a + 2)
    # exact rational series when tau is rational; otherwise p-adic horner
    if tau_rat is not None:
        inv_tau = 1 / tau_rat
        acc = Fraction(0)
        tp = Fraction(1)
        for k in range(K + 1):
            acc += binom_general(1 - s, k) * bernoulli_number(k) * tp
            tp *= inv_tau
        series = Padic.from_rational(acc / (s - 1), tau_p, prec + max(0, -((K + 1) * tau_padic.val)))
    else:
        inv_tau = tau_padic.inverse()
        acc = Padic.zero(tau_p, tau_padic.prec)
        tp = Padic(tau_p, 0, 1, tau_padic.prec)
        for k in range(K + 1):
            c = Fraction(binom_general(1 - s, k) * bernoulli_number(k))
            if c != 0:
                acc = acc + Padic.from_rational(c, tau_p, tau_padic.prec) * tp
            tp = tp * inv_tau
        series = acc * Padic.from_rational(Fraction(1, s - 1), tau_p, tau_padic.prec)
    bracket = angle_bracket(tau_padic).pow_int(1 - s)
    result = bracket * series
    # certify: omitted terms have valuation >= (K+1) a - 1 relative to the
    # valuation of the bracket/(s-1) prefactor
    tail_val = (K + 1) * a - 1 - padic_valuation(Fraction(s - 1), tau_p)
    certified = min(result.prec, tail_val - result.val + bracket.val)
    if certified < _MIN_DIGITS:
        raise PrecisionExhausted("certified tail below four digits; raise K")
    return Padic(tau_p, result.val, result.unit % tau_p**certified, certified)


def padic_hurwitz_shifted(
    s: int, tau, x, p: Optional[int] = None, prec: int = 20, K: Optional[int] = None
) -> Padic:
    """Shifted series zeta_p(s, tau + x) = (<tau>^{1-s}/(s-1))
    sum_k C(1-s,k) B_k(x) tau^{-k}, requiring |tau|_p > max(1, |x|_p)."""
    if p is None and isinstance(tau, Padic):
        p = tau.p
    if p is None:
        raise ValueError("p required")
    tau_rat = Fraction(tau) if not isinstance(tau, Padic) else None
    if tau_rat is None:
        raise ValueError("shifted route expects rational tau (exact series)")
    x = Fraction(x)
    if s == 1:
        raise SAtOne("pole at s = 1")
    tau_padic = Padic.from_rational(tau_rat, p, prec)
    _require_outside_zp(tau_padic)
    if x != 0:
        vx = padic_valuation(x, p)
        if not tau_padic.val < vx:
            raise DomainViolated("need |tau|_p > |x|_p")
    a = -tau_padic.val
    if K is None:
        K = max(10, (prec + 2) // a + 2)
    inv_tau = 1 / tau_rat
    acc = Fraction(0)
    tp = Fraction(1)
    for k in range(K + 1):
        acc += binom_general(1 - s, k) * bernoulli_poly(k, x) * tp
        tp *= inv_tau
    series = Padic.from_rational(acc / (s - 1), p, prec + max(0, (K + 1) * a))
    bracket = angle_bracket(tau_padic).pow_int(1 - s)
    result = bracket * series
    tail_val = (K + 1) * a - 1 - padic_valuation(Fraction(s - 1), p)
    certified = min(result.prec, tail_val - result.val + bracket.val)
    if certified < _MIN_DIGITS:
        raise PrecisionExhausted("certified tail below four digits; raise K")
    return Padic(p, result.val, result.unit % p**certified, certified)


def padic_divergence_report(
    n: int, tau, p: int, K: int, prec: int = 20
) -> dict:
    """Valuation ledger of the formal series for zeta(n, tau) read p-adically:

    term_k = (-1)^k B_k/k! (k+n-2)!/(n-1)! tau^{-(k+n-1)}.

    Reports term valuations (eventually strictly increasing), the partial
    sums, the stabilized p-adic value, and the normalization factor
    (tau/<tau>)^{1-n} = (p^v omega(u))^{1-n} linking the plain sum to
    zeta_p(n, tau).
    """
    if n < 2:
        raise ValueError("need n >= 2")
    tau_rat = Fraction(tau)
    tau_padic = Padic.from_rational(tau_rat, p, prec)
    _require_outside_zp(tau_padic)
    rows = []
    acc = Fraction(0)
    for k in range(K + 1):
        c = (
            (-1) ** k
            * bernoulli_number(k)
            * Fraction(
                math.factorial(k + n - 2), math.factorial(k) * math.factorial(n - 1)
            )
        )
        term = c / tau_rat ** (k + n - 1)
        acc += term
        rows.append(
            {
                "k": k,
                "term_valuation": None if term == 0 else padic_valuation(term, p),
                "partial_sum_mod_p4": None,
            }
        )
        rows[-1]["partial_sum_mod_p4"] = _residue_or_none(acc, p, 4)
    total = Padic.from_rational(acc, p, prec)
    # the K-term partial sum is certified modulo p^((K+n) a - 1):
    # term_k has valuation >= (k+n-1) a + v(B_k) >= (k+n-1) a - 1
    a = -tau_padic.val
    certified_depth = (K + n) * a - 1
    # normalization (tau/<tau>)^{1-n}
    w = omega_extended(tau_padic)
    norm = w.pow_int(1 - n)
    zeta_p = padic_hurwitz_zeta(n, tau_rat, p=p, prec=prec)
    product = norm * zeta_p
    return {
        "p": p,
        "n": n,
        "rows": rows,
        "sum": total,
        "certified_depth": certified_depth,
        "normalization": norm,
        "zeta_p": zeta_p,
        "normalized_zeta": product,
        "sum_matches_normalized_zeta": total.agrees_with(
            product, digits=certified_depth
        ),
        "stabilization_index_mod_p4": _stabilization_index(rows),
    }


def _residue_or_none(x: Fraction, p: int, e: int) -> Optional[int]:
    if x.denominator % p == 0:
        return None
    return (x.numerator * pow(x.denominator, -1, p**e)) % p**e


def _stabilization_index(rows: list) -> Optional[int]:
    final = rows[-1]["partial_sum_mod_p4"]
    idx = None
    for row in reversed(rows):
        if row["partial_sum_mod_p4"] == final:
            idx = row["k"]
        else:
            break
    return idx
