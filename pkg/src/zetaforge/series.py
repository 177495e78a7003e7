"""Truncated power series and q-expansions with exact rational coefficients.

Two representations:

* ``PowerSeriesRat`` — ordinary truncated series sum c_n z^n.  Truncation
  orders are explicit; arithmetic never pretends to know coefficients past
  what the operands guarantee.
* ``QSeries`` — Laurent-bounded expansions on the exponent lattice (1/24)Z,
  which hosts Dedekind eta (1/24), the elliptic thetas (1/8, 1/2) and all
  of their quotients in a single exact grid.

On top of these live the second-order operators of interest (the ladder
operator D and the Picard-Fuchs operator L), Gauss hypergeometric
coefficient series, eta/theta expansions, the genus-zero hauptmodul, and
the empirical verification of the weight-one q-series identity for the
generating function of the normalized Apery-like numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from typing import Iterable, Mapping, Optional, Sequence



GRID = 24
# sentinel truncation bound for series that are exact (polynomials, constants)
EXACT_BOUND = 10**9

__all__ = [
    "GRID",
    "OrderTooSmall",
    "PoleInCoefficient",
    "NonInvertibleLeadingTerm",
    "NonvanishingInnerConstant",
    "PowerSeriesRat",
    "LinearDiffOp",
    "LADDER_D",
    "PICARD_FUCHS_L",
    "apply_ladder_D",
    "apply_picard_fuchs_L",
    "hypergeom_2f1_series",
    "QSeries",
    "eta_qseries",
    "eta_product_qseries",
    "theta_qseries",
    "hauptmodul_z",
    "hauptmodul_theta_form",
    "hauptmodul_consistency_report",
    "compose_series",
    "W2Report",
    "verify_w2_identity",
    "w2_hypergeometric_form",
    "jacobi_theta_identity_check",
]


class OrderTooSmall(ValueError):
    """Series order too small for the requested operator application."""


class PoleInCoefficient(ArithmeticError):
    """A hypergeometric denominator parameter hits a non-positive integer."""


class NonInvertibleLeadingTerm(ArithmeticError):
    """q-series inversion requires a nonzero (unit) leading coefficient."""


class NonvanishingInnerConstant(ValueError):
    """Composition requires the inner series to vanish at the origin."""


# ---------------------------------------------------------------------------
# ordinary truncated power series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerSeriesRat:
    """Truncated power series sum_{n<=order} coeffs[n] z^n with exact Rat
    coefficients.  ``order`` is the last trustworthy exponent; arithmetic
    truncates results so every emitted coefficient is exact.
    """

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "coeffs", tuple(Fraction(c) for c in self.coeffs)
        )
        if not self.coeffs:
            raise ValueError("a series needs at least the constant term")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_coeffs(cls, coeffs: Iterable) -> "PowerSeriesRat":
        return cls(tuple(coeffs))

    @classmethod
    def constant(cls, value, order: int) -> "PowerSeriesRat":
        return cls((Fraction(value),) + (Fraction(0),) * order)

    def coefficient(self, n: int) -> Fraction:
        if n < 0 or n > self.order:
            raise IndexError(f"coefficient {n} outside trusted order {self.order}")
        return self.coeffs[n]

    def truncate(self, order: int) -> "PowerSeriesRat":
        if order > self.order:
            raise OrderTooSmall(f"cannot extend order {self.order} to {order}")
        return PowerSeriesRat(self.coeffs[: order + 1])

    def __add__(self, other: "PowerSeriesRat") -> "PowerSeriesRat":
        n = min(self.order, other.order)
        return PowerSeriesRat(
            tuple(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1]))
        )

    def __sub__(self, other: "PowerSeriesRat") -> "PowerSeriesRat":
        n = min(self.order, other.order)
        return PowerSeriesRat(
            tuple(a - b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1]))
        )

    def __neg__(self) -> "PowerSeriesRat":
        return PowerSeriesRat(tuple(-a for a in self.coeffs))

    def scale(self, c) -> "PowerSeriesRat":
        c = Fraction(c)
        return PowerSeriesRat(tuple(c * a for a in self.coeffs))

    def __mul__(self, other: "PowerSeriesRat") -> "PowerSeriesRat":
        # two truncated series: coefficient n only needs inputs <= n, so the
        # product is exact through min(order, order)
        n = min(self.order, other.order)
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a == 0:
                continue
            for j in range(0, n - i + 1):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return PowerSeriesRat(tuple(out))

    def mul_poly(self, poly: Sequence) -> "PowerSeriesRat":
        """Multiply by an exact polynomial; the order is preserved."""
        poly = [Fraction(c) for c in poly]
        out = [Fraction(0)] * (self.order + 1)
        for j, p in enumerate(poly):
            if p == 0:
                continue
            for i in range(0, self.order + 1 - j):
                c = self.coeffs[i]
                if c != 0:
                    out[i + j] += p * c
        return PowerSeriesRat(tuple(out))

    def differentiate(self) -> "PowerSeriesRat":
        if self.order < 1:
            raise OrderTooSmall("cannot differentiate an order-0 series")
        return PowerSeriesRat(
            tuple(n * self.coeffs[n] for n in range(1, self.order + 1))
        )

    def compose(self, inner: "PowerSeriesRat") -> "PowerSeriesRat":
        """self(inner(z)) for inner with zero constant term."""
        if inner.coeffs[0] != 0:
            raise NonvanishingInnerConstant("inner series must vanish at 0")
        n = min(self.order, inner.order)
        inner_t = inner.truncate(n)
        # Horner from the top coefficient down
        acc = PowerSeriesRat.constant(self.coeffs[n], n)
        for k in range(n - 1, -1, -1):
            acc = acc * inner_t
            acc = PowerSeriesRat(
                (acc.coeffs[0] + self.coeffs[k],) + acc.coeffs[1:]
            )
        return acc

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def to_json_entries(self) -> list:
        return [
            {"exponent": str(n), "coefficient": _frac_str(c)}
            for n, c in enumerate(self.coeffs)
            if c != 0
        ]


def _frac_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)


# ---------------------------------------------------------------------------
# second order operators c2 f'' + c1 f' + c0 f with polynomial coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearDiffOp:
    """c2(z) d^2/dz^2 + c1(z) d/dz + c0(z) with exact polynomial coefficients."""

    c0: tuple
    c1: tuple
    c2: tuple
    name: str = ""

    def apply(self, f: PowerSeriesRat) -> PowerSeriesRat:
        if f.order < 2:
            raise OrderTooSmall(f"operator {self.name or 'L'} needs order >= 2")
        target = f.order - 2
        d1 = f.differentiate()
        d2 = d1.differentiate()
        part2 = d2.mul_poly(self.c2).truncate(target)
        part1 = d1.mul_poly(self.c1).truncate(target)
        part0 = f.mul_poly(self.c0).truncate(target)
        return part2 + part1 + part0


# D = z(1-z)^2 d^2/dz^2 + (1-3z)(1-z) d/dz + (z - 3/4): maps the generating
# function of the index-k Apery-like family to the index-(k-2) one.
LADDER_D = LinearDiffOp(
    c0=(Fraction(-3, 4), Fraction(1)),
    c1=(Fraction(1), Fraction(-4), Fraction(3)),
    c2=(Fraction(0), Fraction(1), Fraction(-2), Fraction(1)),
    name="ladder-D",
)

# L = T(T^2-1) d^2/dT^2 + (3T^2-1) d/dT + T: annihilates 2F1(1/2,1/2;1;T^2).
PICARD_FUCHS_L = LinearDiffOp(
    c0=(Fraction(0), Fraction(1)),
    c1=(Fraction(-1), Fraction(0), Fraction(3)),
    c2=(Fraction(0), Fraction(-1), Fraction(0), Fraction(1)),
    name="picard-fuchs-L",
)


def apply_ladder_D(f: PowerSeriesRat) -> PowerSeriesRat:
    return LADDER_D.apply(f)


def apply_picard_fuchs_L(f: PowerSeriesRat) -> PowerSeriesRat:
    return PICARD_FUCHS_L.apply(f)


def hypergeom_2f1_series(a, b, c, order: int) -> PowerSeriesRat:
    """2F1(a,b;c;z) as an exact series: coefficients (a)_n (b)_n / ((c)_n n!)."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    coeffs = [Fraction(1)]
    term = Fraction(1)
    for n in range(order):
        den = (c + n) * (n + 1)
        if den == 0:
            raise PoleInCoefficient(f"(c)_n vanishes at n={n + 1} for c={c}")
        term *= (a + n) * (b + n) / den
        coeffs.append(term)
    return PowerSeriesRat(tuple(coeffs))


# ---------------------------------------------------------------------------
# q-series on the 1/24 exponent lattice
# ---------------------------------------------------------------------------


@dataclass
class QSeries:
    """Exact q-expansion with exponents in (1/24)Z, Laurent-bounded below.

    ``coeffs`` maps exponent*24 -> Rat; ``max24`` is the last exponent (in
    24ths) whose coefficient is guaranteed correct.  Multiplication and
    inversion shrink ``max24`` exactly as the unknown tails dictate.
    """

    coeffs: dict
    max24: int

    def __post_init__(self):
        self.coeffs = {
            e: Fraction(c) for e, c in self.coeffs.items() if c != 0 and e <= self.max24
        }

    # -- basic structure ----------------------------------------------------

    @property
    def min24(self) -> Optional[int]:
        return min(self.coeffs) if self.coeffs else None

    def leading(self) -> tuple:
        """(exponent as Fraction, coefficient) of the lowest-order term."""
        if not self.coeffs:
            raise NonInvertibleLeadingTerm("series is zero through its bound")
        e = self.min24
        return Fraction(e, GRID), self.coeffs[e]

    def coefficient(self, exponent) -> Fraction:
        e24 = _to_grid(exponent)
        if e24 > self.max24:
            raise IndexError(
                f"exponent {Fraction(e24, GRID)} beyond trusted bound "
                f"{Fraction(self.max24, GRID)}"
            )
        return self.coeffs.get(e24, Fraction(0))

    def truncate(self, max24: int) -> "QSeries":
        if max24 > self.max24:
            raise OrderTooSmall("cannot extend a q-series truncation")
        return QSeries({e: c for e, c in self.coeffs.items() if e <= max24}, max24)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "QSeries") -> "QSeries":
        m = min(self.max24, other.max24)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return QSeries(out, m)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + other.scale(-1)

    def scale(self, c) -> "QSeries":
        c = Fraction(c)
        return QSeries({e: c * v for e, v in self.coeffs.items()}, self.max24)

    def __mul__(self, other: "QSeries") -> "QSeries":
        # unknown tail of one factor first pollutes exponents past
        # (own bound + other's minimal exponent)
        if not self.coeffs or not other.coeffs:
            bound = max(self.max24, other.max24)
            return QSeries({}, bound)
        m = min(self.max24 + other.min24, other.max24 + self.min24)
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e <= m:
                    out[e] = out.get(e, Fraction(0)) + c1 * c2
        return QSeries(out, m)

    def pow(self, e: int) -> "QSeries":
        if e < 0:
            return self.pow(-e).inverse()
        result = QSeries({0: Fraction(1)}, EXACT_BOUND)
        base = self
        k = e
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def inverse(self) -> "QSeries":
        """Multiplicative inverse; needs a nonzero leading coefficient."""
        if not self.coeffs:
            raise NonInvertibleLeadingTerm("cannot invert the zero series")
        m = self.min24
        lead = self.coeffs[m]
        rel_len = self.max24 - m  # relative trusted window
        a = [Fraction(0)] * (rel_len + 1)
        for e, c in self.coeffs.items():
            a[e - m] = c
        b = [Fraction(0)] * (rel_len + 1)
        b[0] = 1 / lead
        for i in range(1, rel_len + 1):
            s = Fraction(0)
            for j in range(1, i + 1):
                if a[j] != 0:
                    s += a[j] * b[i - j]
            b[i] = -s / lead
        out = {i - m: b[i] for i in range(rel_len + 1) if b[i] != 0}
        return QSeries(out, rel_len - m)

    def is_zero(self) -> bool:
        return not self.coeffs

    def first_difference(self, other: "QSeries") -> Optional[Fraction]:
        """Lowest exponent where the two expansions disagree, within the
        common trusted bound; None when they agree throughout."""
        m = min(self.max24, other.max24)
        exps = sorted(
            set(e for e in self.coeffs if e <= m)
            | set(e for e in other.coeffs if e <= m)
        )
        for e in exps:
            if self.coeffs.get(e, 0) != other.coeffs.get(e, 0):
                return Fraction(e, GRID)
        return None

    def to_json_entries(self) -> list:
        return [
            {"exponent": _frac_str(Fraction(e, GRID)), "coefficient": _frac_str(c)}
            for e, c in sorted(self.coeffs.items())
        ]


def _to_grid(exponent) -> int:
    e = Fraction(exponent) * GRID
    if e.denominator != 1:
        raise ValueError(f"exponent {exponent} is off the 1/{GRID} lattice")
    return e.numerator


def qseries_one(max24: int = EXACT_BOUND) -> QSeries:
    return QSeries({0: Fraction(1)}, max24)


# ---------------------------------------------------------------------------
# eta and theta expansions
# ---------------------------------------------------------------------------


def _eta_raw(scale: int, max24: int) -> QSeries:
    """eta(scale*tau) = sum_m (-1)^m q^{scale (6m+1)^2 / 24} through max24."""
    coeffs: dict = {}
    m = 0
    while True:
        hit = False
        for mm in (m, -m - 1):
            e = scale * (6 * mm + 1) ** 2
            if e <= max24:
                coeffs[e] = coeffs.get(e, Fraction(0)) + (-1) ** (mm % 2)
                hit = True
        if not hit:
            break
        m += 1
    return QSeries(coeffs, max24)


def eta_qseries(scale: int, power: int, max_exponent) -> QSeries:
    """q-expansion of eta(scale*tau)^power, trusted through max_exponent.

    Negative powers go through exact series inversion; the base series is
    pre-extended so the inversion's precision loss lands back on the
    requested bound.
    """
    if scale < 1:
        raise ValueError("scale must be a positive integer")
    max24 = _to_grid(max_exponent)
    if power == 0:
        return qseries_one(max24)
    # inverting a series with leading exponent m costs 2m of trusted range
    slack = 2 * abs(power) * scale if power < 0 else 0
    base = _eta_raw(scale, max24 + slack)
    out = base.pow(abs(power))
    if power < 0:
        out = out.inverse()
    return out.truncate(max24)


def eta_product_qseries(powers: Mapping[int, int], max_exponent) -> QSeries:
    """Product over scales m of eta(m*tau)^e trusted through max_exponent."""
    max24 = _to_grid(max_exponent)
    slack = sum(2 * abs(e) * m for m, e in powers.items() if e < 0)
    out = qseries_one()
    for m in sorted(powers):
        e = powers[m]
        if e == 0:
            continue
        base = _eta_raw(m, max24 + slack).pow(abs(e))
        if e < 0:
            base = base.inverse()
        out = out * base
    return out.truncate(max24)


def theta_qseries(j: int, max_exponent) -> QSeries:
    """Elliptic theta constants with nome q^{1/2}:

    theta2 = sum q^{(n+1/2)^2/2}, theta3 = sum q^{n^2/2},
    theta4 = sum (-1)^n q^{n^2/2}  (sums over all integers n).
    """
    max24 = _to_grid(max_exponent)
    coeffs: dict = {}
    if j == 2:
        n = 0
        while 3 * (2 * n + 1) ** 2 <= max24:  # (n+1/2)^2/2 = (2n+1)^2/8
            coeffs[3 * (2 * n + 1) ** 2] = Fraction(2)
            n += 1
    elif j in (3, 4):
        coeffs[0] = Fraction(1)
        n = 1
        while 12 * n * n <= max24:  # n^2/2
            coeffs[12 * n * n] = Fraction(2) if (j == 3 or n % 2 == 0) else Fraction(-2)
            n += 1
    else:
        raise ValueError("theta index must be 2, 3 or 4")
    return QSeries(coeffs, max24)


# ---------------------------------------------------------------------------
# hauptmodul and the weight-one identity
# ---------------------------------------------------------------------------


def hauptmodul_z(max_exponent) -> QSeries:
    """The genus-zero hauptmodul as the eta quotient
    eta(tau)^8 eta(4tau)^16 / eta(2tau)^24 (leading term +q)."""
    return eta_product_qseries({1: 8, 4: 16, 2: -24}, max_exponent)


def hauptmodul_theta_form(max_exponent) -> QSeries:
    """The companion theta quotient -theta2^4/theta4^4 (leading -16 q^{1/2})."""
    max24 = _to_grid(max_exponent)
    t2 = theta_qseries(2, Fraction(max24 + 48, GRID))
    t4 = theta_qseries(4, Fraction(max24 + 48, GRID))
    return (t2.pow(4) * t4.pow(4).inverse()).scale(-1).truncate(max24)


def hauptmodul_consistency_report(max_exponent) -> dict:
    """Compare the two printed forms of the hauptmodul.

    They are genuinely different expansions (their leading terms differ);
    the report records both leading terms and where they first disagree so
    the convention search in verify_w2_identity is auditable.
    """
    eta_form = hauptmodul_z(max_exponent)
    theta_form = hauptmodul_theta_form(max_exponent)
    le, ce = eta_form.leading()
    lt, ct = theta_form.leading()
    return {
        "eta_form_leading": {"exponent": str(le), "coefficient": _frac_str(ce)},
        "theta_form_leading": {"exponent": str(lt), "coefficient": _frac_str(ct)},
        "first_difference": str(eta_form.first_difference(theta_form)),
        "agree_as_printed": eta_form.first_difference(theta_form) is None,
        "value_at_q0": "0",
    }


def compose_series(outer: PowerSeriesRat, inner: QSeries) -> QSeries:
    """outer(inner(q)) for an inner q-series with strictly positive order."""
    if inner.is_zero():
        raise NonvanishingInnerConstant("inner series is identically zero")
    m = inner.min24
    if m <= 0:
        raise NonvanishingInnerConstant(
            "inner series must have strictly positive minimal exponent"
        )
    # terms beyond outer.order first matter at exponent m*(order+1)
    bound = min(inner.max24, m * (outer.order + 1) - 1)
    acc = qseries_one(bound).scale(outer.coeffs[0])
    power = qseries_one()
    for n in range(1, outer.order + 1):
        power = power * inner
        if power.is_zero() or power.min24 > bound:
            break
        c = outer.coeffs[n]
        if c != 0:
            acc = acc + power.scale(c)
    return acc.truncate(bound)


@dataclass
class W2Report:
    """Outcome of the q-expansion identity search for the weight-one form."""

    matched: bool
    convention_used: Optional[str]
    first_mismatch: Optional[Fraction]
    max_exponent: Fraction
    variants: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "matched": self.matched,
            "convention_used": self.convention_used,
            "first_mismatch": None
            if self.first_mismatch is None
            else str(self.first_mismatch),
            "max_exponent": str(self.max_exponent),
            "variants": self.variants,
        }


def _tj2_series(order: int) -> PowerSeriesRat:
    """sum_n tJ2(n) z^n, with tJ2(n) = sum_k (-1)^k C(-1/2,k)^2 C(n,k)."""
    from . import aperynum  # local import; aperynum also consumes this module

    table = aperynum.tj_table(2, order)
    return PowerSeriesRat(tuple(table))


def w2_hypergeometric_form(order: int) -> PowerSeriesRat:
    """(1-z)^{-1} 2F1(1/2,1/2;1; z/(z-1)) as an exact power series in z."""
    hyp = hypergeom_2f1_series(Fraction(1, 2), Fraction(1, 2), 1, order)
    inner = PowerSeriesRat((Fraction(0),) + (Fraction(-1),) * order)  # z/(z-1)
    geom = PowerSeriesRat((Fraction(1),) * (order + 1))  # 1/(1-z)
    return hyp.compose(inner) * geom


def verify_w2_identity(max_exponent=20) -> W2Report:
    """Check sum_n tJ2(n) z(tau)^n against the eta quotient
    eta(2tau)^22 / (eta(tau)^12 eta(4tau)^8), trying the convention
    variants for z(tau) and reporting which (if any) matches exactly.

    A mismatch is an outcome, not an error.
    """
    max24 = _to_grid(max_exponent)
    order = max24 // GRID  # z has leading exponent q^1
    lhs_coeffs = _tj2_series(order + 1)
    rhs = eta_product_qseries({2: 22, 1: -12, 4: -8}, max_exponent)

    z_eta = hauptmodul_z(max_exponent)
    candidates = [
        ("eta-as-printed", z_eta),
        ("eta-times-16", z_eta.scale(16)),
        ("eta-negated", z_eta.scale(-1)),
        ("eta-negated-times-16", z_eta.scale(-16)),
    ]

    variants = []
    matched_label = None
    matched_mismatch: Optional[Fraction] = None
    for label, z in candidates:
        lhs = compose_series(lhs_coeffs, z)
        bound = min(lhs.max24, rhs.max24)
        diff = lhs.truncate(bound).first_difference(rhs.truncate(bound))
        ok = diff is None
        variants.append(
            {
                "label": label,
                "matched": ok,
                "first_mismatch": None if diff is None else str(diff),
                "checked_through": str(Fraction(bound, GRID)),
            }
        )
        if ok and matched_label is None:
            matched_label = label
    if matched_label is None:
        # report the furthest-agreeing candidate's mismatch
        best = max(
            (v for v in variants),
            key=lambda v: Fraction(v["first_mismatch"]) if v["first_mismatch"] else 10**9,
        )
        matched_mismatch = (
            Fraction(best["first_mismatch"]) if best["first_mismatch"] else None
        )
    return W2Report(
        matched=matched_label is not None,
        convention_used=matched_label,
        first_mismatch=matched_mismatch,
        max_exponent=Fraction(max_exponent),
        variants=variants,
    )


def jacobi_theta_identity_check(max_exponent) -> Optional[Fraction]:
    """First exponent violating theta3^4 = theta2^4 + theta4^4, or None."""
    t2 = theta_qseries(2, max_exponent)
    t3 = theta_qseries(3, max_exponent)
    t4 = theta_qseries(4, max_exponent)
    return t3.pow(4).first_difference(t2.pow(4) + t4.pow(4))
