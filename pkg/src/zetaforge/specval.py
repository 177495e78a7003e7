"""Floating-point special values for the two-by-two matrix oscillator.

Hurwitz zeta by Euler-Maclaurin, the cube integrals R_{k,j}(kappa), the
assembled spectral-zeta special values zeta_Q(k), the closed form at k = 2,
and the four-dimensional A_{n,k}/B_{n,j} integral families.

All cube quadratures work in the substituted coordinates u_i = 1 - v_i^2
(Jacobian prod 2 v_i), which removes the corner singularity of the
integrands at u = (1,...,1) and keeps the Monte Carlo variance finite, so
the reported standard errors are meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from . import _mc
from .exact import bernoulli_number, binom_general

__all__ = [
    "PoleAtOne",
    "SeriesRegimeViolated",
    "UnsupportedIndexPair",
    "TableExhausted",
    "NchoParams",
    "QuadratureResult",
    "hurwitz_zeta_num",
    "hyp2f1_quarter",
    "r_k1_series",
    "r_kj_quadrature",
    "zetaQ_special",
    "zetaQ2_closed",
    "appendixB_integral",
    "r42_series",
    "APPENDIX_AB_EXACT",
]


class PoleAtOne(ZeroDivisionError):
    """Hurwitz zeta evaluated at its pole s = 1."""


class SeriesRegimeViolated(ValueError):
    """Series representation requested outside its convergence regime."""


class UnsupportedIndexPair(ValueError):
    """(k, j) pair without a concretely given integrand."""


class TableExhausted(ValueError):
    """Requested order beyond the exact coefficient table."""


@dataclass(frozen=True)
class NchoParams:
    """Model parameters: alpha, beta > 0 with alpha*beta > 1."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("alpha and beta must be positive")
        if not (self.alpha * self.beta > 1):
            raise ValueError("alpha*beta must exceed 1")

    @property
    def kappa(self) -> float:
        return 1.0 / math.sqrt(self.alpha * self.beta - 1.0)

    def swap(self) -> "NchoParams":
        return NchoParams(self.beta, self.alpha)

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta}


@dataclass
class QuadratureResult:
    value: float
    std_error: float
    samples_or_nodes: int
    method: str  # TENSOR_GAUSS | MONTE_CARLO | QMC
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        out = {
            "value": self.value,
            "std_error": self.std_error,
            "samples_or_nodes": self.samples_or_nodes,
            "method": self.method,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out


# ---------------------------------------------------------------------------
# Hurwitz zeta, Euler-Maclaurin
# ---------------------------------------------------------------------------

_EM_CORRECTIONS = 10


def hurwitz_zeta_num(s, tau: float, terms: Optional[int] = None) -> complex | float:
    """zeta(s, tau) = sum_{n>=0} (n+tau)^{-s} by Euler-Maclaurin.

    Head sum of M = max(20, ceil|s|+20) terms, trapezoidal endpoint, and 10
    Bernoulli tail corrections; this expression continues the sum to s != 1.
    Absolute error is ~1e-12 or better for |s| <= 10, tau >= 1/4 and
    Re(s) >= 0.  Integer s <= 0 is routed through the exact Bernoulli value
    -B_{k+1}(tau)/(k+1) (the continuation in closed form).  Non-integer
    Re(s) < 0 is cancellation-limited: the head terms grow like M^{|s|},
    so the absolute error floor is about M^{|s|+1} * 1e-16.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    s = complex(s)
    if s == 1:
        raise PoleAtOne("zeta(s, tau) has its pole at s = 1")
    if s.imag == 0 and s.real <= 0 and s.real == int(s.real):
        from fractions import Fraction as _F

        from .exact import hurwitz_zeta_nonpos

        return float(hurwitz_zeta_nonpos(int(-s.real), _F(tau)))
    if terms is not None:
        M = terms
    elif s.real < 0:
        M = 8
    else:
        M = max(20, int(math.ceil(abs(s))) + 20)
    head = math.fsum((n + tau) ** (-s.real) for n in range(M)) if s.imag == 0 else sum(
        (n + tau) ** (-s) for n in range(M)
    )
    x = M + tau
    tail = x ** (1 - s) / (s - 1) + 0.5 * x ** (-s)
    poch = s  # (s)_{2j-1} built up incrementally
    xpow = x ** (-s - 1)
    corr = 0j
    for j in range(1, _EM_CORRECTIONS + 1):
        b = float(bernoulli_number(2 * j))
        corr += b / math.factorial(2 * j) * poch * xpow
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        xpow /= x * x
    val = head + tail + corr
    if val.imag == 0:
        return val.real
    return val


def hyp2f1_quarter(x: float) -> float:
    """2F1(1/4, 3/4; 1; x) for x <= 0.

    Evaluated through the Pfaff transform (1-x)^{-1/4} 2F1(1/4,1/4;1;x/(x-1)),
    whose argument lies in [0, 1) for every x <= 0; the transformed series is
    summed with a 1e-16 term-ratio stop.
    """
    if x > 0:
        raise SeriesRegimeViolated("argument must be non-positive")
    if x == 0:
        return 1.0
    y = x / (x - 1.0)
    term = 1.0
    acc = 1.0
    n = 0
    while True:
        ratio = (0.25 + n) * (0.25 + n) / ((1.0 + n) * (1.0 + n)) * y
        term *= ratio
        acc += term
        n += 1
        if abs(term) < 1e-16 * abs(acc) or n > 100000:
            break
    return (1.0 - x) ** -0.25 * acc


# ---------------------------------------------------------------------------
# R_{k,j} integrals
# ---------------------------------------------------------------------------


def _hz_half(k: int) -> float:
    """zeta(k, 1/2) = (2^k - 1) zeta(k)."""
    return float(hurwitz_zeta_num(k, 0.5))


def r_k1_series(k: int, kappa: float, n_max: int) -> Tuple[float, float]:
    """R_{k,1}(kappa) = sum_n C(-1/2,n) J_k(n) kappa^{2n}, truncated partial
    sum for 0 <= kappa < 1.  Returns (value, |last term|) as an error proxy.
    """
    from .aperynum import aperylike_J

    if not (0 <= kappa < 1):
        raise SeriesRegimeViolated("series route needs 0 <= kappa < 1")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if k not in (2, 3, 4):
        raise UnsupportedIndexPair(f"series defined here for k in 2..4, got {k}")
    basis = {
        "ONE": 1.0,
        "HZ2": _hz_half(2),
        "HZ3": _hz_half(3),
        "HZ4": _hz_half(4),
    }
    total = 0.0
    last = 0.0
    k2 = kappa * kappa
    kpow = 1.0
    for n in range(n_max + 1):
        combo = aperylike_J(k, n)
        jn = sum(float(c) * basis[sym] for sym, c in combo.coeffs)
        term = float(binom_general(Fraction(-1, 2), n)) * jn * kpow
        total += term
        last = abs(term)
        kpow *= k2
    return total, last


def _w_factors(k: int, j: int) -> Sequence[Tuple[float, Sequence[Sequence[int]]]]:
    """Component integrands for R_{k,j}: each item is
    (prefactor, grouping) where grouping lists the u-index blocks whose
    (1 - prod u^4) factors multiply kappa^2 under the square root."""
    if (k, j) == (2, 1):
        return [(4.0, [[0], [1]])]
    if (k, j) == (3, 1):
        return [(3 * 8.0, [[0], [1, 2]])]
    if (k, j) == (4, 1):
        return [
            (4 * 16.0, [[0], [1, 2, 3]]),
            (2 * 16.0, [[0, 1], [2, 3]]),
        ]
    raise UnsupportedIndexPair(f"no displayed integrand for (k, j) = ({k}, {j})")


def _rkj_integrand(k: int, j: int, kappa: float):
    """Integrand over v in [0,1]^k with u_i = 1 - v_i^2; includes Jacobian."""
    k2 = kappa * kappa

    if (k, j) == (4, 2):

        def f(v: np.ndarray) -> np.ndarray:
            u = 1.0 - v * v
            jac = np.prod(2.0 * v, axis=1)
            u2 = u * u
            u4 = u2 * u2
            a = 1.0 - np.prod(u2, axis=1)
            b = (1.0 - u4[:, 0] * u4[:, 1]) * (1.0 - u4[:, 2] * u4[:, 3])
            c = np.prod(1.0 - u4, axis=1)
            rad = a * a + k2 * b + (k2 + k2 * k2) * c
            return 16.0 * jac / np.sqrt(rad)

        return f

    comps = _w_factors(k, j)

    def f(v: np.ndarray) -> np.ndarray:
        u = 1.0 - v * v
        jac = np.prod(2.0 * v, axis=1)
        u2 = u * u
        u4 = u2 * u2
        a = 1.0 - np.prod(u2, axis=1)
        out = np.zeros(v.shape[0])
        for pref, groups in comps:
            blocks = [1.0 - np.prod(u4[:, g], axis=1) for g in groups]
            rad = a * a + k2 * blocks[0] * blocks[1]
            out += pref / np.sqrt(rad)
        return out * jac

    return f


def r_kj_quadrature(
    k: int,
    j: int,
    kappa: float,
    method: str = "MONTE_CARLO",
    budget: int = 10**6,
    seed: int = 0,
) -> QuadratureResult:
    """Numerical value of the k-dimensional integral R_{k,j}(kappa) with the
    integrand exactly as displayed (prefactors included).

    Supported pairs: (2,1), (3,1), (4,1), (4,2); others raise
    UnsupportedIndexPair since no general integrand is displayed.
    """
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    if (k, j) not in ((2, 1), (3, 1), (4, 1), (4, 2)):
        raise UnsupportedIndexPair(f"(k, j) = ({k}, {j}) not supported")
    f = _rkj_integrand(k, j, kappa)
    if method == "TENSOR_GAUSS":
        n_axis = max(4, int(round(budget ** (1.0 / k))))
        val, nodes = _mc.tensor_gauss(f, k, n_axis)
        return QuadratureResult(val, 0.0, nodes, "TENSOR_GAUSS")
    rng = _mc.philox_rng("r_kj", (k, j, float(kappa)), seed)
    mean, err, n = _mc.mc_mean(f, k, budget, rng)
    return QuadratureResult(mean, err, n, "MONTE_CARLO", seed=seed)


def zetaQ_special(
    k: int,
    params: NchoParams,
    budget: int = 10**6,
    seed: int = 0,
    method: str = "MONTE_CARLO",
) -> QuadratureResult:
    """Assembled special value

    zeta_Q(k) = 2 c^k ( zeta(k,1/2) + sum_{0<2j<=k} r^{2j} R_{k,j}(kappa) ),
    c = (alpha+beta)/(2 sqrt(alpha beta (alpha beta - 1))), r = (a-b)/(a+b).

    The R terms use quadrature (the series route needs kappa < 1, which the
    admissible parameter range does not guarantee).
    """
    if k not in (2, 3, 4):
        raise UnsupportedIndexPair("assembled values available for k in 2..4")
    a, b = params.alpha, params.beta
    c = (a + b) / (2.0 * math.sqrt(a * b * (a * b - 1.0)))
    r2 = ((a - b) / (a + b)) ** 2
    total = _hz_half(k)
    err2 = 0.0
    nodes = 0
    if r2 > 0:
        pairs = [(k, 1)] if k < 4 else [(4, 1), (4, 2)]
        for kk, jj in pairs:
            res = r_kj_quadrature(kk, jj, params.kappa, method=method, budget=budget, seed=seed)
            weight = r2**jj
            total += weight * res.value
            err2 += (weight * res.std_error) ** 2
            nodes += res.samples_or_nodes
    pref = 2.0 * c**k
    return QuadratureResult(
        pref * total, pref * math.sqrt(err2), nodes, method, seed=seed
    )


def zetaQ2_closed(params: NchoParams) -> float:
    """Closed form of zeta_Q(2):

    (pi (a+b) / (2 sqrt(ab(ab-1))))^2 (1 + ((a-b)/(a+b))^2 F(-kappa^2)^2)
    with F = 2F1(1/4, 3/4; 1; .).
    """
    a, b = params.alpha, params.beta
    pref = (math.pi * (a + b) / (2.0 * math.sqrt(a * b * (a * b - 1.0)))) ** 2
    r2 = ((a - b) / (a + b)) ** 2
    if r2 == 0:
        return pref
    F = hyp2f1_quarter(-params.kappa**2)
    return pref * (1.0 + r2 * F * F)


# ---------------------------------------------------------------------------
# A_{n,k} and B_{n,j} integrals
# ---------------------------------------------------------------------------


def _abc(u4: np.ndarray, u2: np.ndarray):
    a = 1.0 - np.prod(u2, axis=1)
    b = (1.0 - u4[:, 0] * u4[:, 1]) * (1.0 - u4[:, 2] * u4[:, 3])
    c = np.prod(1.0 - u4, axis=1)
    return a, b, c


def appendixB_integral(
    which: str,
    n: int,
    k_or_j: int,
    budget: int = 10**6,
    seed: int = 0,
    method: str = "MONTE_CARLO",
) -> QuadratureResult:
    """Four-dimensional integrals

    A(n,k) = int (b+c)^{n-k} c^k / a^{2n+1},
    B(n,j) = int b^{n-j} c^j / a^{2n+1}
    over [0,1]^4 with a = 1 - prod u_i^2, b = (1-u1^4 u2^4)(1-u3^4 u4^4),
    c = prod (1-u_i^4).
    """
    if which not in ("A", "B"):
        raise ValueError("which must be 'A' or 'B'")
    if not (0 <= k_or_j <= n):
        raise ValueError("need 0 <= k (or j) <= n")
    m = k_or_j

    def f(v: np.ndarray) -> np.ndarray:
        u = 1.0 - v * v
        jac = np.prod(2.0 * v, axis=1)
        u2 = u * u
        u4 = u2 * u2
        a, b, c = _abc(u4, u2)
        base = (b + c) if which == "A" else b
        return base ** (n - m) * c**m / a ** (2 * n + 1) * jac

    if method == "TENSOR_GAUSS":
        n_axis = max(4, int(round(budget**0.25)))
        val, nodes = _mc.tensor_gauss(f, 4, n_axis)
        return QuadratureResult(val, 0.0, nodes, "TENSOR_GAUSS")
    rng = _mc.philox_rng(f"appendixB-{which}", (n, m), seed)
    mean, err, used = _mc.mc_mean(f, 4, budget, rng)
    return QuadratureResult(mean, err, used, "MONTE_CARLO", seed=seed)


def _pi_poly(c4: float, c2: float) -> float:
    return c4 * math.pi**4 + c2 * math.pi**2


# exact low-order values of the A/B integral families
APPENDIX_AB_EXACT = {
    ("A", 0, 0): _pi_poly(1.0 / 96.0, 0.0),
    ("A", 1, 0): _pi_poly(1.0 / 64.0, -1.0 / 64.0),
    ("A", 1, 1): _pi_poly(1.0 / 128.0, -9.0 / 256.0),
    ("B", 0, 0): _pi_poly(1.0 / 96.0, 0.0),
    ("B", 1, 0): _pi_poly(1.0 / 128.0, 5.0 / 256.0),
    ("B", 1, 1): _pi_poly(1.0 / 128.0, -9.0 / 256.0),
}


def r42_series(t: float, n_max: int = 1) -> float:
    """Low-order expansion R_{4,2}(t) = 16 sum_n C(-1/2,n) sum_k C(n,k)
    A_{n,k} t^{n+k}, limited by the exact A table (n <= 1)."""
    if n_max > 1:
        raise TableExhausted("exact A_{n,k} table stops at n = 1")
    total = APPENDIX_AB_EXACT[("A", 0, 0)]
    if n_max >= 1:
        total += -0.5 * (
            APPENDIX_AB_EXACT[("A", 1, 0)] * t + APPENDIX_AB_EXACT[("A", 1, 1)] * t * t
        )
    return 16.0 * total


def r42_order_of_contact(
    kappas: Sequence[float], budget: int = 10**6, seed: int = 0
) -> list:
    """Paired-sample estimate of R_{4,2}(kappa) - r42_series(kappa^2).

    The kappa = 0 baseline integrates to pi^4/6 exactly, so only the
    difference integrand (variance O(kappa^4)) is sampled; this resolves the
    O(kappa^4) order of contact far below plain-MC noise.  Returns a list of
    {kappa, difference, std_error} dicts.
    """
    rng = _mc.philox_rng("r42_contact", tuple(float(k) for k in kappas), seed)
    kap = [float(k) for k in kappas]

    def diff_f(kappa2: float):
        def f(v: np.ndarray) -> np.ndarray:
            u = 1.0 - v * v
            jac = np.prod(2.0 * v, axis=1)
            u2 = u * u
            u4 = u2 * u2
            a, b, c = _abc(u4, u2)
            rad = a * a + kappa2 * b + (kappa2 + kappa2 * kappa2) * c
            return 16.0 * jac * (1.0 / np.sqrt(rad) - 1.0 / a)

        return f

    base = math.pi**4 / 6.0
    out = []
    for k in kap:
        mean, err, _ = _mc.mc_mean(diff_f(k * k), 4, budget, rng)
        out.append(
            {
                "kappa": k,
                "difference": base + mean - r42_series(k * k),
                "std_error": err,
            }
        )
    return out
