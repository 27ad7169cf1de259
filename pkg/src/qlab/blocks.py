"""Classical q-series building blocks: Pochhammer symbols, q-binomials, theta functions.

Theta functions are handled in both product form (x)_inf (q/x)_inf (q)_inf and
bilateral sum form sum_n (-1)^n q^(rho*C(n,2)) x^n, with arguments normalized
into the strip 0 <= weight < modulus by the elliptic shift
Theta(q^(n*rho) x; q^rho) = (-1)^n q^(-rho*C(n,2)) x^(-n) Theta(x; q^rho).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .qring import (
    QSeries,
    Scalar,
    SeriesBuilder,
    WeightedMonomial,
    WM_ONE,
    LaurentCoeff,
    QRingError,
    qpow,
)
from .windows import bilateral_1d


class NonPositiveWeight(QRingError):
    """Infinite Pochhammer products need an argument with positive q-weight."""


class DegenerateArgument(QRingError):
    """Theta argument is exactly a power of the modulus: the function vanishes.

    The theta expanders return a flagged zero series rather than raising; this
    class exists for callers that must reject degenerate specs (e.g. inverses).
    """


def binom2(n: int) -> Fraction:
    """C(n, 2) = n(n-1)/2, valid for any integer n."""
    return Fraction(n * (n - 1), 2)


def poch_finite(u: WeightedMonomial, n: int, order: Scalar, step: Scalar = 1) -> QSeries:
    """(u; q^step)_n = prod_{i=0}^{n-1} (1 - q^(i*step) u), truncated at order."""
    order = Fraction(order)
    step = Fraction(step)
    r = QSeries.one(order)
    for i in range(n):
        v = u * qpow(i * step)
        r = r - r.shift(v)
    return r


def poch_inf(u: WeightedMonomial, order: Scalar, step: Scalar = 1) -> QSeries:
    """(u; q^step)_inf truncated at order; requires w(u) > 0 so factors stabilize."""
    order = Fraction(order)
    step = Fraction(step)
    if u.qexp <= 0:
        raise NonPositiveWeight(f"(u)_inf needs positive q-weight, got {u}")
    if step <= 0:
        raise ValueError("step must be positive")
    r = QSeries.one(order)
    i = 0
    while i * step + u.qexp < order:
        r = r - r.shift(u * qpow(i * step))
        i += 1
    return r


@lru_cache(maxsize=None)
def _qbinom_coeffs(n: int, k: int) -> tuple[int, ...]:
    """Dense coefficient tuple of the Gaussian binomial [n, k]_q (a polynomial)."""
    if k < 0 or k > n:
        return ()
    if k == 0 or k == n:
        return (1,)
    a = _qbinom_coeffs(n - 1, k - 1)
    b = _qbinom_coeffs(n - 1, k)
    out = [0] * (k * (n - k) + 1)
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i + k] += c
    return tuple(out)


def qbinom(n: int, k: int, order: Scalar) -> QSeries:
    """Gaussian binomial (q)_n / ((q)_k (q)_{n-k}) as a polynomial in q.

    Zero when k < 0 or k > n (the convention the nested-sum families rely on).
    """
    order = Fraction(order)
    coeffs = _qbinom_coeffs(n, k)
    terms = {
        i: LaurentCoeff.const(c)
        for i, c in enumerate(coeffs)
        if c and i < order
    }
    return QSeries(1, terms, order)


@dataclass(frozen=True)
class ThetaSpec:
    """Theta(argument; q^qmodulus)."""

    argument: WeightedMonomial
    qmodulus: Fraction = Fraction(1)

    def __post_init__(self):
        if not isinstance(self.qmodulus, Fraction):
            object.__setattr__(self, "qmodulus", Fraction(self.qmodulus))
        if self.qmodulus <= 0:
            raise ValueError("theta modulus must be positive")

    def normalized(self) -> tuple[WeightedMonomial, WeightedMonomial]:
        """(shift, u') with Theta(argument) = shift * Theta(u') and 0 <= w(u') < modulus."""
        rho = self.qmodulus
        n = math.floor(self.argument.qexp / rho)
        u2 = self.argument * qpow(-n * rho)
        if n == 0:
            return WM_ONE, u2
        shift = WeightedMonomial(-1 if n % 2 else 1, -rho * binom2(n)) * (u2 ** (-n))
        return shift, u2

    @property
    def is_degenerate(self) -> bool:
        """True when the argument is exactly q^(n*modulus): theta vanishes."""
        _, u2 = self.normalized()
        return u2.is_one


def theta_prod(spec: ThetaSpec, order: Scalar) -> QSeries:
    """Triple product (x)_inf (q^rho/x)_inf (q^rho)_inf after strip normalization.

    Degenerate arguments yield the zero series (see ThetaSpec.is_degenerate).
    """
    order = Fraction(order)
    rho = spec.qmodulus
    shift, u2 = spec.normalized()
    if u2.is_one:
        return QSeries.zero(order)
    m = order - shift.qexp
    if u2.qexp == 0:
        # split the weight-0 first factor: (u')_inf = (1 - u') (q^rho u')_inf
        first = QSeries.one(m) - QSeries.from_monomial(u2, m)
        p1 = first * poch_inf(u2 * qpow(rho), m, step=rho)
    else:
        p1 = poch_inf(u2, m, step=rho)
    p2 = poch_inf(qpow(rho) * u2.inverse(), m, step=rho)
    p3 = poch_inf(qpow(rho), m, step=rho)
    return (p1 * p2 * p3).shift(shift).truncate(order)


def theta_sum(spec: ThetaSpec, order: Scalar, pad: int = 0) -> QSeries:
    """Bilateral sum form sum_n (-1)^n q^(rho*C(n,2)) x^n, truncated at order.

    The summation window is chosen so every omitted term has exponent >= order.
    """
    order = Fraction(order)
    rho = spec.qmodulus
    u = spec.argument
    b = SeriesBuilder(order)
    for n, _ in bilateral_1d(rho / 2, u.qexp - rho / 2, Fraction(0), order, pad=pad):
        b.add_monomial(qpow(rho * binom2(n)) * ((-u) ** n))
    return b.build()


def theta(spec: ThetaSpec, order: Scalar) -> QSeries:
    """Canonical theta expansion (product form)."""
    return theta_prod(spec, order)
