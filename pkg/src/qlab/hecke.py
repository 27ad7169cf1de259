"""Indefinite-quadratic-form double sums over the sign-matched quadrants.

All sums here have the shape  sum_{r,s} sg(r,s) * coeff(r,s) * q^(Q(r,s))
with sg(r,s) = +1 on r,s >= 0, -1 on r,s < 0 and 0 on mixed signs, and a
quadratic exponent Q with positive coefficients on the contributing quadrants,
so truncation windows from :mod:`qlab.windows` are sound by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .qring import QSeries, Scalar, SeriesBuilder, WeightedMonomial, ZERO_VEXP, qpow
from .windows import DivergentWindow, sign_quadrant_points

__all__ = [
    "sg_pair",
    "fabc",
    "quad_sum_half",
    "theta_pm",
    "theta_pm_star",
    "QuadFormSum",
    "DivergentWindow",
]


def sg_pair(r: int, s: int) -> int:
    """(sg(r) + sg(s)) / 2 with sg(n) = 1 for n >= 0 and -1 otherwise."""
    a = 1 if r >= 0 else -1
    b = 1 if s >= 0 else -1
    return (a + b) // 2


@dataclass(frozen=True)
class QuadFormSum:
    """Descriptor of one quadrant-restricted double sum, kept for reporting.

    half_convention selects the exponent a*C(r,2)+b*r*s+c*C(s,2) (False) or
    a*r^2/2 + b*r*s + c*s^2/2 (True).
    """

    a: int
    b: int
    c: int
    half_convention: bool
    x_arg: WeightedMonomial
    y_arg: WeightedMonomial
    parity_constraint: bool = False

    @property
    def discriminant(self) -> int:
        return self.b * self.b - self.a * self.c


def _double_sum(
    qf: QuadFormSum,
    order: Fraction,
    pad: int = 0,
    s_mod: tuple[int, int] | None = None,
) -> QSeries:
    """Evaluate sum sg(r,s) x^r y^s q^Q(r,s) with x, y weighted monomials."""
    a, b, c = qf.a, qf.b, qf.c
    if a <= 0 or b <= 0 or c <= 0:
        raise DivergentWindow("quadratic form coefficients must be positive")
    x, y = qf.x_arg, qf.y_arg
    A = Fraction(a, 2)
    B = Fraction(b)
    C = Fraction(c, 2)
    if qf.half_convention:
        D = x.qexp
        E = y.qexp
    else:
        D = x.qexp - Fraction(a, 2)
        E = y.qexp - Fraction(c, 2)
    builder = SeriesBuilder(order)
    for r, s, sign, e in sign_quadrant_points(
        A, B, C, D, E, order=order, parity_odd=qf.parity_constraint, s_mod=s_mod, pad=pad
    ):
        mono_sign = sign
        if x.sign == -1 and r % 2:
            mono_sign = -mono_sign
        if y.sign == -1 and s % 2:
            mono_sign = -mono_sign
        builder.add_term(
            e,
            (
                x.vexp[0] * r + y.vexp[0] * s,
                x.vexp[1] * r + y.vexp[1] * s,
                x.vexp[2] * r + y.vexp[2] * s,
                x.vexp[3] * r + y.vexp[3] * s,
            ),
            mono_sign,
        )
    return builder.build()


def fabc(
    a: int,
    b: int,
    c: int,
    x: WeightedMonomial,
    y: WeightedMonomial,
    order: Scalar,
    pad: int = 0,
) -> QSeries:
    """f_{a,b,c}(x,y) = sum sg(r,s) (-1)^(r+s) x^r y^s q^(a C(r,2) + b rs + c C(s,2))."""
    order = Fraction(order)
    qf = QuadFormSum(a, b, c, False, -x, -y)
    return _double_sum(qf, order, pad=pad)


def quad_sum_half(
    a: int,
    b: int,
    c: int,
    x1: WeightedMonomial,
    y1: WeightedMonomial,
    order: Scalar,
    pad: int = 0,
) -> QSeries:
    """sum sg(r,s) q^(a r^2/2 + b rs + c s^2/2) x1^r y1^s (no alternating sign)."""
    order = Fraction(order)
    qf = QuadFormSum(a, b, c, True, x1, y1)
    return _double_sum(qf, order, pad=pad)


def theta_pm(t: int, p: int, m: int, order: Scalar, pad: int = 0) -> QSeries:
    """The indefinite binary theta series with parity-restricted lattice.

    sum over r != s (mod 2) of sg(r,s) (-1)^((r-s-1)/2)
    q^(r^2/8 + (4t-1) rs/4 + s^2/8 + (p+m) r/2 + (p-m) s/2).
    """
    if t < 1:
        raise ValueError("t must be a positive integer")
    order = Fraction(order)
    A = Fraction(1, 8)
    B = Fraction(4 * t - 1, 4)
    C = Fraction(1, 8)
    D = Fraction(p + m, 2)
    E = Fraction(p - m, 2)
    builder = SeriesBuilder(order)
    for r, s, sign, e in sign_quadrant_points(
        A, B, C, D, E, order=order, parity_odd=True, pad=pad
    ):
        if ((r - s - 1) // 2) % 2:
            sign = -sign
        builder.add_term(e, ZERO_VEXP, sign)
    return builder.build()


def theta_pm_star(t: int, p: int, m: int, order: Scalar, pad: int = 0) -> QSeries:
    """q^(-m^2/(2(2t-1)) + p^2/(4t)) * theta_pm(t, p, m)."""
    prefix = qpow(-Fraction(m * m, 2 * (2 * t - 1)) + Fraction(p * p, 4 * t))
    order = Fraction(order)
    base = theta_pm(t, p, m, order - prefix.qexp, pad=pad)
    return base.shift(prefix)
