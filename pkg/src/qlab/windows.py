"""Sound truncation windows for bilateral and quadrant-restricted lattice sums.

Every enumerator here guarantees: each omitted lattice point has exponent
>= order.  The growth precheck is structural (positive quadratic coefficients
on the contributing region), stopping rules use exact rational bounds, and a
``pad`` argument widens every stopping decision by that many extra steps so
window soundness can be re-verified empirically.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator

from .qring import QRingError


class DivergentWindow(QRingError):
    """The exponent fails to grow along a contributing direction."""


def _ceil(x: Fraction) -> int:
    return math.ceil(x)


def bilateral_1d(
    a2: Fraction,
    a1: Fraction,
    a0: Fraction,
    order: Fraction,
    offset: int = 0,
    step: int = 1,
    pad: int = 0,
) -> Iterator[tuple[int, Fraction]]:
    """Yield (n, e(n)) with e(n) = a2 n^2 + a1 n + a0 < order, n = offset (mod step).

    a2 must be positive; the scan starts at the progression point nearest the
    vertex and walks outward in both directions.
    """
    if a2 <= 0:
        raise DivergentWindow("quadratic coefficient must be positive")
    if step <= 0:
        raise ValueError("step must be positive")

    def e(n: int) -> Fraction:
        return a2 * n * n + a1 * n + a0

    vertex = -a1 / (2 * a2)
    j0 = _ceil((vertex - offset) / step)
    n_up = offset + step * j0
    extra = 0
    n = n_up
    while True:
        v = e(n)
        if v < order:
            yield (n, v)
            extra = 0
        else:
            extra += 1
            if extra > pad:
                break
        n += step
    extra = 0
    n = n_up - step
    while True:
        v = e(n)
        if v < order:
            yield (n, v)
            extra = 0
        else:
            extra += 1
            if extra > pad:
                break
        n -= step


def _scan_row(
    A: Fraction,
    B: Fraction,
    C: Fraction,
    D: Fraction,
    E: Fraction,
    F: Fraction,
    r: int,
    order: Fraction,
    s_offset: int,
    s_step: int,
    pad: int,
) -> Iterator[tuple[int, Fraction]]:
    """Scan s >= 0, s = s_offset (mod s_step), for fixed r >= 0."""
    s_vertex = -(B * r + E) / (2 * C)
    s = s_offset % s_step
    extra = 0
    while True:
        e = A * r * r + B * r * s + C * s * s + D * r + E * s + F
        if e < order:
            yield (s, e)
            extra = 0
        elif s >= s_vertex:
            extra += 1
            if extra > pad:
                break
        s += s_step


def _quadrant_points(
    A: Fraction,
    B: Fraction,
    C: Fraction,
    D: Fraction,
    E: Fraction,
    F: Fraction,
    order: Fraction,
    s_offset_for_r,
    s_step: int,
    pad: int,
) -> Iterator[tuple[int, int, Fraction]]:
    """Points (r, s) with r, s >= 0 and exponent < order, for A, B, C > 0.

    s_offset_for_r maps r to the residue class of s (mod s_step).
    """
    if A <= 0 or B <= 0 or C <= 0:
        raise DivergentWindow(
            f"quadrant growth requires positive quadratic coefficients, got {A}, {B}, {C}"
        )
    r_vertex = -D / (2 * A)
    r = 0
    extra = 0
    while True:
        lin = B * r + E
        lam = A * r * r + D * r + F
        if lin < 0:
            lam -= lin * lin / (4 * C)
        if lam >= order and r >= r_vertex:
            extra += 1
        else:
            extra = 0
        if extra > pad:
            break
        for s, e in _scan_row(A, B, C, D, E, F, r, order, s_offset_for_r(r), s_step, pad):
            yield (r, s, e)
        r += 1


def sign_quadrant_points(
    A: Fraction,
    B: Fraction,
    C: Fraction,
    D: Fraction,
    E: Fraction,
    F: Fraction = Fraction(0),
    *,
    order: Fraction,
    parity_odd: bool = False,
    s_mod: tuple[int, int] | None = None,
    pad: int = 0,
) -> Iterator[tuple[int, int, int, Fraction]]:
    """Lattice points of the two sg(r, s) quadrants with exponent < order.

    Yields (r, s, quadrant_sign, exponent) in original coordinates, where the
    exponent is A r^2 + B rs + C s^2 + D r + E s + F.  Supports the parity
    restriction r + s odd, or a congruence s = sigma (mod M); not both.
    """
    if parity_odd and s_mod is not None:
        raise ValueError("parity and congruence restrictions cannot be combined")

    if parity_odd:
        step = 2
        pos_offset = lambda r: (1 - r) % 2
        neg_offset = pos_offset  # r+s odd iff r'+s' odd under (r,s) = (-1-r',-1-s')
    elif s_mod is not None:
        sigma, modulus = s_mod
        step = modulus
        pos_offset = lambda r: sigma % modulus
        neg_offset = lambda r: (-1 - sigma) % modulus
    else:
        step = 1
        pos_offset = lambda r: 0
        neg_offset = lambda r: 0

    for r, s, e in _quadrant_points(A, B, C, D, E, F, order, pos_offset, step, pad):
        yield (r, s, 1, e)

    # map (r, s) = (-1-r', -1-s') onto r', s' >= 0
    D2 = 2 * A + B - D
    E2 = 2 * C + B - E
    F2 = F + A + B + C - D - E
    for r2, s2, e in _quadrant_points(A, B, C, D2, E2, F2, order, neg_offset, step, pad):
        yield (-1 - r2, -1 - s2, -1, e)


def definite_points(
    A: Fraction,
    B: Fraction,
    C: Fraction,
    D: Fraction,
    E: Fraction,
    F: Fraction = Fraction(0),
    *,
    order: Fraction,
    pad: int = 0,
) -> Iterator[tuple[int, int, Fraction]]:
    """All (r, s) in Z^2 with A r^2 + B rs + C s^2 + D r + E s + F < order.

    Requires the quadratic form to be positive definite (4AC - B^2 > 0).
    """
    disc = 4 * A * C - B * B
    if A <= 0 or disc <= 0:
        raise DivergentWindow("bilateral double sum needs a positive definite form")

    def row_min(r: int) -> Fraction:
        lin = B * r + E
        return A * r * r + D * r + F - lin * lin / (4 * C)

    def scan_bilateral_s(r: int) -> Iterator[tuple[int, Fraction]]:
        s_vertex = -(B * r + E) / (2 * C)
        s0 = _ceil(s_vertex)
        for start, stride in ((s0, 1), (s0 - 1, -1)):
            s = start
            extra = 0
            while True:
                e = A * r * r + B * r * s + C * s * s + D * r + E * s + F
                if e < order:
                    yield (s, e)
                    extra = 0
                else:
                    extra += 1
                    if extra > pad:
                        break
                s += stride

    # row_min is an upward parabola in r with leading coefficient disc/(4C)
    r_vertex = -(D - B * E / (2 * C)) / (2 * (A - B * B / (4 * C)))
    r0 = _ceil(r_vertex)
    for start, stride in ((r0, 1), (r0 - 1, -1)):
        r = start
        extra = 0
        while True:
            if row_min(r) >= order:
                extra += 1
                if extra > pad:
                    break
            else:
                extra = 0
            for s, e in scan_bilateral_s(r):
                yield (r, s, e)
            r += stride
