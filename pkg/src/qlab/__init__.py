"""qlab: exact-arithmetic laboratory for q-series identities.

Truncated Laurent series in fractional powers of q over multivariate integer
Laurent-polynomial coefficients, the classical q-series building blocks,
Hecke-type double sums, Appell functions, and a registry that machine-verifies
identities between them coefficient-by-coefficient to a chosen order.
"""

from .qring import (
    FormalVar,
    LaurentCoeff,
    QExp,
    QSeries,
    WeightedMonomial,
    add,
    equal_below,
    first_difference,
    geometric,
    invert_unit,
    mul,
    qpow,
    varmono,
)

__all__ = [
    "FormalVar",
    "LaurentCoeff",
    "QExp",
    "QSeries",
    "WeightedMonomial",
    "add",
    "equal_below",
    "first_difference",
    "geometric",
    "invert_unit",
    "mul",
    "qpow",
    "varmono",
]

__version__ = "0.1.0"
