"""Exact coefficient ring: sparse truncated Laurent series in fractional powers of q.

A :class:`QSeries` is a finite collection of terms ``q^e * c`` where ``e`` is an
exact rational exponent (all exponents share a common denominator ``base_den``)
and ``c`` is a :class:`LaurentCoeff`, a Laurent polynomial in up to four formal
variables x, y, x2, y2 with exact integer (or, where a computation forces it,
exact rational) coefficients.  Every series carries a validity ``order``: all
terms with exponent strictly below ``order`` are exact, terms at or beyond it
are unknown and never stored.  All operations are pure; values are never
mutated after construction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterable, Iterator, Union

#: Exact rational q-exponent.
QExp = Fraction

Scalar = Union[int, Fraction]


class QRingError(Exception):
    """Base class for errors raised by the coefficient ring."""


class NotAUnit(QRingError):
    """Series inversion requires a lowest term that is a single +-1 monomial."""


class ZeroWeight(QRingError):
    """Geometric expansion of 1/(1-u) needs u to carry a nonzero q-weight."""


class BeyondOrder(QRingError):
    """Requested coefficient lies at or beyond the series' validity order."""


class FormalVar(enum.IntEnum):
    """The four formal variables a coefficient polynomial may mention."""

    X1 = 0
    Y1 = 1
    X2 = 2
    Y2 = 3

    @property
    def symbol(self) -> str:
        return _VAR_NAMES[self.value]


_VAR_NAMES = ("x", "y", "x2", "y2")

Vexp = tuple[int, int, int, int]
ZERO_VEXP: Vexp = (0, 0, 0, 0)


def _norm_scalar(c: Scalar) -> Scalar:
    """Collapse integral Fractions back to int so the common path stays fast."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def _vexp_add(a: Vexp, b: Vexp) -> Vexp:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def _vexp_scale(a: Vexp, k: int) -> Vexp:
    return (a[0] * k, a[1] * k, a[2] * k, a[3] * k)


def _render_scalar(c: Scalar) -> str:
    return str(c)


def _render_vexp(v: Vexp) -> str:
    parts = []
    for i, e in enumerate(v):
        if e == 1:
            parts.append(_VAR_NAMES[i])
        elif e != 0:
            parts.append(f"{_VAR_NAMES[i]}^{e}")
    return "*".join(parts)


class LaurentCoeff:
    """Finite integer-coefficient Laurent polynomial in x, y, x2, y2.

    Stored sparsely as exponent-vector -> nonzero coefficient; the empty map is
    the zero polynomial.  Coefficients are Python ints; exact Fractions appear
    only when an operation (content division) forces them.
    """

    __slots__ = ("d",)

    def __init__(self, d: dict[Vexp, Scalar] | None = None, _trust: bool = False):
        if d is None:
            self.d: dict[Vexp, Scalar] = {}
        elif _trust:
            self.d = d
        else:
            self.d = {v: _norm_scalar(c) for v, c in d.items() if c != 0}

    @classmethod
    def const(cls, c: Scalar) -> "LaurentCoeff":
        c = _norm_scalar(c)
        return cls({ZERO_VEXP: c} if c else {}, _trust=True)

    @classmethod
    def monomial(cls, vexp: Vexp, c: Scalar = 1) -> "LaurentCoeff":
        c = _norm_scalar(c)
        return cls({vexp: c} if c else {}, _trust=True)

    def __bool__(self) -> bool:
        return bool(self.d)

    def is_zero(self) -> bool:
        return not self.d

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentCoeff):
            return self.d == other.d
        if isinstance(other, (int, Fraction)):
            return self.d == ({ZERO_VEXP: _norm_scalar(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.d.items()))

    def __add__(self, other: "LaurentCoeff") -> "LaurentCoeff":
        out = dict(self.d)
        for v, c in other.d.items():
            s = out.get(v, 0) + c
            if s:
                out[v] = _norm_scalar(s)
            else:
                out.pop(v, None)
        return LaurentCoeff(out, _trust=True)

    def __neg__(self) -> "LaurentCoeff":
        return LaurentCoeff({v: -c for v, c in self.d.items()}, _trust=True)

    def __sub__(self, other: "LaurentCoeff") -> "LaurentCoeff":
        return self + (-other)

    def __mul__(self, other: "LaurentCoeff | Scalar") -> "LaurentCoeff":
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentCoeff()
            return LaurentCoeff(
                {v: _norm_scalar(c * other) for v, c in self.d.items()}, _trust=True
            )
        a, b = self.d, other.d
        if len(a) == 1 and ZERO_VEXP in a:
            return other * a[ZERO_VEXP]
        if len(b) == 1 and ZERO_VEXP in b:
            return self * b[ZERO_VEXP]
        out: dict[Vexp, Scalar] = {}
        for va, ca in a.items():
            for vb, cb in b.items():
                v = _vexp_add(va, vb)
                s = out.get(v, 0) + ca * cb
                if s:
                    out[v] = s
                else:
                    out.pop(v, None)
        return LaurentCoeff({v: _norm_scalar(c) for v, c in out.items() if c}, _trust=True)

    __rmul__ = __mul__

    def mul_monomial(self, sign: int, vexp: Vexp) -> "LaurentCoeff":
        """Multiply by sign * (formal-variable monomial)."""
        if vexp == ZERO_VEXP:
            return self if sign == 1 else -self
        if sign == 1:
            return LaurentCoeff({_vexp_add(v, vexp): c for v, c in self.d.items()}, _trust=True)
        return LaurentCoeff({_vexp_add(v, vexp): -c for v, c in self.d.items()}, _trust=True)

    def div_exact(self, k: Scalar) -> "LaurentCoeff":
        """Divide every coefficient by k, exactly (rationals allowed)."""
        return LaurentCoeff(
            {v: _norm_scalar(Fraction(c) / k) for v, c in self.d.items()}, _trust=True
        )

    def content(self) -> int:
        """gcd of all integer coefficients (0 for the zero polynomial).

        Returns 1 as soon as any coefficient is a non-integer rational.
        """
        g = 0
        for c in self.d.values():
            if isinstance(c, Fraction):
                return 1
            g = gcd(g, abs(c))
            if g == 1:
                return 1
        return g

    def single_unit(self) -> tuple[int, Vexp] | None:
        """Return (sign, vexp) if this polynomial is a single +-1 monomial."""
        if len(self.d) != 1:
            return None
        (v, c), = self.d.items()
        if c == 1 or c == -1:
            return (int(c), v)
        return None

    def items(self) -> Iterable[tuple[Vexp, Scalar]]:
        return self.d.items()

    def __str__(self) -> str:
        if not self.d:
            return "0"
        parts = []
        for v in sorted(self.d, reverse=True):
            c = self.d[v]
            name = _render_vexp(v)
            if not name:
                term = _render_scalar(c)
            elif c == 1:
                term = name
            elif c == -1:
                term = "-" + name
            elif isinstance(c, Fraction):
                term = f"{c}*{name}"
            else:
                term = f"{c}{name}"
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += " - " + term[1:] if term.startswith("-") else " + " + term
        return out

    __repr__ = __str__


LC_ZERO = LaurentCoeff()
LC_ONE = LaurentCoeff.const(1)


@dataclass(frozen=True)
class WeightedMonomial:
    """sign * q^qexp * (formal-variable monomial): argument type of every function here.

    A generic variable x is verified as q^alpha * x with a small rational weight
    alpha, so every geometric denominator acquires a nonzero q-weight while x
    stays formal.
    """

    sign: int = 1
    qexp: Fraction = Fraction(0)
    vexp: Vexp = ZERO_VEXP

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if not isinstance(self.qexp, Fraction):
            object.__setattr__(self, "qexp", Fraction(self.qexp))

    def __mul__(self, other: "WeightedMonomial") -> "WeightedMonomial":
        return WeightedMonomial(
            self.sign * other.sign, self.qexp + other.qexp, _vexp_add(self.vexp, other.vexp)
        )

    def __pow__(self, k: int) -> "WeightedMonomial":
        sign = self.sign if k % 2 else 1
        return WeightedMonomial(sign, self.qexp * k, _vexp_scale(self.vexp, k))

    def __neg__(self) -> "WeightedMonomial":
        return WeightedMonomial(-self.sign, self.qexp, self.vexp)

    def inverse(self) -> "WeightedMonomial":
        return self ** -1

    @property
    def is_one(self) -> bool:
        return self.sign == 1 and self.qexp == 0 and self.vexp == ZERO_VEXP

    def coeff(self) -> LaurentCoeff:
        """The sign * variable part, as a coefficient polynomial."""
        return LaurentCoeff.monomial(self.vexp, self.sign)

    def __str__(self) -> str:
        parts = []
        if self.qexp:
            parts.append(f"q^{self.qexp}")
        name = _render_vexp(self.vexp)
        if name:
            parts.append(name)
        body = "*".join(parts) if parts else "1"
        return ("-" if self.sign < 0 else "") + body

    __repr__ = __str__


WM_ONE = WeightedMonomial()


def qpow(e: Scalar) -> WeightedMonomial:
    """The monomial q^e."""
    return WeightedMonomial(1, Fraction(e), ZERO_VEXP)


def varmono(var: FormalVar | int, power: int = 1, *, q: Scalar = 0, sign: int = 1) -> WeightedMonomial:
    """sign * q^q * var^power."""
    v = [0, 0, 0, 0]
    v[int(var)] = power
    return WeightedMonomial(sign, Fraction(q), tuple(v))  # type: ignore[arg-type]


def _below(key: int, den: int, order: Fraction) -> bool:
    """key/den < order, in exact integer arithmetic."""
    return key * order.denominator < order.numerator * den


class QSeries:
    """Sparse truncated Laurent series in q^(1/base_den) over LaurentCoeff.

    terms maps scaled exponent k (meaning q^(k/base_den)) to a nonzero
    coefficient; order is the exact validity bound.  Treated as immutable.
    """

    __slots__ = ("base_den", "terms", "order")

    def __init__(self, base_den: int, terms: dict[int, LaurentCoeff], order: Fraction):
        self.base_den = base_den
        self.terms = terms
        self.order = order

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: Fraction) -> "QSeries":
        return cls(1, {}, Fraction(order))

    @classmethod
    def one(cls, order: Fraction) -> "QSeries":
        return cls.from_coeff(LC_ONE, order)

    @classmethod
    def from_coeff(cls, c: LaurentCoeff, order: Fraction, at: Fraction = Fraction(0)) -> "QSeries":
        order = Fraction(order)
        at = Fraction(at)
        den = at.denominator
        if c.is_zero() or not at < order:
            return cls(1, {}, order)
        return cls(den, {at.numerator: c}, order)

    @classmethod
    def from_monomial(cls, m: WeightedMonomial, order: Fraction) -> "QSeries":
        return cls.from_coeff(m.coeff(), order, m.qexp)

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def low_exponent(self) -> Fraction | None:
        """Lowest stored exponent, or None for the (truncated) zero series."""
        if not self.terms:
            return None
        return Fraction(min(self.terms), self.base_den)

    def _low_or_order(self) -> Fraction:
        low = self.low_exponent()
        return self.order if low is None else low

    def exponents(self) -> list[Fraction]:
        return [Fraction(k, self.base_den) for k in sorted(self.terms)]

    def coeff_at(self, e: Scalar) -> LaurentCoeff:
        """Coefficient of q^e; BeyondOrder if e is at or past the validity bound."""
        e = Fraction(e)
        if not e < self.order:
            raise BeyondOrder(f"coefficient at q^{e} is unknown (order {self.order})")
        num = e * self.base_den
        if num.denominator != 1:
            return LC_ZERO
        return self.terms.get(int(num), LC_ZERO)

    # -- structural helpers -------------------------------------------------

    def rebase(self, den: int) -> "QSeries":
        if den == self.base_den:
            return self
        if den % self.base_den:
            raise ValueError("new denominator must be a multiple of the old one")
        f = den // self.base_den
        return QSeries(den, {k * f: c for k, c in self.terms.items()}, self.order)

    def normalized(self) -> "QSeries":
        """Reduce base_den to the smallest denominator supporting all terms."""
        g = self.base_den
        for k in self.terms:
            g = gcd(g, k)
            if g == 1:
                return self
        if g == 1 or g == 0:
            return self
        return QSeries(self.base_den // g, {k // g: c for k, c in self.terms.items()}, self.order)

    def truncate(self, order: Scalar) -> "QSeries":
        """Discard terms at or beyond order; the result's order never exceeds it."""
        order = Fraction(order)
        if order >= self.order:
            order = self.order
            return QSeries(self.base_den, self.terms, order)
        den = self.base_den
        kept = {k: c for k, c in self.terms.items() if _below(k, den, order)}
        return QSeries(den, kept, order)

    # -- ring operations -----------------------------------------------------

    def __add__(self, other: "QSeries") -> "QSeries":
        den = lcm(self.base_den, other.base_den)
        a, b = self.rebase(den), other.rebase(den)
        order = min(a.order, b.order)
        out = dict(a.terms)
        for k, c in b.terms.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        out = {k: c for k, c in out.items() if _below(k, den, order)}
        return QSeries(den, out, order)

    def __neg__(self) -> "QSeries":
        return QSeries(self.base_den, {k: -c for k, c in self.terms.items()}, self.order)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def __mul__(self, other: "QSeries | LaurentCoeff | Scalar") -> "QSeries":
        if isinstance(other, (int, Fraction)):
            other = LaurentCoeff.const(other)
        if isinstance(other, LaurentCoeff):
            if other.is_zero():
                return QSeries(1, {}, self.order)
            return QSeries(
                self.base_den, {k: c * other for k, c in self.terms.items()}, self.order
            )
        den = lcm(self.base_den, other.base_den)
        a, b = self.rebase(den), other.rebase(den)
        order = min(a.order + b._low_or_order(), b.order + a._low_or_order())
        limit_num = order.numerator * den
        limit_den = order.denominator
        out: dict[int, LaurentCoeff] = {}
        b_items = sorted(b.terms.items())
        for ka, ca in a.terms.items():
            for kb, cb in b_items:
                k = ka + kb
                if k * limit_den >= limit_num:
                    break
                p = ca * cb
                if not p:
                    continue
                s = out.get(k)
                s = p if s is None else s + p
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return QSeries(den, out, order)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "QSeries":
        if n < 0:
            raise ValueError("use invert_unit for negative powers")
        result = QSeries.one(self.order)
        for _ in range(n):
            result = result * self
        return result

    def shift(self, m: WeightedMonomial) -> "QSeries":
        """Multiply by a weighted monomial (exact exponent shift)."""
        den = lcm(self.base_den, m.qexp.denominator)
        s = self.rebase(den)
        dk = int(m.qexp * den)
        terms = {k + dk: c.mul_monomial(m.sign, m.vexp) for k, c in s.terms.items()}
        return QSeries(den, terms, s.order + m.qexp)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        den = lcm(self.base_den, other.base_den)
        a, b = self.rebase(den), other.rebase(den)
        return a.order == b.order and a.terms == b.terms

    def __hash__(self):
        raise TypeError("QSeries is not hashable")

    # -- rendering -----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return f"0 + O(q^{self.order})"
        parts = []
        for k in sorted(self.terms):
            e = Fraction(k, self.base_den)
            parts.append(f"({self.terms[k]})q^{e}")
        return " + ".join(parts) + f" + O(q^{self.order})"

    __repr__ = __str__


def add(a: QSeries, b: QSeries) -> QSeries:
    """Termwise sum; order is the minimum of the operand orders."""
    return a + b


def mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product truncated at the correct combined validity order."""
    return a * b


def invert_unit(a: QSeries) -> QSeries:
    """Invert a series whose lowest term is a single monomial with coefficient +-1.

    Raises NotAUnit otherwise.  The result is valid to a.order - 2*low(a).
    """
    return _invert(a, allow_content=False)


def invert_content(a: QSeries) -> QSeries:
    """Invert after factoring out the integer content of the lowest coefficient.

    Needed for series like Theta(-1; q) = 2 + 2q + ... whose lowest coefficient
    is not a unit; the result then carries exact rational coefficients.
    """
    return _invert(a, allow_content=True)


def _invert(a: QSeries, allow_content: bool) -> QSeries:
    if not a.terms:
        raise NotAUnit("cannot invert: no known lowest term")
    den = a.base_den
    k0 = min(a.terms)
    c0 = a.terms[k0]
    unit = c0.single_unit()
    divisor: Scalar = 1
    if unit is None:
        if not allow_content:
            raise NotAUnit(f"lowest coefficient {c0} is not a +-1 monomial")
        if len(c0.d) != 1:
            raise NotAUnit(f"lowest coefficient {c0} is not a single monomial")
        (v0, cc), = c0.d.items()
        if isinstance(cc, Fraction):
            divisor, sign0 = abs(cc), (1 if cc > 0 else -1)
        else:
            divisor, sign0 = abs(cc), (1 if cc > 0 else -1)
        unit = (sign0, v0)
    sign0, v0 = unit
    e0 = Fraction(k0, den)
    m0_inv = WeightedMonomial(sign0, e0, v0).inverse()
    # h = a * m0_inv / divisor - 1, exponents strictly positive.
    h: dict[int, LaurentCoeff] = {}
    inv_v0 = _vexp_scale(v0, -1)
    for k, c in a.terms.items():
        if k == k0:
            continue
        hc = c.mul_monomial(sign0, inv_v0)
        if divisor != 1:
            hc = hc.div_exact(divisor)
        h[k - k0] = hc
    target = a.order - e0  # validity of 1 + h
    # forward substitution: (1 + h) * c = 1
    limit = (target * den).numerator // (target * den).denominator  # floor
    if Fraction(limit) == target * den:
        limit -= 1
    c_terms: dict[int, LaurentCoeff] = {0: LC_ONE}
    pending: dict[int, LaurentCoeff] = {}
    for j, hc in h.items():
        if j <= limit:
            pending[j] = -hc
    h_items = sorted(h.items())
    for k in range(1, limit + 1):
        ck = pending.pop(k, None)
        if ck is None or ck.is_zero():
            continue
        c_terms[k] = ck
        for j, hc in h_items:
            kj = k + j
            if kj > limit:
                break
            p = ck * hc
            if not p:
                continue
            s = pending.get(kj)
            s = -p if s is None else s - p
            if s:
                pending[kj] = s
            else:
                pending.pop(kj, None)
    inv = QSeries(den, c_terms, target)
    if divisor != 1:
        inv = inv * Fraction(1, divisor)
    return inv.shift(m0_inv)


def geometric(u: WeightedMonomial, order: Scalar) -> QSeries:
    """Expand 1/(1-u) as a series, choosing the branch by the sign of u's q-weight.

    For w(u) > 0 this is sum_{k>=0} u^k; for w(u) < 0 it is the exact rewrite
    -u^-1/(1-u^-1) = -sum_{k>=1} u^-k.  Raises ZeroWeight when w(u) = 0.
    """
    order = Fraction(order)
    if u.qexp == 0:
        raise ZeroWeight(f"geometric expansion of 1/(1-{u}) has undetermined direction")
    b = SeriesBuilder(order)
    if u.qexp > 0:
        k = 0
        while k * u.qexp < order:
            b.add_monomial(u ** k)
            k += 1
    else:
        v = u.inverse()
        k = 1
        while k * v.qexp < order:
            b.add_monomial(v ** k, -1)
            k += 1
    return b.build()


class SeriesBuilder:
    """Accumulator for assembling a QSeries from many term contributions."""

    __slots__ = ("den", "order", "acc")

    def __init__(self, order: Scalar):
        self.den = 1
        self.order = Fraction(order)
        self.acc: dict[int, dict[Vexp, Scalar]] = {}

    def _ensure_den(self, d: int) -> None:
        if self.den % d:
            new = lcm(self.den, d)
            f = new // self.den
            self.acc = {k * f: c for k, c in self.acc.items()}
            self.den = new

    def add_term(self, qexp: Fraction, vexp: Vexp, coeff: Scalar) -> None:
        if not coeff or not qexp < self.order:
            return
        self._ensure_den(qexp.denominator)
        k = int(qexp * self.den)
        slot = self.acc.get(k)
        if slot is None:
            self.acc[k] = {vexp: coeff}
            return
        s = slot.get(vexp, 0) + coeff
        if s:
            slot[vexp] = s
        else:
            del slot[vexp]
            if not slot:
                del self.acc[k]

    def add_monomial(self, m: WeightedMonomial, coeff: Scalar = 1) -> None:
        self.add_term(m.qexp, m.vexp, m.sign * coeff)

    def add_series(self, s: QSeries, prefix: WeightedMonomial = WM_ONE) -> None:
        """Add prefix * s; the builder's order shrinks to the combined validity."""
        self.order = min(self.order, s.order + prefix.qexp)
        for k, c in s.terms.items():
            e = Fraction(k, s.base_den) + prefix.qexp
            for v, cc in c.items():
                self.add_term(e, _vexp_add(v, prefix.vexp), prefix.sign * cc)

    def build(self) -> QSeries:
        terms = {}
        for k, slot in self.acc.items():
            if not _below(k, self.den, self.order):
                continue
            c = LaurentCoeff(slot)
            if c:
                terms[k] = c
        return QSeries(self.den, terms, self.order)


def equal_below(a: QSeries, b: QSeries, bound: Scalar) -> bool:
    """Exact agreement of all coefficients with exponent < bound.

    Requires both series to be valid at least to bound.
    """
    bound = Fraction(bound)
    if a.order < bound or b.order < bound:
        raise BeyondOrder(
            f"cannot compare to order {bound}: validity only {min(a.order, b.order)}"
        )
    return first_difference(a, b, bound) is None


def first_difference(
    a: QSeries, b: QSeries, bound: Scalar | None = None
) -> tuple[Fraction, LaurentCoeff, LaurentCoeff] | None:
    """Smallest exponent < bound where the series differ, with both coefficients."""
    if bound is None:
        bound = min(a.order, b.order)
    bound = Fraction(bound)
    den = lcm(a.base_den, b.base_den)
    ar, br = a.rebase(den), b.rebase(den)
    for k in sorted(set(ar.terms) | set(br.terms)):
        if not _below(k, den, bound):
            break
        ca = ar.terms.get(k, LC_ZERO)
        cb = br.terms.get(k, LC_ZERO)
        if ca != cb:
            return (Fraction(k, den), ca, cb)
    return None


def built_to_order(build: Callable[[Fraction], QSeries], order: Scalar, attempts: int = 8) -> QSeries:
    """Run a series constructor with enough internal slack to certify `order`.

    build(M) must return a series whose reported order is a sound validity
    bound for that run; the slack is grown until the bound covers the request.
    """
    order = Fraction(order)
    slack = Fraction(0)
    for _ in range(attempts):
        s = build(order + slack)
        if s.order >= order:
            return s.truncate(order)
        slack += order - s.order
    raise RuntimeError(f"could not reach validity order {order} (deficit persists)")
