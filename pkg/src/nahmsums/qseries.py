"""Exact arithmetic on truncated q-series.

A series lives on the exponent grid (1/g)*Z for a per-series positive
integer grain g.  Coefficients are arbitrary-precision integers; every
series in this package has integer coefficients once the fractional
leading power q^C is absorbed into the (min_exp, grain) bookkeeping.

Truncation is explicit: a series knows its coefficients for exponents
e with min_exp/g <= e < order/g and nothing beyond.  Operations never
claim more precision than their inputs justify.

All values are immutable; operations are pure functions, so series can
be shared freely across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, NamedTuple, Sequence

__all__ = [
    "QSeries",
    "QSeriesError",
    "NonUnitLeading",
    "DivergentProduct",
    "IndefiniteTheta",
    "InsufficientOrder",
    "OffGrain",
    "OutOfRange",
    "make_series",
    "zero_series",
    "one_series",
    "monomial",
    "series_add",
    "series_sub",
    "series_neg",
    "series_scale",
    "series_mul",
    "series_inverse",
    "series_shift",
    "pochhammer",
    "congruence_product",
    "theta_series",
    "equal_to_order",
    "coefficient",
    "Comparison",
]

Rational = int | Fraction


class QSeriesError(Exception):
    """Base error for q-series operations."""


class NonUnitLeading(QSeriesError):
    """Inverse requested for a series whose leading coefficient is not +-1."""


class DivergentProduct(QSeriesError):
    """Infinite Pochhammer product with non-positive exponent step."""


class IndefiniteTheta(QSeriesError):
    """theta_series requires a positive quadratic coefficient."""


class InsufficientOrder(QSeriesError):
    """A series is truncated below the order a computation needs."""


class OffGrain(QSeriesError):
    """Requested exponent is not on the series' grid."""


class OutOfRange(QSeriesError):
    """Requested exponent lies outside the represented window."""


@dataclass(frozen=True)
class QSeries:
    """Canonical truncated series sum_i coeffs[i] * q^((min_exp+i)/grain).

    Invariants: grain >= 1, len(coeffs) == order - min_exp, and either
    coeffs[0] != 0 or the series is zero (empty coeffs, min_exp == order).
    The grain is minimal: no integer d > 1 divides grain, order and every
    exponent carrying a nonzero coefficient.
    """

    grain: int
    min_exp: int
    order: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.grain < 1:
            raise ValueError("grain must be >= 1")
        if len(self.coeffs) != self.order - self.min_exp:
            raise ValueError("coeffs length must equal order - min_exp")
        if self.coeffs and self.coeffs[0] == 0:
            raise ValueError("non-canonical: leading coefficient is zero")

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def order_exp(self) -> Fraction:
        """Truncation bound as an exponent value."""
        return Fraction(self.order, self.grain)

    @property
    def leading_exponent(self) -> Fraction | None:
        if self.is_zero:
            return None
        return Fraction(self.min_exp, self.grain)

    @property
    def leading_coefficient(self) -> int:
        if self.is_zero:
            raise OutOfRange("zero series has no leading coefficient")
        return self.coeffs[0]

    def __add__(self, other: QSeries) -> QSeries:
        return series_add(self, other)

    def __sub__(self, other: QSeries) -> QSeries:
        return series_sub(self, other)

    def __neg__(self) -> QSeries:
        return series_neg(self)

    def __mul__(self, other: QSeries | int) -> QSeries:
        if isinstance(other, int):
            return series_scale(self, other)
        return series_mul(self, other)

    def __rmul__(self, other: int) -> QSeries:
        return series_scale(self, other)

    def __str__(self) -> str:
        if self.is_zero:
            return f"0 + O(q^{self.order_exp})"
        parts: list[str] = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if len(parts) >= 12:
                parts.append("...")
                break
            e = Fraction(self.min_exp + i, self.grain)
            if e == 0:
                parts.append(str(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                sign = "-" if c < 0 else ""
                exp = f"q^({e})" if e.denominator > 1 or e < 0 else (
                    "q" if e == 1 else f"q^{e}")
                parts.append(f"{sign}{mag}{exp}" if not parts else f"{'- ' if c < 0 else '+ '}{mag}{exp}")
        return " ".join(parts) + f" + O(q^{self.order_exp})"

    def to_json(self) -> str:
        """Serialize as the series cache record (decimal-string coefficients)."""
        rec = {
            "grain": self.grain,
            "min_exp": self.min_exp,
            "order": self.order,
            "coeffs": [str(c) for c in self.coeffs],
        }
        return json.dumps(rec, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> QSeries:
        rec = json.loads(text)
        return make_series(rec["grain"], rec["min_exp"], rec["order"],
                           [int(c) for c in rec["coeffs"]])


def make_series(grain: int, min_exp: int, order: int,
                coeffs: Sequence[int]) -> QSeries:
    """Canonicalize raw data into a QSeries (strip leading zeros, reduce grain)."""
    if grain < 1:
        raise ValueError("grain must be >= 1")
    coeffs = list(coeffs)
    if len(coeffs) != order - min_exp:
        raise ValueError("coeffs length must equal order - min_exp")
    lead = 0
    while lead < len(coeffs) and coeffs[lead] == 0:
        lead += 1
    if lead == len(coeffs):
        d = gcd(grain, order)
        return QSeries(grain // d, order // d, order // d, ())
    min_exp += lead
    coeffs = coeffs[lead:]
    d = gcd(grain, order)
    for i, c in enumerate(coeffs):
        if c:
            d = gcd(d, min_exp + i)
        if d == 1:
            break
    if d > 1:
        # min_exp carries a nonzero coefficient, hence d | min_exp and the
        # nonzero entries sit at relative positions divisible by d.
        return QSeries(grain // d, min_exp // d, order // d, tuple(coeffs[::d]))
    return QSeries(grain, min_exp, order, tuple(coeffs))


def zero_series(order_exp: Rational, grain: int = 1) -> QSeries:
    o = Fraction(order_exp)
    g = lcm(grain, o.denominator)
    u = int(o * g)
    return make_series(g, u, u, ())


def one_series(order_exp: Rational, grain: int = 1) -> QSeries:
    return monomial(0, order_exp, grain=grain)


def monomial(exp: Rational, order_exp: Rational, coeff: int = 1,
             grain: int = 1) -> QSeries:
    """coeff * q^exp, truncated at order_exp."""
    e = Fraction(exp)
    o = Fraction(order_exp)
    if e >= o:
        return zero_series(o, grain)
    g = lcm(lcm(grain, e.denominator), o.denominator)
    lo = int(e * g)
    hi = int(o * g)
    arr = [0] * (hi - lo)
    arr[0] = coeff
    return make_series(g, lo, hi, arr)


def _rescale(s: QSeries, grain: int) -> tuple[int, int, list[int]]:
    """Return (min_exp, order, coeffs) of s stretched onto `grain` (a multiple)."""
    k = grain // s.grain
    if k == 1:
        return s.min_exp, s.order, list(s.coeffs)
    out = [0] * (len(s.coeffs) * k)
    for i, c in enumerate(s.coeffs):
        out[i * k] = c
    return s.min_exp * k, s.order * k, out


def series_add(a: QSeries, b: QSeries) -> QSeries:
    g = lcm(a.grain, b.grain)
    ma, oa, ca = _rescale(a, g)
    mb, ob, cb = _rescale(b, g)
    order = min(oa, ob)
    if not ca and not cb:
        return make_series(g, order, order, ())
    lo = min(ma if ca else order, mb if cb else order)
    lo = min(lo, order)
    out = [0] * (order - lo)
    for m, cs in ((ma, ca), (mb, cb)):
        for i, c in enumerate(cs):
            pos = m + i
            if pos >= order:
                break
            out[pos - lo] += c
    return make_series(g, lo, order, out)


def series_neg(a: QSeries) -> QSeries:
    return QSeries(a.grain, a.min_exp, a.order, tuple(-c for c in a.coeffs))


def series_sub(a: QSeries, b: QSeries) -> QSeries:
    return series_add(a, series_neg(b))


def series_scale(a: QSeries, k: int) -> QSeries:
    if k == 0:
        return make_series(a.grain, a.order, a.order, ())
    return QSeries(a.grain, a.min_exp, a.order, tuple(k * c for c in a.coeffs))


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    g = lcm(a.grain, b.grain)
    ma, oa, ca = _rescale(a, g)
    mb, ob, cb = _rescale(b, g)
    order = min(oa + mb, ob + ma)
    if not ca or not cb:
        return make_series(g, order, order, ())
    lo = ma + mb
    length = order - lo
    out = [0] * length
    for i, x in enumerate(ca):
        if x == 0 or i >= length:
            continue
        top = min(len(cb), length - i)
        for j in range(top):
            y = cb[j]
            if y:
                out[i + j] += x * y
    return make_series(g, lo, order, out)


def series_shift(a: QSeries, exp: Rational) -> QSeries:
    """Multiply by the exact monomial q^exp (pure exponent relabeling)."""
    e = Fraction(exp)
    if e == 0:
        return a
    g = lcm(a.grain, e.denominator)
    m, o, c = _rescale(a, g)
    du = int(e * g)
    return make_series(g, m + du, o + du, c)


def series_inverse(a: QSeries, order: int) -> QSeries:
    """Multiplicative inverse to q^(order/grain): a * result = 1 + O(q^(order/g)).

    Requires leading coefficient +-1; `order` is in units of 1/a.grain.
    """
    if a.is_zero:
        raise NonUnitLeading("cannot invert the zero series")
    if a.coeffs[0] not in (1, -1):
        raise NonUnitLeading(f"leading coefficient {a.coeffs[0]} is not +-1")
    if order < 1:
        raise ValueError("inverse order must be >= 1")
    m = a.min_exp
    if a.order - m < order:
        raise InsufficientOrder(
            f"operand known to relative order {a.order - m}, need {order}")
    length = order
    lead = a.coeffs[0]
    ca = a.coeffs
    out = [0] * length
    out[0] = lead
    for k in range(1, length):
        acc = 0
        top = min(k, len(ca) - 1)
        for j in range(1, top + 1):
            aj = ca[j]
            if aj:
                acc += aj * out[k - j]
        out[k] = -lead * acc
    return make_series(a.grain, -m, -m + length, out)


# Raw kernels for products of (1 - s*q^(u/g)) factors; they act in place on a
# dense window [0, len) of coefficient slots in 1/g units.

def _mul_one_minus(arr: list[int], stride: int, sign: int) -> None:
    for i in range(len(arr) - 1, stride - 1, -1):
        c = arr[i - stride]
        if c:
            arr[i] -= sign * c


def _div_one_minus(arr: list[int], stride: int, sign: int) -> None:
    for i in range(stride, len(arr)):
        c = arr[i - stride]
        if c:
            arr[i] += sign * c


def _product_series(factors: Iterable[tuple[int, int]], power: int, grain: int,
                    units: int) -> QSeries:
    """prod (1 - sign*q^(u/grain))^power over (u, sign) pairs, truncated at units."""
    arr = [0] * units
    arr[0] = 1
    step = _mul_one_minus if power == 1 else _div_one_minus
    for u, sign in factors:
        if u >= units:
            continue
        if u <= 0:
            raise ValueError("product factors must have positive exponent")
        step(arr, u, sign)
    return make_series(grain, 0, units, arr)


def pochhammer(start_exp: Rational, step_exp: Rational, n: int | None,
               order: Rational, grain: int = 1, sign: int = 1,
               power: int = 1) -> QSeries:
    """Truncated (x; q^step)_n with x = sign*q^start.

    `n = None` means the infinite product, truncated once factors exceed
    `order`; that case needs step_exp > 0 (DivergentProduct otherwise).
    `power = -1` expands the reciprocal product directly.
    """
    start = Fraction(start_exp)
    step = Fraction(step_exp)
    o = Fraction(order)
    if n is None and step <= 0:
        raise DivergentProduct("infinite product needs a positive step")
    g = lcm(lcm(grain, o.denominator), lcm(start.denominator, step.denominator))
    units = int(o * g)
    if units <= 0:
        return zero_series(o, g)
    su = int(start * g)
    du = int(step * g)

    def exps() -> Iterable[tuple[int, int]]:
        j = 0
        u = su
        while (n is None or j < n) and u < units:
            yield u, sign
            j += 1
            u += du

    if n is not None and su + (n - 1) * du <= 0 and n > 0:
        raise ValueError("factor exponents must stay positive")
    return _product_series(exps(), power, g, units)


def congruence_product(scale_den: int, modulus: int, residues: set[int] | frozenset[int],
                       exponent: int, order: Rational) -> QSeries:
    """prod over n >= 1 with n mod modulus in residues of (1 - q^(n/scale_den))^exponent."""
    if not residues:
        raise ValueError("residues must be nonempty")
    if exponent not in (1, -1):
        raise ValueError("exponent must be +1 or -1")
    o = Fraction(order)
    g = lcm(scale_den, o.denominator)
    units = int(o * g)
    if units <= 0:
        return zero_series(o, g)
    stride = g // scale_den  # one step of n in 1/g units
    res = {r % modulus for r in residues}

    def exps() -> Iterable[tuple[int, int]]:
        n = 1
        u = stride
        while u < units:
            if n % modulus in res:
                yield u, 1
            n += 1
            u += stride

    return _product_series(exps(), exponent, g, units)


def theta_series(quad: Rational, lin: Rational = 0, const: Rational = 0,
                 order: Rational = 0) -> QSeries:
    """sum over k in Z of q^(quad*k^2 + lin*k + const) for exponents below order."""
    a = Fraction(quad)
    b = Fraction(lin)
    c = Fraction(const)
    if a <= 0:
        raise IndefiniteTheta("quadratic coefficient must be positive")
    o = Fraction(order)
    g = lcm(lcm(a.denominator, b.denominator), lcm(c.denominator, o.denominator))
    units = int(o * g)
    vertex = c - b * b / (4 * a)
    base = int((vertex * g).__floor__())
    if base >= units:
        return zero_series(o, g)
    arr = [0] * (units - base)
    k0 = int((-b / (2 * a)).__floor__())
    for direction in (0, 1):
        k = k0 + direction
        stepk = 1 if direction else -1
        while True:
            e = a * k * k + b * k + c
            if e >= o:
                break
            arr[int(e * g) - base] += 1
            k += stepk
    return make_series(g, base, units, arr)


class Comparison(NamedTuple):
    equal: bool
    first_mismatch: Fraction | None


def equal_to_order(a: QSeries, b: QSeries, order_exp: Rational) -> Comparison:
    """Exact coefficient comparison for exponents below order_exp."""
    o = Fraction(order_exp)
    if a.order_exp < o or b.order_exp < o:
        raise InsufficientOrder(
            f"series defined to {min(a.order_exp, b.order_exp)}, need {o}")
    g = lcm(lcm(a.grain, b.grain), o.denominator)
    ma, _, ca = _rescale(a, g)
    mb, _, cb = _rescale(b, g)
    units = int(o * g)
    lo = min(ma if ca else units, mb if cb else units, units)
    for u in range(lo, units):
        x = ca[u - ma] if ca and ma <= u < ma + len(ca) else 0
        y = cb[u - mb] if cb and mb <= u < mb + len(cb) else 0
        if x != y:
            return Comparison(False, Fraction(u, g))
    return Comparison(True, None)


def coefficient(a: QSeries, exp: Rational) -> int:
    """The stored coefficient of q^exp."""
    e = Fraction(exp)
    u = e * a.grain
    if u.denominator != 1:
        raise OffGrain(f"exponent {e} not on grid 1/{a.grain}")
    u = int(u)
    if u < a.min_exp or u >= a.order:
        raise OutOfRange(f"exponent {e} outside [{a.min_exp}/{a.grain}, {a.order}/{a.grain})")
    return a.coeffs[u - a.min_exp]
