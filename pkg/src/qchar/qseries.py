"""Truncated formal power series in q with exact integer coefficients.

Exponents live on a grid of integer multiples of 1/denom, so series with
genuinely fractional exponents (q^(1/2), q^(5/3), ...) are first-class
values.  Every series carries the largest grid exponent through which its
coefficients are guaranteed correct, and every operation propagates that
guarantee honestly rather than optimistically.  All arithmetic is over
arbitrary-precision integers and exact rationals; nothing here touches
floating point.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from math import floor, gcd, lcm
from typing import Callable, Iterable, Optional, Union

RationalLike = Union[int, str, Fraction]

__all__ = [
    "QSeries",
    "ProductSpec",
    "Mismatch",
    "VerifyReport",
    "as_rational",
    "format_rational",
    "series_add",
    "series_sub",
    "series_neg",
    "series_mul",
    "series_pow",
    "series_inv",
    "phi_series",
    "product_series",
    "normalize_shift",
    "series_compare",
    "render",
]


def as_rational(x: RationalLike) -> Fraction:
    """Coerce an int, Fraction, or "num/den" string to an exact Fraction.

    Floats are deliberately rejected: every quantity in this package is exact.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational value: {x!r}")


def format_rational(x: Fraction) -> str:
    """Render a Fraction as "num/den", or plain "num" when integral."""
    return str(x)


@dataclass(frozen=True)
class QSeries:
    """Sum of coeffs[i] * q^((lo+i)/denom), guaranteed correct through q^(order/denom).

    The coefficient window is dense over the grid slots lo..order.  A nonzero
    series always has coeffs[0] != 0 (the window start is tight); the zero
    series is stored canonically as the single coefficient (0,) sitting at the
    order slot.  Instances are immutable and safe to share between threads.
    """

    denom: int
    lo: int
    coeffs: tuple[int, ...]
    order: int

    def __post_init__(self) -> None:
        if not isinstance(self.denom, int) or self.denom < 1:
            raise ValueError("denom must be a positive integer")
        if self.lo > self.order:
            raise ValueError("window start exceeds the guaranteed order")
        if len(self.coeffs) != self.order - self.lo + 1:
            raise ValueError("coefficient window does not span [lo, order]")
        for c in self.coeffs:
            if not isinstance(c, int):
                raise ValueError("coefficients must be plain integers")
        if self.coeffs[0] == 0 and any(self.coeffs):
            raise ValueError("window start is not tight")
        if not any(self.coeffs) and len(self.coeffs) != 1:
            raise ValueError("zero series must collapse to a single slot")

    # -- construction ---------------------------------------------------

    @staticmethod
    def from_window(denom: int, lo: int, coeffs: Iterable[int], order: int) -> "QSeries":
        """Build from a dense window over [lo, order], canonicalizing as needed."""
        cs = list(coeffs)
        if len(cs) != order - lo + 1:
            raise ValueError("coefficient window does not span [lo, order]")
        i = 0
        while i < len(cs) - 1 and cs[i] == 0:
            i += 1
        if cs[i] == 0:
            return QSeries(denom, order, (0,), order)
        return QSeries(denom, lo + i, tuple(cs[i:]), order)

    @staticmethod
    def from_terms(
        terms: Iterable[tuple[RationalLike, int]],
        order: RationalLike,
        denom: Optional[int] = None,
    ) -> "QSeries":
        """Build from (exponent, coefficient) pairs; terms beyond the order are dropped."""
        t = as_rational(order)
        pairs = [(as_rational(e), c) for e, c in terms]
        if denom is None:
            denom = t.denominator
            for e, _ in pairs:
                denom = lcm(denom, e.denominator)
        units = floor(t * denom)
        acc: dict[int, int] = {}
        for e, c in pairs:
            scaled = e * denom
            if scaled.denominator != 1:
                raise ValueError("exponent does not lie on the chosen grid")
            slot = int(scaled)
            if slot <= units:
                acc[slot] = acc.get(slot, 0) + c
        acc = {slot: c for slot, c in acc.items() if c}
        if not acc:
            return QSeries.zero(t, denom)
        lo = min(acc)
        window = [acc.get(slot, 0) for slot in range(lo, units + 1)]
        return QSeries.from_window(denom, lo, window, units)

    @staticmethod
    def zero(order: RationalLike, denom: int = 1) -> "QSeries":
        units = floor(as_rational(order) * denom)
        return QSeries(denom, units, (0,), units)

    @staticmethod
    def one(order: RationalLike, denom: int = 1) -> "QSeries":
        return QSeries.monomial(0, 1, order, denom)

    @staticmethod
    def monomial(
        exponent: RationalLike, coeff: int, order: RationalLike, denom: Optional[int] = None
    ) -> "QSeries":
        e = as_rational(exponent)
        t = as_rational(order)
        if denom is None:
            denom = lcm(e.denominator, t.denominator)
        return QSeries.from_terms([(e, coeff)], t, denom)

    # -- inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def order_exponent(self) -> Fraction:
        """Largest exponent through which coefficients are guaranteed."""
        return Fraction(self.order, self.denom)

    def lowest_exponent(self) -> Fraction:
        """Exponent of the first stored slot (the leading term when nonzero)."""
        return Fraction(self.lo, self.denom)

    def terms(self) -> list[tuple[Fraction, int]]:
        """Nonzero (exponent, coefficient) pairs in ascending exponent order."""
        return [
            (Fraction(self.lo + i, self.denom), c)
            for i, c in enumerate(self.coeffs)
            if c
        ]

    def __getitem__(self, exponent: RationalLike) -> int:
        """Coefficient at an exact exponent; raises beyond the guaranteed order."""
        e = as_rational(exponent)
        if e > Fraction(self.order, self.denom):
            raise IndexError("exponent lies beyond the guaranteed order")
        scaled = e * self.denom
        if scaled.denominator != 1:
            return 0
        i = int(scaled) - self.lo
        if i < 0 or i >= len(self.coeffs):
            return 0
        return self.coeffs[i]

    # -- regridding -----------------------------------------------------

    def rebase(self, denom: int) -> "QSeries":
        """Re-express on a finer grid; denom must be a multiple of the current one."""
        if denom % self.denom:
            raise ValueError("new denom must be a multiple of the current denom")
        f = denom // self.denom
        if f == 1:
            return self
        if self.is_zero():
            return QSeries(denom, self.order * f, (0,), self.order * f)
        out = [0] * ((self.order - self.lo) * f + 1)
        for i, c in enumerate(self.coeffs):
            out[i * f] = c
        return QSeries(denom, self.lo * f, tuple(out), self.order * f)

    def reduced(self) -> "QSeries":
        """Coarsest equal representation (inverse of rebase where possible)."""
        g = gcd(self.denom, self.lo, self.order)
        for i, c in enumerate(self.coeffs):
            if c:
                g = gcd(g, self.lo + i)
                if g == 1:
                    return self
        if g == 1:
            return self
        if self.is_zero():
            return QSeries(self.denom // g, self.order // g, (0,), self.order // g)
        return QSeries(
            self.denom // g, self.lo // g, self.coeffs[::g], self.order // g
        )

    def truncated(self, order: RationalLike) -> "QSeries":
        """Weaken the guarantee to a smaller order, discarding higher slots."""
        units = floor(as_rational(order) * self.denom)
        if units > self.order:
            raise ValueError("cannot extend a series beyond its guaranteed order")
        if units < self.lo:
            return QSeries(self.denom, units, (0,), units)
        return QSeries.from_window(
            self.denom, self.lo, self.coeffs[: units - self.lo + 1], units
        )

    # -- equality is mathematical, not structural -----------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self.reduced(), other.reduced()
        return (a.denom, a.lo, a.order, a.coeffs) == (b.denom, b.lo, b.order, b.coeffs)

    def __hash__(self) -> int:
        a = self.reduced()
        return hash((a.denom, a.lo, a.order, a.coeffs))

    # -- operator sugar ---------------------------------------------------

    def __add__(self, other: "QSeries") -> "QSeries":
        return series_add(self, other)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return series_sub(self, other)

    def __neg__(self) -> "QSeries":
        return series_neg(self)

    def __mul__(self, other: "QSeries") -> "QSeries":
        return series_mul(self, other)

    def __pow__(self, n: int) -> "QSeries":
        return series_pow(self, n)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "denom": self.denom,
            "lo": self.lo,
            "order": self.order,
            "coeffs": [str(c) for c in self.coeffs],
        }

    @staticmethod
    def from_json(data: dict) -> "QSeries":
        return QSeries(
            int(data["denom"]),
            int(data["lo"]),
            tuple(int(c) for c in data["coeffs"]),
            int(data["order"]),
        )

    def __str__(self) -> str:
        return render(self)


# -- ring operations ------------------------------------------------------


def series_add(a: QSeries, b: QSeries) -> QSeries:
    """Sum, guaranteed through the smaller of the two orders."""
    m = lcm(a.denom, b.denom)
    fa, fb = m // a.denom, m // b.denom
    order = min(a.order * fa, b.order * fb)
    lo = min(a.lo * fa, b.lo * fb, order)
    out = [0] * (order - lo + 1)
    for i, c in enumerate(a.coeffs):
        if c:
            e = (a.lo + i) * fa
            if e <= order:
                out[e - lo] += c
    for i, c in enumerate(b.coeffs):
        if c:
            e = (b.lo + i) * fb
            if e <= order:
                out[e - lo] += c
    return QSeries.from_window(m, lo, out, order)


def series_neg(a: QSeries) -> QSeries:
    return QSeries(a.denom, a.lo, tuple(-c for c in a.coeffs), a.order)


def series_sub(a: QSeries, b: QSeries) -> QSeries:
    return series_add(a, series_neg(b))


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product.

    The result is guaranteed through min(a.order + b.lo, b.order + a.lo) on
    the common grid: the unknown tail of one factor first pollutes the product
    at its own order plus the other factor's lowest exponent.
    """
    m = lcm(a.denom, b.denom)
    fa, fb = m // a.denom, m // b.denom
    alo, aord = a.lo * fa, a.order * fa
    blo, bord = b.lo * fb, b.order * fb
    order = min(aord + blo, bord + alo)
    base = alo + blo
    out = [0] * (order - base + 1)
    for i, ca in enumerate(a.coeffs):
        if not ca:
            continue
        ea = alo + i * fa
        if ea + blo > order:
            break
        for j, cb in enumerate(b.coeffs):
            if not cb:
                continue
            e = ea + blo + j * fb
            if e > order:
                break
            out[e - base] += ca * cb
    return QSeries.from_window(m, base, out, order)


def series_pow(a: QSeries, n: int) -> QSeries:
    """Integer power by repeated squaring; negative powers invert first."""
    if not isinstance(n, int):
        raise ValueError("series powers must be integers")
    if n < 0:
        return series_pow(series_inv(a), -n)
    result = QSeries.one(Fraction(a.order, a.denom), a.denom)
    square = a
    while n:
        if n & 1:
            result = series_mul(result, square)
        n >>= 1
        if n:
            square = series_mul(square, square)
    return result


def series_inv(a: QSeries) -> QSeries:
    """Multiplicative inverse of a unit series.

    Requires the leading coefficient to be 1 or -1 so the inverse again has
    integer coefficients; a leading monomial q^(lo/denom) is pulled out and
    inverted as a shift.  series_mul(a, series_inv(a)) is exactly 1 through
    the guaranteed order of the product.
    """
    if a.is_zero():
        raise ValueError("non-invertible: zero series")
    u0 = a.coeffs[0]
    if u0 not in (1, -1):
        raise ValueError(
            "non-invertible: leading coefficient must be 1 or -1 "
            "for an integer-coefficient inverse"
        )
    n = a.order - a.lo
    u = a.coeffs
    inv = [0] * (n + 1)
    inv[0] = u0
    for m in range(1, n + 1):
        s = 0
        for j in range(1, m + 1):
            if j < len(u) and u[j]:
                s += u[j] * inv[m - j]
        inv[m] = -u0 * s
    return QSeries.from_window(a.denom, -a.lo, inv, n - a.lo)


# -- the Euler product and finite products of its rescalings ---------------


def phi_series(scale: RationalLike, order: RationalLike) -> QSeries:
    """Expansion of the infinite product over j >= 1 of (1 - q^(scale*j)).

    Computed by multiplying out the finitely many factors whose exponent
    does not exceed the truncation order; each factor is a two-term in-place
    update, so no identity about this product is assumed anywhere.
    """
    a = as_rational(scale)
    if a <= 0:
        raise ValueError("phi_series requires a positive scale")
    t = as_rational(order)
    d = a.denominator
    units = floor(t * d)
    if units < 0:
        return QSeries.zero(t, d)
    step = a.numerator
    out = [0] * (units + 1)
    out[0] = 1
    e = step
    while e <= units:
        for i in range(units, e - 1, -1):
            c = out[i - e]
            if c:
                out[i] -= c
        e += step
    return QSeries.from_window(d, 0, out, units)


@dataclass(frozen=True)
class ProductSpec:
    """A finite product of phi(q^scale)^power factors.

    Factors are canonicalized on construction: equal scales merge by adding
    powers, zero powers drop out, and the remainder sorts by scale, so two
    specs describing the same product compare equal structurally.
    """

    factors: tuple[tuple[Fraction, int], ...]

    def __post_init__(self) -> None:
        merged: dict[Fraction, int] = {}
        for scale, power in self.factors:
            s = as_rational(scale)
            if s <= 0:
                raise ValueError("factor scales must be positive")
            if not isinstance(power, int):
                raise ValueError("factor powers must be integers")
            merged[s] = merged.get(s, 0) + power
        canon = tuple(sorted((s, p) for s, p in merged.items() if p))
        object.__setattr__(self, "factors", canon)

    def to_json(self) -> dict:
        return {
            "factors": [
                {"scale": format_rational(s), "power": p} for s, p in self.factors
            ]
        }

    @staticmethod
    def from_json(data: dict) -> "ProductSpec":
        return ProductSpec(
            tuple(
                (as_rational(f["scale"]), int(f["power"]))
                for f in data["factors"]
            )
        )


def product_series(spec: ProductSpec, order: RationalLike) -> QSeries:
    """Expand a ProductSpec through the requested order.

    Every factor is a unit starting at q^0, so truncation orders stay aligned
    at the request and the result is guaranteed through it.
    """
    t = as_rational(order)
    d = 1
    for s, _ in spec.factors:
        d = lcm(d, s.denominator)
    result = QSeries.one(t, d)
    for scale, power in spec.factors:
        f = phi_series(scale, t)
        if power < 0:
            f = series_inv(f)
        result = series_mul(result, series_pow(f, abs(power)))
    return result


# -- comparison up to a monomial shift --------------------------------------


def normalize_shift(a: QSeries) -> tuple[QSeries, Fraction]:
    """Divide out the leading monomial so the series starts at q^0.

    Returns the normalized series and the exponent shift removed.  The zero
    series has no leading monomial and is rejected.
    """
    if a.is_zero():
        raise ValueError("cannot normalize the zero series")
    shift = Fraction(a.lo, a.denom)
    return QSeries(a.denom, 0, a.coeffs, a.order - a.lo), shift


@dataclass(frozen=True)
class Mismatch:
    """First exponent at which two compared series disagree."""

    exponent: Fraction
    lhs_coeff: int
    rhs_coeff: int

    def to_json(self) -> dict:
        return {
            "exponent": format_rational(self.exponent),
            "lhs_coeff": str(self.lhs_coeff),
            "rhs_coeff": str(self.rhs_coeff),
        }


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of comparing two series after shift normalization.

    checked_through is the largest normalized exponent through which both
    sides carried guaranteed coefficients; the comparison covered exactly
    that window.  wall_time_ms is bookkeeping for humans and is excluded
    from canonical JSON unless explicitly requested, so reports stay
    byte-reproducible.
    """

    match: bool
    checked_through: Fraction
    first_mismatch: Optional[Mismatch]
    lhs_shift: Fraction
    rhs_shift: Fraction
    wall_time_ms: int = 0

    def to_json(self, include_timing: bool = False) -> dict:
        out = {
            "match": self.match,
            "checked_through": format_rational(self.checked_through),
            "first_mismatch": (
                None if self.first_mismatch is None else self.first_mismatch.to_json()
            ),
            "lhs_shift": format_rational(self.lhs_shift),
            "rhs_shift": format_rational(self.rhs_shift),
        }
        if include_timing:
            out["wall_time_ms"] = self.wall_time_ms
        return out


def series_compare(lhs: QSeries, rhs: QSeries) -> VerifyReport:
    """Compare two series coefficient-by-coefficient after normalization.

    Each nonzero side is first divided by its leading monomial (the shifts
    are reported), then coefficients are compared through the smaller of the
    two normalized guaranteed orders.  Zero compares equal to zero.
    """
    zero = Fraction(0)
    checked = min(
        Fraction(lhs.order - lhs.lo, lhs.denom),
        Fraction(rhs.order - rhs.lo, rhs.denom),
    )
    if lhs.is_zero() and rhs.is_zero():
        return VerifyReport(True, checked, None, zero, zero)
    if lhs.is_zero() or rhs.is_zero():
        if lhs.is_zero():
            norm, shift = normalize_shift(rhs)
            mism = Mismatch(zero, 0, norm.coeffs[0])
            return VerifyReport(False, checked, mism, zero, shift)
        norm, shift = normalize_shift(lhs)
        mism = Mismatch(zero, norm.coeffs[0], 0)
        return VerifyReport(False, checked, mism, shift, zero)
    na, sa = normalize_shift(lhs)
    nb, sb = normalize_shift(rhs)
    m = lcm(na.denom, nb.denom)
    na, nb = na.rebase(m), nb.rebase(m)
    units = min(na.order, nb.order)
    mism = None
    for i in range(units + 1):
        ca = na.coeffs[i] if i < len(na.coeffs) else 0
        cb = nb.coeffs[i] if i < len(nb.coeffs) else 0
        if ca != cb:
            mism = Mismatch(Fraction(i, m), ca, cb)
            break
    return VerifyReport(mism is None, Fraction(units, m), mism, sa, sb)


def _worker_count() -> int:
    raw = os.environ.get("QSERIES_THREADS", "")
    try:
        return max(0, int(raw))
    except ValueError:
        return 0


def _compare_builders(
    make_lhs: Callable[[Fraction], QSeries],
    make_rhs: Callable[[Fraction], QSeries],
    order: Fraction,
) -> VerifyReport:
    """Build both sides of an identity at the given order and compare them.

    Two adjustments keep the comparison honest through the full request.  A
    side that comes back identically zero may simply start above the order,
    so its window is grown geometrically a few times to find the leading
    term.  A side starting at q^e with e > 0 loses e of guaranteed window to
    normalization, so it is rebuilt at order + e.  Both adjustments depend
    only on series content, so reports are reproducible; with QSERIES_THREADS
    positive the two sides are built on separate threads, with no effect on
    the result.
    """
    start = time.perf_counter()
    if _worker_count() > 0:
        with ThreadPoolExecutor(max_workers=2) as pool:
            fut_l = pool.submit(make_lhs, order)
            fut_r = pool.submit(make_rhs, order)
            lhs, rhs = fut_l.result(), fut_r.result()
    else:
        lhs, rhs = make_lhs(order), make_rhs(order)

    def settled(side: QSeries, make: Callable[[Fraction], QSeries]) -> QSeries:
        step = max(order, Fraction(8))
        tries = 0
        while side.is_zero() and tries < 6:
            side = make(order + step)
            step *= 2
            tries += 1
        if side.is_zero():
            return side
        low = side.lowest_exponent()
        if low > 0:
            side = make(order + low)
        return side

    lhs, rhs = settled(lhs, make_lhs), settled(rhs, make_rhs)
    report = series_compare(lhs, rhs)
    if report.checked_through > order:
        report = replace(report, checked_through=order)
    elapsed = int((time.perf_counter() - start) * 1000)
    return replace(report, wall_time_ms=elapsed)


# -- plain-text rendering ----------------------------------------------------


def _qpow(e: Fraction) -> str:
    if e == 1:
        return "q"
    if e.denominator == 1:
        return f"q^{e}"
    return f"q^({e})"


def render(a: QSeries) -> str:
    """Human-readable form, e.g. "1 - q - q^2 + q^5 + q^7 + O(q^8)"."""
    tail = f"O({_qpow(Fraction(a.order + 1, a.denom))})"
    if a.is_zero():
        return f"0 + {tail}"
    parts: list[str] = []
    for e, c in a.terms():
        mag = abs(c)
        if e == 0:
            body = str(mag)
        elif mag == 1:
            body = _qpow(e)
        else:
            body = f"{mag}*{_qpow(e)}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    parts.append(f"+ {tail}")
    return " ".join(parts)
