"""Positive-definite lattice sums over the A-chain quadratic form.

The exponent function of a LatticeSum is E(k) = c*kappa(k) + lin.k + const,
where kappa(k) = sum k_i^2 - sum k_i k_{i+1} is half the Gram form of the
A_l chain and positive definite in every dimension.  Enumeration writes E as
cstar + sum_i d_i (x_i + phi_i(x_1..x_{i-1}))^2 by repeatedly completing the
square in the last coordinate; every d_i is positive, so once x_1..x_{i-1}
are fixed the admissible x_i fill an interval computed exactly with integer
square roots of rescaled integers.  No floating point enters anywhere.

A deliberately crude second enumerator scans a certified coordinate box and
evaluates the exponent directly.  It shares no machinery with the
nested-squares path and exists so the two can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from math import ceil, floor, isqrt, lcm
from typing import Iterator, Optional, Sequence

import numpy as np

from .qseries import QSeries, RationalLike, as_rational, format_rational

__all__ = [
    "KappaForm",
    "BilinearForm",
    "LatticeSum",
    "WEIGHT_ALTERNATING",
    "WEIGHT_FOUR_K_PLUS_ONE",
    "kappa_eval",
    "bilinear_eval",
    "lattice_enumerate",
    "lattice_enumerate_oracle",
    "lattice_sum_series",
]

WEIGHT_ALTERNATING = "alternating_sign"
WEIGHT_FOUR_K_PLUS_ONE = "four_k_plus_one"
_WEIGHTS = (WEIGHT_ALTERNATING, WEIGHT_FOUR_K_PLUS_ONE)

_INT64_CAP = 1 << 62


def kappa_eval(k: Sequence[int]) -> int:
    """kappa(k) = sum of squares minus the sum of adjacent products."""
    ks = tuple(k)
    if not ks:
        raise ValueError("kappa_eval needs at least one coordinate")
    for v in ks:
        if not isinstance(v, int):
            raise ValueError("kappa_eval takes integer vectors")
    total = sum(v * v for v in ks)
    total -= sum(ks[i] * ks[i + 1] for i in range(len(ks) - 1))
    return total


def bilinear_eval(x: Sequence[RationalLike], y: Sequence[RationalLike]) -> Fraction:
    """Chain bilinear form: (x|y) = 2 sum x_i y_i - sum over adjacent pairs."""
    xs = [as_rational(v) for v in x]
    ys = [as_rational(v) for v in y]
    if len(xs) != len(ys):
        raise ValueError("bilinear_eval needs vectors of equal length")
    if not xs:
        raise ValueError("bilinear_eval needs at least one coordinate")
    total = 2 * sum(a * b for a, b in zip(xs, ys))
    for i in range(len(xs) - 1):
        total -= xs[i] * ys[i + 1] + xs[i + 1] * ys[i]
    return Fraction(total)


@dataclass(frozen=True)
class KappaForm:
    """The chain quadratic form on Z^l.  (x|x) under BilinearForm is 2*kappa(x)."""

    l: int

    def __post_init__(self) -> None:
        if not isinstance(self.l, int) or self.l < 1:
            raise ValueError("KappaForm needs a positive dimension")

    def eval(self, k: Sequence[int]) -> int:
        ks = tuple(k)
        if len(ks) != self.l:
            raise ValueError("dimension mismatch")
        return kappa_eval(ks)

    def eval_rational(self, x: Sequence[RationalLike]) -> Fraction:
        xs = [as_rational(v) for v in x]
        if len(xs) != self.l:
            raise ValueError("dimension mismatch")
        total = sum(v * v for v in xs)
        total -= sum(xs[i] * xs[i + 1] for i in range(len(xs) - 1))
        return Fraction(total)

    def gram(self) -> tuple[tuple[Fraction, ...], ...]:
        """Matrix G with kappa(x) = x.G.x: ones on the diagonal, -1/2 off it."""
        half = Fraction(-1, 2)
        rows = []
        for i in range(self.l):
            row = [Fraction(0)] * self.l
            row[i] = Fraction(1)
            if i > 0:
                row[i - 1] = half
            if i + 1 < self.l:
                row[i + 1] = half
            rows.append(tuple(row))
        return tuple(rows)


@dataclass(frozen=True)
class BilinearForm:
    """Symmetric bilinear form with matrix 2 on the diagonal, -1 off it."""

    l: int

    def __post_init__(self) -> None:
        if not isinstance(self.l, int) or self.l < 1:
            raise ValueError("BilinearForm needs a positive dimension")

    def eval(self, x: Sequence[RationalLike], y: Sequence[RationalLike]) -> Fraction:
        xs = tuple(x)
        if len(xs) != self.l or len(tuple(y)) != self.l:
            raise ValueError("dimension mismatch")
        return bilinear_eval(x, y)

    def matrix(self) -> tuple[tuple[int, ...], ...]:
        rows = []
        for i in range(self.l):
            row = [0] * self.l
            row[i] = 2
            if i > 0:
                row[i - 1] = -1
            if i + 1 < self.l:
                row[i + 1] = -1
            rows.append(tuple(row))
        return tuple(rows)


@dataclass(frozen=True)
class LatticeSum:
    """Formal sum over Z^l of weight(k) * q^(c*kappa(k) + lin.k + const).

    c must be positive; otherwise the exponent function is unbounded below
    and the sum has infinitely many terms under any truncation.  The optional
    weight is one of the built-in shapes, applied to the first coordinate:
    WEIGHT_ALTERNATING gives (-1)^(k_1), WEIGHT_FOUR_K_PLUS_ONE gives 4*k_1+1.
    l = 0 is allowed and denotes the single empty point with exponent const.
    """

    l: int
    c: Fraction
    lin: tuple[Fraction, ...]
    const: Fraction = Fraction(0)
    weight: Optional[str] = None

    def __post_init__(self) -> None:
        if not isinstance(self.l, int) or self.l < 0:
            raise ValueError("dimension must be a nonnegative integer")
        object.__setattr__(self, "c", as_rational(self.c))
        object.__setattr__(self, "lin", tuple(as_rational(v) for v in self.lin))
        object.__setattr__(self, "const", as_rational(self.const))
        if len(self.lin) != self.l:
            raise ValueError("linear part must have one entry per dimension")
        if self.c <= 0:
            raise ValueError("indefinite exponent function: c must be positive")
        if self.weight is not None and self.weight not in _WEIGHTS:
            raise ValueError(f"unknown weight shape: {self.weight!r}")

    def exponent_at(self, k: Sequence[int]) -> Fraction:
        ks = tuple(k)
        if len(ks) != self.l:
            raise ValueError("dimension mismatch")
        if self.l == 0:
            return self.const
        linear = sum(a * b for a, b in zip(self.lin, ks))
        return self.c * kappa_eval(ks) + linear + self.const

    def weight_at(self, k: Sequence[int]) -> int:
        return _weight_value(self.weight, tuple(k))

    def to_json(self) -> dict:
        out = {
            "l": self.l,
            "c": format_rational(self.c),
            "lin": [format_rational(v) for v in self.lin],
            "const": format_rational(self.const),
        }
        if self.weight is not None:
            out["weight"] = self.weight
        return out

    @staticmethod
    def from_json(data: dict) -> "LatticeSum":
        return LatticeSum(
            int(data["l"]),
            as_rational(data["c"]),
            tuple(as_rational(v) for v in data["lin"]),
            as_rational(data["const"]),
            data.get("weight"),
        )


def _weight_value(weight: Optional[str], point: tuple[int, ...]) -> int:
    if weight is None:
        return 1
    first = point[0] if point else 0
    if weight == WEIGHT_ALTERNATING:
        return -1 if first & 1 else 1
    if weight == WEIGHT_FOUR_K_PLUS_ONE:
        return 4 * first + 1
    raise ValueError(f"unknown weight shape: {weight!r}")


# -- nested completed squares -------------------------------------------------


def _kappa_parts(s: LatticeSum):
    g = [[Fraction(0)] * s.l for _ in range(s.l)]
    for i in range(s.l):
        g[i][i] = s.c
        if i + 1 < s.l:
            g[i][i + 1] = -s.c / 2
            g[i + 1][i] = -s.c / 2
    return g, list(s.lin), s.const


def _complete_squares(gram, lin, const):
    """Peel squares off the last coordinate until none remain.

    Returns per-level data (d_i, u_i, t_i) with
    E(x) = cstar + sum_i d_i (x_i + u_i . x_(<i) + t_i)^2,
    raising if any pivot fails to be positive.
    """
    l = len(lin)
    g = [[as_rational(v) for v in row] for row in gram]
    lin = [as_rational(v) for v in lin]
    c = as_rational(const)
    d: list[Fraction] = [Fraction(0)] * l
    u: list[tuple[Fraction, ...]] = [()] * l
    t: list[Fraction] = [Fraction(0)] * l
    for i in reversed(range(l)):
        di = g[i][i]
        if di <= 0:
            raise ValueError("indefinite exponent function")
        ui = [g[i][j] / di for j in range(i)]
        ti = lin[i] / (2 * di)
        d[i], u[i], t[i] = di, tuple(ui), ti
        for a in range(i):
            ua = ui[a]
            if not ua:
                continue
            for b in range(i):
                g[a][b] -= di * ua * ui[b]
            lin[a] -= 2 * di * ua * ti
        c -= di * ti * ti
    return d, u, t, c


@dataclass(frozen=True)
class _ScaledForm:
    """Integer-scaled completed-squares data.

    sigma is a common denominator for everything: budgets, square multipliers
    and the truncation bound all become plain integers, so the recursion runs
    on exact integer arithmetic only.  sigma is a multiple of grid_denom, and
    ehat values (sigma times an exponent) divide exactly by sigma/grid_denom
    to give grid slots.
    """

    levels: int
    grid_denom: int
    sigma: int
    sigma_t: int
    budget: int
    cstar: Fraction
    K: tuple[int, ...]
    W: tuple[int, ...]
    w_rows: tuple[tuple[int, ...], ...]
    w0: tuple[int, ...]


def _grid_denominator(gram, lin, const) -> int:
    """Smallest D with D*E(x) integral for every integer x."""
    d = 1
    l = len(lin)
    for i in range(l):
        d = lcm(d, as_rational(gram[i][i]).denominator)
        for j in range(i + 1, l):
            d = lcm(d, (2 * as_rational(gram[i][j])).denominator)
    for v in lin:
        d = lcm(d, as_rational(v).denominator)
    d = lcm(d, as_rational(const).denominator)
    return d


def _scale_form(gram, lin, const, bound: Fraction) -> _ScaledForm:
    l = len(lin)
    d, u, t, cstar = _complete_squares(gram, lin, const)
    grid = _grid_denominator(gram, lin, const)
    ws: list[int] = []
    for i in range(l):
        wi = t[i].denominator
        for v in u[i]:
            wi = lcm(wi, v.denominator)
        ws.append(wi)
    sigma = lcm(grid, bound.denominator, cstar.denominator)
    for i in range(l):
        sigma = lcm(sigma, d[i].denominator * ws[i] * ws[i])
    sigma_t = int(sigma * bound)
    budget = sigma_t - int(sigma * cstar)
    kk = tuple(
        int(sigma * d[i].numerator) // (d[i].denominator * ws[i] * ws[i])
        for i in range(l)
    )
    w_rows = tuple(tuple(int(v * ws[i]) for v in u[i]) for i in range(l))
    w0 = tuple(int(t[i] * ws[i]) for i in range(l))
    return _ScaledForm(
        l, grid, sigma, sigma_t, budget, cstar, kk, tuple(ws), w_rows, w0
    )


def _scaled_points(form: _ScaledForm) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield (point, sigma*exponent) pairs in lexicographic order."""
    if form.budget < 0:
        return
    l = form.levels
    if l == 0:
        yield (), form.sigma_t - form.budget
        return
    kk, ws, rows, w0 = form.K, form.W, form.w_rows, form.w0
    sigma_t = form.sigma_t
    x = [0] * l
    pend = list(w0)

    def rec(i: int, budget: int):
        ki, wi, pi = kk[i], ws[i], pend[i]
        r = isqrt(budget // ki)
        lo = -((r + pi) // wi)
        hi = (r - pi) // wi
        last = i == l - 1
        for xi in range(lo, hi + 1):
            v = wi * xi + pi
            nb = budget - ki * v * v
            x[i] = xi
            if last:
                yield tuple(x), sigma_t - nb
            else:
                for j in range(i + 1, l):
                    pend[j] += rows[j][i] * xi
                yield from rec(i + 1, nb)
                for j in range(i + 1, l):
                    pend[j] -= rows[j][i] * xi

    yield from rec(0, form.budget)


def _fast_safe(form: _ScaledForm) -> bool:
    """Conservative check that the vectorized path stays far inside int64."""
    if form.levels == 0 or form.budget < 0:
        return True
    xmax: list[int] = []
    pmax: list[int] = []
    for i in range(form.levels):
        r = isqrt(form.budget // form.K[i])
        p = abs(form.w0[i]) + sum(
            abs(form.w_rows[i][j]) * xmax[j] for j in range(i)
        )
        pmax.append(p)
        xmax.append((r + p) // form.W[i] + 1)
    i = form.levels - 1
    vbound = form.W[i] * (xmax[i] + 1) + pmax[i]
    ehat_bound = abs(form.sigma_t) + 2 * form.budget + form.K[i] * vbound * vbound
    return max(vbound, ehat_bound) < _INT64_CAP


def _counts_numpy(form: _ScaledForm, t_units: int, slot_min: int) -> list[int]:
    """Accumulate grid-slot counts, vectorizing the innermost coordinate.

    Leaf intervals are often short, so instead of one array op per leaf the
    recursion records (base, offset, lo, hi) rows and a flush expands a
    million candidates at a time with repeat/cumsum index arithmetic.
    """
    length = t_units - slot_min + 1
    counts = np.zeros(length, dtype=np.int64)
    slot_div = form.sigma // form.grid_denom
    l = form.levels
    if l == 0:
        slot = (form.sigma_t - form.budget) // slot_div
        counts[slot - slot_min] += 1
        return [int(c) for c in counts]
    kk, ws, rows, w0 = form.K, form.W, form.w_rows, form.w0
    sigma_t = form.sigma_t
    k_leaf, w_leaf = kk[l - 1], ws[l - 1]
    bases: list[int] = []
    offsets: list[int] = []
    los: list[int] = []
    his: list[int] = []
    pending = 0

    def flush() -> None:
        nonlocal pending, counts
        if not bases:
            return
        lo_a = np.array(los, dtype=np.int64)
        lens = np.array(his, dtype=np.int64) - lo_a + 1
        starts = np.zeros(len(lens), dtype=np.int64)
        np.cumsum(lens[:-1], out=starts[1:])
        seg = np.repeat(np.arange(len(lens), dtype=np.int64), lens)
        pos = np.arange(int(lens.sum()), dtype=np.int64) - starts[seg]
        v = w_leaf * (lo_a[seg] + pos) + np.array(offsets, dtype=np.int64)[seg]
        ehat = np.array(bases, dtype=np.int64)[seg] + k_leaf * v * v
        counts += np.bincount(ehat // slot_div - slot_min, minlength=length)
        bases.clear()
        offsets.clear()
        los.clear()
        his.clear()
        pending = 0

    pend = list(w0)

    def rec(i: int, budget: int) -> None:
        nonlocal pending
        ki, wi, pi = kk[i], ws[i], pend[i]
        r = isqrt(budget // ki)
        lo = -((r + pi) // wi)
        hi = (r - pi) // wi
        if hi < lo:
            return
        if i == l - 1:
            bases.append(sigma_t - budget)
            offsets.append(pi)
            los.append(lo)
            his.append(hi)
            pending += hi - lo + 1
            if pending >= 1 << 20:
                flush()
            return
        for xi in range(lo, hi + 1):
            v = wi * xi + pi
            nb = budget - ki * v * v
            for j in range(i + 1, l):
                pend[j] += rows[j][i] * xi
            rec(i + 1, nb)
            for j in range(i + 1, l):
                pend[j] -= rows[j][i] * xi

    rec(0, form.budget)
    flush()
    return [int(c) for c in counts]


def _series_from_parts(gram, lin, const, weight, bound: Fraction) -> QSeries:
    """Shared engine: expand a positive-definite quadratic lattice sum."""
    grid = _grid_denominator(gram, lin, const)
    t_units = floor(bound * grid)
    l = len(lin)
    if l == 0:
        c0 = as_rational(const)
        if c0 <= bound:
            return QSeries.from_terms([(c0, _weight_value(weight, ()))], bound, grid)
        return QSeries.zero(bound, grid)
    form = _scale_form(gram, lin, const, bound)
    if form.budget < 0:
        return QSeries.zero(bound, grid)
    if weight is None and _fast_safe(form):
        slot_min = ceil(form.cstar * grid)
        if t_units < slot_min:
            return QSeries.zero(bound, grid)
        window = _counts_numpy(form, t_units, slot_min)
        return QSeries.from_window(grid, slot_min, window, t_units)
    slot_div = form.sigma // grid
    acc: dict[int, int] = {}
    for point, ehat in _scaled_points(form):
        w = _weight_value(weight, point)
        slot = ehat // slot_div
        acc[slot] = acc.get(slot, 0) + w
    if not acc:
        return QSeries.zero(bound, grid)
    lo = min(acc)
    window = [acc.get(i, 0) for i in range(lo, t_units + 1)]
    return QSeries.from_window(grid, lo, window, t_units)


def _points_from_parts(gram, lin, const, bound: Fraction):
    """Exact point stream for an arbitrary positive-definite quadratic form."""
    l = len(lin)
    if l == 0:
        c0 = as_rational(const)
        if c0 <= bound:
            yield (), c0
        return
    form = _scale_form(gram, lin, const, bound)
    for point, ehat in _scaled_points(form):
        yield point, Fraction(ehat, form.sigma)


# -- public enumeration over kappa-form sums -----------------------------------


def lattice_enumerate(
    s: LatticeSum, bound: RationalLike
) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """All k with exponent_at(k) <= bound, as (k, exponent) pairs in lex order."""
    t = as_rational(bound)
    if s.c <= 0:
        raise ValueError("indefinite exponent function")
    gram, lin, const = _kappa_parts(s)
    yield from _points_from_parts(gram, lin, const, t)


def lattice_sum_series(s: LatticeSum, bound: RationalLike) -> QSeries:
    """Expand the lattice sum as a QSeries, correct through the bound.

    Coefficient at each exponent is the number of lattice points reaching it,
    weighted when the sum carries a weight shape.  Positive-definiteness of
    the exponent function makes every coefficient a finite count.
    """
    t = as_rational(bound)
    if s.c <= 0:
        raise ValueError("indefinite exponent function")
    gram, lin, const = _kappa_parts(s)
    return _series_from_parts(gram, lin, const, s.weight, t)


# -- independent box-scan oracle ------------------------------------------------

# 333/106 is a classical continued-fraction convergent strictly below pi.
_PI_LOWER = Fraction(333, 106)


def _kappa_lambda_lower(l: int) -> Fraction:
    """Certified positive rational below the least eigenvalue of the kappa Gram.

    The exact value is 2*sin(pi/(2(l+1)))^2; sin is bounded below on [0, pi/2]
    by its alternating series truncation x - x^3/6 evaluated at a rational
    point below the true angle.
    """
    x = _PI_LOWER / (2 * (l + 1))
    s = x - x**3 / 6
    assert s > 0
    return 2 * s * s


def _sqrt_upper(x: Fraction) -> Fraction:
    """A rational upper bound for sqrt(x), x >= 0."""
    if x < 0:
        raise ValueError("negative radicand")
    return Fraction(isqrt(x.numerator * x.denominator) + 1, x.denominator)


def lattice_enumerate_oracle(
    s: LatticeSum, bound: RationalLike
) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """Reference enumerator: scan a certified box, evaluate E directly.

    The box radius comes from c*lambda*|k|^2 - |lin|*|k| + const <= bound
    with lambda a certified rational lower bound on the least eigenvalue of
    the kappa Gram matrix, so no admissible point can escape the box.
    """
    t = as_rational(bound)
    if s.c <= 0:
        raise ValueError("indefinite exponent function")
    if s.l == 0:
        if s.const <= t:
            yield (), s.const
        return
    lam = s.c * _kappa_lambda_lower(s.l)
    norm2 = sum(v * v for v in s.lin)
    lin_norm = _sqrt_upper(Fraction(norm2)) if norm2 else Fraction(0)
    disc = lin_norm * lin_norm + 4 * lam * (t - s.const)
    if disc < 0:
        return
    radius = floor((lin_norm + _sqrt_upper(disc)) / (2 * lam))
    if radius < 0:
        return

    gram, lin, const = _kappa_parts(s)
    scale = lcm(_grid_denominator(gram, lin, const), t.denominator)
    diag = int(scale * s.c)
    cross = -diag
    lin_s = [int(scale * v) for v in s.lin]
    const_s = int(scale * s.const)
    t_s = int(scale * t)
    l = s.l

    side = 2 * radius + 1
    volume = side**l
    emax = diag * l * radius * radius + abs(cross) * l * radius * radius
    emax += sum(abs(v) for v in lin_s) * radius + abs(const_s)
    if l >= 2 and volume > 100_000 and emax < _INT64_CAP:
        tail_axes = np.arange(-radius, radius + 1, dtype=np.int64)
        shape = [side] * (l - 1)
        tails = np.meshgrid(*([tail_axes] * (l - 1)), indexing="ij")
        tail_e = np.zeros(shape, dtype=np.int64)
        for i, axis in enumerate(tails):
            tail_e += diag * axis * axis + lin_s[i + 1] * axis
            if i + 2 < l:
                tail_e += cross * axis * tails[i + 1]
        tail_e += const_s
        for x0 in range(-radius, radius + 1):
            e = tail_e + (diag * x0 * x0 + lin_s[0] * x0) + cross * x0 * tails[0]
            hits = np.argwhere(e <= t_s)
            for idx in hits:
                point = (x0,) + tuple(int(v) - radius for v in idx)
                yield point, Fraction(int(e[tuple(idx)]), scale)
        return

    for point in iter_product(range(-radius, radius + 1), repeat=l):
        e = diag * sum(v * v for v in point)
        e += cross * sum(point[i] * point[i + 1] for i in range(l - 1))
        e += sum(a * b for a, b in zip(lin_s, point)) + const_s
        if e <= t_s:
            yield point, Fraction(e, scale)
