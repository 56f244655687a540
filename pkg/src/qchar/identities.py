"""Named series-product identities and the driver that checks them.

Each identity pairs a finite Euler-product quotient with a lattice sum whose
expansions must agree coefficient by coefficient.  Four one-dimensional
classics (Euler's pentagonal identity, Jacobi's cube, and a signed and an
unsigned identity of Gauss) share the data model with two infinite families
in dimension 4m - 1.  The m = 1 members of the two families collapse to the
same identity, and the builders make that literal: their canonical product
and lattice sides compare equal structurally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .qseries import (
    ProductSpec,
    QSeries,
    VerifyReport,
    _compare_builders,
    as_rational,
    product_series,
)
from .quadform import (
    WEIGHT_ALTERNATING,
    WEIGHT_FOUR_K_PLUS_ONE,
    LatticeSum,
    lattice_sum_series,
)

__all__ = [
    "CLASSICAL_NAMES",
    "IdentitySpec",
    "classical_identity",
    "class1_identity",
    "class2_identity",
    "verify_identity",
]

CLASSICAL_NAMES = ("euler", "jacobi", "gauss_a", "gauss_b")


@dataclass(frozen=True)
class IdentitySpec:
    """A product side and a lattice side claimed to expand identically."""

    name: str
    lhs: ProductSpec
    rhs: LatticeSum
    params: Optional[int] = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("identity needs a name")
        if self.params is not None and (
            not isinstance(self.params, int) or self.params < 1
        ):
            raise ValueError("family parameter must be a positive integer")

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
        }
        if self.params is not None:
            out["params"] = self.params
        return out

    @staticmethod
    def from_json(data: dict) -> "IdentitySpec":
        params = data.get("params")
        return IdentitySpec(
            str(data["name"]),
            ProductSpec.from_json(data["lhs"]),
            LatticeSum.from_json(data["rhs"]),
            None if params is None else int(params),
        )


def classical_identity(name: str) -> IdentitySpec:
    """One of the four one-dimensional identities: euler, jacobi, gauss_a, gauss_b.

    euler:   phi(q)           = sum (-1)^k q^((3k^2+k)/2)
    jacobi:  phi(q)^3         = sum (4k+1) q^(2k^2+k)
    gauss_a: phi(q)^2/phi(q^2) = sum (-1)^k q^(k^2)
    gauss_b: phi(q^2)^2/phi(q) = sum q^(2k^2+k)
    """
    one = Fraction(1)
    two = Fraction(2)
    if name == "euler":
        lhs = ProductSpec(((one, 1),))
        rhs = LatticeSum(
            1, Fraction(3, 2), (Fraction(1, 2),), Fraction(0), WEIGHT_ALTERNATING
        )
    elif name == "jacobi":
        lhs = ProductSpec(((one, 3),))
        rhs = LatticeSum(1, two, (one,), Fraction(0), WEIGHT_FOUR_K_PLUS_ONE)
    elif name == "gauss_a":
        lhs = ProductSpec(((one, 2), (two, -1)))
        rhs = LatticeSum(1, one, (Fraction(0),), Fraction(0), WEIGHT_ALTERNATING)
    elif name == "gauss_b":
        lhs = ProductSpec(((two, 2), (one, -1)))
        rhs = LatticeSum(1, two, (one,), Fraction(0))
    else:
        raise ValueError(f"unknown classical identity: {name!r}")
    return IdentitySpec(name, lhs, rhs)


def class1_identity(m: int) -> IdentitySpec:
    """First family: dimension 4m-1, quadratic multiplier 4m-1.

    Product side phi(q^(4m-1))^(4m-1) phi(q^(2m))^2 / (phi(q) phi(q^m));
    the linear form puts 2m-1 on the first coordinate, 4m-2 on coordinate
    3m, and -1 everywhere else.  At m = 1 the two hub coordinates sit at
    the ends and the scales m and 1 merge in the product.
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError("family parameter must be a positive integer")
    dim = 4 * m - 1
    lin = [Fraction(-1)] * dim
    lin[0] = Fraction(2 * m - 1)
    lin[3 * m - 1] = Fraction(4 * m - 2)
    lhs = ProductSpec(
        (
            (Fraction(4 * m - 1), 4 * m - 1),
            (Fraction(2 * m), 2),
            (Fraction(1), -1),
            (Fraction(m), -1),
        )
    )
    rhs = LatticeSum(dim, Fraction(4 * m - 1), tuple(lin), Fraction(0))
    return IdentitySpec("class1", lhs, rhs, m)


def class2_identity(m: int) -> IdentitySpec:
    """Second family: dimension 4m-1, quadratic multiplier 3m.

    Product side phi(q^(3m))^(4m) phi(q^2)^2 / (phi(q)^2 phi(q^3)); the
    linear form is -3 on coordinates below m, 3m-2 at coordinate m, 3m-1 at
    the last coordinate, and -1 between.  Coincides with class1 at m = 1.
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError("family parameter must be a positive integer")
    dim = 4 * m - 1
    lin = [Fraction(-1)] * dim
    for i in range(m - 1):
        lin[i] = Fraction(-3)
    lin[m - 1] = Fraction(3 * m - 2)
    lin[dim - 1] = Fraction(3 * m - 1)
    lhs = ProductSpec(
        (
            (Fraction(3 * m), 4 * m),
            (Fraction(2), 2),
            (Fraction(1), -2),
            (Fraction(3), -1),
        )
    )
    rhs = LatticeSum(dim, Fraction(3 * m), tuple(lin), Fraction(0))
    return IdentitySpec("class2", lhs, rhs, m)


def verify_identity(spec: IdentitySpec, bound) -> VerifyReport:
    """Expand both sides through the bound and compare after normalization."""
    t = as_rational(bound)

    def lhs(order: Fraction) -> QSeries:
        return product_series(spec.lhs, order)

    def rhs(order: Fraction) -> QSeries:
        return lattice_sum_series(spec.rhs, order)

    return _compare_builders(lhs, rhs, t)
