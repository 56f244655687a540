"""Identity builders, JSON mirrors, and full verification runs for both families."""

import json
from fractions import Fraction

import pytest

from qchar.affine import specialized_character
from qchar.identities import (
    CLASSICAL_NAMES,
    IdentitySpec,
    class1_identity,
    class2_identity,
    classical_identity,
    verify_identity,
)
from qchar.qseries import (
    ProductSpec,
    normalize_shift,
    product_series,
    series_compare,
)
from qchar.quadform import (
    WEIGHT_ALTERNATING,
    WEIGHT_FOUR_K_PLUS_ONE,
    LatticeSum,
    lattice_sum_series,
)

# -- classical builders -------------------------------------------------------


def test_classical_names_cover_builders():
    assert CLASSICAL_NAMES == ("euler", "jacobi", "gauss_a", "gauss_b")
    for name in CLASSICAL_NAMES:
        spec = classical_identity(name)
        assert spec.name == name
        assert spec.params is None


def test_classical_euler_data():
    spec = classical_identity("euler")
    assert spec.lhs == ProductSpec(((Fraction(1), 1),))
    assert spec.rhs == LatticeSum(
        1, Fraction(3, 2), (Fraction(1, 2),), Fraction(0), WEIGHT_ALTERNATING
    )


def test_classical_jacobi_data():
    spec = classical_identity("jacobi")
    assert spec.lhs == ProductSpec(((Fraction(1), 3),))
    assert spec.rhs.weight == WEIGHT_FOUR_K_PLUS_ONE
    assert spec.rhs.c == 2 and spec.rhs.lin == (1,)


def test_classical_gauss_pair_data():
    a = classical_identity("gauss_a")
    assert a.lhs == ProductSpec(((Fraction(1), 2), (Fraction(2), -1)))
    assert a.rhs == LatticeSum(
        1, Fraction(1), (Fraction(0),), Fraction(0), WEIGHT_ALTERNATING
    )
    b = classical_identity("gauss_b")
    assert b.lhs == ProductSpec(((Fraction(2), 2), (Fraction(1), -1)))
    assert b.rhs == LatticeSum(1, Fraction(2), (Fraction(1),), Fraction(0))
    assert b.rhs.weight is None


def test_classical_unknown_name_rejected():
    with pytest.raises(ValueError):
        classical_identity("ramanujan")


def test_euler_lhs_series_window():
    got = product_series(classical_identity("euler").lhs, Fraction(7))
    coeffs = {e: c for e, c in got.terms()}
    assert coeffs == {0: 1, 1: -1, 2: -1, 5: 1, 7: 1}


def test_jacobi_lhs_series_window():
    got = product_series(classical_identity("jacobi").lhs, Fraction(3))
    coeffs = {e: c for e, c in got.terms()}
    assert coeffs == {0: 1, 1: -3, 3: 5}


def test_gauss_b_rhs_triangular_support():
    got = lattice_sum_series(classical_identity("gauss_b").rhs, Fraction(12))
    coeffs = {e: c for e, c in got.terms()}
    # 2k^2 + k at k = 0, -1, 1, -2, 2
    assert coeffs == {0: 1, 1: 1, 3: 1, 6: 1, 10: 1}


# -- family builders ----------------------------------------------------------


def test_class1_m1_data():
    spec = class1_identity(1)
    assert spec.params == 1
    assert spec.rhs == LatticeSum(
        3, Fraction(3), (Fraction(1), Fraction(-1), Fraction(2)), Fraction(0)
    )
    # scale-1 exponents merge: 1/(phi(q) phi(q)) -> phi(q)^-2
    assert spec.lhs == ProductSpec(((Fraction(1), -2), (Fraction(2), 2), (Fraction(3), 3)))


def test_class1_m2_data():
    spec = class1_identity(2)
    assert spec.rhs.l == 7 and spec.rhs.c == 7
    assert spec.rhs.lin == (3, -1, -1, -1, -1, 6, -1)
    assert spec.lhs == ProductSpec(
        ((Fraction(1), -1), (Fraction(2), -1), (Fraction(4), 2), (Fraction(7), 7))
    )


def test_class1_m3_data():
    spec = class1_identity(3)
    assert spec.rhs.l == 11 and spec.rhs.c == 11
    assert spec.rhs.lin == (5, -1, -1, -1, -1, -1, -1, -1, 10, -1, -1)


def test_class2_m1_data():
    spec = class2_identity(1)
    assert spec.rhs == LatticeSum(
        3, Fraction(3), (Fraction(1), Fraction(-1), Fraction(2)), Fraction(0)
    )
    assert spec.lhs == ProductSpec(((Fraction(1), -2), (Fraction(2), 2), (Fraction(3), 3)))


def test_class2_m2_data():
    spec = class2_identity(2)
    assert spec.rhs.l == 7 and spec.rhs.c == 6
    assert spec.rhs.lin == (-3, 4, -1, -1, -1, -1, 5)
    assert spec.lhs == ProductSpec(
        ((Fraction(1), -2), (Fraction(2), 2), (Fraction(3), -1), (Fraction(6), 8))
    )


def test_class2_m3_data():
    spec = class2_identity(3)
    assert spec.rhs.lin == (-3, -3, 7, -1, -1, -1, -1, -1, -1, -1, 8)


def test_family_parameter_must_be_positive():
    for bad in (0, -1, -7):
        with pytest.raises(ValueError):
            class1_identity(bad)
        with pytest.raises(ValueError):
            class2_identity(bad)
    with pytest.raises(ValueError):
        class1_identity("2")


def test_families_coincide_at_m1():
    # the m = 1 members are literally the same identity once canonicalized
    a, b = class1_identity(1), class2_identity(1)
    assert a.lhs == b.lhs
    assert a.rhs == b.rhs


# -- spec data model ----------------------------------------------------------


def test_identity_spec_validation():
    base = classical_identity("euler")
    with pytest.raises(ValueError):
        IdentitySpec("", base.lhs, base.rhs)
    with pytest.raises(ValueError):
        IdentitySpec("x", base.lhs, base.rhs, 0)
    with pytest.raises(ValueError):
        IdentitySpec("x", base.lhs, base.rhs, -3)


def test_identity_spec_json_round_trip():
    for spec in (
        classical_identity("jacobi"),
        class1_identity(2),
        class2_identity(3),
    ):
        blob = json.dumps(spec.to_json(), sort_keys=True)
        back = IdentitySpec.from_json(json.loads(blob))
        assert back == spec
    # params key only present for family members
    assert "params" not in classical_identity("euler").to_json()
    assert class1_identity(1).to_json()["params"] == 1


# -- verification runs --------------------------------------------------------


def test_classical_identities_hold():
    for name in CLASSICAL_NAMES:
        report = verify_identity(classical_identity(name), 120)
        assert report.match, name
        assert report.checked_through == 120
        assert report.first_mismatch is None
        assert report.lhs_shift == 0 and report.rhs_shift == 0


def test_class1_holds_small_orders():
    for m, t in ((1, 60), (2, 40), (3, 20)):
        report = verify_identity(class1_identity(m), t)
        assert report.match, m
        assert report.checked_through == t
        assert report.lhs_shift == 0 and report.rhs_shift == 0


def test_class2_holds_small_orders():
    for m, t in ((1, 60), (2, 30)):
        report = verify_identity(class2_identity(m), t)
        assert report.match, m
        assert report.checked_through == t


def test_corrupted_lattice_side_is_caught():
    good = class1_identity(1)
    bad = IdentitySpec(
        good.name,
        good.lhs,
        LatticeSum(3, Fraction(4), good.rhs.lin, Fraction(0)),
        good.params,
    )
    report = verify_identity(bad, 20)
    assert not report.match
    assert report.first_mismatch is not None
    assert report.first_mismatch.exponent <= 5


def test_corrupted_product_side_is_caught():
    good = classical_identity("gauss_b")
    bad = IdentitySpec("gauss_b", classical_identity("gauss_a").lhs, good.rhs)
    report = verify_identity(bad, 20)
    assert not report.match


# -- agreement with the character construction --------------------------------


def test_class1_lattice_matches_character_numerator():
    # same quadratic and linear data; only the constant offset differs
    for m in (1, 2):
        ident = class1_identity(m)
        char = specialized_character((1, 4 * m - 1), 3 * m)
        assert ident.rhs.l == char.numerator.l
        assert ident.rhs.c == char.numerator.c
        assert ident.rhs.lin == char.numerator.lin


def test_class2_lattice_matches_character_numerator():
    for m in (1, 2):
        ident = class2_identity(m)
        char = specialized_character((m, 3 * m), 4 * m - 1)
        assert ident.rhs.l == char.numerator.l
        assert ident.rhs.c == char.numerator.c
        assert ident.rhs.lin == char.numerator.lin


def test_class1_series_equals_character_numerator_normalized():
    ident = class1_identity(1)
    char = specialized_character((1, 3), 3)
    t = Fraction(25)
    lhs = normalize_shift(lattice_sum_series(ident.rhs, t))[0]
    rhs = normalize_shift(
        lattice_sum_series(char.numerator, t + char.numerator.const)
    )[0]
    report = series_compare(lhs, rhs)
    assert report.match
