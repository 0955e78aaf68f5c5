"""Sparse polynomial fields, parsing, symmetry checks, linearization."""

from fractions import Fraction

import pytest

from conftest import random_poly_field, random_reversible_field, seeded_rng
from revequiv.exactalg import Mat4
from revequiv.normalform import ResonanceSpec, real_group_representative
from revequiv.solver import R0, reflection_block_matrix
from revequiv.vecfield import (
    FieldFormatError,
    NotAnInvolution,
    PARITY_FAMILIES,
    Poly,
    PolyMap,
    PolyVF,
    check_parity_conditions,
    check_symmetry,
    conjugate,
    linearize_involution,
    parse_poly,
)


def test_poly_arithmetic_basics():
    x1 = Poly.variable(0)
    y1 = Poly.variable(2)
    p = x1 * x1 + y1.scale(Fraction(3, 2))
    assert p.degree() == 2
    assert p.coefficient((2, 0, 0, 0)) != 0
    assert (p - p).is_zero()
    assert p.diff(0) == x1.scale(2)


def test_poly_truncation_in_mul():
    x1 = Poly.variable(0)
    p = x1.pow(3)
    assert p.mul(p, max_degree=5).is_zero()
    assert not p.mul(p, max_degree=6).is_zero()


def test_parse_round_trip():
    text = "-1*x2 + 3/2*x2*y1^2 - 2*x1^3"
    p = parse_poly(text)
    assert p.coefficient((0, 1, 0, 0)) == Mat4.identity()[0, 0].__neg__()
    assert p.coefficient((0, 1, 2, 0)).as_rational() == Fraction(3, 2)
    assert parse_poly(str(p)) == p


def test_parse_rejects_garbage():
    for bad in ("x5", "2**x1", "x1 + + x2", "1/0*x1"):
        with pytest.raises((FieldFormatError, ZeroDivisionError)):
            parse_poly(bad)


def test_field_text_round_trip():
    rng = seeded_rng("vf-text")
    x = random_poly_field(rng, 4, nterms=15, min_degree=1)
    assert PolyVF.parse(str(x), 4) == x


def test_field_json_round_trip():
    rng = seeded_rng("vf-json")
    x = random_poly_field(rng, 5)
    assert PolyVF.from_json(x.to_json()) == x


def test_linear_part_extraction():
    spec = ResonanceSpec(1, 2)
    x = PolyVF.from_linear(spec.linear_matrix(), 3)
    assert x.linear_part() == spec.linear_matrix()
    assert x.nonlinear().is_zero()


def test_check_symmetry_trivial_rotation():
    spec = ResonanceSpec(1, 2)
    x = PolyVF.from_linear(spec.linear_matrix(), 5)
    assert check_symmetry(x, R0, -1).ok
    s = reflection_block_matrix(2, 1, 0)
    assert check_symmetry(x, s, -1).ok
    assert not check_symmetry(x, Mat4.identity(), -1).ok


def test_product_of_two_reversors_is_equivariance():
    rng = seeded_rng("two-reversors")
    spec = ResonanceSpec(3, 5)
    for j in (1, 2, 5):
        s = real_group_representative(j)
        x = random_reversible_field(rng, spec, s, 4)
        assert check_symmetry(x, R0, -1).ok
        assert check_symmetry(x, s, -1).ok
        assert check_symmetry(x, R0 * s, +1).ok


def test_conjugate_identity_and_inverse():
    rng = seeded_rng("conj")
    spec = ResonanceSpec(1, 3)
    x = PolyVF.from_linear(spec.linear_matrix(), 4) + random_poly_field(rng, 4)
    ident = PolyMap.identity(4)
    assert conjugate(x, ident) == x
    h = PolyMap(
        [
            Poly.variable(0) + Poly.monomial((0, 0, 2, 0), Fraction(1, 2)),
            Poly.variable(1),
            Poly.variable(2),
            Poly.variable(3) + Poly.monomial((1, 1, 0, 0), 1),
        ],
        4,
    )
    assert conjugate(conjugate(x, h), h.inverse()) == x


def test_conjugate_by_commuting_linear_preserves_reversibility():
    rng = seeded_rng("commuting")
    spec = ResonanceSpec(3, 5)
    s = real_group_representative(3)
    x = random_reversible_field(rng, spec, s, 4)
    # a linear map commuting with R0: diagonal scaling
    h = PolyMap.from_linear(Mat4.diagonal([2, 2, Fraction(1, 3), Fraction(1, 3)]), 4)
    y = conjugate(x, h)
    assert check_symmetry(y, R0, -1).ok


def test_map_inverse_composes_to_identity():
    h = PolyMap(
        [
            Poly.variable(0) + Poly.monomial((0, 2, 0, 0), 1),
            Poly.variable(1) + Poly.monomial((1, 0, 1, 0), Fraction(-1, 2)),
            Poly.variable(2),
            Poly.variable(3),
        ],
        5,
    )
    assert h.compose(h.inverse()) == PolyMap.identity(5)
    assert h.inverse().compose(h) == PolyMap.identity(5)


def _family_involution(family):
    if family == "Z2Z2-S1":
        return Mat4.diagonal([-1, 1, -1, 1])
    if family == "Z2Z2-S2":
        return Mat4.diagonal([-1, 1, 1, -1])
    if family == "Z2Z2-S3":
        return Mat4.diagonal([1, -1, -1, 1])
    if family == "D4-S1":
        return real_group_representative(1)
    raise AssertionError(family)


@pytest.mark.parametrize("family", sorted(PARITY_FAMILIES))
def test_parity_conditions_match_symmetry_checks(family):
    rng = seeded_rng(f"parity-{family}")
    spec = ResonanceSpec(1, 2)
    s = _family_involution(family)
    a = spec.linear_matrix()
    lin = PolyVF.from_linear(a, 4)
    for k in range(25):
        if k % 2 == 0:
            x = lin + random_poly_field(rng, 4, nterms=8)
        else:
            x = random_reversible_field(rng, spec, s, 4)
        direct = check_symmetry(x, R0, -1).ok and check_symmetry(x, s, -1).ok
        assert check_parity_conditions(x, family) == direct


def test_linearize_involution_trivial():
    phi = PolyMap.from_linear(R0, 4)
    h = linearize_involution(phi, 4)
    lin = h.linear_part()
    assert h.compose(phi) == PolyMap.from_linear(lin, 4).compose(
        PolyMap.from_linear(R0, 4)
    ).compose(h.inverse()).compose(h)


def test_linearize_involution_conjugates_to_linear_part():
    g = PolyMap(
        [
            Poly.variable(0) + Poly.monomial((0, 0, 2, 0), Fraction(1, 3)),
            Poly.variable(1) + Poly.monomial((2, 0, 0, 0), 1),
            Poly.variable(2),
            Poly.variable(3) + Poly.monomial((1, 0, 1, 0), Fraction(-1, 2)),
        ],
        6,
    )
    phi = g.compose(PolyMap.from_linear(R0, 6)).compose(g.inverse())
    phi = PolyMap(phi.components, 6)
    h = linearize_involution(phi, 6)
    conj = h.compose(phi).compose(h.inverse())
    assert PolyMap(conj.components, 6) == PolyMap.from_linear(R0, 6)


def test_linearize_rejects_non_involution():
    not_inv = PolyMap(
        [
            Poly.variable(0) + Poly.monomial((0, 2, 0, 0), 1),
            Poly.variable(1),
            Poly.variable(2),
            Poly.variable(3),
        ],
        4,
    )
    with pytest.raises(NotAnInvolution):
        linearize_involution(not_inv, 4)
