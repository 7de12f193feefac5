import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrdisk import MappingExpr, ParseError, d_z, d_zbar, evaluate, laplacian, parse

EX21 = "2*|z|^4*z^2 - |z|^10*z^2"
EX41 = "((2*1+1)*z - z*|z|^2)/(2*1)"


# ----------------------------------------------------------------------
# parsing
# ----------------------------------------------------------------------

def test_parse_quartic_decic_terms():
    assert parse(EX21).terms == {(4, 2): 2 + 0j, (7, 5): -1 + 0j}


def test_parse_identity():
    assert parse("z").terms == {(1, 0): 1 + 0j}


@pytest.mark.parametrize(
    "source, kind, fragment",
    [
        ("|z|^3", "semantic", "odd"),
        ("|z|", "semantic", "odd"),
        ("z / conj(z)", "semantic", "constant"),
        ("z / (1 - 1)", "semantic", "zero"),
        ("z^-1", "semantic", "negative"),
        ("z +* 2", "syntax", "unexpected"),
        ("z + $", "lex", "unexpected character"),
        ("conj(z", "syntax", "expected"),
        ("q + 1", "syntax", "unknown name"),
    ],
)
def test_parse_rejections(source, kind, fragment):
    with pytest.raises(ParseError) as err:
        parse(source)
    d = err.value.diagnostic
    assert d.kind == kind
    assert fragment in d.message
    assert 0 <= d.position < len(source)


def test_syntax_error_offset():
    with pytest.raises(ParseError) as err:
        parse("z +* 2")
    assert err.value.diagnostic.position == 3


def test_division_by_constant_folds():
    assert parse("(2*z) / (1 + 1)").terms == {(1, 0): 1 + 0j}
    assert parse("z / i").terms == {(1, 0): -1j}


def test_abs2_and_even_bars_agree():
    assert parse("abs2(z)") == parse("|z|^2")
    assert parse("abs2(z + 1)") == parse("(z+1)*conj(z+1)")
    assert parse("|z|^0").terms == {(0, 0): 1 + 0j}


# ----------------------------------------------------------------------
# evaluation
# ----------------------------------------------------------------------

def test_eval_boundary_values_double_angle():
    e = parse(EX21)
    for th in (0.0, np.pi / 3, 1.0):
        z = np.exp(1j * th)
        assert abs(e(z) - np.exp(2j * th)) < 1e-14


def test_eval_identity_point():
    assert evaluate(parse("z"), 0.3 + 0.4j) == 0.3 + 0.4j


def test_eval_shrink_family_half():
    # ((3)*0.5 - 0.5*0.25)/2 = 0.6875 by direct arithmetic
    assert abs(parse(EX41)(0.5) - 0.6875) < 1e-15


def test_eval_vectorized_matches_scalar(rng):
    from conftest import random_points, random_poly

    e = random_poly(rng)
    pts = random_points(rng, 17)
    vec = e(pts)
    for z, v in zip(pts, vec):
        assert abs(e(complex(z)) - v) < 1e-12


# ----------------------------------------------------------------------
# derivatives
# ----------------------------------------------------------------------

def test_dz_quartic_decic():
    # 8|z|^4 z - 7|z|^10 z  ==  8 z^3 conj(z)^2 - 7 z^6 conj(z)^5
    assert d_z(parse(EX21)) == parse("8*|z|^4*z - 7*|z|^10*z")


def test_dzbar_quartic_decic():
    assert d_zbar(parse(EX21)) == parse("4*|z|^2*z^3 - 5*|z|^8*z^3")


def test_dz_constant_is_zero():
    assert d_z(parse("3 + 2*i")).terms == {}


def test_laplacian_modulus_at_half():
    # |lap| on |z| = r is |64 r^4 - 140 r^10|; at r = 0.5 that is 3.86328125
    e = laplacian(parse(EX21))
    val = abs(e(0.5 * np.exp(0.37j)))
    assert abs(val - 3.86328125) < 1e-12


def test_laplacian_holomorphic_vanishes():
    for a in (1, 2, 7):
        assert laplacian(MappingExpr({(a, 0): 1.0})).terms == {}


def test_laplacian_shrink_family():
    # 4 d_z d_zbar of (3z - z^2 conj z)/2 is exactly -4z
    assert laplacian(parse(EX41)).terms == {(1, 0): -4 + 0j}


# ----------------------------------------------------------------------
# algebra invariants (integer coefficients keep float products exact)
# ----------------------------------------------------------------------

@st.composite
def int_poly(draw, max_exp=6, max_terms=6):
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        a = draw(st.integers(0, max_exp))
        b = draw(st.integers(0, max_exp))
        c = complex(draw(st.integers(-9, 9)), draw(st.integers(-9, 9)))
        terms[(a, b)] = terms.get((a, b), 0) + c
    return MappingExpr(terms)


@settings(max_examples=200, deadline=None)
@given(int_poly())
def test_mixed_partials_commute(e):
    assert d_z(d_zbar(e)) == d_zbar(d_z(e))


@settings(max_examples=200, deadline=None)
@given(int_poly(max_exp=4, max_terms=4), int_poly(max_exp=4, max_terms=4))
def test_leibniz_rule(e1, e2):
    assert d_z(e1 * e2) == d_z(e1) * e2 + e1 * d_z(e2)


def test_conjugation_duality_pointwise(rng):
    from conftest import random_points, random_poly

    for _ in range(5):
        e = random_poly(rng, max_degree=10)
        lhs = d_zbar(e.conj())
        rhs = d_z(e)
        for z in random_points(rng, 10):
            assert abs(lhs(complex(z)) - np.conj(rhs(complex(z)))) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(int_poly())
def test_print_parse_roundtrip(e):
    assert parse(e.to_source()) == e


def test_roundtrip_float_and_complex_coeffs(rng):
    from conftest import random_poly

    for _ in range(25):
        e = random_poly(rng)
        assert parse(e.to_source()) == e


def test_canonical_no_zero_coefficients():
    e = parse("z - z + |z|^2")
    assert (1, 0) not in e.terms
    assert e.terms == {(1, 1): 1 + 0j}
