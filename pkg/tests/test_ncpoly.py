"""Kernel algebra: products, derivations, substitution, the Euler test."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laxforge.atoms import MATRIX_SHAPES, ShapeError, atom, make_word
from laxforge.coeff import gr
from laxforge.ncpoly import (NCPolynomial, SubstitutionError, TracePolynomial,
                             euler_derivative, is_total_t_derivative, nc_mul,
                             scalarize)
from laxforge.parser import parse_poly


def f(base, dt=0, dx=0, mode="scalar"):
    return NCPolynomial.from_atom(atom(base, dt, dx, mode), mode)


# -- multiplication ----------------------------------------------------------

def test_matrix_product_concatenates():
    p = nc_mul(f("u", mode="matrix"), f("uh", mode="matrix"))
    assert p.shape == ("M", "M")
    (w, c), = p.terms.items()
    assert [a.base for a in w.atoms] == ["u", "uh"]


def test_scalar_product_canonicalizes():
    assert nc_mul(f("uh"), f("u")) == nc_mul(f("u"), f("uh"))


def test_distributivity_example():
    lhs = nc_mul(f("u", mode="matrix") + f("pih", mode="matrix"), f("uh", mode="matrix"))
    rhs = nc_mul(f("u", mode="matrix"), f("uh", mode="matrix")) + \
        nc_mul(f("pih", mode="matrix"), f("uh", mode="matrix"))
    assert lhs == rhs


def test_shape_mismatch_rejected():
    with pytest.raises(ShapeError):
        nc_mul(f("u", mode="matrix"), f("u", mode="matrix"))


# -- derivations ---------------------------------------------------------------

def test_derivative_examples():
    assert f("u").differentiate_t() == f("u", dt=1)
    assert nc_mul(f("u"), f("uh")).differentiate_t() == \
        nc_mul(f("u", dt=1), f("uh")) + nc_mul(f("u"), f("uh", dt=1))
    assert NCPolynomial.unit("scalar").differentiate_t().is_zero


# random well-shaped matrix words: a shape-compatible random walk
_BASES = list(MATRIX_SHAPES)


@st.composite
def matrix_words(draw, max_len=4):
    n = draw(st.integers(1, max_len))
    first = draw(st.sampled_from(_BASES))
    atoms = [atom(first, draw(st.integers(0, 2)), mode="matrix")]
    for _ in range(n - 1):
        want = atoms[-1].cols
        choices = [b for b in _BASES if MATRIX_SHAPES[b][0] == want]
        base = draw(st.sampled_from(choices))
        atoms.append(atom(base, draw(st.integers(0, 2)), mode="matrix"))
    return atoms


@st.composite
def matrix_polys(draw, shape=None):
    words = draw(st.lists(matrix_words(), min_size=1, max_size=3))
    if shape is None:
        shape = (words[0][0].rows, words[0][-1].cols)
    p = NCPolynomial.zero("matrix", shape)
    for ats in words:
        if (ats[0].rows, ats[-1].cols) != shape:
            continue
        c = gr(draw(st.integers(-3, 3)), draw(st.integers(-2, 2)))
        if c.is_zero:
            continue
        p = p + NCPolynomial("matrix", shape, {make_word(ats, "matrix"): c})
    return p


@given(matrix_polys(), matrix_polys())
@settings(max_examples=60, deadline=None)
def test_derivation_property(p, q):
    if p.shape[1] != q.shape[0]:
        q = NCPolynomial.unit("matrix", p.shape[1])
    lhs = nc_mul(p, q).differentiate_t()
    rhs = nc_mul(p.differentiate_t(), q) + nc_mul(p, q.differentiate_t())
    assert lhs == rhs


@given(matrix_polys(), matrix_polys())
@settings(max_examples=60, deadline=None)
def test_scalarize_is_homomorphic(p, q):
    if p.shape[1] != q.shape[0]:
        q = NCPolynomial.unit("matrix", p.shape[1])
    assert scalarize(nc_mul(p, q)) == nc_mul(scalarize(p), scalarize(q))
    assert scalarize(p + p) == scalarize(p) + scalarize(p)
    assert scalarize(p.differentiate_t()) == scalarize(p).differentiate_t()


@given(matrix_polys())
@settings(max_examples=60, deadline=None)
def test_shape_chaining_preserved(p):
    for w in p.terms:
        for a, b in zip(w.atoms, w.atoms[1:]):
            assert a.cols == b.rows
    q = nc_mul(p, NCPolynomial.unit("matrix", p.shape[1]))
    assert q == p


# -- substitution ----------------------------------------------------------------

def test_substitute_momentum():
    from laxforge.parser import parse_expression
    s = parse_expression("lam*uh + pi")
    out = s.substitute([(atom("pi", mode="scalar"), f("uh", dx=1))])
    assert out == parse_expression("lam*uh + uh_x")


def test_substitute_two_atom_pattern():
    uhuK = nc_mul(nc_mul(f("uh", mode="matrix"), f("u", mode="matrix")),
                  f("K11", mode="matrix"))
    rule = ((atom("u", mode="matrix"), atom("K11", mode="matrix")),
            f("pih", mode="matrix"))
    assert uhuK.substitute([rule]) == nc_mul(f("uh", mode="matrix"),
                                             f("pih", mode="matrix"))


def test_substitute_empty_rules_is_identity():
    p = parse_poly("u*uh + 2*pi")
    assert p.substitute([]) == p


def test_substitute_divergent_rules_flagged():
    rule = (atom("u", mode="scalar"), f("u") + NCPolynomial.unit("scalar"))
    with pytest.raises(SubstitutionError):
        f("u").substitute([rule], max_steps=20)


# -- Euler operator / total-derivative test ----------------------------------------

def test_total_derivative_simple():
    p = parse_poly("u_t*uh + u*uh_t")
    ok, witness = is_total_t_derivative(p)
    assert ok and witness == parse_poly("u*uh")


def test_not_total_derivative():
    ok, witness = is_total_t_derivative(parse_poly("u*pi"))
    assert not ok and witness is None


def test_total_derivative_second_order():
    p = parse_poly("u_tt*uh - u*uh_tt")
    ok, witness = is_total_t_derivative(p)
    assert ok and witness == parse_poly("u_t*uh - u*uh_t")
    assert witness.differentiate_t() == p


def test_euler_detects_u_pi():
    e = euler_derivative(parse_poly("u*pi"), "pi")
    assert e == parse_poly("u")


def test_matrix_mode_requires_trace():
    with pytest.raises(ValueError):
        is_total_t_derivative(f("u", mode="matrix"))


def test_trace_total_derivative():
    inner = nc_mul(f("u", dt=1, mode="matrix"), f("uh", mode="matrix")) + \
        nc_mul(f("u", mode="matrix"), f("uh", dt=1, mode="matrix"))
    ok, witness = is_total_t_derivative(TracePolynomial.from_nc(inner))
    assert ok
    assert witness.differentiate_t() == TracePolynomial.from_nc(inner)


def test_trace_cyclic_identification():
    a = nc_mul(f("u", mode="matrix"), f("uh", mode="matrix"))
    b = nc_mul(f("uh", mode="matrix"), f("u", mode="matrix"))
    assert TracePolynomial.from_nc(a) == TracePolynomial.from_nc(b)


def test_constant_is_not_exact():
    ok, _ = is_total_t_derivative(NCPolynomial.unit("scalar"))
    assert not ok
