"""Bounded cochain complexes: constructions, cohomology and quasi-isomorphisms."""

import pytest
from hypothesis import given, settings, strategies as st

from dgcat_workbench import (
    Complex, DimensionMismatchError, Field, GradedMap, Matrix, NotClosedError, ValidationError,
)
from dgcat_workbench.complexes import (
    HomotopyEquivalence, cohomology, cone, cone_maps, direct_sum, graded_kernel,
    hom_tensor_adjunction, homotopy_inverse, induced_map, internal_hom, is_acyclic,
    is_quasi_iso, iso_witness, quasi_iso_routes, quotient_complex, shift, tensor,
    tensor_maps, validate_complex,
)
from dgcat_workbench.exact_linalg import rank


# -- Helpers ----------------------------------------------------------

def _interval(fld):
    """``𝕜 → 𝕜`` in degrees -1, 0 with identity differential: acyclic."""
    return Complex.from_blocks(fld, {-1: 1, 0: 1}, {-1: Matrix.identity(fld, 1)})


def _two_term(fld, block):
    """``𝕜^n → 𝕜^m`` in degrees 0, 1 with the given block."""
    return Complex.from_blocks(fld, {0: block.ncols, 1: block.nrows}, {0: block})


@st.composite
def two_term_complexes(draw):
    fld = Field(2)
    n = draw(st.integers(min_value=1, max_value=3))
    m = draw(st.integers(min_value=1, max_value=3))
    rows = [[draw(st.integers(0, 1)) for _ in range(n)] for _ in range(m)]
    return _two_term(fld, Matrix.from_rows(fld, rows))


# -- Tests ------------------------------------------------------------

def test_from_blocks_orders_by_degree(fld):
    c = Complex.from_blocks(fld, {1: 2, -1: 1})
    assert c.degrees == (-1, 1, 1)
    assert c.dims == {-1: 1, 1: 2}
    assert c.support == [-1, 1]


def test_from_blocks_rejects_bad_block(fld):
    with pytest.raises(DimensionMismatchError):
        Complex.from_blocks(fld, {0: 1, 1: 1}, {0: Matrix.identity(fld, 2)})


def test_validate_complex_finds_d_squared(qq):
    good = _interval(qq)
    assert validate_complex(good).ok
    d = Matrix.from_rows(qq, [[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    bad = Complex(qq, (0, 1, 2), d)
    report = validate_complex(bad)
    assert not report.ok
    assert report.check == "d_squared"


def test_cohomology_of_interval_vanishes(fld):
    c = _interval(fld)
    assert cohomology(c).dim == 0
    assert is_acyclic(c)


def test_cohomology_depends_on_characteristic():
    for p, expected in ((0, {}), (2, {0: 1, 1: 1})):
        fld = Field(p)
        c = _two_term(fld, Matrix.from_rows(fld, [[2]]))
        assert cohomology(c).dims == expected


def test_cohomology_coordinates_invert_representatives(qq):
    c = _two_term(qq, Matrix.from_rows(qq, [[1, 1]]))
    h = cohomology(c)
    assert h.dims == {0: 1}
    assert h.coordinates @ h.representatives == Matrix.identity(qq, 1)


def test_shift_moves_degrees_and_signs_differential(qq):
    c = _interval(qq)
    s = shift(c, 1)
    assert s.degrees == (-2, -1)
    assert s.d == c.d.scale(-qq.one)


def test_direct_sum_offsets(fld):
    a, b = _interval(fld), Complex.ground(fld, 3)
    total, offsets = direct_sum(fld, [a, b])
    assert offsets == [0, 2]
    assert total.degrees == (-1, 0, 3)


def test_tensor_is_a_complex(qq):
    c = tensor(_interval(qq), _interval(qq))
    assert validate_complex(c).ok
    assert c.dims == {-2: 1, -1: 2, 0: 1}
    assert is_acyclic(c)


def test_tensor_maps_compose_with_identity(qq):
    c = _interval(qq)
    one = GradedMap.identity(c)
    prod = tensor_maps(one, one)
    assert prod.matrix == Matrix.identity(qq, 4)


def test_internal_hom_degree_zero_cycles_are_chain_maps(qq):
    c = _interval(qq)
    h = internal_hom(c, c)
    assert validate_complex(h).ok
    z = cohomology(h)
    assert z.dim == 0
    ident = h.vector_of(Matrix.identity(qq, 2))
    assert h.d.apply(ident) == (qq.zero,) * h.dim


def test_hom_tensor_adjunction_is_iso(qq):
    z = Complex.ground(qq, 1)
    v = _interval(qq)
    w = Complex.ground(qq, 0, 2)
    assert hom_tensor_adjunction(z, v, w).verify()


def test_graded_map_rejects_wrong_degree(qq):
    a, b = Complex.ground(qq, 0), Complex.ground(qq, 1)
    with pytest.raises(ValidationError):
        GradedMap(a, b, 0, Matrix.identity(qq, 1))


def test_cone_of_identity_is_acyclic(fld):
    c = _interval(fld)
    one = GradedMap.identity(c)
    assert validate_complex(cone(one)).ok
    assert is_acyclic(cone(one))
    inc, proj = cone_maps(one)
    assert inc.is_closed and proj.is_closed


def test_cone_rejects_non_chain_map(qq):
    c = _interval(qq)
    f = GradedMap(c, c, 0, Matrix.from_rows(qq, [[1, 0], [0, 0]]))
    with pytest.raises(NotClosedError):
        cone(f)


def test_quasi_iso_routes_agree(qq):
    c = _interval(qq)
    zero = Complex.zero(qq)
    f = GradedMap.zero(c, zero)
    assert quasi_iso_routes(f) == (True, True)
    assert is_quasi_iso(f)
    g = GradedMap.zero(Complex.ground(qq), zero)
    assert not is_quasi_iso(g)


def test_iso_witness_and_induced_map(qq):
    c = Complex.ground(qq, 0, 2)
    swap = GradedMap(c, c, 0, Matrix.from_rows(qq, [[0, 1], [1, 0]]))
    w = iso_witness(swap)
    assert w is not None and w.verify()
    assert rank(induced_map(swap)) == 2
    assert iso_witness(GradedMap.zero(c, c)) is None


def test_homotopy_inverse_of_projection(qq):
    c = _interval(qq)
    total, _ = direct_sum(qq, [c, Complex.ground(qq)])
    proj = GradedMap(total, Complex.ground(qq), 0, Matrix.from_rows(qq, [[0, 0, 1]]))
    eq = homotopy_inverse(proj)
    assert isinstance(eq, HomotopyEquivalence)
    assert eq.verify()


def test_quotient_and_kernel(qq):
    c = _interval(qq)
    q = quotient_complex(c, Matrix.from_columns(qq, 2, [(qq.zero, qq.one)]))
    assert q.complex.dims == {-1: 1}
    sub = graded_kernel(c, Matrix.from_rows(qq, [[1, 0]]))
    assert sub.complex.dims == {0: 1}


@settings(max_examples=40, deadline=None)
@given(two_term_complexes())
def test_euler_characteristic_matches_cohomology(c):
    h = cohomology(c)
    assert sum((-1) ** (n % 2) * k for n, k in h.dims.items()) == c.euler_characteristic()


@settings(max_examples=40, deadline=None)
@given(two_term_complexes())
def test_cone_of_identity_always_acyclic(c):
    assert validate_complex(c).ok
    assert is_acyclic(cone(GradedMap.identity(c)))
