"""dg-categories, dg-functors and dg-adjunctions on the shipped fixtures."""

import pytest

from dgcat_workbench import (
    Complex, DgCategory, DgFunctor, Matrix, UnknownObjectError, compose_functors,
    h0_category, identity_functor, opposite, swap_functor, tensor_dgcat, unit_category,
    validate_dgcat, validate_functor, verify_dg_adjunction, z0_category,
)
from dgcat_workbench.dgcat import (
    find_isomorphism, fully_faithful_via_unit, h0_functor, is_quasi_equivalence, two_sided_inverse,
)
from dgcat_workbench.fixtures import fixture_categories, q2_adjunctions, truncated_polynomial


# -- Helpers ----------------------------------------------------------

def _replace(cat, comp=None, ident=None, hom=None):
    return DgCategory(cat.field, cat.objects, hom or cat.hom, comp or cat.comp, ident or cat.ident, cat.name)


def _leibniz_breaker(fld):
    """One object with ``dh = f`` and ``f ∘ f = f``: composition is not a chain map."""
    h = Complex.from_blocks(fld, {-1: 1, 0: 2}, {-1: Matrix.from_rows(fld, [[0], [1]])})
    # basis: 0 = h (deg -1), 1 = identity, 2 = f
    return DgCategory.from_table(fld, ("o",), {("o", "o"): h}, {("o", "o", "o", 2, 2): {2: 1}}, {"o": 1}, "bad")


def _set_entry(m, i, j, value):
    entries = {(r, c): a for r, c, a in m.nonzero_entries()}
    entries[(i, j)] = value
    return Matrix.from_entries(m.field, m.nrows, m.ncols, entries)


def _with_comp_entry(cat, triple, i, j, value):
    return _replace(cat, comp={**cat.comp, triple: _set_entry(cat.comp[triple], i, j, value)})


def _with_ident(cat, obj, vector):
    return _replace(cat, ident={**cat.ident, obj: tuple(cat.field(v) for v in vector)})


def _three_term(fld):
    d = Matrix.from_rows(fld, [[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    bad = Complex(fld, (-2, -1, 0), d)
    return DgCategory.from_table(fld, ("o",), {("o", "o"): bad}, {}, {"o": 2}, "bad")


# Each fault changes one entry of a shipped fixture; the validator must name the axiom.
CATEGORY_FAULTS = {
    "dropped_unit": (lambda f: _with_ident(fixture_categories(f)["Q2"], "a", (0,)), "left_unit"),
    "killed_right_unit": (lambda f: _with_comp_entry(fixture_categories(f)["Q2"], ("a", "a", "b"), 0, 0, 0),
                          "right_unit"),
    "extra_cube": (lambda f: _with_comp_entry(truncated_polynomial(f, 3), ("o", "o", "o"), 2, 7, 1),
                   "associativity"),
    "d_squared": (_three_term, "differential"),
    "lost_homotopy": (lambda f: _with_comp_entry(fixture_categories(f)["I"], ("a", "a", "b"), 0, 0, 0),
                      "leibniz"),
    "mixed_degrees": (lambda f: _with_comp_entry(fixture_categories(f)["I"], ("a", "a", "b"), 0, 1, 1),
                      "composition_degree"),
    "odd_identity": (lambda f: _with_ident(truncated_polynomial(f, 2, degree=-1), "o", (1, 1)),
                     "identity_closed"),
}


# -- Tests ------------------------------------------------------------

def test_fixture_categories_validate(fld):
    for name, cat in fixture_categories(fld).items():
        assert validate_dgcat(cat).ok, name


def test_truncated_polynomial_multiplication(qq):
    cat = truncated_polynomial(qq, 3)
    x = cat.basis("o", "o", 1)
    assert cat.compose("o", "o", "o", x, x) == cat.basis("o", "o", 2)
    x2 = cat.basis("o", "o", 2)
    assert not any(cat.compose("o", "o", "o", x, x2))


def test_truncated_polynomial_rejects_odd_cube(qq):
    with pytest.raises(ValueError):
        truncated_polynomial(qq, 3, degree=1)


def test_dropped_unit_is_named(quiver):
    fld = quiver.field
    broken = _replace(quiver, ident={**quiver.ident, "a": (fld.zero,)})
    report = validate_dgcat(broken)
    assert not report.ok
    assert report.check == "left_unit"


def test_broken_right_unit_is_named(quiver):
    fld = quiver.field
    comp = dict(quiver.comp)
    comp[("a", "a", "b")] = Matrix.zeros(fld, 1, 1)
    report = validate_dgcat(_replace(quiver, comp=comp))
    assert report.check == "right_unit"


def test_sign_flip_keeps_axioms(qq):
    cat = truncated_polynomial(qq, 3)
    comp = dict(cat.comp)
    entries = {(i, j): v for i, j, v in comp[("o", "o", "o")].nonzero_entries()}
    # x ∘ x ↦ -x²
    entries[(2, 1 * 3 + 1)] = -qq.one
    comp[("o", "o", "o")] = Matrix.from_entries(qq, 3, 9, entries)
    assert validate_dgcat(_replace(cat, comp=comp)).ok


def test_broken_associativity_is_named(qq):
    cat = truncated_polynomial(qq, 3)
    comp = dict(cat.comp)
    entries = {(i, j): v for i, j, v in comp[("o", "o", "o")].nonzero_entries()}
    # x² ∘ x = x² while x ∘ x² stays 0
    entries[(2, 2 * 3 + 1)] = qq.one
    comp[("o", "o", "o")] = Matrix.from_entries(qq, 3, 9, entries)
    report = validate_dgcat(_replace(cat, comp=comp))
    assert report.check == "associativity"
    assert report.location["objects"] == ("o", "o", "o", "o")


def test_broken_leibniz_is_named(fld):
    report = validate_dgcat(_leibniz_breaker(fld))
    assert report.check == "leibniz"


def test_bad_differential_is_named(qq):
    d = Matrix.from_rows(qq, [[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    bad = Complex(qq, (-2, -1, 0), d)
    cat = DgCategory.from_table(qq, ("o",), {("o", "o"): bad}, {}, {"o": 2}, "bad")
    report = validate_dgcat(cat)
    assert report.check == "differential"


@pytest.mark.parametrize("fault", sorted(CATEGORY_FAULTS))
def test_single_entry_faults_are_named(fld, fault):
    build, axiom = CATEGORY_FAULTS[fault]
    report = validate_dgcat(build(fld))
    assert not report.ok
    assert report.check == axiom


def test_unknown_object(quiver):
    with pytest.raises(UnknownObjectError):
        quiver.check_object("z")


def test_opposite_is_an_involution(fld):
    for cat in fixture_categories(fld).values():
        op = opposite(cat)
        assert validate_dgcat(op).ok
        assert opposite(op) == cat


def test_opposite_swaps_homs(quiver):
    op = opposite(quiver)
    assert op.dim("b", "a") == 1
    assert op.dim("a", "b") == 0


def test_tensor_dgcat_validates(quiver, dual):
    both = tensor_dgcat(quiver, dual)
    assert validate_dgcat(both).ok
    assert len(both.objects) == 2
    assert both.dim("(a,o)", "(b,o)") == 2


def test_z0_and_h0_of_interval(interval):
    z0 = z0_category(interval).category
    h0 = h0_category(interval).category
    assert z0.dim("a", "b") == 1
    assert h0.dim("a", "b") == 0
    assert validate_dgcat(z0).ok
    assert validate_dgcat(h0).ok


def test_find_isomorphism(quiver, interval):
    assert not find_isomorphism(h0_category(interval).category, "a", "b").found
    assert not find_isomorphism(quiver, "a", "b").found
    assert find_isomorphism(quiver, "a", "a").found


def test_two_sided_inverse_of_identity(quiver):
    assert two_sided_inverse(quiver, "a", "a", quiver.ident["a"]) == quiver.ident["a"]


def test_functors_validate(adj):
    for fun in (adj.F, adj.G, adj.H):
        assert validate_functor(fun).ok, fun.name
    gf = compose_functors(adj.G, adj.F)
    assert validate_functor(gf).ok
    assert gf("*") == "*"


def test_identity_and_swap_functors(quiver, dual):
    assert validate_functor(identity_functor(quiver)).ok
    assert validate_functor(swap_functor(quiver, dual)).ok


def test_swap_functor_koszul_sign(fld):
    cats = fixture_categories(fld)
    odd = cats["dual_odd"]
    swap = swap_functor(odd, odd)
    assert validate_functor(swap).ok
    eps = ("(o,o)", "(o,o)")
    m = swap.maps[eps]
    # ε ⊗ ε sits at index 3 and picks up (-1)^{1·1}
    assert m[(3, 3)] == -fld.one


def test_broken_functor_is_named(adj):
    fld = adj.F.source.field
    bad = DgFunctor(adj.F.source, adj.F.target, {"*": "a"}, {("*", "*"): Matrix.zeros(fld, 1, 1)}, "bad")
    assert validate_functor(bad).check == "functor_identity"


def test_h0_functor_of_identity(interval):
    fun = h0_functor(identity_functor(interval))
    assert validate_functor(fun).ok


def test_is_quasi_equivalence(quiver, adj):
    assert is_quasi_equivalence(identity_functor(quiver))
    assert not is_quasi_equivalence(adj.F)


def test_dg_adjunctions_on_q2(adj):
    left = verify_dg_adjunction(adj.F, adj.G, adj.phi_FG)
    right = verify_dg_adjunction(adj.G, adj.H, adj.phi_GH)
    assert left.ok, left.result
    assert right.ok, right.result
    assert left.checks == ("phi_iso", "naturality", "triangles", "universal_property")


def test_counit_of_free_forgetful_pair(adj):
    report = verify_dg_adjunction(adj.F, adj.G, adj.phi_FG)
    fld = adj.F.source.field
    assert report.counit["b"] == (fld.one,)
    assert report.unit["*"] == (fld.one,)


def test_scaling_one_component_of_phi_breaks_naturality(qq):
    adj = q2_adjunctions(qq)
    phi = {**adj.phi_FG, ("*", "a"): adj.phi_FG[("*", "a")].scale(qq(2))}
    report = verify_dg_adjunction(adj.F, adj.G, phi)
    assert not report.ok
    assert report.result.check == "naturality_right"


def test_uniform_scaling_with_the_old_unit_breaks_a_triangle(qq):
    adj = q2_adjunctions(qq)
    honest = verify_dg_adjunction(adj.F, adj.G, adj.phi_FG)
    phi = {key: m.scale(qq(2)) for key, m in adj.phi_FG.items()}
    report = verify_dg_adjunction(adj.F, adj.G, phi, unit=honest.unit)
    assert "naturality" in report.checks
    assert report.result.check == "triangle_left"
    assert verify_dg_adjunction(adj.F, adj.G, phi).ok


def test_unit_iso_iff_fully_faithful(adj):
    assert fully_faithful_via_unit(adj.F, adj.G, adj.phi_FG)
    assert not fully_faithful_via_unit(adj.G, adj.H, adj.phi_GH)


def test_unit_category_shape(fld):
    k = unit_category(fld)
    assert k.objects == ("*",)
    assert k.dim("*", "*") == 1
