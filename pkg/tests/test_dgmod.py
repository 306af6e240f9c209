"""Modules, bimodules, natural transformations and Yoneda."""

import pytest

from dgcat_workbench import Matrix, ValidationError, cohomology
from dgcat_workbench.dgmod import (
    LeftModule, RightModule, action_to_functor, co_component, component, diagonal, direct_sum,
    external_tensor, from_functor, functor_to_action, hom_bimodule, identity_morphism,
    is_acyclic_module, is_qis_morphism, module_cone, module_iso, nat_complex, representable_left,
    representable_right, restrict, shift_module, validate_module, validate_morphism, yoneda_family,
    yoneda_iso,
)
from dgcat_workbench.fixtures import acyclic_summand, fixture_categories, random_module


# -- Helpers ----------------------------------------------------------

def _with_ract(t, key, matrix):
    return type(t)(t.left, t.right, t.component, t.lact, {**t.ract, key: matrix}, "bad")


def _with_lact(t, key, matrix):
    return type(t)(t.left, t.right, t.component, {**t.lact, key: matrix}, t.ract, "bad")


def _set_entry(m, i, j, value):
    entries = {(r, c): a for r, c, a in m.nonzero_entries()}
    entries[(i, j)] = value
    return Matrix.from_entries(m.field, m.nrows, m.ncols, entries)


def _right_fault(name, obj, key, i, j, value):
    def build(fld):
        h = representable_right(fixture_categories(fld)[name], obj)
        return _with_ract(h, key, _set_entry(h.ract[key], i, j, value))
    return build


def _left_fault(name, obj, key, i, j, value):
    def build(fld):
        h = representable_left(fixture_categories(fld)[name], obj)
        return _with_lact(h, key, _set_entry(h.lact[key], i, j, value))
    return build


# Single-entry faults in the actions of shipped representables.
MODULE_FAULTS = {
    "dropped_left_unit": (_left_fault("Q2", "a", ("a", "a", "*"), 0, 0, 0), "left_unit"),
    "dropped_right_unit": (_right_fault("Q2", "b", ("b", "b", "*"), 0, 0, 0), "right_unit"),
    "lost_boundary": (_right_fault("I", "b", ("a", "b", "*"), 1, 1, 0), "right_chain_map"),
    "mixed_degrees": (_right_fault("I", "b", ("a", "b", "*"), 0, 1, 1), "right_degree"),
    "right_square_dropped": (_right_fault("k[x]/x^3", "o", ("o", "o", "*"), 2, 4, 0), "right_associativity"),
    "left_square_dropped": (_left_fault("k[x]/x^3", "o", ("o", "o", "*"), 2, 4, 0), "left_associativity"),
}


# -- Tests ------------------------------------------------------------

def test_representables_validate(fld):
    for name, cat in fixture_categories(fld).items():
        for a in cat.objects:
            assert validate_module(representable_right(cat, a)).ok, (name, a)
            assert validate_module(representable_left(cat, a)).ok, (name, a)


def test_representable_types(quiver):
    assert isinstance(representable_right(quiver, "a"), RightModule)
    assert isinstance(representable_left(quiver, "a"), LeftModule)
    assert representable_right(quiver, "b").at("a").dim == 1
    assert representable_right(quiver, "a").at("b").dim == 0


def test_diagonal_validates(fld):
    for cat in fixture_categories(fld).values():
        t = diagonal(cat)
        assert validate_module(t).ok, cat.name
        assert t.left_hprojective and t.right_hprojective


def test_component_of_diagonal_is_representable(quiver):
    t = diagonal(quiver)
    assert component(t, "a") == representable_right(quiver, "a")
    assert co_component(t, "b") == representable_left(quiver, "b")


def test_broken_right_unit_is_named(quiver):
    h = representable_right(quiver, "b")
    bad = _with_ract(h, ("b", "b", "*"), Matrix.zeros(quiver.field, 1, 1))
    assert validate_module(bad).check == "right_unit"


@pytest.mark.parametrize("fault", sorted(MODULE_FAULTS))
def test_single_entry_faults_are_named(fld, fault):
    build, axiom = MODULE_FAULTS[fault]
    report = validate_module(build(fld))
    assert not report.ok
    assert report.check == axiom


def test_sign_flip_in_an_action_breaks_leibniz(qq):
    flipped = _right_fault("I", "b", ("a", "b", "*"), 0, 0, -1)(qq)
    assert validate_module(flipped).check == "right_chain_map"


def test_from_functor(adj):
    lower, upper = from_functor(adj.F)
    assert isinstance(lower, RightModule)
    assert isinstance(upper, LeftModule)
    assert lower.at("a").dim == 1 and lower.at("b").dim == 0
    assert upper.at("a").dim == 1 and upper.at("b").dim == 1
    assert lower.right_hprojective and upper.left_hprojective
    assert validate_module(lower).ok and validate_module(upper).ok


def test_sum_shift_and_cone_validate(fld):
    cat = fixture_categories(fld)["I"]
    ha, hb = representable_right(cat, "a"), representable_right(cat, "b")
    total = direct_sum(ha, shift_module(hb, 1), shift_module(ha, -2))
    assert validate_module(total).ok
    assert total.total_dim == 2 * ha.total_dim + hb.total_dim
    odd = fixture_categories(fld)["dual_odd"]
    assert validate_module(shift_module(representable_left(odd, "o"), 1)).ok


def test_cone_of_identity_is_acyclic(fld):
    cat = fixture_categories(fld)["dual_odd"]
    cone = acyclic_summand(representable_right(cat, "o"))
    assert validate_module(cone).ok
    assert is_acyclic_module(cone)


def test_cone_rejects_nonzero_degree(interval):
    hb = representable_right(interval, "b")
    h = interval.basis("a", "b", 0)
    phi = yoneda_family(hb, "a", h, -1)
    with pytest.raises(ValidationError):
        module_cone(phi)


def test_external_tensor_validates(fld):
    cats = fixture_categories(fld)
    m = representable_right(cats["dual_odd"], "o")
    n = representable_left(cats["Q2"], "a")
    t = external_tensor(shift_module(m, 1), n)
    assert validate_module(t).ok
    assert t.dim("o", "b") == 2


def test_random_modules_validate_and_repeat(fld):
    for name, cat in fixture_categories(fld).items():
        for seed in range(3):
            m = random_module(cat, seed)
            assert validate_module(m).ok, (name, seed)
            assert m == random_module(cat, seed)
        assert validate_module(random_module(cat, 7, left=True)).ok, name


def test_restrict_along_identity(quiver):
    from dgcat_workbench import identity_functor

    t = diagonal(quiver)
    assert restrict(t, identity_functor(quiver), identity_functor(quiver)) == t


def test_action_notation_round_trip(fld):
    odd = fixture_categories(fld)["dual_odd"]
    t = shift_module(diagonal(odd), 1)
    assert functor_to_action(t, action_to_functor(t)) == t


def test_identity_morphism_is_an_iso(quiver):
    t = diagonal(quiver)
    one = identity_morphism(t)
    assert validate_morphism(one).ok
    assert is_qis_morphism(one)
    assert module_iso(one).verify()


def test_nat_between_representables(quiver):
    nat = nat_complex(representable_right(quiver, "a"), representable_right(quiver, "b"))
    assert nat.dim == 1
    assert cohomology(nat.complex).dims == {0: 1}
    back = nat_complex(representable_right(quiver, "b"), representable_right(quiver, "a"))
    assert back.dim == 0


def test_nat_coordinates_of_yoneda_family(quiver):
    hb = representable_right(quiver, "b")
    f = quiver.basis("a", "b", 0)
    phi = yoneda_family(hb, "a", f, 0)
    assert validate_morphism(phi).ok
    nat = nat_complex(representable_right(quiver, "a"), hb)
    coords = nat.coordinates(phi)
    assert nat.components(coords) == dict(phi.maps)


def test_yoneda_iso_on_representables(fld):
    for cat in fixture_categories(fld).values():
        for a in cat.objects:
            for b in cat.objects:
                assert yoneda_iso(a, representable_right(cat, b)).verify()
                assert yoneda_iso(a, representable_left(cat, b)).verify()


def test_yoneda_iso_on_random_modules(fld):
    cat = fixture_categories(fld)["I"]
    for seed in range(3):
        m = random_module(cat, seed)
        for a in cat.objects:
            assert yoneda_iso(a, m).verify()


def test_hom_bimodule_validates(quiver):
    ha, hb = representable_right(quiver, "a"), representable_right(quiver, "b")
    assert validate_module(hom_bimodule(ha, hb)).ok
    la, lb = representable_left(quiver, "a"), representable_left(quiver, "b")
    assert validate_module(hom_bimodule(la, lb)).ok


def test_hom_bimodule_rejects_mixed_sides(quiver):
    with pytest.raises(ValidationError):
        hom_bimodule(representable_right(quiver, "a"), representable_left(quiver, "a"))
