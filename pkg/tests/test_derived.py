"""Bar resolutions, derived hom and composition, and quasi-functor adjunctions."""

import json

import pytest

from dgcat_workbench import Matrix, UncertifiedResolutionError, cohomology
from dgcat_workbench.dgcat import UNIT_OBJECT
from dgcat_workbench.derived import (
    Level, _compare_in_h0, bar_length_bound, bar_resolution, build_adjunction, derived_compose,
    derived_duality_unit, derived_hom, has_left_adjoint, quasi_functor_compose,
    reduced_nilpotency_index, resolve, structural_maps, verify_quasiadj_diagrams,
)
from dgcat_workbench.dgmod import (
    ModuleMorphism, diagonal, direct_sum, external_tensor, from_functor, identity_morphism,
    is_qis_morphism, representable_left, representable_right, validate_module, validate_morphism,
)
from dgcat_workbench.duality import L_map
from dgcat_workbench.enums import ReprKind
from dgcat_workbench.fixtures import (
    acyclic_summand, dual_numbers, fixture_categories, no_left_adjoint, random_module,
)


# -- Helpers ----------------------------------------------------------

def _cohomology_dims(t):
    return {key: cohomology(t[key]).dims for key in t.keys()}


def _first_summand(total, first):
    """Projection of ``first ⊕ rest`` onto ``first``."""
    fld = total.field
    maps = {}
    for key in first.keys():
        d, n = first[key].dim, total[key].dim
        maps[key] = Matrix.identity(fld, d).hstack(Matrix.zeros(fld, d, n - d))
    return ModuleMorphism(total, first, 0, maps)


# -- Tests ------------------------------------------------------------

def test_bar_length_bound(fld):
    cats = fixture_categories(fld)
    assert bar_length_bound(cats["k"]) == 0
    assert bar_length_bound(cats["Q2"]) == 1
    assert bar_length_bound(cats["I"]) == 1
    assert bar_length_bound(cats["dual"]) is None


def test_reduced_nilpotency_index(fld):
    cats = fixture_categories(fld)
    assert reduced_nilpotency_index(cats["k"]) == 1
    assert reduced_nilpotency_index(cats["Q2"]) == 2
    assert reduced_nilpotency_index(cats["dual"]) == 2
    assert reduced_nilpotency_index(cats["k[x]/x^3"]) == 3


def test_bar_resolution_of_the_diagonal(quiver):
    res = bar_resolution(diagonal(quiver))
    assert res.required_depth == 2
    assert res.certified and res.verified
    assert not res.is_identity
    assert validate_module(res.resolved).ok
    assert validate_morphism(res.augmentation).ok
    assert res.resolved.left_hprojective and res.resolved.right_hprojective


def test_representables_resolve_to_themselves(quiver):
    h = representable_right(quiver, "b")
    assert bar_resolution(h).is_identity
    assert resolve(representable_left(quiver, "a")).is_identity


def test_truncated_resolution_needs_force(dual):
    t = diagonal(dual)
    res = bar_resolution(t, depth=2)
    assert not res.certified
    assert res.required_depth is None
    assert res.verified
    assert res.to_dict()["verified_range"] == {"from": -1, "to": None}
    with pytest.raises(UncertifiedResolutionError):
        resolve(t, depth=2)
    forced = resolve(t, depth=2, force=True)
    assert forced.depth == 2
    assert validate_module(forced.resolved).ok


def test_truncation_without_a_degree_window(fld):
    res = bar_resolution(diagonal(dual_numbers(fld, degree=1)), depth=2)
    assert not res.certified
    assert not res.verified
    assert res.to_dict()["verified_range"] is None


def test_certified_resolution_is_verified_in_every_degree(quiver):
    res = bar_resolution(diagonal(quiver))
    assert res.verified_from is None
    assert res.to_dict()["verified_range"] == {"from": None, "to": None}


def test_derived_hom_between_representables(quiver):
    h = derived_hom(representable_right(quiver, "a"), representable_right(quiver, "b"))
    assert h.dims == {0: 1}
    assert h.resolution.is_identity


def test_hochschild_cohomology_of_q2(quiver):
    t = diagonal(quiver)
    assert derived_hom(t, t).dims == {0: 1}


def test_derived_compose_uses_flags(quiver):
    t = diagonal(quiver)
    direct = derived_compose(t, t)
    assert direct.first is None and direct.second is None
    assert direct.semifree
    assert direct.to_dict()["certificate"] == "flags:first_left,first_right,second_left,second_right"
    both = derived_compose(t, t, resolve_both=True)
    assert both.semifree
    assert _cohomology_dims(both.result) == _cohomology_dims(t)


def test_derived_compose_resolves_unflagged_input(quiver):
    f = external_tensor(representable_right(quiver, "a"), representable_left(quiver, "b"))
    assert not f.right_hprojective and not f.left_hprojective
    out = derived_compose(f, f)
    assert out.first is not None and out.first.certified
    assert validate_module(out.result).ok


def test_one_sided_flags_are_recorded(quiver, adj):
    lower, _ = from_functor(adj.F)
    g = external_tensor(representable_right(quiver, "a"), representable_left(quiver, "b"))
    out = derived_compose(g, lower)
    assert out.first is None
    assert out.flagged == ("first_left", "first_right")
    assert not out.semifree
    assert out.to_dict()["certificate"] == "flags:first_left,first_right"


def test_structural_maps_are_closed(adj):
    lower, _ = from_functor(adj.F)
    maps = structural_maps(lower)
    assert set(maps.named()) == {"t", "n", "e", "e_prime", "counit"}
    for name, m in maps.named().items():
        assert m.is_closed, name
        assert m.degree == 0, name


def test_quasiadjunction_diagrams(adj):
    lower, _ = from_functor(adj.F)
    report = verify_quasiadj_diagrams(lower)
    assert report.report.ok
    assert report.cells == {"top_row_T": True, "square_T": True, "top_row_L": True, "square_L": True}


def test_exact_adjunction_for_a_representable(adj):
    lower, _ = from_functor(adj.F)
    witness = build_adjunction(lower)
    assert witness.level is Level.EXACT
    assert witness.report.ok
    assert witness.checks["triangle_T"] and witness.checks["triangle_L"]
    json.dumps(witness.to_dict())


@pytest.mark.parametrize("name", ["F", "diagonal"])
def test_derived_adjunction_checks_both_triangles(adj, quiver, name):
    lower = from_functor(adj.F)[0] if name == "F" else diagonal(quiver)
    witness = build_adjunction(lower, prefer_exact=False)
    assert witness.level is Level.DERIVED
    assert witness.report.ok
    assert witness.checks["unit_lift"]
    assert witness.checks["triangle_T"] and witness.checks["triangle_L"]
    assert witness.unit.is_closed


def test_h0_comparison_separates_classes(quiver):
    t = diagonal(quiver)
    ident = identity_morphism(t)
    zero = ident - ident
    assert _compare_in_h0("same", ident, ident).ok
    assert not _compare_in_h0("apart", ident, zero).ok


def test_left_adjoint_exists(adj):
    lower, _ = from_functor(adj.G)
    decision = has_left_adjoint(lower)
    assert decision.exists
    assert decision.adjoint.ok
    assert decision.search.witness.assignment == {"*": "a"}


def test_left_adjoint_missing(fld):
    decision = has_left_adjoint(no_left_adjoint(fld))
    assert not decision.exists
    assert decision.search.exhaustive
    assert decision.search.failed_at == "b"
    assert decision.to_dict()["adjoint"] is None


def test_quasi_functor_composition(quiver, adj):
    lower, _ = from_functor(adj.F)
    composite = quasi_functor_compose(diagonal(quiver), lower)
    assert composite.witness.assignment == {"*": "a"}
    assert validate_module(composite.result).ok


def test_derived_duality_unit(adj):
    lower, _ = from_functor(adj.F)
    unit = derived_duality_unit(lower)
    assert unit.first.is_identity
    assert unit.second.certified
    assert unit.quasi_iso


def test_adjoints_agree_across_witnesses(adj):
    lower, _ = from_functor(adj.F)
    padded = direct_sum(lower, acyclic_summand(lower))
    strict = build_adjunction(lower)
    quasi = build_adjunction(padded)
    assert strict.representability.kind is ReprKind.STRICT
    assert quasi.representability.kind is ReprKind.QUASI
    assert quasi.report.ok
    comparison = _first_summand(padded, lower) @ quasi.resolution.augmentation
    assert validate_morphism(comparison).ok
    assert is_qis_morphism(L_map(comparison))
    assert _cohomology_dims(strict.right) == _cohomology_dims(quasi.right)


def test_quasiadjunction_diagrams_after_resolving(adj):
    lower, _ = from_functor(adj.F)
    padded = direct_sum(lower, acyclic_summand(lower))
    report = verify_quasiadj_diagrams(padded, derived=True)
    assert report.resolution is not None and report.resolution.certified
    assert report.report.ok
    assert all(report.cells.values())


def test_derived_hom_is_stable_past_the_bound(quiver):
    t = diagonal(quiver)
    at_bound = derived_hom(t, t, depth=2)
    past_bound = derived_hom(t, t, depth=3)
    assert at_bound.resolution.certified and past_bound.resolution.certified
    assert at_bound.dims == past_bound.dims


@pytest.mark.parametrize("name", ["Q2", "I", "dual"])
@pytest.mark.parametrize("seed", range(4))
def test_derived_hom_out_of_a_representable(fld, name, seed):
    cat = fixture_categories(fld)[name]
    m = random_module(cat, seed)
    for a in cat.objects:
        h = derived_hom(representable_right(cat, a), m)
        expected = cohomology(m[(a, UNIT_OBJECT)]).dims
        assert {k: v for k, v in h.dims.items() if v} == {k: v for k, v in expected.items() if v}
