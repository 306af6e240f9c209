"""Isbell duality, the bimodule dualities and representability searches."""

import pytest

from dgcat_workbench import Matrix, NotClosedError, duality
from dgcat_workbench.dgmod import (
    ModuleMorphism, diagonal, from_functor, identity_morphism, module_iso,
    representable_left, representable_right, validate_module, validate_morphism,
)
from dgcat_workbench.duality import (
    L_dual, L_map, LR_counit, LR_unit, R_dual, is_contractible, is_left_representable,
    is_right_homotopy_representable, is_right_representable, isbell_adjunction, isbell_counit,
    isbell_O, isbell_spec, isbell_unit, search_representability,
)
from dgcat_workbench.enums import ReprKind, Side
from dgcat_workbench.fixtures import acyclic_summand


# -- Tests ------------------------------------------------------------

def test_isbell_swaps_representables(quiver):
    for a in quiver.objects:
        o = isbell_O(representable_right(quiver, a))
        assert validate_module(o).ok
        assert o.dims() == representable_left(quiver, a).dims()
        spec = isbell_spec(representable_left(quiver, a))
        assert validate_module(spec).ok
        assert spec.dims() == representable_right(quiver, a).dims()


def test_representables_are_reflexive(interval):
    for a in interval.objects:
        unit = isbell_unit(representable_right(interval, a))
        assert validate_morphism(unit).ok
        assert module_iso(unit) is not None
        counit = isbell_counit(representable_left(interval, a))
        assert validate_morphism(counit).ok
        assert module_iso(counit) is not None


def test_isbell_adjunction(quiver, dual):
    for cat in (quiver, dual):
        for a in cat.objects:
            for b in cat.objects:
                w = isbell_adjunction(representable_left(cat, a), representable_right(cat, b))
                assert w.verify()


def test_dualities_of_the_diagonal(quiver):
    t = diagonal(quiver)
    left, right = L_dual(t), R_dual(t)
    assert validate_module(left).ok
    assert validate_module(right).ok
    assert left.dims() == t.dims()
    assert right.dims() == t.dims()


def test_unit_and_counit_of_the_diagonal(interval):
    t = diagonal(interval)
    unit, counit = LR_unit(t), LR_counit(t)
    assert validate_morphism(unit).ok and validate_morphism(counit).ok
    assert module_iso(unit) is not None
    assert module_iso(counit) is not None


def test_dual_of_identity_is_identity(quiver):
    t = diagonal(quiver)
    phi = L_map(identity_morphism(t))
    expected = identity_morphism(L_dual(t))
    assert all(phi.maps[k] == expected.maps[k] for k in expected.source.keys())


def test_duality_rejects_open_morphisms(quiver):
    t = diagonal(quiver)
    fld = quiver.field
    maps = {k: Matrix.identity(fld, t.dim(*k)) for k in t.keys()}
    with pytest.raises(NotClosedError):
        L_map(ModuleMorphism(t, t, 1, maps))


def test_contractibility(dual):
    h = representable_right(dual, "o")
    assert not is_contractible(h)
    assert is_contractible(acyclic_summand(h))


def test_diagonal_is_representable_on_both_sides(quiver):
    t = diagonal(quiver)
    right = is_right_representable(t)
    left = is_left_representable(t)
    assert right.assignment == {"a": "a", "b": "b"}
    assert left.assignment == {"a": "a", "b": "b"}
    assert right.to_dict()["side"] == "right"


def test_functor_bimodule_is_right_but_not_left_representable(adj):
    lower, _ = from_functor(adj.F)
    assert is_right_representable(lower).assignment == {"*": "a"}
    outcome = search_representability(lower, Side.LEFT, ReprKind.STRICT)
    assert outcome.witness is None
    assert outcome.failed_at == "b"
    assert outcome.exhaustive
    assert not outcome.to_dict()["found"]


def test_homotopy_and_quasi_searches(interval):
    t = diagonal(interval)
    w = is_right_homotopy_representable(t)
    assert w.assignment == {"a": "a", "b": "b"}
    quasi = search_representability(t, Side.RIGHT, ReprKind.QUASI)
    assert quasi.witness.assignment == {"a": "a", "b": "b"}


def test_candidate_restriction(quiver):
    t = diagonal(quiver)
    outcome = search_representability(t, Side.RIGHT, ReprKind.STRICT, candidates={"a": ["b"], "b": ["b"]})
    assert outcome.failed_at == "a"
    assert "b" in outcome.provenance


def test_parallel_search_matches_serial(quiver):
    t = diagonal(quiver)
    serial = search_representability(t, Side.RIGHT, ReprKind.STRICT)
    parallel = search_representability(t, Side.RIGHT, ReprKind.STRICT, parallel=True)
    assert serial.witness.assignment == parallel.witness.assignment
    assert serial.to_dict() == parallel.to_dict()


def test_parallel_search_leaves_no_job_behind(quiver, adj):
    first = search_representability(diagonal(quiver), Side.RIGHT, ReprKind.STRICT, parallel=True)
    lower, _ = from_functor(adj.F)
    second = search_representability(lower, Side.LEFT, ReprKind.QUASI, parallel=True)
    assert duality._worker_job is None
    assert first.witness is not None
    assert second.to_dict() == search_representability(lower, Side.LEFT, ReprKind.QUASI).to_dict()
