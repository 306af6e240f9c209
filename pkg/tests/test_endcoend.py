"""Ends, coends, composition of bimodules and the reductions built on them."""

import pytest

from dgcat_workbench import Complex, Matrix, ValidationError, endcoend, tensor_dgcat
from dgcat_workbench.constants import ORACLE_INSTANCES
from dgcat_workbench.dgmod import (
    diagonal, identity_morphism, representable_left, representable_right, validate_module,
)
from dgcat_workbench.endcoend import (
    associativity_witness, coend_bimodule, coend_map, coend_oracle, compose, coyoneda_witness,
    end_bimodule, end_map, end_oracle, fubini_witness, hom_preserves_ends_check, yoneda_end_witness,
)
from dgcat_workbench.enums import Side
from dgcat_workbench.fixtures import fixture_categories, random_f2_pair, random_module


# -- Tests ------------------------------------------------------------

def test_end_of_diagonal_is_the_center(quiver, dual):
    assert end_bimodule(diagonal(quiver)).total.dims == {0: 1}
    assert end_bimodule(diagonal(dual)).total.dims == {0: 2}


def test_coend_of_diagonal(quiver):
    result = coend_bimodule(diagonal(quiver))
    assert result.total.dims == {0: 2}
    assert result.verify_cowedge()


def test_end_projections_form_a_wedge(fld):
    for cat in fixture_categories(fld).values():
        result = end_bimodule(diagonal(cat))
        assert result.verify_wedge(), cat.name
        assert result.to_dict()["objects"] == list(cat.objects)


def test_end_needs_a_square_bimodule(quiver):
    with pytest.raises(ValidationError):
        end_bimodule(representable_right(quiver, "a"))


def test_oracles_on_random_bimodules():
    for seed in range(ORACLE_INSTANCES):
        cat, t = random_f2_pair(seed)
        assert validate_module(t).ok, (cat.name, seed)
        assert end_oracle(t), (cat.name, seed)
        assert coend_oracle(t), (cat.name, seed)


def test_end_and_coend_of_identity(quiver):
    one = identity_morphism(diagonal(quiver))
    e = end_map(one)
    c = coend_map(one)
    assert e.matrix == Matrix.identity(quiver.field, e.source.dim)
    assert c.matrix == Matrix.identity(quiver.field, c.source.dim)


def test_end_lift_rejects_non_wedges(quiver):
    result = end_bimodule(diagonal(quiver))
    fld = quiver.field
    with pytest.raises(ValidationError):
        result.lift({"a": (fld.one,), "b": (fld.zero,)})


def test_coyoneda_on_representables(fld):
    for cat in fixture_categories(fld).values():
        a = cat.objects[0]
        assert coyoneda_witness(representable_right(cat, a)).verify(), cat.name
        assert coyoneda_witness(representable_left(cat, a)).verify(), cat.name


def test_coyoneda_on_both_sides_of_diagonal(interval):
    t = diagonal(interval)
    assert coyoneda_witness(t, Side.LEFT).verify()
    assert coyoneda_witness(t, Side.RIGHT).verify()


def test_coyoneda_on_random_module(fld):
    cat = fixture_categories(fld)["I"]
    assert coyoneda_witness(random_module(cat, 3)).verify()


def test_yoneda_as_an_end(quiver):
    hb = representable_right(quiver, "b")
    for x in quiver.objects:
        assert yoneda_end_witness(hb, x).verify()
    assert yoneda_end_witness(representable_left(quiver, "a"), "b").verify()


def test_composition_of_diagonals(quiver):
    t = compose(diagonal(quiver), diagonal(quiver))
    assert validate_module(t).ok
    assert t.dims() == diagonal(quiver).dims()


def test_composition_needs_a_common_middle(quiver, dual):
    with pytest.raises(ValidationError):
        compose(diagonal(quiver), diagonal(dual))


def test_composition_rejects_broken_actions(quiver, monkeypatch):
    def zero_action(fld, blocks, src_dim, dst_dim, on_right=False):
        return Matrix.zeros(fld, dst_dim, len(blocks) * src_dim)

    monkeypatch.setattr(endcoend, "stack_bilinear", zero_action)
    with pytest.raises(ValidationError):
        compose(diagonal(quiver), diagonal(quiver))


def test_associativity_of_composition(quiver):
    h = diagonal(quiver)
    for witness in associativity_witness(h, h, h).values():
        assert witness.verify()


def test_fubini(quiver, dual):
    pair = tensor_dgcat(quiver, dual)
    witness = fubini_witness(diagonal(pair), quiver, dual)
    assert witness.verify()
    dims = witness.to_dict()["dims"]
    assert dims["pair"] == dims["first_outer"] == dims["second_outer"] == {0: 2}


def test_fubini_rejects_other_bases(quiver, dual):
    with pytest.raises(ValidationError):
        fubini_witness(diagonal(quiver), quiver, dual)


def test_hom_preserves_ends(quiver):
    z = Complex.ground(quiver.field, 0, 2)
    assert hom_preserves_ends_check(diagonal(quiver), z).ok
