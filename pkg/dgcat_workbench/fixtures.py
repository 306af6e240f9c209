"""Shipped dg-categories, functors and modules.

Everything here is small enough for exhaustive checks over F₂ and is
used by the tests, the CLI ``oracle`` command and the README examples.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Mapping

from .complexes import Complex
from .constants import DEFAULT_PRIME, DEFAULT_SEED, RANDOM_MAX_DIM, RANDOM_TOTAL_DIM
from .dgcat import UNIT_OBJECT, DgCategory, DgFunctor, unit_category
from .dgmod import (
    Bimodule, diagonal, direct_sum, external_tensor, from_functor,
    identity_morphism, module_cone, representable_left, representable_right,
    shift_module, with_name, yoneda_family,
)
from .exact_linalg import Field, Matrix, kernel_basis

logger = logging.getLogger(__name__)

__all__ = [
    "unit_category", "q2", "dual_numbers", "truncated_polynomial", "dg_interval",
    "AdjunctionFixture", "q2_adjunctions", "no_left_adjoint",
    "acyclic_summand", "random_cycle", "random_module", "random_bimodule",
    "fixture_categories", "random_f2_pair",
]


# ============================================================
# CATEGORIES
# ============================================================

def q2(field: Field) -> DgCategory:
    """Two objects ``a``, ``b`` and one non-identity morphism ``f: a → b`` of degree 0."""
    hom = {
        ("a", "a"): Complex.ground(field),
        ("b", "b"): Complex.ground(field),
        ("a", "b"): Complex.ground(field),
    }
    return DgCategory.from_table(field, ("a", "b"), hom, {}, {"a": 0, "b": 0}, "Q2")


def truncated_polynomial(field: Field, n: int, degree: int = 0) -> DgCategory:
    """``𝕜[x]/(x^n)`` on one object ``o`` with ``|x| = degree`` and zero differential.

    Basis index ``i`` is ``x^i``.  Odd *degree* with ``n > 2`` is rejected
    since then ``x·x = -x·x`` forces ``x² = 0`` in characteristic ≠ 2.
    """
    if n < 1:
        raise ValueError("truncation order must be positive")
    if degree % 2 and n > 2:
        raise ValueError("an odd generator squares to zero; use n ≤ 2")
    degrees = tuple(i * degree for i in range(n))
    hom = {("o", "o"): Complex(field, degrees, Matrix.zeros(field, n, n))}
    table = {("o", "o", "o", i, j): {i + j: 1} for i in range(1, n) for j in range(1, n) if i + j < n}
    name = f"k[x]/x^{n}" if degree == 0 else f"k[x]/x^{n}(|x|={degree})"
    return DgCategory.from_table(field, ("o",), hom, table, {"o": 0}, name)


def dual_numbers(field: Field, degree: int = 0) -> DgCategory:
    """``𝕜[ε]/(ε²)``."""
    return truncated_polynomial(field, 2, degree)


def dg_interval(field: Field) -> DgCategory:
    """Objects ``a``, ``b`` with ``hom(a, b) = ⟨h, f⟩``, ``|h| = -1``, ``d h = f``.

    ``hom(a, b)`` is acyclic, so ``a`` and ``b`` are not linked in ``H⁰``.
    Basis index 0 is ``h`` and index 1 is ``f``.
    """
    ab = Complex.from_blocks(field, {-1: 1, 0: 1}, {-1: Matrix.identity(field, 1)})
    hom = {
        ("a", "a"): Complex.ground(field),
        ("b", "b"): Complex.ground(field),
        ("a", "b"): ab,
    }
    return DgCategory.from_table(field, ("a", "b"), hom, {}, {"a": 0, "b": 0}, "I")


def fixture_categories(field: Field) -> dict[str, DgCategory]:
    return {
        "k": unit_category(field),
        "Q2": q2(field),
        "dual": dual_numbers(field),
        "dual_odd": dual_numbers(field, 1),
        "k[x]/x^3": truncated_polynomial(field, 3),
        "I": dg_interval(field),
    }


# ============================================================
# FUNCTORS
# ============================================================

@dataclass(frozen=True)
class AdjunctionFixture:
    """``F ⊣ G ⊣ H`` between 𝕜 and Q2 with their hom bijections.

    ``F(*) = a``, ``G`` collapses Q2 onto ``*`` and ``H(*) = b``; every hom
    space involved is one-dimensional, so each bijection is ``[1]``.
    """

    unit: DgCategory
    quiver: DgCategory
    F: DgFunctor
    G: DgFunctor
    H: DgFunctor
    phi_FG: Mapping[tuple[str, str], Matrix]
    phi_GH: Mapping[tuple[str, str], Matrix]


def q2_adjunctions(field: Field) -> AdjunctionFixture:
    k, q = unit_category(field), q2(field)
    one = Matrix.identity(field, 1)
    star = (UNIT_OBJECT, UNIT_OBJECT)
    f = DgFunctor(k, q, {UNIT_OBJECT: "a"}, {star: one}, "F")
    h = DgFunctor(k, q, {UNIT_OBJECT: "b"}, {star: one}, "H")
    g_maps = {p: Matrix.from_rows(field, [[1] * q.dim(*p)], q.dim(*p)) for p in q.pairs()}
    g = DgFunctor(q, k, {"a": UNIT_OBJECT, "b": UNIT_OBJECT}, g_maps, "G")
    phi_fg = {(UNIT_OBJECT, b): one for b in q.objects}
    phi_gh = {(a, UNIT_OBJECT): one for a in q.objects}
    return AdjunctionFixture(k, q, f, g, h, phi_fg, phi_gh)


def no_left_adjoint(field: Field) -> Bimodule:
    """``h_F`` for ``F(*) = a``: at ``b`` it is ``hom(b, a) = 0``, never ``h^*``."""
    return from_functor(q2_adjunctions(field).F)[0]


# ============================================================
# RANDOM MODULES
# ============================================================

def acyclic_summand(t: Bimodule) -> Bimodule:
    """``cone(1_T)``: contractible, same shape as ``T`` shifted."""
    return with_name(module_cone(identity_morphism(t)), f"cone(1_{t.name})")


def random_cycle(c: Complex, rng: random.Random) -> tuple:
    """A random degree-0 cycle of *c*, as a full coordinate vector."""
    fld = c.field
    idx = c.indices(0)
    vec = [fld.zero] * c.dim
    if not idx:
        return tuple(vec)
    ker = kernel_basis(c.differential(0))
    for col in ker.columns():
        coeff = fld.random_element(rng)
        for pos, v in zip(idx, col):
            vec[pos] += coeff * v
    return tuple(vec)


def _summands(cat: DgCategory, rng: random.Random, left: bool) -> list[Bimodule]:
    build = representable_left if left else representable_right
    out = []
    for _ in range(rng.randint(1, RANDOM_MAX_DIM)):
        rep = build(cat, rng.choice(cat.objects))
        shift = rng.choice((-1, 0, 0, 1))
        out.append(shift_module(rep, shift) if shift else rep)
    return out


def _with_cone(module: Bimodule, rng: random.Random) -> Bimodule:
    """Glue in ``cone(h_A → M)`` for a random cycle of ``M(A)``."""
    cat = module.base
    a = rng.choice(cat.objects)
    x = random_cycle(module.at(a), rng)
    return module_cone(yoneda_family(module, a, x, 0))


def random_module(cat: DgCategory, seed: int = DEFAULT_SEED, left: bool = False) -> Bimodule:
    """A valid right (or left) module: shifted representables, possibly coned together.

    Summands are redrawn until the total dimension is at most
    ``RANDOM_TOTAL_DIM``; the result is deterministic in *seed*.
    """
    rng = random.Random(seed)
    while True:
        module = direct_sum(*_summands(cat, rng, left))
        if rng.random() < 0.5:
            module = _with_cone(module, rng)
        if module.total_dim <= RANDOM_TOTAL_DIM:
            logger.debug("random module over %s: dims %s", cat.name, module.dims())
            return module


def random_bimodule(left: DgCategory, right: DgCategory, seed: int = DEFAULT_SEED) -> Bimodule:
    """A valid 𝐀-𝐁 bimodule: sums of ``M ⊠ N`` with random ``M``, ``N``, plus ``h_𝐀`` sometimes."""
    rng = random.Random(seed)
    while True:
        parts = []
        for _ in range(rng.randint(1, 2)):
            m = random_module(right, rng.getrandbits(32))
            n = random_module(left, rng.getrandbits(32), left=True)
            parts.append(external_tensor(m, n))
        if left is right and rng.random() < 0.5:
            parts.append(diagonal(left))
        total = direct_sum(*parts)
        if total.total_dim <= RANDOM_TOTAL_DIM:
            return total


def random_f2_pair(seed: int = DEFAULT_SEED) -> tuple[DgCategory, Bimodule]:
    """A fixture category over ``F_p`` (``p = DEFAULT_PRIME``) and a random bimodule over it."""
    fld = Field(DEFAULT_PRIME)
    rng = random.Random(seed)
    cats = fixture_categories(fld)
    cat = cats[rng.choice(sorted(cats))]
    return cat, random_bimodule(cat, cat, rng.getrandbits(32))
