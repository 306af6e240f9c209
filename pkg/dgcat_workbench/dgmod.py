"""Right, left and bi-dg-modules over finite dg-categories.

A bimodule ``T`` over ``(𝐀, 𝐁)`` has components ``T(B, A)``, covariant in
``A`` (the left 𝐀-action) and contravariant in ``B`` (the right 𝐁-action).
Right and left modules are bimodules whose other side is the unit
category 𝕜, so one validator and one Nat construction serve all three.

Actions are stored in action notation.  The functor view differs only on
the right: ``x f = (-1)^{|x||f|} T(f)(x)`` while ``g x = T(g)(x)``.

A morphism ``φ`` of degree ``p`` obeys ``φ(x f) = φ(x) f`` and
``φ(g x) = (-1)^{p|g|} g φ(x)``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, fields
from typing import Mapping, Sequence

from .complexes import (
    Complex, GradedMap, HomComplex, IsoWitness, Subcomplex, _accumulate, cone,
    differential_of_map, graded_kernel, hom_operator, internal_hom, is_acyclic, is_quasi_iso,
    shift, tensor, validate_complex,
)
from .complexes import direct_sum as complex_sum
from .dgcat import (
    UNIT_OBJECT, DgCategory, DgFunctor, identity_functor, unit_category, validate_functor,
)
from .errors import DimensionMismatchError, ValidationError
from .exact_linalg import (
    Field, Matrix, bilinear_left, bilinear_right, block_diagonal, kron,
    inverse, kron_vectors, unit_vector,
)
from .exact_linalg import diagonal as diagonal_matrix
from .models import Report

logger = logging.getLogger(__name__)

Key = tuple[str, str]


def is_unit_category(cat: DgCategory) -> bool:
    return cat.objects == (UNIT_OBJECT,) and cat.dim(UNIT_OBJECT, UNIT_OBJECT) == 1


# ============================================================
# BIMODULES
# ============================================================

@dataclass(frozen=True, eq=False)
class Bimodule:
    """An 𝐀-𝐁 bimodule with ``left = 𝐀`` and ``right = 𝐁``.

    ``lact[(a, a2, b)]`` is ``hom(a, a2) ⊗ T(b, a) → T(b, a2)`` with column
    ``i * dim T(b, a) + j`` for ``g_i x_j``.  ``ract[(b2, b, a)]`` is
    ``T(b, a) ⊗ hom(b2, b) → T(b2, a)`` with column ``i * dim hom(b2, b) + j``
    for ``x_i f_j``.  The h-projective flags record sides already known to
    be semifree.
    """

    left: DgCategory
    right: DgCategory
    component: Mapping[Key, Complex]
    lact: Mapping[tuple[str, str, str], Matrix]
    ract: Mapping[tuple[str, str, str], Matrix]
    name: str = ""
    left_hprojective: bool = False
    right_hprojective: bool = False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Bimodule):
            return NotImplemented
        return (self.left == other.left and self.right == other.right
                and dict(self.component) == dict(other.component)
                and dict(self.lact) == dict(other.lact) and dict(self.ract) == dict(other.ract))

    __hash__ = None

    @property
    def field(self) -> Field:
        return self.left.field

    def keys(self) -> list[Key]:
        return [(b, a) for b in self.right.objects for a in self.left.objects]

    def __getitem__(self, key: Key) -> Complex:
        return self.component[key]

    def dim(self, b: str, a: str) -> int:
        return self.component[(b, a)].dim

    @property
    def total_dim(self) -> int:
        return sum(c.dim for c in self.component.values())

    def dims(self) -> dict[str, dict[int, int]]:
        return {f"{b}|{a}": self.component[(b, a)].dims for b, a in self.keys()}

    def act_left(self, a: str, a2: str, b: str, g: Sequence, x: Sequence) -> tuple:
        return self.lact[(a, a2, b)].apply(kron_vectors(g, x))

    def act_right(self, b2: str, b: str, a: str, x: Sequence, f: Sequence) -> tuple:
        return self.ract[(b2, b, a)].apply(kron_vectors(x, f))

    def left_matrix(self, a: str, a2: str, b: str, g: Sequence) -> Matrix:
        """Matrix of ``x ↦ g x`` from ``T(b, a)`` to ``T(b, a2)``."""
        return bilinear_left(self.lact[(a, a2, b)], g, self.dim(b, a))

    def right_matrix(self, b2: str, b: str, a: str, f: Sequence) -> Matrix:
        """Matrix of ``x ↦ x f`` from ``T(b, a)`` to ``T(b2, a)``."""
        return bilinear_right(self.ract[(b2, b, a)], f, self.dim(b, a))


class RightModule(Bimodule):
    """A bimodule over ``(𝕜, 𝐀)``; ``M(A)`` is stored at ``(A, *)``."""

    @property
    def base(self) -> DgCategory:
        return self.right

    def at(self, a: str) -> Complex:
        return self.component[(a, UNIT_OBJECT)]

    def act(self, a2: str, a: str, x: Sequence, f: Sequence) -> tuple:
        return self.act_right(a2, a, UNIT_OBJECT, x, f)

    def action_matrix(self, a2: str, a: str, f: Sequence) -> Matrix:
        return self.right_matrix(a2, a, UNIT_OBJECT, f)


class LeftModule(Bimodule):
    """A bimodule over ``(𝐀, 𝕜)``; ``M(A)`` is stored at ``(*, A)``."""

    @property
    def base(self) -> DgCategory:
        return self.left

    def at(self, a: str) -> Complex:
        return self.component[(UNIT_OBJECT, a)]

    def act(self, a: str, a2: str, g: Sequence, x: Sequence) -> tuple:
        return self.act_left(a, a2, UNIT_OBJECT, g, x)

    def action_matrix(self, a: str, a2: str, g: Sequence) -> Matrix:
        return self.left_matrix(a, a2, UNIT_OBJECT, g)


def promote(t: Bimodule) -> Bimodule:
    """Re-type *t* as a right or left module when one side is 𝕜."""
    if is_unit_category(t.left):
        kind = RightModule
    elif is_unit_category(t.right):
        kind = LeftModule
    else:
        kind = Bimodule
    if type(t) is kind:
        return t
    return kind(*(getattr(t, f.name) for f in fields(Bimodule)))


def make_bimodule(
    left: DgCategory, right: DgCategory, component: Mapping[Key, Complex],
    lact: Mapping[tuple[str, str, str], Matrix], ract: Mapping[tuple[str, str, str], Matrix],
    name: str = "", left_hprojective: bool = False, right_hprojective: bool = False,
) -> Bimodule:
    return promote(Bimodule(left, right, dict(component), dict(lact), dict(ract), name,
                            left_hprojective or is_unit_category(left),
                            right_hprojective or is_unit_category(right)))


def right_module(base: DgCategory, components: Mapping[str, Complex],
                 action: Mapping[Key, Matrix], name: str = "", hprojective: bool = False) -> RightModule:
    """``action[(A2, A)]`` is ``M(A) ⊗ hom(A2, A) → M(A2)``."""
    fld = base.field
    comp = {(a, UNIT_OBJECT): components[a] for a in base.objects}
    ract = {(a2, a, UNIT_OBJECT): action[(a2, a)] for a2, a in base.pairs()}
    lact = {(UNIT_OBJECT, UNIT_OBJECT, a): Matrix.identity(fld, components[a].dim) for a in base.objects}
    return RightModule(unit_category(fld), base, comp, lact, ract, name, True, hprojective)


def left_module(base: DgCategory, components: Mapping[str, Complex],
                action: Mapping[Key, Matrix], name: str = "", hprojective: bool = False) -> LeftModule:
    """``action[(A, A2)]`` is ``hom(A, A2) ⊗ M(A) → M(A2)``."""
    fld = base.field
    comp = {(UNIT_OBJECT, a): components[a] for a in base.objects}
    lact = {(a, a2, UNIT_OBJECT): action[(a, a2)] for a, a2 in base.pairs()}
    ract = {(UNIT_OBJECT, UNIT_OBJECT, a): Matrix.identity(fld, components[a].dim) for a in base.objects}
    return LeftModule(base, unit_category(fld), comp, lact, ract, name, hprojective, True)


def validate_module(t: Bimodule) -> Report:
    """Check every module axiom on basis elements; the first failure names the axiom."""
    lcat, rcat, fld = t.left, t.right, t.field
    for key in t.keys():
        if key not in t.component:
            return Report.failed("component", "missing component", key=key)
        r = validate_complex(t[key])
        if not r:
            return Report.failed("component", r.message, key=key, degree=r.location["degree"])
    for b in rcat.objects:
        for a, a2 in lcat.pairs():
            try:
                m = GradedMap(tensor(lcat.hom[(a, a2)], t[(b, a)]), t[(b, a2)], 0, t.lact[(a, a2, b)])
            except (ValidationError, DimensionMismatchError, KeyError) as exc:
                return Report.failed("left_degree", str(exc), objects=(a, a2, b))
            if not m.is_closed:
                return Report.failed("left_chain_map", "left action is not a chain map", objects=(a, a2, b))
    for a in lcat.objects:
        for b2, b in rcat.pairs():
            try:
                m = GradedMap(tensor(t[(b, a)], rcat.hom[(b2, b)]), t[(b2, a)], 0, t.ract[(b2, b, a)])
            except (ValidationError, DimensionMismatchError, KeyError) as exc:
                return Report.failed("right_degree", str(exc), objects=(b2, b, a))
            if not m.is_closed:
                return Report.failed("right_chain_map", "right action is not a chain map", objects=(b2, b, a))
    for b, a in t.keys():
        one = Matrix.identity(fld, t.dim(b, a))
        if t.left_matrix(a, a, b, lcat.ident[a]) != one:
            return Report.failed("left_unit", "1 x ≠ x", key=(b, a))
        if t.right_matrix(b, b, a, rcat.ident[b]) != one:
            return Report.failed("right_unit", "x 1 ≠ x", key=(b, a))
    for b in rcat.objects:
        for a, a1, a2 in itertools.product(lcat.objects, repeat=3):
            for i in range(lcat.dim(a1, a2)):
                g2 = lcat.basis(a1, a2, i)
                outer = t.left_matrix(a1, a2, b, g2)
                for j in range(lcat.dim(a, a1)):
                    g = lcat.basis(a, a1, j)
                    lhs = outer @ t.left_matrix(a, a1, b, g)
                    rhs = t.left_matrix(a, a2, b, lcat.compose(a, a1, a2, g2, g))
                    if lhs != rhs:
                        return Report.failed("left_associativity", "g'(g x) ≠ (g'g) x",
                                             objects=(a, a1, a2, b), indices=(i, j))
    for a in lcat.objects:
        for b2, b1, b in itertools.product(rcat.objects, repeat=3):
            for i in range(rcat.dim(b1, b)):
                f = rcat.basis(b1, b, i)
                inner = t.right_matrix(b1, b, a, f)
                for j in range(rcat.dim(b2, b1)):
                    f2 = rcat.basis(b2, b1, j)
                    lhs = t.right_matrix(b2, b1, a, f2) @ inner
                    rhs = t.right_matrix(b2, b, a, rcat.compose(b2, b1, b, f, f2))
                    if lhs != rhs:
                        return Report.failed("right_associativity", "(x f) f' ≠ x (f f')",
                                             objects=(b2, b1, b, a), indices=(i, j))
    for a, a2 in lcat.pairs():
        for b2, b in rcat.pairs():
            for i in range(lcat.dim(a, a2)):
                g = lcat.basis(a, a2, i)
                g_top, g_bottom = t.left_matrix(a, a2, b, g), t.left_matrix(a, a2, b2, g)
                for j in range(rcat.dim(b2, b)):
                    f = rcat.basis(b2, b, j)
                    if t.right_matrix(b2, b, a2, f) @ g_top != g_bottom @ t.right_matrix(b2, b, a, f):
                        return Report.failed("bimodule_compatibility", "(g x) f ≠ g (x f)",
                                             objects=(a, a2, b2, b), indices=(i, j))
    return Report.passed("module")


# ============================================================
# MORPHISMS
# ============================================================

@dataclass(frozen=True)
class ModuleMorphism:
    """Per-component graded maps of a common *degree*."""

    source: Bimodule
    target: Bimodule
    degree: int
    maps: Mapping[Key, Matrix]

    @property
    def field(self) -> Field:
        return self.source.field

    def graded_map(self, key: Key) -> GradedMap:
        return GradedMap(self.source[key], self.target[key], self.degree, self.maps[key])

    def __matmul__(self, other: ModuleMorphism) -> ModuleMorphism:
        """Objectwise ``self ∘ other``; no extra sign."""
        maps = {k: self.maps[k] @ other.maps[k] for k in other.source.keys()}
        return ModuleMorphism(other.source, self.target, self.degree + other.degree, maps)

    def __sub__(self, other: ModuleMorphism) -> ModuleMorphism:
        return ModuleMorphism(self.source, self.target, self.degree,
                              {k: self.maps[k] - other.maps[k] for k in self.source.keys()})

    def differential(self) -> ModuleMorphism:
        maps = {k: differential_of_map(self.graded_map(k)).matrix for k in self.source.keys()}
        return ModuleMorphism(self.source, self.target, self.degree + 1, maps)

    @property
    def is_closed(self) -> bool:
        return all(self.graded_map(k).is_closed for k in self.source.keys())

    @property
    def is_zero(self) -> bool:
        return all(self.maps[k].is_zero for k in self.source.keys())

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "maps": {f"{b}|{a}": self.maps[(b, a)].to_strings() for b, a in self.source.keys()},
        }


def identity_morphism(t: Bimodule) -> ModuleMorphism:
    return ModuleMorphism(t, t, 0, {k: Matrix.identity(t.field, t.dim(*k)) for k in t.keys()})


def compose_morphisms(psi: ModuleMorphism, phi: ModuleMorphism) -> ModuleMorphism:
    return psi @ phi


def morphism_differential(phi: ModuleMorphism) -> ModuleMorphism:
    return phi.differential()


def validate_morphism(phi: ModuleMorphism) -> Report:
    """Degrees plus the right rule ``φ(xf) = φ(x)f`` and the signed left rule."""
    s, t = phi.source, phi.target
    if s.left != t.left or s.right != t.right:
        return Report.failed("base", "source and target act over different categories")
    for key in s.keys():
        try:
            phi.graded_map(key)
        except (ValidationError, DimensionMismatchError, KeyError) as exc:
            return Report.failed("morphism_degree", str(exc), key=key)
    fld, p = s.field, phi.degree
    for a in s.left.objects:
        for b2, b in s.right.pairs():
            for j in range(s.right.dim(b2, b)):
                f = s.right.basis(b2, b, j)
                lhs = phi.maps[(b2, a)] @ s.right_matrix(b2, b, a, f)
                rhs = t.right_matrix(b2, b, a, f) @ phi.maps[(b, a)]
                if lhs != rhs:
                    return Report.failed("right_naturality", "φ(x f) ≠ φ(x) f", objects=(b2, b, a), index=j)
    for b in s.right.objects:
        for a, a2 in s.left.pairs():
            for i in range(s.left.dim(a, a2)):
                g = s.left.basis(a, a2, i)
                lhs = phi.maps[(b, a2)] @ s.left_matrix(a, a2, b, g)
                rhs = (t.left_matrix(a, a2, b, g) @ phi.maps[(b, a)]).scale(
                    fld.sign(p * s.left.degree(a, a2, i)))
                if lhs != rhs:
                    return Report.failed("left_naturality", "φ(g x) ≠ ±g φ(x)", objects=(a, a2, b), index=i)
    return Report.passed("module_morphism")


@dataclass(frozen=True)
class ModuleIso:
    """Mutually inverse closed degree-0 module morphisms."""

    forward: ModuleMorphism
    backward: ModuleMorphism

    def verify(self) -> bool:
        f, g = self.forward, self.backward
        if f.degree or g.degree or not f.is_closed or not g.is_closed:
            return False
        if not validate_morphism(f) or not validate_morphism(g):
            return False
        fld = f.field
        for k in f.source.keys():
            if g.maps[k] @ f.maps[k] != Matrix.identity(fld, f.source.dim(*k)):
                return False
            if f.maps[k] @ g.maps[k] != Matrix.identity(fld, f.target.dim(*k)):
                return False
        return True

    def to_dict(self) -> dict:
        return {"forward": self.forward.to_dict(), "backward": self.backward.to_dict(), "verified": self.verify()}


def module_iso(phi: ModuleMorphism) -> ModuleIso | None:
    """Invert *phi* componentwise; ``None`` when some component is singular."""
    maps = {}
    for k in phi.source.keys():
        inv = inverse(phi.maps[k])
        if inv is None:
            return None
        maps[k] = inv
    return ModuleIso(phi, ModuleMorphism(phi.target, phi.source, -phi.degree, maps))


def is_acyclic_module(t: Bimodule) -> bool:
    return all(is_acyclic(t[k]) for k in t.keys())


def is_qis_morphism(phi: ModuleMorphism) -> bool:
    """Objectwise quasi-isomorphism; *phi* must be closed of degree 0."""
    return all(is_quasi_iso(phi.graded_map(k)) for k in phi.source.keys())


# ============================================================
# REPRESENTABLES AND FUNCTOR-INDUCED BIMODULES
# ============================================================

def representable_right(cat: DgCategory, a: str) -> RightModule:
    """``h_A = hom(-, A)`` with ``x f = x ∘ f``."""
    cat.check_object(a)
    comps = {b: cat.hom[(b, a)] for b in cat.objects}
    action = {(b2, b): cat.comp[(b2, b, a)] for b2, b in cat.pairs()}
    return right_module(cat, comps, action, f"h_{a}", hprojective=True)


def representable_left(cat: DgCategory, a: str) -> LeftModule:
    """``h^A = hom(A, -)`` with ``g x = g ∘ x``."""
    cat.check_object(a)
    comps = {b: cat.hom[(a, b)] for b in cat.objects}
    action = {(b, b2): cat.comp[(a, b, b2)] for b, b2 in cat.pairs()}
    return left_module(cat, comps, action, f"h^{a}", hprojective=True)


def hFG(f: DgFunctor, g: DgFunctor, name: str = "") -> Bimodule:
    """``h^F_G(C, D) = 𝐀(F C, G D)`` for ``F: 𝐂 → 𝐀`` and ``G: 𝐃 → 𝐀``.

    The result is a 𝐃-𝐂 bimodule with ``g x = G(g) ∘ x`` and ``x f = x ∘ F(f)``.
    """
    target = f.target
    if g.target != target:
        raise ValidationError("functor_target", "functors have different targets")
    fld = target.field
    dcat, ccat = g.source, f.source
    comp, lact, ract = {}, {}, {}
    for c in ccat.objects:
        for d in dcat.objects:
            comp[(c, d)] = target.hom[(f(c), g(d))]
    for c in ccat.objects:
        for d, d2 in dcat.pairs():
            n = comp[(c, d)].dim
            lact[(d, d2, c)] = target.comp[(f(c), g(d), g(d2))] @ kron(g.maps[(d, d2)], Matrix.identity(fld, n))
    for d in dcat.objects:
        for c2, c in ccat.pairs():
            n = comp[(c, d)].dim
            ract[(c2, c, d)] = target.comp[(f(c2), f(c), g(d))] @ kron(Matrix.identity(fld, n), f.maps[(c2, c)])
    return make_bimodule(dcat, ccat, comp, lact, ract, name or f"h^{f.name}_{g.name}")


def diagonal(cat: DgCategory) -> Bimodule:
    """``h_𝐀(B, A) = 𝐀(B, A)`` acted on by composition on both sides."""
    one = identity_functor(cat)
    return _flag(hFG(one, one, f"h_{cat.name}"), left=True, right=True)


def from_functor(fun: DgFunctor) -> tuple[Bimodule, Bimodule]:
    """``(h_F, h^F)``: ``h_F(B, A) = 𝐁(B, F A)`` and ``h^F(A, B) = 𝐁(F A, B)``."""
    validate_functor(fun).raise_for_failure()
    one = identity_functor(fun.target)
    lower = _flag(hFG(one, fun, f"h_{fun.name}"), right=True)
    upper = _flag(hFG(fun, one, f"h^{fun.name}"), left=True)
    return lower, upper


def _flag(t: Bimodule, left: bool = False, right: bool = False) -> Bimodule:
    return type(t)(t.left, t.right, t.component, t.lact, t.ract, t.name,
                   t.left_hprojective or left, t.right_hprojective or right)


def with_name(t: Bimodule, name: str) -> Bimodule:
    return type(t)(t.left, t.right, t.component, t.lact, t.ract, name,
                   t.left_hprojective, t.right_hprojective)


def restrict(t: Bimodule, along_left: DgFunctor | None = None,
             along_right: DgFunctor | None = None) -> Bimodule:
    """``T(G b', F a')`` for ``F: 𝐀' → 𝐀`` on the left and ``G: 𝐁' → 𝐁`` on the right."""
    fld = t.field
    fl = along_left or identity_functor(t.left)
    gr = along_right or identity_functor(t.right)
    comp, lact, ract = {}, {}, {}
    for b in gr.source.objects:
        for a in fl.source.objects:
            comp[(b, a)] = t[(gr(b), fl(a))]
    for b in gr.source.objects:
        for a, a2 in fl.source.pairs():
            n = comp[(b, a)].dim
            lact[(a, a2, b)] = t.lact[(fl(a), fl(a2), gr(b))] @ kron(fl.maps[(a, a2)], Matrix.identity(fld, n))
    for a in fl.source.objects:
        for b2, b in gr.source.pairs():
            n = comp[(b, a)].dim
            ract[(b2, b, a)] = t.ract[(gr(b2), gr(b), fl(a))] @ kron(Matrix.identity(fld, n), gr.maps[(b2, b)])
    return make_bimodule(fl.source, gr.source, comp, lact, ract, t.name)


def component(t: Bimodule, a: str) -> RightModule:
    """``T_A``: the right module ``B ↦ T(B, A)``."""
    t.left.check_object(a)
    return right_module(t.right, {b: t[(b, a)] for b in t.right.objects},
                        {(b2, b): t.ract[(b2, b, a)] for b2, b in t.right.pairs()},
                        f"{t.name}_{a}", hprojective=t.right_hprojective)


def co_component(t: Bimodule, b: str) -> LeftModule:
    """``T^B``: the left module ``A ↦ T(B, A)``."""
    t.right.check_object(b)
    return left_module(t.left, {a: t[(b, a)] for a in t.left.objects},
                       {(a, a2): t.lact[(a, a2, b)] for a, a2 in t.left.pairs()},
                       f"{t.name}^{b}", hprojective=t.left_hprojective)


# ============================================================
# NOTATION CONVERSION
# ============================================================

def _twist_right(t: Bimodule, ract: Mapping[tuple[str, str, str], Matrix]) -> dict:
    fld = t.field
    out = {}
    for (b2, b, a), m in ract.items():
        nf = t.right.dim(b2, b)
        degs_x, degs_f = t[(b, a)].degrees, t.right.hom[(b2, b)].degrees
        entries = {}
        for r, col, v in m.nonzero_entries():
            i, j = divmod(col, nf)
            entries[(r, col)] = fld.sign(degs_x[i] * degs_f[j]) * v
        out[(b2, b, a)] = Matrix.from_entries(fld, m.nrows, m.ncols, entries)
    return out


def action_to_functor(t: Bimodule) -> dict[tuple[str, str, str], Matrix]:
    """Right action in functor notation: column ``x_i ⊗ f_j`` holds ``T(f_j)(x_i)``."""
    return _twist_right(t, t.ract)


def functor_to_action(t: Bimodule, functor_maps: Mapping[tuple[str, str, str], Matrix]) -> Bimodule:
    """Rebuild *t* with its right action given in functor notation."""
    return make_bimodule(t.left, t.right, t.component, t.lact, _twist_right(t, functor_maps), t.name,
                         t.left_hprojective, t.right_hprojective)


# ============================================================
# SUMS, SHIFTS, CONES, TENSORS
# ============================================================

def direct_sum(*modules: Bimodule) -> Bimodule:
    """Blockwise sum; summands keep their order."""
    first = modules[0]
    fld = first.field
    comp, lact, ract = {}, {}, {}
    for key in first.keys():
        cs = [m[key] for m in modules]
        comp[key] = Complex(fld, tuple(d for c in cs for d in c.degrees), block_diagonal(fld, [c.d for c in cs]))
    for b in first.right.objects:
        for a, a2 in first.left.pairs():
            lact[(a, a2, b)] = _sum_action(
                fld, [m.lact[(a, a2, b)] for m in modules], [m.dim(b, a) for m in modules],
                first.left.dim(a, a2), [m.dim(b, a2) for m in modules], acts_left=True)
    for a in first.left.objects:
        for b2, b in first.right.pairs():
            ract[(b2, b, a)] = _sum_action(
                fld, [m.ract[(b2, b, a)] for m in modules], [m.dim(b, a) for m in modules],
                first.right.dim(b2, b), [m.dim(b2, a) for m in modules], acts_left=False)
    name = "⊕".join(m.name for m in modules)
    return make_bimodule(first.left, first.right, comp, lact, ract, name,
                         all(m.left_hprojective for m in modules), all(m.right_hprojective for m in modules))


def _sum_action(fld: Field, blocks: list[Matrix], src_dims: list[int], hom_dim: int,
                dst_dims: list[int], acts_left: bool) -> Matrix:
    total_src, total_dst = sum(src_dims), sum(dst_dims)
    entries = {}
    s0 = d0 = 0
    for m, ns, nd in zip(blocks, src_dims, dst_dims):
        for r, col, v in m.nonzero_entries():
            if acts_left:
                i, j = divmod(col, ns)
                entries[(d0 + r, i * total_src + s0 + j)] = v
            else:
                j, i = divmod(col, hom_dim)
                entries[(d0 + r, (s0 + j) * hom_dim + i)] = v
        s0 += ns
        d0 += nd
    return Matrix.from_entries(fld, total_dst, hom_dim * total_src, entries)


def _signed_left(t: Bimodule, a: str, a2: str, b: str, sign_of) -> Matrix:
    """``lact[(a, a2, b)]`` with column ``g_i x_j`` multiplied by ``sign_of(|g_i|, j)``."""
    m = t.lact[(a, a2, b)]
    n = t.dim(b, a)
    entries = {}
    for r, col, v in m.nonzero_entries():
        i, j = divmod(col, n)
        entries[(r, col)] = sign_of(t.left.degree(a, a2, i), j) * v
    return Matrix.from_entries(t.field, m.nrows, m.ncols, entries)


def shift_module(t: Bimodule, n: int) -> Bimodule:
    """``T[n]``: components shifted, left action twisted by ``(-1)^{n|g|}``."""
    fld = t.field
    comp = {k: shift(c, n) for k, c in t.component.items()}
    lact = {(a, a2, b): _signed_left(t, a, a2, b, lambda dg, _j: fld.sign(n * dg))
            for b in t.right.objects for a, a2 in t.left.pairs()}
    return make_bimodule(t.left, t.right, comp, lact, t.ract, f"{t.name}[{n}]",
                         t.left_hprojective, t.right_hprojective)


def module_cone(phi: ModuleMorphism) -> Bimodule:
    """``cone(φ) = S[1] ⊕ T`` objectwise with ``d(s, t) = (-ds, φ s + dt)``."""
    if phi.degree != 0 or not phi.is_closed:
        raise ValidationError("cone", "cone needs a closed degree-0 morphism")
    s, t = phi.source, phi.target
    shifted = shift_module(s, 1)
    total = direct_sum(shifted, t)
    comp = {k: cone(phi.graded_map(k)) for k in s.keys()}
    return make_bimodule(s.left, s.right, comp, total.lact, total.ract, f"cone({s.name}→{t.name})")


def external_tensor(m: RightModule, n: LeftModule) -> Bimodule:
    """``(M ⊠ N)(B, A) = M(B) ⊗ N(A)`` over ``(n.base, m.base)``.

    ``g (y ⊗ z) = (-1)^{|g||y|} y ⊗ g z`` and ``(y ⊗ z) f = (-1)^{|z||f|} y f ⊗ z``.
    """
    fld = m.field
    lcat, rcat = n.base, m.base
    comp, lact, ract = {}, {}, {}
    for b in rcat.objects:
        for a in lcat.objects:
            comp[(b, a)] = tensor(m.at(b), n.at(a))
    for b in rcat.objects:
        ys = m.at(b)
        for a, a2 in lcat.pairs():
            nz, nz2 = n.at(a).dim, n.at(a2).dim
            src = ys.dim * nz
            act = n.lact[(a, a2, UNIT_OBJECT)]
            entries = {}
            for r, col, v in act.nonzero_entries():
                i, k = divmod(col, nz)
                sign_g = lcat.degree(a, a2, i)
                for j in range(ys.dim):
                    entries[(j * nz2 + r, i * src + j * nz + k)] = fld.sign(sign_g * ys.degrees[j]) * v
            lact[(a, a2, b)] = Matrix.from_entries(fld, ys.dim * nz2, lcat.dim(a, a2) * src, entries)
    for a in lcat.objects:
        zs = n.at(a)
        for b2, b in rcat.pairs():
            ny = m.at(b).dim
            nf = rcat.dim(b2, b)
            act = m.ract[(b2, b, UNIT_OBJECT)]
            entries = {}
            for r, col, v in act.nonzero_entries():
                j, i = divmod(col, nf)
                dg_f = rcat.degree(b2, b, i)
                for k in range(zs.dim):
                    entries[(r * zs.dim + k, (j * zs.dim + k) * nf + i)] = fld.sign(dg_f * zs.degrees[k]) * v
            ract[(b2, b, a)] = Matrix.from_entries(fld, m.at(b2).dim * zs.dim, ny * zs.dim * nf, entries)
    return make_bimodule(lcat, rcat, comp, lact, ract, f"{m.name}⊠{n.name}")


# ============================================================
# HOM BIMODULES AND NATURAL TRANSFORMATIONS
# ============================================================

def stack_bilinear(fld: Field, blocks: Sequence[Matrix], src_dim: int, dst_dim: int,
                   on_right: bool = False) -> Matrix:
    """Stack per-basis operators ``X ↦ op_i(X)`` into one bilinear action matrix.

    Columns are ``i * src_dim + j`` for a left action and ``j * len(blocks) + i``
    for a right one, matching the ``lact``/``ract`` layouts.
    """
    entries = {}
    width = len(blocks)
    for i, op in enumerate(blocks):
        for r, c, v in op.nonzero_entries():
            entries[(r, c * width + i if on_right else i * src_dim + c)] = v
    return Matrix.from_entries(fld, dst_dim, len(blocks) * src_dim, entries)


def _parity(fld: Field, c: Complex, exponent: int) -> Matrix:
    return diagonal_matrix(fld, [fld.sign(exponent * k) for k in c.degrees])


def hom_bimodule(m: Bimodule, n: Bimodule) -> Bimodule:
    """The 𝐀-𝐀 bimodule whose end is ``Nat(M, N)``.

    For right modules ``H(V, U) = Hom(M(U), N(V))`` with
    ``g X = (-1)^{|g||X|} X ∘ M(g)`` and ``X f = ρ^N_f X σ^{|f|}``.
    For left modules ``H(B, A) = Hom(M(B), N(A))`` with ``g X = λ^N_g X``
    and ``X f = X λ^M_f``.
    """
    fld = m.field
    if isinstance(m, RightModule) and isinstance(n, RightModule):
        cat = m.base
        comp = {(v, u): internal_hom(m.at(u), n.at(v)) for v in cat.objects for u in cat.objects}
        lact, ract = {}, {}
        for v in cat.objects:
            for u, u2 in cat.pairs():
                src, dst = comp[(v, u)], comp[(v, u2)]
                ops = []
                for i in range(cat.dim(u, u2)):
                    g = cat.basis(u, u2, i)
                    dg = cat.degree(u, u2, i)
                    tau = _parity(fld, n.at(v), dg).scale(fld.sign(dg))
                    ops.append(hom_operator(src, dst, left=tau, right=m.action_matrix(u2, u, g))[0])
                lact[(u, u2, v)] = stack_bilinear(fld, ops, src.dim, dst.dim)
        for u in cat.objects:
            for v2, v in cat.pairs():
                src, dst = comp[(v, u)], comp[(v2, u)]
                ops = []
                for i in range(cat.dim(v2, v)):
                    f = cat.basis(v2, v, i)
                    sigma = _parity(fld, m.at(u), cat.degree(v2, v, i))
                    ops.append(hom_operator(src, dst, left=n.action_matrix(v2, v, f), right=sigma)[0])
                ract[(v2, v, u)] = stack_bilinear(fld, ops, src.dim, dst.dim, on_right=True)
        return make_bimodule(cat, cat, comp, lact, ract, f"Hom({m.name},{n.name})")
    if isinstance(m, LeftModule) and isinstance(n, LeftModule):
        cat = m.base
        comp = {(b, a): internal_hom(m.at(b), n.at(a)) for b in cat.objects for a in cat.objects}
        lact, ract = {}, {}
        for b in cat.objects:
            for a, a2 in cat.pairs():
                src, dst = comp[(b, a)], comp[(b, a2)]
                ops = [hom_operator(src, dst, left=n.action_matrix(a, a2, cat.basis(a, a2, i)))[0]
                       for i in range(cat.dim(a, a2))]
                lact[(a, a2, b)] = stack_bilinear(fld, ops, src.dim, dst.dim)
        for a in cat.objects:
            for b2, b in cat.pairs():
                src, dst = comp[(b, a)], comp[(b2, a)]
                ops = [hom_operator(src, dst, right=m.action_matrix(b2, b, cat.basis(b2, b, i)))[0]
                       for i in range(cat.dim(b2, b))]
                ract[(b2, b, a)] = stack_bilinear(fld, ops, src.dim, dst.dim, on_right=True)
        return make_bimodule(cat, cat, comp, lact, ract, f"Hom({m.name},{n.name})")
    raise ValidationError("hom_bimodule", "both arguments must be right modules or both left modules")


@dataclass(frozen=True)
class NatComplex:
    """``Nat(S, T)`` as the kernel of the naturality constraints inside ``∏ Hom(S(k), T(k))``."""

    source: Bimodule
    target: Bimodule
    keys: tuple[Key, ...]
    homs: Mapping[Key, HomComplex]
    product: Complex
    offsets: Mapping[Key, int]
    sub: Subcomplex

    @property
    def complex(self) -> Complex:
        return self.sub.complex

    @property
    def dim(self) -> int:
        return self.sub.complex.dim

    def evaluation(self, key: Key) -> Matrix:
        """Matrix sending Nat coordinates to the coordinates of the component at *key*."""
        start = self.offsets[key]
        rows = range(start, start + self.homs[key].dim)
        return self.sub.inclusion.submatrix(rows, range(self.sub.inclusion.ncols))

    def product_vector(self, vec: Sequence) -> tuple:
        return self.sub.inclusion.apply(vec)

    def components(self, vec: Sequence) -> dict[Key, Matrix]:
        full = self.product_vector(vec)
        out = {}
        for key in self.keys:
            start = self.offsets[key]
            out[key] = self.homs[key].matrix_of(full[start:start + self.homs[key].dim])
        return out

    def morphism(self, vec: Sequence, degree: int | None = None) -> ModuleMorphism:
        if degree is None:
            support = {self.complex.degrees[k] for k, a in enumerate(vec) if a}
            if len(support) > 1:
                raise ValidationError("degree", "vector is not homogeneous")
            degree = support.pop() if support else 0
        return ModuleMorphism(self.source, self.target, degree, self.components(vec))

    def coordinates(self, phi: ModuleMorphism) -> tuple:
        full = tuple(a for key in self.keys for a in self.homs[key].vector_of(phi.maps[key]))
        coords = self.sub.retraction.apply(full)
        if self.sub.inclusion.apply(coords) != full:
            raise ValidationError("naturality", "morphism is not natural")
        return coords


def nat_complex(s: Bimodule, t: Bimodule) -> NatComplex:
    """Solve the naturality constraints over the generators of both categories."""
    if s.left != t.left or s.right != t.right:
        raise ValidationError("base", "modules act over different categories")
    fld = s.field
    keys = tuple(s.keys())
    homs = {k: internal_hom(s[k], t[k]) for k in keys}
    product, offs = complex_sum(fld, [homs[k] for k in keys])
    offsets = dict(zip(keys, offs))
    entries: dict[tuple[int, int], object] = {}
    row = 0

    def add_block(mat: Matrix, key: Key, r0: int, sign_of=None) -> None:
        c0 = offsets[key]
        src_degrees = homs[key].degrees
        for r, c, v in mat.nonzero_entries():
            if sign_of is not None:
                v = sign_of(src_degrees[c]) * v
            _accumulate(entries, (r0 + r, c0 + c), v)

    rcat, lcat = s.right, s.left
    for a in lcat.objects:
        for b2, b in rcat.pairs():
            for i in rcat.generators(b2, b):
                f = rcat.basis(b2, b, i)
                dst = internal_hom(s[(b, a)], t[(b2, a)])
                add_block(hom_operator(homs[(b2, a)], dst, right=s.right_matrix(b2, b, a, f))[0], (b2, a), row)
                add_block(-hom_operator(homs[(b, a)], dst, left=t.right_matrix(b2, b, a, f))[0], (b, a), row)
                row += dst.dim
    for b in rcat.objects:
        for a, a2 in lcat.pairs():
            for i in lcat.generators(a, a2):
                g = lcat.basis(a, a2, i)
                dg = lcat.degree(a, a2, i)
                dst = internal_hom(s[(b, a)], t[(b, a2)])
                add_block(hom_operator(homs[(b, a2)], dst, right=s.left_matrix(a, a2, b, g))[0], (b, a2), row)
                add_block(-hom_operator(homs[(b, a)], dst, left=t.left_matrix(a, a2, b, g))[0], (b, a), row,
                          sign_of=lambda p, dg=dg: fld.sign(p * dg))
                row += dst.dim
    constraints = Matrix.from_entries(fld, row, product.dim, entries)
    sub = graded_kernel(product, constraints)
    logger.debug("Nat(%s, %s): %d constraints, dims %s", s.name, t.name, row, sub.complex.dims)
    return NatComplex(s, t, keys, homs, product, offsets, sub)


# ============================================================
# YONEDA
# ============================================================

def _module_key(module: Bimodule, a: str) -> Key:
    if isinstance(module, RightModule):
        return (a, UNIT_OBJECT)
    if isinstance(module, LeftModule):
        return (UNIT_OBJECT, a)
    raise ValidationError("yoneda", "Yoneda needs a right or left module")


def representable_like(module: Bimodule, a: str) -> Bimodule:
    """``h_A`` for a right module, ``h^A`` for a left one."""
    if isinstance(module, RightModule):
        return representable_right(module.base, a)
    _module_key(module, a)
    return representable_left(module.base, a)


def yoneda_family(module: Bimodule, a: str, x: Sequence, degree: int) -> ModuleMorphism:
    """The morphism out of the representable determined by ``x ∈ M(A)``.

    ``f ↦ x f`` for a right module and ``g ↦ (-1)^{|x||g|} g x`` for a left one.
    """
    fld = module.field
    cat = module.base
    rep = representable_like(module, a)
    maps = {}
    for b in cat.objects:
        if isinstance(module, RightModule):
            maps[(b, UNIT_OBJECT)] = bilinear_left(module.ract[(b, a, UNIT_OBJECT)], x, cat.dim(b, a))
        else:
            signs = _parity(fld, cat.hom[(a, b)], degree)
            maps[(UNIT_OBJECT, b)] = bilinear_right(module.lact[(a, b, UNIT_OBJECT)], x, cat.dim(a, b)) @ signs
    return ModuleMorphism(rep, module, degree, maps)


def yoneda_iso(a: str, module: Bimodule) -> IsoWitness:
    """``Nat(h_A, M) ≅ M(A)``; forward evaluates at ``1_A``, backward is :func:`yoneda_family`."""
    fld = module.field
    key = _module_key(module, a)
    rep = representable_like(module, a)
    nat = nat_complex(rep, module)
    ident = module.base.ident[a]
    target = module.at(a)
    forward = Matrix.from_columns(
        fld, target.dim, [nat.components(col)[key].apply(ident) for col in nat.sub.inclusion.columns()])
    backward = Matrix.from_columns(fld, nat.dim, [
        nat.coordinates(yoneda_family(module, a, unit_vector(fld, target.dim, j), target.degrees[j]))
        for j in range(target.dim)
    ])
    return IsoWitness(GradedMap(nat.complex, target, 0, forward), GradedMap(target, nat.complex, 0, backward))


def nat_operator(src: NatComplex, dst: NatComplex, left: Mapping[Key, Matrix] | None = None,
                 right: Mapping[Key, Matrix] | None = None, sign_exponent: int = 0) -> Matrix:
    """Nat-coordinate matrix of ``φ ↦ (-1)^{e|φ|} (left_k φ_k right_k)_k``."""
    fld = src.source.field
    blocks = []
    for k_src, k_dst in zip(src.keys, dst.keys):
        blocks.append(hom_operator(src.homs[k_src], dst.homs[k_dst],
                                   left=None if left is None else left[k_src],
                                   right=None if right is None else right[k_src])[0])
    total = block_diagonal(fld, blocks)
    moved = total @ src.sub.inclusion @ _parity(fld, src.complex, sign_exponent)
    m = dst.sub.retraction @ moved
    if dst.sub.inclusion @ m != moved:
        raise ValidationError("naturality", "induced family is not natural")
    return m
