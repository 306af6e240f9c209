"""Ends and coends of complex-valued bimodules.

For an 𝐀-𝐀 bimodule ``F`` the end is the subcomplex of ``∏_A F(A, A)``
cut out by ``f φ_A = (-1)^{|f||φ|} φ_{A'} f`` over the non-identity basis
morphisms ``f: A → A'``.  The coend is the quotient of ``⊕_A F(A, A)`` by
the images of ``f x - (-1)^{|f||x|} x f``.

Composition of bimodules, the co-Yoneda reduction and the Fubini
interchange are all built from these two constructions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .complexes import (
    Complex, GradedMap, HomComplex, IsoWitness, Quotient, Subcomplex, _accumulate,
    graded_kernel, hom_operator, internal_hom, iso_witness, quotient_complex,
)
from .complexes import direct_sum as complex_sum
from .dgcat import DgCategory, DgFunctor, pair_object, swap_functor, tensor_dgcat
from .enums import Side
from .errors import ValidationError
from .exact_linalg import (
    Field, Matrix, block_diagonal, kernel_basis, kron, kron_vectors,
    left_inverse, rank, unit_vector,
)
from .dgmod import (
    Bimodule, ModuleIso, ModuleMorphism, RightModule, _module_key, _parity, co_component,
    component, diagonal, external_tensor, hom_bimodule, make_bimodule, module_iso,
    representable_like, restrict, stack_bilinear, validate_module, yoneda_family,
)
from .models import Report

logger = logging.getLogger(__name__)


def _require_square(f: Bimodule) -> DgCategory:
    if f.left != f.right:
        raise ValidationError("base", "(co)ends need a bimodule over a single category")
    return f.left


def _product(f: Bimodule, cat: DgCategory) -> tuple[Complex, dict[str, int]]:
    total, offs = complex_sum(f.field, [f[(a, a)] for a in cat.objects])
    return total, dict(zip(cat.objects, offs))


def _place(entries: dict, mat: Matrix, r0: int, c0: int, sign_of: Callable | None = None,
           col_degrees: Sequence[int] = ()) -> None:
    for r, c, v in mat.nonzero_entries():
        if sign_of is not None:
            v = sign_of(col_degrees[c]) * v
        _accumulate(entries, (r0 + r, c0 + c), v)


# ============================================================
# ENDS
# ============================================================

@dataclass(frozen=True)
class EndResult:
    """``∫_A F(A, A)`` embedded in the product of the diagonal components."""

    functor: Bimodule
    objects: tuple[str, ...]
    product: Complex
    offsets: Mapping[str, int]
    sub: Subcomplex

    @property
    def total(self) -> Complex:
        return self.sub.complex

    @property
    def dim(self) -> int:
        return self.sub.complex.dim

    def block(self, a: str) -> range:
        start = self.offsets[a]
        return range(start, start + self.functor.dim(a, a))

    def projection(self, a: str) -> GradedMap:
        """``ε_A``: the end onto ``F(A, A)``."""
        m = self.sub.inclusion.submatrix(self.block(a), range(self.dim))
        return GradedMap(self.total, self.functor[(a, a)], 0, m)

    def family(self, vec: Sequence) -> dict[str, tuple]:
        full = self.sub.inclusion.apply(vec)
        return {a: tuple(full[i] for i in self.block(a)) for a in self.objects}

    def lift(self, family: Mapping[str, Sequence]) -> tuple:
        """End coordinates of a family; raises when the wedge condition fails."""
        full = tuple(x for a in self.objects for x in family[a])
        coords = self.sub.retraction.apply(full)
        if self.sub.inclusion.apply(coords) != full:
            raise ValidationError("wedge", "family does not satisfy the wedge condition")
        return coords

    def factor(self, maps: Mapping[str, GradedMap]) -> GradedMap:
        """The unique map into the end through which a wedge of *maps* factors."""
        first = maps[self.objects[0]]
        stacked = first.matrix.vstack(*(maps[a].matrix for a in self.objects[1:]))
        cols = [self.lift({a: [col[i] for i in self.block(a)] for a in self.objects})
                for col in stacked.columns()]
        return GradedMap(first.source, self.total, first.degree, Matrix.from_columns(self.functor.field, self.dim, cols))

    def verify_wedge(self) -> bool:
        f, cat = self.functor, self.functor.left
        for a, a2 in cat.pairs():
            for i in cat.generators(a, a2):
                h = cat.basis(a, a2, i)
                lhs = f.left_matrix(a, a2, a, h) @ self.projection(a).matrix
                rhs = f.right_matrix(a, a2, a2, h) @ self.projection(a2).matrix
                dh = cat.degree(a, a2, i)
                rhs = rhs @ _parity(f.field, self.total, dh)
                if lhs != rhs:
                    return False
        return True

    def to_dict(self) -> dict:
        return {"dims": self.total.dims, "objects": list(self.objects)}


def end_constraints(f: Bimodule, cat: DgCategory, offsets: Mapping[str, int], width: int,
                    all_morphisms: bool = False) -> Matrix:
    """Rows ``f φ_A - (-1)^{|f||φ|} φ_{A'} f``, one block per basis morphism ``f: A → A'``."""
    fld = f.field
    entries: dict = {}
    row = 0
    for a, a2 in cat.pairs():
        indices = range(cat.dim(a, a2)) if all_morphisms else cat.generators(a, a2)
        for i in indices:
            h = cat.basis(a, a2, i)
            dh = cat.degree(a, a2, i)
            _place(entries, f.left_matrix(a, a2, a, h), row, offsets[a])
            _place(entries, -f.right_matrix(a, a2, a2, h), row, offsets[a2],
                   sign_of=lambda p, dh=dh: fld.sign(p * dh), col_degrees=f[(a2, a2)].degrees)
            row += f.dim(a, a2)
    return Matrix.from_entries(fld, row, width, entries)


def end_bimodule(f: Bimodule) -> EndResult:
    cat = _require_square(f)
    product, offsets = _product(f, cat)
    sub = graded_kernel(product, end_constraints(f, cat, offsets, product.dim))
    logger.debug("end of %s: dims %s", f.name, sub.complex.dims)
    return EndResult(f, cat.objects, product, offsets, sub)


def end_oracle(f: Bimodule) -> bool:
    """Recompute the end over every basis morphism, identities included, and compare."""
    cat = _require_square(f)
    product, offsets = _product(f, cat)
    full = end_constraints(f, cat, offsets, product.dim, all_morphisms=True)
    brute = kernel_basis(full)
    fast = end_bimodule(f).sub.inclusion
    if brute.ncols != fast.ncols:
        return False
    both = brute.hstack(fast) if brute.ncols else brute
    return rank(both) == brute.ncols


def end_map(phi: ModuleMorphism, source: EndResult | None = None,
            target: EndResult | None = None) -> GradedMap:
    """``∫_A φ``: the map between ends commuting with every projection."""
    source = source or end_bimodule(phi.source)
    target = target or end_bimodule(phi.target)
    fld = phi.field
    blocks = block_diagonal(fld, [phi.maps[(a, a)] for a in source.objects])
    m = target.sub.retraction @ blocks @ source.sub.inclusion
    if target.sub.inclusion @ m != blocks @ source.sub.inclusion:
        raise ValidationError("end_map", "morphism does not preserve wedges")
    return GradedMap(source.total, target.total, phi.degree, m)


# ============================================================
# COENDS
# ============================================================

@dataclass(frozen=True)
class CoendResult:
    """``∫^A F(A, A)`` as a quotient of the sum of the diagonal components."""

    functor: Bimodule
    objects: tuple[str, ...]
    product: Complex
    offsets: Mapping[str, int]
    quotient: Quotient

    @property
    def total(self) -> Complex:
        return self.quotient.complex

    @property
    def dim(self) -> int:
        return self.quotient.complex.dim

    def block(self, a: str) -> range:
        start = self.offsets[a]
        return range(start, start + self.functor.dim(a, a))

    def injection(self, a: str) -> GradedMap:
        """``η_A``: ``F(A, A)`` into the coend."""
        m = self.quotient.projection.submatrix(range(self.dim), self.block(a))
        return GradedMap(self.functor[(a, a)], self.total, 0, m)

    def representative(self, vec: Sequence) -> dict[str, tuple]:
        full = self.quotient.section.apply(vec)
        return {a: tuple(full[i] for i in self.block(a)) for a in self.objects}

    def verify_cowedge(self) -> bool:
        f, cat = self.functor, self.functor.left
        for a, a2 in cat.pairs():
            for i in cat.generators(a2, a):
                h = cat.basis(a2, a, i)
                dh = cat.degree(a2, a, i)
                src = f[(a, a2)]
                lhs = self.injection(a).matrix @ f.left_matrix(a2, a, a, h)
                rhs = self.injection(a2).matrix @ f.right_matrix(a2, a, a2, h) @ _parity(f.field, src, dh)
                if lhs != rhs:
                    return False
        return True

    def to_dict(self) -> dict:
        return {"dims": self.total.dims, "objects": list(self.objects)}


def coend_relations(f: Bimodule, cat: DgCategory, offsets: Mapping[str, int], height: int,
                    all_morphisms: bool = False) -> Matrix:
    """Columns ``f x - (-1)^{|f||x|} x f`` for ``x ∈ F(A1, A2)`` and ``f: A2 → A1``."""
    fld = f.field
    entries: dict = {}
    col = 0
    for a1, a2 in cat.pairs():
        src = f[(a1, a2)]
        indices = range(cat.dim(a2, a1)) if all_morphisms else cat.generators(a2, a1)
        for i in indices:
            h = cat.basis(a2, a1, i)
            dh = cat.degree(a2, a1, i)
            _place(entries, f.left_matrix(a2, a1, a1, h), offsets[a1], col)
            _place(entries, -f.right_matrix(a2, a1, a2, h), offsets[a2], col,
                   sign_of=lambda p, dh=dh: fld.sign(p * dh), col_degrees=src.degrees)
            col += src.dim
    return Matrix.from_entries(fld, height, col, entries)


def coend_bimodule(f: Bimodule) -> CoendResult:
    cat = _require_square(f)
    product, offsets = _product(f, cat)
    quotient = quotient_complex(product, coend_relations(f, cat, offsets, product.dim))
    logger.debug("coend of %s: dims %s", f.name, quotient.complex.dims)
    return CoendResult(f, cat.objects, product, offsets, quotient)


def coend_oracle(f: Bimodule) -> bool:
    """Recompute the coend relations over every basis morphism and compare spans."""
    cat = _require_square(f)
    product, offsets = _product(f, cat)
    brute = coend_relations(f, cat, offsets, product.dim, all_morphisms=True)
    fast = coend_relations(f, cat, offsets, product.dim)
    if not brute.ncols or not fast.ncols:
        return brute.is_zero and fast.is_zero
    return rank(brute) == rank(fast) == rank(brute.hstack(fast))


def coend_map(phi: ModuleMorphism, source: CoendResult | None = None,
              target: CoendResult | None = None) -> GradedMap:
    """``∫^A φ``: the map between coends commuting with every injection."""
    source = source or coend_bimodule(phi.source)
    target = target or coend_bimodule(phi.target)
    blocks = block_diagonal(phi.field, [phi.maps[(a, a)] for a in source.objects])
    m = target.quotient.projection @ blocks @ source.quotient.section
    if m @ source.quotient.projection != target.quotient.projection @ blocks:
        raise ValidationError("coend_map", "morphism does not preserve relations")
    return GradedMap(source.total, target.total, phi.degree, m)


# ============================================================
# PARAMETERS
# ============================================================

def slice_functor(over: DgCategory, params: DgCategory, c: str) -> DgFunctor:
    """``A ↦ (A, c)`` and ``g ↦ g ⊗ 1_c`` into ``over ⊗ params``."""
    fld = over.field
    target = tensor_dgcat(over, params)
    ncc = params.dim(c, c)
    pivot = params.identity_pivot(c)
    maps = {}
    for a, a2 in over.pairs():
        n = over.dim(a, a2)
        maps[(a, a2)] = Matrix.from_entries(fld, n * ncc, n, {(i * ncc + pivot, i): fld.one for i in range(n)})
    objs = {a: pair_object(a, c) for a in over.objects}
    return DgFunctor(over, target, objs, maps, f"(-,{c})")


@dataclass(frozen=True)
class ParametrizedEnd:
    """``(C', C) ↦ ∫_A F((A, C'), (A, C))`` as a bimodule over the parameters."""

    bimodule: Bimodule
    ends: Mapping[tuple[str, str], EndResult]


def end_with_parameters(f: Bimodule, over: DgCategory, params_left: DgCategory,
                        params_right: DgCategory) -> ParametrizedEnd:
    """End over *over* of a bimodule over ``(over ⊗ params_left, over ⊗ params_right)``.

    Parameters act through ``(h φ)_A = (1_A ⊗ h) φ_A`` and ``(φ h)_A = φ_A (1_A ⊗ h)``.
    """
    if f.left != tensor_dgcat(over, params_left) or f.right != tensor_dgcat(over, params_right):
        raise ValidationError("base", "bimodule is not over the product categories")
    fld = f.field
    ends = {}
    for cr in params_right.objects:
        for cl in params_left.objects:
            sliced = restrict(f, slice_functor(over, params_left, cl), slice_functor(over, params_right, cr))
            ends[(cr, cl)] = end_bimodule(sliced)
    comp = {k: e.total for k, e in ends.items()}
    lact, ract = {}, {}
    for cr in params_right.objects:
        for cl, cl2 in params_left.pairs():
            src, dst = ends[(cr, cl)], ends[(cr, cl2)]
            ops = []
            for i in range(params_left.dim(cl, cl2)):
                h = params_left.basis(cl, cl2, i)
                acted = {}
                for a in over.objects:
                    one_h = kron_vectors(over.ident[a], h)
                    acted[a] = f.left_matrix(pair_object(a, cl), pair_object(a, cl2), pair_object(a, cr), one_h)
                ops.append(_induced(src, dst, acted))
            lact[(cl, cl2, cr)] = stack_bilinear(fld, ops, src.dim, dst.dim)
    for cl in params_left.objects:
        for cr2, cr in params_right.pairs():
            src, dst = ends[(cr, cl)], ends[(cr2, cl)]
            ops = []
            for i in range(params_right.dim(cr2, cr)):
                h = params_right.basis(cr2, cr, i)
                acted = {}
                for a in over.objects:
                    one_h = kron_vectors(over.ident[a], h)
                    acted[a] = f.right_matrix(pair_object(a, cr2), pair_object(a, cr), pair_object(a, cl), one_h)
                ops.append(_induced(src, dst, acted))
            ract[(cr2, cr, cl)] = stack_bilinear(fld, ops, src.dim, dst.dim, on_right=True)
    bimodule = make_bimodule(params_left, params_right, comp, lact, ract, f"∫{f.name}")
    return ParametrizedEnd(bimodule, ends)


def _induced(src: EndResult, dst: EndResult, blocks: Mapping[str, Matrix]) -> Matrix:
    """End-coordinate matrix of the blockwise map ``(φ_A) ↦ (blocks[A] φ_A)``."""
    total = block_diagonal(src.functor.field, [blocks[a] for a in src.objects])
    m = dst.sub.retraction @ total @ src.sub.inclusion
    if dst.sub.inclusion @ m != total @ src.sub.inclusion:
        raise ValidationError("wedge", "induced family leaves the end")
    return m


# ============================================================
# FUBINI
# ============================================================

@dataclass(frozen=True)
class FubiniWitness:
    """The three ends of a bimodule over ``𝐀 ⊗ 𝐁`` and the isomorphisms among them.

    Keys are ``"pair"`` for ``∫_{(A,B)}``, ``"first_outer"`` for ``∫_A ∫_B`` and
    ``"second_outer"`` for ``∫_B ∫_A``.
    """

    totals: Mapping[str, Complex]
    embeddings: Mapping[str, Matrix]
    isos: Mapping[tuple[str, str], IsoWitness]

    def verify(self) -> bool:
        for (x, y), w in self.isos.items():
            if not w.verify():
                return False
            if self.embeddings[y] @ w.forward.matrix != self.embeddings[x]:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "dims": {k: c.dims for k, c in self.totals.items()},
            "verified": self.verify(),
        }


def _nested_embedding(outer: EndResult, inner: ParametrizedEnd, place: Callable[[str, str], int],
                      width: int, fld: Field) -> Matrix:
    """Embed ``∫_X ∫_Y`` into the common product; *place(x, y)* gives the block offset."""
    cols = []
    for col in outer.sub.inclusion.columns():
        full = [fld.zero] * width
        for x in outer.objects:
            inner_end = inner.ends[(x, x)]
            vec = tuple(col[i] for i in outer.block(x))
            for y, values in inner_end.family(vec).items():
                start = place(x, y)
                for k, v in enumerate(values):
                    full[start + k] = v
        cols.append(full)
    return Matrix.from_columns(fld, width, cols)


def fubini_witness(f: Bimodule, first: DgCategory, second: DgCategory) -> FubiniWitness:
    """``∫_{(A,B)} F ≅ ∫_A ∫_B F ≅ ∫_B ∫_A F``, all compared inside ``⊕ F((A,B),(A,B))``."""
    pair = tensor_dgcat(first, second)
    if f.left != pair or f.right != pair:
        raise ValidationError("base", "bimodule is not over the product category")
    fld = f.field
    whole = end_bimodule(f)
    width = whole.product.dim

    def place(a: str, b: str) -> int:
        return whole.offsets[pair_object(a, b)]

    swap = swap_functor(second, first)
    swapped = restrict(f, swap, swap)
    inner_second = end_with_parameters(swapped, second, first, first)
    outer_first = end_bimodule(inner_second.bimodule)
    inner_first = end_with_parameters(f, first, second, second)
    outer_second = end_bimodule(inner_first.bimodule)
    embeddings = {
        "pair": whole.sub.inclusion,
        "first_outer": _nested_embedding(outer_first, inner_second, lambda a, b: place(a, b), width, fld),
        "second_outer": _nested_embedding(outer_second, inner_first, lambda b, a: place(a, b), width, fld),
    }
    totals = {"pair": whole.total, "first_outer": outer_first.total, "second_outer": outer_second.total}
    isos = {}
    names = list(totals)
    for x in names:
        for y in names:
            if x >= y:
                continue
            fwd = left_inverse(embeddings[y]) @ embeddings[x] if embeddings[y].ncols else \
                Matrix.zeros(fld, 0, embeddings[x].ncols)
            bwd = left_inverse(embeddings[x]) @ embeddings[y] if embeddings[x].ncols else \
                Matrix.zeros(fld, 0, embeddings[y].ncols)
            isos[(x, y)] = IsoWitness(GradedMap(totals[x], totals[y], 0, fwd),
                                      GradedMap(totals[y], totals[x], 0, bwd))
    return FubiniWitness(totals, embeddings, isos)


# ============================================================
# COMPOSITION OF BIMODULES
# ============================================================

@dataclass(frozen=True)
class CompositionData:
    """``(G ⋄ F)(C, A) = ∫^B F(B, A) ⊗ G(C, B)`` with the coend at each key."""

    first: Bimodule
    second: Bimodule
    coends: Mapping[tuple[str, str], CoendResult]
    result: Bimodule


def composition_data(g: Bimodule, f: Bimodule) -> CompositionData:
    """Compose an 𝐀-𝐁 bimodule *f* with a 𝐁-𝐂 bimodule *g*.

    Outer actions act on the outer tensor factors without signs.
    """
    if f.right != g.left:
        raise ValidationError("base", "bimodules do not share the middle category")
    fld = f.field
    acat, bcat, ccat = f.left, f.right, g.right
    coends = {}
    for c in ccat.objects:
        gc = co_component(g, c)
        for a in acat.objects:
            coends[(c, a)] = coend_bimodule(external_tensor(component(f, a), gc))
    comp = {k: q.total for k, q in coends.items()}
    lact, ract = {}, {}
    for c in ccat.objects:
        for a, a2 in acat.pairs():
            src, dst = coends[(c, a)], coends[(c, a2)]
            ops = []
            for i in range(acat.dim(a, a2)):
                h = acat.basis(a, a2, i)
                blocks = [kron(f.left_matrix(a, a2, b, h), Matrix.identity(fld, g.dim(c, b))) for b in bcat.objects]
                ops.append(_coend_induced(src, dst, blocks))
            lact[(a, a2, c)] = stack_bilinear(fld, ops, src.dim, dst.dim)
    for a in acat.objects:
        for c2, c in ccat.pairs():
            src, dst = coends[(c, a)], coends[(c2, a)]
            ops = []
            for i in range(ccat.dim(c2, c)):
                h = ccat.basis(c2, c, i)
                blocks = [kron(Matrix.identity(fld, f.dim(b, a)), g.right_matrix(c2, c, b, h)) for b in bcat.objects]
                ops.append(_coend_induced(src, dst, blocks))
            ract[(c2, c, a)] = stack_bilinear(fld, ops, src.dim, dst.dim, on_right=True)
    result = make_bimodule(acat, ccat, comp, lact, ract, f"{g.name}⋄{f.name}")
    validate_module(result).raise_for_failure()
    return CompositionData(f, g, coends, result)


def _coend_induced(src: CoendResult, dst: CoendResult, blocks: list[Matrix]) -> Matrix:
    total = block_diagonal(src.functor.field, blocks)
    return dst.quotient.projection @ total @ src.quotient.section


def compose(g: Bimodule, f: Bimodule) -> Bimodule:
    """``G ⋄ F``."""
    return composition_data(g, f).result


def coyoneda_witness(t: Bimodule, side: Side | None = None) -> ModuleIso:
    """``h ⋄ T ≅ T`` by ``f ⊗ x ↦ f x`` (left) or ``x ⊗ f ↦ x f`` (right)."""
    if side is None:
        side = Side.RIGHT if isinstance(t, RightModule) else Side.LEFT
    if side is Side.LEFT:
        data = composition_data(t, diagonal(t.left))
        blocks = lambda c, a: [t.lact[(b, a, c)] for b in t.left.objects]
    else:
        data = composition_data(diagonal(t.right), t)
        blocks = lambda c, a: [t.ract[(c, b, a)] for b in t.right.objects]
    maps = {}
    for c, a in data.result.keys():
        act = Matrix.zeros(t.field, t.dim(c, a), 0).hstack(*blocks(c, a))
        maps[(c, a)] = act @ data.coends[(c, a)].quotient.section
    phi = ModuleMorphism(data.result, t, 0, maps)
    iso = module_iso(phi)
    if iso is None:
        raise ValidationError("coyoneda", "action map is not invertible")
    return iso


def yoneda_end_witness(module: Bimodule, x: str) -> IsoWitness:
    """``M(X) ≅ ∫_A Hom(h(A), M(A))`` with ``ε_A(m)`` the Yoneda family of ``m``."""
    fld = module.field
    rep = representable_like(module, x)
    result = end_bimodule(hom_bimodule(rep, module))
    homs: Mapping[str, HomComplex] = {a: result.functor[(a, a)] for a in result.objects}
    target = module.at(x)
    cols = []
    for j in range(target.dim):
        phi = yoneda_family(module, x, unit_vector(fld, target.dim, j), target.degrees[j])
        cols.append(result.lift({a: homs[a].vector_of(phi.maps[_module_key(module, a)]) for a in result.objects}))
    backward = Matrix.from_columns(fld, result.dim, cols)
    ident = module.base.ident[x]
    evaluate = homs[x]
    forward = Matrix.from_columns(fld, target.dim, [
        evaluate.matrix_of(v).apply(ident) for v in result.projection(x).matrix.columns()
    ])
    return IsoWitness(GradedMap(result.total, target, 0, forward), GradedMap(target, result.total, 0, backward))


# ============================================================
# HOM PRESERVES (CO)ENDS
# ============================================================

def hom_into(z: Complex, f: Bimodule) -> Bimodule:
    """``Hom(Z, F(B, A))`` with ``g X = λ_g X`` and ``X h = ρ_h X σ^{|h|}``."""
    fld = f.field
    comp = {k: internal_hom(z, f[k]) for k in f.keys()}
    lact, ract = {}, {}
    for b in f.right.objects:
        for a, a2 in f.left.pairs():
            src, dst = comp[(b, a)], comp[(b, a2)]
            ops = [hom_operator(src, dst, left=f.left_matrix(a, a2, b, f.left.basis(a, a2, i)))[0]
                   for i in range(f.left.dim(a, a2))]
            lact[(a, a2, b)] = stack_bilinear(fld, ops, src.dim, dst.dim)
    for a in f.left.objects:
        for b2, b in f.right.pairs():
            src, dst = comp[(b, a)], comp[(b2, a)]
            ops = [hom_operator(src, dst, left=f.right_matrix(b2, b, a, f.right.basis(b2, b, i)),
                                right=_parity(fld, z, f.right.degree(b2, b, i)))[0]
                   for i in range(f.right.dim(b2, b))]
            ract[(b2, b, a)] = stack_bilinear(fld, ops, src.dim, dst.dim, on_right=True)
    return make_bimodule(f.left, f.right, comp, lact, ract, f"Hom(Z,{f.name})")


def hom_out(f: Bimodule, z: Complex) -> Bimodule:
    """``Hom(F(B, A), Z)`` at key ``(A, B)``, so the two sides of *f* trade places."""
    fld = f.field
    comp = {(a, b): internal_hom(f[(b, a)], z) for a in f.left.objects for b in f.right.objects}
    lact, ract = {}, {}
    for a in f.left.objects:
        for b, b2 in f.right.pairs():
            src, dst = comp[(a, b)], comp[(a, b2)]
            ops = []
            for i in range(f.right.dim(b, b2)):
                dg = f.right.degree(b, b2, i)
                tau = _parity(fld, z, dg).scale(fld.sign(dg))
                rho = f.right_matrix(b, b2, a, f.right.basis(b, b2, i))
                ops.append(hom_operator(src, dst, left=tau, right=rho)[0])
            lact[(b, b2, a)] = stack_bilinear(fld, ops, src.dim, dst.dim)
    for b in f.right.objects:
        for a2, a in f.left.pairs():
            src, dst = comp[(a, b)], comp[(a2, b)]
            ops = [hom_operator(src, dst, right=f.left_matrix(a2, a, b, f.left.basis(a2, a, i)))[0]
                   for i in range(f.left.dim(a2, a))]
            ract[(a2, a, b)] = stack_bilinear(fld, ops, src.dim, dst.dim, on_right=True)
    return make_bimodule(f.right, f.left, comp, lact, ract, f"Hom({f.name},Z)")


def _family_matrix(source: HomComplex, result: EndResult, component_of: Callable[[Matrix, str], Matrix]) -> Matrix:
    fld = source.field
    cols = []
    for k in range(source.dim):
        m = source.matrix_of(unit_vector(fld, source.dim, k))
        cols.append(result.lift({a: result.functor[(a, a)].vector_of(component_of(m, a)) for a in result.objects}))
    return Matrix.from_columns(fld, result.dim, cols)


def hom_preserves_ends_check(f: Bimodule, z: Complex) -> Report:
    """``Hom(Z, ∫F) ≅ ∫ Hom(Z, F)`` and ``Hom(∫^A F, Z) ≅ ∫_A Hom(F, Z)`` as chain isomorphisms."""
    end = end_bimodule(f)
    lhs = internal_hom(z, end.total)
    rhs = end_bimodule(hom_into(z, f))
    try:
        fwd = _family_matrix(lhs, rhs, lambda y, a: end.projection(a).matrix @ y)
    except ValidationError as exc:
        return Report.failed("hom_end", str(exc))
    g = GradedMap(lhs, rhs.total, 0, fwd)
    if not g.is_closed or iso_witness(g) is None:
        return Report.failed("hom_end", "Hom(Z, -) does not carry the end to an end")
    coend = coend_bimodule(f)
    lhs2 = internal_hom(coend.total, z)
    rhs2 = end_bimodule(hom_out(f, z))
    try:
        fwd2 = _family_matrix(lhs2, rhs2, lambda p, a: p @ coend.injection(a).matrix)
    except ValidationError as exc:
        return Report.failed("hom_coend", str(exc))
    g2 = GradedMap(lhs2, rhs2.total, 0, fwd2)
    if not g2.is_closed or iso_witness(g2) is None:
        return Report.failed("hom_coend", "Hom(-, Z) does not carry the coend to an end")
    return Report.passed("hom_preserves_ends")


# ============================================================
# ASSOCIATIVITY OF COMPOSITION
# ============================================================

def _right_inverse(m: Matrix) -> Matrix:
    if m.nrows == 0:
        return Matrix.zeros(m.field, m.ncols, 0)
    return left_inverse(m.transpose()).transpose()


def _columns_in(m: Matrix, block: range) -> Matrix:
    return m.submatrix(range(m.nrows), block)


def associativity_witness(h: Bimodule, g: Bimodule, f: Bimodule) -> dict[tuple[str, str], IsoWitness]:
    """``H ⋄ (G ⋄ F) ≅ (H ⋄ G) ⋄ F`` through ``⊕_{B,C} F(B, A) ⊗ G(C, B) ⊗ H(D, C)``."""
    fld = f.field
    gf = composition_data(g, f)
    h_gf = composition_data(h, gf.result)
    hg = composition_data(h, g)
    hg_f = composition_data(hg.result, f)
    bcat, ccat = f.right, g.right
    out = {}
    for d in h.right.objects:
        for a in f.left.objects:
            left_q, right_q = h_gf.coends[(d, a)], hg_f.coends[(d, a)]
            blocks_l, blocks_r = [], []
            for b in bcat.objects:
                for c in ccat.objects:
                    inner_l = gf.coends[(c, a)]
                    lift_l = kron(_columns_in(inner_l.quotient.projection, inner_l.block(b)),
                                  Matrix.identity(fld, h.dim(d, c)))
                    blocks_l.append(_embed_rows(lift_l, left_q.offsets[c], left_q.product.dim))
                    inner_r = hg.coends[(d, b)]
                    lift_r = kron(Matrix.identity(fld, f.dim(b, a)),
                                  _columns_in(inner_r.quotient.projection, inner_r.block(c)))
                    blocks_r.append(_embed_rows(lift_r, right_q.offsets[b], right_q.product.dim))
            width = sum(m.ncols for m in blocks_l)
            p_left = left_q.quotient.projection @ Matrix.zeros(fld, left_q.product.dim, 0).hstack(*blocks_l)
            p_right = right_q.quotient.projection @ Matrix.zeros(fld, right_q.product.dim, 0).hstack(*blocks_r)
            if width and (not (p_right @ kernel_basis(p_left)).is_zero or not (p_left @ kernel_basis(p_right)).is_zero):
                raise ValidationError("associativity", "the two composites have different relations",
                                      {"key": (d, a)})
            fwd = p_right @ _right_inverse(p_left)
            bwd = p_left @ _right_inverse(p_right)
            out[(d, a)] = IsoWitness(GradedMap(left_q.total, right_q.total, 0, fwd),
                                     GradedMap(right_q.total, left_q.total, 0, bwd))
    return out


def _embed_rows(m: Matrix, start: int, height: int) -> Matrix:
    entries = {(start + r, c): v for r, c, v in m.nonzero_entries()}
    return Matrix.from_entries(m.field, height, m.ncols, entries)
