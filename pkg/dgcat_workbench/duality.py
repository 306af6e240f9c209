"""Isbell duality, the L ⊣ R duality of bimodules and representability.

``𝒪(X)(A) = Nat(X, h_A)`` turns a right module into a left one with
``g φ = g ∘ φ``; ``Spec(M)(A) = Nat(M, h^A)`` goes back with
``(ψ f)(m) = (-1)^{|f||m|} ψ(m) ∘ f``.  Applied componentwise these give

* ``L(T)(A, B) = 𝒪(T_A)(B)`` with ``(φ f)(x) = φ(f x)``
* ``R(S)(B, A) = Spec(S^A)(B)`` with ``(g ψ)(m) = (-1)^{|g||ψ| + |g||m|} ψ(m g)``
"""

from __future__ import annotations

import logging
import multiprocessing
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .complexes import GradedMap, IsoWitness, cohomology
from .constants import DEFAULT_SEED, MAX_WORKERS
from .dgcat import UNIT_OBJECT, DgCategory, candidate_vectors
from .dgmod import (
    Bimodule, LeftModule, ModuleMorphism, NatComplex, RightModule, _parity, co_component,
    component, identity_morphism, is_qis_morphism, left_module, make_bimodule, module_cone, module_iso,
    nat_complex, nat_operator, representable_left, representable_right, right_module,
    stack_bilinear, yoneda_family,
)
from .enums import ReprKind, Side
from .errors import NotClosedError, ValidationError
from .exact_linalg import Matrix, kernel_basis, left_inverse, solve, unit_vector
from .models import SearchProvenance

logger = logging.getLogger(__name__)


# ============================================================
# ISBELL DUALITY
# ============================================================

@dataclass(frozen=True)
class IsbellData:
    """A dual module together with the Nat complexes that realise its components."""

    module: Bimodule
    nats: Mapping[str, NatComplex]


def isbell_O_data(x: RightModule) -> IsbellData:
    cat = x.base
    fld = x.field
    nats = {a: nat_complex(x, representable_right(cat, a)) for a in cat.objects}
    action = {}
    for a, a2 in cat.pairs():
        src, dst = nats[a], nats[a2]
        ops = []
        for i in range(cat.dim(a, a2)):
            g = cat.basis(a, a2, i)
            post = {(b, UNIT_OBJECT): cat.postcompose_matrix(b, a, a2, g) for b in cat.objects}
            ops.append(nat_operator(src, dst, left=post))
        action[(a, a2)] = stack_bilinear(fld, ops, src.dim, dst.dim)
    module = left_module(cat, {a: n.complex for a, n in nats.items()}, action, f"O({x.name})")
    return IsbellData(module, nats)


def isbell_spec_data(m: LeftModule) -> IsbellData:
    cat = m.base
    fld = m.field
    nats = {a: nat_complex(m, representable_left(cat, a)) for a in cat.objects}
    action = {}
    for a2, a in cat.pairs():
        src, dst = nats[a], nats[a2]
        ops = []
        for i in range(cat.dim(a2, a)):
            f = cat.basis(a2, a, i)
            df = cat.degree(a2, a, i)
            pre = {(UNIT_OBJECT, b): cat.precompose_matrix(a2, a, b, f) for b in cat.objects}
            twist = {(UNIT_OBJECT, b): _parity(fld, m.at(b), df) for b in cat.objects}
            ops.append(nat_operator(src, dst, left=pre, right=twist))
        action[(a2, a)] = stack_bilinear(fld, ops, src.dim, dst.dim, on_right=True)
    module = right_module(cat, {a: n.complex for a, n in nats.items()}, action, f"Spec({m.name})")
    return IsbellData(module, nats)


def isbell_O(x: RightModule) -> LeftModule:
    return isbell_O_data(x).module


def isbell_spec(m: LeftModule) -> RightModule:
    return isbell_spec_data(m).module


def isbell_unit(x: RightModule) -> ModuleMorphism:
    """``X → Spec 𝒪 X``, ``x ↦ (θ ↦ (-1)^{|θ||x|} θ(x))``."""
    cat, fld = x.base, x.field
    o = isbell_O_data(x)
    spec = isbell_spec_data(o.module)
    maps = {}
    for b in cat.objects:
        target = spec.nats[b]
        xs = x.at(b)
        cols = []
        for i in range(xs.dim):
            family = {}
            for a in cat.objects:
                nat = o.nats[a]
                ev = nat.evaluation((b, UNIT_OBJECT))
                homs = nat.homs[(b, UNIT_OBJECT)]
                values = []
                for t in range(nat.dim):
                    theta_b = homs.matrix_of(ev.column(t))
                    sign = fld.sign(nat.complex.degrees[t] * xs.degrees[i])
                    values.append(tuple(sign * v for v in theta_b.column(i)))
                family[(UNIT_OBJECT, a)] = Matrix.from_columns(fld, cat.dim(b, a), values)
            cols.append(target.coordinates(ModuleMorphism(o.module, target.target, xs.degrees[i], family)))
        maps[(b, UNIT_OBJECT)] = Matrix.from_columns(fld, target.dim, cols)
    return ModuleMorphism(x, spec.module, 0, maps)


def isbell_counit(m: LeftModule) -> ModuleMorphism:
    """``M → 𝒪 Spec M``, ``m ↦ (ψ ↦ (-1)^{|m||ψ|} ψ(m))``."""
    cat, fld = m.base, m.field
    spec = isbell_spec_data(m)
    o = isbell_O_data(spec.module)
    maps = {}
    for a in cat.objects:
        target = o.nats[a]
        ms = m.at(a)
        cols = []
        for j in range(ms.dim):
            family = {}
            for b in cat.objects:
                nat = spec.nats[b]
                ev = nat.evaluation((UNIT_OBJECT, a))
                homs = nat.homs[(UNIT_OBJECT, a)]
                values = []
                for t in range(nat.dim):
                    psi_a = homs.matrix_of(ev.column(t))
                    sign = fld.sign(nat.complex.degrees[t] * ms.degrees[j])
                    values.append(tuple(sign * v for v in psi_a.column(j)))
                family[(b, UNIT_OBJECT)] = Matrix.from_columns(fld, cat.dim(b, a), values)
            cols.append(target.coordinates(ModuleMorphism(spec.module, target.target, ms.degrees[j], family)))
        maps[(UNIT_OBJECT, a)] = Matrix.from_columns(fld, target.dim, cols)
    return ModuleMorphism(m, o.module, 0, maps)


def isbell_adjunction(m: LeftModule, x: RightModule) -> IsoWitness:
    """``Nat(M, 𝒪 X) ≅ Nat(X, Spec M)`` by ``Φ(φ)(x)(m) = (-1)^{|m||x|} φ(m)(x)``.

    Both sides are embedded in the space of trilinear values ``(x, m) ↦ 𝐀(B, A)``
    and compared there.
    """
    cat, fld = m.base, m.field
    if x.base != cat:
        raise ValidationError("base", "modules act over different categories")
    o = isbell_O_data(x)
    spec = isbell_spec_data(m)
    lhs = nat_complex(m, o.module)
    rhs = nat_complex(x, spec.module)
    slots = [(b, a, i, j) for b in cat.objects for a in cat.objects
             for i in range(x.at(b).dim) for j in range(m.at(a).dim)]
    width = sum(cat.dim(b, a) for b, a, _, _ in slots)

    def embed_left(vec) -> list:
        phi = lhs.components(vec)
        out = []
        for b, a, i, j in slots:
            theta = phi[(UNIT_OBJECT, a)].column(j)
            inner = o.nats[a].components(theta)[(b, UNIT_OBJECT)]
            sign = fld.sign(m.at(a).degrees[j] * x.at(b).degrees[i])
            out.extend(sign * v for v in inner.column(i))
        return out

    def embed_right(vec) -> list:
        psi = rhs.components(vec)
        out = []
        for b, a, i, j in slots:
            theta = psi[(b, UNIT_OBJECT)].column(i)
            inner = spec.nats[b].components(theta)[(UNIT_OBJECT, a)]
            out.extend(inner.column(j))
        return out

    e_left = Matrix.from_columns(fld, width, [embed_left(c) for c in _identity_columns(fld, lhs.dim)])
    e_right = Matrix.from_columns(fld, width, [embed_right(c) for c in _identity_columns(fld, rhs.dim)])
    fwd = left_inverse(e_right) @ e_left if rhs.dim else Matrix.zeros(fld, 0, lhs.dim)
    bwd = left_inverse(e_left) @ e_right if lhs.dim else Matrix.zeros(fld, 0, rhs.dim)
    if e_right @ fwd != e_left:
        raise ValidationError("isbell", "the two sides do not determine the same trilinear values")
    return IsoWitness(GradedMap(lhs.complex, rhs.complex, 0, fwd), GradedMap(rhs.complex, lhs.complex, 0, bwd))


def _identity_columns(fld, n: int) -> list[tuple]:
    return [unit_vector(fld, n, k) for k in range(n)]


# ============================================================
# BIMODULE DUALITY
# ============================================================

def L_dual(t: Bimodule) -> Bimodule:
    """``L(T)(A, B) = 𝒪(T_A)(B)`` over ``(right, left)`` of *t*."""
    return L_dual_data(t)[0]


def L_dual_data(t: Bimodule) -> tuple[Bimodule, dict[str, IsbellData]]:
    """``L(T)`` plus, per object ``A``, the Isbell data of ``T_A``."""
    acat, bcat, fld = t.left, t.right, t.field
    data = {a: isbell_O_data(component(t, a)) for a in acat.objects}
    comp, lact, ract = {}, {}, {}
    for a in acat.objects:
        o = data[a].module
        for b in bcat.objects:
            comp[(a, b)] = o.at(b)
        for b, b2 in bcat.pairs():
            lact[(b, b2, a)] = o.lact[(b, b2, UNIT_OBJECT)]
    for b in bcat.objects:
        for a2, a in acat.pairs():
            src, dst = data[a].nats[b], data[a2].nats[b]
            ops = []
            for i in range(acat.dim(a2, a)):
                f = acat.basis(a2, a, i)
                pre = {(c, UNIT_OBJECT): t.left_matrix(a2, a, c, f) for c in bcat.objects}
                ops.append(nat_operator(src, dst, right=pre))
            ract[(a2, a, b)] = stack_bilinear(fld, ops, src.dim, dst.dim, on_right=True)
    return make_bimodule(bcat, acat, comp, lact, ract, f"L({t.name})"), data


def R_dual(s: Bimodule) -> Bimodule:
    """``R(S)(B, A) = Spec(S^A)(B)`` over ``(right, left)`` of *s*."""
    return R_dual_data(s)[0]


def R_dual_data(s: Bimodule) -> tuple[Bimodule, dict[str, IsbellData]]:
    bcat, acat, fld = s.left, s.right, s.field
    data = {a: isbell_spec_data(co_component(s, a)) for a in acat.objects}
    comp, lact, ract = {}, {}, {}
    for a in acat.objects:
        sp = data[a].module
        for b in bcat.objects:
            comp[(b, a)] = sp.at(b)
        for b2, b in bcat.pairs():
            ract[(b2, b, a)] = sp.ract[(b2, b, UNIT_OBJECT)]
    for b in bcat.objects:
        for a, a2 in acat.pairs():
            src, dst = data[a].nats[b], data[a2].nats[b]
            ops = []
            for i in range(acat.dim(a, a2)):
                g = acat.basis(a, a2, i)
                dg = acat.degree(a, a2, i)
                pre = {(UNIT_OBJECT, c): s.right_matrix(a, a2, c, g) @ _parity(fld, s[(a2, c)], dg)
                       for c in bcat.objects}
                ops.append(nat_operator(src, dst, right=pre, sign_exponent=dg))
            lact[(a, a2, b)] = stack_bilinear(fld, ops, src.dim, dst.dim)
    return make_bimodule(acat, bcat, comp, lact, ract, f"R({s.name})"), data


def L_map(phi: ModuleMorphism) -> ModuleMorphism:
    """``L(φ): L(T′) → L(T)`` for a closed degree-0 ``φ: T → T′``, by ``ψ ↦ ψ ∘ φ_A``."""
    _require_degree_zero(phi)
    src, src_data = L_dual_data(phi.target)
    dst, dst_data = L_dual_data(phi.source)
    maps = {}
    for a in phi.source.left.objects:
        pre = {(c, UNIT_OBJECT): phi.maps[(c, a)] for c in phi.source.right.objects}
        for b in phi.source.right.objects:
            maps[(a, b)] = nat_operator(src_data[a].nats[b], dst_data[a].nats[b], right=pre)
    return ModuleMorphism(src, dst, 0, maps)


def R_map(phi: ModuleMorphism) -> ModuleMorphism:
    """``R(φ): R(S′) → R(S)`` for a closed degree-0 ``φ: S → S′``, by ``ψ ↦ ψ ∘ φ^A``."""
    _require_degree_zero(phi)
    src, src_data = R_dual_data(phi.target)
    dst, dst_data = R_dual_data(phi.source)
    maps = {}
    for a in phi.source.right.objects:
        pre = {(UNIT_OBJECT, c): phi.maps[(a, c)] for c in phi.source.left.objects}
        for b in phi.source.left.objects:
            maps[(b, a)] = nat_operator(src_data[a].nats[b], dst_data[a].nats[b], right=pre)
    return ModuleMorphism(src, dst, 0, maps)


def _require_degree_zero(phi: ModuleMorphism) -> None:
    if phi.degree != 0 or not phi.is_closed:
        raise NotClosedError("duality is applied to closed degree-0 morphisms only")


def LR_unit(t: Bimodule) -> ModuleMorphism:
    """``T → R L T``; at ``(B, A)`` this is the Isbell unit of ``T_A`` at ``B``."""
    target = R_dual(L_dual(t))
    maps = {}
    for a in t.left.objects:
        unit = isbell_unit(component(t, a))
        for b in t.right.objects:
            maps[(b, a)] = unit.maps[(b, UNIT_OBJECT)]
    return ModuleMorphism(t, target, 0, maps)


def LR_counit(s: Bimodule) -> ModuleMorphism:
    """``S → L R S``; at ``(A, B)`` this is the Isbell counit of ``S^A`` at ``B``."""
    target = L_dual(R_dual(s))
    maps = {}
    for a in s.right.objects:
        counit = isbell_counit(co_component(s, a))
        for b in s.left.objects:
            maps[(a, b)] = counit.maps[(UNIT_OBJECT, b)]
    return ModuleMorphism(s, target, 0, maps)


# ============================================================
# REPRESENTABILITY
# ============================================================

@dataclass(frozen=True)
class ReprWitness:
    """Objectwise representing objects and mediating maps out of the representables."""

    kind: ReprKind
    side: Side
    assignment: Mapping[str, str]
    mediators: Mapping[str, ModuleMorphism]
    provenance: Mapping[str, SearchProvenance] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "side": self.side.value,
            "assignment": dict(self.assignment),
            "mediators": {a: m.to_dict() for a, m in self.mediators.items()},
            "provenance": {a: p.to_dict() for a, p in self.provenance.items()},
        }


def is_contractible(module: Bimodule) -> bool:
    """The identity of *module* is a boundary in ``Nat(module, module)``."""
    if module.total_dim == 0:
        return True
    nat = nat_complex(module, module)
    one = nat.coordinates(identity_morphism(module))
    return solve(nat.complex.d, one) is not None


def _degree_zero_cycles(c) -> list[tuple]:
    fld = c.field
    idx = c.indices(0)
    out = []
    for col in kernel_basis(c.differential(0)).columns():
        full = [fld.zero] * c.dim
        for k, v in zip(idx, col):
            full[k] = v
        out.append(tuple(full))
    return out


def _side_pieces(t: Bimodule, side: Side) -> tuple[DgCategory, list[str], Callable[[str], Bimodule]]:
    if side is Side.RIGHT:
        return t.right, list(t.left.objects), lambda a: component(t, a)
    return t.left, list(t.right.objects), lambda b: co_component(t, b)


def _combine(fld, basis: list[tuple], coeffs) -> tuple:
    n = len(basis[0])
    return tuple(sum((c * v[k] for c, v in zip(coeffs, basis)), fld.zero) for k in range(n))


def _matching(module: Bimodule, rep: Bimodule, by_cohomology: bool) -> bool:
    for key in module.keys():
        if by_cohomology:
            if cohomology(module[key]).dims != cohomology(rep[key]).dims:
                return False
        elif module[key].dims != rep[key].dims:
            return False
    return True


def _accepts(kind: ReprKind, phi: ModuleMorphism) -> bool:
    if kind is ReprKind.STRICT:
        return module_iso(phi) is not None
    if kind is ReprKind.HOMOTOPY:
        return is_contractible(module_cone(phi))
    return is_qis_morphism(phi)


@dataclass(frozen=True)
class _Job:
    t: Bimodule
    side: Side
    kind: ReprKind
    seed: int
    candidates: Mapping[str, Sequence[str]] | None


def _search_object(job: _Job, a: str) -> tuple[str | None, tuple[str, ...], bool, int]:
    """Search one object; returns plain data so that it can cross a process boundary."""
    base, _, piece = _side_pieces(job.t, job.side)
    fld = job.t.field
    module = piece(a)
    by_cohomology = job.kind is not ReprKind.STRICT
    exhaustive, tried = True, 0
    allowed = base.objects if job.candidates is None else job.candidates.get(a, ())
    for c in allowed:
        rep = representable_right(base, c) if job.side is Side.RIGHT else representable_left(base, c)
        if not _matching(module, rep, by_cohomology):
            continue
        if by_cohomology:
            h = cohomology(module.at(c))
            basis = [h.representatives.column(k) for k in h.class_indices(0)]
        else:
            basis = _degree_zero_cycles(module.at(c))
        if not basis:
            continue
        vectors, complete = candidate_vectors(fld, len(basis), job.seed)
        exhaustive = exhaustive and complete
        for coeffs in vectors:
            tried += 1
            z = _combine(fld, basis, coeffs)
            if _accepts(job.kind, yoneda_family(module, c, z, 0)):
                logger.debug("%s %s: %s represented by %s after %d tries", job.kind.value, job.side.value,
                             a, c, tried)
                return c, tuple(fld.format_element(v) for v in z), complete, tried
    return None, (), exhaustive, tried


_worker_job: _Job | None = None


def _init_worker(job: _Job) -> None:
    """Pool initializer: each forked worker keeps its own copy of the job."""
    global _worker_job
    _worker_job = job


def _search_worker(a: str) -> tuple[str | None, tuple[str, ...], bool, int]:
    return _search_object(_worker_job, a)


@dataclass(frozen=True)
class SearchOutcome:
    """A witness when every object is represented, plus the per-object search record."""

    witness: ReprWitness | None
    provenance: Mapping[str, SearchProvenance]
    failed_at: str | None = None

    @property
    def exhaustive(self) -> bool:
        return all(p.exhaustive for p in self.provenance.values())

    def to_dict(self) -> dict:
        return {
            "found": self.witness is not None,
            "failed_at": self.failed_at,
            "exhaustive": self.exhaustive,
            "witness": self.witness.to_dict() if self.witness else None,
            "provenance": {a: p.to_dict() for a, p in self.provenance.items()},
        }


def search_representability(t: Bimodule, side: Side, kind: ReprKind, seed: int = DEFAULT_SEED,
                            candidates: Mapping[str, Sequence[str]] | None = None,
                            parallel: bool = False) -> SearchOutcome:
    """Look for ``z ∈ H⁰`` (or ``Z⁰``) at some object whose Yoneda family is accepted by *kind*.

    *candidates* restricts the representing objects tried per index object.
    Every object is searched even after a failure so the transcript is complete.
    """
    _, indices, piece = _side_pieces(t, side)
    job = _Job(t, side, kind, seed, candidates)
    if parallel and len(indices) > 1:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(processes=min(MAX_WORKERS, len(indices)), initializer=_init_worker,
                      initargs=(job,)) as pool:
            results = pool.map(_search_worker, indices)
    else:
        results = [_search_object(job, a) for a in indices]

    fld = t.field
    assignment, mediators, provenance = {}, {}, {}
    failed_at = None
    for a, (c, z, exhaustive, tried) in zip(indices, results):
        provenance[a] = SearchProvenance(exhaustive, seed, tried)
        if c is None:
            failed_at = failed_at or a
            continue
        assignment[a] = c
        mediators[a] = yoneda_family(piece(a), c, tuple(fld.parse_element(v) for v in z), 0)
    if failed_at is not None:
        logger.info("%s %s representability fails at %s", kind.value, side.value, failed_at)
        return SearchOutcome(None, provenance, failed_at)
    return SearchOutcome(ReprWitness(kind, side, assignment, mediators, provenance), provenance)


def is_right_representable(t: Bimodule, seed: int = DEFAULT_SEED) -> ReprWitness | None:
    """``T_A ≅ h_{F(A)}`` for every object, with ``z ∈ Z⁰ T(F A, A)`` giving ``f ↦ z f``."""
    return search_representability(t, Side.RIGHT, ReprKind.STRICT, seed).witness


def is_left_representable(s: Bimodule, seed: int = DEFAULT_SEED) -> ReprWitness | None:
    return search_representability(s, Side.LEFT, ReprKind.STRICT, seed).witness


def is_right_homotopy_representable(t: Bimodule, seed: int = DEFAULT_SEED) -> ReprWitness | None:
    """``h_{F(A)} → T_A`` a homotopy equivalence: its cone is contractible."""
    return search_representability(t, Side.RIGHT, ReprKind.HOMOTOPY, seed).witness


def is_left_homotopy_representable(s: Bimodule, seed: int = DEFAULT_SEED) -> ReprWitness | None:
    return search_representability(s, Side.LEFT, ReprKind.HOMOTOPY, seed).witness
