"""Derived constructions on top of exact bimodules.

The derived category is never built as a localisation.  Every derived
statement goes through an h-projective model: a two-sided normalised bar
resolution ``Q(T) → T``, whose words are

    g₀ ⊗ ḡ₁ ⊗ … ⊗ ḡ_p ⊗ t ⊗ f̄₁ ⊗ … ⊗ f̄_q ⊗ f_e

with ``g₀ ∈ 𝐀(l₀, l)``, ``ḡ_i ∈ 𝐀̄(l_i, l_{i-1})``, ``t ∈ T(r₀, l_p)``,
``f̄_j ∈ 𝐁̄(r_j, r_{j-1})`` and ``f_e ∈ 𝐁(r, r_q)``; bars denote homs
modulo identities.  A word has degree ``Σ|u_k| - p - q``.  The resolution
is exact (certified) when the word length bound covers every chain of
nonzero reduced homs, i.e. both categories have acyclic reduced quivers.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .complexes import Complex, Quotient, _accumulate, cohomology, cone, quotient_complex
from .constants import DEFAULT_SEED, MAX_BAR_DEPTH, NILPOTENCY_SEARCH_BOUND
from .dgcat import UNIT_OBJECT, DgCategory
from .dgmod import (
    Bimodule, ModuleMorphism, NatComplex, _parity, component, diagonal, identity_morphism,
    is_acyclic_module, is_qis_morphism, is_unit_category, make_bimodule, module_iso, nat_complex,
    nat_operator, stack_bilinear, yoneda_family,
)
from .duality import (
    L_dual, L_dual_data, L_map, LR_counit, LR_unit, R_dual, R_map, ReprWitness, SearchOutcome,
    is_left_representable, is_right_representable, search_representability,
)
from .endcoend import (
    CompositionData, _coend_induced, associativity_witness, compose, composition_data,
    coyoneda_witness,
)
from .enums import Level, ReprKind, Side
from .errors import UncertifiedResolutionError, ValidationError
from .exact_linalg import Matrix, column_space_basis, kron, solve, unit_vector
from .models import Report, first_failure

logger = logging.getLogger(__name__)


# ============================================================
# REDUCED CATEGORIES
# ============================================================

def reduced_homs(cat: DgCategory) -> dict[tuple[str, str], Quotient]:
    """``𝐀̄(x, y)``: the hom complex modulo the identity when ``x = y``."""
    fld = cat.field
    out = {}
    for x, y in cat.pairs():
        h = cat.hom[(x, y)]
        rel = Matrix.from_columns(fld, h.dim, [cat.ident[x]] if x == y else [])
        out[(x, y)] = quotient_complex(h, rel)
    return out


def _reduced_edges(cat: DgCategory, reduced: Mapping[tuple[str, str], Quotient]) -> dict[str, list[str]]:
    return {x: [y for y in cat.objects if reduced[(x, y)].complex.dim] for x in cat.objects}


def bar_length_bound(cat: DgCategory) -> int | None:
    """Longest chain of nonzero reduced homs; ``None`` if the reduced quiver has a cycle."""
    edges = _reduced_edges(cat, reduced_homs(cat))
    longest: dict[str, int] = {}
    visiting: set[str] = set()

    def walk(x: str) -> int | None:
        if x in longest:
            return longest[x]
        if x in visiting:
            return None
        visiting.add(x)
        best = 0
        for y in edges[x]:
            sub = walk(y)
            if sub is None:
                return None
            best = max(best, sub + 1)
        visiting.discard(x)
        longest[x] = best
        return best

    for x in cat.objects:
        if walk(x) is None:
            return None
    return max(longest.values(), default=0)


def reduced_nilpotency_index(cat: DgCategory, bound: int = NILPOTENCY_SEARCH_BOUND) -> int | None:
    """Least ``n`` such that every composite of ``n`` reduced basis morphisms lies in the identities.

    Composites are taken of lifted basis elements and reduced again, so
    ``n = 1`` means the reduced category is zero.  ``None`` past *bound*.
    """
    reduced = reduced_homs(cat)
    fld = cat.field
    # spans[(x, y)]: reduced classes of composites of the current length
    spans = {k: Matrix.identity(fld, q.complex.dim) for k, q in reduced.items()}
    for n in range(1, bound + 1):
        if all(m.ncols == 0 for m in spans.values()):
            return n
        nxt = {}
        for x, y in cat.pairs():
            cols = []
            for z in cat.objects:
                first, second = spans[(x, z)], reduced[(z, y)]
                if first.ncols == 0 or second.complex.dim == 0:
                    continue
                lifted = reduced[(x, z)].section @ first
                for i in range(second.complex.dim):
                    g = second.section.column(i)
                    comp = reduced[(x, y)].projection @ cat.postcompose_matrix(x, z, y, g) @ lifted
                    cols.extend(comp.columns())
            stacked = Matrix.from_columns(fld, reduced[(x, y)].complex.dim, cols)
            nxt[(x, y)] = column_space_basis(stacked)
        spans = nxt
    logger.info("reduced nilpotency of %s exceeds %d", cat.name, bound)
    return None


# ============================================================
# BAR RESOLUTION
# ============================================================

@dataclass(frozen=True)
class _Block:
    """All words over one pair of chains, for one component."""

    lchain: tuple[str, ...]
    rchain: tuple[str, ...]
    factors: tuple[Complex, ...]
    offset: int

    @property
    def p(self) -> int:
        return len(self.lchain) - 1

    @property
    def q(self) -> int:
        return len(self.rchain) - 1

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.dim for f in self.factors)

    @property
    def size(self) -> int:
        n = 1
        for d in self.dims:
            n *= d
        return n

    def words(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(d) for d in self.dims))

    def index(self, word: Sequence[int]) -> int:
        k = 0
        for u, d in zip(word, self.dims):
            k = k * d + u
        return self.offset + k

    def degree(self, word: Sequence[int]) -> int:
        return sum(f.degrees[u] for f, u in zip(self.factors, word)) - self.p - self.q


def _chains(cat: DgCategory, reduced: Mapping[tuple[str, str], Quotient], depth: int) -> list[tuple[str, ...]]:
    """``(x₀, …, x_p)`` with ``𝐀̄(x_i, x_{i-1}) ≠ 0`` and ``p ≤ depth``."""
    level = [(x,) for x in cat.objects]
    out = list(level)
    for _ in range(depth):
        level = [c + (y,) for c in level for y in cat.objects if reduced[(y, c[-1])].complex.dim]
        if not level:
            break
        out.extend(level)
    return out


class _BarBuilder:
    """Assembles ``Q(T)`` component by component."""

    def __init__(self, t: Bimodule, depth: int) -> None:
        self.t = t
        self.fld = t.field
        self.lcat, self.rcat = t.left, t.right
        self.lred = reduced_homs(self.lcat)
        self.rred = reduced_homs(self.rcat)
        self.depth = depth
        self.lchains = _chains(self.lcat, self.lred, depth)
        self.rchains = _chains(self.rcat, self.rred, depth)
        self.blocks: dict[tuple[str, str], list[_Block]] = {}
        self.lookup: dict[tuple[str, str], dict[tuple, _Block]] = {}
        self.components: dict[tuple[str, str], Complex] = {}
        for r in self.rcat.objects:
            for l in self.lcat.objects:
                self._layout(r, l)

    # -- layout --

    def _factors(self, r: str, l: str, lc: tuple[str, ...], rc: tuple[str, ...]) -> tuple[Complex, ...]:
        p, q = len(lc) - 1, len(rc) - 1
        out = [self.lcat.hom[(lc[0], l)]]
        out += [self.lred[(lc[i], lc[i - 1])].complex for i in range(1, p + 1)]
        out.append(self.t[(rc[0], lc[-1])])
        out += [self.rred[(rc[j], rc[j - 1])].complex for j in range(1, q + 1)]
        out.append(self.rcat.hom[(r, rc[-1])])
        return tuple(out)

    def _layout(self, r: str, l: str) -> None:
        blocks, lookup, degrees = [], {}, []
        offset = 0
        for lc in self.lchains:
            for rc in self.rchains:
                if len(lc) + len(rc) - 2 > self.depth:
                    continue
                factors = self._factors(r, l, lc, rc)
                if any(f.dim == 0 for f in factors):
                    continue
                block = _Block(lc, rc, factors, offset)
                degrees.extend(block.degree(w) for w in block.words())
                offset += block.size
                blocks.append(block)
                lookup[(lc, rc)] = block
        self.blocks[(r, l)] = blocks
        self.lookup[(r, l)] = lookup
        self.components[(r, l)] = Complex(self.fld, tuple(degrees), Matrix.zeros(self.fld, offset, offset))

    # -- merges --

    def _section(self, reduced: Mapping[tuple[str, str], Quotient], x: str, y: str) -> Matrix:
        return reduced[(x, y)].section

    def _left_merge(self, block: _Block, k: int, l: str) -> Matrix:
        """Product of factors ``k`` and ``k + 1`` on the left half, ``0 ≤ k ≤ p``."""
        lc, p = block.lchain, block.p
        if k == p:
            r0 = block.rchain[0]
            section = self._section(self.lred, lc[p], lc[p - 1])
            n = self.t.dim(r0, lc[p])
            return self.t.lact[(lc[p], lc[p - 1], r0)] @ kron(section, Matrix.identity(self.fld, n))
        outer = l if k == 0 else lc[k - 1]
        lift = Matrix.identity(self.fld, self.lcat.dim(lc[0], l)) if k == 0 \
            else self._section(self.lred, lc[k], outer)
        m = self.lcat.comp[(lc[k + 1], lc[k], outer)] @ kron(lift, self._section(self.lred, lc[k + 1], lc[k]))
        if k > 0:
            m = self.lred[(lc[k + 1], outer)].projection @ m
        return m

    def _right_merge(self, block: _Block, j: int, r: str) -> Matrix:
        """Product of ``t`` or ``f̄_j`` with its right neighbour, ``0 ≤ j ≤ q``."""
        rc, q = block.rchain, block.q
        if j == 0:
            lp = block.lchain[-1]
            n = self.t.dim(rc[0], lp)
            return self.t.ract[(rc[1], rc[0], lp)] @ kron(Matrix.identity(self.fld, n),
                                                          self._section(self.rred, rc[1], rc[0]))
        inner = r if j == q else rc[j + 1]
        lift = Matrix.identity(self.fld, self.rcat.dim(r, rc[q])) if j == q \
            else self._section(self.rred, rc[j + 1], rc[j])
        m = self.rcat.comp[(inner, rc[j], rc[j - 1])] @ kron(self._section(self.rred, rc[j], rc[j - 1]), lift)
        if j < q:
            m = self.rred[(inner, rc[j - 1])].projection @ m
        return m

    # -- differential --

    def differential(self, r: str, l: str) -> Matrix:
        entries: dict[tuple[int, int], object] = {}
        lookup = self.lookup[(r, l)]
        for block in self.blocks[(r, l)]:
            p, q = block.p, block.q
            internal = [_by_column(f.d) for f in block.factors]
            merges = []
            for k in range(p + 1 if p else 0):
                target = lookup.get((block.lchain[:k] + block.lchain[k + 1:], block.rchain))
                merges.append((k, target, _by_column(self._left_merge(block, k, l)) if target else {}))
            for j in range(q + 1 if q else 0):
                target = lookup.get((block.lchain, block.rchain[:j] + block.rchain[j + 1:]))
                merges.append((p + 1 + j, target, _by_column(self._right_merge(block, j, r)) if target else {}))
            for word in block.words():
                col = block.index(word)
                shifts = _shift_signs(block, word)
                for k, u in enumerate(word):
                    for row, v in internal[k].get(u, ()):
                        changed = word[:k] + (row,) + word[k + 1:]
                        _accumulate(entries, (block.index(changed), col), self.fld.sign(shifts[k]) * v)
                for k, target, table in merges:
                    if target is None:
                        continue
                    pair = word[k] * block.dims[k + 1] + word[k + 1]
                    for row, v in table.get(pair, ()):
                        merged = word[:k] + (row,) + word[k + 2:]
                        _accumulate(entries, (target.index(merged), col), self.fld.sign(shifts[k + 1]) * v)
        n = self.components[(r, l)].dim
        return Matrix.from_entries(self.fld, n, n, entries)

    # -- actions --

    def left_action(self, l: str, l2: str, r: str) -> Matrix:
        """``h ⊗ w ↦ (h ∘ g₀) ⊗ …`` from ``𝐀(l, l2) ⊗ Q(r, l)`` to ``Q(r, l2)``."""
        src_dim = self.components[(r, l)].dim
        entries: dict[tuple[int, int], object] = {}
        target_lookup = self.lookup[(r, l2)]
        for block in self.blocks[(r, l)]:
            target = target_lookup.get((block.lchain, block.rchain))
            if target is None:
                continue
            table = _by_column(self.lcat.comp[(block.lchain[0], l, l2)])
            width = block.dims[0]
            for word in block.words():
                col = block.index(word)
                for i in range(self.lcat.dim(l, l2)):
                    for row, v in table.get(i * width + word[0], ()):
                        _accumulate(entries, (target.index((row,) + word[1:]), i * src_dim + col), v)
        return Matrix.from_entries(self.fld, self.components[(r, l2)].dim,
                                   self.lcat.dim(l, l2) * src_dim, entries)

    def right_action(self, r2: str, r: str, l: str) -> Matrix:
        """``w ⊗ h ↦ … ⊗ (f_e ∘ h)`` from ``Q(r, l) ⊗ 𝐁(r2, r)`` to ``Q(r2, l)``."""
        hdim = self.rcat.dim(r2, r)
        entries: dict[tuple[int, int], object] = {}
        target_lookup = self.lookup[(r2, l)]
        for block in self.blocks[(r, l)]:
            target = target_lookup.get((block.lchain, block.rchain))
            if target is None:
                continue
            rq = block.rchain[-1]
            table = _by_column(self.rcat.comp[(r2, r, rq)])
            for word in block.words():
                col = block.index(word)
                for i in range(hdim):
                    for row, v in table.get(word[-1] * hdim + i, ()):
                        _accumulate(entries, (target.index(word[:-1] + (row,)), col * hdim + i), v)
        return Matrix.from_entries(self.fld, self.components[(r2, l)].dim,
                                   self.components[(r, l)].dim * hdim, entries)

    def augmentation(self, r: str, l: str) -> Matrix:
        """``g₀ ⊗ t ⊗ f_e ↦ (-1)^{|t|} g₀ (t f_e)`` on words without reduced letters."""
        entries: dict[tuple[int, int], object] = {}
        t = self.t
        for block in self.blocks[(r, l)]:
            if block.p or block.q:
                continue
            l0, r0 = block.lchain[0], block.rchain[0]
            ract = _by_column(t.ract[(r, r0, l0)])
            lact = _by_column(t.lact[(l0, l, r)])
            fdim, tdim = self.rcat.dim(r, r0), t.dim(r, l0)
            xdeg = t[(r0, l0)].degrees
            for g0, x, fe in block.words():
                col = block.index((g0, x, fe))
                sign = self.fld.sign(xdeg[x])
                for y, a in ract.get(x * fdim + fe, ()):
                    for row, b in lact.get(g0 * tdim + y, ()):
                        _accumulate(entries, (row, col), sign * a * b)
        return Matrix.from_entries(self.fld, t.dim(r, l), self.components[(r, l)].dim, entries)

    def filtration(self) -> dict[int, int]:
        """Generator dimension per word length ``p + q``."""
        out: dict[int, int] = {}
        for lc in self.lchains:
            for rc in self.rchains:
                n = len(lc) + len(rc) - 2
                if n > self.depth:
                    continue
                size = self.t.dim(rc[0], lc[-1])
                size *= _product(self.lred[(lc[i], lc[i - 1])].complex.dim for i in range(1, len(lc)))
                size *= _product(self.rred[(rc[j], rc[j - 1])].complex.dim for j in range(1, len(rc)))
                if size:
                    out[n] = out.get(n, 0) + size
        return dict(sorted(out.items()))


def _by_column(m: Matrix) -> dict[int, list[tuple[int, object]]]:
    out: dict[int, list[tuple[int, object]]] = {}
    for r, c, v in m.nonzero_entries():
        out.setdefault(c, []).append((r, v))
    return out


def _shift_signs(block: _Block, word: Sequence[int]) -> list[int]:
    """``e_k = Σ_{j<k} (|u_j| - 1)`` for every position, plus the total."""
    out, acc = [], 0
    for f, u in zip(block.factors, word):
        out.append(acc)
        acc += f.degrees[u] - 1
    out.append(acc)
    return out


def _product(values) -> int:
    n = 1
    for v in values:
        n *= v
    return n


@dataclass(frozen=True)
class ResolutionResult:
    """``Q(T) → T`` with its word-length certificate."""

    source: Bimodule
    resolved: Bimodule
    augmentation: ModuleMorphism
    depth: int
    required_depth: int | None
    certified: bool
    verified: bool
    filtration: Mapping[int, int] = field(default_factory=dict)
    verified_from: int | None = None

    @property
    def is_identity(self) -> bool:
        return self.resolved is self.source

    @property
    def verified_range(self) -> dict | None:
        """Degrees on which ``Q(T) → T`` was checked to be a quasi-isomorphism."""
        if not self.verified:
            return None
        return {"from": self.verified_from, "to": None}

    def to_dict(self) -> dict:
        return {
            "source": self.source.name,
            "resolved_dims": self.resolved.dims(),
            "depth": self.depth,
            "required_depth": self.required_depth,
            "certified": self.certified,
            "verified": self.verified,
            "verified_range": self.verified_range,
            "filtration": {str(k): v for k, v in self.filtration.items()},
        }


def is_semifree_module(t: Bimodule) -> bool:
    """A module over one nontrivial side whose flag on that side is set."""
    if is_unit_category(t.left):
        return t.right_hprojective
    if is_unit_category(t.right):
        return t.left_hprojective
    return False


def _top_degree(complexes: Iterable[Complex]) -> int | None:
    return max((k for c in complexes for k in c.degrees), default=None)


def _exact_window(builder: _BarBuilder) -> int | None:
    """Lowest degree from which the truncated ``Q(T) → T`` must agree with the full one.

    Words longer than the cut sit in degrees at most
    ``top(ends) + (depth + 1)(top(reduced) - 1)``, so the window only exists
    when reduced homs live in degrees ``≤ 0``.
    """
    t = builder.t
    reduced = _top_degree(q.complex for red in (builder.lred, builder.rred) for q in red.values())
    if reduced is None or reduced > 0:
        return None
    ends = [_top_degree(t.left.hom.values()), _top_degree(t[k] for k in t.keys()),
            _top_degree(t.right.hom.values())]
    if None in ends:
        return None
    return sum(ends) + (builder.depth + 1) * (reduced - 1) + 2


def _qis_from(phi: ModuleMorphism, low: int) -> bool:
    """``H^k(phi)`` bijective for every ``k ≥ low``: the cones vanish from ``low - 1`` up."""
    for key in phi.source.keys():
        dims = cohomology(cone(phi.graded_map(key))).dims
        if any(v and k >= low - 1 for k, v in dims.items()):
            return False
    return True


def bar_resolution(t: Bimodule, depth: int | None = None) -> ResolutionResult:
    """Two-sided normalised bar resolution truncated at word length *depth*."""
    if is_semifree_module(t):
        return _identity_resolution(t)
    left_bound, right_bound = bar_length_bound(t.left), bar_length_bound(t.right)
    required = None if left_bound is None or right_bound is None else left_bound + right_bound
    if depth is None:
        depth = required if required is not None else MAX_BAR_DEPTH
    certified = required is not None and depth >= required
    if not certified:
        logger.warning("bar resolution of %s at depth %d is truncated (required %s)", t.name, depth, required)
    builder = _BarBuilder(t, depth)
    comp = {}
    for key, c in builder.components.items():
        comp[key] = Complex(c.field, c.degrees, builder.differential(*key))
    lact = {(l, l2, r): builder.left_action(l, l2, r)
            for r in t.right.objects for l, l2 in t.left.pairs()}
    ract = {(r2, r, l): builder.right_action(r2, r, l)
            for l in t.left.objects for r2, r in t.right.pairs()}
    resolved = make_bimodule(t.left, t.right, comp, lact, ract, f"Q({t.name})",
                             left_hprojective=certified, right_hprojective=certified)
    aug = ModuleMorphism(resolved, t, 0, {key: builder.augmentation(*key) for key in t.keys()})
    if certified:
        low, verified = None, aug.is_closed and is_qis_morphism(aug)
    else:
        low = _exact_window(builder)
        verified = low is not None and aug.is_closed and _qis_from(aug, low)
    logger.info("resolved %s at depth %d: dims %s, certified=%s verified=%s from %s",
                t.name, depth, resolved.dims(), certified, verified, low)
    return ResolutionResult(t, resolved, aug, depth, required, certified, verified,
                            builder.filtration(), low)


def require_certified(result: ResolutionResult, force: bool = False) -> ResolutionResult:
    """Refuse truncated resolutions unless *force*; forced use is logged."""
    if result.certified and result.verified:
        return result
    if not force:
        raise UncertifiedResolutionError(
            f"resolution of {result.source.name} at depth {result.depth} is not certified "
            f"(required depth {result.required_depth})")
    logger.warning("using uncertified resolution of %s at depth %d", result.source.name, result.depth)
    return result


def resolve(t: Bimodule, depth: int | None = None, force: bool = False) -> ResolutionResult:
    return require_certified(bar_resolution(t, depth), force)


# ============================================================
# DERIVED HOM AND COMPOSITION
# ============================================================

@dataclass(frozen=True)
class DerivedHom:
    """``H^i Nat(Q M, N)`` for every ``i``."""

    dims: Mapping[int, int]
    resolution: ResolutionResult

    def to_dict(self) -> dict:
        return {"dims": {str(k): v for k, v in self.dims.items()}, "resolution": self.resolution.to_dict()}


def derived_hom(m: Bimodule, n: Bimodule, depth: int | None = None, force: bool = False) -> DerivedHom:
    res = resolve(m, depth, force)
    nat = nat_complex(res.resolved, n)
    return DerivedHom(cohomology(nat.complex).dims, res)


_HPROJECTIVE_FLAGS = ("first_left", "first_right", "second_left", "second_right")


@dataclass(frozen=True)
class DerivedComposition:
    """``G ⋄ᴸ F`` with the resolutions it was computed from."""

    result: Bimodule
    first: ResolutionResult | None
    second: ResolutionResult | None
    flagged: tuple[str, ...] = ()

    @property
    def semifree(self) -> bool:
        """Both factors are resolved and certified, or flagged h-projective on both sides."""
        if self.first is None and self.second is None:
            return set(_HPROJECTIVE_FLAGS) <= set(self.flagged)
        return all(r is not None and r.certified for r in (self.first, self.second))

    @property
    def certificate(self) -> str:
        if self.first is None and self.second is None:
            return "flags:" + ",".join(self.flagged)
        return "resolution"

    def to_dict(self) -> dict:
        return {
            "dims": self.result.dims(),
            "first": self.first.to_dict() if self.first else None,
            "second": self.second.to_dict() if self.second else None,
            "semifree": self.semifree,
            "certificate": self.certificate,
        }


def derived_compose(g: Bimodule, f: Bimodule, depth: int | None = None, force: bool = False,
                    resolve_both: bool = False) -> DerivedComposition:
    """``G ⋄ᴸ F``; one resolution suffices unless *resolve_both*.

    ``F_A`` h-projective for every ``A`` (or every ``G^C``) already computes
    the derived tensor, so flagged inputs are composed directly.
    """
    if resolve_both:
        rf, rg = resolve(f, depth, force), resolve(g, depth, force)
        return DerivedComposition(compose(rg.resolved, rf.resolved), rf, rg)
    if f.right_hprojective or g.left_hprojective:
        flags = (f.left_hprojective, f.right_hprojective, g.left_hprojective, g.right_hprojective)
        flagged = tuple(name for name, ok in zip(_HPROJECTIVE_FLAGS, flags) if ok)
        return DerivedComposition(compose(g, f), None, None, flagged)
    rf = resolve(f, depth, force)
    return DerivedComposition(compose(g, rf.resolved), rf, None)


# ============================================================
# STRUCTURAL MAPS
# ============================================================

def endomorphism_data(t: Bimodule) -> tuple[Bimodule, dict[tuple[str, str], NatComplex]]:
    """``E(A, A′) = Nat(T_A, T_{A′})`` over ``(𝐀, 𝐀)``, acted on by ``λ_g ∘ -`` and ``- ∘ λ_f``."""
    acat, fld = t.left, t.field
    comps = {a: component(t, a) for a in acat.objects}
    nats = {(a, a2): nat_complex(comps[a], comps[a2]) for a in acat.objects for a2 in acat.objects}
    lact, ract = {}, {}
    for a in acat.objects:
        for a2, a3 in acat.pairs():
            src, dst = nats[(a, a2)], nats[(a, a3)]
            ops = []
            for i in range(acat.dim(a2, a3)):
                g = acat.basis(a2, a3, i)
                post = {(b, UNIT_OBJECT): t.left_matrix(a2, a3, b, g) for b in t.right.objects}
                ops.append(nat_operator(src, dst, left=post))
            lact[(a2, a3, a)] = stack_bilinear(fld, ops, src.dim, dst.dim)
    for a2 in acat.objects:
        for a0, a in acat.pairs():
            src, dst = nats[(a, a2)], nats[(a0, a2)]
            ops = []
            for i in range(acat.dim(a0, a)):
                f = acat.basis(a0, a, i)
                pre = {(b, UNIT_OBJECT): t.left_matrix(a0, a, b, f) for b in t.right.objects}
                ops.append(nat_operator(src, dst, right=pre))
            ract[(a0, a, a2)] = stack_bilinear(fld, ops, src.dim, dst.dim, on_right=True)
    comp = {k: n.complex for k, n in nats.items()}
    return make_bimodule(acat, acat, comp, lact, ract, f"End({t.name})"), nats


def _through_coend(data: CompositionData, target: Bimodule,
                   pairing: Callable[[str, str, str], Matrix], name: str) -> ModuleMorphism:
    """The map out of ``G ⋄ F`` induced by a cowedge given on the tensor blocks."""
    fld = target.field
    maps = {}
    for key, q in data.coends.items():
        height = target.dim(*key)
        entries: dict[tuple[int, int], object] = {}
        for b in q.objects:
            block = pairing(key[0], key[1], b)
            for r, c, v in block.nonzero_entries():
                entries[(r, q.offsets[b] + c)] = v
        full = Matrix.from_entries(fld, height, q.product.dim, entries)
        section, projection = q.quotient.section, q.quotient.projection
        if full @ section @ projection != full:
            raise ValidationError("cowedge", f"{name} does not factor through the coend", {"key": key})
        maps[key] = full @ section
    return ModuleMorphism(data.result, target, 0, maps)


def _columns_matrix(fld, height: int, columns: list) -> Matrix:
    return Matrix.from_columns(fld, height, columns) if columns else Matrix.zeros(fld, height, 0)


@dataclass(frozen=True)
class StructuralMaps:
    """The maps relating ``T``, ``L(T)`` and ``E = Nat(T_-, T_-)``.

    ``t: h_𝐀 → E``, ``n: L ⋄ T → E``, ``e: T ⋄ E → T``,
    ``e′: E ⋄ L → L`` and ``ε: T ⋄ L → h_𝐁``.
    """

    bimodule: Bimodule
    dual: Bimodule
    endo: Bimodule
    t: ModuleMorphism
    n: ModuleMorphism
    e: ModuleMorphism
    e_prime: ModuleMorphism
    counit: ModuleMorphism

    def named(self) -> dict[str, ModuleMorphism]:
        return {"t": self.t, "n": self.n, "e": self.e, "e_prime": self.e_prime, "counit": self.counit}

    def to_dict(self) -> dict:
        return {
            name: {"source": m.source.name, "target": m.target.name, "closed": m.is_closed,
                   "source_dims": m.source.dims(), "maps": m.to_dict()["maps"]}
            for name, m in self.named().items()
        }


def structural_maps(t: Bimodule) -> StructuralMaps:
    """Build ``t``, ``n``, ``e``, ``e′`` and ``ε`` for *t*, exactly."""
    acat, bcat, fld = t.left, t.right, t.field
    dual, dual_data = L_dual_data(t)
    endo, endo_nats = endomorphism_data(t)
    comps = {a: component(t, a) for a in acat.objects}

    # t: g ↦ λ_g
    tmaps = {}
    for a, a2 in acat.pairs():
        nat = endo_nats[(a, a2)]
        cols = []
        for i in range(acat.dim(a, a2)):
            g = acat.basis(a, a2, i)
            lam = {(b, UNIT_OBJECT): t.left_matrix(a, a2, b, g) for b in bcat.objects}
            cols.append(nat.coordinates(ModuleMorphism(comps[a], comps[a2], acat.degree(a, a2, i), lam)))
        tmaps[(a, a2)] = _columns_matrix(fld, nat.dim, cols)
    t_map = ModuleMorphism(diagonal(acat), endo, 0, tmaps)

    # n: x ⊗ φ ↦ (y ↦ x φ(y))
    def pair_n(c: str, a: str, b: str) -> Matrix:
        target, dual_nat = endo_nats[(c, a)], dual_data[c].nats[b]
        xs = t[(b, a)]
        cols = []
        for i in range(xs.dim):
            yon = yoneda_family(comps[a], b, unit_vector(fld, xs.dim, i), xs.degrees[i])
            for k in range(dual_nat.dim):
                phi = dual_nat.components(unit_vector(fld, dual_nat.dim, k))
                family = {key: yon.maps[key] @ phi[key] for key in phi}
                degree = xs.degrees[i] + dual_nat.complex.degrees[k]
                cols.append(target.coordinates(ModuleMorphism(comps[c], comps[a], degree, family)))
        return _columns_matrix(fld, target.dim, cols)

    n_map = _through_coend(composition_data(dual, t), endo, pair_n, "n")

    # e: φ ⊗ x ↦ φ(x)
    def pair_e(c: str, a: str, a2: str) -> Matrix:
        nat = endo_nats[(a2, a)]
        xs = t[(c, a2)]
        cols = []
        for i in range(nat.dim):
            phi_c = nat.components(unit_vector(fld, nat.dim, i))[(c, UNIT_OBJECT)]
            cols.extend(phi_c.column(j) for j in range(xs.dim))
        return _columns_matrix(fld, t.dim(c, a), cols)

    e_map = _through_coend(composition_data(t, endo), t, pair_e, "e")

    # e′: ψ ⊗ φ ↦ ψ ∘ φ
    def pair_e_prime(c: str, b: str, a: str) -> Matrix:
        psi_nat, phi_nat, target = dual_data[a].nats[b], endo_nats[(c, a)], dual_data[c].nats[b]
        cols = []
        for i in range(psi_nat.dim):
            psi = psi_nat.components(unit_vector(fld, psi_nat.dim, i))
            for k in range(phi_nat.dim):
                phi = phi_nat.components(unit_vector(fld, phi_nat.dim, k))
                family = {key: psi[key] @ phi[key] for key in phi}
                degree = psi_nat.complex.degrees[i] + phi_nat.complex.degrees[k]
                cols.append(target.coordinates(ModuleMorphism(comps[c], target.target, degree, family)))
        return _columns_matrix(fld, target.dim, cols)

    e_prime_map = _through_coend(composition_data(endo, dual), dual, pair_e_prime, "e′")

    # ε: φ ⊗ x ↦ φ(x)
    def pair_counit(c: str, b: str, a: str) -> Matrix:
        nat = dual_data[a].nats[b]
        xs = t[(c, a)]
        cols = []
        for i in range(nat.dim):
            phi_c = nat.components(unit_vector(fld, nat.dim, i))[(c, UNIT_OBJECT)]
            cols.extend(phi_c.column(j) for j in range(xs.dim))
        return _columns_matrix(fld, bcat.dim(c, b), cols)

    counit_map = _through_coend(composition_data(t, dual), diagonal(bcat), pair_counit, "ε")
    logger.debug("structural maps of %s built", t.name)
    return StructuralMaps(t, dual, endo, t_map, n_map, e_map, e_prime_map, counit_map)


# ============================================================
# WHISKERING AND THE QUASI-ADJUNCTION DIAGRAMS
# ============================================================

def whisker_left(g: Bimodule, phi: ModuleMorphism) -> ModuleMorphism:
    """``G ⋄ φ: G ⋄ F → G ⋄ F′``."""
    src, dst = composition_data(g, phi.source), composition_data(g, phi.target)
    fld = g.field
    maps = {}
    for key in src.result.keys():
        c, a = key
        blocks = [kron(phi.maps[(b, a)], Matrix.identity(fld, g.dim(c, b))) for b in g.left.objects]
        maps[key] = _coend_induced(src.coends[key], dst.coends[key], blocks)
    return ModuleMorphism(src.result, dst.result, phi.degree, maps)


def whisker_right(psi: ModuleMorphism, f: Bimodule) -> ModuleMorphism:
    """``ψ ⋄ F: G ⋄ F → G′ ⋄ F`` with ``x ⊗ y ↦ (-1)^{|ψ||x|} x ⊗ ψ(y)``."""
    src, dst = composition_data(psi.source, f), composition_data(psi.target, f)
    fld = f.field
    maps = {}
    for key in src.result.keys():
        c, a = key
        blocks = [kron(_parity(fld, f[(b, a)], psi.degree), psi.maps[(c, b)]) for b in f.right.objects]
        maps[key] = _coend_induced(src.coends[key], dst.coends[key], blocks)
    return ModuleMorphism(src.result, dst.result, psi.degree, maps)


def associator(h: Bimodule, g: Bimodule, f: Bimodule) -> tuple[ModuleMorphism, ModuleMorphism]:
    """``H ⋄ (G ⋄ F) → (H ⋄ G) ⋄ F`` and back."""
    left = compose(h, compose(g, f))
    right = compose(compose(h, g), f)
    witness = associativity_witness(h, g, f)
    forward = ModuleMorphism(left, right, 0, {k: w.forward.matrix for k, w in witness.items()})
    backward = ModuleMorphism(right, left, 0, {k: w.backward.matrix for k, w in witness.items()})
    return forward, backward


def _mismatch(lhs: ModuleMorphism, rhs: ModuleMorphism) -> tuple[str, str] | None:
    for key in lhs.source.keys():
        if lhs.maps[key] != rhs.maps[key]:
            return key
    return None


def _compare(check: str, lhs: ModuleMorphism, rhs: ModuleMorphism) -> Report:
    key = _mismatch(lhs, rhs)
    if key is None:
        return Report.passed(check)
    return Report.failed(check, "the two composites differ", key=key)


def _compare_in_h0(check: str, lhs: ModuleMorphism, rhs: ModuleMorphism) -> Report:
    """Equal in H⁰: the difference is a closed boundary of ``Nat(source, target)``."""
    diff = lhs - rhs
    if diff.is_zero:
        return Report.passed(check)
    key = _mismatch(lhs, rhs)
    if not diff.is_closed:
        return Report.failed(check, "the composites differ by a map that is not closed", key=key)
    nat = nat_complex(lhs.source, lhs.target)
    c = nat.complex
    cols = list(c.indices(lhs.degree - 1))
    if cols and solve(c.d.submatrix(range(c.dim), cols), nat.coordinates(diff)) is not None:
        return Report.passed(check)
    return Report.failed(check, "the composites differ in H⁰", key=key)


@dataclass(frozen=True)
class DiagramReport:
    """Per-cell outcome of the quasi-adjunction diagrams, first failure first."""

    report: Report
    cells: Mapping[str, bool]
    derived: bool
    resolution: ResolutionResult | None = None

    def to_dict(self) -> dict:
        return {
            "report": self.report.to_dict(),
            "cells": dict(self.cells),
            "derived": self.derived,
            "resolution": self.resolution.to_dict() if self.resolution else None,
        }


def diagram_checks(maps: StructuralMaps) -> list[Report]:
    """Top rows equal identities and both squares commute, exactly."""
    t, dual = maps.bimodule, maps.dual
    right_unit_t = coyoneda_witness(t, Side.LEFT)
    left_unit_t = coyoneda_witness(t, Side.RIGHT)
    right_unit_l = coyoneda_witness(dual, Side.LEFT)
    left_unit_l = coyoneda_witness(dual, Side.RIGHT)

    top_t = maps.e @ whisker_left(t, maps.t) @ right_unit_t.backward
    fwd_tlt, _ = associator(t, dual, t)
    square_t = (maps.e @ whisker_left(t, maps.n),
                left_unit_t.forward @ whisker_right(maps.counit, t) @ fwd_tlt)

    top_l = maps.e_prime @ whisker_right(maps.t, dual) @ left_unit_l.backward
    _, bwd_ltl = associator(dual, t, dual)
    square_l = (maps.e_prime @ whisker_right(maps.n, dual),
                right_unit_l.forward @ whisker_left(dual, maps.counit) @ bwd_ltl)
    return [
        _compare("top_row_T", top_t, identity_morphism(t)),
        _compare("square_T", *square_t),
        _compare("top_row_L", top_l, identity_morphism(dual)),
        _compare("square_L", *square_l),
    ]


def verify_quasiadj_diagrams(t: Bimodule, derived: bool = False, depth: int | None = None,
                             force: bool = False) -> DiagramReport:
    """Check both quasi-adjunction diagrams for *t*, or for ``Q(T)`` when *derived*."""
    resolution = None
    if derived and not t.right_hprojective:
        resolution = resolve(t, depth, force)
        t = resolution.resolved
    reports = diagram_checks(structural_maps(t))
    cells = {r.check: r.ok for r in reports}
    report = first_failure(*reports, check="quasiadj_diagrams")
    if not report:
        logger.warning("quasi-adjunction diagram %s fails for %s", report.check, t.name)
    return DiagramReport(report, cells, derived, resolution)


# ============================================================
# QUASI-REPRESENTABILITY
# ============================================================

def is_right_quasi_representable(t: Bimodule, seed: int = DEFAULT_SEED, parallel: bool = False) -> ReprWitness | None:
    """``h_{F(A)} → T_A`` an objectwise quasi-isomorphism for every ``A``."""
    return search_representability(t, Side.RIGHT, ReprKind.QUASI, seed, parallel=parallel).witness


def is_left_quasi_representable(s: Bimodule, seed: int = DEFAULT_SEED, parallel: bool = False) -> ReprWitness | None:
    return search_representability(s, Side.LEFT, ReprKind.QUASI, seed, parallel=parallel).witness


# ============================================================
# ADJUNCTIONS
# ============================================================

@dataclass(frozen=True)
class AdjunctionWitness:
    """``left ⊣ right`` with unit ``h_𝐀 → right ⋄ left`` (from ``Q(h_𝐀)`` when derived)."""

    left: Bimodule
    right: Bimodule
    unit: ModuleMorphism
    counit: ModuleMorphism
    level: Level
    report: Report
    checks: Mapping[str, bool]
    representability: ReprWitness
    resolution: ResolutionResult | None = None
    homotopy: ModuleMorphism | None = None

    def to_dict(self) -> dict:
        return {
            "left": self.left.name,
            "right": self.right.name,
            "right_dims": self.right.dims(),
            "level": self.level.value,
            "report": self.report.to_dict(),
            "checks": dict(self.checks),
            "unit": self.unit.to_dict(),
            "counit": self.counit.to_dict(),
            "representability": self.representability.to_dict(),
            "resolution": self.resolution.to_dict() if self.resolution else None,
        }


def _triangle_checks(maps: StructuralMaps, unit: ModuleMorphism) -> list[Report]:
    t, dual = maps.bimodule, maps.dual
    fwd_tlt, _ = associator(t, dual, t)
    first = (coyoneda_witness(t, Side.RIGHT).forward @ whisker_right(maps.counit, t) @ fwd_tlt
             @ whisker_left(t, unit) @ coyoneda_witness(t, Side.LEFT).backward)
    _, bwd_ltl = associator(dual, t, dual)
    second = (coyoneda_witness(dual, Side.LEFT).forward @ whisker_left(dual, maps.counit) @ bwd_ltl
              @ whisker_right(unit, dual) @ coyoneda_witness(dual, Side.RIGHT).backward)
    return [
        _compare("triangle_T", first, identity_morphism(t)),
        _compare("triangle_L", second, identity_morphism(dual)),
    ]


def _derived_triangle_checks(maps: StructuralMaps, unit: ModuleMorphism,
                             augmentation: ModuleMorphism) -> list[Report]:
    """Both triangles for ``η: Q h_𝐀 → L ⋄ T``, compared in H⁰ with the augmentation."""
    t, dual = maps.bimodule, maps.dual
    fwd_tlt, _ = associator(t, dual, t)
    first = (coyoneda_witness(t, Side.RIGHT).forward @ whisker_right(maps.counit, t) @ fwd_tlt
             @ whisker_left(t, unit))
    first_ref = coyoneda_witness(t, Side.LEFT).forward @ whisker_left(t, augmentation)
    _, bwd_ltl = associator(dual, t, dual)
    second = (coyoneda_witness(dual, Side.LEFT).forward @ whisker_left(dual, maps.counit) @ bwd_ltl
              @ whisker_right(unit, dual))
    second_ref = coyoneda_witness(dual, Side.RIGHT).forward @ whisker_right(augmentation, dual)
    return [
        _compare_in_h0("triangle_T", first, first_ref),
        _compare_in_h0("triangle_L", second, second_ref),
    ]


def _lift_unit(maps: StructuralMaps, depth: int | None, force: bool
               ) -> tuple[ModuleMorphism, ModuleMorphism, ResolutionResult]:
    """Solve ``n ∘ η - t ∘ aug = d k`` with ``η`` closed, over ``Nat(Q h_𝐀, -)``."""
    fld = maps.bimodule.field
    res = resolve(diagonal(maps.bimodule.left), depth, force)
    source = res.resolved
    nat_x = nat_complex(source, maps.n.source)
    nat_e = nat_complex(source, maps.endo)
    post_n = nat_operator(nat_x, nat_e, left=maps.n.maps)
    target = nat_e.coordinates(maps.t @ res.augmentation)
    cx, ce = nat_x.complex, nat_e.complex
    eta_cols, k_cols = list(cx.indices(0)), list(ce.indices(-1))
    top = cx.d.submatrix(range(cx.dim), eta_cols).hstack(Matrix.zeros(fld, cx.dim, len(k_cols)))
    bottom = post_n.submatrix(range(ce.dim), eta_cols).hstack(-ce.d.submatrix(range(ce.dim), k_cols))
    sol = solve(top.vstack(bottom), (fld.zero,) * cx.dim + tuple(target))
    if sol is None:
        raise ValidationError("unit", "t does not lift through n up to homotopy")
    eta_vec, k_vec = [fld.zero] * cx.dim, [fld.zero] * ce.dim
    for idx, v in zip(eta_cols, sol[:len(eta_cols)]):
        eta_vec[idx] = v
    for idx, v in zip(k_cols, sol[len(eta_cols):]):
        k_vec[idx] = v
    return nat_x.morphism(eta_vec, 0), nat_e.morphism(k_vec, -1), res


def build_adjunction(t: Bimodule, witness: ReprWitness | None = None, depth: int | None = None,
                     force: bool = False, seed: int = DEFAULT_SEED,
                     prefer_exact: bool = True) -> AdjunctionWitness:
    """``T ⊣ 𝕃L(T)`` for a right quasi-representable *t*.

    A strictly representable (or already resolved) ``T`` whose ``n`` is
    invertible gives ``η = n⁻¹ t`` with exact triangle identities.
    Otherwise, or when *prefer_exact* is off, ``η`` is obtained by lifting
    ``t`` through the quasi-isomorphism ``n`` out of ``Q(h_𝐀)`` and both
    triangles are checked in H⁰ against the augmentation.
    """
    if witness is None:
        witness = is_right_representable(t, seed) or is_right_quasi_representable(t, seed)
    if witness is None:
        raise ValidationError("representability", f"{t.name} is not right quasi-representable")
    resolution = None
    if witness.kind is not ReprKind.STRICT and not t.right_hprojective:
        resolution = resolve(t, depth, force)
        t = resolution.resolved
    maps = structural_maps(t)
    diagrams = diagram_checks(maps)
    checks = {r.check: r.ok for r in diagrams}
    iso = module_iso(maps.n) if prefer_exact else None
    if iso is not None:
        unit = iso.backward @ maps.t
        reports = _triangle_checks(maps, unit)
        checks.update({r.check: r.ok for r in reports})
        report = first_failure(*diagrams, *reports, check="adjunction")
        logger.info("exact adjunction %s ⊣ %s: %s", t.name, maps.dual.name, report.ok)
        return AdjunctionWitness(t, maps.dual, unit, maps.counit, Level.EXACT, report, checks,
                                 witness, resolution)
    n_qis = maps.n.is_closed and is_qis_morphism(maps.n)
    checks["n_quasi_iso"] = n_qis
    if not n_qis:
        report = Report.failed("n_quasi_iso", "n is not a quasi-isomorphism", bimodule=t.name)
        return AdjunctionWitness(t, maps.dual, maps.t, maps.counit, Level.DERIVED, report, checks,
                                 witness, resolution)
    unit, homotopy, unit_res = _lift_unit(maps, depth, force)
    lifted = (maps.n @ unit) - (maps.t @ unit_res.augmentation)
    lift_ok = _mismatch(lifted, homotopy.differential()) is None and unit.is_closed
    lift_report = (Report.passed("unit_lift") if lift_ok
                   else Report.failed("unit_lift", "n η differs from t ε up to the homotopy"))
    triangles = _derived_triangle_checks(maps, unit, unit_res.augmentation)
    checks["unit_lift"] = lift_ok
    checks.update({r.check: r.ok for r in triangles})
    report = first_failure(*diagrams, lift_report, *triangles, check="adjunction")
    logger.info("derived adjunction %s ⊣ %s: %s", t.name, maps.dual.name, report.ok)
    return AdjunctionWitness(t, maps.dual, unit, maps.counit, Level.DERIVED, report, checks,
                             witness, resolution, homotopy)


@dataclass(frozen=True)
class CoAdjunction:
    """``ℝR(S) ⊣ S``: the adjunction for ``ℝR(S)`` and the comparison ``S → 𝕃L ℝR(S)``."""

    source: Bimodule
    adjunction: AdjunctionWitness
    comparison: ModuleMorphism
    comparison_level: str
    resolution: ResolutionResult | None = None

    @property
    def ok(self) -> bool:
        return self.adjunction.report.ok and self.comparison_level != "none"

    def to_dict(self) -> dict:
        return {
            "source": self.source.name,
            "adjunction": self.adjunction.to_dict(),
            "comparison_level": self.comparison_level,
            "resolution": self.resolution.to_dict() if self.resolution else None,
        }


def co_build_adjunction(s: Bimodule, witness: ReprWitness | None = None, depth: int | None = None,
                        force: bool = False, seed: int = DEFAULT_SEED) -> CoAdjunction:
    """``ℝR(S) ⊣ S`` for a left quasi-representable *s*."""
    strict = is_left_representable(s, seed)
    if witness is None:
        witness = strict or is_left_quasi_representable(s, seed)
    if witness is None:
        raise ValidationError("representability", f"{s.name} is not left quasi-representable")
    resolution = None
    qs = s
    if strict is None and not s.left_hprojective:
        resolution = resolve(s, depth, force)
        qs = resolution.resolved
    adjunction = build_adjunction(R_dual(qs), depth=depth, force=force, seed=seed)
    comparison = LR_counit(qs)
    if adjunction.resolution is not None:
        comparison = L_map(adjunction.resolution.augmentation) @ comparison
    if module_iso(comparison) is not None:
        level = "iso"
    elif is_qis_morphism(comparison):
        level = "quasi_iso"
    else:
        level = "none"
    logger.info("co-adjunction for %s: comparison %s", s.name, level)
    return CoAdjunction(s, adjunction, comparison, level, resolution)


@dataclass(frozen=True)
class AdjointDecision:
    """Whether a quasi-functor has a left adjoint, with the evidence either way."""

    exists: bool
    search: SearchOutcome
    adjoint: CoAdjunction | None = None

    def to_dict(self) -> dict:
        return {
            "exists": self.exists,
            "search": self.search.to_dict(),
            "adjoint": self.adjoint.to_dict() if self.adjoint else None,
        }


def has_left_adjoint(s: Bimodule, depth: int | None = None, force: bool = False,
                     seed: int = DEFAULT_SEED, parallel: bool = False) -> AdjointDecision:
    """A quasi-functor has a left adjoint exactly when it is left quasi-representable."""
    outcome = search_representability(s, Side.LEFT, ReprKind.QUASI, seed, parallel=parallel)
    if outcome.witness is None:
        logger.info("%s has no left adjoint (exhaustive=%s, failed at %s)",
                    s.name, outcome.exhaustive, outcome.failed_at)
        return AdjointDecision(False, outcome)
    adjoint = co_build_adjunction(s, outcome.witness, depth, force, seed)
    return AdjointDecision(True, outcome, adjoint)


# ============================================================
# QUASI-FUNCTORS
# ============================================================

@dataclass(frozen=True)
class QuasiComposition:
    """``S ⋄ᴸ T`` with the composite assignment ``A ↦ G(F(A))`` verified."""

    composition: DerivedComposition
    witness: ReprWitness

    @property
    def result(self) -> Bimodule:
        return self.composition.result

    def to_dict(self) -> dict:
        return {"composition": self.composition.to_dict(), "witness": self.witness.to_dict()}


def quasi_functor_compose(s: Bimodule, t: Bimodule, depth: int | None = None, force: bool = False,
                          seed: int = DEFAULT_SEED, parallel: bool = False) -> QuasiComposition:
    """Compose quasi-functors ``T: 𝐀 → 𝐁`` and ``S: 𝐁 → 𝐂``."""
    wt = is_right_quasi_representable(t, seed, parallel)
    ws = is_right_quasi_representable(s, seed, parallel)
    if wt is None or ws is None:
        raise ValidationError("quasi_functor", "both factors must be right quasi-representable")
    composition = derived_compose(s, t, depth, force)
    expected = {a: [ws.assignment[wt.assignment[a]]] for a in t.left.objects}
    outcome = search_representability(composition.result, Side.RIGHT, ReprKind.QUASI, seed,
                                      candidates=expected, parallel=parallel)
    if outcome.witness is None:
        logger.warning("composite assignment rejected at %s, searching all objects", outcome.failed_at)
        outcome = search_representability(composition.result, Side.RIGHT, ReprKind.QUASI, seed,
                                          parallel=parallel)
    if outcome.witness is None:
        raise ValidationError("quasi_functor", "the composite is not right quasi-representable",
                              {"object": outcome.failed_at})
    return QuasiComposition(composition, outcome.witness)


# ============================================================
# DERIVED DUALITY
# ============================================================

@dataclass(frozen=True)
class DualityUnit:
    """``Q T → ℝR 𝕃L(T)`` in the h-projective model."""

    morphism: ModuleMorphism
    quasi_iso: bool
    first: ResolutionResult
    second: ResolutionResult

    def to_dict(self) -> dict:
        return {
            "quasi_iso": self.quasi_iso,
            "source_dims": self.morphism.source.dims(),
            "target_dims": self.morphism.target.dims(),
            "first": self.first.to_dict(),
            "second": self.second.to_dict(),
            "maps": self.morphism.to_dict()["maps"],
        }


def derived_duality_unit(t: Bimodule, depth: int | None = None, force: bool = False) -> DualityUnit:
    """``R(aug) ∘ LR_unit``: ``Q T → R L Q T → R Q L Q T``."""
    first = _identity_resolution(t) if t.right_hprojective else resolve(t, depth, force)
    dual = L_dual(first.resolved)
    second = _identity_resolution(dual) if dual.left_hprojective else resolve(dual, depth, force)
    unit = R_map(second.augmentation) @ LR_unit(first.resolved)
    qis = is_qis_morphism(unit)
    logger.info("derived duality unit of %s: quasi-iso=%s", t.name, qis)
    return DualityUnit(unit, qis, first, second)


def _identity_resolution(t: Bimodule) -> ResolutionResult:
    return ResolutionResult(t, t, identity_morphism(t), 0, 0, True, True, {0: t.total_dim})
