"""Bounded cochain complexes of finite-dimensional vector spaces.

A complex is stored flat: one degree per basis vector and a single
differential matrix ``d`` with ``d[i][j] != 0`` only when
``deg i == deg j + 1``.  Per-degree blocks are extracted on demand.

Sign conventions
----------------
* internal hom:  ``d f = d_W f - (-1)^|f| f d_V``
* tensor:        ``d(x⊗y) = dx⊗y + (-1)^|x| x⊗dy``, index ``i * dim D + j``
* shift:         ``C[n]^k = C^{k+n}`` with differential ``(-1)^n d``
* cone:          ``cone(f)^k = V^{k+1} ⊕ W^k``, ``d(v, w) = (-d v, f v + d w)``
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, NotClosedError, NotQuasiIsomorphismError, ValidationError
from .exact_linalg import (
    Field, Matrix, block_diagonal, cokernel, column_space_basis, in_span,
    inverse, kernel_basis, left_inverse, rank, solve,
)
from .models import Report

logger = logging.getLogger(__name__)


# ============================================================
# COMPLEXES
# ============================================================

@dataclass(frozen=True, eq=False)
class Complex:
    """A cochain complex: *degrees* of the basis and the differential *d*."""

    field: Field
    degrees: tuple[int, ...]
    d: Matrix

    def __post_init__(self) -> None:
        n = len(self.degrees)
        if self.d.shape != (n, n):
            raise DimensionMismatchError(f"differential {self.d.shape} for {n} basis vectors")
        for i, j, _ in self.d.nonzero_entries():
            if self.degrees[i] != self.degrees[j] + 1:
                raise ValidationError(
                    "degree", "differential does not raise degree by one",
                    {"row": i, "column": j},
                )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return self.field == other.field and self.degrees == other.degrees and self.d == other.d

    __hash__ = None

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, field: Field) -> Complex:
        return cls(field, (), Matrix.zeros(field, 0, 0))

    @classmethod
    def ground(cls, field: Field, degree: int = 0, dim: int = 1) -> Complex:
        """``𝕜^dim`` concentrated in *degree*."""
        return cls(field, (degree,) * dim, Matrix.zeros(field, dim, dim))

    @classmethod
    def from_blocks(cls, field: Field, dims: dict[int, int], diffs: dict[int, Matrix] | None = None) -> Complex:
        """Assemble from ``dims[n]`` and blocks ``diffs[n]: C^n → C^{n+1}``."""
        diffs = diffs or {}
        degrees: list[int] = []
        offset: dict[int, int] = {}
        for n in sorted(dims):
            offset[n] = len(degrees)
            degrees.extend([n] * dims[n])
        entries = {}
        for n, block in diffs.items():
            if block.shape != (dims.get(n + 1, 0), dims.get(n, 0)):
                raise DimensionMismatchError(f"block d^{n} has shape {block.shape}")
            for i, j, a in block.nonzero_entries():
                entries[(offset[n + 1] + i, offset[n] + j)] = a
        dim = len(degrees)
        return cls(field, tuple(degrees), Matrix.from_entries(field, dim, dim, entries))

    # -- structure -----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @cached_property
    def _by_degree(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for i, n in enumerate(self.degrees):
            out.setdefault(n, []).append(i)
        return {n: tuple(v) for n, v in sorted(out.items())}

    def indices(self, n: int) -> tuple[int, ...]:
        return self._by_degree.get(n, ())

    @property
    def dims(self) -> dict[int, int]:
        return {n: len(v) for n, v in self._by_degree.items()}

    @property
    def support(self) -> list[int]:
        return list(self._by_degree)

    def differential(self, n: int) -> Matrix:
        """The block ``d^n: C^n → C^{n+1}``."""
        return self.d.submatrix(self.indices(n + 1), self.indices(n))

    def euler_characteristic(self) -> int:
        return sum((-1) ** (n % 2) * k for n, k in self.dims.items())

    def basis_degree(self, i: int) -> int:
        return self.degrees[i]


def validate_complex(c: Complex) -> Report:
    """Pass iff ``d ∘ d = 0``; a failure names the middle degree."""
    for n in c.support:
        if not (c.differential(n) @ c.differential(n - 1)).is_zero:
            return Report.failed("d_squared", f"d∘d ≠ 0 through degree {n}", degree=n)
    return Report.passed("d_squared")


def direct_sum(field: Field, complexes: Sequence[Complex]) -> tuple[Complex, list[int]]:
    """Block sum together with the basis offset of each summand."""
    offsets, degrees, start = [], [], 0
    for c in complexes:
        offsets.append(start)
        degrees.extend(c.degrees)
        start += c.dim
    return Complex(field, tuple(degrees), block_diagonal(field, [c.d for c in complexes])), offsets


# ============================================================
# GRADED MAPS
# ============================================================

@dataclass(frozen=True)
class GradedMap:
    """A homogeneous linear map of the given *degree*; ``matrix`` is target × source."""

    source: Complex
    target: Complex
    degree: int
    matrix: Matrix

    def __post_init__(self) -> None:
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise DimensionMismatchError(
                f"map matrix {self.matrix.shape} for {self.target.dim}×{self.source.dim}"
            )
        for t, s, _ in self.matrix.nonzero_entries():
            if self.target.degrees[t] != self.source.degrees[s] + self.degree:
                raise ValidationError(
                    "degree", f"entry ({t}, {s}) is not of degree {self.degree}",
                    {"row": t, "column": s},
                )

    @classmethod
    def identity(cls, c: Complex) -> GradedMap:
        return cls(c, c, 0, Matrix.identity(c.field, c.dim))

    @classmethod
    def zero(cls, source: Complex, target: Complex, degree: int = 0) -> GradedMap:
        return cls(source, target, degree, Matrix.zeros(source.field, target.dim, source.dim))

    @property
    def field(self) -> Field:
        return self.source.field

    def __matmul__(self, other: GradedMap) -> GradedMap:
        """``self ∘ other``."""
        return GradedMap(other.source, self.target, self.degree + other.degree, self.matrix @ other.matrix)

    def __add__(self, other: GradedMap) -> GradedMap:
        return GradedMap(self.source, self.target, self.degree, self.matrix + other.matrix)

    def __sub__(self, other: GradedMap) -> GradedMap:
        return GradedMap(self.source, self.target, self.degree, self.matrix - other.matrix)

    def __neg__(self) -> GradedMap:
        return GradedMap(self.source, self.target, self.degree, -self.matrix)

    def scale(self, c) -> GradedMap:
        return GradedMap(self.source, self.target, self.degree, self.matrix.scale(c))

    def block(self, n: int) -> Matrix:
        """The component ``source^n → target^{n+degree}``."""
        return self.matrix.submatrix(self.target.indices(n + self.degree), self.source.indices(n))

    @property
    def is_zero(self) -> bool:
        return self.matrix.is_zero

    @property
    def is_closed(self) -> bool:
        return differential_of_map(self).is_zero


ChainMap = GradedMap


def chain_map(source: Complex, target: Complex, matrix: Matrix) -> GradedMap:
    """A degree-0 map, rejected with :class:`NotClosedError` unless closed."""
    f = GradedMap(source, target, 0, matrix)
    if not f.is_closed:
        raise NotClosedError("map does not commute with the differentials")
    return f


def differential_of_map(f: GradedMap) -> GradedMap:
    """``d_W ∘ f - (-1)^|f| f ∘ d_V``, a map of degree ``|f| + 1``."""
    sign = f.field.sign(f.degree)
    m = f.target.d @ f.matrix - (f.matrix @ f.source.d).scale(sign)
    return GradedMap(f.source, f.target, f.degree + 1, m)


# ============================================================
# CONSTRUCTIONS
# ============================================================

def shift(c: Complex, n: int) -> Complex:
    return Complex(c.field, tuple(k - n for k in c.degrees), c.d.scale(c.field.sign(n)))


def cone(f: GradedMap) -> Complex:
    """``cone(f)^k = V^{k+1} ⊕ W^k``; basis is source then target."""
    _require_chain_map(f)
    field = f.field
    v, w = f.source, f.target
    top = (-v.d).hstack(Matrix.zeros(field, v.dim, w.dim))
    bottom = f.matrix.hstack(w.d)
    degrees = tuple(k - 1 for k in v.degrees) + w.degrees
    return Complex(field, degrees, top.vstack(bottom))


def cone_maps(f: GradedMap) -> tuple[GradedMap, GradedMap]:
    """Inclusion ``W → cone(f)`` and projection ``cone(f) → V[1]``."""
    c = cone(f)
    field = f.field
    v, w = f.source, f.target
    inclusion = Matrix.zeros(field, v.dim, w.dim).vstack(Matrix.identity(field, w.dim))
    projection = Matrix.identity(field, v.dim).hstack(Matrix.zeros(field, v.dim, w.dim))
    return GradedMap(w, c, 0, inclusion), GradedMap(c, shift(v, 1), 0, projection)


def tensor_index(i: int, j: int, dim_right: int) -> int:
    return i * dim_right + j


def tensor(c: Complex, d: Complex) -> Complex:
    """``C ⊗ D`` with the Koszul differential; basis ``x_i ⊗ y_j`` at ``i * dim D + j``."""
    field = c.field
    n = d.dim
    degrees = tuple(a + b for a in c.degrees for b in d.degrees)
    entries: dict[tuple[int, int], object] = {}
    for i2, i, a in c.d.nonzero_entries():
        for j in range(n):
            _accumulate(entries, (i2 * n + j, i * n + j), a)
    for j2, j, b in d.d.nonzero_entries():
        for i in range(c.dim):
            _accumulate(entries, (i * n + j2, i * n + j), field.sign(c.degrees[i]) * b)
    dim = c.dim * n
    return Complex(field, degrees, Matrix.from_entries(field, dim, dim, entries))


def tensor_maps(f: GradedMap, g: GradedMap, source: Complex | None = None,
                target: Complex | None = None) -> GradedMap:
    """``(f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)``."""
    field = f.field
    source = source or tensor(f.source, g.source)
    target = target or tensor(f.target, g.target)
    ns, nt = g.source.dim, g.target.dim
    entries: dict[tuple[int, int], object] = {}
    for i2, i, a in f.matrix.nonzero_entries():
        sign = field.sign(g.degree * f.source.degrees[i])
        for j2, j, b in g.matrix.nonzero_entries():
            _accumulate(entries, (i2 * nt + j2, i * ns + j), sign * a * b)
    return GradedMap(source, target, f.degree + g.degree,
                     Matrix.from_entries(field, target.dim, source.dim, entries))


def _accumulate(entries: dict, key: tuple[int, int], value) -> None:
    entries[key] = entries[key] + value if key in entries else value


@dataclass(frozen=True, eq=False)
class HomComplex(Complex):
    """``Hom(V, W)`` with basis ``E_{t,s}`` (sends ``v_s`` to ``w_t``).

    Basis order is (source degree, source index, target index).
    """

    source: Complex
    target: Complex
    pairs: tuple[tuple[int, int], ...]

    @cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {p: k for k, p in enumerate(self.pairs)}

    def vector_of(self, f: GradedMap | Matrix) -> tuple:
        m = f.matrix if isinstance(f, GradedMap) else f
        return tuple(m[(t, s)] for s, t in self.pairs)

    def matrix_of(self, vec: Sequence) -> Matrix:
        entries = {(t, s): vec[k] for k, (s, t) in enumerate(self.pairs) if vec[k]}
        return Matrix.from_entries(self.field, self.target.dim, self.source.dim, entries)

    def map_of(self, vec: Sequence, degree: int | None = None) -> GradedMap:
        """The graded map with coordinates *vec*; *degree* is needed for zero vectors."""
        if degree is None:
            support = {self.degrees[k] for k, a in enumerate(vec) if a}
            if len(support) > 1:
                raise ValidationError("degree", "vector is not homogeneous")
            degree = support.pop() if support else 0
        return GradedMap(self.source, self.target, degree, self.matrix_of(vec))


def internal_hom(v: Complex, w: Complex) -> HomComplex:
    """``Hom(V, W)^n = ∏_i Hom(V^i, W^{i+n})`` with ``d f = d_W f - (-1)^|f| f d_V``."""
    field = v.field
    pairs = tuple(sorted(((s, t) for s in range(v.dim) for t in range(w.dim)),
                         key=lambda p: (v.degrees[p[0]], p[0], p[1])))
    index = {p: k for k, p in enumerate(pairs)}
    degrees = tuple(w.degrees[t] - v.degrees[s] for s, t in pairs)
    dw_cols: dict[int, list[tuple[int, object]]] = {}
    for t2, t, a in w.d.nonzero_entries():
        dw_cols.setdefault(t, []).append((t2, a))
    dv_rows: dict[int, list[tuple[int, object]]] = {}
    for s, s2, a in v.d.nonzero_entries():
        dv_rows.setdefault(s, []).append((s2, a))
    entries: dict[tuple[int, int], object] = {}
    for k, (s, t) in enumerate(pairs):
        for t2, a in dw_cols.get(t, ()):
            _accumulate(entries, (index[(s, t2)], k), a)
        sign = -field.sign(degrees[k])
        for s2, a in dv_rows.get(s, ()):
            _accumulate(entries, (index[(s2, t)], k), sign * a)
    dim = len(pairs)
    return HomComplex(field, degrees, Matrix.from_entries(field, dim, dim, entries), v, w, pairs)


def hom_operator(src: HomComplex, dst: HomComplex, left: Matrix | None = None,
                 right: Matrix | None = None, degrees: Iterable[int] | None = None) -> tuple[Matrix, list[int]]:
    """Matrix of ``X ↦ left · X · right`` from *src* to *dst* on the chosen degrees.

    Returns the matrix restricted to the selected source columns and the
    list of those columns.
    """
    field = src.field
    left = left if left is not None else Matrix.identity(field, src.target.dim)
    right = right if right is not None else Matrix.identity(field, src.source.dim)
    wanted = None if degrees is None else set(degrees)
    cols = [k for k in range(src.dim) if wanted is None or src.degrees[k] in wanted]
    left_cols: dict[int, list[tuple[int, object]]] = {}
    for t2, t, a in left.nonzero_entries():
        left_cols.setdefault(t, []).append((t2, a))
    right_rows: dict[int, list[tuple[int, object]]] = {}
    for s, s2, a in right.nonzero_entries():
        right_rows.setdefault(s, []).append((s2, a))
    entries: dict[tuple[int, int], object] = {}
    for c, k in enumerate(cols):
        s, t = src.pairs[k]
        for t2, a in left_cols.get(t, ()):
            for s2, b in right_rows.get(s, ()):
                _accumulate(entries, (dst.index[(s2, t2)], c), a * b)
    return Matrix.from_entries(field, dst.dim, len(cols), entries), cols


# ============================================================
# SUBCOMPLEXES AND QUOTIENTS
# ============================================================

@dataclass(frozen=True)
class Subcomplex:
    """``complex`` embedded in ``ambient`` by *inclusion*, with a left inverse."""

    ambient: Complex
    complex: Complex
    inclusion: Matrix
    retraction: Matrix

    def inclusion_map(self) -> GradedMap:
        return GradedMap(self.complex, self.ambient, 0, self.inclusion)


def subcomplex_from_columns(c: Complex, columns: Sequence[Sequence], degrees: Sequence[int]) -> Subcomplex:
    """The span of homogeneous, linearly independent *columns*; must be d-stable."""
    field = c.field
    inc = Matrix.from_columns(field, c.dim, columns)
    ret = left_inverse(inc) if inc.ncols else Matrix.zeros(field, 0, c.dim)
    d_sub = ret @ c.d @ inc
    if inc @ d_sub != c.d @ inc:
        raise NotClosedError("span is not stable under the differential")
    return Subcomplex(c, Complex(field, tuple(degrees), d_sub), inc, ret)


def graded_kernel(c: Complex, constraints: Matrix) -> Subcomplex:
    """Homogeneous solutions of ``constraints · x = 0``, degree by degree."""
    if constraints.ncols != c.dim:
        raise DimensionMismatchError("constraint matrix does not match the complex")
    columns, degrees = [], []
    all_rows = range(constraints.nrows)
    for n in c.support:
        idx = c.indices(n)
        basis = kernel_basis(constraints.submatrix(all_rows, idx))
        for col in basis.columns():
            full = [c.field.zero] * c.dim
            for k, a in zip(idx, col):
                full[k] = a
            columns.append(full)
            degrees.append(n)
    return subcomplex_from_columns(c, columns, degrees)


@dataclass(frozen=True)
class Quotient:
    """``complex = ambient / relations`` with projection and a coordinate section."""

    ambient: Complex
    complex: Complex
    projection: Matrix
    section: Matrix

    def projection_map(self) -> GradedMap:
        return GradedMap(self.ambient, self.complex, 0, self.projection)


def quotient_complex(c: Complex, relations: Matrix) -> Quotient:
    """Quotient of *c* by the graded span of the columns of *relations*."""
    field = c.field
    proj_blocks, sec_cols, degrees = [], [], []
    all_cols = range(relations.ncols)
    for n in c.support:
        idx = c.indices(n)
        coker = cokernel(relations.submatrix(idx, all_cols))
        proj_blocks.append((idx, coker.projection))
        for col in coker.section.columns():
            full = [field.zero] * c.dim
            for k, a in zip(idx, col):
                full[k] = a
            sec_cols.append(full)
        degrees.extend([n] * coker.dim)
    qdim = len(degrees)
    entries = {}
    row0 = 0
    for idx, p in proj_blocks:
        for i, j, a in p.nonzero_entries():
            entries[(row0 + i, idx[j])] = a
        row0 += p.nrows
    projection = Matrix.from_entries(field, qdim, c.dim, entries)
    section = Matrix.from_columns(field, c.dim, sec_cols)
    d_q = projection @ c.d @ section
    if d_q @ projection != projection @ c.d:
        raise NotClosedError("relations are not stable under the differential")
    return Quotient(c, Complex(field, tuple(degrees), d_q), projection, section)


# ============================================================
# COHOMOLOGY
# ============================================================

@dataclass(frozen=True)
class Cohomology:
    """``H(C)`` as chosen cycle representatives plus coordinates on cycles.

    ``coordinates @ z`` gives the class of a cycle ``z``;
    ``coordinates @ representatives`` is the identity.
    """

    complex: Complex
    degrees: tuple[int, ...]
    representatives: Matrix
    coordinates: Matrix

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @property
    def dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for n in self.degrees:
            out[n] = out.get(n, 0) + 1
        return out

    def dim_in(self, n: int) -> int:
        return self.dims.get(n, 0)

    def as_complex(self) -> Complex:
        field = self.complex.field
        return Complex(field, self.degrees, Matrix.zeros(field, self.dim, self.dim))

    def class_indices(self, n: int) -> list[int]:
        return [k for k, m in enumerate(self.degrees) if m == n]


def cohomology(c: Complex) -> Cohomology:
    """Per degree, cycles not in the span of boundaries and earlier choices."""
    field = c.field
    reps, coord_rows, degrees = [], [], []
    for n in c.support:
        idx = c.indices(n)
        cycles = kernel_basis(c.differential(n))
        boundaries = column_space_basis(c.differential(n - 1))
        chosen: list[tuple] = []
        current = boundaries
        for z in cycles.columns():
            if current.ncols and in_span(current, z):
                continue
            chosen.append(z)
            current = current.hstack(Matrix.from_columns(field, len(idx), [z])) if current.ncols \
                else Matrix.from_columns(field, len(idx), [z])
        if not chosen:
            continue
        full = Matrix.from_columns(field, len(idx), chosen)
        if boundaries.ncols:
            full = full.hstack(boundaries)
        coords = left_inverse(full).submatrix(range(len(chosen)), range(len(idx)))
        for z in chosen:
            vec = [field.zero] * c.dim
            for k, a in zip(idx, z):
                vec[k] = a
            reps.append(vec)
        for row in (coords.row(i) for i in range(coords.nrows)):
            vec = [field.zero] * c.dim
            for k, a in zip(idx, row):
                vec[k] = a
            coord_rows.append(tuple(vec))
        degrees.extend([n] * len(chosen))
    h = len(degrees)
    return Cohomology(
        c, tuple(degrees),
        Matrix.from_columns(field, c.dim, reps),
        Matrix.from_rows(field, coord_rows, ncols=c.dim),
    )


def induced_map(f: GradedMap, source: Cohomology | None = None, target: Cohomology | None = None) -> Matrix:
    """Matrix of ``H(f)`` in the chosen class bases."""
    source = source or cohomology(f.source)
    target = target or cohomology(f.target)
    return target.coordinates @ f.matrix @ source.representatives


def is_acyclic(c: Complex) -> bool:
    return c.dim == 2 * rank(c.d)


def _require_chain_map(f: GradedMap) -> None:
    if f.degree != 0 or not f.is_closed:
        raise NotClosedError("expected a closed degree-0 map")


def quasi_iso_routes(f: GradedMap) -> tuple[bool, bool]:
    """``(cone(f) acyclic, H(f) bijective)``."""
    _require_chain_map(f)
    by_cone = is_acyclic(cone(f))
    hv, hw = cohomology(f.source), cohomology(f.target)
    hf = induced_map(f, hv, hw)
    by_cohomology = hv.dims == hw.dims and rank(hf) == hv.dim == hw.dim
    return by_cone, by_cohomology


def is_quasi_iso(f: GradedMap) -> bool:
    by_cone, by_cohomology = quasi_iso_routes(f)
    if by_cone != by_cohomology:
        logger.error("qis routes disagree: cone=%s cohomology=%s", by_cone, by_cohomology)
        raise AssertionError("cone and cohomology criteria disagree")
    return by_cone


# ============================================================
# WITNESSES
# ============================================================

@dataclass(frozen=True)
class IsoWitness:
    """A pair of mutually inverse closed degree-0 maps."""

    forward: GradedMap
    backward: GradedMap

    def verify(self) -> bool:
        f, g = self.forward, self.backward
        if f.degree or g.degree or not f.is_closed or not g.is_closed:
            return False
        return (g @ f).matrix == Matrix.identity(f.field, f.source.dim) and \
            (f @ g).matrix == Matrix.identity(f.field, f.target.dim)

    def to_dict(self) -> dict:
        return {
            "source_dims": self.forward.source.dims,
            "target_dims": self.forward.target.dims,
            "forward": self.forward.matrix.to_strings(),
            "backward": self.backward.matrix.to_strings(),
            "verified": self.verify(),
        }


def iso_witness(f: GradedMap) -> IsoWitness | None:
    """Invert a closed degree-0 map when it is an isomorphism of complexes."""
    inv = inverse(f.matrix)
    if inv is None:
        return None
    return IsoWitness(f, GradedMap(f.target, f.source, 0, inv))


def hom_tensor_adjunction(z: Complex, v: Complex, w: Complex) -> IsoWitness:
    """Currying ``Hom(Z ⊗ V, W) → Hom(Z, Hom(V, W))``, ``(λφ)(z)(v) = φ(z ⊗ v)``."""
    field = z.field
    lhs = internal_hom(tensor(z, v), w)
    hvw = internal_hom(v, w)
    rhs = internal_hom(z, hvw)
    entries = {}
    for k, (zv, t) in enumerate(lhs.pairs):
        zi, vi = divmod(zv, v.dim)
        entries[(rhs.index[(zi, hvw.index[(vi, t)])], k)] = field.one
    fwd = Matrix.from_entries(field, rhs.dim, lhs.dim, entries)
    return IsoWitness(GradedMap(lhs, rhs, 0, fwd), GradedMap(rhs, lhs, 0, fwd.transpose()))


@dataclass(frozen=True)
class HomotopyEquivalence:
    """``g`` inverts ``f`` up to ``gf - 1 = d h_s`` and ``fg - 1 = d h_t``."""

    map: GradedMap
    inverse: GradedMap
    source_homotopy: GradedMap
    target_homotopy: GradedMap

    def verify(self) -> bool:
        f, g = self.map, self.inverse
        one_v = GradedMap.identity(f.source)
        one_w = GradedMap.identity(f.target)
        return (
            g.is_closed
            and (g @ f - one_v).matrix == differential_of_map(self.source_homotopy).matrix
            and (f @ g - one_w).matrix == differential_of_map(self.target_homotopy).matrix
        )


def homotopy_inverse(f: GradedMap) -> HomotopyEquivalence:
    """Solve for a closed ``g`` and homotopies; over a field every qis splits."""
    _require_chain_map(f)
    field = f.field
    v, w = f.source, f.target
    h_wv, h_ww, h_vv = internal_hom(w, v), internal_hom(w, w), internal_hom(v, v)

    d_wv = h_wv.d
    g_cols = [k for k in range(h_wv.dim) if h_wv.degrees[k] == 0]
    t_cols = [k for k in range(h_ww.dim) if h_ww.degrees[k] == -1]
    post_f, _ = hom_operator(h_wv, h_ww, left=f.matrix, degrees=[0])
    top = d_wv.submatrix(range(h_wv.dim), g_cols).hstack(Matrix.zeros(field, h_wv.dim, len(t_cols)))
    bottom = post_f.hstack(-h_ww.d.submatrix(range(h_ww.dim), t_cols))
    rhs = (field.zero,) * h_wv.dim + h_ww.vector_of(Matrix.identity(field, w.dim))
    sol = solve(top.vstack(bottom), rhs)
    if sol is None:
        raise NotQuasiIsomorphismError("map has no homotopy inverse")
    g_vec = [field.zero] * h_wv.dim
    for k, a in zip(g_cols, sol[:len(g_cols)]):
        g_vec[k] = a
    h_vec = [field.zero] * h_ww.dim
    for k, a in zip(t_cols, sol[len(g_cols):]):
        h_vec[k] = a
    g = h_wv.map_of(g_vec, 0)
    h_t = h_ww.map_of(h_vec, -1)

    s_cols = [k for k in range(h_vv.dim) if h_vv.degrees[k] == -1]
    target = h_vv.vector_of((g @ f - GradedMap.identity(v)).matrix)
    sol_s = solve(h_vv.d.submatrix(range(h_vv.dim), s_cols), target)
    if sol_s is None:
        raise NotQuasiIsomorphismError("no homotopy on the source side")
    hs_vec = [field.zero] * h_vv.dim
    for k, a in zip(s_cols, sol_s):
        hs_vec[k] = a
    return HomotopyEquivalence(f, g, h_vv.map_of(hs_vec, -1), h_t)
