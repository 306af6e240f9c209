"""Exact sparse linear algebra over ℚ or a prime field F_p.

Scalars are sympy domain elements (``QQ`` or ``FF(p)``); matrices keep
their nonzero entries only, row by row.  Elimination always pivots on the
leftmost nonzero column so that every basis computed here is reproducible.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from sympy import isprime
from sympy.polys.domains import FF, QQ

from .enums import FieldKind
from .errors import DimensionMismatchError, WorkspaceFormatError

logger = logging.getLogger(__name__)

Vector = tuple


# ============================================================
# FIELDS
# ============================================================

@dataclass(frozen=True)
class Field:
    """The active ground field: ℚ when *characteristic* is 0, else F_p."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        if self.characteristic and not isprime(self.characteristic):
            raise ValueError(f"characteristic {self.characteristic} is not prime")

    @classmethod
    def parse(cls, spec: str) -> Field:
        """Build a field from ``q`` or ``fp:<p>``."""
        spec = spec.strip().lower()
        if spec in ("q", "qq", "rational"):
            return cls(0)
        if spec.startswith(FieldKind.PRIME.value + ":"):
            return cls(int(spec.split(":", 1)[1]))
        raise WorkspaceFormatError("field", f"unknown field spec {spec!r}")

    @property
    def kind(self) -> FieldKind:
        return FieldKind.PRIME if self.characteristic else FieldKind.RATIONAL

    @property
    def spec(self) -> str:
        return f"fp:{self.characteristic}" if self.characteristic else "q"

    @cached_property
    def domain(self):
        return FF(self.characteristic) if self.characteristic else QQ

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def __call__(self, value):
        """Convert an int, a ``(num, den)`` pair or a domain element."""
        if isinstance(value, tuple):
            num, den = value
            return self.domain(num) / self.domain(den)
        if isinstance(value, str):
            return self.parse_element(value)
        if isinstance(value, int):
            return self.domain(value)
        return self.domain.convert(value)

    def sign(self, exponent: int):
        """``(-1)**exponent`` as a field element."""
        return self.one if exponent % 2 == 0 else -self.one

    def parse_element(self, text: str):
        """Parse ``"3/2"``, ``"-4"`` or ``"5 mod 7"``."""
        text = text.strip()
        try:
            if " mod " in text:
                value, modulus = text.split(" mod ")
                if int(modulus) != self.characteristic:
                    raise WorkspaceFormatError("element", f"{text!r} is not in {self.spec}")
                return self.domain(int(value))
            if "/" in text:
                num, den = text.split("/")
                divisor = self.domain(int(den))
                if not divisor:
                    raise ZeroDivisionError(den)
                return self.domain(int(num)) / divisor
            return self.domain(int(text))
        except ValueError as exc:
            raise WorkspaceFormatError("element", f"cannot parse {text!r}") from exc
        except ZeroDivisionError as exc:
            raise WorkspaceFormatError("element", f"{text!r} has a zero denominator") from exc

    def format_element(self, a) -> str:
        if self.characteristic:
            return f"{int(a) % self.characteristic} mod {self.characteristic}"
        num, den = QQ.numer(a), QQ.denom(a)
        return f"{num}" if den == 1 else f"{num}/{den}"

    def random_element(self, rng: random.Random, bound: int = 5):
        if self.characteristic:
            return self.domain(rng.randrange(self.characteristic))
        return self.domain(rng.randint(-bound, bound))

    def elements(self) -> Iterator:
        """All elements of a prime field in the order 0, 1, ..., p-1."""
        if not self.characteristic:
            raise ValueError("ℚ cannot be enumerated")
        return (self.domain(i) for i in range(self.characteristic))

    def __str__(self) -> str:
        return f"F_{self.characteristic}" if self.characteristic else "Q"


QQ_FIELD = Field(0)


# ============================================================
# MATRICES
# ============================================================

SparseRow = tuple  # ((column, value), ...) sorted by column, zeros dropped


def _freeze(row: dict) -> SparseRow:
    return tuple(sorted((c, a) for c, a in row.items() if a))


@dataclass(frozen=True)
class Matrix:
    """An ``nrows × ncols`` matrix with entries in *field*.

    Rows are stored sparsely as sorted ``(column, value)`` pairs with no
    zero values, so equal matrices have equal storage.
    """

    field: Field
    nrows: int
    ncols: int
    data: tuple[SparseRow, ...]

    def __post_init__(self) -> None:
        if len(self.data) != self.nrows or any(
            c < 0 or c >= self.ncols for row in self.data for c, _ in row
        ):
            raise DimensionMismatchError(
                f"rows do not match the declared shape {self.nrows}×{self.ncols}"
            )

    @classmethod
    def _from_dicts(cls, field: Field, nrows: int, ncols: int, rows: Sequence[dict]) -> Matrix:
        return cls(field, nrows, ncols, tuple(_freeze(r) for r in rows))

    # -- constructors --------------------------------------------------

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
        conv = [[field(a) for a in row] for row in rows]
        width = ncols if ncols is not None else (len(conv[0]) if conv else 0)
        if any(len(r) != width for r in conv):
            raise DimensionMismatchError(f"rows do not all have length {width}")
        return cls._from_dicts(field, len(conv), width, [dict(enumerate(r)) for r in conv])

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> Matrix:
        return cls(field, nrows, ncols, ((),) * nrows)

    @classmethod
    def identity(cls, field: Field, n: int) -> Matrix:
        return cls(field, n, n, tuple(((i, field.one),) for i in range(n)))

    @classmethod
    def from_entries(cls, field: Field, nrows: int, ncols: int, entries: dict) -> Matrix:
        """Build from a sparse ``{(i, j): value}`` dict; repeated keys are not summed."""
        rows: list[dict] = [{} for _ in range(nrows)]
        for (i, j), value in entries.items():
            if not 0 <= j < ncols:
                raise DimensionMismatchError(f"column {j} outside {nrows}×{ncols}")
            rows[i][j] = field(value)
        return cls._from_dicts(field, nrows, ncols, rows)

    @classmethod
    def from_columns(cls, field: Field, nrows: int, columns: Sequence[Sequence]) -> Matrix:
        rows: list[dict] = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise DimensionMismatchError(f"column of length {len(col)} for {nrows} rows")
            for i, a in enumerate(col):
                if a:
                    rows[i][j] = a
        return cls._from_dicts(field, nrows, len(columns), rows)

    # -- access --------------------------------------------------------

    @cached_property
    def _lookup(self) -> tuple[dict, ...]:
        return tuple(dict(row) for row in self.data)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, key: tuple[int, int]):
        i, j = key
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        return self._lookup[i].get(j, self.field.zero)

    def row(self, i: int) -> Vector:
        out = [self.field.zero] * self.ncols
        for c, a in self.data[i]:
            out[c] = a
        return tuple(out)

    def column(self, j: int) -> Vector:
        z = self.field.zero
        return tuple(r.get(j, z) for r in self._lookup)

    def columns(self) -> list[Vector]:
        cols = [[self.field.zero] * self.nrows for _ in range(self.ncols)]
        for i, row in enumerate(self.data):
            for c, a in row:
                cols[c][i] = a
        return [tuple(c) for c in cols]

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> Matrix:
        position = {c: k for k, c in enumerate(col_idx)}
        rows = [{position[c]: a for c, a in self.data[i] if c in position} for i in row_idx]
        return Matrix._from_dicts(self.field, len(rows), len(position), rows)

    def nonzero_entries(self) -> Iterator[tuple[int, int, object]]:
        for i, row in enumerate(self.data):
            for j, a in row:
                yield i, j, a

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self.data)

    @property
    def is_zero(self) -> bool:
        return not any(self.data)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same_shape(other)
        rows = []
        for r, s in zip(self._lookup, other.data):
            acc = dict(r)
            for c, b in s:
                acc[c] = acc[c] + b if c in acc else b
            rows.append(acc)
        return Matrix._from_dicts(self.field, self.nrows, self.ncols, rows)

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def __neg__(self) -> Matrix:
        return Matrix(self.field, self.nrows, self.ncols,
                      tuple(tuple((c, -a) for c, a in row) for row in self.data))

    def scale(self, c) -> Matrix:
        return Matrix._from_dicts(self.field, self.nrows, self.ncols,
                                  [{j: c * a for j, a in row} for row in self.data])

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        right = other.data
        out = []
        for row in self.data:
            acc: dict = {}
            for k, a in row:
                for j, b in right[k]:
                    acc[j] = acc[j] + a * b if j in acc else a * b
            out.append(acc)
        return Matrix._from_dicts(self.field, self.nrows, other.ncols, out)

    def apply(self, vec: Sequence) -> Vector:
        if len(vec) != self.ncols:
            raise DimensionMismatchError(f"vector of length {len(vec)} for {self.shape} matrix")
        z = self.field.zero
        out = []
        for row in self.data:
            acc = z
            for c, a in row:
                b = vec[c]
                if b:
                    acc += a * b
            out.append(acc)
        return tuple(out)

    def transpose(self) -> Matrix:
        rows: list[dict] = [{} for _ in range(self.ncols)]
        for i, row in enumerate(self.data):
            for c, a in row:
                rows[c][i] = a
        return Matrix._from_dicts(self.field, self.ncols, self.nrows, rows)

    def hstack(self, *others: Matrix) -> Matrix:
        rows = [list(r) for r in self.data]
        ncols = self.ncols
        for m in others:
            if m.nrows != self.nrows:
                raise DimensionMismatchError("hstack needs equal row counts")
            for r, s in zip(rows, m.data):
                r.extend((c + ncols, a) for c, a in s)
            ncols += m.ncols
        return Matrix(self.field, self.nrows, ncols, tuple(tuple(r) for r in rows))

    def vstack(self, *others: Matrix) -> Matrix:
        rows = list(self.data)
        for m in others:
            if m.ncols != self.ncols:
                raise DimensionMismatchError("vstack needs equal column counts")
            rows.extend(m.data)
        return Matrix(self.field, len(rows), self.ncols, tuple(rows))

    def _check_same_shape(self, other: Matrix) -> None:
        if self.shape != other.shape:
            raise DimensionMismatchError(f"shape {self.shape} differs from {other.shape}")

    def to_strings(self) -> list[list[str]]:
        return [[self.field.format_element(a) for a in self.row(i)] for i in range(self.nrows)]


def block_diagonal(field: Field, blocks: Iterable[Matrix]) -> Matrix:
    rows: list[SparseRow] = []
    c0 = 0
    for b in blocks:
        rows.extend(tuple((c + c0, a) for c, a in row) for row in b.data)
        c0 += b.ncols
    return Matrix(field, len(rows), c0, tuple(rows))


def kron_vectors(a: Sequence, b: Sequence) -> Vector:
    """Coefficients of ``a ⊗ b`` with index ``i * len(b) + j``."""
    return tuple(x * y for x in a for y in b)


def unit_vector(field: Field, n: int, i: int) -> Vector:
    return tuple(field.one if k == i else field.zero for k in range(n))


def kron(a: Matrix, b: Matrix) -> Matrix:
    """``a ⊗ b`` acting on ``x ⊗ y`` stored at ``i * len(y) + j``."""
    rows = []
    for arow in a.data:
        for brow in b.data:
            rows.append(tuple((j * b.ncols + l, x * y) for j, x in arow for l, y in brow))
    return Matrix(a.field, a.nrows * b.nrows, a.ncols * b.ncols, tuple(rows))


def diagonal(field: Field, values: Sequence) -> Matrix:
    n = len(values)
    return Matrix.from_entries(field, n, n, {(i, i): v for i, v in enumerate(values) if v})


def bilinear_left(m: Matrix, u: Sequence, n: int) -> Matrix:
    """Matrix of ``y ↦ m(u ⊗ y)`` for ``y`` of length *n*."""
    rows = []
    for row in m.data:
        acc: dict = {}
        for c, x in row:
            i, j = divmod(c, n)
            if u[i]:
                acc[j] = acc[j] + u[i] * x if j in acc else u[i] * x
        rows.append(acc)
    return Matrix._from_dicts(m.field, m.nrows, n, rows)


def bilinear_right(m: Matrix, v: Sequence, n: int) -> Matrix:
    """Matrix of ``x ↦ m(x ⊗ v)`` for ``x`` of length *n*."""
    k = len(v)
    rows = []
    for row in m.data:
        acc: dict = {}
        for c, x in row:
            i, j = divmod(c, k)
            if v[j]:
                acc[i] = acc[i] + v[j] * x if i in acc else v[j] * x
        rows.append(acc)
    return Matrix._from_dicts(m.field, m.nrows, n, rows)


# ============================================================
# ELIMINATION
# ============================================================

def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...], int]:
    """Reduced row-echelon form, pivot columns and rank of *m*."""
    grid = [dict(r) for r in m.data]
    pivots = _eliminate(grid, m.ncols)
    return Matrix._from_dicts(m.field, m.nrows, m.ncols, grid), tuple(pivots), len(pivots)


def _eliminate(grid: list[dict], limit: int) -> list[int]:
    """Sparse Gauss-Jordan in place on columns below *limit*; returns pivot columns.

    Rows are ``{column: value}`` dicts holding nonzero values only.
    """
    n_rows = len(grid)
    pivots: list[int] = []
    piv_r = 0
    for piv_c in range(limit):
        if piv_r == n_rows:
            break
        for i_row in range(piv_r, n_rows):
            if piv_c in grid[i_row]:
                break
        else:
            continue
        if i_row != piv_r:
            grid[piv_r], grid[i_row] = grid[i_row], grid[piv_r]
        prow = grid[piv_r]
        inv = prow[piv_c] ** -1
        if inv != 1:
            prow = {c: a * inv for c, a in prow.items()}
            grid[piv_r] = prow
        for r in range(n_rows):
            if r == piv_r:
                continue
            row = grid[r]
            fr = row.get(piv_c)
            if fr is None:
                continue
            for c, a in prow.items():
                v = row[c] - fr * a if c in row else -fr * a
                if v:
                    row[c] = v
                else:
                    row.pop(c, None)
        pivots.append(piv_c)
        piv_r += 1
    return pivots


def rank(m: Matrix) -> int:
    return rref(m)[2]


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form the free-variable basis of the null space of *m*."""
    reduced, pivots, _ = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.ncols) if c not in pivot_set]
    position = {f: k for k, f in enumerate(free)}
    entries = {(f, k): m.field.one for f, k in position.items()}
    for r, p in enumerate(pivots):
        for c, a in reduced.data[r]:
            if c in position:
                entries[(p, position[c])] = -a
    return Matrix.from_entries(m.field, m.ncols, len(free), entries)


def column_space_basis(m: Matrix) -> Matrix:
    """The pivot columns of *m*: a basis of its image."""
    _, pivots, _ = rref(m)
    return m.submatrix(range(m.nrows), pivots)


@dataclass(frozen=True)
class Cokernel:
    """``projection: F^rows → Q`` and ``section: Q → F^rows`` for ``coker(M)``."""

    projection: Matrix
    section: Matrix
    quotient_indices: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.projection.nrows


def cokernel(m: Matrix) -> Cokernel:
    """Quotient of ``F^rows`` by the column space of *m*.

    Quotient coordinates are the non-pivot positions of the reduced image
    basis, so the result only depends on the image and the coordinate order.
    """
    field = m.field
    reduced, pivots, rk = rref(m.transpose())
    pivot_set = set(pivots)
    quotient = [q for q in range(m.nrows) if q not in pivot_set]
    position = {q: k for k, q in enumerate(quotient)}
    entries = {(k, q): field.one for q, k in position.items()}
    for r, p in enumerate(pivots):
        for c, a in reduced.data[r]:
            if c in position:
                entries[(position[c], p)] = -a
    projection = Matrix.from_entries(field, len(quotient), m.nrows, entries)
    section = Matrix.from_entries(field, m.nrows, len(quotient), {(q, k): field.one for q, k in position.items()})
    return Cokernel(projection, section, tuple(quotient))


def solve(m: Matrix, b: Sequence) -> Vector | None:
    """A solution of ``m x = b`` or ``None`` when the system is inconsistent."""
    if len(b) != m.nrows:
        raise DimensionMismatchError(f"right-hand side of length {len(b)} for {m.shape} matrix")
    sol = solve_matrix(m, Matrix.from_columns(m.field, m.nrows, [tuple(b)]))
    return None if sol is None else sol.column(0)


def solve_matrix(m: Matrix, rhs: Matrix) -> Matrix | None:
    """A matrix ``X`` with ``m X = rhs`` (free variables set to zero), or ``None``."""
    if rhs.nrows != m.nrows:
        raise DimensionMismatchError(f"right-hand side {rhs.shape} for {m.shape} matrix")
    width = m.ncols
    grid = [dict(r) | {c + width: a for c, a in s} for r, s in zip(m.data, rhs.data)]
    pivots = _eliminate(grid, width)
    for r in range(len(pivots), m.nrows):
        if grid[r]:
            return None
    out: list[dict] = [{} for _ in range(m.ncols)]
    for r, p in enumerate(pivots):
        out[p] = {c - width: a for c, a in grid[r].items() if c >= width}
    return Matrix._from_dicts(m.field, m.ncols, rhs.ncols, out)


def inverse(m: Matrix) -> Matrix | None:
    """Gauss-Jordan inverse, ``None`` if *m* is singular or not square."""
    if m.nrows != m.ncols:
        return None
    return solve_matrix(m, Matrix.identity(m.field, m.nrows))


def left_inverse(m: Matrix) -> Matrix:
    """``L`` with ``L m = 1`` for a matrix of full column rank."""
    field = m.field
    _, pivots, rk = rref(m.transpose())
    if rk != m.ncols:
        raise DimensionMismatchError("left inverse needs full column rank")
    pivot_set = set(pivots)
    extra = [unit_vector(field, m.nrows, i) for i in range(m.nrows) if i not in pivot_set]
    square = m.hstack(Matrix.from_columns(field, m.nrows, extra)) if extra else m
    inv = inverse(square)
    if inv is None:
        raise DimensionMismatchError("completion to a square matrix is singular")
    return inv.submatrix(range(m.ncols), range(m.nrows))


def in_span(basis: Matrix, vec: Sequence) -> bool:
    return solve(basis, vec) is not None


def enumerate_vectors(field: Field, n: int) -> Iterator[Vector]:
    """All vectors of ``F_p^n`` in lexicographic order."""
    return (tuple(v) for v in itertools.product(list(field.elements()), repeat=n))


def random_vector(field: Field, n: int, rng: random.Random, bound: int = 5) -> Vector:
    return tuple(field.random_element(rng, bound) for _ in range(n))
