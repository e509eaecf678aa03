"""Dense exact linear algebra over the Gaussian rationals.

Matrices are small (at most a few dozen rows), so everything is dense and
row-major; the emphasis is on determinism rather than speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .scalar import ONE, ZERO, Scalar, as_scalar

__all__ = [
    "Mat",
    "KernelBasis",
    "mat_mul",
    "conj_transpose",
    "rref",
    "rank",
    "kernel_basis",
    "gram_adjoint",
    "solve_in_span",
    "hstack",
    "vstack",
    "span_basis",
    "inner",
    "is_hermitian",
    "is_positive_semidefinite",
]


class Mat:
    """Immutable dense ``rows x cols`` matrix of :class:`Scalar`."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimension")
        self.rows = rows
        self.cols = cols
        if data is None:
            self.data = tuple((ZERO,) * cols for _ in range(rows))
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError(f"entries do not match shape {rows}x{cols}")
            self.data = tuple(tuple(as_scalar(x) for x in r) for r in data)

    @classmethod
    def _wrap(cls, rows: int, cols: int, data) -> "Mat":
        m = object.__new__(cls)
        m.rows, m.cols, m.data = rows, cols, tuple(tuple(r) for r in data)
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Mat":
        r = len(rows)
        c = len(rows[0]) if r else 0
        return cls(r, c, rows)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Sequence[Scalar]]) -> "Mat":
        data = [[as_scalar(col[i]) for col in columns] for i in range(nrows)]
        return cls._wrap(nrows, len(columns), data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols)

    @classmethod
    def identity(cls, k: int) -> "Mat":
        return cls._wrap(k, k, [[ONE if i == j else ZERO for j in range(k)] for i in range(k)])

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Mat":
        k = len(entries)
        vals = [as_scalar(e) for e in entries]
        return cls._wrap(k, k, [[vals[i] if i == j else ZERO for j in range(k)] for i in range(k)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx: tuple[int, int]) -> Scalar:
        i, j = idx
        return self.data[i][j]

    def column(self, j: int) -> tuple[Scalar, ...]:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list[tuple[Scalar, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return not any(x for row in self.data for x in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in row) for row in self.data)
        return f"Mat({self.rows}x{self.cols}: [{body}])"

    # elementwise ------------------------------------------------------------

    def __add__(self, other: "Mat") -> "Mat":
        _same_shape(self, other)
        return Mat._wrap(
            self.rows, self.cols, [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)]
        )

    def __sub__(self, other: "Mat") -> "Mat":
        _same_shape(self, other)
        return Mat._wrap(
            self.rows, self.cols, [[a - b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)]
        )

    def __neg__(self) -> "Mat":
        return Mat._wrap(self.rows, self.cols, [[-a for a in r] for r in self.data])

    def scale(self, c) -> "Mat":
        c = as_scalar(c)
        if not c:
            return Mat.zeros(self.rows, self.cols)
        return Mat._wrap(self.rows, self.cols, [[c * a if a else ZERO for a in r] for r in self.data])

    def conj(self) -> "Mat":
        return Mat._wrap(self.rows, self.cols, [[a.conjugate() for a in r] for r in self.data])

    def transpose(self) -> "Mat":
        if not self.rows:
            return Mat._wrap(self.cols, 0, [[] for _ in range(self.cols)])
        return Mat._wrap(self.cols, self.rows, [list(col) for col in zip(*self.data)])

    def __matmul__(self, other: "Mat") -> "Mat":
        return mat_mul(self, other)

    def apply(self, vec: Sequence[Scalar]) -> tuple[Scalar, ...]:
        if len(vec) != self.cols:
            raise ValueError(f"vector of length {len(vec)} for {self.rows}x{self.cols} matrix")
        out = []
        for row in self.data:
            acc = ZERO
            for a, x in zip(row, vec):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return tuple(out)


def _same_shape(a: Mat, b: Mat) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


def mat_mul(a: Mat, b: Mat) -> Mat:
    """Exact product ``a @ b``; zero entries are skipped."""
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bsparse = [[(j, x) for j, x in enumerate(row) if x] for row in b.data]
    out = []
    for row in a.data:
        acc: dict[int, Scalar] = {}
        for k, aik in enumerate(row):
            if not aik:
                continue
            for j, bkj in bsparse[k]:
                prod = aik * bkj
                prev = acc.get(j)
                acc[j] = prod if prev is None else prev + prod
        out.append([acc.get(j, ZERO) for j in range(b.cols)])
    return Mat._wrap(a.rows, b.cols, out)


def conj_transpose(a: Mat) -> Mat:
    return Mat._wrap(a.cols, a.rows, [[a.data[i][j].conjugate() for i in range(a.rows)] for j in range(a.cols)])


def hstack(blocks: Sequence[Mat]) -> Mat:
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise ValueError("hstack needs equal row counts")
    return Mat._wrap(rows, sum(b.cols for b in blocks), [sum((b.data[i] for b in blocks), ()) for i in range(rows)])


def vstack(blocks: Sequence[Mat]) -> Mat:
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise ValueError("vstack needs equal column counts")
    return Mat._wrap(sum(b.rows for b in blocks), cols, [r for b in blocks for r in b.data])


def rref(a: Mat) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivot choice is the first nonzero entry at or below the current row in the
    current column, so the result is deterministic (and, being the RREF,
    canonical anyway).
    """
    m = [list(r) for r in a.data]
    pivots: list[int] = []
    r = 0
    for c in range(a.cols):
        if r == a.rows:
            break
        piv = next((i for i in range(r, a.rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv if x else ZERO for x in m[r]]
        prow = m[r]
        nz = [j for j in range(c, a.cols) if prow[j]]
        for i in range(a.rows):
            if i == r:
                continue
            f = m[i][c]
            if not f:
                continue
            row = m[i]
            for j in nz:
                row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Mat) -> int:
    return len(rref(a)[1])


@dataclass(frozen=True)
class KernelBasis:
    """Basis of a null space, one coordinate column per vector.

    Columns are in reduced column echelon form: each has leading entry 1 and
    the leading positions are strictly increasing and zero in the other
    columns.
    """

    ambient_dim: int
    basis: tuple[tuple[Scalar, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def as_matrix(self) -> Mat:
        return Mat.from_columns(self.ambient_dim, self.basis)


def _echelon_span(ambient: int, vectors: Iterable[Sequence[Scalar]]) -> tuple[tuple[Scalar, ...], ...]:
    vecs = [tuple(as_scalar(x) for x in v) for v in vectors]
    if not vecs:
        return ()
    red, piv = rref(Mat._wrap(len(vecs), ambient, vecs))
    return tuple(tuple(red[i]) for i in range(len(piv)))


def kernel_basis(a: Mat) -> KernelBasis:
    """Exact null space of ``a``; ``dim == a.cols - rank(a)``."""
    red, pivots = rref(a)
    pivset = set(pivots)
    raw = []
    for f in range(a.cols):
        if f in pivset:
            continue
        v = [ZERO] * a.cols
        v[f] = ONE
        for i, pc in enumerate(pivots):
            if red[i][f]:
                v[pc] = -red[i][f]
        raw.append(v)
    return KernelBasis(a.cols, _echelon_span(a.cols, raw))


def span_basis(ambient: int, vectors: Iterable[Sequence[Scalar]]) -> KernelBasis:
    """Canonical basis (same normalization as kernels) of the span of ``vectors``."""
    return KernelBasis(ambient, _echelon_span(ambient, vectors))


def solve_in_span(basis: KernelBasis, vec: Sequence[Scalar]) -> tuple[Scalar, ...] | None:
    """Coordinates of ``vec`` in ``basis``, or ``None`` if it is not in the span."""
    if len(vec) != basis.ambient_dim:
        raise ValueError("vector length does not match ambient dimension")
    if not basis.dim:
        return () if not any(vec) else None
    aug = Mat._wrap(
        basis.ambient_dim,
        basis.dim + 1,
        [[b[i] for b in basis.basis] + [as_scalar(vec[i])] for i in range(basis.ambient_dim)],
    )
    red, pivots = rref(aug)
    if pivots and pivots[-1] == basis.dim:
        return None
    coords = [ZERO] * basis.dim
    for i, pc in enumerate(pivots):
        coords[pc] = red[i][basis.dim]
    return tuple(coords)


def _diag_entries(g: Mat, what: str) -> list[Scalar]:
    if g.rows != g.cols:
        raise ValueError(f"{what} Gram matrix is not square")
    for i in range(g.rows):
        for j in range(g.cols):
            if i != j and g.data[i][j]:
                raise ValueError(f"{what} Gram matrix is not diagonal")
    diag = [g.data[i][i] for i in range(g.rows)]
    if any(not d for d in diag):
        raise ValueError(f"{what} Gram matrix is not invertible")
    return diag


def gram_adjoint(m: Mat, g_src: Mat, g_dst: Mat) -> Mat:
    """Metric adjoint ``g_src^-1 m^H g_dst`` of ``m`` for diagonal Gram matrices.

    Satisfies ``<m x, y>_dst == <x, adj y>_src`` where ``<u, v>_g = v^H g u``.
    """
    src = _diag_entries(g_src, "source")
    dst = _diag_entries(g_dst, "destination")
    if m.cols != len(src) or m.rows != len(dst):
        raise ValueError(f"Gram sizes {len(src)}, {len(dst)} do not fit a {m.rows}x{m.cols} matrix")
    inv = [s.inverse() for s in src]
    return Mat._wrap(
        m.cols,
        m.rows,
        [
            [(inv[j] * m.data[i][j].conjugate() * dst[i]) if m.data[i][j] else ZERO for i in range(m.rows)]
            for j in range(m.cols)
        ],
    )


def inner(x: Sequence[Scalar], y: Sequence[Scalar], g: Mat | None = None) -> Scalar:
    """``<x, y>_g = y^H g x`` for a diagonal ``g`` (identity if omitted)."""
    acc = ZERO
    for i, (a, b) in enumerate(zip(x, y)):
        if a and b:
            w = a * b.conjugate()
            acc = acc + (w if g is None else g.data[i][i] * w)
    return acc


def is_hermitian(m: Mat) -> bool:
    return m.rows == m.cols and all(
        m.data[i][j] == m.data[j][i].conjugate() for i in range(m.rows) for j in range(i, m.cols)
    )


def is_positive_semidefinite(m: Mat) -> bool:
    """Exact test for a Hermitian matrix by symmetric elimination.

    A zero diagonal entry forces its row to vanish; a negative one (or a
    non-real one) refutes semidefiniteness.
    """
    if not is_hermitian(m):
        return False
    a = [list(r) for r in m.data]
    live = list(range(m.rows))
    while live:
        k = next((i for i in live if a[i][i]), None)
        if k is None:
            return all(not a[i][j] for i in live for j in live)
        piv = a[k][k]
        if piv.im or piv.re < 0:
            return False
        live.remove(k)
        for i in live:
            if not a[i][k]:
                continue
            f = a[i][k] / piv
            for j in live:
                if a[k][j]:
                    a[i][j] = a[i][j] - f * a[k][j]
        for i in live:
            if not a[i][i] and any(a[i][j] for j in live):
                # zero diagonal with nonzero off-diagonal: indefinite
                return False
    return True
