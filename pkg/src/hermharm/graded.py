"""Block operators on the bigraded exterior algebra.

An operator is a family of matrices keyed by ``(source, target)`` bidegree.
Most operators have one fixed bidegree shift; ``d`` and the Hodge star do
not, so the representation allows several target bidegrees. All-zero blocks
are dropped, which makes "is this the zero operator" a dictionary test.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Mapping

from .exterior import (
    BigradedForm,
    Monomial,
    bidegrees,
    block_size,
    conj_matrix,
    enumerate_basis,
    gram,
    star_matrix,
    star_target,
    wedge,
)
from .linalg import Mat, gram_adjoint, mat_mul
from .scalar import Scalar, as_scalar

__all__ = ["GradedOperator", "Mismatch", "compose", "graded_commutator", "scalar_operator"]

Bidegree = tuple[int, int]
BlockKey = tuple[Bidegree, Bidegree]


@dataclass(frozen=True)
class Mismatch:
    """First entry at which two operators differ."""

    source: Bidegree
    target: Bidegree
    row: int
    col: int
    lhs: Scalar
    rhs: Scalar

    def describe(self) -> str:
        return (
            f"block {self.source}->{self.target} entry ({self.row},{self.col}): "
            f"lhs={self.lhs} rhs={self.rhs}"
        )


class GradedOperator:
    """Linear operator on ``A = sum A^{p,q}`` stored blockwise.

    ``parity`` is the change of total degree mod 2 and decides the sign in
    :func:`graded_commutator`.
    """

    __slots__ = ("n", "parity", "blocks", "name")

    def __init__(self, n: int, parity: int, blocks: Mapping[BlockKey, Mat] | None = None, name: str = ""):
        self.n = n
        self.parity = parity % 2
        self.name = name
        clean = {}
        for (src, dst), m in (blocks or {}).items():
            if m.shape != (block_size(n, dst), block_size(n, src)):
                raise ValueError(f"block {src}->{dst} has shape {m.shape}")
            if (sum(dst) - sum(src) - self.parity) % 2:
                raise ValueError(f"block {src}->{dst} has wrong parity")
            if not m.is_zero():
                clean[(src, dst)] = m
        self.blocks: dict[BlockKey, Mat] = dict(sorted(clean.items()))

    # construction -------------------------------------------------------------

    @classmethod
    def zero(cls, n: int, parity: int = 0, name: str = "0") -> "GradedOperator":
        return cls(n, parity, {}, name)

    @classmethod
    def identity(cls, n: int, c=1) -> "GradedOperator":
        c = as_scalar(c)
        return cls(n, 0, {(d, d): Mat.identity(block_size(n, d)).scale(c) for d in bidegrees(n)}, "id")

    @classmethod
    def from_map(
        cls,
        n: int,
        shifts: tuple[Bidegree, ...],
        parity: int,
        fn: Callable[[Monomial], BigradedForm],
        name: str = "",
    ) -> "GradedOperator":
        """Tabulate a linear map given on basis monomials."""
        blocks = {}
        for src in bidegrees(n):
            basis = enumerate_basis(n, src)
            images = [fn(m) for m in basis]
            for sp, sq in shifts:
                dst = (src[0] + sp, src[1] + sq)
                if not (0 <= dst[0] <= n and 0 <= dst[1] <= n):
                    continue
                cols = [img.to_vector(dst) for img in images]
                blocks[(src, dst)] = Mat.from_columns(block_size(n, dst), cols)
        return cls(n, parity, blocks, name)

    @classmethod
    def wedge_with(cls, form: BigradedForm, name: str = "") -> "GradedOperator":
        """Left multiplication ``eta -> form ^ eta``."""
        n = form.n
        degs = form.bidegrees()
        parities = {(p + q) % 2 for p, q in degs}
        if len(parities) > 1:
            raise ValueError("wedge_with needs a form of homogeneous parity")
        parity = parities.pop() if parities else 0
        shifts = tuple(sorted(degs))
        return cls.from_map(n, shifts, parity, lambda m: wedge(form, BigradedForm.monomial(n, m)), name)

    @classmethod
    def hodge_star(cls, n: int) -> "GradedOperator":
        return cls(n, 0, {(d, star_target(n, d)): star_matrix(n, d) for d in bidegrees(n)}, "star")

    # inspection ---------------------------------------------------------------

    def shifts(self) -> set[Bidegree]:
        return {(t[0] - s[0], t[1] - s[1]) for s, t in self.blocks}

    @property
    def shift(self) -> Bidegree | None:
        """The common bidegree shift, or ``None`` if zero or inhomogeneous."""
        sh = self.shifts()
        return sh.pop() if len(sh) == 1 else None

    def block(self, src: Bidegree, dst: Bidegree | None = None) -> Mat:
        """Matrix from ``src`` to ``dst`` (zero if absent).

        ``dst`` defaults to ``src`` shifted by the operator's unique shift.
        """
        if dst is None:
            sh = self.shift
            if sh is None:
                sh = (0, 0) if not self.blocks else None
            if sh is None:
                raise ValueError(f"{self.name or 'operator'} has no unique shift; pass dst")
            dst = (src[0] + sh[0], src[1] + sh[1])
        m = self.blocks.get((src, dst))
        if m is not None:
            return m
        return Mat.zeros(block_size(self.n, dst), block_size(self.n, src))

    def is_zero(self) -> bool:
        return not self.blocks

    def __repr__(self) -> str:
        label = self.name or "GradedOperator"
        return f"<{label}: n={self.n} parity={self.parity} shifts={sorted(self.shifts())} blocks={len(self.blocks)}>"

    def __iter__(self) -> Iterator[tuple[BlockKey, Mat]]:
        return iter(self.blocks.items())

    # algebra ------------------------------------------------------------------

    def _compatible(self, other: "GradedOperator") -> None:
        if other.n != self.n:
            raise ValueError("operators act on different algebras")

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        self._compatible(other)
        if self.blocks and other.blocks and self.parity != other.parity:
            raise ValueError("cannot add operators of different parity")
        parity = self.parity if self.blocks else other.parity
        out = dict(self.blocks)
        for k, m in other.blocks.items():
            out[k] = out[k] + m if k in out else m
        return GradedOperator(self.n, parity, out)

    def __neg__(self) -> "GradedOperator":
        return GradedOperator(self.n, self.parity, {k: -m for k, m in self.blocks.items()})

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self + (-other)

    def scale(self, c) -> "GradedOperator":
        return GradedOperator(self.n, self.parity, {k: m.scale(c) for k, m in self.blocks.items()})

    def __rmul__(self, c) -> "GradedOperator":
        return self.scale(c)

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        return compose(self, other)

    def __pow__(self, k: int) -> "GradedOperator":
        out = GradedOperator.identity(self.n)
        for _ in range(k):
            out = compose(self, out)
        return out

    def adjoint(self) -> "GradedOperator":
        """Metric adjoint computed blockwise from the Gram matrices."""
        n = self.n
        blocks = {(dst, src): gram_adjoint(m, gram(n, src), gram(n, dst)) for (src, dst), m in self.blocks.items()}
        name = self.name[:-1] if self.name.endswith("*") else (self.name + "*" if self.name else "")
        return GradedOperator(n, self.parity, blocks, name)

    def conj(self) -> "GradedOperator":
        """The operator ``C o A o C`` with ``C`` complex conjugation of forms."""
        n = self.n
        blocks = {}
        for (src, dst), m in self.blocks.items():
            s_bar = (src[1], src[0])
            d_bar = (dst[1], dst[0])
            blocks[(s_bar, d_bar)] = mat_mul(mat_mul(conj_matrix(n, dst), m.conj()), conj_matrix(n, s_bar))
        return GradedOperator(n, self.parity, blocks)

    def apply(self, form: BigradedForm) -> BigradedForm:
        out = BigradedForm.zero(self.n)
        by_deg: dict[Bidegree, tuple[Scalar, ...]] = {d: form.to_vector(d) for d in form.bidegrees()}
        for (src, dst), m in self.blocks.items():
            vec = by_deg.get(src)
            if vec is None:
                continue
            out = out + BigradedForm.from_vector(self.n, dst, m.apply(vec))
        return out

    def apply_vector(self, src: Bidegree, vec) -> dict[Bidegree, tuple[Scalar, ...]]:
        """Images of a coordinate vector on ``src``, keyed by target bidegree."""
        return {dst: m.apply(vec) for (s, dst), m in self.blocks.items() if s == src}

    def annihilates(self, src: Bidegree, vec) -> bool:
        return all(not any(v) for v in self.apply_vector(src, vec).values())

    def first_difference(self, other: "GradedOperator") -> Mismatch | None:
        """First differing entry in (source, target, row, col) order, or ``None``."""
        self._compatible(other)
        for key in sorted(set(self.blocks) | set(other.blocks)):
            src, dst = key
            a = self.blocks.get(key)
            b = other.blocks.get(key)
            shape = (block_size(self.n, dst), block_size(self.n, src))
            a = a if a is not None else Mat.zeros(*shape)
            b = b if b is not None else Mat.zeros(*shape)
            for i in range(shape[0]):
                for j in range(shape[1]):
                    if a.data[i][j] != b.data[i][j]:
                        return Mismatch(src, dst, i, j, a.data[i][j], b.data[i][j])
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedOperator):
            return NotImplemented
        return self.n == other.n and self.blocks == other.blocks

    __hash__ = None  # type: ignore[assignment]


def compose(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    """``a o b`` (apply ``b`` first)."""
    a._compatible(b)
    by_src: dict[Bidegree, list[tuple[Bidegree, Mat]]] = {}
    for (src, dst), m in a.blocks.items():
        by_src.setdefault(src, []).append((dst, m))
    out: dict[BlockKey, Mat] = {}
    for (s, mid), mb in b.blocks.items():
        for t, ma in by_src.get(mid, ()):
            prod = mat_mul(ma, mb)
            key = (s, t)
            out[key] = out[key] + prod if key in out else prod
    return GradedOperator(a.n, a.parity + b.parity, out)


def graded_commutator(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    """``[a, b] = ab - (-1)^{|a||b|} ba``."""
    ab = compose(a, b)
    ba = compose(b, a)
    out = ab + ba if (a.parity and b.parity) else ab - ba
    return GradedOperator(a.n, a.parity + b.parity, out.blocks)


def scalar_operator(n: int, fn: Callable[[Bidegree], object]) -> GradedOperator:
    """Diagonal operator acting on ``A^{p,q}`` as ``fn((p, q))``."""
    return GradedOperator(
        n, 0, {(d, d): Mat.identity(block_size(n, d)).scale(fn(d)) for d in bidegrees(n)}
    )
