"""Kernel tables, dualities, Lefschetz structure and the derived inequalities.

All kernels are exact. Tables are indexed ``entries[p][q]``;
:meth:`DimensionTable.grid` gives the display layout used for printing
(``q`` decreasing down the rows, ``p`` increasing along the columns, so the
origin sits bottom-left as in a Hodge diamond drawn on axes).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .calculus import laplacian
from .exterior import bidegrees, block_size, conj_matrix, gram, star_matrix, star_target
from .graded import GradedOperator
from .linalg import (
    KernelBasis,
    Mat,
    hstack,
    inner,
    is_positive_semidefinite,
    kernel_basis,
    mat_mul,
    rank,
    solve_in_span,
    span_basis,
    vstack,
)
from .model import CoalgebraSpec, HermitianStructure, build_d

__all__ = [
    "DimensionTable",
    "BettiVector",
    "Check",
    "Report",
    "kernel_bases",
    "kernel_table",
    "box_kernels",
    "box_table",
    "hodge_table",
    "laplacian_table",
    "lefschetz_rank",
    "betti_numbers",
    "duality_check",
    "lefschetz_check",
    "primitive_dims",
    "inequality_report",
    "lambda_cohomology_table",
    "pluriclosed_equivalence",
    "holomorphic_form_check",
    "pointwise_injectivity",
    "box_structure_check",
    "ZERO_ORDER",
]

Bidegree = tuple[int, int]
ZERO_ORDER = ("tau", "taubar", "lam", "lambar")


# ---------------------------------------------------------------------------
# result types

@dataclass(frozen=True)
class DimensionTable:
    n: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.n + 1 or any(len(r) != self.n + 1 for r in self.entries):
            raise ValueError("table must be (n+1) x (n+1)")
        for p, row in enumerate(self.entries):
            for q, v in enumerate(row):
                if not 0 <= v <= comb(self.n, p) * comb(self.n, q):
                    raise ValueError(f"entry ({p},{q}) = {v} out of range")

    @classmethod
    def from_function(cls, n: int, fn) -> "DimensionTable":
        return cls(n, tuple(tuple(int(fn((p, q))) for q in range(n + 1)) for p in range(n + 1)))

    @classmethod
    def from_grid(cls, grid: Sequence[Sequence[int]]) -> "DimensionTable":
        """Inverse of :meth:`grid`."""
        n = len(grid) - 1
        return cls.from_function(n, lambda d: grid[n - d[1]][d[0]])

    def __getitem__(self, pq: Bidegree) -> int:
        p, q = pq
        return self.entries[p][q]

    def get(self, pq: Bidegree, default: int = 0) -> int:
        p, q = pq
        if 0 <= p <= self.n and 0 <= q <= self.n:
            return self.entries[p][q]
        return default

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def grid(self) -> list[list[int]]:
        """Display layout: row ``r`` holds ``q = n - r``, column ``c`` holds ``p = c``."""
        n = self.n
        return [[self.entries[p][n - r] for p in range(n + 1)] for r in range(n + 1)]

    def transpose(self) -> "DimensionTable":
        return DimensionTable.from_function(self.n, lambda d: self[d[1], d[0]])

    def render(self, title: str = "") -> str:
        n = self.n
        g = self.grid()
        width = max(2, max(len(str(v)) for row in g for v in row))
        lines = [title] if title else []
        for r, row in enumerate(g):
            lines.append(f"q={n - r} | " + " ".join(str(v).rjust(width) for v in row))
        lines.append("    +-" + "-" * ((width + 1) * (n + 1) - 1))
        lines.append("  p:   " + " ".join(str(p).rjust(width) for p in range(n + 1)))
        return "\n".join(lines)


@dataclass(frozen=True)
class BettiVector:
    """Invariant Betti numbers ``b^0 .. b^{2n}`` (Chevalley-Eilenberg cohomology)."""

    b: tuple[int, ...]

    def __getitem__(self, k: int) -> int:
        return self.b[k] if 0 <= k < len(self.b) else 0

    def poincare_duality(self) -> bool:
        return self.b == self.b[::-1]


@dataclass(frozen=True)
class Check:
    """One claim with its verdict; ``informational`` checks do not affect the report verdict."""

    label: str
    ok: bool
    detail: str = ""
    informational: bool = False


@dataclass
class Report:
    kind: str
    checks: list[Check] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(c.ok for c in self.checks if not c.informational)

    def add(self, label: str, ok: bool, detail: str = "", informational: bool = False) -> None:
        self.checks.append(Check(label, bool(ok), detail, informational))

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok and not c.informational]


# ---------------------------------------------------------------------------
# kernels

def kernel_bases(op: GradedOperator) -> dict[Bidegree, KernelBasis]:
    """Kernel basis of each diagonal block of a bidegree-preserving operator."""
    bad = [k for k in op.blocks if k[0] != k[1]]
    if bad:
        raise ValueError(f"{op.name or 'operator'} does not preserve bidegree: block {bad[0]}")
    return {d: kernel_basis(op.block(d, d)) for d in bidegrees(op.n)}


def kernel_table(op: GradedOperator) -> DimensionTable:
    ker = kernel_bases(op)
    return DimensionTable.from_function(op.n, lambda d: ker[d].dim)


def _cached(h: HermitianStructure, key, make):
    if key not in h.cache:
        h.cache[key] = make()
    return h.cache[key]


def box_kernels(h: HermitianStructure) -> dict[Bidegree, KernelBasis]:
    return _cached(h, "box_kernels", lambda: kernel_bases(h.box))


def _laplacian_sum(h: HermitianStructure, names: Sequence[str]) -> GradedOperator:
    def make():
        out = GradedOperator.zero(h.n)
        for name in names:
            out = out + _cached(h, ("lap", name), lambda: laplacian(h.ops[name]))
        return out

    return _cached(h, ("lapsum", tuple(names)), make)


def _kernels_of(h: HermitianStructure, names: Sequence[str]) -> dict[Bidegree, KernelBasis]:
    return _cached(h, ("ker", tuple(names)), lambda: kernel_bases(_laplacian_sum(h, names)))


def box_table(h: HermitianStructure) -> DimensionTable:
    ker = box_kernels(h)
    return DimensionTable.from_function(h.n, lambda d: ker[d].dim)


def hodge_table(h: HermitianStructure) -> DimensionTable:
    """``h^{p,q} = dim Ker Delta_delbar`` on invariant forms."""
    ker = _kernels_of(h, ("delbar",))
    return DimensionTable.from_function(h.n, lambda d: ker[d].dim)


def laplacian_table(h: HermitianStructure, names: Sequence[str]) -> DimensionTable:
    """Kernel dimensions of the sum of the Laplacians of ``names``."""
    ker = _kernels_of(h, names)
    return DimensionTable.from_function(h.n, lambda d: ker[d].dim)


def _in_kernel(op: GradedOperator, src: Bidegree, vec) -> bool:
    return op.annihilates(src, vec)


# ---------------------------------------------------------------------------
# Betti numbers

def _total_degree_matrix(op: GradedOperator, k: int) -> Mat:
    n = op.n
    src = [(p, k - p) for p in range(k + 1) if p <= n and k - p <= n]
    dst = [(p, k + 1 - p) for p in range(k + 2) if p <= n and k + 1 - p <= n]
    return vstack([hstack([op.block(s, t) for s in src]) for t in dst]) if src and dst else Mat.zeros(0, 0)


def betti_numbers(spec: CoalgebraSpec) -> BettiVector:
    """Cohomology of ``d`` on invariant forms, degree by degree.

    For nilmanifolds this equals the de Rham cohomology of the manifold.
    """
    n = spec.n
    d = build_d(spec)["d"]
    dims = [sum(block_size(n, (p, k - p)) for p in range(k + 1) if p <= n and k - p <= n) for k in range(2 * n + 1)]
    ranks = [rank(_total_degree_matrix(d, k)) if k < 2 * n else 0 for k in range(2 * n + 1)]
    return BettiVector(tuple(dims[k] - ranks[k] - (ranks[k - 1] if k else 0) for k in range(2 * n + 1)))


# ---------------------------------------------------------------------------
# dualities

def _conj_vec(n: int, src: Bidegree, vec) -> tuple:
    return conj_matrix(n, src).apply([x.conjugate() for x in vec])


def _dual_maps(h: HermitianStructure, ker: dict[Bidegree, KernelBasis], op: GradedOperator, rep: Report, tag: str) -> None:
    """Conjugation and star carry the kernel of ``op`` onto itself."""
    n = h.n
    for d in bidegrees(n):
        p, q = d
        basis = ker[d].basis
        bad = [i for i, v in enumerate(basis) if not _in_kernel(op, (q, p), _conj_vec(n, d, v))]
        rep.add(
            f"{tag}conj {d}->{(q, p)}",
            ker[d].dim == ker[(q, p)].dim and not bad,
            f"dims {ker[d].dim},{ker[(q, p)].dim}" + (f"; basis vector {bad[0]} leaves the kernel" if bad else ""),
        )
    for d in bidegrees(n):
        t = star_target(n, d)
        sm = star_matrix(n, d)
        bad = [i for i, v in enumerate(ker[d].basis) if not _in_kernel(op, t, sm.apply(v))]
        rep.add(
            f"{tag}star {d}->{t}",
            ker[d].dim == ker[t].dim and not bad,
            f"dims {ker[d].dim},{ker[t].dim}" + (f"; basis vector {bad[0]} leaves the kernel" if bad else ""),
        )
    for d in bidegrees(n):
        s = (n - d[0], n - d[1])
        rep.add(f"{tag}serre {d}~{s}", ker[d].dim == ker[s].dim, f"dims {ker[d].dim},{ker[s].dim}")


def duality_check(h: HermitianStructure) -> Report:
    """Conjugation, Hodge star and Serre duality of ``Ker box``, plus the star-adjoint mechanism.

    The same dualities are checked for the partial sums
    ``Delta_del + Delta_delbar``, ``Delta_tau + Delta_taubar`` and
    ``Delta_lam + Delta_lambar``, which are real operators for the same
    reason.
    """
    from .calculus import printed_variant_check, star_adjoint_check

    rep = Report("dualities")
    _dual_maps(h, box_kernels(h), h.box, rep, "")
    for names in (("del", "delbar"), ("tau", "taubar"), ("lam", "lambar")):
        tag = f"D_{names[0]}+D_{names[1]}: "
        _dual_maps(h, _kernels_of(h, names), _laplacian_sum(h, names), rep, tag)
    for r in star_adjoint_check(h):
        rep.add(r.identity_id + ": " + r.text, r.holds, "" if r.holds else r.first_failure.describe())
    for r in printed_variant_check(h):
        if r.identity_id.startswith("printed.star."):
            rep.add(
                r.identity_id + ": " + r.text,
                r.holds,
                "" if r.holds else r.first_failure.describe(),
                informational=True,
            )
    return rep


# ---------------------------------------------------------------------------
# Lefschetz structure

def _coords_in(basis: KernelBasis, vectors) -> tuple[list[tuple], int]:
    """Coordinates of each vector in ``basis``; second value counts vectors outside the span."""
    coords, outside = [], 0
    for v in vectors:
        c = solve_in_span(basis, v)
        if c is None:
            outside += 1
        else:
            coords.append(c)
    return coords, outside


def lefschetz_check(h: HermitianStructure) -> tuple[Report, list[dict]]:
    """``L`` and ``Lam`` preserve ``Ker box``; ``L^{n-k}`` is an isomorphism on kernels.

    Returns the report and one witness per ``(p, k)`` with the dimensions of
    source and target and the exact rank of ``L^{n-k}`` between the kernel
    bases.
    """
    n = h.n
    ker = box_kernels(h)
    L, Lam = h.ops["L"], h.ops["Lam"]
    rep = Report("lefschetz")
    for name, op, sh in (("L", L, (1, 1)), ("Lam", Lam, (-1, -1))):
        for d in bidegrees(n):
            t = (d[0] + sh[0], d[1] + sh[1])
            if not (0 <= t[0] <= n and 0 <= t[1] <= n):
                continue
            m = op.block(d, t)
            _, outside = _coords_in(ker[t], [m.apply(v) for v in ker[d].basis])
            rep.add(f"{name} maps Ker{d} into Ker{t}", outside == 0, f"{outside} image(s) outside" if outside else "")
    witnesses = []
    for p in range(n + 1):
        for k in range(p, n + 1):
            src, dst = (p, k - p), (p + n - k, n - p)
            m = (L ** (n - k)).block(src, dst)
            coords, outside = _coords_in(ker[dst], [m.apply(v) for v in ker[src].basis])
            r = rank(Mat.from_columns(ker[dst].dim, coords)) if coords and ker[dst].dim else 0
            a, b = ker[src].dim, ker[dst].dim
            ok = outside == 0 and a == b == r
            witnesses.append({"p": p, "k": k, "source": src, "target": dst, "dim_source": a, "dim_target": b, "rank": r})
            rep.add(f"L^{n - k}: Ker{src} -> Ker{dst}", ok, f"dims {a}->{b}, rank {r}")
    return rep, witnesses


def lefschetz_rank(h: HermitianStructure, src: Bidegree, dst: Bidegree) -> int:
    """Rank of the appropriate power of ``L`` from ``Ker box`` at ``src`` into ``Ker box`` at ``dst``."""
    j = dst[0] - src[0]
    if j < 0 or dst[1] - src[1] != j:
        raise ValueError(f"no power of L maps {src} to {dst}")
    ker = box_kernels(h)
    m = (h.ops["L"] ** j).block(src, dst)
    coords, outside = _coords_in(ker[dst], [m.apply(v) for v in ker[src].basis])
    if outside:
        raise ValueError("L does not preserve the kernel")
    return rank(Mat.from_columns(ker[dst].dim, coords)) if coords and ker[dst].dim else 0


def _primitive_bases(h: HermitianStructure) -> dict[Bidegree, list[tuple]]:
    ker = box_kernels(h)
    Lam = h.ops["Lam"]
    out = {}
    for d in bidegrees(h.n):
        b = ker[d]
        if not b.dim or d[0] == 0 or d[1] == 0:
            out[d] = list(b.basis)
            continue
        m = mat_mul(Lam.block(d, (d[0] - 1, d[1] - 1)), b.as_matrix())
        out[d] = [b.as_matrix().apply(c) for c in kernel_basis(m).basis]
    return out


def primitive_dims(h: HermitianStructure) -> tuple[DimensionTable, Report]:
    """Dimensions of ``Ker box ∩ Ker Lam`` with the Lefschetz decomposition checks."""
    n = h.n
    ker = box_kernels(h)
    prim = _primitive_bases(h)
    table = DimensionTable.from_function(n, lambda d: len(prim[d]))
    rep = Report("primitives")
    L = h.ops["L"]
    g_cache = {d: gram(n, d) for d in bidegrees(n)}
    for p in range(n + 1):
        for q in range(n + 1 - p):
            pieces = []
            for j in range(min(p, q) + 1):
                s = (p - j, q - j)
                m = (L ** j).block(s, (p, q))
                pieces.append([m.apply(v) for v in prim[s]])
            total = sum(len(x) for x in pieces)
            rep.add(
                f"reconstruction ({p},{q})",
                total == ker[(p, q)].dim,
                f"sum of primitive pieces {total}, kernel {ker[(p, q)].dim}",
            )
            span = span_basis(block_size(n, (p, q)), [v for x in pieces for v in x])
            orth = all(
                not inner(u, v, g_cache[(p, q)])
                for a in range(len(pieces))
                for b in range(a + 1, len(pieces))
                for u in pieces[a]
                for v in pieces[b]
            )
            rep.add(
                f"orthogonal direct sum ({p},{q})",
                span.dim == total and orth,
                f"span {span.dim}, pieces {total}, orthogonal {orth}",
            )
    for p in range(n + 1):
        for q in range(n + 1):
            if p + q + 2 <= n:
                a, b = ker[(p, q)].dim, ker[(p + 1, q + 1)].dim
                rep.add(f"monotone ({p},{q})<=({p + 1},{q + 1})", a <= b, f"{a} <= {b}")
    return table, rep


# ---------------------------------------------------------------------------
# inequalities

def inequality_report(h: HermitianStructure, betti: BettiVector | None = None, use_betti: bool = True) -> Report:
    """Kernel dimensions against Betti and Hodge numbers.

    ``use_betti=False`` skips every check that involves Betti numbers (for
    input whose invariant cohomology need not be the manifold's).
    """
    n = h.n
    k_box = box_table(h)
    k_del = laplacian_table(h, ("del", "delbar"))
    hodge = hodge_table(h)
    rep = Report("inequalities")
    if use_betti:
        betti = betti or betti_numbers(h.spec)
        rep.add("invariant Poincare duality", betti.poincare_duality(), str(betti.b))
        for label, tab in (("box", k_box), ("D_del+D_delbar", k_del)):
            for k in range(2 * n + 1):
                s = sum(tab.get((p, k - p)) for p in range(k + 1))
                rep.add(f"{label}: sum over p+q={k} <= b^{k}", s <= betti[k], f"{s} <= {betti[k]}")
    for label, tab in (("box", k_box), ("D_del+D_delbar", k_del)):
        for p, q in bidegrees(n):
            bound = min(hodge[p, q], hodge[q, p])
            rep.add(f"{label}: ({p},{q}) <= min(h^{p},{q}, h^{q},{p})", tab[p, q] <= bound, f"{tab[p, q]} <= {bound}")
    if use_betti:
        for k in range(n + 1):
            if betti[k]:
                continue
            for p, q in bidegrees(n):
                if p + q <= k and (p + q - k) % 2 == 0:
                    rep.add(f"b^{k}=0 forces Ker({p},{q})=0", k_box[p, q] == 0, f"dim {k_box[p, q]}")
        for p, q in bidegrees(n):
            if not k_box[p, q]:
                continue
            for k in range(p + q, 2 * n - p - q + 1, 2):
                rep.add(f"Ker({p},{q})!=0 forces b^{k}!=0", betti[k] != 0, f"b^{k} = {betti[k]}")
    return rep


# ---------------------------------------------------------------------------
# lambda cohomology

def lambda_cohomology_table(h: HermitianStructure, which: str = "lam") -> tuple[DimensionTable, Report]:
    """``dim Ker Delta_lam`` (or ``Delta_lambar``) with the fiberwise decomposition checks."""
    if which not in ("lam", "lambar"):
        raise ValueError("which must be 'lam' or 'lambar'")
    n = h.n
    op = h.ops[which]
    adj = h.ops[which + "*"]
    sh = (2, 1) if which == "lam" else (1, 2)
    ker = _kernels_of(h, (which,))
    table = DimensionTable.from_function(n, lambda d: ker[d].dim)
    rep = Report(f"lambda:{which}")
    for p, q in bidegrees(n):
        d = (p, q)
        before = (p - sh[0], q - sh[1])
        after = (p + sh[0], q + sh[1])
        r_in = rank(op.block(before, d)) if min(before) >= 0 else 0
        r_out = rank(adj.block(after, d)) if max(after) <= n else 0
        size = block_size(n, d)
        rep.add(
            f"decomposition ({p},{q})",
            size == r_in + table[d] + r_out,
            f"{size} = {r_in} + {table[d]} + {r_out}",
        )
    for p, q in bidegrees(n):
        rep.add(f"serre ({p},{q})~({n - p},{n - q})", table[p, q] == table[n - p, n - q], f"{table[p, q]}, {table[n - p, n - q]}")
    lap_op = _laplacian_sum(h, (which,))
    box_ker = box_kernels(h)
    for d in bidegrees(n):
        bad = [i for i, v in enumerate(box_ker[d].basis) if not _in_kernel(lap_op, d, v)]
        rep.add(
            f"Ker box{d} inside Ker D_{which}",
            box_ker[d].dim <= table[d] and not bad,
            f"{box_ker[d].dim} <= {table[d]}" + (f"; basis vector {bad[0]} not annihilated" if bad else ""),
        )
    return table, rep


# ---------------------------------------------------------------------------
# propositions and corollaries

def pluriclosed_equivalence(h: HermitianStructure) -> Report:
    """Compare ``Ker box`` with ``Ker(Delta_del + Delta_delbar + Delta_tau + Delta_taubar)``.

    Containment always holds; equality is asserted only when ``del delbar omega = 0``.
    """
    n = h.n
    box_ker = box_kernels(h)
    names = ("del", "delbar", "tau", "taubar")
    four = _laplacian_sum(h, names)
    four_ker = _kernels_of(h, names)
    pluri = h.is_pluriclosed()
    rep = Report("pluriclosed")
    rep.add("pluri-closed (del delbar omega = 0)", pluri, "", informational=True)
    for d in bidegrees(n):
        contained = all(_in_kernel(four, d, v) for v in box_ker[d].basis)
        rep.add(f"Ker box{d} inside Ker D4{d}", contained, f"{box_ker[d].dim} vs {four_ker[d].dim}")
        if pluri:
            back = all(_in_kernel(h.box, d, v) for v in four_ker[d].basis)
            rep.add(f"Ker D4{d} inside Ker box{d}", back, f"{four_ker[d].dim} vs {box_ker[d].dim}")
    return rep


@dataclass(frozen=True)
class HolomorphicResult:
    p: int
    dim: int
    basis: tuple[tuple, ...]
    in_kernel: bool
    consequences: tuple[Check, ...]

    @property
    def verdict(self) -> bool:
        return self.in_kernel and all(c.ok for c in self.consequences)


def holomorphic_form_check(
    h: HermitianStructure, betti: BettiVector | None = None, use_betti: bool = True
) -> tuple[Report, list[HolomorphicResult]]:
    """Holomorphic ``del``-harmonic ``(p,0)``-forms with ``d omega ^ eta = 0``.

    The whole solution space is found by linear algebra; each basis vector is
    checked to lie in ``Ker box^{p,0}``. When the space is nonzero the
    resulting nonvanishing of Hodge and Betti numbers is checked too.
    """
    n = h.n
    box_ker = box_kernels(h)
    hodge = hodge_table(h)
    d_del = _laplacian_sum(h, ("del",))
    rep = Report("holomorphic")
    results = []
    for p in range(n + 1):
        src = (p, 0)
        rows = [h.ops["delbar"].block(src, (p, 1)), d_del.block(src, src)]
        for name in ("lam", "lambar"):
            op = h.ops[name]
            rows += [m for (s, _), m in op.blocks.items() if s == src]
        sol = kernel_basis(vstack(rows))
        inside = all(_in_kernel(h.box, src, v) for v in sol.basis)
        cons = []
        if sol.dim:
            for j in range(n - p + 1):
                cons.append(Check(f"h^{p + j},{j} != 0", hodge[p + j, j] != 0, str(hodge[p + j, j])))
                cons.append(Check(f"h^{j},{p + j} != 0", hodge[j, p + j] != 0, str(hodge[j, p + j])))
            if p and use_betti:
                b = betti or betti_numbers(h.spec)
                for j in range(n - p + 1):
                    k = p + 2 * j
                    cons.append(Check(f"b^{k} >= 2", b[k] >= 2, str(b[k])))
        res = HolomorphicResult(p, sol.dim, sol.basis, inside, tuple(cons))
        results.append(res)
        rep.add(f"p={p}: solutions inside Ker box{src}", inside, f"dim {sol.dim}, kernel {box_ker[src].dim}")
        for c in cons:
            rep.add(f"p={p}: {c.label}", c.ok, c.detail)
    return rep, results


def pointwise_injectivity(h: HermitianStructure) -> tuple[Report, list[dict]]:
    """Injectivity of each zero-order operator and its adjoint on each bidegree.

    For invariant structures these operators have constant coefficients, so
    injectivity at a point is injectivity of the block. Injectivity anywhere
    on ``A^{p,q}`` forces ``Ker box^{p,q} = 0``.
    """
    n = h.n
    table = box_table(h)
    rep = Report("injectivity")
    rows = []
    for name in ZERO_ORDER + tuple(x + "*" for x in ZERO_ORDER):
        op = h.ops[name]
        for d in bidegrees(n):
            size = block_size(n, d)
            if not size:
                continue
            blocks = [m for (s, _), m in op.blocks.items() if s == d]
            r = rank(vstack(blocks)) if blocks else 0
            inj = r == size
            rows.append({"operator": name, "bidegree": d, "injective": inj, "rank": r, "dim": size})
            if inj:
                rep.add(f"{name} injective on {d} => Ker box{d} = 0", table[d] == 0, f"kernel {table[d]}")
    return rep, rows


def box_structure_check(h: HermitianStructure) -> Report:
    """Reality, self-adjointness and positivity of the box; its kernel splits by bidegree."""
    n = h.n
    b = h.box
    rep = Report("box")
    rep.add("box preserves bidegree", all(s == t for s, t in b.blocks), "")
    rep.add("box is real", b.conj().first_difference(b) is None, "")
    rep.add("box is self-adjoint", b.adjoint().first_difference(b) is None, "")
    for d in bidegrees(n):
        # <box x, y> = y^H G box x, so G box is the Hermitian form
        form = mat_mul(gram(n, d), b.block(d, d))
        rep.add(f"box{d} positive semi-definite", is_positive_semidefinite(form), "")
    # <box x, x> = sum |delta x|^2 + |delta* x|^2 over the six operators
    for d in bidegrees(n):
        terms = []
        for name in ("del", "delbar", "tau", "taubar", "lam", "lambar"):
            for nm in (name, name + "*"):
                terms += [m for (s, _), m in h.ops[nm].blocks.items() if s == d]
        ker_all = kernel_basis(vstack(terms)).dim if terms else block_size(n, d)
        rep.add(f"Ker box{d} = common kernel of the six operators and adjoints", ker_all == box_kernels(h)[d].dim, "")
    return rep
