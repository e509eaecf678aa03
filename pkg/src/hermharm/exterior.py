"""Bigraded exterior algebra of a Hermitian vector space of complex dimension n.

The unitary (1,0)-coframe is ``phi_1..phi_n`` and ``phi_k = e_{2k-1} + i e_{2k}``
for a real orthonormal coframe ``e_1..e_{2n}``. A monomial stores the sorted
indices of its ``phi`` factors and of its ``phibar`` factors; canonical factor
order puts every ``phi`` before every ``phibar``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, NamedTuple, Sequence

from .linalg import Mat
from .scalar import I, ONE, ZERO, Scalar, as_scalar

__all__ = [
    "Monomial",
    "BigradedForm",
    "bidegrees",
    "block_size",
    "enumerate_basis",
    "basis_index",
    "wedge",
    "gram",
    "hodge_star",
    "star_matrix",
    "conj_matrix",
    "phi",
    "phibar",
    "real_e",
    "volume_form",
]

Bidegree = tuple[int, int]


class Monomial(NamedTuple):
    holo: tuple[int, ...]
    anti: tuple[int, ...]

    @property
    def bidegree(self) -> Bidegree:
        return (len(self.holo), len(self.anti))

    @property
    def degree(self) -> int:
        return len(self.holo) + len(self.anti)

    def label(self) -> str:
        parts = [f"phi{k}" for k in self.holo] + [f"phibar{k}" for k in self.anti]
        return "^".join(parts) if parts else "1"


EMPTY = Monomial((), ())


def _sort_sign(seq: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``seq`` (0 if an index repeats)."""
    if len(set(seq)) != len(seq):
        return 0, ()
    inv = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(seq))


def _key(m: Monomial, n: int) -> tuple[int, ...]:
    return m.holo + tuple(n + k for k in m.anti)


def _from_key(key: Iterable[int], n: int) -> Monomial:
    key = tuple(key)
    return Monomial(tuple(k for k in key if k <= n), tuple(k - n for k in key if k > n))


def bidegrees(n: int) -> list[Bidegree]:
    return [(p, q) for p in range(n + 1) for q in range(n + 1)]


def block_size(n: int, deg: Bidegree) -> int:
    p, q = deg
    if not (0 <= p <= n and 0 <= q <= n):
        return 0
    return comb(n, p) * comb(n, q)


@lru_cache(maxsize=None)
def enumerate_basis(n: int, deg: Bidegree) -> tuple[Monomial, ...]:
    """All monomials of bidegree ``deg``, lexicographic in ``(holo, anti)``."""
    p, q = deg
    if not (0 <= p <= n and 0 <= q <= n):
        raise ValueError(f"bidegree {deg} out of range for n={n}")
    idx = range(1, n + 1)
    return tuple(Monomial(h, a) for h in combinations(idx, p) for a in combinations(idx, q))


@lru_cache(maxsize=None)
def basis_index(n: int, deg: Bidegree) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(enumerate_basis(n, deg))}


class BigradedForm:
    """Finitely supported combination of monomials with Scalar coefficients."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Mapping[Monomial, object] | None = None):
        self.n = n
        clean: dict[Monomial, Scalar] = {}
        for m, c in (coeffs or {}).items():
            m = Monomial(tuple(m[0]), tuple(m[1]))
            if any(not 1 <= k <= n for k in m.holo + m.anti):
                raise ValueError(f"index out of range in {m} for n={n}")
            if list(m.holo) != sorted(set(m.holo)) or list(m.anti) != sorted(set(m.anti)):
                raise ValueError(f"monomial {m} is not strictly increasing")
            c = as_scalar(c)
            if c:
                clean[m] = clean.get(m, ZERO) + c
        self.coeffs = {m: c for m, c in clean.items() if c}

    @classmethod
    def _raw(cls, n: int, coeffs: dict[Monomial, Scalar]) -> "BigradedForm":
        f = object.__new__(cls)
        f.n = n
        f.coeffs = {m: c for m, c in coeffs.items() if c}
        return f

    @classmethod
    def zero(cls, n: int) -> "BigradedForm":
        return cls._raw(n, {})

    @classmethod
    def one(cls, n: int) -> "BigradedForm":
        return cls._raw(n, {EMPTY: ONE})

    @classmethod
    def monomial(cls, n: int, m: Monomial, c=ONE) -> "BigradedForm":
        return cls(n, {m: c})

    @classmethod
    def from_vector(cls, n: int, deg: Bidegree, vec: Sequence[Scalar]) -> "BigradedForm":
        basis = enumerate_basis(n, deg)
        if len(vec) != len(basis):
            raise ValueError("vector length does not match block size")
        return cls._raw(n, {m: as_scalar(c) for m, c in zip(basis, vec)})

    def to_vector(self, deg: Bidegree) -> tuple[Scalar, ...]:
        return tuple(self.coeffs.get(m, ZERO) for m in enumerate_basis(self.n, deg))

    def bidegrees(self) -> set[Bidegree]:
        return {m.bidegree for m in self.coeffs}

    def component(self, deg: Bidegree) -> "BigradedForm":
        return BigradedForm._raw(self.n, {m: c for m, c in self.coeffs.items() if m.bidegree == deg})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def _check(self, other: "BigradedForm") -> None:
        if not isinstance(other, BigradedForm) or other.n != self.n:
            raise ValueError("forms live in different algebras")

    def __add__(self, other: "BigradedForm") -> "BigradedForm":
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, ZERO) + c
        return BigradedForm._raw(self.n, out)

    def __neg__(self) -> "BigradedForm":
        return BigradedForm._raw(self.n, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other: "BigradedForm") -> "BigradedForm":
        return self + (-other)

    def scale(self, c) -> "BigradedForm":
        c = as_scalar(c)
        return BigradedForm._raw(self.n, {m: c * v for m, v in self.coeffs.items()})

    def __rmul__(self, c) -> "BigradedForm":
        return self.scale(c)

    def __xor__(self, other: "BigradedForm") -> "BigradedForm":
        return wedge(self, other)

    def conj(self) -> "BigradedForm":
        """Complex conjugate: ``conj(c phi_I phibar_J) = conj(c) (-1)^{|I||J|} phi_J phibar_I``."""
        out = {}
        for m, c in self.coeffs.items():
            sign = -1 if (len(m.holo) * len(m.anti)) & 1 else 1
            out[Monomial(m.anti, m.holo)] = c.conjugate() * sign
        return BigradedForm._raw(self.n, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BigradedForm):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "BigradedForm(0)"
        terms = [f"({c})*{m.label()}" for m, c in sorted(self.coeffs.items())]
        return "BigradedForm(" + " + ".join(terms) + ")"


def wedge_monomials(a: Monomial, b: Monomial, n: int) -> tuple[int, Monomial]:
    sign, key = _sort_sign(_key(a, n) + _key(b, n))
    return sign, _from_key(key, n) if sign else EMPTY


def wedge(a: BigradedForm, b: BigradedForm) -> BigradedForm:
    """Exterior product with signs from sorting the concatenated factors."""
    a._check(b)
    n = a.n
    out: dict[Monomial, Scalar] = {}
    for ma, ca in a.coeffs.items():
        for mb, cb in b.coeffs.items():
            sign, m = wedge_monomials(ma, mb, n)
            if sign:
                v = ca * cb
                out[m] = out.get(m, ZERO) + (v if sign > 0 else -v)
    return BigradedForm._raw(n, out)


@lru_cache(maxsize=None)
def gram(n: int, deg: Bidegree) -> Mat:
    """Diagonal Gram matrix; each ``phi``/``phibar`` factor has squared norm 2."""
    size = block_size(n, deg)
    return Mat.diagonal([2 ** (deg[0] + deg[1])] * size)


def phi(n: int, k: int) -> BigradedForm:
    return BigradedForm._raw(n, {Monomial((k,), ()): ONE})


def phibar(n: int, k: int) -> BigradedForm:
    return BigradedForm._raw(n, {Monomial((), (k,)): ONE})


# real coframe ---------------------------------------------------------------

_HALF = Scalar(1, 0) / 2
_MINUS_HALF_I = -(I / 2)


def real_e(n: int, j: int) -> BigradedForm:
    """The real coframe element ``e_j`` written in the complex basis."""
    if not 1 <= j <= 2 * n:
        raise ValueError(f"e{j} out of range for n={n}")
    k = (j + 1) // 2
    if j % 2:
        # e_{2k-1} = (phi_k + phibar_k) / 2
        return BigradedForm._raw(n, {Monomial((k,), ()): _HALF, Monomial((), (k,)): _HALF})
    # e_{2k} = (phi_k - phibar_k) / (2i)
    return BigradedForm._raw(n, {Monomial((k,), ()): _MINUS_HALF_I, Monomial((), (k,)): -_MINUS_HALF_I})


def _to_real(form: BigradedForm) -> dict[tuple[int, ...], Scalar]:
    """Expand into the real monomial basis ``e_S`` (S sorted, 1-based)."""
    n = form.n
    out: dict[tuple[int, ...], Scalar] = {}
    for m, c in form.coeffs.items():
        # each factor is a two-term combination of e's
        factors = [((2 * k - 1, ONE), (2 * k, I)) for k in m.holo]
        factors += [((2 * k - 1, ONE), (2 * k, -I)) for k in m.anti]
        terms: list[tuple[tuple[int, ...], Scalar]] = [((), c)]
        for fac in factors:
            nxt = []
            for seq, coef in terms:
                for idx, w in fac:
                    if idx not in seq:
                        nxt.append((seq + (idx,), coef * w))
            terms = nxt
        for seq, coef in terms:
            sign, key = _sort_sign(seq)
            out[key] = out.get(key, ZERO) + (coef if sign > 0 else -coef)
    return {k: v for k, v in out.items() if v}


def _from_real(n: int, coeffs: Mapping[tuple[int, ...], Scalar]) -> BigradedForm:
    out = BigradedForm.zero(n)
    for key, c in coeffs.items():
        term = BigradedForm.one(n).scale(c)
        for j in key:
            term = wedge(term, real_e(n, j))
        out = out + term
    return out


def _real_star(key: tuple[int, ...], n: int) -> tuple[int, tuple[int, ...]]:
    comp = tuple(j for j in range(1, 2 * n + 1) if j not in key)
    sign, _ = _sort_sign(key + comp)
    return sign, comp


def hodge_star(form: BigradedForm) -> BigradedForm:
    """Complex-linear Hodge star for the orientation ``e_1 ^ ... ^ e_2n``.

    Computed in the real basis, where ``*e_S = sign(S, S^c) e_{S^c}``.
    """
    n = form.n
    real = _to_real(form)
    starred: dict[tuple[int, ...], Scalar] = {}
    for key, c in real.items():
        sign, comp = _real_star(key, n)
        starred[comp] = starred.get(comp, ZERO) + (c if sign > 0 else -c)
    return _from_real(n, starred)


def star_target(n: int, deg: Bidegree) -> Bidegree:
    return (n - deg[1], n - deg[0])


@lru_cache(maxsize=None)
def star_matrix(n: int, deg: Bidegree) -> Mat:
    """Block of the Hodge star from ``deg`` to ``(n - q, n - p)``."""
    tgt = star_target(n, deg)
    cols = [hodge_star(BigradedForm.monomial(n, m)).to_vector(tgt) for m in enumerate_basis(n, deg)]
    return Mat.from_columns(block_size(n, tgt), cols)


@lru_cache(maxsize=None)
def conj_matrix(n: int, deg: Bidegree) -> Mat:
    """Signed permutation taking coordinates on ``(p,q)`` to those of the conjugate on ``(q,p)``.

    ``conj(x)`` has coordinates ``conj_matrix @ x.conj()``.
    """
    p, q = deg
    cols = [BigradedForm.monomial(n, m).conj().to_vector((q, p)) for m in enumerate_basis(n, deg)]
    return Mat.from_columns(block_size(n, (q, p)), cols)


def volume_form(n: int) -> BigradedForm:
    return _from_real(n, {tuple(range(1, 2 * n + 1)): ONE})


def real_components(form: BigradedForm) -> dict[tuple[int, ...], Scalar]:
    """Coefficients in the real basis ``e_S``; public wrapper for tests and reports."""
    return _to_real(form)


def from_real_components(n: int, coeffs: Mapping[tuple[int, ...], object]) -> BigradedForm:
    return _from_real(n, {tuple(k): as_scalar(v) for k, v in coeffs.items()})
