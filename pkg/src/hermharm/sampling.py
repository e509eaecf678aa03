"""Seeded random nilpotent Hermitian structures for property and acceptance tests."""

from __future__ import annotations

import random
from fractions import Fraction

from .exterior import BigradedForm, Monomial
from .model import CoalgebraSpec, SpecError, validate
from .scalar import ZERO, Scalar

__all__ = ["random_spec", "random_specs"]


def _coef(rng: random.Random, density: float) -> Scalar:
    if rng.random() > density:
        return ZERO
    re = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    im = Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if rng.random() < 0.5 else Fraction(0)
    return Scalar(re, im)


def random_spec(n: int, rng: random.Random, density: float = 0.5, name: str = "random") -> CoalgebraSpec | None:
    """Draw one candidate; ``None`` if it fails ``d^2 = 0``.

    ``d phi_k`` only involves ``phi_i, phibar_j`` with ``i, j < k`` and has no
    (0,2) part, so the underlying Lie algebra is nilpotent (hence unimodular)
    and the complex structure is integrable.
    """
    d_phi = []
    for k in range(1, n + 1):
        coeffs: dict[Monomial, Scalar] = {}
        lower = range(1, k)
        for a in lower:
            for b in lower:
                if a < b:
                    coeffs[Monomial((a, b), ())] = _coef(rng, density)
                coeffs[Monomial((a,), (b,))] = _coef(rng, density)
        d_phi.append(BigradedForm(n, coeffs))
    spec = CoalgebraSpec(n, name, tuple(d_phi))
    try:
        validate(spec)
    except SpecError:
        return None
    return spec


def random_specs(n: int, count: int, seed: int, density: float = 0.5, nontrivial: bool = True) -> list[CoalgebraSpec]:
    """``count`` valid random structures of dimension ``n``, reproducible from ``seed``.

    With ``nontrivial`` the flat torus (all differentials zero) is skipped.
    """
    rng = random.Random(seed)
    out: list[CoalgebraSpec] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 1000 * count:
            raise RuntimeError("could not draw enough valid structures")
        spec = random_spec(n, rng, density, name=f"random_n{n}_s{seed}_{len(out)}")
        if spec is None or (nontrivial and not any(spec.d_phi)):
            continue
        out.append(spec)
    return out
