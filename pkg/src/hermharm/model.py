"""Left-invariant Hermitian structures given by the differential of a unitary coframe.

A structure is fixed by ``n`` and ``d phi_k`` for ``k = 1..n``. The metric is
the one making ``phi_1..phi_n`` unitary, i.e. ``e_1..e_2n`` orthonormal.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .exterior import (
    BigradedForm,
    Monomial,
    bidegrees,
    block_size,
    from_real_components,
    phi,
    phibar,
    wedge,
)
from .graded import GradedOperator, graded_commutator, scalar_operator
from .scalar import I, ONE, ZERO, Scalar

__all__ = [
    "SpecError",
    "ConventionError",
    "CoalgebraSpec",
    "HermitianStructure",
    "parse_spec",
    "load_spec",
    "build_structure",
    "derivation",
    "rescale_spec",
    "example_path",
    "EXAMPLES",
]

DATA_DIR = Path(__file__).parent / "data"
EXAMPLES = ("torus_n2", "torus_n3", "kodaira_thurston", "kodaira_thurston_real", "iwasawa")


class SpecError(ValueError):
    """Malformed or invalid structure input; carries a source position when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {col}" if col is not None else "") + ": "
        elif col is not None:
            where = f"column {col}: "
        super().__init__(where + message)


class ConventionError(RuntimeError):
    """An internal consistency check on the operator conventions failed."""


# ---------------------------------------------------------------------------
# the input datum


@dataclass(frozen=True)
class CoalgebraSpec:
    n: int
    name: str
    d_phi: tuple[BigradedForm, ...]

    def __post_init__(self):
        if self.n < 1:
            raise SpecError("n must be at least 1")
        if len(self.d_phi) != self.n:
            raise SpecError(f"expected {self.n} differentials, got {len(self.d_phi)}")
        for k, f in enumerate(self.d_phi, 1):
            if f.n != self.n:
                raise SpecError(f"d phi{k} lives in the wrong algebra")
            bad = [m for m in f.coeffs if m.degree != 2]
            if bad:
                raise SpecError(f"d phi{k} has a term {bad[0].label()} of degree {bad[0].degree}, expected 2")

    def d_generator(self, gen: int) -> BigradedForm:
        """``d`` of generator ``gen`` (1..n is phi_k, n+1..2n is phibar_k)."""
        if gen <= self.n:
            return self.d_phi[gen - 1]
        return self.d_phi[gen - self.n - 1].conj()


def validate(spec: CoalgebraSpec, lines: dict[int, int] | None = None) -> None:
    """Check integrability (no (0,2) part) and ``d^2 = 0`` on generators.

    ``lines`` maps ``k`` to the source line defining ``d phi_k`` for error positions.
    """
    lines = lines or {}
    for k, f in enumerate(spec.d_phi, 1):
        for m, c in sorted(f.coeffs.items()):
            if m.bidegree == (0, 2):
                raise SpecError(
                    f"integrability failure: d phi{k} has a (0,2) term ({c})*{m.label()}; "
                    "the complex structure must have no phibar^phibar components in d phi",
                    lines.get(k),
                )
    for gen in range(1, 2 * spec.n + 1):
        dd = derivation(spec, spec.d_generator(gen))
        if dd:
            k = gen if gen <= spec.n else gen - spec.n
            label = f"phi{k}" if gen <= spec.n else f"phibar{k}"
            raise SpecError(f"d^2 != 0: dd({label}) = {dd!r}", lines.get(k))


def derivation(spec: CoalgebraSpec, form: BigradedForm) -> BigradedForm:
    """Apply ``d`` extended as a degree-one graded derivation."""
    out = BigradedForm.zero(spec.n)
    for m, c in form.coeffs.items():
        out = out + _d_monomial(spec, m).scale(c)
    return out


def _d_monomial(spec: CoalgebraSpec, m: Monomial) -> BigradedForm:
    n = spec.n
    gens = list(m.holo) + [n + k for k in m.anti]
    out = BigradedForm.zero(n)
    for j, g in enumerate(gens):
        dg = spec.d_generator(g)
        if not dg:
            continue
        prefix = _gens_form(n, gens[:j])
        suffix = _gens_form(n, gens[j + 1 :])
        term = wedge(wedge(prefix, dg), suffix)
        out = out + (term if j % 2 == 0 else -term)
    return out


def _gens_form(n: int, gens: Iterable[int]) -> BigradedForm:
    f = BigradedForm.one(n)
    for g in gens:
        f = wedge(f, phi(n, g) if g <= n else phibar(n, g - n))
    return f


def rescale_spec(spec: CoalgebraSpec, c) -> CoalgebraSpec:
    """Spec for the coframe ``c * phi`` (declared unitary).

    ``d(c phi_k) = c * sum a phi phi = sum (a / c) (c phi)(c phi)`` for real ``c``.
    """
    c = Fraction(c)
    if c <= 0:
        raise ValueError("rescaling factor must be positive")
    return CoalgebraSpec(spec.n, f"{spec.name}*{c}", tuple(f.scale(Scalar(1 / c)) for f in spec.d_phi))


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<gen>phibar\d+|phi\d+|e\d+)|(?P<num>\d+(?:/\d+)?)|(?P<i>i\b)"
    r"|(?P<op>[-+*^()])|(?P<bad>\d*\.\d+|[A-Za-z_][A-Za-z_0-9]*|\S))"
)


class _Scanner:
    def __init__(self, text: str, line: int, offset: int):
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            kind = m.lastgroup
            val = m.group(kind)
            col = offset + m.start(kind) + 1
            if kind == "bad":
                if re.fullmatch(r"\d*\.\d+", val) or val in ("sqrt", "pi", "e"):
                    raise SpecError(f"non-rational coefficient {val!r}; only Gaussian rationals are allowed", line, col)
                raise SpecError(f"unexpected symbol {val!r}", line, col)
            self.toks.append((kind, val, col))
            pos = m.end()
        self.pos = 0
        self.line = line
        self.end_col = offset + len(text) + 1

    def peek(self, k: int = 0):
        j = self.pos + k
        return self.toks[j] if j < len(self.toks) else ("eof", "", self.end_col)

    def take(self):
        t = self.peek()
        self.pos += 1
        return t

    def error(self, msg: str):
        _, val, col = self.peek()
        raise SpecError(f"{msg} (found {val or 'end of line'!r})", self.line, col)


def _parse_coef(sc: _Scanner) -> Scalar:
    kind, val, _ = sc.peek()
    if kind == "num":
        sc.take()
        value = Scalar(Fraction(val))
        if sc.peek()[0] == "i":
            sc.take()
            value = value * I
        elif sc.peek()[1] == "*" and sc.peek(1)[0] == "i":
            sc.take()
            sc.take()
            value = value * I
        return value
    if kind == "i":
        sc.take()
        return I
    if val == "(":
        sc.take()
        value = _parse_coef_sum(sc)
        if sc.peek()[1] != ")":
            sc.error("expected ')'")
        sc.take()
        if sc.peek()[0] == "i":
            sc.take()
            value = value * I
        return value
    sc.error("expected a coefficient")
    raise AssertionError


def _parse_coef_sum(sc: _Scanner) -> Scalar:
    sign = 1
    if sc.peek()[1] in "+-" and sc.peek()[0] == "op":
        sign = -1 if sc.take()[1] == "-" else 1
    total = _parse_coef(sc) * sign
    while sc.peek()[0] == "op" and sc.peek()[1] in "+-":
        sign = -1 if sc.take()[1] == "-" else 1
        total = total + _parse_coef(sc) * sign
    return total


def _parse_mono(sc: _Scanner, allowed: str) -> tuple[list[tuple[str, int]], int]:
    factors = []
    col = sc.peek()[2]
    while True:
        kind, val, c = sc.peek()
        if kind != "gen":
            sc.error("expected a basis 1-form")
        sc.take()
        name = re.match(r"[a-z]+", val).group(0)
        if (allowed == "e") != (name == "e"):
            raise SpecError(f"cannot mix {val!r} into a {'real' if allowed == 'e' else 'complex'} differential", sc.line, c)
        factors.append((name, int(val[len(name):])))
        if sc.peek()[1] == "^":
            sc.take()
            continue
        return factors, col


def _parse_expr(text: str, line: int, offset: int, allowed: str) -> list[tuple[Scalar, list[tuple[str, int]], int]]:
    sc = _Scanner(text, line, offset)
    terms = []
    first = True
    while sc.peek()[0] != "eof":
        sign = 1
        kind, val, _ = sc.peek()
        if kind == "op" and val in "+-":
            sc.take()
            sign = -1 if val == "-" else 1
        elif not first:
            sc.error("expected '+' or '-'")
        first = False
        if sc.peek()[0] == "gen":
            coef = ONE
        else:
            coef = _parse_coef(sc)
            if sc.peek()[1] != "*":
                sc.error("expected '*' between coefficient and basis form")
            sc.take()
        factors, col = _parse_mono(sc, allowed)
        terms.append((coef * sign, factors, col))
    return terms


def _term_form(n: int, factors, line: int, col: int, coef: Scalar) -> BigradedForm:
    f = BigradedForm.one(n)
    for name, k in factors:
        if not 1 <= k <= n:
            raise SpecError(f"index {name}{k} out of range for n={n}", line, col)
        f = wedge(f, phi(n, k) if name == "phi" else phibar(n, k))
    if len(factors) != 2:
        raise SpecError(f"term has degree {len(factors)}, differentials of 1-forms have degree 2", line, col)
    if len(set(factors)) < 2:
        raise SpecError(f"repeated factor {factors[0][0]}{factors[0][1]}", line, col)
    return f.scale(coef)


def _real_term(n: int, factors, line: int, col: int, coef: Scalar) -> dict[tuple[int, ...], Scalar]:
    idx = [k for _, k in factors]
    if any(not 1 <= k <= 2 * n for k in idx):
        raise SpecError(f"real index out of range for n={n} (e1..e{2 * n})", line, col)
    if len(idx) != 2:
        raise SpecError(f"term has degree {len(idx)}, differentials of 1-forms have degree 2", line, col)
    if idx[0] == idx[1]:
        raise SpecError(f"repeated factor e{idx[0]}", line, col)
    if idx[0] < idx[1]:
        return {tuple(idx): coef}
    return {(idx[1], idx[0]): -coef}


_LINE = re.compile(r"^\s*(?:(?P<key>name|n)\s*=\s*(?P<val>.*?)|d\s+(?P<lhs>phi\d+|e\d+)\s*=(?P<rhs>.*))\s*$")


def parse_spec(document: str, default_name: str = "unnamed") -> CoalgebraSpec:
    """Parse and validate a structure description (line format or JSON)."""
    if document.lstrip().startswith("{"):
        return _parse_json(document, default_name)
    name = default_name
    n = None
    raw: list[tuple[str, str, int, int]] = []
    for lineno, line in enumerate(document.splitlines(), 1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        m = _LINE.match(body)
        if m is None:
            raise SpecError("expected 'name = ...', 'n = ...' or 'd phi<k> = ...'", lineno, 1)
        if m.group("key") == "name":
            name = m.group("val").strip()
        elif m.group("key") == "n":
            try:
                n = int(m.group("val"))
            except ValueError:
                raise SpecError(f"n must be an integer, got {m.group('val')!r}", lineno, m.start("val") + 1) from None
        else:
            raw.append((m.group("lhs"), m.group("rhs"), lineno, m.start("rhs")))
    if n is None:
        raise SpecError("missing 'n = <integer>' header")
    return _assemble(name, n, raw)


def _assemble(name: str, n: int, raw) -> CoalgebraSpec:
    if n < 1:
        raise SpecError("n must be at least 1")
    styles = {lhs.startswith("e") for lhs, *_ in raw}
    if len(styles) > 1:
        raise SpecError("cannot mix 'd phi<k>' and 'd e<k>' lines", raw[0][2])
    real = styles == {True}
    d_phi = [BigradedForm.zero(n) for _ in range(n)]
    seen = set()
    where: dict[int, int] = {}
    real_d: dict[int, dict[tuple[int, ...], Scalar]] = {}
    for lhs, rhs, line, off in raw:
        k = int(re.sub(r"\D", "", lhs))
        limit = 2 * n if real else n
        if not 1 <= k <= limit:
            raise SpecError(f"{lhs} out of range for n={n}", line)
        if k in seen:
            raise SpecError(f"d {lhs} given twice", line)
        seen.add(k)
        gen = (k + 1) // 2 if real else k
        if line is not None:
            where[gen] = min(where.get(gen, line), line)
        try:
            terms = _parse_expr(rhs, line, off, "e" if real else "phi")
            if real:
                acc: dict[tuple[int, ...], Scalar] = {}
                for coef, factors, col in terms:
                    for key, v in _real_term(n, factors, line, col, coef).items():
                        acc[key] = acc.get(key, ZERO) + v
                real_d[k] = acc
            else:
                for coef, factors, col in terms:
                    d_phi[k - 1] = d_phi[k - 1] + _term_form(n, factors, line, col, coef)
        except SpecError as exc:
            if line is None:
                # JSON input: name the entry instead of a line
                raise SpecError(f"in d {lhs}: {exc.message}", None, exc.col) from None
            raise
    if real:
        for j in range(1, 2 * n + 1):
            for key, v in real_d.get(j, {}).items():
                if v.im:
                    raise SpecError(f"real differential d e{j} has non-real coefficient {v}")
        for k in range(1, n + 1):
            # phi_k = e_{2k-1} + i e_{2k}
            de_re = from_real_components(n, real_d.get(2 * k - 1, {}))
            de_im = from_real_components(n, real_d.get(2 * k, {}))
            d_phi[k - 1] = de_re + de_im.scale(I)
    spec = CoalgebraSpec(n, name, tuple(d_phi))
    validate(spec, where)
    return spec


def _parse_json(document: str, default_name: str) -> CoalgebraSpec:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("n"), int):
        raise SpecError("JSON structure needs an integer 'n'")
    raw = []
    d = doc.get("d", {})
    if not isinstance(d, dict):
        raise SpecError("'d' must map 'phi<k>' (or 'e<k>') to expressions")
    for lhs, rhs in d.items():
        if not re.fullmatch(r"phi\d+|e\d+", lhs):
            raise SpecError(f"bad key {lhs!r} in 'd'")
        if not isinstance(rhs, str):
            raise SpecError(f"d {lhs} must be an expression string")
        raw.append((lhs, rhs, None, 0))
    return _assemble(str(doc.get("name", default_name)), doc["n"], raw)


def example_path(name: str) -> Path:
    return DATA_DIR / f"{name}.struct"


def load_spec(path_or_name: str | Path) -> CoalgebraSpec:
    """Load a structure file, or one of the shipped examples by name."""
    p = Path(path_or_name)
    if not p.exists() and str(path_or_name) in EXAMPLES:
        p = example_path(str(path_or_name))
    if not p.exists():
        raise FileNotFoundError(f"no such structure file: {path_or_name}")
    return parse_spec(p.read_text(encoding="utf-8"), default_name=p.stem)


def spec_to_text(spec: CoalgebraSpec) -> str:
    lines = [f"name = {spec.name}", f"n = {spec.n}"]
    for k, f in enumerate(spec.d_phi, 1):
        if not f:
            continue
        terms = [f"({c.re}+({c.im})i) * {m.label()}" for m, c in sorted(f.coeffs.items())]
        lines.append(f"d phi{k} = " + " + ".join(terms))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# operators

BASE_OPS = ("d", "del", "delbar", "L", "Lam", "H", "lam", "lambar", "tau", "taubar")


@dataclass
class HermitianStructure:
    """The datum ``(M, J, omega)`` on invariant forms with all its operators.

    ``ops`` holds ``d, del, delbar, L, Lam, H, lam, lambar, tau, taubar`` and
    the adjoints under the names ``del*``, ``tau*`` and so on.
    """

    spec: CoalgebraSpec
    omega: BigradedForm
    ops: dict[str, GradedOperator] = field(default_factory=dict)
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def name(self) -> str:
        return self.spec.name

    def op(self, name: str) -> GradedOperator:
        return self.ops[name]

    def __getitem__(self, name: str) -> GradedOperator:
        return self.ops[name]

    @cached_property
    def d_omega(self) -> BigradedForm:
        return derivation(self.spec, self.omega)

    @cached_property
    def del_omega(self) -> BigradedForm:
        return self.ops["del"].apply(self.omega)

    @cached_property
    def delbar_omega(self) -> BigradedForm:
        return self.ops["delbar"].apply(self.omega)

    @cached_property
    def ddbar_omega(self) -> BigradedForm:
        return self.ops["del"].apply(self.delbar_omega)

    def is_kahler(self) -> bool:
        return not self.d_omega

    def is_pluriclosed(self) -> bool:
        return not self.ddbar_omega

    @cached_property
    def star(self) -> GradedOperator:
        return GradedOperator.hodge_star(self.n)

    def laplacian(self, name: str) -> GradedOperator:
        from .calculus import laplacian

        return laplacian(self.ops[name])

    @cached_property
    def box(self) -> GradedOperator:
        from .calculus import box

        return box(self)


def build_d(spec: CoalgebraSpec) -> dict[str, GradedOperator]:
    n = spec.n
    d = GradedOperator.from_map(n, ((1, 0), (0, 1)), 1, lambda m: _d_monomial(spec, m), "d")
    parts = {"del": {}, "delbar": {}}
    for (src, dst), m in d.blocks.items():
        key = "del" if dst[0] - src[0] == 1 else "delbar"
        parts[key][(src, dst)] = m
    return {
        "d": d,
        "del": GradedOperator(n, 1, parts["del"], "del"),
        "delbar": GradedOperator(n, 1, parts["delbar"], "delbar"),
    }


def build_omega(spec: CoalgebraSpec, scale=1) -> BigradedForm:
    """``omega = (i/2) sum phi_k ^ phibar_k``, i.e. ``sum e_{2k-1} ^ e_{2k}``."""
    n = spec.n
    coef = I / 2 * Scalar(Fraction(scale))
    return BigradedForm(n, {Monomial((k,), (k,)): coef for k in range(1, n + 1)})


def build_lefschetz(h: HermitianStructure, weight_scale=1) -> None:
    n = h.n
    L = GradedOperator.wedge_with(h.omega, "L")
    Lam = L.adjoint()
    Lam.name = "Lam"
    H = graded_commutator(L, Lam)
    H.name = "H"
    expected = scalar_operator(n, lambda d: (d[0] + d[1] - n) * weight_scale)
    diff = H.first_difference(expected)
    if diff is not None:
        raise ConventionError(f"[L, Lam] is not (p+q-n)*id: {diff.describe()}")
    h.ops.update({"L": L, "Lam": Lam, "H": H})


def build_lambda_tau(h: HermitianStructure) -> None:
    ops = h.ops
    lam = graded_commutator(ops["del"], ops["L"])
    lambar = graded_commutator(ops["delbar"], ops["L"])
    for label, br, form in (("lam", lam, h.del_omega), ("lambar", lambar, h.delbar_omega)):
        direct = GradedOperator.wedge_with(form) if form else GradedOperator.zero(h.n, 1)
        diff = br.first_difference(direct)
        if diff is not None:
            raise ConventionError(f"{label} as a commutator differs from the wedge operator: {diff.describe()}")
    lam = GradedOperator(h.n, 1, lam.blocks, "lam")
    lambar = GradedOperator(h.n, 1, lambar.blocks, "lambar")
    tau = graded_commutator(ops["Lam"], lam)
    taubar = graded_commutator(ops["Lam"], lambar)
    ops.update(
        {
            "lam": lam,
            "lambar": lambar,
            "tau": GradedOperator(h.n, 1, tau.blocks, "tau"),
            "taubar": GradedOperator(h.n, 1, taubar.blocks, "taubar"),
        }
    )


def build_structure(spec: CoalgebraSpec, omega_scale=1) -> HermitianStructure:
    """Construct every operator, running the built-in convention checks.

    ``omega_scale`` multiplies the fundamental form (and hence ``L``); the
    ``[L, Lam]`` check then expects the weight scaled by ``omega_scale**2``.
    """
    validate(spec)
    omega = build_omega(spec, omega_scale)
    h = HermitianStructure(spec, omega)
    h.ops.update(build_d(spec))
    build_lefschetz(h, weight_scale=Fraction(omega_scale) ** 2)
    build_lambda_tau(h)
    for name in ("del", "delbar", "L", "lam", "lambar", "tau", "taubar"):
        adj = h.ops[name].adjoint()
        adj.name = name + "*"
        h.ops[name + "*"] = adj
    h.ops["Lam*"] = h.ops["L"]
    h.ops["H*"] = h.ops["H"]
    h.ops["d*"] = h.ops["d"].adjoint()
    return h


def total_degree_matrix_sizes(n: int) -> list[int]:
    return [sum(block_size(n, (p, k - p)) for p in range(k + 1)) for k in range(2 * n + 1)]



