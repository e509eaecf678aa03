"""Command-line front end.

``hermharm [run] <file-or-example> [--reports r1,r2] [--format text|csv|json] [--seed N] [--out PATH]``

Exit status: 0 when every verdict passes, 2 when a verified check fails,
1 for unreadable or invalid input, 3 when an internal convention check fails
while building the operators.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from . import calculus, harmonic
from .harmonic import DimensionTable, Report
from .model import EXAMPLES, ConventionError, HermitianStructure, SpecError, build_structure, load_spec

log = logging.getLogger(__name__)

REPORTS = (
    "tables",
    "identities",
    "dualities",
    "lefschetz",
    "primitives",
    "inequalities",
    "lambda",
    "pluriclosed",
    "holomorphic",
    "injectivity",
)
FORMATS = ("text", "csv", "json")
TABLE_LAYOUT = "rows q = n..0 (top to bottom), columns p = 0..n"

EXIT_OK, EXIT_INPUT, EXIT_FAIL, EXIT_CONVENTION = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    input_path: str
    reports: tuple[str, ...] = REPORTS
    format: str = "text"
    seed: int = 0
    closure: str = "sampled"
    use_betti: bool = True

    def __post_init__(self):
        if not self.reports:
            raise ValueError("at least one report is required")
        unknown = [r for r in self.reports if r not in REPORTS]
        if unknown:
            raise ValueError(f"unknown report {unknown[0]!r}")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")


# ---------------------------------------------------------------------------
# sections

def _checks(rep: Report) -> list[dict]:
    return [
        {"label": c.label, "ok": c.ok, "detail": c.detail, "informational": c.informational} for c in rep.checks
    ]


def _section(rep: Report, **extra) -> dict:
    return {"verdict": rep.verdict, **extra, "checks": _checks(rep)}


def _table(t: DimensionTable) -> dict:
    return {"grid": t.grid(), "by_pq": t.as_lists()}


def _tables(h: HermitianStructure, cfg: RunConfig) -> dict:
    out = {
        "box": _table(harmonic.box_table(h)),
        "hodge": _table(harmonic.hodge_table(h)),
        "del_harmonic": _table(harmonic.laplacian_table(h, ("del", "delbar"))),
        "zero_order": _table(harmonic.laplacian_table(h, harmonic.ZERO_ORDER)),
    }
    section = {"verdict": None, "tables": out}
    if cfg.use_betti:
        section["betti"] = list(harmonic.betti_numbers(h.spec).b)
    return section


def _identities(h: HermitianStructure, cfg: RunConfig) -> dict:
    log.info("identity closure %s, seed %s", cfg.closure, cfg.seed)
    reports = calculus.identity_suite(h, seed=cfg.seed, closure=cfg.closure)
    bkn = calculus.bkn_check(h)
    rep = Report("identities")
    for r in reports:
        rep.add(r.identity_id + ": " + r.text, r.holds, "" if r.holds else r.first_failure.describe())
    if not any(r.identity_id == "bkn" for r in reports):
        r = bkn.report
        rep.add(r.identity_id + ": " + r.text, r.holds, "" if r.holds else r.first_failure.describe())
    for r in calculus.printed_variant_check(h):
        if r.identity_id.startswith("printed.extra."):
            rep.add(r.identity_id + ": " + r.text, r.holds, "" if r.holds else r.first_failure.describe(), True)
    return _section(rep, pluriclosed=bkn.pluriclosed, t_omega_zero=bkn.t_omega_zero)


def _lefschetz(h, cfg):
    rep, witnesses = harmonic.lefschetz_check(h)
    return _section(rep, witnesses=[{**w, "source": list(w["source"]), "target": list(w["target"])} for w in witnesses])


def _primitives(h, cfg):
    table, rep = harmonic.primitive_dims(h)
    return _section(rep, table=_table(table))


def _lambda(h, cfg):
    t1, r1 = harmonic.lambda_cohomology_table(h, "lam")
    t2, r2 = harmonic.lambda_cohomology_table(h, "lambar")
    rep = Report("lambda", r1.checks + r2.checks)
    return _section(rep, tables={"lam": _table(t1), "lambar": _table(t2)})


def _holomorphic(h, cfg):
    rep, results = harmonic.holomorphic_form_check(h, use_betti=cfg.use_betti)
    forms = [{"p": r.p, "dim": r.dim, "basis": [[str(x) for x in v] for v in r.basis]} for r in results]
    return _section(rep, forms=forms)


def _injectivity(h, cfg):
    rep, rows = harmonic.pointwise_injectivity(h)
    injective = [{"operator": r["operator"], "bidegree": list(r["bidegree"])} for r in rows if r["injective"]]
    return _section(rep, injective=injective)


SECTIONS: dict[str, Callable[[HermitianStructure, RunConfig], dict]] = {
    "tables": _tables,
    "identities": _identities,
    "dualities": lambda h, cfg: _section(harmonic.duality_check(h)),
    "lefschetz": _lefschetz,
    "primitives": _primitives,
    "inequalities": lambda h, cfg: _section(harmonic.inequality_report(h, use_betti=cfg.use_betti)),
    "lambda": _lambda,
    "pluriclosed": lambda h, cfg: _section(harmonic.pluriclosed_equivalence(h)),
    "holomorphic": _holomorphic,
    "injectivity": _injectivity,
}


def build_document(h: HermitianStructure, cfg: RunConfig) -> dict:
    doc: dict[str, Any] = {
        "name": h.name,
        "n": h.n,
        "seed": cfg.seed,
        "kahler": h.is_kahler(),
        "pluriclosed": h.is_pluriclosed(),
        "table_layout": TABLE_LAYOUT,
    }
    sections = {}
    for name in REPORTS:
        if name in cfg.reports:
            sections[name] = SECTIONS[name](h, cfg)
    if "tables" in sections:
        t = sections["tables"]
        doc["box_table"] = t["tables"]["box"]["grid"]
        doc["hodge_table"] = t["tables"]["hodge"]["grid"]
        if "betti" in t:
            doc["betti"] = t["betti"]
    doc["verdicts"] = {k: v["verdict"] for k, v in sections.items() if v["verdict"] is not None}
    doc["sections"] = sections
    return doc


def document_status(doc: dict) -> int:
    return EXIT_OK if all(doc["verdicts"].values()) else EXIT_FAIL


# ---------------------------------------------------------------------------
# rendering

def _grid_text(grid: list[list[int]], title: str) -> str:
    return DimensionTable.from_grid(grid).render(title)


def _check_lines(checks: list[dict]) -> list[str]:
    lines = []
    for c in checks:
        tag = "info" if c["informational"] else ("PASS" if c["ok"] else "FAIL")
        if c["informational"]:
            tag += " " + ("yes" if c["ok"] else "no")
        lines.append(f"[{tag}] {c['label']}" + (f"  ({c['detail']})" if c["detail"] else ""))
    return lines


def render_text(doc: dict) -> str:
    out = [f"structure {doc['name']}  n={doc['n']}  kahler={doc['kahler']}  pluriclosed={doc['pluriclosed']}"]
    out.append(f"tables: {doc['table_layout']}")
    titles = {
        "box": "dim Ker box^{p,q}",
        "hodge": "h^{p,q} = dim Ker Delta_delbar",
        "del_harmonic": "dim Ker (Delta_del + Delta_delbar)",
        "zero_order": "dim Ker (Delta_tau + Delta_taubar + Delta_lam + Delta_lambar)",
        "lam": "dim Ker Delta_lam",
        "lambar": "dim Ker Delta_lambar",
    }
    for name, sec in doc["sections"].items():
        out.append("")
        verdict = "" if sec["verdict"] is None else ("  PASS" if sec["verdict"] else "  FAIL")
        out.append(f"== {name}{verdict} ==")
        for key, t in sec.get("tables", {}).items():
            out.append(_grid_text(t["grid"], titles.get(key, key)))
        if "table" in sec:
            out.append(_grid_text(sec["table"]["grid"], "dim (Ker box^{p,q} & Ker Lam)"))
        if "betti" in sec:
            out.append("invariant Betti numbers: " + " ".join(map(str, sec["betti"])))
        if "forms" in sec:
            for f in sec["forms"]:
                out.append(f"p={f['p']}: {f['dim']} qualifying form(s)")
        if "injective" in sec:
            inj = ", ".join(f"{r['operator']} on ({r['bidegree'][0]},{r['bidegree'][1]})" for r in sec["injective"])
            out.append("injective blocks: " + (inj or "none"))
        out.extend(_check_lines(sec.get("checks", [])))
    out.append("")
    status = "PASS" if all(doc["verdicts"].values()) else "FAIL"
    out.append(f"overall: {status}")
    return "\n".join(out) + "\n"


def render_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["# structure", doc["name"], "n", doc["n"]])
    w.writerow(["# layout", doc["table_layout"]])
    for name, sec in doc["sections"].items():
        tables = dict(sec.get("tables", {}))
        if "table" in sec:
            tables["primitive"] = sec["table"]
        for key, t in tables.items():
            w.writerow([f"# {name}:{key}"])
            w.writerows(t["grid"])
        if "betti" in sec:
            w.writerow([f"# {name}:betti"])
            w.writerow(sec["betti"])
        if sec.get("checks"):
            w.writerow([f"# {name}:checks"])
            w.writerow(["label", "ok", "informational", "detail"])
            for c in sec["checks"]:
                w.writerow([c["label"], c["ok"], c["informational"], c["detail"]])
    w.writerow(["# verdicts"])
    for k, v in doc["verdicts"].items():
        w.writerow([k, v])
    return buf.getvalue()


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


RENDERERS = {"text": render_text, "csv": render_csv, "json": render_json}


# ---------------------------------------------------------------------------
# entry points

def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute a configuration; returns ``(exit status, document)``.

    Input errors and convention failures are rendered as a one-line message.
    """
    try:
        spec = load_spec(cfg.input_path)
    except FileNotFoundError as exc:
        return EXIT_INPUT, f"error: {exc}\n"
    except SpecError as exc:
        return EXIT_INPUT, f"error: {cfg.input_path}: {exc}\n"
    try:
        h = build_structure(spec)
        doc = build_document(h, cfg)
    except ConventionError as exc:
        return EXIT_CONVENTION, f"convention failure: {exc}\n"
    return document_status(doc), RENDERERS[cfg.format](doc)


def _parse_reports(text: str) -> tuple[str, ...]:
    names = [x.strip() for x in text.split(",") if x.strip()]
    if "all" in names:
        return REPORTS
    # canonical order; unknown names are kept so RunConfig can reject them
    return tuple(r for r in REPORTS if r in names) + tuple(r for r in names if r not in REPORTS)


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hermharm",
        description="Exact harmonic theory of invariant Hermitian structures.",
        epilog="shipped examples: " + ", ".join(EXAMPLES),
    )
    ap.add_argument("input", help="structure file or the name of a shipped example")
    ap.add_argument("--reports", default="all", help="comma separated subset of: " + ", ".join(REPORTS) + ", all")
    ap.add_argument("--format", default="text", choices=FORMATS)
    ap.add_argument("--seed", type=int, default=0, help="seed for choosing conjugate identity forms")
    ap.add_argument("--closure", default="sampled", choices=("none", "sampled", "full"))
    ap.add_argument("--no-betti", action="store_true", help="skip checks that use Betti numbers")
    ap.add_argument("--out", help="write the document here instead of stdout")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    if args and args[0] == "run":
        args = args[1:]
    ns = make_parser().parse_args(args)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, stream=sys.stderr)
    try:
        cfg = RunConfig(
            ns.input,
            _parse_reports(ns.reports),
            ns.format,
            ns.seed,
            ns.closure,
            not ns.no_betti,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    status, text = run(cfg)
    if status in (EXIT_INPUT, EXIT_CONVENTION):
        sys.stderr.write(text)
        return status
    if ns.out:
        with open(ns.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
