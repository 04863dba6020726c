"""Report records and formatters (csv, md, json).

Every builder returns a :class:`Report` whose rows follow input order: for
each membership row, the conjunction record first, then the negation record.
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from . import classicality as cl
from . import fock
from .data import (
    WEIGHTS_HEADER,
    Dataset,
    FittedRow,
    Kind,
    MembershipRow,
    format_real,
)
from .errors import DegenerateMismatch, Infeasible, KeyMismatch

DEFAULT_TOLERANCE = 0.02

DIAGNOSE_COLUMNS = ("pair_id", "exemplar", "kind", "delta", "k", "doub", "l",
                    "representable", "violated")
KOLMOGOROV_COLUMNS = ("pair_id", "exemplar", "kind", "representable", "violated",
                      "p1", "p2", "p3", "p4")
FIT_COLUMNS = ("pair_id", "exemplar", "kind", "strategy", "m2", "n2", "theta_deg",
               "mu_model", "mu_target", "abs_err", "status")
VERIFY_COLUMNS = ("pair_id", "exemplar", "kind", "m2", "n2", "theta_deg", "mu_table",
                  "mu_model", "abs_err", "attainable_min", "attainable_max", "status")


@dataclass
class Report:
    command: str
    columns: tuple[str, ...]
    rows: list[dict]
    summary: dict | None = None
    pair_names: dict[str, tuple[str, str]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        """False when a verification summary records failures."""
        if not self.summary:
            return True
        return self.summary.get("rows_failed", 0) == 0 and self.summary.get("rows_degenerate", 0) == 0


def _pair_names(dataset: Dataset) -> dict[str, tuple[str, str]]:
    return {p.pair_id: (p.concept_a, p.concept_b) for p in dataset.pairs if p.concept_a or p.concept_b}


def _row_kinds(row: MembershipRow):
    for kind in row.kinds():
        yield kind, row.weights_for(kind)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def diagnose(dataset: Dataset, l_tolerance: float = cl.EQ07_TOL) -> Report:
    rows = []
    for row in dataset:
        for kind, (mu_a, mu_s, mu_and) in _row_kinds(row):
            if kind is Kind.CONJUNCTION:
                d = cl.conjunction_diagnostics(mu_a, mu_s, mu_and)
                verdict = cl.check_theorem1(mu_a, mu_s, mu_and)
                ell = None
            else:
                d = cl.negation_diagnostics(mu_a, row.mu_b, mu_s, mu_and)
                verdict = cl.check_theorem2(mu_a, row.mu_b, mu_s, mu_and, tol_eq=l_tolerance)
                ell = d.l
            rows.append({
                "pair_id": row.pair_id, "exemplar": row.exemplar, "kind": kind.value,
                "delta": d.delta, "k": d.k, "doub": d.doub, "l": ell,
                "representable": verdict.representable,
                "violated": verdict.violated_names(),
            })
    return Report("diagnose", DIAGNOSE_COLUMNS, rows, pair_names=_pair_names(dataset))


def kolmogorov(dataset: Dataset, l_tolerance: float = cl.EQ07_TOL) -> Report:
    rows = []
    for row in dataset:
        for kind, (mu_a, mu_s, mu_and) in _row_kinds(row):
            if kind is Kind.CONJUNCTION:
                verdict = cl.check_theorem1(mu_a, mu_s, mu_and)
            else:
                verdict = cl.check_theorem2(mu_a, row.mu_b, mu_s, mu_and, tol_eq=l_tolerance)
            atoms = verdict.atoms.as_tuple() if verdict.atoms else (None,) * 4
            rows.append({
                "pair_id": row.pair_id, "exemplar": row.exemplar, "kind": kind.value,
                "representable": verdict.representable,
                "violated": verdict.violated_names(),
                **{f"p{i}": p for i, p in enumerate(atoms, start=1)},
            })
    return Report("kolmogorov", KOLMOGOROV_COLUMNS, rows, pair_names=_pair_names(dataset))


def _fitted_index(dataset: Dataset, fitted: Iterable[FittedRow],
                  require_all_rows: bool) -> dict[tuple[str, str, Kind], FittedRow]:
    index = {}
    unmatched = []
    for f in fitted:
        if f.key in index:
            unmatched.append(f.key)
            continue
        index[f.key] = f
        if (f.pair_id, f.exemplar) not in dataset or f.kind not in dataset.row(f.pair_id, f.exemplar).kinds():
            unmatched.append(f.key)
    if require_all_rows:
        for row in dataset:
            for kind in row.kinds():
                if (row.pair_id, row.exemplar, kind) not in index:
                    unmatched.append((row.pair_id, row.exemplar, kind))
    if unmatched:
        raise KeyMismatch([(p, e, k.value) for p, e, k in unmatched])
    return index


def fit(dataset: Dataset, strategy: fock.Strategy = fock.Strategy.BALANCED_THETA,
        m2: float | None = None, fitted: Sequence[FittedRow] | None = None,
        degenerate_tol: float = DEFAULT_TOLERANCE) -> Report:
    """Fit (m2, theta) per row and kind.

    ``table`` takes m2 from ``fitted`` (one row per exemplar and kind);
    ``fixed-m2`` uses the given ``m2`` everywhere.  Where the interference
    term vanishes, the angle is arbitrary and the row counts as fitted if the
    remaining value is within ``degenerate_tol`` of the target.
    """
    strategy = fock.Strategy(strategy)
    index = {}
    if strategy is fock.Strategy.TABLE:
        if fitted is None:
            raise ValueError("strategy 'table' needs fitted parameters")
        index = _fitted_index(dataset, fitted, require_all_rows=True)
    elif strategy is fock.Strategy.FIXED_M2 and m2 is None:
        raise ValueError("strategy 'fixed-m2' needs m2")

    rows = []
    for row in dataset:
        for kind, (mu_a, mu_s, mu_t) in _row_kinds(row):
            rec = {
                "pair_id": row.pair_id, "exemplar": row.exemplar, "kind": kind.value,
                "strategy": strategy.value, "m2": None, "n2": None, "theta_deg": None,
                "mu_model": None, "mu_target": mu_t, "abs_err": None,
            }
            given_m2 = index[(row.pair_id, row.exemplar, kind)].m2 if index else m2
            rec["m2"] = given_m2
            try:
                if given_m2 is not None and not (0.0 <= given_m2 <= 1.0):
                    raise Infeasible(f"m2={given_m2} outside [0, 1]")
                params = fock.fit_parameters(mu_a, mu_s, mu_t, strategy, given_m2,
                                              degenerate_tol=degenerate_tol)
            except Infeasible:
                rec["status"] = "infeasible"
            except DegenerateMismatch as exc:
                rec["n2"] = 1.0 - given_m2 if given_m2 is not None else None
                rec["mu_model"] = exc.value
                rec["abs_err"] = abs(exc.value - mu_t)
                rec["status"] = "degenerate"
            else:
                value = fock.eval_conjunction(mu_a, mu_s, params)
                rec.update(m2=params.m2, n2=params.n2, theta_deg=params.theta_deg,
                           mu_model=value, abs_err=abs(value - mu_t), status="ok")
            rows.append(rec)
    return Report("fit", FIT_COLUMNS, rows, pair_names=_pair_names(dataset))


def verify(dataset: Dataset, fitted: Sequence[FittedRow],
           tolerance: float = DEFAULT_TOLERANCE) -> Report:
    """Evaluate published parameters and compare with measured weights.

    Status per row:

    * ``infeasible`` -- parameters outside the model (m2 < 0, n2 > 1 or
      m2 + n2 off by more than 0.01), or the measured weight outside the
      attainable interval over all (m2, theta);
    * ``ok`` / ``fail`` -- model value within / beyond ``tolerance``;
    * ``degenerate`` -- like ``fail``, but the interference term vanishes
      (a = 1 or b = 1) so no angle could have helped.
    """
    index = _fitted_index(dataset, fitted, require_all_rows=True)
    rows = []
    counts = {"ok": 0, "fail": 0, "degenerate": 0, "infeasible": 0}
    max_err = 0.0
    for row in dataset:
        for kind, (mu_a, mu_s, mu_t) in _row_kinds(row):
            f = index[(row.pair_id, row.exemplar, kind)]
            lo, hi = fock.attainable_range(mu_a, mu_s)
            rec = {
                "pair_id": row.pair_id, "exemplar": row.exemplar, "kind": kind.value,
                "m2": f.m2, "n2": f.n2, "theta_deg": f.theta_deg, "mu_table": mu_t,
                "mu_model": None, "abs_err": None, "attainable_min": lo, "attainable_max": hi,
            }
            if not f.in_range:
                status = "infeasible"
            else:
                theta = min(180.0, max(0.0, f.theta_deg))
                params = fock.FockParameters.from_m2(f.m2, theta)
                value = fock.eval_conjunction(mu_a, mu_s, params)
                err = abs(value - mu_t)
                rec.update(mu_model=value, abs_err=err)
                if not (lo - fock.COS_TOL <= mu_t <= hi + fock.COS_TOL):
                    status = "infeasible"
                else:
                    max_err = max(max_err, err)
                    if err <= tolerance:
                        status = "ok"
                    elif fock.regime_params(mu_a, mu_s).degenerate:
                        status = "degenerate"
                    else:
                        status = "fail"
            rec["status"] = status
            counts[status] += 1
            rows.append(rec)
    summary = {
        "rows_total": len(rows),
        "rows_ok": counts["ok"],
        "rows_failed": counts["fail"],
        "rows_degenerate": counts["degenerate"],
        "rows_infeasible": counts["infeasible"],
        "max_abs_err": max_err,
        "tolerance": tolerance,
    }
    return Report("verify", VERIFY_COLUMNS, rows, summary, pair_names=_pair_names(dataset))


def weights_report(dataset: Dataset) -> Report:
    rows = [{
        "pair_id": r.pair_id, "exemplar": r.exemplar, "mu_A": r.mu_a, "mu_B": r.mu_b,
        "mu_notB": r.mu_not_b, "mu_AandB": r.mu_a_and_b, "mu_AandNotB": r.mu_a_and_not_b,
    } for r in dataset]
    return Report("ingest", WEIGHTS_HEADER, rows, pair_names=_pair_names(dataset))


# ---------------------------------------------------------------------------
# Formatters
# ---------------------------------------------------------------------------


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_real(value)
    if isinstance(value, (list, tuple)):
        return ";".join(map(str, value))
    return str(value)


def to_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.columns)
    for rec in report.rows:
        writer.writerow([_cell(rec[c]) for c in report.columns])
    return buf.getvalue()


def to_json(report: Report) -> str:
    payload = {"command": report.command, "rows": report.rows}
    if report.summary is not None:
        payload["summary"] = report.summary
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def to_markdown(report: Report) -> str:
    """One table per (pair, kind) group, in first-appearance order."""
    grouped = "pair_id" in report.columns
    has_kind = "kind" in report.columns
    inner = [c for c in report.columns if c not in ("pair_id", "kind")] if grouped else list(report.columns)
    groups: dict[tuple, list[dict]] = {}
    for rec in report.rows:
        key = (rec.get("pair_id"), rec.get("kind")) if grouped else (None, None)
        groups.setdefault(key, []).append(rec)

    lines = [f"# {report.command}", ""]
    for (pair_id, kind), recs in groups.items():
        if grouped:
            names = report.pair_names.get(pair_id)
            title = f"{names[0]} / {names[1]}" if names else pair_id
            if has_kind:
                title += f" ({kind})"
            lines += [f"## {title}", ""]
        lines.append("| " + " | ".join(inner) + " |")
        lines.append("|" + "|".join("---" for _ in inner) + "|")
        for rec in recs:
            lines.append("| " + " | ".join(_cell(rec[c]).replace("|", "\\|") for c in inner) + " |")
        lines.append("")
    if report.summary is not None:
        lines += ["## summary", ""]
        lines += [f"- {k}: {_cell(v)}" for k, v in report.summary.items()]
        lines.append("")
    return "\n".join(lines)


FORMATTERS = {"csv": to_csv, "md": to_markdown, "json": to_json}


def render(report: Report, fmt: str = "csv") -> str:
    return FORMATTERS[fmt](report)
