"""
Report models and renderers.

Every exact value is serialized as a string: rationals as "p/q", elements of
Q(n) as numerator/denominator coefficient lists (low to high degree) plus a
readable form and reduced values at requested points.
"""
import logging
from typing import Any, Dict, Iterable, List, Literal, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from . import published
from .config import SCHEMA_VERSION
from .errors import PoleAtPoint
from .exactnum import RatN, rat_str
from .varengine import BASIS_KEYS

logger = logging.getLogger(__name__)

STATUS_MARK = {"ok": "✅", "mismatch": "⚠️", "error": "❌"}
CHECK_MARK = {"pass": "✅", "finding": "⚠️", "fail": "❌", "skipped": "⏭️"}


class RatNPayload(BaseModel):
    text: str
    num: List[str]
    den: List[str]
    values: Dict[str, str] = Field(default_factory=dict)

    @classmethod
    def of(cls, value: RatN, points: Iterable = ()) -> "RatNPayload":
        value = RatN.of(value)
        values = {}
        for point in points:
            try:
                values[rat_str(point)] = rat_str(value.evaluate(point))
            except PoleAtPoint:
                values[rat_str(point)] = "pole"
        return cls(text=str(value), num=value.num.to_json(), den=value.den.to_json(), values=values)


class SigmaQuadPayload(BaseModel):
    c22: RatNPayload
    c4: RatNPayload

    @classmethod
    def of(cls, quad, points: Iterable = ()) -> "SigmaQuadPayload":
        points = list(points)
        return cls(c22=RatNPayload.of(quad.c22, points), c4=RatNPayload.of(quad.c4, points))


def ansatz_payload(fn, points: Iterable = ()) -> Dict[str, dict]:
    """Coefficients of an ansatz function keyed by basis name."""
    points = list(points)
    return {key: RatNPayload.of(c, points).model_dump() for key, c in zip(BASIS_KEYS, fn)}


class SpectrumEntryPayload(BaseModel):
    value: str
    origins: List[str]
    multiplicity: Optional[int] = None

    @classmethod
    def of(cls, entry) -> "SpectrumEntryPayload":
        return cls(value=rat_str(entry.value), origins=list(entry.origins), multiplicity=entry.multiplicity)


class KernelPayload(BaseModel):
    dim_conformal_kernel: int
    dim_tt_kernel: int
    dim_K1: int
    notes: List[str] = Field(default_factory=list)

    @classmethod
    def of(cls, report) -> "KernelPayload":
        return cls(
            dim_conformal_kernel=report.dim_conformal_kernel,
            dim_tt_kernel=report.dim_tt_kernel,
            dim_K1=report.dim_K1,
            notes=list(report.notes),
        )


class CheckResult(BaseModel):
    name: str
    status: Literal["pass", "fail", "finding", "skipped"]
    detail: str = ""

    @classmethod
    def from_bool(cls, name: str, ok: bool, detail: str = "") -> "CheckResult":
        return cls(name=name, status="pass" if ok else "fail", detail=detail)


class DiscrepancyPayload(BaseModel):
    quantity: str
    published: Optional[RatNPayload] = None
    pipeline: Optional[RatNPayload] = None
    explained_by: Optional[str] = None
    detail: str = ""

    @classmethod
    def of(cls, d, points: Iterable = ()) -> "DiscrepancyPayload":
        points = list(points)
        erratum = published.ERRATA.get(published.DERIVED_FROM_TT.get(d.quantity, d.quantity))
        return cls(
            quantity=d.quantity,
            published=RatNPayload.of(d.published, points),
            pipeline=RatNPayload.of(d.pipeline, points),
            explained_by=d.explained_by,
            detail=erratum.note if erratum and d.explained else "",
        )


def comparison_rows(report, points: Iterable = ()) -> List[Dict[str, Any]]:
    """Published against pipeline totals, with the shift between them."""
    points = list(points)
    rows = []
    for name, pub, pipe in (
        ("Q4", report.Q4, report.pipeline_Q4),
        ("Q2", report.Q2, report.pipeline_Q2),
        ("Q4+Q2", report.Q4 + report.Q2, report.pipeline_Q4 + report.pipeline_Q2),
    ):
        rows.append({
            "quantity": name,
            "published": RatNPayload.of(pub, points).model_dump(),
            "pipeline": RatNPayload.of(pipe, points).model_dump(),
            "shift": RatNPayload.of(pipe - pub, points).model_dump(),
        })
    return rows


class ObstructionPayload(BaseModel):
    b_factors: int
    Q4: RatNPayload
    Q2: RatNPayload
    pipeline_Q4: RatNPayload
    pipeline_Q2: RatNPayload
    components: Dict[str, SigmaQuadPayload]
    verdicts: Dict[str, bool]
    holds: bool
    sigma4_adjudication: Dict[str, Any]
    discrepancies: List[DiscrepancyPayload]

    @classmethod
    def of(cls, report, points: Iterable = ()) -> "ObstructionPayload":
        points = list(points)
        adjudication = {
            k: (RatNPayload.of(v, points).model_dump() if isinstance(v, RatN) else v)
            for k, v in report.sigma4_adjudication.items()
        }
        return cls(
            b_factors=report.b_factors,
            Q4=RatNPayload.of(report.Q4, points),
            Q2=RatNPayload.of(report.Q2, points),
            pipeline_Q4=RatNPayload.of(report.pipeline_Q4, points),
            pipeline_Q2=RatNPayload.of(report.pipeline_Q2, points),
            components={k: SigmaQuadPayload.of(v, points) for k, v in report.components.items()},
            verdicts=report.verdicts,
            holds=report.holds,
            sigma4_adjudication=adjudication,
            discrepancies=[DiscrepancyPayload.of(d, points) for d in report.discrepancies],
        )


class RunReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(default=SCHEMA_VERSION, alias="schema")
    command: List[str]
    status: Literal["ok", "mismatch", "error"] = "ok"
    results: Dict[str, Any] = Field(default_factory=dict)
    checks: List[CheckResult] = Field(default_factory=list)
    discrepancies: List[DiscrepancyPayload] = Field(default_factory=list)
    findings: List[DiscrepancyPayload] = Field(default_factory=list)
    notices: List[str] = Field(default_factory=list)
    error: Optional[str] = None
    timestamp: Optional[str] = None

    def add_ledger(self, entries: Iterable[DiscrepancyPayload]) -> None:
        for entry in entries:
            (self.findings if entry.explained_by else self.discrepancies).append(entry)

    def finalize(self) -> "RunReport":
        """Failed checks join the discrepancy list; status follows from it."""
        known = {d.quantity for d in self.discrepancies}
        for check in self.checks:
            if check.status == "fail" and check.name not in known:
                self.discrepancies.append(DiscrepancyPayload(quantity=check.name, detail=check.detail))
        if self.error is not None:
            self.status = "error"
        elif self.discrepancies:
            self.status = "mismatch"
        else:
            self.status = "ok"
        return self

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


def _flatten(value):
    if isinstance(value, dict) and {"text", "num", "den"} <= set(value):
        shown = value["text"]
        if value.get("values"):
            shown += "  [" + ", ".join(f"n={k}: {v}" for k, v in value["values"].items()) + "]"
        return shown
    if isinstance(value, dict):
        return {k: _flatten(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_flatten(v) for v in value]
    return value


def _table(value) -> str:
    value = _flatten(value)
    if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        return pd.DataFrame(value).to_string(index=False)
    if isinstance(value, dict) and value and not any(isinstance(v, (dict, list)) for v in value.values()):
        return pd.DataFrame.from_dict(value, orient="index", columns=["value"]).to_string()
    if isinstance(value, dict):
        return "\n".join(f"{k}:\n{_indent(_table(v))}" for k, v in value.items())
    return str(value)


def _indent(text: str) -> str:
    return "\n".join("  " + line for line in text.splitlines())


def render_text(report: RunReport) -> str:
    lines = [f"{STATUS_MARK[report.status]} {' '.join(report.command)}: {report.status}"]
    if report.error:
        lines.append(f"error: {report.error}")
    for notice in report.notices:
        lines.append(f"⚠️ {notice}")
    for key, value in report.results.items():
        lines.append(f"\n---- {key} ----")
        lines.append(_table(value))
    if report.checks:
        lines.append("\n---- checks ----")
        rows = [{"": CHECK_MARK[c.status], "check": c.name, "status": c.status, "detail": c.detail} for c in report.checks]
        lines.append(pd.DataFrame(rows).to_string(index=False))
    for title, entries in (("findings", report.findings), ("discrepancies", report.discrepancies)):
        if entries:
            lines.append(f"\n---- {title} ----")
            lines.append(_table([e.model_dump() for e in entries]))
    return "\n".join(lines)


def render(report: RunReport, fmt: str) -> str:
    return report.to_json() if fmt == "json" else render_text(report)
