"""输出记录：每个对象序列化为一行 JSON，text 格式供人阅读"""
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field

from ncycle_pp.criteria import CriterionVerdict
from ncycle_pp.field import FieldCtx, field_text
from ncycle_pp.permpoly import CycleStructure, IndexForm


class IndexFormRecord(BaseModel):
    r: int
    s: int
    h: List[int]

    @classmethod
    def from_form(cls, form: IndexForm) -> "IndexFormRecord":
        return cls(r=form.r, s=form.s, h=list(form.hcoeffs))


class CriterionRecord(BaseModel):
    passed: bool
    witness: Optional[int] = None
    failure: Optional[str] = None
    detail: Optional[str] = None

    @classmethod
    def from_verdict(cls, verdict: CriterionVerdict) -> "CriterionRecord":
        return cls(
            passed=verdict.passed,
            witness=verdict.witness,
            failure=verdict.failure_kind.value if verdict.failure_kind else None,
            detail=verdict.detail or None,
        )


class OracleRecord(BaseModel):
    mode: Literal["full", "subgroup"]
    passed: bool


class ResultRecord(BaseModel):
    kind: Literal["result"] = "result"
    field: str
    modulus: List[int]
    beta: int
    poly: str
    index_form: Optional[IndexFormRecord] = None
    n: int
    is_permutation: Optional[bool] = None
    criterion: Optional[CriterionRecord] = None
    oracle: OracleRecord
    cycles: Optional[Dict[str, int]] = None
    min_order: Optional[int] = None
    family: Optional[str] = None
    params: Dict[str, object] = Field(default_factory=dict)
    notes: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.oracle.passed


class NoteRecord(BaseModel):
    kind: Literal["note"] = "note"
    message: str
    data: Dict[str, object] = Field(default_factory=dict)


class SummaryRecord(BaseModel):
    kind: Literal["summary"] = "summary"
    command: str
    evaluated: int
    hits: int
    complete: bool


class InfoRecord(BaseModel):
    kind: Literal["info"] = "info"
    field: str
    q: int
    modulus: List[int]
    beta: int
    tables: bool
    order_factors: Dict[str, int]
    subgroup_orders: List[int]


def field_fields(ctx: FieldCtx) -> Dict[str, object]:
    return {"field": field_text(ctx), "modulus": list(ctx.modulus), "beta": ctx.beta}


def cycles_dict(structure: CycleStructure) -> Dict[str, int]:
    return {str(k): structure.counts[k] for k in sorted(structure.counts)}


def to_jsonl(record: BaseModel) -> str:
    return record.model_dump_json(exclude_none=True)


def to_text(record: BaseModel) -> str:
    if isinstance(record, ResultRecord):
        status = "PASS" if record.passed else "FAIL"
        lines = [f"{status}  {record.poly}  over GF({record.field}) n={record.n}"]
        if record.family:
            lines.append(f"  family: {record.family} {record.params}")
        if record.index_form:
            lines.append(f"  index form: r={record.index_form.r} s={record.index_form.s} ell={len(record.index_form.h)}")
        if record.is_permutation is not None:
            lines.append(f"  permutation: {record.is_permutation}")
        if record.criterion:
            crit = "pass" if record.criterion.passed else f"fail ({record.criterion.failure})"
            if record.criterion.witness is not None:
                crit += f" witness={record.criterion.witness}"
            lines.append(f"  criterion: {crit}")
        lines.append(f"  oracle[{record.oracle.mode}]: {record.oracle.passed}")
        if record.cycles is not None:
            lines.append(f"  cycles: {record.cycles}  min order: {record.min_order}")
        lines.extend(f"  note: {n}" for n in record.notes)
        return "\n".join(lines)
    if isinstance(record, NoteRecord):
        return f"NOTE  {record.message}"
    if isinstance(record, SummaryRecord):
        state = "complete" if record.complete else "budget exhausted"
        return f"{record.command}: {record.hits} hit(s) from {record.evaluated} candidate(s), {state}"
    if isinstance(record, InfoRecord):
        return (f"GF({record.field}) q={record.q} modulus={record.modulus} beta={record.beta} "
                f"tables={record.tables}\n  q-1 = {record.order_factors}\n  ell choices: {record.subgroup_orders}")
    return to_jsonl(record)


def render(record: BaseModel, fmt: str) -> str:
    return to_jsonl(record) if fmt == "jsonl" else to_text(record)
