"""Request and response schemas for the HTTP service.

A diagram is posted in one of three JSON shapes: a bare PD array of
4-tuples, a wrapper object {"pd": [...], "free_circles": n}, or a braid
closure {"strands": n, "word": [k, ...], "axis": bool}.
"""

from __future__ import annotations

import json
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..linkdiag import BraidWord, LinkDiagram, from_braid_closure, parse_pd

Ring = Literal["Z", "Q", "F2"]


def diagram_from_spec(spec: Any) -> LinkDiagram:
    """Build a diagram from any accepted JSON shape; ValueError on junk."""
    if isinstance(spec, list):
        return parse_pd(json.dumps(spec))
    if isinstance(spec, dict):
        if "strands" in spec or "word" in spec:
            extra = set(spec) - {"strands", "word", "axis"}
            if extra:
                raise ValueError(f"unknown braid keys: {sorted(extra)}")
            if "strands" not in spec or "word" not in spec:
                raise ValueError("braid spec needs both strands and word")
            word = BraidWord(spec["strands"], tuple(spec["word"]))
            return from_braid_closure(word, include_axis=bool(spec.get("axis", False)))
        if "pd" in spec:
            return parse_pd(json.dumps(spec))
    raise ValueError(
        "diagram must be a PD array, a {pd, free_circles} object, "
        "or a {strands, word, axis} braid closure"
    )


class DiagramRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    diagram: Any


class ComputeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    diagram: Any
    ring: Ring = "Z"
    reduced: bool = False
    basepoint: Optional[int] = None
    variant: Literal["quotient", "kernel"] = "quotient"
    workers: int = Field(default=1, ge=1, le=16)


class GroupCell(BaseModel):
    i: int
    j: int
    free: int
    torsion: list[int]


class ComputeResponse(BaseModel):
    ring: str
    reduced: bool
    groups: list[GroupCell]
    total_free_rank: int


class LeeRank(BaseModel):
    i: int
    rank: int


class LeeResponse(BaseModel):
    ranks: list[LeeRank]
    total: int


class JonesTerm(BaseModel):
    power: int
    coefficient: int


class JonesResponse(BaseModel):
    terms: list[JonesTerm]
    text: str


class RuleResultModel(BaseModel):
    rule: str
    inputs: str
    verdict: str
    citation: str
    details: dict


class DetectionReportModel(BaseModel):
    overall: str
    summary: dict
    rules: list[RuleResultModel]


class CensusRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    csv_text: Optional[str] = None  # omitted -> the bundled census
    max_workers: int = Field(default=4, ge=1, le=16)


class CensusRowModel(BaseModel):
    name: str
    verdict: str
    total_free_rank: Optional[int]
    total_rank_mod2: Optional[int]
    note: str


class CensusResponse(BaseModel):
    rows: list[CensusRowModel]


class CaseReportModel(BaseModel):
    case: str
    enumerated: int
    admissible: int
    braided: int
    witnesses: list[str]
    counterexamples: list


class CasesResponse(BaseModel):
    contract: str
    reports: list[CaseReportModel]


class HealthResponse(BaseModel):
    status: str
    version: str
