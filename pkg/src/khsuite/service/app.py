"""HTTP service wrapping the homology, detection, and case-analysis APIs.

Error mapping: malformed diagrams and invalid parameters are 400, the
crossing-count resource guard is 413, and a case analysis whose own
braidedness invariant fails under the requested contract is 409 (the
request was well-formed; the mathematical outcome is the hard failure).
"""

from __future__ import annotations

import os
import tempfile

from fastapi import FastAPI, HTTPException, Query

from .. import __version__, hflsearch
from ..detection import detect_t26, run_census
from ..khcomplex import (
    ResourceGuardError,
    kauffman_jones,
    khovanov_homology,
    lee_homology,
    reduced_khovanov,
)
from ..linkdiag import DiagramError
from .models import (
    CaseReportModel,
    CasesResponse,
    CensusRequest,
    CensusResponse,
    ComputeRequest,
    ComputeResponse,
    DetectionReportModel,
    DiagramRequest,
    HealthResponse,
    JonesResponse,
    LeeResponse,
    diagram_from_spec,
)


def _build_diagram(spec):
    try:
        return diagram_from_spec(spec)
    except (DiagramError, ValueError, TypeError) as err:
        raise HTTPException(status_code=400, detail=str(err)) from err


def _open_region_samples(case: hflsearch.CaseSpec, count: int) -> tuple[int, ...]:
    start = case.x2_values[0]
    step = 2 if start > 0 else -2
    return tuple(start + step * k for k in range(count))


def create_app() -> FastAPI:
    app = FastAPI(
        title="khsuite",
        version=__version__,
        description="Khovanov homology computation and torus-link detection",
    )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/compute", response_model=ComputeResponse)
    def compute(request: ComputeRequest) -> ComputeResponse:
        diagram = _build_diagram(request.diagram)
        if request.basepoint is not None and not request.reduced:
            raise HTTPException(400, detail="basepoint requires reduced=true")
        try:
            if request.reduced:
                group = reduced_khovanov(
                    diagram,
                    basepoint=request.basepoint,
                    domain=request.ring,
                    variant=request.variant,
                    workers=request.workers,
                )
            else:
                group = khovanov_homology(
                    diagram, request.ring, workers=request.workers
                )
        except ResourceGuardError as err:
            raise HTTPException(413, detail=str(err)) from err
        except (DiagramError, ValueError) as err:
            raise HTTPException(400, detail=str(err)) from err
        payload = group.to_json(request.ring)
        return ComputeResponse(
            ring=payload["ring"],
            reduced=request.reduced,
            groups=payload["groups"],
            total_free_rank=group.total_free_rank(),
        )

    @app.post("/lee", response_model=LeeResponse)
    def lee(request: DiagramRequest) -> LeeResponse:
        diagram = _build_diagram(request.diagram)
        try:
            ranks = lee_homology(diagram)
        except ResourceGuardError as err:
            raise HTTPException(413, detail=str(err)) from err
        return LeeResponse(
            ranks=[{"i": i, "rank": r} for i, r in ranks.items()],
            total=ranks.total(),
        )

    @app.post("/jones", response_model=JonesResponse)
    def jones(request: DiagramRequest) -> JonesResponse:
        diagram = _build_diagram(request.diagram)
        try:
            poly = kauffman_jones(diagram)
        except ResourceGuardError as err:
            raise HTTPException(413, detail=str(err)) from err
        return JonesResponse(
            terms=[{"power": e, "coefficient": c} for e, c in poly.items()],
            text=str(poly),
        )

    @app.post("/detect", response_model=DetectionReportModel)
    def detect(request: DiagramRequest) -> DetectionReportModel:
        diagram = _build_diagram(request.diagram)
        try:
            report = detect_t26(diagram)
        except ResourceGuardError as err:
            raise HTTPException(413, detail=str(err)) from err
        return DetectionReportModel(**report.to_json())

    @app.post("/census", response_model=CensusResponse)
    def census(request: CensusRequest) -> CensusResponse:
        if request.csv_text is None:
            rows = run_census(max_workers=request.max_workers)
        else:
            fd, path = tempfile.mkstemp(suffix=".csv", text=True)
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as handle:
                    handle.write(request.csv_text)
                try:
                    rows = run_census(path, max_workers=request.max_workers)
                except ValueError as err:
                    raise HTTPException(400, detail=str(err)) from err
            finally:
                os.unlink(path)
        return CensusResponse(rows=[row.to_json() for row in rows])

    @app.get("/hfl/cases", response_model=CasesResponse)
    def hfl_cases(
        case: str | None = Query(default=None),
        samples: int | None = Query(default=None, ge=1, le=8),
        contract: str = Query(default="strict"),
    ) -> CasesResponse:
        if contract not in ("strict", "lax"):
            raise HTTPException(400, detail=f"unknown contract {contract!r}")
        if case is not None and case not in hflsearch.CASES:
            raise HTTPException(
                400, detail=f"unknown case {case!r}; valid: {list(hflsearch.CASES)}"
            )
        names = [case] if case is not None else list(hflsearch.CASES)
        reports = []
        try:
            for name in names:
                spec = hflsearch.CASES[name]
                samples2 = (
                    _open_region_samples(spec, samples)
                    if samples is not None and spec.open_region
                    else None
                )
                reports.append(hflsearch.run_case(spec, contract, samples2=samples2))
        except hflsearch.CaseAnalysisError as err:
            raise HTTPException(409, detail=str(err)) from err
        return CasesResponse(
            contract=contract,
            reports=[CaseReportModel(**r.to_json()) for r in reports],
        )

    return app


app = create_app()
