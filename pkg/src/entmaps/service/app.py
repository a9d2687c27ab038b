"""FastAPI application and the handler functions behind each endpoint.

Handlers are plain synchronous functions over the pydantic models, so the
CLI's local mode can call them without going through HTTP.
"""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..linalg import min_eigenvalue, require_hermitian
from ..multipartite import threshold_scan
from ..scans import (
    ScanConfig,
    analyze_state,
    conventions,
    detection_indicator,
    render_csv,
    render_json,
    run_scan,
)
from ..states import StateSpec
from ..verify import run_verification
from .schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    CheckResultModel,
    CriterionResult,
    ScanRequest,
    ScanResponse,
    ThresholdRequest,
    ThresholdResponse,
    VerifyRequest,
    VerifyResponse,
)

__all__ = [
    "handle_analyze",
    "handle_scan",
    "handle_threshold",
    "handle_verify",
    "create_app",
    "app",
]

_CANONICAL_SPLITS = {4: (2, 2), 6: (2, 3), 8: (2, 2, 2), 9: (3, 3)}


def _resolve_state(req: AnalyzeRequest):
    """Build (rho, dims, descriptor) from either a descriptor or a literal."""
    if (req.descriptor is None) == (req.matrix is None):
        raise ValueError("provide exactly one of 'descriptor' or 'matrix'")
    if req.descriptor is not None:
        spec = StateSpec.parse(req.descriptor)
        dims = tuple(req.dims) if req.dims else spec.dims()
        return spec.build(), dims, spec.describe()
    rho = req.matrix.to_array()
    require_hermitian(rho, "matrix literal")
    trace = complex(np.trace(rho))
    if abs(trace - 1.0) > 1e-8:
        raise ValueError(f"matrix literal has trace {trace:.6g}, expected 1")
    if min_eigenvalue(rho) < -1e-10:
        raise ValueError("matrix literal is not positive semidefinite")
    if req.dims:
        dims = tuple(req.dims)
        if int(np.prod(dims)) != req.matrix.dim:
            raise ValueError(f"dims {dims} do not factor dimension {req.matrix.dim}")
    else:
        if req.matrix.dim not in _CANONICAL_SPLITS:
            raise ValueError(f"cannot infer subsystem split for dimension "
                             f"{req.matrix.dim}; supply dims")
        dims = _CANONICAL_SPLITS[req.matrix.dim]
    return rho, dims, f"matrix literal d={req.matrix.dim}"


def handle_analyze(req: AnalyzeRequest) -> AnalyzeResponse:
    rho, dims, descriptor = _resolve_state(req)
    report = analyze_state(
        rho, dims, criteria=tuple(req.criteria) if req.criteria else None,
        seed=req.seed, restarts=req.restarts, tol=req.tol, cut=req.cut,
        descriptor=descriptor,
    )
    return AnalyzeResponse(
        descriptor=report.descriptor,
        dims=list(report.dims),
        seed=report.seed,
        restarts=report.restarts,
        tol=report.tol,
        wall_time_s=report.wall_time_s,
        results=[CriterionResult(**r) for r in report.results],
        conventions=conventions(),
    )


def handle_scan(req: ScanRequest) -> ScanResponse:
    fixed = {"beta": req.beta} if req.beta is not None else {}
    config = ScanConfig(
        family=req.family,
        resolution=req.resolution,
        ranges={k: tuple(v) for k, v in (req.ranges or {}).items()},
        criteria=tuple(req.criteria or ()),
        seed=req.seed,
        restarts=req.restarts,
        tol=req.tol,
        fixed=fixed,
        cut=req.cut,
    )
    result = run_scan(config)
    content = render_csv(result) if req.format == "csv" else render_json(result)
    return ScanResponse(
        family=result.config.family,
        resolution=result.config.resolution,
        criteria=list(result.config.criteria),
        points=len(result.rows),
        elapsed_s=result.elapsed_s,
        format=req.format,
        content=content,
    )


def handle_threshold(req: ThresholdRequest) -> ThresholdResponse:
    if not req.lo < req.hi:
        raise ValueError(f"threshold interval needs lo < hi, got ({req.lo}, {req.hi})")
    indicator = detection_indicator(
        req.family, req.criterion, seed=req.seed, restarts=req.restarts, cut=req.cut,
    )
    value = threshold_scan(indicator, req.lo, req.hi, tol=req.tol)
    return ThresholdResponse(
        family=req.family, criterion=req.criterion, threshold=value,
        tol=req.tol, lo=req.lo, hi=req.hi,
        cut=req.cut if req.family == "w_noise" else None,
    )


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    report = run_verification(seed=req.seed, counts=req.counts,
                              corrupt_basis=req.corrupt_basis)
    return VerifyResponse(
        seed=report.seed,
        passed=report.passed,
        elapsed_s=report.elapsed_s,
        checks=[
            CheckResultModel(name=r.name, passed=r.passed, max_error=r.max_error,
                             tolerance=r.tolerance, count=r.count, detail=r.detail)
            for r in report.results
        ],
    )


def create_app() -> FastAPI:
    api = FastAPI(title="entmaps", description="entanglement identifier service",
                  version="0.1.0")

    @api.exception_handler(ValueError)
    async def value_error_handler(_: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @api.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @api.post("/analyze", response_model=AnalyzeResponse,
              response_model_exclude_none=True)
    def analyze(req: AnalyzeRequest) -> AnalyzeResponse:
        return handle_analyze(req)

    @api.post("/scan", response_model=ScanResponse)
    def scan(req: ScanRequest) -> ScanResponse:
        return handle_scan(req)

    @api.post("/threshold", response_model=ThresholdResponse,
              response_model_exclude_none=True)
    def threshold(req: ThresholdRequest) -> ThresholdResponse:
        return handle_threshold(req)

    @api.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        return handle_verify(req)

    return api


app = create_app()
