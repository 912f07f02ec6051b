"""FastAPI service exposing the frame laboratory.

Malformed or dimensionally impossible input maps to HTTP 422; failed
hypotheses or refused constructions come back as 200 with ok=false and a
reason, so clients can distinguish input errors from theorem-level
failures.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..checks import classification_summary, run_checks
from ..duality import canonical_dual
from ..errors import (
    FrameFormatError,
    NotInvertibleError,
    NotSimilarError,
    OvfError,
    PreconditionFailedError,
    ShapeMismatchError,
)
from ..dilation import dilate, similarity_witness
from ..frames import classify
from ..gen import generate_document
from ..grouplike import (
    grouplike_representation_residual,
    reconstruct_grouplike_representation,
)
from ..groups import reconstruct_representation, representation_residual
from ..io import FrameDocument, matrix_to_json
from ..linalg import Tolerance, spectral_norm
from ..perturb import tightness_rows
from . import models


def _parse_frame(model: models.FrameModel) -> FrameDocument:
    try:
        return models.frame_model_to_doc(model)
    except FrameFormatError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def _tolerance(model: models.ToleranceModel | None) -> Tolerance | None:
    if model is None:
        return None
    try:
        return Tolerance(residual_eps=model.residual_eps, invert_eps=model.invert_eps)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def create_app() -> FastAPI:
    app = FastAPI(title="ovframes", version=__version__)

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/gen", response_model=models.GenResponse)
    def gen(request: models.GenRequest):
        try:
            doc = generate_document(
                request.kind, request.d, request.d0, request.N,
                request.seed, _tolerance(request.tolerance),
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return models.GenResponse(frame=models.doc_to_frame_model(doc))

    @app.post("/verify", response_model=models.VerifyResponse)
    def verify(request: models.VerifyRequest):
        doc = _parse_frame(request.frame)
        companion = _parse_frame(request.companion) if request.companion else None
        try:
            outcomes = run_checks(doc, request.checks, companion)
        except FrameFormatError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except ShapeMismatchError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return models.VerifyResponse(
            passed=all(o.passed for o in outcomes),
            checks=[
                models.CheckResultModel(
                    name=o.name, statement=o.statement, passed=o.passed,
                    residual=o.residual, detail=o.detail,
                )
                for o in outcomes
            ],
            classification=classification_summary(doc.frame),
        )

    @app.post("/dual", response_model=models.DualResponse)
    def dual(request: models.DualRequest):
        doc = _parse_frame(request.frame)
        try:
            dual_frame = canonical_dual(doc.frame)
        except NotInvertibleError as exc:
            return models.DualResponse(ok=False, reason=str(exc))
        out = FrameDocument(frame=dual_frame, group=doc.group, system=doc.system)
        return models.DualResponse(ok=True, frame=models.doc_to_frame_model(out))

    @app.post("/dilate", response_model=models.DilateResponse)
    def dilate_endpoint(request: models.DilateRequest):
        doc = _parse_frame(request.frame)
        try:
            dilation = dilate(doc.frame)
        except (PreconditionFailedError, NotInvertibleError) as exc:
            reason = getattr(exc, "reason", str(exc))
            return models.DilateResponse(ok=False, reason=reason)
        out = FrameDocument(frame=dilation.as_frame(doc.frame.tol))
        return models.DilateResponse(
            ok=True,
            frame=models.doc_to_frame_model(out),
            embed=matrix_to_json(dilation.embed),
            extended_dim=dilation.extended_dim,
        )

    @app.post("/similar", response_model=models.SimilarResponse)
    def similar(request: models.SimilarRequest):
        doc = _parse_frame(request.frame)
        other = _parse_frame(request.other)
        try:
            witness = similarity_witness(doc.frame, other.frame)
        except ShapeMismatchError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except NotSimilarError as exc:
            return models.SimilarResponse(similar=False, reason=str(exc), residual=exc.residual)
        except NotInvertibleError as exc:
            return models.SimilarResponse(similar=False, reason=str(exc))
        return models.SimilarResponse(
            similar=True,
            r_ab=matrix_to_json(witness.R_AB),
            r_psiphi=matrix_to_json(witness.R_PsiPhi),
            residual=witness.residual,
            p_residual=witness.p_residual,
        )

    @app.post("/reconstruct", response_model=models.ReconstructResponse)
    def reconstruct(request: models.ReconstructRequest):
        doc = _parse_frame(request.frame)
        if doc.group is None and doc.system is None:
            raise HTTPException(
                status_code=422, detail="reconstruction needs a group or grouplike block"
            )
        try:
            if doc.group is not None:
                rep = reconstruct_representation(doc.frame, doc.group)
                law = representation_residual(rep)
                kind = "group"
                pi = rep.pi
                regen = _group_regeneration_residual(doc, rep)
            else:
                rep = reconstruct_grouplike_representation(doc.frame, doc.system)
                law = grouplike_representation_residual(rep)
                kind = "grouplike"
                pi = rep.pi
                regen = _grouplike_regeneration_residual(doc, rep)
        except (PreconditionFailedError, NotInvertibleError) as exc:
            reason = getattr(exc, "reason", str(exc))
            return models.ReconstructResponse(ok=False, reason=reason)
        return models.ReconstructResponse(
            ok=True, kind=kind, pi=[matrix_to_json(p) for p in pi],
            law_residual=float(law), regeneration_residual=float(regen),
        )

    @app.post("/perturb", response_model=models.PerturbResponse)
    def perturb(request: models.PerturbRequest):
        doc = _parse_frame(request.frame)
        if not classify(doc.frame).is_weak:
            return models.PerturbResponse(ok=False, reason="frame is not weak")
        try:
            rows = tightness_rows(
                doc.frame,
                request.budget_fractions,
                range(request.base_seed, request.base_seed + request.seeds),
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        except OvfError as exc:
            return models.PerturbResponse(ok=False, reason=str(exc))
        return models.PerturbResponse(
            ok=True,
            rows=[models.TightnessRowModel(**row.__dict__) for row in rows],
        )

    return app


def _group_regeneration_residual(doc: FrameDocument, rep) -> float:
    f, group = doc.frame, doc.group
    worst = 0.0
    for g in range(group.order):
        inv = group.inv[g]
        worst = max(worst, spectral_norm(f.A[g] - f.A[0] @ rep.pi[inv]))
        worst = max(worst, spectral_norm(f.Psi[g] - f.Psi[0] @ rep.pi[inv]))
    return worst


def _grouplike_regeneration_residual(doc: FrameDocument, rep) -> float:
    from ..grouplike import phase_value

    f, sys = doc.frame, doc.system
    worst = 0.0
    e = sys.identity
    for u in range(sys.size):
        inv_op = phase_value(sys, sys.inv_phase[u]) * rep.pi[sys.inv_elem[u]]
        worst = max(worst, spectral_norm(f.A[u] - f.A[e] @ inv_op))
        worst = max(worst, spectral_norm(f.Psi[u] - f.Psi[e] @ inv_op))
    return worst


app = create_app()
