"""Local HTTP service for the annotation UI: upload an image once, then
segment it repeatedly with different annotations while superpixels,
features and affinity matrices stay cached in the session.
"""

from __future__ import annotations

import threading
import time
import uuid
import warnings
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .affinity import SigmaStrategy, build_affinity
from .annotations import AnnotationError, annotation_from_json
from .constrained import ExtractionError
from .features import extract_features
from .imgio import ImageFormatError, decode_image, encode_mask_png, mask_to_rle
from .pipeline import PipelineSettings, prepared_segment
from .superpixels import SuperpixelMap, boundary_paths, compute_superpixels

DEFAULT_SUPERPIXELS = 256


@dataclass
class Session:
    image: np.ndarray
    superpixels: SuperpixelMap
    features: np.ndarray
    affinity_cache: dict[str, np.ndarray] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)
    cache_hits: int = 0
    last_annotation: str | None = None
    last_mask_png: bytes | None = None


def _strategy_from(settings: dict) -> SigmaStrategy:
    mode = settings.get("sigma_mode", "single")
    if mode == "single":
        return SigmaStrategy(mode="single", value=float(settings.get("sigma", 0.15)))
    if mode == "self-tuning":
        return SigmaStrategy(mode="self-tuning", knn_k=int(settings.get("knn_k", 7)))
    raise AnnotationError(f"unknown sigma_mode {mode!r}")


def create_app() -> FastAPI:
    app = FastAPI(title="cdseg")
    sessions: dict[str, Session] = {}

    def session_or_none(session_id: str) -> Session | None:
        return sessions.get(session_id)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions")
    async def create_session(request: Request, superpixels: int = DEFAULT_SUPERPIXELS):
        body = await request.body()
        try:
            image = decode_image(body)
            sp = compute_superpixels(image, superpixels)
        except (ImageFormatError, ValueError) as exc:
            return JSONResponse({"detail": str(exc)}, status_code=422)
        features = extract_features(image, sp)
        session_id = uuid.uuid4().hex
        sessions[session_id] = Session(image=image, superpixels=sp, features=features)
        return {
            "id": session_id,
            "width": int(image.shape[1]),
            "height": int(image.shape[0]),
            "superpixel_count": sp.count,
            "boundaries": [[[x, y] for x, y in path] for path in boundary_paths(sp)],
        }

    @app.post("/sessions/{session_id}/segment")
    async def segment_session(session_id: str, request: Request):
        session = session_or_none(session_id)
        if session is None:
            return JSONResponse({"detail": "unknown session"}, status_code=404)
        if not session.lock.acquire(blocking=False):
            return JSONResponse(
                {"detail": "a segmentation is already running for this session"},
                status_code=409,
            )
        try:
            started = time.perf_counter()
            payload = await request.json()
            try:
                import json as _json

                ann = annotation_from_json(_json.dumps(payload.get("annotation")))
                raw_settings = payload.get("settings") or {}
                strategy = _strategy_from(raw_settings)
                pipeline = PipelineSettings(
                    superpixel_target=session.superpixels.count,
                    margin=float(raw_settings.get("margin", 0.1)),
                    dynamics=str(raw_settings.get("dynamics", "pairwise")),
                )
            except (AnnotationError, TypeError, ValueError) as exc:
                return JSONResponse({"detail": str(exc)}, status_code=422)

            key = strategy.cache_key()
            cached = key in session.affinity_cache
            if cached:
                session.cache_hits += 1
                affinity = session.affinity_cache[key]
            else:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    affinity = build_affinity(session.features, strategy)
                session.affinity_cache[key] = affinity

            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    mask, diagnostics = prepared_segment(
                        session.superpixels, affinity, ann, pipeline, strategy.mode
                    )
            except AnnotationError as exc:
                return JSONResponse({"detail": str(exc)}, status_code=422)
            except ExtractionError as exc:
                return JSONResponse(
                    {"detail": str(exc), "diagnostics": exc.diagnostics}, status_code=500
                )

            session.last_annotation = ann.to_json()
            session.last_mask_png = encode_mask_png(mask)
            doc = diagnostics.to_dict()
            doc["timing_ms"] = round(1000.0 * (time.perf_counter() - started), 3)
            doc["affinity_cache_hit"] = cached
            doc["cache_hits"] = session.cache_hits
            return {
                "mask_rle": mask_to_rle(mask),
                "width": int(mask.shape[1]),
                "height": int(mask.shape[0]),
                "diagnostics": doc,
            }
        finally:
            session.lock.release()

    @app.get("/sessions/{session_id}/mask.png")
    def get_mask(session_id: str):
        session = session_or_none(session_id)
        if session is None:
            return JSONResponse({"detail": "unknown session"}, status_code=404)
        if session.last_mask_png is None:
            return JSONResponse({"detail": "no mask computed yet"}, status_code=404)
        return Response(content=session.last_mask_png, media_type="image/png")

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        if sessions.pop(session_id, None) is None:
            return JSONResponse({"detail": "unknown session"}, status_code=404)
        return Response(status_code=204)

    return app
