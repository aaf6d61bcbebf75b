"""FastAPI application serving the annotation protocol.

Routes:
  POST /v1/emotions   batch of texts -> per-text top-1 emotion + score
  POST /v1/depression single text -> severity label + score + truncated flag
  GET  /health        liveness + model-loaded flag

Errors: malformed body -> 400, oversize batch -> 413, backend failure ->
503 with Retry-After. Responses preserve request order and carry no
cross-request state.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .backends import Backend

BATCH_LIMIT = 64


class EmotionRequest(BaseModel):
    texts: list[str] = Field(min_length=1)


class DepressionRequest(BaseModel):
    text: str


def create_app(backend: Backend, *, batch_limit: int = BATCH_LIMIT) -> FastAPI:
    app = FastAPI(title="annotator-service", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "malformed request body"})

    @app.exception_handler(Exception)
    async def backend_failure(request: Request, exc: Exception):
        return JSONResponse(
            status_code=503,
            content={"error": f"backend failure: {exc}", "retry_after": 5},
            headers={"Retry-After": "5"},
        )

    @app.post("/v1/emotions")
    async def classify_emotions(request: EmotionRequest):
        if len(request.texts) > batch_limit:
            return JSONResponse(
                status_code=413,
                content={"error": "batch too large", "limit": batch_limit},
            )
        if any(not text.strip() for text in request.texts):
            return JSONResponse(status_code=400, content={"error": "texts must be nonempty"})
        return {"results": backend.emotions(list(request.texts))}

    @app.post("/v1/depression")
    async def classify_depression(request: DepressionRequest):
        if not request.text.strip():
            return JSONResponse(status_code=400, content={"error": "text must be nonempty"})
        return backend.depression(request.text)

    @app.get("/health")
    async def health():
        return {"status": "ok", "models_loaded": backend.loaded, "mode": backend.mode}

    return app
