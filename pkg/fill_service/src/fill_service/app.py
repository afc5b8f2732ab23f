"""FastAPI application exposing the mask-fill endpoints.

POST /fill takes {"texts": [...], "mask_token": "..."} and returns the
same number of texts in the same order with every mask replaced; GET
/health reports 503 until the model finishes loading. Limits and the
checkpoint come from environment variables:

    FILL_CHECKPOINT     builtin | <corpus path> | hf:<model dir>   (builtin)
    FILL_MAX_BATCH      maximum texts per request                  (256)
    FILL_MAX_TEXT_BYTES per-text UTF-8 byte cap                    (65536)
    FILL_SAMPLE         1 enables temperature sampling             (0)
    FILL_TEMPERATURE    sampling temperature                       (1.0)
    FILL_PORT           port for the __main__ runner               (8765)
"""

import os
from contextlib import asynccontextmanager

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .model import load_filler


class FillRequest(BaseModel):
    texts: list[str] = Field(min_length=1)
    mask_token: str = Field(default="<mask>", min_length=1)


class FillResponse(BaseModel):
    texts: list[str]
    model_id: str


class Settings:
    def __init__(self, env=os.environ):
        self.checkpoint = env.get("FILL_CHECKPOINT", "builtin")
        self.max_batch = int(env.get("FILL_MAX_BATCH", "256"))
        self.max_text_bytes = int(env.get("FILL_MAX_TEXT_BYTES", "65536"))
        self.sample = env.get("FILL_SAMPLE", "0") == "1"
        self.temperature = float(env.get("FILL_TEMPERATURE", "1.0"))
        self.port = int(env.get("FILL_PORT", "8765"))


def create_app(settings: Settings | None = None) -> FastAPI:
    settings = settings or Settings()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        app.state.filler = load_filler(
            settings.checkpoint, settings.sample, settings.temperature
        )
        yield
        app.state.filler = None

    app = FastAPI(title="fill-service", lifespan=lifespan)
    app.state.settings = settings

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        # A body that is not valid JSON is a client formatting problem (400);
        # valid JSON with a wrong shape stays a validation error (422).
        if any(err.get("type") == "json_invalid" for err in exc.errors()):
            return JSONResponse(status_code=400, content={"detail": "malformed JSON body"})
        return JSONResponse(status_code=422, content={"detail": exc.errors()})

    @app.get("/health")
    async def health():
        filler = getattr(app.state, "filler", None)
        if filler is None:
            return JSONResponse(status_code=503, content={"status": "loading"})
        return {"status": "ok", "model_id": filler.model_id}

    @app.post("/fill", response_model=FillResponse)
    async def fill(request: FillRequest):
        filler = getattr(app.state, "filler", None)
        if filler is None:
            raise HTTPException(status_code=503, detail="model still loading")
        if len(request.texts) > settings.max_batch:
            raise HTTPException(
                status_code=413,
                detail=f"batch of {len(request.texts)} exceeds limit {settings.max_batch}",
            )
        for i, text in enumerate(request.texts):
            if len(text.encode("utf-8")) > settings.max_text_bytes:
                raise HTTPException(
                    status_code=413,
                    detail=f"text {i} exceeds {settings.max_text_bytes} bytes",
                )
        try:
            filled = filler.fill(request.texts, request.mask_token)
        except Exception as exc:  # surface model failures as a server error
            raise HTTPException(status_code=500, detail=f"fill failed: {exc}") from exc
        return FillResponse(texts=filled, model_id=filler.model_id)

    return app
