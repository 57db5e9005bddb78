"""HTTP JSON API for interactive sessions, plus static hosting of the
browser explorer bundle when one is available."""

from __future__ import annotations

import threading
import uuid
from pathlib import Path as FsPath

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .datasets import envelope_csv_text
from .envelopes import EnvelopeCurve
from .errors import AlreadySelected, ConfigInvalid, FdpError, UnknownId
from .session import Session, SessionConfig


class SessionConfigBody(BaseModel):
    p_star: float
    lam: float = Field(alias="lambda")
    alpha: float
    a: float = 1.0

    model_config = {"populate_by_name": True}


class SessionData(BaseModel):
    ids: list[str]
    p: list[float]
    x: list | None = None


class CreateSessionBody(BaseModel):
    config: SessionConfigBody
    data: SessionData


class SelectBody(BaseModel):
    id: str


def _curve_from_points(session: Session) -> EnvelopeCurve:
    pts = session.envelope_points()
    return EnvelopeCurve(
        k=np.asarray([pt["k"] for pt in pts], dtype=np.int64),
        size=np.asarray([pt["size"] for pt in pts], dtype=np.int64),
        v_hat=np.asarray([pt["v_hat"] for pt in pts]),
        v_bar=np.asarray([pt["v_bar"] for pt in pts], dtype=np.int64),
        fdp_bar_raw=np.asarray([pt["fdp_bar_raw"] for pt in pts]),
        fdp_bar=np.asarray([pt["fdp_bar"] for pt in pts]),
        family=session.constant.family, alpha=session.constant.alpha,
        a=session.constant.a, c=session.constant.c)


def create_app(static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="fdpenvelope session API")
    sessions: dict[str, Session] = {}
    locks: dict[str, threading.Lock] = {}

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="no such session")
        return session

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        try:
            config = SessionConfig(p_star=body.config.p_star,
                                   lam=body.config.lam,
                                   alpha=body.config.alpha, a=body.config.a)
            session = Session(body.data.ids, np.asarray(body.data.p),
                              config, side_info=body.data.x)
        except (ConfigInvalid, FdpError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        session_id = uuid.uuid4().hex
        sessions[session_id] = session
        locks[session_id] = threading.Lock()
        return {"session_id": session_id}

    @app.get("/sessions/{session_id}")
    def session_state(session_id: str):
        return get_session(session_id).state()

    @app.post("/sessions/{session_id}/select")
    def select(session_id: str, body: SelectBody):
        session = get_session(session_id)
        with locks[session_id]:
            try:
                return session.select_next(body.id)
            except UnknownId as exc:
                raise HTTPException(status_code=404, detail=str(exc))
            except AlreadySelected as exc:
                raise HTTPException(status_code=409, detail=str(exc))

    @app.get("/sessions/{session_id}/envelope.csv")
    def envelope_csv(session_id: str):
        session = get_session(session_id)
        return PlainTextResponse(envelope_csv_text(_curve_from_points(session)),
                                 media_type="text/csv; charset=utf-8")

    if static_dir is not None and FsPath(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="explorer")

    return app
