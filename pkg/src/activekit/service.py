"""Annotation service: an HTTP wrapper around a live learner session so a
human oracle can drive the query -> label -> teach loop.

Queried rows are staged as a pending batch and only leave the pool once
labeled, so an abandoned batch can be cancelled. Every state change is
appended to a per-session JSONL event log; on restart, logs are replayed
to reconstruct sessions.
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, Query
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .bench import STRATEGY_NAMES, DataError, Session as LearnerSession, load_csv

DATA_DIR_ENV = "ALSERVE_DATA_DIR"


class HoldoutSpec(BaseModel):
    rows: list[int]
    labels: list[int]


class SessionConfig(BaseModel):
    rows: list[list[float]] | None = None     # inline dataset
    dataset_path: str | None = None           # or a server-side CSV
    strategy: str = "least_confident"
    estimator: str = "gnb"
    initial_rows: list[int] = Field(default_factory=list)
    initial_labels: list[int] = Field(default_factory=list)
    batch_size: int = 1
    seed: int = 0
    class_names: list[str] = Field(default_factory=list)
    holdout: HoldoutSpec | None = None


class AnnotationSession:
    """Learner plus pool bookkeeping: available / pending / taught row ids
    partition the original pool."""

    def __init__(self, session_id: str, config: SessionConfig):
        self.id = session_id
        self.config = config
        self.lock = threading.Lock()

        if config.rows is not None:
            self.X = np.asarray(config.rows, dtype=float)
        elif config.dataset_path:
            self.X, _ = load_csv(config.dataset_path)
        else:
            raise ValueError("config needs inline rows or a dataset_path")
        if self.X.ndim != 2 or self.X.shape[0] == 0:
            raise ValueError("dataset must be a non-empty 2-D matrix")
        if not config.class_names:
            raise ValueError("class_names must be non-empty")
        if len(config.initial_rows) != len(config.initial_labels):
            raise ValueError("initial_rows and initial_labels lengths differ")
        if not config.initial_rows:
            raise ValueError("at least one initially labeled row is required")
        k = len(config.class_names)
        if any(not 0 <= c < k for c in config.initial_labels):
            raise ValueError("initial label outside the class universe")

        self.holdout = config.holdout
        excluded = set(config.initial_rows)
        if self.holdout:
            if any(not 0 <= c < k for c in self.holdout.labels):
                raise ValueError("holdout label outside the class universe")
            excluded |= set(self.holdout.rows)
        self.available = sorted(i for i in range(self.X.shape[0]) if i not in excluded)
        self.pending: list[int] = []
        self.history: list[tuple[int, int, float]] = []  # (row id, label, timestamp)

        self.learner = LearnerSession(
            config.strategy, config.estimator, config.seed,
            self.X[config.initial_rows], np.asarray(config.initial_labels))
        self.accuracy_series: list[float] = []
        self._record_accuracy()

    def _record_accuracy(self):
        if self.holdout:
            self.accuracy_series.append(
                self.learner.score(self.X[self.holdout.rows],
                                   np.asarray(self.holdout.labels)))

    def next_query(self, n: int) -> list[int]:
        if self.pending:
            if n != len(self.pending):
                raise PendingConflict("a different pending batch exists")
            return list(self.pending)
        if n < 1 or n > len(self.available):
            raise PoolExhausted(f"{len(self.available)} rows available, {n} requested")
        sel = self.learner.query(self.X[self.available], n)
        self.pending = [self.available[i] for i in np.asarray(sel.indices)]
        self.available = [i for i in self.available if i not in set(self.pending)]
        return list(self.pending)

    def submit_labels(self, labels: list[tuple[int, int]]):
        k = len(self.config.class_names)
        pending = set(self.pending)
        for row_id, _ in labels:
            if row_id not in pending:
                raise PendingConflict(f"row {row_id} is not pending")
        for _, label in labels:
            if not 0 <= label < k:
                raise ValueError(f"label {label} outside the class universe")
        ids = [r for r, _ in labels]
        ys = [c for _, c in labels]
        self.learner.teach(self.X[ids], np.asarray(ys))
        now = time.time()
        for row_id, label in labels:
            self.history.append((row_id, label, now))
        self.pending = [i for i in self.pending if i not in set(ids)]
        self._record_accuracy()

    def cancel_pending(self):
        self.available = sorted(self.available + self.pending)
        self.pending = []

    def metrics(self) -> dict:
        counts = [0] * len(self.config.class_names)
        for _, label, _ in self.history:
            counts[label] += 1
        out = {
            "labeled": len(self.history) + len(self.config.initial_rows),
            "human_labeled": len(self.history),
            "pool_remaining": len(self.available),
            "pending": list(self.pending),
            "class_counts": counts,
            "accuracy_series": list(self.accuracy_series),
        }
        if self.holdout:
            out["holdout_accuracy"] = self.accuracy_series[-1]
        return out

    def summary(self) -> dict:
        return {
            "id": self.id,
            "strategy": self.config.strategy,
            "estimator": self.config.estimator,
            "class_names": list(self.config.class_names),
            "batch_size": self.config.batch_size,
            "n_features": int(self.X.shape[1]),
            "pool_remaining": len(self.available),
            "pending": list(self.pending),
            "labeled": len(self.history) + len(self.config.initial_rows),
        }


class LabelItem(BaseModel):
    id: int
    label: int


class LabelBatch(BaseModel):
    labels: list[LabelItem]


class PendingConflict(RuntimeError):
    pass


class PoolExhausted(RuntimeError):
    pass


class EventLog:
    """Append-only JSONL persistence, one file per session."""

    def __init__(self, data_dir: str | None):
        self.dir = Path(data_dir) if data_dir else None
        if self.dir:
            self.dir.mkdir(parents=True, exist_ok=True)

    def append(self, session_id: str, event: dict):
        if not self.dir:
            return
        with open(self.dir / f"{session_id}.jsonl", "a") as fh:
            fh.write(json.dumps(event) + "\n")

    def replay_all(self) -> dict[str, AnnotationSession]:
        sessions = {}
        if not self.dir:
            return sessions
        for path in sorted(self.dir.glob("*.jsonl")):
            session = replay_log(path)
            if session is not None:
                sessions[session.id] = session
        return sessions


def replay_log(path) -> AnnotationSession | None:
    """Rebuild a session by re-applying its event log.

    Query events re-stage the logged ids directly rather than re-running the
    strategy, so replay is exact even for randomized strategies.
    """
    session = None
    with open(path) as fh:
        for line in fh:
            if not line.strip():
                continue
            event = json.loads(line)
            kind = event["event"]
            if kind == "create":
                session = AnnotationSession(
                    event["id"], SessionConfig(**event["config"]))
            elif session is None:
                raise DataError(f"{path}: event before create")
            elif kind == "query":
                ids = set(event["ids"])
                session.pending = list(event["ids"])
                session.available = [i for i in session.available if i not in ids]
            elif kind == "label":
                session.submit_labels([tuple(p) for p in event["labels"]])
            elif kind == "cancel":
                session.cancel_pending()
    return session


def create_app(data_dir: str | None = None, static_dir: str | None = None) -> FastAPI:
    if data_dir is None:
        data_dir = os.environ.get(DATA_DIR_ENV)
    log = EventLog(data_dir)
    sessions: dict[str, AnnotationSession] = log.replay_all()
    app = FastAPI(title="activekit annotation service")
    app.state.sessions = sessions

    def get(session_id: str) -> AnnotationSession:
        if session_id not in sessions:
            raise HTTPException(404, "unknown session")
        return sessions[session_id]

    @app.post("/sessions", status_code=201)
    def create_session(config: SessionConfig):
        if config.strategy not in STRATEGY_NAMES:
            raise HTTPException(
                422, f"unknown strategy {config.strategy!r}; valid: {STRATEGY_NAMES}")
        if config.estimator not in ("gnb", "knn", "logistic_ovr", "gp"):
            raise HTTPException(
                422, f"unknown estimator {config.estimator!r}; "
                     "valid: ['gnb', 'knn', 'logistic_ovr', 'gp']")
        session_id = uuid.uuid4().hex[:12]
        try:
            session = AnnotationSession(session_id, config)
        except (ValueError, DataError) as exc:
            raise HTTPException(400, str(exc))
        sessions[session_id] = session
        log.append(session_id, {"event": "create", "id": session_id,
                                "config": config.model_dump()})
        return {"id": session_id}

    @app.get("/sessions/{session_id}")
    def session_summary(session_id: str):
        return get(session_id).summary()

    @app.post("/sessions/{session_id}/query")
    def next_query(session_id: str, n: int = Query(default=0)):
        session = get(session_id)
        if n <= 0:
            n = session.config.batch_size
        with session.lock:
            fresh = not session.pending
            try:
                ids = session.next_query(n)
            except PendingConflict as exc:
                raise HTTPException(409, str(exc))
            except PoolExhausted as exc:
                raise HTTPException(410, str(exc))
            if fresh:
                log.append(session_id, {"event": "query", "ids": ids})
            rows = []
            proba = session.learner.model.predict_proba(session.X[ids])
            for i, row_id in enumerate(ids):
                rows.append({
                    "id": row_id,
                    "features": [float(v) for v in session.X[row_id]],
                    "proba": [float(v) for v in np.asarray(proba)[i]],
                })
        return {"rows": rows}

    @app.post("/sessions/{session_id}/labels")
    def submit_labels(session_id: str, batch: LabelBatch):
        session = get(session_id)
        with session.lock:
            pairs = [(item.id, item.label) for item in batch.labels]
            try:
                session.submit_labels(pairs)
            except PendingConflict as exc:
                raise HTTPException(409, str(exc))
            except ValueError as exc:
                raise HTTPException(400, str(exc))
            log.append(session_id, {"event": "label", "labels": pairs})
            return session.metrics()

    @app.delete("/sessions/{session_id}/pending")
    def cancel_pending(session_id: str):
        session = get(session_id)
        with session.lock:
            session.cancel_pending()
            log.append(session_id, {"event": "cancel"})
        return {"pool_remaining": len(session.available)}

    @app.get("/sessions/{session_id}/metrics")
    def get_metrics(session_id: str):
        return get(session_id).metrics()

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app


def main(argv=None):
    import click
    import uvicorn

    @click.command()
    @click.option("--port", default=8000, show_default=True, type=int)
    @click.option("--bind", default="127.0.0.1", show_default=True)
    @click.option("--data-dir", default=None, help=f"defaults to ${DATA_DIR_ENV}")
    @click.option("--static-dir", default=None, help="frontend assets to serve at /")
    def serve(port, bind, data_dir, static_dir):
        """Run the annotation HTTP service."""
        uvicorn.run(create_app(data_dir=data_dir, static_dir=static_dir),
                    host=bind, port=port)

    serve.main(args=argv)


if __name__ == "__main__":
    main()
