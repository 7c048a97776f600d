"""Stateful profiling sessions: profile, target, repair, preview, export.

A session owns one column of rows and the artifacts derived from it: the
pattern hierarchy, the labeled target, the synthesized program, and the
repair history.  The store keeps sessions in memory and, when given a
directory, persists the raw inputs (rows, column, target, history) as JSON;
derived state is deterministic, so loading a session replays profiling,
synthesis, and repairs instead of serializing them.

All mutation and rendering goes through per-session re-entrant locks, so the
HTTP layer can serve concurrent requests without torn state.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .patterns import (
    Pattern,
    PatternSyntaxError,
    parse_pattern,
    pattern_matches,
    render_pattern,
)
from .profiler import (
    PatternHierarchy,
    build_hierarchy,
    find_node,
    hierarchy_to_json,
    tokenize,
)
from .programs import eval_plan, explain, program_dumps
from .synthesis import SynthesisResult, repair as repair_result, result_to_json, synthesize

log = logging.getLogger(__name__)

MAX_ROWS = 1_000_000
PREVIEW_LIMIT = 20
EXPORT_FORMATS = ("script", "transformed-data", "program-json")


class SessionError(Exception):
    """Request-level failure; ``http_status`` hints the transport layer."""

    http_status = 400
    code = "bad_request"


class UnknownSession(SessionError):
    http_status = 404
    code = "unknown_session"


class NoTargetSet(SessionError):
    code = "no_target"


@dataclass
class Session:
    session_id: str
    column: str
    rows: list[str]
    hierarchy: PatternHierarchy
    k: int = 5
    target: "Pattern | None" = None
    result: "SynthesisResult | None" = None
    history: list[dict] = field(default_factory=list)
    lock: threading.RLock = field(
        default_factory=threading.RLock, repr=False, compare=False
    )


class SessionStore:
    """Create, look up, mutate, and persist sessions."""

    def __init__(self, directory: "str | Path | None" = None):
        self._dir = Path(directory) if directory is not None else None
        self._sessions: dict[str, Session] = {}
        self._registry_lock = threading.Lock()
        if self._dir is not None:
            self._dir.mkdir(parents=True, exist_ok=True)
            self._load_all()

    # -- lifecycle ----------------------------------------------------------

    def create(self, rows: Sequence[str], column: str = "column1") -> Session:
        rows = list(rows)
        if not rows:
            raise SessionError("empty payload: no rows to profile")
        if len(rows) > MAX_ROWS:
            raise SessionError(
                f"row count {len(rows)} exceeds the {MAX_ROWS} row limit"
            )
        if any(not isinstance(r, str) for r in rows):
            raise SessionError("rows must all be strings")
        if any("\n" in r or "\r" in r for r in rows):
            raise SessionError("rows must not contain line breaks")
        session = Session(
            session_id=uuid.uuid4().hex,
            column=column or "column1",
            rows=rows,
            hierarchy=build_hierarchy(rows),
        )
        with self._registry_lock:
            self._sessions[session.session_id] = session
        self._save(session)
        return session

    def get(self, session_id: str) -> Session:
        with self._registry_lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no session with id {session_id!r}")
        return session

    def ids(self) -> list[str]:
        with self._registry_lock:
            return sorted(self._sessions)

    # -- operations ---------------------------------------------------------

    def hierarchy_json(self, session_id: str) -> dict:
        session = self.get(session_id)
        with session.lock:
            doc = hierarchy_to_json(session.hierarchy, session.rows)
            doc.update(
                session_id=session.session_id,
                column=session.column,
                row_count=len(session.rows),
            )
            return doc

    def set_target(
        self,
        session_id: str,
        pattern_text: "str | None" = None,
        cluster_id: "str | None" = None,
        k: int = 5,
    ) -> dict:
        """Label the target by pattern text or by hierarchy node id."""
        session = self.get(session_id)
        if (pattern_text is None) == (cluster_id is None):
            raise SessionError("provide exactly one of pattern or cluster_id")
        if k < 1:
            raise SessionError(f"k must be at least 1, got {k}")
        with session.lock:
            if cluster_id is not None:
                node = find_node(session.hierarchy, cluster_id)
                if node is None:
                    raise SessionError(f"unknown cluster id {cluster_id!r}")
                target = node.pattern
            else:
                try:
                    target = parse_pattern(pattern_text)
                except PatternSyntaxError as exc:
                    raise SessionError(f"bad target pattern: {exc}") from exc
            session.target = target
            session.k = k
            session.result = synthesize(session.hierarchy, target, k)
            session.history = []
            self._save(session)
            return self.program_json(session_id)

    def program_json(self, session_id: str) -> dict:
        session = self.get(session_id)
        with session.lock:
            result = self._require_result(session)
            doc = result_to_json(result, column=session.column, rows=session.rows)
            doc["session_id"] = session.session_id
            return doc

    def repair(self, session_id: str, source_text: str, index: int) -> dict:
        session = self.get(session_id)
        try:
            source = parse_pattern(source_text)
        except PatternSyntaxError as exc:
            raise SessionError(f"bad source pattern: {exc}") from exc
        with session.lock:
            result = self._require_result(session)
            try:
                session.result = repair_result(result, source, index)
            except ValueError as exc:
                raise SessionError(str(exc)) from exc
            session.history.append({"source": source_text, "index": index})
            self._save(session)
            return self.program_json(session_id)

    def preview(
        self,
        session_id: str,
        limit: int = PREVIEW_LIMIT,
        branch: "int | None" = None,
    ) -> dict:
        """Up to ``limit`` sample rows from every bucket the program produces.

        Buckets are one per program branch plus the already-conforming and
        unmatched rows; passing ``branch`` narrows the samples to that one
        branch.  Status counts always cover the whole column, so the preview
        header stays honest even when entries are truncated.
        """
        session = self.get(session_id)
        if limit < 0:
            raise SessionError(f"limit must be non-negative, got {limit}")
        with session.lock:
            result = self._require_result(session)
            program = result.program
            if branch is not None and not 0 <= branch < len(program.branches):
                raise SessionError(
                    f"branch index {branch} out of range "
                    f"({len(program.branches)} branches)"
                )
            entries = []
            taken: dict = {}
            counts = {"transformed": 0, "unmatched": 0, "already_conforming": 0}
            for row_id, row in enumerate(session.rows):
                output, status, branch_index = _eval_detailed(program, result.target, row)
                counts[status] += 1
                if branch is not None and branch_index != branch:
                    continue
                bucket = (status, branch_index)
                if taken.get(bucket, 0) >= limit:
                    continue
                taken[bucket] = taken.get(bucket, 0) + 1
                entries.append(
                    {
                        "row": row_id,
                        "before": row,
                        "after": output,
                        "status": status,
                        "branch": branch_index,
                    }
                )
            return {
                "session_id": session.session_id,
                "column": session.column,
                "entries": entries,
                "counts": counts,
                "row_count": len(session.rows),
            }

    def export(self, session_id: str, fmt: str) -> tuple[str, str]:
        """Render an artifact; returns ``(media_type, body)``."""
        session = self.get(session_id)
        if fmt not in EXPORT_FORMATS:
            raise SessionError(
                f"unknown export format {fmt!r}; expected one of {', '.join(EXPORT_FORMATS)}"
            )
        with session.lock:
            result = self._require_result(session)
            program = result.program
            if fmt == "script":
                lines = [
                    op.render() for op in explain(program, column=session.column)
                ]
                return "text/plain", "".join(line + "\n" for line in lines)
            if fmt == "transformed-data":
                buf = io.StringIO()
                writer = csv.writer(buf, lineterminator="\n")
                writer.writerow([session.column, "status"])
                for row in session.rows:
                    output, status, _ = _eval_detailed(program, result.target, row)
                    writer.writerow([output, status])
                return "text/csv", buf.getvalue()
            return "application/json", program_dumps(program, result.target) + "\n"

    # -- internals ----------------------------------------------------------

    @staticmethod
    def _require_result(session: Session) -> SynthesisResult:
        if session.result is None:
            raise NoTargetSet(
                f"session {session.session_id} has no target pattern yet"
            )
        return session.result

    def _save(self, session: Session) -> None:
        if self._dir is None:
            return
        doc = {
            "session_id": session.session_id,
            "column": session.column,
            "k": session.k,
            "rows": session.rows,
            "target": render_pattern(session.target) if session.target else None,
            "history": session.history,
        }
        path = self._dir / f"{session.session_id}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(doc), encoding="utf-8")
        tmp.replace(path)

    def _load_all(self) -> None:
        for path in sorted(self._dir.glob("*.json")):
            try:
                doc = json.loads(path.read_text(encoding="utf-8"))
                session = Session(
                    session_id=doc["session_id"],
                    column=doc.get("column") or "column1",
                    rows=list(doc["rows"]),
                    hierarchy=build_hierarchy(doc["rows"]),
                    k=doc.get("k", 5),
                    history=[],
                )
                if doc.get("target"):
                    session.target = parse_pattern(doc["target"])
                    session.result = synthesize(
                        session.hierarchy, session.target, session.k
                    )
                    for step in doc.get("history", ()):
                        session.result = repair_result(
                            session.result,
                            parse_pattern(step["source"]),
                            step["index"],
                        )
                        session.history.append(dict(step))
            except Exception:
                log.warning("skipping unreadable session file %s", path, exc_info=True)
                continue
            self._sessions[session.session_id] = session


def _eval_detailed(
    program, target: "Pattern | None", row: str
) -> tuple[str, str, "int | None"]:
    """Evaluate one row, also reporting which branch (if any) handled it."""
    ts = tokenize(row)
    for branch_index, (predicate, plan) in enumerate(program.branches):
        if predicate.matches(row):
            return (
                eval_plan(plan, ts, predicate.pattern),
                "transformed",
                branch_index,
            )
    if target is not None and pattern_matches(target, row):
        return row, "already_conforming", None
    return row, "unmatched", None
