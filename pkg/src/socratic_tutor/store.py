"""File-backed persistence.

Layout under one root directory:

    scenarios/<id>.json      spec + generated KCs + question matrix
    sessions/<id>.jsonl      header record, then one record per turn
    surveys/responses.csv    participant_id,q1..q10 (scores 1-7)
    surveys/open/<id>.json   open-question text for one CSV row

Scenario documents are written to a temp file and renamed into place, so a
reader never sees a half-written document. Session transcripts are append-
only; each appended line is flushed before the call returns, and loading
tolerates a torn final line so a crash mid-append loses at most that line.
"""

from __future__ import annotations

import csv
import json
import os
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from .analytics import QUESTION_IDS, SurveyResponse
from .dialogue import DialogueSession, SessionConfig, SessionStatus, Turn, WhEntry
from .errors import CorruptRecord, UnknownSession
from .extraction import KnowledgeComponent
from .scenario import ScenarioMatrix, ScenarioSpec

_CSV_HEADER = ["participant_id", *QUESTION_IDS]


@dataclass
class ScenarioRecord:
    id: str
    spec: ScenarioSpec
    kcs: tuple = ()
    matrix: ScenarioMatrix | None = None
    created_at: str = ""


class Store:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.scenarios_dir = self.root / "scenarios"
        self.sessions_dir = self.root / "sessions"
        self.surveys_dir = self.root / "surveys"
        self.open_dir = self.surveys_dir / "open"
        for directory in (self.scenarios_dir, self.sessions_dir, self.open_dir):
            directory.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._session_locks: dict[str, threading.Lock] = {}

    def _session_lock(self, session_id: str) -> threading.Lock:
        with self._lock:
            return self._session_locks.setdefault(session_id, threading.Lock())

    # -- scenarios --------------------------------------------------------

    def _write_json_atomic(self, path: Path, doc: dict) -> None:
        tmp = path.with_name(f".{path.name}.{uuid.uuid4().hex}.tmp")
        tmp.write_text(json.dumps(doc, indent=2), encoding="utf-8")
        os.replace(tmp, path)

    def _scenario_doc(self, record: ScenarioRecord) -> dict:
        doc = {
            "id": record.id,
            "created_at": record.created_at,
            "spec": record.spec.to_json_dict(),
            "kcs": [kc.to_json_dict() for kc in record.kcs],
        }
        if record.matrix is not None:
            doc["matrix"] = record.matrix.to_json_dict()
        return doc

    def save_scenario(
        self,
        spec: ScenarioSpec,
        matrix: ScenarioMatrix | None = None,
        kcs=(),
    ) -> str:
        scenario_id = str(uuid.uuid4())
        record = ScenarioRecord(
            id=scenario_id,
            spec=spec,
            kcs=tuple(kcs),
            matrix=matrix,
            created_at=datetime.now().astimezone().isoformat(),
        )
        with self._lock:
            self._write_json_atomic(self.scenarios_dir / f"{scenario_id}.json", self._scenario_doc(record))
        return scenario_id

    def update_scenario(self, scenario_id: str, *, kcs=None, matrix=None) -> ScenarioRecord:
        record = self.load_scenario(scenario_id)
        if kcs is not None:
            record.kcs = tuple(kcs)
        if matrix is not None:
            record.matrix = matrix
        with self._lock:
            self._write_json_atomic(self.scenarios_dir / f"{scenario_id}.json", self._scenario_doc(record))
        return record

    def load_scenario(self, scenario_id: str) -> ScenarioRecord:
        path = self.scenarios_dir / f"{scenario_id}.json"
        if not path.is_file():
            raise UnknownSession(f"no scenario {scenario_id!r}")
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
            matrix = ScenarioMatrix.from_json_dict(doc["matrix"]) if "matrix" in doc else None
            return ScenarioRecord(
                id=doc["id"],
                spec=ScenarioSpec.from_json_dict(doc["spec"]),
                kcs=tuple(KnowledgeComponent.from_json_dict(d) for d in doc.get("kcs", ())),
                matrix=matrix,
                created_at=doc.get("created_at", ""),
            )
        except (ValueError, KeyError, TypeError) as exc:
            raise CorruptRecord(f"scenario {scenario_id!r}: {exc}") from exc

    def list_scenarios(self) -> list[ScenarioRecord]:
        records = []
        for path in sorted(self.scenarios_dir.glob("*.json")):
            records.append(self.load_scenario(path.stem))
        records.sort(key=lambda r: r.created_at)
        return records

    # -- sessions ---------------------------------------------------------

    def _session_path(self, session_id: str) -> Path:
        return self.sessions_dir / f"{session_id}.jsonl"

    def _append_line(self, session_id: str, doc: dict) -> None:
        path = self._session_path(session_id)
        if not path.is_file():
            raise UnknownSession(f"no session {session_id!r}")
        with self._session_lock(session_id):
            with path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(doc) + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def create_session(self, session: DialogueSession) -> None:
        """Write the header record. Turns are appended separately."""
        header = {
            "record": "header",
            "session_id": session.id,
            "created_at": session.created_at.isoformat(),
            "spec": session.spec.to_json_dict(),
            "kc": session.kc.to_json_dict(),
            "wh_entry": {"wh": session.wh_entry.wh, "question": session.wh_entry.question},
            "config": {
                "max_turns": session.config.max_turns,
                "expected_answer": session.config.expected_answer,
                "policy_id": session.config.policy_id,
            },
        }
        path = self._session_path(session.id)
        with self._session_lock(session.id):
            with path.open("w", encoding="utf-8") as fh:
                fh.write(json.dumps(header) + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def append_turn(self, session_id: str, turn: Turn, state_after=None) -> None:
        doc = turn.to_record()
        if state_after is not None:
            doc["state_after"] = state_after.to_json_dict()
        self._append_line(session_id, doc)

    def append_end(self, session_id: str, summary: str) -> None:
        self._append_line(
            session_id,
            {"record": "end", "summary": summary, "ended_at": datetime.now().astimezone().isoformat()},
        )

    def session_ids(self) -> list[str]:
        return sorted(path.stem for path in self.sessions_dir.glob("*.jsonl"))

    def read_session_records(self, session_id: str) -> list[dict]:
        """Raw parsed records, torn final line dropped. For replay tooling."""
        path = self._session_path(session_id)
        if not path.is_file():
            raise UnknownSession(f"no session {session_id!r}")
        lines = path.read_text(encoding="utf-8").splitlines()
        records = []
        for position, line in enumerate(lines):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                if position == len(lines) - 1:
                    break  # torn tail from an interrupted append
                raise CorruptRecord(f"session {session_id!r} line {position + 1}: {exc}") from exc
        return records

    def load_session(self, session_id: str) -> DialogueSession:
        """Rebuild a session by replaying its records through the live
        state-update rules. Out-of-order or malformed interior records raise
        CorruptRecord; a truncated tail simply yields fewer turns."""
        records = self.read_session_records(session_id)
        if not records or records[0].get("record") != "header":
            raise CorruptRecord(f"session {session_id!r} has no header record")
        header = records[0]
        try:
            config_doc = header.get("config", {})
            session = DialogueSession(
                id=header["session_id"],
                spec=ScenarioSpec.from_json_dict(header["spec"]),
                kc=KnowledgeComponent.from_json_dict(header["kc"]),
                wh_entry=WhEntry(
                    wh=header["wh_entry"]["wh"], question=header["wh_entry"]["question"]
                ),
                config=SessionConfig(
                    max_turns=int(config_doc.get("max_turns", 30)),
                    expected_answer=config_doc.get("expected_answer"),
                    policy_id=config_doc.get("policy_id", "socratic-policy-v1"),
                ),
                created_at=datetime.fromisoformat(header["created_at"]),
            )
        except (ValueError, KeyError, TypeError) as exc:
            raise CorruptRecord(f"session {session_id!r} header: {exc}") from exc

        ended_summary: str | None = None
        for doc in records[1:]:
            kind = doc.get("record")
            if kind == "end":
                ended_summary = str(doc.get("summary", ""))
                continue
            if kind != "turn":
                raise CorruptRecord(f"session {session_id!r}: unknown record {kind!r}")
            if ended_summary is not None:
                raise CorruptRecord(f"session {session_id!r}: turn after end record")
            try:
                session.append(Turn.from_record(doc))
            except ValueError as exc:
                raise CorruptRecord(f"session {session_id!r}: {exc}") from exc
        if ended_summary is not None:
            session.state.status = SessionStatus.ENDED
            session.summary = ended_summary
        return session

    # -- surveys ----------------------------------------------------------

    @property
    def survey_csv(self) -> Path:
        return self.surveys_dir / "responses.csv"

    def save_survey(self, response: SurveyResponse) -> str:
        response_id = str(uuid.uuid4())
        with self._lock:
            new_file = not self.survey_csv.is_file()
            row_index = 0
            if not new_file:
                with self.survey_csv.open("r", encoding="utf-8", newline="") as fh:
                    row_index = max(sum(1 for _ in fh) - 1, 0)
            with self.survey_csv.open("a", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                if new_file:
                    writer.writerow(_CSV_HEADER)
                writer.writerow(
                    [response.participant_id, *[getattr(response, q) for q in QUESTION_IDS]]
                )
                fh.flush()
            sidecar = {
                "id": response_id,
                "participant_id": response.participant_id,
                "row": row_index,
                "q11": response.q11,
                "q12": response.q12,
            }
            self._write_json_atomic(self.open_dir / f"{response_id}.json", sidecar)
        return response_id

    def load_surveys(self) -> list[SurveyResponse]:
        if not self.survey_csv.is_file():
            return []
        sidecars: dict[int, dict] = {}
        for path in self.open_dir.glob("*.json"):
            try:
                doc = json.loads(path.read_text(encoding="utf-8"))
                sidecars[int(doc["row"])] = doc
            except (ValueError, KeyError, TypeError) as exc:
                raise CorruptRecord(f"survey sidecar {path.name}: {exc}") from exc

        responses = []
        with self.survey_csv.open("r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != _CSV_HEADER:
                raise CorruptRecord(f"survey csv header is {reader.fieldnames!r}")
            for row_index, row in enumerate(reader):
                open_doc = sidecars.get(row_index, {})
                try:
                    responses.append(
                        SurveyResponse(
                            participant_id=row["participant_id"],
                            q11=str(open_doc.get("q11", "")),
                            q12=str(open_doc.get("q12", "")),
                            response_id=str(open_doc.get("id", f"row-{row_index}")),
                            **{q: int(row[q]) for q in QUESTION_IDS},
                        )
                    )
                except (ValueError, TypeError) as exc:
                    raise CorruptRecord(f"survey csv row {row_index + 1}: {exc}") from exc
        return responses
