"""End-to-end session orchestration: parse, re-rank, read-back generation,
error insertion, rendering and append-only JSONL logging.
"""

from __future__ import annotations

import json
import random
import threading
import time
import uuid
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import responder
from .parser import EntityParser, PhraseologyGrammar, render_tagged
from .phraseology import AirlineDesignatorTable, SpokenCallsign, normalize
from .resolver import EditCosts, load_surveillance, rerank
from .responder import (
    NoApplicableKind,
    NullSink,
    SinkTimeout,
    SinkUnavailable,
    apply_word_fixer,
    convert_grammar,
    insert_readback_error,
    load_rules,
    render_readback,
    send_to_tts,
)

POSITIONS = ("GROUND", "TOWER", "APPROACH", "AREA")


class ConfigError(ValueError):
    def __init__(self, fieldname: str, detail: str = ""):
        super().__init__(f"{fieldname}: {detail}" if detail else fieldname)
        self.field = fieldname


class UnknownSession(KeyError):
    pass


class MalformedRecord(ValueError):
    def __init__(self, lineno: int, detail: str):
        super().__init__(f"line {lineno}: {detail}")
        self.lineno = lineno


def default_data_path(name: str) -> Path:
    return Path(resources.files("simpilot") / "data" / name)


@dataclass
class ExerciseConfig:
    surveillance_path: str
    rules_path: str = ""
    grammar_path: str = ""
    designator_table_path: str = ""
    rbe_probability: float = 0.0
    rbe_kinds: tuple[str, ...] = responder.RBE_KINDS
    seed: int = 0
    rerank_threshold: float = 0.5
    position: str = "APPROACH"
    log_path: str = ""

    def __post_init__(self):
        if not self.rules_path:
            self.rules_path = str(default_data_path("rules.txt"))
        if not self.grammar_path:
            self.grammar_path = str(default_data_path("grammar.txt"))
        if not self.designator_table_path:
            self.designator_table_path = str(default_data_path("designators.txt"))

    @classmethod
    def from_file(cls, path) -> "ExerciseConfig":
        text = Path(path).read_text(encoding="utf-8")
        if text.lstrip().startswith("{"):
            raw = json.loads(text)
        else:
            raw = {}
            for line in text.splitlines():
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, value = line.partition("=")
                raw[key.strip()] = value.strip()
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExerciseConfig":
        kwargs = dict(raw)
        if "rbe_probability" in kwargs:
            kwargs["rbe_probability"] = float(kwargs["rbe_probability"])
        if "rerank_threshold" in kwargs:
            kwargs["rerank_threshold"] = float(kwargs["rerank_threshold"])
        if "seed" in kwargs:
            kwargs["seed"] = int(kwargs["seed"])
        if "rbe_kinds" in kwargs:
            kinds = kwargs["rbe_kinds"]
            if isinstance(kinds, str):
                kinds = [k for k in kinds.replace(",", " ").split() if k]
            kwargs["rbe_kinds"] = tuple(kinds)
        unknown = set(kwargs) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown config field")
        return cls(**kwargs)

    def validate(self) -> None:
        if not 0.0 <= self.rbe_probability <= 1.0:
            raise ConfigError("rbe_probability", f"out of range: {self.rbe_probability}")
        if not 0.0 <= self.rerank_threshold <= 1.0:
            raise ConfigError("rerank_threshold", f"out of range: {self.rerank_threshold}")
        if self.position not in POSITIONS:
            raise ConfigError("position", f"must be one of {POSITIONS}")
        for kind in self.rbe_kinds:
            if kind not in responder.RBE_KINDS:
                raise ConfigError("rbe_kinds", f"unknown kind {kind}")
        for fieldname in (
            "surveillance_path",
            "rules_path",
            "grammar_path",
            "designator_table_path",
        ):
            path = getattr(self, fieldname)
            if not path or not Path(path).is_file():
                raise ConfigError(fieldname, f"not a readable file: {path!r}")


@dataclass(frozen=True)
class PilotResponse:
    text: str
    entities: str
    rbe_inserted: bool
    resolved_callsign: str | None
    resolved_cost: float | None = None
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "entities": self.entities,
            "rbe_inserted": self.rbe_inserted,
            "resolved_callsign": self.resolved_callsign,
            "resolved_cost": self.resolved_cost,
            "warnings": list(self.warnings),
        }


RECORD_FIELDS = (
    "session_id",
    "step_index",
    "atco_text",
    "parsed",
    "resolved_callsign",
    "resolved_cost",
    "pilot_text",
    "rbe",
    "rbe_inserted",
    "no_callsign",
    "timestamp",
)


class Session:
    """One training exercise: frozen assets, a seeded generator and an
    append-only JSONL log. Steps are serialized by a per-session lock."""

    def __init__(self, session_id: str, config: ExerciseConfig, clock=None, sink=None):
        config.validate()
        self.session_id = session_id
        self.config = config
        self.clock = clock or time.time
        self.sink = sink or NullSink()
        self.table = AirlineDesignatorTable.load(config.designator_table_path)
        self.grammar = PhraseologyGrammar.load(config.grammar_path)
        self.rules = load_rules(config.rules_path)
        self.snapshot = load_surveillance(config.surveillance_path)
        self.parser = EntityParser(self.grammar, self.table)
        self.costs = EditCosts()
        self.rng = random.Random(config.seed)
        self.records: list[dict] = []
        self.closed = False
        self._lock = threading.Lock()
        self._log_path = Path(config.log_path) if config.log_path else None
        if self._log_path:
            self._log_path.parent.mkdir(parents=True, exist_ok=True)
            self._log_path.write_text("")

    def step(self, atco_text: str) -> PilotResponse:
        with self._lock:
            return self._step_locked(atco_text)

    def _step_locked(self, atco_text: str) -> PilotResponse:
        warnings: list[str] = []
        utterance = normalize(atco_text, source_id=self.session_id)
        parsed = self.parser.parse(utterance)
        entities = render_tagged(parsed)

        resolved = None
        resolved_cost = None
        if parsed.callsign is not None:
            extracted = SpokenCallsign(parsed.callsign.words(utterance))
            matches = rerank(extracted, self.snapshot, self.table, self.costs)
            best = matches[0]
            if best.normalized_cost <= self.config.rerank_threshold:
                resolved = best.candidate.value
                resolved_cost = best.cost
            else:
                warnings.append(
                    f"no surveillance candidate within threshold "
                    f"(best {best.candidate.value} at {best.normalized_cost:.2f})"
                )
        # NO_CALLSIGN skips re-ranking entirely

        plan = convert_grammar(parsed)
        plan = apply_word_fixer(plan, self.rules)
        inserted = False
        if self.config.rbe_probability > 0:
            try:
                plan, inserted = insert_readback_error(
                    plan,
                    self.config.rbe_probability,
                    self.rng,
                    self.config.rbe_kinds,
                )
            except NoApplicableKind:
                warnings.append("read-back error drawn but no kind applicable")
        text = render_readback(plan)
        if not text:
            warnings.append("no entities recognized; empty read-back")
        else:
            try:
                send_to_tts(text, self.sink)
            except (SinkUnavailable, SinkTimeout) as exc:
                warnings.append(f"tts sink failed: {exc}")
        warnings.extend(plan.warnings)

        record = {
            "session_id": self.session_id,
            "step_index": len(self.records),
            "atco_text": atco_text,
            "parsed": entities,
            "resolved_callsign": resolved,
            "resolved_cost": resolved_cost,
            "pilot_text": text,
            "rbe": (
                {
                    "kind": plan.rbe.kind,
                    "original": plan.rbe.original,
                    "replacement": plan.rbe.replacement,
                }
                if plan.rbe
                else None
            ),
            "rbe_inserted": inserted,
            "no_callsign": parsed.no_callsign,
            "timestamp": self.clock(),
        }
        self.records.append(record)
        if self._log_path:
            with open(self._log_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
        return PilotResponse(
            text=text,
            entities=entities,
            rbe_inserted=inserted,
            resolved_callsign=resolved,
            resolved_cost=resolved_cost,
            warnings=tuple(warnings),
        )

    def summary(self) -> dict:
        return {
            "steps": len(self.records),
            "rbe_count": sum(1 for r in self.records if r["rbe_inserted"]),
            "no_callsign_count": sum(1 for r in self.records if r["no_callsign"]),
        }


class Engine:
    """Holds concurrent sessions; ids are opaque and unique."""

    def __init__(self, clock=None, id_factory=None, sink_factory=None):
        self.clock = clock
        self.id_factory = id_factory or (lambda: uuid.uuid4().hex)
        self.sink_factory = sink_factory or (lambda config: NullSink())
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def start_session(self, config: ExerciseConfig) -> str:
        session_id = self.id_factory()
        session = Session(
            session_id, config, clock=self.clock, sink=self.sink_factory(config)
        )
        with self._lock:
            self.sessions[session_id] = session
        return session_id

    def get(self, session_id: str) -> Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise UnknownSession(session_id) from None

    def step(self, session_id: str, atco_text: str) -> PilotResponse:
        return self.get(session_id).step(atco_text)

    def end_session(self, session_id: str) -> dict:
        with self._lock:
            session = self.get(session_id)
            del self.sessions[session_id]
        session.closed = True
        return session.summary()


def replay(log_path) -> list[dict]:
    """Read a session JSONL log back, validating the record schema."""
    records = []
    with open(log_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(lineno, f"bad JSON: {exc}") from exc
            missing = set(RECORD_FIELDS) - set(record)
            if missing:
                raise MalformedRecord(lineno, f"missing fields: {sorted(missing)}")
            records.append(record)
    return records
