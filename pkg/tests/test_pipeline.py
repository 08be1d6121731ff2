import itertools
import json

import pytest

from simpilot.pipeline import (
    ConfigError,
    Engine,
    ExerciseConfig,
    MalformedRecord,
    Session,
    UnknownSession,
    replay,
)

FIG3 = "ryanair nine two bravo quebec turn right heading zero nine zero"


@pytest.fixture
def surveillance(tmp_path):
    path = tmp_path / "radar.txt"
    path.write_text("#timestamp=1700000000\nRYR92BQ\nAUA392P\nDLH6LY\n")
    return path


@pytest.fixture
def config(surveillance, tmp_path):
    return ExerciseConfig(
        surveillance_path=str(surveillance),
        rbe_probability=0.0,
        seed=1234,
        log_path=str(tmp_path / "session.jsonl"),
    )


def logical_clock():
    counter = itertools.count()
    return lambda: float(next(counter))


class TestConfig:
    def test_valid(self, config):
        config.validate()

    def test_bad_surveillance_path(self, config):
        config.surveillance_path = "/does/not/exist"
        with pytest.raises(ConfigError) as err:
            config.validate()
        assert err.value.field == "surveillance_path"

    def test_bad_probability(self, config):
        config.rbe_probability = 1.5
        with pytest.raises(ConfigError) as err:
            config.validate()
        assert err.value.field == "rbe_probability"

    def test_bad_kind(self, config):
        config.rbe_kinds = ("NOT_A_KIND",)
        with pytest.raises(ConfigError) as err:
            config.validate()
        assert err.value.field == "rbe_kinds"

    def test_from_json_file(self, surveillance, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({
            "surveillance_path": str(surveillance),
            "rbe_probability": 0.25,
            "seed": 7,
        }))
        config = ExerciseConfig.from_file(path)
        assert config.rbe_probability == 0.25
        assert config.seed == 7
        config.validate()

    def test_from_keyvalue_file(self, surveillance, tmp_path):
        path = tmp_path / "config.txt"
        path.write_text(
            f"surveillance_path={surveillance}\n"
            "rbe_probability=0.5\n"
            "rbe_kinds=DIRECTION_FLIP VALUE_DIGIT_SWAP\n"
            "position=TOWER\n"
        )
        config = ExerciseConfig.from_file(path)
        assert config.rbe_kinds == ("DIRECTION_FLIP", "VALUE_DIGIT_SWAP")
        assert config.position == "TOWER"
        config.validate()

    def test_unknown_field(self, surveillance):
        with pytest.raises(ConfigError):
            ExerciseConfig.from_dict({
                "surveillance_path": str(surveillance),
                "frequency": 121.5,
            })


class TestSession:
    def test_fig3_step(self, config):
        engine = Engine(clock=logical_clock())
        session_id = engine.start_session(config)
        response = engine.step(session_id, FIG3)
        assert response.text == (
            "heading right zero nine zero ryanair nine two bravo quebec"
        )
        assert not response.rbe_inserted
        assert response.resolved_callsign == "RYR92BQ"
        assert response.resolved_cost == 0

    def test_greeting_empty_readback(self, config):
        engine = Engine(clock=logical_clock())
        session_id = engine.start_session(config)
        response = engine.step(session_id, "good morning")
        assert response.text == ""
        assert any("no entities" in w for w in response.warnings)

    def test_no_callsign_skips_rerank(self, config):
        engine = Engine(clock=logical_clock())
        session_id = engine.start_session(config)
        response = engine.step(session_id, "turn right heading zero nine zero")
        assert response.resolved_callsign is None
        assert engine.get(session_id).records[-1]["no_callsign"]

    def test_shortened_callsign_resolved(self, config):
        engine = Engine(clock=logical_clock())
        session_id = engine.start_session(config)
        response = engine.step(session_id, "six lima yankee descend flight level one two zero")
        assert response.resolved_callsign == "DLH6LY"

    def test_step_appends_one_record(self, config):
        engine = Engine(clock=logical_clock())
        session_id = engine.start_session(config)
        for i, text in enumerate([FIG3, "good morning", FIG3], 1):
            engine.step(session_id, text)
            assert len(engine.get(session_id).records) == i
        log_lines = open(config.log_path).read().splitlines()
        assert len(log_lines) == 3

    def test_end_session_summary(self, config):
        engine = Engine(clock=logical_clock())
        session_id = engine.start_session(config)
        engine.step(session_id, FIG3)
        engine.step(session_id, "turn left heading one two zero")
        summary = engine.end_session(session_id)
        assert summary == {"steps": 2, "rbe_count": 0, "no_callsign_count": 1}
        with pytest.raises(UnknownSession):
            engine.end_session(session_id)

    def test_immediate_end(self, config):
        engine = Engine()
        session_id = engine.start_session(config)
        assert engine.end_session(session_id) == {
            "steps": 0, "rbe_count": 0, "no_callsign_count": 0,
        }

    def test_unknown_session(self, config):
        engine = Engine()
        with pytest.raises(UnknownSession):
            engine.step("nope", FIG3)

    def test_rbe_session(self, surveillance, tmp_path):
        config = ExerciseConfig(
            surveillance_path=str(surveillance),
            rbe_probability=1.0,
            rbe_kinds=("DIRECTION_FLIP",),
            seed=99,
            log_path=str(tmp_path / "rbe.jsonl"),
        )
        engine = Engine(clock=logical_clock())
        session_id = engine.start_session(config)
        response = engine.step(session_id, FIG3)
        assert response.rbe_inserted
        assert "heading left" in response.text
        record = engine.get(session_id).records[0]
        assert record["rbe"]["kind"] == "DIRECTION_FLIP"

    def test_rbe_not_applicable_flagged(self, surveillance, tmp_path):
        config = ExerciseConfig(
            surveillance_path=str(surveillance),
            rbe_probability=1.0,
            rbe_kinds=("VALUE_DIGIT_SWAP",),
            seed=99,
            log_path="",
        )
        engine = Engine(clock=logical_clock())
        session_id = engine.start_session(config)
        response = engine.step(session_id, "ryanair nine two bravo quebec squawk ident")
        assert not response.rbe_inserted
        assert any("no kind applicable" in w for w in response.warnings)

    def test_determinism_two_runs(self, surveillance, tmp_path):
        script = [FIG3, "six lima yankee descend flight level one two zero",
                  "good morning", "turn left heading three four zero"] * 5
        logs = []
        for run in range(2):
            log_path = tmp_path / f"run{run}.jsonl"
            config = ExerciseConfig(
                surveillance_path=str(surveillance),
                rbe_probability=0.5,
                seed=4321,
                log_path=str(log_path),
            )
            engine = Engine(clock=logical_clock(), id_factory=lambda: "fixed")
            session_id = engine.start_session(config)
            for text in script:
                engine.step(session_id, text)
            logs.append(log_path.read_bytes())
        assert logs[0] == logs[1]

    def test_session_isolation(self, surveillance, tmp_path):
        def make_config(name):
            return ExerciseConfig(
                surveillance_path=str(surveillance),
                rbe_probability=0.5,
                seed=555,
                log_path=str(tmp_path / f"{name}.jsonl"),
            )

        script = [FIG3, "turn left heading one two zero", "good morning"]
        # serial execution
        engine = Engine(clock=logical_clock(), id_factory=iter(["a", "b"]).__next__)
        a = engine.start_session(make_config("serial_a"))
        b = engine.start_session(make_config("serial_b"))
        serial_a = [engine.step(a, t).to_dict() for t in script]
        serial_b = [engine.step(b, t).to_dict() for t in script]
        # interleaved execution
        engine = Engine(clock=logical_clock(), id_factory=iter(["a", "b"]).__next__)
        a = engine.start_session(make_config("inter_a"))
        b = engine.start_session(make_config("inter_b"))
        inter_a, inter_b = [], []
        for text in script:
            inter_a.append(engine.step(a, text).to_dict())
            inter_b.append(engine.step(b, text).to_dict())
        assert serial_a == inter_a
        assert serial_b == inter_b


class TestReplay:
    def test_roundtrip(self, config):
        engine = Engine(clock=logical_clock())
        session_id = engine.start_session(config)
        for text in (FIG3, "good morning"):
            engine.step(session_id, text)
        records = replay(config.log_path)
        assert records == engine.get(session_id).records

    def test_truncated_line(self, config, tmp_path):
        engine = Engine(clock=logical_clock())
        session_id = engine.start_session(config)
        engine.step(session_id, FIG3)
        log = open(config.log_path).read()
        broken = tmp_path / "broken.jsonl"
        broken.write_text(log + log[: len(log) // 2].rstrip("\n"))
        with pytest.raises(MalformedRecord) as err:
            replay(broken)
        assert err.value.lineno == 2

    def test_regeneration_from_log(self, config):
        """pilot_text is regenerable from atco_text + seed via determinism."""
        engine = Engine(clock=logical_clock())
        session_id = engine.start_session(config)
        script = [FIG3, "six lima yankee descend flight level one two zero"]
        for text in script:
            engine.step(session_id, text)
        records = replay(config.log_path)

        replay_engine = Engine(clock=logical_clock())
        replay_id = replay_engine.start_session(
            ExerciseConfig(
                surveillance_path=config.surveillance_path,
                rbe_probability=config.rbe_probability,
                seed=config.seed,
            )
        )
        for record in records:
            response = replay_engine.step(replay_id, record["atco_text"])
            assert response.text == record["pilot_text"]
