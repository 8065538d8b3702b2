import pytest
from opentelemetry.sdk.trace.export.in_memory_span_exporter import InMemorySpanExporter
from opentelemetry.trace import StatusCode

from core import cli as cli_module
from core import assembler as assembler_module
from core import tracing as tracing_module
from core.cli import RunConfig, run
from core.configuration import Settings, create_tracer_provider, load_settings, parse_headers
from core.constants import SpanAttributes, StageNames, TRACER_NAME
from core.errors import NoAvailableMeter
from core.timer_lib import StageTimer
from core.tracing import flush_telemetry, instrument_stage


@pytest.fixture
def exporter(monkeypatch):
    """Route every engine span to an in-memory exporter without touching the global provider."""
    memory = InMemorySpanExporter()
    provider = create_tracer_provider(Settings(), span_exporters=[memory], set_global=False)

    def get_tracer(tracer_name=TRACER_NAME):
        return provider.get_tracer(tracer_name)

    for module in (tracing_module, cli_module, assembler_module):
        monkeypatch.setattr(module, "get_tracer", get_tracer)
    yield memory
    provider.shutdown()


def spans_by_name(exporter):
    spans = {}
    for span in exporter.get_finished_spans():
        spans.setdefault(span.name, []).append(span)
    return spans


def test_generate_emits_one_span_per_stage(exporter, corpus_file):
    result = run(RunConfig(corpus_path=str(corpus_file), scheme="AABB", meters=["10"], seed=8))
    assert result.exit_code == 0

    spans = spans_by_name(exporter)
    for name in (
        StageNames.LOAD_CORPUS,
        StageNames.BUILD_INDEX,
        StageNames.RESOLVE_METERS,
        StageNames.ASSIGN_GROUPS,
        StageNames.BUILD_POEM,
        StageNames.EVALUATE_POEM,
        StageNames.RENDER,
    ):
        assert len(spans[name]) == 1, name
    assert len(spans[StageNames.SLOT]) == 4

    root = spans[StageNames.GENERATE][0]
    assert root.attributes[SpanAttributes.SEED] == 8
    assert root.attributes[SpanAttributes.SCHEME] == "AABB"
    assert root.attributes[SpanAttributes.METERS] == "10,10,10,10"
    assert root.status.status_code is StatusCode.OK

    index_span = spans[StageNames.BUILD_INDEX][0]
    assert index_span.attributes[SpanAttributes.CORPUS_VARIANTS] == 30
    assert index_span.attributes[SpanAttributes.CORPUS_GROUPS] == 2

    build = spans[StageNames.BUILD_POEM][0]
    assert build.parent.span_id == root.context.span_id
    assert all(slot.parent.span_id == build.context.span_id for slot in spans[StageNames.SLOT])
    assert SpanAttributes.STAGE_DURATION in build.attributes

    scored = [s for s in spans[StageNames.SLOT] if not s.attributes[SpanAttributes.SLOT_STANZA_FIRST]]
    assert all(SpanAttributes.VERSE_SCORE in s.attributes for s in scored)


def test_failed_run_marks_root_span(exporter, corpus_file):
    result = run(RunConfig(corpus_path=str(corpus_file), scheme="ABCDEFG", meters=["10"], seed=2))
    assert result.exit_code == 3

    spans = spans_by_name(exporter)
    root = spans[StageNames.GENERATE][0]
    assert root.status.status_code is StatusCode.ERROR
    assert root.attributes[SpanAttributes.ERROR_STAGE] == "feasibility"
    assert spans[StageNames.ASSIGN_GROUPS][0].status.status_code is StatusCode.ERROR
    assert spans[StageNames.ASSIGN_GROUPS][0].attributes[SpanAttributes.INFEASIBLE_LETTER] == "C"
    assert StageNames.BUILD_POEM not in spans


def test_instrument_stage_reraises_and_clears_timer(exporter, monkeypatch):
    timer = StageTimer()
    monkeypatch.setattr(tracing_module, "timer", timer)

    @instrument_stage("sample_stage")
    def failing():
        raise NoAvailableMeter()

    with pytest.raises(NoAvailableMeter):
        failing()
    span = exporter.get_finished_spans()[0]
    assert span.name == "sample_stage"
    assert span.attributes[SpanAttributes.ERROR_STAGE] == "config"
    assert timer._timers == {}


def test_stage_timer():
    timer = StageTimer()
    assert timer.start("stage", "a", start_time=100.0) == 100.0
    # a second start keeps the first time
    assert timer.start("stage", "a", start_time=200.0) == 100.0
    start_iso, end_iso, duration = timer.end("stage", "a")
    assert start_iso == "1970-01-01T00:01:40"
    assert duration > 0
    timer.reset("stage", "a")
    assert not timer.is_started("stage", "a")
    with pytest.raises(KeyError):
        timer.end("stage", "a")


def test_parse_headers():
    assert parse_headers("x-api-key=abc, project = poems,broken") == {"x-api-key": "abc", "project": "poems"}
    assert parse_headers("auth=a=b") == {"auth": "a=b"}


def test_load_settings_from_environment():
    settings = load_settings(
        {
            "POEM_ENGINE_LOG_LEVEL": "debug",
            "OTEL_SERVICE_NAME": "poems",
            "OTEL_EXPORTER_OTLP_ENDPOINT": "http://localhost:4318/v1/traces",
            "OTEL_EXPORTER_OTLP_HEADERS": "x-api-key=k",
            "POEM_ENGINE_CONSOLE_SPANS": "yes",
        }
    )
    assert settings.log_level == "DEBUG"
    assert settings.service_name == "poems"
    assert settings.otlp_headers == {"x-api-key": "k"}
    assert settings.console_spans is True


def test_load_settings_defaults():
    settings = load_settings({})
    assert settings == Settings()
    assert settings.otlp_endpoint is None


def test_tracer_provider_resource():
    provider = create_tracer_provider(
        Settings(service_name="poems", environment="test"),
        resource_attributes={"team": "verse"},
        set_global=False,
    )
    attributes = provider.resource.attributes
    assert attributes["service.name"] == "poems"
    assert attributes["deployment.environment"] == "test"
    assert attributes["team"] == "verse"


def test_flush_telemetry_never_raises():
    flush_telemetry()
