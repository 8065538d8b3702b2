"""Environment-driven settings and OpenTelemetry setup for the poem engine."""

import logging
import os
import sys
from dataclasses import dataclass
from typing import Dict, Optional, Any, Sequence
from opentelemetry import trace
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.resources import Resource
from opentelemetry.exporter.otlp.proto.http.trace_exporter import OTLPSpanExporter
from opentelemetry.sdk.trace.export import (
    BatchSpanProcessor,
    ConsoleSpanExporter,
    SimpleSpanProcessor,
    SpanExporter,
)

from .constants import SERVICE_VERSION

# Initialize logging
logger = logging.getLogger(__name__)

TRUTHY = {"1", "true", "yes", "on"}


@dataclass(frozen=True)
class Settings:
    log_level: str = "WARNING"
    service_name: str = "poem-engine"
    environment: str = "development"
    otlp_endpoint: Optional[str] = None
    otlp_headers: Optional[Dict[str, str]] = None
    console_spans: bool = False


def parse_headers(headers_str: str) -> Dict[str, str]:
    """Parse a header string (format: key1=value1,key2=value2)"""
    headers = {}
    for header_pair in headers_str.split(","):
        if "=" in header_pair:
            key, value = header_pair.split("=", 1)
            headers[key.strip()] = value.strip()
    return headers


def load_settings(environ: Optional[Dict[str, str]] = None) -> Settings:
    """Read settings from the environment (populated from .env by main.py)"""
    env = os.environ if environ is None else environ
    headers_str = env.get("OTEL_EXPORTER_OTLP_HEADERS")
    return Settings(
        log_level=env.get("POEM_ENGINE_LOG_LEVEL", "WARNING").upper(),
        service_name=env.get("OTEL_SERVICE_NAME", env.get("SERVICE_NAME", "poem-engine")),
        environment=env.get("DEPLOYMENT_ENVIRONMENT", "development"),
        otlp_endpoint=env.get("OTEL_EXPORTER_OTLP_ENDPOINT") or None,
        otlp_headers=parse_headers(headers_str) if headers_str else None,
        console_spans=env.get("POEM_ENGINE_CONSOLE_SPANS", "").strip().lower() in TRUTHY,
    )


def configure_logging(settings: Settings) -> None:
    level = getattr(logging, settings.log_level, logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def create_tracer_provider(
    settings: Optional[Settings] = None,
    resource_attributes: Optional[Dict[str, Any]] = None,
    span_exporters: Sequence[SpanExporter] = (),
    use_batch_processor: bool = True,
    set_global: bool = True,
) -> TracerProvider:
    """
    Create an OpenTelemetry TracerProvider for the poem engine.

    The OTLP exporter is attached only when an endpoint is configured;
    extra exporters (tests, debugging) are attached with a simple processor.
    """
    settings = settings or load_settings()

    # Create base resource attributes
    attributes = {
        "service.name": settings.service_name,
        "service.version": SERVICE_VERSION,
        "deployment.environment": settings.environment,
    }
    if resource_attributes:
        attributes.update(resource_attributes)
    resource = Resource.create(attributes)

    tracer_provider = TracerProvider(resource=resource)

    # Configure OTLP exporter if endpoint is available
    if settings.otlp_endpoint:
        try:
            otlp_exporter = OTLPSpanExporter(
                endpoint=settings.otlp_endpoint,
                headers=settings.otlp_headers,
                timeout=30
            )
            processor_cls = BatchSpanProcessor if use_batch_processor else SimpleSpanProcessor
            tracer_provider.add_span_processor(processor_cls(otlp_exporter))
        except Exception as e:
            logger.warning(f"Failed to configure OTLP exporter: {str(e)}")
    else:
        logger.debug("No telemetry endpoint configured, spans will not be exported")

    if settings.console_spans:
        tracer_provider.add_span_processor(SimpleSpanProcessor(ConsoleSpanExporter(out=sys.stderr)))
    for exporter in span_exporters:
        tracer_provider.add_span_processor(SimpleSpanProcessor(exporter))

    if set_global:
        trace.set_tracer_provider(tracer_provider)
    return tracer_provider
