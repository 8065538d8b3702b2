"""
Core tracing functionality for the poem engine.
"""
import functools
import logging
import uuid
from contextlib import contextmanager

from opentelemetry import trace
from opentelemetry.trace import Status, StatusCode

from .constants import SpanAttributes, TRACER_NAME
from .errors import PoemEngineError
from .timer_lib import timer
from .utils import dont_throw

# Initialize logging
logger = logging.getLogger(__name__)


def get_tracer(tracer_name=TRACER_NAME):
    """Get a tracer instance"""
    return trace.get_tracer(tracer_name)


def set_span_attributes(span, attributes):
    """Set multiple attributes on a span, skipping None/empty values"""
    for key, value in attributes.items():
        if value is not None and value != "":
            span.set_attribute(key, value)


@dont_throw
def record_error(span, error):
    """Mark a span as failed and attach the exception"""
    span.set_status(Status(StatusCode.ERROR, str(error)))
    span.record_exception(error)
    set_span_attributes(
        span,
        {
            SpanAttributes.ERROR_STAGE: getattr(error, "stage", None),
            SpanAttributes.ERROR_MESSAGE: str(error),
        },
    )


@contextmanager
def span_context(span):
    """Context manager for span operations; errors are recorded and re-raised"""
    try:
        yield span
    except Exception as e:
        if isinstance(e, PoemEngineError):
            logger.debug(f"{e.stage} error in span operation: {e}")
        else:
            logger.exception(f"Error in span operation: {e}")
        if span:
            record_error(span, e)
        raise
    else:
        span.set_status(Status(StatusCode.OK))
    finally:
        if span and span.is_recording():
            span.end()


def _record_timing(span, stage_name, call_id):
    start_iso, end_iso, duration_ms = timer.end(stage_name, call_id)
    timer.reset(stage_name, call_id)
    set_span_attributes(
        span,
        {
            SpanAttributes.STAGE_START_TIME: start_iso,
            SpanAttributes.STAGE_END_TIME: end_iso,
            SpanAttributes.STAGE_DURATION: duration_ms,
        },
    )
    logger.debug(f"Stage {stage_name} took {duration_ms:.3f} ms")


def instrument_stage(stage_name):
    """Run the decorated function inside a span named after the stage, with timing"""

    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            call_id = uuid.uuid4().hex
            span = get_tracer().start_span(stage_name)
            timer.start(stage_name, call_id)
            with span_context(span), trace.use_span(
                span, end_on_exit=False, record_exception=False, set_status_on_exception=False
            ):
                try:
                    return func(*args, **kwargs)
                finally:
                    _record_timing(span, stage_name, call_id)

        return wrapper

    return decorator


def flush_telemetry():
    """Force flush all pending telemetry data to the configured backend"""
    try:
        trace_provider = trace.get_tracer_provider()
        if not hasattr(trace_provider, "force_flush"):
            logger.debug("No SDK tracer provider configured, nothing to flush")
            return

        # Set a longer timeout (30 seconds) to ensure all data is flushed
        success = trace_provider.force_flush(timeout_millis=30000)

        if success:
            logger.info("🟢 Telemetry data flushed successfully")
        else:
            logger.warning(
                "🔶 Telemetry flush timed out or failed - data may not have been sent completely"
            )
    except Exception as e:
        logger.error(f"🔴 Error flushing telemetry: {str(e)}", exc_info=True)
