"""
Entry point of the poem engine.

Loads a local .env, configures logging and tracing, runs the command line
and flushes telemetry before exiting.

    python main.py generate --corpus corpus.jsonl --scheme "AABB" --meters 10 --seed 7 --format table
"""
import sys

from dotenv import load_dotenv

from core import flush_telemetry, main
from core.configuration import configure_logging, create_tracer_provider, load_settings
from core.timer_lib import timer

if __name__ == "__main__":
    load_dotenv(override=True)

    settings = load_settings()
    configure_logging(settings)
    create_tracer_provider(settings)

    try:
        exit_code = main()
    finally:
        # Flush telemetry data
        flush_telemetry()
        timer.reset_all()
    sys.exit(exit_code)
