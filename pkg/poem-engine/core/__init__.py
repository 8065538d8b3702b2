"""
Core package of the poem engine: scansion, corpus indexing, rhyme schemes,
rhythmic criteria, greedy assembly, reporting and the command line.
"""

from .assembler import compose, place_verses
from .cli import RunConfig, main, run
from .report import evaluate_poem, render
from .tracing import flush_telemetry
