"""Constants for the poem engine: span attributes, stage names and scansion symbols"""


class SpanAttributes:
    """OpenTelemetry attribute names used on poem-engine spans"""
    # Run attributes
    RUN_ID = "poem.run.id"
    SEED = "poem.seed"
    SCHEME = "poem.scheme"
    METERS = "poem.meters"
    WEIGHTS = "poem.weights"
    REFERENCE_MODE = "poem.reference_mode"
    PARALLEL = "poem.parallel"

    # Corpus attributes
    CORPUS_PATH = "corpus.path"
    CORPUS_ENTRIES = "corpus.entries"
    CORPUS_VARIANTS = "corpus.variants"
    CORPUS_GROUPS = "corpus.groups"

    # Assignment attributes
    ASSIGNMENT = "poem.assignment"
    INFEASIBLE_LETTER = "poem.infeasible_letter"

    # Slot attributes
    SLOT_INDEX = "poem.slot.index"
    SLOT_LETTER = "poem.slot.letter"
    SLOT_METER = "poem.slot.meter"
    SLOT_STANZA_FIRST = "poem.slot.stanza_first"
    CANDIDATE_COUNT = "poem.candidates.count"
    VERSE_SOURCE_ID = "poem.verse.source_id"
    VERSE_SCORE = "poem.verse.score"

    # Report attributes
    GLOBAL_SCORE = "poem.global_score"
    OUTPUT_FORMAT = "poem.output_format"

    # Timing attributes
    STAGE_START_TIME = "poem.stage.start_time"
    STAGE_END_TIME = "poem.stage.end_time"
    STAGE_DURATION = "poem.stage.duration_ms"

    # Error attributes
    ERROR_STAGE = "error.stage"
    ERROR_MESSAGE = "error.message"


class StageNames:
    """Pipeline stage names, used as span names"""
    GENERATE = "generate"
    LOAD_CORPUS = "load_corpus"
    BUILD_INDEX = "build_index"
    RESOLVE_METERS = "resolve_meters"
    ASSIGN_GROUPS = "assign_groups"
    BUILD_POEM = "build_poem"
    SLOT = "slot"
    EVALUATE_POEM = "evaluate_poem"
    RENDER = "render"


class Scansion:
    """Symbols of the scansion notation"""
    SEPARATOR = "/"
    STRESS = "#"
    VOWELS = "aeiou"
    # Stripped from syllables, suffixes and final words
    PUNCTUATION = '.,;:!?…"«»()-\'“”‘’—–'


TRACER_NAME = "poem-engine"
SERVICE_VERSION = "2.0.0"
