"""
Exception hierarchy for the poem engine.

Every error carries the pipeline stage it belongs to and the exit code the
CLI reports for it.
"""

from typing import Optional


class PoemEngineError(Exception):
    """Base class for every error raised by the engine."""

    stage = "engine"
    exit_code = 1


# Scansion errors

class ScansionError(PoemEngineError):
    stage = "parse"
    exit_code = 65


class EmptyLine(ScansionError):
    def __init__(self):
        super().__init__("scansion line is empty")


class NoStressMarker(ScansionError):
    def __init__(self, line: str):
        super().__init__(f"no stress marker '#' in scansion {line!r}")
        self.line = line


class MalformedMarker(ScansionError):
    def __init__(self, segment: str, position: int):
        super().__init__(
            f"stress marker in syllable {position} ({segment!r}) must be followed by a vowel"
        )
        self.segment = segment
        self.position = position


class EmptySyllable(ScansionError):
    def __init__(self, position: int):
        super().__init__(f"syllable {position} is empty")
        self.position = position


# Corpus errors

class CorpusError(PoemEngineError):
    stage = "parse"
    exit_code = 65


class CorpusNotFound(CorpusError):
    exit_code = 66

    def __init__(self, path: str):
        super().__init__(f"corpus file not found or unreadable: {path}")
        self.path = path


class CorpusParseError(CorpusError):
    def __init__(self, line_number: int, reason: str, record_id: Optional[str] = None):
        where = f"line {line_number}"
        if record_id is not None:
            where += f" (record {record_id!r})"
        super().__init__(f"{where}: {reason}")
        self.line_number = line_number
        self.record_id = record_id
        self.reason = reason


class DuplicateId(CorpusError):
    def __init__(self, record_id: str, line_number: int):
        super().__init__(f"line {line_number}: duplicate record id {record_id!r}")
        self.record_id = record_id
        self.line_number = line_number


# Scheme and configuration errors

class ConfigError(PoemEngineError):
    stage = "config"
    exit_code = 64


class EmptyScheme(ConfigError):
    def __init__(self):
        super().__init__("rhyme scheme is empty")


class InvalidCharacter(ConfigError):
    def __init__(self, character: str, scheme: str):
        super().__init__(f"invalid character {character!r} in rhyme scheme {scheme!r}")
        self.character = character


class InvalidWeights(ConfigError):
    pass


class InvalidMeterPlan(ConfigError):
    pass


class NoAvailableMeter(ConfigError):
    def __init__(self):
        super().__init__("no meter with supply is available for a random draw")


# Scoring errors

class AllSkipped(PoemEngineError):
    stage = "scoring"
    exit_code = 70

    def __init__(self):
        super().__init__("every criterion was skipped; nothing to combine")


# Assembly errors

class Infeasible(PoemEngineError):
    stage = "feasibility"
    exit_code = 3

    def __init__(self, letter: str):
        super().__init__(f"no rhyme group can serve letter {letter!r}")
        self.letter = letter


class ExhaustedCandidates(PoemEngineError):
    stage = "exhaustion"
    exit_code = 4

    def __init__(self, slot_index: int, letter: str, meter: int):
        super().__init__(
            f"slot {slot_index} (letter {letter!r}, meter {meter}) has no eligible candidate left"
        )
        self.slot_index = slot_index
        self.letter = letter
        self.meter = meter
