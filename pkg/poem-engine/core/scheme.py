"""
Rhyme scheme, per-verse meter plan and criterion weights.

A scheme string such as "ABAB ABAB CDC CDC" lists stanzas separated by
whitespace; each character is one verse and equal letters rhyme across the
whole poem.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .constants import StageNames
from .errors import EmptyScheme, InvalidCharacter, InvalidMeterPlan, InvalidWeights, NoAvailableMeter
from .rng import SeededRNG
from .tracing import instrument_stage

# Initialize logging
logger = logging.getLogger(__name__)

RANDOM_METER_TOKENS = {"random", "*", "?"}


@dataclass(frozen=True)
class SchemeSlot:
    verse_index: int
    stanza_index: int
    letter: str
    is_stanza_first: bool


@dataclass(frozen=True)
class RhymeScheme:
    stanzas: Tuple[Tuple[str, ...], ...]

    @property
    def flat(self) -> Tuple[SchemeSlot, ...]:
        slots = []
        for stanza_index, stanza in enumerate(self.stanzas):
            for position, letter in enumerate(stanza):
                slots.append(
                    SchemeSlot(
                        verse_index=len(slots),
                        stanza_index=stanza_index,
                        letter=letter,
                        is_stanza_first=position == 0,
                    )
                )
        return tuple(slots)

    def letters(self) -> List[str]:
        """Distinct letters in order of first appearance."""
        seen: Dict[str, None] = {}
        for stanza in self.stanzas:
            for letter in stanza:
                seen.setdefault(letter, None)
        return list(seen)

    def render(self) -> str:
        return " ".join("".join(stanza) for stanza in self.stanzas)

    def __len__(self) -> int:
        return sum(len(stanza) for stanza in self.stanzas)


def parse_scheme(s: str) -> RhymeScheme:
    """
    Parse a rhyme scheme string.

    Raises:
        EmptyScheme: If nothing but whitespace was given
        InvalidCharacter: If a verse symbol is not a letter
    """
    tokens = s.split()
    if not tokens:
        raise EmptyScheme()
    for token in tokens:
        for character in token:
            if not character.isalpha():
                raise InvalidCharacter(character, s)
    return RhymeScheme(stanzas=tuple(tuple(token.upper()) for token in tokens))


@dataclass(frozen=True)
class MeterPlan:
    """Requested meter per verse; None leaves the meter to a random draw."""
    per_verse: Tuple[Optional[int], ...]

    def render(self) -> List[Union[int, str]]:
        return [meter if meter is not None else "random" for meter in self.per_verse]


def parse_meter_plan(values: Sequence[Union[int, str, None]], verse_count: int) -> MeterPlan:
    """
    Build a meter plan from a list of meters, broadcasting a single value.

    Raises:
        InvalidMeterPlan: On a length other than 1 or verse_count, or a
            meter that is not a positive integer
    """
    if len(values) not in (1, verse_count):
        raise InvalidMeterPlan(
            f"expected 1 or {verse_count} meters, got {len(values)}"
        )
    meters: List[Optional[int]] = []
    for value in values:
        if value is None or (isinstance(value, str) and value.strip().lower() in RANDOM_METER_TOKENS):
            meters.append(None)
            continue
        try:
            meter = int(value)
        except (TypeError, ValueError):
            raise InvalidMeterPlan(f"invalid meter {value!r}")
        if meter <= 0:
            raise InvalidMeterPlan(f"meter must be positive, got {meter}")
        meters.append(meter)
    if len(meters) == 1:
        meters = meters * verse_count
    return MeterPlan(per_verse=tuple(meters))


@instrument_stage(StageNames.RESOLVE_METERS)
def resolve_meters(plan: MeterPlan, available: Set[int], rng: SeededRNG) -> List[int]:
    """
    Replace unspecified meters by a uniform draw over the available meters.

    Draws happen in verse order, one per unspecified verse.

    Raises:
        NoAvailableMeter: If a draw is needed and nothing has supply
    """
    choices = sorted(available)
    resolved = []
    for meter in plan.per_verse:
        if meter is None:
            if not choices:
                raise NoAvailableMeter()
            meter = rng.choice(choices)
            logger.debug(f"Drew meter {meter} among {choices}")
        resolved.append(meter)
    return resolved


@dataclass(frozen=True)
class CriterionWeights:
    er: float = 1.0
    st: float = 1.0
    ac: float = 1.0
    ri: float = 1.0
    rtc: float = 1.0

    def __post_init__(self):
        values = self.as_dict()
        for name, value in values.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise InvalidWeights(f"weight {name} must be a number, got {value!r}")
            if not math.isfinite(value) or value < 0:
                raise InvalidWeights(f"weight {name} must be finite and non-negative, got {value}")
        if not any(value > 0 for value in values.values()):
            raise InvalidWeights("at least one weight must be positive")

    @classmethod
    def from_sequence(cls, values: Iterable[Union[float, str]]) -> "CriterionWeights":
        """Five weights in the order ER, ST, AC, RI, RTC."""
        items = list(values)
        if len(items) != 5:
            raise InvalidWeights(f"expected 5 weights (ER ST AC RI RTC), got {len(items)}")
        try:
            numbers = [float(item) for item in items]
        except (TypeError, ValueError):
            raise InvalidWeights(f"weights must be numbers, got {items}")
        return cls(*numbers)

    def as_dict(self) -> Dict[str, float]:
        return {"er": self.er, "st": self.st, "ac": self.ac, "ri": self.ri, "rtc": self.rtc}

    def scaled(self, factor: float) -> "CriterionWeights":
        return CriterionWeights(*(value * factor for value in self.as_dict().values()))
