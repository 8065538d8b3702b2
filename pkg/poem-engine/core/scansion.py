"""
Parser for the scansion notation and the phonological features derived from it.

A scansion line separates poetic syllables with "/" and marks the vowel of
each stressed syllable with a preceding "#":

    Re/no/v#ou/se a in/ves/t#i/da/ fe/bril/m#en/te.
"""

import logging
import re
import unicodedata
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

from .constants import Scansion
from .errors import EmptyLine, EmptySyllable, MalformedMarker, NoStressMarker

# Initialize logging
logger = logging.getLogger(__name__)

_WHITESPACE = re.compile(r"\s+")
_DELETE_TABLE = str.maketrans("", "", Scansion.PUNCTUATION + Scansion.STRESS)


class AccentClass(str, Enum):
    """Rhyme accent class, from the syllables after the last stress"""
    AGUDA = "aguda"
    GRAVE = "grave"
    ESDRUXULA = "esdruxula"

    @classmethod
    def from_tail(cls, post_tonic: int) -> "AccentClass":
        if post_tonic <= 0:
            return cls.AGUDA
        if post_tonic == 1:
            return cls.GRAVE
        return cls.ESDRUXULA


@dataclass(frozen=True)
class Syllable:
    raw: str
    normalized: str
    stressed: bool


@dataclass(frozen=True)
class ScannedVerse:
    """One scansion variant of a corpus sentence."""
    source_id: str
    display_text: str
    scansion: str
    syllables: Tuple[Syllable, ...]
    tonic_positions: Tuple[int, ...]
    meter: int
    final_syllable: str
    rhyme_suffix: str
    tonic_vowel: str
    accent_class: AccentClass
    final_word: str
    # Position in the corpus variant sequence; the deterministic tie-break
    order: int = 0
    variant: int = 0

    @property
    def stressed_syllables(self) -> Tuple[Tuple[int, str], ...]:
        return tuple(
            (position, self.syllables[position - 1].normalized)
            for position in self.tonic_positions
        )


def strip_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFD", text)
    stripped = "".join(c for c in decomposed if unicodedata.category(c) != "Mn")
    return unicodedata.normalize("NFC", stripped)


def is_vowel(character: str) -> bool:
    return len(character) == 1 and strip_diacritics(character).lower() in Scansion.VOWELS


def normalize_syllable(raw: str) -> str:
    """Lowercase, drop stress markers, punctuation and whitespace; keep diacritics."""
    text = unicodedata.normalize("NFC", raw).lower().translate(_DELETE_TABLE)
    return unicodedata.normalize("NFC", _WHITESPACE.sub("", text))


def display_from_scansion(line: str) -> str:
    """Rebuild readable text from a scansion line by dropping its markup."""
    text = line.replace(Scansion.SEPARATOR, "").replace(Scansion.STRESS, "")
    return _WHITESPACE.sub(" ", text).strip()


def extract_final_word(display_text: str) -> str:
    tokens = display_text.split()
    if not tokens:
        return ""
    return tokens[-1].strip(Scansion.PUNCTUATION).lower()


def _tail_from_stress(syllables: Sequence[Syllable], last_tonic: int) -> str:
    head = syllables[last_tonic - 1].raw
    head = head[head.index(Scansion.STRESS) + 1:]
    return normalize_syllable(head + "".join(s.raw for s in syllables[last_tonic:]))


def rhyme_suffix(verse: ScannedVerse) -> str:
    """Characters from the stressed vowel of the last tonic syllable to the end."""
    return _tail_from_stress(verse.syllables, verse.meter)


def _parse_segment(segment: str, position: int) -> Syllable:
    markers = segment.count(Scansion.STRESS)
    if markers > 1:
        raise MalformedMarker(segment, position)
    if markers == 1:
        at = segment.index(Scansion.STRESS)
        following = segment[at + 1:at + 2]
        if not following or not is_vowel(following):
            raise MalformedMarker(segment, position)
    normalized = normalize_syllable(segment)
    if not normalized:
        raise EmptySyllable(position)
    return Syllable(raw=segment, normalized=normalized, stressed=markers == 1)


def parse_scansion(
    line: str,
    source_id: str = "",
    display_text: Optional[str] = None,
) -> ScannedVerse:
    """
    Parse one scansion line into a ScannedVerse.

    Args:
        line: Scansion text, syllables separated by "/" and stresses marked "#"
        source_id: Identifier of the sentence the scansion belongs to
        display_text: Original sentence; rebuilt from the scansion when absent

    Returns:
        The parsed verse with every derived feature populated

    Raises:
        EmptyLine, NoStressMarker, MalformedMarker, EmptySyllable
    """
    line = unicodedata.normalize("NFC", line).strip()
    if not line:
        raise EmptyLine()
    if Scansion.STRESS not in line:
        raise NoStressMarker(line)

    segments = line.split(Scansion.SEPARATOR)
    for position, segment in enumerate(segments, start=1):
        if not segment.strip():
            raise EmptySyllable(position)
    syllables = tuple(
        _parse_segment(segment, position) for position, segment in enumerate(segments, start=1)
    )

    tonic_positions = tuple(
        position for position, syllable in enumerate(syllables, start=1) if syllable.stressed
    )
    meter = tonic_positions[-1]
    suffix = _tail_from_stress(syllables, meter)
    text = display_text if display_text is not None else display_from_scansion(line)

    return ScannedVerse(
        source_id=source_id,
        display_text=text,
        scansion=line,
        syllables=syllables,
        tonic_positions=tonic_positions,
        meter=meter,
        final_syllable=syllables[-1].normalized,
        rhyme_suffix=suffix,
        tonic_vowel=strip_diacritics(suffix[0]).lower(),
        accent_class=AccentClass.from_tail(len(syllables) - meter),
        final_word=extract_final_word(text),
    )
