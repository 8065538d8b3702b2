"""
Corpus ingestion and the rhyme-group index.

Corpus files hold one JSON object per line:

    {"id": "s0001", "text": "Quase tudo está seco de sede", "scansions": ["Qu#a/se/ ..."]}

Sentences are grouped by the normalized text of their last poetic syllable,
then by meter.
"""

import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Set, Tuple, Union

from opentelemetry import trace

from .constants import SpanAttributes, StageNames
from .errors import CorpusNotFound, CorpusParseError, DuplicateId, ScansionError
from .scansion import ScannedVerse, display_from_scansion, parse_scansion
from .tracing import instrument_stage, set_span_attributes

# Initialize logging
logger = logging.getLogger(__name__)

KNOWN_FIELDS = {"id", "text", "scansions", "metadata"}


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    text: str
    scansions: Tuple[str, ...]
    # Free-form, carried through and ignored by the engine
    metadata: Optional[Dict[str, Any]] = field(default=None, compare=False)

    @cached_property
    def variants(self) -> Tuple[ScannedVerse, ...]:
        return tuple(
            parse_scansion(scansion, source_id=self.id, display_text=self.text)
            for scansion in self.scansions
        )

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            "id": self.id,
            "text": self.text,
            "scansions": list(self.scansions),
        }
        if self.metadata is not None:
            record["metadata"] = self.metadata
        return record


@dataclass(frozen=True)
class RhymeGroup:
    key: str
    by_meter: Mapping[int, Tuple[ScannedVerse, ...]]
    distinct_supply: Mapping[int, int]

    def meters(self) -> List[int]:
        return sorted(self.by_meter)

    def final_words(self, meters: Iterable[int]) -> Set[str]:
        return {
            verse.final_word
            for meter in meters
            for verse in self.by_meter.get(meter, ())
        }


RhymeIndex = Dict[str, RhymeGroup]


def _entry_from_record(record: Any, line_number: int) -> CorpusEntry:
    if not isinstance(record, dict):
        raise CorpusParseError(line_number, "record must be a JSON object")

    record_id = record.get("id")
    if isinstance(record_id, int) and not isinstance(record_id, bool):
        record_id = str(record_id)
    if not isinstance(record_id, str) or not record_id:
        raise CorpusParseError(line_number, "missing or invalid 'id'")

    text = record.get("text")
    if not isinstance(text, str):
        raise CorpusParseError(line_number, "missing or invalid 'text'", record_id)

    scansions = record.get("scansions")
    if (
        not isinstance(scansions, list)
        or not scansions
        or not all(isinstance(s, str) for s in scansions)
    ):
        raise CorpusParseError(line_number, "'scansions' must be a non-empty list of strings", record_id)

    unknown = set(record) - KNOWN_FIELDS
    if unknown:
        logger.warning(f"Record {record_id!r} on line {line_number} has unknown fields {sorted(unknown)}")

    metadata = record.get("metadata")
    entry = CorpusEntry(
        id=record_id,
        text=text,
        scansions=tuple(scansions),
        metadata=metadata if isinstance(metadata, dict) else None,
    )
    try:
        entry.variants
    except ScansionError as e:
        raise CorpusParseError(line_number, f"bad scansion: {e}", record_id) from e
    return entry


def read_utf8(path: Union[str, Path]) -> str:
    """
    Read a UTF-8 text file.

    Raises:
        CorpusNotFound: If the file is missing or unreadable
        CorpusParseError: On bytes that are not UTF-8, naming the line
    """
    try:
        raw = Path(path).read_bytes()
    except (FileNotFoundError, IsADirectoryError, PermissionError) as e:
        raise CorpusNotFound(str(path)) from e
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        line_number = raw.count(b"\n", 0, e.start) + 1
        raise CorpusParseError(line_number, f"invalid UTF-8 byte 0x{raw[e.start]:02x}") from e


@instrument_stage(StageNames.LOAD_CORPUS)
def load_corpus(path: Union[str, Path]) -> List[CorpusEntry]:
    """
    Read a JSON-lines corpus file.

    Args:
        path: Location of the corpus file

    Returns:
        One entry per record, in file order

    Raises:
        CorpusNotFound: If the file is missing or unreadable
        CorpusParseError: On invalid UTF-8, malformed JSON, missing fields or bad scansions
        DuplicateId: If two records share an id
    """
    corpus_path = Path(path)
    content = read_utf8(corpus_path)

    entries: List[CorpusEntry] = []
    seen: Set[str] = set()
    for line_number, line in enumerate(content.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            raise CorpusParseError(line_number, f"invalid JSON: {e.msg}") from e
        entry = _entry_from_record(record, line_number)
        if entry.id in seen:
            raise DuplicateId(entry.id, line_number)
        seen.add(entry.id)
        entries.append(entry)

    logger.info(f"Loaded {len(entries)} corpus entries from {corpus_path}")
    return entries


def write_corpus(entries: Iterable[CorpusEntry], path: Union[str, Path]) -> None:
    lines = [json.dumps(entry.to_record(), ensure_ascii=False) for entry in entries]
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def convert_plain(lines: Iterable[str]) -> List[CorpusEntry]:
    """
    Turn the plain format (one scansion per line) into corpus entries.

    Blank lines and lines starting with "# " are skipped. Ids are assigned
    as s0001, s0002, ... in line order.
    """
    entries: List[CorpusEntry] = []
    for line_number, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("# "):
            continue
        entry = CorpusEntry(
            id=f"s{len(entries) + 1:04d}",
            text=display_from_scansion(stripped),
            scansions=(stripped,),
        )
        try:
            entry.variants
        except ScansionError as e:
            raise CorpusParseError(line_number, f"bad scansion: {e}", entry.id) from e
        entries.append(entry)
    return entries


@instrument_stage(StageNames.BUILD_INDEX)
def build_index(entries: Iterable[CorpusEntry]) -> RhymeIndex:
    """
    Group every scansion variant by final syllable, then by meter.

    Variants are numbered in corpus order; that number is the tie-break
    order for the rest of the pipeline.
    """
    buckets: Dict[str, Dict[int, List[ScannedVerse]]] = defaultdict(lambda: defaultdict(list))
    order = 0
    for entry in entries:
        for variant_number, verse in enumerate(entry.variants):
            placed = _with_order(verse, order, variant_number)
            buckets[verse.final_syllable][verse.meter].append(placed)
            order += 1

    index: RhymeIndex = {}
    for key, by_meter in buckets.items():
        frozen = {meter: tuple(verses) for meter, verses in sorted(by_meter.items())}
        index[key] = RhymeGroup(
            key=key,
            by_meter=frozen,
            distinct_supply={
                meter: len({verse.final_word for verse in verses})
                for meter, verses in frozen.items()
            },
        )
    logger.info(f"Indexed {order} scansion variants into {len(index)} rhyme groups")
    set_span_attributes(
        trace.get_current_span(),
        {SpanAttributes.CORPUS_VARIANTS: order, SpanAttributes.CORPUS_GROUPS: len(index)},
    )
    return index


def _with_order(verse: ScannedVerse, order: int, variant: int) -> ScannedVerse:
    return replace(verse, order=order, variant=variant)


def available_meters(index: RhymeIndex) -> Set[int]:
    return {
        meter
        for group in index.values()
        for meter, supply in group.distinct_supply.items()
        if supply > 0
    }


def group_summary(index: RhymeIndex) -> List[Tuple[str, int, int, int]]:
    """(group key, meter, verses, distinct final words), sorted by key then meter."""
    return [
        (key, meter, len(group.by_meter[meter]), group.distinct_supply[meter])
        for key, group in sorted(index.items())
        for meter in group.meters()
    ]
