"""
Poem evaluation and rendering.

Criterion averages and the global score are taken over the verses where a
value exists; unscored stanza-initial verses and skipped criteria count for
neither numerator nor denominator. Values keep full precision until
rendering, which rounds half-up to 3 decimals.
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .assembler import BuildState, SlotReplay
from .constants import StageNames
from .criteria import CRITERIA, CandidateScore, Criterion
from .scansion import ScannedVerse
from .tracing import instrument_stage
from .utils import format_value

# Initialize logging
logger = logging.getLogger(__name__)

COLUMN_TITLES = {
    Criterion.ER: "ER",
    Criterion.ST: "ST",
    Criterion.AC: "AC",
    Criterion.RI: "RI",
    Criterion.RTC: "RTC",
}


class OutputFormat(str, Enum):
    TEXT = "text"
    TABLE = "table"
    JSON = "json"


@dataclass
class VerseRow:
    source_id: str
    display_text: str
    scansion: str
    letter: str
    stanza_index: int
    meter: int
    tonic_positions: Tuple[int, ...]
    # criterion name -> value, None when skipped
    values: Dict[str, Optional[float]]
    # None for unscored (stanza-initial) verses
    score: Optional[float]


@dataclass
class PoemReport:
    verses: List[VerseRow]
    criterion_averages: Dict[str, Optional[float]]
    global_score: Optional[float]
    scheme: str
    meters: List[int]
    weights: Dict[str, float]
    seed: Optional[int] = None
    reference_mode: str = "both"
    replay: List[Dict[str, Any]] = field(default_factory=list, compare=False)


def _mean(values: Sequence[float]) -> Optional[float]:
    return sum(values) / len(values) if values else None


def _score_values(score: Optional[CandidateScore]) -> Dict[str, Optional[float]]:
    if score is None:
        return {criterion.value: None for criterion in CRITERIA}
    return {criterion.value: value for criterion, value in score.values().items()}


def _replay_document(slot_replay: SlotReplay, top: Optional[int]) -> Dict[str, Any]:
    entries = list(zip(slot_replay.candidates, slot_replay.scores))
    keep = range(len(entries))
    if top is not None:
        ranked = sorted(range(len(entries)), key=lambda i: (-entries[i][1].score, i))
        keep = sorted(ranked[:top])
    return {
        "slot": slot_replay.slot.verse_index + 1,
        "letter": slot_replay.slot.letter,
        "meter": slot_replay.meter,
        "eligible": len(entries),
        "candidates": [
            {
                **_verse_fields(entries[i][0]),
                "values": _score_values(entries[i][1]),
                "score": entries[i][1].score,
                "chosen": i == slot_replay.winner,
            }
            for i in keep
        ],
    }


def _verse_fields(verse: ScannedVerse) -> Dict[str, Any]:
    return {
        "source_id": verse.source_id,
        "display_text": verse.display_text,
        "scansion": verse.scansion,
        "meter": verse.meter,
        "tonic_positions": list(verse.tonic_positions),
    }


@instrument_stage(StageNames.EVALUATE_POEM)
def evaluate_poem(
    state: BuildState,
    replay: bool = False,
    replay_top: Optional[int] = None,
) -> PoemReport:
    """Summarize a finished build into per-verse rows and poem-level averages."""
    rows = [
        VerseRow(
            source_id=placed.verse.source_id,
            display_text=placed.verse.display_text,
            scansion=placed.verse.scansion,
            letter=placed.slot.letter,
            stanza_index=placed.slot.stanza_index,
            meter=placed.meter,
            tonic_positions=tuple(placed.verse.tonic_positions),
            values=_score_values(placed.score),
            score=placed.score.score if placed.score is not None else None,
        )
        for placed in state.placed
    ]
    averages = {
        criterion.value: _mean([
            row.values[criterion.value] for row in rows if row.values[criterion.value] is not None
        ])
        for criterion in CRITERIA
    }
    global_score = _mean([row.score for row in rows if row.score is not None])
    logger.info(f"Poem evaluated: global score {format_value(global_score)}")
    return PoemReport(
        verses=rows,
        criterion_averages=averages,
        global_score=global_score,
        scheme=state.scheme.render(),
        meters=list(state.meters),
        weights=state.weights.as_dict(),
        seed=state.seed,
        reference_mode=state.reference_mode.value,
        replay=[_replay_document(r, replay_top) for r in state.replay] if replay else [],
    )


def _render_text(report: PoemReport) -> str:
    stanzas: List[List[str]] = []
    for row in report.verses:
        if row.stanza_index >= len(stanzas):
            stanzas.append([])
        stanzas[-1].append(row.display_text)
    return "\n\n".join("\n".join(lines) for lines in stanzas) + "\n"


def _grid(rows: List[List[str]]) -> List[str]:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return [" | ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in rows]


def _visible_criteria(report: PoemReport) -> List[Criterion]:
    return [c for c in CRITERIA if report.weights.get(c.value, 0) > 0]


def _render_table(report: PoemReport) -> str:
    criteria = _visible_criteria(report)
    header = ["Escansão", "Metro", "Tônicas"] + [COLUMN_TITLES[c] for c in criteria] + ["Escore"]
    rows = [header]
    for row in report.verses:
        rows.append(
            [row.scansion, str(row.meter), ", ".join(str(p) for p in row.tonic_positions)]
            + [format_value(row.values[c.value]) for c in criteria]
            + [format_value(row.score)]
        )
    rows.append(
        ["Avaliação", "", ""]
        + [format_value(report.criterion_averages[c.value]) for c in criteria]
        + [format_value(report.global_score)]
    )
    lines = _grid(rows)
    lines.insert(1, "-" * max(len(line) for line in lines))
    return _render_text(report) + "\n" + "\n".join(lines) + "\n"


def render_replay(report: PoemReport) -> str:
    """Scored candidates of every slot; the chosen one is starred."""
    blocks = []
    criteria = _visible_criteria(report)
    for slot in report.replay:
        rows = [["", "Escansão", "Metro", "Tônicas"] + [COLUMN_TITLES[c] for c in criteria] + ["Escore"]]
        for candidate in slot["candidates"]:
            rows.append(
                ["*" if candidate["chosen"] else "", candidate["scansion"], str(candidate["meter"]),
                 ", ".join(str(p) for p in candidate["tonic_positions"])]
                + [format_value(candidate["values"][c.value]) for c in criteria]
                + [format_value(candidate["score"])]
            )
        title = (
            f"slot {slot['slot']} ({slot['letter']}, meter {slot['meter']}): "
            f"{slot['eligible']} eligible, {len(slot['candidates'])} shown"
        )
        blocks.append(title + "\n" + "\n".join(_grid(rows)))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def to_document(report: PoemReport) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        "scheme": report.scheme,
        "meters": report.meters,
        "weights": report.weights,
        "seed": report.seed,
        "reference_mode": report.reference_mode,
        "verses": [
            {
                "source_id": row.source_id,
                "display_text": row.display_text,
                "scansion": row.scansion,
                "letter": row.letter,
                "stanza_index": row.stanza_index,
                "meter": row.meter,
                "tonic_positions": list(row.tonic_positions),
                "values": row.values,
                "score": row.score,
            }
            for row in report.verses
        ],
        "criterion_averages": report.criterion_averages,
        "global_score": report.global_score,
    }
    if report.replay:
        document["replay"] = report.replay
    return document


def parse_structured(text: str) -> PoemReport:
    """Rebuild a PoemReport from its JSON rendering."""
    document = json.loads(text)
    return PoemReport(
        verses=[
            VerseRow(
                source_id=verse["source_id"],
                display_text=verse["display_text"],
                scansion=verse["scansion"],
                letter=verse["letter"],
                stanza_index=verse["stanza_index"],
                meter=verse["meter"],
                tonic_positions=tuple(verse["tonic_positions"]),
                values=dict(verse["values"]),
                score=verse["score"],
            )
            for verse in document["verses"]
        ],
        criterion_averages=dict(document["criterion_averages"]),
        global_score=document["global_score"],
        scheme=document["scheme"],
        meters=list(document["meters"]),
        weights=dict(document["weights"]),
        seed=document["seed"],
        reference_mode=document["reference_mode"],
        replay=list(document.get("replay", [])),
    )


@instrument_stage(StageNames.RENDER)
def render(report: PoemReport, format: OutputFormat = OutputFormat.TEXT) -> str:
    """
    Render a report.

    Args:
        report: The evaluated poem
        format: text (stanzas only), table (stanzas plus per-verse
            diagnostics) or json (full precision, seed included)

    Returns:
        The rendered document, newline-terminated
    """
    fmt = OutputFormat(format)
    if fmt is OutputFormat.JSON:
        return json.dumps(to_document(report), ensure_ascii=False, sort_keys=True, indent=2) + "\n"
    if fmt is OutputFormat.TABLE:
        return _render_table(report)
    return _render_text(report)
