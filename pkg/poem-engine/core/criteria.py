"""
The five candidate criteria and their weighted combination.

    ER   rhythmic pattern: Jaccard similarity of stress positions
    ST   tonic syllables: equal stressed syllables, anywhere and in place
    AC   rhyme accent: aguda / grave / esdruxula agreement
    RI   internal rhyme: 1 - unique syllables / total syllables
    RTC  consonant (1.0) or assonant (0.5) rhyme

ER and ST compare the candidate with the first verse of the stanza and the
verse right before it. AC and RTC compare it with the latest verse that
carries the same rhyme letter and are skipped when there is none yet.
A skipped criterion is represented by None.
"""

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import AbstractSet, Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import AllSkipped
from .scansion import ScannedVerse
from .scheme import CriterionWeights

# Initialize logging
logger = logging.getLogger(__name__)


class Criterion(str, Enum):
    ER = "er"
    ST = "st"
    AC = "ac"
    RI = "ri"
    RTC = "rtc"


CRITERIA: Tuple[Criterion, ...] = tuple(Criterion)


class ReferenceMode(str, Enum):
    """Which earlier verses ER and ST compare against"""
    BOTH = "both"
    STANZA_FIRST = "stanza-first"
    PREVIOUS = "previous"


@dataclass(frozen=True)
class StressProfile:
    positions: frozenset
    stressed_syllables: Tuple[Tuple[int, str], ...]

    @classmethod
    def from_verse(cls, verse: ScannedVerse) -> "StressProfile":
        return cls(
            positions=frozenset(verse.tonic_positions),
            stressed_syllables=verse.stressed_syllables,
        )


@dataclass(frozen=True)
class ReferenceContext:
    stanza_first: ScannedVerse
    previous: ScannedVerse
    same_letter_latest: Optional[ScannedVerse] = None
    mode: ReferenceMode = ReferenceMode.BOTH

    def rhythm_references(self) -> List[ScannedVerse]:
        if self.mode is ReferenceMode.STANZA_FIRST:
            return [self.stanza_first]
        if self.mode is ReferenceMode.PREVIOUS:
            return [self.previous]
        if self.stanza_first is self.previous:
            return [self.stanza_first]
        return [self.stanza_first, self.previous]


@dataclass(frozen=True)
class CandidateScore:
    er: Optional[float]
    st: Optional[float]
    ac: Optional[float]
    ri: Optional[float]
    rtc: Optional[float]
    score: float

    def values(self) -> Dict[Criterion, Optional[float]]:
        return {criterion: getattr(self, criterion.value) for criterion in CRITERIA}


def jaccard(u: AbstractSet[int], v: AbstractSet[int]) -> float:
    union = u | v
    if not union:
        return 0.0
    return len(u & v) / len(union)


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def score_er(candidate: StressProfile, ctx: ReferenceContext) -> float:
    return _mean([
        jaccard(candidate.positions, frozenset(reference.tonic_positions))
        for reference in ctx.rhythm_references()
    ])


def _tonic_overlap(candidate: StressProfile, reference: StressProfile) -> float:
    denominator = min(len(candidate.stressed_syllables), len(reference.stressed_syllables))
    if denominator == 0:
        return 0.0
    candidate_texts = Counter(text for _, text in candidate.stressed_syllables)
    reference_texts = Counter(text for _, text in reference.stressed_syllables)
    anywhere = sum((candidate_texts & reference_texts).values())
    reference_at = dict(reference.stressed_syllables)
    in_place = sum(
        1 for position, text in candidate.stressed_syllables
        if reference_at.get(position) == text
    )
    return (anywhere / denominator + in_place / denominator) / 2


def score_st(candidate: StressProfile, ctx: ReferenceContext) -> float:
    return _mean([
        _tonic_overlap(candidate, StressProfile.from_verse(reference))
        for reference in ctx.rhythm_references()
    ])


def score_ac(candidate: ScannedVerse, ref: ScannedVerse) -> float:
    return 1.0 if candidate.accent_class == ref.accent_class else 0.0


def score_rtc(candidate: ScannedVerse, ref: ScannedVerse) -> float:
    if candidate.rhyme_suffix == ref.rhyme_suffix:
        return 1.0
    if candidate.tonic_vowel == ref.tonic_vowel:
        return 0.5
    return 0.0


def score_ri(candidate: ScannedVerse) -> float:
    total = len(candidate.syllables)
    unique = len({syllable.normalized for syllable in candidate.syllables})
    return 1 - unique / total


def combine(values: Mapping[Criterion, Optional[float]], w: CriterionWeights) -> float:
    """
    Weighted mean over the criteria that were computed.

    Raises:
        AllSkipped: If every value is None
    """
    weights = w.as_dict()
    present = [(weights[c.value], value) for c, value in values.items() if value is not None]
    if not present:
        raise AllSkipped()
    total_weight = sum(weight for weight, _ in present)
    if total_weight == 0:
        return 0.0
    return sum(weight * value for weight, value in present) / total_weight


def evaluate_candidate(
    candidate: ScannedVerse,
    ctx: ReferenceContext,
    w: CriterionWeights,
) -> CandidateScore:
    """
    Score a candidate for a slot that is not the first of its stanza.

    Criteria with weight 0 are not computed. When no weighted criterion can
    be computed the score is 0 and the slot falls back to corpus order.
    """
    weights = w.as_dict()
    profile = StressProfile.from_verse(candidate)
    ref = ctx.same_letter_latest

    def wanted(criterion: Criterion) -> bool:
        return weights[criterion.value] > 0

    values: Dict[Criterion, Optional[float]] = {
        Criterion.ER: score_er(profile, ctx) if wanted(Criterion.ER) else None,
        Criterion.ST: score_st(profile, ctx) if wanted(Criterion.ST) else None,
        Criterion.AC: score_ac(candidate, ref) if ref is not None and wanted(Criterion.AC) else None,
        Criterion.RI: score_ri(candidate) if wanted(Criterion.RI) else None,
        Criterion.RTC: score_rtc(candidate, ref) if ref is not None and wanted(Criterion.RTC) else None,
    }
    try:
        score = combine(values, w)
    except AllSkipped:
        logger.warning(f"Every criterion skipped for {candidate.source_id!r}; scoring it 0.0")
        score = 0.0
    return CandidateScore(
        er=values[Criterion.ER],
        st=values[Criterion.ST],
        ac=values[Criterion.AC],
        ri=values[Criterion.RI],
        rtc=values[Criterion.RTC],
        score=score,
    )


def score_candidates(
    candidates: Sequence[ScannedVerse],
    ctx: ReferenceContext,
    w: CriterionWeights,
    parallel: bool = False,
) -> List[CandidateScore]:
    """Score every candidate of a slot; results keep the candidates' order."""
    if parallel and len(candidates) > 1:
        with ThreadPoolExecutor() as pool:
            return list(pool.map(lambda verse: evaluate_candidate(verse, ctx, w), candidates))
    return [evaluate_candidate(verse, ctx, w) for verse in candidates]


def select_best(scores: Sequence[CandidateScore]) -> int:
    """Index of the highest score; the earliest candidate wins ties."""
    if not scores:
        raise ValueError("no candidate scores to select from")
    best = 0
    for position in range(1, len(scores)):
        if scores[position].score > scores[best].score:
            best = position
    return best
