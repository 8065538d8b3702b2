"""
Group assignment and greedy assembly of a poem.

A run consumes randomness in a fixed order: meter draws for unspecified
verses, then one draw per group-assignment attempt (letters in first
appearance order), then the stanza-initial verse of each stanza in slot
order. Scored slots are deterministic.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set

from opentelemetry import trace

from .constants import SpanAttributes, StageNames
from .corpus import RhymeIndex, available_meters
from .criteria import (
    CandidateScore,
    ReferenceContext,
    ReferenceMode,
    score_candidates,
    select_best,
)
from .errors import ExhaustedCandidates, Infeasible
from .rng import SeededRNG
from .scansion import ScannedVerse
from .scheme import CriterionWeights, MeterPlan, RhymeScheme, SchemeSlot, resolve_meters
from .tracing import get_tracer, instrument_stage, set_span_attributes

# Initialize logging
logger = logging.getLogger(__name__)

Requirements = Dict[str, Dict[int, int]]


@dataclass(frozen=True)
class LetterAssignment:
    groups: Dict[str, str]

    def __post_init__(self):
        keys = list(self.groups.values())
        if len(keys) != len(set(keys)):
            raise ValueError(f"assignment is not injective: {self.groups}")

    def __getitem__(self, letter: str) -> str:
        return self.groups[letter]


@dataclass
class PlacedVerse:
    slot: SchemeSlot
    meter: int
    verse: ScannedVerse
    # None for stanza-initial verses, which are drawn rather than scored
    score: Optional[CandidateScore] = None


@dataclass
class SlotReplay:
    """Every eligible candidate of one scored slot, in corpus order."""
    slot: SchemeSlot
    meter: int
    candidates: List[ScannedVerse]
    scores: List[CandidateScore]
    winner: int


@dataclass
class BuildState:
    scheme: RhymeScheme
    meters: List[int]
    weights: CriterionWeights
    reference_mode: ReferenceMode = ReferenceMode.BOTH
    seed: Optional[int] = None
    assignment: Optional[LetterAssignment] = None
    placed: List[PlacedVerse] = field(default_factory=list)
    retired_final_words: Dict[str, Set[str]] = field(default_factory=dict)
    retired_sentence_ids: Set[str] = field(default_factory=set)
    replay: List[SlotReplay] = field(default_factory=list)

    def is_eligible(self, letter: str, verse: ScannedVerse) -> bool:
        return (
            verse.final_word not in self.retired_final_words.get(letter, set())
            and verse.source_id not in self.retired_sentence_ids
        )

    def reference_context(self, slot: SchemeSlot) -> ReferenceContext:
        stanza_first = next(
            placed.verse for placed in self.placed
            if placed.slot.stanza_index == slot.stanza_index
        )
        same_letter = [placed.verse for placed in self.placed if placed.slot.letter == slot.letter]
        return ReferenceContext(
            stanza_first=stanza_first,
            previous=self.placed[-1].verse,
            same_letter_latest=same_letter[-1] if same_letter else None,
            mode=self.reference_mode,
        )

    def place(self, slot: SchemeSlot, meter: int, verse: ScannedVerse,
              score: Optional[CandidateScore] = None) -> None:
        self.placed.append(PlacedVerse(slot=slot, meter=meter, verse=verse, score=score))
        self.retired_final_words.setdefault(slot.letter, set()).add(verse.final_word)
        self.retired_sentence_ids.add(verse.source_id)


def letter_requirements(scheme: RhymeScheme, meters: Sequence[int]) -> Requirements:
    """Count the slots each letter needs per meter."""
    requirements: Requirements = {letter: {} for letter in scheme.letters()}
    for slot, meter in zip(scheme.flat, meters):
        counts = requirements[slot.letter]
        counts[meter] = counts.get(meter, 0) + 1
    return requirements


def feasible_groups(req: Requirements, index: RhymeIndex) -> Dict[str, List[str]]:
    """
    Groups that can serve each letter.

    A group qualifies when every required meter has enough distinct final
    words and the union of final words over those meters covers all of the
    letter's slots.
    """
    feasible: Dict[str, List[str]] = {}
    for letter, counts in req.items():
        total = sum(counts.values())
        feasible[letter] = [
            key for key, group in sorted(index.items())
            if all(group.distinct_supply.get(meter, 0) >= needed for meter, needed in counts.items())
            and len(group.final_words(counts)) >= total
        ]
        logger.debug(f"Letter {letter} needs {counts}: {len(feasible[letter])} feasible groups")
    return feasible


def _unserved_letter(
    letters: Sequence[str],
    feasible: Dict[str, List[str]],
    taken: Set[str],
) -> Optional[str]:
    """
    First letter, in order, that no distinct-group matching can serve.

    Kuhn's augmenting paths over the groups not in `taken`; None when every
    letter can get a group of its own.
    """
    owner: Dict[str, str] = {}

    def augment(letter: str, visited: Set[str]) -> bool:
        for key in feasible[letter]:
            if key in taken or key in visited:
                continue
            visited.add(key)
            if key not in owner or augment(owner[key], visited):
                owner[key] = letter
                return True
        return False

    for letter in letters:
        if not augment(letter, set()):
            return letter
    return None


@instrument_stage(StageNames.ASSIGN_GROUPS)
def assign_groups(feasible: Dict[str, List[str]], rng: SeededRNG) -> LetterAssignment:
    """
    Draw one distinct group per letter.

    Letters are served in the order of `feasible`. Each attempt draws
    uniformly among the letter's untried, untaken groups; a draw that would
    leave a later letter without any group is discarded and the letter
    draws again.

    Raises:
        Infeasible: Naming the first letter no complete assignment can serve
    """
    letters = list(feasible)
    blocked = _unserved_letter(letters, feasible, set())
    if blocked is not None:
        set_span_attributes(trace.get_current_span(), {SpanAttributes.INFEASIBLE_LETTER: blocked})
        raise Infeasible(blocked)

    chosen: Dict[str, str] = {}
    for position, letter in enumerate(letters):
        taken = set(chosen.values())
        options = [key for key in feasible[letter] if key not in taken]
        # a matching exists for the remaining letters, so some option always completes it
        while True:
            key = options.pop(rng.randbelow(len(options)))
            if _unserved_letter(letters[position + 1:], feasible, taken | {key}) is None:
                break
            logger.debug(f"Redrawing: letter {letter} cannot keep group {key!r}")
        chosen[letter] = key

    assignment = LetterAssignment(groups=chosen)
    logger.info(f"Letter assignment: {assignment.groups}")
    set_span_attributes(
        trace.get_current_span(),
        {SpanAttributes.ASSIGNMENT: ",".join(f"{k}={v}" for k, v in assignment.groups.items())},
    )
    return assignment


def _eligible(state: BuildState, index: RhymeIndex, slot: SchemeSlot, meter: int) -> List[ScannedVerse]:
    group = index[state.assignment[slot.letter]]
    return [verse for verse in group.by_meter.get(meter, ()) if state.is_eligible(slot.letter, verse)]


@instrument_stage(StageNames.BUILD_POEM)
def build_poem(
    scheme: RhymeScheme,
    meters: Sequence[int],
    weights: CriterionWeights,
    index: RhymeIndex,
    assignment: LetterAssignment,
    rng: SeededRNG,
    reference_mode: ReferenceMode = ReferenceMode.BOTH,
    parallel: bool = False,
) -> BuildState:
    """
    Fill the slots in order.

    Stanza-initial slots draw uniformly among the eligible verses and stay
    unscored; every other slot takes the best-scoring eligible verse, the
    earliest in corpus order on ties.

    Raises:
        ExhaustedCandidates: If a slot has nothing left after retirements
    """
    state = BuildState(
        scheme=scheme,
        meters=list(meters),
        weights=weights,
        reference_mode=reference_mode,
        seed=rng.seed,
        assignment=assignment,
    )
    tracer = get_tracer()
    for slot, meter in zip(scheme.flat, meters):
        with tracer.start_as_current_span(
            StageNames.SLOT,
            attributes={
                SpanAttributes.SLOT_INDEX: slot.verse_index + 1,
                SpanAttributes.SLOT_LETTER: slot.letter,
                SpanAttributes.SLOT_METER: meter,
                SpanAttributes.SLOT_STANZA_FIRST: slot.is_stanza_first,
            },
        ) as span:
            candidates = _eligible(state, index, slot, meter)
            span.set_attribute(SpanAttributes.CANDIDATE_COUNT, len(candidates))
            if not candidates:
                raise ExhaustedCandidates(slot.verse_index + 1, slot.letter, meter)

            if slot.is_stanza_first:
                verse = rng.choice(candidates)
                state.place(slot, meter, verse)
                logger.info(
                    f"Slot {slot.verse_index + 1} ({slot.letter}): drew {verse.source_id!r} "
                    f"among {len(candidates)} candidates"
                )
            else:
                ctx = state.reference_context(slot)
                scores = score_candidates(candidates, ctx, weights, parallel=parallel)
                winner = select_best(scores)
                for verse, score in zip(candidates, scores):
                    logger.debug(f"Slot {slot.verse_index + 1}: {verse.source_id!r} scored {score.score:.6f}")
                state.replay.append(
                    SlotReplay(slot=slot, meter=meter, candidates=candidates, scores=scores, winner=winner)
                )
                verse = candidates[winner]
                state.place(slot, meter, verse, scores[winner])
                span.set_attribute(SpanAttributes.VERSE_SCORE, scores[winner].score)
                logger.info(
                    f"Slot {slot.verse_index + 1} ({slot.letter}): chose {verse.source_id!r} "
                    f"with score {scores[winner].score:.3f} among {len(candidates)} candidates"
                )
            span.set_attribute(SpanAttributes.VERSE_SOURCE_ID, verse.source_id)
    return state


def place_verses(
    scheme: RhymeScheme,
    verses: Sequence[ScannedVerse],
    weights: CriterionWeights,
    reference_mode: ReferenceMode = ReferenceMode.BOTH,
) -> BuildState:
    """
    Score a fixed verse sequence under the same reference rules as a build.

    Used to audit an existing poem; no eligibility filtering is applied.
    """
    if len(verses) != len(scheme):
        raise ValueError(f"scheme has {len(scheme)} verses, got {len(verses)}")
    state = BuildState(
        scheme=scheme,
        meters=[verse.meter for verse in verses],
        weights=weights,
        reference_mode=reference_mode,
    )
    for slot, verse in zip(scheme.flat, verses):
        if slot.is_stanza_first:
            state.place(slot, verse.meter, verse)
            continue
        score = score_candidates([verse], state.reference_context(slot), weights)[0]
        state.place(slot, verse.meter, verse, score)
    return state


def compose(
    scheme: RhymeScheme,
    plan: MeterPlan,
    weights: CriterionWeights,
    index: RhymeIndex,
    seed: int,
    reference_mode: ReferenceMode = ReferenceMode.BOTH,
    parallel: bool = False,
) -> BuildState:
    """Resolve meters, assign groups and build the poem from a single seed."""
    rng = SeededRNG(seed)
    meters = resolve_meters(plan, available_meters(index), rng)
    logger.info(f"Meters for {scheme.render()!r}: {meters}")
    feasible = feasible_groups(letter_requirements(scheme, meters), index)
    assignment = assign_groups(feasible, rng)
    return build_poem(
        scheme, meters, weights, index, assignment, rng,
        reference_mode=reference_mode, parallel=parallel,
    )
