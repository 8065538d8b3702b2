"""Shared fixtures: reference poems as scansions, candidate sets and synthetic corpora."""

import json
import random

import pytest

from core.corpus import CorpusEntry, build_index
from core.scansion import display_from_scansion, parse_scansion

# First poem, scheme AABB, every verse of meter 10
RENOVOU = "Re/no/v#ou/se a in/ves/t#i/da/ fe/bril/m#en/te."
FAVELA = "da/ Fa/v#e/la/ ba/t#i/am/nos/ de/ fr#en/te."
QUASE = "Qu#a/se/ t#u/do/ es/t#á/ s#e/co/ de/ s#e/de..."
TROPA = "A/ tr#o/pa/ com/ba/l#i/da a/ba/l#ou à/ t#ar/de."

# Other candidates for the second slot, in corpus order around FAVELA
DESLUMBRAVA = "Des/lum/br#a/vaas/ a/#in/da/ o O/ri/#en/te."
BATALHA = "A/ ba/t#a/lha/ pa/re/c#ia/ i/mi/n#en/te."
E_O_DIA = "E o/ d#ia/ de/ri/v#o/u/ tran/qui/la/m#en/te."
DESCE = "D#es/ce/ por/ a/l#i/ a/ gu#ar/da/ da/ fr#en/te."

# Other candidates for the third slot
PARECE = "Pa/r#e/ce/ di/mi/nu/#ir/ de al/ti/t#u/de."
ALIMENTA = "A/li/m#en/ta/o e/ mi/t#i/ga/lhe a/ s#e/de."

# Third poem, meters 10 9 9 10
THIRD_POEM = [
    "ha/v#er/ re/flu/#í/do/ s#o/bre/ s#i/ m#es/mo.",
    "#E/ra/ o #úl/ti/mo,/ na/qu#e/le/ r#u/mo.",
    "N#ão/ f#oi/ #u/ma/ c#ar/ga,/ f#oi/ um/ b#o/te.",
    "A/ for/ma/ç#ão/ bra/si/l#ei/ra/ no/ N#or/te.",
]

# Fourth poem, scheme AABB; the stress marks give meter 9 to its middle verses
FOURTH_POEM = [
    "A/ vi/t#ó/ri/a/ vi/r#ia/ por/ s#i/ m#es/ma.",
    "O/ as/p#ec/to/ re/du/z#ia/lhe a/ f#a/ma.",
    "Vol/v#i/am/ à im/pa/ci/#ên/cia he/r#ó/i/ca.",
    "D#i/lo/ #u/ma/ com/pa/ra/ç#ã/o his/t#ó/ri/ca.",
]

SONNET_SCHEME = "ABAB ABAB CDC CDC"
SONNET = [
    "Su/c#e/dem/se/ m#e/ses/ e #a/nos/ ar/d#en/tes.",
    "é/ #u/ma/ di/#á/te/se/ e é #u/ma/ s#ín/te/se.",
    "Vi/v#ia/se à a/ven/t#u/ra,/ de ex/pe/di/#en/tes.",
    "Hi/p#ó/te/ses/ s#o/bre/ a/ s#u/a/ g#ê/ne/se.",
    "Des/c#e/ram/ r#ui/do/sa/men/te As/ ver/t#en/tes.",
    "Os/ ad/ver/s#á/rios/ a/co/to/ve/l#a/vam/se.",
    "#Es/te/ é/ um/ r#i/o/ Sem/ a/flu/#en/tes.",
    "O/ con/tem/pla/t#i/vo,/ en/t#ão,/ le/v#an/ta/se.",
    "F#oi,/ Sem/ ma/i/#or/ e/x#a/me, a/pro/v#a/do.",
    "#O/ra,/ #es/te/ f#a/to/ #e/ra um/ a/v#i/so.",
    "N#a/da/ re/fe/r#i/a/ s#o/bre o/ pa/ss#a/do.",
    "T#i/nha/ m#e/i/o/ ca/m#i/nho/ an/d#a/do.",
    "Gu#ar/daa/ c#o/mo/ ca/pi/t#al/ pre/ci/#o/so.",
    "#E/ra,/ c#er/to,/ o i/ni/m#i/go a/ne/l#a/do.",
]

# Every distinct scansion line above
ALL_LINES = list(dict.fromkeys(
    [RENOVOU, FAVELA, QUASE, TROPA, DESLUMBRAVA, BATALHA, E_O_DIA, DESCE, PARECE, ALIMENTA]
    + THIRD_POEM + FOURTH_POEM + SONNET
))

# "te" and "de" groups for reproducing the first poem; v1 opens the poem
FIRST_POEM_CORPUS = [
    ("v1", RENOVOU),
    ("deslumbrava", DESLUMBRAVA),
    ("favela", FAVELA),
    ("batalha", BATALHA),
    ("e-o-dia", E_O_DIA),
    ("desce", DESCE),
    ("parece", PARECE),
    ("tropa", TROPA),
    ("quase", QUASE),
    ("alimenta", ALIMENTA),
]

STEMS = [a + b for a in "bcdfglmnprstv" for b in ("", "r", "l")]
LAST_SYLLABLES = ["te", "de", "mo", "so"]
SYLLABLE_POOL = ["ba", "ca", "de", "di", "lo", "mu", "te", "se", "ção", "ê", "u", "tro", "lá", "nha"]


def verse(scansion, source_id="s"):
    return parse_scansion(scansion, source_id=source_id)


def entries_from(pairs):
    return [
        CorpusEntry(id=source_id, text=display_from_scansion(scansion), scansions=(scansion,))
        for source_id, scansion in pairs
    ]


def synthetic_scansion(meter, last, stem, stresses=()):
    """
    A verse of the given meter whose final word is stem + "e" + last.

    The meter-th syllable is stressed; `stresses` adds earlier stresses.
    """
    parts = ["b#a" if position in stresses else "ba" for position in range(1, meter)]
    parts.append(f"{stem}#e")
    return "/ ".join(parts) + f"/{last}."


def synthetic_corpus(rnd, size, meters=(8, 9, 10), lasts=LAST_SYLLABLES):
    pairs = []
    for number in range(size):
        meter = rnd.choice(meters)
        stresses = {p for p in range(1, meter) if rnd.random() < 0.3}
        stem = rnd.choice(STEMS)
        pairs.append((f"s{number:04d}", synthetic_scansion(meter, rnd.choice(lasts), stem, stresses)))
    return pairs


def random_scansion(rnd):
    """A random, well-formed scansion with diacritics and clitic groups."""
    count = rnd.randint(1, 12)
    segments = []
    for _ in range(count):
        syllable = rnd.choice(SYLLABLE_POOL)
        if rnd.random() < 0.15:
            syllable = syllable + " " + rnd.choice(SYLLABLE_POOL)
        if rnd.random() < 0.4:
            vowel_at = next(i for i, c in enumerate(syllable) if c in "aeiouáâãéêíóôõú")
            syllable = syllable[:vowel_at] + "#" + syllable[vowel_at:]
        segments.append(syllable)
    if not any("#" in s for s in segments):
        last = segments[-1]
        vowel_at = next(i for i, c in enumerate(last) if c in "aeiouáâãéêíóôõú")
        segments[-1] = last[:vowel_at] + "#" + last[vowel_at:]
    if rnd.random() < 0.5:
        segments[-1] += rnd.choice([".", ",", "...", "!", "?", ";"])
    return "/".join(segments)


@pytest.fixture
def first_poem_index():
    return build_index(entries_from(FIRST_POEM_CORPUS))


@pytest.fixture
def synthetic_pairs():
    """30 sentences over the "te" and "de" groups, every one of meter 10."""
    rnd = random.Random(20240501)
    return synthetic_corpus(rnd, 30, meters=(10,), lasts=("te", "de"))


@pytest.fixture
def corpus_file(tmp_path, synthetic_pairs):
    path = tmp_path / "corpus.jsonl"
    lines = [
        json.dumps({"id": source_id, "text": display_from_scansion(scansion), "scansions": [scansion]},
                   ensure_ascii=False)
        for source_id, scansion in synthetic_pairs
    ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class PickingRNG:
    """Stands in for SeededRNG: stanza-initial draws pick a named sentence."""

    def __init__(self, preferred, seed=0):
        self.preferred = list(preferred)
        self.seed = seed

    def randbelow(self, n):
        return 0

    def choice(self, seq):
        for verse_ in seq:
            if verse_.source_id in self.preferred:
                return verse_
        return seq[0]
