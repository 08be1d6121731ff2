"""Radiotelephony vocabulary, text normalization and callsign verbalization.

Everything downstream (tagging, re-ranking, read-back generation) works on
the lowercase word sequences produced here.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, field

DIGIT_WORDS = {
    "0": "zero",
    "1": "one",
    "2": "two",
    "3": "three",
    "4": "four",
    "5": "five",
    "6": "six",
    "7": "seven",
    "8": "eight",
    "9": "nine",
}

ALPHABET_WORDS = {
    "A": "alfa",
    "B": "bravo",
    "C": "charlie",
    "D": "delta",
    "E": "echo",
    "F": "foxtrot",
    "G": "golf",
    "H": "hotel",
    "I": "india",
    "J": "juliett",
    "K": "kilo",
    "L": "lima",
    "M": "mike",
    "N": "november",
    "O": "oscar",
    "P": "papa",
    "Q": "quebec",
    "R": "romeo",
    "S": "sierra",
    "T": "tango",
    "U": "uniform",
    "V": "victor",
    "W": "whiskey",
    "X": "xray",
    "Y": "yankee",
    "Z": "zulu",
}

# Spoken variants accepted on input; output always uses the canonical word.
INPUT_VARIANTS = {
    "niner": "nine",
    "alpha": "alfa",
    "juliet": "juliett",
    "x-ray": "xray",
}

_WORD_TO_CHAR = {w: c for c, w in DIGIT_WORDS.items()}
_WORD_TO_CHAR.update({w: c for c, w in ALPHABET_WORDS.items()})
for variant, canonical in INPUT_VARIANTS.items():
    _WORD_TO_CHAR[variant] = _WORD_TO_CHAR[canonical]

_CALLSIGN_RE = re.compile(r"^[A-Z0-9]{2,}$")
_PUNCT_RE = re.compile(r"[^a-z0-9]+")


class InvalidChar(ValueError):
    """Character outside [0-9A-Z] passed to spell_char."""


class UnknownDesignator(KeyError):
    """Callsign prefix looks like an airline designator but is not in the table."""


class InvalidCallsign(ValueError):
    """String does not satisfy the ICAO callsign pattern."""


@dataclass(frozen=True)
class Token:
    text: str
    index: int


@dataclass(frozen=True)
class Utterance:
    tokens: tuple[Token, ...]
    speaker_role: str = "ATCO"
    source_id: str = ""

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(t.text for t in self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class IcaoCallsign:
    value: str

    def __post_init__(self):
        if not _CALLSIGN_RE.match(self.value):
            raise InvalidCallsign(self.value)


@dataclass(frozen=True)
class SpokenCallsign:
    words: tuple[str, ...]

    def __str__(self) -> str:
        return " ".join(self.words)

    def __len__(self) -> int:
        return len(self.words)


@dataclass
class AirlineDesignatorTable:
    """ICAO 3-letter designator -> spoken telephony word(s)."""

    entries: dict[str, str] = field(default_factory=dict)

    @classmethod
    def load(cls, path) -> "AirlineDesignatorTable":
        entries = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                designator, _, telephony = line.partition("\t")
                designator = designator.strip().upper()
                telephony = telephony.strip().lower()
                if len(designator) != 3 or not designator.isalpha() or not telephony:
                    raise ValueError(f"bad designator line: {line!r}")
                entries[designator] = telephony
        return cls(entries)

    def lookup(self, designator: str) -> str | None:
        return self.entries.get(designator.upper())

    def telephony_words(self) -> set[str]:
        words = set()
        for value in self.entries.values():
            words.update(value.split())
        return words


def normalize(raw_text: str, speaker_role: str = "ATCO", source_id: str = "") -> Utterance:
    """Lowercase, strip punctuation and split into indexed tokens."""
    cleaned = _PUNCT_RE.sub(" ", raw_text.lower())
    tokens = tuple(Token(w, i) for i, w in enumerate(cleaned.split()))
    return Utterance(tokens, speaker_role, source_id)


def render(u: Utterance) -> str:
    return " ".join(u.words)


def spell_char(c: str) -> str:
    if c in DIGIT_WORDS:
        return DIGIT_WORDS[c]
    if c in ALPHABET_WORDS:
        return ALPHABET_WORDS[c]
    raise InvalidChar(c)


def char_for_word(word: str) -> str | None:
    """Inverse of spell_char, tolerant of spoken variants (niner, alpha...)."""
    return _WORD_TO_CHAR.get(word)


def is_spelling_word(word: str) -> bool:
    return word in _WORD_TO_CHAR


def verbalize_callsign(
    cs: IcaoCallsign, table: AirlineDesignatorTable, strict: bool = False
) -> SpokenCallsign:
    """Expand an ICAO callsign into its spoken word sequence.

    A known 3-letter designator prefix becomes its telephony word(s); every
    remaining character is spelled out. Without a known prefix the whole
    string is spelled character by character.
    """
    value = cs.value
    words: list[str] = []
    rest = value
    prefix = value[:3]
    if len(value) >= 4 and prefix.isalpha():
        telephony = table.lookup(prefix)
        if telephony is not None:
            words.extend(telephony.split())
            rest = value[3:]
        elif strict:
            raise UnknownDesignator(prefix)
    words.extend(spell_char(c) for c in rest)
    return SpokenCallsign(tuple(words))


def deverbalize_callsign(
    spoken: SpokenCallsign, table: AirlineDesignatorTable
) -> IcaoCallsign | None:
    """Best-effort inverse of verbalize_callsign; None when not recoverable."""
    words = list(spoken.words)
    prefix = ""
    if words and not is_spelling_word(words[0]):
        telephony_to_icao = {v: k for k, v in table.entries.items()}
        if words[0] not in telephony_to_icao:
            return None
        prefix = telephony_to_icao[words[0]]
        words = words[1:]
    chars = []
    for w in words:
        c = char_for_word(w)
        if c is None:
            return None
        chars.append(c)
    value = prefix + "".join(chars)
    if not _CALLSIGN_RE.match(value):
        return None
    return IcaoCallsign(value)


MIN_VARIANT_WORDS = 3


def shortened_variants(full: SpokenCallsign) -> list[SpokenCallsign]:
    """Full form plus suffixes of >= 3 words, as pilots shorten callsigns."""
    if not full.words:
        raise ValueError("empty callsign")
    variants = [full]
    for drop in range(1, len(full.words) - MIN_VARIANT_WORDS + 1):
        variants.append(SpokenCallsign(full.words[drop:]))
    # full form first, dedupe while keeping order
    seen = set()
    unique = []
    for v in variants:
        if v.words not in seen:
            seen.add(v.words)
            unique.append(v)
    return unique


def random_icao_callsign(rng, table: AirlineDesignatorTable) -> IcaoCallsign:
    """Draw a plausible designator + suffix callsign (test/corpus helper)."""
    designator = rng.choice(sorted(table.entries))
    length = rng.randint(2, 4)
    alphabet = string.digits + string.ascii_uppercase
    # first suffix char is a digit, as in real flight numbers
    suffix = rng.choice(string.digits) + "".join(
        rng.choice(alphabet) for _ in range(length - 1)
    )
    return IcaoCallsign(designator + suffix)
