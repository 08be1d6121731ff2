"""High-level entity parser: callsign/command/value tagging over utterances.

The default tagger is grammar based and deterministic. An external tagger
(e.g. an ML model behind a service) can be plugged in; its output is BIO
repaired before span assembly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .phraseology import (
    AirlineDesignatorTable,
    Utterance,
    is_spelling_word,
    normalize,
)


class EntityClass(Enum):
    CALLSIGN = "callsign"
    COMMAND = "command"
    VALUE = "value"


class Tag(Enum):
    B_CALLSIGN = "B-CALLSIGN"
    I_CALLSIGN = "I-CALLSIGN"
    B_COMMAND = "B-COMMAND"
    I_COMMAND = "I-COMMAND"
    B_VALUE = "B-VALUE"
    I_VALUE = "I-VALUE"
    O = "O"


_BEGIN = {
    EntityClass.CALLSIGN: Tag.B_CALLSIGN,
    EntityClass.COMMAND: Tag.B_COMMAND,
    EntityClass.VALUE: Tag.B_VALUE,
}
_INSIDE = {
    EntityClass.CALLSIGN: Tag.I_CALLSIGN,
    EntityClass.COMMAND: Tag.I_COMMAND,
    EntityClass.VALUE: Tag.I_VALUE,
}
_TAG_CLASS = {
    Tag.B_CALLSIGN: EntityClass.CALLSIGN,
    Tag.I_CALLSIGN: EntityClass.CALLSIGN,
    Tag.B_COMMAND: EntityClass.COMMAND,
    Tag.I_COMMAND: EntityClass.COMMAND,
    Tag.B_VALUE: EntityClass.VALUE,
    Tag.I_VALUE: EntityClass.VALUE,
}

# words that may continue a digit group inside a value span
VALUE_CONTINUATION_WORDS = {"hundred", "thousand", "decimal", "point"}


class AdapterTagArity(ValueError):
    """External tagger returned a tag list of the wrong length."""


@dataclass(frozen=True)
class EntitySpan:
    cls: EntityClass
    start: int
    end: int  # exclusive

    def words(self, u: Utterance) -> tuple[str, ...]:
        return u.words[self.start : self.end]


@dataclass
class ParsedCommunication:
    utterance: Utterance
    callsign: EntitySpan | None
    pairs: list[tuple[EntitySpan, list[EntitySpan]]]
    unattached_values: list[EntitySpan] = field(default_factory=list)

    @property
    def no_callsign(self) -> bool:
        return self.callsign is None

    def spans(self) -> list[EntitySpan]:
        out = []
        if self.callsign is not None:
            out.append(self.callsign)
        for cmd, values in self.pairs:
            out.append(cmd)
            out.extend(values)
        out.extend(self.unattached_values)
        return sorted(out, key=lambda s: s.start)


@dataclass
class PhraseologyGrammar:
    """Command phrases grouped by category plus value unit phrases."""

    command_lexicon: dict[str, list[tuple[str, ...]]]
    value_units: list[tuple[str, ...]]

    SECTIONS = ("horizontal", "level", "speed", "handover")

    @classmethod
    def load(cls, path) -> "PhraseologyGrammar":
        commands: dict[str, list[tuple[str, ...]]] = {s: [] for s in cls.SECTIONS}
        units: list[tuple[str, ...]] = []
        section = None
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if line.startswith("[") and line.endswith("]"):
                    section = line[1:-1]
                    continue
                phrase = tuple(line.split())
                if section == "values":
                    units.append(phrase)
                elif section in commands:
                    commands[section].append(phrase)
                else:
                    raise ValueError(f"phrase outside known section: {line!r}")
        return cls(commands, units)

    def command_phrases(self) -> list[tuple[str, ...]]:
        out = []
        for phrases in self.command_lexicon.values():
            out.extend(phrases)
        return out

    def category_of(self, phrase: tuple[str, ...]) -> str | None:
        for category, phrases in self.command_lexicon.items():
            if phrase in phrases:
                return category
        return None


def _is_digit_word(word: str) -> bool:
    from .phraseology import char_for_word

    c = char_for_word(word)
    return c is not None and c.isdigit()


def _is_value_word(word: str) -> bool:
    return _is_digit_word(word) or word in VALUE_CONTINUATION_WORDS


def _match_callsign_prefix(
    words: tuple[str, ...], table: AirlineDesignatorTable
) -> int:
    """Length of the callsign span anchored at token 0, or 0 if none."""
    telephony = table.telephony_words()
    i = 0
    if words and words[i] in telephony:
        i += 1
    start_spelling = i
    while i < len(words) and is_spelling_word(words[i]):
        i += 1
    if i == start_spelling:  # need at least one spelled character
        return 0
    return i


def _match_command(
    words: tuple[str, ...], pos: int, phrases: list[tuple[str, ...]]
) -> tuple[str, ...] | None:
    """Longest command phrase starting at pos, or None."""
    best = None
    for phrase in phrases:
        if words[pos : pos + len(phrase)] == phrase:
            if best is None or len(phrase) > len(best):
                best = phrase
    return best


def _match_value(
    words: tuple[str, ...], pos: int, units: list[tuple[str, ...]]
) -> int:
    """Length of a value span at pos: optional unit phrase + digit group."""
    i = pos
    for unit in sorted(units, key=len, reverse=True):
        if words[i : i + len(unit)] == unit:
            i += len(unit)
            break
    start_digits = i
    while i < len(words) and _is_value_word(words[i]):
        i += 1
    if i == start_digits:  # a unit phrase alone is not a value
        return 0
    return i - pos


def tag_tokens(
    u: Utterance, g: PhraseologyGrammar, table: AirlineDesignatorTable
) -> list[Tag]:
    """One BIO tag per token; unrecognized tokens stay O."""
    words = u.words
    tags = [Tag.O] * len(words)
    phrases = g.command_phrases()

    i = _match_callsign_prefix(words, table)
    if i > 0:
        tags[0] = Tag.B_CALLSIGN
        for k in range(1, i):
            tags[k] = Tag.I_CALLSIGN

    while i < len(words):
        cmd = _match_command(words, i, phrases)
        if cmd is not None:
            tags[i] = Tag.B_COMMAND
            for k in range(i + 1, i + len(cmd)):
                tags[k] = Tag.I_COMMAND
            i += len(cmd)
            continue
        vlen = _match_value(words, i, g.value_units)
        if vlen > 0:
            tags[i] = Tag.B_VALUE
            for k in range(i + 1, i + vlen):
                tags[k] = Tag.I_VALUE
            i += vlen
            continue
        i += 1
    return tags


def repair_bio(tags: list[Tag]) -> list[Tag]:
    """Rewrite invalid I-x tags (no preceding B-x/I-x of same class) to B-x."""
    repaired = list(tags)
    prev_cls = None
    for i, tag in enumerate(repaired):
        cls = _TAG_CLASS.get(tag)
        if tag in _INSIDE.values() and cls != prev_cls:
            repaired[i] = _BEGIN[cls]
        prev_cls = _TAG_CLASS.get(repaired[i])
    return repaired


def spans_from_tags(tags: list[Tag]) -> list[EntitySpan]:
    spans = []
    start = None
    cur_cls = None
    for i, tag in enumerate(tags):
        cls = _TAG_CLASS.get(tag)
        begins = tag in _BEGIN.values()
        if start is not None and (cls != cur_cls or begins):
            spans.append(EntitySpan(cur_cls, start, i))
            start = None
        if begins:
            start = i
            cur_cls = cls
    if start is not None:
        spans.append(EntitySpan(cur_cls, start, len(tags)))
    return spans


class EntityParser:
    """Immutable after construction; register an external tagger before use."""

    def __init__(self, grammar: PhraseologyGrammar, table: AirlineDesignatorTable):
        self.grammar = grammar
        self.table = table
        self._adapter = None

    def register_external_tagger(self, adapter) -> None:
        """adapter: callable(Utterance) -> list[Tag], one tag per token."""
        self._adapter = adapter

    def tag(self, u: Utterance) -> list[Tag]:
        if self._adapter is not None:
            tags = list(self._adapter(u))
            if len(tags) != len(u):
                raise AdapterTagArity(
                    f"adapter returned {len(tags)} tags for {len(u)} tokens"
                )
            return repair_bio(tags)
        return tag_tokens(u, self.grammar, self.table)

    def parse(self, u: Utterance) -> ParsedCommunication:
        tags = self.tag(u)
        spans = spans_from_tags(tags)
        callsign = None
        pairs: list[tuple[EntitySpan, list[EntitySpan]]] = []
        unattached: list[EntitySpan] = []
        for span in spans:
            if span.cls is EntityClass.CALLSIGN and callsign is None:
                callsign = span
            elif span.cls is EntityClass.COMMAND:
                pairs.append((span, []))
            elif span.cls is EntityClass.VALUE:
                if pairs:
                    pairs[-1][1].append(span)
                else:
                    unattached.append(span)  # DanglingValue: kept as diagnostic
        return ParsedCommunication(u, callsign, pairs, unattached)


def render_tagged(p: ParsedCommunication) -> str:
    """Inline <callsign>/<command>/<value> form; O tokens rendered bare."""
    words = p.utterance.words
    span_at = {s.start: s for s in p.spans()}
    parts = []
    i = 0
    while i < len(words):
        span = span_at.get(i)
        if span is not None:
            name = span.cls.value
            parts.append(f"<{name}>")
            parts.extend(words[span.start : span.end])
            parts.append(f"</{name}>")
            i = span.end
        else:
            parts.append(words[i])
            i += 1
    return " ".join(parts)


def parse_tagged(line: str) -> tuple[tuple[str, ...], list[EntitySpan]]:
    """Read one line in the render_tagged format back into tokens + spans."""
    tokens: list[str] = []
    spans: list[EntitySpan] = []
    open_cls = None
    start = 0
    for part in line.split():
        if part.startswith("</") and part.endswith(">"):
            name = part[2:-1]
            cls = EntityClass(name)
            if open_cls is not cls:
                raise ValueError(f"mismatched closing tag: {part}")
            spans.append(EntitySpan(cls, start, len(tokens)))
            open_cls = None
        elif part.startswith("<") and part.endswith(">"):
            open_cls = EntityClass(part[1:-1])
            start = len(tokens)
        else:
            tokens.append(part)
    if open_cls is not None:
        raise ValueError("unclosed tag")
    return tuple(tokens), spans


def parsed_from_tagged(line: str) -> ParsedCommunication:
    """Rebuild a ParsedCommunication from a tagged-corpus line."""
    tokens, spans = parse_tagged(line)
    u = normalize(" ".join(tokens))
    callsign = None
    pairs: list[tuple[EntitySpan, list[EntitySpan]]] = []
    unattached: list[EntitySpan] = []
    for span in sorted(spans, key=lambda s: s.start):
        if span.cls is EntityClass.CALLSIGN and callsign is None:
            callsign = span
        elif span.cls is EntityClass.COMMAND:
            pairs.append((span, []))
        elif span.cls is EntityClass.VALUE:
            if pairs:
                pairs[-1][1].append(span)
            else:
                unattached.append(span)
    return ParsedCommunication(u, callsign, pairs, unattached)
