"""Read-back generation: grammar conversion, word fixer rules, optional
read-back error insertion and rendering for a TTS sink.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field, replace

from .parser import ParsedCommunication
from .phraseology import ALPHABET_WORDS, DIGIT_WORDS, SpokenCallsign, char_for_word

DROP = "__DROP__"

CATEGORIES = ("horizontal", "level", "speed", "handover")

RBE_KINDS = ("DIRECTION_FLIP", "VALUE_DIGIT_SWAP", "CALLSIGN_CORRUPTION")

_DIRECTION_FLIP = {"right": "left", "left": "right"}


class MalformedLine(ValueError):
    def __init__(self, lineno: int, line: str):
        super().__init__(f"line {lineno}: cannot parse rule {line!r}")
        self.lineno = lineno


class DuplicateLhs(ValueError):
    pass


class NoApplicableKind(RuntimeError):
    """Error draw fired but no allowed read-back-error kind fits the plan."""


class SinkUnavailable(RuntimeError):
    pass


class SinkTimeout(RuntimeError):
    pass


@dataclass(frozen=True)
class WordFixerRule:
    lhs: tuple[str, ...]
    rhs: tuple[str, ...] | str  # word tuple or DROP
    category: str

    @property
    def drops_values(self) -> bool:
        return self.rhs == DROP and self.category == "handover"


@dataclass
class WordFixerRules:
    rules: list[WordFixerRule]

    def by_length(self) -> list[WordFixerRule]:
        return sorted(self.rules, key=lambda r: len(r.lhs), reverse=True)

    def lint(self) -> list[str]:
        """Flag rules whose rhs re-enters another rule's lhs (not idempotent
        under repeated application) and semantically odd mappings."""
        notes = []
        lhs_set = {r.lhs for r in self.rules}
        for rule in self.rules:
            if rule.rhs == DROP:
                continue
            if rule.rhs != rule.lhs and rule.rhs in lhs_set:
                notes.append(
                    f"rhs {' '.join(rule.rhs)!r} is itself a lhs "
                    f"(rule {' '.join(rule.lhs)!r})"
                )
        return notes


def load_rules(path) -> WordFixerRules:
    """Parse rules.txt: `lhs -> rhs [category]`, rhs NONE = drop."""
    rules: list[WordFixerRule] = []
    seen_lhs = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "->" not in line or not line.endswith("]") or "[" not in line:
                raise MalformedLine(lineno, raw.rstrip("\n"))
            head, _, tail = line.partition("->")
            rhs_text, _, cat = tail.rpartition("[")
            lhs = tuple(head.split())
            category = cat.rstrip("]").strip()
            rhs_words = tuple(rhs_text.split())
            if not lhs or not rhs_words or category not in CATEGORIES:
                raise MalformedLine(lineno, raw.rstrip("\n"))
            rhs = DROP if rhs_words == ("NONE",) else rhs_words
            if lhs in seen_lhs:
                raise DuplicateLhs(" ".join(lhs))
            seen_lhs.add(lhs)
            rules.append(WordFixerRule(lhs, rhs, category))
    return WordFixerRules(rules)


@dataclass(frozen=True)
class ReadbackError:
    kind: str
    original: str
    replacement: str


@dataclass(frozen=True)
class PlanElement:
    command_words: tuple[str, ...]
    value_words: tuple[str, ...]


@dataclass(frozen=True)
class ReadbackPlan:
    elements: tuple[PlanElement, ...]
    callsign_words: tuple[str, ...]
    rbe: ReadbackError | None = None
    warnings: tuple[str, ...] = ()


def convert_grammar(p: ParsedCommunication) -> ReadbackPlan:
    """Reorder parsed entities pilot-style: commands with their values in
    utterance order, callsign moved to the end."""
    words = p.utterance.words
    elements = []
    for cmd, values in p.pairs:
        value_words: list[str] = []
        for v in values:
            value_words.extend(words[v.start : v.end])
        elements.append(PlanElement(words[cmd.start : cmd.end], tuple(value_words)))
    callsign = words[p.callsign.start : p.callsign.end] if p.callsign else ()
    return ReadbackPlan(tuple(elements), tuple(callsign))


def _fix_command(
    command: tuple[str, ...], rules: list[WordFixerRule]
) -> tuple[tuple[str, ...], bool, bool, bool]:
    """Single left-to-right pass with longest-lhs whole-word matching.

    Returns (fixed words, any rule matched, drop values, dropped command).
    """
    out: list[tuple[str, bool]] = []  # (word, produced by a rule rhs)
    matched = False
    drop_values = False
    i = 0
    while i < len(command):
        rule = None
        for candidate in rules:
            if command[i : i + len(candidate.lhs)] == candidate.lhs:
                rule = candidate
                break
        if rule is None:
            out.append((command[i], False))
            i += 1
            continue
        matched = True
        if rule.rhs == DROP:
            if rule.drops_values:
                drop_values = True
        else:
            out.extend((w, True) for w in rule.rhs)
        i += len(rule.lhs)
    # a word produced by a rule may duplicate one already in the phrase
    # (turn -> heading before an existing "heading"); keep the first only
    fixed: list[str] = []
    rule_words = {w for w, from_rule in out if from_rule}
    for word, from_rule in out:
        if word in fixed and word in rule_words:
            continue
        fixed.append(word)
    dropped = matched and not fixed
    return tuple(fixed), matched, drop_values, dropped


def apply_word_fixer(
    plan: ReadbackPlan, rules: WordFixerRules
) -> ReadbackPlan:
    """Map ATCo command phrases to pilot phrasing; values pass through
    untouched except for handover DROP rules, which drop them too."""
    ordered = rules.by_length()
    elements = []
    warnings = list(plan.warnings)
    for el in plan.elements:
        fixed, matched, drop_values, dropped = _fix_command(el.command_words, ordered)
        if not matched:
            warnings.append(
                f"no rule for command {' '.join(el.command_words)!r}; kept verbatim"
            )
        values = () if drop_values else el.value_words
        if dropped and not values:
            continue
        elements.append(PlanElement(fixed, values))
    return replace(plan, elements=tuple(elements), warnings=tuple(warnings))


def _applicable_kinds(plan: ReadbackPlan, allowed) -> list[str]:
    kinds = []
    for kind in RBE_KINDS:
        if kind not in allowed:
            continue
        if kind == "DIRECTION_FLIP":
            if any(
                w in _DIRECTION_FLIP for el in plan.elements for w in el.command_words
            ):
                kinds.append(kind)
        elif kind == "VALUE_DIGIT_SWAP":
            if any(
                _is_digit_word(w) for el in plan.elements for w in el.value_words
            ):
                kinds.append(kind)
        elif kind == "CALLSIGN_CORRUPTION":
            if plan.callsign_words:
                kinds.append(kind)
    return kinds


def _is_digit_word(word: str) -> bool:
    c = char_for_word(word)
    return c is not None and c.isdigit()


def insert_readback_error(
    plan: ReadbackPlan,
    probability: float,
    rng: random.Random,
    kinds=RBE_KINDS,
) -> tuple[ReadbackPlan, bool]:
    """With the given probability, insert exactly one read-back error of a
    uniformly chosen applicable kind. Deterministic for a given rng state."""
    if not 0.0 <= probability <= 1.0:
        raise ValueError(f"probability out of range: {probability}")
    if rng.random() >= probability:
        return plan, False
    applicable = _applicable_kinds(plan, kinds)
    if not applicable:
        raise NoApplicableKind(
            f"none of {tuple(kinds)} applies to the current plan"
        )
    kind = rng.choice(applicable)
    if kind == "DIRECTION_FLIP":
        sites = [
            (ei, wi)
            for ei, el in enumerate(plan.elements)
            for wi, w in enumerate(el.command_words)
            if w in _DIRECTION_FLIP
        ]
        ei, wi = rng.choice(sites)
        el = plan.elements[ei]
        original = el.command_words[wi]
        replacement = _DIRECTION_FLIP[original]
        new_words = (
            el.command_words[:wi] + (replacement,) + el.command_words[wi + 1 :]
        )
        new_el = PlanElement(new_words, el.value_words)
    elif kind == "VALUE_DIGIT_SWAP":
        sites = [
            (ei, wi)
            for ei, el in enumerate(plan.elements)
            for wi, w in enumerate(el.value_words)
            if _is_digit_word(w)
        ]
        ei, wi = rng.choice(sites)
        el = plan.elements[ei]
        original = el.value_words[wi]
        others = [w for w in DIGIT_WORDS.values() if w != original]
        replacement = rng.choice(others)
        new_values = el.value_words[:wi] + (replacement,) + el.value_words[wi + 1 :]
        new_el = PlanElement(el.command_words, new_values)
    else:  # CALLSIGN_CORRUPTION
        wi = rng.randrange(len(plan.callsign_words))
        original = plan.callsign_words[wi]
        if _is_digit_word(original):
            pool = [w for w in DIGIT_WORDS.values() if w != original]
        else:
            pool = [w for w in ALPHABET_WORDS.values() if w != original]
        replacement = rng.choice(pool)
        new_callsign = (
            plan.callsign_words[:wi] + (replacement,) + plan.callsign_words[wi + 1 :]
        )
        error = ReadbackError(kind, original, replacement)
        return replace(plan, callsign_words=new_callsign, rbe=error), True
    error = ReadbackError(kind, original, replacement)
    new_elements = plan.elements[:ei] + (new_el,) + plan.elements[ei + 1 :]
    return replace(plan, elements=new_elements, rbe=error), True


def render_readback(plan: ReadbackPlan) -> str:
    """Space-joined read-back: command then value words per element, callsign
    words last."""
    words: list[str] = []
    for el in plan.elements:
        words.extend(el.command_words)
        words.extend(el.value_words)
    words.extend(plan.callsign_words)
    return " ".join(words)


class NullSink:
    """Accepts everything, does nothing (tests, dry runs)."""

    def send(self, text: str) -> None:
        pass


class FileSink:
    """Appends one text line per response."""

    def __init__(self, path):
        self.path = path

    def send(self, text: str) -> None:
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(text + "\n")


def send_to_tts(text: str, sink, timeout: float = 2.0) -> bool:
    """Deliver text to the sink exactly once; failures surface as
    SinkUnavailable, slow sinks as SinkTimeout."""
    started = time.monotonic()
    try:
        sink.send(text)
    except SinkTimeout:
        raise
    except Exception as exc:
        raise SinkUnavailable(str(exc)) from exc
    if time.monotonic() - started > timeout:
        raise SinkTimeout(f"sink exceeded {timeout}s")
    return True
