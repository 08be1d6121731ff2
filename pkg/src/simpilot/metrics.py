"""Evaluation harness: WER, entity-restricted WER, ICAO callsign accuracy,
and per-class precision/recall/F1 with corpus-level reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .parser import EntityClass, EntitySpan


class EmptyReference(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class NoCallsignInCorpus(ValueError):
    pass


@dataclass
class AlignmentCounts:
    S: int = 0
    I: int = 0
    D: int = 0
    N: int = 0
    C: int = 0

    def __add__(self, other: "AlignmentCounts") -> "AlignmentCounts":
        return AlignmentCounts(
            self.S + other.S,
            self.I + other.I,
            self.D + other.D,
            self.N + other.N,
            self.C + other.C,
        )


# alignment ops: match/sub consume (ref, hyp), deletion consumes ref,
# insertion consumes hyp
OP_MATCH, OP_SUB, OP_DEL, OP_INS = "C", "S", "D", "I"


def align_ops(ref, hyp) -> list[tuple[str, int, int]]:
    """Minimal unit-cost edit script as (op, ref_index, hyp_index) steps.

    Ties prefer substitution over insertion+deletion, and consume the
    reference as early as possible.
    """
    ref = list(ref)
    hyp = list(hyp)
    n, m = len(ref), len(hyp)
    cost = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        cost[i][0] = i
    for j in range(1, m + 1):
        cost[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            sub = cost[i - 1][j - 1] + (0 if ref[i - 1] == hyp[j - 1] else 1)
            dele = cost[i - 1][j] + 1
            ins = cost[i][j - 1] + 1
            cost[i][j] = min(sub, dele, ins)
    ops: list[tuple[str, int, int]] = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            sub = cost[i - 1][j - 1] + (0 if ref[i - 1] == hyp[j - 1] else 1)
            if cost[i][j] == sub:
                op = OP_MATCH if ref[i - 1] == hyp[j - 1] else OP_SUB
                ops.append((op, i - 1, j - 1))
                i -= 1
                j -= 1
                continue
        if i > 0 and cost[i][j] == cost[i - 1][j] + 1:
            ops.append((OP_DEL, i - 1, -1))
            i -= 1
            continue
        ops.append((OP_INS, -1, j - 1))
        j -= 1
    ops.reverse()
    return ops


def align(ref, hyp) -> AlignmentCounts:
    """Substitution/insertion/deletion counts of a minimal-edit alignment."""
    counts = AlignmentCounts(N=len(list(ref)))
    for op, _, _ in align_ops(ref, hyp):
        if op == OP_MATCH:
            counts.C += 1
        elif op == OP_SUB:
            counts.S += 1
        elif op == OP_DEL:
            counts.D += 1
        else:
            counts.I += 1
    return counts


def wer(counts: AlignmentCounts) -> float:
    if counts.N == 0:
        raise EmptyReference("reference is empty")
    return (counts.I + counts.D + counts.S) / counts.N * 100.0


def project_span(ref, hyp, span: EntitySpan) -> list[str]:
    """Hypothesis words aligned against the reference span (the standard way
    to locate an entity region in ASR output without gold spans)."""
    hyp = list(hyp)
    aligned_hyp_positions = [
        hi
        for op, ri, hi in align_ops(ref, hyp)
        if op in (OP_MATCH, OP_SUB) and span.start <= ri < span.end
    ]
    if not aligned_hyp_positions:
        return []
    lo, hi_ = min(aligned_hyp_positions), max(aligned_hyp_positions)
    return hyp[lo : hi_ + 1]


def entity_wer(refs, hyps) -> float:
    """WER over callsign regions only.

    refs: list of (ref_words, callsign_span or None); hyps: list of word
    sequences, line-aligned with refs.
    """
    if len(refs) != len(hyps):
        raise LengthMismatch(f"{len(refs)} refs vs {len(hyps)} hyps")
    total = AlignmentCounts()
    any_callsign = False
    for (ref_words, span), hyp_words in zip(refs, hyps):
        if span is None:
            continue
        any_callsign = True
        ref_region = list(ref_words[span.start : span.end])
        hyp_region = project_span(ref_words, hyp_words, span)
        total = total + align(ref_region, hyp_region)
    if not any_callsign:
        raise NoCallsignInCorpus("no reference carries a callsign span")
    return wer(total)


def callsign_accuracy(ref_icao, predicted) -> float:
    """Exact ICAO string match rate; a missing prediction counts as wrong."""
    ref_icao = list(ref_icao)
    predicted = list(predicted)
    if len(ref_icao) != len(predicted):
        raise LengthMismatch(f"{len(ref_icao)} refs vs {len(predicted)} predictions")
    if not ref_icao:
        raise EmptyReference("no reference callsigns")
    hits = sum(
        1
        for r, p in zip(ref_icao, predicted)
        if p is not None and r.value == p.value
    )
    return hits / len(ref_icao) * 100.0


@dataclass
class ClassCounts:
    counts: dict = field(default_factory=dict)  # EntityClass -> [TP, FP, FN]

    def _slot(self, cls: EntityClass) -> list[int]:
        return self.counts.setdefault(cls, [0, 0, 0])

    def add_tp(self, cls, k=1):
        self._slot(cls)[0] += k

    def add_fp(self, cls, k=1):
        self._slot(cls)[1] += k

    def add_fn(self, cls, k=1):
        self._slot(cls)[2] += k

    def tp(self, cls) -> int:
        return self._slot(cls)[0]

    def fp(self, cls) -> int:
        return self._slot(cls)[1]

    def fn(self, cls) -> int:
        return self._slot(cls)[2]

    def __add__(self, other: "ClassCounts") -> "ClassCounts":
        merged = ClassCounts()
        for src in (self, other):
            for cls, (tp, fp, fn) in src.counts.items():
                slot = merged._slot(cls)
                slot[0] += tp
                slot[1] += fp
                slot[2] += fn
        return merged


@dataclass(frozen=True)
class Prf1:
    precision: float
    recall: float
    f1: float
    undefined: bool = False  # zero denominator hit somewhere


def prf1(counts: ClassCounts) -> dict:
    """Per-class precision (TP/(TP+FP)), recall (TP/(TP+FN)) and their
    harmonic mean; zero denominators give 0 with the undefined flag set."""
    out = {}
    for cls in EntityClass:
        tp, fp, fn = counts.tp(cls), counts.fp(cls), counts.fn(cls)
        undefined = False
        if tp + fp == 0:
            p, undefined = 0.0, True
        else:
            p = tp / (tp + fp)
        if tp + fn == 0:
            r, undefined = 0.0, True
        else:
            r = tp / (tp + fn)
        if 2 * tp + fp + fn == 0:
            f, undefined = 0.0, True
        else:
            f = 2 * tp / (2 * tp + fp + fn)
        out[cls] = Prf1(p, r, f, undefined)
    return out


def span_match_counts(ref_spans, hyp_spans, token_level: bool = False) -> ClassCounts:
    """Strict span matching: TP iff class, start and end all agree.

    token_level=True scores each (class, token index) pair instead, for
    comparison with boundary-tolerant setups.
    """
    counts = ClassCounts()
    if token_level:
        ref_set = {
            (s.cls, i) for s in ref_spans for i in range(s.start, s.end)
        }
        hyp_set = {
            (s.cls, i) for s in hyp_spans for i in range(s.start, s.end)
        }
    else:
        ref_set = {(s.cls, s.start, s.end) for s in ref_spans}
        hyp_set = {(s.cls, s.start, s.end) for s in hyp_spans}
    for item in hyp_set & ref_set:
        counts.add_tp(item[0])
    for item in hyp_set - ref_set:
        counts.add_fp(item[0])
    for item in ref_set - hyp_set:
        counts.add_fn(item[0])
    return counts


@dataclass
class EvalReport:
    wer: float | None
    ent_wer: float | None
    callsign_acc: float | None
    per_class: dict

    def lines(self) -> list[str]:
        out = []
        if self.wer is not None:
            out.append(f"wer\t{self.wer:.1f}")
        if self.ent_wer is not None:
            out.append(f"ent_wer\t{self.ent_wer:.1f}")
        if self.callsign_acc is not None:
            out.append(f"callsign_acc\t{self.callsign_acc:.1f}")
        for cls, scores in self.per_class.items():
            name = cls.value
            out.append(f"{name}_precision\t{scores.precision:.3f}")
            out.append(f"{name}_recall\t{scores.recall:.3f}")
            out.append(f"{name}_f1\t{scores.f1:.3f}")
        return out

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(self.lines()) + "\n")


def evaluate_corpus(ref_parses, hyp_parses) -> EvalReport:
    """Corpus metrics from line-aligned reference and hypothesis parses."""
    if len(ref_parses) != len(hyp_parses):
        raise LengthMismatch(f"{len(ref_parses)} refs vs {len(hyp_parses)} hyps")
    total_align = AlignmentCounts()
    counts = ClassCounts()
    refs_for_entwer = []
    hyps_words = []
    for ref, hyp in zip(ref_parses, hyp_parses):
        total_align = total_align + align(ref.utterance.words, hyp.utterance.words)
        counts = counts + span_match_counts(ref.spans(), hyp.spans())
        refs_for_entwer.append((ref.utterance.words, ref.callsign))
        hyps_words.append(hyp.utterance.words)
    try:
        ent = entity_wer(refs_for_entwer, hyps_words)
    except NoCallsignInCorpus:
        ent = None
    overall = wer(total_align) if total_align.N else None
    return EvalReport(overall, ent, None, prf1(counts))
