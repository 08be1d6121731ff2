"""Contextual biasing with surveillance data: boosting-list export and
weighted-Levenshtein re-ranking of extracted callsigns.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .phraseology import (
    AirlineDesignatorTable,
    IcaoCallsign,
    InvalidCallsign,
    SpokenCallsign,
    shortened_variants,
    verbalize_callsign,
)

EXPANSION_WARN_LIMIT = 1000  # biasing degrades past ~1000 contextual entities


class EmptySnapshot(ValueError):
    """Surveillance file yielded no valid callsigns."""


class EmptyQuery(ValueError):
    """rerank called with an empty extracted callsign."""


@dataclass(frozen=True)
class SurveillanceSnapshot:
    timestamp: float
    callsigns: tuple[IcaoCallsign, ...]
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class EditCosts:
    substitution: float = 1.0
    insertion: float = 1.0
    deletion: float = 1.0
    per_pair_overrides: dict = field(default_factory=dict)

    def sub_cost(self, a: str, b: str) -> float:
        if a == b:
            return 0.0
        if (a, b) in self.per_pair_overrides:
            return self.per_pair_overrides[(a, b)]
        if (b, a) in self.per_pair_overrides:
            return self.per_pair_overrides[(b, a)]
        return self.substitution

    @classmethod
    def load_overrides(cls, path, **defaults) -> "EditCosts":
        overrides = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                a, b, weight = line.split("\t")
                overrides[(a, b)] = float(weight)
        return cls(per_pair_overrides=overrides, **defaults)


@dataclass(frozen=True)
class RankedMatch:
    candidate: IcaoCallsign
    spoken: SpokenCallsign
    cost: float
    normalized_cost: float


@dataclass(frozen=True)
class BoostList:
    mode: str  # UNIGRAM | NGRAM
    entries: tuple[tuple[str, float], ...]

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for ngram, weight in self.entries:
                fh.write(f"{ngram}\t{weight}\n")


def load_surveillance(path) -> SurveillanceSnapshot:
    """Parse a surveillance file: optional #timestamp= header, one ICAO
    callsign per line. Invalid lines become warnings, duplicates collapse."""
    timestamp = 0.0
    seen: dict[str, IcaoCallsign] = {}
    warnings: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#timestamp="):
                timestamp = float(line.split("=", 1)[1])
                continue
            if line.startswith("#"):
                continue
            value = line.upper()
            try:
                cs = IcaoCallsign(value)
            except InvalidCallsign:
                warnings.append(f"line {lineno}: invalid callsign {line!r}")
                continue
            if value in seen:
                warnings.append(f"line {lineno}: duplicate callsign {value}")
                continue
            seen[value] = cs
    if not seen:
        raise EmptySnapshot(str(path))
    return SurveillanceSnapshot(timestamp, tuple(seen.values()), tuple(warnings))


def weighted_levenshtein(a, b, costs: EditCosts | None = None) -> float:
    """Minimal edit cost between two word sequences (dynamic programming)."""
    costs = costs or EditCosts()
    a = list(a)
    b = list(b)
    prev = [0.0] * (len(b) + 1)
    for j in range(1, len(b) + 1):
        prev[j] = prev[j - 1] + costs.insertion
    for i in range(1, len(a) + 1):
        cur = [prev[0] + costs.deletion] + [0.0] * len(b)
        for j in range(1, len(b) + 1):
            cur[j] = min(
                prev[j - 1] + costs.sub_cost(a[i - 1], b[j - 1]),
                prev[j] + costs.deletion,
                cur[j - 1] + costs.insertion,
            )
        prev = cur
    return prev[len(b)]


def expand_snapshot(
    snapshot: SurveillanceSnapshot, table: AirlineDesignatorTable
) -> dict[IcaoCallsign, list[SpokenCallsign]]:
    """Every snapshot callsign -> full verbalization plus shortened variants."""
    return {
        cs: shortened_variants(verbalize_callsign(cs, table))
        for cs in snapshot.callsigns
    }


def rerank(
    extracted: SpokenCallsign,
    snapshot: SurveillanceSnapshot,
    table: AirlineDesignatorTable,
    costs: EditCosts | None = None,
) -> list[RankedMatch]:
    """Rank snapshot callsigns by distance to the extracted word sequence.

    A candidate's cost is the minimum over its full and shortened spoken
    variants; ties break on the ICAO string so the order is deterministic.
    """
    if not extracted.words:
        raise EmptyQuery("extracted callsign is empty")
    costs = costs or EditCosts()
    matches = []
    for cs, variants in expand_snapshot(snapshot, table).items():
        best_cost = None
        best_spoken = None
        for variant in variants:
            c = weighted_levenshtein(extracted.words, variant.words, costs)
            if best_cost is None or c < best_cost:
                best_cost = c
                best_spoken = variant
        norm = best_cost / max(len(extracted.words), len(best_spoken.words))
        matches.append(RankedMatch(cs, best_spoken, best_cost, norm))
    matches.sort(key=lambda m: (m.cost, m.candidate.value))
    return matches


def make_boost_list(
    snapshot: SurveillanceSnapshot,
    table: AirlineDesignatorTable,
    mode: str = "NGRAM",
    weight: float = 1.0,
) -> BoostList:
    mode = mode.upper()
    if mode not in ("UNIGRAM", "NGRAM"):
        raise ValueError(f"unknown boost mode: {mode}")
    expanded = expand_snapshot(snapshot, table)
    entries: list[tuple[str, float]] = []
    seen = set()
    if mode == "UNIGRAM":
        for variants in expanded.values():
            for word in variants[0].words:
                if word not in seen:
                    seen.add(word)
                    entries.append((word, weight))
    else:
        for variants in expanded.values():
            for variant in variants:
                ngram = str(variant)
                if ngram not in seen:
                    seen.add(ngram)
                    entries.append((ngram, weight))
    return BoostList(mode, tuple(entries))


def snapshot_stats(
    snapshot: SurveillanceSnapshot, table: AirlineDesignatorTable
) -> dict:
    expanded = expand_snapshot(snapshot, table)
    expanded_count = sum(len(v) for v in expanded.values())
    return {
        "count": len(snapshot.callsigns),
        "expanded_count": expanded_count,
        "too_many_entities": expanded_count > EXPANSION_WARN_LIMIT,
    }
