"""Deterministic virtual simulation-pilot engine for ATCo training."""

from .parser import EntityParser, ParsedCommunication, PhraseologyGrammar
from .phraseology import (
    AirlineDesignatorTable,
    IcaoCallsign,
    SpokenCallsign,
    normalize,
    shortened_variants,
    spell_char,
    verbalize_callsign,
)
from .pipeline import Engine, ExerciseConfig, PilotResponse, Session, replay
from .resolver import EditCosts, load_surveillance, make_boost_list, rerank
from .responder import (
    apply_word_fixer,
    convert_grammar,
    insert_readback_error,
    load_rules,
    render_readback,
)

__all__ = [
    "AirlineDesignatorTable",
    "EditCosts",
    "Engine",
    "EntityParser",
    "ExerciseConfig",
    "IcaoCallsign",
    "ParsedCommunication",
    "PhraseologyGrammar",
    "PilotResponse",
    "Session",
    "SpokenCallsign",
    "apply_word_fixer",
    "convert_grammar",
    "insert_readback_error",
    "load_rules",
    "load_surveillance",
    "make_boost_list",
    "normalize",
    "render_readback",
    "replay",
    "rerank",
    "shortened_variants",
    "spell_char",
    "verbalize_callsign",
]

__version__ = "0.1.0"
