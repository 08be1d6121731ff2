import random

import pytest
from hypothesis import given, strategies as st

from simpilot.phraseology import (
    AirlineDesignatorTable,
    IcaoCallsign,
    InvalidCallsign,
    InvalidChar,
    SpokenCallsign,
    UnknownDesignator,
    char_for_word,
    deverbalize_callsign,
    normalize,
    render,
    shortened_variants,
    spell_char,
    verbalize_callsign,
)
from simpilot.pipeline import default_data_path

# Published ICAO spelling alphabet and digit words, written out here as an
# independent cross-check of the shipped tables.
ICAO_ALPHABET = {
    "A": "alfa", "B": "bravo", "C": "charlie", "D": "delta", "E": "echo",
    "F": "foxtrot", "G": "golf", "H": "hotel", "I": "india", "J": "juliett",
    "K": "kilo", "L": "lima", "M": "mike", "N": "november", "O": "oscar",
    "P": "papa", "Q": "quebec", "R": "romeo", "S": "sierra", "T": "tango",
    "U": "uniform", "V": "victor", "W": "whiskey", "X": "xray", "Y": "yankee",
    "Z": "zulu",
}
ICAO_DIGITS = {
    "0": "zero", "1": "one", "2": "two", "3": "three", "4": "four",
    "5": "five", "6": "six", "7": "seven", "8": "eight", "9": "nine",
}


@pytest.fixture(scope="module")
def table():
    return AirlineDesignatorTable.load(default_data_path("designators.txt"))


class TestNormalize:
    def test_case_and_punctuation(self):
        u = normalize("Ryanair nine two, Bravo Quebec.")
        assert u.words == ("ryanair", "nine", "two", "bravo", "quebec")

    def test_empty(self):
        assert len(normalize("")) == 0

    def test_whitespace_collapse(self):
        assert normalize("turn   right\theading").words == ("turn", "right", "heading")

    def test_token_indices_contiguous(self):
        u = normalize("descend flight level one two zero")
        assert [t.index for t in u.tokens] == list(range(len(u)))

    @given(st.text(max_size=60))
    def test_idempotent(self, raw):
        once = normalize(raw)
        again = normalize(render(once))
        assert once.words == again.words


class TestSpellChar:
    @pytest.mark.parametrize("char,word", sorted(ICAO_DIGITS.items()))
    def test_digits_match_published_table(self, char, word):
        assert spell_char(char) == word

    @pytest.mark.parametrize("char,word", sorted(ICAO_ALPHABET.items()))
    def test_letters_match_published_table(self, char, word):
        assert spell_char(char) == word

    def test_invalid_char(self):
        with pytest.raises(InvalidChar):
            spell_char("!")
        with pytest.raises(InvalidChar):
            spell_char("a")  # lowercase not in domain

    def test_niner_accepted_on_input(self):
        assert char_for_word("niner") == "9"
        assert char_for_word("nine") == "9"
        assert spell_char("9") == "nine"


class TestVerbalize:
    def test_ryanair(self, table):
        spoken = verbalize_callsign(IcaoCallsign("RYR92BQ"), table)
        assert str(spoken) == "ryanair nine two bravo quebec"

    def test_austrian(self, table):
        spoken = verbalize_callsign(IcaoCallsign("AUA392P"), table)
        assert str(spoken) == "austrian three nine two papa"

    def test_hansa(self, table):
        spoken = verbalize_callsign(IcaoCallsign("DLH6LY"), table)
        assert str(spoken) == "hansa six lima yankee"

    def test_registration_style_spelled(self, table):
        spoken = verbalize_callsign(IcaoCallsign("OEABC"), table)
        assert str(spoken) == "oscar echo alfa bravo charlie"

    def test_unknown_designator_strict(self, table):
        with pytest.raises(UnknownDesignator):
            verbalize_callsign(IcaoCallsign("XXX123"), table, strict=True)
        # non-strict falls back to spelling
        spoken = verbalize_callsign(IcaoCallsign("XXX123"), table)
        assert spoken.words[0] == "xray"

    def test_invalid_callsign_pattern(self):
        with pytest.raises(InvalidCallsign):
            IcaoCallsign("r1")
        with pytest.raises(InvalidCallsign):
            IcaoCallsign("A")

    def test_closed_vocabulary(self, table):
        vocab = set(ICAO_DIGITS.values()) | set(ICAO_ALPHABET.values())
        vocab |= table.telephony_words()
        rng = random.Random(7)
        from simpilot.phraseology import random_icao_callsign

        for _ in range(100):
            cs = random_icao_callsign(rng, table)
            for word in verbalize_callsign(cs, table).words:
                assert word in vocab

    def test_injective_over_random_callsigns(self, table):
        from simpilot.phraseology import random_icao_callsign

        rng = random.Random(11)
        seen = {}
        for _ in range(300):
            cs = random_icao_callsign(rng, table)
            key = verbalize_callsign(cs, table).words
            if key in seen:
                assert seen[key] == cs.value
            seen[key] = cs.value

    def test_deverbalize_roundtrip(self, table):
        from simpilot.phraseology import random_icao_callsign

        rng = random.Random(13)
        for _ in range(100):
            cs = random_icao_callsign(rng, table)
            spoken = verbalize_callsign(cs, table)
            assert deverbalize_callsign(spoken, table).value == cs.value


class TestShortenedVariants:
    def test_austrian_variant(self, table):
        full = verbalize_callsign(IcaoCallsign("AUA392P"), table)
        variants = [str(v) for v in shortened_variants(full)]
        assert variants[0] == "austrian three nine two papa"
        assert "three nine two papa" in variants

    def test_hansa_variant(self, table):
        full = verbalize_callsign(IcaoCallsign("DLH6LY"), table)
        assert "six lima yankee" in [str(v) for v in shortened_variants(full)]

    def test_three_word_floor(self):
        full = SpokenCallsign(("six", "lima", "yankee"))
        assert shortened_variants(full) == [full]

    def test_no_duplicates_and_suffix_property(self, table):
        from simpilot.phraseology import random_icao_callsign

        rng = random.Random(17)
        for _ in range(50):
            full = verbalize_callsign(random_icao_callsign(rng, table), table)
            variants = shortened_variants(full)
            words_list = [v.words for v in variants]
            assert len(set(words_list)) == len(words_list)
            for v in variants:
                assert full.words[len(full.words) - len(v.words):] == v.words

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            shortened_variants(SpokenCallsign(()))


class TestDesignatorTable:
    def test_paper_entries_present(self, table):
        assert table.lookup("RYR") == "ryanair"
        assert table.lookup("AUA") == "austrian"
        assert table.lookup("DLH") == "hansa"

    def test_bad_line_rejected(self, tmp_path):
        bad = tmp_path / "designators.txt"
        bad.write_text("RY\tryanair\n")
        with pytest.raises(ValueError):
            AirlineDesignatorTable.load(bad)

    def test_comments_skipped(self, tmp_path):
        path = tmp_path / "designators.txt"
        path.write_text("# comment\nRYR\tryanair\n")
        assert AirlineDesignatorTable.load(path).entries == {"RYR": "ryanair"}
