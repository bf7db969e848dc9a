"""High-recall candidate matching and retweet/reported-speech dropping."""

import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selfage import (
    DropDecision,
    PatternError,
    QueryPattern,
    compile_pattern_set,
    default_pattern_set,
    load_query_patterns,
    match_candidates,
    should_drop,
)

from conftest import (
    ANNOTATED_SAMPLES,
    ERROR_ANALYSIS_SAMPLES,
    GOLDEN_EXTRACTIONS,
    RETRIEVAL_NEGATIVES,
    make_post,
)

ALL_POSITIVE_TEXTS = (
    [text for text, _, _ in ANNOTATED_SAMPLES]
    + [text for text, _ in GOLDEN_EXTRACTIONS]
    + [text for text, _, _ in ERROR_ANALYSIS_SAMPLES]
)

# Patterns whose matched substring legitimately contains digit groups
# outside [10, 99] (countdown quantities) or no digits at all.
DIGIT_RULE_EXEMPT = {
    "countdown_ordinal",
    "spelled_first_person_age",
    "spelled_years_old",
    "my_spelled_ordinal",
    "spelled_ordinal_birthday",
}

_BOUNDED_TWO_DIGIT_RE = re.compile(r"(?<!\d)[1-9]\d(?!\d)")


@pytest.fixture(scope="module")
def matcher():
    return default_pattern_set()


class TestRecall:
    @pytest.mark.parametrize("text", ALL_POSITIVE_TEXTS)
    def test_published_samples_all_match(self, matcher, text):
        hits = match_candidates(make_post(text=text), matcher)
        assert hits, f"no pattern matched: {text!r}"

    @pytest.mark.parametrize("text", RETRIEVAL_NEGATIVES)
    def test_negatives_do_not_match(self, matcher, text):
        assert match_candidates(make_post(text=text), matcher) == []

    def test_negative_has_no_bounded_two_digit_group(self):
        # Brute-force check justifying the negative above: 150 contains no
        # digit group bounded on both sides.
        assert not _BOUNDED_TWO_DIGIT_RE.search("I am 150 years old")

    def test_spelled_out_age_matches(self, matcher):
        hits = match_candidates(
            make_post(text="I am twenty one years old"), matcher)
        assert hits


class TestHitShape:
    def test_hits_in_text_order_and_non_overlapping(self, matcher):
        text = ("Two more years until my 21st birthday. "
                "I started at 28 and I'm 35 now.")
        hits = match_candidates(make_post(text=text), matcher)
        assert len(hits) >= 2
        spans = [hit.span for hit in hits]
        assert spans == sorted(spans)
        for (_, end), (start, _) in zip(spans, spans[1:]):
            assert end <= start

    def test_spans_lie_within_text(self, matcher):
        for text in ALL_POSITIVE_TEXTS:
            for hit in match_candidates(make_post(text=text), matcher):
                start, end = hit.span
                assert 0 <= start < end <= len(text)

    def test_match_ties_to_post_id(self, matcher):
        hits = match_candidates(
            make_post(post_id="abc", text="I'm 21 years old"), matcher)
        assert all(hit.post_id == "abc" for hit in hits)

    def test_digit_groups_bounded_in_published_samples(self, matcher):
        for text in ALL_POSITIVE_TEXTS:
            for hit in match_candidates(make_post(text=text), matcher):
                if hit.pattern_id in DIGIT_RULE_EXEMPT:
                    continue
                matched = text[hit.span[0]:hit.span[1]]
                for run in re.findall(r"\d+", matched):
                    assert 10 <= int(run) <= 99, (hit.pattern_id, matched)

    @settings(deadline=None, max_examples=200)
    @given(st.text(alphabet=st.characters(min_codepoint=32,
                                          max_codepoint=126), max_size=60))
    def test_digit_group_property_on_arbitrary_text(self, matcher, text):
        for hit in match_candidates(make_post(text=text), matcher):
            if hit.pattern_id in DIGIT_RULE_EXEMPT:
                continue
            matched = text[hit.span[0]:hit.span[1]]
            for run in re.findall(r"\d+", matched):
                assert 10 <= int(run) <= 99, (hit.pattern_id, matched)

    @given(st.text(alphabet=st.characters(min_codepoint=32,
                                          max_codepoint=126), max_size=60))
    def test_matching_is_deterministic(self, matcher, text):
        post = make_post(text=text)
        assert match_candidates(post, matcher) == match_candidates(post,
                                                                   matcher)


class TestPatternCompilation:
    def test_default_set_compiles(self):
        assert default_pattern_set() is not None

    def test_empty_set_matches_nothing(self):
        matcher = compile_pattern_set([])
        assert match_candidates(make_post(text="I'm 21"), matcher) == []

    def test_bad_regex_names_pattern(self):
        bad = QueryPattern(id="broken", source="(unclosed", description="x")
        with pytest.raises(PatternError, match="broken"):
            compile_pattern_set([bad])

    def test_duplicate_id_rejected(self):
        p = QueryPattern(id="dup", source=r"\bx\b", description="x")
        with pytest.raises(PatternError, match="dup"):
            compile_pattern_set([p, p])

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "patterns.tsv"
        path.write_text("# comment line\n"
                        "only\t\\bforty\\b\tspelled forty\n",
                        encoding="utf-8")
        patterns = load_query_patterns(path)
        assert [p.id for p in patterns] == ["only"]
        matcher = compile_pattern_set(patterns)
        assert match_candidates(make_post(text="I am forty"), matcher)

    def test_malformed_row_rejected(self, tmp_path):
        path = tmp_path / "patterns.tsv"
        path.write_text("no_tabs_here\n", encoding="utf-8")
        with pytest.raises(PatternError):
            load_query_patterns(path)

    def test_shipped_file_is_the_default(self):
        shipped = load_query_patterns()
        assert len(shipped) >= 10
        assert len({p.id for p in shipped}) == len(shipped)


class TestShouldDrop:
    def test_retweet_flag(self):
        assert should_drop(make_post(text="anything", is_retweet=True)) is \
            DropDecision.RETWEET

    def test_retweet_prefix(self):
        post = make_post(text="RT @someone: I'm turning 21")
        assert should_drop(post) is DropDecision.RETWEET

    def test_quoted_age_with_attribution(self):
        post = make_post(
            text='"I just turned 30" — celebrity magazine '
                 "https://mag.example.com/x")
        assert should_drop(post) is DropDecision.REPORTED_SPEECH

    def test_quoted_age_with_via(self):
        post = make_post(text='"I just turned 30" via @celebmag')
        assert should_drop(post) is DropDecision.REPORTED_SPEECH

    def test_says_before_quote(self):
        post = make_post(text='Singer says "I\'m 25 now"')
        assert should_drop(post) is DropDecision.REPORTED_SPEECH

    def test_headline_shape(self):
        post = make_post(
            text="Local man turns 105 today https://news.example.com/a")
        assert should_drop(post) is DropDecision.REPORTED_SPEECH

    def test_plain_first_person_kept(self):
        assert should_drop(make_post(text="I'm turning 21 tomorrow")) is \
            DropDecision.KEEP

    def test_first_person_with_url_kept(self):
        post = make_post(
            text="I can't believe I'm 21 already https://pics.example.com/me")
        assert should_drop(post) is DropDecision.KEEP

    @pytest.mark.parametrize("text", [t for t, _, _ in ANNOTATED_SAMPLES])
    def test_annotated_samples_kept(self, text):
        assert should_drop(make_post(text=text)) is DropDecision.KEEP
