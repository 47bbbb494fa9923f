import datetime
import re

from hypothesis import given, settings, strategies as st

from graphqa.normalize import (
    DOT_MARKER,
    normalize,
    normalize_datetime,
    protect_abbreviations,
    remove_ignorable_phrases,
    split_sentences,
    strip_garbage,
)

RETAINED = set(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    ".,-'!/: \n\t"
)


def test_protect_abbreviations_mr():
    out = protect_abbreviations("Mr. Ram spoke.", {"mr."})
    assert out == f"Mr{DOT_MARKER} Ram spoke."
    assert len(split_sentences(out).sentence_spans) == 1


def test_protect_abbreviations_empty():
    assert protect_abbreviations("", {"mr."}) == ""


def test_protection_controls_sentence_count():
    text = "Dr. A met Mr. B."
    # oracle: without protection the splitter fires on the abbreviation dots
    unprotected = split_sentences(text)
    assert len(unprotected.sentence_spans) == 3
    protected = split_sentences(protect_abbreviations(text, {"dr.", "mr."}))
    assert len(protected.sentence_spans) == 1
    assert DOT_MARKER not in protected.text


def test_strip_garbage_question_mark():
    assert strip_garbage("Who was criticized by Lalu Yadav?") == \
        "Who was criticized by Lalu Yadav"


def test_strip_garbage_deletes_in_place():
    assert strip_garbage("a*b@c") == "abc"


def test_strip_garbage_retains_listed_characters():
    assert strip_garbage("Ram-Shyam's visit, today") == "Ram-Shyam's visit, today"


@given(st.text())
def test_strip_garbage_never_introduces_characters(text):
    out = strip_garbage(text)
    assert set(out) <= (set(text) & RETAINED) | {" ", "\n"}


def test_remove_ignorable_give_me_details():
    assert remove_ignorable_phrases(
        "give me details of Ram's visit", ["give me details"]) == "of Ram's visit"


def test_remove_ignorable_whole_word_only():
    assert remove_ignorable_phrases(
        "detailed giveaways", ["give me details"]) == "detailed giveaways"


def test_remove_ignorable_give_me_report():
    assert remove_ignorable_phrases(
        "give me report on the meeting", ["give me report"]) == "on the meeting"


def test_datetime_day_month_year():
    text, spans = normalize_datetime("5 January 2018")
    assert text == "2018-01-05"
    assert spans == (((0, 10), "2018-01-05"),)
    # inverse rendering oracle
    d = datetime.date.fromisoformat(text)
    assert f"{d.day} {d.strftime('%B')} {d.year}" == "5 January 2018"


def test_datetime_month_year():
    text, spans = normalize_datetime("January 2018")
    assert text == "2018-01"
    assert spans[0][1] == "2018-01"


def test_datetime_no_dates():
    text, spans = normalize_datetime("no dates here")
    assert text == "no dates here"
    assert spans == ()


def test_datetime_slash_and_times():
    assert normalize_datetime("05/01/2018")[0] == "2018-01-05"
    assert normalize_datetime("7 pm")[0] == "19:00"
    assert normalize_datetime("5:30 am")[0] == "05:30"
    assert normalize_datetime("12 am")[0] == "00:00"


def test_datetime_invalid_date_left_alone():
    assert normalize_datetime("31 February 2018")[0] == "31 February 2018"


def test_year_with_unit_word_not_a_date():
    text, spans = normalize_datetime("paid 2000 rupees")
    assert spans == ()
    assert text == "paid 2000 rupees"


@given(st.integers(min_value=1000, max_value=2099),
       st.integers(min_value=1, max_value=12),
       st.integers(min_value=1, max_value=31))
def test_produced_dates_are_valid_calendar_dates(y, m, d):
    text, spans = normalize_datetime(f"{d:02d}/{m:02d}/{y}")
    for _, value in spans:
        if len(value) == 10:
            datetime.date.fromisoformat(value)  # must not raise


def test_split_two_sentences():
    nt = split_sentences("A met B. B left.")
    assert len(nt.sentence_spans) == 2
    assert nt.sentences() == ["A met B.", "B left."]


def test_split_empty():
    assert split_sentences("").sentence_spans == ()


def test_split_covers_non_whitespace():
    text = "A met B. B left three days later!"
    nt = split_sentences(text)
    covered = set()
    for a, b in nt.sentence_spans:
        covered.update(range(a, b))
    for i, ch in enumerate(text):
        if not ch.isspace():
            assert i in covered


_text = st.text(
    alphabet=st.characters(min_codepoint=32, max_codepoint=126),
    max_size=120,
)


@settings(max_examples=200, deadline=None)
@given(_text)
def test_normalize_idempotent(text):
    once = normalize(text)
    twice = normalize(once.text)
    assert twice.text == once.text
    assert twice.sentence_spans == once.sentence_spans
    assert twice.datetime_spans == once.datetime_spans


@settings(max_examples=200, deadline=None)
@given(_text)
def test_normalize_output_is_marker_free(text):
    assert DOT_MARKER not in normalize(text).text


@settings(max_examples=200, deadline=None)
@given(_text)
def test_sentence_spans_ordered_and_disjoint(text):
    nt = normalize(text)
    spans = nt.sentence_spans
    for (a1, b1), (a2, b2) in zip(spans, spans[1:]):
        assert b1 <= a2
    for a, b in spans:
        assert a < b


@settings(max_examples=200, deadline=None)
@given(_text)
def test_datetime_spans_inside_one_sentence(text):
    nt = normalize(text)
    for (a, b), _ in nt.datetime_spans:
        inside = [s for s in nt.sentence_spans if s[0] <= a and b <= s[1]]
        assert len(inside) == 1
