import pytest
from hypothesis import given, strategies as st

from tocdetect import dataset as dataset_mod
from tocdetect.docmodel import Line, Page, Token
from tocdetect.errors import EmptyLine, MixedLabeling
from tocdetect.features import (
    FeatureConfig,
    FeatureVector,
    extract_features,
    find_title_line,
    starts_with_number,
    title_style,
    trailing_page_number,
    write_feature_csv,
)
from tocdetect.schema import ClassLabel

from helpers import canonical_toc_page, line, page, tok

CFG = FeatureConfig()


# -- find_title_line ---------------------------------------------------------

def test_title_line_exact():
    p = page([["Table", "of", "Contents"]])
    assert find_title_line(p, CFG) == (0, 0, "table of contents")


def test_title_line_prefers_fewest_contextual_tokens():
    p = page([
        ["Chapter", "2", "Contents", "of", "the", "cell"],
        ["Contents"],
    ])
    index, contextual, phrase = find_title_line(p, CFG)
    assert (index, contextual) == (1, 0)
    assert phrase in ("contents", "content")


def test_title_line_contextual_count_is_uncovered_tokens():
    p = page([["Chapter", "2", "Contents", "of", "the", "cell"]])
    index, contextual, phrase = find_title_line(p, CFG)
    assert index == 0
    assert phrase == "contents"
    assert contextual == 5  # six tokens, one covered by the matched phrase


def test_title_line_absent():
    assert find_title_line(page([["no", "match", "here"]]), CFG) is None


def test_title_line_case_insensitive():
    assert find_title_line(page([["CONTENTS"]]), CFG) == (0, 0, "contents")


def test_title_line_tie_breaks_to_earlier_line():
    p = page([["Contents"], ["Contents"]])
    assert find_title_line(p, CFG)[0] == 0


def test_longest_phrase_matched_first():
    p = page([["Table", "of", "Contents"]])
    _, contextual, phrase = find_title_line(p, CFG)
    assert phrase == "table of contents" and contextual == 0


@given(st.booleans(), st.booleans(), st.sampled_from(["contents", "CONTENTS", "Contents"]))
def test_title_line_ignores_case_and_style_flags(bold, italic, text):
    p = page([[tok(text, bold=bold, italic=italic)]])
    assert find_title_line(p, CFG) == (0, 0, "contents")


# -- title_style -------------------------------------------------------------

def _styled_page(title_size, other_sizes):
    lines = [[tok("Contents", font_size=title_size)]]
    lines += [[tok(f"w{i}", font_size=s)] for i, s in enumerate(other_sizes)]
    return page(lines)


def test_style_largest():
    assert title_style(_styled_page(18, [12, 12, 18]), 0) == "LARGEST"


def test_style_most_frequent():
    assert title_style(_styled_page(12, [18, 12, 12]), 0) == "MOST_FREQUENT"


def test_style_intermediate():
    assert title_style(_styled_page(14, [18, 12, 12]), 0) == "INTERMEDIATE"


def test_style_modal_tie_takes_largest_size():
    # sizes: 12 x2, 18 x2 (incl. title) -> modal resolves to 18 = title size
    assert title_style(_styled_page(18, [12, 12, 18]), 0) == "LARGEST"


def test_style_empty_line_raises():
    p = Page(index=1, lines=(Line(tokens=(), index=0), line(["x"], 1)))
    with pytest.raises(EmptyLine):
        title_style(p, 0)


@given(st.floats(min_value=0.01, max_value=100.0, allow_nan=False))
def test_style_scale_invariant(scale):
    base = _styled_page(14, [18, 12, 12])
    scaled = page(
        [[tok(t.text, font_size=t.font_size * scale) for t in ln.tokens] for ln in base.lines]
    )
    assert title_style(base, 0) == title_style(scaled, 0)


# -- line number heuristics ---------------------------------------------------

@pytest.mark.parametrize(
    "first,expected",
    [("1.2", True), ("1.2.", True), ("7", True), ("1.2.3", True),
     ("Chapter", False), ("1a", False), (".2", False), ("1..2", False)],
)
def test_starts_with_number(first, expected):
    assert starts_with_number(line([first, "rest"], 0)) is expected


def test_starts_with_number_empty_line():
    assert starts_with_number(Line(tokens=(), index=0)) is False


@pytest.mark.parametrize(
    "last,expected",
    [("14", 14), ("1234", 1234), ("12345", None), ("14.", None), ("xiv", None)],
)
def test_trailing_page_number(last, expected):
    assert trailing_page_number(line(["Title", last], 0), CFG) == expected


def test_trailing_page_number_respects_digit_cap():
    cfg = FeatureConfig(max_page_number_digits=2)
    assert trailing_page_number(line(["t", "99"], 0), cfg) == 99
    assert trailing_page_number(line(["t", "100"], 0), cfg) is None


# -- extract_features ----------------------------------------------------------

def test_empty_page_conventions():
    fv = extract_features(Page(index=1, lines=()), CFG)
    assert fv == FeatureVector(
        contains_title_term=False,
        title_term_style="NA",
        title_term_font_class="NA",
        contextual_term_count=0,
        section_term_frequency=0.0,
        title_term_line_position=1.0,
        line_start_number_frequency=0.0,
        line_end_number_frequency=0.0,
        numbers_ascending=True,
        outgoing_link_frequency=0.0,
    )


def test_canonical_toc_page_features():
    fv = extract_features(canonical_toc_page(), CFG)
    assert fv.contains_title_term is True
    assert fv.title_term_style == "LARGEST"
    assert fv.title_term_font_class == "Times New Roman"
    assert fv.contextual_term_count == 0
    assert fv.title_term_line_position == 0.0
    assert fv.line_start_number_frequency == 0.8
    assert fv.line_end_number_frequency == 0.8
    assert fv.numbers_ascending is True
    assert fv.outgoing_link_frequency == 0.0


def test_descending_numbers_page():
    p = page([["a", "5"], ["b", "3"], ["c", "9"]])
    fv = extract_features(p, CFG)
    assert fv.numbers_ascending is False
    assert fv.line_end_number_frequency == 1.0


def test_equal_numbers_count_as_ascending():
    p = page([["a", "5"], ["b", "5"], ["c", "9"]])
    assert extract_features(p, CFG).numbers_ascending is True


def test_link_frequency():
    p = page([
        [tok("Intro", link_target="p3"), tok("3")],
        [tok("Scope", link_target="p5"), tok("5")],
        ["no", "links"],
        [],
    ])
    fv = extract_features(p, CFG)
    assert fv.outgoing_link_frequency == 0.5
    assert fv.line_end_number_frequency == 0.5


def test_section_term_frequency_whole_token_case_insensitive():
    p = page([["Chapter", "1"], ["APPENDIX"], ["chapters", "galore"], ["plain"]])
    assert extract_features(p, CFG).section_term_frequency == 0.25 * 2


def test_extraction_is_pure():
    p = canonical_toc_page()
    assert extract_features(p, CFG) == extract_features(p, CFG)


# -- randomized page properties -------------------------------------------------

_words = st.text(alphabet="abcdefg.0123456789", min_size=1, max_size=6).filter(
    lambda s: s.strip() == s and s
)
_tokens = st.builds(
    tok,
    _words,
    font_size=st.sampled_from([0.0, 10.0, 12.0, 18.0]),
    link_target=st.one_of(st.none(), st.just("t")),
)
_pages = st.lists(st.lists(_tokens, max_size=5), max_size=8).map(
    lambda specs: page(specs)
)


@given(_pages)
def test_frequency_features_within_unit_interval(p):
    fv = extract_features(p, CFG)
    for value in (
        fv.section_term_frequency,
        fv.title_term_line_position,
        fv.line_start_number_frequency,
        fv.line_end_number_frequency,
        fv.outgoing_link_frequency,
    ):
        assert 0.0 <= value <= 1.0


@given(_pages)
def test_appending_inert_line_never_increases_frequencies(p):
    inert = line(["inertword"], len(p.lines))
    bigger = Page(index=p.index, lines=p.lines + (inert,))
    fv, fv2 = extract_features(p, CFG), extract_features(bigger, CFG)
    assert fv2.section_term_frequency <= fv.section_term_frequency or not p.lines
    assert fv2.line_start_number_frequency <= fv.line_start_number_frequency or not p.lines
    assert fv2.line_end_number_frequency <= fv.line_end_number_frequency or not p.lines
    assert fv2.outgoing_link_frequency <= fv.outgoing_link_frequency or not p.lines
    if fv.numbers_ascending:
        assert fv2.numbers_ascending


# -- write_feature_csv -----------------------------------------------------------

def test_feature_csv_empty_input():
    assert write_feature_csv([]).decode().splitlines() == [
        "page,contains_title_term,title_term_style,title_term_font_class,"
        "contextual_term_count,section_term_frequency,title_term_line_position,"
        "line_start_number_frequency,line_end_number_frequency,numbers_ascending,"
        "outgoing_link_frequency"
    ]


def test_feature_csv_single_labeled_row():
    fv = extract_features(canonical_toc_page(), CFG)
    data = write_feature_csv([(1, fv, ClassLabel.TOC)])
    lines = data.decode().splitlines()
    assert len(lines) == 2
    assert lines[0].endswith(",label")
    assert lines[1].endswith(",TOC")


def test_feature_csv_mixed_labels_rejected():
    fv = extract_features(Page(index=1, lines=()), CFG)
    with pytest.raises(MixedLabeling):
        write_feature_csv([(1, fv, ClassLabel.TOC), (2, fv, None)])


def test_feature_csv_round_trips_through_dataset_loader():
    pages = [canonical_toc_page(index=1), page([["plain", "text"]], index=2)]
    rows = [
        (p.index, extract_features(p, CFG), label)
        for p, label in zip(pages, (ClassLabel.TOC, ClassLabel.NON_TOC))
    ]
    loaded = dataset_mod.load_csv(write_feature_csv(rows))
    assert len(loaded.columns) == 10
    assert len(loaded.rows) == 2
    assert [label for _, label in loaded.rows] == [ClassLabel.TOC, ClassLabel.NON_TOC]
    contains = loaded.column_index("contains_title_term")
    assert loaded.rows[0][0][contains] is True
    assert loaded.rows[1][0][contains] is False
