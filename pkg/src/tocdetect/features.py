"""Per-page feature extraction.

Ten features per page: title-term presence/style/font/context/position,
section-keyword and line-number frequencies, ascending-page-number check,
and outgoing-link frequency. All frequencies are normalized by the page's
total line count (empty lines included).
"""

from __future__ import annotations

import csv
import io
import re
from collections import Counter
from dataclasses import dataclass

from . import schema
from .docmodel import Line, Page
from .errors import EmptyLine, MixedLabeling
from .schema import ClassLabel

DEFAULT_TITLE_TERMS = (
    "table of contents",
    "table of content",
    "contents",
    "content",
)
DEFAULT_SECTION_KEYWORDS = frozenset(
    {"chapter", "section", "part", "appendix", "preface",
     "introduction", "bibliography", "index"}
)

_SECTION_NUMBER_RE = re.compile(r"\d+(\.\d+)*\.?$")


@dataclass(frozen=True)
class FeatureConfig:
    title_terms: tuple[str, ...] = DEFAULT_TITLE_TERMS
    section_keywords: frozenset[str] = DEFAULT_SECTION_KEYWORDS
    max_page_number_digits: int = 4

    def __post_init__(self):
        if not self.title_terms:
            raise ValueError("title_terms must be non-empty")
        for phrase in self.title_terms:
            if phrase != " ".join(phrase.lower().split()) or not phrase:
                raise ValueError(f"title term {phrase!r} must be lowercase, single-spaced")
        if self.max_page_number_digits < 1:
            raise ValueError("max_page_number_digits must be >= 1")


@dataclass(frozen=True)
class FeatureVector:
    contains_title_term: bool
    title_term_style: str  # LARGEST | INTERMEDIATE | MOST_FREQUENT | NA
    title_term_font_class: str
    contextual_term_count: int
    section_term_frequency: float
    title_term_line_position: float
    line_start_number_frequency: float
    line_end_number_frequency: float
    numbers_ascending: bool
    outgoing_link_frequency: float

    def as_dict(self) -> dict:
        """Values keyed by canonical column name."""
        return {name: getattr(self, name) for name in schema.CANONICAL_COLUMNS}


def _line_words(line: Line) -> list[tuple[str, int]]:
    # (lowercased word, owning token index); tokens may hold several words
    words = []
    for ti, tok in enumerate(line.tokens):
        for word in tok.text.lower().split():
            words.append((word, ti))
    return words


def find_title_line(page: Page, cfg: FeatureConfig):
    """Locate the best title-term line on a page.

    A line is a candidate if its lowercased, whitespace-normalized text
    contains a configured phrase as a contiguous word sequence; longer
    phrases are tried first per line. The contextual count is the number
    of tokens on that line taking no part in the matched phrase. Returns
    (line_index, contextual_count, matched_phrase) for the candidate with
    the fewest contextual tokens (ties: earliest line), or None.
    """
    phrases = sorted(
        ((phrase.split(), order) for order, phrase in enumerate(cfg.title_terms)),
        key=lambda item: (-len(item[0]), item[1]),
    )
    best = None
    for line in page.lines:
        words = _line_words(line)
        word_texts = [w for w, _ in words]
        for phrase_words, _ in phrases:
            n = len(phrase_words)
            span = next(
                (i for i in range(len(words) - n + 1)
                 if word_texts[i:i + n] == phrase_words),
                None,
            )
            if span is None:
                continue
            covered = {ti for _, ti in words[span:span + n]}
            contextual = len(line.tokens) - len(covered)
            candidate = (contextual, line.index, " ".join(phrase_words))
            if best is None or candidate[:2] < best[:2]:
                best = candidate
            break
    if best is None:
        return None
    contextual, index, phrase = best
    return index, contextual, phrase


def title_style(page: Page, title_line_index: int) -> str:
    """Size rank of the title line: LARGEST, MOST_FREQUENT, or INTERMEDIATE.

    Compares the title line's max token size against the page-wide max and
    the page-wide modal size (mode by token count; tied modes resolve to
    the largest size). Sizes compare by exact equality.
    """
    line = page.lines[title_line_index]
    if not line.tokens:
        raise EmptyLine(f"line {title_line_index} has no tokens")
    sizes = [tok.font_size for ln in page.lines for tok in ln.tokens]
    s = max(tok.font_size for tok in line.tokens)
    page_max = max(sizes)
    counts = Counter(sizes)
    top = max(counts.values())
    modal = max(size for size, c in counts.items() if c == top)
    if s == page_max:
        return "LARGEST"
    if s == modal:
        return "MOST_FREQUENT"
    return "INTERMEDIATE"


def starts_with_number(line: Line) -> bool:
    """True iff the first token is a section number like 1, 1.2, or 1.2. (trailing dot ok)."""
    if not line.tokens:
        return False
    return _SECTION_NUMBER_RE.fullmatch(line.tokens[0].text) is not None


def trailing_page_number(line: Line, cfg: FeatureConfig) -> int | None:
    """Integer value of the last token if it is 1..max digits, else None."""
    if not line.tokens:
        return None
    text = line.tokens[-1].text
    if text.isascii() and text.isdigit() and 1 <= len(text) <= cfg.max_page_number_digits:
        return int(text)
    return None


def _has_section_keyword(line: Line, cfg: FeatureConfig) -> bool:
    return any(tok.text.lower() in cfg.section_keywords for tok in line.tokens)


def extract_features(page: Page, cfg: FeatureConfig | None = None) -> FeatureVector:
    """Compute the canonical ten-feature vector for one page. Pure function."""
    cfg = cfg or FeatureConfig()
    total = len(page.lines)

    title = find_title_line(page, cfg)
    if title is None:
        contains, style, font_class, contextual, position = False, "NA", "NA", 0, 1.0
    else:
        title_index, contextual, _ = title
        contains = True
        style = title_style(page, title_index)
        font_class = page.lines[title_index].tokens[0].font_family
        position = title_index / total

    def freq(count: int) -> float:
        return count / total if total else 0.0

    trailing = [
        num for num in (trailing_page_number(ln, cfg) for ln in page.lines)
        if num is not None
    ]
    return FeatureVector(
        contains_title_term=contains,
        title_term_style=style,
        title_term_font_class=font_class,
        contextual_term_count=contextual,
        section_term_frequency=freq(sum(_has_section_keyword(ln, cfg) for ln in page.lines)),
        title_term_line_position=position,
        line_start_number_frequency=freq(sum(starts_with_number(ln) for ln in page.lines)),
        line_end_number_frequency=freq(len(trailing)),
        numbers_ascending=all(a <= b for a, b in zip(trailing, trailing[1:])),
        outgoing_link_frequency=freq(
            sum(any(tok.link_target is not None for tok in ln.tokens) for ln in page.lines)
        ),
    )


def write_feature_csv(rows) -> bytes:
    """Serialize (page_id, FeatureVector, label-or-None) rows as CSV bytes.

    Column order: page, the canonical feature columns, then label if any
    row is labeled. Raises MixedLabeling if only some rows carry labels.
    """
    rows = list(rows)
    labeled = sum(label is not None for _, _, label in rows)
    if labeled and labeled != len(rows):
        raise MixedLabeling(f"{labeled} of {len(rows)} rows carry labels")
    with_label = labeled > 0

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["page", *schema.CANONICAL_COLUMNS]
    if with_label:
        header.append("label")
    writer.writerow(header)
    for page_id, vector, label in rows:
        values = vector.as_dict()
        cells = [str(page_id)]
        cells += [schema.format_value(name, values[name]) for name in schema.CANONICAL_COLUMNS]
        if with_label:
            cells.append(str(ClassLabel(label)))
        writer.writerow(cells)
    return buf.getvalue().encode("utf-8")
