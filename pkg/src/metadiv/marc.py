"""MARCXML parsing and cumulative facet series for catalog records.

Records are reduced to a normalized view (id, catalog-entry year, author
names, subject headings); facet series accumulate richness and diversity of
one facet per entry year.  Authors come from the 100/110/111 main entries
plus the 700/710/711 added entries; subjects from 650, optionally extended
with 600/610/651.  Author identity is the normalized name string, with no
authority resolution.
"""

from __future__ import annotations

import gzip
import logging
import re
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from xml.etree import ElementTree

from .accumulation import CheckpointSchedule, diversity_growth, vocabulary_growth
from .diversity import _check_order

__all__ = [
    "SubjectHeading",
    "MarcView",
    "FacetSeries",
    "RecordStream",
    "parse_records",
    "entry_year",
    "split_heading",
    "heading_from_subfields",
    "facet_series",
    "FACETS",
]

logger = logging.getLogger(__name__)

AUTHOR_FIELDS = ("100", "110", "111", "700", "710", "711")
SUBJECT_FIELDS = ("650",)
EXTENDED_SUBJECT_FIELDS = ("650", "600", "610", "651")
FACETS = ("authors", "subjects", "subdivisions")

# Subdivision kind by MARC subfield code; $a depends on the field.
_SUBFIELD_KINDS = {"x": "topical", "y": "chronological", "z": "geographical", "v": "form"}
_BASE_KINDS = {"650": "topical", "651": "geographical"}

_WS_RE = re.compile(r"\s+")


def _normalize(text: str) -> str:
    """Trim, collapse internal whitespace, strip trailing punctuation."""
    text = _WS_RE.sub(" ", text.strip())
    return text.rstrip(" ,;:/.")


@dataclass(frozen=True)
class SubjectHeading:
    """Compound subject descriptor split into ordered subdivisions.

    ``structured`` records which path produced the split: MARC subfields or
    string-splitting on the ``--`` delimiter.
    """

    subdivisions: tuple[tuple[str, str], ...]
    structured: bool = False

    @property
    def descriptor(self) -> str:
        return "--".join(text for _, text in self.subdivisions)

    @property
    def texts(self) -> tuple[str, ...]:
        return tuple(text for _, text in self.subdivisions)


@dataclass(frozen=True)
class MarcView:
    """Normalized view of one bibliographic record."""

    record_id: str
    entry_year: int | None
    authors: tuple[str, ...]
    headings: tuple[SubjectHeading, ...]


def entry_year(field_008: str | None) -> int | None:
    """Year a record entered the catalog, from 008/00-05 (YYMMDD).

    Century pivot: YY >= 70 reads as 19YY, otherwise 20YY.  Undecodable
    fields yield None.
    """
    if field_008 is None or len(field_008) < 6 or not field_008[:6].isdigit():
        return None
    yy = int(field_008[:2])
    return 1900 + yy if yy >= 70 else 2000 + yy


def split_heading(descriptor: str) -> SubjectHeading:
    """Split a plain descriptor on the ``--`` delimiter.

    Without subfield structure the subdivision kinds are unknown and tagged
    ``other``.
    """
    parts = [p for p in (part.strip() for part in descriptor.split("--")) if p]
    if not parts:
        raise ValueError("empty subject descriptor")
    return SubjectHeading(
        subdivisions=tuple(("other", p) for p in parts), structured=False
    )


def heading_from_subfields(
    pairs: Iterable[tuple[str, str]], tag: str = "650"
) -> SubjectHeading | None:
    """Build a heading from MARC (subfield code, text) pairs in field order.

    $a carries the base term, $x/$y/$z/$v the typed subdivisions; other
    subfields (authority links, source codes) are ignored.  Returns None
    when no usable text remains.
    """
    subdivisions: list[tuple[str, str]] = []
    for code, raw in pairs:
        text = _normalize(raw)
        if not text:
            continue
        if code == "a":
            subdivisions.append((_BASE_KINDS.get(tag, "other"), text))
        elif code in _SUBFIELD_KINDS:
            subdivisions.append((_SUBFIELD_KINDS[code], text))
    if not subdivisions:
        return None
    if len(subdivisions) == 1 and "--" in subdivisions[0][1]:
        # Pre-joined descriptor stored in a single subfield.
        return split_heading(subdivisions[0][1])
    return SubjectHeading(subdivisions=tuple(subdivisions), structured=True)


def _localname(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _record_to_view(record: ElementTree.Element, subject_fields: tuple[str, ...]) -> MarcView:
    record_id = None
    field_008 = None
    authors: list[str] = []
    headings: list[SubjectHeading] = []

    for child in record:
        name = _localname(child.tag)
        if name == "controlfield":
            tag = child.get("tag")
            if tag == "001" and child.text:
                record_id = child.text.strip()
            elif tag == "008" and child.text:
                field_008 = child.text
        elif name == "datafield":
            tag = child.get("tag") or ""
            subfields = [
                (sf.get("code") or "", sf.text or "")
                for sf in child
                if _localname(sf.tag) == "subfield"
            ]
            if tag in AUTHOR_FIELDS:
                for code, text in subfields:
                    if code == "a":
                        name_text = _normalize(text)
                        if name_text:
                            authors.append(name_text)
            elif tag in subject_fields:
                heading = heading_from_subfields(subfields, tag)
                if heading is not None:
                    headings.append(heading)

    if not record_id:
        raise ValueError("record has no 001 control number")
    return MarcView(
        record_id=record_id,
        entry_year=entry_year(field_008),
        authors=tuple(authors),
        headings=tuple(headings),
    )


class RecordStream(Iterator[MarcView]):
    """Iterator over the records of one or more MARCXML files.

    Structurally invalid records are skipped with a counted warning instead
    of aborting the stream; ``records`` and ``skipped`` are valid once the
    stream is exhausted.
    """

    def __init__(self, sources: Iterable, extended_subjects: bool = False) -> None:
        self._sources = list(sources)
        self._subject_fields = (
            EXTENDED_SUBJECT_FIELDS if extended_subjects else SUBJECT_FIELDS
        )
        self.records = 0
        self.skipped = 0
        self._iter = self._walk()

    def _open(self, source):
        if hasattr(source, "read"):
            return source
        path = str(source)
        if path.endswith(".gz"):
            return gzip.open(path, "rb")
        return open(path, "rb")

    def _walk(self) -> Iterator[MarcView]:
        for source in self._sources:
            handle = self._open(source)
            try:
                for _, elem in ElementTree.iterparse(handle, events=("end",)):
                    if _localname(elem.tag) != "record":
                        continue
                    try:
                        view = _record_to_view(elem, self._subject_fields)
                    except ValueError as exc:
                        self.skipped += 1
                        logger.warning("skipping record: %s", exc)
                    else:
                        self.records += 1
                        yield view
                    elem.clear()
            finally:
                if handle is not source:
                    handle.close()

    def __iter__(self) -> RecordStream:
        return self

    def __next__(self) -> MarcView:
        return next(self._iter)


def parse_records(sources, extended_subjects: bool = False) -> RecordStream:
    """Stream MarcViews from MARCXML paths or file-like objects.

    Accepts a single source or a sequence; ``.gz`` paths are decompressed
    transparently.
    """
    if isinstance(sources, (str, bytes)) or hasattr(sources, "read"):
        sources = [sources]
    return RecordStream(sources, extended_subjects=extended_subjects)


def _facet_values(view: MarcView, facet: str) -> list[str]:
    if facet == "authors":
        return list(view.authors)
    if facet == "subjects":
        return [h.descriptor for h in view.headings]
    if facet == "subdivisions":
        return [text for h in view.headings for text in h.texts]
    raise ValueError(f"unknown facet {facet!r}; expected one of {FACETS}")


@dataclass(frozen=True)
class FacetSeries:
    """Per-year cumulative richness and diversity of one catalog facet."""

    facet: str
    order: float
    rows: tuple[tuple[int, int, float], ...]  # (year, cum_richness, cum_diversity)
    total_events: int
    missing_year: int = 0
    structured_headings: int = 0
    split_headings: int = 0

    @property
    def mu(self) -> float:
        """Mean number of items per facet value: total events / final richness."""
        return self.total_events / self.rows[-1][1]

    def to_csv(self) -> str:
        lines = ["year,cum_richness,cum_diversity"]
        for year, rich, div in self.rows:
            lines.append(f"{year},{rich},{div:.4f}")
        return "\n".join(lines) + "\n"


def facet_series(
    records: Iterable[MarcView], facet: str, order: float = 1.0
) -> FacetSeries:
    """Cumulative richness/diversity of a facet, bucketed by entry year.

    Each record contributes one event per facet value; records without a
    decodable entry year are excluded and counted.  Raises ``ValueError``
    when no record carries a year.
    """
    order = _check_order(order)
    events: list[tuple[int, str]] = []
    missing = 0
    structured = 0
    split = 0
    for view in records:
        if facet != "authors":
            for h in view.headings:
                if h.structured:
                    structured += 1
                else:
                    split += 1
        if view.entry_year is None:
            missing += 1
            continue
        for value in _facet_values(view, facet):
            events.append((view.entry_year, value))
    if not events:
        raise ValueError(
            f"no records with a catalog-entry year carry facet {facet!r}"
        )

    events.sort(key=lambda pair: pair[0])  # stable: keeps arrival order per year
    years = sorted({year for year, _ in events})
    boundaries = []
    count = 0
    index = {}
    for year, _ in events:
        count += 1
        index[year] = count
    boundaries = [index[y] for y in years]

    labels = [label for _, label in events]
    schedule = CheckpointSchedule.explicit(boundaries)
    rich_curve = vocabulary_growth(labels, schedule).with_years(years)
    div_curve = diversity_growth(labels, schedule, order).with_years(years)

    rows = tuple(
        (year, int(rich), div)
        for year, (_, rich), (_, div) in zip(years, rich_curve.points, div_curve.points)
    )
    return FacetSeries(
        facet=facet,
        order=order,
        rows=rows,
        total_events=len(events),
        missing_year=missing,
        structured_headings=structured,
        split_headings=split,
    )
