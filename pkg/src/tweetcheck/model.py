"""Shared domain vocabulary: claims, evidence, ratings, verdicts, ranked results.

Every value type here is immutable after construction and safe to share
between threads. The two operations (:func:`classify_rating` and
:func:`implied_attribution`) are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional


class SourceId(Enum):
    """The closed set of evidence sources. Adapters register against exactly one."""

    SNOPES_SEARCH = "snopes"
    REUTERS_SEARCH = "reuters"
    WEB_SEARCH = "web"
    WEB_SEARCH_SITE_SNOPES = "web-snopes"
    POLITWOOPS = "politwoops"


#: Declaration order of sources; used for deterministic evidence/report ordering.
SOURCE_ORDER = {source: index for index, source in enumerate(SourceId)}


class RatingKind(Enum):
    """Normalized truth-rating categories extracted from fact-check articles."""

    TRUE = "True"
    FALSE = "False"
    MIXTURE = "Mixture"
    MISATTRIBUTED = "Misattributed"
    CORRECT_ATTRIBUTION = "Correct Attribution"
    SATIRE = "Satire"
    UNKNOWN = "Unknown"


class Attribution(Enum):
    """What a truth rating says about whether the tweet was actually posted."""

    IMPLIES_AUTHENTIC = "implies-authentic"
    IMPLIES_FABRICATED = "implies-fabricated"
    NO_IMPLICATION = "no-implication"


class Outcome(Enum):
    """Final verdict categories for an alleged tweet."""

    AUTHENTIC = "Authentic"
    FABRICATED = "Fabricated"
    UNVERIFIABLE = "Unverifiable"


#: Raw label (lowercased, trailing punctuation stripped) -> rating kind.
#: Unmapped labels classify as UNKNOWN; never raise.
RATING_LABEL_TABLE = {
    "true": RatingKind.TRUE,
    "correct attribution": RatingKind.CORRECT_ATTRIBUTION,
    "false": RatingKind.FALSE,
    "fake": RatingKind.FALSE,
    "fabricated": RatingKind.FALSE,
    "misattributed": RatingKind.MISATTRIBUTED,
    "mixture": RatingKind.MIXTURE,
    "partly false": RatingKind.MIXTURE,
    "labeled satire": RatingKind.SATIRE,
    "satire": RatingKind.SATIRE,
}

_LABEL_TRAILING_PUNCT = ".!?,:;"


@dataclass(frozen=True)
class TweetClaim:
    """The alleged tweet under verification.

    Args:
        body: full alleged tweet text; must be non-empty after trimming and
            at most 4000 characters (real tweets are far shorter, but quoted
            threads and notes may exceed 280).
        alleged_handle: optional screen name without the leading "@". Kept
            for future metadata-driven checks; current adapters ignore it.
    """

    body: str
    alleged_handle: Optional[str] = None

    def __post_init__(self):
        if not self.body.strip():
            raise ValueError("claim body must be non-empty after trimming")
        if len(self.body) > 4000:
            raise ValueError("claim body exceeds the 4000 character sanity bound")


@dataclass(frozen=True)
class TruthRating:
    """A rating scraped from a fact-check article.

    ``raw_label`` is preserved verbatim (case and punctuation) for audit.
    ``missing`` is set when the article had no rating block at all.
    """

    kind: RatingKind
    raw_label: str
    missing: bool = False

    def __post_init__(self):
        if self.kind is RatingKind.UNKNOWN and not self.raw_label and not self.missing:
            raise ValueError("an UNKNOWN rating with no label must carry the missing flag")


@dataclass(frozen=True)
class EvidenceItem:
    """One found artifact: a fact-check article or a Politwoops record.

    Politwoops evidence carries ``matched_text`` (the stored tweet text that
    matched) and no rating; fact-check evidence carries a rating (possibly
    UNKNOWN) and no matched text. ``implication_override`` lets a caller pin
    the attribution implication for one item, e.g. when a human has read the
    article and knows it checks content rather than attribution.
    """

    source: SourceId
    url: str
    rank: int
    rating: Optional[TruthRating] = None
    matched_text: Optional[str] = None
    implication_override: Optional[Attribution] = None

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if self.source is SourceId.POLITWOOPS:
            if self.matched_text is None or self.rating is not None:
                raise ValueError("Politwoops evidence needs matched_text and no rating")
        else:
            if self.rating is None or self.matched_text is not None:
                raise ValueError("fact-check evidence needs a rating and no matched_text")

    def implication(self) -> Attribution:
        """Attribution implication of this item, honouring the override."""
        if self.implication_override is not None:
            return self.implication_override
        if self.matched_text is not None:
            return Attribution.IMPLIES_AUTHENTIC
        assert self.rating is not None
        return implied_attribution(self.rating)


@dataclass(frozen=True)
class Verdict:
    """Aggregated conclusion for one claim, with its supporting evidence."""

    outcome: Outcome
    evidence: tuple[EvidenceItem, ...]
    conflict: bool = False


@dataclass(frozen=True)
class RankedResults:
    """Links returned by one source for one query, in presentation order."""

    source: SourceId
    query_text: str
    urls: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.urls)) != len(self.urls):
            raise ValueError("result urls must be unique after normalization")


def classify_rating(raw_label: str) -> TruthRating:
    """Map a scraped rating label onto a :class:`TruthRating`.

    Matching is case-insensitive and ignores surrounding whitespace and
    trailing punctuation; the raw label is preserved verbatim. Total over
    all inputs: unmappable labels yield UNKNOWN, an empty label yields
    UNKNOWN with the missing flag set.
    """
    normalized = raw_label.strip().lower().rstrip(_LABEL_TRAILING_PUNCT).rstrip()
    if not normalized:
        return TruthRating(kind=RatingKind.UNKNOWN, raw_label=raw_label, missing=True)
    kind = RATING_LABEL_TABLE.get(normalized, RatingKind.UNKNOWN)
    return TruthRating(kind=kind, raw_label=raw_label)


def implied_attribution(rating: TruthRating) -> Attribution:
    """What a rating implies about the tweet having been posted.

    A FALSE or MISATTRIBUTED rating implies the tweet was fabricated; TRUE
    or CORRECT_ATTRIBUTION implies it was really posted; everything else
    carries no implication. Depends on ``rating.kind`` only.
    """
    if rating.kind in (RatingKind.FALSE, RatingKind.MISATTRIBUTED):
        return Attribution.IMPLIES_FABRICATED
    if rating.kind in (RatingKind.TRUE, RatingKind.CORRECT_ATTRIBUTION):
        return Attribution.IMPLIES_AUTHENTIC
    return Attribution.NO_IMPLICATION
