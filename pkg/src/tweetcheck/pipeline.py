"""End-to-end verification of one claim: query engines, scrape, aggregate.

Engines run in source declaration order, so output and evidence ordering
are deterministic regardless of where evidence came from. Per-engine fetch
problems degrade gracefully: the engine is skipped with a recorded error
and the verdict is computed from whatever evidence the others produced.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from .adapters import match_politwoops, ranked_search, search_politwoops
from .config import AppConfig
from .errors import CaptchaDetected, FixtureMiss, NetworkError, ParseError
from .fetch import Fetcher, FetchRequest
from .model import EvidenceItem, SourceId, TruthRating, TweetClaim, Verdict, classify_rating
from .ratings import canonicalize_article_url, identify_publisher, scrape_rating
from .verdict import aggregate

logger = logging.getLogger(__name__)

POLITWOOPS_CONFIRMATION = "That tweet was successfully queried on Politwoops"


@dataclass(frozen=True)
class VerifyRun:
    """What one verification produced: the verdict plus presentable output."""

    verdict: Verdict
    lines: tuple[str, ...]
    engine_errors: dict[SourceId, str]
    engines_run: int


def _rating_line(rating: TruthRating) -> str:
    if rating.missing:
        return "Truth rating: UNKNOWN (missing)"
    return f"Truth rating: {rating.raw_label}"


def verify_claim(
    claim: TweetClaim,
    config: AppConfig,
    fetcher: Fetcher,
    engines: Optional[Sequence[SourceId]] = None,
) -> VerifyRun:
    """Run the enabled engines over one claim and aggregate a verdict."""
    enabled = set(engines) if engines is not None else set(SourceId)
    lines: list[str] = []
    evidence: list[EvidenceItem] = []
    errors: dict[SourceId, str] = {}
    seen_articles: set[str] = set()
    rating_selectors = config.rating_selectors()
    engines_run = 0

    for source in SourceId:
        if source not in enabled:
            continue
        engines_run += 1
        try:
            if source is SourceId.POLITWOOPS:
                _run_politwoops(claim, fetcher, config, lines, evidence)
            else:
                _run_ranked_engine(
                    source, claim, fetcher, config, lines, evidence, seen_articles,
                    rating_selectors,
                )
        except (NetworkError, FixtureMiss) as exc:
            logger.warning("%s unavailable: %s", source.value, exc)
            errors[source] = str(exc)
        except CaptchaDetected as exc:
            logger.warning(
                "%s served a bot challenge, back off and retry later: %s", source.value, exc
            )
            errors[source] = f"bot challenge: {exc}"
        except ParseError as exc:
            logger.warning("%s returned an unparseable page: %s", source.value, exc)
            errors[source] = f"unparseable page: {exc}"

    return VerifyRun(
        verdict=aggregate(claim, evidence),
        lines=tuple(lines),
        engine_errors=errors,
        engines_run=engines_run,
    )


def _run_politwoops(
    claim: TweetClaim,
    fetcher: Fetcher,
    config: AppConfig,
    lines: list[str],
    evidence: list[EvidenceItem],
) -> None:
    hits = search_politwoops(claim, fetcher, config.engine_settings(SourceId.POLITWOOPS))
    hit = match_politwoops(claim, hits)
    if hit is None:
        return
    lines.append(POLITWOOPS_CONFIRMATION)
    evidence.append(
        EvidenceItem(
            source=SourceId.POLITWOOPS,
            url=hit.detail_url,
            rank=hits.index(hit) + 1,
            matched_text=hit.tweet_text,
        )
    )


def _run_ranked_engine(
    source: SourceId,
    claim: TweetClaim,
    fetcher: Fetcher,
    config: AppConfig,
    lines: list[str],
    evidence: list[EvidenceItem],
    seen_articles: set[str],
    rating_selectors: dict,
) -> None:
    results = ranked_search(source, claim, fetcher, config.engine_settings(source))
    taken = 0
    for rank, url in enumerate(results.urls, start=1):
        if taken >= config.max_articles:
            break
        if identify_publisher(url) is None:
            continue
        canonical = canonicalize_article_url(url)
        if canonical in seen_articles:
            continue
        seen_articles.add(canonical)
        taken += 1
        rating = _scrape_article(url, fetcher, rating_selectors)
        evidence.append(EvidenceItem(source=source, url=url, rank=rank, rating=rating))
        lines.append(f"Article found at URL: {url}")
        lines.append(_rating_line(rating))


def _scrape_article(url: str, fetcher: Fetcher, selectors) -> TruthRating:
    try:
        page = fetcher.fetch(FetchRequest(url=url))
        if not page.ok:
            logger.warning("article %s returned HTTP %s", url, page.status)
            return classify_rating("")
        return scrape_rating(page, selectors)
    except (NetworkError, FixtureMiss, ParseError) as exc:
        logger.warning("could not scrape %s: %s", url, exc)
        return classify_rating("")
