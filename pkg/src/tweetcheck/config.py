"""Plain key=value configuration with three-layer precedence.

Defaults are defined in code; an optional configuration file overrides
them; the TWEETCHECK_MODE environment variable overrides the fetch mode
only; command-line flags override everything.

Recognized keys::

    mode = live | record | replay
    fixtures = <directory>
    user_agent = <string>
    politeness_delay_ms = <int>
    timeout_s = <float>
    verify.max_articles = <int>
    endpoint.<engine> = <url template containing {query}>
    query.<engine>.max_chars = <int>
    query.<engine>.encoding = plus | percent
    query.<engine>.truncation = char-prefix | word-boundary-prefix
    query.<engine>.quote_phrase = true | false
    selectors.<engine> = <path to a key=value selector file>
    rating-selectors.<publisher> = <path to a key=value selector file>

where <engine> is one of: snopes, reuters, web, web-snopes, politwoops,
and <publisher> is snopes or reuters (article rating extraction).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .adapters import DEFAULT_ENDPOINTS, DEFAULT_SELECTORS, EngineSettings
from .errors import TweetCheckError
from .fetch import DEFAULT_DELAY_MS, DEFAULT_TIMEOUT_S, DEFAULT_USER_AGENT, FetchMode, Fetcher, FixtureStore
from .model import SourceId
from .queries import Encoding, Truncation, default_spec, spec_with_overrides

MODE_ENV_VAR = "TWEETCHECK_MODE"


class ConfigError(TweetCheckError):
    """A configuration file or value could not be interpreted."""


def load_keyvalues(path: str | Path) -> dict[str, str]:
    """Parse a plain key=value file; "#" lines and blank lines are ignored."""
    values: dict[str, str] = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{line_no}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        values[key.strip()] = value.strip()
    return values


def _parse_mode(value: str) -> FetchMode:
    try:
        return FetchMode(value.lower())
    except ValueError:
        raise ConfigError(f"unknown mode {value!r} (expected live/record/replay)") from None


def source_by_name(name: str) -> SourceId:
    for source in SourceId:
        if source.value == name:
            return source
    raise ConfigError(f"unknown engine name {name!r}")


@dataclass
class AppConfig:
    """Resolved runtime settings for the CLI and library entry points."""

    mode: FetchMode = FetchMode.LIVE
    fixtures_dir: Optional[Path] = None
    user_agent: str = DEFAULT_USER_AGENT
    politeness_delay_ms: int = DEFAULT_DELAY_MS
    timeout_s: float = DEFAULT_TIMEOUT_S
    max_articles: int = 3
    endpoints: dict[SourceId, str] = field(default_factory=lambda: dict(DEFAULT_ENDPOINTS))
    query_overrides: dict[SourceId, dict[str, str]] = field(default_factory=dict)
    selector_files: dict[SourceId, Path] = field(default_factory=dict)
    rating_selector_files: dict[str, Path] = field(default_factory=dict)

    def engine_settings(self, source: SourceId) -> EngineSettings:
        spec = default_spec(source)
        overrides = self.query_overrides.get(source, {})
        if overrides:
            try:
                spec = spec_with_overrides(
                    spec,
                    max_chars=_parse_int("max_chars", overrides["max_chars"])
                    if "max_chars" in overrides
                    else None,
                    encoding=_parse_encoding(overrides.get("encoding")),
                    truncation=_parse_truncation(overrides.get("truncation")),
                    quote_phrase=_parse_bool(overrides.get("quote_phrase")),
                )
            except ValueError as exc:
                raise ConfigError(f"bad query override for {source.value}: {exc}") from None
        selectors = dict(DEFAULT_SELECTORS[source])
        if source in self.selector_files:
            selectors.update(load_keyvalues(self.selector_files[source]))
        return EngineSettings(
            source=source, endpoint=self.endpoints[source], spec=spec, selectors=selectors
        )

    def rating_selectors(self) -> dict[str, dict[str, str]]:
        """Per-publisher selector overrides for the rating scrapers."""
        return {
            publisher: load_keyvalues(path)
            for publisher, path in self.rating_selector_files.items()
        }

    def build_fetcher(self, **kwargs) -> Fetcher:
        store = FixtureStore(self.fixtures_dir) if self.fixtures_dir else None
        if self.mode in (FetchMode.RECORD, FetchMode.REPLAY) and store is None:
            raise ConfigError(f"{self.mode.value} mode needs a fixtures directory")
        return Fetcher(
            self.mode,
            store,
            user_agent=self.user_agent,
            delay_ms=self.politeness_delay_ms,
            timeout_s=self.timeout_s,
            **kwargs,
        )


def _parse_encoding(value: Optional[str]) -> Optional[Encoding]:
    if value is None:
        return None
    try:
        return Encoding(value.lower())
    except ValueError:
        raise ConfigError(f"unknown encoding {value!r} (expected plus/percent)") from None


def _parse_truncation(value: Optional[str]) -> Optional[Truncation]:
    if value is None:
        return None
    try:
        return Truncation(value.lower())
    except ValueError:
        raise ConfigError(
            f"unknown truncation {value!r} (expected char-prefix/word-boundary-prefix)"
        ) from None


def _parse_bool(value: Optional[str]) -> Optional[bool]:
    if value is None:
        return None
    lowered = value.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ConfigError(f"expected a boolean, got {value!r}")


def _parse_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key} expects an integer, got {value!r}") from None


def _parse_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key} expects a number, got {value!r}") from None


def build_config(
    config_path: Optional[str | Path] = None,
    env: Optional[dict[str, str]] = None,
) -> AppConfig:
    """Assemble configuration from file then environment (mode only)."""
    env = os.environ if env is None else env
    config = AppConfig()
    if config_path is not None:
        _apply_file(config, load_keyvalues(config_path))
    if env.get(MODE_ENV_VAR):
        config.mode = _parse_mode(env[MODE_ENV_VAR])
    return config


def _apply_file(config: AppConfig, values: dict[str, str]) -> None:
    for key, value in values.items():
        if key == "mode":
            config.mode = _parse_mode(value)
        elif key == "fixtures":
            config.fixtures_dir = Path(value)
        elif key == "user_agent":
            config.user_agent = value
        elif key == "politeness_delay_ms":
            config.politeness_delay_ms = _parse_int(key, value)
        elif key == "timeout_s":
            config.timeout_s = _parse_float(key, value)
        elif key == "verify.max_articles":
            config.max_articles = _parse_int(key, value)
        elif key.startswith("endpoint."):
            config.endpoints[source_by_name(key.removeprefix("endpoint."))] = value
        elif key.startswith("selectors."):
            config.selector_files[source_by_name(key.removeprefix("selectors."))] = Path(value)
        elif key.startswith("rating-selectors."):
            publisher = key.removeprefix("rating-selectors.")
            if publisher not in ("snopes", "reuters"):
                raise ConfigError(f"unknown publisher in {key!r}")
            config.rating_selector_files[publisher] = Path(value)
        elif key.startswith("query."):
            parts = key.split(".")
            if len(parts) != 3:
                raise ConfigError(f"malformed query override key: {key!r}")
            source = source_by_name(parts[1])
            if parts[2] not in ("max_chars", "encoding", "truncation", "quote_phrase"):
                raise ConfigError(f"unknown query setting: {key!r}")
            config.query_overrides.setdefault(source, {})[parts[2]] = value
        else:
            raise ConfigError(f"unknown configuration key: {key!r}")
