"""Single gateway for all HTTP traffic, with live, record, and replay modes.

Every downstream parser receives a :class:`FetchResponse`, so the whole
pipeline is testable offline: record once, then replay byte-identically
with zero network access. Fixtures are one file per request, named by the
SHA-256 of the normalized request line, with a diff-able ASCII header
followed by the raw body bytes.
"""

from __future__ import annotations

import hashlib
import logging
import os
import tempfile
import threading
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Optional
from urllib.parse import urlsplit, urlunsplit

import requests

from .errors import FixtureMiss, NetworkError

logger = logging.getLogger(__name__)

DEFAULT_USER_AGENT = "tweetcheck/0.1 (automated fact-check evidence retrieval)"
DEFAULT_DELAY_MS = 1000
DEFAULT_TIMEOUT_S = 30.0
MAX_REDIRECTS = 5

# Politeness bookkeeping is deliberately module-global: concurrent fetchers
# must share one per-host clock. Each host gets its own lock, held across
# the request itself, so same-host request starts are provably separated by
# the delay while other hosts proceed in parallel.
_POLITENESS_LOCK = threading.Lock()
_HOST_LOCKS: dict[str, threading.Lock] = {}
_HOST_NEXT_SLOT: dict[str, float] = {}


class FetchMode(Enum):
    LIVE = "live"
    RECORD = "record"
    REPLAY = "replay"


@dataclass(frozen=True)
class FetchRequest:
    """A GET request to an absolute URL."""

    url: str
    accept_language: Optional[str] = None
    method: str = "GET"

    def __post_init__(self):
        parts = urlsplit(self.url)
        if not parts.scheme or not parts.netloc:
            raise ValueError(f"url must be absolute: {self.url!r}")
        if self.method != "GET":
            raise ValueError("only GET is supported")


@dataclass(frozen=True)
class FetchResponse:
    """An HTTP response with the body preserved byte-exact (post-decompression)."""

    status: int
    final_url: str
    body: bytes
    content_type: str = ""

    def __post_init__(self):
        if not 100 <= self.status <= 599:
            raise ValueError(f"status out of range: {self.status}")

    @property
    def ok(self) -> bool:
        return 200 <= self.status < 300


def normalize_url_for_key(url: str) -> str:
    """Lowercase scheme and host, strip any trailing "/" from the path."""
    parts = urlsplit(url)
    path = parts.path.rstrip("/")
    return urlunsplit((parts.scheme.lower(), parts.netloc.lower(), path, parts.query, parts.fragment))


def fixture_key(req: FetchRequest) -> str:
    """64-char hex digest identifying a request: SHA-256 of "<METHOD> <normalized-url>"."""
    line = f"{req.method} {normalize_url_for_key(req.url)}"
    return hashlib.sha256(line.encode("utf-8")).hexdigest()


class FixtureStore:
    """Directory of recorded responses, one ``<digest>.fixture`` file per key.

    File layout: four ASCII header lines (status, final URL, content type,
    body byte length), a blank line, then the raw body bytes.
    """

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    def path_for(self, key: str) -> Path:
        return self.root / f"{key}.fixture"

    def exists(self, key: str) -> bool:
        return self.path_for(key).is_file()

    def load(self, key: str, url: str = "") -> FetchResponse:
        path = self.path_for(key)
        try:
            data = path.read_bytes()
        except FileNotFoundError:
            raise FixtureMiss(key, url) from None
        try:
            status_line, final_url, content_type, length_line, rest = data.split(b"\n", 4)
            if not rest.startswith(b"\n"):
                raise ValueError("missing blank line after header")
            body = rest[1:]
            expected = int(length_line)
        except ValueError as exc:
            raise FixtureMiss(key, url) from exc
        if len(body) != expected:
            raise FixtureMiss(key, url)
        return FetchResponse(
            status=int(status_line),
            final_url=final_url.decode("utf-8"),
            body=body,
            content_type=content_type.decode("utf-8"),
        )

    def save(self, key: str, response: FetchResponse) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        header = (
            f"{response.status}\n{response.final_url}\n"
            f"{response.content_type}\n{len(response.body)}\n\n"
        )
        path = self.path_for(key)
        fd, tmp_name = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(header.encode("utf-8"))
                handle.write(response.body)
            os.replace(tmp_name, path)  # last write wins, never a torn file
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
        return path


def _host_lock(host: str) -> threading.Lock:
    with _POLITENESS_LOCK:
        lock = _HOST_LOCKS.get(host)
        if lock is None:
            lock = _HOST_LOCKS[host] = threading.Lock()
        return lock


def _reset_politeness_clock() -> None:
    with _POLITENESS_LOCK:
        _HOST_LOCKS.clear()
        _HOST_NEXT_SLOT.clear()


Transport = Callable[[FetchRequest], FetchResponse]


class Fetcher:
    """Mode-aware fetch gateway.

    Live performs the request with a per-host politeness delay; record does
    the same and persists the response under its fixture key; replay serves
    recorded responses only and never touches the network.
    """

    def __init__(
        self,
        mode: FetchMode,
        store: Optional[FixtureStore] = None,
        *,
        user_agent: str = DEFAULT_USER_AGENT,
        delay_ms: int = DEFAULT_DELAY_MS,
        timeout_s: float = DEFAULT_TIMEOUT_S,
        transport: Optional[Transport] = None,
    ):
        if mode in (FetchMode.RECORD, FetchMode.REPLAY) and store is None:
            raise ValueError(f"{mode.value} mode requires a fixture store")
        self.mode = mode
        self.store = store
        self.user_agent = user_agent
        self.delay_ms = delay_ms
        self.timeout_s = timeout_s
        self._session: Optional[requests.Session] = None
        if transport is not None:
            self._transport = transport
        else:
            # created eagerly so concurrent fetches never race on lazy init;
            # constructing a session opens no connections
            self._session = requests.Session()
            self._session.max_redirects = MAX_REDIRECTS
            self._transport = self._requests_transport

    def fetch(self, req: FetchRequest) -> FetchResponse:
        """Resolve one request according to the mode.

        Non-2xx statuses are responses, not errors; callers interpret them.
        Raises :class:`FixtureMiss` in replay mode for unrecorded requests
        and :class:`NetworkError` on live transport failure.
        """
        key = fixture_key(req)
        if self.mode is FetchMode.REPLAY:
            assert self.store is not None
            return self.store.load(key, req.url)
        response = self._polite_request(req)
        if self.mode is FetchMode.RECORD:
            assert self.store is not None
            self.store.save(key, response)
        return response

    def _polite_request(self, req: FetchRequest) -> FetchResponse:
        delay_s = self.delay_ms / 1000.0
        if delay_s <= 0:
            return self._transport(req)
        host = (urlsplit(req.url).hostname or "").lower()
        with _host_lock(host):
            now = time.monotonic()
            slot = _HOST_NEXT_SLOT.get(host, now)
            if slot > now:
                time.sleep(slot - now)
            started = time.monotonic()
            try:
                return self._transport(req)
            finally:
                # failed requests still contacted the host; keep the spacing
                _HOST_NEXT_SLOT[host] = started + delay_s

    def _requests_transport(self, req: FetchRequest) -> FetchResponse:
        assert self._session is not None
        headers = {"User-Agent": self.user_agent}
        if req.accept_language:
            headers["Accept-Language"] = req.accept_language
        try:
            resp = self._session.get(
                req.url, headers=headers, timeout=self.timeout_s, allow_redirects=True
            )
        except requests.RequestException as exc:
            raise NetworkError(f"GET {req.url} failed: {exc}") from exc
        return FetchResponse(
            status=resp.status_code,
            final_url=resp.url,
            body=resp.content,
            content_type=resp.headers.get("Content-Type", ""),
        )


def fetch(
    req: FetchRequest,
    mode: FetchMode,
    store: Optional[FixtureStore] = None,
    **kwargs,
) -> FetchResponse:
    """One-shot convenience wrapper around :class:`Fetcher`."""
    return Fetcher(mode, store, **kwargs).fetch(req)
