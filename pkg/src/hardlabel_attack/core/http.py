"""
Small JSON-over-HTTP client with per-attempt hooks and exponential backoff.

Retries run here with one hook call per attempt, so the query ledger sees
every attempt that reaches the server. Unless a session is injected, each
thread gets its own requests.Session.
"""

import threading
import time
from typing import Any, Callable, Optional

import requests
from wasabi import msg

from .errors import MalformedResponse, RemoteTimeout, RemoteVictimError, ServerError

RETRY_STATUSES = frozenset({429, 500, 502, 503, 504})
JSON_HEADERS = {"Content-Type": "application/json"}


class JsonPoster:
    def __init__(
        self,
        timeout: float = 10.0,
        retries: int = 3,
        backoff: float = 0.5,
        session: Optional[requests.Session] = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self.sleep = sleep
        self._shared = session
        if session is not None:
            session.headers.update(JSON_HEADERS)
        self._local = threading.local()

    @property
    def session(self) -> requests.Session:
        if self._shared is not None:
            return self._shared
        session = getattr(self._local, "session", None)
        if session is None:
            session = requests.Session()
            session.headers.update(JSON_HEADERS)
            self._local.session = session
        return session

    def post(
        self,
        url: str,
        body: dict,
        before_attempt: Optional[Callable[[], None]] = None,
        on_response: Optional[Callable[[], None]] = None,
    ) -> Any:
        """
        POST `body` as JSON and return the decoded JSON reply.

        `before_attempt` runs before every send (it may raise to stop early);
        `on_response` runs once for every attempt that got an HTTP response.
        Transport failures and statuses in RETRY_STATUSES are retried up to
        `retries` times, waiting backoff * 2**(attempt - 1) seconds before retry
        number `attempt`.
        """
        last_error: Optional[RemoteVictimError] = None
        for attempt in range(self.retries + 1):
            if attempt > 0:
                delay = self.backoff * (2 ** (attempt - 1))
                msg.warn(f"Retrying {url} in {delay:.2f}s ({last_error})")
                self.sleep(delay)
            if before_attempt is not None:
                before_attempt()

            try:
                response = self.session.post(url, json=body, timeout=self.timeout)
            except requests.Timeout as e:
                last_error = RemoteTimeout(f"request to {url} timed out: {e}")
                continue
            except requests.RequestException as e:
                last_error = RemoteVictimError(f"request to {url} failed: {e}")
                continue

            if on_response is not None:
                on_response()

            if response.status_code in RETRY_STATUSES:
                last_error = ServerError(response.status_code)
                continue
            if response.status_code != 200:
                raise ServerError(response.status_code)

            try:
                return response.json()
            except ValueError as e:
                raise MalformedResponse(f"response from {url} is not JSON: {e}")

        raise last_error
