import os
from typing import Any, Optional

from ..core.errors import MalformedResponse
from ..core.http import JsonPoster
from ..core.text import Label, TokenSequence
from .oracle import QueryLedger


def _parse_label(payload: Any, num_classes: int) -> Label:
    if not isinstance(payload, dict) or "label" not in payload:
        raise MalformedResponse(f"expected an object with 'label', got {payload!r}")
    label_id = payload["label"]
    if isinstance(label_id, bool) or not isinstance(label_id, int):
        raise MalformedResponse(f"label must be an integer, got {label_id!r}")
    if not 0 <= label_id < num_classes:
        raise MalformedResponse(f"label {label_id} outside 0..{num_classes - 1}")
    name = payload.get("name")
    if name is not None and not isinstance(name, str):
        raise MalformedResponse(f"name must be a string, got {name!r}")
    return Label(id=label_id, name=name)


class RemoteVictim:
    """A victim served over HTTP: POST {"text": ...} -> {"label": int, "name": str?}."""

    def __init__(
        self,
        endpoint: Optional[str] = None,
        num_classes: int = 2,
        timeout: float = 10.0,
        retries: int = 3,
        poster: Optional[JsonPoster] = None,
    ):
        endpoint = endpoint or os.getenv("VICTIM_ENDPOINT")
        if not endpoint:
            raise ValueError("no victim endpoint given and VICTIM_ENDPOINT is unset")
        self.endpoint = endpoint
        self.num_classes = num_classes
        self.poster = poster or JsonPoster(timeout=timeout, retries=retries)

    def predict(self, text: TokenSequence) -> Label:
        payload = self.poster.post(self.endpoint, {"text": text.text})
        return _parse_label(payload, self.num_classes)

    def predict_metered(self, text: TokenSequence, ledger: QueryLedger) -> Label:
        """Like predict, but every attempt that reaches the server is billed."""
        payload = self.poster.post(
            self.endpoint,
            {"text": text.text},
            before_attempt=ledger.ensure_available,
            on_response=ledger.record,
        )
        return _parse_label(payload, self.num_classes)


def remote_predict(
    endpoint: str,
    text: TokenSequence,
    timeout: float = 10.0,
    retries: int = 3,
    ledger: Optional[QueryLedger] = None,
    num_classes: int = 2,
) -> Label:
    """One-shot label query against a remote victim."""
    victim = RemoteVictim(
        endpoint, num_classes=num_classes, timeout=timeout, retries=retries
    )
    if ledger is None:
        return victim.predict(text)
    return ledger.query(victim, text)
