import os
from typing import Callable, Any


def should_log_user_data() -> bool:
    """Check if sample texts may appear in logs (they often come from private corpora)."""
    return os.getenv("HLA_ALLOW_TEXT_LOGS", "false").lower() == "true"


def safe_log_user_data(
    logger_func: Callable[..., Any], message: str, *args, **kwargs
) -> None:
    """Log a message carrying sample text only if enabled, otherwise drop it."""
    if should_log_user_data():
        logger_func(message, *args, **kwargs)


def preview(text: str, limit: int = 60) -> str:
    """Shorten a sample text for a log line."""
    return text if len(text) <= limit else text[:limit] + "..."
