import contextlib
import os

DEFAULT_BOUND = 10**7

_override: int | None = None


def enumeration_bound() -> int:
    """Largest number of tuples an enumeration may visit (env PFCHI_BOUND overrides)."""
    if _override is not None:
        return _override
    raw = os.environ.get("PFCHI_BOUND")
    if raw:
        try:
            return int(float(raw))
        except ValueError:
            pass
    return DEFAULT_BOUND


@contextlib.contextmanager
def bound(value: int | None):
    """Temporarily replace the enumeration bound (None keeps the current one)."""
    global _override
    old = _override
    if value is not None:
        _override = value
    try:
        yield
    finally:
        _override = old
