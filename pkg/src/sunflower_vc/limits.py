"""Exact-enumeration limits, overridable through environment variables."""

import os


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


def prob_exact_limit() -> int:
    """Max support size for exact upset probabilities."""
    return _env_int("SUNFLOWER_VC_PROB_LIMIT", 22)


def spread_exact_limit() -> int:
    """Max ground size for exact spread expectations (enumerates all W)."""
    return _env_int("SUNFLOWER_VC_SPREAD_LIMIT", 16)


def cover_exact_limit() -> int:
    """Max family size for exact minimum-weight covers."""
    return _env_int("SUNFLOWER_VC_COVER_LIMIT", 14)


def vc_candidate_budget() -> int:
    """Max number of candidate sets examined by the VC-dimension search."""
    return _env_int("SUNFLOWER_VC_VC_BUDGET", 5_000_000)
