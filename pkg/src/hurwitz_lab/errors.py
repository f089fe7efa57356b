"""Shared resource-budget handling."""

from __future__ import annotations

import os

BUDGET_ENV = "HURWITZ_LAB_BUDGET"


class BudgetExceeded(RuntimeError):
    """A computation would exceed its configured size budget."""


def budget_from_env(default: int) -> int:
    """``default``, unless HURWITZ_LAB_BUDGET is set, in which case that value wins."""
    raw = os.environ.get(BUDGET_ENV)
    if not raw:
        return default
    value = int(raw)
    if value <= 0:
        raise ValueError(f"{BUDGET_ENV} must be positive")
    return value
