"""Shared exception types."""

from __future__ import annotations


class BudgetError(RuntimeError):
    """A requested computation exceeds a configured resource bound.

    Raised before any expensive enumeration or table allocation starts;
    callers may retry with a larger bound if they accept the cost.
    """
