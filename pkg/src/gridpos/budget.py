"""Enumeration budget resolution.

Every potentially explosive enumeration is guarded by a budget (number of
subsets visited).  Explicit arguments win, then the GRIDPOS_BUDGET
environment variable, then the default.
"""

import os

DEFAULT_BUDGET = 20_000_000


def resolve_budget(budget=None) -> int:
    if budget is not None:
        value = int(budget)
    else:
        env = os.environ.get("GRIDPOS_BUDGET", "").strip()
        value = int(env) if env else DEFAULT_BUDGET
    if value < 1:
        raise ValueError("budget must be positive")
    return value
