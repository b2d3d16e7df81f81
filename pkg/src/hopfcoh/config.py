"""Runtime configuration: enumeration budget, worker count, kernel backend."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

DEFAULT_BUDGET = 10**7
_budget_override: int | None = None
_threads = 1


class EnumerationOverBudget(RuntimeError):
    """A brute-force search would visit more candidates than the budget allows."""

    def __init__(self, needed: int, budget: int, what: str = "enumeration"):
        super().__init__(f"{what} needs {needed} candidates, budget is {budget}")
        self.needed = needed
        self.budget = budget


def get_budget() -> int:
    if _budget_override is not None:
        return _budget_override
    env = os.environ.get("HOPFCOH_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


def set_budget(value: int | None) -> None:
    """Set a process-wide budget; ``None`` restores env/default lookup."""
    global _budget_override
    _budget_override = value


def require_budget(needed: int, what: str = "enumeration", budget: int | None = None) -> None:
    cap = get_budget() if budget is None else budget
    if needed > cap:
        raise EnumerationOverBudget(needed, cap, what)


def get_threads() -> int:
    return _threads


def set_threads(n: int) -> None:
    global _threads
    if n < 1:
        raise ValueError("thread count must be positive")
    _threads = n


def pmap(fn, items):
    """Order-preserving map over the configured worker pool."""
    items = list(items)
    if _threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=_threads) as pool:
        return list(pool.map(fn, items))
