"""Small shared helpers: canonical ordering, budgets, errors."""

from __future__ import annotations


class Undetermined(Exception):
    """A question could not be settled with the data or resources at hand."""


class BudgetExceeded(Undetermined):
    def __init__(self, resource: str, limit: int):
        super().__init__(f"budget exhausted: {resource} (limit {limit})")
        self.resource = resource
        self.limit = limit


class TruncationError(Undetermined):
    def __init__(self, what: str, needed: int, available: int):
        super().__init__(
            f"{what} needs simplices of dimension {needed}, data known only to {available}"
        )
        self.needed = needed
        self.available = available


class Budget:
    """Counts units of work and raises BudgetExceeded past ``limit``."""

    def __init__(self, limit: int = 10**6, resource: str = "candidates"):
        self.limit = limit
        self.resource = resource
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(self.resource, self.limit)

    def record(self) -> dict:
        return {"resource": self.resource, "limit": self.limit, "used": self.used}


def canon_key(x):
    """Total order on the heterogeneous identifiers used throughout the package."""
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(canon_key(e) for e in x))
    if isinstance(x, frozenset):
        return (3, tuple(sorted(canon_key(e) for e in x)))
    return (4, repr(x))


def csorted(items):
    return sorted(items, key=canon_key)


def ident(x) -> str:
    """Whitespace-free printable name for an identifier."""
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "(" + ",".join(ident(e) for e in x) + ")"
    if isinstance(x, frozenset):
        return "{" + ",".join(ident(e) for e in csorted(x)) + "}"
    return str(x).replace(" ", "")
