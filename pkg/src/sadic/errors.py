"""Shared exception types.

Bad input and violated preconditions raise plain ValueError.  Inconclusive
is reserved for computations that are correct but ran out of probing
horizon, so callers can distinguish "no" from "could not decide".
"""

from __future__ import annotations


class Inconclusive(Exception):
    """A probe ended without reaching a definitive verdict."""

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = dict(details)
