"""Observers for every witness an engine hands back.

The engines already re-check their own witnesses; this hook lets a caller run a
second, independent check (the test suite uses it to audit every witness it sees).
"""

from typing import Callable

_observers: list[Callable] = []


def add_observer(fn: Callable) -> None:
    _observers.append(fn)


def remove_observer(fn: Callable) -> None:
    _observers.remove(fn)


def emit(kind: str, witness, **context) -> None:
    """``kind`` is "rule" (context: literals, decisive) or "setrank" (context: gf, ind)."""
    for fn in list(_observers):
        fn(kind, witness, **context)
