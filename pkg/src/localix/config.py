"""Enumeration bounds.

Bounds live in a context variable so that nested library calls pick them
up without every function growing a ``bounds=`` parameter::

    with using_bounds(elements=256):
        enumerate_elements(M)
"""

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, replace

from .errors import SizeLimitError


@dataclass(frozen=True)
class Bounds:
    elements: int = 4096
    subgroups: int = 256
    lattice: int = 20


_BOUNDS = ContextVar("localix_bounds", default=Bounds())


def current_bounds():
    return _BOUNDS.get()


@contextmanager
def using_bounds(**overrides):
    overrides = {k: v for k, v in overrides.items() if v is not None}
    token = _BOUNDS.set(replace(_BOUNDS.get(), **overrides))
    try:
        yield _BOUNDS.get()
    finally:
        _BOUNDS.reset(token)


def require_within(name, size):
    bound = getattr(current_bounds(), name)
    if size > bound:
        raise SizeLimitError(name, bound, size)
