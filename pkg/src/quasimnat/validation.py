"""Input validation helpers shared by the checkers, algorithms and estimators."""
from __future__ import annotations

from typing import Iterable

from .core import (
    DimensionError,
    EmptyDomainError,
    IntBox,
    OracleFunction,
    Point,
    TabulatedFunction,
    as_point,
    is_finite,
)


class NotInDomainError(ValueError):
    """A point was required to lie in the effective domain and does not."""


class PreconditionError(RuntimeError):
    """A strict-mode axiom precondition failed.

    ``report`` holds the failing :class:`~quasimnat.axioms.AxiomReport`.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


def check_function(f, *, tabulated: bool = True, nonempty: bool = True):
    """Validate a function argument and return it.

    Mappings and JSON-style dicts are converted to :class:`TabulatedFunction`.
    With ``tabulated=False`` an evaluation oracle is accepted as well.
    """
    if isinstance(f, dict) and "dim" in f and "points" in f:
        f = TabulatedFunction.from_json(f)
    if isinstance(f, TabulatedFunction):
        if nonempty and len(f) == 0:
            raise EmptyDomainError("function has empty effective domain")
        return f
    if tabulated:
        raise TypeError(f"expected a TabulatedFunction, got {type(f).__name__}")
    if isinstance(f, OracleFunction) or (callable(f) and hasattr(f, "dim")):
        return f
    raise TypeError(f"expected a function with a 'dim' attribute, got {type(f).__name__}")


def check_point(x, f=None, *, in_domain: bool = False) -> Point:
    dim = None if f is None else f.dim
    pt = as_point(x, dim)
    if in_domain and not is_finite(f(pt)):
        raise NotInDomainError(f"point {list(pt)} is outside the effective domain")
    return pt


def check_points(points: Iterable, dim: int | None = None) -> list[Point]:
    pts = [as_point(p, dim) for p in points]
    if not pts:
        raise EmptyDomainError("empty point set")
    n = len(pts[0])
    for p in pts:
        if len(p) != n:
            raise DimensionError("points of mixed dimension")
    return pts


def check_box(box, dim: int) -> IntBox:
    if not isinstance(box, IntBox):
        lo, hi = box
        box = IntBox(lo, hi)
    if box.dim != dim:
        raise DimensionError(f"box of dimension {box.dim}, expected {dim}")
    return box
