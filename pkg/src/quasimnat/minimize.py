"""Local optimality, steepest descent and domain reduction."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from .core import (
    INF,
    IntBox,
    Point,
    TabulatedFunction,
    Value,
    coord_sum,
    coordinate_bounds,
    exchange_step,
    value_to_json,
)
from .validation import (
    NotInDomainError,
    PreconditionError,
    check_box,
    check_function,
    check_point,
    check_points,
)

logger = logging.getLogger(__name__)

STRICT_LIMIT = 10_000


class InvariantError(AssertionError):
    """An audited invariant (box or candidate set contains a minimizer) broke."""


class PeelError(RuntimeError):
    """No point of the candidate set lies in its peeled box."""


# -- data records ----------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    x: Point
    i: int
    j: int
    value: Value

    def to_json(self) -> dict:
        return {"x": list(self.x), "i": self.i, "j": self.j, "value": value_to_json(self.value)}


@dataclass
class DescentTrace:
    start: Point
    steps: list[Step]
    minimizer: Point
    value: Value
    boxes: list[IntBox] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.steps)

    def to_json(self) -> dict:
        out = {
            "start": list(self.start),
            "steps": [s.to_json() for s in self.steps],
            "minimizer": list(self.minimizer),
            "value": value_to_json(self.value),
            "iterations": self.iterations,
        }
        if self.boxes:
            out["boxes"] = [b.to_json() for b in self.boxes]
        return out


@dataclass(frozen=True)
class Halfspace:
    """One of ``y(k) <= c``, ``y(k) >= c``, ``y(N) <= c``, ``y(N) >= c``.

    ``index`` is the 1-based coordinate, or 0 for the coordinate sum.
    """

    index: int
    sense: str  # "<=" or ">="
    bound: int

    def __contains__(self, y) -> bool:
        lhs = coord_sum(y) if self.index == 0 else y[self.index - 1]
        return lhs <= self.bound if self.sense == "<=" else lhs >= self.bound

    def __str__(self):
        lhs = "y(N)" if self.index == 0 else f"y({self.index})"
        return f"{lhs} {self.sense} {self.bound}"

    def to_json(self) -> dict:
        return {"index": self.index, "sense": self.sense, "bound": self.bound}


@dataclass(frozen=True)
class CutCertificate:
    at: Point
    i: int
    j: int
    halfspaces: tuple[Halfspace, ...]

    def __contains__(self, y) -> bool:
        return all(y in h for h in self.halfspaces)

    def to_json(self) -> dict:
        return {
            "at": list(self.at),
            "i": self.i,
            "j": self.j,
            "halfspaces": [h.to_json() for h in self.halfspaces],
        }


def minimizer_cut(x: Point, i: int, j: int, *, strong: bool = False) -> CutCertificate:
    """Half-spaces promised to contain a minimizer after the steepest pair ``(i, j)``.

    The weak form keeps ``y(i) <= x(i)-1`` and ``y(j) >= x(j)+1``; the strong
    form adds ``y(N) <= x(N)-1`` when ``j = 0`` and ``y(N) >= x(N)+1``
    when ``i = 0``.
    """
    if i == j:
        raise ValueError("a minimizer cut needs a pair of distinct indices")
    hs = []
    if i:
        hs.append(Halfspace(i, "<=", x[i - 1] - 1))
    if j:
        hs.append(Halfspace(j, ">=", x[j - 1] + 1))
    if strong and j == 0:
        hs.append(Halfspace(0, "<=", coord_sum(x) - 1))
    if strong and i == 0:
        hs.append(Halfspace(0, ">=", coord_sum(x) + 1))
    return CutCertificate(x, i, j, tuple(hs))


# -- neighbourhood ------------------------------------------------------------------

def neighbour_values(f, x: Point, bounds: Optional[IntBox] = None):
    """Yield ``(i, j, value)`` over distinct pairs in lexicographic order.

    Neighbours outside ``bounds`` are skipped.
    """
    n = len(x)
    for i in range(n + 1):
        for j in range(n + 1):
            if i == j:
                continue
            y = exchange_step(x, i, j)
            if bounds is not None and y not in bounds:
                continue
            yield i, j, f(y)


def _tie_key(i, j):
    return (0 if (i and j) else 1, i, j)


def is_local_min(f, x) -> bool:
    """True iff no exchange neighbour ``x - chi_i + chi_j`` is strictly lower."""
    f = check_function(f, tabulated=False)
    x = check_point(x, f, in_domain=True)
    fx = f(x)
    return all(v >= fx for _, _, v in neighbour_values(f, x))


def steepest_direction(f, x, bounds: Optional[IntBox] = None) -> Optional[Step]:
    """Best strictly improving exchange from ``x``, or None at a local minimum.

    Ties between value-minimizing pairs go to pairs with both indices
    nonzero, then to smaller ``i``, then to smaller ``j``.
    """
    f = check_function(f, tabulated=False)
    x = check_point(x, f, in_domain=True)
    if bounds is not None:
        bounds = check_box(bounds, f.dim)
    fx = f(x)
    best = None
    for i, j, v in neighbour_values(f, x, bounds):
        if not v < fx:
            continue
        if best is None or v < best[2] or (v == best[2] and _tie_key(i, j) < _tie_key(best[0], best[1])):
            best = (i, j, v)
    if best is None:
        return None
    i, j, v = best
    return Step(exchange_step(x, i, j), i, j, v)


def minimizing_pairs(f, x: Point, bounds: Optional[IntBox] = None) -> tuple[Value, list[tuple[int, int]]]:
    """All distinct pairs attaining ``min f(x - chi_i + chi_j)``, with that minimum."""
    vals = list(neighbour_values(f, x, bounds))
    if not vals:
        return INF, []
    m = min(v for _, _, v in vals)
    return m, [(i, j) for i, j, v in vals if v == m]


# -- strict-mode preconditions ----------------------------------------------------------

def _resolve_strict(strict, f) -> bool:
    if strict is None:
        return isinstance(f, TabulatedFunction) and len(f) <= STRICT_LIMIT
    if strict and not isinstance(f, TabulatedFunction):
        raise TypeError("strict mode needs a tabulated function")
    return bool(strict)


def _require_ssqm_nat(f):
    from .axioms import check_ssqm_nat

    rep = check_ssqm_nat(f)
    if not rep.passed:
        raise PreconditionError("function violates the semi-strict quasi M-natural axiom", rep)


def _require_mnat_set(f):
    from .axioms import check_mnat_set

    rep = check_mnat_set(f)
    if not rep.passed:
        raise PreconditionError("effective domain is not an M-natural-convex set", rep)


def _has_minimizer_in(f: TabulatedFunction, keep) -> bool:
    m = f.min_value()
    return any(keep(x) for x, v in f.table.items() if v == m)


# -- algorithms -------------------------------------------------------------------------

def basic_steepest_descent(f, x0, *, strict=False, max_iter: Optional[int] = None) -> DescentTrace:
    """Move along the steepest exchange until no neighbour is strictly lower.

    ``strict=True`` verifies the semi-strict axiom first (tabulated input only),
    under which the output is a global minimizer.
    """
    f = check_function(f, tabulated=False)
    x = check_point(x0, f, in_domain=True)
    if _resolve_strict(strict, f):
        _require_ssqm_nat(f)
    start = x
    steps = []
    while max_iter is None or len(steps) < max_iter:
        step = steepest_direction(f, x)
        if step is None:
            break
        steps.append(step)
        x = step.x
    return DescentTrace(start, steps, x, f(x))


def modified_steepest_descent(f, x0, box=None, *, strict=False, audit=False,
                              max_iter: Optional[int] = None) -> DescentTrace:
    """Steepest descent restricted to a box that shrinks by one per used index.

    After each move ``u(i)`` drops by one (if ``i`` is nonzero) and ``l(j)``
    rises by one (if ``j`` is nonzero). ``box`` defaults to the coordinate
    bounds of the domain. ``audit=True`` checks after every step that the box
    still holds a minimizer.
    """
    f = check_function(f, tabulated=False)
    x = check_point(x0, f, in_domain=True)
    tab = isinstance(f, TabulatedFunction)
    if box is None:
        if not tab:
            raise ValueError("a box is required for oracle functions")
        box = coordinate_bounds(f.domain)
    box = check_box(box, f.dim)
    if tab:
        outside = next((p for p in f.domain if p not in box), None)
        if outside is not None:
            raise ValueError(f"domain point {list(outside)} lies outside the box")
    elif x not in box:
        raise ValueError("start point lies outside the box")
    if _resolve_strict(strict, f):
        _require_ssqm_nat(f)
    if audit and not tab:
        raise TypeError("audit mode needs a tabulated function")
    start = x
    steps, boxes = [], [box]
    while max_iter is None or len(steps) < max_iter:
        step = steepest_direction(f, x, bounds=box)
        if step is None:
            break
        i, j = step.i, step.j
        if i:
            box = box.with_upper(i, box.upper[i - 1] - 1)
        if j:
            box = box.with_lower(j, box.lower[j - 1] + 1)
        x = step.x
        steps.append(step)
        boxes.append(box)
        if audit and not _has_minimizer_in(f, box.__contains__):
            raise InvariantError(f"box {box} lost every minimizer after step {len(steps)}")
    return DescentTrace(start, steps, x, f(x), boxes)


# -- domain reduction ----------------------------------------------------------------------

def _ceil_div(a, b):
    return -((-a) // b)


def _scaled_bounds(lo, hi, n):
    """Integer hull pieces of ``(1-1/n)lo + hi/n`` and ``lo/n + (1-1/n)hi``.

    Returns ``(ceil(l'), floor(u'), floor(l'), ceil(u'))``.
    """
    a = (n - 1) * lo + hi
    b = lo + (n - 1) * hi
    return _ceil_div(a, n), b // n, a // n, _ceil_div(b, n)


def peel(points) -> IntBox:
    """Integer box of the peeled set, rounded inward.

    Per coordinate the bounds ``l' = (1-1/n)l + u/n`` and ``u' = l/n + (1-1/n)u``
    are rounded to ``[ceil l', floor u']``; a coordinate whose inner interval
    is empty is rounded outward to ``[floor l', ceil u']`` instead.
    """
    pts = check_points(points)
    box = coordinate_bounds(pts)
    n = box.dim
    lo, hi = [], []
    for l, u in zip(box.lower, box.upper):
        a, b, fa, cb = _scaled_bounds(l, u, n)
        if a > b:
            a, b = fa, cb
        lo.append(a)
        hi.append(b)
    return IntBox(tuple(lo), tuple(hi))


def _peel_levels(pts):
    """Successively wider peel boxes tried by :func:`find_in_peeled`."""
    box = coordinate_bounds(pts)
    n = box.dim
    yield "inner", peel(pts)
    outward = [_scaled_bounds(l, u, n) for l, u in zip(box.lower, box.upper)]
    yield "outward", IntBox(tuple(o[2] for o in outward), tuple(o[3] for o in outward))
    # factor 1/(n+1): peel of the M-convex lift {(y, -y(N))} in dimension n+1
    lifted = [_scaled_bounds(l, u, n + 1) for l, u in zip(box.lower, box.upper)]
    yield "lifted", IntBox(tuple(o[2] for o in lifted), tuple(o[3] for o in lifted))


def find_in_peeled(points, *, with_level: bool = False):
    """A point of the set inside its peeled box, by enumeration.

    Falls back to outward rounding and then to the bounds of the M-convex
    lift when the inner box catches no point.
    """
    pts = check_points(points)
    ordered = sorted(pts)
    for level, box in _peel_levels(pts):
        for p in ordered:
            if p in box:
                return (p, level) if with_level else p
    box = peel(pts)
    empty = [k + 1 for k in range(box.dim) if not any(box.lower[k] <= p[k] <= box.upper[k] for p in pts)]
    raise PeelError(f"no point in the peeled set; coordinates with no point in range: {empty or 'none (joint)'}")


@dataclass(frozen=True)
class ReductionRecord:
    peel_point: Point
    cut: CutCertificate
    type_index: int
    peel_level: str = "inner"

    def to_json(self) -> dict:
        return {
            "peel_point": list(self.peel_point),
            "cut": self.cut.to_json(),
            "type_index": self.type_index,
            "peel_level": self.peel_level,
        }


@dataclass
class ReductionState:
    box: IntBox
    candidate_set: list[Point]
    iteration_log: list[ReductionRecord] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.iteration_log)

    def to_json(self) -> dict:
        return {
            "box": self.box.to_json(),
            "candidate_set": [list(p) for p in self.candidate_set],
            "iteration_log": [r.to_json() for r in self.iteration_log],
            "iterations": self.iterations,
        }


@dataclass
class ReductionResult:
    minimizer: Point
    value: Value
    state: ReductionState

    @property
    def iterations(self) -> int:
        return self.state.iterations

    def to_json(self) -> dict:
        return {
            "minimizer": list(self.minimizer),
            "value": value_to_json(self.value),
            "iterations": self.iterations,
            "state": self.state.to_json(),
        }


def domain_reduction(f, *, strict=None, audit=False, max_iter: Optional[int] = None) -> ReductionResult:
    """Cut the candidate set with axis-orthogonal minimizer cuts until a
    peel point is locally minimal inside the current box.

    ``strict`` defaults to checking both preconditions (semi-strict axiom,
    M-natural-convex domain) for tables of at most 10^4 points.
    """
    f = check_function(f)
    if _resolve_strict(strict, f):
        _require_mnat_set(f)
        _require_ssqm_nat(f)
    cand = list(f.domain)
    box = coordinate_bounds(cand)
    state = ReductionState(box, cand)
    while True:
        x, level = find_in_peeled(cand, with_level=True)
        step = steepest_direction(f, x, bounds=box)
        if step is None:
            break
        if max_iter is not None and state.iterations >= max_iter:
            break
        cut = minimizer_cut(x, step.i, step.j)
        for h in cut.halfspaces:
            if h.sense == "<=":
                box = box.with_upper(h.index, min(box.upper[h.index - 1], h.bound))
            else:
                box = box.with_lower(h.index, max(box.lower[h.index - 1], h.bound))
        cand = [p for p in cand if p in box]
        state.iteration_log.append(ReductionRecord(x, cut, step.i or step.j, level))
        state.box, state.candidate_set = box, cand
        logger.debug("iteration %d: peel %s cut %s, %d candidates", state.iterations, x,
                     ", ".join(map(str, cut.halfspaces)), len(cand))
        if not cand:
            raise PeelError("cut produced an empty candidate set; preconditions violated")
        if audit and not _has_minimizer_in(f, box.__contains__):
            raise InvariantError(f"candidate set lost every minimizer at iteration {state.iterations}")
    return ReductionResult(x, f(x), state)


ALGORITHMS = ("basic", "modified", "domain-reduction")


def minimize(f, algorithm: str = "basic", x0=None, **kwargs):
    """Dispatch to one of the three minimization algorithms by name."""
    if algorithm == "basic":
        return basic_steepest_descent(f, x0, **kwargs)
    if algorithm == "modified":
        return modified_steepest_descent(f, x0, **kwargs)
    if algorithm == "domain-reduction":
        return domain_reduction(f, **kwargs)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {', '.join(ALGORITHMS)}")


__all__ = [
    "CutCertificate", "DescentTrace", "Halfspace", "InvariantError", "NotInDomainError",
    "PeelError", "ReductionRecord", "ReductionResult", "ReductionState", "Step",
    "basic_steepest_descent", "domain_reduction", "find_in_peeled", "is_local_min",
    "minimize", "minimizer_cut", "minimizing_pairs", "modified_steepest_descent",
    "neighbour_values", "peel", "steepest_direction",
]
