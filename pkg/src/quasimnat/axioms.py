"""Brute-force checkers for the exchange axioms.

Every checker quantifies over ``x`` and ``y`` in the effective domain (in
lexicographic order), then over ``i`` in supp+(x - y), and tries candidate
``j`` in ascending order with the null index 0 last. On failure the report
carries the first violating ``(x, y, i)`` together with the outcome of every
candidate ``j``, so the verdict can be replayed from the report alone.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import (
    INF,
    Point,
    TabulatedFunction,
    Value,
    as_value,
    coord_sum,
    exchange_step,
    supp_neg,
    supp_pos,
    value_to_json,
)
from .validation import PreconditionError, check_function

AXIOMS = ("ssqm-nat", "mnat-exc", "m-exc", "ssqm", "ssqm-nat-prj", "mnat-exc-prj", "mnat-set", "descent-lemma")


@dataclass(frozen=True)
class ExchangeOutcome:
    """Outcome of one candidate exchange ``x - chi_i + chi_j``, ``y + chi_i - chi_j``.

    The four values are stored so the booleans can be recomputed without the
    function.
    """

    i: int
    j: int
    fx: Value
    fy: Value
    fx_new: Value
    fy_new: Value
    cond_x_improves: bool
    cond_y_improves: bool
    cond_both_equal: bool
    inequality_holds: bool

    @classmethod
    def from_values(cls, i, j, fx, fy, fx_new, fy_new) -> "ExchangeOutcome":
        return cls(
            i, j, fx, fy, fx_new, fy_new,
            cond_x_improves=fx_new < fx,
            cond_y_improves=fy_new < fy,
            cond_both_equal=(fx_new == fx) and (fy_new == fy),
            inequality_holds=fx + fy >= fx_new + fy_new,
        )

    @property
    def quasi_ok(self) -> bool:
        """At least one of the three semi-strict conditions holds."""
        return self.cond_x_improves or self.cond_y_improves or self.cond_both_equal

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "fx": value_to_json(self.fx),
            "fy": value_to_json(self.fy),
            "fx_new": value_to_json(self.fx_new),
            "fy_new": value_to_json(self.fy_new),
            "cond_x_improves": self.cond_x_improves,
            "cond_y_improves": self.cond_y_improves,
            "cond_both_equal": self.cond_both_equal,
            "inequality_holds": self.inequality_holds,
        }

    @classmethod
    def from_json(cls, doc) -> "ExchangeOutcome":
        return cls(
            doc["i"], doc["j"],
            as_value(doc["fx"]), as_value(doc["fy"]),
            as_value(doc["fx_new"]), as_value(doc["fy_new"]),
            doc["cond_x_improves"], doc["cond_y_improves"],
            doc["cond_both_equal"], doc["inequality_holds"],
        )


@dataclass(frozen=True)
class Violation:
    x: Point
    y: Point
    i: Optional[int]
    candidates: tuple[ExchangeOutcome, ...]
    part: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "x": list(self.x),
            "y": list(self.y),
            "i": self.i,
            "candidates": [c.to_json() for c in self.candidates],
        }
        if self.part is not None:
            out["part"] = self.part
        return out

    @classmethod
    def from_json(cls, doc) -> "Violation":
        return cls(
            tuple(doc["x"]), tuple(doc["y"]), doc["i"],
            tuple(ExchangeOutcome.from_json(c) for c in doc["candidates"]),
            doc.get("part"),
        )


@dataclass
class AxiomReport:
    axiom: str
    passed: bool
    violation: Optional[Violation] = None
    violations: list[Violation] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.passed

    def to_json(self) -> dict:
        out = {
            "axiom": self.axiom,
            "pass": self.passed,
            "violation": None if self.violation is None else self.violation.to_json(),
        }
        if len(self.violations) > 1:
            out["violations"] = [v.to_json() for v in self.violations]
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    @classmethod
    def from_json(cls, doc) -> "AxiomReport":
        v = doc.get("violation")
        violation = None if v is None else Violation.from_json(v)
        many = [Violation.from_json(d) for d in doc.get("violations", [])]
        if violation is not None and not many:
            many = [violation]
        return cls(doc["axiom"], doc["pass"], violation, many, list(doc.get("notes", [])))


@dataclass
class ProjectedReport:
    """Verdicts of the three parts of the projected semi-strict axiom."""

    part_i: AxiomReport
    part_ii: AxiomReport
    part_iii: AxiomReport

    @property
    def passed(self) -> bool:
        return self.part_i.passed and self.part_ii.passed and self.part_iii.passed

    def __bool__(self):
        return self.passed

    def parts(self):
        return {"part_i": self.part_i, "part_ii": self.part_ii, "part_iii": self.part_iii}

    def to_json(self) -> dict:
        return {
            "axiom": self.part_i.axiom.rsplit(":", 1)[0],
            "pass": self.passed,
            "parts": {k: r.to_json() for k, r in self.parts().items()},
        }


# -- the generic sweep ---------------------------------------------------------

def _outcome(f, x, y, fx, fy, i, j) -> ExchangeOutcome:
    return ExchangeOutcome.from_values(i, j, fx, fy, f(exchange_step(x, i, j)), f(exchange_step(y, j, i)))


def _first_violation(f, x, y, fx, fy, i, js, accept) -> Optional[Violation]:
    outcomes = []
    for j in js:
        oc = _outcome(f, x, y, fx, fy, i, j)
        if accept(oc):
            return None
        outcomes.append(oc)
    return Violation(x, y, i, tuple(outcomes))


# Selectors return (i-list, j-list) for a pair or None if the pair is not quantified.
def _sel_with_null(x, y, d):
    return supp_pos(d), supp_neg(d) + [0]


def _sel_no_null(x, y, d):
    return supp_pos(d), supp_neg(d)


def _sel_prj_i(x, y, d):
    return (supp_pos(d), supp_neg(d) + [0]) if coord_sum(x) > coord_sum(y) else None


def _sel_prj_ii(x, y, d):
    return (supp_pos(d), supp_neg(d)) if coord_sum(x) <= coord_sum(y) else None


def _sel_prj_iii(x, y, d):
    # x(N) < y(N) forces supp-(x - y) to be nonempty.
    return ([0], supp_neg(d)) if coord_sum(x) < coord_sum(y) else None


def _accept_quasi(oc):
    return oc.quasi_ok


def _accept_ineq(oc):
    return oc.inequality_holds


def _sweep_rows(f, rows, selector, accept, exhaustive):
    dom = f.domain
    found = []
    for xi in rows:
        x = dom[xi]
        fx = f(x)
        for y in dom:
            d = tuple(a - b for a, b in zip(x, y))
            sel = selector(x, y, d)
            if sel is None:
                continue
            isel, js = sel
            fy = f(y)
            for i in isel:
                v = _first_violation(f, x, y, fx, fy, i, js, accept)
                if v is not None:
                    found.append(v)
                    if not exhaustive:
                        return found
    return found


def _sweep_chunk(args):
    f, rows, key, exhaustive = args
    selector, accept = _RULES[key]
    return _sweep_rows(f, rows, selector, accept, exhaustive)


_RULES: dict[str, tuple[Callable, Callable]] = {
    "ssqm-nat": (_sel_with_null, _accept_quasi),
    "mnat-exc": (_sel_with_null, _accept_ineq),
    "m-exc": (_sel_no_null, _accept_ineq),
    "ssqm": (_sel_no_null, _accept_quasi),
    "ssqm-nat-prj:i": (_sel_prj_i, _accept_quasi),
    "ssqm-nat-prj:ii": (_sel_prj_ii, _accept_quasi),
    "ssqm-nat-prj:iii": (_sel_prj_iii, _accept_quasi),
    "mnat-exc-prj:i": (_sel_prj_i, _accept_ineq),
    "mnat-exc-prj:ii": (_sel_prj_ii, _accept_ineq),
    "mnat-exc-prj:iii": (_sel_prj_iii, _accept_ineq),
}


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("QUASIMNAT_THREADS", "1")))
    except ValueError:
        return 1


def _run(f, key, exhaustive, threads, name=None) -> AxiomReport:
    f = check_function(f)
    rows = range(len(f))
    threads = default_threads() if threads is None else threads
    if threads > 1 and len(f) > 64:
        # contiguous row blocks keep the first violation in loop order
        size = -(-len(f) // threads)
        chunks = [(f, range(s, min(s + size, len(f))), key, exhaustive) for s in range(0, len(f), size)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            found = [v for part in pool.map(_sweep_chunk, chunks) for v in part]
        if not exhaustive:
            found = found[:1]
    else:
        selector, accept = _RULES[key]
        found = _sweep_rows(f, rows, selector, accept, exhaustive)
    part = key.split(":", 1)[1] if ":" in key else None
    if part is not None:
        found = [Violation(v.x, v.y, v.i, v.candidates, part) for v in found]
    return AxiomReport(name or key, not found, found[0] if found else None, found)


# -- public checkers -----------------------------------------------------------

def check_ssqm_nat(f, *, exhaustive=False, threads=None) -> AxiomReport:
    """Semi-strict quasi M-natural exchange: some ``j`` in supp-(x-y) or 0
    gives strict improvement at x, strict improvement at y, or equality at both.
    """
    return _run(f, "ssqm-nat", exhaustive, threads)


def check_mnat_exc(f, *, exhaustive=False, threads=None) -> AxiomReport:
    """M-natural exchange: ``f(x)+f(y) >= f(x-chi_i+chi_j) + f(y+chi_i-chi_j)``
    for some ``j`` in supp-(x-y) or 0."""
    return _run(f, "mnat-exc", exhaustive, threads)


def check_m_exc(f, *, exhaustive=False, threads=None) -> AxiomReport:
    """M exchange: as :func:`check_mnat_exc` but ``j`` may not be 0."""
    return _run(f, "m-exc", exhaustive, threads)


def check_ssqm(f, *, exhaustive=False, threads=None) -> AxiomReport:
    return _run(f, "ssqm", exhaustive, threads)


def check_ssqm_nat_prj(f, *, exhaustive=False, threads=None) -> ProjectedReport:
    """Projected semi-strict axiom, one report per part.

    Part (iii) fixes ``i = 0`` and only quantifies pairs with x(N) < y(N);
    for such pairs supp-(x-y) is never empty, so the ``j``-range never
    degenerates.
    """
    return ProjectedReport(
        *(_run(f, f"ssqm-nat-prj:{p}", exhaustive, threads) for p in ("i", "ii", "iii"))
    )


def check_mnat_exc_prj(f, *, exhaustive=False, threads=None) -> ProjectedReport:
    """Projected M-natural exchange axiom (same parts, inequality instead)."""
    return ProjectedReport(
        *(_run(f, f"mnat-exc-prj:{p}", exhaustive, threads) for p in ("i", "ii", "iii"))
    )


def check_mnat_set(points, *, exhaustive=False, threads=None) -> AxiomReport:
    """Set exchange axiom: both exchanged points stay in the set.

    Checked as the M-natural exchange inequality of the 0/+inf indicator,
    which holds exactly when both exchanged points are members.
    """
    if isinstance(points, TabulatedFunction):
        f = TabulatedFunction(points.dim, {x: 0 for x in points.domain})
    else:
        f = TabulatedFunction.indicator(points)
    return _run(f, "mnat-exc", exhaustive, threads, name="mnat-set")


def check_descent_lemma(f, *, strict=False, exhaustive=False) -> AxiomReport:
    """Whenever ``f(x) > f(y)`` some ``i`` in supp+(x-y)+{0} and ``j`` in
    supp-(x-y)+{0} give ``f(x - chi_i + chi_j) < f(x)``.

    With ``strict=True`` the semi-strict axiom is verified first and a
    :class:`PreconditionError` raised if it fails.
    """
    f = check_function(f)
    if strict:
        pre = check_ssqm_nat(f)
        if not pre.passed:
            raise PreconditionError("descent lemma requires the semi-strict axiom", pre)
    dom = f.domain
    found = []
    for x in dom:
        fx = f(x)
        for y in dom:
            fy = f(y)
            if not fx > fy:
                continue
            d = tuple(a - b for a, b in zip(x, y))
            isel = supp_pos(d) + [0]
            jsel = supp_neg(d) + [0]
            outcomes = []
            ok = False
            for i in isel:
                for j in jsel:
                    if i == j:
                        continue
                    oc = _outcome(f, x, y, fx, fy, i, j)
                    if oc.cond_x_improves:
                        ok = True
                        break
                    outcomes.append(oc)
                if ok:
                    break
            if not ok:
                found.append(Violation(x, y, None, tuple(outcomes)))
                if not exhaustive:
                    return AxiomReport("descent-lemma", False, found[0], found)
    return AxiomReport("descent-lemma", not found, found[0] if found else None, found)


CHECKERS = {
    "ssqm-nat": check_ssqm_nat,
    "mnat-exc": check_mnat_exc,
    "m-exc": check_m_exc,
    "ssqm": check_ssqm,
    "ssqm-nat-prj": check_ssqm_nat_prj,
    "mnat-exc-prj": check_mnat_exc_prj,
    "mnat-set": check_mnat_set,
    "descent-lemma": check_descent_lemma,
}


def check_axiom(f, axiom: str, **kwargs):
    try:
        fn = CHECKERS[axiom.replace("_", "-")]
    except KeyError:
        raise ValueError(f"unknown axiom {axiom!r}; expected one of {', '.join(AXIOMS)}") from None
    return fn(f, **kwargs)


# -- replay --------------------------------------------------------------------

def replay_outcome(oc: ExchangeOutcome) -> bool:
    """Recompute the booleans of ``oc`` from its stored values."""
    fresh = ExchangeOutcome.from_values(oc.i, oc.j, oc.fx, oc.fy, oc.fx_new, oc.fy_new)
    return fresh == oc


def replay_violation(f, v: Violation) -> bool:
    """Re-evaluate ``f`` at the certificate points and compare every outcome."""
    fx, fy = f(v.x), f(v.y)
    for oc in v.candidates:
        fresh = _outcome(f, v.x, v.y, fx, fy, oc.i, oc.j)
        if fresh != oc:
            return False
    return True


def requirement_for(axiom: str) -> Callable[[ExchangeOutcome], bool]:
    """Predicate a candidate must satisfy for the named axiom to hold."""
    base = axiom.split(":", 1)[0]
    if base in ("ssqm-nat", "ssqm", "ssqm-nat-prj"):
        return _accept_quasi
    if base == "descent-lemma":
        return lambda oc: oc.cond_x_improves
    return _accept_ineq
