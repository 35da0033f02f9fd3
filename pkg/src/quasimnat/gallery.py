"""Worked example functions with their expected verdicts, plus instance generators.

Each :class:`GalleryEntry` stores the verdicts it is known to produce, so
``replay()`` (and ``quasimnat gallery --audit``) can re-derive them.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from . import analysis, axioms
from .core import INF, IntBox, TabulatedFunction, Value, as_value
from .validation import check_box, check_function

PASS = "pass"
FAIL = "fail"
NOT_MET = "hypothesis-not-met"

DEFAULT_SIZE_LIMIT = 200_000
VERIFY_LIMIT = 4096


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class Expectation:
    """A named check, its arguments, and the verdict it must produce.

    ``detail`` pins extra facts about the outcome: ``at`` for the first
    violation of an axiom, ``witness`` for a theorem, ``max_gap`` for
    proximity, ``set`` for argmin.
    """

    check: str
    verdict: str
    args: tuple = ()
    detail: tuple = ()

    def kwargs(self) -> dict:
        return dict(self.args)

    def details(self) -> dict:
        return dict(self.detail)

    def to_json(self) -> dict:
        return {"check": self.check, "verdict": self.verdict,
                "args": {k: _plain(v) for k, v in self.args},
                "detail": {k: _plain(v) for k, v in self.detail}}


def _plain(v):
    if isinstance(v, (tuple, list, frozenset, set)):
        items = sorted(v) if isinstance(v, (set, frozenset)) else v
        return [_plain(c) for c in items]
    return v


def expect(check: str, verdict: str, detail: Optional[dict] = None, **args) -> Expectation:
    return Expectation(check, verdict, tuple(sorted(args.items())), tuple(sorted((detail or {}).items())))


@dataclass
class GalleryEntry:
    name: str
    function: TabulatedFunction
    expected: list[Expectation] = field(default_factory=list)

    def replay(self) -> list[tuple[Expectation, str, bool]]:
        """Run every expectation; return ``(expectation, observed, matches)`` triples."""
        out = []
        for e in self.expected:
            observed, facts = run_check(self.function, e.check, **e.kwargs())
            ok = observed == e.verdict and all(facts.get(k) == _plain(v) for k, v in e.detail)
            out.append((e, observed, ok))
        return out

    def audit(self) -> bool:
        return all(ok for _, _, ok in self.replay())


# -- check dispatch -----------------------------------------------------------------

def _report_verdict(rep) -> tuple[str, dict]:
    facts = {}
    if rep.violation is not None:
        v = rep.violation
        facts["at"] = [list(v.x), list(v.y), v.i]
    return (PASS if rep.passed else FAIL), facts


def _theorem_verdict(tv) -> tuple[str, dict]:
    status = {analysis.HOLDS: PASS, analysis.FAILS: FAIL, analysis.NOT_MET: NOT_MET}[tv.status]
    facts = {}
    if tv.witness is not None:
        facts["witness"] = list(tv.witness)
    ctx = tv.counter_context
    for key in ("max_gap", "mu_next", "mu_tilde_next"):
        if key in ctx:
            facts[key] = ctx[key]
    return status, facts


def run_check(f, check: str, **kw) -> tuple[str, dict]:
    """Evaluate one named check and return ``(verdict, facts)``."""
    if check.startswith("axiom:"):
        name = check[len("axiom:"):]
        part = None
        if name.startswith(("ssqm-nat-prj:", "mnat-exc-prj:")):
            name, part = name.split(":")
        rep = axioms.check_axiom(f, name)
        if part is not None:
            rep = rep.parts()[part]
        return _report_verdict(rep)
    if check == "projection:ssqm":
        return _report_verdict(axioms.check_ssqm(analysis.project_to_m(f)))
    if check == "projection:m-exc":
        return _report_verdict(axioms.check_m_exc(analysis.project_to_m(f)))
    if check == "argmin":
        got = sorted(list(p) for p in analysis.argmin_set(f))
        return PASS, {"set": got}
    if check in ("min-cut-weak", "min-cut-strong", "statement-A", "geodesic"):
        fn = {
            "min-cut-weak": analysis.verify_min_cut_weak,
            "min-cut-strong": analysis.verify_min_cut_strong,
            "statement-A": analysis.verify_statement_A,
            "geodesic": analysis.verify_geodesic,
        }[check]
        return _theorem_verdict(fn(f, kw["x"], kw["pair"]))
    if check == "directional":
        return _theorem_verdict(analysis.verify_min_cut_directional(f, kw["x"], kw["variant"], kw.get("fixed", 0)))
    if check == "proximity":
        return _theorem_verdict(analysis.verify_proximity(f, kw["alpha"], kw.get("regime", "mnat")))
    if check == "scaled-hypothesis":
        ok = analysis.scaled_hypothesis(f, kw["x"], kw["alpha"], kw.get("regime", "mnat"))
        return (PASS if ok else FAIL), {"gap": analysis.proximity_gap(f, kw["x"], kw.get("regime", "mnat"))}
    if check == "sweep":
        verdicts = analysis.sweep(f, kw["theorem"])
        bad = [v for v in verdicts if v.status == analysis.FAILS]
        return (FAIL if bad else PASS), {}
    raise ValueError(f"unknown gallery check {check!r}")


# -- the worked examples ----------------------------------------------------------------

def example_2_1() -> GalleryEntry:
    """Nine-point function in Z^3 with two minimizers (2,1,0) and (2,0,1)."""
    f = TabulatedFunction(3, {
        (2, 1, 0): 0, (2, 0, 1): 0,
        (1, 1, 0): 1, (1, 0, 1): 1,
        (0, 1, 1): 2, (0, 0, 2): 2,
        (1, 1, 1): 3, (1, 0, 2): 3,
        (0, 1, 2): 4,
    })
    x = (0, 1, 2)
    return GalleryEntry("example-2-1", f, [
        expect("axiom:ssqm-nat", PASS),
        expect("axiom:mnat-exc", FAIL),
        expect("axiom:descent-lemma", PASS),
        expect("argmin", PASS, {"set": [[2, 0, 1], [2, 1, 0]]}),
        expect("min-cut-weak", PASS, {"witness": [2, 0, 1]}, x=x, pair=(2, 0)),
        expect("min-cut-strong", FAIL, x=x, pair=(2, 0)),
        expect("geodesic", FAIL, {"mu_tilde_next": 4}, x=x, pair=(2, 0)),
        expect("axiom:ssqm-nat-prj:part_iii", FAIL),
        expect("sweep", PASS, theorem="min-cut-weak"),
        expect("sweep", PASS, theorem="local-global"),
    ])


def example_2_2() -> GalleryEntry:
    """``f(x) = 2 - x(1)`` on ``[0,2] x [0,1]``; M-natural-convex."""
    f = TabulatedFunction.from_callable(IntBox((0, 0), (2, 1)), lambda x: 2 - x[0])
    return GalleryEntry("example-2-2", f, [
        expect("axiom:mnat-exc", PASS),
        expect("axiom:ssqm-nat", PASS),
        expect("argmin", PASS, {"set": [[2, 0], [2, 1]]}),
        expect("statement-A", FAIL, {"mu_next": 1}, x=(0, 1), pair=(2, 1)),
        expect("geodesic", PASS, x=(0, 1), pair=(2, 1)),
        expect("min-cut-weak", PASS, {"witness": [2, 0]}, x=(0, 1), pair=(2, 1)),
        expect("proximity", PASS, alpha=2),
        expect("projection:m-exc", PASS),
        expect("projection:ssqm", PASS),
        expect("sweep", PASS, theorem="geodesic"),
        expect("sweep", PASS, theorem="min-cut-strong"),
    ])


def example_2_4(k: int = 3) -> GalleryEntry:
    """Family on ``[0,k] x [0,1] x [0,1]`` whose scaled local minimum (k,0,0)
    sits at max-norm distance ``k`` from the unique minimizer (0,1,1)."""
    if isinstance(k, bool) or not isinstance(k, int) or k < 2:
        raise ValueError("k must be an integer >= 2")

    def val(x):
        lam, a, b = x
        return (a + b) * (lam - k - 1)

    f = TabulatedFunction.from_callable(IntBox((0, 0, 0), (k, 1, 1)), val)
    return GalleryEntry(f"example-2-4-k{k}", f, [
        expect("axiom:ssqm-nat", PASS),
        expect("argmin", PASS, {"set": [[0, 1, 1]]}),
        expect("scaled-hypothesis", PASS, {"gap": k}, x=(k, 0, 0), alpha=2),
        # the gap k exceeds the bound n(alpha - 1) = 3 only from k = 4 on
        expect("proximity", FAIL, {"max_gap": k}, alpha=2) if k > 3 else expect("proximity", PASS, alpha=2),
        expect("axiom:ssqm-nat-prj:part_iii", FAIL),
    ])


def example_4_1() -> GalleryEntry:
    """Four-point function in Z^2 with unique minimizer (2,0)."""
    f = TabulatedFunction(2, {(1, 0): 1, (2, 0): 0, (0, 1): 2, (1, 1): 3})
    return GalleryEntry("example-4-1", f, [
        expect("axiom:ssqm-nat", PASS),
        expect("argmin", PASS, {"set": [[2, 0]]}),
        expect("directional", FAIL, x=(1, 1), variant="mi", fixed=1),
        expect("directional", NOT_MET, x=(1, 1), variant="qi", fixed=1),
        expect("directional", FAIL, x=(0, 1), variant="miii"),
        expect("directional", NOT_MET, x=(0, 1), variant="qiii"),
        expect("axiom:ssqm-nat-prj:part_i", PASS),
        expect("axiom:ssqm-nat-prj:part_iii", FAIL, {"at": [[0, 1], [2, 0], 0]}),
        expect("projection:ssqm", FAIL),
        expect("axiom:mnat-exc", FAIL),
    ])


def example_4_2() -> GalleryEntry:
    """Six-point function on the triangle ``x >= 0, x(1)+x(2) <= 2``."""
    f = TabulatedFunction(2, {(0, 0): 0, (1, 0): 1, (0, 1): 1, (0, 2): 2, (2, 0): 3, (1, 1): 3})
    return GalleryEntry("example-4-2", f, [
        expect("axiom:ssqm-nat", PASS),
        expect("axiom:mnat-set", PASS),
        expect("axiom:ssqm-nat-prj:part_i", PASS),
        expect("axiom:ssqm-nat-prj:part_ii", FAIL, {"at": [[0, 2], [2, 0], 2]}),
        expect("projection:ssqm", FAIL),
    ])


_FLIP_EXTRA = {
    # g(x) = f(-x) refutes the i = 0 cases of the column/minus cuts
    "example-4-1": [
        expect("directional", FAIL, x=(-1, -1), variant="mii", fixed=1),
        expect("directional", NOT_MET, x=(-1, -1), variant="qii", fixed=1),
        expect("directional", FAIL, x=(0, -1), variant="miv"),
        expect("directional", NOT_MET, x=(0, -1), variant="qiv"),
    ],
}

_NEGATION_INVARIANT = {"axiom:ssqm-nat", "axiom:mnat-exc", "axiom:m-exc", "axiom:mnat-set", "axiom:descent-lemma"}


def example_neg_flip(entry: GalleryEntry) -> GalleryEntry:
    """Entry for ``g(x) = f(-x)``.

    Keeps expectations that do not depend on orientation, negates the
    argmin set, and adds any known refutations for the flipped function.
    """
    f = entry.function
    g = TabulatedFunction(f.dim, {tuple(-c for c in x): v for x, v in f.table.items()})
    base = entry.name[:-len("-neg")] if entry.name.endswith("-neg") else None
    name = base if base else entry.name + "-neg"
    expected = []
    for e in entry.expected:
        if e.check in _NEGATION_INVARIANT and not e.detail:
            expected.append(e)
        elif e.check == "argmin":
            flipped = sorted([-c for c in p] for p in e.details()["set"])
            expected.append(expect("argmin", PASS, {"set": flipped}))
    if base is None:
        expected.extend(_FLIP_EXTRA.get(entry.name, []))
    return GalleryEntry(name, g, expected)


def constant_on_box(box: IntBox, value=0) -> TabulatedFunction:
    return TabulatedFunction.from_callable(box, lambda x: value)


GALLERY: dict[str, Callable[..., GalleryEntry]] = {
    "example-2-1": example_2_1,
    "example-2-2": example_2_2,
    "example-2-4": example_2_4,
    "example-4-1": example_4_1,
    "example-4-2": example_4_2,
    "example-4-1-neg": lambda: example_neg_flip(example_4_1()),
}


def get_entry(name: str, k: int = 3) -> GalleryEntry:
    if name == "example-2-4" or name.startswith("example-2-4-k"):
        if name.startswith("example-2-4-k"):
            k = int(name[len("example-2-4-k"):])
        return example_2_4(k)
    try:
        return GALLERY[name]()
    except KeyError:
        raise KeyError(f"unknown gallery entry {name!r}; known: {', '.join(GALLERY)}") from None


def all_entries(ks=(2, 3, 5, 10)) -> list[GalleryEntry]:
    out = [example_2_1(), example_2_2()]
    out += [example_2_4(k) for k in ks]
    out += [example_4_1(), example_4_2(), example_neg_flip(example_4_1())]
    return out


def audit(entries=None) -> list[tuple[str, Expectation, str, bool]]:
    rows = []
    for entry in entries if entries is not None else all_entries():
        for e, observed, ok in entry.replay():
            rows.append((entry.name, e, observed, ok))
    return rows


# -- generators -------------------------------------------------------------------------

def _check_size(box: IntBox, limit: int):
    if box.empty:
        raise GeneratorError("box is empty")
    if box.size() > limit:
        raise GeneratorError(f"box has {box.size()} points, limit is {limit}")


def _random_convex(rng: random.Random, length: int, lo=-6, hi=6) -> list[int]:
    """Integer sequence of given length with nondecreasing differences."""
    steps = sorted(rng.randint(lo, hi) for _ in range(max(length - 1, 0)))
    vals = [rng.randint(-5, 5)]
    for s in steps:
        vals.append(vals[-1] + s)
    return vals


def _verify(f, checker, verify):
    if verify is None:
        verify = len(f) <= VERIFY_LIMIT
    if verify:
        rep = checker(f)
        if not rep.passed:
            raise AssertionError(f"generated function fails {rep.axiom}: {rep.violation}")


def gen_separable_convex(box, seed: int, *, limit: int = DEFAULT_SIZE_LIMIT, verify=None,
                         phis: Optional[list] = None) -> TabulatedFunction:
    """Random separable convex function ``sum_i phi_i(x(i))`` on ``box``.

    ``phis`` overrides the random univariate pieces (callables of one int).
    The M-natural exchange axiom is checked before returning when the box
    has at most 4096 points, or whenever ``verify=True``.
    """
    box = check_box(box, len(box[0]) if not isinstance(box, IntBox) else box.dim)
    _check_size(box, limit)
    rng = random.Random(seed)
    if phis is None:
        tables = [_random_convex(rng, u - l + 1) for l, u in zip(box.lower, box.upper)]
        phis = [(lambda t, tb=tb, l=l: tb[t - l]) for tb, l in zip(tables, box.lower)]
    f = TabulatedFunction.from_callable(box, lambda x: sum(phi(c) for phi, c in zip(phis, x)))
    _verify(f, axioms.check_mnat_exc, verify)
    return f


def _random_laminar(rng: random.Random, items: list[int]) -> list[tuple[int, ...]]:
    """Random laminar family over ``items`` (nested splits plus the whole)."""
    fam = []

    def split(group):
        if len(group) >= 2:
            fam.append(tuple(group))
        if len(group) <= 1:
            return
        cut = rng.randint(1, len(group) - 1)
        split(group[:cut])
        split(group[cut:])

    shuffled = items[:]
    rng.shuffle(shuffled)
    split(shuffled)
    return fam


def gen_laminar_convex(box, seed: int, *, limit: int = DEFAULT_SIZE_LIMIT, verify=None,
                       capped: bool = True) -> TabulatedFunction:
    """Random laminar convex function on ``box``.

    ``f(x) = sum_i phi_i(x(i)) + sum_A psi_A(x(A))`` over a random laminar
    family; with ``capped`` the domain is further cut by an upper bound on
    each ``x(A)``. Such functions are M-natural-convex.
    """
    box = check_box(box, len(box[0]) if not isinstance(box, IntBox) else box.dim)
    _check_size(box, limit)
    rng = random.Random(seed)
    n = box.dim
    fam = _random_laminar(rng, list(range(n)))
    single = [_random_convex(rng, u - l + 1) for l, u in zip(box.lower, box.upper)]
    groups = []
    for A in fam:
        lo = sum(box.lower[k] for k in A)
        hi = sum(box.upper[k] for k in A)
        psi = _random_convex(rng, hi - lo + 1, -4, 4)
        cap = rng.randint(lo + (hi - lo) // 2, hi) if capped else hi
        groups.append((A, lo, psi, cap))

    def val(x):
        total = sum(tb[c - l] for tb, c, l in zip(single, x, box.lower))
        for A, lo, psi, cap in groups:
            s = sum(x[k] for k in A)
            if s > cap:
                return None
            total += psi[s - lo]
        return total

    f = TabulatedFunction.from_callable(box, val)
    _verify(f, axioms.check_mnat_exc, verify)
    return f


def monotone_transform(f, g) -> TabulatedFunction:
    """Remap values through a strictly increasing ``g``.

    ``g`` is a mapping from every value of ``f`` to its image, or a callable.
    Order comparisons of values are unchanged, so the semi-strict axiom
    verdict carries over (asserted for small tables).
    """
    f = check_function(f)
    vals = sorted(set(f.table.values()))
    if isinstance(g, Mapping):
        missing = [v for v in vals if v not in g]
        if missing:
            raise ValueError(f"remap table lacks values {missing}")
        remap = {v: as_value(g[v]) for v in vals}
    else:
        remap = {v: as_value(g(v)) for v in vals}
    imgs = [remap[v] for v in vals]
    if any(a >= b for a, b in zip(imgs, imgs[1:])) or INF in imgs:
        raise ValueError("value remap is not strictly increasing on the value set of f")
    out = f.map_values(remap.__getitem__)
    if len(f) <= 400:
        before = axioms.check_ssqm_nat(f).passed
        assert axioms.check_ssqm_nat(out).passed == before, "monotone remap changed the semi-strict verdict"
    return out


def gen_random_filtered(box, value_range, seed: int, axiom: str = "ssqm-nat", max_attempts: int = 1000,
                        *, limit: int = 4096, min_points: int = 1) -> Optional[TabulatedFunction]:
    """Rejection-sample a random table passing ``axiom``.

    Each attempt draws a sub-domain (a random sub-box, thinned at random half
    of the time), then uniform integer values from ``value_range``. Draws
    whose domain has fewer than ``min_points`` points are rejected before
    values are sampled. Returns None when ``max_attempts`` draws all fail.
    """
    box = check_box(box, len(box[0]) if not isinstance(box, IntBox) else box.dim)
    _check_size(box, limit)
    vlo, vhi = value_range
    rng = random.Random(seed)
    for _ in range(max_attempts):
        lo, hi = [], []
        for l, u in zip(box.lower, box.upper):
            a, b = sorted((rng.randint(l, u), rng.randint(l, u)))
            lo.append(a)
            hi.append(b)
        pts = list(IntBox(tuple(lo), tuple(hi)).points())
        if rng.random() < 0.5 and len(pts) > 1:
            keep = rng.uniform(0.4, 1.0)
            thinned = [p for p in pts if rng.random() < keep]
            pts = thinned or [rng.choice(pts)]
        if len(pts) < min_points:
            continue
        f = TabulatedFunction(box.dim, {p: rng.randint(vlo, vhi) for p in pts})
        if axioms.check_axiom(f, axiom).passed:
            return f
    return None
