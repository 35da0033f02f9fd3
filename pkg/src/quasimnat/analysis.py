"""Ground-truth minimizer sets and verifiers for the minimization theorems.

Everything here enumerates the table; nothing is clever. Verifiers return a
:class:`TheoremVerdict` whose ``status`` is ``"holds"``, ``"fails"`` or
``"hypothesis-not-met"``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import (
    INF,
    Point,
    TabulatedFunction,
    coord_sum,
    exchange_step,
    l1_norm,
    linf_norm,
    value_to_json,
)
from .minimize import minimizer_cut, minimizing_pairs, neighbour_values
from .validation import check_function, check_point

HOLDS = "holds"
FAILS = "fails"
NOT_MET = "hypothesis-not-met"

DIRECTIONAL_VARIANTS = ("qi", "qii", "qiii", "qiv", "mi", "mii", "miii", "miv", "Ai", "Aii", "Aiii")


def _jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if obj is INF or isinstance(obj, Fraction):
        return value_to_json(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (set, frozenset)):
        return [_jsonable(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class TheoremVerdict:
    theorem: str
    status: str
    witness: Optional[Point] = None
    counter_context: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def hypothesis_met(self) -> bool:
        return self.status != NOT_MET

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "status": self.status,
            "holds": self.holds,
            "witness": None if self.witness is None else list(self.witness),
            "counter_context": _jsonable(self.counter_context),
        }


# -- ground truth ------------------------------------------------------------------------

def on_hyperplane(f) -> bool:
    """Do all domain points share one coordinate sum?"""
    return len({coord_sum(x) for x in f.domain}) <= 1


def argmin_set(f) -> frozenset[Point]:
    f = check_function(f)
    m = f.min_value()
    return frozenset(x for x, v in f.table.items() if v == m)


def tilde_distance(a: Point, b: Point) -> int:
    """``||a - b||_1 + |a(N) - b(N)|``."""
    return l1_norm([p - q for p, q in zip(a, b)]) + abs(coord_sum(a) - coord_sum(b))


@dataclass(frozen=True)
class GeodesicSnapshot:
    x: Point
    mu: int
    M_set: frozenset
    mu_tilde: int
    M_tilde_set: frozenset


def _nearest(points, x, dist):
    best, where = None, []
    for p in points:
        d = dist(p, x)
        if best is None or d < best:
            best, where = d, [p]
        elif d == best:
            where.append(p)
    return best, frozenset(where)


def _l1(a, b):
    return l1_norm([p - q for p, q in zip(a, b)])


def geodesic_snapshot(f, x, *, minimizers=None) -> GeodesicSnapshot:
    """L1 distance ``mu`` and tilde-distance ``mu_tilde`` from ``x`` to the
    minimizer set, with the nearest minimizers for each."""
    f = check_function(f)
    x = check_point(x, f)
    mins = argmin_set(f) if minimizers is None else minimizers
    mu, M = _nearest(mins, x, _l1)
    mut, Mt = _nearest(mins, x, tilde_distance)
    return GeodesicSnapshot(x, mu, M, mut, Mt)


# -- shared pre-checks --------------------------------------------------------------------

def _check_pair_pre(f, x, pair, mins):
    x = check_point(x, f, in_domain=True)
    if x in mins:
        raise ValueError(f"{list(x)} is a minimizer; the cut theorems need a non-minimizer")
    i, j = pair
    if i == j:
        raise ValueError("pair must consist of distinct indices")
    if not (0 <= i <= f.dim and 0 <= j <= f.dim):
        raise IndexError(f"pair {pair} out of range")
    m, pairs = minimizing_pairs(f, x)
    if (i, j) not in pairs:
        raise ValueError(f"pair {pair} does not minimize f(x - chi_i + chi_j) (minimum {m})")
    return x, i, j


def _cut_verdict(name, f, x, pair, strong):
    f = check_function(f)
    mins = argmin_set(f)
    x, i, j = _check_pair_pre(f, x, pair, mins)
    cut = minimizer_cut(x, i, j, strong=strong)
    inside = sorted(p for p in mins if p in cut)
    ctx = {"x": x, "pair": [i, j], "halfspaces": [str(h) for h in cut.halfspaces]}
    if inside:
        return TheoremVerdict(name, HOLDS, inside[0], ctx)
    ctx["minimizers"] = sorted(mins)
    return TheoremVerdict(name, FAILS, None, ctx)


def verify_min_cut_weak(f, x, pair) -> TheoremVerdict:
    """Some minimizer satisfies the cut ``y(i) <= x(i)-1``, ``y(j) >= x(j)+1``
    (only the parts with nonzero index)."""
    return _cut_verdict("min-cut-weak", f, x, pair, strong=False)


def verify_min_cut_strong(f, x, pair) -> TheoremVerdict:
    """As the weak cut, plus the coordinate-sum bound when ``i`` or ``j`` is 0."""
    return _cut_verdict("min-cut-strong", f, x, pair, strong=True)


# -- directional cuts ----------------------------------------------------------------------

def _conclusion(kind, x, a, b):
    """Predicate (and its text) a minimizer must meet for the chosen ``(a, b)``.

    ``kind`` is "row" (fixed i, free j), "col" (fixed j, free i), "plus"
    (``x + chi_b``) or "minus" (``x - chi_a``).
    """
    xs = coord_sum(x)
    if kind == "row":  # fixed i=a, chosen j=b
        if b == 0:
            return lambda p: coord_sum(p) <= xs - 1, f"y(N) <= {xs - 1}"
        if b == a:
            return lambda p: p[a - 1] >= x[a - 1], f"y({a}) >= {x[a - 1]}"
        return lambda p: p[b - 1] >= x[b - 1] + 1, f"y({b}) >= {x[b - 1] + 1}"
    if kind == "col":  # fixed j=b, chosen i=a
        if a == 0:
            return lambda p: coord_sum(p) >= xs + 1, f"y(N) >= {xs + 1}"
        if a == b:
            return lambda p: p[b - 1] <= x[b - 1], f"y({b}) <= {x[b - 1]}"
        return lambda p: p[a - 1] <= x[a - 1] - 1, f"y({a}) <= {x[a - 1] - 1}"
    if kind == "plus":  # chosen j=b in f(x + chi_b)
        if b == 0:
            return lambda p: coord_sum(p) <= xs, f"y(N) <= {xs}"
        return lambda p: p[b - 1] >= x[b - 1] + 1, f"y({b}) >= {x[b - 1] + 1}"
    if kind == "minus":  # chosen i=a in f(x - chi_a)
        if a == 0:
            return lambda p: coord_sum(p) >= xs, f"y(N) >= {xs}"
        return lambda p: p[a - 1] <= x[a - 1] - 1, f"y({a}) <= {x[a - 1] - 1}"
    raise AssertionError(kind)


def _choices(f, x, variant, fixed):
    """Return ``(kind, minimizing (a, b) pairs, minimum value)``."""
    n = f.dim
    fam = variant.lstrip("qmA")
    nonnull = variant.startswith("A")
    if fam in ("i", "ii") and not (1 <= fixed <= n):
        raise ValueError(f"variant {variant} needs a fixed index in 1..{n}")
    rng = range(1, n + 1) if nonnull else range(0, n + 1)
    if fam == "i":
        kind, scan = "row", [(fixed, b) for b in rng]
    elif fam == "ii":
        kind, scan = "col", [(a, fixed) for a in rng]
    elif fam == "iii" and not nonnull:
        kind, scan = "plus", [(0, b) for b in rng]
    elif fam == "iv":
        kind, scan = "minus", [(a, 0) for a in rng]
    else:
        raise ValueError(f"unknown directional variant {variant!r}")
    vals = {ab: f(exchange_step(x, *ab)) for ab in scan}
    m = min(vals.values())
    return kind, [ab for ab in scan if vals[ab] == m], m


def verify_min_cut_directional(f, x, variant: str, fixed: int = 0) -> TheoremVerdict:
    """Directional minimizer cuts.

    ``A*`` variants need the domain to lie in a hyperplane ``x(N) = const``
    and ``x`` to be a non-minimizer. ``q*`` variants need the row/column minimum to be attained at a nonzero
    index and only draw conclusions for such indices; ``m*`` variants cover
    every minimizing index including 0; ``A*`` variants are the M-convex
    forms where indices range over 1..n (``Aiii`` scans distinct pairs and
    ignores ``fixed``).

    Every index attaining the minimum is checked; the verdict fails if any
    of them has no matching minimizer.
    """
    f = check_function(f)
    if variant not in DIRECTIONAL_VARIANTS:
        raise ValueError(f"unknown directional variant {variant!r}")
    x = check_point(x, f, in_domain=True)
    mins = sorted(argmin_set(f))
    name = f"min-cut-directional:{variant}"
    ctx = {"x": x, "fixed": fixed}

    if variant.startswith("A") and not on_hyperplane(f):
        ctx["reason"] = "domain does not lie in a hyperplane x(N) = const"
        return TheoremVerdict(name, NOT_MET, None, ctx)
    if variant.startswith("A") and x in mins:
        ctx["reason"] = "x is a minimizer"
        return TheoremVerdict(name, NOT_MET, None, ctx)

    if variant == "Aiii":
        n = f.dim
        vals = {(i, j): f(exchange_step(x, i, j)) for i in range(1, n + 1) for j in range(1, n + 1) if i != j}
        if not vals:
            ctx["reason"] = "no pair of distinct indices"
            return TheoremVerdict(name, NOT_MET, None, ctx)
        m = min(vals.values())
        ctx["minimum"] = m
        witness = None
        for (i, j) in sorted(ab for ab, v in vals.items() if v == m):
            cut = minimizer_cut(x, i, j)
            hit = [p for p in mins if p in cut]
            if not hit:
                ctx.update(choice=[i, j], required=[str(h) for h in cut.halfspaces], minimizers=mins)
                return TheoremVerdict(name, FAILS, None, ctx)
            witness = witness or hit[0]
        return TheoremVerdict(name, HOLDS, witness, ctx)

    kind, chosen, m = _choices(f, x, variant, fixed)
    ctx["minimum"] = m
    if variant.startswith("q"):
        zero = 1 if kind in ("row", "plus") else 0  # position of the free index
        chosen = [ab for ab in chosen if ab[zero] != 0]
        if not chosen:
            ctx["reason"] = "minimum attained only at the null index"
            return TheoremVerdict(name, NOT_MET, None, ctx)
    witness = None
    for a, b in chosen:
        pred, text = _conclusion(kind, x, a, b)
        hit = [p for p in mins if pred(p)]
        if not hit:
            ctx.update(choice=[a, b], required=text, minimizers=mins)
            return TheoremVerdict(name, FAILS, None, ctx)
        witness = witness or hit[0]
    return TheoremVerdict(name, HOLDS, witness, ctx)


# -- geodesic statements ----------------------------------------------------------------------

def _restricted(cands, x, i, j, with_sum):
    cut = minimizer_cut(x, i, j, strong=with_sum)
    return frozenset(p for p in cands if p in cut)


def verify_statement_A(f, x, pair) -> TheoremVerdict:
    """The L1 geodesic statement: the nearest minimizers in L1 compatible
    with the cut are nonempty, the L1 distance drops by 2 (or 1 when an
    index is 0), and they are exactly the nearest minimizers after the step."""
    f = check_function(f)
    mins = argmin_set(f)
    x, i, j = _check_pair_pre(f, x, pair, mins)
    snap = geodesic_snapshot(f, x, minimizers=mins)
    M_prime = _restricted(snap.M_set, x, i, j, with_sum=False)
    x_new = exchange_step(x, i, j)
    after = geodesic_snapshot(f, x_new, minimizers=mins)
    drop = 2 if (i and j) else 1
    part_i = bool(M_prime)
    part_ii = after.mu == snap.mu - drop and after.M_set == M_prime
    ctx = {
        "x": x, "pair": [i, j], "x_next": x_new,
        "mu": snap.mu, "M": snap.M_set, "M_prime": M_prime,
        "mu_next": after.mu, "M_next": after.M_set, "expected_mu_next": snap.mu - drop,
        "part_i": part_i, "part_ii": part_ii,
    }
    ok = part_i and part_ii
    return TheoremVerdict("statement-A", HOLDS if ok else FAILS, min(M_prime) if M_prime else None, ctx)


def verify_geodesic(f, x, pair) -> TheoremVerdict:
    """The tilde-distance geodesic property: the nearest minimizers compatible
    with the strong cut are nonempty, ``mu_tilde`` drops by exactly 2 and the
    new nearest set equals the restricted one."""
    f = check_function(f)
    mins = argmin_set(f)
    x, i, j = _check_pair_pre(f, x, pair, mins)
    snap = geodesic_snapshot(f, x, minimizers=mins)
    Mt_prime = _restricted(snap.M_tilde_set, x, i, j, with_sum=True)
    x_new = exchange_step(x, i, j)
    after = geodesic_snapshot(f, x_new, minimizers=mins)
    part_i = bool(Mt_prime)
    part_ii = after.mu_tilde == snap.mu_tilde - 2 and after.M_tilde_set == Mt_prime
    ctx = {
        "x": x, "pair": [i, j], "x_next": x_new,
        "mu_tilde": snap.mu_tilde, "M_tilde": snap.M_tilde_set, "M_tilde_prime": Mt_prime,
        "mu_tilde_next": after.mu_tilde, "M_tilde_next": after.M_tilde_set,
        "expected_mu_tilde_next": snap.mu_tilde - 2,
        "part_i": part_i, "part_ii": part_ii,
    }
    ok = part_i and part_ii
    return TheoremVerdict("geodesic", HOLDS if ok else FAILS, min(Mt_prime) if Mt_prime else None, ctx)


# -- proximity ---------------------------------------------------------------------------------

def scaled_hypothesis(f, x, alpha: int, regime: str = "mnat") -> bool:
    """Is ``x`` locally minimal for the alpha-scaled neighbourhood?

    ``mnat``: compare with ``x +- alpha chi_i`` and ``x - alpha(chi_i - chi_j)``;
    ``m``: only the latter.
    """
    fx = f(x)
    n = len(x)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            y = list(x)
            y[i] -= alpha
            y[j] += alpha
            if f(tuple(y)) < fx:
                return False
    if regime == "mnat":
        for i in range(n):
            for s in (alpha, -alpha):
                y = list(x)
                y[i] += s
                if f(tuple(y)) < fx:
                    return False
    elif regime != "m":
        raise ValueError(f"unknown proximity regime {regime!r}")
    return True


def proximity_bound(n: int, alpha: int, regime: str) -> int:
    return (n if regime == "mnat" else n - 1) * (alpha - 1)


def proximity_gap(f, x, regime: str = "mnat", *, minimizers=None) -> int:
    """Smallest distance from ``x`` to a minimizer in the regime's metric.

    For ``mnat`` the metric is ``max(||.||_inf, |.(N)|)``, so the gap is
    within the bound exactly when one minimizer meets both inequalities.
    """
    mins = argmin_set(f) if minimizers is None else minimizers

    def dist(p):
        d = [a - b for a, b in zip(p, x)]
        if regime == "mnat":
            return max(linf_norm(d), abs(sum(d)))
        return linf_norm(d)

    return min(dist(p) for p in mins)


def linf_gap(f, x, *, minimizers=None) -> int:
    mins = argmin_set(f) if minimizers is None else minimizers
    return min(linf_norm([a - b for a, b in zip(p, x)]) for p in mins)


def verify_proximity(f, alpha: int, regime: str = "mnat") -> TheoremVerdict:
    """Every x satisfying the scaled hypothesis has a minimizer within the
    regime's bound: ``n(alpha-1)`` for ``mnat`` (on both the max-norm and the
    coordinate sum), ``(n-1)(alpha-1)`` in max-norm for ``m``."""
    f = check_function(f)
    if isinstance(alpha, bool) or not isinstance(alpha, int) or alpha < 2:
        raise ValueError("alpha must be an integer >= 2")
    if regime not in ("mnat", "m"):
        raise ValueError(f"unknown proximity regime {regime!r}")
    mins = argmin_set(f)
    bound = proximity_bound(f.dim, alpha, regime)
    name = f"proximity:{regime}"
    failing = []
    checked = 0
    for x in f.domain:
        if not scaled_hypothesis(f, x, alpha, regime):
            continue
        checked += 1
        gap = proximity_gap(f, x, regime, minimizers=mins)
        if gap > bound:
            failing.append((x, gap))
    ctx = {"alpha": alpha, "bound": bound, "checked": checked}
    if not failing:
        return TheoremVerdict(name, HOLDS, None, ctx)
    x, gap = failing[0]
    worst, worst_gap = max(failing, key=lambda t: (t[1], [-c for c in t[0]]))
    ctx.update(
        x=x, gap=gap, linf_gap=linf_gap(f, x, minimizers=mins),
        worst_x=worst, max_gap=worst_gap, failing=len(failing), minimizers=sorted(mins),
    )
    return TheoremVerdict(name, FAILS, None, ctx)


# -- projection and M-convex local optimality ------------------------------------------------

def project_to_m(f) -> TabulatedFunction:
    """Lift to Z^(n+1): ``(x, -x(N))`` carries ``f(x)``; all else is +inf."""
    f = check_function(f)
    return TabulatedFunction(f.dim + 1, {x + (-coord_sum(x),): v for x, v in f.table.items()})


def verify_local_global_m(f, x) -> TheoremVerdict:
    """Local minimality over exchanges with ``i, j`` in 1..n agrees with
    global minimality at ``x``."""
    f = check_function(f)
    x = check_point(x, f, in_domain=True)
    if not on_hyperplane(f):
        return TheoremVerdict("local-global", NOT_MET, None,
                              {"x": x, "reason": "domain does not lie in a hyperplane x(N) = const"})
    fx = f(x)
    n = f.dim
    lower = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)
             if i != j and f(exchange_step(x, i, j)) < fx]
    local = not lower
    glob = x in argmin_set(f)
    ctx = {"x": x, "local_min": local, "global_min": glob}
    if lower:
        ctx["improving_pair"] = list(lower[0])
    return TheoremVerdict("local-global", HOLDS if local == glob else FAILS, x if glob else None, ctx)


def verify_local_global(f, x) -> TheoremVerdict:
    """Local minimality over all exchanges (index 0 allowed) agrees with
    global minimality at ``x``."""
    f = check_function(f)
    x = check_point(x, f, in_domain=True)
    fx = f(x)
    lower = next(((i, j) for i, j, v in neighbour_values(f, x) if v < fx), None)
    local = lower is None
    glob = x in argmin_set(f)
    ctx = {"x": x, "local_min": local, "global_min": glob}
    if lower:
        ctx["improving_pair"] = list(lower)
    return TheoremVerdict("local-global-mnat", HOLDS if local == glob else FAILS, x if glob else None, ctx)


# -- sweeps -----------------------------------------------------------------------------------

def pair_contexts(f):
    """Yield every ``(x, pair)`` with ``x`` a non-minimizer and ``pair`` one of
    its minimizing distinct pairs, in canonical order."""
    mins = argmin_set(f)
    for x in f.domain:
        if x in mins:
            continue
        _, pairs = minimizing_pairs(f, x)
        for p in pairs:
            yield x, p


def sweep(f, theorem: str, *, alpha: int = 2) -> list[TheoremVerdict]:
    """Run one verifier over every applicable context of ``f``."""
    f = check_function(f)
    if theorem in ("min-cut-weak", "min-cut-strong", "statement-A", "geodesic"):
        fn = {
            "min-cut-weak": verify_min_cut_weak,
            "min-cut-strong": verify_min_cut_strong,
            "statement-A": verify_statement_A,
            "geodesic": verify_geodesic,
        }[theorem]
        return [fn(f, x, p) for x, p in pair_contexts(f)]
    if theorem == "min-cut-directional":
        out = []
        for x in f.domain:
            for v in DIRECTIONAL_VARIANTS:
                fixed = range(1, f.dim + 1) if v[1:] in ("i", "ii") else [0]
                for k in fixed:
                    out.append(verify_min_cut_directional(f, x, v, k))
        return out
    if theorem == "proximity":
        return [verify_proximity(f, alpha, "mnat")]
    if theorem == "local-global":
        return [verify_local_global(f, x) for x in f.domain]
    if theorem == "local-global-m":
        return [verify_local_global_m(f, x) for x in f.domain]
    raise ValueError(f"unknown theorem {theorem!r}")


def replay_verdict(f, doc: dict) -> bool:
    """Re-run the verifier named in a serialized verdict at its recorded
    context and compare the fresh JSON with ``doc``."""
    f = check_function(f)
    name, ctx = doc["theorem"], doc["counter_context"]
    base, _, tail = name.partition(":")
    if base in ("min-cut-weak", "min-cut-strong", "statement-A", "geodesic"):
        fn = {"min-cut-weak": verify_min_cut_weak, "min-cut-strong": verify_min_cut_strong,
              "statement-A": verify_statement_A, "geodesic": verify_geodesic}[base]
        fresh = fn(f, tuple(ctx["x"]), tuple(ctx["pair"]))
    elif base == "min-cut-directional":
        fresh = verify_min_cut_directional(f, tuple(ctx["x"]), tail, ctx["fixed"])
    elif base == "proximity":
        fresh = verify_proximity(f, ctx["alpha"], tail)
    elif name == "local-global":
        fresh = verify_local_global_m(f, tuple(ctx["x"]))
    elif name == "local-global-mnat":
        fresh = verify_local_global(f, tuple(ctx["x"]))
    else:
        raise ValueError(f"cannot replay verdicts of {name!r}")
    return fresh.to_json() == doc
