"""Acceptance suite: one pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` (the lines also appear in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""
import json
import math
import subprocess
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import corpus  # noqa: E402
from quasimnat import analysis, axioms, gallery  # noqa: E402
from quasimnat.axioms import AxiomReport, Violation, replay_outcome, replay_violation  # noqa: E402
from quasimnat.core import IntBox, TabulatedFunction, linf_diameter  # noqa: E402
from quasimnat.minimize import (  # noqa: E402
    basic_steepest_descent,
    domain_reduction,
    exchange_step,
    modified_steepest_descent,
    steepest_direction,
)

A, X = analysis, axioms
SUITE_BUDGET = 60.0
EXAMPLE_BUDGET = 1.0


class Checks:
    """Collects named sub-checks; ``line`` renders the criterion verdict."""

    def __init__(self, label):
        self.label = label
        self.failed = []
        self.count = 0

    def __call__(self, name, ok, detail=""):
        self.count += 1
        if not ok:
            self.failed.append(f"{name}{': ' + str(detail) if detail else ''}")

    def timed(self, name, budget, fn):
        t = time.perf_counter()
        fn()
        dt = time.perf_counter() - t
        self(f"{name} within {budget:g}s", dt < budget, f"{dt:.2f}s")

    @property
    def ok(self):
        return not self.failed

    def line(self):
        head = f"{'PASS' if self.ok else 'FAIL'} criterion {self.label} ({self.count} checks)"
        return head if self.ok else head + " | failed: " + "; ".join(self.failed)


# -- criterion 1 -------------------------------------------------------------------------

def _ex_2_1(c):
    f = gallery.example_2_1().function
    x = (0, 1, 2)
    c("2.1 ssqm-nat passes", X.check_ssqm_nat(f).passed)
    step = steepest_direction(f, x)
    c("2.1 steepest value at (0,1,2) is 2", step is not None and step.value == 2, step)
    weak = A.verify_min_cut_weak(f, x, (2, 0))
    c("2.1 weak cut holds with witness (2,0,1)", weak.holds and weak.witness == (2, 0, 1), weak.witness)
    strong = A.verify_min_cut_strong(f, x, (2, 0))
    no_small = not any(sum(p) <= 2 for p in A.argmin_set(f))
    c("2.1 strong cut fails (no minimizer with sum <= 2)", strong.status == A.FAILS and no_small)


def _ex_2_2(c):
    f = gallery.example_2_2().function
    snap = A.geodesic_snapshot(f, (0, 1))
    c("2.2 mnat-exc passes", X.check_mnat_exc(f).passed)
    c("2.2 mu((0,1)) = 2", snap.mu == 2, snap.mu)
    c("2.2 M = {(2,1)}", snap.M_set == {(2, 1)}, sorted(snap.M_set))
    v = A.verify_statement_A(f, (0, 1), (2, 1))
    c("2.2 statement A fails with mu(x') = 1",
      v.status == A.FAILS and v.counter_context["mu_next"] == 1, v.counter_context["mu_next"])


def _ex_2_3(c):
    f = gallery.example_2_1().function
    x = (0, 1, 2)
    snap = A.geodesic_snapshot(f, x)
    c("2.3 mu~((0,1,2)) = 4", snap.mu_tilde == 4, snap.mu_tilde)
    c("2.3 M~ = {(2,1,0),(2,0,1)}", snap.M_tilde_set == {(2, 1, 0), (2, 0, 1)}, sorted(snap.M_tilde_set))
    after = A.geodesic_snapshot(f, exchange_step(x, 2, 0))
    c("2.3 mu~ = 3 after the (2,0) step", after.mu_tilde == 3,
      f"observed mu~((0,0,2)) = {after.mu_tilde}; plain L1 distance mu = {after.mu}")
    c("2.3 geodesic fails", A.verify_geodesic(f, x, (2, 0)).status == A.FAILS)


def _ex_2_4(c):
    n, alpha = 3, 2
    bound = n * (alpha - 1)
    for k in (2, 5, 10):
        f = gallery.example_2_4(k).function
        xh = (k, 0, 0)
        c(f"2.4 k={k} argmin = {{(0,1,1)}}", A.argmin_set(f) == {(0, 1, 1)})
        c(f"2.4 k={k} x^ satisfies the alpha=2 hypothesis", A.scaled_hypothesis(f, xh, alpha))
        gap = A.proximity_gap(f, xh)
        c(f"2.4 k={k} gap equals k", gap == k and A.linf_gap(f, xh) == k, gap)
        c(f"2.4 k={k} gap exceeds n(alpha-1) = {bound}", gap > bound, f"gap {gap}")


def _ex_4_1(c):
    f = gallery.example_4_1().function
    mi = A.verify_min_cut_directional(f, (1, 1), "mi", 1)
    c("4.1 (i) j=0 case fails", mi.status == A.FAILS and mi.counter_context["choice"][1] == 0,
      mi.counter_context.get("choice"))
    miii = A.verify_min_cut_directional(f, (0, 1), "miii")
    c("4.1 (iii) j=0 case fails", miii.status == A.FAILS and 0 in miii.counter_context["choice"],
      miii.counter_context.get("choice"))
    prj = X.check_ssqm_nat_prj(f)
    c("4.1 prj (iii) fails", not prj.part_iii.passed)
    c("4.1 projection fails ssqm", not X.check_ssqm(A.project_to_m(f)).passed)


def _ex_4_2(c):
    f = gallery.example_4_2().function
    c("4.2 ssqm-nat passes", X.check_ssqm_nat(f).passed)
    v = X.check_ssqm_nat_prj(f).part_ii.violation
    c("4.2 prj (ii) fails at x=(0,2), y=(2,0), i=2",
      v is not None and (v.x, v.y, v.i) == ((0, 2), (2, 0), 2), v and (v.x, v.y, v.i))


def criterion_1():
    c = Checks("1 worked examples")
    for name, fn in [("2.1", _ex_2_1), ("2.2", _ex_2_2), ("2.3", _ex_2_3),
                     ("2.4", _ex_2_4), ("4.1", _ex_4_1), ("4.2", _ex_4_2)]:
        c.timed(f"example {name}", EXAMPLE_BUDGET, lambda fn=fn: fn(c))
    return c


# -- criterion 2 -------------------------------------------------------------------------

def _fails(verdicts):
    return [(v.theorem, v.counter_context.get("x")) for v in verdicts if v.status == A.FAILS]


def _suite_ssqm(c):
    for name, f in corpus.ssqm_instances():
        bad = _fails(A.sweep(f, "local-global")) + _fails(A.sweep(f, "min-cut-weak"))
        for x in f.domain:
            for var in ("qi", "qii", "qiii", "qiv"):
                for k in (range(1, f.dim + 1) if var in ("qi", "qii") else (0,)):
                    bad += _fails([A.verify_min_cut_directional(f, x, var, k)])
        c(f"{name}: local-global, weak cut, q-cuts", not bad, bad[:2])
        c(f"{name}: descent lemma", X.check_descent_lemma(f).passed)


def _suite_mnat(c):
    for name, f in corpus.mnat_instances():
        bad = _fails(A.sweep(f, "min-cut-strong")) + _fails(A.sweep(f, "geodesic"))
        for x in f.domain:
            for var in ("mi", "mii", "miii", "miv"):
                for k in (range(1, f.dim + 1) if var in ("mi", "mii") else (0,)):
                    bad += _fails([A.verify_min_cut_directional(f, x, var, k)])
        c(f"{name}: strong cut, geodesic, m-cuts", not bad, bad[:2])
        for alpha in (2, 3):
            c(f"{name}: proximity alpha={alpha}", A.verify_proximity(f, alpha).holds)
        mins = A.argmin_set(f)
        off = [(x, basic_steepest_descent(f, x).iterations) for x in f.domain]
        off = [(x, it) for x, it in off
               if 2 * it != A.geodesic_snapshot(f, x, minimizers=mins).mu_tilde]
        c(f"{name}: basic descent iterations = mu~/2", not off, off[:2])


def _suite_bridges(c):
    for name, f in corpus.everything():
        lifted = A.project_to_m(f)
        c(f"{name}: m-exc(lift) <=> mnat-exc", X.check_m_exc(lifted).passed == X.check_mnat_exc(f).passed)
        prj = X.check_ssqm_nat_prj(f)
        c(f"{name}: ssqm(lift) <=> prj", X.check_ssqm(lifted).passed == prj.passed)
        c(f"{name}: prj => ssqm-nat", not prj.passed or X.check_ssqm_nat(f).passed)
    for mk, part in ((gallery.example_4_1, "part_iii"), (gallery.example_4_2, "part_ii")):
        f = mk().function
        prj = X.check_ssqm_nat_prj(f)
        c(f"{mk.__name__} refutes the converse", X.check_ssqm_nat(f).passed and not prj.parts()[part].passed)


def criterion_2():
    c = Checks("2 theorem property suites")
    n_random = len([n for n, _ in corpus.ssqm_instances() if n.startswith("random-")])
    c("at least 100 random ssqm-nat tables", n_random >= 100, n_random)
    c.timed("ssqm-nat suite", SUITE_BUDGET, lambda: _suite_ssqm(c))
    c.timed("mnat suite", SUITE_BUDGET, lambda: _suite_mnat(c))
    c.timed("projection bridges", SUITE_BUDGET, lambda: _suite_bridges(c))
    return c


# -- criterion 3 -------------------------------------------------------------------------

def _large():
    return [(f"separable-large-{s}", gallery.gen_separable_convex(IntBox.cube(0, 30, 3), seed=s))
            for s in range(2)]


def criterion_3():
    c = Checks("3 algorithm bounds")
    for name, f in corpus.everything():
        n, L = f.dim, linf_diameter(f.domain)
        its = max(modified_steepest_descent(f, x, audit=True).iterations for x in f.domain)
        c(f"{name}: modified descent <= 2nL+n", its <= 2 * n * L + n, f"{its} > {2 * n * L + n}")
    for name, f in list(corpus.everything()) + _large():
        if len(f) <= 4096 and not X.check_mnat_set(f).passed:
            continue
        n, L = f.dim, linf_diameter(f.domain)
        bound = 8 * n * n * (1 + math.log2(1 + L))
        res = domain_reduction(f, audit=len(f) <= 4096)
        c(f"{name}: domain reduction <= 8n^2(1+log2(1+L))", res.iterations <= bound, res.iterations)
        c(f"{name}: domain reduction output is a minimizer", res.minimizer in A.argmin_set(f), res.minimizer)
    for name, f in _large():
        its = modified_steepest_descent(f, f.domain[-1]).iterations
        c(f"{name}: modified descent <= 2nL+n", its <= 2 * 3 * 30 + 3, its)
    return c


# -- criterion 4 -------------------------------------------------------------------------

def _replay_reports(c, name, fdoc, rep):
    reports = rep.parts().values() if isinstance(rep, X.ProjectedReport) else [rep]
    g = TabulatedFunction.loads(fdoc)
    for r in reports:
        if r.passed:
            continue
        back = AxiomReport.from_json(json.loads(json.dumps(r.to_json())))
        # set certificates are stated for the 0/+inf indicator of the domain
        h = TabulatedFunction(g.dim, {x: 0 for x in g.domain}) if r.axiom == "mnat-set" else g
        for v in back.violations:
            same = all(replay_outcome(oc) for oc in v.candidates) and replay_violation(h, v)
            c(f"{name} {r.axiom} at {v.x},{v.y},{v.i}", same)
        # nothing accepted among the recorded candidates
        need = X.requirement_for(r.axiom)
        c(f"{name} {r.axiom} candidates all rejected",
          all(not need(oc) for v in back.violations for oc in v.candidates))


def criterion_4():
    c = Checks("4 certificate replay")
    pool = corpus.gallery_functions() + corpus.random_tables()[:30] + corpus.structured()[:8]
    for name, f in pool:
        fdoc = f.dumps()
        for ax in X.AXIOMS:
            _replay_reports(c, name, fdoc, X.check_axiom(f, ax, exhaustive=True))
        g = TabulatedFunction.loads(fdoc)
        verdicts = []
        for th in ("min-cut-weak", "min-cut-strong", "statement-A", "geodesic", "min-cut-directional", "local-global"):
            verdicts += A.sweep(f, th)
        verdicts += [A.verify_proximity(f, a, r) for a in (2, 3) for r in ("mnat", "m")]
        for v in verdicts:
            if v.status != A.FAILS:
                continue
            doc = json.loads(json.dumps(v.to_json()))
            c(f"{name} {v.theorem} at {doc['counter_context'].get('x')}", A.replay_verdict(g, doc))
            ctx = doc["counter_context"]
            if v.theorem.startswith("proximity"):
                # the recorded gap follows from the recorded minimizers alone
                x, mins = ctx["x"], ctx["minimizers"]
                metric = (lambda d: max(max(map(abs, d)), abs(sum(d)))) if v.theorem.endswith("mnat") \
                    else (lambda d: max(map(abs, d)))
                gap = min(metric([a - b for a, b in zip(p, x)]) for p in mins)
                c(f"{name} {v.theorem} gap from JSON", gap == ctx["gap"] and gap > ctx["bound"])
            if v.theorem == "geodesic":
                c(f"{name} geodesic arithmetic from JSON",
                  not ctx["part_i"] or ctx["mu_tilde_next"] != ctx["expected_mu_tilde_next"]
                  or ctx["M_tilde_next"] != ctx["M_tilde_prime"])
    return c


# -- criterion 5 -------------------------------------------------------------------------

def criterion_5(tmp_dir=None):
    import tempfile

    c = Checks("5 gallery audit and file round-trip")
    proc = subprocess.run([sys.executable, "-m", "quasimnat", "gallery", "--audit"],
                          capture_output=True, text=True)
    c("gallery --audit exits 0", proc.returncode == 0, proc.stderr.strip())
    with tempfile.TemporaryDirectory(dir=tmp_dir) as td:
        for entry in gallery.all_entries():
            path = Path(td) / f"{entry.name}.json"
            entry.function.save(path)
            back = gallery.GalleryEntry(entry.name, TabulatedFunction.load(path), entry.expected)
            mem = [(e.check, obs) for e, obs, _ in entry.replay()]
            disk = [(e.check, obs) for e, obs, _ in back.replay()]
            c(f"{entry.name} verdicts identical after round-trip", mem == disk and back.audit())
            c(f"{entry.name} table identical after round-trip", back.function == entry.function)
        # the emitted file drives the CLI to the in-memory verdict
        f = gallery.example_4_2().function
        path = Path(td) / "e42.json"
        subprocess.run([sys.executable, "-m", "quasimnat", "gallery", "--name", "example-4-2",
                        "--emit", str(path)], check=True, capture_output=True)
        proc = subprocess.run([sys.executable, "-m", "quasimnat", "check", "--axiom", "ssqm-nat-prj", str(path)],
                              capture_output=True, text=True)
        c("CLI check on emitted file matches in-memory report",
          json.loads(proc.stdout) == X.check_ssqm_nat_prj(f).to_json() and proc.returncode == 1)
    return c


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5]


def _run(crit, acceptance_line):
    c = crit()
    acceptance_line(c.line())
    assert c.ok, c.line()


def test_criterion_1_worked_examples(acceptance_line):
    _run(criterion_1, acceptance_line)


def test_criterion_2_property_suites(acceptance_line):
    _run(criterion_2, acceptance_line)


def test_criterion_3_algorithm_bounds(acceptance_line):
    _run(criterion_3, acceptance_line)


def test_criterion_4_certificate_replay(acceptance_line):
    _run(criterion_4, acceptance_line)


def test_criterion_5_gallery_audit(acceptance_line):
    _run(criterion_5, acceptance_line)


if __name__ == "__main__":
    results = [crit() for crit in CRITERIA]
    for c in results:
        print(c.line())
    sys.exit(0 if all(c.ok for c in results) else 1)
