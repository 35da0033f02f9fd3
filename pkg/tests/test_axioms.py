import json
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasimnat import axioms
from quasimnat.axioms import (
    AxiomReport,
    ExchangeOutcome,
    check_axiom,
    check_descent_lemma,
    check_m_exc,
    check_mnat_exc,
    check_mnat_set,
    check_ssqm,
    check_ssqm_nat,
    check_ssqm_nat_prj,
    replay_outcome,
    replay_violation,
)
from quasimnat.core import INF, IntBox, TabulatedFunction, coord_sum, exchange_step, supp_neg, supp_pos
from quasimnat.gallery import constant_on_box, example_2_1, example_4_2, gen_separable_convex
from quasimnat.validation import PreconditionError


def brute_ssqm_nat(f):
    """Direct transcription of the semi-strict axiom, no shortcuts."""
    for x, y in product(f.domain, repeat=2):
        d = [a - b for a, b in zip(x, y)]
        for i in supp_pos(d):
            ok = False
            for j in supp_neg(d) + [0]:
                a, b = f(exchange_step(x, i, j)), f(exchange_step(y, j, i))
                fx, fy = f(x), f(y)
                if fx > a or fy > b or (fx == a and fy == b):
                    ok = True
                    break
            if not ok:
                return False
    return True


def brute_mnat_exc(f):
    for x, y in product(f.domain, repeat=2):
        d = [a - b for a, b in zip(x, y)]
        for i in supp_pos(d):
            if not any(f(x) + f(y) >= f(exchange_step(x, i, j)) + f(exchange_step(y, j, i))
                       for j in supp_neg(d) + [0]):
                return False
    return True


small_tables = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(0, 3),
                               min_size=1, max_size=9).map(lambda d: TabulatedFunction(2, d))


@given(small_tables)
@settings(max_examples=150, deadline=None)
def test_ssqm_nat_matches_brute_force(f):
    assert check_ssqm_nat(f).passed == brute_ssqm_nat(f)


@given(small_tables)
@settings(max_examples=150, deadline=None)
def test_mnat_exc_matches_brute_force(f):
    assert check_mnat_exc(f).passed == brute_mnat_exc(f)


@given(small_tables)
@settings(max_examples=100, deadline=None)
def test_exchange_implies_semi_strict(f):
    if check_mnat_exc(f).passed:
        assert check_ssqm_nat(f).passed


@given(small_tables)
@settings(max_examples=100, deadline=None)
def test_descent_lemma_under_semi_strict(f):
    if check_ssqm_nat(f).passed:
        assert check_descent_lemma(f).passed


def test_examples():
    assert check_ssqm_nat(example_2_1().function).passed
    rep = check_mnat_exc(example_2_1().function)
    assert not rep.passed and rep.violation is not None
    assert replay_violation(example_2_1().function, rep.violation)


def test_projected_report_parts():
    rep = check_ssqm_nat_prj(example_4_2().function)
    assert rep.part_i.passed and not rep.part_ii.passed and not rep.passed
    v = rep.part_ii.violation
    assert (v.x, v.y, v.i, v.part) == ((0, 2), (2, 0), 2, "ii")
    doc = rep.to_json()
    assert doc["parts"]["part_ii"]["violation"]["x"] == [0, 2]


def test_constant_on_box_is_mnat():
    f = constant_on_box(IntBox.cube(0, 2, 3))
    assert check_mnat_exc(f).passed and check_ssqm_nat(f).passed


def test_m_exc_on_hyperplane():
    # linear on {x >= 0, x(N) = 2} in Z^3
    f = TabulatedFunction(3, {x: x[0] - x[2] for x in IntBox.cube(0, 2, 3).points() if coord_sum(x) == 2})
    assert check_m_exc(f).passed and check_ssqm(f).passed


def test_m_exc_rejects_off_hyperplane():
    f = TabulatedFunction(2, {(0, 0): 0, (1, 0): 0})
    assert not check_m_exc(f).passed


def test_mnat_set():
    assert check_mnat_set([(0, 0), (1, 0), (0, 1)]).passed
    assert not check_mnat_set([(0, 0), (1, 1)]).passed


def test_descent_lemma_strict_precondition():
    bad = TabulatedFunction(1, {(0,): 0, (1,): 1, (2,): 0})
    assert not check_ssqm_nat(bad).passed
    with pytest.raises(PreconditionError) as err:
        check_descent_lemma(bad, strict=True)
    assert err.value.report is not None and not err.value.report.passed


def test_exhaustive_collects_every_violation():
    f = TabulatedFunction(1, {(0,): 0, (1,): 1, (2,): 0, (3,): 1, (4,): 0})
    one = check_ssqm_nat(f)
    many = check_ssqm_nat(f, exhaustive=True)
    assert many.violations[0] == one.violation and len(many.violations) > 1


def test_threads_do_not_change_output():
    f = gen_separable_convex(IntBox.cube(0, 4, 3), seed=3)
    g = f.map_values(lambda v: -v if v % 3 == 0 else v)
    a = check_ssqm_nat(g, exhaustive=True, threads=1).to_json()
    b = check_ssqm_nat(g, exhaustive=True, threads=3).to_json()
    assert a == b


def test_env_thread_default(monkeypatch):
    monkeypatch.setenv("QUASIMNAT_THREADS", "4")
    assert axioms.default_threads() == 4
    monkeypatch.setenv("QUASIMNAT_THREADS", "junk")
    assert axioms.default_threads() == 1


def test_report_json_round_trip():
    f = TabulatedFunction(1, {(0,): 0, (1,): 1, (2,): 0})
    rep = check_ssqm_nat(f, exhaustive=True)
    back = AxiomReport.from_json(json.loads(json.dumps(rep.to_json())))
    assert back.to_json() == rep.to_json()
    for v in back.violations:
        assert all(replay_outcome(oc) for oc in v.candidates)
        assert replay_violation(f, v)


def test_outcome_with_infinite_values():
    oc = ExchangeOutcome.from_values(1, 0, 3, 2, INF, INF)
    assert not oc.cond_x_improves and not oc.cond_y_improves and not oc.cond_both_equal
    assert ExchangeOutcome.from_json(json.loads(json.dumps(oc.to_json()))) == oc


def test_tampered_certificate_is_caught():
    f = TabulatedFunction(1, {(0,): 0, (1,): 1, (2,): 0})
    v = check_ssqm_nat(f).violation
    doc = v.to_json()
    doc["candidates"][0]["fx"] = 7
    assert not replay_violation(f, axioms.Violation.from_json(doc))


def test_unknown_axiom():
    with pytest.raises(ValueError, match="unknown axiom"):
        check_axiom(TabulatedFunction(1, {(0,): 0}), "nope")
