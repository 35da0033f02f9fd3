import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasimnat import analysis as A
from quasimnat.axioms import check_m_exc
from quasimnat.core import IntBox, TabulatedFunction
from quasimnat.gallery import (
    example_2_1,
    example_2_2,
    example_2_4,
    example_4_1,
    gen_laminar_convex,
    gen_separable_convex,
)

seeds = st.integers(0, 10_000)


def test_argmin_and_snapshot():
    f = example_2_1().function
    assert A.argmin_set(f) == {(2, 1, 0), (2, 0, 1)}
    snap = A.geodesic_snapshot(f, (0, 1, 2))
    assert (snap.mu, snap.mu_tilde) == (4, 4)


def test_tilde_distance():
    assert A.tilde_distance((2, 0, 1), (0, 0, 2)) == 4
    assert A.tilde_distance((1, 1), (0, 0)) == 4


def test_cut_preconditions():
    f = example_2_1().function
    with pytest.raises(ValueError, match="minimizer"):
        A.verify_min_cut_weak(f, (2, 1, 0), (1, 0))
    with pytest.raises(ValueError, match="does not minimize"):
        A.verify_min_cut_weak(f, (0, 1, 2), (3, 1))


def test_strong_cut_fails_on_semi_strict_example():
    v = A.verify_min_cut_strong(example_2_1().function, (0, 1, 2), (2, 0))
    assert v.status == A.FAILS and v.counter_context["minimizers"] == [(2, 0, 1), (2, 1, 0)]


def test_statement_A_context():
    v = A.verify_statement_A(example_2_2().function, (0, 1), (2, 1))
    ctx = v.counter_context
    assert (ctx["mu"], ctx["mu_next"], ctx["expected_mu_next"]) == (2, 1, 0)


def test_geodesic_holds_on_mnat_example():
    assert all(v.holds for v in A.sweep(example_2_2().function, "geodesic"))


def test_directional_hypothesis_not_met():
    f = example_4_1().function
    v = A.verify_min_cut_directional(f, (1, 1), "qi", 1)
    assert v.status == A.NOT_MET and not v.hypothesis_met


def test_directional_rejects_bad_variant():
    with pytest.raises(ValueError):
        A.verify_min_cut_directional(example_4_1().function, (1, 1), "zz")
    with pytest.raises(ValueError):
        A.verify_min_cut_directional(example_4_1().function, (1, 1), "mi", 0)


@pytest.mark.parametrize("k", [2, 3, 4, 7])
def test_proximity_family(k):
    f = example_2_4(k).function
    assert A.scaled_hypothesis(f, (k, 0, 0), 2)
    assert A.proximity_gap(f, (k, 0, 0)) == k
    v = A.verify_proximity(f, 2)
    assert v.holds == (k <= 3)
    if not v.holds:
        assert v.counter_context["max_gap"] == k and v.counter_context["worst_x"] == (k, 0, 0)


def test_proximity_rejects_alpha():
    with pytest.raises(ValueError):
        A.verify_proximity(example_2_2().function, 1)


def test_projection_lift():
    g = A.project_to_m(example_2_2().function)
    assert g.dim == 3 and all(sum(x) == 0 for x in g.domain)
    assert check_m_exc(g).passed


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_mnat_theorems_on_separable(seed):
    f = gen_separable_convex(IntBox.cube(0, 3, 2), seed)
    for th in ("min-cut-strong", "geodesic", "local-global"):
        assert all(v.holds for v in A.sweep(f, th)), th
    assert A.verify_proximity(f, 2).holds and A.verify_proximity(f, 3).holds


@given(seeds)
@settings(max_examples=15, deadline=None)
def test_m_convex_variants_on_lifts(seed):
    g = A.project_to_m(gen_laminar_convex(IntBox.cube(0, 2, 3), seed))
    assert all(A.verify_local_global_m(g, x).holds for x in g.domain)
    assert A.verify_proximity(g, 2, "m").holds
    for x in g.domain:
        for var in ("Ai", "Aii"):
            for k in range(1, g.dim + 1):
                assert A.verify_min_cut_directional(g, x, var, k).status != A.FAILS
        assert A.verify_min_cut_directional(g, x, "Aiii").status != A.FAILS


def test_local_global_detects_false_local_min():
    f = TabulatedFunction(1, {(0,): 0, (1,): 1, (2,): 0, (3,): -1})
    assert any(v.status == A.FAILS for v in A.sweep(f, "local-global"))


def test_verdict_json_and_replay():
    f = example_2_1().function
    v = A.verify_geodesic(f, (0, 1, 2), (2, 0))
    doc = json.loads(json.dumps(v.to_json()))
    assert doc["status"] == "fails" and doc["counter_context"]["pair"] == [2, 0]
    assert A.replay_verdict(json.loads(f.dumps()), doc)
    doc["counter_context"]["mu_tilde_next"] = 2
    assert not A.replay_verdict(f, doc)


def test_sweep_unknown():
    with pytest.raises(ValueError):
        A.sweep(example_2_2().function, "riemann")
