import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orbitref.classify import LemmaHardForm, classify, to_lemma_hard_form
from orbitref.config import DEFAULTS
from orbitref.jordan import canonical_matrix, from_blocks, rotation_matrix
from orbitref.qspan import IrrationalBasis
from orbitref.witness import (
    FLIP,
    SampleResult,
    WitnessError,
    WitnessReport,
    build_flip_witness_flat,
    build_flip_witness_jordan,
    closed_form_commutator,
    orbit_witness_problem,
    r_orbit_witness_problem,
    unit_samples,
    verify_noncommuting,
    verify_pointwise_approx,
    witness_report,
)

F = Fraction
B = IrrationalBasis.of("sqrt2", "sqrt3")
S2, S3 = B.element("sqrt2"), B.element("sqrt3")
LADDER = (10**3, 10**4, 10**5)


def rot(size, turns, r=1):
    return ("rotation", size, r, turns)


def split(size, value):
    return ("split", size, value)


def form_of(specs):
    return to_lemma_hard_form(from_blocks(specs))


# ------------------------------------------------------------ builders


def test_flat_builder_examples():
    assert np.array_equal(build_flip_witness_flat(form_of([rot(1, S2)])), FLIP)
    s = build_flip_witness_flat(form_of([rot(1, S2), rot(1, S3)]))
    want = np.zeros((4, 4))
    want[:2, :2] = FLIP
    want[2:, 2:] = np.eye(2)
    assert np.array_equal(s, want)
    s = build_flip_witness_flat(form_of([rot(1, S2), split(1, -1), split(1, F(1, 2))]))
    assert np.array_equal(s, np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]]))


def test_flat_builder_refuses_reflexive_forms():
    with pytest.raises(WitnessError):
        build_flip_witness_flat(form_of([rot(1, S2), rot(1, S2 + F(1, 2))]))
    with pytest.raises(WitnessError):
        build_flip_witness_flat(LemmaHardForm((), True, False, 1, 0))


def test_flat_builder_picks_an_independent_angle():
    # the rational angle is in every span, so the flip goes on the irrational one
    s = build_flip_witness_flat(form_of([rot(1, F(1, 4)), rot(1, S2)]))
    assert np.array_equal(s[2:, 2:], FLIP) and np.array_equal(s[:2, :2], np.eye(2))


def test_jordan_builder_examples():
    s = build_flip_witness_jordan(2, 1)
    want = np.zeros((4, 4))
    want[0:2, 2:4] = FLIP
    assert np.array_equal(s, want)
    s = build_flip_witness_jordan(2, 1, n_split=1)
    assert s.shape == (6, 6) and s[4, 5] == 1 and np.count_nonzero(s) == 3
    s = build_flip_witness_jordan(2, 1, rest_dim=1)
    assert s.shape == (5, 5) and not s[4].any() and not s[:, 4].any()
    with pytest.raises(WitnessError):
        build_flip_witness_jordan(2, 0)


# ------------------------------------------------------------ commutator


def test_commutator_examples():
    assert math.isclose(verify_noncommuting(FLIP, rotation_matrix(0.25)), 2 * math.sqrt(2), rel_tol=1e-15)
    t = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert verify_noncommuting(np.eye(2), t) == 0
    t = canonical_matrix(from_blocks([rot(1, S2), rot(1, S3)]))
    s = build_flip_witness_flat(form_of([rot(1, S2), rot(1, S3)]))
    assert math.isclose(verify_noncommuting(s, t), verify_noncommuting(FLIP, t[:2, :2]), rel_tol=1e-14)
    with pytest.raises(ValueError):
        verify_noncommuting(np.eye(2), np.eye(3))


@given(st.floats(0.01, 0.49))
def test_commutator_closed_form(turns):
    assert math.isclose(verify_noncommuting(FLIP, rotation_matrix(turns)), closed_form_commutator(turns), rel_tol=1e-12)


# ------------------------------------------------------------ pointwise approximation


def test_finite_orbit_residual_is_one_half():
    rep = verify_pointwise_approx(FLIP, rotation_matrix(F(1, 3)), [1.0, 0.0], "r-orbit", n_max=100)
    assert abs(rep.samples[0].residual - 0.5) < 1e-12


def test_sqrt2_rotation_residual_small():
    t = rotation_matrix(math.sqrt(2) % 1)
    assert verify_pointwise_approx(FLIP, t, [1.0, 0.0], "r-orbit", n_max=10**6).max_residual < 1e-3
    rep = verify_pointwise_approx(FLIP, t, [1.0, 0.0], "orbit", n_max=10**6)
    assert rep.max_residual < 1e-3 and rep.samples[0].best_lambda == 1.0


def test_sample_and_mode_errors():
    with pytest.raises(ValueError, match="zero sample"):
        verify_pointwise_approx(FLIP, np.eye(2), [0.0, 0.0])
    with pytest.raises(ValueError):
        verify_pointwise_approx(FLIP, np.eye(2), [1.0, 0.0], mode="other")
    with pytest.raises(ValueError):
        verify_pointwise_approx(FLIP, np.eye(2), [1.0, 0.0], mode="orbit", scaling=2)
    with pytest.raises(ValueError):
        verify_pointwise_approx(FLIP, np.eye(2), [1.0, 0.0], n_max=0)


def test_report_invariants_enforced():
    with pytest.raises(ValueError):
        WitnessReport(FLIP, 1.0, (SampleResult((1.0, 0.0), 5, 1.0, 0.1),), "r-orbit", 2)
    with pytest.raises(ValueError):
        WitnessReport(FLIP, 1.0, (SampleResult((1.0, 0.0), 1, 0.5, 0.1),), "orbit", 2)


def test_unit_samples_reproducible():
    a, b = unit_samples(5, 7, 3), unit_samples(5, 7, 3)
    assert np.array_equal(a, b) and np.allclose(np.linalg.norm(a, axis=0), 1)


@settings(max_examples=20)
@given(st.floats(0.01, 0.49), st.integers(0, 2**16))
def test_r_orbit_never_worse_than_orbit(turns, seed):
    t = rotation_matrix(turns)
    x = unit_samples(2, 3, seed)
    o = verify_pointwise_approx(FLIP, t, x, "orbit", n_max=500)
    r = verify_pointwise_approx(FLIP, t, x, "r-orbit", n_max=500)
    for a, b in zip(r.samples, o.samples):
        assert a.residual <= b.residual + 1e-12


# ------------------------------------------------------------ pipelines

NEGATIVE = [
    ("orbit", [rot(1, S2)]),
    ("orbit", [rot(1, S2), rot(1, S3)]),
    ("orbit", [rot(1, S2), split(1, -1), split(1, F(1, 2))]),
    ("r-orbit", [rot(1, S2)]),
    ("r-orbit", [rot(2, S2)]),
    ("r-orbit", [rot(2, S2), split(2, 1)]),
    ("r-orbit", [rot(2, S2, 3), split(1, 3)]),
]


@pytest.mark.parametrize("mode,specs", NEGATIVE)
def test_negative_verdicts_give_shrinking_residuals(mode, specs):
    s = from_blocks(specs)
    o, r = classify(s)
    assert not (o if mode == "orbit" else r).answer
    reps = [witness_report(s, mode, DEFAULTS, n) for n in LADDER]
    assert all(rep.commutator_norm > 0 for rep in reps)
    res = [rep.max_residual for rep in reps]
    assert res[0] >= res[1] >= res[2]
    assert res[2] < res[0] or res[2] < 1e-3


def test_jordan_witness_converges_under_binomial_scaling():
    rep = witness_report(from_blocks([rot(2, S2)]), "r-orbit", DEFAULTS, 10**5)
    assert rep.scaling == "binomial(2)" and rep.max_residual < 0.05


def test_reflexive_lemma_relation_plateaus():
    # angles tied by 2 a1 + 2 a2 = 1: the orbit closure is a proper subgroup
    s = from_blocks([rot(1, S2), rot(1, S2 + F(1, 2))])
    v, _ = classify(s)
    assert v.answer and v.rule == "lemma-hard-relation"
    problem = orbit_witness_problem(from_blocks([rot(1, S2), rot(1, S3)]))
    S = problem.S  # flip on the first plane, identity on the second
    T = canonical_matrix(s)
    x = unit_samples(4, DEFAULTS.n_samples, DEFAULTS.seed)
    res = [verify_pointwise_approx(S, T, x, "orbit", n).max_residual for n in LADDER]
    assert res[-1] > 0.1
    assert res[0] - res[-1] < 0.05


def test_pipeline_errors():
    with pytest.raises(WitnessError):
        r_orbit_witness_problem(from_blocks([split(3, 1), split(1, 1)]))
    with pytest.raises(WitnessError):
        r_orbit_witness_problem(from_blocks([rot(1, S2), rot(1, S2 + F(1, 2))]))
    with pytest.raises(ValueError):
        orbit_witness_problem(from_blocks([rot(2, S2)]))


def test_r_orbit_problem_normalizes_radius():
    p = r_orbit_witness_problem(from_blocks([rot(1, S2, 3)]))
    assert math.isclose(abs(np.linalg.eigvals(p.T)).max(), 1.0, rel_tol=1e-12)
