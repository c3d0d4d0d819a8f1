"""Invariants checked on generated inputs."""

import math

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from bohrkit import functionals as fn
from bohrkit import multidim as md
from bohrkit import radii
from bohrkit.series import (
    CoefficientSeries,
    blaschke_series,
    eval_modulus,
    moebius_series,
    sample_schur_class,
    schur_series,
)

unit = st.floats(0.0, 0.99, allow_nan=False)
radius = st.floats(0.01, 0.95, allow_nan=False)
seeds = st.integers(0, 2**32 - 1)
exponent = st.floats(0.1, 2.0, allow_nan=False)
disk_point = st.tuples(st.floats(-0.7, 0.7), st.floats(-0.7, 0.7)).map(lambda t: complex(*t))


@given(seeds)
def test_sampled_functions_satisfy_schwarz_pick(seed):
    f = sample_schur_class(np.random.default_rng(seed), 64)
    assert f.schwarz_pick_excess() <= 1e-12


@given(seeds, disk_point)
def test_sampled_functions_are_bounded(seed, z):
    f = sample_schur_class(np.random.default_rng(seed), 256)
    assert eval_modulus(f, z).lower <= 1.0 + 1e-12


@given(st.lists(disk_point, min_size=1, max_size=5), st.floats(0, 6.28))
def test_blaschke_series_matches_closed_form(zeros, rotation):
    f = blaschke_series(zeros, rotation, 32)
    t = 0.3
    closed = np.exp(1j * rotation) * np.prod([(w - t) / (1 - np.conj(w) * t) for w in zeros])
    assert abs(f.coeffs[0] - np.exp(1j * rotation) * np.prod(zeros)) < 1e-12
    # every coefficient is at most 1, so the tail beyond degree 32 is below 0.3^33 / 0.7
    assert abs(closed - f.partial_sum(t)) < 1e-14


@given(st.lists(disk_point, min_size=1, max_size=6))
def test_schur_first_coefficient_is_first_parameter(params):
    f = schur_series(params, 16)
    assert abs(f.coeffs[0] - params[0]) < 1e-13


@given(unit, radius)
def test_moebius_refined_a_equality(a, r):
    rep = fn.refined_a_report(moebius_series(a, 512), r)
    tail = (1 - a * a) * a**511 * r**513 / (1 - r)
    if tail < 1e-12:
        assert abs(rep.margin) <= 2 * rep.truncation_error + 1e-12


@given(seeds)
def test_classical_holds_at_third(seed):
    f = sample_schur_class(np.random.default_rng(seed), 512)
    assert not fn.classical_report(f, 1 / 3).violated


@given(seeds, exponent)
def test_refined_b_holds_at_sample_radius(seed, p):
    f = sample_schur_class(np.random.default_rng(seed), 512)
    a = f.initial_modulus
    if a < 0.999:
        r = radii.radius_r_p(a, p).value
        assert not fn.refined_b_report(f, r, p).violated


@given(unit, exponent)
def test_r_ap_is_root_and_below_r_p(a, p):
    res = radii.radius_r_ap(a, p)
    assert abs(radii.equation_A(a, p, res.value)) <= 1e-12
    assert 0 < res.value < 1


@given(st.integers(1, 6), exponent)
def test_R_Np_increases_with_N(N, p):
    assert radii.radius_R_Np(N + 1, p).value > radii.radius_R_Np(N, p).value


@given(unit)
def test_r_p_decreasing_in_a_for_p_one(a):
    assert radii.radius_r_p(a, 1.0).value >= radii.radius_r_p(min(a + 0.005, 0.995), 1.0).value


@given(st.integers(1, 3), exponent, st.floats(0.0, 1.0))
def test_psi_nonnegative_at_radius(N, p, a):
    r = radii.radius_R_Np(N, p).value
    assert radii.psi(N, p, a, r) >= -1e-12


@given(seeds, st.integers(2, 4), st.sampled_from([2.0, 3.0, 4.0]))
def test_dr_clauses_hold(seed, n, q):
    F = md.sample_polydisk_bounded(n, seed, md.SamplerSpec(degree=8))
    assert md.dr_check(F, q).ok


@given(st.floats(0.0, 0.7), st.floats(0.0, 0.7))
def test_extremal_matches_closed_form(x, y):
    F = md.two_variable_extremal(1 / math.sqrt(2), 64)
    s = md.homogeneous_majorants(F, [x, y])
    a = 1 / math.sqrt(2)
    exact = x * (a + (1 - a * a) * y / (1 - a * y))
    assert s.full_sum <= exact + 1e-12
    assert exact <= s.full_sum + s.tail_bound + 1e-12


@given(seeds)
def test_series_json_round_trip(seed):
    f = sample_schur_class(np.random.default_rng(seed), 16)
    g = CoefficientSeries.from_dict(f.to_dict())
    np.testing.assert_array_equal(f.coeffs, g.coeffs)
    assert g.provenance == f.provenance
