import math

import numpy as np
import pytest

from bohrkit import functionals as fn
from bohrkit import sharpness as sh
from bohrkit._validation import ArgumentError, PreconditionError
from bohrkit.series import sample_schur_class


def test_kind_radius_values():
    assert sh.kind_radius("classical") == 1 / 3
    assert sh.kind_radius("refined-b", p=1) == pytest.approx(1 / 3)
    assert sh.kind_radius("improved", p=1, N=1) == pytest.approx(math.sqrt(5) - 2, abs=1e-12)
    assert sh.kind_radius("refined_improved", p=1) == pytest.approx(math.sqrt(5) - 2, abs=1e-12)
    assert sh.kind_radius("refined_b", p=1, a=0.5) == pytest.approx(0.4)


def test_uniform_radius_refused_for_large_p():
    with pytest.raises(PreconditionError):
        sh.kind_radius("improved", p=3)


def test_golden_section_finds_parabola_peak():
    x, fx = sh.golden_section_max(lambda t: -(t - 0.3) ** 2, 0, 1)
    assert x == pytest.approx(0.3, abs=1e-8)
    assert fx == pytest.approx(0.0, abs=1e-15)


def test_bombieri_witness_excess():
    rep = sh.find_witness("bombieri", 0.75)
    x = 0.75 / math.sqrt(2)
    assert rep.excess == pytest.approx(x / (1 - x) - 1, abs=1e-14)
    assert rep.excess == pytest.approx(0.12915490210770176, abs=1e-12)
    assert rep.certified


def test_classical_witness_a():
    rep = sh.find_witness("classical", 0.34)
    assert rep.witness["a"] >= (1 / 0.34 - 1) / 2
    assert rep.witness["a"] >= 0.9706
    assert rep.certified


def test_classical_below_radius_is_precondition_error():
    with pytest.raises(PreconditionError):
        sh.find_witness("classical", 0.33)


def test_refined_a_has_no_witness():
    with pytest.raises(PreconditionError):
        sh.find_witness("refined_a", 0.9)


def test_witness_with_fixed_a():
    rep = sh.find_witness("refined_b", 0.45, a=0.5)
    assert rep.witness["a"] == 0.5
    assert rep.certified


def test_fixed_a_rejected_for_uniform_kinds():
    with pytest.raises(ArgumentError):
        sh.find_witness("classical", 0.5, a=0.5)


def test_closed_form_agrees_with_series():
    rep = sh.find_witness("improved", 0.3, N=1, p=1)
    assert abs(rep.functional_value - rep.series_value) < 1e-12


def test_campaign_deterministic():
    a = sh.falsify_campaign("classical", trials=50, seed=9)
    b = sh.falsify_campaign("classical", trials=50, seed=9)
    assert a == b
    assert a.violations == 0
    assert a.r == pytest.approx(1 / 3 - 1e-3)


def test_campaign_rejects_radius_above_theorem():
    with pytest.raises(PreconditionError):
        sh.falsify_campaign("improved", r=0.5, trials=5)


def test_campaign_refuses_negative_offset():
    with pytest.raises(PreconditionError):
        sh.falsify_campaign("classical", trials=5, offset=-0.3)


def test_sampler_reaches_violations_above_radius():
    # the campaign samples are rich enough to break the bound well above 1/3
    rng = np.random.default_rng(0)
    hits = sum(
        fn.classical_report(sample_schur_class(rng, 256), 0.7).violated for _ in range(300)
    )
    assert hits > 0


def test_multidim_campaigns():
    assert sh.falsify_campaign("dr", trials=30, seed=1, n=3, q=3).violations == 0
    rep = sh.falsify_campaign("kn0", trials=30, seed=1, n=2)
    assert rep.violations == 0
    assert rep.r == pytest.approx(0.5)


def test_campaign_degree_budget():
    assert sh.campaign_degree(2) == 64
    assert math.comb(sh.campaign_degree(4) + 4, 4) <= 5000
