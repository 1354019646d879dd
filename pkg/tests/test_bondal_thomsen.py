from fractions import Fraction

import pytest

from core.bondal_thomsen import (
    FloorChart,
    emit_strata_svg,
    is_bondal_ruan_type,
    stratify,
    stratum_poset_graphs,
    theta_exact,
    theta_sampled,
    transparency_check,
)
from core.constants import SAMPLED_DENOMINATOR
from core.error_handling import UnsupportedInputError, ValidationError
from core.presets import FAN_PRESETS, fan_preset, projective_space_fan
from core.toric import cox_grading


@pytest.mark.parametrize("n", [1, 2, 3])
def test_theta_of_projective_space(n):
    theta = theta_exact(cox_grading(projective_space_fan(n)))
    assert theta.weights == frozenset((-k,) for k in range(n + 1))
    assert theta.sorted_weights()[0] == (0,)


@pytest.mark.slow
def test_theta_of_p4():
    theta = theta_exact(cox_grading(projective_space_fan(4)))
    assert theta.weights == frozenset((-k,) for k in range(5))


def test_calibration_negates_weights():
    theta = theta_exact(cox_grading(projective_space_fan(2)))
    assert theta.calibrated(-1).weights == frozenset({(0,), (1,), (2,)})
    assert theta.calibrated(-1).calibrated(1).weights == theta.weights
    with pytest.raises(ValidationError):
        theta.calibrated(2)


SAMPLED_FANS = [
    pytest.param(name, marks=pytest.mark.slow) if name in ("p3", "p4") else name for name in sorted(FAN_PRESETS)
]


@pytest.mark.parametrize("name", SAMPLED_FANS)
def test_sampled_theta_agrees_with_exact(name):
    g = cox_grading(fan_preset(name))
    assert theta_sampled(g, SAMPLED_DENOMINATOR) == theta_exact(g).weights


def test_theta_of_hirzebruch_has_five_weights():
    theta = theta_exact(cox_grading(fan_preset("f2")))
    assert len(theta.weights) == 5
    assert (0, 0) in theta.weights


def test_floor_map_at_origin_is_zero():
    chart = FloorChart(cox_grading(fan_preset("p1xp1")))
    assert chart.floor_map((Fraction(0), Fraction(0))) == (0, 0)
    assert chart.floor_map((Fraction(1, 2), Fraction(1, 3))) == (-1, -1)


def test_sampling_denominator_must_be_at_least_two():
    with pytest.raises(ValidationError):
        theta_sampled(cox_grading(projective_space_fan(1)), 1)


def test_transparency_of_beilinson_collection():
    report = transparency_check(projective_space_fan(2), [(0,), (-1,), (-2,)])
    assert report.passed
    assert report.verdict == "transparent up to fullness"


def test_transparency_reports_higher_cohomology_witness():
    report = transparency_check(projective_space_fan(1), [(0,), (2,)])
    assert not report.strong_exceptional.passed
    assert report.strong_exceptional.witness == "H^1(O(-2)) = 1"
    assert report.hom_equality.passed
    assert report.cardinality.passed
    assert report.verdict == "not transparent"


def test_transparency_counts_maximal_cones():
    report = transparency_check(fan_preset("p1xp1"), [(0, 0), (-1, 0)])
    assert report.strong_exceptional.passed
    assert not report.cardinality.passed
    assert report.cardinality.witness == "2 weights for 4 maximal cones"


def test_weight_length_is_checked():
    with pytest.raises(ValidationError):
        transparency_check(fan_preset("p1xp1"), [(0,)])


@pytest.mark.parametrize(
    "name, expected",
    [("p1", True), ("p2", True), ("p1xp1", True), ("f2", False)],
)
def test_bondal_ruan_classification(name, expected):
    assert is_bondal_ruan_type(fan_preset(name)).bondal_ruan is expected


def test_hirzebruch_theta_is_too_large():
    report = is_bondal_ruan_type(fan_preset("f2"))
    for sign in (1, -1):
        assert not report.reports[sign].cardinality.passed


def test_stratification_of_p2():
    s = stratify(cox_grading(projective_space_fan(2)))
    assert s.labels == [(0,), (-1,), (-2,)]
    assert s.consistent
    assert s.total_volume() == 1
    assert [c.dim for c in s.strata[(0,)]] == [0]
    assert ((-2,), (-1,)) in s.order_h0
    assert ((0,), (-1,)) in s.order_closure


def test_orders_are_reverse_of_each_other():
    s = stratify(cox_grading(fan_preset("p1xp1")))
    h0, closure = stratum_poset_graphs(s)
    assert s.consistent
    assert set(h0.nodes) == set(closure.nodes) == set(s.labels)
    for a, b in s.order_h0:
        assert closure.has_edge(b, a)


def test_weights_only_mode_drops_geometry():
    s = stratify(cox_grading(projective_space_fan(2)), geometry=False)
    assert s.labels == [(0,), (-1,), (-2,)]
    assert all(chambers == () for chambers in s.strata.values())
    with pytest.raises(UnsupportedInputError):
        emit_strata_svg(s)


@pytest.mark.parametrize("name", ["p1xp1", "f2", "blp2"])
def test_weights_only_labels_are_theta(name):
    g = cox_grading(fan_preset(name))
    s = stratify(g, geometry=False)
    assert set(s.labels) == theta_exact(g).weights
    assert s.order_closure == stratify(g).order_closure


@pytest.mark.slow
def test_weights_only_mode_runs_above_the_geometry_rank():
    g = cox_grading(projective_space_fan(4))
    s = stratify(g, geometry=False)
    assert s.labels == [(0,), (-1,), (-2,), (-3,), (-4,)]
    assert s.consistent


def test_svg_has_a_legend_entry_per_stratum():
    s = stratify(cox_grading(fan_preset("f2")))
    svg = emit_strata_svg(s)
    assert svg.startswith("<svg")
    assert svg.rstrip().endswith("</svg>")
    assert svg.count("<text") == len(s.labels)


def test_svg_needs_rank_two():
    with pytest.raises(UnsupportedInputError):
        emit_strata_svg(stratify(cox_grading(projective_space_fan(1))))
