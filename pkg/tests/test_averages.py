import math

import pytest
from conftest import T_GRID
from scipy.optimize import brentq

from retrofield import DivergenceError, InsufficientBackgroundError, ParameterDomainError
from retrofield.averages import (
    arm_averages_from_correlation,
    average_intermediate_intensities,
    outcome_b_floor,
    probabilities_from_correlations,
    required_correlation_beamsplitter,
    required_correlation_interferometer,
    verify_weak_value_correspondence,
)
from retrofield.network import mach_zehnder, single_beamsplitter
from retrofield.oracle import born_probabilities


def test_beamsplitter_correlations():
    assert required_correlation_beamsplitter(0.5, "A").value == pytest.approx(-0.5)
    assert required_correlation_beamsplitter(0.5, "B").value == pytest.approx(0.5)
    assert required_correlation_beamsplitter(0.8, "A").value == pytest.approx(-0.25)
    with pytest.raises(DivergenceError):
        required_correlation_beamsplitter(1.0, "A")


def test_interferometer_correlations_t07():
    assert required_correlation_interferometer(0.7, "A").value == pytest.approx(0.10435, abs=1e-5)
    assert required_correlation_interferometer(0.7, "B").value == pytest.approx(-2.39565, abs=1e-5)


def test_interferometer_correlation_matches_unsimplified_form():
    for T in T_GRID:
        if T == 0.5:
            continue
        R = 1 - T
        rt = math.sqrt(R * T)
        assert required_correlation_interferometer(T, "A").value == pytest.approx((0.5 - rt) / (T - R), rel=1e-9)
        assert required_correlation_interferometer(T, "B").value == pytest.approx(-(0.5 + rt) / (T - R), rel=1e-9)


def test_balanced_interferometer():
    assert required_correlation_interferometer(0.5, "A").value == 0.0
    with pytest.raises(DivergenceError):
        required_correlation_interferometer(0.5, "B")
    for T in (0.5 - 1e-9, 0.5 + 1e-9):
        assert abs(required_correlation_interferometer(T, "A").value) < 10


def test_bad_outcome():
    with pytest.raises(ParameterDomainError):
        required_correlation_interferometer(0.7, "C")


def test_averages_examples():
    assert average_intermediate_intensities(0.7, "A", 0.3) == pytest.approx((0.9043561, 0.6956439), abs=1e-6)
    assert average_intermediate_intensities(0.7, "B", 3.0) == pytest.approx((5.8956439, 1.1043561), abs=1e-6)


@pytest.mark.parametrize("T", [0.1, 0.3, 0.8])
def test_arm_sum(T):
    for o, iz in (("A", 0.2), ("B", 50.0)):
        x, y = average_intermediate_intensities(T, o, iz)
        assert x + y == pytest.approx(2 * iz + 1, rel=1e-12)


def test_insufficient_background():
    with pytest.raises(InsufficientBackgroundError):
        average_intermediate_intensities(0.7, "B", 0.3)
    with pytest.raises(ParameterDomainError):
        average_intermediate_intensities(0.7, "A", -1.0)


@pytest.mark.parametrize("T", [0.05, 0.3, 0.6, 0.7, 0.95])
def test_floor_is_where_lowest_arm_hits_zero(T):
    c = required_correlation_interferometer(T, "B").value

    def lowest(iz):
        return min(arm_averages_from_correlation(T, c, iz))

    root = brentq(lowest, 0.0, 1e6, xtol=1e-14, rtol=1e-14)
    assert outcome_b_floor(T) == pytest.approx(root, rel=1e-10)


def test_floor_values():
    assert outcome_b_floor(0.6) == pytest.approx(4.4494897, abs=1e-6)
    assert outcome_b_floor(0.7) == pytest.approx(1.8956439, abs=1e-6)


def test_floor_grows_near_balance():
    floors = [outcome_b_floor(0.5 + d) for d in (0.1, 0.01, 0.001)]
    assert floors == sorted(floors)
    assert floors[-1] > 100


@pytest.mark.parametrize("T", T_GRID)
def test_weak_value_correspondence_grid(T):
    rep = verify_weak_value_correspondence(T, "A", 0.5)
    assert rep.max_residual < 1e-9
    if T != 0.5:
        rep = verify_weak_value_correspondence(T, "B", outcome_b_floor(T) + 1)
        assert rep.max_residual < 1e-9


def test_correspondence_t06_b():
    rep = verify_weak_value_correspondence(0.6, "B", 5.0)
    assert rep.weak_I_Y == pytest.approx(-4.4494897, abs=1e-6)
    assert rep.avg_I_Y == pytest.approx(0.5505103, abs=1e-6)
    assert rep.max_residual < 1e-9


@pytest.mark.parametrize("T", [0.2, 0.7])
def test_probability_weighted_averages(T):
    iz = 10.0
    p = born_probabilities(mach_zehnder(T))
    x = sum(p[o] * average_intermediate_intensities(T, o, iz)[0] for o in "AB")
    y = sum(p[o] * average_intermediate_intensities(T, o, iz)[1] for o in "AB")
    assert x == pytest.approx(T + iz, abs=1e-12)
    assert y == pytest.approx(1 - T + iz, abs=1e-12)


@pytest.mark.parametrize("T", T_GRID)
def test_inverse_correlation_rule(T):
    assert probabilities_from_correlations(T, "beamsplitter") == pytest.approx(
        born_probabilities(single_beamsplitter(T)), abs=1e-12
    )
    assert probabilities_from_correlations(T, "interferometer") == pytest.approx(
        born_probabilities(mach_zehnder(T)), abs=1e-12
    )


def test_inverse_correlation_rule_degenerate():
    assert probabilities_from_correlations(1.0, "beamsplitter") == {"A": 1.0, "B": 0.0}
    with pytest.raises(ParameterDomainError):
        probabilities_from_correlations(0.5, "cascade")
