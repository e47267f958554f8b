import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from retrofield import BeamsplitterSpec, ParameterDomainError, beamsplitter_matrix, beamsplitter_transfer, intensity


def test_symmetric_split_of_unit_input():
    o1, o2 = beamsplitter_transfer(1, 0, 0.5)
    assert intensity(o1) == pytest.approx(0.5, abs=1e-15)
    assert intensity(o2) == pytest.approx(0.5, abs=1e-15)


def test_in_phase_quadrature_inputs_cancel_on_port_one():
    # (1, i) through a 50/50: out1 = (1 + i*i)/sqrt2 = 0, out2 = (i + i)/sqrt2
    o1, o2 = beamsplitter_transfer(1, 1j, 0.5)
    assert abs(o1) < 1e-15
    assert o2 == pytest.approx(1j * math.sqrt(2), abs=1e-15)
    assert intensity(o2) == pytest.approx(2.0, abs=1e-14)


def test_reproduces_outcome_a_solution_at_t07():
    o1, o2 = beamsplitter_transfer(math.sqrt(1 + 3 / 7), 0, 0.7)
    assert intensity(o1) == pytest.approx(1.0, abs=1e-14)
    assert intensity(o2) == pytest.approx(3 / 7, abs=1e-14)


@pytest.mark.parametrize("T", [-0.1, 1.0000001, float("nan")])
def test_transmission_out_of_range(T):
    with pytest.raises(ParameterDomainError):
        beamsplitter_transfer(1, 0, T)


def test_reflection_is_derived():
    spec = BeamsplitterSpec(0.7)
    assert spec.T + spec.R == 1.0
    with pytest.raises(Exception):
        spec.T = 0.2


def test_unitarity_random_draws(rng):
    for _ in range(10_000):
        in1, in2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        o1, o2 = beamsplitter_transfer(in1, in2, rng.uniform())
        assert abs(intensity(o1) + intensity(o2) - intensity(in1) - intensity(in2)) < 1e-12


@given(
    st.floats(0, 1),
    st.floats(0, 50),
    st.floats(0, 50),
    st.floats(0, 2 * math.pi),
)
def test_output_intensity_expansion(T, i1, i2, theta):
    R = 1 - T
    a = math.sqrt(1 + i1)
    b = math.sqrt(i2) * complex(math.cos(theta), math.sin(theta))
    o1, o2 = beamsplitter_transfer(a, b, T)
    cross = 2 * math.sqrt(R * T * (1 + i1) * i2) * math.sin(theta)
    assert intensity(o1) == pytest.approx(T * (1 + i1) + R * i2 - cross, abs=1e-12 * (1 + i1 + i2))
    assert intensity(o2) == pytest.approx(R * (1 + i1) + T * i2 + cross, abs=1e-12 * (1 + i1 + i2))


def test_reflection_phase_is_plus_quarter_turn():
    m = beamsplitter_matrix(0.3)
    assert np.angle(m[1, 0]) == pytest.approx(math.pi / 2)
    assert np.angle(beamsplitter_matrix(0.3, time_reversed=True)[1, 0]) == pytest.approx(-math.pi / 2)
    assert np.allclose(m @ beamsplitter_matrix(0.3, time_reversed=True).T, np.eye(2))
