import math

import numpy as np
import pytest
from conftest import bs
from hypothesis import given, settings
from hypothesis import strategies as st

from retrofield import ConfigurationError, StructureError
from retrofield.acceptance import random_mesh
from retrofield.network import (
    Beamsplitter,
    Detector,
    Edge,
    FieldConfiguration,
    OpticalNetwork,
    PhaseShifter,
    Source,
    cascade,
    check_energy_conservation,
    element_residuals,
    mach_zehnder,
    propagate,
    single_beamsplitter,
    straight_line,
)
from retrofield.optics import beamsplitter_transfer


def test_identity_network():
    cfg = propagate(straight_line(), {"photon": 1})
    assert cfg["D"] == 1


def test_single_splitter_fractions():
    cfg = propagate(single_beamsplitter(0.7), {"photon": 1})
    assert cfg.detector_intensities() == pytest.approx({"A": 0.7, "B": 0.3}, abs=1e-15)


def test_interferometer_t07():
    cfg = propagate(mach_zehnder(0.7), {"photon": 1})
    # hand product: final 50/50 applied to (sqrt T, i sqrt R); A on port 2
    out = bs(0.5) @ (bs(0.7) @ np.array([1, 0]))
    expected = {"A": abs(out[1]) ** 2, "B": abs(out[0]) ** 2}
    assert cfg.detector_intensities() == pytest.approx(expected, abs=1e-14)
    assert expected["A"] == pytest.approx(0.5 + math.sqrt(0.21), abs=1e-14)
    assert expected["B"] == pytest.approx(0.0417424305, abs=1e-9)


def test_cascade_equals_manual_chain(rng):
    for _ in range(100):
        ts = rng.uniform(size=3)
        amp = complex(*rng.normal(size=2))
        cfg = propagate(cascade(ts), {"photon": amp})
        x = amp
        for k, T in enumerate(ts, start=1):
            d, x = beamsplitter_transfer(x, 0, T)
            assert cfg[f"D{k}"] == pytest.approx(d, abs=1e-14)
        assert cfg["D4"] == pytest.approx(x, abs=1e-14)


def test_phase_shifter_multiplies_by_phase():
    net = OpticalNetwork(
        (Source("s"), PhaseShifter("p", 0.4), Detector("d")),
        (Edge("a", "s", 0, "p", 0), Edge("b", "p", 0, "d", 0)),
    )
    assert propagate(net, {"s": 2.0})["b"] == pytest.approx(2 * complex(math.cos(0.4), math.sin(0.4)))


def test_dark_port_source_and_energy_bookkeeping():
    T = 0.7
    R = 1 - T
    cfg = propagate(single_beamsplitter(T, dark_port=True), {"photon": math.sqrt(1 + R / T), "dark": 0})
    assert cfg.intensity("A") == pytest.approx(1.0, abs=1e-14)
    assert cfg.intensity("B") == pytest.approx(R / T, abs=1e-14)
    assert check_energy_conservation(cfg) < 1e-14


@pytest.mark.parametrize("T", [0.1, 0.5, 0.9])
def test_outcome_a_solution_residual_zero_any_t(T):
    R = 1 - T
    net = single_beamsplitter(T, dark_port=True)
    cfg = FieldConfiguration(net, {"in1": math.sqrt(1 + R / T), "in2": 0, "A": 1, "B": math.sqrt(R / T)})
    assert check_energy_conservation(cfg) < 1e-14


def test_all_zero_residual():
    net = mach_zehnder(0.3, dark_port=True)
    cfg = propagate(net, {"photon": 0, "dark": 0})
    assert check_energy_conservation(cfg) == 0
    assert all(v == 0 for v in element_residuals(cfg).values())


def test_configuration_must_cover_every_edge():
    with pytest.raises(ConfigurationError):
        FieldConfiguration(single_beamsplitter(0.5), {"in1": 1})


def test_missing_source_amplitude():
    with pytest.raises(ConfigurationError):
        propagate(single_beamsplitter(0.5, dark_port=True), {"photon": 1})


def test_cycle_rejected():
    with pytest.raises(StructureError, match="cycle"):
        OpticalNetwork(
            (Source("s"), Beamsplitter("b1", 0.5), Beamsplitter("b2", 0.5), Detector("d1"), Detector("d2")),
            (
                Edge("e0", "s", 0, "b1", 0),
                Edge("e1", "b1", 0, "b2", 0),
                Edge("e2", "b2", 0, "b1", 1),
                Edge("e3", "b1", 1, "d1", 0),
                Edge("e4", "b2", 1, "d2", 0),
            ),
        )


@pytest.mark.parametrize(
    "elements, edges, match",
    [
        ((Source("s"), Detector("d")), (), "not connected"),
        ((Source("s"), Source("s")), (), "duplicate element"),
        ((Source("s"), Detector("d")), (Edge("e", "s", 0, "d", 1),), "no port"),
        (
            (Source("s"), Source("t"), Detector("d")),
            (Edge("e", "s", 0, "d", 0), Edge("f", "t", 0, "d", 0)),
            "already connected",
        ),
        ((Source("s"), Detector("d")), (Edge("e", "s", 0, "x", 0),), "unknown element"),
    ],
)
def test_structure_errors(elements, edges, match):
    with pytest.raises(StructureError, match=match):
        OpticalNetwork(elements, edges)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5), st.integers(1, 5))
def test_random_meshes_conserve_energy(seed, modes, depth):
    rng = np.random.default_rng(seed)
    net = random_mesh(rng, modes, depth)
    amps = rng.normal(size=len(net.sources)) + 1j * rng.normal(size=len(net.sources))
    cfg = propagate(net, dict(zip(net.sources, amps)))
    assert check_energy_conservation(cfg) < 1e-12
    assert max(element_residuals(cfg).values(), default=0.0) < 1e-12
