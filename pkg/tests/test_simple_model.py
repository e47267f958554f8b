import math

import pytest
from conftest import T_GRID

from retrofield import ParameterDomainError
from retrofield.acceptance import CASCADE_GRID
from retrofield.network import cascade, check_energy_conservation, single_beamsplitter
from retrofield.oracle import bell_chsh, bell_joint_probabilities, born_probabilities
from retrofield.simple_model import (
    EntangledScenario,
    PriorSimple,
    cascade_pairing_diagrams,
    cascade_probabilities_simple,
    chsh_statistic,
    correlation,
    entangled_branches,
    entangled_joint_probabilities,
    outcome_probabilities_simple,
    solve_diagrams_beamsplitter,
)


def test_diagrams_t07():
    a, b = solve_diagrams_beamsplitter(0.7)
    assert (a.outcome, b.outcome) == ("A", "B")
    assert a.I1 == pytest.approx(3 / 7)
    assert a.IB == pytest.approx(3 / 7) and a.IA == 0
    assert b.I1 == pytest.approx(7 / 3)
    assert b.IA == pytest.approx(7 / 3) and b.IB == 0
    assert a.weight / b.weight == pytest.approx(math.sqrt(49 / 9))


def test_diagrams_balanced():
    a, b = solve_diagrams_beamsplitter(0.5)
    assert a.I1 == b.I1 == 1.0
    assert a.weight == b.weight


@pytest.mark.parametrize("T", [0.0, 1.0])
def test_degenerate_splitter_has_trivial_diagram(T):
    (d,) = solve_diagrams_beamsplitter(T)
    assert d.outcome == ("A" if T == 1.0 else "B")
    assert outcome_probabilities_simple(T)[d.outcome] == 1.0


@pytest.mark.parametrize("T", T_GRID)
def test_diagrams_are_valid_field_solutions(T):
    for d in solve_diagrams_beamsplitter(T):
        cfg = d.configuration(T)
        assert d.pairing_holds()
        assert check_energy_conservation(cfg) < 1e-12
        fired, other = ("A", "B") if d.outcome == "A" else ("B", "A")
        assert cfg.intensity(fired) == pytest.approx(d.fired_intensity, rel=1e-12)
        assert cfg.intensity(fired) == pytest.approx(1.0, rel=1e-12)
        assert cfg.intensity(other) == pytest.approx(d.I1, rel=1e-12)


@pytest.mark.parametrize("T", T_GRID)
def test_ratio_matches_born(T):
    p = outcome_probabilities_simple(T)
    assert p["A"] / p["B"] == pytest.approx(T / (1 - T), rel=1e-12)
    assert p == pytest.approx(born_probabilities(single_beamsplitter(T)), abs=1e-12)


@pytest.mark.parametrize("eps", [1e-3, 1e-9, 1e-15])
def test_cutoff_independence(eps):
    assert outcome_probabilities_simple(0.7, PriorSimple(eps))["A"] == pytest.approx(0.7, abs=1e-12)


def test_prior_rejects_sub_cutoff():
    with pytest.raises(ParameterDomainError):
        PriorSimple(1e-6).density(1e-7)
    with pytest.raises(ParameterDomainError):
        PriorSimple(0.0)


@pytest.mark.parametrize("T", [0.2, 0.7])
def test_time_symmetric_weighting(T):
    # prior over hidden inputs equals prior over hidden outputs on every diagram
    prior = PriorSimple()
    for d in solve_diagrams_beamsplitter(T):
        assert prior.weight(d.I1) * prior.weight(d.I2) == pytest.approx(prior.weight(d.IA) * prior.weight(d.IB))


def test_cascade_has_no_pairing_diagram():
    assert cascade_pairing_diagrams([0.5, 0.5]) == []
    assert cascade_pairing_diagrams([0.3]) != []


def test_cascade_simple_deviates_from_born():
    p = cascade_probabilities_simple([0.5, 0.5])
    assert p == pytest.approx({"D1": 0.4641016, "D2": 0.2679492, "D3": 0.2679492}, abs=1e-6)
    worst = 0.0
    for t1 in CASCADE_GRID:
        for t2 in CASCADE_GRID:
            q = born_probabilities(cascade([t1, t2]))
            s = cascade_probabilities_simple([t1, t2])
            worst = max(worst, max(abs(s[k] - q[k]) for k in q))
    assert worst > 0.01


def test_single_stage_cascade_reduces_to_splitter():
    assert cascade_probabilities_simple([0.7]) == pytest.approx({"D1": 0.7, "D2": 0.3}, abs=1e-12)


@pytest.mark.parametrize("d", [0.0, math.pi / 6, math.pi / 4, 1.234])
def test_entangled_matches_quantum(d):
    assert entangled_joint_probabilities(0.3, 0.3 + d) == pytest.approx(bell_joint_probabilities(0.3, 0.3 + d), abs=1e-12)


def test_entangled_examples():
    assert entangled_joint_probabilities(0, 0) == pytest.approx({"++": 0.5, "+-": 0, "-+": 0, "--": 0.5}, abs=1e-15)
    assert entangled_joint_probabilities(0, math.pi / 6) == pytest.approx(
        {"++": 0.375, "+-": 0.125, "-+": 0.125, "--": 0.375}, abs=1e-12
    )
    assert entangled_joint_probabilities(0, math.pi / 4) == pytest.approx(dict.fromkeys(("++", "+-", "-+", "--"), 0.25), abs=1e-12)


def test_entangled_marginals_uniform():
    t = entangled_joint_probabilities(0.1, 0.9)
    assert t["++"] + t["+-"] == pytest.approx(0.5)
    assert t["++"] + t["-+"] == pytest.approx(0.5)


def test_chsh():
    assert chsh_statistic(0, math.pi / 4, math.pi / 8, 3 * math.pi / 8) == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    assert chsh_statistic(0, 0, 0, 0) == pytest.approx(2.0, abs=1e-12)
    assert correlation(0, math.pi / 4) == pytest.approx(0.0, abs=1e-12)
    angles = (0.2, 1.1, -0.4, 0.7)
    assert chsh_statistic(*angles) == pytest.approx(bell_chsh(*angles), abs=1e-12)


def test_branches():
    brs = entangled_branches(0.0, 0.5)
    assert math.fsum(b.weight for b in brs) == 1.0
    with pytest.raises(ParameterDomainError):
        EntangledScenario(0.0, 0.5, 0.2)
