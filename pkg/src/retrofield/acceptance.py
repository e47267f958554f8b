"""Acceptance checks, shared by ``retrofield verify`` and the test suite.

Each check returns ``(passed, detail)``.  Tolerances are fixed here and are
not meant to be tuned.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import averages, improved_model, oracle, simple_model
from .errors import DivergenceError, PostSelectionError
from .network import (
    Beamsplitter,
    Detector,
    Edge,
    OpticalNetwork,
    PhaseShifter,
    Source,
    cascade,
    check_energy_conservation,
    mach_zehnder,
    propagate,
    single_beamsplitter,
)

T_GRID = [round(0.05 * k, 2) for k in range(1, 20)]
CASCADE_GRID = [round(0.1 * k, 1) for k in range(1, 10)]
MC_SEED = 20181205
MC_SAMPLES = 10**6


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    check: Callable[[], tuple[bool, str]]


def _ratio_simple() -> tuple[bool, str]:
    worst_ratio = worst_oracle = 0.0
    for T in T_GRID:
        p = simple_model.outcome_probabilities_simple(T)
        R = 1.0 - T
        worst_ratio = max(worst_ratio, abs(p["A"] / p["B"] - T / R))
        born = oracle.born_probabilities(single_beamsplitter(T))
        worst_oracle = max(worst_oracle, abs(p["A"] - born["A"]), abs(p["B"] - born["B"]))
    ok = worst_ratio < 1e-12 and worst_oracle < 1e-12
    return ok, f"max |ratio - T/R| = {worst_ratio:.2e}, max |P - Born| = {worst_oracle:.2e}"


def _improved_integral() -> tuple[bool, str]:
    worst_ratio = worst_agree = 0.0
    for T in T_GRID:
        w = improved_model.outcome_weights_quadrature(T)
        worst_ratio = max(worst_ratio, abs(w["A"] / w["B"] - T / (1.0 - T)))
        q = improved_model.outcome_probabilities_improved(T, "quadrature")
        c = improved_model.outcome_probabilities_improved(T, "closed")
        worst_agree = max(worst_agree, abs(q["A"] - c["A"]), abs(q["B"] - c["B"]))
    ok = worst_ratio < 1e-9 and worst_agree < 1e-9
    return ok, f"max |quad ratio - T/R| = {worst_ratio:.2e}, max |quad - closed| = {worst_agree:.2e}"


def _monte_carlo() -> tuple[bool, str]:
    first = improved_model.monte_carlo_probabilities(0.7, MC_SAMPLES, MC_SEED)
    again = improved_model.monte_carlo_probabilities(0.7, MC_SAMPLES, MC_SEED)
    p = first["probabilities"]["A"]
    ok = abs(p - 0.7) <= 0.005 and first == again
    return ok, f"P(A) = {p:.5f} +/- {first['standard_error']:.5f} (n = {MC_SAMPLES}, seed = {MC_SEED}), reproducible = {first == again}"


def _closed_weak(T: float, outcome: str) -> tuple[float, float]:
    st, sr = math.sqrt(T), math.sqrt(1.0 - T)
    if outcome == "A":
        return st / (st + sr), sr / (st + sr)
    return st / (st - sr), -sr / (st - sr)


def _weak_correspondence() -> tuple[bool, str]:
    worst = worst_closed = 0.0
    checked = 0
    for T in T_GRID:
        for outcome in ("A", "B"):
            if outcome == "B" and T == 0.5:
                continue
            base = 0.0 if outcome == "A" else averages.outcome_b_floor(T)
            for extra in (0.0, 0.3, 2.0):
                r = averages.verify_weak_value_correspondence(T, outcome, base + extra)
                worst = max(worst, r.max_residual)
                cx, cy = _closed_weak(T, outcome)
                worst_closed = max(worst_closed, abs(r.weak_I_X - cx), abs(r.weak_I_Y - cy))
                checked += 1
    ok = worst < 1e-12 and worst_closed < 1e-12
    return ok, f"{checked} cases, max |avg - I_Z - weak| = {worst:.2e}, max |weak - closed form| = {worst_closed:.2e}"


def _negative_weak() -> tuple[bool, str]:
    T = 0.6
    net = mach_zehnder(T)
    pre = oracle.forward_state(net, ("X", "Y"))
    post = oracle.backward_state(net, "B", ("X", "Y"))
    weak_y = oracle.weak_value(pre, post, oracle.Projector("Y"))
    floor = averages.outcome_b_floor(T)
    formula = math.sqrt(1 - T) / (math.sqrt(T) - math.sqrt(1 - T))
    c = averages.required_correlation_interferometer(T, "B").value

    def lowest_arm(i_z: float) -> float:
        return min(averages.arm_averages_from_correlation(T, c, i_z))

    bisected = optimize.bisect(lowest_arm, 0.0, 100.0, xtol=1e-14, rtol=1e-15)
    nonneg = all(
        min(averages.average_intermediate_intensities(T, "B", floor + d)) >= 0.0
        for d in np.linspace(0.0, 10.0, 101)
    )
    nonneg &= all(floor + d + weak_y >= 0.0 for d in np.linspace(0.0, 10.0, 101))
    ok = weak_y < 0 and abs(floor - formula) < 1e-12 and abs(bisected - formula) < 1e-9 and nonneg
    return ok, (
        f"weak I_Y = {weak_y:.4f}, floor = {floor:.4f} (bisection {bisected:.10f}), "
        f"arms non-negative above floor = {nonneg}"
    )


def _interferometer_certainty() -> tuple[bool, str]:
    born = oracle.born_probabilities(mach_zehnder(0.5))
    imp = improved_model.interferometer_probabilities_improved(0.5)
    probs_ok = all(abs(p["A"] - 1.0) < 1e-12 and abs(p["B"]) < 1e-12 for p in (born, imp))
    raised = []
    for call in (
        lambda: averages.required_correlation_interferometer(0.5, "B"),
        lambda: averages.average_intermediate_intensities(0.5, "B", 10.0),
        lambda: averages.verify_weak_value_correspondence(0.5, "B", 10.0),
    ):
        try:
            call()
            raised.append(False)
        except DivergenceError:
            raised.append(True)
    net = mach_zehnder(0.5)
    try:
        oracle.weak_value(
            oracle.forward_state(net, ("X", "Y")), oracle.backward_state(net, "B", ("X", "Y")), oracle.Projector("X")
        )
        raised.append(False)
    except PostSelectionError:
        raised.append(True)
    ok = probs_ok and all(raised)
    return ok, f"Born {born}, 1/|C| {imp}, outcome-B queries raise: {raised}"


def _cascade() -> tuple[bool, str]:
    worst_improved = worst_simple = 0.0
    for t1 in CASCADE_GRID:
        for t2 in CASCADE_GRID:
            born = oracle.born_probabilities(cascade([t1, t2]))
            imp = improved_model.cascade_probabilities([t1, t2])
            simple = simple_model.cascade_probabilities_simple([t1, t2])
            worst_improved = max(worst_improved, max(abs(imp[d] - born[d]) for d in born))
            worst_simple = max(worst_simple, max(abs(simple[d] - born[d]) for d in born))
    ok = worst_improved < 1e-12 and worst_simple > 0.01
    return ok, f"improved max dev = {worst_improved:.2e}; simple max dev = {worst_simple:.4f} (must exceed 0.01)"


def _entangled() -> tuple[bool, str]:
    rng = np.random.default_rng(MC_SEED)
    worst = 0.0
    for a, b in rng.uniform(0.0, 2 * math.pi, size=(100, 2)):
        table = simple_model.entangled_joint_probabilities(a, b)
        quantum = oracle.bell_joint_probabilities(a, b)
        worst = max(worst, max(abs(table[k] - quantum[k]) for k in quantum))
    s = simple_model.chsh_statistic(0.0, math.pi / 4, math.pi / 8, 3 * math.pi / 8)
    ok = worst < 1e-12 and abs(s - 2 * math.sqrt(2)) < 1e-9
    return ok, f"max table deviation = {worst:.2e}, CHSH = {s:.12f}"


def random_mesh(rng: np.random.Generator, modes: int, depth: int) -> OpticalNetwork:
    """Random layered network: ``modes`` lines, each with a source and a
    detector, and ``depth`` layers of phase shifters and random splitters on
    neighbouring lines."""
    elements: list = []
    edges: list[Edge] = []
    heads = []
    for m in range(modes):
        elements.append(Source(f"s{m}"))
        heads.append((f"s{m}", 0))
    count = 0

    def link(src: tuple[str, int], dst: str, port: int) -> None:
        nonlocal count
        edges.append(Edge(f"e{count}", src[0], src[1], dst, port))
        count += 1

    for layer in range(depth):
        for m in range(modes):
            if rng.random() < 0.5:
                name = f"p{layer}.{m}"
                elements.append(PhaseShifter(name, float(rng.uniform(0, 2 * math.pi))))
                link(heads[m], name, 0)
                heads[m] = (name, 0)
        for m in range(layer % 2, modes - 1, 2):
            name = f"b{layer}.{m}"
            elements.append(Beamsplitter(name, float(rng.uniform(0, 1))))
            link(heads[m], name, 0)
            link(heads[m + 1], name, 1)
            heads[m], heads[m + 1] = (name, 0), (name, 1)
    for m in range(modes):
        elements.append(Detector(f"d{m}"))
        link(heads[m], f"d{m}", 0)
    return OpticalNetwork(tuple(elements), tuple(edges))


def _conservation() -> tuple[bool, str]:
    rng = np.random.default_rng(MC_SEED)
    worst_energy = 0.0
    for _ in range(10_000):
        net = random_mesh(rng, int(rng.integers(2, 5)), int(rng.integers(1, 4)))
        amps = rng.normal(size=(len(net.sources), 2)) @ np.array([1.0, 1j])
        cfg = propagate(net, dict(zip(net.sources, amps)))
        worst_energy = max(worst_energy, check_energy_conservation(cfg))

    worst_sum = 0.0
    for T in T_GRID:
        maps = [
            simple_model.outcome_probabilities_simple(T),
            improved_model.outcome_probabilities_improved(T),
            improved_model.outcome_probabilities_improved(T, "quadrature"),
            improved_model.interferometer_probabilities_improved(T),
            averages.probabilities_from_correlations(T, "beamsplitter"),
            oracle.born_probabilities(single_beamsplitter(T)),
            oracle.born_probabilities(mach_zehnder(T)),
        ]
        for t2 in CASCADE_GRID:
            maps.append(improved_model.cascade_probabilities([T, t2]))
            maps.append(simple_model.cascade_probabilities_simple([T, t2]))
        worst_sum = max(worst_sum, max(abs(math.fsum(m.values()) - 1.0) for m in maps))

    worst_weak = 0.0
    for _ in range(200):
        T, final, phase = rng.uniform(0.02, 0.98), rng.uniform(0.02, 0.98), rng.uniform(0, 2 * math.pi)
        net = mach_zehnder(T, final, phase)
        pre = oracle.forward_state(net, ("X", "Y"))
        for det in ("A", "B"):
            post = oracle.backward_state(net, det, ("X", "Y"))
            try:
                total = sum(oracle.weak_value(pre, post, oracle.Projector(p)) for p in ("X", "Y"))
            except PostSelectionError:
                continue
            worst_weak = max(worst_weak, abs(total - 1.0))
    ok = worst_energy < 1e-12 and worst_sum < 1e-9 and worst_weak < 1e-12
    return ok, (
        f"max energy residual = {worst_energy:.2e} over 10^4 networks, "
        f"max |sum P - 1| = {worst_sum:.2e}, max |sum weak - 1| = {worst_weak:.2e}"
    )


CRITERIA = [
    Criterion(1, "simple-model beamsplitter ratio T/R and Born agreement", _ratio_simple),
    Criterion(2, "improved-model theta integral ratio by quadrature", _improved_integral),
    Criterion(3, "improved-model Monte Carlo at T = 0.7", _monte_carlo),
    Criterion(4, "arm averages minus I_Z equal weak values", _weak_correspondence),
    Criterion(5, "negative weak value and the outcome-B background floor", _negative_weak),
    Criterion(6, "balanced interferometer: A certain, B divergent", _interferometer_certainty),
    Criterion(7, "cascade: improved matches Born, simple fails", _cascade),
    Criterion(8, "entangled pair joint table and CHSH", _entangled),
    Criterion(9, "energy conservation and normalisation", _conservation),
]


def run_all(echo: Callable[[str], None] = print) -> bool:
    all_ok = True
    for c in CRITERIA:
        try:
            ok, detail = c.check()
        except Exception as exc:  # a crash is a failed criterion, not an abort
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= ok
        echo(f"[{'PASS' if ok else 'FAIL'}] {c.number}. {c.title}: {detail}")
    return all_ok
