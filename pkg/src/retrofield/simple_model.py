"""Pairing-constrained model with a ``1/sqrt(I)`` background prior.

Each hidden input intensity (the field riding along with the photon, ``I1``,
and the dark-port field ``I2``) must reappear unchanged as a hidden output
intensity: ``{I1, I2} == {IA, IB}``.  A diagram's weight is the prior density
of its hidden inputs, ``P0(I1) * P0(I2)``, which by the pairing constraint is
the same as ``P0(IA) * P0(IB)``.

The dark-port field is taken to be exactly zero (the overwhelmingly likely
case as the cutoff goes to zero), so the single-splitter problem has exactly
two closed-form diagrams.  Zero intensities are weighted at the cutoff.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import product

from .errors import ParameterDomainError
from .network import FieldConfiguration, cascade, propagate, single_beamsplitter
from .optics import BeamsplitterSpec

__all__ = [
    "PriorSimple",
    "SimpleDiagram",
    "solve_diagrams_beamsplitter",
    "outcome_probabilities_simple",
    "cascade_pairing_diagrams",
    "cascade_probabilities_simple",
    "EntangledScenario",
    "entangled_branches",
    "entangled_joint_probabilities",
    "correlation",
    "chsh_statistic",
]


@dataclass(frozen=True)
class PriorSimple:
    """``P0(I) = Q / sqrt(I)`` for ``I > epsilon``."""

    epsilon: float = 1e-9
    Q: float = 1.0

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ParameterDomainError("epsilon must be positive")

    def density(self, i: float) -> float:
        if i < self.epsilon:
            raise ParameterDomainError(f"prior undefined below the cutoff ({i} < {self.epsilon})")
        return self.Q / math.sqrt(i)

    def weight(self, i: float) -> float:
        """Density with zero (and sub-cutoff) intensities pinned to the cutoff."""
        return self.density(max(i, self.epsilon))


@dataclass(frozen=True)
class SimpleDiagram:
    outcome: str
    I1: float
    I2: float
    IA: float
    IB: float
    weight: float

    @property
    def fired_intensity(self) -> float:
        """Total intensity arriving at the detector that fires."""
        return 1.0 + (self.IA if self.outcome == "A" else self.IB)

    def pairing_holds(self, tol: float = 1e-12) -> bool:
        a = sorted((self.I1, self.I2))
        b = sorted((self.IA, self.IB))
        return all(abs(x - y) <= tol * max(1.0, abs(x)) for x, y in zip(a, b))

    def configuration(self, spec: BeamsplitterSpec | float) -> FieldConfiguration:
        """Propagate the diagram's inputs (dark port in phase) through the splitter."""
        net = single_beamsplitter(spec, dark_port=True)
        return propagate(net, {"photon": math.sqrt(1.0 + self.I1), "dark": math.sqrt(self.I2)})


def solve_diagrams_beamsplitter(
    spec: BeamsplitterSpec | float, prior: PriorSimple | None = None
) -> list[SimpleDiagram]:
    """The two ways a single splitter can deliver one whole photon.

    A fires when ``I1 = IB = R/T`` (so the transmitted beam is exactly 1); B
    fires when ``I1 = IA = T/R``.  For ``T`` of 0 or 1 only the trivial diagram
    exists and it alone is returned.
    """
    spec = BeamsplitterSpec.coerce(spec)
    prior = prior or PriorSimple()
    T, R = spec.T, spec.R
    if T == 1.0:
        return [SimpleDiagram("A", 0.0, 0.0, 0.0, 0.0, prior.weight(0.0) ** 2)]
    if T == 0.0:
        return [SimpleDiagram("B", 0.0, 0.0, 0.0, 0.0, prior.weight(0.0) ** 2)]
    dark = prior.weight(0.0)
    a = R / T
    b = T / R
    return [
        SimpleDiagram("A", I1=a, I2=0.0, IA=0.0, IB=a, weight=prior.weight(a) * dark),
        SimpleDiagram("B", I1=b, I2=0.0, IA=b, IB=0.0, weight=prior.weight(b) * dark),
    ]


def outcome_probabilities_simple(
    spec: BeamsplitterSpec | float, prior: PriorSimple | None = None
) -> dict[str, float]:
    diagrams = solve_diagrams_beamsplitter(spec, prior)
    total = math.fsum(d.weight for d in diagrams)
    probs = {"A": 0.0, "B": 0.0}
    for d in diagrams:
        probs[d.outcome] += d.weight / total
    return probs


# -- the cascade, where the pairing rule breaks down -------------------------


def cascade_pairing_diagrams(specs: Sequence[BeamsplitterSpec | float], tol: float = 1e-12) -> list[dict]:
    """Search for diagrams obeying the pairing rule with every dark port empty.

    With all dark ports at zero nothing interferes, so each detector receives a
    fixed fraction ``f_i`` of ``1 + I1``.  A diagram needs one detector at
    ``1 + u`` and the multiset of hidden outputs equal to ``{I1, 0, ..., 0}``.
    Every candidate (fired detector, which detector carries ``I1``) is solved
    for ``I1`` and checked.  For a proper cascade with ``0 < T < 1`` the list
    comes back empty.
    """
    specs = [BeamsplitterSpec.coerce(s) for s in specs]
    fracs = _cascade_fractions(specs)
    n = len(fracs)
    found = []
    for fired in range(n):
        for carrier in range(n):
            # fired detector: f * (1 + I1) = 1 + hidden[fired]
            # carrier gets I1, everyone else 0
            if carrier == fired:
                # f(1 + I1) = 1 + I1  ->  f == 1
                if abs(fracs[fired] - 1.0) > tol:
                    continue
                i1 = 0.0
            else:
                if fracs[fired] <= 0:
                    continue
                i1 = 1.0 / fracs[fired] - 1.0
            hidden = [fracs[k] * (1 + i1) for k in range(n)]
            hidden[fired] -= 1.0
            expected = [0.0] * n
            expected[carrier] = i1
            if all(abs(h - e) <= tol * max(1.0, i1) for h, e in zip(hidden, expected)):
                found.append({"fired": f"D{fired + 1}", "I1": i1, "hidden": hidden})
    return found


def cascade_probabilities_simple(
    specs: Sequence[BeamsplitterSpec | float], prior: PriorSimple | None = None
) -> dict[str, float]:
    """Carry the single-splitter rule over to a cascade, minus pairing.

    The photon's companion field is fixed by requiring the fired detector to
    see exactly one photon, ``I1 = 1/f_i - 1``, and weighted by ``P0(I1)``.
    On one splitter this reproduces ``T : R``; on longer cascades it does not,
    which is the expected failure of this model.
    """
    prior = prior or PriorSimple()
    fracs = _cascade_fractions([BeamsplitterSpec.coerce(s) for s in specs])
    if 1.0 in fracs:
        weights = [float(f == 1.0) for f in fracs]
    else:
        weights = [prior.weight(1.0 / f - 1.0) if f > 0.0 else 0.0 for f in fracs]
    total = math.fsum(weights)
    return {f"D{k + 1}": w / total for k, w in enumerate(weights)}


def _cascade_fractions(specs: list[BeamsplitterSpec]) -> list[float]:
    """Classical intensity fraction reaching each detector with no dark fields."""
    net = cascade(specs)
    return list(propagate(net, {"photon": 1.0}).detector_intensities().values())


# -- maximally entangled pair ---------------------------------------------------


@dataclass(frozen=True)
class EntangledScenario:
    """Polariser settings and one hidden polarisation branch."""

    a: float
    b: float
    lam: float
    weight: float = 0.25

    def __post_init__(self) -> None:
        axes = (self.a, self.b)
        if not any(_same_axis(self.lam, x) for x in axes):
            raise ParameterDomainError("hidden polarisation must match a setting modulo pi/2")


def _same_axis(x: float, y: float) -> bool:
    d = math.remainder(x - y, math.pi / 2)
    return abs(d) < 1e-12


def entangled_branches(a: float, b: float) -> list[EntangledScenario]:
    """The four equally weighted hidden polarisations ``a, a+pi/2, b, b+pi/2``."""
    return [EntangledScenario(a, b, lam) for lam in (a, a + math.pi / 2, b, b + math.pi / 2)]


def _malus(lam: float, setting: float) -> dict[str, float]:
    c = math.cos(lam - setting) ** 2
    return {"+": c, "-": 1.0 - c}


def entangled_joint_probabilities(a: float, b: float) -> dict[str, float]:
    """Joint outcome table built branch by branch.

    In each branch one photon's polarisation lies on its own polariser axis
    (deterministic outcome) and the other photon is split by Malus's law.
    """
    table = dict.fromkeys(("++", "+-", "-+", "--"), 0.0)
    for br in entangled_branches(a, b):
        p1 = _malus(br.lam, a)
        p2 = _malus(br.lam, b)
        for s1, s2 in product("+-", repeat=2):
            table[s1 + s2] += br.weight * p1[s1] * p2[s2]
    return table


def correlation(a: float, b: float) -> float:
    t = entangled_joint_probabilities(a, b)
    return t["++"] + t["--"] - t["+-"] - t["-+"]


def chsh_statistic(a: float, a2: float, b: float, b2: float) -> float:
    """``E(a,b) - E(a,b') + E(a',b) + E(a',b')``."""
    return correlation(a, b) - correlation(a, b2) + correlation(a2, b) + correlation(a2, b2)
