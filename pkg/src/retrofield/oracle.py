"""Standard single-photon quantum mechanics over path labels.

This is the ground truth the field models are checked against.  It evaluates
amplitudes as explicit sums over paths through the network (a product of
2x2 matrix elements per path) instead of the element-by-element propagation
used in :mod:`retrofield.network`; only the beamsplitter matrix itself is
shared.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

import numpy as np

from .errors import PostSelectionError, StructureError
from .network import (
    Beamsplitter,
    Detector,
    Edge,
    OpticalNetwork,
    PhaseShifter,
    Source,
)

__all__ = [
    "PathState",
    "Projector",
    "forward_state",
    "backward_state",
    "born_probabilities",
    "weak_value",
    "weak_value_complex",
    "reversed_network",
    "bell_joint_probabilities",
    "bell_chsh",
]

NORM_TOL = 1e-12
POSTSELECTION_TOL = 1e-12


@dataclass(frozen=True)
class PathState:
    """Complex amplitudes over an ordered tuple of path labels."""

    labels: tuple[str, ...]
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex).copy()
        amps.setflags(write=False)
        if amps.shape != (len(self.labels),):
            raise ValueError("one amplitude per label required")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate path labels")
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, labels: Iterable[str], label: str) -> PathState:
        labels = tuple(labels)
        amps = np.zeros(len(labels), dtype=complex)
        amps[labels.index(label)] = 1.0
        return cls(labels, amps)

    def __getitem__(self, label: str) -> complex:
        return complex(self.amplitudes[self.labels.index(label)])

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    @property
    def normalized(self) -> bool:
        return abs(self.norm**2 - 1.0) < NORM_TOL

    def probabilities(self) -> dict[str, float]:
        return {lbl: float(abs(a) ** 2) for lbl, a in zip(self.labels, self.amplitudes)}

    def aligned(self, labels: tuple[str, ...]) -> np.ndarray:
        if set(labels) != set(self.labels):
            raise ValueError(f"label sets differ: {self.labels} vs {labels}")
        return np.array([self[lbl] for lbl in labels], dtype=complex)

    def inner(self, other: PathState) -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.amplitudes, other.aligned(self.labels)))


@dataclass(frozen=True)
class Projector:
    """``|label><label|``."""

    label: str

    def apply(self, state: PathState) -> PathState:
        amps = np.where(np.array(state.labels) == self.label, state.amplitudes, 0)
        return PathState(state.labels, amps)


def _walk(network: OpticalNetwork, start: str) -> Iterator[tuple[tuple[str, ...], complex]]:
    """Every distinct path that begins on edge ``start``, once per path, with
    the product of transfer factors accumulated before its last edge."""
    stack = [((start,), 1.0 + 0j)]
    while stack:
        path, weight = stack.pop()
        yield path, weight
        e = network.edge(path[-1])
        el = network.element(e.dst)
        if isinstance(el, Detector):
            continue
        for q, lbl in enumerate(network.output_edges(el.name)):
            stack.append((path + (lbl,), weight * el.factor(e.dst_port, q)))


def _photon_source(network: OpticalNetwork, source: str | None) -> str:
    if source is not None:
        if source not in network.sources:
            raise StructureError(f"{source!r} is not a source")
        return source
    srcs = network.sources
    if len(srcs) == 1:
        return srcs[0]
    if "photon" in srcs:
        return "photon"
    raise StructureError(f"ambiguous photon source among {srcs}; pass source=")


def _check_cut(network: OpticalNetwork, start: str, cut: tuple[str, ...]) -> None:
    for lbl in cut:
        network.edge(lbl)
    if len(set(cut)) != len(cut):
        raise StructureError("cut lists an edge twice")
    cut_set = set(cut)
    for path, _ in _walk(network, start):
        if isinstance(network.element(network.edge(path[-1]).dst), Detector):
            hits = sum(lbl in cut_set for lbl in path)
            if hits != 1:
                raise StructureError(
                    f"cut {cut} crosses path {' -> '.join(path)} {hits} times (need exactly 1)"
                )


def forward_state(
    network: OpticalNetwork, cut: Iterable[str], source: str | None = None
) -> PathState:
    """Photon state on the ``cut`` edges, evolved forward from a unit source."""
    cut = tuple(cut)
    start = network.source_edge(_photon_source(network, source))
    _check_cut(network, start, cut)
    amps = dict.fromkeys(cut, 0j)
    for path, w in _walk(network, start):
        if path[-1] in amps:
            amps[path[-1]] += w
    return PathState(cut, np.array([amps[c] for c in cut]))


def backward_state(
    network: OpticalNetwork, detector: str, cut: Iterable[str], source: str | None = None
) -> PathState:
    """Detection at ``detector`` evolved backward to the ``cut`` edges.

    The component on cut edge c is the conjugate of the path sum from c to the
    detector, i.e. ``U^dagger |detector>``.
    """
    if detector not in network.detectors:
        raise KeyError(f"unknown detector {detector!r}")
    cut = tuple(cut)
    _check_cut(network, network.source_edge(_photon_source(network, source)), cut)
    target = network.detector_edge(detector)
    amps = []
    for c in cut:
        total = 0j
        for path, w in _walk(network, c):
            if path[-1] == target:
                total += w
        amps.append(total.conjugate())
    return PathState(cut, np.array(amps))


def born_probabilities(network: OpticalNetwork, source: str | None = None) -> dict[str, float]:
    """Single-photon detection probabilities ``|amplitude|^2`` per detector."""
    dets = network.detectors
    state = forward_state(network, [network.detector_edge(d) for d in dets], source)
    return {d: float(abs(a) ** 2) for d, a in zip(dets, state.amplitudes)}


def weak_value_complex(pre: PathState, post: PathState, q: Projector) -> complex:
    overlap = post.inner(pre)
    if abs(overlap) < POSTSELECTION_TOL:
        raise PostSelectionError(
            f"post-selected state is orthogonal to the pre-selected state (|<post|pre>| = {abs(overlap):.3g})"
        )
    return post.inner(q.apply(pre)) / overlap


def weak_value(pre: PathState, post: PathState, q: Projector) -> float:
    """``Re(<post|Q|pre> / <post|pre>)``."""
    return weak_value_complex(pre, post, q).real


def reversed_network(network: OpticalNetwork) -> OpticalNetwork:
    """Run the network backwards: detectors become sources, sources become
    detectors, every edge flips direction and every element is conjugated.

    Dark (unconnected) beamsplitter inputs turn into extra detectors named
    ``"<splitter>.in<port>"`` so that no amplitude escapes.
    """
    elements = []
    edges = [Edge(e.label, e.dst, e.dst_port, e.src, e.src_port) for e in network.edges]
    for el in network.elements:
        if isinstance(el, Source):
            elements.append(Detector(el.name))
        elif isinstance(el, Detector):
            elements.append(Source(el.name))
        elif isinstance(el, PhaseShifter):
            elements.append(PhaseShifter(el.name, -el.phi))
        else:
            elements.append(Beamsplitter(el.name, el.spec, not el.time_reversed))
            for port, lbl in enumerate(network.input_edges(el.name)):
                if lbl is None:
                    sink = f"{el.name}.in{port}"
                    elements.append(Detector(sink))
                    edges.append(Edge(sink, el.name, port, sink, 0))
    return OpticalNetwork(tuple(elements), tuple(edges))


def bell_joint_probabilities(a: float, b: float) -> dict[str, float]:
    """Quantum joint outcome table for a maximally entangled photon pair with
    identical polarisations measured at polariser angles ``a`` and ``b``."""
    c = math.cos(a - b) ** 2 / 2
    s = math.sin(a - b) ** 2 / 2
    return {"++": c, "+-": s, "-+": s, "--": c}


def bell_chsh(a: float, a2: float, b: float, b2: float) -> float:
    """Quantum CHSH combination with ``E(x, y) = cos(2(x - y))``."""
    E = lambda x, y: math.cos(2 * (x - y))  # noqa: E731
    return E(a, b) - E(a, b2) + E(a2, b) + E(a2, b2)
