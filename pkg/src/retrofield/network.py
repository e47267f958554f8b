"""Optical networks as directed acyclic graphs, and classical propagation.

A network is a set of named elements (sources, beamsplitters, phase shifters,
detectors) joined by labelled edges.  Each edge runs from an output port of one
element to an input port of another and carries a single complex amplitude.

Unconnected beamsplitter input ports are dark ports with zero field.  Every
output port must be connected, so that no energy leaves the network except
through a detector.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from types import MappingProxyType
from typing import Union

from .errors import ConfigurationError, StructureError
from .optics import BeamsplitterSpec, beamsplitter_matrix, intensity, phase_factor

__all__ = [
    "Source",
    "Beamsplitter",
    "PhaseShifter",
    "Detector",
    "Edge",
    "OpticalNetwork",
    "FieldConfiguration",
    "propagate",
    "check_energy_conservation",
    "element_residuals",
    "single_beamsplitter",
    "cascade",
    "mach_zehnder",
    "straight_line",
]


@dataclass(frozen=True)
class Source:
    name: str


@dataclass(frozen=True)
class Beamsplitter:
    name: str
    spec: BeamsplitterSpec
    time_reversed: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "spec", BeamsplitterSpec.coerce(self.spec))

    def factor(self, in_port: int, out_port: int) -> complex:
        return complex(beamsplitter_matrix(self.spec, self.time_reversed)[out_port, in_port])


@dataclass(frozen=True)
class PhaseShifter:
    name: str
    phi: float

    def factor(self, in_port: int = 0, out_port: int = 0) -> complex:
        return phase_factor(self.phi)


@dataclass(frozen=True)
class Detector:
    name: str


Element = Union[Source, Beamsplitter, PhaseShifter, Detector]

# (number of input ports, number of output ports)
_PORTS = {Source: (0, 1), Beamsplitter: (2, 2), PhaseShifter: (1, 1), Detector: (1, 0)}


@dataclass(frozen=True)
class Edge:
    label: str
    src: str
    src_port: int
    dst: str
    dst_port: int


@dataclass(frozen=True)
class OpticalNetwork:
    """Immutable, validated network.  Build it with the helper constructors
    below or directly from element and edge sequences."""

    elements: tuple[Element, ...]
    edges: tuple[Edge, ...]
    _by_name: Mapping[str, Element] = field(init=False, repr=False, compare=False)
    _by_label: Mapping[str, Edge] = field(init=False, repr=False, compare=False)
    _inputs: Mapping[str, tuple] = field(init=False, repr=False, compare=False)
    _outputs: Mapping[str, tuple] = field(init=False, repr=False, compare=False)
    _order: tuple[str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "edges", tuple(self.edges))

        by_name: dict[str, Element] = {}
        for el in self.elements:
            if type(el) not in _PORTS:
                raise StructureError(f"unknown element type {type(el).__name__}")
            if el.name in by_name:
                raise StructureError(f"duplicate element name {el.name!r}")
            by_name[el.name] = el

        by_label: dict[str, Edge] = {}
        inputs = {name: [None] * _PORTS[type(el)][0] for name, el in by_name.items()}
        outputs = {name: [None] * _PORTS[type(el)][1] for name, el in by_name.items()}
        for e in self.edges:
            if e.label in by_label:
                raise StructureError(f"duplicate edge label {e.label!r}")
            for end, port, slots in ((e.src, e.src_port, outputs), (e.dst, e.dst_port, inputs)):
                if end not in by_name:
                    raise StructureError(f"edge {e.label!r} refers to unknown element {end!r}")
                if not 0 <= port < len(slots[end]):
                    raise StructureError(f"edge {e.label!r}: {end!r} has no port {port}")
                if slots[end][port] is not None:
                    raise StructureError(f"edge {e.label!r}: port {port} of {end!r} already connected")
                slots[end][port] = e.label
            by_label[e.label] = e

        for name, el in by_name.items():
            if None in outputs[name]:
                raise StructureError(f"output port of {name!r} is not connected")
            if isinstance(el, (Detector, PhaseShifter)) and None in inputs[name]:
                raise StructureError(f"input port of {name!r} is not connected")

        graph = {name: set() for name in by_name}
        for e in self.edges:
            graph[e.dst].add(e.src)
        try:
            order = tuple(TopologicalSorter(graph).static_order())
        except CycleError as exc:
            raise StructureError(f"network contains a cycle: {exc.args[1]}") from None

        object.__setattr__(self, "_by_name", MappingProxyType(by_name))
        object.__setattr__(self, "_by_label", MappingProxyType(by_label))
        object.__setattr__(self, "_inputs", MappingProxyType({k: tuple(v) for k, v in inputs.items()}))
        object.__setattr__(self, "_outputs", MappingProxyType({k: tuple(v) for k, v in outputs.items()}))
        object.__setattr__(self, "_order", order)

    def element(self, name: str) -> Element:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"no element named {name!r}") from None

    def edge(self, label: str) -> Edge:
        try:
            return self._by_label[label]
        except KeyError:
            raise KeyError(f"no edge labelled {label!r}") from None

    def input_edges(self, name: str) -> tuple[str | None, ...]:
        return self._inputs[name]

    def output_edges(self, name: str) -> tuple[str, ...]:
        return self._outputs[name]

    @property
    def order(self) -> tuple[str, ...]:
        """Element names in topological order."""
        return self._order

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(e.label for e in self.edges)

    @property
    def sources(self) -> tuple[str, ...]:
        return tuple(el.name for el in self.elements if isinstance(el, Source))

    @property
    def detectors(self) -> tuple[str, ...]:
        return tuple(el.name for el in self.elements if isinstance(el, Detector))

    def source_edge(self, name: str) -> str:
        if not isinstance(self.element(name), Source):
            raise KeyError(f"{name!r} is not a source")
        return self._outputs[name][0]

    def detector_edge(self, name: str) -> str:
        if not isinstance(self.element(name), Detector):
            raise KeyError(f"unknown detector {name!r}")
        return self._inputs[name][0]


@dataclass(frozen=True)
class FieldConfiguration:
    """An amplitude on every edge of ``network``."""

    network: OpticalNetwork
    amplitudes: Mapping[str, complex]

    def __post_init__(self) -> None:
        missing = [lbl for lbl in self.network.labels if lbl not in self.amplitudes]
        if missing:
            raise ConfigurationError(f"no amplitude for edges {missing}")
        object.__setattr__(
            self, "amplitudes", MappingProxyType({k: complex(v) for k, v in self.amplitudes.items()})
        )

    def __getitem__(self, label: str) -> complex:
        return self.amplitudes[label]

    def intensity(self, label: str) -> float:
        return intensity(self.amplitudes[label])

    def intensities(self) -> dict[str, float]:
        return {lbl: intensity(a) for lbl, a in self.amplitudes.items()}

    def detector_intensities(self) -> dict[str, float]:
        return {d: self.intensity(self.network.detector_edge(d)) for d in self.network.detectors}


def _evaluate(
    network: OpticalNetwork,
    inputs: Mapping[str, complex],
    overrides: Mapping[str, complex] | None = None,
) -> dict[str, complex]:
    amp: dict[str, complex] = {}
    overrides = overrides or {}
    for name in network.order:
        el = network.element(name)
        ins = [0j if lbl is None else amp[lbl] for lbl in network.input_edges(name)]
        if isinstance(el, Source):
            outs = [complex(inputs[name])]
        elif isinstance(el, Beamsplitter):
            m = beamsplitter_matrix(el.spec, el.time_reversed)
            outs = [complex(m[0, 0] * ins[0] + m[0, 1] * ins[1]), complex(m[1, 0] * ins[0] + m[1, 1] * ins[1])]
        elif isinstance(el, PhaseShifter):
            outs = [ins[0] * phase_factor(el.phi)]
        else:
            outs = []
        for lbl, a in zip(network.output_edges(name), outs):
            amp[lbl] = complex(overrides.get(lbl, a))
    return amp


def propagate(network: OpticalNetwork, inputs: Mapping[str, complex]) -> FieldConfiguration:
    """Push source amplitudes through the network in topological order."""
    missing = [s for s in network.sources if s not in inputs]
    if missing:
        raise ConfigurationError(f"no amplitude assigned to sources {missing}")
    unknown = [s for s in inputs if s not in network.sources]
    if unknown:
        raise ConfigurationError(f"{unknown} are not sources of this network")
    return FieldConfiguration(network, _evaluate(network, inputs))


def check_energy_conservation(config: FieldConfiguration) -> float:
    """``|sum(source-edge intensities) - sum(detector-edge intensities)|``."""
    net = config.network
    total_in = math.fsum(config.intensity(net.source_edge(s)) for s in net.sources)
    total_out = math.fsum(config.intensity(net.detector_edge(d)) for d in net.detectors)
    return abs(total_in - total_out)


def element_residuals(config: FieldConfiguration) -> dict[str, float]:
    """Per-element energy mismatch for beamsplitters and phase shifters."""
    net = config.network
    res = {}
    for el in net.elements:
        if isinstance(el, (Beamsplitter, PhaseShifter)):
            i = math.fsum(config.intensity(lbl) for lbl in net.input_edges(el.name) if lbl is not None)
            o = math.fsum(config.intensity(lbl) for lbl in net.output_edges(el.name))
            res[el.name] = abs(i - o)
    return res


# -- standard geometries -------------------------------------------------------


def straight_line() -> OpticalNetwork:
    """One source wired straight into one detector."""
    return OpticalNetwork((Source("photon"), Detector("D")), (Edge("D", "photon", 0, "D", 0),))


def single_beamsplitter(spec: BeamsplitterSpec | float, dark_port: bool = False) -> OpticalNetwork:
    """One splitter, photon on input 1; transmitted light reaches detector A.

    Edges: ``in1`` (and ``in2`` with a dark-port source), ``A``, ``B``.
    """
    elements: list[Element] = [Source("photon"), Beamsplitter("BS", spec), Detector("A"), Detector("B")]
    edges = [Edge("in1", "photon", 0, "BS", 0), Edge("A", "BS", 0, "A", 0), Edge("B", "BS", 1, "B", 0)]
    if dark_port:
        elements.append(Source("dark"))
        edges.append(Edge("in2", "dark", 0, "BS", 1))
    return OpticalNetwork(tuple(elements), tuple(edges))


def cascade(specs: Sequence[BeamsplitterSpec | float], dark_ports: bool = False) -> OpticalNetwork:
    """Chain of splitters: splitter k transmits to detector ``Dk`` and
    reflects into splitter k+1; the last reflection lands on ``D{n+1}``.

    Edges: ``in``, ``D1..D{n+1}``, ``r1..r{n-1}`` between splitters and
    ``dark1..darkn`` when dark-port sources are requested.
    """
    specs = list(specs)
    if not specs:
        raise ConfigurationError("cascade needs at least one splitter")
    n = len(specs)
    elements: list[Element] = [Source("photon")]
    edges = [Edge("in", "photon", 0, "BS1", 0)]
    for k, spec in enumerate(specs, start=1):
        elements += [Beamsplitter(f"BS{k}", spec), Detector(f"D{k}")]
        edges.append(Edge(f"D{k}", f"BS{k}", 0, f"D{k}", 0))
        if k < n:
            edges.append(Edge(f"r{k}", f"BS{k}", 1, f"BS{k + 1}", 0))
        if dark_ports:
            elements.append(Source(f"dark{k}"))
            edges.append(Edge(f"dark{k}", f"dark{k}", 0, f"BS{k}", 1))
    elements.append(Detector(f"D{n + 1}"))
    edges.append(Edge(f"D{n + 1}", f"BS{n}", 1, f"D{n + 1}", 0))
    return OpticalNetwork(tuple(elements), tuple(edges))


def mach_zehnder(
    spec: BeamsplitterSpec | float,
    final: BeamsplitterSpec | float = 0.5,
    phase: float = 0.0,
    dark_port: bool = False,
) -> OpticalNetwork:
    """Two-splitter interferometer with arms ``X`` (transmitted) and ``Y``
    (reflected, followed by a phase shifter and edge ``Y2``).

    Detector A sits on output 2 of the final splitter, which is the port that
    always fires for a balanced first splitter and equal arms.
    """
    elements: list[Element] = [
        Source("photon"),
        Beamsplitter("BS1", spec),
        PhaseShifter("PS", phase),
        Beamsplitter("BS2", final),
        Detector("A"),
        Detector("B"),
    ]
    edges = [
        Edge("in1", "photon", 0, "BS1", 0),
        Edge("X", "BS1", 0, "BS2", 0),
        Edge("Y", "BS1", 1, "PS", 0),
        Edge("Y2", "PS", 0, "BS2", 1),
        Edge("A", "BS2", 1, "A", 0),
        Edge("B", "BS2", 0, "B", 0),
    ]
    if dark_port:
        elements.append(Source("dark"))
        edges.append(Edge("in2", "dark", 0, "BS1", 1))
    return OpticalNetwork(tuple(elements), tuple(edges))

