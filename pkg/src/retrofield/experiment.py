"""Experiment configs, dispatch to the models, and report serialisation.

Config (JSON, ``schema_version`` 1)::

    {
      "schema_version": 1,
      "geometry": "beamsplitter" | "cascade" | "interferometer" | "entangled-pair",
      "model": "simple" | "improved" | "oracle" | "averages",
      "T": [0.7],               # one value, or one per splitter for a cascade
      "angles": [a, b],         # entangled-pair; four values add a CHSH figure
      "I_Z": 0.3,               # background for interferometer averages
      "outcome": "A" | "B",     # restrict averages to one outcome
      "samples": 100000,        # Monte Carlo runs (improved beamsplitter)
      "seed": 7,
      "regression": false       # required for simple + cascade
    }

Reports are plain JSON objects with a fixed key order: ``schema_version``,
``config``, ``provenance``, ``probabilities``, then geometry-specific
sections, then ``oracle`` when the model is not the oracle itself.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from . import averages, improved_model, oracle, simple_model
from .errors import PhysicsDomainError
from .network import cascade, mach_zehnder, single_beamsplitter

__all__ = [
    "SCHEMA_VERSION",
    "SWEEP_COLUMNS",
    "ExperimentConfig",
    "ConfigError",
    "parse_config",
    "run",
    "sweep",
    "parse_sweep_spec",
    "emit",
]

SCHEMA_VERSION = 1
PROBABILITY_TOL = 1e-9
DEFAULT_SEED = 0

SWEEP_COLUMNS = (
    "T",
    "P_A",
    "P_B",
    "weak_IX_A",
    "weak_IY_A",
    "weak_IX_B",
    "weak_IY_B",
    "oracle_P_A",
    "oracle_P_B",
    "C_A",
    "C_B",
    "avg_IX_A",
    "avg_IY_A",
    "avg_IX_B",
    "avg_IY_B",
)

_ALLOWED = {
    "beamsplitter": {"simple", "improved", "oracle", "averages"},
    "cascade": {"simple", "improved", "oracle"},
    "interferometer": {"improved", "oracle", "averages"},
    "entangled-pair": {"simple", "oracle"},
}


class ConfigError(ValueError):
    """Config failed validation; ``errors`` holds ``(field path, message)`` pairs."""

    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = errors
        super().__init__("; ".join(f"{path}: {msg}" for path, msg in errors))


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    schema_version: Literal[1] = SCHEMA_VERSION
    geometry: Literal["beamsplitter", "cascade", "interferometer", "entangled-pair"]
    model: Literal["simple", "improved", "oracle", "averages"]
    T: list[float] = Field(default_factory=list)
    angles: Optional[list[float]] = None
    I_Z: Optional[float] = Field(default=None, ge=0.0)
    outcome: Optional[Literal["A", "B"]] = None
    samples: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)
    regression: bool = False

    @field_validator("T")
    @classmethod
    def _t_range(cls, v: list[float]) -> list[float]:
        for x in v:
            if not (0.0 <= x <= 1.0) or math.isnan(x):
                raise ValueError(f"transmission {x} outside [0, 1]")
        return v

    @model_validator(mode="after")
    def _compatible(self) -> ExperimentConfig:
        g, m = self.geometry, self.model
        if m not in _ALLOWED[g]:
            raise ValueError(f"model {m!r} is not available for geometry {g!r}")
        if g == "cascade" and m == "simple" and not self.regression:
            raise ValueError("simple model on a cascade is a known failure; set regression=true to run it")
        if g == "entangled-pair":
            if self.angles is None or len(self.angles) not in (2, 4):
                raise ValueError("entangled-pair needs angles [a, b] or [a, a', b, b']")
        elif self.angles is not None:
            raise ValueError("angles only apply to entangled-pair")
        if g in ("beamsplitter", "interferometer"):
            if len(self.T) != 1:
                raise ValueError(f"{g} needs exactly one transmission value in T")
            if not 0.0 < self.T[0] < 1.0:
                raise ValueError(f"T must lie strictly inside (0, 1) for {g}")
        if g == "cascade" and not self.T:
            raise ValueError("cascade needs at least one transmission value in T")
        if self.samples is not None and not (g == "beamsplitter" and m == "improved"):
            raise ValueError("samples only apply to the improved model on a beamsplitter")
        if self.outcome is not None and not (g == "interferometer" and m == "averages"):
            raise ValueError("outcome only applies to interferometer averages")
        return self


def _field_path(loc: tuple) -> str:
    parts = [str(p) for p in loc]
    return ".".join(parts) if parts else "<config>"


def parse_config(data: bytes | str | dict) -> ExperimentConfig:
    """Validate a JSON document (bytes, text or already-decoded dict)."""
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ConfigError([("<config>", f"not UTF-8: {exc}")]) from None
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ConfigError([("<config>", f"invalid JSON: {exc}")]) from None
    if not isinstance(data, dict):
        raise ConfigError([("<config>", "top level must be a JSON object")])
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError([(_field_path(e["loc"]), e["msg"]) for e in exc.errors()]) from None


# -- running -------------------------------------------------------------------


def _max_residual(a: dict[str, float], b: dict[str, float]) -> float:
    return max(abs(a[k] - b[k]) for k in a)


def _oracle_section(probs: dict[str, float] | None, oracle_probs: dict[str, float]) -> dict:
    out: dict[str, Any] = {"probabilities": oracle_probs}
    if probs is not None:
        out["max_residual"] = _max_residual(probs, oracle_probs)
    return out


def _interferometer_weak_values(T: float) -> dict:
    net = mach_zehnder(T)
    pre = oracle.forward_state(net, ("X", "Y"))
    out = {}
    for o in ("A", "B"):
        post = oracle.backward_state(net, o, ("X", "Y"))
        try:
            out[o] = {
                "I_X": oracle.weak_value(pre, post, oracle.Projector("X")),
                "I_Y": oracle.weak_value(pre, post, oracle.Projector("Y")),
            }
        except PhysicsDomainError as exc:
            out[o] = {"I_X": None, "I_Y": None, "unavailable": str(exc)}
    return out


def _run_beamsplitter(cfg: ExperimentConfig, rep: dict) -> None:
    T = cfg.T[0]
    born = oracle.born_probabilities(single_beamsplitter(T))
    if cfg.model == "oracle":
        rep["provenance"]["method"] = "analytic"
        rep["probabilities"] = born
        return
    if cfg.model == "simple":
        rep["provenance"]["method"] = "analytic"
        rep["probabilities"] = simple_model.outcome_probabilities_simple(T)
        rep["diagrams"] = [
            {"outcome": d.outcome, "I1": d.I1, "I2": d.I2, "IA": d.IA, "IB": d.IB}
            for d in simple_model.solve_diagrams_beamsplitter(T)
        ]
    elif cfg.model == "improved":
        closed = improved_model.outcome_probabilities_improved(T, "closed")
        quad = improved_model.outcome_probabilities_improved(T, "quadrature")
        rep["provenance"]["method"] = "analytic"
        rep["probabilities"] = closed
        rep["quadrature"] = {"probabilities": quad, "max_residual": _max_residual(closed, quad)}
        if cfg.samples is not None:
            seed = DEFAULT_SEED if cfg.seed is None else cfg.seed
            mc = improved_model.monte_carlo_probabilities(T, cfg.samples, seed)
            rep["provenance"]["method"] = "analytic+monte-carlo"
            rep["samples"] = {
                "n": mc["n"],
                "seed": mc["seed"],
                "probabilities": mc["probabilities"],
                "standard_error": mc["standard_error"],
            }
    else:  # averages
        rep["provenance"]["method"] = "analytic"
        rep["probabilities"] = averages.probabilities_from_correlations(T, "beamsplitter")
        rep["correlations"] = {
            o: averages.required_correlation_beamsplitter(T, o).value for o in ("A", "B")
        }
    rep["oracle"] = _oracle_section(rep["probabilities"], born)


def _run_interferometer(cfg: ExperimentConfig, rep: dict) -> None:
    T = cfg.T[0]
    born = oracle.born_probabilities(mach_zehnder(T))
    weak = _interferometer_weak_values(T)
    rep["provenance"]["method"] = "analytic"
    if cfg.model == "oracle":
        rep["probabilities"] = born
        rep["weak_values"] = weak
        return
    if cfg.model == "improved":
        rep["probabilities"] = improved_model.interferometer_probabilities_improved(T)
    else:
        I_Z = 0.0 if cfg.I_Z is None else cfg.I_Z
        rep["probabilities"] = averages.probabilities_from_correlations(T, "interferometer")
        corr = {}
        for o in ("A", "B"):
            try:
                corr[o] = averages.required_correlation_interferometer(T, o).value
            except PhysicsDomainError:
                corr[o] = None
        rep["correlations"] = corr
        section = {}
        for o in (cfg.outcome,) if cfg.outcome else ("A", "B"):
            try:
                r = averages.verify_weak_value_correspondence(T, o, I_Z)
            except PhysicsDomainError as exc:
                if cfg.outcome:
                    raise
                section[o] = {"unavailable": str(exc)}
                continue
            section[o] = {
                "I_Z": r.I_Z,
                "avg_I_X": r.avg_I_X,
                "avg_I_Y": r.avg_I_Y,
                "weak_I_X": r.weak_I_X,
                "weak_I_Y": r.weak_I_Y,
                "residuals": list(r.residuals),
            }
        rep["averages"] = section
    rep["oracle"] = _oracle_section(rep["probabilities"], born)
    rep["oracle"]["weak_values"] = weak


def _run_cascade(cfg: ExperimentConfig, rep: dict) -> None:
    born = oracle.born_probabilities(cascade(cfg.T))
    rep["provenance"]["method"] = "analytic"
    if cfg.model == "oracle":
        rep["probabilities"] = born
        return
    if cfg.model == "improved":
        rep["probabilities"] = improved_model.cascade_probabilities(cfg.T)
    else:
        rep["provenance"]["regression"] = "known failure: pairing rule has no cascade solutions"
        rep["probabilities"] = simple_model.cascade_probabilities_simple(cfg.T)
        rep["pairing_diagrams"] = len(simple_model.cascade_pairing_diagrams(cfg.T))
    rep["oracle"] = _oracle_section(rep["probabilities"], born)


def _run_entangled(cfg: ExperimentConfig, rep: dict) -> None:
    angles = cfg.angles
    a, b = (angles[0], angles[1]) if len(angles) == 2 else (angles[0], angles[2])
    quantum = oracle.bell_joint_probabilities(a, b)
    rep["provenance"]["method"] = "analytic"
    if cfg.model == "oracle":
        rep["probabilities"] = quantum
    else:
        rep["probabilities"] = simple_model.entangled_joint_probabilities(a, b)
    t = rep["probabilities"]
    rep["correlation"] = t["++"] + t["--"] - t["+-"] - t["-+"]
    if len(angles) == 4:
        if cfg.model == "oracle":
            rep["chsh"] = oracle.bell_chsh(*angles)
        else:
            rep["chsh"] = simple_model.chsh_statistic(*angles)
    if cfg.model != "oracle":
        rep["oracle"] = _oracle_section(rep["probabilities"], quantum)


_RUNNERS = {
    "beamsplitter": _run_beamsplitter,
    "interferometer": _run_interferometer,
    "cascade": _run_cascade,
    "entangled-pair": _run_entangled,
}


def run(cfg: ExperimentConfig) -> dict:
    """Run one experiment and return its report."""
    rep: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.model_dump(mode="json"),
        "provenance": {"model": cfg.model},
        "probabilities": None,
    }
    _RUNNERS[cfg.geometry](cfg, rep)
    total = math.fsum(rep["probabilities"].values())
    if abs(total - 1.0) > PROBABILITY_TOL:
        raise AssertionError(f"probabilities sum to {total}")
    return rep


# -- sweeps --------------------------------------------------------------------


def parse_sweep_spec(text: str) -> tuple[str, list[float]]:
    """``"T=0.05:0.95:0.05"`` -> ``("T", [0.05, 0.1, ..., 0.95])``."""
    try:
        name, rng = text.split("=", 1)
        start, stop, step = (float(x) for x in rng.split(":"))
    except ValueError:
        raise ConfigError([("--sweep", f"expected NAME=START:STOP:STEP, got {text!r}")]) from None
    name = name.strip()
    if name != "T":
        raise ConfigError([("--sweep", f"only T can be swept, got {name!r}")])
    if not step > 0:
        raise ConfigError([("--sweep", "step must be positive")])
    if stop < start:
        return name, []
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return name, [round(start + i * step, 12) for i in range(count)]


def _sweep_row(rep: dict) -> dict:
    row: dict[str, Any] = dict.fromkeys(SWEEP_COLUMNS)
    row["T"] = rep["config"]["T"][0]
    row["P_A"] = rep["probabilities"]["A"]
    row["P_B"] = rep["probabilities"]["B"]
    orc = rep.get("oracle", {})
    oprobs = orc.get("probabilities", rep["probabilities"])
    row["oracle_P_A"], row["oracle_P_B"] = oprobs["A"], oprobs["B"]
    weak = rep.get("weak_values") or orc.get("weak_values") or {}
    for o in ("A", "B"):
        if o in weak:
            row[f"weak_IX_{o}"] = weak[o]["I_X"]
            row[f"weak_IY_{o}"] = weak[o]["I_Y"]
        corr = rep.get("correlations", {})
        row[f"C_{o}"] = corr.get(o)
        avg = rep.get("averages", {}).get(o, {})
        row[f"avg_IX_{o}"] = avg.get("avg_I_X")
        row[f"avg_IY_{o}"] = avg.get("avg_I_Y")
    return row


def sweep(cfg: ExperimentConfig, values: list[float]) -> dict:
    """Run ``cfg`` once per transmission value; only single-splitter geometries."""
    if cfg.geometry not in ("beamsplitter", "interferometer"):
        raise ConfigError([("geometry", "sweeps support beamsplitter and interferometer only")])
    base = cfg.model_dump()
    rows = []
    for t in values:
        rows.append(_sweep_row(run(parse_config({**base, "T": [t]}))))
    return {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.model_dump(mode="json"),
        "sweep": {"parameter": "T", "values": values},
        "columns": list(SWEEP_COLUMNS),
        "rows": rows,
    }


# -- output --------------------------------------------------------------------


def _flatten(prefix: str, obj: Any, out: list[tuple[str, Any]]) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}.{i}", v, out)
    elif isinstance(obj, list):
        out.append((prefix, " ".join(_cell(x) for x in obj)))
    else:
        out.append((prefix, obj))


def _cell(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def emit(report: dict, fmt: str = "json") -> bytes:
    """Serialise a report (or sweep) as JSON or CSV.

    Sweeps become one CSV row per value under a fixed ``SWEEP_COLUMNS``
    header; single reports become ``key,value`` rows with dotted keys.
    """
    if fmt == "json":
        return (json.dumps(report, indent=2, allow_nan=False) + "\n").encode("utf-8")
    if fmt != "csv":
        raise ValueError(f"unsupported format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if "rows" in report:
        w.writerow(SWEEP_COLUMNS)
        for row in report["rows"]:
            w.writerow([_cell(row[c]) for c in SWEEP_COLUMNS])
    else:
        w.writerow(("key", "value"))
        flat: list[tuple[str, Any]] = []
        _flatten("", report, flat)
        for k, v in flat:
            w.writerow((k, _cell(v)))
    return buf.getvalue().encode("utf-8")
