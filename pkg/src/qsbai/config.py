"""Run configuration files.

A config is a YAML mapping::

    mode: sweep              # sweep | verify | sample
    horizon: 30              # sweep: last step; sample: measurement step
    seed: 0                  # sample mode
    family: complete         # verify mode; inferred from graph.kind if absent
    graph:
      kind: complete_loops   # complete_loops | complete_bipartite | edge_list
      n: 30                  # complete_loops, edge_list
      n1: 30                 # complete_bipartite
      n2: 10
      edges: [[0, 1], ...]   # edge_list
    environment:
      num_env_states: 2
      eta: [[0.9, 0.1], ...] # one row per arm
      winning: [[0, 0], ...] # (arm, state) pairs
    output:
      path: out.csv          # omitted or "-" writes to stdout
      format: csv            # csv | json

Structural problems (bad YAML, missing keys, wrong types) raise
:class:`ConfigParseError`; inconsistent values raise
:class:`ConfigValidationError`.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import yaml

from .environment import EnvironmentModel
from .errors import ConfigParseError, ConfigValidationError, QSBAIError
from .graph import SymmetricDigraph, build_complete_bipartite, build_complete_with_loops, build_from_edges

__all__ = [
    "MODES",
    "GRAPH_KINDS",
    "FORMATS",
    "GraphSpec",
    "EnvironmentSpec",
    "OutputSpec",
    "RunConfig",
    "parse_config",
    "load_config",
    "dump_config",
]

MODES = ("sweep", "verify", "sample")
GRAPH_KINDS = ("complete_loops", "complete_bipartite", "edge_list")
FORMATS = ("csv", "json")
_KIND_FAMILY = {"complete_loops": "complete", "complete_bipartite": "complete_bipartite"}


def _require(block: dict, key: str, kind: type | tuple, where: str) -> Any:
    if key not in block:
        raise ConfigParseError(f"{where}: missing key {key!r}")
    value = block[key]
    if isinstance(value, bool) or not isinstance(value, kind):
        raise ConfigParseError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}, got {type(value).__name__}")
    return value


def _mapping(value: Any, where: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigParseError(f"{where}: expected a mapping")
    return value


def _int_pairs(value: Any, where: str) -> list[list[int]]:
    if not isinstance(value, list):
        raise ConfigParseError(f"{where}: expected a list of pairs")
    pairs = []
    for item in value:
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in item)):
            raise ConfigParseError(f"{where}: {item!r} is not an integer pair")
        pairs.append([int(item[0]), int(item[1])])
    return pairs


@dataclass(frozen=True)
class GraphSpec:
    kind: str
    n: int | None = None
    n1: int | None = None
    n2: int | None = None
    edges: tuple[tuple[int, int], ...] | None = None

    @classmethod
    def from_dict(cls, block: Any) -> "GraphSpec":
        block = _mapping(block, "graph")
        kind = _require(block, "kind", str, "graph")
        if kind == "complete_loops":
            return cls(kind, n=_require(block, "n", int, "graph"))
        if kind == "complete_bipartite":
            return cls(kind, n1=_require(block, "n1", int, "graph"), n2=_require(block, "n2", int, "graph"))
        if kind == "edge_list":
            edges = _int_pairs(_require(block, "edges", list, "graph"), "graph.edges")
            return cls(kind, n=_require(block, "n", int, "graph"), edges=tuple(tuple(e) for e in edges))
        raise ConfigParseError(f"graph.kind: {kind!r} is not one of {GRAPH_KINDS}")

    def to_dict(self) -> dict:
        if self.kind == "complete_loops":
            return {"kind": self.kind, "n": self.n}
        if self.kind == "complete_bipartite":
            return {"kind": self.kind, "n1": self.n1, "n2": self.n2}
        return {"kind": self.kind, "n": self.n, "edges": [list(e) for e in self.edges]}

    def build(self) -> SymmetricDigraph:
        if self.kind == "complete_loops":
            return build_complete_with_loops(self.n)
        if self.kind == "complete_bipartite":
            return build_complete_bipartite(self.n1, self.n2)
        return build_from_edges(self.n, self.edges)


@dataclass(frozen=True)
class EnvironmentSpec:
    num_env_states: int
    eta: tuple[tuple[float, ...], ...]
    winning: tuple[tuple[int, int], ...]

    @classmethod
    def from_dict(cls, block: Any) -> "EnvironmentSpec":
        block = _mapping(block, "environment")
        num_states = _require(block, "num_env_states", int, "environment")
        rows = _require(block, "eta", list, "environment")
        eta = []
        for row in rows:
            if not isinstance(row, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in row):
                raise ConfigParseError(f"environment.eta: row {row!r} is not a list of numbers")
            eta.append(tuple(float(x) for x in row))
        winning = _int_pairs(block.get("winning", []), "environment.winning")
        return cls(num_states, tuple(eta), tuple(tuple(p) for p in winning))

    def to_dict(self) -> dict:
        return {
            "num_env_states": self.num_env_states,
            "eta": [list(row) for row in self.eta],
            "winning": [list(p) for p in self.winning],
        }

    def build(self) -> EnvironmentModel:
        if self.num_env_states < 1:
            raise ConfigValidationError("environment.num_env_states must be at least 1")
        if not self.eta:
            raise ConfigValidationError("environment.eta has no rows")
        bad = [i for i, row in enumerate(self.eta) if len(row) != self.num_env_states]
        if bad:
            raise ConfigValidationError(f"environment.eta rows {bad} do not have num_env_states={self.num_env_states} entries")
        return EnvironmentModel(self.eta, frozenset(self.winning))


@dataclass(frozen=True)
class OutputSpec:
    path: str | None = None
    format: str = "csv"

    @classmethod
    def from_dict(cls, block: Any, mode: str) -> "OutputSpec":
        default_format = "csv" if mode == "sweep" else "json"
        if block is None:
            return cls(None, default_format)
        block = _mapping(block, "output")
        path = block.get("path")
        if path is not None and not isinstance(path, str):
            raise ConfigParseError("output.path: expected a string")
        fmt = block.get("format", default_format)
        if fmt not in FORMATS:
            raise ConfigParseError(f"output.format: {fmt!r} is not one of {FORMATS}")
        return cls(path, fmt)

    def to_dict(self) -> dict:
        record = {"format": self.format}
        if self.path is not None:
            record = {"path": self.path, **record}
        return record


@dataclass(frozen=True)
class RunConfig:
    graph: GraphSpec
    environment: EnvironmentSpec
    mode: str = "sweep"
    horizon: int | None = None
    seed: int | None = None
    family: str | None = None
    output: OutputSpec = field(default_factory=OutputSpec)

    def to_dict(self) -> dict:
        record: dict[str, Any] = {"mode": self.mode}
        if self.horizon is not None:
            record["horizon"] = self.horizon
        if self.seed is not None:
            record["seed"] = self.seed
        if self.family is not None:
            record["family"] = self.family
        record["graph"] = self.graph.to_dict()
        record["environment"] = self.environment.to_dict()
        record["output"] = self.output.to_dict()
        return record

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """Replace top-level values; ``None`` leaves a field unchanged."""
        out = self.output
        if overrides.get("out") is not None:
            out = replace(out, path=overrides["out"])
        if overrides.get("format") is not None:
            out = replace(out, format=overrides["format"])
        changes = {k: v for k, v in overrides.items() if k in ("mode", "horizon", "seed") and v is not None}
        return replace(self, output=out, **changes)

    def resolved_family(self) -> str:
        family = self.family or _KIND_FAMILY.get(self.graph.kind)
        if family is None:
            raise ConfigValidationError("verify mode on an edge_list graph needs an explicit 'family'")
        return family

    def validate(self) -> tuple[SymmetricDigraph, EnvironmentModel]:
        """Check mode requirements and dimensions; return the built graph and environment."""
        if self.mode not in MODES:
            raise ConfigValidationError(f"mode {self.mode!r} is not one of {MODES}")
        if self.output.format not in FORMATS:
            raise ConfigValidationError(f"output format {self.output.format!r} is not one of {FORMATS}")
        if self.mode in ("sweep", "sample"):
            if self.horizon is None:
                raise ConfigValidationError(f"{self.mode} mode needs 'horizon'")
            if self.horizon < 0:
                raise ConfigValidationError("horizon must be non-negative")
        if self.mode == "sample" and self.seed is None:
            raise ConfigValidationError("sample mode needs 'seed'")
        if self.mode == "verify":
            family = self.resolved_family()
            if family not in ("complete", "complete_bipartite"):
                raise ConfigValidationError(f"unknown family {family!r}")
        try:
            g = self.graph.build()
            env = self.environment.build()
        except ConfigValidationError:
            raise
        except QSBAIError as exc:
            raise ConfigValidationError(str(exc)) from exc
        if env.num_arms != g.num_vertices:
            raise ConfigValidationError(f"environment has {env.num_arms} eta rows but the graph has {g.num_vertices} vertices")
        return g, env


def parse_config(data: Any) -> RunConfig:
    data = _mapping(data, "config")
    mode = data.get("mode", "sweep")
    if not isinstance(mode, str):
        raise ConfigParseError("mode: expected a string")
    known = {"mode", "horizon", "seed", "family", "graph", "environment", "output"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigParseError(f"unknown top-level keys {unknown}")
    optional_ints = {}
    for key in ("horizon", "seed"):
        value = data.get(key)
        if value is not None and (isinstance(value, bool) or not isinstance(value, int)):
            raise ConfigParseError(f"{key}: expected an integer")
        optional_ints[key] = value
    family = data.get("family")
    if family is not None and not isinstance(family, str):
        raise ConfigParseError("family: expected a string")
    return RunConfig(
        graph=GraphSpec.from_dict(data.get("graph")),
        environment=EnvironmentSpec.from_dict(data.get("environment")),
        mode=mode,
        horizon=optional_ints["horizon"],
        seed=optional_ints["seed"],
        family=family,
        output=OutputSpec.from_dict(data.get("output"), mode),
    )


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigParseError(f"cannot read {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigParseError(f"{path}: {exc}") from exc
    return parse_config(data)


def dump_config(config: RunConfig) -> str:
    return yaml.safe_dump(config.to_dict(), sort_keys=False, default_flow_style=None)
