"""Group configuration files: loading, validation and the objects they describe."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .admissible import ParahoricSpec
from .iwahori import FrobSpec
from .rootdata import Node, RootDatum, RootDatumError, build_root_datum


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending position."""


def load_schema(name: str) -> dict:
    return json.loads(resources.files("ekorlab.schema").joinpath(name).read_text())


def _where(path) -> str:
    out = "config"
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _node(datum: RootDatum, raw, where: str) -> Node:
    if isinstance(raw, int):
        if len(datum.components) != 1:
            raise ConfigError(f"{where}: use [component, label] for multi-component types")
        node = (0, raw)
    else:
        node = (int(raw[0]), int(raw[1]))
    if node not in datum.affine_nodes:
        raise ConfigError(f"{where}: no such Dynkin node {raw!r}")
    return node


@dataclass
class RunConfig:
    """A validated configuration together with the raw mapping it came from."""

    raw: dict
    path: str | None = None
    overrides: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, raw: dict, path: str | None = None) -> RunConfig:
        validator = jsonschema.Draft202012Validator(load_schema("config-v1.json"))
        errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
        if errors:
            e = errors[0]
            raise ConfigError(f"{_where(e.absolute_path)}: {e.message}")
        cfg = cls(dict(raw), path)
        # force construction so errors surface at load time
        cfg.datum
        cfg.sigma
        cfg.mu
        cfg.K
        return cfg

    @classmethod
    def load(cls, path: str | Path) -> RunConfig:
        try:
            raw = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
        except OSError as exc:
            raise ConfigError(f"{path}: {exc.strerror}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be an object")
        return cls.from_dict(raw, str(path))

    def to_dict(self) -> dict:
        return json.loads(json.dumps(self.raw))

    @property
    def name(self) -> str:
        if "name" in self.raw:
            return self.raw["name"]
        return Path(self.path).stem if self.path else "config"

    @cached_property
    def datum(self) -> RootDatum:
        try:
            return build_root_datum(self.raw)
        except RootDatumError as exc:
            raise ConfigError(f"config.type/lattice: {exc}") from exc

    @cached_property
    def sigma(self) -> FrobSpec:
        d = self.datum
        spec = self.raw.get("sigma", {})
        diagram = {}
        images = spec.get("diagram")
        if images is not None:
            if len(images) != d.rank:
                raise ConfigError(f"config.sigma.diagram: expected {d.rank} entries, got {len(images)}")
            for k, img in enumerate(images):
                node = _node(d, img, f"config.sigma.diagram[{k}]")
                if node[1] == 0:
                    raise ConfigError(f"config.sigma.diagram[{k}]: images must be finite nodes")
                diagram[d.nodes[k]] = node
        omega = spec.get("omega")
        if omega is not None:
            if len(omega) != d.dim:
                raise ConfigError(f"config.sigma.omega: expected a vector of length {d.dim}")
            if not d.in_lattice(omega):
                raise ConfigError("config.sigma.omega: not a lattice vector")
        try:
            return FrobSpec(d, diagram, omega)
        except RootDatumError as exc:
            raise ConfigError(f"config.sigma: {exc}") from exc

    @cached_property
    def mu(self) -> tuple[int, ...]:
        d = self.datum
        mu = self.raw.get("mu", [0] * d.dim)
        if len(mu) != d.dim:
            raise ConfigError(f"config.mu: expected a vector of length {d.dim}, got {len(mu)}")
        if not d.in_lattice(mu):
            raise ConfigError("config.mu: not a lattice vector")
        return tuple(mu)

    @cached_property
    def K(self) -> ParahoricSpec:
        d = self.datum
        raw = self.overrides.get("K", self.raw.get("K", []))
        nodes = [_node(d, n, f"config.K[{k}]") for k, n in enumerate(raw)]
        try:
            return ParahoricSpec(d, frozenset(nodes))
        except RootDatumError as exc:
            raise ConfigError(f"config.K: {exc}") from exc

    def with_K(self, nodes: list) -> RunConfig:
        cfg = RunConfig(self.raw, self.path, {"K": nodes})
        cfg.K
        return cfg


def parse_K_option(text: str) -> list:
    """Parse a --K value such as "1,3", "0_1,1_2" or "" (Iwahori)."""
    text = text.strip()
    if not text or text.lower() == "iwahori":
        return []
    out: list[Any] = []
    for part in text.split(","):
        part = part.strip()
        if "_" in part:
            c, i = part.split("_")
            out.append([int(c), int(i)])
        else:
            out.append(int(part))
    return out
