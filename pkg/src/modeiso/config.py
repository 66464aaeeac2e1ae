"""Run configuration: a strict YAML schema binding the pipeline together.

Unknown keys are rejected with the full field path so typos never pass
silently.  Kinetics parameters default to the built-in model defaults.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, fields
from typing import Any

import yaml

from . import mesh as meshmod
from .kinetics import KineticsError, KineticsModel, make_model
from .mesh import DEFORMATION_PRESETS, Mesh


class ConfigError(ValueError):
    """Configuration parse or validation failure; message carries the
    offending field path."""


_GENERATORS = {
    "interval": (meshmod.generate_interval, ("length", "n_cells")),
    "rectangle": (meshmod.generate_rectangle, ("lx", "ly", "nx", "ny")),
    "disk": (meshmod.generate_disk, ("radius", "refinement")),
    "icosphere": (meshmod.generate_icosphere, ("refinement",)),
    "ball": (meshmod.generate_ball, ("refinement",)),
    "tube": (meshmod.generate_tube,
             ("length", "radius", "closed_ends", "refinement")),
}


def _require_mapping(node: Any, path: str) -> dict:
    if node is None:
        return {}
    if not isinstance(node, dict):
        raise ConfigError(f"{path}: expected a mapping, got {type(node).__name__}")
    return node


def _check_keys(node: dict, allowed: set[str], path: str) -> None:
    unknown = set(node) - allowed
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}; "
                          f"allowed: {sorted(allowed)}")


@dataclass(frozen=True)
class MeshSpec:
    generator: str | None = None
    params: dict = field(default_factory=dict)
    off_path: str | None = None
    deformation: str | None = None

    @classmethod
    def parse(cls, node: Any) -> "MeshSpec":
        node = _require_mapping(node, "mesh")
        _check_keys(node, {"generator", "params", "off_path", "deformation"},
                    "mesh")
        gen = node.get("generator")
        off = node.get("off_path")
        if (gen is None) == (off is None):
            raise ConfigError("mesh: exactly one of 'generator' and "
                              "'off_path' is required")
        if gen is not None and gen not in _GENERATORS:
            raise ConfigError(f"mesh.generator: unknown generator {gen!r}; "
                              f"choose from {sorted(_GENERATORS)}")
        params = _require_mapping(node.get("params"), "mesh.params")
        if gen is not None:
            _check_keys(params, set(_GENERATORS[gen][1]), "mesh.params")
        deformation = node.get("deformation")
        if deformation is not None and deformation not in DEFORMATION_PRESETS:
            raise ConfigError(
                f"mesh.deformation: unknown preset {deformation!r}; "
                f"choose from {sorted(DEFORMATION_PRESETS)}")
        return cls(generator=gen, params=dict(params), off_path=off,
                   deformation=deformation)

    def build(self) -> Mesh:
        from .meshio import read_off
        if self.off_path is not None:
            mesh = read_off(self.off_path)
        else:
            builder, _ = _GENERATORS[self.generator]
            try:
                mesh = builder(**self.params)
            except (TypeError, meshmod.MeshError) as exc:
                raise ConfigError(f"mesh.params: {exc}")
        if self.deformation is not None:
            mesh = meshmod.map_vertices(
                mesh, DEFORMATION_PRESETS[self.deformation]())
        return mesh


@dataclass(frozen=True)
class KineticsSpec:
    model: str = "schnakenberg"
    params: dict = field(default_factory=dict)

    @classmethod
    def parse(cls, node: Any) -> "KineticsSpec":
        node = _require_mapping(node, "kinetics")
        _check_keys(node, {"model", "params"}, "kinetics")
        return cls(model=node.get("model", "schnakenberg"),
                   params=dict(_require_mapping(node.get("params"),
                                                "kinetics.params")))

    def build(self) -> KineticsModel:
        try:
            return make_model(self.model, **self.params)
        except (KineticsError, TypeError) as exc:
            raise ConfigError(f"kinetics: {exc}")


def _parse_scalar_section(node: Any, path: str, defaults: dict,
                          positives: set[str] = frozenset(),
                          ints: set[str] = frozenset()) -> dict:
    node = _require_mapping(node, path)
    _check_keys(node, set(defaults), path)
    out = dict(defaults)
    out.update(node)
    for key in ints:
        if out[key] is not None and not isinstance(out[key], int):
            raise ConfigError(f"{path}.{key}: expected an integer")
    for key in positives:
        value = out[key]
        if value is not None and not (isinstance(value, (int, float))
                                      and value > 0):
            raise ConfigError(f"{path}.{key}: expected a positive number, "
                              f"got {value!r}")
    return out


@dataclass(frozen=True)
class RunConfig:
    mesh: MeshSpec
    kinetics: KineticsSpec
    eigensolver: dict
    isolation: dict
    simulation: dict
    match: dict
    output_dir: str

    @classmethod
    def parse(cls, data: Any) -> "RunConfig":
        data = _require_mapping(data, "<root>")
        _check_keys(data, {"mesh", "kinetics", "eigensolver", "isolation",
                           "simulation", "match", "output_dir"}, "<root>")
        eig = _parse_scalar_section(
            data.get("eigensolver"), "eigensolver",
            {"count": 12, "tol": 1e-9, "seed": 0},
            positives={"count", "tol"}, ints={"count", "seed"})
        iso = _parse_scalar_section(
            data.get("isolation"), "isolation",
            {"target_index": None, "gamma0": 10.0, "eps0": None,
             "max_iters": 500, "delta": 1e-3, "d": None, "gamma": None},
            positives={"gamma0", "max_iters", "delta", "d", "gamma"},
            ints={"max_iters"})
        if iso["target_index"] is not None \
                and not isinstance(iso["target_index"], int):
            raise ConfigError("isolation.target_index: expected an integer")
        if iso["target_index"] is None and (iso["d"] is None
                                            or iso["gamma"] is None):
            raise ConfigError("isolation: give either target_index or an "
                              "explicit (d, gamma) pair")
        sim = _parse_scalar_section(
            data.get("simulation"), "simulation",
            {"tau": 1e-3, "stop_tol": 1e-4, "max_time": 100.0, "seed": 1,
             "amplitude": 0.01, "snapshot_stride": 100},
            positives={"tau", "stop_tol", "max_time", "amplitude",
                       "snapshot_stride"},
            ints={"seed", "snapshot_stride"})
        match = _parse_scalar_section(
            data.get("match"), "match",
            {"threshold": 0.8, "cluster_gap": 1e-3},
            positives={"threshold", "cluster_gap"})
        output_dir = data.get("output_dir", "out")
        if not isinstance(output_dir, str):
            raise ConfigError("output_dir: expected a string")
        return cls(mesh=MeshSpec.parse(data.get("mesh")),
                   kinetics=KineticsSpec.parse(data.get("kinetics")),
                   eigensolver=eig, isolation=iso, simulation=sim,
                   match=match, output_dir=output_dir)

    def digest(self) -> str:
        """Stable hash of the configuration for output provenance."""
        payload = {
            "mesh": {"generator": self.mesh.generator,
                     "params": self.mesh.params,
                     "off_path": self.mesh.off_path,
                     "deformation": self.mesh.deformation},
            "kinetics": {"model": self.kinetics.model,
                         "params": self.kinetics.params},
            "eigensolver": self.eigensolver,
            "isolation": self.isolation,
            "simulation": self.simulation,
            "match": self.match,
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: YAML parse error: {exc}")
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}")
    return RunConfig.parse(data)
