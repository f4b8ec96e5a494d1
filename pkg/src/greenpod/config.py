"""Configuration: bundled defaults, file overrides, wire-format parsing.

One JSON document drives the whole package (cluster catalog, workload
classes, power-model coefficients, weight schemes, simulation knobs). The
simulator, the HTTP service, and the CLI all share the same schema.
Discovery order: explicit path > GREENPOD_CONFIG > bundled defaults; an
override file only needs the keys it changes.
"""

import json
import os
from dataclasses import dataclass
from importlib import resources

from .energy import PowerCoefficients, PowerParams
from .errors import ConfigError
from .model import NodeProfile, WeightScheme, WorkloadSpec, resolve_scheme_name

ENV_CONFIG = "GREENPOD_CONFIG"
ENV_SCHEME = "GREENPOD_SCHEME"
ENV_PORT = "GREENPOD_PORT"


@dataclass(frozen=True)
class WorkloadClassSpec:
    """Per-class request defaults plus the non-CPU utilization profile."""

    cpu_request: float
    memory_request_gb: float
    work_units: float
    u_mem: float
    u_disk: float
    u_net: float


@dataclass(frozen=True)
class SimDefaults:
    arrival_gap_s: float
    noise_pct: float
    adaptive_weights: bool
    adaptive_threshold: float


class AppConfig:
    """Validated view over the merged configuration document."""

    def __init__(self, doc):
        self.doc = doc
        try:
            self.categories = {
                name: (float(spec["speed_factor"]), float(spec["power_scale"]))
                for name, spec in doc["categories"].items()
            }
            self.classes = {
                name: WorkloadClassSpec(
                    cpu_request=float(spec["cpu_request"]),
                    memory_request_gb=float(spec["memory_request_gb"]),
                    work_units=float(spec["work_units"]),
                    u_mem=float(spec["power_params"]["u_mem"]),
                    u_disk=float(spec["power_params"]["u_disk"]),
                    u_net=float(spec["power_params"]["u_net"]),
                )
                for name, spec in doc["workload_classes"].items()
            }
            pm = doc["power_model"]
            self.coefficients = PowerCoefficients(
                idle_w=float(pm["idle_w"]),
                cpu_w_per_pct=float(pm["cpu_w_per_pct"]),
                mem_w_per_access=float(pm["mem_w_per_access"]),
                disk_w_per_op=float(pm["disk_w_per_op"]),
                net_w_per_op=float(pm["net_w_per_op"]),
            )
            self.pue = float(pm["pue"])
            self.schemes = {
                name: WeightScheme(name=name, weights={k: float(v) for k, v in w.items()})
                for name, w in doc["schemes"].items()
            }
            sim = doc["simulation"]
            self.sim = SimDefaults(
                arrival_gap_s=float(sim["arrival_gap_s"]),
                noise_pct=float(sim["noise_pct"]),
                adaptive_weights=bool(sim["adaptive_weights"]),
                adaptive_threshold=float(sim["adaptive_threshold"]),
            )
            self._node_docs = list(doc["cluster"]["nodes"])
        except KeyError as exc:
            raise ConfigError(f"configuration missing key {exc}") from exc

    def fresh_nodes(self):
        """New NodeProfile instances for the configured cluster (zero state)."""
        return [self.node_from_doc(d) for d in self._node_docs]

    def node_from_doc(self, doc):
        """Parse one node document; category fills speed/power when omitted."""
        try:
            category = doc.get("category", "Default")
            cat_speed, cat_power = self.categories.get(category, (1.0, 1.0))
            return NodeProfile(
                name=doc["name"],
                category=category,
                vcpus=float(doc["vcpus"]),
                memory_gb=float(doc["memory_gb"]),
                allocated_cpu=float(doc.get("allocated_cpu", 0.0)),
                allocated_memory_gb=float(doc.get("allocated_memory_gb", 0.0)),
                speed_factor=float(doc.get("speed_factor", cat_speed)),
                power_scale=float(doc.get("power_scale", cat_power)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad node document: {exc}") from exc

    def pod_from_doc(self, doc):
        """Parse one pod document; class defaults fill omitted requests."""
        try:
            cls_name = doc.get("workload_class", "Medium")
            if cls_name not in self.classes:
                raise ConfigError(f"unknown workload class {cls_name!r}")
            cls = self.classes[cls_name]
            return WorkloadSpec(
                name=doc["name"],
                workload_class=cls_name,
                cpu_request=float(doc.get("cpu_request", cls.cpu_request)),
                memory_request_gb=float(doc.get("memory_request_gb", cls.memory_request_gb)),
                work_units=float(doc.get("work_units", cls.work_units)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad pod document: {exc}") from exc

    def make_workload(self, name, class_name):
        return self.pod_from_doc({"name": name, "workload_class": class_name})

    def class_power_params(self, class_name):
        if class_name not in self.classes:
            raise ConfigError(f"unknown workload class {class_name!r}")
        cls = self.classes[class_name]
        return PowerParams(u_cpu=0.0, u_mem=cls.u_mem, u_disk=cls.u_disk, u_net=cls.u_net)

    def scheme(self, name):
        return self.schemes[resolve_scheme_name(name)]


def _merge(base, override):
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def _bundled_doc():
    with resources.files("greenpod.data").joinpath("defaults.json").open() as fh:
        return json.load(fh)


def load_config(path=None):
    """Load configuration, merging an override file over the defaults."""
    doc = _bundled_doc()
    path = path or os.environ.get(ENV_CONFIG)
    if path:
        try:
            with open(path) as fh:
                override = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
        if not isinstance(override, dict):
            raise ConfigError(f"config {path!r} must be a JSON object")
        doc = _merge(doc, override)
    return AppConfig(doc)


_default = None


def default_config():
    """Bundled defaults, loaded once (ignores GREENPOD_CONFIG)."""
    global _default
    if _default is None:
        _default = AppConfig(_bundled_doc())
    return _default
