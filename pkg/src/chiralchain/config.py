"""Job configuration: a TOML document with fixed sections, validated against a schema.

Grammar (every section and key is optional unless noted)::

    kind = "phase-diagram"      # must match the job kind given on the command line
    name = "fig1"               # stem of the output files

    [model]                     # gamma, D, h, alpha, n, kac_normalize
    [post]                      # post-quench overrides of [model] (quench jobs)
    [[sweep]]                   # param, min, max, steps; grid = product of axes
    [[points]]                  # explicit parameter sets; may hold a [points.post] table
    [fit]                       # r_window, l_range, t_window
    [phase] [correlations] [entropy] [quench] [scaling]   # per-job options
    [run]                       # workers
    [output]                    # dir, plot

Sweep parameters name a model key, or ``post.<key>`` for the post-quench
Hamiltonian.  ``points`` and ``sweep`` are mutually exclusive.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

import tomli
import tomli_w

from .core import ModelParams

JOB_KINDS = ("phase-diagram", "correlations", "entropy", "quench", "scaling")

MODEL_KEYS = {
    # config key -> (ModelParams field, type, default)
    "gamma": ("gamma", float, 1.0),
    "D": ("d", float, 0.0),
    "h": ("h", float, 1.0),
    "alpha": ("alpha", float, 2.0),
    "n": ("n", int, 512),
    "kac_normalize": ("kac_normalize", bool, True),
}

PHASE_OBSERVABLES = ("gap", "chiral_order", "fm_order", "mz", "ground_energy")
QUENCH_OBSERVABLES = ("relaxation", "steady", "entropy")

# section -> key -> (type, default); None default means "derived at run time"
OPTION_SCHEMA = {
    "fit": {
        "r_window": (list, None),
        "l_range": (list, None),
        "t_window": (list, [100.0, 1000.0]),
    },
    "phase": {"observables": (list, ["gap", "chiral_order"])},
    "correlations": {"rmax": (int, None), "profile": (bool, True)},
    "entropy": {"profile": (bool, False)},
    "quench": {
        "observable": (str, "relaxation"),
        "m": (int, 1),
        "site_n": (int, 2),
        "method": (str, "direct"),
        "t_start": (float, 1.0),
        "t_stop": (float, 1000.0),
        "t_num": (int, 400),
        "spacing": (str, "log"),
        "l": (int, 80),
        "rmax": (int, None),
    },
    "scaling": {
        "sizes": (list, [64, 128, 256, 512]),
        "h_min": (float, 0.5),
        "h_max": (float, 1.5),
        "h_step": (float, 0.01),
        "reference": (float, 1.0),
    },
    "run": {"workers": (int, 1)},
    "output": {"dir": (str, "."), "plot": (bool, False)},
}

SWEEP_KEYS = {"param": str, "min": float, "max": float, "steps": int}
TOP_KEYS = {"kind", "name", "model", "post", "sweep", "points"} | set(OPTION_SCHEMA)


class ConfigError(ValueError):
    """Invalid configuration; ``key`` names the offending entry when known."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


def _coerce(value, kind, key):
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{key} must be a boolean, got {value!r}", key)
        return value
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ConfigError(f"{key} must be an integer, got {value!r}", key)
        return int(value)
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key} must be a number, got {value!r}", key)
        return float(value)
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"{key} must be a string, got {value!r}", key)
        return value
    if kind is list:
        if not isinstance(value, list):
            raise ConfigError(f"{key} must be an array, got {value!r}", key)
        return list(value)
    raise AssertionError(kind)


def _check_table(table, where):
    if not isinstance(table, dict):
        raise ConfigError(f"{where} must be a table", where)
    return table


def _model_overrides(table: dict, where: str, allow_post: bool = False) -> dict:
    out = {}
    for key, value in _check_table(table, where).items():
        if allow_post and key == "post":
            out["post"] = _model_overrides(value, f"{where}.post")
            continue
        if key not in MODEL_KEYS:
            raise ConfigError(f"unknown key {where}.{key!r}", f"{where}.{key}")
        out[key] = _coerce(value, MODEL_KEYS[key][1], f"{where}.{key}")
    return out


def build_params(values: dict) -> ModelParams:
    kwargs = {}
    for key, (fname, _, default) in MODEL_KEYS.items():
        kwargs[fname] = values.get(key, default)
    try:
        return ModelParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"invalid model parameters: {exc}") from exc


@dataclass(frozen=True)
class SweepAxis:
    param: str
    min: float
    max: float
    steps: int

    def values(self) -> list:
        import numpy as np

        vals = np.linspace(self.min, self.max, self.steps)
        if MODEL_KEYS[self.param.removeprefix("post.")][1] is int:
            return [int(round(v)) for v in vals]
        return [float(v) for v in vals]


@dataclass(frozen=True)
class JobConfig:
    kind: str
    name: str
    model: dict
    post: dict = field(default_factory=dict)
    sweep: tuple = ()
    points: tuple = ()
    options: dict = field(default_factory=dict)

    @property
    def workers(self) -> int:
        return self.options["run"]["workers"]

    @property
    def out_dir(self) -> str:
        return self.options["output"]["dir"]

    @property
    def plot(self) -> bool:
        return self.options["output"]["plot"]

    def section(self, name: str) -> dict:
        return self.options[name]

    def to_dict(self) -> dict:
        doc = {"kind": self.kind, "name": self.name, "model": dict(self.model)}
        if self.post:
            doc["post"] = dict(self.post)
        if self.sweep:
            doc["sweep"] = [
                {"param": a.param, "min": a.min, "max": a.max, "steps": a.steps} for a in self.sweep
            ]
        if self.points:
            doc["points"] = [copy.deepcopy(p) for p in self.points]
        for sec, values in self.options.items():
            kept = {k: v for k, v in values.items() if v is not None}
            if kept:
                doc[sec] = kept
        return doc

    def varying_keys(self) -> list[str]:
        """Parameter columns that change between grid points, in a stable order."""
        if self.sweep:
            return [a.param for a in self.sweep]
        keys = []
        for p in self.points:
            for k in p:
                if k == "post":
                    keys += [f"post.{q}" for q in p["post"] if f"post.{q}" not in keys]
                elif k not in keys:
                    keys.append(k)
        return keys


def _parse_sweep(entries) -> tuple:
    if not isinstance(entries, list):
        raise ConfigError("sweep must be an array of tables", "sweep")
    axes = []
    for i, entry in enumerate(entries):
        where = f"sweep[{i}]"
        _check_table(entry, where)
        for key in entry:
            if key not in SWEEP_KEYS:
                raise ConfigError(f"unknown key {where}.{key!r}", f"{where}.{key}")
        for key in SWEEP_KEYS:
            if key not in entry:
                raise ConfigError(f"{where} is missing {key!r}", f"{where}.{key}")
        vals = {k: _coerce(entry[k], t, f"{where}.{k}") for k, t in SWEEP_KEYS.items()}
        base = vals["param"].removeprefix("post.")
        if base not in MODEL_KEYS or base == "kac_normalize":
            raise ConfigError(f"{where}.param {vals['param']!r} is not a numeric model parameter", f"{where}.param")
        if vals["steps"] < 1:
            raise ConfigError(f"{where}.steps must be >= 1", f"{where}.steps")
        if vals["param"] in [a.param for a in axes]:
            raise ConfigError(f"{where}.param {vals['param']!r} swept twice", f"{where}.param")
        axes.append(SweepAxis(**vals))
    return tuple(axes)


def _parse_options(doc: dict) -> dict:
    options = {}
    for sec, schema in OPTION_SCHEMA.items():
        table = _check_table(doc.get(sec, {}), sec)
        values = {}
        for key, value in table.items():
            if key not in schema:
                raise ConfigError(f"unknown key {sec}.{key!r}", f"{sec}.{key}")
            values[key] = _coerce(value, schema[key][0], f"{sec}.{key}")
        for key, (_, default) in schema.items():
            values.setdefault(key, copy.deepcopy(default))
        options[sec] = values
    _validate_options(options)
    return options


def _pair(value, key, kind):
    if value is None:
        return None
    if len(value) != 2:
        raise ConfigError(f"{key} must have two entries", key)
    lo, hi = (_coerce(v, kind, key) for v in value)
    if not lo < hi:
        raise ConfigError(f"{key} must be increasing", key)
    return [lo, hi]


def _validate_options(options: dict):
    fit = options["fit"]
    fit["r_window"] = _pair(fit["r_window"], "fit.r_window", int)
    fit["l_range"] = _pair(fit["l_range"], "fit.l_range", int)
    fit["t_window"] = _pair(fit["t_window"], "fit.t_window", float)
    for obs in options["phase"]["observables"]:
        if obs not in PHASE_OBSERVABLES:
            raise ConfigError(f"phase.observables: unknown observable {obs!r}", "phase.observables")
    q = options["quench"]
    if q["observable"] not in QUENCH_OBSERVABLES:
        raise ConfigError(f"quench.observable must be one of {QUENCH_OBSERVABLES}", "quench.observable")
    if q["method"] not in ("direct", "analytic"):
        raise ConfigError("quench.method must be 'direct' or 'analytic'", "quench.method")
    if q["spacing"] not in ("log", "linear"):
        raise ConfigError("quench.spacing must be 'log' or 'linear'", "quench.spacing")
    if q["t_num"] < 2 or q["t_stop"] <= q["t_start"] or q["t_start"] < 0:
        raise ConfigError("quench time grid needs t_num >= 2 and 0 <= t_start < t_stop", "quench.t_num")
    if q["spacing"] == "log" and q["t_start"] <= 0:
        raise ConfigError("logarithmic time grid needs t_start > 0", "quench.t_start")
    s = options["scaling"]
    s["sizes"] = [_coerce(v, int, "scaling.sizes") for v in s["sizes"]]
    if not s["sizes"] or s["h_step"] <= 0 or s["h_max"] <= s["h_min"]:
        raise ConfigError("scaling needs sizes, h_step > 0 and h_min < h_max", "scaling")
    if options["run"]["workers"] < 1:
        raise ConfigError("run.workers must be >= 1", "run.workers")


def parse_config(text: str, kind: str | None = None) -> JobConfig:
    """Parse and validate a configuration document.

    ``kind`` (from the command line) takes precedence only when the document
    does not name one; a mismatch is an error.
    """
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"malformed configuration: {exc}") from exc
    return config_from_dict(doc, kind)


def config_from_dict(doc: dict, kind: str | None = None) -> JobConfig:
    for key in doc:
        if key not in TOP_KEYS:
            raise ConfigError(f"unknown key {key!r}", key)
    doc_kind = doc.get("kind")
    if doc_kind is not None and kind is not None and doc_kind != kind:
        raise ConfigError(f"config is for job {doc_kind!r}, not {kind!r}", "kind")
    kind = doc_kind or kind
    if kind not in JOB_KINDS:
        raise ConfigError(f"job kind must be one of {JOB_KINDS}, got {kind!r}", "kind")
    name = _coerce(doc.get("name", kind), str, "name")
    model = _model_overrides(doc.get("model", {}), "model")
    for key, (_, _, default) in MODEL_KEYS.items():
        model.setdefault(key, default)
    post = _model_overrides(doc.get("post", {}), "post")
    sweep = _parse_sweep(doc.get("sweep", []))
    raw_points = doc.get("points", [])
    if not isinstance(raw_points, list):
        raise ConfigError("points must be an array of tables", "points")
    points = tuple(_model_overrides(p, f"points[{i}]", allow_post=True) for i, p in enumerate(raw_points))
    if sweep and points:
        raise ConfigError("use either sweep or points, not both", "points")
    cfg = JobConfig(kind, name, model, post, sweep, points, _parse_options(doc))
    for values in grid_values(cfg):
        build_params(values["pre"])
        build_params(values["post"])
    return cfg


def serialize(cfg: JobConfig) -> str:
    return tomli_w.dumps(cfg.to_dict())


def grid_values(cfg: JobConfig) -> list[dict]:
    """Parameter dictionaries ``{"pre": ..., "post": ...}`` of every grid point, in grid order.

    Sweep axes vary with the first axis slowest.
    """
    import itertools

    def merged(pre_over, post_over):
        pre = {**cfg.model, **pre_over}
        post = {**pre, **cfg.post, **post_over}
        return {"pre": pre, "post": post}

    if cfg.points:
        return [merged({k: v for k, v in p.items() if k != "post"}, p.get("post", {})) for p in cfg.points]
    if not cfg.sweep:
        return [merged({}, {})]
    out = []
    for combo in itertools.product(*(a.values() for a in cfg.sweep)):
        pre_over, post_over = {}, {}
        for axis, value in zip(cfg.sweep, combo):
            if axis.param.startswith("post."):
                post_over[axis.param[5:]] = value
            else:
                pre_over[axis.param] = value
        out.append(merged(pre_over, post_over))
    return out


def apply_overrides(doc: dict, assignments: list[str]) -> dict:
    """Apply ``--set key=value`` assignments to a parsed document.

    Keys are dotted paths (``model.D``, ``sweep.0.steps``); values are read as
    TOML values and fall back to bare strings.
    """
    doc = copy.deepcopy(doc)
    for item in assignments:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        path, raw = item.split("=", 1)
        path = path.strip()
        try:
            value = tomli.loads(f"v = {raw}")["v"]
        except tomli.TOMLDecodeError:
            value = raw
        parts = path.split(".")
        node = doc
        for i, part in enumerate(parts[:-1]):
            if isinstance(node, list):
                if not part.isdigit() or int(part) >= len(node):
                    raise ConfigError(f"--set {path}: no entry {part!r}", path)
                node = node[int(part)]
            else:
                node = node.setdefault(part, {})
        last = parts[-1]
        if isinstance(node, list):
            if not last.isdigit() or int(last) >= len(node):
                raise ConfigError(f"--set {path}: no entry {last!r}", path)
            node[int(last)] = value
        elif isinstance(node, dict):
            node[last] = value
        else:
            raise ConfigError(f"--set {path}: {'.'.join(parts[:-1])} is not a table", path)
    return doc
