"""Run configuration: one structured JSON file per run.

Exact key set (documented in the README):

  system:     kind=one_point | finite | finite_random | full_shift | grid_shift
              plus kind-specific keys (dist_matrix/map_table, size/seed, m, D, L)
  potential:  kind=constant | first_coord | table_random, params={...}
  sample:     {"count": int, "seed": int} or {"exhaustive": true}
  eps_list:   strictly decreasing floats in (0,1)
  n_range:    list of orbit lengths (>= 3 distinct values)
  dictionary: {"sources": [potential specs], "tau_a": float}   (variational)
  verify:     {"seed": int, "draws": int, "n": int, "eps": float}
  bowen:      {"tol": float}
  tolerances: {"tau_a": float, "solver_gap": float, "bisection_tol": float}
  out:        output directory (the only value a CLI flag may override)

No hidden randomness: every stochastic choice takes a seed from the file.
"""

import json

from . import system_zoo as zoo

EXHAUSTIVE_CAP = 8192


class ConfigError(ValueError):
    """Invalid run configuration; message carries the offending key path."""


def _need(d, key, path):
    if key not in d:
        raise ConfigError(f"config key {path}.{key}: missing")
    return d[key]


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config {path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"config {path}: top level must be an object")
    validate_config(cfg)
    return cfg


def validate_config(cfg: dict):
    _need(cfg, "system", "config")
    eps = _need(cfg, "eps_list", "config")
    if (
        not isinstance(eps, list)
        or len(eps) < 3
        or any(not 0.0 < e < 1.0 for e in eps)
        or any(a <= b for a, b in zip(eps, eps[1:]))
    ):
        raise ConfigError(
            "config key eps_list: need >= 3 strictly decreasing values in (0,1)"
        )
    n_range = _need(cfg, "n_range", "config")
    if not isinstance(n_range, list) or len(set(n_range)) < 3 or min(n_range) < 1:
        raise ConfigError("config key n_range: need >= 3 distinct values >= 1")
    tol = cfg.get("tolerances", {})
    for key, val in tol.items():
        if not val > 0:
            raise ConfigError(f"config key tolerances.{key}: must be > 0")
    sample = cfg.get("sample", {"exhaustive": True})
    if "exhaustive" not in sample and (
        "count" not in sample or "seed" not in sample
    ):
        raise ConfigError("config key sample: need exhaustive or count+seed")


def build_system(spec: dict) -> "zoo.System":
    kind = _need(spec, "kind", "system")
    if kind == "one_point":
        return zoo.make_finite_system([[0.0]], [0], name="one_point")
    if kind == "finite":
        return zoo.make_finite_system(
            _need(spec, "dist_matrix", "system"), _need(spec, "map_table", "system")
        )
    if kind == "finite_random":
        return zoo.random_finite_system(
            int(_need(spec, "size", "system")), int(_need(spec, "seed", "system"))
        )
    if kind == "full_shift":
        return zoo.make_full_shift(
            int(_need(spec, "m", "system")), int(_need(spec, "L", "system"))
        )
    if kind == "grid_shift":
        return zoo.make_grid_shift(
            int(_need(spec, "D", "system")),
            int(_need(spec, "m", "system")),
            int(_need(spec, "L", "system")),
        )
    raise ConfigError(f"config key system.kind: unknown kind {kind!r}")


def build_potential(spec: dict, system: "zoo.System") -> "zoo.Potential":
    kind = _need(spec, "kind", "potential")
    params = spec.get("params", {})
    if kind == "constant":
        return zoo.constant_potential(float(_need(params, "value", "potential.params")))
    if kind == "first_coord":
        return zoo.first_coord_potential(
            system,
            scale=float(params.get("scale", 1.0)),
            offset=float(params.get("offset", 0.0)),
        )
    if kind == "table_random":
        if system.points is None:
            raise ConfigError("potential.kind table_random needs a finite system")
        return zoo.random_table_potential(
            system,
            int(_need(params, "seed", "potential.params")),
            low=float(params.get("low", -1.0)),
            high=float(params.get("high", 1.0)),
        )
    raise ConfigError(f"config key potential.kind: unknown kind {kind!r}")


def build_sample(cfg: dict, system: "zoo.System") -> list:
    sample = cfg.get("sample", {"exhaustive": True})
    if sample.get("exhaustive"):
        if system.points is not None:
            return list(system.points)
        name = system.name
        if name.startswith("shift"):
            m, L = int(name.removeprefix("shift")), system.horizon
            if m**L > EXHAUSTIVE_CAP:
                raise ConfigError(
                    f"config key sample: exhaustive full shift too large ({m}^{L})"
                )
            return zoo.enumerate_words(m, L)
        raise ConfigError(
            "config key sample: exhaustive sampling needs a finite or full-shift system"
        )
    return system.sample(int(sample["count"]), int(sample["seed"]))
