"""Experiment configuration files (YAML).

Schema::

    signal:
      n: <int>                       # signal length N
      components:                    # planted tones
        - {bin: <int>, amplitude: <float>}
    sweep:
      m_values: [<int>, ...]
      trials: <int>
      base_seed: <int >= 0>
      timing_repeats: <int>          # default 5
      support_threshold: <float>     # amplitude units, default 0.1
    algorithms: [omp, ols, gp, adaptive_gradient, l1eq, iht_topk, iht_lambda]
    params:                          # optional per-algorithm overrides
      <algorithm>: {<field>: <value>}

A bare name such as ``paper_experiment`` refers to a file bundled with the
package.
"""
import os
from importlib import resources

import yaml

from .benchmark import DEFAULT_ALGORITHMS, ExperimentConfig
from .signals import MultitoneSpec

BUNDLED = ("paper_experiment",)


class ConfigError(ValueError):
    pass


def _read(name_or_path):
    if os.path.exists(name_or_path):
        with open(name_or_path) as fh:
            return fh.read()
    name = name_or_path[:-5] if name_or_path.endswith(".yaml") else name_or_path
    if name in BUNDLED:
        return resources.files("csrecover.configs").joinpath(f"{name}.yaml").read_text()
    raise ConfigError(f"no config file or bundled config named {name_or_path!r}")


def parse_signal(block):
    try:
        comps = tuple((int(c["bin"]), float(c["amplitude"])) for c in block.get("components", []))
        return MultitoneSpec(int(block["n"]), comps)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed signal block: {exc}") from exc


def load_config(name_or_path, **overrides):
    """Build an :class:`ExperimentConfig`; keyword overrides win over the file."""
    try:
        raw = yaml.safe_load(_read(name_or_path))
    except yaml.YAMLError as exc:
        raise ConfigError(f"{name_or_path}: {exc}") from exc
    if not isinstance(raw, dict) or "signal" not in raw:
        raise ConfigError(f"{name_or_path}: expected a mapping with a 'signal' block")
    signal = parse_signal(raw["signal"])
    sweep = raw.get("sweep") or {}
    kwargs = dict(
        signal=signal,
        m_values=sweep.get("m_values", [signal.n]),
        trials_per_m=int(sweep.get("trials", 1)),
        base_seed=int(sweep.get("base_seed", 0)),
        algorithms=raw.get("algorithms", DEFAULT_ALGORITHMS),
        params={k: dict(v or {}) for k, v in (raw.get("params") or {}).items()},
        timing_repeats=int(sweep.get("timing_repeats", 5)),
        support_threshold=float(sweep.get("support_threshold", 0.1)),
    )
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ExperimentConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_signal(name_or_path):
    """Just the signal block of a config file."""
    raw = yaml.safe_load(_read(name_or_path))
    if not isinstance(raw, dict) or "signal" not in raw:
        raise ConfigError(f"{name_or_path}: no 'signal' block")
    return parse_signal(raw["signal"])
