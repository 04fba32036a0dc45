"""Scenario configuration files.

A config is an INI file with three sections::

    [scenario]
    name = sweep_b

    [params]
    g_tau = 0.2
    n = 0:100:1
    beta_e = 0, 1, 10

    [output]
    path = b_indef.csv

Values in ``[params]`` are scalars, grids or specs:

* grid: ``a, b, c`` or ``start:stop:step`` (stop inclusive); ``inf`` is accepted
* channel: ``identity``, ``dephasing_z|x|y``, ``monitoring(z, 0.5)``, ``fridge``,
  ``random(k)`` or ``kraus(a, b, c, d; e, f, g, h)`` with row-major complex entries
* state: ``plus``, ``minus``, ``zero``, ``one``, ``mixed``, ``bloch(x, y, z)``
  or ``matrix(a, b, c, d)``
* system Hamiltonian: ``zero``, ``z``, ``x`` (scaled by ``-omega_s/2``) or ``matrix(...)``
"""
from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channels import (
    OBS_X,
    OBS_Y,
    OBS_Z,
    ChannelError,
    KrausChannel,
    dephasing_channel,
    fridge_kraus,
    identity_channel,
    monitoring_channel,
    random_channel,
)
from .collision import thermal_qubit
from .linalg import I2, KET_0, KET_1, KET_MINUS, KET_PLUS, SIGMA_X, SIGMA_Y, SIGMA_Z, density_matrix, ketbra

OBSERVABLES = {"z": OBS_Z, "x": OBS_X, "y": OBS_Y}
_CALL = re.compile(r"^\s*(\w+)\s*(?:\((.*)\))?\s*$", re.S)


class ConfigError(ValueError):
    """Malformed config; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass
class ScenarioConfig:
    name: str
    params: dict[str, str]
    output_path: str | None = None
    source: str = "<string>"


def parse_config_text(text: str, source: str = "<string>") -> ScenarioConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(source, str(exc).splitlines()[0]) from None
    unknown = set(cp.sections()) - {"scenario", "params", "output"}
    if unknown:
        raise ConfigError(f"[{sorted(unknown)[0]}]", "unknown section")
    if not cp.has_option("scenario", "name"):
        raise ConfigError("scenario.name", "missing")
    params = dict(cp.items("params")) if cp.has_section("params") else {}
    out = cp.get("output", "path", fallback=None) or None
    return ScenarioConfig(cp.get("scenario", "name").strip(), params, out, source)


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(str(path), exc.strerror or "cannot read") from None
    return parse_config_text(text, str(path))


def _number(key: str, s: str) -> float:
    s = s.strip()
    try:
        return float(s)
    except ValueError:
        raise ConfigError(key, f"not a number: {s!r}") from None


def parse_grid(key: str, text: str) -> list[float]:
    """Comma list or inclusive ``start:stop:step`` range."""
    text = text.strip()
    if not text:
        raise ConfigError(key, "empty grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(key, "range must be start:stop:step")
        a, b, step = (_number(key, p) for p in parts)
        if not step > 0 or not math.isfinite(a) or not math.isfinite(b):
            raise ConfigError(key, "range needs finite ends and a positive step")
        if b < a:
            raise ConfigError(key, "range stop is below start")
        count = int(math.floor((b - a) / step + 1e-9)) + 1
        return [round(a + i * step, 12) for i in range(count)]
    return [_number(key, p) for p in text.split(",")]


def _complex(key: str, s: str) -> complex:
    try:
        return complex(s.strip().replace(" ", ""))
    except ValueError:
        raise ConfigError(key, f"not a complex number: {s.strip()!r}") from None


def _square(key: str, entries: list[complex]) -> np.ndarray:
    d = math.isqrt(len(entries))
    if d * d != len(entries) or d == 0:
        raise ConfigError(key, f"{len(entries)} entries do not form a square matrix")
    return np.array(entries, dtype=complex).reshape(d, d)


def _split_call(key: str, text: str) -> tuple[str, str | None]:
    m = _CALL.match(text)
    if not m:
        raise ConfigError(key, f"cannot parse {text.strip()!r}")
    return m.group(1).lower(), m.group(2)


def parse_channel(key: str, text: str, *, theta_cold: np.ndarray | None = None,
                  rng: np.random.Generator | None = None) -> KrausChannel:
    head, args = _split_call(key, text)
    try:
        if head == "identity" and args is None:
            return identity_channel(2)
        if head.startswith("dephasing_") and args is None and head[-1] in OBSERVABLES:
            return dephasing_channel(OBSERVABLES[head[-1]])
        if head == "monitoring" and args is not None:
            obs, eps = (a.strip().lower() for a in args.split(","))
            if obs not in OBSERVABLES:
                raise ConfigError(key, f"unknown observable {obs!r}")
            eps_val = _number(key, eps)
            if not 0.0 <= eps_val <= 1.0:
                raise ConfigError(key, f"monitoring strength {eps_val} outside [0, 1]")
            return monitoring_channel(OBSERVABLES[obs], eps_val)
        if head == "fridge" and args is None:
            if theta_cold is None:
                raise ConfigError(key, "fridge channel needs beta_cold")
            return fridge_kraus(theta_cold)
        if head == "random" and args is not None:
            if rng is None:
                raise ConfigError(key, "random channel needs a seed")
            return random_channel(2, int(_number(key, args)), rng)
        if head == "kraus" and args is not None:
            ops = [_square(key, [_complex(key, e) for e in op.split(",")]) for op in args.split(";")]
            return KrausChannel(ops, "kraus")
    except ChannelError as exc:
        raise ConfigError(key, str(exc)) from None
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(key, f"bad arguments in {text.strip()!r}") from None
    raise ConfigError(key, f"unknown channel spec {text.strip()!r}")


_NAMED_STATES = {"plus": KET_PLUS, "minus": KET_MINUS, "zero": KET_0, "one": KET_1}


def parse_state(key: str, text: str) -> np.ndarray:
    head, args = _split_call(key, text)
    if head in _NAMED_STATES and args is None:
        return ketbra(_NAMED_STATES[head])
    if head == "mixed" and args is None:
        return I2 / 2
    try:
        if head == "bloch" and args is not None:
            r = [_number(key, a) for a in args.split(",")]
            if len(r) != 3:
                raise ConfigError(key, "bloch needs three components")
            return density_matrix(0.5 * (I2 + r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z))
        if head == "matrix" and args is not None:
            return density_matrix(_square(key, [_complex(key, e) for e in args.split(",")]))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(key, str(exc)) from None
    raise ConfigError(key, f"unknown state spec {text.strip()!r}")


def parse_hamiltonian(key: str, text: str, omega_s: float) -> np.ndarray:
    head, args = _split_call(key, text)
    if head == "zero" and args is None:
        return np.zeros((2, 2), dtype=complex)
    if head in ("x", "y", "z") and args is None:
        return -0.5 * omega_s * {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}[head]
    if head == "matrix" and args is not None:
        return _square(key, [_complex(key, e) for e in args.split(",")])
    raise ConfigError(key, f"unknown Hamiltonian spec {text.strip()!r}")


@dataclass
class Params:
    """Typed access to ``[params]`` that remembers which keys were read."""

    raw: dict[str, str]
    used: set[str] = field(default_factory=set)

    def _get(self, key: str, default):
        self.used.add(key)
        if key in self.raw:
            return self.raw[key]
        if default is None:
            raise ConfigError(key, "missing required parameter")
        return default

    def text(self, key: str, default: str | None = None) -> str:
        return str(self._get(key, default)).strip()

    def float(self, key: str, default: float | None = None) -> float:
        v = self._get(key, default)
        return _number(key, v) if isinstance(v, str) else float(v)

    def int(self, key: str, default: int | None = None) -> int:
        v = self.float(key, default)
        if v != int(v):
            raise ConfigError(key, f"expected an integer, got {v}")
        return int(v)

    def grid(self, key: str, default: str | None = None) -> list[float]:
        return parse_grid(key, str(self._get(key, default)))

    def int_grid(self, key: str, default: str | None = None) -> list[int]:
        vals = self.grid(key, default)
        if any(v != int(v) or v < 0 for v in vals):
            raise ConfigError(key, "expected non-negative integers")
        return [int(v) for v in vals]

    def words(self, key: str, default: str | None = None) -> list[str]:
        return [w.strip().lower() for w in self.text(key, default).split(",") if w.strip()]

    def flag(self, key: str, default: str = "false") -> bool:
        v = self.text(key, default).lower()
        if v not in ("true", "false", "yes", "no", "1", "0"):
            raise ConfigError(key, f"expected a boolean, got {v!r}")
        return v in ("true", "yes", "1")

    def tau_and_g(self, g_tau: float | None = None) -> tuple[float, float]:
        """Coupling from ``g_tau`` (with ``tau``, default 1) or from explicit ``g``."""
        tau = self.float("tau", 1.0)
        if "g" in self.raw:
            return tau, self.float("g")
        return tau, self.float("g_tau", g_tau) / tau

    def unused(self) -> list[str]:
        return sorted(set(self.raw) - self.used)


def cold_theta(params: Params) -> np.ndarray | None:
    if "beta_cold" not in params.raw:
        return None
    return thermal_qubit(params.float("beta_cold"), params.float("omega_s", 1.0), "z")
