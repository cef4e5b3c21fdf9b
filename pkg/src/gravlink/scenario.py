"""Scenario files: the validated JSON input consumed by every CLI command.

Schema (version 1) — unknown keys anywhere are errors, so a typo can never
silently change the physics:

    {
      "schema_version": 1,
      "geometry": {"r_s": <m>} | {"mass": <kg>,
                                  "gravitational_constant"?: <SI>,
                                  "speed_of_light"?: <m/s>},
      "observers": {"r_a": <m>, "r_b": <m>} | {"r_a": <m>, "separation": <m>},
      "packet": {"preset": <name>} | {"omega0": <Hz>, "sigma": <Hz>},
      "scheme": {"kind": "coherent", "alpha": <num> | [re, im]}
              | {"kind": "single_mode_squeezed", "r": <num>, "psi"?, "mu_a"?, "mu_b"?}
              | {"kind": "two_mode_squeezed", "r": <num>, "omega1"?, "omega2"?},
      "n_measurements": <int >= 1>,
      "seed"?: <uint64>
    }

A packet must be selected explicitly (preset or numbers); there is no
default, because the published reference values exist for two different
presets.  Relative scenario paths are resolved against the
GRAVLINK_SCENARIO_DIR environment variable when it is set.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import ScenarioError
from .metrology import SchemeSpec
from .spacetime import (
    EARTH_RADIUS,
    GRAVITATIONAL_CONSTANT,
    SPEED_OF_LIGHT,
    ObserverPair,
    SchwarzschildGeometry,
)
from .wavepacket import PACKET_PRESETS, GaussianWavepacket

SCHEMA_VERSION = 1

SCENARIO_DIR_ENV = "GRAVLINK_SCENARIO_DIR"


@dataclass(frozen=True)
class Scenario:
    """Validated inputs for one link-estimation run."""

    geometry: SchwarzschildGeometry
    pair: ObserverPair
    packet: GaussianWavepacket
    packet_name: str
    scheme: SchemeSpec
    n_measurements: int
    seed: int


def _reject_unknown(section: dict, allowed, path: str):
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ScenarioError(f"unknown key(s) {unknown} in {path}; allowed: {sorted(allowed)}")


def _require(section: dict, key: str, path: str):
    if key not in section:
        raise ScenarioError(f"missing required key {key!r} in {path}")
    return section[key]


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{path} must be a number, got {value!r}")
    return float(value)


def _parse_geometry(section, path="geometry") -> SchwarzschildGeometry:
    if not isinstance(section, dict):
        raise ScenarioError(f"{path} must be an object")
    if "r_s" in section:
        _reject_unknown(section, {"r_s"}, path)
        return SchwarzschildGeometry(_number(section["r_s"], f"{path}.r_s"))
    _reject_unknown(section, {"mass", "gravitational_constant", "speed_of_light"}, path)
    mass = _number(_require(section, "mass", path), f"{path}.mass")
    g = _number(section.get("gravitational_constant", GRAVITATIONAL_CONSTANT),
                f"{path}.gravitational_constant")
    c = _number(section.get("speed_of_light", SPEED_OF_LIGHT), f"{path}.speed_of_light")
    return SchwarzschildGeometry.from_mass(mass, g, c)


def _parse_observers(section, path="observers") -> ObserverPair:
    if not isinstance(section, dict):
        raise ScenarioError(f"{path} must be an object")
    r_a = _number(_require(section, "r_a", path), f"{path}.r_a")
    if "r_b" in section:
        _reject_unknown(section, {"r_a", "r_b"}, path)
        return ObserverPair(r_a=r_a, r_b=_number(section["r_b"], f"{path}.r_b"))
    _reject_unknown(section, {"r_a", "separation"}, path)
    sep = _number(_require(section, "separation", path), f"{path}.separation")
    return ObserverPair(r_a=r_a, r_b=r_a + sep)


def _parse_packet(section, path="packet"):
    if not isinstance(section, dict):
        raise ScenarioError(f"{path} must be an object")
    if "preset" in section:
        _reject_unknown(section, {"preset"}, path)
        name = section["preset"]
        if name not in PACKET_PRESETS:
            raise ScenarioError(
                f"unknown packet preset {name!r}; available: {sorted(PACKET_PRESETS)}"
            )
        return PACKET_PRESETS[name], name
    _reject_unknown(section, {"omega0", "sigma"}, path)
    packet = GaussianWavepacket(
        omega0=_number(_require(section, "omega0", path), f"{path}.omega0"),
        sigma=_number(_require(section, "sigma", path), f"{path}.sigma"),
    )
    return packet, "custom"


def _parse_scheme(section, path="scheme") -> SchemeSpec:
    if not isinstance(section, dict):
        raise ScenarioError(f"{path} must be an object")
    kind = _require(section, "kind", path)
    if kind == "coherent":
        _reject_unknown(section, {"kind", "alpha"}, path)
        raw = _require(section, "alpha", path)
        if isinstance(raw, (list, tuple)):
            if len(raw) != 2:
                raise ScenarioError(f"{path}.alpha as a pair must be [re, im]")
            alpha = complex(_number(raw[0], f"{path}.alpha[0]"),
                            _number(raw[1], f"{path}.alpha[1]"))
        else:
            alpha = complex(_number(raw, f"{path}.alpha"), 0.0)
        return SchemeSpec.coherent_probe(alpha)
    if kind == "single_mode_squeezed":
        _reject_unknown(section, {"kind", "r", "psi", "mu_a", "mu_b"}, path)
        return SchemeSpec.squeezed_probe(
            r=_number(_require(section, "r", path), f"{path}.r"),
            psi=_number(section.get("psi", 0.0), f"{path}.psi"),
            mu_a=_number(section.get("mu_a", 1.0), f"{path}.mu_a"),
            mu_b=_number(section.get("mu_b", 1.0), f"{path}.mu_b"),
        )
    if kind == "two_mode_squeezed":
        _reject_unknown(section, {"kind", "r", "omega1", "omega2"}, path)
        omega1 = section.get("omega1")
        omega2 = section.get("omega2")
        return SchemeSpec.entangled_probe(
            r=_number(_require(section, "r", path), f"{path}.r"),
            omega1=None if omega1 is None else _number(omega1, f"{path}.omega1"),
            omega2=None if omega2 is None else _number(omega2, f"{path}.omega2"),
        )
    raise ScenarioError(
        f"{path}.kind must be one of 'coherent', 'single_mode_squeezed', "
        f"'two_mode_squeezed', got {kind!r}"
    )


def parse_scenario(data: dict) -> Scenario:
    """Validate a scenario dict against schema version 1 (strict: unknown keys error)."""
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    _reject_unknown(
        data,
        {"schema_version", "geometry", "observers", "packet", "scheme",
         "n_measurements", "seed"},
        "scenario",
    )
    version = _require(data, "schema_version", "scenario")
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"unsupported schema_version {version!r}; this toolkit reads {SCHEMA_VERSION}")
    packet, packet_name = _parse_packet(_require(data, "packet", "scenario"))
    n = _require(data, "n_measurements", "scenario")
    if isinstance(n, bool) or not isinstance(n, (int, float)) or n < 1 or int(n) != n:
        raise ScenarioError(f"n_measurements must be a positive integer, got {n!r}")
    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ScenarioError(f"seed must be a non-negative integer, got {seed!r}")
    return Scenario(
        geometry=_parse_geometry(_require(data, "geometry", "scenario")),
        pair=_parse_observers(_require(data, "observers", "scenario")),
        packet=packet,
        packet_name=packet_name,
        scheme=_parse_scheme(_require(data, "scheme", "scenario")),
        n_measurements=int(n),
        seed=seed,
    )


def load_scenario(path) -> Scenario:
    """Load and validate a scenario JSON file.

    Relative paths are resolved against $GRAVLINK_SCENARIO_DIR when set.
    """
    candidate = Path(path)
    if not candidate.is_absolute():
        base = os.environ.get(SCENARIO_DIR_ENV)
        if base and not candidate.exists():
            candidate = Path(base) / candidate
    try:
        with open(candidate) as handle:
            data = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario file {candidate} is not valid JSON: {exc}") from exc
    return parse_scenario(data)


def default_scenario() -> Scenario:
    """Built-in reference scenario: Earth surface to geostationary radius.

    Earth geometry from the pinned constants, r_a = 6.371e6 m,
    r_b = 4.237e7 m, the 400 THz / 1 MHz packet preset, a single-mode
    squeezed probe with r = 1.5 and N = 1e10 measurements.
    """
    return Scenario(
        geometry=SchwarzschildGeometry.earth(),
        pair=ObserverPair(r_a=EARTH_RADIUS, r_b=4.237e7),
        packet=PACKET_PRESETS["state-of-the-art-400THz"],
        packet_name="state-of-the-art-400THz",
        scheme=SchemeSpec.squeezed_probe(r=1.5),
        n_measurements=10**10,
        seed=20240915,
    )
