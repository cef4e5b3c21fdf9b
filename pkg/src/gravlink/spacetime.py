"""Schwarzschild geometry of a static spherical mass.

Static observers at radii r_A (emitter) and r_B (receiver) exchange light
through the exterior region r > r_s.  Everything downstream needs only four
scalars: the metric function f(r) = 1 - r_s/r, the proper-time factor
sqrt(f), the redshift ratio sqrt(f(r_A)/f(r_B)) and the dimensionless
deformation parameter

    delta = (f(r_A)/f(r_B))**(1/4) - 1,

which is of order 1e-10 for Earth-to-satellite links.  delta enters all
precision bounds squared, so it is evaluated with log1p/expm1 to avoid
catastrophic cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ExteriorDomainError

# Pinned constants so reproduction runs are deterministic (CODATA-style values).
GRAVITATIONAL_CONSTANT = 6.67430e-11  # m^3 kg^-1 s^-2
SPEED_OF_LIGHT = 299_792_458.0        # m / s
EARTH_MASS = 5.972e24                 # kg
EARTH_RADIUS = 6.371e6                # m


@dataclass(frozen=True)
class SchwarzschildGeometry:
    """Exterior Schwarzschild geometry, parametrized by its radius r_s = 2GM/c^2."""

    r_s: float

    def __post_init__(self):
        if not (self.r_s > 0.0 and math.isfinite(self.r_s)):
            raise ExteriorDomainError(f"Schwarzschild radius must be positive and finite, got {self.r_s}")

    @classmethod
    def from_mass(cls, mass, gravitational_constant=GRAVITATIONAL_CONSTANT,
                  speed_of_light=SPEED_OF_LIGHT):
        """Build the geometry from a mass via r_s = 2GM/c^2."""
        return cls(2.0 * gravitational_constant * mass / speed_of_light**2)

    @classmethod
    def earth(cls):
        """Earth geometry with the pinned constants (r_s ~ 8.87 mm)."""
        return cls.from_mass(EARTH_MASS)


@dataclass(frozen=True)
class ObserverPair:
    """Static emitter at r_a and receiver at r_b.

    The separation L = r_b - r_a is positive for an uplink (receiver higher,
    light redshifted) and negative for a downlink (blueshifted).
    """

    r_a: float
    r_b: float

    def __post_init__(self):
        for name, r in (("r_a", self.r_a), ("r_b", self.r_b)):
            if not (r > 0.0):
                raise ExteriorDomainError(f"{name} must be positive, got {r}")

    @property
    def separation(self) -> float:
        """L = r_b - r_a."""
        return self.r_b - self.r_a

    def swapped(self) -> "ObserverPair":
        return ObserverPair(r_a=self.r_b, r_b=self.r_a)


def _require_exterior(geom: SchwarzschildGeometry, r: float, name: str = "r"):
    if not (r > geom.r_s):
        raise ExteriorDomainError(
            f"{name} = {r} is not in the exterior region (requires {name} > r_s = {geom.r_s})"
        )


def _log_metric(geom: SchwarzschildGeometry, r: float) -> float:
    # log f(r) = log1p(-r_s/r); exact to machine precision for r >> r_s.
    return math.log1p(-geom.r_s / r)


def metric_function(geom: SchwarzschildGeometry, r: float) -> float:
    """Metric function f(r) = 1 - r_s/r, strictly in (0, 1) for finite exterior r.

    Raises:
        ExteriorDomainError: if r <= r_s (horizon or interior) or r <= 0.
    """
    if not (r > 0.0):
        raise ExteriorDomainError(f"r must be positive, got {r}")
    _require_exterior(geom, r)
    return 1.0 - geom.r_s / r


def proper_time_factor(geom: SchwarzschildGeometry, r0: float) -> float:
    """sqrt(f(r0)): converts coordinate time t into the proper time of a static observer."""
    return math.sqrt(metric_function(geom, r0))


def redshift_ratio(geom: SchwarzschildGeometry, pair: ObserverPair) -> float:
    """Frequency ratio Omega_B / Omega_A = sqrt(f(r_a)/f(r_b)).

    Less than 1 when the receiver sits higher than the emitter (redshift).
    """
    _require_exterior(geom, pair.r_a, "r_a")
    _require_exterior(geom, pair.r_b, "r_b")
    return math.exp(0.5 * (_log_metric(geom, pair.r_a) - _log_metric(geom, pair.r_b)))


def delta_exact(geom: SchwarzschildGeometry, pair: ObserverPair) -> float:
    """Deformation parameter delta = (f(r_a)/f(r_b))**(1/4) - 1.

    Negative for an uplink (r_b > r_a).  Evaluated as
    expm1(0.25 * (log1p(-r_s/r_a) - log1p(-r_s/r_b))) because delta is of
    order r_s * L / r^2 ~ 1e-10 at Earth scales and a naive fourth root
    would lose every significant digit.
    """
    _require_exterior(geom, pair.r_a, "r_a")
    _require_exterior(geom, pair.r_b, "r_b")
    return math.expm1(0.25 * (_log_metric(geom, pair.r_a) - _log_metric(geom, pair.r_b)))


def delta_approx(geom: SchwarzschildGeometry, pair: ObserverPair) -> float:
    """First-order deformation -(r_s/4) * L / (r_a * (r_a + L)).

    Agrees with :func:`delta_exact` to relative order r_s/r_a; the closed-form
    precision bounds assume this leading-order form.
    """
    _require_exterior(geom, pair.r_a, "r_a")
    _require_exterior(geom, pair.r_b, "r_b")
    length = pair.separation
    return -(geom.r_s / 4.0) * length / (pair.r_a * (pair.r_a + length))
