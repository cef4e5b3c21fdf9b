"""Gaussian wave packets and the redshift channel acting on them.

A packet is a real normalized Gaussian frequency profile

    F(Omega) = (2 pi sigma^2)**(-1/4) * exp(-(Omega - Omega_0)^2 / (4 sigma^2)),

with peak Omega_0 and width sigma.  Propagation between static observers
rescales both by the redshift ratio sqrt(f(r_a)/f(r_b)); the packet stays
normalized.

The channel quality is the mode overlap Theta between the received profile
and the reference profile the receiver is tuned to.  In terms of the
deformation parameter delta the closed form used throughout is

    Theta(delta) = sqrt(2 / (1 + (1+delta)^2)) * 1/(1+delta)
                   * exp(-delta^2 Omega_0^2 / (4 (1 + (1+delta)^2) sigma^2)),

i.e. the inner product of the reference Gaussian with its frequency-rescaled
image Omega -> (1+delta) Omega carrying a 1/(1+delta) amplitude weight.
Theta depends only on delta and the ratio Omega_0/sigma, which is invariant
under propagation, so either end of the link may supply the packet.

From Theta follow the loss parameter q = 1 - Theta^2 and the small parameter
x = delta^2 Omega_0^2 / (8 sigma^2) with Theta ~ 1 - x in the narrowband
regime; x is the quantity the estimation schemes bound.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import NarrowbandWarning, PacketMismatchError, PerturbativeRegimeWarning
from .spacetime import ObserverPair, SchwarzschildGeometry, delta_exact, redshift_ratio

# Width-to-peak ratio above which the narrowband channel model is questionable.
# Satellite links sit near 1e-9; override the module attribute to retune.
NARROWBAND_THRESHOLD = 1e-3

# Relative slack allowed between the peak and width ratios of a packet pair
# before they are rejected as "not related by one channel".
_RATIO_CONSISTENCY_TOL = 1e-9

PACKET_PRESETS = {}


@dataclass(frozen=True)
class GaussianWavepacket:
    """Peak frequency and width of a normalized real Gaussian frequency profile.

    Frequencies are plain cyclic frequencies in Hz in all shipped presets;
    every derived quantity depends only on ratios, so any mutually consistent
    unit works.
    """

    omega0: float
    sigma: float

    def __post_init__(self):
        if not (self.omega0 > 0.0 and math.isfinite(self.omega0)):
            raise ValueError(f"omega0 must be positive and finite, got {self.omega0}")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma}")
        if self.sigma / self.omega0 > NARROWBAND_THRESHOLD:
            warnings.warn(
                f"sigma/omega0 = {self.sigma / self.omega0:.3g} exceeds the narrowband "
                f"threshold {NARROWBAND_THRESHOLD:.3g}",
                NarrowbandWarning,
                stacklevel=2,
            )

    @property
    def peak_to_width(self) -> float:
        """Omega_0 / sigma, the only packet property entering the channel formulas."""
        return self.omega0 / self.sigma


PACKET_PRESETS["comm-700THz"] = GaussianWavepacket(omega0=7e14, sigma=1e6)
PACKET_PRESETS["state-of-the-art-400THz"] = GaussianWavepacket(omega0=4e14, sigma=1e6)


@dataclass(frozen=True)
class ChannelParams:
    """Overlap Theta, loss q = 1 - Theta^2, small parameter x and deformation delta."""

    theta: float
    q: float
    x: float
    delta: float

    @property
    def single_photon_fidelity(self) -> float:
        """|Theta|^2, the fidelity of single-photon transmission."""
        return self.theta * self.theta


def propagate(packet: GaussianWavepacket, geom: SchwarzschildGeometry,
              pair: ObserverPair) -> GaussianWavepacket:
    """Packet received after radial propagation from r_a to r_b.

    Peak and width are both multiplied by sqrt(f(r_a)/f(r_b)); an uplink
    (r_b > r_a) therefore redshifts the packet.  Normalization is preserved.
    """
    scale = redshift_ratio(geom, pair)
    return GaussianWavepacket(omega0=packet.omega0 * scale, sigma=packet.sigma * scale)


def small_parameter_x(packet: GaussianWavepacket, delta: float) -> float:
    """x = delta^2 Omega_0^2 / (8 sigma^2)."""
    return delta**2 * packet.omega0**2 / (8.0 * packet.sigma**2)


def overlap_from_delta(packet: GaussianWavepacket, delta: float) -> float:
    """Closed-form overlap Theta for a channel with deformation delta.

    ``packet`` supplies the receiver-side Omega_0 and sigma; only their ratio
    enters.  Equals 1 exactly when delta = 0.  For delta < 0 outside the
    narrowband regime the model formula can exceed 1 by O(|delta|); within the
    regimes used here it stays in (0, 1].
    """
    if delta <= -1.0:
        raise ValueError(f"delta must exceed -1, got {delta}")
    if delta == 0.0:
        return 1.0
    one_plus = 1.0 + delta
    denom = 1.0 + one_plus * one_plus
    ratio = packet.peak_to_width
    exponent = -(delta * ratio) ** 2 / (4.0 * denom)
    return math.sqrt(2.0 / denom) / one_plus * math.exp(exponent)


def overlap_exact(packet_a: GaussianWavepacket, packet_b_received: GaussianWavepacket) -> float:
    """Overlap Theta between a sent packet and its received image.

    The deformation is recovered from the peak ratio as
    delta = sqrt(omega0_b / omega0_a) - 1, so the resolution of this entry
    point is limited by the float representation of the ratio; for
    delta below ~1e-8 prefer :func:`channel_params`, which obtains delta
    from the geometry directly.

    Raises:
        PacketMismatchError: if the peak and width ratios disagree, i.e. the
            packets are not related by a single redshift channel.
    """
    peak_ratio = packet_b_received.omega0 / packet_a.omega0
    width_ratio = packet_b_received.sigma / packet_a.sigma
    if abs(peak_ratio - width_ratio) > _RATIO_CONSISTENCY_TOL * peak_ratio:
        raise PacketMismatchError(
            f"peak ratio {peak_ratio!r} and width ratio {width_ratio!r} disagree; "
            "packets are not related by a redshift channel"
        )
    delta = math.sqrt(peak_ratio) - 1.0
    return overlap_from_delta(packet_b_received, delta)


def overlap_perturbative(packet: GaussianWavepacket, delta: float) -> float:
    """Leading-order overlap Theta ~ 1 - x with x = delta^2 Omega_0^2 / (8 sigma^2).

    Valid when delta << (delta Omega_0 / sigma)^2 << 1; a
    :class:`PerturbativeRegimeWarning` is emitted when
    (delta Omega_0/sigma)^2 >= 0.1.
    """
    spread = (delta * packet.peak_to_width) ** 2
    if spread >= 0.1:
        warnings.warn(
            f"(delta*omega0/sigma)^2 = {spread:.3g} >= 0.1; perturbative overlap "
            "is outside its validity regime",
            PerturbativeRegimeWarning,
            stacklevel=2,
        )
    return 1.0 - small_parameter_x(packet, delta)


def channel_params(packet: GaussianWavepacket, geom: SchwarzschildGeometry,
                   pair: ObserverPair) -> ChannelParams:
    """Bundle (Theta, q, x, delta) for a link, with delta computed exactly.

    Theta and x depend only on the propagation-invariant ratio Omega_0/sigma,
    so ``packet`` may describe either end of the link.
    """
    delta = delta_exact(geom, pair)
    theta = overlap_from_delta(packet, delta)
    return ChannelParams(
        theta=theta,
        q=1.0 - theta * theta,
        x=small_parameter_x(packet, delta),
        delta=delta,
    )
