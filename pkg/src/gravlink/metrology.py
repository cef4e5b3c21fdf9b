"""Quantum Fisher information and Cramér-Rao precision bounds for the redshift channel.

Three probe schemes are covered, all feeding the same channel model
b -> Theta b + sqrt(1 - Theta^2) c with Theta = 1 - x:

* ``coherent``: single-mode coherent probe |alpha>; information lives in the
  first moments, H = 4 |alpha|^2 and  Dx/x >= 1 / (2 sqrt(N) x |alpha|).
* ``single_mode_squeezed``: squeezed (optionally thermal) probe; for the pure
  case the closed-form information is

      H(Theta) = 2 Theta_dot^2 (1 - 2 Theta^2 + 2 Theta^4)
                 / ((1 - Theta^2) (Theta^2 (1 - Theta^2) + (2 sinh^2 r)^{-1}))

  and the published series bound reads Dx/x >= 1 / (2 sqrt(N) sqrt(x) sinh r).
* ``two_mode_squeezed``: entangled two-packet probe at peaks Omega_1, Omega_2
  through two channels Theta_i = 1 - delta^2 Omega_i^2 / (8 sigma^2).

Published closed forms for the Schwarzschild-radius and separation bounds are
evaluated directly and cross-checked against chain-rule propagation through
delta.  Note a documented tension: the closed-form-information path gives
x-bounds sqrt(2) *above* the published single-mode series bound and a factor
2 *below* the published two-mode one; both paths are exposed
(:func:`scheme_relative_bound_x` vs :func:`relative_bound_x_qfi_path`) and
never silently merged.

The multi-parameter Fisher matrix for (r_s, L) is rank one because both
parameters enter only through delta; its determinant vanishes and its entries
obey fixed proportionality ratios regardless of the central-matrix convention
(``literal`` quadratic form or its ``inverse``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Sequence

import numpy as np

from .errors import ExtrapolationError, SingularFormulaError
from .fidelity import log_fidelity
from .gaussian import (
    GaussianState,
    apply_symplectic,
    beam_splitter,
    coherent,
    partial_trace,
    squeezed,
    tensor,
    thermal,
    two_channel_beam_splitter,
    two_mode_squeezed,
    vacuum,
)
from .spacetime import ObserverPair, SchwarzschildGeometry, delta_approx
from .wavepacket import GaussianWavepacket

SchemeKind = Literal["coherent", "single_mode_squeezed", "two_mode_squeezed"]

# Below this distance from Theta = 1 the closed-form information is switched
# to the series bound; the closed form is 0/0-prone there.
THETA_SERIES_SWITCH = 1e-6


@dataclass(frozen=True)
class SchemeSpec:
    """Probe scheme and its resources.

    n_bar is |alpha|^2 for the coherent scheme and sinh^2 r for the squeezed
    ones, the photon-number resource used for fair comparisons.  omega1 and
    omega2 are the two-packet peak frequencies of the entangled scheme; they
    default to the scenario packet's peak.
    """

    kind: SchemeKind
    alpha: complex = 0.0
    r: float = 0.0
    psi: float = 0.0
    mu_a: float = 1.0
    mu_b: float = 1.0
    omega1: Optional[float] = None
    omega2: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("coherent", "single_mode_squeezed", "two_mode_squeezed"):
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.mu_a < 1.0 or self.mu_b < 1.0:
            raise ValueError(f"mixedness parameters must be >= 1, got mu_a={self.mu_a}, mu_b={self.mu_b}")

    @property
    def n_bar(self) -> float:
        if self.kind == "coherent":
            return abs(self.alpha) ** 2
        return math.sinh(self.r) ** 2

    @classmethod
    def coherent_probe(cls, alpha: complex) -> "SchemeSpec":
        return cls(kind="coherent", alpha=alpha)

    @classmethod
    def squeezed_probe(cls, r: float, psi: float = 0.0, mu_a: float = 1.0,
                       mu_b: float = 1.0) -> "SchemeSpec":
        return cls(kind="single_mode_squeezed", r=r, psi=psi, mu_a=mu_a, mu_b=mu_b)

    @classmethod
    def entangled_probe(cls, r: float, omega1: Optional[float] = None,
                        omega2: Optional[float] = None) -> "SchemeSpec":
        return cls(kind="two_mode_squeezed", r=r, omega1=omega1, omega2=omega2)


@dataclass(frozen=True)
class PrecisionBound:
    """Cramér-Rao relative-error bound with its provenance."""

    parameter: str
    relative_error_bound: float
    n_measurements: int
    scheme: SchemeSpec
    tag: str = ""
    note: str = ""


@dataclass(frozen=True)
class QfiEstimate:
    """Extrapolated quantum Fisher information with an error estimate."""

    value: float
    error_estimate: float
    step_used: float


@dataclass(frozen=True)
class FisherMatrix:
    """2x2 Fisher matrix for (r_s, L), rank one by construction."""

    matrix: np.ndarray
    params: tuple = ("r_s", "L")
    central_matrix: str = "literal"
    q_delta: float = 0.0
    grad_delta: tuple = (0.0, 0.0)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def ratio_LL(self) -> float:
        """Q_LL / Q_rsrs."""
        return float(self.matrix[1, 1] / self.matrix[0, 0])

    @property
    def ratio_offdiag(self) -> float:
        """Q_rsL / Q_rsrs."""
        return float(self.matrix[0, 1] / self.matrix[0, 0])


# ---------------------------------------------------------------------------
# channel output states
# ---------------------------------------------------------------------------

def reduced_state(scheme: SchemeSpec, theta: float,
                  convention: str = "single") -> GaussianState:
    """State of the kept mode(s) after the channel at overlap theta.

    Built through the full pipeline: probe tensor ancilla, symplectic mixer,
    partial trace.  The two-mode scheme uses theta on both channels; use
    :func:`reduced_state_two_mode` for distinct overlaps.
    """
    if scheme.kind == "two_mode_squeezed":
        return reduced_state_two_mode(scheme, theta, theta)
    if scheme.kind == "coherent":
        probe = coherent(scheme.alpha)
        ancilla = vacuum(1)
    else:
        probe = squeezed(scheme.r, scheme.psi, scheme.mu_a, convention=convention)
        ancilla = thermal(scheme.mu_b)
    mixed = apply_symplectic(tensor(probe, ancilla), beam_splitter(theta))
    return partial_trace(mixed, [0])


def reduced_state_two_mode(scheme: SchemeSpec, theta1: float, theta2: float) -> GaussianState:
    """Two kept modes of the entangled scheme after channels (theta1, theta2)."""
    if scheme.kind != "two_mode_squeezed":
        raise ValueError(f"two-mode reduction needs the entangled scheme, got {scheme.kind!r}")
    init = tensor(two_mode_squeezed(scheme.r), vacuum(2))
    mixed = apply_symplectic(init, two_channel_beam_splitter(theta1, theta2))
    return partial_trace(mixed, [0, 1])


def reduced_state_derivative(scheme: SchemeSpec, theta: float,
                             convention: str = "single"):
    """Analytic (dSigma/dtheta, d<X>/dtheta) of the reduced channel output."""
    if scheme.kind == "coherent":
        alpha = complex(scheme.alpha)
        d_mean = math.sqrt(2.0) * np.array([alpha.real, alpha.imag])
        return np.zeros((2, 2)), d_mean
    if scheme.kind == "single_mode_squeezed":
        sigma0 = squeezed(scheme.r, scheme.psi, scheme.mu_a, convention=convention).covariance
        d_cov = 2.0 * theta * (sigma0 - scheme.mu_b * np.eye(2))
        return d_cov, np.zeros(2)
    raise ValueError("two-mode derivatives are per-channel; use the delta-family helpers")


# ---------------------------------------------------------------------------
# quantum Fisher information
# ---------------------------------------------------------------------------

def _fidelity_decrement(family, theta, h) -> float:
    """(1 - sqrt(F)) between family(theta -/+ h/2), cancellation-safe."""
    log_f = log_fidelity(family(theta - 0.5 * h), family(theta + 0.5 * h))
    return -math.expm1(0.5 * log_f)


def qfi_from_fidelity(state_family: Callable[[float], GaussianState], theta0: float,
                      initial_step: Optional[float] = None,
                      max_step: Optional[float] = None,
                      relative_tolerance: float = 1e-4) -> QfiEstimate:
    """Quantum Fisher information H(theta0) = lim 8 (1 - sqrt(F)) / dtheta^2.

    Uses symmetric two-point fidelities, so the decrement is even in the step
    and two levels of Richardson extrapolation over four step halvings cancel
    the h^2 and h^4 terms.  The initial step is 1e-4 * max(|theta0|, 1),
    enlarged automatically (up to ``max_step``) when the fidelity decrement is
    too small to resolve in double precision.

    Raises:
        ExtrapolationError: if the extrapolation error estimate exceeds
            ``relative_tolerance`` times the value.
    """
    h0 = initial_step if initial_step is not None else 1e-4 * max(abs(theta0), 1.0)
    if max_step is None:
        max_step = 0.05 * max(abs(theta0), 1.0)

    # Resolve cancellation: aim for a decrement around 1e-5 at the base step so
    # the finest halved step still carries ~10 significant digits.
    probe = _fidelity_decrement(state_family, theta0, h0)
    if 0.0 < probe < 1e-7:
        h0 = min(h0 * math.sqrt(1e-5 / probe), max_step)

    steps = [h0 / 2**k for k in range(5)]
    g = [8.0 * _fidelity_decrement(state_family, theta0, h) / h**2 for h in steps]
    level1 = [(4.0 * g[i + 1] - g[i]) / 3.0 for i in range(4)]
    level2 = [(16.0 * level1[i + 1] - level1[i]) / 15.0 for i in range(3)]
    value = level2[-1]
    error = abs(level2[-1] - level2[-2])

    scale = max(abs(value), 1e-300)
    if error > relative_tolerance * scale:
        raise ExtrapolationError(
            f"QFI extrapolation did not converge: value {value:.6g}, "
            f"error estimate {error:.3g}, steps {steps[0]:.3g}..{steps[-1]:.3g}"
        )
    return QfiEstimate(value=value, error_estimate=error, step_used=h0)


def qfi_closed_form_appendix(theta: float, theta_dot: float, r: float) -> float:
    """Closed-form information of the pure squeezed probe.

    H(Theta) = 2 Theta_dot^2 (1 - 2 Theta^2 + 2 Theta^4)
               / ((1 - Theta^2) (Theta^2 (1 - Theta^2) + (2 sinh^2 r)^{-1})).

    This is the quadratic fidelity-decay coefficient of the reduced channel
    output Sigma(Theta) = Theta^2 sigma_0 + (1 - Theta^2) 1; it matches the
    fidelity-limit definition of H and makes 1/sqrt(N H) coincide with the
    quoted uncertainty expression.  (A 4x larger variant circulates, traceable
    to a slipped denominator in the same expansion; see the reproduction
    report.)  theta_dot rescales to any parameter entering through Theta.
    Returns 0 for r = 0 (a vacuum probe carries no information).

    Raises:
        SingularFormulaError: at theta = 1, where the expression is 0/0; use
            :func:`theta_uncertainty_bound`, which switches to the series form.
    """
    if not 0.0 < theta <= 1.0:
        raise ValueError(f"theta must lie in (0, 1], got {theta}")
    if theta == 1.0:
        raise SingularFormulaError(
            "closed-form information is singular at theta = 1; use the series bound path"
        )
    if r == 0.0:
        return 0.0
    numerator = 1.0 - 2.0 * theta**2 + 2.0 * theta**4
    denominator = (1.0 - theta**2) * (theta**2 * (1.0 - theta**2)
                                      + 1.0 / (2.0 * math.sinh(r) ** 2))
    return 2.0 * theta_dot**2 * numerator / denominator


def theta_uncertainty_bound(theta: float, r: float, n_measurements: int,
                            theta_dot: float = 1.0) -> float:
    """Cramér-Rao bound DTheta >= 1/sqrt(N H) for the pure squeezed probe.

    Within 1e-6 of theta = 1 the closed form collapses to 0/0 and the series
    limit H -> 8 theta_dot^2 sinh^2 r / (1 - theta) is used instead.
    """
    if n_measurements < 1:
        raise ValueError(f"n_measurements must be >= 1, got {n_measurements}")
    if r == 0.0:
        return math.inf
    if 1.0 - theta < THETA_SERIES_SWITCH:
        h = 8.0 * theta_dot**2 * math.sinh(r) ** 2 / max(1.0 - theta, 1e-300)
    else:
        h = qfi_closed_form_appendix(theta, theta_dot, r)
    return 1.0 / math.sqrt(n_measurements * h)


def general_mixed_fidelity_coefficient(r: float, mu_a: float, mu_b: float) -> float:
    """Coefficient c in F = 1 - c dx^2 for the mixed squeezed probe near x = 0.

    c = [mu_a^2 + mu_a^4 + mu_b^2
         + mu_b mu_a (mu_a mu_b cosh 4r - 2 (mu_a^2 + 1) cosh 2r)] / (mu_a^4 - 1)

    Raises:
        SingularFormulaError: for mu_a <= 1; the expansion breaks down for
            pure probes, where the closed-form information path applies.
    """
    if mu_a <= 1.0:
        raise SingularFormulaError(
            f"mixed-probe expansion is singular at mu_a <= 1 (got {mu_a}); "
            "use the pure-probe closed form instead"
        )
    if mu_b < 1.0:
        raise ValueError(f"mu_b must be >= 1, got {mu_b}")
    numerator = (mu_a**2 + mu_a**4 + mu_b**2
                 + mu_b * mu_a * (mu_a * mu_b * math.cosh(4.0 * r)
                                  - 2.0 * (mu_a**2 + 1.0) * math.cosh(2.0 * r)))
    return numerator / (mu_a**4 - 1.0)


# ---------------------------------------------------------------------------
# relative-error bounds
# ---------------------------------------------------------------------------

def _infinite_bound(parameter: str, n: int, scheme: SchemeSpec, why: str) -> PrecisionBound:
    return PrecisionBound(parameter=parameter, relative_error_bound=math.inf,
                          n_measurements=n, scheme=scheme, tag="degenerate",
                          note=f"infinite bound: {why}")


def scheme_relative_bound_x(scheme: SchemeSpec, x: float, n_measurements: int) -> PrecisionBound:
    """Published relative-error bound on the small parameter x.

    coherent:             Dx/x >= 1 / (2 sqrt(N) x |alpha|)
    single-mode squeezed: Dx/x >= 1 / (2 sqrt(N) sqrt(x) sinh r)
    two-mode squeezed:    Dx/x >= 1 / (sqrt(N) sqrt(x) sinh r)
        (derived from the published r_s/L closed forms at equal peaks; x is
        evaluated at the rms peak frequency)

    Zero probe resources give an infinite-bound sentinel rather than an error.
    """
    if x <= 0.0:
        raise ValueError(f"x must be positive, got {x}")
    if n_measurements < 1:
        raise ValueError(f"n_measurements must be >= 1, got {n_measurements}")
    root_n = math.sqrt(n_measurements)
    if scheme.kind == "coherent":
        amp = abs(scheme.alpha)
        if amp == 0.0:
            return _infinite_bound("x", n_measurements, scheme, "coherent amplitude is zero")
        value = 1.0 / (2.0 * root_n * x * amp)
        tag = "bound-x-coherent"
    elif scheme.kind == "single_mode_squeezed":
        if scheme.r == 0.0:
            return _infinite_bound("x", n_measurements, scheme, "squeezing is zero")
        value = 1.0 / (2.0 * root_n * math.sqrt(x) * math.sinh(scheme.r))
        tag = "bound-x-squeezed"
    else:
        if scheme.r == 0.0:
            return _infinite_bound("x", n_measurements, scheme, "squeezing is zero")
        value = 1.0 / (root_n * math.sqrt(x) * math.sinh(scheme.r))
        tag = "bound-x-two-mode"
    return PrecisionBound(parameter="x", relative_error_bound=value,
                          n_measurements=n_measurements, scheme=scheme, tag=tag)


def _two_mode_peak_ratios(scheme: SchemeSpec, packet: GaussianWavepacket):
    omega1 = scheme.omega1 if scheme.omega1 is not None else packet.omega0
    omega2 = scheme.omega2 if scheme.omega2 is not None else packet.omega0
    return omega1 / packet.sigma, omega2 / packet.sigma


def _relative_delta_uncertainty(scheme: SchemeSpec, geom, pair,
                                packet: GaussianWavepacket, n: int) -> float:
    """Ddelta / |delta| implied by the published x-bounds (chain rule through x)."""
    delta = delta_approx(geom, pair)
    if delta == 0.0:
        return math.inf
    if scheme.kind == "two_mode_squeezed":
        rho1, rho2 = _two_mode_peak_ratios(scheme, packet)
        x = delta**2 * (rho1**2 + rho2**2) / 16.0  # x at the rms peak
    else:
        x = delta**2 * packet.peak_to_width**2 / 8.0
    bound_x = scheme_relative_bound_x(scheme, x, n).relative_error_bound
    return 0.5 * bound_x  # x ~ delta^2, so dx/x = 2 ddelta/delta


def bound_rs(scheme: SchemeSpec, geom: SchwarzschildGeometry, pair: ObserverPair,
             packet: GaussianWavepacket, n_measurements: int,
             method: str = "closed_form") -> PrecisionBound:
    """Relative-error bound on the Schwarzschild radius.

    Published closed forms (``method="closed_form"``):

        single-mode squeezed:
            Drs/rs >= 2 sqrt(2) sigma r_a (r_a + L) / (sqrt(N) Omega r_s L sinh r)
        two-mode squeezed:
            Drs/rs >= 8 sigma r_a (r_a + L) / (sqrt(N (Omega_1^2 + Omega_2^2)) r_s L sinh r)

    The coherent scheme has no published closed form; it is propagated through
    x.  ``method="chain_rule"`` routes every scheme through
    :func:`scheme_relative_bound_x` and the delta Jacobian; the two paths
    agree to rounding because delta is proportional to r_s.
    """
    length = pair.separation
    if length == 0.0:
        return _infinite_bound("r_s", n_measurements, scheme, "observers at the same height")
    if scheme.n_bar == 0.0:
        return _infinite_bound("r_s", n_measurements, scheme, "probe carries no photons")

    if method == "chain_rule" or scheme.kind == "coherent":
        # delta is proportional to r_s at leading order, so Drs/rs = Ddelta/|delta|.
        value = _relative_delta_uncertainty(scheme, geom, pair, packet, n_measurements)
        tag = "bound-rs-chain"
    elif method != "closed_form":
        raise ValueError(f"unknown method {method!r}")
    elif scheme.kind == "single_mode_squeezed":
        value = (2.0 * math.sqrt(2.0) * pair.r_a * (pair.r_a + length)
                 / (math.sqrt(n_measurements) * packet.peak_to_width
                    * geom.r_s * length * math.sinh(scheme.r)))
        value = abs(value)
        tag = "bound-rs-single-mode"
    else:
        rho1, rho2 = _two_mode_peak_ratios(scheme, packet)
        value = (8.0 * pair.r_a * (pair.r_a + length)
                 / (math.sqrt(n_measurements * (rho1**2 + rho2**2))
                    * geom.r_s * length * math.sinh(scheme.r)))
        value = abs(value)
        tag = "bound-rs-two-mode"
    return PrecisionBound(parameter="r_s", relative_error_bound=value,
                          n_measurements=n_measurements, scheme=scheme, tag=tag)


def bound_L(scheme: SchemeSpec, geom: SchwarzschildGeometry, pair: ObserverPair,
            packet: GaussianWavepacket, n_measurements: int,
            method: str = "closed_form") -> PrecisionBound:
    """Relative-error bound on the observer separation L.

    Published closed forms:

        single-mode squeezed (emitter radius held fixed):
            DL/L >= 2 sqrt(2) sigma (r_a + L)^2 / (sqrt(N) Omega r_s L sinh r)
        two-mode squeezed (receiver radius held fixed):
            DL/L >= 8 sigma r_a^2 / (sqrt(N (Omega_1^2 + Omega_2^2)) r_s L sinh r)

    The two published forms differ in which endpoint of the link is treated
    as known; the ratio identities (DL/L)/(Drs/rs) = 1 + L/r_a (single-mode)
    and (Drs/rs)/(DL/L) = (r_a + L)/r_a (two-mode) hold exactly.
    """
    length = pair.separation
    if length == 0.0:
        return _infinite_bound("L", n_measurements, scheme, "observers at the same height")
    if scheme.n_bar == 0.0:
        return _infinite_bound("L", n_measurements, scheme, "probe carries no photons")

    rel_delta = _relative_delta_uncertainty(scheme, geom, pair, packet, n_measurements)
    if scheme.kind == "two_mode_squeezed":
        if method == "closed_form":
            rho1, rho2 = _two_mode_peak_ratios(scheme, packet)
            value = abs(8.0 * pair.r_a**2
                        / (math.sqrt(n_measurements * (rho1**2 + rho2**2))
                           * geom.r_s * length * math.sinh(scheme.r)))
        elif method == "chain_rule":
            # |delta| / (L |ddelta/dL|) with r_b fixed equals r_a / (r_a + L).
            value = rel_delta * pair.r_a / (pair.r_a + length)
        else:
            raise ValueError(f"unknown method {method!r}")
        tag = "bound-L-two-mode"
        note = "receiver radius held fixed"
    else:
        # |delta| / (L |ddelta/dL|) with r_a fixed equals (r_a + L) / r_a.
        value = rel_delta * (pair.r_a + length) / pair.r_a
        if scheme.kind == "single_mode_squeezed" and method == "closed_form":
            closed = abs(2.0 * math.sqrt(2.0) * (pair.r_a + length) ** 2
                         / (math.sqrt(n_measurements) * packet.peak_to_width
                            * geom.r_s * length * math.sinh(scheme.r)))
            value = closed
        tag = f"bound-L-{'single-mode' if scheme.kind == 'single_mode_squeezed' else 'coherent'}"
        note = "emitter radius held fixed"
    return PrecisionBound(parameter="L", relative_error_bound=value,
                          n_measurements=n_measurements, scheme=scheme,
                          tag=tag, note=note)


def figure_of_merit(geom: SchwarzschildGeometry, pair: ObserverPair,
                    packet: GaussianWavepacket, r: float, n_measurements: int) -> float:
    """Published error-scale figure sigma r_a^2 / (Omega sinh r sqrt(N) r_s L)."""
    length = pair.separation
    return abs(pair.r_a**2 / (packet.peak_to_width * math.sinh(r)
                              * math.sqrt(n_measurements) * geom.r_s * length))


@dataclass(frozen=True)
class SchemeComparison:
    """Equal-photon-number comparison of the coherent and squeezed x-bounds."""

    x: float
    n_bar: float
    n_measurements: int
    coherent_bound: float
    squeezed_bound: float

    @property
    def squeezed_to_coherent(self) -> float:
        """Equals sqrt(x); below 1 the squeezed probe wins."""
        return self.squeezed_bound / self.coherent_bound


def compare_schemes(x: float, n_bar: float, n_measurements: int) -> SchemeComparison:
    """Compare the x-bounds at a fixed photon-number resource n_bar.

    coherent:  1 / (2 sqrt(N) x sqrt(n_bar))
    squeezed:  1 / (2 sqrt(N) sqrt(x) sqrt(n_bar))
    """
    if x <= 0.0 or n_bar <= 0.0:
        raise ValueError("x and n_bar must be positive")
    root = 2.0 * math.sqrt(n_measurements) * math.sqrt(n_bar)
    return SchemeComparison(
        x=x, n_bar=n_bar, n_measurements=n_measurements,
        coherent_bound=1.0 / (root * x),
        squeezed_bound=1.0 / (root * math.sqrt(x)),
    )


# ---------------------------------------------------------------------------
# multi-parameter Fisher matrix
# ---------------------------------------------------------------------------

def _delta_family_derivatives(scheme: SchemeSpec, packet: GaussianWavepacket, delta: float):
    """(Sigma, dSigma/ddelta, <X>, d<X>/ddelta) of the reduced output at delta.

    Overlaps follow the narrowband model Theta_i = 1 - delta^2 Omega_i^2/(8 sigma^2).
    """
    if scheme.kind == "two_mode_squeezed":
        rho1, rho2 = _two_mode_peak_ratios(scheme, packet)
        thetas = [1.0 - delta**2 * rho**2 / 8.0 for rho in (rho1, rho2)]
        d_thetas = [-delta * rho**2 / 4.0 for rho in (rho1, rho2)]
        state = reduced_state_two_mode(scheme, *thetas)
        sinh2r = math.sinh(scheme.r) ** 2
        s2r = math.sinh(2.0 * scheme.r)
        from .gaussian import PAULI_X
        d_cov = np.zeros((4, 4))
        d_cov[:2, :2] = 4.0 * sinh2r * thetas[0] * d_thetas[0] * np.eye(2)
        d_cov[2:, 2:] = 4.0 * sinh2r * thetas[1] * d_thetas[1] * np.eye(2)
        off = s2r * (d_thetas[0] * thetas[1] + thetas[0] * d_thetas[1]) * PAULI_X
        d_cov[:2, 2:] = off
        d_cov[2:, :2] = off
        return state, d_cov, state.first_moments, np.zeros(4)
    rho = packet.peak_to_width
    theta = 1.0 - delta**2 * rho**2 / 8.0
    d_theta = -delta * rho**2 / 4.0
    state = reduced_state(scheme, theta)
    d_cov, d_mean = reduced_state_derivative(scheme, theta)
    return state, d_theta * d_cov, state.first_moments, d_theta * d_mean


def fisher_matrix_rs_L(scheme: SchemeSpec, geom: SchwarzschildGeometry,
                       pair: ObserverPair, packet: GaussianWavepacket,
                       central_matrix: str = "literal") -> FisherMatrix:
    """Fisher matrix Q for simultaneous estimation of (r_s, L).

    Both parameters enter only through delta, so
    Q_ij = (ddelta/di)(ddelta/dj) q_delta with a scheme-dependent scalar
    q_delta; Q is rank one, Det[Q] = 0, and

        Q_LL   / Q_rsrs = r_a^2 r_s^2 / (L^2 (L + r_a)^2)
        Q_rs_L / Q_rsrs = r_a r_s / (L (L + r_a)).

    ``central_matrix`` selects the quadratic form on vectorized covariance
    derivatives: ``"literal"`` uses (Sigma (x) Sigma - Omega (x) Omega),
    ``"inverse"`` its (pseudo-)inverse, which is the normalization matching
    the single-parameter information.  First-moment information is included
    through 2 dX^T Sigma^{-1} dX in both modes (it is what carries the
    coherent scheme).
    """
    if central_matrix not in ("literal", "inverse"):
        raise ValueError(f"central_matrix must be 'literal' or 'inverse', got {central_matrix!r}")
    delta = delta_approx(geom, pair)
    length = pair.separation
    state, d_cov, _, d_mean = _delta_family_derivatives(scheme, packet, delta)

    q_delta = 0.0
    v = d_cov.reshape(-1)
    if np.any(v):
        from .gaussian import symplectic_form
        sigma = state.covariance
        omega = symplectic_form(state.n_modes)
        central = np.kron(sigma, sigma) - np.kron(omega, omega)
        if central_matrix == "literal":
            q_delta += 2.0 * float(v @ central @ v)
        else:
            q_delta += 0.5 * float(v @ np.linalg.pinv(central, hermitian=True) @ v)
    if np.any(d_mean):
        q_delta += 2.0 * float(d_mean @ np.linalg.solve(state.covariance, d_mean))

    grad = np.array([
        delta / geom.r_s,                                # d delta / d r_s
        -(geom.r_s / 4.0) / (pair.r_a + length) ** 2,    # d delta / d L, r_a fixed
    ])
    matrix = q_delta * np.outer(grad, grad)
    return FisherMatrix(matrix=matrix, central_matrix=central_matrix,
                        q_delta=q_delta, grad_delta=(grad[0], grad[1]))
