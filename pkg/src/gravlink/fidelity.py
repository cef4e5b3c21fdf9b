"""Uhlmann fidelity between Gaussian states via determinant closed forms.

For single-mode states with first moments X1, X2 and covariances Sigma_1,
Sigma_2 (vacuum = identity convention):

    lambda = det(i Omega Sigma_1 + 1) det(i Omega Sigma_2 + 1) / 4
    eta    = det(Sigma_1 + Sigma_2) / 4
    xi     = -(X2 - X1)^T (Sigma_1 + Sigma_2)^{-1} (X2 - X1)
    F      = e^xi / (sqrt(eta + lambda) - sqrt(lambda))

For two-mode states with vanishing first moments:

    gamma  = det(i Omega Sigma_1 i Omega Sigma_2 + 1) / 16
    lambda = det(i Omega Sigma_1 + 1) det(i Omega Sigma_2 + 1) / 16
    eta    = det(Sigma_1 + Sigma_2) / 16
    F      = 1 / (sqrt(gamma) + sqrt(lambda)
                  - sqrt((sqrt(gamma) + sqrt(lambda))^2 - eta))

lambda vanishes identically for pure states; it is computed directly rather
than special-cased.  All determinants are mathematically real; imaginary
residuals above tolerance raise instead of being silently discarded.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import FidelityNumericsError
from .gaussian import GaussianState, symplectic_form

_IMAG_TOL = 1e-10
_RADICAND_TOL = 1e-10


def _real_det(matrix: np.ndarray, label: str) -> float:
    """Determinant that must be real; complains about imaginary residue."""
    det = np.linalg.det(matrix)
    if np.iscomplexobj(det):
        scale = max(1.0, abs(det))
        if abs(det.imag) > _IMAG_TOL * scale:
            raise FidelityNumericsError(
                f"determinant {label} has imaginary residue {det.imag:.3e}"
            )
        det = det.real
    return float(det)


def _clip_nonnegative(value: float, label: str) -> float:
    if value < 0.0:
        if value < -_RADICAND_TOL * 1.0:
            raise FidelityNumericsError(f"{label} = {value:.3e} is negative beyond tolerance")
        return 0.0
    return value


def _check_pair(state1: GaussianState, state2: GaussianState, n_modes: int):
    if state1.n_modes != n_modes or state2.n_modes != n_modes:
        raise ValueError(
            f"expected two {n_modes}-mode states, got {state1.n_modes} and {state2.n_modes} modes"
        )


def _single_mode_parts(state1, state2):
    """(xi, log of the denominator) for the single-mode formula."""
    omega = symplectic_form(1)
    i_omega = 1j * omega
    lam = _real_det(i_omega @ state1.covariance + np.eye(2), "det(iOmegaSigma1+1)") \
        * _real_det(i_omega @ state2.covariance + np.eye(2), "det(iOmegaSigma2+1)") / 4.0
    lam = _clip_nonnegative(lam, "lambda")
    sigma_sum = state1.covariance + state2.covariance
    eta = float(np.linalg.det(sigma_sum)) / 4.0
    if eta <= 0.0:
        raise FidelityNumericsError(f"det(Sigma1+Sigma2) = {4 * eta:.3e} is not positive")
    diff = state2.first_moments - state1.first_moments
    if np.any(diff):
        xi = -float(diff @ np.linalg.solve(sigma_sum, diff))
    else:
        xi = 0.0
    denom_minus_one = math.sqrt(eta + lam) - math.sqrt(lam) - 1.0
    return xi, denom_minus_one


def fidelity_single_mode(state1: GaussianState, state2: GaussianState) -> float:
    """Uhlmann fidelity of two single-mode Gaussian states, moments allowed."""
    _check_pair(state1, state2, 1)
    xi, denom_minus_one = _single_mode_parts(state1, state2)
    return math.exp(xi) / (1.0 + denom_minus_one)


def _log_fidelity_single_mode(state1, state2) -> float:
    # log F = xi - log(denominator); exact when the denominator is exactly 1
    # (coherent-type families), which is what the Fisher-information limit needs.
    xi, denom_minus_one = _single_mode_parts(state1, state2)
    return xi - math.log1p(denom_minus_one)


def _two_mode_parts(state1, state2):
    """Denominator - 1 of the zero-mean two-mode formula."""
    omega = symplectic_form(2)
    i_omega = 1j * omega
    eye = np.eye(4)
    # i Omega Sigma1 i Omega Sigma2 is the real matrix -Omega Sigma1 Omega Sigma2.
    gamma = float(np.linalg.det(
        eye - omega @ state1.covariance @ omega @ state2.covariance
    )) / 16.0
    gamma = _clip_nonnegative(gamma, "gamma")
    lam = _real_det(i_omega @ state1.covariance + eye, "det(iOmegaSigma1+1)") \
        * _real_det(i_omega @ state2.covariance + eye, "det(iOmegaSigma2+1)") / 16.0
    lam = _clip_nonnegative(lam, "lambda")
    eta = float(np.linalg.det(state1.covariance + state2.covariance)) / 16.0
    if eta <= 0.0:
        raise FidelityNumericsError(f"det(Sigma1+Sigma2)/16 = {eta:.3e} is not positive")
    s = math.sqrt(gamma) + math.sqrt(lam)
    radicand = _clip_nonnegative(s * s - eta, "(sqrt(gamma)+sqrt(lambda))^2 - eta")
    return s - math.sqrt(radicand) - 1.0


def fidelity_two_mode_zero_mean(state1: GaussianState, state2: GaussianState) -> float:
    """Uhlmann fidelity of two two-mode Gaussian states with zero first moments.

    Raises:
        ValueError: if either state carries nonzero first moments; displaced
            two-mode states are outside this closed form (use the single-mode
            variant for displaced one-mode problems).
    """
    _check_pair(state1, state2, 2)
    for k, state in ((1, state1), (2, state2)):
        worst = float(np.max(np.abs(state.first_moments)))
        if worst > 1e-12:
            raise ValueError(
                f"state{k} has nonzero first moments (max |<X>| = {worst:.3e}); "
                "the two-mode closed form requires zero-mean states"
            )
    return 1.0 / (1.0 + _two_mode_parts(state1, state2))


def _log_fidelity_two_mode_zero_mean(state1, state2) -> float:
    return -math.log1p(_two_mode_parts(state1, state2))


def log_fidelity(state1: GaussianState, state2: GaussianState) -> float:
    """log of the Uhlmann fidelity, dispatched on mode count.

    Cancellation-friendly entry point for fidelity-decay limits: for states
    differing only in first moments the result is exact to machine precision.
    """
    if state1.n_modes == 1:
        return _log_fidelity_single_mode(state1, state2)
    if state1.n_modes == 2:
        return _log_fidelity_two_mode_zero_mean(state1, state2)
    raise ValueError(f"fidelity closed forms cover 1 or 2 modes, got {state1.n_modes}")


def fidelity(state1: GaussianState, state2: GaussianState) -> float:
    """Uhlmann fidelity, dispatched on mode count (1 or 2 modes)."""
    if state1.n_modes == 1:
        return fidelity_single_mode(state1, state2)
    if state1.n_modes == 2:
        return fidelity_two_mode_zero_mean(state1, state2)
    raise ValueError(f"fidelity closed forms cover 1 or 2 modes, got {state1.n_modes}")
