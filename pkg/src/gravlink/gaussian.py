"""n-mode Gaussian states in the covariance matrix formalism.

Conventions: quadratures X_{2n-1} = (a_n + a_n^dag)/sqrt(2),
X_{2n} = -i (a_n - a_n^dag)/sqrt(2), ordered (X1, P1, X2, P2, ...).
The covariance matrix is Sigma_ij = <X_i X_j + X_j X_i> - 2 <X_i><X_j>,
so the vacuum has Sigma = identity and a coherent state |alpha> has first
moments sqrt(2) (Re alpha, Im alpha).

Gaussian unitaries act as real symplectic matrices S with S Omega S^T = Omega,
where Omega is the block-diagonal symplectic form.  States are immutable;
every operation returns a new state.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NonSymplecticError, StateValidationError

SYMPLECTIC_TOL = 1e-12
SYMMETRY_TOL = 1e-12
BONA_FIDE_TOL = 1e-10

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
# Single-mode symplectic form (-i sigma_y as a real matrix).
OMEGA_1 = np.array([[0.0, -1.0], [1.0, 0.0]])


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form for n modes."""
    return np.kron(np.eye(n_modes), OMEGA_1)


def direct_sum(*blocks: np.ndarray) -> np.ndarray:
    """Direct sum of square matrices (tensor product of the operations)."""
    total = sum(b.shape[0] for b in blocks)
    out = np.zeros((total, total))
    k = 0
    for b in blocks:
        m = b.shape[0]
        out[k:k + m, k:k + m] = b
        k += m
    return out


def symplectic_residual(matrix: np.ndarray) -> float:
    """Max-norm of S Omega S^T - Omega."""
    n = matrix.shape[0] // 2
    omega = symplectic_form(n)
    return float(np.max(np.abs(matrix @ omega @ matrix.T - omega)))


def is_symplectic(matrix: np.ndarray, tol: float = SYMPLECTIC_TOL) -> bool:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
        return False
    return symplectic_residual(matrix) <= tol


def symplectic_eigenvalues(covariance: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a covariance matrix, sorted ascending.

    These are the moduli of the (purely imaginary) eigenvalues of
    Omega @ Sigma; a bona fide state has all of them >= 1 and a pure state
    has them all equal to 1.
    """
    covariance = np.asarray(covariance, dtype=float)
    n = covariance.shape[0] // 2
    eigs = np.linalg.eigvals(symplectic_form(n) @ covariance)
    nus = np.sort(np.abs(eigs))
    return nus[::2][: n] if len(nus) == 2 * n else nus[:n]


class GaussianState:
    """Immutable first moments + covariance matrix of an n-mode Gaussian state."""

    __slots__ = ("_first_moments", "_covariance", "_n_modes")

    def __init__(self, first_moments, covariance, validate: bool = True):
        mean = np.array(first_moments, dtype=float).reshape(-1)
        cov = np.array(covariance, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
            raise StateValidationError(f"covariance must be square, got shape {cov.shape}")
        dim = cov.shape[0]
        if dim % 2 or dim == 0:
            raise StateValidationError(f"covariance dimension must be a positive even number, got {dim}")
        if mean.shape[0] != dim:
            raise StateValidationError(
                f"first moments have length {mean.shape[0]}, expected {dim}"
            )
        if validate:
            scale = max(1.0, float(np.max(np.abs(cov))))
            asym = float(np.max(np.abs(cov - cov.T)))
            if asym > SYMMETRY_TOL * scale:
                raise StateValidationError(f"covariance is not symmetric (residual {asym:.3e})")
            cov = 0.5 * (cov + cov.T)
            nu_min = float(symplectic_eigenvalues(cov)[0])
            if nu_min < 1.0 - BONA_FIDE_TOL:
                raise StateValidationError(
                    f"covariance violates the uncertainty relation "
                    f"(smallest symplectic eigenvalue {nu_min:.12g})"
                )
        mean.setflags(write=False)
        cov.setflags(write=False)
        self._first_moments = mean
        self._covariance = cov
        self._n_modes = dim // 2

    @property
    def n_modes(self) -> int:
        return self._n_modes

    @property
    def first_moments(self) -> np.ndarray:
        return self._first_moments

    @property
    def covariance(self) -> np.ndarray:
        return self._covariance

    def symplectic_eigenvalues(self) -> np.ndarray:
        return symplectic_eigenvalues(self._covariance)

    def is_pure(self, tol: float = BONA_FIDE_TOL) -> bool:
        return bool(abs(float(np.linalg.det(self._covariance)) - 1.0) <= tol)

    def __repr__(self):
        return f"GaussianState(n_modes={self._n_modes})"

    def to_json_dict(self) -> dict:
        """JSON-ready dict: mode count, first moments, row-major covariance."""
        return {
            "n_modes": self._n_modes,
            "first_moments": self._first_moments.tolist(),
            "covariance": self._covariance.tolist(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "GaussianState":
        state = cls(data["first_moments"], data["covariance"])
        if state.n_modes != data["n_modes"]:
            raise StateValidationError(
                f"declared n_modes {data['n_modes']} does not match covariance shape"
            )
        return state

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json(cls, text: str) -> "GaussianState":
        return cls.from_json_dict(json.loads(text))


# ---------------------------------------------------------------------------
# standard states
# ---------------------------------------------------------------------------

def vacuum(n_modes: int) -> GaussianState:
    """n-mode vacuum: zero moments, identity covariance."""
    return GaussianState(np.zeros(2 * n_modes), np.eye(2 * n_modes), validate=False)


def coherent(alpha: complex) -> GaussianState:
    """Single-mode coherent state: identity covariance, moments sqrt(2)(Re, Im)."""
    alpha = complex(alpha)
    mean = math.sqrt(2.0) * np.array([alpha.real, alpha.imag])
    return GaussianState(mean, np.eye(2), validate=False)


def thermal(mu: float) -> GaussianState:
    """Single-mode thermal state with covariance mu * identity, mu >= 1."""
    if mu < 1.0:
        raise StateValidationError(f"thermal parameter must satisfy mu >= 1, got {mu}")
    return GaussianState(np.zeros(2), mu * np.eye(2), validate=False)


def squeezed(r: float, psi: float = 0.0, mu: float = 1.0,
             convention: str = "single") -> GaussianState:
    """Single-mode squeezed thermal state.

    At psi = 0 the covariance is diag(mu e^{2r}, mu e^{-2r}); a squeezing
    angle psi rotates it, giving entries
    mu (cosh 2r +/- cos 2psi sinh 2r) on the diagonal and
    -mu sin 2psi sinh 2r off it.  mu = 1 is pure.

    ``convention="appendix"`` selects the alternative normalization
    diag(mu e^{r}, mu e^{-r}) (half the squeezing exponent), kept for
    cross-checking the reference derivation; "single" is the convention whose
    determinant chain matches the published closed forms.
    """
    if mu < 1.0:
        raise StateValidationError(f"mixedness parameter must satisfy mu >= 1, got {mu}")
    if convention == "single":
        exponent = 2.0 * r
    elif convention == "appendix":
        exponent = r
    else:
        raise ValueError(f"unknown squeezing convention {convention!r}")
    rot = rotation(psi)
    cov = rot @ np.diag([mu * math.exp(exponent), mu * math.exp(-exponent)]) @ rot.T
    return GaussianState(np.zeros(2), cov)


def two_mode_squeezed(r: float) -> GaussianState:
    """Two-mode squeezed vacuum: cosh(2r) diagonal blocks, sinh(2r) sigma_x off-diagonal."""
    c, s = math.cosh(2.0 * r), math.sinh(2.0 * r)
    cov = np.block([[c * np.eye(2), s * PAULI_X], [s * PAULI_X, c * np.eye(2)]])
    return GaussianState(np.zeros(4), cov)


# ---------------------------------------------------------------------------
# symplectic transformations
# ---------------------------------------------------------------------------

def rotation(phi: float) -> np.ndarray:
    """Phase-space rotation of one mode (a -> a e^{-i phi})."""
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, s], [-s, c]])


def squeezer(r: float) -> np.ndarray:
    """Single-mode squeezer diag(e^r, e^{-r})."""
    return np.diag([math.exp(r), math.exp(-r)])


def beam_splitter(theta: float) -> np.ndarray:
    """Two-mode mixer with transmission amplitude theta in [0, 1].

    S = [[theta I2, sqrt(1-theta^2) I2], [-sqrt(1-theta^2) I2, theta I2]],
    the symplectic image of the Bogoliubov mixing
    b -> theta b + sqrt(1-theta^2) c.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"beam splitter parameter must lie in [0, 1], got {theta}")
    s = math.sqrt(1.0 - theta * theta)
    eye = np.eye(2)
    return np.block([[theta * eye, s * eye], [-s * eye, theta * eye]])


def two_channel_beam_splitter(theta1: float, theta2: float) -> np.ndarray:
    """Independent mixers on mode pairs (b1, c1) and (b2, c2), modes ordered (b1, b2, c1, c2).

    Uses the sign layout with +sqrt(1-theta^2) in the lower-left blocks and
    -theta in the lower-right ones; the action on the kept b-modes matches two
    copies of :func:`beam_splitter` after tracing out the ancillas.
    """
    for theta in (theta1, theta2):
        if not 0.0 <= theta <= 1.0:
            raise ValueError(f"beam splitter parameter must lie in [0, 1], got {theta}")
    s1 = math.sqrt(1.0 - theta1 * theta1)
    s2 = math.sqrt(1.0 - theta2 * theta2)
    eye, zero = np.eye(2), np.zeros((2, 2))
    return np.block([
        [theta1 * eye, zero, s1 * eye, zero],
        [zero, theta2 * eye, zero, s2 * eye],
        [s1 * eye, zero, -theta1 * eye, zero],
        [zero, s2 * eye, zero, -theta2 * eye],
    ])


@dataclass(frozen=True)
class BogoliubovCoefficients:
    """Complex alpha and beta matrices of a linear mode transformation."""

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=complex)
        beta = np.asarray(self.beta, dtype=complex)
        if alpha.shape != beta.shape or alpha.ndim != 2 or alpha.shape[0] != alpha.shape[1]:
            raise ValueError(
                f"alpha and beta must be equal square matrices, got {alpha.shape} and {beta.shape}"
            )
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)


def bogoliubov_to_symplectic(coeffs: BogoliubovCoefficients,
                             tol: float = SYMPLECTIC_TOL) -> np.ndarray:
    """Assemble the symplectic matrix of a Bogoliubov transformation.

    Each 2x2 block is
        [[Re(alpha_mn - beta_mn), Im(alpha_mn + beta_mn)],
         [-Im(alpha_mn - beta_mn), Re(alpha_mn + beta_mn)]].

    Raises:
        NonSymplecticError: if the assembled matrix fails the symplectic
            invariance check, i.e. the coefficients do not satisfy the
            Bogoliubov identities.
    """
    alpha, beta = coeffs.alpha, coeffs.beta
    n = alpha.shape[0]
    out = np.zeros((2 * n, 2 * n))
    minus = alpha - beta
    plus = alpha + beta
    out[0::2, 0::2] = minus.real
    out[0::2, 1::2] = plus.imag
    out[1::2, 0::2] = -minus.imag
    out[1::2, 1::2] = plus.real
    residual = symplectic_residual(out)
    if residual > tol:
        raise NonSymplecticError(
            f"Bogoliubov coefficients give a non-symplectic matrix "
            f"(residual {residual:.3e} > {tol:.1e})"
        )
    return out


def apply_symplectic(state: GaussianState, matrix: np.ndarray,
                     tol: float = 1e-10) -> GaussianState:
    """Transform a state: Sigma -> S Sigma S^T, <X> -> S <X>."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape != (2 * state.n_modes, 2 * state.n_modes):
        raise ValueError(
            f"matrix shape {matrix.shape} does not match a {state.n_modes}-mode state"
        )
    residual = symplectic_residual(matrix)
    if residual > tol:
        raise NonSymplecticError(f"matrix is not symplectic (residual {residual:.3e})")
    return GaussianState(
        matrix @ state.first_moments,
        matrix @ state.covariance @ matrix.T,
    )


def tensor(*states: GaussianState) -> GaussianState:
    """Tensor product of Gaussian states (direct sum in phase space)."""
    mean = np.concatenate([s.first_moments for s in states])
    cov = direct_sum(*[s.covariance for s in states])
    return GaussianState(mean, cov, validate=False)


def partial_trace(state: GaussianState, keep_modes: Sequence[int]) -> GaussianState:
    """Reduced state of the kept modes (sub-block of Sigma, sub-vector of <X>)."""
    keep = list(keep_modes)
    if not keep:
        raise ValueError("keep_modes must be a nonempty subset of modes")
    if len(set(keep)) != len(keep):
        raise ValueError(f"keep_modes contains duplicates: {keep}")
    for m in keep:
        if not 0 <= m < state.n_modes:
            raise ValueError(f"mode index {m} out of range for {state.n_modes} modes")
    idx = np.array([2 * m + k for m in keep for k in (0, 1)])
    return GaussianState(
        state.first_moments[idx],
        state.covariance[np.ix_(idx, idx)],
    )
