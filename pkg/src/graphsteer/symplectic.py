r"""
Real symplectic and covariance-matrix algebra.

Covariance matrices are ``2N x 2N`` real arrays in vacuum units (the vacuum
is the identity) with interleaved quadrature ordering
:math:`(x_1, p_1, \ldots, x_N, p_N)`, where :math:`x = a + a^\dagger` and
:math:`p = (a - a^\dagger)/i`.
"""

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, NumericalDegeneracyError, ValidationError
from .policy import DEFAULT_POLICY, NumericPolicy

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class Bipartition:
    """Steering party and steered party, given as ordered mode indices."""

    steering: tuple[int, ...]
    steered: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "steering", tuple(int(m) for m in self.steering))
        object.__setattr__(self, "steered", tuple(int(m) for m in self.steered))
        if not self.steering or not self.steered:
            raise ValidationError("both parties of a bipartition must be non-empty")
        if len(set(self.steering)) != len(self.steering) or len(set(self.steered)) != len(
            self.steered
        ):
            raise ValidationError("repeated mode index inside a party")
        if set(self.steering) & set(self.steered):
            raise ValidationError(
                f"parties overlap: {self.steering} and {self.steered}"
            )

    @property
    def modes(self) -> tuple[int, ...]:
        return self.steering + self.steered

    def swapped(self) -> "Bipartition":
        return Bipartition(self.steered, self.steering)

    def check(self, n_modes: int) -> None:
        bad = [m for m in self.modes if m < 0 or m >= n_modes]
        if bad:
            raise ValidationError(f"mode indices {bad} out of range for {n_modes} modes")


@dataclass(frozen=True)
class SchurComplement:
    matrix: np.ndarray
    regularized: bool


def n_modes_of(sigma: np.ndarray) -> int:
    sigma = np.asarray(sigma)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape[0] % 2:
        raise ValidationError(f"expected a 2N x 2N matrix, got shape {sigma.shape}")
    return sigma.shape[0] // 2


def quadrature_indices(modes: Iterable[int]) -> list[int]:
    """Row indices ``(2m, 2m + 1)`` for each mode, in the given order."""
    return [2 * m + k for m in modes for k in (0, 1)]


def symplectic_form(n_modes: int) -> np.ndarray:
    """Return the ``2N x 2N`` symplectic form, a direct sum of ``[[0, 1], [-1, 0]]``."""
    if int(n_modes) != n_modes or n_modes < 1:
        raise DomainError(f"n_modes must be a positive integer, got {n_modes!r}")
    return np.kron(np.eye(int(n_modes)), _J)


def check_symmetric(sigma, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Validate shape and symmetry; return the exactly symmetrized float array."""
    sigma = np.asarray(sigma, dtype=float)
    n_modes_of(sigma)
    scale = max(1.0, float(np.max(np.abs(sigma))))
    asym = float(np.max(np.abs(sigma - sigma.T)))
    if asym > policy.symmetry_tol * scale:
        raise ValidationError(f"matrix is not symmetric (max |s - s^T| = {asym:.3e})")
    return 0.5 * (sigma + sigma.T)


def bona_fide_margin(sigma) -> float:
    """Smallest eigenvalue of the Hermitian matrix ``sigma + i Omega``.

    Physical states have a non-negative margin.
    """
    sigma = np.asarray(sigma, dtype=float)
    omega = symplectic_form(n_modes_of(sigma))
    return float(np.linalg.eigvalsh(sigma + 1j * omega).min())


def is_physical(sigma, policy: NumericPolicy = DEFAULT_POLICY) -> bool:
    sigma = check_symmetric(sigma, policy)
    return (
        float(np.linalg.eigvalsh(sigma).min()) > 0
        and bona_fide_margin(sigma) >= -policy.bona_fide_tol
    )


def symplectic_eigenvalues(sigma, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    r"""
    Symplectic eigenvalues of a symmetric positive-definite matrix.

    The spectrum of :math:`\Omega\sigma` is :math:`\{\pm i\nu_j\}`. Its moduli
    are sorted in descending order and the adjacent duplicates are collapsed.

    Parameters
    ----------
    sigma : array_like
        ``2N x 2N`` symmetric positive-definite matrix.
    policy : NumericPolicy, optional
        Supplies the pairing tolerance.

    Returns
    -------
    ndarray
        The ``N`` symplectic eigenvalues, largest first.

    Raises
    ------
    ValidationError
        If ``sigma`` is not symmetric or not positive definite.
    NumericalDegeneracyError
        If the moduli do not come in equal pairs.
    """
    sigma = check_symmetric(sigma, policy)
    if float(np.linalg.eigvalsh(sigma).min()) <= 0:
        raise ValidationError("matrix is not positive definite")
    n = n_modes_of(sigma)
    moduli = np.sort(np.abs(np.linalg.eigvals(symplectic_form(n) @ sigma)))[::-1]
    first, second = moduli[0::2], moduli[1::2]
    gap = np.abs(first - second)
    if np.any(gap > policy.pairing_tol * np.maximum(1.0, first)):
        raise NumericalDegeneracyError(
            f"unpaired symplectic spectrum (max pair gap {gap.max():.3e})"
        )
    return 0.5 * (first + second)


def reduce_to_modes(sigma, modes: Sequence[int]) -> np.ndarray:
    """Covariance matrix of the listed modes, in the listed order.

    Tracing out a Gaussian mode is deleting its rows and columns.
    """
    sigma = np.asarray(sigma, dtype=float)
    n = n_modes_of(sigma)
    bad = [m for m in modes if m < 0 or m >= n]
    if bad:
        raise ValidationError(f"mode indices {bad} out of range for {n} modes")
    idx = quadrature_indices(modes)
    return sigma[np.ix_(idx, idx)]


def schur_complement(
    sigma, part: Bipartition, policy: NumericPolicy = DEFAULT_POLICY
) -> SchurComplement:
    r"""
    Schur complement :math:`B - C^\top A^{-1} C` of the steering block.

    ``sigma`` is permuted so that the steering modes come first; modes outside
    the bipartition are traced out. When the steering block has condition
    number above ``policy.schur_max_condition`` a pseudo-inverse is used and
    the result is flagged as regularized.
    """
    sigma = check_symmetric(sigma, policy)
    part.check(n_modes_of(sigma))
    reduced = reduce_to_modes(sigma, part.modes)
    k = 2 * len(part.steering)
    a, c, b = reduced[:k, :k], reduced[:k, k:], reduced[k:, k:]
    regularized = bool(np.linalg.cond(a) > policy.schur_max_condition)
    if regularized:
        a_inv_c = np.linalg.pinv(a, rcond=policy.pinv_rcond, hermitian=True) @ c
    else:
        a_inv_c = np.linalg.solve(a, c)
    out = b - c.T @ a_inv_c
    return SchurComplement(0.5 * (out + out.T), regularized)


def check_unitary(u, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[0] == 0:
        raise ValidationError(f"expected a square matrix, got shape {u.shape}")
    err = float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))
    if err > policy.unitarity_tol:
        raise ValidationError(f"matrix is not unitary (max |U U^dag - I| = {err:.3e})")
    return u


def unitary_to_symplectic(u, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Quadrature representation of a passive mode transformation ``a -> U a``.

    With ``U = X + iY`` the ``(j, k)`` block is ``[[X, -Y], [Y, X]]``.
    """
    u = check_unitary(u, policy)
    n = u.shape[0]
    x, y = u.real, u.imag
    s = np.empty((n, 2, n, 2))
    s[:, 0, :, 0] = x
    s[:, 0, :, 1] = -y
    s[:, 1, :, 0] = y
    s[:, 1, :, 1] = x
    return s.reshape(2 * n, 2 * n)


def is_symplectic(s, policy: NumericPolicy = DEFAULT_POLICY) -> bool:
    s = np.asarray(s, dtype=float)
    omega = symplectic_form(n_modes_of(s))
    return float(np.max(np.abs(s @ omega @ s.T - omega))) <= policy.symplectic_tol


def apply_symplectic(s, sigma) -> np.ndarray:
    """Return ``S sigma S^T``."""
    s = np.asarray(s, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape != sigma.shape:
        raise ValidationError(
            f"dimension mismatch: symplectic {s.shape} vs covariance {sigma.shape}"
        )
    out = s @ sigma @ s.T
    return 0.5 * (out + out.T)


def partial_transpose(sigma, modes: Iterable[int]) -> np.ndarray:
    """Flip the sign of the momentum row and column of each listed mode."""
    sigma = np.asarray(sigma, dtype=float)
    n = n_modes_of(sigma)
    modes = list(modes)
    if not modes:
        raise ValidationError("partial transpose needs at least one mode")
    bad = [m for m in modes if m < 0 or m >= n]
    if bad:
        raise ValidationError(f"mode indices {bad} out of range for {n} modes")
    flip = np.ones(2 * n)
    for m in set(modes):
        flip[2 * m + 1] = -1.0
    return sigma * np.outer(flip, flip)
