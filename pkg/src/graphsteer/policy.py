"""Numeric tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class NumericPolicy:
    symmetry_tol: float = 1e-12
    bona_fide_tol: float = 1e-9
    unitarity_tol: float = 1e-12
    symplectic_tol: float = 1e-10
    pairing_tol: float = 1e-8
    schur_max_condition: float = 1e12
    pinv_rcond: float = 1e-12
    # a symplectic eigenvalue only counts as "below one" under 1 - eigen_cutoff
    eigen_cutoff: float = 1e-12
    steering_threshold: float = 1e-9
    bisection_tol: float = 1e-4
    t2_min: float = 0.001
    t2_max: float = 0.999


DEFAULT_POLICY = NumericPolicy()
