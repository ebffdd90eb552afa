r"""
Gaussian weighted graph states built from squeezed light and beam splitters.

Two families are supported:

* ``tripartite``: linear graph A - B - C from three squeezed beams on two beam
  splitters, first transmittance fixed at 1/3.
* ``fourmode``: square graph with A and B both linked to C and D, from four
  squeezed beams on three beam splitters with the first and third
  transmittances fixed at 1/5 and 1/2.

In both cases the free parameter is the transmittance ``t2`` of the second
beam splitter. Every state can be produced two ways: by propagating the input
covariance through the network (:func:`build_state`) and from the printed
closed-form blocks (:func:`closed_form_tripartite_cov`,
:func:`closed_form_fourmode_cov`). The two must agree.
"""

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import block_diag

from .errors import DomainError, ValidationError
from .policy import DEFAULT_POLICY, NumericPolicy
from .symplectic import apply_symplectic, check_symmetric, n_modes_of, unitary_to_symplectic

DEFAULT_R = 0.345

# Off-diagonal coupling shapes of the closed forms. Named to avoid confusion
# with the symplectic form.
SWAP_COUPLING = np.array([[0.0, 1.0], [1.0, 0.0]])
PARITY_COUPLING = np.array([[1.0, 0.0], [0.0, -1.0]])


class Orientation(str, enum.Enum):
    AMPLITUDE = "amplitude_squeezed"
    PHASE = "phase_squeezed"


class FamilyKind(str, enum.Enum):
    TRIPARTITE = "tripartite"
    FOURMODE = "fourmode"

    @property
    def labels(self) -> str:
        return "ABC" if self is FamilyKind.TRIPARTITE else "ABCD"

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    @property
    def weight_name(self) -> str:
        """Name of the weight factor used as the sweep axis."""
        return "C_BC" if self is FamilyKind.TRIPARTITE else "C_A"


@dataclass(frozen=True)
class SqueezedInput:
    r: float
    orientation: Orientation = Orientation.AMPLITUDE

    def __post_init__(self):
        if not np.isfinite(self.r) or self.r < 0:
            raise DomainError(f"squeezing parameter must be >= 0, got {self.r}")

    def cov(self) -> np.ndarray:
        lo, hi = np.exp(-2 * self.r), np.exp(2 * self.r)
        if self.orientation is Orientation.AMPLITUDE:
            return np.diag([lo, hi])
        return np.diag([hi, lo])


_A, _P = Orientation.AMPLITUDE, Orientation.PHASE
INPUT_ORIENTATIONS = {
    FamilyKind.TRIPARTITE: (_A, _P, _A),
    FamilyKind.FOURMODE: (_P, _A, _A, _P),
}

TRIPARTITE_T1 = 1 / 3
FOURMODE_T1 = 1 / 5
FOURMODE_T3 = 1 / 2


def _check_t2(t2: float) -> float:
    t2 = float(t2)
    if not 0.0 < t2 < 1.0:
        raise DomainError(f"transmittance t2 must lie in (0, 1), got {t2}")
    return t2


def _check_r(r: float) -> float:
    r = float(r)
    if not np.isfinite(r) or r < 0:
        raise DomainError(f"squeezing parameter must be >= 0, got {r}")
    return r


@dataclass(frozen=True)
class StateFamily:
    """One member of a graph-state family: kind, free transmittance and squeezing."""

    kind: FamilyKind
    t2: float
    r: float = DEFAULT_R

    def __post_init__(self):
        object.__setattr__(self, "kind", FamilyKind(self.kind))
        object.__setattr__(self, "t2", _check_t2(self.t2))
        object.__setattr__(self, "r", _check_r(self.r))

    @property
    def inputs(self) -> list[SqueezedInput]:
        return [SqueezedInput(self.r, o) for o in INPUT_ORIENTATIONS[self.kind]]

    def unitary(self) -> np.ndarray:
        if self.kind is FamilyKind.TRIPARTITE:
            return tripartite_network_unitary(self.t2)
        return fourmode_network_unitary(self.t2)

    @property
    def weight(self) -> float:
        return weight_factor(self.kind, self.t2)


def tripartite_network_unitary(t2: float, t1: float = TRIPARTITE_T1) -> np.ndarray:
    """Mode matrix of the two-beam-splitter network, ``(A, B, C) = U (a1, a2, a3)``."""
    t2 = _check_t2(t2)
    s, c = np.sqrt(t1), np.sqrt(1 - t1)
    s2, c2 = np.sqrt(t2), np.sqrt(1 - t2)
    return np.array(
        [
            [-s, -c, 0],
            [1j * c * c2, -1j * s * c2, s2],
            [-c * s2, s * s2, -1j * c2],
        ],
        dtype=complex,
    )


def fourmode_network_unitary(t2: float) -> np.ndarray:
    """Mode matrix of the three-beam-splitter network (T1 = 1/5, T3 = 1/2)."""
    t2 = _check_t2(t2)
    s2, c2 = np.sqrt(t2), np.sqrt(1 - t2)
    return np.array(
        [
            [-c2, -2 * s2 / np.sqrt(5), -1j * s2 / np.sqrt(5), 0],
            [s2, -2 * c2 / np.sqrt(5), -1j * c2 / np.sqrt(5), 0],
            [0, 1j / np.sqrt(10), np.sqrt(2 / 5), -1 / np.sqrt(2)],
            [0, 1j / np.sqrt(10), np.sqrt(2 / 5), 1 / np.sqrt(2)],
        ],
        dtype=complex,
    )


def build_gaussian_state(inputs: Sequence[SqueezedInput], unitary) -> np.ndarray:
    """Propagate independent squeezed inputs through a passive network.

    Inputs may have unequal squeezing and any orientation.
    """
    if len(inputs) != np.shape(unitary)[0]:
        raise ValidationError(
            f"{len(inputs)} inputs do not match a {np.shape(unitary)[0]}-mode network"
        )
    sigma_in = block_diag(*(inp.cov() for inp in inputs))
    return apply_symplectic(unitary_to_symplectic(unitary), sigma_in)


def build_state(family: StateFamily) -> np.ndarray:
    return build_gaussian_state(family.inputs, family.unitary())


def closed_form_tripartite_cov(t2: float, r: float) -> np.ndarray:
    t2, r = _check_t2(t2), _check_r(r)
    lo, hi = np.exp(-2 * r), np.exp(2 * r)
    f = np.sqrt(2 * (1 - t2)) * (hi - lo) / 3
    g = np.sqrt(2 * t2) * (lo - hi) / 3
    h = 2 * np.sqrt(t2 * (1 - t2)) * (hi - lo) / 3
    sa = np.diag([lo / 3 + 2 * hi / 3, 2 * lo / 3 + hi / 3])
    sb = np.diag(
        [
            (2 * (1 - t2) * hi + (1 + 2 * t2) * lo) / 3,
            (2 * (1 - t2) * lo + (1 + 2 * t2) * hi) / 3,
        ]
    )
    sc = np.diag(
        [
            (3 - 2 * t2) / 3 * hi + 2 * t2 / 3 * lo,
            (3 - 2 * t2) / 3 * lo + 2 * t2 / 3 * hi,
        ]
    )
    X, Z = SWAP_COUPLING, PARITY_COUPLING
    return np.block(
        [
            [sa, f * X, g * Z],
            [f * X, sb, h * X],
            [g * Z, h * X, sc],
        ]
    )


def closed_form_fourmode_cov(t2: float, r: float) -> np.ndarray:
    t2, r = _check_t2(t2), _check_r(r)
    lo, hi = np.exp(-2 * r), np.exp(2 * r)
    l = 4 * np.sqrt(t2 * (1 - t2)) * (lo - hi) / 5  # noqa: E741
    m = np.sqrt(2 * t2) * (hi - lo) / 5
    n = np.sqrt(2 * (1 - t2)) * (hi - lo) / 5
    s = np.sqrt(2 * t2) * (hi - lo) / 5
    v = np.sqrt(2 * (1 - t2)) * (hi - lo) / 5
    w = 2 * (lo - hi) / 5
    sa = np.diag(
        [
            (5 - 4 * t2) / 5 * hi + 4 * t2 / 5 * lo,
            (5 - 4 * t2) / 5 * lo + 4 * t2 / 5 * hi,
        ]
    )
    sb = np.diag(
        [
            ((1 + 4 * t2) * hi + 4 * (1 - t2) * lo) / 5,
            ((1 + 4 * t2) * lo + 4 * (1 - t2) * hi) / 5,
        ]
    )
    sc = np.diag([3 / 5 * hi + 2 / 5 * lo, 3 / 5 * lo + 2 / 5 * hi])
    sd = sc.copy()
    X, Z = SWAP_COUPLING, PARITY_COUPLING
    return np.block(
        [
            [sa, l * Z, m * X, s * X],
            [l * Z, sb, n * X, v * X],
            [m * X, n * X, sc, w * Z],
            [s * X, v * X, w * Z, sd],
        ]
    )


def closed_form_cov(family: StateFamily) -> np.ndarray:
    if family.kind is FamilyKind.TRIPARTITE:
        return closed_form_tripartite_cov(family.t2, family.r)
    return closed_form_fourmode_cov(family.t2, family.r)


@dataclass(frozen=True)
class GraphWeights:
    """Symmetric weighted adjacency matrix with zero diagonal."""

    matrix: np.ndarray
    labels: str = ""

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValidationError(f"adjacency matrix must be square, got {mat.shape}")
        if not np.allclose(mat, mat.T, rtol=0, atol=1e-14):
            raise ValidationError("adjacency matrix must be symmetric")
        if np.any(np.diag(mat) != 0):
            raise ValidationError("adjacency matrix must have zero diagonal")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        if not self.labels:
            object.__setattr__(self, "labels", "ABCDEFGHIJKLMNOPQRSTUVWXYZ"[: mat.shape[0]])

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0]

    def __getitem__(self, pair: str) -> float:
        """Weight by mode-label pair, e.g. ``weights["BC"]``."""
        j, k = (self.labels.index(ch) for ch in pair)
        return float(self.matrix[j, k])


def weight_factor(kind: FamilyKind, t2: float) -> float:
    """Sweep-axis weight: ``C_BC`` (tripartite) or ``C_A`` (four-mode)."""
    kind, t2 = FamilyKind(kind), _check_t2(t2)
    if kind is FamilyKind.TRIPARTITE:
        return float(np.sqrt(t2 / (1 - t2)))
    return float(np.sqrt(2 * t2))


def weights_from_transmittance(family: StateFamily) -> GraphWeights:
    """Weights that cancel antisqueezing noise in every nullifier."""
    t2 = family.t2
    if family.kind is FamilyKind.TRIPARTITE:
        c_ab = 1 / np.sqrt(2 * (1 - t2))
        c_bc = np.sqrt(t2 / (1 - t2))
        mat = [[0, c_ab, 0], [c_ab, 0, c_bc], [0, c_bc, 0]]
    else:
        c_a, c_b = np.sqrt(2 * t2), np.sqrt(2 * (1 - t2))
        mat = [[0, 0, c_a, c_a], [0, 0, c_b, c_b], [c_a, c_b, 0, 0], [c_a, c_b, 0, 0]]
    return GraphWeights(np.array(mat), family.kind.labels)


def weight_range(kind: FamilyKind) -> tuple[float, float]:
    """Open interval of admissible sweep-axis weights."""
    return (0.0, np.inf) if FamilyKind(kind) is FamilyKind.TRIPARTITE else (0.0, np.sqrt(2))


def transmittance_from_weight(kind: FamilyKind, weight: float) -> float:
    """Inverse of :func:`weight_factor`."""
    kind, weight = FamilyKind(kind), float(weight)
    lo, hi = weight_range(kind)
    if not lo < weight < hi:
        raise DomainError(f"{kind.weight_name} = {weight} outside ({lo}, {hi})")
    if kind is FamilyKind.TRIPARTITE:
        return weight**2 / (1 + weight**2)
    return weight**2 / 2


def nullifier_variances(sigma, weights: GraphWeights) -> list[tuple[str, float]]:
    """Variance of ``p_a - sum_b C_ab x_b`` for every mode ``a``."""
    sigma = check_symmetric(sigma)
    n = n_modes_of(sigma)
    if n != weights.n_modes:
        raise ValidationError(
            f"covariance has {n} modes but the graph has {weights.n_modes}"
        )
    out = []
    for a in range(n):
        v = np.zeros(2 * n)
        v[2 * a + 1] = 1.0
        v[0::2] -= weights.matrix[a]
        out.append((weights.labels[a], float(v @ sigma @ v)))
    return out


def nullifier_prefactors(kind: FamilyKind, t2: float) -> list[tuple[str, float]]:
    """Analytic ``Var * exp(2r)`` for each nullifier of a family member."""
    kind, t2 = FamilyKind(kind), _check_t2(t2)
    if kind is FamilyKind.TRIPARTITE:
        vals = [(3 - 2 * t2) / (2 - 2 * t2), 3 / (2 - 2 * t2), 1 / (1 - t2)]
    else:
        vals = [1 + 4 * t2, 5 - 4 * t2, 3.0, 3.0]
    return list(zip(kind.labels, vals))
