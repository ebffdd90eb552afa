r"""
Gaussian EPR steering, monogamy residuals and log-negativity.

The steering quantifier for party A steering party B is

.. math::

    G^{A\to B} = \max\Big\{0, -\sum_{j:\bar\nu_j<1} \ln \bar\nu_j\Big\}

where :math:`\bar\nu_j` are the symplectic eigenvalues of the Schur complement
of A's block in the covariance matrix of A and B. Modes outside ``A + B`` are
traced out first.
"""

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import ValidationError
from .policy import DEFAULT_POLICY, NumericPolicy
from .states import (
    DEFAULT_R,
    FamilyKind,
    StateFamily,
    build_state,
    transmittance_from_weight,
)
from .symplectic import (
    Bipartition,
    n_modes_of,
    partial_transpose,
    reduce_to_modes,
    schur_complement,
    symplectic_eigenvalues,
)

Modes = Union[str, Sequence[int]]


@dataclass(frozen=True)
class SteeringValue:
    value: float
    eigenvalues: tuple[float, ...]
    regularized: bool = False

    def __float__(self) -> float:
        return self.value

    def exists(self, policy: NumericPolicy = DEFAULT_POLICY) -> bool:
        return self.value > policy.steering_threshold


class Directionality(str, enum.Enum):
    NO_STEERING = "no_steering"
    ONE_WAY_FORWARD = "one_way_forward"
    ONE_WAY_BACKWARD = "one_way_backward"
    TWO_WAY = "two_way"


@dataclass(frozen=True)
class MonogamyResidual:
    label: str
    residual: float
    parties: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class EntanglementValue:
    part: Bipartition
    log_negativity: float


def _sum_neg_log(nus: np.ndarray, policy: NumericPolicy) -> float:
    below = nus[nus < 1 - policy.eigen_cutoff]
    return float(max(0.0, -np.sum(np.log(below))))


def gaussian_steering(
    sigma, part: Bipartition, policy: NumericPolicy = DEFAULT_POLICY
) -> SteeringValue:
    """Steerability of ``part.steered`` by ``part.steering``."""
    schur = schur_complement(sigma, part, policy)
    nus = symplectic_eigenvalues(schur.matrix, policy)
    return SteeringValue(_sum_neg_log(nus, policy), tuple(float(x) for x in nus), schur.regularized)


def group_steering(
    sigma, steering: Sequence[int], steered: Sequence[int], policy: NumericPolicy = DEFAULT_POLICY
) -> SteeringValue:
    return gaussian_steering(sigma, Bipartition(tuple(steering), tuple(steered)), policy)


def pairwise_steering_table(
    sigma, policy: NumericPolicy = DEFAULT_POLICY
) -> dict[tuple[int, int], SteeringValue]:
    """Single-mode steering for every ordered pair ``(i, j)``, ``i != j``."""
    n = n_modes_of(sigma)
    if n < 2:
        raise ValidationError("pairwise steering needs at least two modes")
    return {
        (i, j): gaussian_steering(sigma, Bipartition((i,), (j,)), policy)
        for i, j in itertools.permutations(range(n), 2)
    }


def classify_directionality(
    forward: SteeringValue, backward: SteeringValue, policy: NumericPolicy = DEFAULT_POLICY
) -> Directionality:
    fwd, bwd = forward.exists(policy), backward.exists(policy)
    if fwd and bwd:
        return Directionality.TWO_WAY
    if fwd:
        return Directionality.ONE_WAY_FORWARD
    if bwd:
        return Directionality.ONE_WAY_BACKWARD
    return Directionality.NO_STEERING


def _party_name(party: Sequence[int], labels: str) -> str:
    return "".join(labels[m] for m in party)


def monogamy_residuals(
    sigma,
    parties: Sequence[Sequence[int]],
    labels: str = "ABCDEFGHIJKLMNOPQRSTUVWXYZ",
    policy: NumericPolicy = DEFAULT_POLICY,
) -> list[MonogamyResidual]:
    """
    Both CKW-type residuals for each choice of the singled-out party.

    For parties ``(i, j, k)`` and each ``k`` the two residuals are
    ``G(k->ij) - G(k->i) - G(k->j)`` and ``G(ij->k) - G(i->k) - G(j->k)``.
    A party may hold several modes. Six residuals are returned in total;
    modes outside the three parties are traced out.
    """
    if len(parties) != 3:
        raise ValidationError(f"expected three parties, got {len(parties)}")
    parties = tuple(tuple(int(m) for m in p) for p in parties)
    flat = [m for p in parties for m in p]
    if any(not p for p in parties) or len(set(flat)) != len(flat):
        raise ValidationError(f"parties must be non-empty and disjoint: {parties}")
    n_modes_of(sigma)
    sub = reduce_to_modes(sigma, flat)
    offsets = np.cumsum([0] + [len(p) for p in parties])
    local = [tuple(range(offsets[q], offsets[q + 1])) for q in range(3)]

    def g(a, b):
        return gaussian_steering(sub, Bipartition(a, b), policy).value

    out = []
    for q in range(3):
        i, j = (x for x in range(3) if x != q)
        k_loc, i_loc, j_loc = local[q], local[i], local[j]
        kn, in_, jn = (_party_name(parties[x], labels) for x in (q, i, j))
        outgoing = g(k_loc, i_loc + j_loc) - g(k_loc, i_loc) - g(k_loc, j_loc)
        incoming = g(i_loc + j_loc, k_loc) - g(i_loc, k_loc) - g(j_loc, k_loc)
        out.append(
            MonogamyResidual(
                f"G({kn}->{in_}{jn}) - G({kn}->{in_}) - G({kn}->{jn})",
                outgoing,
                (parties[q], parties[i], parties[j]),
            )
        )
        out.append(
            MonogamyResidual(
                f"G({in_}{jn}->{kn}) - G({in_}->{kn}) - G({jn}->{kn})",
                incoming,
                (parties[i], parties[j], parties[q]),
            )
        )
    return out


def log_negativity(
    sigma, part: Bipartition, policy: NumericPolicy = DEFAULT_POLICY
) -> EntanglementValue:
    """Log-negativity across ``part`` after partially transposing the steered party."""
    part.check(n_modes_of(sigma))
    sub = reduce_to_modes(sigma, part.modes)
    k = len(part.steering)
    flipped = partial_transpose(sub, range(k, k + len(part.steered)))
    nus = symplectic_eigenvalues(flipped, policy)
    return EntanglementValue(part, _sum_neg_log(nus, policy))


# --- boundary search over the weight axis ------------------------------------


@dataclass(frozen=True)
class ZeroCrossing:
    """Weight at which a steering quantity switches between zero and positive."""

    weight: float
    t2: float
    positive_side: str  # "below" or "above"


@dataclass(frozen=True)
class OneWayWindow:
    """Weight interval where ``steering -> steered`` exists but not the reverse.

    An edge that coincides with the searched range is marked open; the true
    window may extend past it.
    """

    lo: float
    hi: float
    lo_open: bool
    hi_open: bool


def as_modes(kind: FamilyKind, modes: Modes) -> tuple[int, ...]:
    """Accept ``"CD"`` style labels or an index sequence."""
    if isinstance(modes, str):
        labels = FamilyKind(kind).labels
        try:
            return tuple(labels.index(ch) for ch in modes)
        except ValueError:
            raise ValidationError(f"unknown mode in {modes!r}; valid modes: {labels}") from None
    return tuple(int(m) for m in modes)


def state_at_weight(kind: FamilyKind, weight: float, r: float = DEFAULT_R) -> np.ndarray:
    kind = FamilyKind(kind)
    return build_state(StateFamily(kind, transmittance_from_weight(kind, weight), r))


def steering_vs_weight(
    kind: FamilyKind,
    steering: Modes,
    steered: Modes,
    r: float = DEFAULT_R,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> Callable[[float], float]:
    kind = FamilyKind(kind)
    part = Bipartition(as_modes(kind, steering), as_modes(kind, steered))

    def g(weight: float) -> float:
        return gaussian_steering(state_at_weight(kind, weight, r), part, policy).value

    return g


def _bisect(pred: Callable[[float], bool], lo: float, hi: float, tol: float) -> float:
    p_lo = pred(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid) == p_lo:
            lo = mid
        else:
            hi = mid
    return float(0.5 * (lo + hi))


def find_zero_crossing(
    kind: FamilyKind,
    steering: Modes,
    steered: Modes,
    lo: float,
    hi: float,
    r: float = DEFAULT_R,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> Optional[ZeroCrossing]:
    """
    Bisect for the weight where one steering quantity starts or stops existing.

    Returns ``None`` if the quantity is on the same side of the threshold at
    both ends of ``[lo, hi]``.
    """
    kind = FamilyKind(kind)
    g = steering_vs_weight(kind, steering, steered, r, policy)

    def positive(w):
        return g(w) > policy.steering_threshold

    p_lo, p_hi = positive(lo), positive(hi)
    if p_lo == p_hi:
        return None
    w = _bisect(positive, lo, hi, policy.bisection_tol)
    return ZeroCrossing(w, transmittance_from_weight(kind, w), "below" if p_lo else "above")


def _grid_brackets(values: Sequence[bool]) -> list[int]:
    return [i for i in range(len(values) - 1) if values[i] != values[i + 1]]


def find_all_zero_crossings(
    kind: FamilyKind,
    steering: Modes,
    steered: Modes,
    lo: float,
    hi: float,
    r: float = DEFAULT_R,
    points: int = 201,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> list[ZeroCrossing]:
    """Scan a uniform grid for sign changes, then refine each by bisection."""
    grid = [float(w) for w in np.linspace(lo, hi, points)]
    g = steering_vs_weight(kind, steering, steered, r, policy)
    pos = [g(w) > policy.steering_threshold for w in grid]
    out = []
    for i in _grid_brackets(pos):
        hit = find_zero_crossing(kind, steering, steered, grid[i], grid[i + 1], r, policy)
        if hit is not None:
            out.append(hit)
    return out


def one_way_windows(
    kind: FamilyKind,
    steering: Modes,
    steered: Modes,
    lo: float,
    hi: float,
    r: float = DEFAULT_R,
    points: int = 201,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> list[OneWayWindow]:
    """Weight intervals in ``[lo, hi]`` where steering is one-way in the given direction."""
    fwd = steering_vs_weight(kind, steering, steered, r, policy)
    bwd = steering_vs_weight(kind, steered, steering, r, policy)
    thr = policy.steering_threshold

    def one_way(w):
        return fwd(w) > thr and bwd(w) <= thr

    grid = [float(w) for w in np.linspace(lo, hi, points)]
    flags = [one_way(w) for w in grid]
    edges = [_bisect(one_way, grid[i], grid[i + 1], policy.bisection_tol) for i in _grid_brackets(flags)]
    windows = []
    start = float(lo) if flags[0] else None
    start_open = flags[0]
    for e in edges:
        if start is None:
            start, start_open = e, False
        else:
            windows.append(OneWayWindow(start, e, start_open, False))
            start = None
    if start is not None:
        windows.append(OneWayWindow(start, float(hi), start_open, True))
    return windows
