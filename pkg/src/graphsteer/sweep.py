"""
Parameter sweeps, invariant verification and boundary tables.

Quantity names accepted by :func:`parse_quantity`:

``G(X->Y)``
    steering of party Y by party X, e.g. ``G(A->CD)``
``MONO(k|i|j)``
    ``G(k->ij) - G(k->i) - G(k->j)``
``MONOIN(k|i|j)``
    ``G(ij->k) - G(i->k) - G(j->k)``
``NULL(a)``
    nullifier variance of mode ``a``
``LN(X|Y)``
    log-negativity between parties X and Y

Parties are written as runs of mode letters (``A``, ``CD``). Modes not named
in a quantity are traced out.
"""

import csv
import io
import itertools
import json
import re
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import GraphSteerError, ValidationError
from .policy import DEFAULT_POLICY
from .states import (
    DEFAULT_R,
    FamilyKind,
    StateFamily,
    build_state,
    closed_form_cov,
    nullifier_prefactors,
    nullifier_variances,
    transmittance_from_weight,
    weight_factor,
    weights_from_transmittance,
)
from .steering import (
    find_all_zero_crossings,
    gaussian_steering,
    log_negativity,
    monogamy_residuals,
    one_way_windows,
)
from .symplectic import Bipartition, bona_fide_margin, symplectic_eigenvalues

R_GRID = (0.0, 0.115, 0.345, 0.6)
TRIPARTITE_WEIGHT_RANGE = (0.2, 3.0)


class UsageError(GraphSteerError, ValueError):
    """Bad quantity name or sweep configuration."""


# --- quantities --------------------------------------------------------------


@dataclass(frozen=True)
class Quantity:
    name: str
    kind: str  # "G", "MONO", "MONOIN", "NULL" or "LN"
    parties: tuple[tuple[int, ...], ...]

    def evaluate(self, sigma, family: StateFamily) -> tuple[float, bool]:
        """Return ``(value, regularized)`` for one state."""
        if self.kind == "G":
            sv = gaussian_steering(sigma, Bipartition(*self.parties))
            return sv.value, sv.regularized
        if self.kind in ("MONO", "MONOIN"):
            res = monogamy_residuals(sigma, self.parties, family.kind.labels)
            # residuals come in (outgoing, incoming) pairs, first pair singles out party 0
            return res[0 if self.kind == "MONO" else 1].residual, False
        if self.kind == "NULL":
            variances = nullifier_variances(sigma, weights_from_transmittance(family))
            return variances[self.parties[0][0]][1], False
        return log_negativity(sigma, Bipartition(*self.parties)).log_negativity, False


_PATTERNS = {
    "G": re.compile(r"^G\(([A-Z]+)->([A-Z]+)\)$"),
    "MONO": re.compile(r"^MONO\(([A-Z]+)\|([A-Z]+)\|([A-Z]+)\)$"),
    "MONOIN": re.compile(r"^MONOIN\(([A-Z]+)\|([A-Z]+)\|([A-Z]+)\)$"),
    "NULL": re.compile(r"^NULL\(([A-Z])\)$"),
    "LN": re.compile(r"^LN\(([A-Z]+)\|([A-Z]+)\)$"),
}

GRAMMAR = "G(X->Y), MONO(k|i|j), MONOIN(k|i|j), NULL(a), LN(X|Y)"


def _parties(labels: str, groups: Iterable[str]) -> tuple[tuple[int, ...], ...]:
    out = []
    for g in groups:
        if any(ch not in labels for ch in g):
            raise ValueError(f"unknown mode in {g!r}")
        out.append(tuple(labels.index(ch) for ch in g))
    flat = [m for p in out for m in p]
    if len(set(flat)) != len(flat):
        raise ValueError("parties overlap")
    return tuple(out)


def valid_quantity_names(kind: FamilyKind) -> list[str]:
    """All steering, nullifier and 1-vs-rest log-negativity names for a family."""
    labels = FamilyKind(kind).labels
    subsets = [
        "".join(c) for k in range(1, len(labels)) for c in itertools.combinations(labels, k)
    ]
    names = [
        f"G({x}->{y})" for x in subsets for y in subsets if not set(x) & set(y)
    ]
    names += [f"NULL({a})" for a in labels]
    names += [f"LN({a}|{labels.replace(a, '')})" for a in labels]
    return names


def parse_quantity(name: str, kind: FamilyKind) -> Quantity:
    kind = FamilyKind(kind)
    name = name.strip()
    for qkind, pat in _PATTERNS.items():
        m = pat.match(name)
        if m:
            try:
                return Quantity(name, qkind, _parties(kind.labels, m.groups()))
            except ValueError as exc:
                raise UsageError(
                    f"invalid quantity {name!r} for {kind.value}: {exc}; modes are {kind.labels}"
                ) from None
    raise UsageError(
        f"unknown quantity {name!r}. Grammar: {GRAMMAR}. Valid names for {kind.value}: "
        + ", ".join(valid_quantity_names(kind))
    )


def default_quantities(kind: FamilyKind) -> list[str]:
    labels = FamilyKind(kind).labels
    return [f"G({x}->{y})" for x, y in itertools.permutations(labels, 2)]


# --- sweep configuration and grid --------------------------------------------


def default_range(kind: FamilyKind, axis: str) -> tuple[float, float]:
    kind = FamilyKind(kind)
    if axis == "t2":
        return DEFAULT_POLICY.t2_min, DEFAULT_POLICY.t2_max
    if kind is FamilyKind.TRIPARTITE:
        return TRIPARTITE_WEIGHT_RANGE
    return weight_factor(kind, DEFAULT_POLICY.t2_min), weight_factor(kind, DEFAULT_POLICY.t2_max)


def clamp_range(kind: FamilyKind, axis: str, lo: float, hi: float) -> tuple[float, float]:
    """Clamp a range so the transmittance stays in ``[t2_min, t2_max]``."""
    t_lo, t_hi = DEFAULT_POLICY.t2_min, DEFAULT_POLICY.t2_max
    if axis == "weight":
        t_lo, t_hi = weight_factor(kind, t_lo), weight_factor(kind, t_hi)
    return max(lo, t_lo), min(hi, t_hi)


@dataclass
class SweepConfig:
    family: FamilyKind
    axis: str = "weight"
    lo: Optional[float] = None
    hi: Optional[float] = None
    points: int = 201
    r: float = DEFAULT_R
    quantities: list[str] = field(default_factory=list)
    fmt: str = "csv"
    out: Optional[str] = None

    def __post_init__(self):
        self.family = FamilyKind(self.family)
        if self.axis not in ("t2", "weight"):
            raise UsageError(f"axis must be 't2' or 'weight', got {self.axis!r}")
        if self.fmt not in ("csv", "json"):
            raise UsageError(f"format must be 'csv' or 'json', got {self.fmt!r}")
        if self.points < 2:
            raise UsageError(f"need at least 2 grid points, got {self.points}")
        if self.r < 0:
            raise UsageError(f"squeezing parameter must be >= 0, got {self.r}")
        d_lo, d_hi = default_range(self.family, self.axis)
        lo = d_lo if self.lo is None else self.lo
        hi = d_hi if self.hi is None else self.hi
        self.lo, self.hi = clamp_range(self.family, self.axis, lo, hi)
        if not self.lo < self.hi:
            raise UsageError(f"empty range after clamping: [{self.lo}, {self.hi}]")
        if not self.quantities:
            self.quantities = default_quantities(self.family)
        self.parsed = [parse_quantity(q, self.family) for q in self.quantities]

    def grid(self) -> list[tuple[float, float]]:
        """``(t2, weight)`` pairs of the sweep."""
        axis = [float(x) for x in np.linspace(self.lo, self.hi, self.points)]
        if self.axis == "t2":
            return [(t, weight_factor(self.family, t)) for t in axis]
        return [(transmittance_from_weight(self.family, w), w) for w in axis]

    def echo(self) -> dict:
        d = asdict(self)
        d["family"] = self.family.value
        d.pop("parsed", None)
        return d


def evaluate_point(config: SweepConfig, t2: float, weight: float) -> dict:
    family = StateFamily(config.family, t2, config.r)
    sigma = build_state(family)
    record = {"t2": t2, "weight": weight}
    flags = []
    for q in config.parsed:
        value, regularized = q.evaluate(sigma, family)
        record[q.name] = value
        if regularized:
            flags.append(f"regularized:{q.name}")
    record["flags"] = ";".join(flags)
    return record


def run_sweep(config: SweepConfig, executor=None) -> list[dict]:
    """Evaluate every grid point; records come back in grid order.

    ``executor`` may be any object with a ``map`` method, e.g. a
    ``concurrent.futures`` pool.
    """
    grid = config.grid()
    mapper = map if executor is None else executor.map
    return list(mapper(evaluate_point, [config] * len(grid), *zip(*grid)))


# --- output ------------------------------------------------------------------


def format_value(x: float) -> str:
    """Positional decimal with 12 significant digits."""
    return np.format_float_positional(float(x) + 0.0, precision=12, unique=False, fractional=False, trim="-")


def format_exact(x: float) -> str:
    """Shortest positional decimal that round-trips exactly."""
    return np.format_float_positional(float(x) + 0.0, unique=True, trim="-")


def records_to_csv(records: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["t2", "weight", *columns, "flags"]
    writer.writerow(header)
    for rec in records:
        missing = [c for c in header if c not in rec]
        if missing:
            raise ValidationError(f"record is missing columns {missing}")
        writer.writerow(
            [format_exact(rec["t2"]), format_exact(rec["weight"])]
            + [format_value(rec[c]) for c in columns]
            + [rec["flags"]]
        )
    return buf.getvalue()


def parse_csv(text: str) -> list[dict]:
    rows = list(csv.DictReader(io.StringIO(text)))
    out = []
    for row in rows:
        rec = {k: (v if k == "flags" else float(v)) for k, v in row.items()}
        out.append(rec)
    return out


def records_to_json(records: list[dict], config: SweepConfig) -> str:
    return json.dumps({"config": config.echo(), "records": records}, indent=2) + "\n"


def render_sweep(records: list[dict], config: SweepConfig) -> str:
    if config.fmt == "json":
        return records_to_json(records, config)
    return records_to_csv(records, list(config.quantities))


# --- verification ------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    offending: Optional[float] = None  # weight at the worst grid point
    note: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name:<28} worst={self.worst:.3e}  tol={self.tolerance:.0e}"
        if not self.passed and self.offending is not None:
            text += f"  at weight={self.offending:.6g}"
        if self.note:
            text += f"  ({self.note})"
        return text


def monogamy_triples(kind: FamilyKind) -> list[tuple[tuple[int, ...], ...]]:
    """Tripartite: (A, B, C). Four-mode: every single-mode triple plus (A, CD, B)."""
    if FamilyKind(kind) is FamilyKind.TRIPARTITE:
        return [((0,), (1,), (2,))]
    singles = [tuple((m,) for m in c) for c in itertools.combinations(range(4), 3)]
    return singles + [((0,), (2, 3), (1,))]


def reid_violation(sigma, policy=DEFAULT_POLICY) -> float:
    """Largest ``min(G(i->k), G(j->k))`` over distinct single modes ``i, j, k``.

    Exclusivity holds when this stays below the steering threshold.
    """
    n = sigma.shape[0] // 2
    g = {
        (i, k): gaussian_steering(sigma, Bipartition((i,), (k,)), policy).value
        for i, k in itertools.permutations(range(n), 2)
    }
    worst = 0.0
    for k in range(n):
        others = [m for m in range(n) if m != k]
        for i, j in itertools.combinations(others, 2):
            worst = max(worst, min(g[i, k], g[j, k]))
    return worst


_CD_SWAP = (0, 1, 3, 2)


def cd_symmetry_gap(sigma, policy=DEFAULT_POLICY) -> float:
    """Largest steering difference between party pairs related by swapping C and D."""
    worst = 0.0
    labels = range(4)
    subsets = [c for k in (1, 2) for c in itertools.combinations(labels, k)]
    for x in subsets:
        for y in subsets:
            if set(x) & set(y):
                continue
            xs = tuple(_CD_SWAP[m] for m in x)
            ys = tuple(_CD_SWAP[m] for m in y)
            a = gaussian_steering(sigma, Bipartition(x, y), policy).value
            b = gaussian_steering(sigma, Bipartition(xs, ys), policy).value
            worst = max(worst, abs(a - b))
    return worst


class _Tracker:
    def __init__(self, name, tol, higher_is_worse=True, note=""):
        self.name, self.tol, self.higher = name, tol, higher_is_worse
        self.worst = -np.inf if higher_is_worse else np.inf
        self.at = None
        self.note = note

    def update(self, value, weight):
        if (self.higher and value > self.worst) or (not self.higher and value < self.worst):
            self.worst, self.at = float(value), weight

    def result(self) -> CheckResult:
        ok = self.worst <= self.tol if self.higher else self.worst >= self.tol
        return CheckResult(self.name, bool(ok), self.worst, self.tol, self.at, self.note)


def run_verification(
    kind: FamilyKind,
    r: float = DEFAULT_R,
    points: int = 201,
    axis: str = "weight",
    lo: Optional[float] = None,
    hi: Optional[float] = None,
) -> list[CheckResult]:
    """Check every state invariant on a grid; one result per check."""
    kind = FamilyKind(kind)
    config = SweepConfig(kind, axis, lo, hi, points, r, quantities=default_quantities(kind))
    policy = DEFAULT_POLICY
    equiv = _Tracker("closed-form vs propagated", 1e-10)
    purity = _Tracker("purity |nu - 1|", 1e-9)
    physical = _Tracker("bona fide margin", -policy.bona_fide_tol, higher_is_worse=False)
    nullif = _Tracker("nullifier formulas", 1e-10)
    r_inv = _Tracker("nullifier r-invariance", 1e-9)
    mono = _Tracker("CKW monogamy residuals", -1e-9, higher_is_worse=False)
    reid = _Tracker("Reid exclusivity", policy.steering_threshold)
    roundtrip = _Tracker("weight/t2 round trip", 1e-14)
    cd = _Tracker("C/D exchange symmetry", 1e-10) if kind is FamilyKind.FOURMODE else None
    if r > 0:
        ent = _Tracker("entanglement persistence", 1e-6, higher_is_worse=False)
    else:
        ent = _Tracker(
            "entanglement persistence", 0.0, higher_is_worse=False, note="not applicable at r = 0"
        )

    for t2, w in config.grid():
        family = StateFamily(kind, t2, r)
        sigma = build_state(family)
        equiv.update(np.max(np.abs(sigma - closed_form_cov(family))), w)
        purity.update(np.max(np.abs(symplectic_eigenvalues(sigma) - 1)), w)
        physical.update(bona_fide_margin(sigma), w)
        roundtrip.update(abs(transmittance_from_weight(kind, weight_factor(kind, t2)) - t2), w)

        weights = weights_from_transmittance(family)
        expected = nullifier_prefactors(kind, t2)
        measured = nullifier_variances(sigma, weights)
        for (_, var), (_, pref) in zip(measured, expected):
            nullif.update(abs(var - pref * np.exp(-2 * r)), w)
        scaled = np.array(
            [
                [v * np.exp(2 * rr) for _, v in nullifier_variances(
                    build_state(StateFamily(kind, t2, rr)), weights
                )]
                for rr in sorted(set(R_GRID + (r,)))
            ]
        )
        r_inv.update(np.max(scaled.max(axis=0) - scaled.min(axis=0)), w)

        for triple in monogamy_triples(kind):
            for res in monogamy_residuals(sigma, triple, kind.labels):
                mono.update(res.residual, w)
        reid.update(reid_violation(sigma), w)
        if cd is not None:
            swapped = sigma[np.ix_([0, 1, 2, 3, 6, 7, 4, 5], [0, 1, 2, 3, 6, 7, 4, 5])]
            cd.update(max(np.max(np.abs(swapped - sigma)), cd_symmetry_gap(sigma)), w)
        if r > 0:
            for m in range(kind.n_modes):
                rest = tuple(x for x in range(kind.n_modes) if x != m)
                ent.update(log_negativity(sigma, Bipartition((m,), rest)).log_negativity, w)
        else:
            ent.update(0.0, w)

    trackers = [equiv, purity, physical, nullif, r_inv, mono, reid, roundtrip, ent]
    if cd is not None:
        trackers.append(cd)
    return [t.result() for t in trackers]


# --- boundaries --------------------------------------------------------------


def boundary_quantities(kind: FamilyKind) -> list[tuple[str, str]]:
    """Every single-mode pair and every 1-vs-2 party pair, both directions."""
    labels = FamilyKind(kind).labels
    out = [(a, b) for a, b in itertools.permutations(labels, 2)]
    for a in labels:
        for pair in itertools.combinations(labels.replace(a, ""), 2):
            out.append((a, "".join(pair)))
            out.append(("".join(pair), a))
    return out


def boundary_table(
    kind: FamilyKind,
    r: float = DEFAULT_R,
    points: int = 201,
    lo: Optional[float] = None,
    hi: Optional[float] = None,
) -> list[dict]:
    """
    Zero crossings of every pairwise and 1-vs-2 steering quantity, followed by
    the one-way windows of each ordered pair.

    Each row has ``quantity, event, weight, t2, note``. Quantities without a
    crossing get a single ``none in range`` row.
    """
    kind = FamilyKind(kind)
    d_lo, d_hi = default_range(kind, "weight")
    lo, hi = clamp_range(kind, "weight", d_lo if lo is None else lo, d_hi if hi is None else hi)
    rows = []
    pairs = boundary_quantities(kind)
    for x, y in pairs:
        name = f"G({x}->{y})"
        hits = find_all_zero_crossings(kind, x, y, lo, hi, r, points)
        if not hits:
            rows.append(dict(quantity=name, event="none in range", weight=None, t2=None, note=""))
        for h in hits:
            rows.append(
                dict(
                    quantity=name,
                    event="zero_crossing",
                    weight=h.weight,
                    t2=h.t2,
                    note=f"positive {h.positive_side}",
                )
            )
    for x, y in pairs:
        name = f"ONEWAY({x}->{y})"
        windows = one_way_windows(kind, x, y, lo, hi, r, points)
        if not windows:
            rows.append(dict(quantity=name, event="none in range", weight=None, t2=None, note=""))
        for win in windows:
            for event, edge, is_open in (("window_lo", win.lo, win.lo_open), ("window_hi", win.hi, win.hi_open)):
                rows.append(
                    dict(
                        quantity=name,
                        event=event,
                        weight=edge,
                        t2=transmittance_from_weight(kind, edge),
                        note="range edge" if is_open else "",
                    )
                )
    return rows


def boundary_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["quantity", "event", "weight", "t2", "note"])
    for row in rows:
        writer.writerow(
            [
                row["quantity"],
                row["event"],
                "" if row["weight"] is None else format_value(row["weight"]),
                "" if row["t2"] is None else format_value(row["t2"]),
                row["note"],
            ]
        )
    return buf.getvalue()


# --- single-state dump -------------------------------------------------------


def state_report(kind: FamilyKind, t2: float, r: float = DEFAULT_R) -> dict:
    family = StateFamily(kind, t2, r)
    closed = closed_form_cov(family)
    propagated = build_state(family)
    weights = weights_from_transmittance(family)
    labels = family.kind.labels
    edges = {
        f"C_{labels[j]}{labels[k]}": float(weights.matrix[j, k])
        for j, k in itertools.combinations(range(family.kind.n_modes), 2)
        if weights.matrix[j, k] != 0
    }
    expected = dict(nullifier_prefactors(family.kind, t2))
    return {
        "family": family.kind.value,
        "t2": family.t2,
        "r": family.r,
        family.kind.weight_name: family.weight,
        "weights": edges,
        "closed_form": closed.tolist(),
        "propagated": propagated.tolist(),
        "max_difference": float(np.max(np.abs(closed - propagated))),
        "nullifiers": [
            {
                "mode": label,
                "variance": var,
                "expected": expected[label] * float(np.exp(-2 * r)),
                "prefactor": expected[label],
            }
            for label, var in nullifier_variances(propagated, weights)
        ],
        "symplectic_eigenvalues": symplectic_eigenvalues(propagated).tolist(),
    }


def state_csv(report: dict) -> str:
    """Long-form ``section, row, col, value`` rendering of :func:`state_report`."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["section", "row", "col", "value"])
    for key in ("family", "t2", "r"):
        writer.writerow([key, "", "", report[key]])
    for name, value in report["weights"].items():
        writer.writerow(["weight", name, "", format_value(value)])
    for section in ("closed_form", "propagated"):
        for i, row in enumerate(report[section]):
            for j, value in enumerate(row):
                writer.writerow([section, i, j, format_value(value)])
    writer.writerow(["max_difference", "", "", format_value(report["max_difference"])])
    for item in report["nullifiers"]:
        writer.writerow(["nullifier", item["mode"], "variance", format_value(item["variance"])])
        writer.writerow(["nullifier", item["mode"], "expected", format_value(item["expected"])])
    for i, nu in enumerate(report["symplectic_eigenvalues"]):
        writer.writerow(["symplectic_eigenvalue", i, "", format_value(nu)])
    return buf.getvalue()
