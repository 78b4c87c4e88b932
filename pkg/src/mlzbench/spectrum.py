"""Adiabatic eigenvalue flows, diabatic crossing events and exact-crossing detection."""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .linalg import sym_eigvals
from .models import assemble_H

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
ISOLATION_REL = 1e-9
EXACT_REL = 1e-8
DEFAULT_WINDOW = (-6.0, 6.0)
DEFAULT_GRID = 2001


@dataclass
class EigenFlow:
    times: np.ndarray
    curves: np.ndarray  # shape (samples, n), ascending along axis 1

    def to_csv(self):
        n = self.curves.shape[1]
        lines = [",".join(["t"] + [f"lambda_{k + 1}" for k in range(n)])]
        for t, row in zip(self.times, self.curves):
            lines.append(",".join(repr(float(v)) for v in (t, *row)))
        return "\n".join(lines) + "\n"


@dataclass
class CrossingEvent:
    a: int
    b: int
    time: float
    energy: float
    coupling: float
    lz_p: float
    isolated: bool

    @property
    def level_pair(self):
        return (self.a, self.b)

    @property
    def coupled(self):
        return self.coupling != 0.0

    def to_dict(self):
        return asdict(self)


@dataclass
class ExactCrossing:
    time: float
    lower: int
    upper: int
    gap: float
    grid_gap: float

    def to_dict(self):
        return asdict(self)


def lz_probability(g, dslope):
    """Survival probability exp(-2 pi g^2 / |d slope|) at an isolated crossing."""
    return math.exp(-2.0 * math.pi * g * g / abs(dslope))


def eigenflow(model, t_min=DEFAULT_WINDOW[0], t_max=DEFAULT_WINDOW[1], samples=DEFAULT_GRID):
    if samples < 2:
        raise ValueError("need at least two samples")
    times = np.linspace(t_min, t_max, samples)
    curves = np.array([sym_eigvals(assemble_H(model, t)) for t in times])
    return EigenFlow(times, curves)


def spectral_scale(model, window=DEFAULT_WINDOW):
    """max |eigenvalue| over the window endpoints and t = 0, bounded below by 1e-300."""
    vals = [np.max(np.abs(sym_eigvals(assemble_H(model, t)))) for t in (window[0], 0.0, window[1])]
    return max(max(vals), 1e-300)


def diabatic_crossings(model):
    """All crossings of diabatic levels with different slopes, in time order."""
    slope = model.slope
    eps = model.intercept
    n = model.n
    scale = float(np.max(np.abs(eps), initial=0.0)) + 1.0
    events = []
    for a in range(n):
        for b in range(a + 1, n):
            ds = slope[a] - slope[b]
            if ds == 0:
                continue
            t = -(eps[a] - eps[b]) / ds + 0.0  # no -0.0
            energy = slope[a] * t + eps[a]
            scale_t = scale + float(np.max(np.abs(slope))) * abs(t)
            levels = slope * t + eps
            others = [k for k in range(n) if k not in (a, b)]
            isolated = all(abs(levels[k] - energy) >= ISOLATION_REL * scale_t for k in others)
            g = float(model.coupling[a, b])
            events.append(
                CrossingEvent(a, b, float(t), float(energy), g, lz_probability(g, ds), isolated)
            )
    events.sort(key=lambda e: (e.time, e.a, e.b))
    return events


def _gap(model, t, k):
    vals = sym_eigvals(assemble_H(model, t))
    return vals[k + 1] - vals[k]


def golden_minimize(f, lo, hi, xtol=1e-12, record=None):
    """Golden-section search for a minimum of a unimodal f on [lo, hi]."""
    x1 = hi - INVPHI * (hi - lo)
    x2 = lo + INVPHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > xtol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INVPHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INVPHI * (hi - lo)
            f2 = f(x2)
        if record is not None:
            record.append(min(f1, f2))
        # stop once the bracket no longer shrinks in floating point
        if x1 >= x2:
            break
    return (x1, f1) if f1 <= f2 else (x2, f2)


def find_exact_crossings(model, window=DEFAULT_WINDOW, grid=DEFAULT_GRID, threshold=None):
    """Adjacent-eigenvalue gap minima refined to 1e-12 in time; exact if gap < threshold.

    threshold defaults to 1e-8 times the spectral scale of the window.
    """
    flow = eigenflow(model, window[0], window[1], grid)
    if threshold is None:
        threshold = EXACT_REL * float(np.max(np.abs(flow.curves)))
    gaps = np.diff(flow.curves, axis=1)
    times = flow.times
    found = []
    for k in range(model.n - 1):
        gk = gaps[:, k]
        for i in range(1, len(times) - 1):
            if not (gk[i] <= gk[i - 1] and gk[i] < gk[i + 1]):
                continue
            t, gap = golden_minimize(lambda s: _gap(model, s, k), times[i - 1], times[i + 1])
            if gap < threshold:
                found.append(ExactCrossing(float(t), k, k + 1, float(gap), float(gk[i])))
    found.sort(key=lambda c: (c.time, c.lower))
    return found


@dataclass
class CrossingCountReport:
    predicted: int
    found: int
    match: bool
    coupling_scale: float
    predicted_events: list = field(default_factory=list)
    exact_crossings: list = field(default_factory=list)

    def to_dict(self):
        return {
            "predicted": self.predicted,
            "found": self.found,
            "match": self.match,
            "coupling_scale": self.coupling_scale,
            "predicted_events": [e.to_dict() for e in self.predicted_events],
            "exact_crossings": [c.to_dict() for c in self.exact_crossings],
        }


def crossing_count_check(model, window=DEFAULT_WINDOW, grid=DEFAULT_GRID, threshold=None):
    """One exact crossing expected per isolated, directly uncoupled diabatic crossing."""
    lo, hi = window
    predicted = [
        e for e in diabatic_crossings(model) if e.isolated and not e.coupled and lo < e.time < hi
    ]
    exact = find_exact_crossings(model, window, grid, threshold)
    cscale = float(np.max(np.abs(model.offdiag()), initial=0.0))
    return CrossingCountReport(
        len(predicted), len(exact), len(predicted) == len(exact), cscale, predicted, exact
    )
