"""Integrability conditions of the t/tau family as residuals and as a linear system.

For H = B00 t + B01 tau + A0 and H' = B11 tau + B01 t + A1 + C / tau:

    cc1  [B00, B11] = [B00, B01] = [B11, B01] = 0
    cc2  [B01, A0] = [B00, A1]
    cc6  [B01, A1] = [B11, A0]
    cc3  [B01, C]  = -[A0, A1]
    cc4  [B00, C]  = 0
    cc5  [A0, C]   = 0
"""

import logging
from collections import deque
from dataclasses import asdict, dataclass, field

import numpy as np

from .linalg import commutator, frobenius_norm, solve_linear
from .models import TtauPartner, assemble_H, assemble_Hprime

log = logging.getLogger(__name__)

CONDITIONS = ("cc1", "cc2", "cc3", "cc4", "cc5", "cc6")
T_SAMPLES = (-2.0, 0.0, 2.0)
TAU_SAMPLES = (0.5, 1.0, 2.0)
FEASIBLE_TOL = 1e-8
SCAN_XTOL = 1e-6


@dataclass
class ResidualReport:
    residuals: dict
    commutator_max: float
    tol: float
    passed: bool
    samples: list = field(default_factory=list)

    @property
    def max_residual(self):
        return max(self.residuals.values())

    def to_dict(self):
        return asdict(self)


@dataclass
class PartnerSolveReport:
    feasible: bool
    residual: float
    scale: float
    particular: TtauPartner
    nullspace: list
    nontrivial: bool
    inhomogeneous_norm: float
    rank: int

    @property
    def nullspace_dim(self):
        return len(self.nullspace)

    def to_dict(self):
        return {
            "feasible": self.feasible,
            "residual": self.residual,
            "scale": self.scale,
            "nullspace_dim": self.nullspace_dim,
            "nontrivial": self.nontrivial,
            "inhomogeneous_norm": self.inhomogeneous_norm,
            "rank": self.rank,
            "particular": partner_to_dict(self.particular),
        }


@dataclass
class ZeroAreaReport:
    cycles: list
    cycle_sums: list
    edges: list
    edge_terms: list
    flagged_edges: list
    zerosum1: list
    tol: float
    passed: bool
    warnings: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


def partner_to_dict(p):
    return {"b11": p.b11.tolist(), "a1": p.a1.tolist(), "c": p.c.tolist()}


def _diag_mats(model, partner):
    return np.diag(model.slope), np.diag(model.tau_slope), np.diag(partner.b11)


def condition_residuals(model, partner):
    if partner.n != model.n:
        raise ValueError(f"model has {model.n} states, partner {partner.n}")
    b00, b01, b11 = _diag_mats(model, partner)
    a0, a1, c = model.coupling, partner.a1, partner.c
    fn = frobenius_norm
    return {
        "cc1": max(fn(commutator(b00, b11)), fn(commutator(b00, b01)), fn(commutator(b11, b01))),
        "cc2": fn(commutator(b01, a0) - commutator(b00, a1)),
        "cc3": fn(commutator(b01, c) + commutator(a0, a1)),
        "cc4": fn(commutator(b00, c)),
        "cc5": fn(commutator(a0, c)),
        "cc6": fn(commutator(b01, a1) - commutator(b11, a0)),
    }


def verify_pair(model, partner, tol=1e-10):
    """Per-condition residuals plus the assembled [H, H'] on a (t, tau) grid."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    residuals = condition_residuals(model, partner)
    samples = []
    for t in T_SAMPLES:
        for tau in TAU_SAMPLES:
            h = assemble_H(model, t, tau)
            hp = assemble_Hprime(model, partner, t, tau)
            samples.append((t, tau, frobenius_norm(commutator(h, hp))))
    cmax = max(s[2] for s in samples)
    passed = max(residuals.values()) < tol
    return ResidualReport(residuals, cmax, tol, passed, samples)


@dataclass
class FlowReport:
    holds: bool
    note: str
    fd_error: float = 0.0


def verify_flow(model, partner, t=0.3, tau=None, h=1e-5):
    """d_tau H = d_t H' holds by construction (both sides are diag(tau_slope)).

    A central-difference comparison is carried along as an independent check.
    """
    tau = model.tau if tau is None else tau
    d_tau_h = (assemble_H(model, t, tau + h) - assemble_H(model, t, tau - h)) / (2 * h)
    d_t_hp = (
        assemble_Hprime(model, partner, t + h, tau) - assemble_Hprime(model, partner, t - h, tau)
    ) / (2 * h)
    err = float(np.max(np.abs(d_tau_h - d_t_hp)))
    return FlowReport(True, "B01 is shared by H (tau coefficient) and H' (t coefficient)", err)


# ------------------------------------------------------------------ solver


def _sym_basis(n):
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    return idx


def _unpack(x, n):
    idx = _sym_basis(n)
    m = len(idx)
    b11 = np.array(x[:n])
    a1 = np.zeros((n, n))
    c = np.zeros((n, n))
    for k, (i, j) in enumerate(idx):
        a1[i, j] = a1[j, i] = x[n + k]
        c[i, j] = c[j, i] = x[n + m + k]
    return TtauPartner(b11, a1, c)


def _pack(partner):
    n = partner.n
    idx = _sym_basis(n)
    return np.concatenate(
        [partner.b11, [partner.a1[i, j] for i, j in idx], [partner.c[i, j] for i, j in idx]]
    )


def _upper(x):
    n = x.shape[0]
    return np.array([x[i, j] for i in range(n) for j in range(i + 1, n)])


def _linear_part(model, partner):
    """Homogeneous part of the stacked conditions cc2, cc6, cc3, cc4, cc5 (upper triangles)."""
    b00, b01, b11 = _diag_mats(model, partner)
    a0, a1, c = model.coupling, partner.a1, partner.c
    return np.concatenate(
        [
            _upper(-commutator(b00, a1)),
            _upper(commutator(b01, a1) - commutator(b11, a0)),
            _upper(commutator(b01, c) + commutator(a0, a1)),
            _upper(commutator(b00, c)),
            _upper(commutator(a0, c)),
        ]
    )


def partner_system(model):
    """Matrix M and rhs r with M x = r equivalent to cc2-cc6 for x = pack(b11, a1, c).

    Commutators of symmetric matrices are antisymmetric, so each condition
    contributes its strict upper triangle. cc1 holds identically.
    """
    n = model.n
    nunk = n + n * (n + 1)
    cols = []
    for k in range(nunk):
        e = np.zeros(nunk)
        e[k] = 1.0
        cols.append(_linear_part(model, _unpack(e, n)))
    m = np.stack(cols, axis=1)
    b01 = np.diag(model.tau_slope)
    npairs = n * (n - 1) // 2
    rhs = np.zeros(m.shape[0])
    rhs[:npairs] = -_upper(commutator(b01, model.coupling))
    return m, rhs


def solve_partner(model, tol=FEASIBLE_TOL, rank_tol=1e-10):
    """Find the affine space of partners (b11, a1, c) solving cc1-cc6 for a given model.

    Feasibility is judged on residual < tol * (||[B01, A0]|| + 1).
    """
    m, rhs = partner_system(model)
    res = solve_linear(m, rhs, rank_tol)
    inhom = frobenius_norm(commutator(np.diag(model.tau_slope), model.coupling))
    scale = inhom + 1.0
    feasible = res.residual < tol * scale
    n = model.n
    nullspace = [_unpack(v, n) for v in res.nullspace]
    nontrivial = inhom > tol * scale or len(nullspace) > 3
    return PartnerSolveReport(
        feasible, res.residual, scale, _unpack(res.particular, n), nullspace, nontrivial, inhom, res.rank
    )


def affine_distance(report, partner):
    """Distance of a candidate partner from particular + span(nullspace)."""
    x = _pack(partner) - _pack(report.particular)
    if report.nullspace:
        basis = np.stack([_pack(p) for p in report.nullspace], axis=1)
        q, _ = np.linalg.qr(basis)
        x = x - q @ (q.T @ x)
    return frobenius_norm(x)


# ------------------------------------------------------------------ scans


@dataclass
class ScanResult:
    param: str
    values: list
    residuals: list
    errors: dict
    roots: list

    def to_dict(self):
        return asdict(self)


def _residual_at(builder, value, tol):
    model = builder(value)
    rep = solve_partner(model, tol)
    return rep.residual / rep.scale


def scan_parameter(builder, param_name, grid, tol=FEASIBLE_TOL, xtol=SCAN_XTOL):
    """Relative solve_partner residual along a one-parameter family.

    ``builder(value) -> DiabaticModel``. Grid points where the builder fails
    are recorded in ``errors``. Each interior grid minimum is refined by
    bisecting on the sign of the residual's slope; refined points with
    residual below ``tol`` are reported as roots.
    """
    grid = [float(v) for v in grid]
    if not grid:
        raise ValueError("empty grid")
    values, residuals, errors = [], [], {}
    for v in grid:
        try:
            r = _residual_at(builder, v, tol)
        except (ValueError, ArithmeticError) as exc:
            errors[v] = str(exc)
            continue
        values.append(v)
        residuals.append(r)

    roots = []
    for k in range(len(values)):
        left = residuals[k - 1] if k > 0 else np.inf
        right = residuals[k + 1] if k + 1 < len(values) else np.inf
        if not (residuals[k] <= left and residuals[k] <= right):
            continue
        lo = values[k - 1] if k > 0 else values[k]
        hi = values[k + 1] if k + 1 < len(values) else values[k]
        x, r = _refine_minimum(builder, lo, hi, tol, xtol)
        if r < tol and not any(abs(x - x0) < 10 * xtol for x0, _ in roots):
            roots.append((x, r))
    return ScanResult(param_name, values, residuals, errors, roots)


def _refine_minimum(builder, lo, hi, tol, xtol):
    f = lambda v: _residual_at(builder, v, tol)  # noqa: E731
    if hi - lo <= xtol:
        mid = 0.5 * (lo + hi)
        return mid, f(mid)
    while hi - lo > xtol / 4:
        mid = 0.5 * (lo + hi)
        d = xtol / 16
        if f(mid + d) > f(mid - d):
            hi = mid
        else:
            lo = mid
    mid = 0.5 * (lo + hi)
    return mid, f(mid)


# ------------------------------------------------------------------ zero area


def connectivity(model, atol=0.0):
    """Edges (a, b), a < b, with nonzero coupling; split by whether slopes differ."""
    a0 = model.coupling
    edges, flat = [], []
    for a in range(model.n):
        for b in range(a + 1, model.n):
            if abs(a0[a, b]) > atol:
                (edges if model.slope[a] != model.slope[b] else flat).append((a, b))
    return edges, flat


def fundamental_cycles(n, edges):
    """Cycle basis from a breadth-first spanning forest; one cycle per non-tree edge."""
    adj = {v: [] for v in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    parent, depth = {}, {}
    tree = set()
    for root in range(n):
        if root in parent:
            continue
        parent[root], depth[root] = None, 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in sorted(adj[v]):
                if w not in parent:
                    parent[w], depth[w] = v, depth[v] + 1
                    tree.add((min(v, w), max(v, w)))
                    queue.append(w)
    cycles = []
    for a, b in edges:
        if (a, b) in tree:
            continue
        pa, pb = [a], [b]
        while pa[-1] != pb[-1]:
            if depth[pa[-1]] >= depth[pb[-1]]:
                pa.append(parent[pa[-1]])
            else:
                pb.append(parent[pb[-1]])
        # a -> ... -> lca -> ... -> b, closed by the edge b -> a
        cycles.append(pa + pb[-2::-1])
    return cycles


def edge_term(model, a, b):
    d01 = model.tau_slope[a] - model.tau_slope[b]
    return d01 * d01 / (model.slope[a] - model.slope[b])


def zero_area_check(model, partner=None, tol=1e-10):
    """Loop sums of (dB01)^2 / dB00 over the connectivity graph's fundamental cycles."""
    edges, flat = connectivity(model)
    warnings = []
    if np.any(np.diag(model.coupling) != 0):
        warnings.append("coupling has nonzero diagonal; zero-area sums use slope data only")
    cycles = fundamental_cycles(model.n, edges)
    sums = []
    for cyc in cycles:
        total = 0.0
        for k in range(len(cyc)):
            total += edge_term(model, cyc[k], cyc[(k + 1) % len(cyc)])
        sums.append(total)
    terms = [edge_term(model, a, b) for a, b in edges]
    zs1 = []
    if partner is not None:
        for (a, b), term in zip(edges, terms):
            lhs = partner.b11[a] - partner.b11[b]
            zs1.append({"edge": [a, b], "b11_diff": lhs, "predicted": term, "error": abs(lhs - term)})
    passed = all(abs(s) < tol for s in sums) and all(z["error"] < tol for z in zs1)
    for w in warnings:
        log.warning(w)
    return ZeroAreaReport(
        [list(map(int, c)) for c in cycles],
        sums,
        [list(e) for e in edges],
        terms,
        [list(e) for e in flat],
        zs1,
        tol,
        passed,
        warnings,
    )
