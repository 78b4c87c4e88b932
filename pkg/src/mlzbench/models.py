"""Diabatic MLZ models of the t/tau family and the catalog builders.

H(t, tau)  = diag(slope) t + diag(tau_slope) tau + coupling
H'(t, tau) = diag(b11) tau + diag(tau_slope) t + a1 + c / tau
"""

import itertools
from dataclasses import dataclass, replace

import numpy as np

from .linalg import _frozen, commutator, frobenius_norm, is_symmetric


@dataclass(frozen=True)
class DiabaticModel:
    slope: np.ndarray
    tau_slope: np.ndarray
    coupling: np.ndarray
    tau: float = 1.0
    name: str = ""

    def __post_init__(self):
        slope = _frozen(self.slope)
        tau_slope = _frozen(self.tau_slope)
        coupling = _frozen(self.coupling)
        n = slope.size
        if slope.ndim != 1 or tau_slope.shape != (n,) or coupling.shape != (n, n):
            raise ValueError("slope, tau_slope and coupling dimensions disagree")
        if not (np.all(np.isfinite(slope)) and np.all(np.isfinite(tau_slope))):
            raise ValueError("slopes must be finite")
        if not is_symmetric(coupling):
            raise ValueError("coupling matrix must be symmetric")
        object.__setattr__(self, "slope", slope)
        object.__setattr__(self, "tau_slope", tau_slope)
        object.__setattr__(self, "coupling", coupling)
        object.__setattr__(self, "tau", float(self.tau))

    @property
    def n(self):
        return self.slope.size

    @property
    def intercept(self):
        """Level energies at t = 0: tau_slope * tau + diag(coupling)."""
        return self.tau_slope * self.tau + np.diag(self.coupling)

    def with_tau(self, tau):
        return replace(self, tau=tau)

    def offdiag(self):
        return self.coupling - np.diag(np.diag(self.coupling))


@dataclass(frozen=True)
class TtauPartner:
    b11: np.ndarray
    a1: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        b11 = _frozen(self.b11)
        a1 = _frozen(self.a1)
        c = _frozen(self.c)
        n = b11.size
        if a1.shape != (n, n) or c.shape != (n, n):
            raise ValueError("partner dimensions disagree")
        if not (is_symmetric(a1) and is_symmetric(c)):
            raise ValueError("a1 and c must be symmetric")
        object.__setattr__(self, "b11", b11)
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "c", c)

    @property
    def n(self):
        return self.b11.size

    @classmethod
    def zero(cls, n):
        return cls(np.zeros(n), np.zeros((n, n)), np.zeros((n, n)))


@dataclass(frozen=True)
class SectorBasis:
    labels: tuple
    conserved: str = ""
    value: int = 0

    def __post_init__(self):
        labels = tuple(tuple(int(x) for x in lab) for lab in self.labels)
        if len(set(labels)) != len(labels):
            raise ValueError("sector labels must be unique")
        object.__setattr__(self, "labels", labels)

    @property
    def dimension(self):
        return len(self.labels)


def assemble_H(model, t, tau=None):
    tau = model.tau if tau is None else tau
    return np.diag(model.slope * t + model.tau_slope * tau) + model.coupling


def assemble_Hprime(model, partner, t, tau=None):
    tau = model.tau if tau is None else tau
    if tau == 0:
        raise ValueError("H' has a pole at tau = 0")
    if partner.n != model.n:
        raise ValueError("model and partner dimensions disagree")
    return np.diag(partner.b11 * tau + model.tau_slope * t) + partner.a1 + partner.c / tau


def _sym(n, entries):
    a = np.zeros((n, n))
    for (i, j), v in entries.items():
        a[i, j] = v
        a[j, i] = v
    return a


# ---------------------------------------------------------------- small models


def build_lz2(g, beta=1.0, tau=1.0):
    """Two-state LZ crossing: slopes (beta, 0), coupling g, crossing at t = 0."""
    return DiabaticModel([beta, 0.0], [0.0, 0.0], _sym(2, {(0, 1): g}), tau, "lz2")


def h5_g3(g1, g2):
    if g2 * g2 < g1 * g1:
        raise ValueError(f"g2^2 < g1^2 makes g3 imaginary (g1={g1}, g2={g2})")
    return float(np.sqrt(2.0 * (g2 * g2 - g1 * g1)))


def build_h5_ansatz(e1, e2, b, g1, g2, g3, tau=1.0):
    """Five-state connectivity with g3 left free (integrable only on the g3 constraint)."""
    if b == 0:
        raise ValueError("b must be nonzero")
    r2 = np.sqrt(2.0)
    coupling = _sym(5, {(0, 2): g1, (1, 2): g2, (0, 3): g3, (0, 4): g2 * r2, (1, 4): g1 * r2})
    return DiabaticModel(
        [0.0, 0.0, -b, -b, b], [e1, -e2, -e2, e1, e1], coupling, tau, "h5"
    )


def build_h5(e1, e2, b, g1, g2, tau=1.0):
    """Integrable five-state model and its commuting t/tau partner."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    g3 = h5_g3(g1, g2)
    model = build_h5_ansatz(e1, e2, b, g1, g2, g3, tau)
    s = e1 + e2
    r2 = np.sqrt(2.0)
    b11 = np.array([0.0, -s * s / b, -s * s / b, 0.0, 0.0])
    a1 = _sym(5, {(0, 2): s * g1 / b, (1, 4): r2 * s * g1 / b})
    c = np.zeros((5, 5))
    c[0, 0] = g1 * g1
    c[0, 1] = c[1, 0] = -g1 * g2
    c[1, 1] = g2 * g2
    c[2, 2] = g3 * g3 / 2.0
    c[2, 3] = c[3, 2] = -g1 * g3
    c[3, 3] = 2.0 * g1 * g1
    return model, TtauPartner(b11, a1, c / b)


def build_h6(e1, e2, b, g, tau=1.0):
    if b == 0:
        raise ValueError("b must be nonzero")
    if tau <= 0:
        raise ValueError("tau must be positive")
    edges = [(1, 3), (2, 3), (0, 4), (1, 4), (0, 5), (1, 5), (2, 5)]
    coupling = _sym(6, {e: g for e in edges})
    return DiabaticModel(
        [0.0, 0.0, 0.0, b, b, -b], [e1, 0.0, -e2, -e2, e1, 0.0], coupling, tau, "h6"
    )


def build_demkov_osherov(e, g, tau=1.0):
    """One sloped level (slope 1) crossing N-1 flat levels at energies e_k * tau."""
    e = np.asarray(e, dtype=float)
    g = np.asarray(g, dtype=float)
    if e.shape != g.shape or e.ndim != 1 or e.size < 1:
        raise ValueError("need matching 1-d intercept and coupling lists")
    if np.unique(e).size != e.size:
        raise ValueError("flat levels with repeated intercepts are permanently degenerate")
    n = e.size + 1
    coupling = _sym(n, {(0, k + 1): g[k] for k in range(e.size)})
    slope = np.zeros(n)
    slope[0] = 1.0
    return DiabaticModel(slope, np.concatenate([[0.0], e]), coupling, tau, "demkov-osherov")


def build_bowtie(beta, g, tau=1.0):
    """Generalized bowtie: parallel pair 0+/0- coupled to N levels crossing at one point."""
    beta = np.asarray(beta, dtype=float)
    g = np.asarray(g, dtype=float)
    if beta.shape != g.shape or beta.ndim != 1 or beta.size < 1:
        raise ValueError("need matching 1-d slope and coupling lists")
    if np.any(beta == 0) or np.unique(beta).size != beta.size:
        raise ValueError("bowtie slopes must be nonzero and distinct")
    nb = beta.size
    n = nb + 2
    coupling = np.zeros((n, n))
    a1 = np.zeros((n, n))
    for k in range(nb):
        i = k + 2
        coupling[0, i] = coupling[i, 0] = g[k]
        coupling[1, i] = coupling[i, 1] = g[k]
        a1[0, i] = a1[i, 0] = -g[k] / beta[k]
        a1[1, i] = a1[i, 1] = g[k] / beta[k]
    kappa = float(np.sum(g * g / beta))
    c = np.zeros((n, n))
    c[:2, :2] = kappa * np.array([[1.0, -1.0], [-1.0, 1.0]])
    # +1/beta_n: the opposite sign violates [B01, A1] = [B11, A0] with this a1
    b11 = np.concatenate([[0.0, 0.0], 1.0 / beta])
    tau_slope = np.zeros(n)
    tau_slope[:2] = [1.0, -1.0]
    model = DiabaticModel(np.concatenate([[0.0, 0.0], beta]), tau_slope, coupling, tau, "bowtie")
    return model, TtauPartner(b11, a1, c)


# ------------------------------------------------------------ spin operators


SZ = np.diag([0.5, -0.5])
SP = np.array([[0.0, 1.0], [0.0, 0.0]])  # basis (up, down)
SM = SP.T


def _embed(op, site, nsites):
    out = np.ones((1, 1))
    for k in range(nsites):
        out = np.kron(out, op if k == site else np.eye(2))
    return out


def spin_operators(nspins):
    """Single-site (sz, s+, s-) lists on the 2^N product space, site 0 most significant."""
    sz = [_embed(SZ, k, nspins) for k in range(nspins)]
    sp = [_embed(SP, k, nspins) for k in range(nspins)]
    sm = [_embed(SM, k, nspins) for k in range(nspins)]
    return sz, sp, sm


def spin_dot(sz, sp, sm, k, j):
    """s_k . s_j = sz sz + (s+ s- + s- s+) / 2."""
    return sz[k] @ sz[j] + 0.5 * (sp[k] @ sm[j] + sm[k] @ sp[j])


def pair_sum(nspins):
    """Sum over ordered pairs k != j of s_k . s_j."""
    sz, sp, sm = spin_operators(nspins)
    dim = 2**nspins
    out = np.zeros((dim, dim))
    for k in range(nspins):
        for j in range(nspins):
            if k != j:
                out += spin_dot(sz, sp, sm, k, j)
    return out


@dataclass
class SpinIdentityReport:
    nspins: int
    casimir_raising_commutator: float
    alpha: float
    gamma: float
    fit_residual: float
    pair_sum_eigenvalues: list
    reference_alpha: float = 0.5
    reference_gamma: float = 0.0
    pair_sum_raising_commutator: float = 0.0

    def to_dict(self):
        return dict(self.__dict__)


def spin_identity_report(nspins):
    """Check [S^2, S+] = 0 and fit sum_{k != j} s_k.s_j = alpha S^2 + gamma I."""
    if not 1 <= nspins <= 6:
        raise ValueError("nspins must be in 1..6")
    sz, sp, sm = spin_operators(nspins)
    dim = 2**nspins
    Sz = sum(sz)
    Sp = sum(sp)
    Sm = sum(sm)
    S2 = Sz @ Sz + 0.5 * (Sp @ Sm + Sm @ Sp)
    pairs = pair_sum(nspins)
    design = np.stack([S2.ravel(), np.eye(dim).ravel()], axis=1)
    coef, *_ = np.linalg.lstsq(design, pairs.ravel(), rcond=None)
    alpha, gamma = (float(c) for c in coef)
    fit_residual = frobenius_norm(pairs - alpha * S2 - gamma * np.eye(dim))
    eig = np.unique(np.round(np.linalg.eigvalsh(pairs), 10))
    return SpinIdentityReport(
        nspins=nspins,
        casimir_raising_commutator=frobenius_norm(commutator(S2, Sp)),
        alpha=alpha,
        gamma=gamma,
        fit_residual=fit_residual,
        pair_sum_eigenvalues=[float(x) for x in eig],
        reference_gamma=-0.75 * nspins,
        pair_sum_raising_commutator=frobenius_norm(commutator(pairs, Sp)),
    )


# ------------------------------------------------------------ Tavis-Cummings


def tavis_cummings_sector(nspins, excitations):
    """Labels (n_ph, up_1..up_N) with n_ph + #up = M, descending lexicographic."""
    labels = []
    for ups in itertools.product((0, 1), repeat=nspins):
        nph = excitations - sum(ups)
        if nph >= 0:
            labels.append((nph,) + ups)
    labels.sort(reverse=True)
    if not labels:
        raise ValueError("empty excitation sector")
    return SectorBasis(tuple(labels), "excitations", excitations)


def build_tavis_cummings(eps, g, excitations, tau=1.0):
    """Driven Tavis-Cummings model restricted to a fixed excitation sector.

    Returns the model, its commuting partner and the sector basis.
    """
    eps = np.asarray(eps, dtype=float)
    nspins = eps.size
    if nspins < 1:
        raise ValueError("need at least one spin")
    if excitations < 0:
        raise ValueError("excitation number must be nonnegative")
    basis = tavis_cummings_sector(nspins, excitations)
    labels = basis.labels
    index = {lab: i for i, lab in enumerate(labels)}
    dim = len(labels)

    slope = np.array([-float(lab[0]) for lab in labels])
    sz_diag = np.array([[u - 0.5 for u in lab[1:]] for lab in labels])
    tau_slope = sz_diag @ eps
    b11 = sz_diag @ (eps * eps)

    # psi^dag s_j^- + psi s_j^+ : photon in, spin j down (and the reverse)
    hop = [np.zeros((dim, dim)) for _ in range(nspins)]
    for lab in labels:
        for j in range(nspins):
            if lab[1 + j] == 1:
                new = list(lab)
                new[0] += 1
                new[1 + j] = 0
                new = tuple(new)
                if new in index:
                    amp = np.sqrt(new[0])
                    a, b = index[new], index[lab]
                    hop[j][a, b] += amp
                    hop[j][b, a] += amp
    coupling = g * sum(hop)
    a1 = g * sum(e * h for e, h in zip(eps, hop))

    # C = g^2 sum_{k != j} s_k . s_j, spins only; photon number is a spectator
    c = np.zeros((dim, dim))
    for col, lab in enumerate(labels):
        ups = lab[1:]
        for k in range(nspins):
            for j in range(nspins):
                if k == j:
                    continue
                zz = (ups[k] - 0.5) * (ups[j] - 0.5)
                c[col, col] += zz
                if ups[k] != ups[j]:
                    flipped = list(lab)
                    flipped[1 + k], flipped[1 + j] = ups[j], ups[k]
                    c[index[tuple(flipped)], col] += 0.5
    c *= g * g

    model = DiabaticModel(slope, tau_slope, coupling, tau, "tavis-cummings")
    return model, TtauPartner(b11, a1, c), basis


def tavis_cummings_full(eps, g, max_photons, t, tau):
    """H_TC on the truncated full space (photons 0..max_photons) x 2^N, for sector tests."""
    nspins = len(eps)
    nph = max_photons + 1
    a = np.diag(np.sqrt(np.arange(1, nph)), 1)
    sz, sp, sm = spin_operators(nspins)
    Ip = np.eye(nph)
    Is = np.eye(2**nspins)
    h = -t * np.kron(a.T @ a, Is)
    for j in range(nspins):
        h += tau * eps[j] * np.kron(Ip, sz[j])
        h += g * (np.kron(a.T, sm[j]) + np.kron(a, sp[j]))
    number = np.kron(a.T @ a, Is) + sum(np.kron(Ip, s + 0.5 * np.eye(2**nspins)) for s in sz)
    return h, number


# ------------------------------------------------------------ fermions


def _jw_annihilators(nmodes):
    """Jordan-Wigner annihilators on 2^nmodes; mode 0 most significant, occupied = 1."""
    lower = np.array([[0.0, 1.0], [0.0, 0.0]])  # |occ=1> -> |occ=0>, basis (0, 1)
    parity = np.diag([1.0, -1.0])
    ops = []
    for m in range(nmodes):
        out = np.ones((1, 1))
        for k in range(nmodes):
            if k < m:
                out = np.kron(out, parity)
            elif k == m:
                out = np.kron(out, lower)
            else:
                out = np.kron(out, np.eye(2))
        ops.append(out)
    return ops


def fermion_sector(nmodes, nparticles):
    """Occupation labels (n_d, n_1..n_{N-1}) at fixed particle number, descending lexicographic."""
    labels = [occ for occ in itertools.product((0, 1), repeat=nmodes) if sum(occ) == nparticles]
    labels.sort(reverse=True)
    if not labels:
        raise ValueError("empty particle-number sector")
    return SectorBasis(tuple(labels), "particles", nparticles)


def _sector_indices(labels, nmodes):
    return [int("".join(str(b) for b in lab), 2) for lab in labels]


class FermionOperators:
    """Second-quantized operator algebra for one d mode plus N-1 c modes."""

    def __init__(self, nmodes):
        self.nmodes = nmodes
        self.ann = _jw_annihilators(nmodes)
        self.num = [a.T @ a for a in self.ann]

    def hop(self, i, j):
        """a_i^dag a_j + a_j^dag a_i."""
        return self.ann[i].T @ self.ann[j] + self.ann[j].T @ self.ann[i]


def _fermion_terms(ops, e, g, x):
    """Full-space pieces of H_F and each H_j as (t, tau, const, 1/tau) coefficient matrices."""
    nm = ops.nmodes
    nd = ops.num[0]
    n = [None] + ops.num[1:]
    ident = np.eye(2**nm)
    cmodes = range(1, nm)

    hf_t = nd.copy()
    hf_tau = sum(e[k - 1] * (ident - x * nd) @ n[k] for k in cmodes)
    hf_0 = sum(g[k - 1] * ops.hop(0, k) for k in cmodes)

    hj = []
    for j in cmodes:
        ej, gj = e[j - 1], g[j - 1]
        t_part = n[j] @ (ident - x * nd)
        others = sum((e[k - 1] * n[k] for k in cmodes if k != j), np.zeros_like(ident))
        tau_part = -ej * n[j] + x * x * nd @ n[j] @ (others + ej * n[j]) - x * n[j] @ others
        const = -gj * ops.hop(j, 0)
        inv = np.zeros_like(ident)
        for k in cmodes:
            if k == j:
                continue
            ek, gk = e[k - 1], g[k - 1]
            const = const - x * n[j] @ (gk * ops.hop(0, k))
            inv = inv - (gk * gj * ops.hop(j, k) - gj * gj * n[k] - gk * gk * n[j]) / (ej - ek)
        hj.append((t_part, tau_part, const, inv))
    return (hf_t, hf_tau, hf_0), hj


@dataclass(frozen=True)
class FermionModel:
    model: DiabaticModel
    partner: TtauPartner
    basis: SectorBasis
    components: tuple  # per H_j: (t, tau, const, 1/tau) matrices on the sector
    x: float

    def H_j(self, j, t, tau=None):
        """H_j(tau e) at (t, tau); e_j -> tau e_j throughout."""
        tau = self.model.tau if tau is None else tau
        ct, ctau, c0, cinv = self.components[j]
        return t * ct + tau * ctau + c0 + cinv / tau


def build_fermion(e, g, x, nparticles, tau=1.0):
    """Interacting fermion model (one d mode, N-1 c modes) at fixed particle number.

    The partner is H'_F = sum_j e_j H_j(tau e) split into t/tau-family pieces.
    """
    e = np.asarray(e, dtype=float)
    g = np.asarray(g, dtype=float)
    if e.shape != g.shape or e.ndim != 1 or e.size < 1:
        raise ValueError("need matching 1-d intercept and coupling lists")
    if np.unique(e).size != e.size:
        raise ValueError("intercepts e_k must be distinct")
    nmodes = e.size + 1
    if not 1 <= nparticles <= nmodes:
        raise ValueError("particle number out of range")
    ops = FermionOperators(nmodes)
    basis = fermion_sector(nmodes, nparticles)
    idx = _sector_indices(basis.labels, nmodes)
    sel = np.ix_(idx, idx)

    (hf_t, hf_tau, hf_0), hj_full = _fermion_terms(ops, e, g, x)
    slope = np.diag(hf_t[sel]).copy()
    tau_slope = np.diag(hf_tau[sel]).copy()
    coupling = hf_0[sel]
    components = tuple(tuple(m[sel] for m in parts) for parts in hj_full)

    dim = len(idx)
    b11 = np.zeros(dim)
    a1 = np.zeros((dim, dim))
    c = np.zeros((dim, dim))
    for ej, (ct, ctau, c0, cinv) in zip(e, components):
        b11 += ej * np.diag(ctau)
        a1 += ej * c0
        c += ej * cinv
    model = DiabaticModel(slope, tau_slope, coupling, tau, "fermion")
    return FermionModel(model, TtauPartner(b11, a1, c), basis, components, float(x))


def fermion_full_hamiltonian(e, g, x, t, tau):
    ops = FermionOperators(len(e) + 1)
    (hf_t, hf_tau, hf_0), _ = _fermion_terms(ops, np.asarray(e, float), np.asarray(g, float), x)
    return t * hf_t + tau * hf_tau + hf_0, sum(ops.num)
