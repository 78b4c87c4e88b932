import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlzbench.integrability import (
    affine_distance,
    condition_residuals,
    edge_term,
    fundamental_cycles,
    partner_system,
    scan_parameter,
    solve_partner,
    verify_flow,
    verify_pair,
    zero_area_check,
)
from mlzbench.linalg import commutator, frobenius_norm
from mlzbench.models import (
    DiabaticModel,
    TtauPartner,
    build_bowtie,
    build_demkov_osherov,
    build_h5,
    build_h5_ansatz,
    build_h6,
)

from .conftest import random_symmetric


def random_model(rng, n):
    slope = rng.permutation(np.arange(n, dtype=float)) - n / 2 + rng.normal(scale=0.1, size=n)
    a0 = random_symmetric(rng, n, 0.3)
    np.fill_diagonal(a0, 0.0)
    return DiabaticModel(slope, rng.normal(size=n), a0)


# ---------------------------------------------------------------- verify_pair


@settings(max_examples=40, deadline=None)
@given(
    st.floats(0.5, 2), st.floats(0.5, 2), st.floats(0.5, 2),
    st.floats(0.01, 0.49), st.floats(0.01, 0.5), st.floats(0.5, 2),
)
def test_h5_family_residuals(e1, e2, b, g1, dg, tau):
    g2 = min(g1 + dg, 0.5)
    rep = verify_pair(*build_h5(e1, e2, b, g1, g2, tau))
    assert rep.passed and rep.max_residual < 1e-10


def test_bowtie_pair_passes():
    rep = verify_pair(*build_bowtie([1.0, -0.5, 2.0], [0.1, 0.2, 0.3]))
    assert rep.passed


def test_zero_partner_fails(h5_pair):
    model, _ = h5_pair
    rep = verify_pair(model, TtauPartner.zero(5))
    inhom = frobenius_norm(commutator(np.diag(model.tau_slope), model.coupling))
    assert not rep.passed
    assert rep.residuals["cc2"] == pytest.approx(inhom, rel=1e-14) and inhom > 0


def test_residuals_cover_all_conditions(h5_pair):
    assert set(condition_residuals(*h5_pair)) == {"cc1", "cc2", "cc3", "cc4", "cc5", "cc6"}


def test_verify_rejects_bad_inputs(h5_pair):
    model, partner = h5_pair
    with pytest.raises(ValueError):
        verify_pair(model, TtauPartner.zero(3))
    with pytest.raises(ValueError):
        verify_pair(model, partner, tol=0.0)


def test_flow_finite_difference(h5_pair):
    rep = verify_flow(*h5_pair)
    assert rep.holds and rep.fd_error < 1e-8


def test_flow_h_refinement(h5_pair):
    # both sides are linear, so central differences are exact up to roundoff
    errs = [verify_flow(*h5_pair, h=h).fd_error for h in (1e-2, 1e-3, 1e-4)]
    assert max(errs) < 1e-10


# ---------------------------------------------------------------- solve_partner


def test_solve_h5_contains_known_partner(h5_pair):
    model, partner = h5_pair
    rep = solve_partner(model)
    assert rep.feasible and rep.residual < 1e-8
    assert rep.nontrivial
    assert affine_distance(rep, partner) < 1e-8


def test_solve_identity_shifts_in_nullspace(h5_pair):
    model, partner = h5_pair
    rep = solve_partner(model)
    assert rep.nullspace_dim >= 3
    n = model.n
    shifts = [
        TtauPartner(np.ones(n), np.zeros((n, n)), np.zeros((n, n))),
        TtauPartner(np.zeros(n), np.eye(n), np.zeros((n, n))),
        TtauPartner(np.zeros(n), np.zeros((n, n)), np.eye(n)),
    ]
    for s in shifts:
        shifted = TtauPartner(partner.b11 + s.b11, partner.a1 + s.a1, partner.c + s.c)
        assert affine_distance(rep, shifted) < 1e-8
        assert verify_pair(model, shifted).passed


def test_solve_particular_commutes(h5_pair):
    model, _ = h5_pair
    rep = solve_partner(model)
    assert verify_pair(model, rep.particular, tol=1e-9).passed


@pytest.mark.parametrize(
    "model",
    [build_h6(1.0, 1.5, 1.0, 0.105), build_bowtie([1.0, -0.5, 2.0], [0.1, 0.2, 0.3])[0]],
    ids=["h6", "bowtie"],
)
def test_solve_catalog_feasible(model):
    assert solve_partner(model).feasible


@pytest.mark.parametrize("n", [4, 5])
def test_solve_random_infeasible(rng, n):
    for _ in range(20):
        rep = solve_partner(random_model(rng, n))
        assert not rep.feasible
        assert rep.residual > 1e-3 * rep.scale


def test_partner_system_shape():
    m, rhs = partner_system(build_h6(1.0, 1.5, 1.0, 0.105))
    n = 6
    assert m.shape[1] == n + n * (n + 1)
    assert rhs.shape == (m.shape[0],)


# ---------------------------------------------------------------- scans


def _ansatz(g3):
    return build_h5_ansatz(1.0, 1.0, 1.0, 0.15, 0.25, g3)


def test_scan_finds_g3():
    res = scan_parameter(_ansatz, "g3", np.linspace(0.0, 1.0, 41))
    assert len(res.roots) == 1
    assert res.roots[0][0] == pytest.approx(0.28284271247, abs=1e-6)


def test_scan_far_from_root():
    res = scan_parameter(_ansatz, "g3", [1.0])
    assert res.residuals[0] > 1e-3


def test_scan_tau_is_flat(h5_pair):
    model, _ = h5_pair
    res = scan_parameter(model.with_tau, "tau", np.linspace(0.5, 3.0, 6))
    assert max(res.residuals) < 1e-12


def test_scan_records_builder_errors():
    res = scan_parameter(lambda g1: build_h5(1, 1, 1, g1, 0.25)[0], "g1", [0.1, 0.3])
    assert res.values == [0.1] and 0.3 in res.errors


# ---------------------------------------------------------------- zero area


def test_h6_hand_cycle():
    m = build_h6(1.0, 1.5, 1.0, 0.105)
    rep = zero_area_check(m)
    assert rep.passed
    assert len(rep.cycles) == 7 - 6 + 1
    # 1 -> 5 -> 2 -> 6 -> 1 in one-based labels
    terms = [edge_term(m, a, b) for a, b in ((0, 4), (4, 1), (1, 5), (5, 0))]
    assert np.allclose(terms, [0.0, 1.0, 0.0, -1.0], atol=1e-15)
    assert sum(terms) == 0.0


def test_h6_perturbed_fails():
    m = build_h6(1.0, 1.5, 1.0, 0.105)
    ts = m.tau_slope.copy()
    ts[1] = 1.1
    rep = zero_area_check(DiabaticModel(m.slope, ts, m.coupling))
    assert not rep.passed
    assert max(abs(s) for s in rep.cycle_sums) > 1e-3


def test_tree_is_vacuous():
    rep = zero_area_check(build_demkov_osherov([-1.0, 0.0, 1.0], [0.1, 0.2, 0.3]))
    assert rep.cycles == [] and rep.passed


@pytest.mark.parametrize(
    "pair",
    [build_h5(1, 1, 1, 0.15, 0.25), build_bowtie([1.0, -0.5, 2.0], [0.1, 0.2, 0.3])],
    ids=["h5", "bowtie"],
)
def test_zerosum_edges_against_partner(pair):
    rep = zero_area_check(*pair)
    assert rep.passed
    assert rep.zerosum1 and all(z["error"] < 1e-10 for z in rep.zerosum1)


def test_fundamental_cycle_count(rng):
    for _ in range(20):
        n = int(rng.integers(3, 9))
        edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.5]
        cycles = fundamental_cycles(n, edges)
        # cyclomatic number E - V + components
        parent = list(range(n))

        def find(v):
            while parent[v] != v:
                v = parent[v]
            return v

        for a, b in edges:
            parent[find(a)] = find(b)
        comps = len({find(v) for v in range(n)})
        assert len(cycles) == len(edges) - n + comps
        es = {frozenset(e) for e in edges}
        for cyc in cycles:
            assert len(set(cyc)) == len(cyc) >= 3
            assert all(frozenset((cyc[k], cyc[(k + 1) % len(cyc)])) in es for k in range(len(cyc)))
