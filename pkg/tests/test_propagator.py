import numpy as np
import pytest

from mlzbench.models import DiabaticModel, build_demkov_osherov, build_lz2
from mlzbench.propagator import (
    DEFAULT_T_LIST,
    SCHROEDINGER,
    StepSizeUnderflow,
    evolve,
    interaction_phases,
    propagate,
    stochasticity_error,
    tau_sweep,
    transition_matrix,
    unitarity_error,
)

from .conftest import P6

SHORT_T = (60.0, 70.0, 80.0, 90.0, 100.0)


def test_zero_coupling_is_identity():
    m = DiabaticModel([1.0, -0.5, 0.0], [0.3, 0.0, -1.0], np.zeros((3, 3)))
    r = transition_matrix(m, SHORT_T)
    assert np.array_equal(r.amplitude, np.eye(3))
    assert np.array_equal(r.probability, np.eye(3))


def test_lz_survival_fig_parameters():
    r = transition_matrix(build_lz2(0.105))
    assert r.probability[0, 0] == pytest.approx(P6, abs=5e-3)
    assert r.probability[0, 0] == pytest.approx(0.9330727396, abs=1e-3)
    assert max(r.unitarity) < 1e-8


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("g", [0.05, 0.105, 0.3])
def test_lz_survival_grid(g, beta):
    r = transition_matrix(build_lz2(g, beta))
    p = np.exp(-2 * np.pi * g * g / beta)
    assert np.allclose(r.probability, [[p, 1 - p], [1 - p, p]], atol=5e-3)
    assert max(r.unitarity) < 1e-8


def test_h6_unitary_and_doubly_stochastic(h6):
    r = transition_matrix(h6)
    assert max(r.unitarity) < 1e-8
    assert r.stochasticity < 1e-6
    assert stochasticity_error(r.probability) == r.stochasticity


def test_pictures_agree():
    m = build_demkov_osherov([-1.0, 0.5], [0.3, 0.2])
    T = 5.0
    u_int = propagate(m, T)
    u_sch = propagate(m, T, picture=SCHROEDINGER)
    mapped = interaction_phases(m, T) @ u_int @ interaction_phases(m, -T).conj()
    assert np.max(np.abs(mapped - u_sch)) < 1e-8
    assert unitarity_error(u_sch) < 1e-8


def test_dispersion_shrinks_when_horizons_double():
    m = build_lz2(0.2)
    r1 = transition_matrix(m, DEFAULT_T_LIST)
    r2 = transition_matrix(m, [2 * T for T in DEFAULT_T_LIST])
    assert r2.dispersion < r1.dispersion


def test_rk_tol_refinement():
    m = build_demkov_osherov([-1.0, 0.0, 1.0], [0.1, 0.2, 0.3])
    a = transition_matrix(m, SHORT_T, rk_tol=1e-9)
    b = transition_matrix(m, SHORT_T, rk_tol=5e-10)
    assert np.max(np.abs(a.probability - b.probability)) < 1e-5
    assert b.steps > a.steps


def test_decoupled_direct_sum():
    g1, g2 = 0.1, 0.25
    coupling = np.zeros((4, 4))
    coupling[0, 1] = coupling[1, 0] = g1
    coupling[2, 3] = coupling[3, 2] = g2
    m = DiabaticModel([1.0, 0.0, 3.0, 1.0], [0.0, 0.0, 0.5, -0.5], coupling)
    r = transition_matrix(m)
    p1 = np.exp(-2 * np.pi * g1**2)
    p2 = np.exp(-2 * np.pi * g2**2 / 2.0)
    expected = np.zeros((4, 4))
    expected[:2, :2] = [[p1, 1 - p1], [1 - p1, p1]]
    expected[2:, 2:] = [[p2, 1 - p2], [1 - p2, p2]]
    assert np.allclose(r.probability, expected, atol=5e-3)
    # no leakage between blocks at all
    assert np.max(r.probability[:2, 2:]) == 0.0


def test_tau_sweep_lz2_independent():
    res = tau_sweep(build_lz2(0.105), [1.0, 2.0, 4.0], SHORT_T)
    ps = [r.probability for _, r in res]
    assert all(np.array_equal(ps[0], p) for p in ps)


def test_tau_sweep_demkov_osherov():
    res = tau_sweep(build_demkov_osherov([-1.0, 0.0, 1.0], [0.1, 0.2, 0.3]), [1.0, 2.0, 4.0])
    ps = [r.probability for _, r in res]
    assert [t for t, _ in res] == [1.0, 2.0, 4.0]
    assert max(np.max(np.abs(p - ps[0])) for p in ps) < 5e-3


def test_input_validation():
    m = build_lz2(0.1)
    with pytest.raises(ValueError):
        transition_matrix(m, [100.0, 200.0])
    with pytest.raises(ValueError):
        transition_matrix(m, [100.0, 90.0, 200.0])
    with pytest.raises(ValueError):
        propagate(m, -1.0)
    with pytest.raises(ValueError):
        tau_sweep(m, [2.0, 1.0])
    with pytest.raises(ValueError):
        evolve(m, 0.0, [1.0], rk_tol=0.0)


def test_step_size_underflow():
    with pytest.raises(StepSizeUnderflow):
        propagate(build_lz2(0.3), 2.0, rk_tol=1e-30)


def test_result_serializes():
    r = transition_matrix(build_lz2(0.1), SHORT_T)
    d = r.to_dict()
    assert d["T_list"] == list(SHORT_T)
    assert d["metadata"]["orientation"].startswith("P[j, i]")
