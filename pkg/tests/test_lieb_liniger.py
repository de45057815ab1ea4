"""Tests for the interacting-gas solvers: zero-temperature ground state,
finite-temperature thermodynamics, and the closed-form high-temperature
and virial limits.

The frozen numbers below were pinned by dual routes before being written
down: the ground-state energies against a fixed-node solve at 8x the
accepted resolution plus the weak- and strong-coupling series, and the
finite-temperature states against their defining invariants
(normalization, evenness, the free-fermion closure) and the analytic
ideal branches.  The tolerances reflect the weaker route, not the
solver's self-reported convergence.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lowdgas import (
    LLParams,
    b2_ll,
    e_res_finite_T,
    e_res_high_T,
    e_res_zero_T,
    observables,
    solve_ground_state,
    solve_tba,
)

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# parameter validation
# ---------------------------------------------------------------------------

def test_params_accept_endpoints():
    assert LLParams(0.0, 1.0).gamma == 0.0
    assert math.isinf(LLParams(math.inf, 1.0).gamma)
    assert LLParams(1.0, 0.0).tau == 0.0


@pytest.mark.parametrize(
    "gamma, tau",
    [(-1.0, 1.0), (math.nan, 1.0), (1.0, -0.5), (1.0, math.inf), (1.0, math.nan)],
)
def test_params_reject_bad_values(gamma, tau):
    with pytest.raises(ValueError):
        LLParams(gamma, tau)


# ---------------------------------------------------------------------------
# zero temperature
# ---------------------------------------------------------------------------

# energy per particle in units of hbar^2 rho^2 / 2m, frozen (rel ~1e-7)
GROUND_ENERGY = {
    0.01: 0.0095821068,
    0.1: 0.0872271484,
    1.0: 0.6391513707,
    4.7: 1.7176645445,
    10.0: 2.3107806700,
    100.0: 3.1621816044,
    1e4: 3.2885529923,
}


@pytest.mark.parametrize("gamma", sorted(GROUND_ENERGY))
def test_ground_energy_frozen(gamma):
    state = solve_ground_state(gamma)
    assert state.energy == pytest.approx(GROUND_ENERGY[gamma], rel=1e-6)


def test_ground_energy_weak_coupling_is_linear():
    # energy ~ gamma for gamma -> 0 (mean-field slope 1)
    assert solve_ground_state(1e-3).energy == pytest.approx(1e-3, rel=0.05)


def test_ground_energy_approaches_impenetrable_limit():
    # pi^2/3 from below, with a -4/ell correction that dies as 1/gamma
    e_inf = math.pi**2 / 3.0
    assert solve_ground_state(1e4).energy < e_inf
    assert solve_ground_state(1e4).energy == pytest.approx(e_inf, rel=2e-3)


def test_ground_state_closes_its_own_equations():
    state = solve_ground_state(1.0)
    assert state.ell == pytest.approx(0.6983838192166961, rel=1e-9)
    # the cutoff condition ell = gamma * integral(g) holds exactly
    assert state.gamma * float(state.weights @ state.g_nodes) == pytest.approx(
        state.ell, abs=1e-12
    )
    # energy = (gamma/ell)^3 * integral t^2 g(t)
    moment = float(state.weights @ (state.nodes**2 * state.g_nodes))
    assert (state.gamma / state.ell) ** 3 * moment == pytest.approx(
        state.energy, rel=1e-12
    )


@settings(max_examples=12, deadline=None)
@given(gamma=st.floats(0.05, 50.0))
def test_ground_state_density_properties(gamma):
    state = solve_ground_state(gamma, tol=1e-8)
    g = state.g_nodes
    assert np.all(g > 0.0)
    # even in the quasi-momentum, peaked at the center
    assert np.allclose(g, g[::-1], rtol=0.0, atol=1e-12 * g.max())
    assert g[np.argmin(np.abs(state.nodes))] == pytest.approx(g.max())
    # free-particle floor 1/2pi at the band edge
    assert g.min() > 1.0 / TWO_PI - 1e-12


def test_ground_state_rejects_nonpositive_gamma():
    with pytest.raises(ValueError):
        solve_ground_state(0.0)
    with pytest.raises(ValueError):
        solve_ground_state(-2.0)


# frozen shift values (abs ~1e-6); max sits between gamma = 4 and 5
E_RES_ZERO = {1.0: 0.24475354, 4.7: 0.41385007, 100.0: 0.06191154}


@pytest.mark.parametrize("gamma", sorted(E_RES_ZERO))
def test_zero_T_shift_frozen(gamma):
    assert e_res_zero_T(gamma) == pytest.approx(E_RES_ZERO[gamma], abs=1e-5)


def test_zero_T_shift_asymptotes():
    # weak coupling: gamma/2 with a -2 sqrt(gamma)/pi slope correction
    gamma = 0.01
    two_term = 0.5 * gamma * (1.0 - 2.0 * math.sqrt(gamma) / math.pi)
    assert e_res_zero_T(gamma) == pytest.approx(two_term, rel=5e-3)
    # strong coupling: 2 pi^2 / 3 gamma
    assert e_res_zero_T(100.0) == pytest.approx(2.0 * math.pi**2 / 300.0, rel=0.10)


# ---------------------------------------------------------------------------
# finite temperature: frozen states
# ---------------------------------------------------------------------------

# (gamma, tau) -> energy - pressure/2 per particle, units k_B T_D
TBA_E_RES = {
    (1.0, 1.0): 0.29830479,
    (10.0, 2.0): 0.42139552,
    (0.5, 0.5): 0.17361136,
    (1.0, 0.1): 0.24539994,
    (0.1, 0.5): 0.05665668,
    (1e4, 1.0): 0.00067467,
    (1.0, 100.0): 0.85933749,
}

# (gamma, tau) -> (mu, pressure, energy)
TBA_STATE = {
    (1.0, 1.0): (1.55906783, 1.20826314, 0.90243636),
    (10.0, 2.0): (6.60554847, 4.78545312, 2.81412208),
}


@pytest.mark.parametrize("gamma, tau", sorted(TBA_E_RES))
def test_finite_T_shift_frozen(gamma, tau):
    got = e_res_finite_T(LLParams(gamma, tau))
    assert got == pytest.approx(TBA_E_RES[(gamma, tau)], abs=1e-7)


@pytest.mark.parametrize("gamma, tau", sorted(TBA_STATE))
def test_finite_T_state_frozen(gamma, tau):
    sol = solve_tba(LLParams(gamma, tau))
    mu, pressure, energy = TBA_STATE[(gamma, tau)]
    p_got, e_got = observables(sol)
    assert sol.mu == pytest.approx(mu, rel=1e-7)
    assert p_got == pytest.approx(pressure, rel=1e-7)
    assert e_got == pytest.approx(energy, rel=1e-7)


# ---------------------------------------------------------------------------
# finite temperature: invariants
# ---------------------------------------------------------------------------

def test_solution_closes_its_own_equations():
    sol = solve_tba(LLParams(1.0, 1.0))
    # density normalized to one particle
    assert float(sol.weights @ sol.density) == pytest.approx(1.0, abs=1e-8)
    # even functions of K on the symmetric grid
    assert np.allclose(sol.eps, sol.eps[::-1], rtol=0.0, atol=1e-10)
    assert np.allclose(sol.density, sol.density[::-1], rtol=0.0, atol=1e-12)
    # one extra sweep of the pseudo-energy map reproduces the stored values
    resweep = np.array([sol.pseudo_energy_at(k) for k in sol.grid[::40]])
    assert np.allclose(resweep, sol.eps[::40], rtol=0.0, atol=1e-8)
    # far tail is free-particle: E(k) -> k^2 - mu
    k_far = 150.0
    assert sol.pseudo_energy_at(k_far) == pytest.approx(k_far**2 - sol.mu, rel=1e-6)


def test_density_positive_peaked_and_dressed():
    # f > 0, peaked at K = 0, and the dressed combination
    # f (1 + e^{E/tau}) stays above the bare 1/2pi (the interaction
    # convolution only ever adds states)
    for gamma, tau in [(1.0, 1.0), (0.1, 0.5), (10.0, 2.0)]:
        sol = solve_tba(LLParams(gamma, tau))
        assert np.all(sol.density > 0.0)
        assert sol.density[np.argmin(np.abs(sol.grid))] == sol.density.max()
        dressed = sol.density * (1.0 + np.exp(sol.eps / sol.tau))
        assert np.all(dressed > 1.0 / TWO_PI - 1e-12)


def test_strong_coupling_closes_free_fermion_relation():
    # at gamma = 1e4 the dressing is ~1e-4, so f (1 + e^{E/tau}) = 1/2pi
    sol = solve_tba(LLParams(1e4, 1.0))
    lhs = sol.density * (1.0 + np.exp(sol.eps / sol.tau))
    assert np.max(np.abs(lhs - 1.0 / TWO_PI)) < 1e-4


@pytest.mark.parametrize("gamma", [0.1, 1.0, 4.7, 10.0, 100.0])
@pytest.mark.parametrize("tau", [0.1, 0.5, 1.0, 2.0])
def test_finite_T_shift_positive(gamma, tau):
    assert e_res_finite_T(LLParams(gamma, tau)) > 0.0


def test_ideal_branches_are_scale_invariant():
    # gamma = 0 and gamma = inf short-circuit to exactly zero shift
    assert e_res_finite_T(LLParams(0.0, 1.0)) == 0.0
    assert e_res_finite_T(LLParams(math.inf, 1.0)) == 0.0
    # ... and the solved branches confirm it
    for gamma in (0.0, math.inf):
        sol = solve_tba(LLParams(gamma, 1.0))
        pressure, energy = observables(sol)
        assert energy - 0.5 * pressure == pytest.approx(0.0, abs=1e-9)
        assert float(sol.weights @ sol.density) == pytest.approx(1.0, abs=1e-10)
    # the Bose branch is below condensation threshold: mu < 0
    assert solve_tba(LLParams(0.0, 1.0)).mu < 0.0


def test_interacting_branches_interpolate_ideal_ones():
    # weak coupling hugs the Bose branch from above, strong coupling the
    # Fermi branch from below (in energy per particle)
    tau = 1.0
    e_bose = observables(solve_tba(LLParams(0.0, tau)))[1]
    e_fermi = observables(solve_tba(LLParams(math.inf, tau)))[1]
    e_weak = observables(solve_tba(LLParams(0.05, tau)))[1]
    e_strong = observables(solve_tba(LLParams(1e4, tau)))[1]
    assert e_bose < e_weak < e_strong < e_fermi
    assert e_strong == pytest.approx(e_fermi, rel=1e-3)


def test_solver_rejects_tiny_tau():
    with pytest.raises(ValueError, match="solve_ground_state"):
        solve_tba(LLParams(1.0, 1e-4))


def test_observables_reject_mismatched_params():
    sol = solve_tba(LLParams(1.0, 1.0))
    with pytest.raises(ValueError):
        observables(sol, LLParams(2.0, 1.0))
    assert observables(sol, LLParams(1.0, 1.0)) == observables(sol)


# ---------------------------------------------------------------------------
# closed-form limits
# ---------------------------------------------------------------------------

def test_b2_endpoints():
    weight = 1.0 / (2.0 * math.sqrt(2.0))
    assert b2_ll(LLParams(0.0, 1.0)) == pytest.approx(-weight, abs=1e-16)
    assert b2_ll(LLParams(0.0, 37.0)) == pytest.approx(-weight, abs=1e-16)
    # fermionization: +1/(2 sqrt 2) reached like 1/x for x = gamma/sqrt(2 tau)
    assert b2_ll(LLParams(200.0, 2.0)) == pytest.approx(weight, abs=4e-3)
    assert b2_ll(LLParams(2e4, 2.0)) == pytest.approx(weight, abs=4e-5)


def test_b2_crossover_value():
    # x = 1 midpoint, frozen from a 30-digit evaluation
    assert b2_ll(LLParams(math.sqrt(2.0), 1.0)) == pytest.approx(
        0.051206144369508059, rel=1e-13
    )


def test_b2_monotone_in_coupling():
    tau = 0.7
    values = [b2_ll(LLParams(g, tau)) for g in np.logspace(-3, 5, 30)]
    assert np.all(np.diff(values) > 0.0)


def test_b2_rejects_nonpositive_tau():
    with pytest.raises(ValueError):
        b2_ll(LLParams(1.0, 0.0))


def test_high_T_shift_matches_hand_evaluation():
    # gamma - sqrt(pi/2tau) gamma^2 erfcx(gamma/sqrt(2tau)) via math.erfc
    gamma, tau = 1.0, 100.0
    x = gamma / math.sqrt(2.0 * tau)
    expected = gamma - math.sqrt(math.pi / (2.0 * tau)) * gamma**2 * (
        math.exp(x * x) * math.erfc(x)
    )
    assert e_res_high_T(LLParams(gamma, tau)) == pytest.approx(expected, rel=1e-14)


def test_high_T_shift_asymptotes():
    # -> gamma when gamma^2 << tau; decays toward tau/gamma beyond
    assert e_res_high_T(LLParams(0.1, 100.0)) == pytest.approx(0.1, rel=0.02)
    with warnings.catch_warnings():
        warnings.simplefilter("error")  # tau = 100 >> 4 pi: no warning
        val = e_res_high_T(LLParams(30.0, 100.0))
    assert 0.0 < val < 100.0 / 30.0 * 1.5


def test_high_T_shift_warns_outside_validity():
    with pytest.warns(UserWarning, match="high-temperature closed form"):
        e_res_high_T(LLParams(1.0, 1.0))


def test_high_T_shift_rejects_nonpositive_tau():
    with pytest.raises(ValueError):
        e_res_high_T(LLParams(1.0, -1.0))


def test_high_T_shift_agrees_with_full_solver():
    # the degeneracy corrections die off like 1/tau; at tau = 100 the
    # full solution sits within 3% of the closed form
    params = LLParams(1.0, 100.0)
    closed = e_res_high_T(params)
    full = e_res_finite_T(params)
    assert abs(full - closed) / closed < 0.03
