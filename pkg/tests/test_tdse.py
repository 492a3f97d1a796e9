import numpy as np
import pytest

from rotkick.ensemble import ThermalSpec, evolve_ensemble, init_ensemble
from rotkick.observables import level_populations
from rotkick.rotor import O2, BasisBlock, free_propagator, kick_operator
from rotkick.tdse import (
    PulseEnvelope,
    envelope_for_kick,
    pulse_window_propagator,
    tdse_evolve_train,
    tdse_kick_ensemble,
)
from rotkick.trains import periodic_train


def test_envelope_validation():
    with pytest.raises(ValueError):
        PulseEnvelope(fwhm=-1.0, peak_intensity_wcm2=1e12)
    with pytest.raises(ValueError):
        PulseEnvelope(fwhm=1e-13, peak_intensity_wcm2=1e12, shape="sech")


def test_coupling_integrates_to_kick_strength():
    env = envelope_for_kick(0.5, 100e-15, O2)
    assert env.kick_strength(O2) == pytest.approx(0.5, rel=1e-12)
    assert env.coupling_integral(O2) == pytest.approx(0.5, rel=1e-9)


def test_window_propagator_is_unitary():
    block = BasisBlock(M=1, parity="odd", J_max=21)
    W, w = pulse_window_propagator(block, O2, P=0.8, fwhm=100e-15)
    assert w == pytest.approx(6.0 * 100e-15 / (2 * np.sqrt(2 * np.log(2))))
    assert np.max(np.abs(W.conj().T @ W - np.eye(block.dim))) < 1e-8


def test_short_pulse_approaches_impulsive_kick():
    """At 10 fs the windowed TDSE must look like free-kick-free."""
    block = BasisBlock(M=0, parity="odd", J_max=25)
    P = 0.5
    W, w = pulse_window_propagator(block, O2, P=P, fwhm=10e-15)
    half = free_propagator(w, block, O2)
    U = half[:, None] * kick_operator(P, block).matrix() * half[None, :]
    # compare population transfer out of a thermal-range start level
    c0 = np.zeros(block.dim, dtype=complex)
    c0[block.index_of(7)] = 1.0
    p_ref = np.abs(W @ c0) ** 2
    p_imp = np.abs(U @ c0) ** 2
    assert np.max(np.abs(p_ref - p_imp)) < 1e-4


def test_tdse_kick_ensemble_matches_impulsive_populations():
    ens = init_ensemble(O2, ThermalSpec(population_cutoff=0.1), j_max=40)
    ref = tdse_kick_ensemble(ens, P=0.5, fwhm=10e-15, rtol=1e-9)
    imp = evolve_ensemble(ens, periodic_train(1, 1.0, 0.5), keep_snapshots=False)[-1]
    _, p_ref = level_populations(ref)
    _, p_imp = level_populations(imp)
    assert np.max(np.abs(p_ref - p_imp)) < 1e-4


def test_tdse_train_consistent_with_single_kicks():
    """A 2-pulse train equals kick + free + kick applied by hand."""
    ens = init_ensemble(O2, ThermalSpec(population_cutoff=0.2), j_max=30)
    T = 3e-12
    train = periodic_train(2, T, 0.7)
    fwhm = 50e-15
    out = tdse_evolve_train(ens, train, fwhm=fwhm, rtol=1e-10)

    first = tdse_kick_ensemble(ens, P=0.7, fwhm=fwhm, rtol=1e-10)  # amplitudes at +w
    state = first.copy()
    w = first.time
    for key, block in state.blocks.items():
        ph = free_propagator(T - w, block, O2)
        state.amplitudes[key] = ph[:, None] * state.amplitudes[key]
    state.time = T  # second pulse must be centered here
    second = tdse_kick_ensemble(state, P=0.7, fwhm=fwhm, rtol=1e-10)
    for key in out.blocks:
        assert np.max(np.abs(out.amplitudes[key] - second.amplitudes[key])) < 1e-8


def test_tdse_train_rejects_overlapping_windows():
    ens = init_ensemble(O2, ThermalSpec(population_cutoff=0.2), j_max=20)
    with pytest.raises(ValueError):
        tdse_evolve_train(ens, periodic_train(3, 100e-15, 0.5), fwhm=100e-15)
