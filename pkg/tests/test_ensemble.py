import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotkick.ensemble import (
    DELTA_PROFILE,
    ThermalSpec,
    evolve_ensemble,
    gaussian_beam_profile,
    init_ensemble,
    intensity_average,
    thermal_weights,
)
from rotkick.observables import alignment, level_populations
from rotkick.rotor import O2, revival_time
from rotkick.trains import periodic_train


def test_thermal_weights_normalized_and_folded():
    pairs = thermal_weights(O2, ThermalSpec())
    assert sum(w for _, _, w in pairs) == pytest.approx(1.0, abs=1e-12)
    assert all(J % 2 == 1 for J, _, _ in pairs)
    assert all(M >= 0 for _, M, _ in pairs)
    # +-M folded onto M >= 0, so the M=M' > 0 entry carries twice the M=0 share
    assert len(pairs) == 240
    assert max(J for J, _, _ in pairs) == 29


def test_thermal_weight_boltzmann_ratio():
    # per-(J, M) Boltzmann factor, exp(-(E11 - E9)/kT) at 294 K
    by = {(J, M): w for J, M, w in thermal_weights(O2, ThermalSpec())}
    assert by[(11, 0)] / by[(9, 0)] == pytest.approx(0.7443206405, abs=1e-9)
    assert by[(9, 3)] / by[(9, 0)] == pytest.approx(2.0, rel=1e-12)


def test_cutoff_trims_tail():
    few = thermal_weights(O2, ThermalSpec(population_cutoff=0.5))
    assert len(few) < len(thermal_weights(O2, ThermalSpec()))
    assert max(J for J, _, _ in few) < 29
    assert sum(w for _, _, w in few) == pytest.approx(1.0, abs=1e-12)


def test_init_ensemble_is_isotropic():
    ens = init_ensemble(O2, ThermalSpec(), j_max=64)
    assert alignment(ens) == pytest.approx(1.0 / 3.0, abs=1e-12)
    _, pops = level_populations(ens)
    assert pops.sum() == pytest.approx(1.0, abs=1e-12)
    assert int(np.argmax(pops)) == 7  # thermal maximum of the folded odd ladder


def test_member_bookkeeping():
    ens = init_ensemble(O2, ThermalSpec(), j_max=64)
    for m in ens.members[:10]:
        c = ens.member_amplitudes(m)
        assert np.linalg.norm(c) == pytest.approx(1.0)
        assert np.count_nonzero(c) == 1


def test_evolve_snapshot_count_and_times():
    ens = init_ensemble(O2, ThermalSpec(), j_max=32)
    train = periodic_train(3, 2e-12, 0.4)
    snaps = evolve_ensemble(ens, train, probe_times=[5e-12, 9e-12])
    assert [s.time for s in snaps] == [0.0, 2e-12, 4e-12, 5e-12, 9e-12]
    last_only = evolve_ensemble(ens, train, probe_times=[5e-12, 9e-12], keep_snapshots=False)
    assert [s.time for s in last_only] == [5e-12, 9e-12]


def test_evolve_does_not_mutate_input():
    ens = init_ensemble(O2, ThermalSpec(), j_max=32)
    before = {k: a.copy() for k, a in ens.amplitudes.items()}
    evolve_ensemble(ens, periodic_train(2, 1e-12, 1.0))
    for k, a in ens.amplitudes.items():
        assert np.array_equal(a, before[k])


def test_probe_between_kicks_is_free_evolution():
    ens = init_ensemble(O2, ThermalSpec(), j_max=48)
    trev = revival_time(O2)
    kicked = evolve_ensemble(ens, periodic_train(1, 1.0, 1.2))[-1]
    probed = evolve_ensemble(ens, periodic_train(1, 1.0, 1.2), probe_times=[0.3 * trev])[-1]
    # populations are constant between kicks, phases are not
    _, p0 = level_populations(kicked)
    _, p1 = level_populations(probed)
    assert np.allclose(p0, p1, atol=1e-14)
    assert alignment(probed) != pytest.approx(alignment(kicked), abs=1e-6)


@settings(max_examples=15, deadline=None)
@given(P=st.floats(min_value=0.0, max_value=8.0), n=st.integers(min_value=1, max_value=4))
def test_evolution_preserves_total_population(P, n):
    ens = init_ensemble(O2, ThermalSpec(population_cutoff=3e-2), j_max=64)
    final = evolve_ensemble(ens, periodic_train(n, 3e-12, P), keep_snapshots=False)[-1]
    _, pops = level_populations(final)
    assert pops.sum() == pytest.approx(1.0, abs=1e-10)


def test_truncation_tail_grows_with_kicks():
    assert init_ensemble(O2, ThermalSpec(), j_max=64).truncation_tail() < 1e-15
    small = init_ensemble(O2, ThermalSpec(), j_max=24)
    hard = evolve_ensemble(small, periodic_train(6, revival_time(O2), 5.0), keep_snapshots=False)[-1]
    assert hard.truncation_tail() > 1e-3  # tiny basis on purpose


def test_intensity_profiles():
    assert DELTA_PROFILE.samples == ((1.0, 1.0),)
    prof = gaussian_beam_profile(n=6, s_min=0.2)
    scales = [s for s, _ in prof.samples]
    assert len(scales) == 6
    assert all(0.2 <= s <= 1.0 for s in scales)
    assert scales == sorted(scales)


def test_intensity_average_weights():
    prof = gaussian_beam_profile(n=4, s_min=0.3)
    out = intensity_average(lambda s: {"x": np.array([s, 2 * s])}, prof)
    mean_s = sum(s * w for s, w in prof.samples) / sum(w for _, w in prof.samples)
    assert out["x"][0] == pytest.approx(mean_s)
    assert out["x"][1] == pytest.approx(2 * mean_s)
