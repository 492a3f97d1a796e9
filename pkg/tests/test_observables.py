import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotkick.ensemble import ThermalSpec, evolve_ensemble, init_ensemble
from rotkick.observables import (
    AlignmentTrace,
    CoherenceVector,
    ProbeSpec,
    alignment,
    coherences,
    integrated_coherence,
    level_populations,
    max_populated_j,
    spectrogram,
    synth_spectrum,
    wavelength_shift_of,
)
from rotkick.rotor import O2, raman_shift, revival_time
from rotkick.trains import periodic_train


@pytest.fixture(scope="module")
def kicked(ens64):
    return evolve_ensemble(ens64, periodic_train(1, 1.0, 1.5))[-1]


def test_unkicked_has_no_coherence(ens64):
    cv = coherences(ens64)
    assert np.all(cv.values == 0)
    assert integrated_coherence(cv) == 0.0


def test_coherence_vector_accessors(kicked):
    cv = coherences(kicked)
    assert np.array_equal(cv.magnitude_squared(), np.abs(cv.values) ** 2)
    d = cv.as_dict()
    assert d[7] == cv.values[7]
    # O2 keeps odd J only, so even-J coherences stay identically zero
    assert np.all(cv.values[::2] == 0)
    assert integrated_coherence(cv, j_min=17) <= integrated_coherence(cv)


def test_populations_conserved(kicked):
    _, pops = level_populations(kicked)
    assert pops.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(pops[::2] < 1e-30)


def test_max_populated_j():
    pops = np.zeros(20)
    pops[[3, 7, 11]] = [1.0, 0.2, 0.04]
    assert max_populated_j(pops, threshold=0.05) == 7
    assert max_populated_j(pops, threshold=0.01) == 11


def test_alignment_bounds(kicked):
    a = alignment(kicked)
    assert 0.0 <= a <= 1.0


def test_wavelength_shift_sign_and_scale():
    probe = ProbeSpec()
    lam_cm = probe.center_wavelength_nm * 1e-7
    want = lam_cm**2 * raman_shift(11, O2) * 1e7
    assert wavelength_shift_of(11, probe, O2) == pytest.approx(want, rel=1e-14)
    assert wavelength_shift_of(11, probe, O2) == pytest.approx(1.15354, abs=2e-5)


def test_synth_spectrum_line_heights():
    js = np.arange(10)
    vals = np.zeros(10, dtype=complex)
    vals[5] = 0.3 + 0.4j  # |rho|^2 = 0.25
    cv = CoherenceVector(js=js, values=vals, time=0.0)
    probe = ProbeSpec()
    spec = synth_spectrum(cv, probe, O2)
    center = wavelength_shift_of(5, probe, O2)
    assert spec.intensity.max() == pytest.approx(0.25, rel=1e-3)
    assert spec.shift_nm[np.argmax(spec.intensity)] == pytest.approx(center, abs=probe.fwhm_wavelength_nm / 8)
    assert spec.tallest_peak_j() == 5
    assert spec.top_j() == 5


def test_plain_m_weighting_variant(kicked):
    weighted = coherences(kicked)
    plain = coherences(kicked, m_weighting="plain")
    # same support, different magnitudes
    assert np.array_equal(plain.values != 0, weighted.values != 0)
    assert not np.allclose(plain.values, weighted.values)
    for cv in (weighted, plain):
        spec = synth_spectrum(cv, ProbeSpec(), O2)
        assert spec.tallest_peak_j() in (7, 9, 11)
        assert all(j % 2 == 1 for j, _, _ in spec.peaks)
    with pytest.raises(ValueError):
        coherences(kicked, m_weighting="squared")
    with pytest.raises(ValueError):
        ProbeSpec(m_weighting="squared")


def test_synth_spectrum_sides():
    vals = np.zeros(8, dtype=complex)
    vals[3] = 1.0
    cv = CoherenceVector(js=np.arange(8), values=vals, time=0.0)
    both = synth_spectrum(cv, ProbeSpec(side="both"), O2)
    assert both.shift_nm.min() < 0 < both.shift_nm.max()
    s = both.intensity
    mid = np.interp(0.0, both.shift_nm, s)
    assert s.max() > 100 * mid  # resolved doublet, symmetric about the carrier
    anti = synth_spectrum(cv, ProbeSpec(side="antistokes"), O2)
    assert anti.shift_nm[np.argmax(anti.intensity)] < 0


def test_spectrogram_shape(ens64):
    finals = [
        evolve_ensemble(ens64, periodic_train(1, 1.0, p), keep_snapshots=False)[-1]
        for p in (0.5, 1.0, 1.5)
    ]
    gram = spectrogram([1.0, 2.0, 3.0], finals, ProbeSpec(), O2)
    assert gram.intensity.shape == (len(gram.shift_nm), 3)
    assert np.all(gram.intensity >= 0)
    # stronger kick, more coherence
    assert gram.intensity[:, 2].sum() > gram.intensity[:, 0].sum()


def test_alignment_trace_matches_probed_evolution(ens64):
    """The piecewise-analytic trace must reproduce a real probe snapshot."""
    trev = revival_time(O2)
    train = periodic_train(3, 0.37 * trev, 1.1)
    snaps = evolve_ensemble(ens64, train)
    trace = AlignmentTrace(snaps, O2)
    for t in (0.1 * trev, 0.52 * trev, 0.9 * trev, 1.4 * trev):
        probed = [s for s in evolve_ensemble(ens64, train, probe_times=[t]) if s.time == t][0]
        assert trace(t) == pytest.approx(alignment(probed), abs=1e-12)


def test_alignment_trace_before_first_kick(ens64):
    snaps = evolve_ensemble(ens64, periodic_train(1, 1.0, 1.0))
    trace = AlignmentTrace(snaps, O2)
    assert trace(-5e-12) == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_alignment_trace_slope_is_derivative(ens64):
    snaps = evolve_ensemble(ens64, periodic_train(1, 1.0, 2.0))
    trace = AlignmentTrace(snaps, O2)
    t0, h = 2.3e-12, 5e-17
    fd = (trace(t0 + h) - trace(t0 - h)) / (2 * h)
    assert trace.slope(t0) == pytest.approx(fd, rel=1e-5)


def test_alignment_trace_vectorized(ens64):
    snaps = evolve_ensemble(ens64, periodic_train(2, 2e-12, 1.0))
    trace = AlignmentTrace(snaps, O2)
    ts = np.linspace(-1e-12, 6e-12, 50)
    arr = trace(ts)
    assert arr.shape == ts.shape
    assert arr[0] == pytest.approx(1.0 / 3.0, abs=1e-12)
    assert np.allclose(arr[25], trace(float(ts[25])))


@settings(max_examples=20, deadline=None)
@given(P=st.floats(min_value=0.0, max_value=6.0), t=st.floats(min_value=0.0, max_value=3e-11))
def test_alignment_stays_physical(P, t):
    ens = init_ensemble(O2, ThermalSpec(population_cutoff=3e-2), j_max=48)
    probed = evolve_ensemble(ens, periodic_train(1, 1.0, P), probe_times=[t] if t > 0 else ())[-1]
    assert -1e-10 <= alignment(probed) <= 1.0 + 1e-10
