import numpy as np
import pytest

from rotkick.ensemble import ThermalSpec, init_ensemble
from rotkick.observables import CoherenceVector, ProbeSpec
from rotkick.optimize import (
    Objective,
    SearchSpec,
    default_search,
    evaluate_objective,
    optimize_delays,
    scan_delay,
)
from rotkick.rotor import O2, revival_time
from rotkick.trains import InterleaveTemplate


@pytest.fixture(scope="module")
def small_ens():
    return init_ensemble(O2, ThermalSpec(population_cutoff=3e-2), j_max=48)


@pytest.fixture(scope="module")
def tpl(trev):
    return InterleaveTemplate(T4=trev, T1=0.25 * trev, T2=0.5 * trev, P=1.0, base_count=3)


def test_objective_kinds():
    js = np.arange(25)
    vals = np.zeros(25, dtype=complex)
    vals[5], vals[19] = 2.0, 1.0j
    cv = CoherenceVector(js=js, values=vals, time=0.0)
    assert Objective("total-coherence").value(cv) == pytest.approx(5.0)
    assert Objective("high-J-coherence", j_min=17).value(cv) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        Objective("fastest")


def test_scan_matches_pointwise_evaluation(tpl, small_ens, trev):
    obj = Objective()
    values = np.array([0.24, 0.25, 0.26]) * trev
    got_values, curve, gram = scan_delay(tpl, "T1", values, obj, small_ens, probe=ProbeSpec())
    assert np.array_equal(got_values, values)
    for v, y in zip(values, curve):
        assert y == pytest.approx(evaluate_objective(tpl.with_delays(T1=v), obj, small_ens), rel=1e-12)
    assert gram.intensity.shape[1] == 3


def test_scan_without_probe_skips_spectrogram(tpl, small_ens, trev):
    _, _, gram = scan_delay(tpl, "T4", np.array([trev]), Objective(), small_ens)
    assert gram is None


def test_constrained_t3_rejected(tpl, small_ens, trev):
    with pytest.raises(ValueError):
        scan_delay(tpl, "T3", np.array([0.75 * trev]), Objective(), small_ens)
    with pytest.raises(ValueError):
        scan_delay(tpl, "T5", np.array([0.75 * trev]), Objective(), small_ens)


def test_threaded_scan_is_identical(tpl, small_ens, trev):
    values = np.linspace(0.23, 0.27, 7) * trev
    _, a, _ = scan_delay(tpl, "T1", values, Objective(), small_ens, threads=1)
    _, b, _ = scan_delay(tpl, "T1", values, Objective(), small_ens, threads=4)
    assert np.array_equal(a, b)


def test_default_search_geometry(trev):
    s = default_search(O2, window_fraction=0.04)
    assert set(s.bounds) == {"T1", "T2", "T4"}
    assert s.coarse_step == pytest.approx(trev / 200)
    assert s.fine_step == pytest.approx(trev / 2000)
    lo, hi = s.bounds["T2"]
    assert lo == pytest.approx(0.46 * trev) and hi == pytest.approx(0.54 * trev)
    free = default_search(O2, constrain_T3=False)
    assert set(free.bounds) == {"T1", "T2", "T3", "T4"}


def test_optimize_trace_monotone_and_reproducible(tpl, small_ens, trev):
    search = SearchSpec(
        coarse_step=trev / 100,
        fine_step=trev / 1000,
        bounds={"T1": (0.22 * trev, 0.28 * trev), "T4": (0.97 * trev, 1.03 * trev)},
    )
    res1 = optimize_delays(tpl, Objective(), search, small_ens)
    res2 = optimize_delays(tpl, Objective(), search, small_ens, threads=4)
    assert (res1.T1, res1.T2, res1.T3, res1.T4) == (res2.T1, res2.T2, res2.T3, res2.T4)
    assert (res1.objective, res1.evaluations) == (res2.objective, res2.evaluations)
    for (n1, v1, s1), (n2, v2, s2) in zip(res1.trace, res2.trace, strict=True):
        assert n1 == n2 and s1 == s2
        assert v1 == v2 or (np.isnan(v1) and np.isnan(v2))
    scores = [s for _, _, s in res1.trace]
    assert all(b >= a for a, b in zip(scores, scores[1:]))
    assert res1.objective == scores[-1]
    assert res1.objective >= evaluate_objective(tpl, Objective(), small_ens)
    assert res1.T3 == pytest.approx(res1.T1 + res1.T2)
    assert res1.evaluations >= len(res1.trace)
