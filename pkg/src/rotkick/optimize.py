"""Derivative-free tuning of interleaved-train delays.

Coarse grid per delay followed by cyclic coordinate descent on a fine grid.
The objective (integrated squared coherence, optionally restricted to high
J) is cheap enough that no gradient machinery is warranted, and the grid
keeps the search reproducible to the step size.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .ensemble import EnsembleState, evolve_ensemble
from .observables import ProbeSpec, SpectrogramGrid, coherences, integrated_coherence, spectrogram
from .parallel import map_ordered
from .rotor import MoleculeSpec, revival_time
from .trains import InterleaveTemplate, interleaved_train


@dataclass(frozen=True)
class Objective:
    kind: str = "total-coherence"
    j_min: int = 17

    def __post_init__(self):
        if self.kind not in ("total-coherence", "high-J-coherence"):
            raise ValueError("objective kind must be total-coherence or high-J-coherence")

    def value(self, cv) -> float:
        return integrated_coherence(cv, None if self.kind == "total-coherence" else self.j_min)


@dataclass(frozen=True)
class SearchSpec:
    """Grid geometry of the delay search; bounds are per free delay, seconds."""

    coarse_step: float
    fine_step: float
    bounds: dict[str, tuple[float, float]]
    constrain_T3: bool = True
    max_passes: int = 25


def default_search(mol: MoleculeSpec, window_fraction: float = 0.06, constrain_T3: bool = True) -> SearchSpec:
    tr = revival_time(mol)
    fr = {"T1": 0.25, "T2": 0.5, "T3": 0.75, "T4": 1.0}
    names = ("T1", "T2", "T4") if constrain_T3 else ("T1", "T2", "T3", "T4")
    bounds = {k: ((fr[k] - window_fraction) * tr, (fr[k] + window_fraction) * tr) for k in names}
    return SearchSpec(
        coarse_step=tr / 200.0,
        fine_step=tr / 2000.0,
        bounds=bounds,
        constrain_T3=constrain_T3,
    )


def evaluate_objective(tpl: InterleaveTemplate, obj: Objective, ens0: EnsembleState) -> float:
    """Objective right after the last pulse of the realized train."""
    train = interleaved_train(tpl)
    final = evolve_ensemble(ens0, train, keep_snapshots=False)[-1]
    return obj.value(coherences(final))


def _with_delay(tpl: InterleaveTemplate, name: str, value: float) -> InterleaveTemplate:
    if name not in ("T1", "T2", "T3", "T4"):
        raise ValueError(f"unknown delay {name!r}")
    if name == "T3" and tpl.constrain_T3:
        raise ValueError("T3 is slaved to T1+T2 on this template")
    return tpl.with_delays(**{name: value})


def scan_delay(
    tpl: InterleaveTemplate,
    name: str,
    values,
    obj: Objective,
    ens0: EnsembleState,
    probe: ProbeSpec | None = None,
    threads: int | None = None,
):
    """Objective along one delay axis; optionally the per-J spectrogram too.

    Returns (values, objective array, SpectrogramGrid or None).
    """
    values = np.asarray(list(values), dtype=float)

    def final_state(v: float) -> EnsembleState:
        train = interleaved_train(_with_delay(tpl, name, float(v)))
        return evolve_ensemble(ens0, train, keep_snapshots=False)[-1]

    finals = map_ordered(final_state, values, threads=threads)
    curve = np.array([obj.value(coherences(s)) for s in finals])
    gram = None
    if probe is not None:
        gram = spectrogram(values, finals, probe, ens0.mol)
    return values, curve, gram


@dataclass(frozen=True)
class OptimizeResult:
    T1: float
    T2: float
    T3: float
    T4: float
    objective: float
    trace: tuple[tuple[str, float, float], ...]  # (delay name, new value, objective)
    evaluations: int


def optimize_delays(
    tpl: InterleaveTemplate,
    obj: Objective,
    search: SearchSpec,
    ens0: EnsembleState,
    threads: int | None = None,
) -> OptimizeResult:
    """Coarse grid sweep per delay, then cyclic fine coordinate descent.

    Ties break toward the smaller delay so the result is grid-deterministic.
    The trace records every accepted move; its objective column is
    non-decreasing by construction.
    """
    tpl = replace(tpl, constrain_T3=search.constrain_T3)
    names = tuple(search.bounds)
    # counted outside the worker calls; a shared counter inside the threaded
    # map would race and make the reported total run-dependent
    evals = 0

    def measure(t: InterleaveTemplate) -> float:
        return evaluate_objective(t, obj, ens0)

    best = measure(tpl)
    evals += 1
    trace = [("start", float("nan"), best)]

    # coarse pass, one delay at a time
    for name in names:
        lo, hi = search.bounds[name]
        grid = np.arange(lo, hi + 0.5 * search.coarse_step, search.coarse_step)
        vals = map_ordered(lambda v: measure(_with_delay(tpl, name, float(v))), grid, threads=threads)
        evals += len(grid)
        k = int(np.argmax(vals))  # argmax takes the first (smallest delay) on ties
        if vals[k] > best:
            tpl = _with_delay(tpl, name, float(grid[k]))
            best = vals[k]
            trace.append((name, float(grid[k]), best))

    # fine cyclic descent
    for _ in range(search.max_passes):
        moved = False
        for name in names:
            lo, hi = search.bounds[name]
            while True:
                cur = getattr(tpl, name)
                cands = [cur - search.fine_step, cur + search.fine_step]
                cands = [v for v in cands if lo - 1e-18 <= v <= hi + 1e-18]
                scores = [measure(_with_delay(tpl, name, v)) for v in cands]
                evals += len(cands)
                k = int(np.argmax(scores))
                if scores[k] > best:
                    tpl = _with_delay(tpl, name, cands[k])
                    best = scores[k]
                    trace.append((name, cands[k], best))
                    moved = True
                else:
                    break
        if not moved:
            break

    return OptimizeResult(
        T1=tpl.T1,
        T2=tpl.T2,
        T3=tpl.resolved_T3(),
        T4=tpl.T4,
        objective=best,
        trace=tuple(trace),
        evaluations=evals,
    )
