"""Pulse train construction and kick-strength bookkeeping.

Times are absolute seconds from the first pulse.  A train is just a sorted
list of (time, P) pairs; the interleaved geometry used throughout is four
periodic sub-trains offset by delays T1, T2, T3 within a base period T4.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .rotor import MoleculeSpec, classical_period

# vacuum permittivity (F/m), speed of light (m/s), hbar (J s)
EPS0 = 8.8541878128e-12
C_M = 2.99792458e8
HBAR = 1.054571817e-34


@dataclass(frozen=True)
class Pulse:
    time: float
    P: float


@dataclass(frozen=True)
class PulseTrain:
    pulses: tuple[Pulse, ...]
    label: str = ""

    def __post_init__(self):
        ts = [p.time for p in self.pulses]
        if any(b < a for a, b in zip(ts, ts[1:])):
            raise ValueError("pulses must be time-sorted")

    @property
    def times(self) -> np.ndarray:
        return np.array([p.time for p in self.pulses])

    @property
    def strengths(self) -> np.ndarray:
        return np.array([p.P for p in self.pulses])

    def __len__(self) -> int:
        return len(self.pulses)

    def scaled(self, s: float) -> "PulseTrain":
        return PulseTrain(tuple(Pulse(p.time, p.P * s) for p in self.pulses), self.label)


def periodic_train(N: int, T: float, P: float, label: str = "") -> PulseTrain:
    """N pulses of strength P at times 0, T, ..., (N-1) T."""
    if N < 1:
        raise ValueError("need at least one pulse")
    if T <= 0 and N > 1:
        raise ValueError("period must be positive")
    return PulseTrain(tuple(Pulse(k * T, P) for k in range(N)), label)


@dataclass(frozen=True)
class InterleaveTemplate:
    """Four periodic sub-trains offset by 0, T1, T2, T3 inside period T4.

    With constrain_T3 the third delay is slaved to T1 + T2, which keeps the
    pulse pattern palindromic within each period.
    """

    T4: float
    T1: float
    T2: float
    P: float
    T3: float | None = None
    constrain_T3: bool = True
    base_count: int = 5

    def resolved_T3(self) -> float:
        if self.constrain_T3:
            return self.T1 + self.T2
        if self.T3 is None:
            raise ValueError("T3 required when constrain_T3 is off")
        return self.T3

    def with_delays(self, T1=None, T2=None, T3=None, T4=None) -> "InterleaveTemplate":
        return replace(
            self,
            T1=self.T1 if T1 is None else T1,
            T2=self.T2 if T2 is None else T2,
            T3=self.T3 if T3 is None else T3,
            T4=self.T4 if T4 is None else T4,
        )


def interleaved_train(tpl: InterleaveTemplate, coincidence_window: float = 1e-15) -> PulseTrain:
    """Union of the four offset copies; coincident pulses merge by summing P."""
    offs = (0.0, tpl.T1, tpl.T2, tpl.resolved_T3())
    if any(o < 0 for o in offs):
        raise ValueError("delays must be nonnegative")
    base = np.arange(tpl.base_count) * tpl.T4
    times = np.sort(np.concatenate([base + o for o in offs]))
    merged_t, merged_p = [times[0]], [tpl.P]
    for t in times[1:]:
        if t - merged_t[-1] <= coincidence_window:
            merged_p[-1] += tpl.P
        else:
            merged_t.append(t)
            merged_p.append(tpl.P)
    return PulseTrain(tuple(Pulse(t, p) for t, p in zip(merged_t, merged_p)), "interleaved")


def kick_strength_from_intensity(peak_intensity_wcm2: float, fwhm: float, mol: MoleculeSpec) -> float:
    """P = (delta_alpha / 4 hbar) * integral of E^2(t) dt for a Gaussian pulse.

    E^2 peak follows from intensity I = eps0 c E^2 / 2; the Gaussian
    intensity envelope integrates to fwhm * sqrt(pi / (4 ln 2)).
    """
    if peak_intensity_wcm2 < 0 or fwhm <= 0:
        raise ValueError("intensity must be nonnegative and fwhm positive")
    e2_peak = 2.0 * peak_intensity_wcm2 * 1e4 / (EPS0 * C_M)
    integral = e2_peak * fwhm * np.sqrt(np.pi / (4.0 * np.log(2.0)))
    return mol.delta_alpha * integral / (4.0 * HBAR)


def intensity_from_kick_strength(P: float, fwhm: float, mol: MoleculeSpec) -> float:
    """Inverse of kick_strength_from_intensity, W/cm^2."""
    ref = kick_strength_from_intensity(1.0, fwhm, mol)
    return P / ref


def amplitude_jitter(train: PulseTrain, sigma: float, seed: int) -> PulseTrain:
    """Multiply each P by an independent positive factor, mean 1, std sigma."""
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    rng = np.random.default_rng(seed)
    f = np.clip(rng.normal(1.0, sigma, size=len(train)), 0.0, None)
    return PulseTrain(
        tuple(Pulse(p.time, p.P * fi) for p, fi in zip(train.pulses, f)),
        train.label + "+jitter",
    )


def resonance_trajectories(j_range, mol: MoleculeSpec, offsets=(-1, 0, 1)):
    """Table of T_J = N_J tau_J / 2 with N_J = 2J + 3 + offset.

    T_J is when the (J, J+2) packet has completed N_J half-rotations; rows
    are (J, offset, N_J, T_J seconds).
    """
    rows = []
    for J in j_range:
        tau = classical_period(J, mol)
        for off in offsets:
            n = 2 * J + 3 + off
            rows.append((int(J), int(off), int(n), float(n * tau / 2.0)))
    return rows
