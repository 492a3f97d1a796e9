"""Observables of kicked thermal ensembles: populations, Raman coherences,
alignment traces, and synthetic S-branch spectra.

The measurable coherence between J and J+2 is aggregated over ensemble
members with the cos^2 coupling element as weight; its squared magnitude is
what a narrowband Raman probe reads out line by line.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ensemble import EnsembleState
from .rotor import C_CM, MoleculeSpec, cos2_diagonal, cos2_offdiagonal, raman_shift


def level_populations(ens: EnsembleState) -> tuple[np.ndarray, np.ndarray]:
    """Weighted populations summed over members, on the global J axis 0..J_max."""
    j_max = max(b.J_max for b in ens.blocks.values())
    pops = np.zeros(j_max + 1)
    for key in sorted(ens.blocks):
        block, a = ens.blocks[key], ens.amplitudes[key]
        w = np.array([m.weight for m in ens.members if m.key == key])
        pops[block.J_list] += (np.abs(a) ** 2) @ w
    return np.arange(j_max + 1), pops


@dataclass(frozen=True)
class CoherenceVector:
    """Coupling-weighted ensemble coherences rho_J between (J, J+2)."""

    js: np.ndarray
    values: np.ndarray  # complex, aligned with js
    time: float

    def as_dict(self) -> dict[int, complex]:
        return {int(j): complex(v) for j, v in zip(self.js, self.values)}

    def magnitude_squared(self) -> np.ndarray:
        return np.abs(self.values) ** 2


def coherences(ens: EnsembleState, m_weighting: str = "coupling") -> CoherenceVector:
    """rho_J = sum over members of weight * <J,M|cos^2|J+2,M> * c_J^* c_{J+2}.

    m_weighting "plain" drops the coupling element (bare amplitude products),
    kept around as a sensitivity check on the M-aggregation model.
    """
    if m_weighting not in ("coupling", "plain"):
        raise ValueError("m_weighting must be coupling|plain")
    j_max = max(b.J_max for b in ens.blocks.values())
    acc = np.zeros(j_max - 1, dtype=complex)  # index = J, couples to J+2
    for key in sorted(ens.blocks):
        block, a = ens.blocks[key], ens.amplitudes[key]
        if block.dim < 2:
            continue
        w = np.array([m.weight for m in ens.members if m.key == key])
        off = cos2_offdiagonal(block.J_list[:-1], block.M) if m_weighting == "coupling" else 1.0
        pair = (np.conj(a[:-1, :]) * a[1:, :]) @ w
        acc[block.J_list[:-1]] += off * pair
    js = np.arange(j_max - 1)
    return CoherenceVector(js=js, values=acc, time=ens.time)


def integrated_coherence(cv: CoherenceVector, j_min: int | None = None) -> float:
    """Sum of |rho_J|^2 over J >= j_min (everything when j_min is None)."""
    sel = slice(None) if j_min is None else cv.js >= j_min
    return float(np.sum(np.abs(cv.values[sel]) ** 2))


def alignment(ens: EnsembleState) -> float:
    """Ensemble expectation of cos^2(theta); 1/3 for an isotropic gas."""
    total = 0.0
    for key in sorted(ens.blocks):
        block, a = ens.blocks[key], ens.amplitudes[key]
        w = np.array([m.weight for m in ens.members if m.key == key])
        diag = cos2_diagonal(block.J_list, block.M)
        total += float(diag @ ((np.abs(a) ** 2) @ w))
        if block.dim > 1:
            off = cos2_offdiagonal(block.J_list[:-1], block.M)
            pair = (np.conj(a[:-1, :]) * a[1:, :]) @ w
            total += 2.0 * float(np.real(off @ pair))
    return total


def angular_momentum_stats(ens: EnsembleState, threshold: float = 0.05) -> tuple[float, int]:
    """(mean J, highest J whose population is >= threshold of the peak population)."""
    js, pops = level_populations(ens)
    mean_j = float(js @ pops / pops.sum())
    above = np.nonzero(pops >= threshold * pops.max())[0]
    return mean_j, int(above[-1])


def max_populated_j(pops: np.ndarray, threshold: float = 0.05) -> int:
    above = np.nonzero(pops >= threshold * pops.max())[0]
    return int(above[-1])


@dataclass(frozen=True)
class ProbeSpec:
    """Narrowband spectral probe for state-resolved Raman readout."""

    center_wavelength_nm: float = 400.8
    fwhm_wavelength_nm: float = 0.15
    side: str = "stokes"
    m_weighting: str = "coupling"

    def __post_init__(self):
        if self.center_wavelength_nm <= 0 or self.fwhm_wavelength_nm <= 0:
            raise ValueError("probe wavelengths must be positive")
        if self.side not in ("stokes", "antistokes", "both"):
            raise ValueError("side must be stokes|antistokes|both")
        if self.m_weighting not in ("coupling", "plain"):
            raise ValueError("m_weighting must be coupling|plain")


def wavelength_shift_of(J, probe: ProbeSpec, mol: MoleculeSpec):
    """Raman line position as a wavelength shift from the probe carrier, nm.

    Small-shift linearization: d(lambda) = lambda0^2 * dnu.  Stokes lines
    come out positive (red side).
    """
    lam_cm = probe.center_wavelength_nm * 1e-7
    shift_nm = lam_cm * lam_cm * raman_shift(J, mol) * 1e7
    return shift_nm


@dataclass(frozen=True)
class RamanSpectrum:
    shift_nm: np.ndarray
    intensity: np.ndarray
    peaks: tuple[tuple[int, float, float], ...] = field(repr=False, default=())  # (J, shift, height)

    def tallest_peak_j(self) -> int:
        return max(self.peaks, key=lambda p: p[2])[0]

    def top_j(self, threshold: float = 0.05) -> int:
        """Highest-J line whose height reaches threshold * tallest."""
        cap = max(p[2] for p in self.peaks)
        return max(j for j, _, h in self.peaks if h >= threshold * cap)


def synth_spectrum(
    cv: CoherenceVector,
    probe: ProbeSpec,
    mol: MoleculeSpec,
    grid: np.ndarray | None = None,
) -> RamanSpectrum:
    """Gaussian line per coherence, height |rho_J|^2, width set by the probe."""
    mags = cv.magnitude_squared()
    live = mags > 0
    js = cv.js[live]
    heights = mags[live]
    shifts = wavelength_shift_of(js, probe, mol) if js.size else np.zeros(0)
    sides = {"stokes": (1.0,), "antistokes": (-1.0,), "both": (1.0, -1.0)}[probe.side]
    fw = probe.fwhm_wavelength_nm
    sig = fw / (2.0 * np.sqrt(2.0 * np.log(2.0)))
    if grid is None:
        extent = (float(shifts.max()) + 6 * fw) if js.size else 6 * fw
        lo = -extent if probe.side in ("antistokes", "both") else -3 * fw
        hi = extent if probe.side in ("stokes", "both") else 3 * fw
        grid = np.arange(lo, hi, fw / 8.0)
    intensity = np.zeros_like(grid)
    peaks = []
    for sgn in sides:
        for j, s, h in zip(js, shifts, heights):
            intensity += h * np.exp(-0.5 * ((grid - sgn * s) / sig) ** 2)
            peaks.append((int(j), float(sgn * s), float(h)))
    return RamanSpectrum(shift_nm=grid, intensity=intensity, peaks=tuple(peaks))


@dataclass(frozen=True)
class SpectrogramGrid:
    scan_values: np.ndarray        # seconds (delay axis) or any scan parameter
    shift_nm: np.ndarray
    intensity: np.ndarray          # (len(shift_nm), len(scan_values))


def spectrogram(scan_values, states, probe: ProbeSpec, mol: MoleculeSpec, grid=None) -> SpectrogramGrid:
    """One synthetic-spectrum column per scanned state (probe after the last pulse)."""
    scan_values = np.asarray(list(scan_values), dtype=float)
    cvs = [coherences(s, m_weighting=probe.m_weighting) for s in states]
    if grid is None:
        top = max((int(cv.js[cv.magnitude_squared() > 0][-1]) for cv in cvs if np.any(cv.magnitude_squared() > 0)), default=10)
        hi = wavelength_shift_of(top, probe, mol) + 6 * probe.fwhm_wavelength_nm
        grid = np.arange(-3 * probe.fwhm_wavelength_nm, hi, probe.fwhm_wavelength_nm / 8.0)
    cols = [synth_spectrum(cv, probe, mol, grid=grid).intensity for cv in cvs]
    return SpectrogramGrid(scan_values=scan_values, shift_nm=grid, intensity=np.stack(cols, axis=1))


class AlignmentTrace:
    """Piecewise-analytic <cos^2>(t) for an ensemble kicked at discrete times.

    Between kicks every coherence just rotates at its own Raman frequency,
    so each inter-kick segment is base + 2 Re sum rho_J exp(-i w_J (t-t_k)):
    evaluating the trace needs no further propagation.
    """

    def __init__(self, snapshots: list[EnsembleState], mol: MoleculeSpec):
        if not snapshots:
            raise ValueError("need at least one post-kick snapshot")
        self.mol = mol
        self.t_kick = np.array([s.time for s in snapshots])
        self.base = np.empty(len(snapshots))
        self.rho = []
        self.omega = []
        for i, s in enumerate(snapshots):
            cv = coherences(s)
            live = cv.magnitude_squared() > 0
            self.base[i] = alignment(s) - 2.0 * float(np.sum(np.real(cv.values[live])))
            self.rho.append(cv.values[live])
            self.omega.append(2.0 * np.pi * C_CM * raman_shift(cv.js[live], mol))

    def __call__(self, t):
        scalar = np.isscalar(t) or np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.full(t.shape, 1.0 / 3.0)
        seg = np.searchsorted(self.t_kick, t, side="right") - 1
        for k in range(len(self.t_kick)):
            sel = seg == k
            if not np.any(sel):
                continue
            dt = t[sel] - self.t_kick[k]
            osc = np.exp(-1j * np.outer(dt, self.omega[k])) @ self.rho[k]
            out[sel] = self.base[k] + 2.0 * np.real(osc)
        return float(out[0]) if scalar else out

    def slope(self, t):
        """Exact d<cos^2>/dt from the same segment data."""
        scalar = np.isscalar(t) or np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros(t.shape)
        seg = np.searchsorted(self.t_kick, t, side="right") - 1
        for k in range(len(self.t_kick)):
            sel = seg == k
            if not np.any(sel):
                continue
            dt = t[sel] - self.t_kick[k]
            osc = np.exp(-1j * np.outer(dt, self.omega[k])) @ (-1j * self.omega[k] * self.rho[k])
            out[sel] = 2.0 * np.real(osc)
        return float(out[0]) if scalar else out
