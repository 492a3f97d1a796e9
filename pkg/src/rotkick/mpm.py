"""Molecular phase modulation of a probe pulse (thin-medium model).

The probe acquires phi(t) = phi0 * (<cos^2>(t) - 1/3) and nothing else: no
depletion, no propagation.  Deep modulation of a narrowband probe produces
the cascaded sideband combs; a femtosecond probe reads out broadening
instead.  phi0 folds the refractive-index calibration into one knob,
linear in pressure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensemble import ThermalSpec, thermal_weights
from .parallel import map_ordered
from .rotor import C_CM, MoleculeSpec, cos2_offdiagonal, raman_shift

C_NM = 2.99792458e17  # speed of light, nm/s

# default sampling of the modulated field: 2 fs resolves shifts of ~130 cm^-1
# with margin; the window covers the probe to where its amplitude is ~1e-120
DT_DEFAULT = 2e-15
WINDOW_FWHM = 10.0
PAD_FACTOR = 4


@dataclass(frozen=True)
class ProbePulse:
    """Transform-limited Gaussian probe; fwhm is of the intensity envelope."""

    center_wavelength_nm: float = 400.8
    fwhm_duration: float = 120e-15
    delay: float = 0.0

    def __post_init__(self):
        if self.center_wavelength_nm <= 0 or self.fwhm_duration <= 0:
            raise ValueError("probe wavelength and duration must be positive")

    def envelope(self, t) -> np.ndarray:
        """Field amplitude with |A|^2 FWHM equal to fwhm_duration."""
        x = (np.asarray(t) - self.delay) / self.fwhm_duration
        return np.exp(-2.0 * np.log(2.0) * x * x)

    def transform_limited_fwhm_nm(self) -> float:
        """Spectral intensity FWHM of the unmodulated probe."""
        dnu = 2.0 * np.log(2.0) / (np.pi * self.fwhm_duration)
        return self.center_wavelength_nm**2 * dnu / C_NM


@dataclass(frozen=True)
class MediumSpec:
    phi0_per_atm: float = 60.0
    pressure_atm: float = 1.0

    def __post_init__(self):
        if self.phi0_per_atm < 0 or self.pressure_atm < 0:
            raise ValueError("medium parameters must be nonnegative")

    @property
    def phi0(self) -> float:
        return self.phi0_per_atm * self.pressure_atm


def phase_trace(t: np.ndarray, alignment: np.ndarray, medium: MediumSpec, max_step: float = 5e-15) -> np.ndarray:
    """phi(t) = phi0 * (a(t) - 1/3) on the sampled trace."""
    t = np.asarray(t, dtype=float)
    if t.size >= 2 and float(np.max(np.diff(t))) > max_step:
        raise ValueError(f"trace undersampled: step exceeds {max_step:g} s")
    return medium.phi0 * (np.asarray(alignment, dtype=float) - 1.0 / 3.0)


def spectrum_of_field(t: np.ndarray, field: np.ndarray, lam0_nm: float, pad: int = PAD_FACTOR):
    """Intensity spectrum of a sampled complex envelope.

    Returns (shift_nm ascending, intensity, nu) where shift_nm is the
    wavelength offset from the carrier (red positive) in the small-shift
    approximation and nu the envelope frequency axis.
    """
    t = np.asarray(t, dtype=float)
    dts = np.diff(t)
    if t.size < 2 or not np.allclose(dts, dts[0], rtol=1e-9, atol=0.0):
        raise ValueError("field must be sampled on a uniform grid")
    dt = float(dts[0])
    n = 1 << int(np.ceil(np.log2(t.size * pad)))
    F = np.fft.fft(field, n) * dt
    nu = np.fft.fftfreq(n, dt)
    S = np.abs(F) ** 2
    shift = -(lam0_nm**2) * nu / C_NM
    order = np.argsort(shift)
    return shift[order], S[order], nu[order]


def modulated_probe_spectrum(
    probe: ProbePulse,
    t: np.ndarray,
    phi: np.ndarray,
    pad: int = PAD_FACTOR,
):
    """Spectrum of the probe after picking up the phase trace phi(t).

    The trace must cover probe.delay +- WINDOW_FWHM * fwhm; energy is
    conserved exactly (pure phase modulation).
    """
    t = np.asarray(t, dtype=float)
    half = WINDOW_FWHM * probe.fwhm_duration
    if t[0] > probe.delay - half + 1e-18 or t[-1] < probe.delay + half - 1e-18:
        raise ValueError("phase trace does not cover the probe window")
    field = probe.envelope(t) * np.exp(1j * np.asarray(phi))
    return spectrum_of_field(t, field, probe.center_wavelength_nm, pad=pad)


def probe_grid(probe: ProbePulse, dt: float = DT_DEFAULT) -> np.ndarray:
    half = WINDOW_FWHM * probe.fwhm_duration
    n = int(np.ceil(2 * half / dt)) + 1
    return probe.delay - half + dt * np.arange(n)


def thermal_peak_j(mol: MoleculeSpec, thermal: ThermalSpec) -> int:
    """J of the strongest S-branch line of the thermal gas after a weak kick.

    First-order perturbation: line J weight is |sum_M <J,M|cos^2|J+2,M>^2
    (w_J,M - w_J+2,M)|; the kick strength cancels out of the argmax.
    """
    pairs = thermal_weights(mol, thermal)
    w = {(J, M): wt for J, M, wt in pairs}
    js = sorted({J for J, _, _ in pairs})
    best_j, best = js[0], -1.0
    for J in js:
        amp = 0.0
        for M in range(0, J + 1):
            c2 = float(cos2_offdiagonal(J, M)) ** 2
            amp += c2 * (w.get((J, M), 0.0) - w.get((J + 2, M), 0.0))
        if abs(amp) > best:
            best_j, best = J, abs(amp)
    return int(best_j)


def default_delta_cm(mol: MoleculeSpec, thermal: ThermalSpec) -> float:
    """Order spacing of the cascade: Raman shift at the thermal-peak J."""
    return float(raman_shift(thermal_peak_j(mol, thermal), mol))


@dataclass(frozen=True)
class CascadeReport:
    peak_count: int
    threshold: float
    delta_cm: float
    band_magnitudes: tuple[float, ...]   # integrated |S|, orders 1..n
    band_centers_cm: tuple[float, ...]   # intensity centroids of |shift|
    mean_band_spacing_cm: float

    def second_exceeds_first(self) -> bool:
        return len(self.band_magnitudes) >= 2 and self.band_magnitudes[1] > self.band_magnitudes[0]


def count_spectral_peaks(intensity: np.ndarray, threshold: float) -> int:
    """Strict local maxima above threshold * global max."""
    s = np.asarray(intensity)
    cap = threshold * s.max()
    idx = (s[1:-1] > s[:-2]) & (s[1:-1] > s[2:]) & (s[1:-1] > cap)
    return int(np.count_nonzero(idx))


def cascade_report(
    shift_nm: np.ndarray,
    intensity: np.ndarray,
    nu: np.ndarray,
    delta_cm: float,
    threshold: float = 0.01,
    n_bands: int = 5,
) -> CascadeReport:
    """Peak census and order-band grouping of a cascaded spectrum.

    Orders live in bins ((m-1/2) delta, (m+1/2) delta] of distance from the
    carrier, Stokes and anti-Stokes folded together.  The spacing estimate
    is the mean gap between the intensity centroids of populated bands, so
    it is a measurement, not an echo of the bin construction.
    """
    if not 0 < threshold < 1:
        raise ValueError("threshold must be in (0, 1)")
    cm = np.abs(nu) / C_CM
    mags, centers = [], []
    for m in range(1, n_bands + 1):
        sel = (cm > (m - 0.5) * delta_cm) & (cm <= (m + 0.5) * delta_cm)
        tot = float(intensity[sel].sum())
        mags.append(tot)
        centers.append(float((cm[sel] * intensity[sel]).sum() / tot) if tot > 0 else float("nan"))
    centers_arr = np.asarray(centers)
    good = ~np.isnan(centers_arr[:3])
    diffs = np.diff(centers_arr[:3][good]) if np.count_nonzero(good) >= 2 else np.array([float("nan")])
    return CascadeReport(
        peak_count=count_spectral_peaks(intensity, threshold),
        threshold=threshold,
        delta_cm=delta_cm,
        band_magnitudes=tuple(mags),
        band_centers_cm=tuple(centers),
        mean_band_spacing_cm=float(np.mean(diffs)),
    )


def spectral_fwhm(shift_nm: np.ndarray, intensity: np.ndarray) -> float:
    """Width between the outermost half-maximum crossings."""
    s = np.asarray(intensity, dtype=float)
    half = 0.5 * s.max()
    above = np.nonzero(s >= half)[0]
    i0, i1 = int(above[0]), int(above[-1])

    def cross(i, j):
        # linear interpolation between grid points j (below) and i (above)
        x0, x1, y0, y1 = shift_nm[j], shift_nm[i], s[j], s[i]
        return x0 + (half - y0) * (x1 - x0) / (y1 - y0)

    lo = cross(i0, i0 - 1) if i0 > 0 else float(shift_nm[0])
    hi = cross(i1, i1 + 1) if i1 < s.size - 1 else float(shift_nm[-1])
    return hi - lo


def spectral_centroid(shift_nm: np.ndarray, intensity: np.ndarray) -> float:
    s = np.asarray(intensity, dtype=float)
    return float((shift_nm * s).sum() / s.sum())


def broadening_scan(
    trace,
    probe: ProbePulse,
    medium: MediumSpec,
    delays,
    dt: float = DT_DEFAULT,
    threads: int | None = None,
):
    """FWHM and centroid of the modulated probe at each delay.

    `trace` is a callable t -> <cos^2>(t) (an AlignmentTrace fits).
    Returns a list of (delay, fwhm_nm, centroid_nm).
    """
    delays = [float(d) for d in delays]

    def point(d: float):
        p = ProbePulse(probe.center_wavelength_nm, probe.fwhm_duration, delay=d)
        t = probe_grid(p, dt=dt)
        phi = phase_trace(t, trace(t), medium)
        shift, S, _ = modulated_probe_spectrum(p, t, phi)
        return (d, spectral_fwhm(shift, S), spectral_centroid(shift, S))

    return map_ordered(point, delays, threads=threads)
