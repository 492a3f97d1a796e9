"""Quantum kicked molecular rotor: trains, thermal ensembles, Raman observables.

The library is organized around a small pipeline:

    MoleculeSpec -> init_ensemble -> evolve_ensemble(train) -> observables

with side branches for finite-pulse reference propagation (`tdse`), delay
optimization (`optimize`), and probe phase-modulation spectra (`mpm`).
"""

__version__ = "0.1.0"

from .ensemble import (
    IntensityProfile,
    ThermalSpec,
    evolve_ensemble,
    gaussian_beam_profile,
    init_ensemble,
    intensity_average,
    thermal_weights,
)
from .mpm import (
    CascadeReport,
    MediumSpec,
    ProbePulse,
    broadening_scan,
    cascade_report,
    modulated_probe_spectrum,
    phase_trace,
    spectral_fwhm,
    thermal_peak_j,
)
from .observables import (
    AlignmentTrace,
    ProbeSpec,
    RamanSpectrum,
    alignment,
    coherences,
    level_populations,
    synth_spectrum,
)
from .optimize import Objective, SearchSpec, optimize_delays, scan_delay
from .rotor import (
    O2,
    BasisBlock,
    MoleculeSpec,
    classical_period,
    cos2_matrix,
    kick_operator,
    raman_shift,
    revival_time,
    rotational_energy,
)
from .trains import (
    InterleaveTemplate,
    Pulse,
    PulseTrain,
    interleaved_train,
    kick_strength_from_intensity,
    periodic_train,
)

__all__ = [
    "AlignmentTrace",
    "BasisBlock",
    "CascadeReport",
    "IntensityProfile",
    "InterleaveTemplate",
    "MediumSpec",
    "MoleculeSpec",
    "O2",
    "Objective",
    "ProbePulse",
    "ProbeSpec",
    "Pulse",
    "PulseTrain",
    "RamanSpectrum",
    "SearchSpec",
    "ThermalSpec",
    "alignment",
    "broadening_scan",
    "cascade_report",
    "classical_period",
    "coherences",
    "cos2_matrix",
    "evolve_ensemble",
    "gaussian_beam_profile",
    "init_ensemble",
    "intensity_average",
    "interleaved_train",
    "kick_operator",
    "kick_strength_from_intensity",
    "level_populations",
    "modulated_probe_spectrum",
    "optimize_delays",
    "periodic_train",
    "phase_trace",
    "raman_shift",
    "revival_time",
    "rotational_energy",
    "scan_delay",
    "spectral_fwhm",
    "synth_spectrum",
    "thermal_peak_j",
    "thermal_weights",
]
