"""Finite-pulse reference propagation (validation oracle for the impulsive model).

Integrates the time-dependent Schroedinger equation per block in the
interaction picture, where the only dynamics left is the pulse coupling:

    dc/dt = i g(t) e^{+i W t} A e^{-i W t} c,
    W = 2 pi c E_J,  A = cos^2 block matrix,  integral g dt = P.

This path is deliberately slow and independent of the kick-operator code;
it exists to bound the impulsive approximation, not to run scenarios.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, solve_ivp

from .ensemble import EnsembleState
from .rotor import (
    BasisBlock,
    C_CM,
    MoleculeSpec,
    RotorBlockState,
    cos2_matrix,
    free_propagator,
    rotational_energy,
)
from .trains import PulseTrain, intensity_from_kick_strength, kick_strength_from_intensity

# integration window half-width in units of the envelope sigma; the coupling
# tail beyond 6 sigma integrates to ~2e-9 of P
WINDOW_SIGMAS = 6.0


@dataclass(frozen=True)
class PulseEnvelope:
    """Gaussian intensity envelope of one pulse."""

    fwhm: float
    peak_intensity_wcm2: float
    center_time: float = 0.0
    shape: str = "gaussian"

    def __post_init__(self):
        if self.shape != "gaussian":
            raise ValueError("only gaussian envelopes are supported")
        if self.fwhm <= 0 or self.peak_intensity_wcm2 < 0:
            raise ValueError("fwhm must be positive, intensity nonnegative")

    @property
    def sigma(self) -> float:
        return self.fwhm / (2.0 * np.sqrt(2.0 * np.log(2.0)))

    def kick_strength(self, mol: MoleculeSpec) -> float:
        return kick_strength_from_intensity(self.peak_intensity_wcm2, self.fwhm, mol)

    def coupling(self, t, mol: MoleculeSpec):
        """g(t) such that integral over the full pulse equals the kick strength."""
        P = self.kick_strength(mol)
        s = self.sigma
        return P / (s * np.sqrt(2.0 * np.pi)) * np.exp(-0.5 * ((t - self.center_time) / s) ** 2)

    def coupling_integral(self, mol: MoleculeSpec) -> float:
        lo = self.center_time - 10 * self.sigma
        hi = self.center_time + 10 * self.sigma
        val, _ = quad(lambda t: self.coupling(t, mol), lo, hi, limit=200)
        return val


def envelope_for_kick(P: float, fwhm: float, mol: MoleculeSpec, center_time: float = 0.0) -> PulseEnvelope:
    """Gaussian envelope whose integrated coupling equals P."""
    return PulseEnvelope(
        fwhm=fwhm,
        peak_intensity_wcm2=intensity_from_kick_strength(P, fwhm, mol),
        center_time=center_time,
    )


def pulse_window_propagator(
    block: BasisBlock,
    mol: MoleculeSpec,
    P: float,
    fwhm: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> tuple[np.ndarray, float]:
    """Unitary over [-w, +w] around one pulse, Schroedinger picture.

    Returns (W, w).  Using it in a train means: free-propagate to t_k - w,
    apply W, continue from t_k + w.  Free phases inside the window are part
    of W, so nothing is double-counted.
    """
    sigma = fwhm / (2.0 * np.sqrt(2.0 * np.log(2.0)))
    w = WINDOW_SIGMAS * sigma
    A = cos2_matrix(block)
    omega = 2.0 * np.pi * C_CM * rotational_energy(block.J_list, mol)
    gpk = P / (sigma * np.sqrt(2.0 * np.pi))
    n = block.dim

    def rhs(t, y):
        c = y.reshape(n, n)
        ph = np.exp(1j * omega * t)
        g = gpk * np.exp(-0.5 * (t / sigma) ** 2)
        return (1j * g * (np.conj(ph)[:, None] * (A @ (ph[:, None] * c)))).ravel()

    y0 = np.eye(n, dtype=complex).ravel()
    sol = solve_ivp(rhs, (-w, w), y0, method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"pulse integration failed: {sol.message}")
    WI = sol.y[:, -1].reshape(n, n)
    e = np.exp(-1j * omega * w)
    return (e[:, None] * WI) * e[None, :], w


def tdse_reference_propagate(
    state: RotorBlockState,
    pulse: PulseEnvelope,
    mol: MoleculeSpec,
    rtol: float = 1e-10,
) -> RotorBlockState:
    """One block state through one finite pulse; input taken at the window start.

    The input amplitudes are interpreted at t = center_time - w and the
    output is returned at t = center_time + w.
    """
    W, _ = pulse_window_propagator(state.block, mol, pulse.kick_strength(mol), pulse.fwhm, rtol=rtol)
    return RotorBlockState(block=state.block, amplitudes=W @ state.amplitudes)


def tdse_kick_ensemble(
    ens: EnsembleState,
    P: float,
    fwhm: float,
    rtol: float = 1e-10,
) -> EnsembleState:
    """Finite-pulse analogue of a single impulsive kick on a whole ensemble.

    The pulse is centered at the current ensemble time; amplitudes come back
    at the window end, center_time + w.
    """
    out = ens.copy()
    w = None
    for key in sorted(ens.blocks):
        block = ens.blocks[key]
        W, w = pulse_window_propagator(block, ens.mol, P, fwhm, rtol=rtol)
        # rewind the stored state to the window start, then push it through
        back = np.conj(free_propagator(w, block, ens.mol))
        out.amplitudes[key] = W @ (back[:, None] * ens.amplitudes[key])
    out.time = ens.time + (w if w is not None else 0.0)
    return out


def tdse_evolve_train(
    ens: EnsembleState,
    train: PulseTrain,
    fwhm: float,
    rtol: float = 1e-10,
) -> EnsembleState:
    """Whole train with finite pulses; pulses must be separated by > 2 windows."""
    mol = ens.mol
    times = train.times
    sigma = fwhm / (2.0 * np.sqrt(2.0 * np.log(2.0)))
    w = WINDOW_SIGMAS * sigma
    if np.any(np.diff(times) <= 2 * w):
        raise ValueError("pulses overlap at this fwhm; finite-pulse model needs separated windows")

    props: dict[tuple, np.ndarray] = {}
    state = ens.copy()
    for i, p in enumerate(train.pulses):
        for key in sorted(state.blocks):
            block = state.blocks[key]
            ck = (key, float(p.P))
            if ck not in props:
                props[ck] = pulse_window_propagator(block, mol, p.P, fwhm, rtol=rtol)[0]
            a = state.amplitudes[key]
            dt = (p.time - w) - state.time
            if dt != 0.0:
                # dt < 0 happens only before the first pulse: rewind to the window start
                a *= free_propagator(dt, block, mol)[:, None]
            a[:] = props[ck] @ a
        state.time = p.time + w
    return state
