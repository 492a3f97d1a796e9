"""Thermal ensembles of rotors and their propagation through pulse trains.

Members are the initially populated |J0, M> states.  States with +-M evolve
identically under the cos^2 coupling, so only M >= 0 is stored and M > 0
carries double weight.  All members sharing an (M, parity) block are stacked
as columns of one matrix, which keeps kicks as single dense matmuls.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rotor import (
    BasisBlock,
    MoleculeSpec,
    allowed_j,
    cos2_eigensystem,
    free_propagator,
    rotational_energy,
)
from .trains import PulseTrain

# Boltzmann constant over hc, in cm^-1 per kelvin
KB_HC_CM = 0.6950348004

BlockKey = tuple[int, str]  # (M, parity)


@dataclass(frozen=True)
class ThermalSpec:
    temperature: float = 294.0
    population_cutoff: float = 1e-3

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")
        if not 0 <= self.population_cutoff < 1:
            raise ValueError("cutoff must be in [0, 1)")


@dataclass(frozen=True)
class IntensityProfile:
    """Relative kick scales s and their weights for focal-volume averaging."""

    samples: tuple[tuple[float, float], ...]
    kind: str = "delta"
    s_min: float | None = None  # generator parameter, kept for round-tripping

    def __post_init__(self):
        if not self.samples:
            raise ValueError("profile needs at least one sample")
        if any(not 0 < s <= 1 or w < 0 for s, w in self.samples):
            raise ValueError("scales must be in (0,1], weights nonnegative")


DELTA_PROFILE = IntensityProfile(samples=((1.0, 1.0),), kind="delta")


def gaussian_beam_profile(n: int = 8, s_min: float = 0.2) -> IntensityProfile:
    """Transverse Gaussian beam: equal area per logarithmic intensity bin.

    s = exp(-2 r^2 / w^2) makes the annular area uniform in ln s, so
    log-spaced scales with equal weights sample the focal cross-section.
    """
    if not 0 < s_min < 1:
        raise ValueError("s_min must be in (0, 1)")
    edges = np.exp(np.linspace(np.log(s_min), 0.0, n + 1))
    mids = np.sqrt(edges[:-1] * edges[1:])
    w = np.full(n, 1.0 / n)
    return IntensityProfile(tuple(zip(mids.tolist(), w.tolist())), kind="gaussian-beam", s_min=s_min)


@dataclass(frozen=True)
class Member:
    weight: float
    J0: int
    M: int            # >= 0; M > 0 stands for the +-M pair
    key: BlockKey     # owning block
    column: int       # column index inside the block's amplitude matrix


@dataclass
class EnsembleState:
    """Block-stacked amplitudes of all thermal members at one time."""

    mol: MoleculeSpec
    time: float
    blocks: dict[BlockKey, BasisBlock]
    amplitudes: dict[BlockKey, np.ndarray]      # (dim, n_members_of_block) complex
    members: tuple[Member, ...] = field(repr=False, default=())

    def copy(self, time=None) -> "EnsembleState":
        return EnsembleState(
            mol=self.mol,
            time=self.time if time is None else time,
            blocks=self.blocks,
            amplitudes={k: a.copy() for k, a in self.amplitudes.items()},
            members=self.members,
        )

    def member_amplitudes(self, member: Member) -> np.ndarray:
        return self.amplitudes[member.key][:, member.column]

    def truncation_tail(self) -> float:
        """Largest weighted population in the top two J levels of any member."""
        worst = 0.0
        for mem in self.members:
            c = self.member_amplitudes(mem)
            worst = max(worst, mem.weight * float(np.sum(np.abs(c[-2:]) ** 2)))
        return worst


def thermal_weights(mol: MoleculeSpec, spec: ThermalSpec, j_max_populated: int = 61):
    """Normalized Boltzmann weights per (J, M) pair, cutoff relative to the peak pair.

    Returns a list of (J, M, weight) with M >= 0; the M > 0 entries carry
    the weight of both +-M.  Weights sum to 1 after the cutoff drop.
    """
    if mol.parity == "both":
        js = np.arange(0, j_max_populated + 1)
    else:
        js = allowed_j(0, mol.parity, j_max_populated)
    if js.size == 0:
        raise ValueError("no thermal levels below j_max_populated")
    kt = KB_HC_CM * spec.temperature
    w_level = np.exp(-rotational_energy(js, mol) / kt)  # per (J, M) pair
    keep = w_level >= spec.population_cutoff * w_level.max()
    js, w_level = js[keep], w_level[keep]
    total = float(np.sum(w_level * (2 * js + 1)))
    out = []
    for J, w in zip(js, w_level):
        for M in range(0, int(J) + 1):
            fold = 1.0 if M == 0 else 2.0
            out.append((int(J), M, fold * w / total))
    return out


def init_ensemble(mol: MoleculeSpec, spec: ThermalSpec, j_max: int = 128) -> EnsembleState:
    """Ensemble at t=0: one member per retained (J0, M), unit amplitude at J0."""
    pairs = thermal_weights(mol, spec, j_max_populated=min(j_max, 61))
    grouped: dict[BlockKey, list[tuple[int, float]]] = {}
    for J, M, w in pairs:
        par = "odd" if J % 2 else "even"
        grouped.setdefault((M, par), []).append((J, w))
    blocks, amps, members = {}, {}, []
    for key in sorted(grouped):
        M, par = key
        block = BasisBlock(M=M, parity=par, J_max=j_max)
        group = grouped[key]
        mat = np.zeros((block.dim, len(group)), dtype=complex)
        for col, (J, w) in enumerate(group):
            mat[block.index_of(J), col] = 1.0
            members.append(Member(weight=w, J0=J, M=M, key=key, column=col))
        blocks[key], amps[key] = block, mat
    return EnsembleState(mol=mol, time=0.0, blocks=blocks, amplitudes=amps, members=tuple(members))


def evolve_ensemble(
    ens: EnsembleState,
    train: PulseTrain,
    probe_times=(),
    keep_snapshots: bool = True,
) -> list[EnsembleState]:
    """Alternate free phases and impulsive kicks; snapshot after each pulse.

    Returned snapshots are ordered in time: one immediately after every
    pulse (unless keep_snapshots is off, then only the last), plus one at
    each requested probe time, coasting freely past the train end if needed.
    """
    mol = ens.mol
    events = [(float(p.time), "kick", float(p.P)) for p in train.pulses]
    events += [(float(t), "probe", 0.0) for t in probe_times]
    events.sort(key=lambda e: (e[0], e[1] == "probe"))  # kick first on ties

    eig = {k: cos2_eigensystem(b) for k, b in ens.blocks.items()}
    state = ens.copy()
    out = []
    for i, (t, kind, P) in enumerate(events):
        dt = t - state.time
        if dt < -1e-18:
            raise ValueError("events must not precede the current state")
        for key, block in state.blocks.items():
            a = state.amplitudes[key]
            if dt > 0:
                a *= free_propagator(dt, block, mol)[:, None]
            if kind == "kick":
                w, V = eig[key]
                a[:] = V @ (np.exp(1j * P * w)[:, None] * (V.T @ a))
        state.time = t
        if keep_snapshots or kind == "probe" or i == len(events) - 1:
            out.append(state.copy())
    return out


def intensity_average(run, profile: IntensityProfile):
    """Weighted average of power-level observables over kick-scale samples.

    `run(s)` must return a dict of arrays already quadratic in amplitude
    (populations, squared coherence magnitudes); averaging amplitudes
    across focal zones would fake inter-zone interference.
    """
    total = sum(w for _, w in profile.samples)
    acc = None
    for s, w in profile.samples:
        obs = run(s)
        if acc is None:
            acc = {k: w * np.asarray(v, dtype=float) for k, v in obs.items()}
        else:
            for k, v in obs.items():
                acc[k] = acc[k] + w * np.asarray(v, dtype=float)
    return {k: v / total for k, v in acc.items()}
