"""Rigid/centrifugally-distorted linear rotor in the |J,M> basis.

A linearly polarized, non-resonant pulse couples to the molecular
polarizability through cos^2(theta).  M and the parity of J are conserved,
so everything factorizes into independent tridiagonal blocks labelled by
(|M|, J parity).  Energies are handled in spectroscopic units (cm^-1) and
converted to angular phase only when propagating.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

# speed of light, cm/s (phase per unit time of 1 cm^-1 is 2*pi*c times this)
C_CM = 2.99792458e10


@dataclass(frozen=True)
class MoleculeSpec:
    """Rotational constants and coupling strength of a linear molecule.

    B, D in cm^-1; delta_alpha in SI (C m^2 / V); parity restricts the
    populated J ladder ('odd', 'even' or 'both').
    """

    name: str
    B: float
    D: float = 0.0
    delta_alpha: float = 0.0
    parity: str = "both"

    def __post_init__(self):
        if self.B <= 0:
            raise ValueError(f"B must be positive, got {self.B}")
        if self.parity not in ("odd", "even", "both"):
            raise ValueError(f"parity must be odd|even|both, got {self.parity!r}")

    def with_(self, **kw) -> "MoleculeSpec":
        d = self.__dict__ | kw
        return MoleculeSpec(**d)


# O2 ground state: nuclear spin statistics leave only odd J populated.
O2 = MoleculeSpec(name="O2", B=1.4377, D=4.84e-6, delta_alpha=1.14e-40, parity="odd")


def rotational_energy(J, mol: MoleculeSpec):
    """E_J / hc = B J(J+1) - D J^2 (J+1)^2, in cm^-1."""
    J = np.asarray(J, dtype=float)
    x = J * (J + 1.0)
    return mol.B * x - mol.D * x * x


def raman_shift(J, mol: MoleculeSpec):
    """S-branch spacing E_{J+2} - E_J in cm^-1: B(4J+6) - D[(J+2)^2(J+3)^2 - J^2(J+1)^2]."""
    J = np.asarray(J, dtype=float)
    return rotational_energy(J + 2, mol) - rotational_energy(J, mol)


def revival_time(mol: MoleculeSpec) -> float:
    """Full rephasing period 1/(2cB) of the rigid rotor, in seconds."""
    return 1.0 / (2.0 * C_CM * mol.B)


def classical_period(J, mol: MoleculeSpec):
    """tau_J = 2 / (c * raman_shift(J)), seconds.

    For D=0 this is T_rev/(J + 3/2): the packet built on (J, J+2) completes
    one full rotation in tau_J.
    """
    return 2.0 / (C_CM * raman_shift(J, mol))


def allowed_j(M: int, parity: str, j_max: int) -> np.ndarray:
    """Ascending J ladder with |M| <= J <= j_max restricted to one parity."""
    lo = abs(M)
    js = np.arange(lo, j_max + 1)
    if parity == "odd":
        js = js[js % 2 == 1]
    elif parity == "even":
        js = js[js % 2 == 0]
    return js


@dataclass(frozen=True)
class BasisBlock:
    """One conserved (M, J-parity) subspace truncated at J_max.

    Hash/equality ignore the derived J_list, so blocks can key caches.
    """

    M: int
    parity: str
    J_max: int
    J_list: np.ndarray = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        if self.parity not in ("odd", "even"):
            raise ValueError("block parity must be odd or even")
        js = allowed_j(self.M, self.parity, self.J_max)
        if js.size == 0:
            raise ValueError(f"empty block: M={self.M}, parity={self.parity}, J_max={self.J_max}")
        object.__setattr__(self, "J_list", js)

    @property
    def dim(self) -> int:
        return self.J_list.size

    def index_of(self, J: int) -> int:
        i = int(np.searchsorted(self.J_list, J))
        if i >= self.dim or self.J_list[i] != J:
            raise ValueError(f"J={J} not in block (M={self.M}, {self.parity})")
        return i


@dataclass
class RotorBlockState:
    """Amplitude vector c_J over one block's ladder."""

    block: BasisBlock
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape[0] != self.block.dim:
            raise ValueError("amplitude length must match block dimension")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def basis_state(block: BasisBlock, J: int) -> RotorBlockState:
    c = np.zeros(block.dim, dtype=complex)
    c[block.index_of(J)] = 1.0
    return RotorBlockState(block=block, amplitudes=c)


def cos2_diagonal(J, M):
    """<J,M|cos^2|J,M> = 1/3 + (2/3) [J(J+1) - 3M^2] / [(2J-1)(2J+3)]."""
    J = np.asarray(J, dtype=float)
    M = np.asarray(M, dtype=float)
    return 1.0 / 3.0 + (2.0 / 3.0) * (J * (J + 1) - 3 * M * M) / ((2 * J - 1) * (2 * J + 3))


def cos2_offdiagonal(J, M):
    """<J+2,M|cos^2|J,M>, the S-branch coupling element."""
    J = np.asarray(J, dtype=float)
    M = np.asarray(M, dtype=float)
    num = ((J + 1) ** 2 - M * M) * ((J + 2) ** 2 - M * M)
    return np.sqrt(num) / ((2 * J + 3) * np.sqrt((2 * J + 1) * (2 * J + 5)))


def cos2_matrix(block: BasisBlock) -> np.ndarray:
    """Dense symmetric cos^2 matrix over the block's J ladder (tridiagonal in ladder index)."""
    js = block.J_list
    n = js.size
    A = np.zeros((n, n))
    A[np.arange(n), np.arange(n)] = cos2_diagonal(js, block.M)
    if n > 1:
        off = cos2_offdiagonal(js[:-1], block.M)
        A[np.arange(n - 1), np.arange(1, n)] = off
        A[np.arange(1, n), np.arange(n - 1)] = off
    return A


@dataclass(frozen=True)
class KickOperator:
    """Spectral factorization of exp(i P cos^2) on one block.

    Stored as (V, w): apply as V @ (exp(iPw) * (V.T @ c)).  Reusing V
    across P values keeps delay scans cheap.
    """

    block: BasisBlock
    P: float
    V: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)

    def apply(self, c: np.ndarray) -> np.ndarray:
        ph = np.exp(1j * self.P * self.w)
        return self.V @ (ph[:, None] * (self.V.T @ c)) if c.ndim == 2 else self.V @ (ph * (self.V.T @ c))

    def matrix(self) -> np.ndarray:
        return self.V @ (np.exp(1j * self.P * self.w)[:, None] * self.V.T)


@lru_cache(maxsize=None)
def cos2_eigensystem(block: BasisBlock):
    """Eigendecomposition of cos^2 on the block (tridiagonal solver, memoized)."""
    js = block.J_list
    d = cos2_diagonal(js, block.M)
    e = cos2_offdiagonal(js[:-1], block.M) if js.size > 1 else np.zeros(0)
    w, V = eigh_tridiagonal(d, e)
    w.setflags(write=False)
    V.setflags(write=False)
    return w, V


def kick_operator(P: float, block: BasisBlock) -> KickOperator:
    w, V = cos2_eigensystem(block)
    return KickOperator(block=block, P=float(P), V=V, w=w)


def free_propagator(dt: float, block: BasisBlock, mol: MoleculeSpec) -> np.ndarray:
    """Diagonal phases exp(-i 2 pi c E_J dt) over the block ladder."""
    E = rotational_energy(block.J_list, mol)
    return np.exp(-1j * 2.0 * np.pi * C_CM * E * dt)
