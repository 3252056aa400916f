"""Spin-model Hamiltonians and the exact-evolution oracle.

Couplings and fields are dimensionless, in units of the exchange-coupling
magnitude |J|.  Evolution times are phase times: evolving for t = theta/2
advances the dynamics by quantum phase angle theta = 2|J|tau.  Physical
nanoseconds enter only in the noise module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import ID2, SX, SY, SZ, herm_expm, kron_all

VALID_KINDS = ("XY", "XYZ", "ISING")


@dataclass(frozen=True)
class SpinModelSpec:
    """Which spin model to build, with couplings in units of |J|.

    ``j_sign`` carries the sign of the device exchange coupling and
    multiplies jx/jy/jz; the field ``b`` is signed as given.
    """

    kind: str
    n_spins: int = 2
    pairs: tuple[tuple[int, int], ...] = ((0, 1),)
    jx: float = 1.0
    jy: float = 0.0
    jz: float = 0.0
    b: float = 0.0
    j_sign: int = -1

    def __post_init__(self):
        if self.kind not in VALID_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.n_spins < 2:
            raise ValueError("need at least two spins")
        if self.j_sign not in (-1, 1):
            raise ValueError("j_sign must be +1 or -1")
        seen = set()
        for i, j in self.pairs:
            if i == j:
                raise ValueError(f"pair ({i}, {j}) couples a spin to itself")
            if not (0 <= i < self.n_spins and 0 <= j < self.n_spins):
                raise ValueError(f"pair ({i}, {j}) out of range for {self.n_spins} spins")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate pair ({i}, {j})")
            seen.add(key)
        if self.kind == "ISING" and (self.jy != 0.0 or self.jz != 0.0):
            raise ValueError("ISING model has jy = jz = 0")

    @classmethod
    def xy(cls, jx: float = 1.0, j_sign: int = -1, n_spins: int = 2,
           pairs=((0, 1),)) -> "SpinModelSpec":
        return cls(kind="XY", n_spins=n_spins, pairs=tuple(pairs), jx=jx, j_sign=j_sign)

    @classmethod
    def heisenberg(cls, jx: float, jy: float, jz: float, j_sign: int = -1,
                   n_spins: int = 2, pairs=((0, 1),)) -> "SpinModelSpec":
        return cls(kind="XYZ", n_spins=n_spins, pairs=tuple(pairs),
                   jx=jx, jy=jy, jz=jz, j_sign=j_sign)

    @classmethod
    def ising(cls, jx: float = 1.0, b: float = 0.0, j_sign: int = -1,
              n_spins: int = 2, pairs=((0, 1),)) -> "SpinModelSpec":
        return cls(kind="ISING", n_spins=n_spins, pairs=tuple(pairs),
                   jx=jx, b=b, j_sign=j_sign)


def _two_site(a: np.ndarray, b: np.ndarray, i: int, j: int, n: int) -> np.ndarray:
    ops = [ID2] * n
    ops[i] = a
    ops[j] = b
    return kron_all(*ops)


def _one_site(a: np.ndarray, i: int, n: int) -> np.ndarray:
    ops = [ID2] * n
    ops[i] = a
    return kron_all(*ops)


def build_xy(spec: SpinModelSpec) -> np.ndarray:
    """(J/2) sum over pairs of (XiXj + YiYj), J = j_sign * jx."""
    if spec.kind != "XY":
        raise ValueError(f"build_xy needs kind XY, got {spec.kind}")
    n = spec.n_spins
    j = spec.j_sign * spec.jx
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i, k in spec.pairs:
        h += (j / 2.0) * (_two_site(SX, SX, i, k, n) + _two_site(SY, SY, i, k, n))
    return h


def build_heisenberg(spec: SpinModelSpec) -> np.ndarray:
    """Sum over pairs of Jx XiXj + Jy YiYj + Jz ZiZj, Jk = j_sign * jk."""
    if spec.kind != "XYZ":
        raise ValueError(f"build_heisenberg needs kind XYZ, got {spec.kind}")
    n = spec.n_spins
    jx, jy, jz = (spec.j_sign * spec.jx, spec.j_sign * spec.jy, spec.j_sign * spec.jz)
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i, k in spec.pairs:
        h += jx * _two_site(SX, SX, i, k, n)
        h += jy * _two_site(SY, SY, i, k, n)
        h += jz * _two_site(SZ, SZ, i, k, n)
    return h


def build_ising(spec: SpinModelSpec) -> np.ndarray:
    """J sum over pairs of XiXj + (b/2) sum over sites of Zi, J = j_sign * jx."""
    if spec.kind != "ISING":
        raise ValueError(f"build_ising needs kind ISING, got {spec.kind}")
    n = spec.n_spins
    j = spec.j_sign * spec.jx
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i, k in spec.pairs:
        h += j * _two_site(SX, SX, i, k, n)
    for i in range(n):
        h += (spec.b / 2.0) * _one_site(SZ, i, n)
    return h


_BUILDERS = {"XY": build_xy, "XYZ": build_heisenberg, "ISING": build_ising}


def build_hamiltonian(spec: SpinModelSpec) -> np.ndarray:
    return _BUILDERS[spec.kind](spec)


def exact_evolve(h: np.ndarray, t: float, psi0: np.ndarray) -> np.ndarray:
    """exp(-i h t) |psi0>; norm is preserved to 1e-10."""
    psi0 = np.asarray(psi0, dtype=complex)
    psi = herm_expm(h, t) @ psi0
    drift = abs(np.linalg.norm(psi) - np.linalg.norm(psi0))
    if drift > 1e-10:
        raise ValueError(f"evolution broke the state norm by {drift:.3e}")
    return psi


def dominant_angular_frequency(values, dx: float) -> float:
    """Angular frequency of the strongest non-DC FFT peak of a sampled signal.

    The signal is mean-subtracted and zero-padded (32x) so the peak location
    is resolved well below the raw bin spacing.
    """
    y = np.asarray(values, dtype=float)
    if y.size < 8:
        raise ValueError("need at least 8 samples")
    if dx <= 0:
        raise ValueError("dx must be positive")
    y = y - y.mean()
    pad = 1 << (int(np.ceil(np.log2(y.size))) + 5)
    spec = np.abs(np.fft.rfft(y, n=pad))
    k = int(np.argmax(spec[1:])) + 1
    return 2.0 * np.pi * k / (pad * dx)
