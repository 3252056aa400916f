"""Completely positive noise engine for the two-qubit gate protocols.

The error model combines:

* amplitude damping and pure dephasing per qubit, from T1/T2, applied after
  each gate for the gate's wall-clock duration;
* a residual ZZ phase error after each exchange (XY) gate and, accrued
  across each Trotter step's phase gates, the same fitted per-step angle;
* a constant flux-crosstalk phase offset on Q2 accrued across each Trotter
  step's phase gates;
* a depolarizing kick on the driven qubit after each microwave (x/y)
  rotation, from the benchmarked single-qubit gate fidelity.

Durations: an exchange gate occupies the flux pulse itself plus the two
buffer segments and the mandated post-flux wait; compiled z-phase gates are
flux pulses of the step's allotted time (split in proportion to their
rotation angle) plus the post-flux wait; microwave rotations take the fixed
single-qubit pulse length.  Physical nanoseconds enter the package only
here, through ``THETA_TO_NS``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit, Gate, gate_unitary
from .linalg import ID2, SX, SY, SZ, check_density_matrix, kron

J_COUPLING_MHZ = 40.4

# tau[ns] = THETA_TO_NS * theta, from theta = 2 * (2*pi*J) * tau with the
# coupling read as an ordinary frequency; theta = pi maps to ~6.19 ns.
THETA_TO_NS = 1e3 / (4.0 * math.pi * J_COUPLING_MHZ)

# benchmark exchange-gate process fidelity used for predicted fidelities
F_P_XY_REFERENCE = 0.957

DEVICE_T1_US = (7.1, 6.7)
DEVICE_T2_US = (5.4, 4.9)
# Fitted systematic phase errors; they enter with the sign of the (negative)
# exchange coupling.
DEVICE_JZ_TILDE_DEG = -2.3
DEVICE_CROSSTALK_DEG = -4.6
DEVICE_SINGLE_QUBIT_FIDELITY = 0.997

DEFAULT_GATE_DURATIONS = {
    "single_qubit_ns": 24.0,
    "xy_buffer_ns": 16.0,
    "post_flux_wait_ns": 40.0,
}


@dataclass(frozen=True)
class NoiseParams:
    """Calibrated noise model parameters (per-qubit times in microseconds)."""

    t1_us: tuple[float, float] = DEVICE_T1_US
    t2_us: tuple[float, float] = DEVICE_T2_US
    jz_tilde_angle_deg: float = DEVICE_JZ_TILDE_DEG
    crosstalk_phase_deg: float = DEVICE_CROSSTALK_DEG
    single_qubit_fidelity: float = DEVICE_SINGLE_QUBIT_FIDELITY
    gate_durations: dict = field(default_factory=lambda: dict(DEFAULT_GATE_DURATIONS))
    theta_to_ns: float = THETA_TO_NS

    def __post_init__(self):
        if len(self.t1_us) != 2 or len(self.t2_us) != 2:
            raise ValueError("t1_us and t2_us must have one entry per qubit")
        for t1, t2 in zip(self.t1_us, self.t2_us):
            if t1 <= 0 or t2 <= 0:
                raise ValueError("T1 and T2 must be positive")
            if t2 > 2.0 * t1 + 1e-12:
                raise ValueError(f"unphysical T2 = {t2} > 2*T1 = {2 * t1}")
        if not 0.0 <= self.single_qubit_fidelity <= 1.0:
            raise ValueError("single_qubit_fidelity must be in [0, 1]")
        if not (math.isfinite(self.jz_tilde_angle_deg)
                and math.isfinite(self.crosstalk_phase_deg)):
            raise ValueError("error angles must be finite")

    @classmethod
    def off(cls) -> "NoiseParams":
        return cls(t1_us=(math.inf, math.inf), t2_us=(math.inf, math.inf),
                   jz_tilde_angle_deg=0.0, crosstalk_phase_deg=0.0,
                   single_qubit_fidelity=1.0)


def amplitude_damping_kraus(gamma: float) -> list[np.ndarray]:
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must be in [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=complex)
    if gamma == 0.0:
        return [k0]
    k1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return [k0, k1]


def dephasing_kraus(lam: float) -> list[np.ndarray]:
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must be in [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - lam)]], dtype=complex)
    if lam == 0.0:
        return [k0]
    k1 = np.array([[0.0, 0.0], [0.0, math.sqrt(lam)]], dtype=complex)
    return [k0, k1]


def decoherence_kraus(duration_ns: float, t1_us: float = math.inf,
                      t2_us: float = math.inf) -> list[np.ndarray]:
    """Single-qubit relaxation-plus-dephasing channel for one gate duration.

    Amplitude damping uses gamma = 1 - exp(-t/T1); the pure-dephasing rate is
    1/T_phi = 1/T2 - 1/(2*T1) and the phase-damping parameter is
    lambda = 1 - exp(-2*t/T_phi), so off-diagonals decay as exp(-t/T2).
    """
    if duration_ns < 0:
        raise ValueError("duration must be non-negative")
    r1 = 0.0 if math.isinf(t1_us) else 1.0 / t1_us
    r2 = 0.0 if math.isinf(t2_us) else 1.0 / t2_us
    r_phi = r2 - r1 / 2.0
    if r_phi < -1e-15:
        raise ValueError(f"unphysical T2 = {t2_us} > 2*T1 = {2 * t1_us}")
    r_phi = max(r_phi, 0.0)
    t = duration_ns * 1e-3
    gamma = 1.0 - math.exp(-t * r1)
    lam = 1.0 - math.exp(-2.0 * t * r_phi)
    kraus = []
    for p in dephasing_kraus(lam):
        for a in amplitude_damping_kraus(gamma):
            k = p @ a
            if np.max(np.abs(k)) > 0.0:
                kraus.append(k)
    return kraus


def depolarizing_kraus(p: float) -> list[np.ndarray]:
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    if p == 0.0:
        return [ID2.copy()]
    return [
        math.sqrt(1.0 - 3.0 * p / 4.0) * ID2,
        math.sqrt(p / 4.0) * SX,
        math.sqrt(p / 4.0) * SY,
        math.sqrt(p / 4.0) * SZ,
    ]


def zz_error_unitary(angle_deg: float) -> np.ndarray:
    """exp(-i * (angle in radians) * Z(x)Z)."""
    a = math.radians(angle_deg)
    phases = np.exp(-1j * a * np.array([1.0, -1.0, -1.0, 1.0]))
    return np.diag(phases)


def _rz_flux_ns(gate: Gate, params: NoiseParams, metadata: dict) -> float:
    """Flux-pulse length of a compiled z-phase gate.

    The per-step z slot lasts the step's allotted interaction time; a gate
    carrying a fraction of the step's z angle takes the same fraction of
    that time.  Hand-built circuits without field metadata fall back to the
    single-qubit pulse length.
    """
    b = abs(float(metadata.get("b_over_j", 0.0)))
    if b > 0.0:
        return params.theta_to_ns * 2.0 * abs(gate.angle) / b
    return params.gate_durations["single_qubit_ns"]


def _step_z_fraction(gate: Gate, metadata: dict) -> float:
    """Fraction of one Trotter step's z rotation carried by this gate."""
    theta = float(metadata.get("theta", 0.0))
    n = int(metadata.get("n_steps", 1))
    b = float(metadata.get("b_over_j", 0.0))
    full = abs(b) * theta / (2.0 * n)
    if full <= 0.0:
        return 1.0
    return abs(gate.angle) / full


def gate_duration_ns(gate: Gate, params: NoiseParams, metadata: dict | None = None) -> float:
    """Wall-clock footprint of one gate, waits included for flux pulses."""
    metadata = metadata or {}
    gd = params.gate_durations
    if gate.kind == "XY":
        return (params.theta_to_ns * gate.theta + 2.0 * gd["xy_buffer_ns"]
                + gd["post_flux_wait_ns"])
    if gate.kind == "ROT":
        if gate.axis == "z":
            return _rz_flux_ns(gate, params, metadata) + gd["post_flux_wait_ns"]
        return gd["single_qubit_ns"]
    if gate.kind == "WAIT":
        return gate.duration_ns
    raise ValueError(f"unknown gate kind {gate.kind!r}")


def _two_qubit_kraus(duration_ns: float, params: NoiseParams) -> list[np.ndarray]:
    ka = decoherence_kraus(duration_ns, params.t1_us[0], params.t2_us[0])
    kb = decoherence_kraus(duration_ns, params.t1_us[1], params.t2_us[1])
    return [kron(a, b) for a in ka for b in kb]


def _apply_kraus(rho: np.ndarray, kraus: list[np.ndarray]) -> np.ndarray:
    out = np.zeros_like(rho)
    for k in kraus:
        out += k @ rho @ k.conj().T
    return out


def simulate_noisy(circuit: Circuit, params: NoiseParams, rho0: np.ndarray,
                   durations_ns=None) -> np.ndarray:
    """Propagate a density matrix through the circuit under the noise model.

    ``durations_ns`` optionally overrides the per-gate durations (one entry
    per gate), e.g. with footprints extracted from a scheduled timeline.
    """
    if circuit.n_qubits != 2:
        raise ValueError("the noise engine handles two-qubit circuits")
    rho = check_density_matrix(np.asarray(rho0, dtype=complex), "rho0").copy()
    j_sign = int(circuit.metadata.get("j_sign", -1))
    if durations_ns is not None and len(durations_ns) != len(circuit.gates):
        raise ValueError("durations_ns must have one entry per gate")

    zz_xy = None
    if params.jz_tilde_angle_deg != 0.0:
        zz_xy = zz_error_unitary(params.jz_tilde_angle_deg)
    p_depol = 2.0 * (1.0 - params.single_qubit_fidelity)
    depol_q = [
        [kron(k, ID2) for k in depolarizing_kraus(p_depol)],
        [kron(ID2, k) for k in depolarizing_kraus(p_depol)],
    ] if p_depol > 0.0 else None

    kraus_cache: dict[float, list[np.ndarray]] = {}
    for idx, g in enumerate(circuit.gates):
        u = gate_unitary(g, 2, j_sign)
        rho = u @ rho @ u.conj().T
        if g.kind == "XY" and zz_xy is not None:
            rho = zz_xy @ rho @ zz_xy.conj().T
        if g.kind == "ROT" and g.axis == "z" and g.qubit == 1:
            frac = _step_z_fraction(g, circuit.metadata)
            if params.jz_tilde_angle_deg != 0.0:
                e = zz_error_unitary(params.jz_tilde_angle_deg * frac)
                rho = e @ rho @ e.conj().T
            if params.crosstalk_phase_deg != 0.0:
                a = math.radians(params.crosstalk_phase_deg * frac)
                ct = gate_unitary(Gate.rot("z", a, 1), 2)
                rho = ct @ rho @ ct.conj().T
        if depol_q is not None and g.kind == "ROT" and g.axis in ("x", "y"):
            rho = _apply_kraus(rho, depol_q[g.qubit])
        dur = (durations_ns[idx] if durations_ns is not None
               else gate_duration_ns(g, params, circuit.metadata))
        if dur not in kraus_cache:
            kraus_cache[dur] = _two_qubit_kraus(dur, params)
        rho = _apply_kraus(rho, kraus_cache[dur])
    return (rho + rho.conj().T) / 2.0


def predicted_fidelity(n_steps: int, f_p_xy: float) -> tuple[float, float]:
    """Expected Ising process and state fidelity from the exchange-gate fidelity.

    F_p = 1 - 2n(1 - F_p,XY), clamped to [0, 1], and F_s = (d*F_p + 1)/(d + 1)
    with d = 4.
    """
    if not 0.0 <= f_p_xy <= 1.0:
        raise ValueError("f_p_xy must be in [0, 1]")
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    f_p = 1.0 - 2.0 * n_steps * (1.0 - f_p_xy)
    f_p = min(max(f_p, 0.0), 1.0)
    f_s = (4.0 * f_p + 1.0) / 5.0
    return f_p, f_s
