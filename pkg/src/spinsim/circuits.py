"""Gate set, circuit IR and the digital decompositions of the spin models.

Conventions, pinned by the tests:

* ``XY(theta)`` is the exchange gate at quantum phase angle theta = 2|J|tau.
  It is the identity on |uu> and |dd>; on the {|ud>, |du>} block it is
  ``[[cos(theta/2), -i*j_sign*sin(theta/2)], [-i*j_sign*sin(theta/2),
  cos(theta/2)]]``.  With the device sign j_sign = -1, XY(pi) is iSWAP and
  XY(pi/2) is sqrt(iSWAP).
* ``ROT(a, phi, q)`` = exp(-i phi sigma_a / 2) on qubit q.
* ``circuit_unitary`` applies the first gate first (rightmost factor).
* Identities that hold only up to a global phase are compared with
  ``phase_distance``.

The Heisenberg compilation conjugates the exchange gate into the XZ and YZ
bases with x/y rotations by +-pi/2; the basis-change signs are fixed here so
that each block equals the corresponding two-axis exponential exactly.  The
transverse-field Ising compilation uses a symmetric split: half-angle field
rotations flank the spin-echo XX block in every step, which keeps the
single-step error second order in the step size.  Each step also carries the
two consecutive refocusing pi pulses on qubit Q2 (a net identity) so that
noisy simulations see the same pulse load as the hardware sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import ID2, PAULIS_1Q, kron, op_on_qubit

HALF_PI = math.pi / 2.0

@dataclass(frozen=True)
class Gate:
    """One gate event: kind is "XY", "ROT" or "WAIT"."""

    kind: str
    theta: float = 0.0        # XY: quantum phase angle 2|J|tau, >= 0
    axis: str = ""            # ROT: "x" | "y" | "z"
    angle: float = 0.0        # ROT: rotation angle in radians
    qubit: int = 0            # ROT: target qubit
    duration_ns: float = 0.0  # WAIT: idle time

    def __post_init__(self):
        if self.kind == "XY":
            if self.theta < 0:
                raise ValueError("XY phase angle must be non-negative")
        elif self.kind == "ROT":
            if self.axis not in ("x", "y", "z"):
                raise ValueError(f"unknown rotation axis {self.axis!r}")
            if self.qubit < 0:
                raise ValueError("qubit index must be non-negative")
        elif self.kind == "WAIT":
            if self.duration_ns < 0:
                raise ValueError("wait duration must be non-negative")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    @classmethod
    def xy(cls, theta: float) -> "Gate":
        return cls(kind="XY", theta=theta)

    @classmethod
    def rot(cls, axis: str, angle: float, qubit: int) -> "Gate":
        return cls(kind="ROT", axis=axis, angle=angle, qubit=qubit)

    @classmethod
    def wait(cls, duration_ns: float) -> "Gate":
        return cls(kind="WAIT", duration_ns=duration_ns)


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for g in self.gates:
            if g.kind == "ROT" and g.qubit >= self.n_qubits:
                raise ValueError(f"gate targets qubit {g.qubit} of {self.n_qubits}")
            if g.kind == "XY" and self.n_qubits < 2:
                raise ValueError("XY gate needs at least two qubits")


@dataclass(frozen=True)
class EvolutionParams:
    """Total phase angle, Trotter step count and field-to-coupling ratio."""

    theta: float
    n_steps: int = 1
    b_over_j: float = 0.0

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError("n_steps must be >= 1")


def _rot_matrix(axis: str, angle: float) -> np.ndarray:
    s = PAULIS_1Q[axis]
    return math.cos(angle / 2.0) * ID2 - 1j * math.sin(angle / 2.0) * s


def gate_unitary(g: Gate, n_qubits: int = 2, j_sign: int = -1) -> np.ndarray:
    """Unitary of a single gate on the full register."""
    if g.kind == "XY":
        if n_qubits < 2:
            raise ValueError("XY gate needs two qubits")
        c, s = math.cos(g.theta / 2.0), math.sin(g.theta / 2.0)
        u = np.eye(4, dtype=complex)
        u[1, 1] = u[2, 2] = c
        u[1, 2] = u[2, 1] = -1j * j_sign * s
        if n_qubits > 2:
            u = kron(u, np.eye(2 ** (n_qubits - 2)))
        return u
    if g.kind == "ROT":
        return op_on_qubit(_rot_matrix(g.axis, g.angle), g.qubit, n_qubits)
    if g.kind == "WAIT":
        return np.eye(2 ** n_qubits, dtype=complex)
    raise ValueError(f"unknown gate kind {g.kind!r}")


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Ordered product of the gate unitaries: first gate applied first."""
    j_sign = int(c.metadata.get("j_sign", -1))
    u = np.eye(2 ** c.n_qubits, dtype=complex)
    for g in c.gates:
        u = gate_unitary(g, c.n_qubits, j_sign) @ u
    return u


def phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """max-norm distance between u and v after gauging away a global phase."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    g = complex(np.trace(v.conj().T @ u))
    if abs(g) < 1e-12:
        k = int(np.argmax(np.abs(v)))
        num, den = u.flat[k], v.flat[k]
        if abs(den) < 1e-12 or abs(num) < 1e-12:
            return float(np.max(np.abs(u - v)))
        g = num / den
    phase = g / abs(g)
    return float(np.max(np.abs(u - phase * v)))


def compile_heisenberg(params: EvolutionParams, j_sign: int = -1) -> Circuit:
    """Isotropic Heisenberg evolution as XY, XZ and YZ exchange blocks.

    The XZ (YZ) block conjugates the XY gate on both qubits with x (y)
    rotations by pi/2, turning the YY (XX) term into ZZ.  The three block
    generators commute for two spins, so a single step is exact: the circuit
    unitary equals exp(-i J (XX + YY + ZZ) theta/2) with J = j_sign.
    """
    th = params.theta
    gates: list[Gate] = [Gate.xy(th)]
    for axis in ("x", "y"):
        gates += [
            Gate.rot(axis, -HALF_PI, 0),
            Gate.rot(axis, -HALF_PI, 1),
            Gate.xy(th),
            Gate.rot(axis, HALF_PI, 0),
            Gate.rot(axis, HALF_PI, 1),
        ]
    meta = {"protocol": "heisenberg", "theta": th, "n_steps": 1,
            "j_sign": j_sign, "gates_per_step": len(gates)}
    return Circuit(n_qubits=2, gates=tuple(gates), metadata=meta)


def compile_ising(params: EvolutionParams, j_sign: int = -1) -> Circuit:
    """Trotterized transverse-field Ising evolution.

    Each step advances phase theta/n.  The interaction part applies the XY
    gate twice, once enclosed by pi pulses on Q1, which flips the sign of the
    YY term so the pair composes to a pure XX exponential.  The field part is
    split symmetrically: z rotations by half the per-step angle B*tau/n flank
    the interaction block, so the step is accurate to second order in the
    step size.  Two consecutive pi pulses on Q2 per step mirror the hardware
    refocusing sequence; their net effect is the identity.
    """
    if params.n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    n = params.n_steps
    th = params.theta
    step_theta = th / n
    # Per-step z rotation angle is B*tau/n with B = j_sign*b_over_j in units
    # of |J| and tau = theta/2; each flanking gate carries half of it.
    phi_half = j_sign * params.b_over_j * th / (4.0 * n)
    gates: list[Gate] = []
    for _ in range(n):
        if phi_half != 0.0:
            gates += [Gate.rot("z", phi_half, 0), Gate.rot("z", phi_half, 1)]
        gates += [
            Gate.xy(step_theta),
            Gate.rot("x", math.pi, 0),
            Gate.rot("x", math.pi, 1),
            Gate.rot("x", math.pi, 1),
            Gate.xy(step_theta),
            Gate.rot("x", math.pi, 0),
        ]
        if phi_half != 0.0:
            gates += [Gate.rot("z", phi_half, 0), Gate.rot("z", phi_half, 1)]
    meta = {"protocol": "ising", "theta": th, "n_steps": n,
            "b_over_j": params.b_over_j, "j_sign": j_sign,
            "gates_per_step": len(gates) // n}
    return Circuit(n_qubits=2, gates=tuple(gates), metadata=meta)


def trotter_fidelity(params: EvolutionParams, psi0: np.ndarray,
                     j_sign: int = -1) -> float:
    """|<psi_exact(theta)| U_circuit |psi0>|^2 against the exact Ising oracle."""
    from .hamiltonians import SpinModelSpec, build_ising, exact_evolve

    psi0 = np.asarray(psi0, dtype=complex)
    circ = compile_ising(params, j_sign=j_sign)
    psi_circ = circuit_unitary(circ) @ psi0
    spec = SpinModelSpec.ising(jx=1.0, b=j_sign * params.b_over_j, j_sign=j_sign)
    psi_exact = exact_evolve(build_ising(spec), params.theta / 2.0, psi0)
    f = abs(np.vdot(psi_exact, psi_circ)) ** 2
    return float(min(max(f, 0.0), 1.0))


def circuit_to_text(c: Circuit) -> str:
    """Line-oriented text form: one gate per line, metadata in # comments.

    Floats are written with repr so a dumped circuit reschedules to the
    byte-identical timeline.
    """
    lines = [f"# n_qubits={c.n_qubits}"]
    if c.metadata:
        parts = []
        for k in sorted(c.metadata):
            v = c.metadata[k]
            parts.append(f"{k}={repr(v) if isinstance(v, float) else v}")
        lines.append("# " + " ".join(parts))
    for g in c.gates:
        if g.kind == "XY":
            lines.append(f"XY theta={g.theta!r}")
        elif g.kind == "ROT":
            lines.append(f"ROT axis={g.axis} angle={g.angle!r} q={g.qubit}")
        else:
            lines.append(f"WAIT ns={g.duration_ns!r}")
    return "\n".join(lines) + "\n"


_META_INT_KEYS = {"n_qubits", "n_steps", "j_sign", "gates_per_step"}


def circuit_from_text(text: str) -> Circuit:
    """Parse the text form produced by circuit_to_text."""
    n_qubits = 2
    metadata: dict = {}
    gates: list[Gate] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line[1:].split():
                if "=" not in token:
                    continue
                k, v = token.split("=", 1)
                if k == "n_qubits":
                    n_qubits = int(v)
                elif k in _META_INT_KEYS:
                    metadata[k] = int(v)
                else:
                    try:
                        metadata[k] = float(v)
                    except ValueError:
                        metadata[k] = v
            continue
        fields = line.split()
        kind, kv = fields[0], dict(f.split("=", 1) for f in fields[1:])
        if kind == "XY":
            gates.append(Gate.xy(float(kv["theta"])))
        elif kind == "ROT":
            gates.append(Gate.rot(kv["axis"], float(kv["angle"]), int(kv["q"])))
        elif kind == "WAIT":
            gates.append(Gate.wait(float(kv["ns"])))
        else:
            raise ValueError(f"unknown gate line: {line!r}")
    return Circuit(n_qubits=n_qubits, gates=tuple(gates), metadata=metadata)
