import numpy as np
import pytest

from spinsim.circuits import (Circuit, EvolutionParams, Gate, circuit_from_text,
                              circuit_to_text, circuit_unitary,
                              compile_heisenberg, compile_ising, gate_unitary,
                              phase_distance, trotter_fidelity)
from spinsim.hamiltonians import (SpinModelSpec, build_heisenberg, build_ising,
                                  build_xy, exact_evolve)
from spinsim.linalg import SX, SZ, herm_expm, is_unitary, kron, op_on_qubit

from conftest import FIG2, FIG3, ISWAP, SQRT_ISWAP, SWAP


class TestGateUnitary:
    def test_xy_zero_is_identity(self):
        assert np.allclose(gate_unitary(Gate.xy(0.0)), np.eye(4), atol=1e-14)

    def test_xy_pi_is_iswap(self):
        assert np.max(np.abs(gate_unitary(Gate.xy(np.pi)) - ISWAP)) < 1e-12

    def test_xy_half_pi_is_sqrt_iswap(self):
        assert np.max(np.abs(gate_unitary(Gate.xy(np.pi / 2)) - SQRT_ISWAP)) < 1e-12

    def test_xy_matches_exchange_exponential(self):
        for j_sign in (-1, 1):
            for theta in (0.3, 1.2, np.pi, 5.0):
                h = build_xy(SpinModelSpec.xy(j_sign=j_sign))
                u = herm_expm(h, theta / 2)
                g = gate_unitary(Gate.xy(theta), j_sign=j_sign)
                assert np.max(np.abs(g - u)) < 1e-12

    def test_rot_matches_exponential(self, rng):
        from spinsim.linalg import PAULIS_1Q

        for axis in ("x", "y", "z"):
            for qubit in (0, 1):
                angle = rng.uniform(-2 * np.pi, 2 * np.pi)
                g = gate_unitary(Gate.rot(axis, angle, qubit))
                h = op_on_qubit(PAULIS_1Q[axis], qubit, 2)
                assert np.max(np.abs(g - herm_expm(h, angle / 2))) < 1e-12

    def test_sign_flip_is_z_conjugation(self):
        # conjugating by Z on either qubit flips the coupling sign
        for theta in (0.4, np.pi / 2, 2.8):
            plus = gate_unitary(Gate.xy(theta), j_sign=1)
            minus = gate_unitary(Gate.xy(theta), j_sign=-1)
            for q in (0, 1):
                z = op_on_qubit(SZ, q, 2)
                assert np.max(np.abs(z @ plus @ z - minus)) < 1e-12

    def test_wait_is_identity(self):
        assert np.array_equal(gate_unitary(Gate.wait(100.0)), np.eye(4))

    def test_unknown_axis_rejected(self):
        with pytest.raises(ValueError, match="axis"):
            Gate.rot("q", 1.0, 0)

    def test_negative_theta_rejected(self):
        with pytest.raises(ValueError):
            Gate.xy(-0.1)


class TestCircuitUnitary:
    def test_empty_circuit(self):
        c = Circuit(2, ())
        assert np.array_equal(circuit_unitary(c), np.eye(4))

    def test_same_generator_composition(self):
        c = Circuit(2, (Gate.xy(np.pi / 2), Gate.xy(np.pi / 2)))
        assert np.max(np.abs(circuit_unitary(c) - gate_unitary(Gate.xy(np.pi)))) < 1e-12

    def test_gate_order_first_applied_first(self):
        c = Circuit(2, (Gate.rot("x", np.pi / 2, 0), Gate.rot("z", np.pi / 2, 0)))
        u = (gate_unitary(Gate.rot("z", np.pi / 2, 0))
             @ gate_unitary(Gate.rot("x", np.pi / 2, 0)))
        assert np.max(np.abs(circuit_unitary(c) - u)) < 1e-14

    def test_compiled_circuits_unitary(self):
        for c in (compile_heisenberg(EvolutionParams(1.1)),
                  compile_ising(EvolutionParams(2.3, 3, 3.0))):
            assert is_unitary(circuit_unitary(c))


class TestCompileHeisenberg:
    def test_matches_isotropic_oracle(self):
        spec = SpinModelSpec.heisenberg(1, 1, 1, j_sign=-1)
        h = build_heisenberg(spec)
        for k in range(1, 21):
            theta = 0.1 * k * np.pi
            u = circuit_unitary(compile_heisenberg(EvolutionParams(theta)))
            assert np.max(np.abs(u - herm_expm(h, theta / 2))) < 1e-9

    def test_swap_at_quarter_turn(self):
        u = circuit_unitary(compile_heisenberg(EvolutionParams(np.pi / 2)))
        assert phase_distance(u, SWAP) < 1e-9

    def test_identity_at_half_turn(self):
        u = circuit_unitary(compile_heisenberg(EvolutionParams(np.pi)))
        assert phase_distance(u, np.eye(4)) < 1e-9

    def test_three_exchange_blocks(self):
        c = compile_heisenberg(EvolutionParams(0.7))
        assert sum(g.kind == "XY" for g in c.gates) == 3


class TestCompileIsing:
    def test_pure_coupling_is_exact(self):
        # the two exchange blocks commute, so zero field is exact for any n
        for theta in (0.7, np.pi, 3 * np.pi / 2):
            for n in (1, 2, 5):
                c = compile_ising(EvolutionParams(theta, n, 0.0))
                h = build_ising(SpinModelSpec.ising(jx=1.0, b=0.0, j_sign=-1))
                assert phase_distance(circuit_unitary(c), herm_expm(h, theta / 2)) < 1e-10

    def test_echo_block_is_pure_xx(self):
        # pi-sandwiched exchange pair equals the XX exponential alone
        for theta in (0.5, np.pi, 4.0):
            for n in (1, 3):
                s = theta / n
                block = Circuit(2, (Gate.xy(s), Gate.rot("x", np.pi, 0),
                                    Gate.xy(s), Gate.rot("x", np.pi, 0)))
                target = herm_expm(-kron(SX, SX), s / 2.0)  # J = -1
                assert phase_distance(circuit_unitary(block), target) < 1e-10

    def test_field_block_matches_pure_precession(self):
        # per-step z rotations reproduce the field exponential exactly
        theta, n, b = 1.3, 4, 3.0
        c = compile_ising(EvolutionParams(theta, n, b))
        rz = [g for g in c.gates if g.kind == "ROT" and g.axis == "z"]
        assert len(rz) == 4 * n
        assert all(g.angle == pytest.approx(-b * theta / (4 * n)) for g in rz)
        pair = (gate_unitary(rz[0]) @ gate_unitary(rz[1]))
        field = build_ising(SpinModelSpec.ising(jx=0.0, b=-b, j_sign=-1))
        assert np.max(np.abs(pair @ pair - herm_expm(field, theta / (2 * n)))) < 1e-12

    def test_refocusing_pair_is_net_identity(self):
        c = compile_ising(EvolutionParams(1.0, 2, 3.0))
        q2_pi = [g for g in c.gates
                 if g.kind == "ROT" and g.axis == "x" and g.qubit == 1]
        assert len(q2_pi) == 4  # one adjacent pair per step
        u = gate_unitary(q2_pi[0]) @ gate_unitary(q2_pi[1])
        assert phase_distance(u, np.eye(4)) < 1e-12

    def test_fidelity_small_angle_single_step(self):
        f = trotter_fidelity(EvolutionParams(np.pi / 4, 1, 3.0), FIG3)
        assert f > 0.98

    def test_fidelity_table_against_oracle(self):
        # frozen oracle values for the symmetric step
        expected = [0.995517250317, 0.999776493028, 0.999957640618,
                    0.999986789307, 0.999994624881]
        for n, ref in enumerate(expected, start=1):
            f = trotter_fidelity(EvolutionParams(np.pi / 4, n, 3.0), FIG3)
            assert f == pytest.approx(ref, abs=1e-9)

    def test_large_n_limit(self):
        f = trotter_fidelity(EvolutionParams(3 * np.pi / 2, 40, 3.0), FIG3)
        assert 1.0 - f < 1e-3

    def test_rejects_zero_steps(self):
        with pytest.raises(ValueError):
            EvolutionParams(1.0, 0, 3.0)


class TestTrotterFidelity:
    def test_monotone_convergence(self):
        fids = [trotter_fidelity(EvolutionParams(np.pi, n, 3.0), FIG3)
                for n in range(1, 33)]
        diffs = np.diff(fids)
        assert all(d > -1e-12 for d in diffs[3:])
        assert fids[-1] > 0.999

    def test_more_steps_beat_one_at_large_angle(self):
        f1 = trotter_fidelity(EvolutionParams(3 * np.pi / 2, 1, 3.0), FIG3)
        f5 = trotter_fidelity(EvolutionParams(3 * np.pi / 2, 5, 3.0), FIG3)
        assert f5 > f1

    def test_convergence_is_power_law(self):
        # symmetric stepping: state infidelity falls off as 1/n^4
        ns = np.array([4, 8, 16, 32, 64])
        infid = np.array([1.0 - trotter_fidelity(EvolutionParams(np.pi, int(n), 3.0), FIG3)
                          for n in ns])
        slope = np.polyfit(np.log(ns), np.log(infid), 1)[0]
        assert -4.5 < slope < -3.5

    def test_coupling_sign_flip_with_conjugate_state(self):
        # flipping the coupling sign and conjugating the initial state leaves
        # the z observables of the protocol invariant
        ztot = [op_on_qubit(SZ, q, 2) for q in (0, 1)]
        for theta in (0.9, 2.2):
            c_minus = compile_ising(EvolutionParams(theta, 3, 3.0), j_sign=-1)
            c_plus = compile_ising(EvolutionParams(theta, 3, 3.0), j_sign=1)
            psi_m = circuit_unitary(c_minus) @ FIG3
            psi_p = circuit_unitary(c_plus) @ FIG3.conj()
            for z in ztot:
                em = np.vdot(psi_m, z @ psi_m).real
                ep = np.vdot(psi_p, z @ psi_p).real
                assert abs(em - ep) < 1e-9


class TestSerialization:
    def test_round_trip(self):
        c = compile_ising(EvolutionParams(1.234, 2, 3.0))
        c2 = circuit_from_text(circuit_to_text(c))
        assert c2.n_qubits == c.n_qubits
        assert len(c2.gates) == len(c.gates)
        for a, b in zip(c.gates, c2.gates):
            assert a.kind == b.kind and a.axis == b.axis and a.qubit == b.qubit
            assert a.theta == pytest.approx(b.theta, abs=1e-9)
            assert a.angle == pytest.approx(b.angle, abs=1e-9)
        assert c2.metadata["protocol"] == "ising"
        assert c2.metadata["n_steps"] == 2
        assert c2.metadata["j_sign"] == -1

    def test_gate_line_format(self):
        c = Circuit(2, (Gate.xy(1.5), Gate.rot("y", -0.25, 1), Gate.wait(40.0)))
        text = circuit_to_text(c)
        lines = [l for l in text.splitlines() if not l.startswith("#")]
        assert lines == ["XY theta=1.5", "ROT axis=y angle=-0.25 q=1", "WAIT ns=40.0"]
