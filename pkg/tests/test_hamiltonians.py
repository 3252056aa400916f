import numpy as np
import pytest

from spinsim.hamiltonians import (SpinModelSpec, build_hamiltonian,
                                  build_heisenberg, build_ising, build_xy,
                                  dominant_angular_frequency, exact_evolve)
from spinsim.linalg import ID2, SX, SY, SZ, expectation, kron

from conftest import FIG2, FIG3


def test_spec_validation():
    with pytest.raises(ValueError):
        SpinModelSpec(kind="FOO")
    with pytest.raises(ValueError):
        SpinModelSpec(kind="XY", pairs=((0, 0),))
    with pytest.raises(ValueError):
        SpinModelSpec(kind="XY", pairs=((0, 3),))
    with pytest.raises(ValueError):
        SpinModelSpec(kind="ISING", jy=1.0)
    with pytest.raises(ValueError):
        build_xy(SpinModelSpec.ising())


class TestBuildXY:
    def test_spectrum_unit_coupling(self):
        h = build_xy(SpinModelSpec.xy(jx=1.0, j_sign=1))
        assert np.allclose(np.linalg.eigvalsh(h), [-1.0, 0.0, 0.0, 1.0], atol=1e-12)

    def test_zero_coupling(self):
        assert np.array_equal(build_xy(SpinModelSpec.xy(jx=0.0)), np.zeros((4, 4)))

    def test_swap_matrix_element(self):
        # <ud| H |du> equals the signed coupling
        h = build_xy(SpinModelSpec.xy(jx=1.0, j_sign=1))
        assert h[1, 2] == pytest.approx(1.0)
        h = build_xy(SpinModelSpec.xy(jx=1.0, j_sign=-1))
        assert h[1, 2] == pytest.approx(-1.0)


class TestBuildHeisenberg:
    def test_isotropic_spectrum(self):
        h = build_heisenberg(SpinModelSpec.heisenberg(1, 1, 1, j_sign=1))
        assert np.allclose(np.linalg.eigvalsh(h), [-3.0, 1.0, 1.0, 1.0], atol=1e-12)

    def test_all_zero(self):
        h = build_heisenberg(SpinModelSpec.heisenberg(0, 0, 0))
        assert np.array_equal(h, np.zeros((4, 4)))

    def test_reduces_to_twice_xy(self):
        h = build_heisenberg(SpinModelSpec.heisenberg(1, 1, 0, j_sign=-1))
        assert np.array_equal(h, 2 * build_xy(SpinModelSpec.xy(jx=1.0, j_sign=-1)))


class TestBuildIsing:
    def test_pure_field(self):
        h = build_ising(SpinModelSpec.ising(jx=0.0, b=2.0, j_sign=1))
        assert np.allclose(h, np.diag([2.0, 0.0, 0.0, -2.0]), atol=1e-14)

    def test_pure_coupling_spectrum(self):
        h = build_ising(SpinModelSpec.ising(jx=1.0, b=0.0, j_sign=1))
        assert np.allclose(np.linalg.eigvalsh(h), [-1, -1, 1, 1], atol=1e-12)

    def test_transverse_field_spectrum(self):
        # blocks {uu, dd} and {ud, du} give +-sqrt(B^2+J^2) and +-J
        h = build_ising(SpinModelSpec.ising(jx=1.0, b=3.0, j_sign=1))
        expected = sorted([-np.sqrt(10), -1.0, 1.0, np.sqrt(10)])
        assert np.allclose(np.linalg.eigvalsh(h), expected, atol=1e-12)


def test_builders_exactly_hermitian():
    specs = [SpinModelSpec.xy(), SpinModelSpec.heisenberg(1, 0.7, 0.2),
             SpinModelSpec.ising(jx=1.0, b=-3.0)]
    for spec in specs:
        h = build_hamiltonian(spec)
        assert np.array_equal(h, h.conj().T)


class TestExactEvolve:
    def test_zero_time(self):
        h = build_xy(SpinModelSpec.xy())
        assert np.allclose(exact_evolve(h, 0.0, FIG2), FIG2, atol=1e-14)

    def test_exchange_full_transfer_bloch_vectors(self):
        # at phase angle pi the spins end along +y and +z
        h = build_xy(SpinModelSpec.xy(j_sign=-1))
        psi = exact_evolve(h, np.pi / 2, FIG2)
        assert expectation(psi, kron(SY, ID2)) == pytest.approx(1.0, abs=1e-9)
        assert expectation(psi, kron(ID2, SZ)) == pytest.approx(1.0, abs=1e-9)
        assert expectation(psi, kron(SX, ID2)) == pytest.approx(0.0, abs=1e-9)

    def test_transverse_ising_correlator_frequency(self):
        h = build_ising(SpinModelSpec.ising(jx=1.0, b=3.0, j_sign=1))
        xx = kron(SX, SX)
        taus = np.linspace(0.0, 3 * np.pi / 2, 256)
        signal = [expectation(exact_evolve(h, t, FIG3), xx) for t in taus]
        omega = dominant_angular_frequency(signal, taus[1] - taus[0])
        target = 2 * np.sqrt(10)
        assert abs(omega - target) / target < 0.01

    def test_energy_conservation(self):
        for spec in (SpinModelSpec.xy(), SpinModelSpec.heisenberg(1, 1, 1),
                     SpinModelSpec.ising(jx=1.0, b=-3.0)):
            h = build_hamiltonian(spec)
            e0 = expectation(FIG3, h)
            for t in np.linspace(0.0, 4.0, 17):
                e = expectation(exact_evolve(h, t, FIG3), h)
                assert abs(e - e0) < 1e-9

    def test_isotropic_preserves_spin_angle(self):
        # <vec(s1).vec(s2)> is conserved by the isotropic interaction
        h = build_heisenberg(SpinModelSpec.heisenberg(1, 1, 1, j_sign=-1))
        dot = kron(SX, SX) + kron(SY, SY) + kron(SZ, SZ)
        d0 = expectation(FIG2, dot)
        for t in np.linspace(0.0, 3.0, 13):
            assert abs(expectation(exact_evolve(h, t, FIG2), dot) - d0) < 1e-9

    def test_xy_preserves_total_magnetization(self):
        h = build_xy(SpinModelSpec.xy(j_sign=-1))
        ztot = kron(SZ, ID2) + kron(ID2, SZ)
        m0 = expectation(FIG2, ztot)
        for t in np.linspace(0.0, 3.0, 13):
            assert abs(expectation(exact_evolve(h, t, FIG2), ztot) - m0) < 1e-9
