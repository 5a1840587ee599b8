"""Core matrix types, the eigendecomposition oracle, and planted instances."""

import numpy as np
import pytest

from gapkit import (
    HermitianMatrix,
    InputError,
    ParameterError,
    eig_reference,
    gen_planted_gap,
    read_hmat,
    write_hmat,
)
from gapkit.rng import substream


def test_construction_enforces_hermitian():
    m = np.array([[1.0, 2.0 + 1j], [0.0, 3.0]])
    h = HermitianMatrix(m)
    assert np.array_equal(h.mat, h.mat.conj().T)
    assert h.dim == 2


def test_construction_rejects_bad_input():
    with pytest.raises(InputError):
        HermitianMatrix(np.ones((2, 3)))
    with pytest.raises(InputError):
        HermitianMatrix(np.array([[np.nan, 0], [0, 1]]))


def test_eig_reference_diagonal():
    dec = eig_reference(np.diag([0.4, 0.1, -0.3]))
    assert np.allclose(dec.eigenvalues, [0.4, 0.1, -0.3])
    # eigenvectors are the standard basis up to phase
    assert np.allclose(np.abs(dec.eigenvectors), np.eye(3))


def test_eig_reference_offdiagonal_2x2():
    dec = eig_reference(np.array([[0.0, 0.5], [0.5, 0.0]]))
    assert np.allclose(dec.eigenvalues, [0.5, -0.5])


def test_eig_reference_residuals_random_8x8():
    g = substream(5, 0)
    z = g.standard_normal((8, 8)) + 1j * g.standard_normal((8, 8))
    h = HermitianMatrix(z)
    dec = eig_reference(h)
    v, w = dec.eigenvectors, dec.eigenvalues
    recon = (v * w) @ v.conj().T
    assert np.linalg.norm(h.mat - recon) <= 1e-10 * 8
    assert np.linalg.norm(v.conj().T @ v - np.eye(8)) <= 1e-10 * 8
    assert np.all(np.diff(w) <= 0)


def test_eig_reference_shift_invariance():
    g = substream(6, 0)
    z = g.standard_normal((6, 6)) + 1j * g.standard_normal((6, 6))
    h = HermitianMatrix(z / 8)
    for _ in range(20):
        c = g.uniform(-1, 1)
        shifted = eig_reference(h.mat + c * np.eye(6))
        assert np.allclose(shifted.eigenvalues, eig_reference(h).eigenvalues + c, atol=1e-9)


def test_eig_reference_rejects_nonfinite():
    with pytest.raises(InputError):
        eig_reference(np.array([[np.inf, 0], [0, 1.0]]))


def test_planted_gap_basic():
    h, truth = gen_planted_gap(4, 2, 0.3, seed=7)
    dec = eig_reference(h)
    assert abs(dec.gap(2) - 0.3) <= 1e-10
    assert abs(dec.midpoint(2) - truth.midpoint) <= 1e-10
    assert np.all(np.abs(dec.eigenvalues) <= 0.5 + 1e-12)


def test_planted_gap_n2():
    h, truth = gen_planted_gap(2, 1, 0.5, seed=3)
    dec = eig_reference(h)
    assert abs(dec.gap(1) - 0.5) <= 1e-10
    assert np.all(np.abs(dec.eigenvalues) <= 0.5 + 1e-12)


def test_planted_gap_deterministic():
    h1, _ = gen_planted_gap(8, 3, 0.2, seed=11)
    h2, _ = gen_planted_gap(8, 3, 0.2, seed=11)
    assert np.array_equal(h1.mat, h2.mat)


def test_planted_gap_argmax_is_unique():
    for i in range(100):
        g = substream(123, i)
        n = int(g.integers(4, 17))
        k = int(g.integers(1, n))
        gap = float(g.uniform(0.05, 0.4))
        h, truth = gen_planted_gap(n, k, gap, int(g.integers(0, 2**31)))
        spacings = -np.diff(eig_reference(h).eigenvalues)
        assert int(np.argmax(spacings)) + 1 == truth.k


def test_planted_gap_parameter_errors():
    with pytest.raises(ParameterError):
        gen_planted_gap(4, 4, 0.2, seed=0)
    with pytest.raises(ParameterError):
        gen_planted_gap(4, 1, 0.99999, seed=0)
    with pytest.raises(ParameterError):
        gen_planted_gap(5000, 1, 0.9, seed=0)  # spacing budget infeasible


def test_hmat_roundtrip(tmp_path):
    g = substream(9, 0)
    z = g.standard_normal((5, 5)) + 1j * g.standard_normal((5, 5))
    h = HermitianMatrix(z / 10)
    path = tmp_path / "m.hmat"
    write_hmat(path, h)
    back = read_hmat(path)
    assert np.allclose(back.mat, h.mat, atol=1e-15)


def test_hmat_sparse_default_zero(tmp_path):
    path = tmp_path / "sparse.hmat"
    path.write_text("HMAT 3\n0 1 0.5 -0.25\n")
    h = read_hmat(path)
    expect = np.zeros((3, 3), dtype=complex)
    expect[0, 1] = 0.5 - 0.25j
    expect[1, 0] = 0.5 + 0.25j
    assert np.array_equal(h.mat, expect)


def test_hmat_rejects_garbage(tmp_path):
    path = tmp_path / "bad.hmat"
    path.write_text("NOPE 3\n")
    with pytest.raises(InputError):
        read_hmat(path)
    path.write_text("HMAT 2\n1 0 1.0 0.0\n")  # lower-triangle index
    with pytest.raises(InputError):
        read_hmat(path)
