"""Truncated operator builders: exact entries, the corner artifact, and
the closed relations between the naive ladder pair and the inverted
Hamiltonian."""

import numpy as np
import pytest

from ihox import fock, linalg

TOL_EXACT = 1e-12


def test_ladder_entries():
    a, adag = fock.ladder_matrices(6)
    for i in range(5):
        assert a[i, i + 1] == np.sqrt(i + 1.0)
    assert not np.tril(a).any()
    assert np.array_equal(adag, a.T)


def test_ladder_commutator_block_and_corner():
    n = 64
    a, adag = fock.ladder_matrices(n)
    c = linalg.commutator(a, adag)
    k = n // 4
    assert np.max(np.abs(c[:k, :k] - np.eye(k))) < TOL_EXACT
    # the truncation artifact in the corner is -(n - 1) up to the
    # roundoff of squaring sqrt(n - 1)
    assert abs(c[-1, -1] + (n - 1)) < TOL_EXACT * n


def test_dimension_validation():
    with pytest.raises(ValueError):
        fock.ladder_matrices(3)
    with pytest.raises(ValueError):
        fock.harmonic_hamiltonian(0)


def test_quadrature_commutator_unit_sweep():
    rng = np.random.default_rng(61)
    n, k = 48, 12
    for _ in range(5):
        hbar, mass, omega = rng.uniform(0.3, 3.0, 3)
        x, p = fock.quadrature_matrices(n, hbar=hbar, mass=mass, omega=omega)
        c = linalg.commutator(x, p) / (1j * hbar)
        assert linalg.block_norm(c - np.eye(n), k) < TOL_EXACT


def test_harmonic_hamiltonian_diagonal():
    h = fock.harmonic_hamiltonian(8, hbar=2.0, omega=3.0)
    assert np.array_equal(np.diag(h), 2.0 * 3.0 * (np.arange(8) + 0.5))
    assert not (h - np.diag(np.diag(h))).any()


def test_inverted_hamiltonian_from_quadratures():
    # independent construction: p^2/2m - m w^2 x^2/2 must agree on the
    # block for any mass even though the ladder form has none
    n, k = 48, 12
    hbar, mass, omega = 1.7, 0.4, 2.2
    x, p = fock.quadrature_matrices(n, hbar=hbar, mass=mass, omega=omega)
    h_quad = p @ p / (2.0 * mass) - mass * omega ** 2 * (x @ x) / 2.0
    h_r = fock.inverted_hamiltonian(n, hbar=hbar, omega=omega)
    assert linalg.block_norm(h_quad - h_r, k) < TOL_EXACT * hbar * omega * n
    assert np.array_equal(h_r, h_r.T)
    assert not np.diag(h_r).any()


def test_naive_ladder_commutator_and_hamiltonian():
    n, k = 64, 16
    hbar, mass, omega = 1.3, 0.8, 1.9
    c, cbar = fock.naive_ladder(n, hbar=hbar, mass=mass, omega=omega)
    assert linalg.block_norm(linalg.commutator(c, cbar) - np.eye(n), k) < TOL_EXACT
    h_r = fock.inverted_hamiltonian(n, hbar=hbar, omega=omega)
    rebuilt = 1j * hbar * omega * (cbar @ c + 0.5 * np.eye(n))
    assert linalg.block_norm(rebuilt - h_r, k) < TOL_EXACT * hbar * omega * n


def test_naive_ladder_unit_closed_form():
    # at unit parameters c = (a + i adag)/sqrt(2), cbar = (adag + i a)/sqrt(2)
    n = 16
    a, adag = fock.ladder_matrices(n)
    c, cbar = fock.naive_ladder(n)
    assert np.allclose(c, (a + 1j * adag) / np.sqrt(2.0), atol=1e-14)
    assert np.allclose(cbar, (adag + 1j * a) / np.sqrt(2.0), atol=1e-14)
