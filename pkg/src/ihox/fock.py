"""Truncated Fock-space operators for the oscillator pair.

Everything is a dense matrix on the first ``n_trunc`` number states. The
truncation shows up in exactly one place: [a, a+] equals the identity
except for the corner entry, which is -(n_trunc - 1). Identity checks in
this package therefore always restrict to a leading sub-block well away
from the corner (a quarter of the dimension by convention).
"""

import numpy as np

__all__ = [
    "ladder_matrices",
    "number_operator",
    "quadrature_matrices",
    "harmonic_hamiltonian",
    "inverted_hamiltonian",
    "naive_ladder",
]


def _check_dim(n_trunc):
    if not isinstance(n_trunc, (int, np.integer)) or n_trunc < 4:
        raise ValueError("n_trunc must be an integer >= 4, got %r" % (n_trunc,))


def ladder_matrices(n_trunc):
    """Annihilation and creation matrices (a, adag), real float64."""
    _check_dim(n_trunc)
    a = np.diag(np.sqrt(np.arange(1.0, n_trunc)), k=1)
    return a, a.T.copy()


def number_operator(n_trunc):
    """diag(0, 1, ..., n_trunc - 1)."""
    _check_dim(n_trunc)
    return np.diag(np.arange(n_trunc, dtype=float))


def quadrature_matrices(n_trunc, hbar=1.0, mass=1.0, omega=1.0):
    """Position and momentum matrices (x, p).

    x = sqrt(hbar / 2 m omega) (adag + a), p = i sqrt(hbar m omega / 2)
    (adag - a). x is real, p is purely imaginary; both are returned
    complex so callers can combine them freely.
    """
    a, adag = ladder_matrices(n_trunc)
    x = np.sqrt(hbar / (2.0 * mass * omega)) * (adag + a).astype(complex)
    p = 1j * np.sqrt(hbar * mass * omega / 2.0) * (adag - a)
    return x, p


def harmonic_hamiltonian(n_trunc, hbar=1.0, omega=1.0):
    """hbar omega (N + 1/2), diagonal and real."""
    _check_dim(n_trunc)
    return np.diag(hbar * omega * (np.arange(n_trunc) + 0.5))


def inverted_hamiltonian(n_trunc, hbar=1.0, omega=1.0):
    """-(hbar omega / 2)(adag^2 + a^2), real symmetric with zero diagonal.

    This is p^2/2m - m omega^2 x^2 / 2 written in ladder form; the mass
    cancels.
    """
    a, adag = ladder_matrices(n_trunc)
    return -(hbar * omega / 2.0) * (adag @ adag + a @ a)


def naive_ladder(n_trunc, hbar=1.0, mass=1.0, omega=1.0):
    """Ladder pair for the inverted potential by the substitution
    omega -> i omega in the usual definitions:

        c    = e^{i pi/4} sqrt(m omega / 2 hbar) (x + p / m omega)
        cbar = e^{i pi/4} sqrt(m omega / 2 hbar) (x - p / m omega)

    These satisfy [c, cbar] = 1 and i hbar omega (cbar c + 1/2) equals the
    inverted Hamiltonian on the certified block, but cbar is not the
    adjoint of c and the state annihilated by c has constant position
    density, hence diverging norm (see the divergence demo).
    """
    x, p = quadrature_matrices(n_trunc, hbar=hbar, mass=mass, omega=omega)
    phase = np.exp(0.25j * np.pi) * np.sqrt(mass * omega / (2.0 * hbar))
    c = phase * (x + p / (mass * omega))
    cbar = phase * (x - p / (mass * omega))
    return c, cbar
