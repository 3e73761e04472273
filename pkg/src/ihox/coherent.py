"""Coherent states of the oscillator, their images under the inverting
map, and their dynamics under the inverted Hamiltonian.

The image state rho^-1 |alpha> is computed in closed form. The factor
exp(i/4 a^2) acts on a coherent state as the scalar e^{i alpha^2 / 4}
(eigenstate property), and the remaining factor exp(-i/2 adag^2)
produces Hermite polynomials through their generating function, so

    <n| rho^-1 |alpha> = e^{i alpha^2/4 - |alpha|^2/2} s^n H_n(y) / sqrt(n!)

with s = sqrt(i/2) and y = alpha / (2 s). The recurrence is carried in
the prescaled variable h_n = s^n H_n(y)/sqrt(n!) because raw Hermite
values overflow float64 past n of about 300. The image is marginally
non-normalizable (|h_n| decays too slowly for a finite norm), which is
the price of the non-unitary map and the reason the direct propagator
below needs padding.

Time evolution: U(t) = exp(-i H_r t / hbar) maps through the similarity
to exp(+t H_os / hbar), which acts on a coherent state in closed form.
The result is

    U(t) rho^-1|alpha> = e^{wt/2} e^{(|a'|^2 - |a|^2)/2} rho^-1 |a'>,
    a' = alpha e^{wt},

with |a'> normalized. The metric norm squared of the evolved state is
therefore e^{wt} e^{|alpha|^2 (e^{2wt} - 1)}, growing faster than the
bare e^{wt} of the prefactor alone.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DegenerateState, TruncationInadequate
from .fock import inverted_hamiltonian, quadrature_matrices

__all__ = [
    "CoherentState",
    "coherent_oscillator",
    "coherent_inverted",
    "evolve_closed_form",
    "evolve_direct",
    "eta_expectation",
    "metric_norm_sq",
    "moments",
    "resolution_of_identity",
    "classical_trajectory",
]


@dataclass(frozen=True)
class CoherentState:
    """A state vector with enough metadata to take metric expectations.

    frame is "oscillator" or "inverted". For the inverted frame, coeffs
    equals prefactor times the image of the *normalized* |alpha>, and
    the oscillator-frame pre-image needed by eta_expectation is then
    known symbolically. prefactor None marks a state whose coefficients
    were produced numerically (direct evolution) with no symbolic
    scalar attached.
    """

    frame: str
    alpha: complex
    coeffs: np.ndarray
    prefactor: complex | None = 1.0 + 0.0j


def coherent_oscillator(alpha, n_trunc):
    """Normalized coherent state coefficients e^{-|a|^2/2} a^n/sqrt(n!).

    Raises TruncationInadequate when the missing tail mass exceeds
    1e-10; unlike its image under the map, this state must be
    representable at the working size.
    """
    alpha = complex(alpha)
    n = np.arange(n_trunc)
    log_mag = n * np.log(max(abs(alpha), 1e-300)) - 0.5 * gammaln(n + 1)
    phase = np.exp(1j * n * np.angle(alpha)) if alpha != 0 else np.ones(n_trunc)
    coeffs = np.exp(log_mag - abs(alpha) ** 2 / 2.0) * phase
    if alpha == 0:
        coeffs = np.zeros(n_trunc, dtype=complex)
        coeffs[0] = 1.0
    missing = abs(1.0 - float(np.sum(np.abs(coeffs) ** 2)))
    if missing > 1e-10:
        raise TruncationInadequate(
            "coherent tail mass %.3g at n_trunc=%d for |alpha|=%.3g"
            % (missing, n_trunc, abs(alpha))
        )
    return CoherentState(frame="oscillator", alpha=alpha, coeffs=coeffs)


def coherent_inverted(alpha, n_trunc):
    """Image rho^-1 |alpha> of a normalized coherent state."""
    alpha = complex(alpha)
    s = np.sqrt(0.5j)
    y = alpha / (2.0 * s)
    h = np.zeros(n_trunc, dtype=complex)
    h[0] = 1.0
    if n_trunc > 1:
        h[1] = 2.0 * y * s
    for m in range(1, n_trunc - 1):
        h[m + 1] = (2.0 * y * s * h[m] - 2.0 * s * s * np.sqrt(m) * h[m - 1]) / np.sqrt(
            m + 1
        )
    coeffs = np.exp(1j * alpha ** 2 / 4.0 - abs(alpha) ** 2 / 2.0) * h
    return CoherentState(frame="inverted", alpha=alpha, coeffs=coeffs)


def evolve_closed_form(alpha, t, n_trunc, hbar=1.0, mass=1.0, omega=1.0):
    """Closed-form U(t) rho^-1 |alpha> (see the module docstring).

    hbar and mass are accepted for signature symmetry with the direct
    propagator; the closed form depends on omega t only, because H_r is
    proportional to hbar omega and mass cancels in ladder form.
    """
    del hbar, mass
    alpha = complex(alpha)
    wt = omega * t
    alpha_t = alpha * np.exp(wt)
    prefactor = np.exp(wt / 2.0) * np.exp(
        (abs(alpha_t) ** 2 - abs(alpha) ** 2) / 2.0
    )
    base = coherent_inverted(alpha_t, n_trunc)
    return CoherentState(
        frame="inverted",
        alpha=alpha_t,
        coeffs=prefactor * base.coeffs,
        prefactor=complex(prefactor),
    )


def evolve_direct(alpha, t, n_trunc, hbar=1.0, mass=1.0, omega=1.0, pad_factor=4):
    """U(t) rho^-1 |alpha> by eigendecomposition of the truncated H_r.

    The image state has a marginally non-normalizable tail, so the
    truncated propagator reflects amplitude off the truncation edge;
    the reflection reaches Fock index k after roughly wt = ln(edge/k)/2.
    The propagator therefore runs at pad_factor times the requested
    size, with the initial state REBUILT at the padded size (zero
    padding the short vector would put the radiating edge right back at
    n_trunc), and the result is projected back. The first n_trunc/4
    coefficients are then certified for wt up to about
    ln(4 pad_factor)/2, which the guard enforces.
    """
    del mass
    wt_limit = 0.5 * np.log(4.0 * pad_factor)
    if abs(omega * t) > wt_limit:
        raise TruncationInadequate(
            "omega t = %.3g exceeds the padded light-cone limit %.3g"
            % (abs(omega * t), wt_limit)
        )
    n_work = pad_factor * n_trunc
    base = coherent_inverted(alpha, n_work)
    h_r = inverted_hamiltonian(n_work, hbar=hbar, omega=omega)
    lam, vec = np.linalg.eigh(h_r)
    psi = (vec * np.exp(-1j * lam * t / hbar)) @ (vec.T @ base.coeffs)
    return CoherentState(
        frame="inverted",
        alpha=complex(alpha) * np.exp(omega * t),
        coeffs=psi[:n_trunc].copy(),
        prefactor=None,
    )


def _pre_image(state):
    """Oscillator-frame pre-image w = rho psi, known symbolically.

    For an inverted-frame state built from alpha with a scalar
    prefactor, w is prefactor times the normalized coherent |alpha>;
    the prefactor cancels in every expectation ratio, so the normalized
    coherent coefficients are returned.
    """
    if state.frame == "oscillator":
        return state.coeffs
    if state.prefactor is None:
        raise ValueError(
            "state has no symbolic pre-image; metric expectations need one"
        )
    if abs(state.prefactor) ** 2 < 1e-300:
        raise DegenerateState("metric norm vanishes (prefactor ~ 0)")
    return coherent_oscillator(state.alpha, len(state.coeffs)).coeffs


def eta_expectation(state, observable):
    """Metric expectation <psi| eta O |psi> / <psi| eta |psi>.

    ``observable`` is the oscillator-frame matrix o; the corresponding
    inverted-frame operator is O = rho^-1 o rho. With eta = rho+ rho the
    product eta O collapses to rho+ o rho, so the whole ratio reduces to
    the plain expectation of o in the pre-image w = rho psi. That
    reduction is exact and is the only route that survives float at
    working size (assembled eta has dynamic range e^{O(n)}).
    """
    w = _pre_image(state)
    if observable.shape != (len(w), len(w)):
        raise ValueError(
            "observable shape %s does not match state size %d"
            % (observable.shape, len(w))
        )
    norm_sq = np.vdot(w, w)
    if abs(norm_sq) < 1e-300:
        raise DegenerateState("metric norm vanishes")
    return complex(np.vdot(w, observable @ w) / norm_sq)


def metric_norm_sq(state):
    """<psi| eta |psi> for inverted-frame states, <psi|psi> otherwise."""
    if state.frame == "oscillator":
        return float(np.vdot(state.coeffs, state.coeffs).real)
    if state.prefactor is None:
        raise ValueError("state has no symbolic pre-image")
    return float(abs(state.prefactor) ** 2)


def moments(state, hbar=1.0, mass=1.0, omega=1.0):
    """First and second metric moments of the pseudo-quadratures.

    Returns X, P, X2, P2, the spreads DX, DP and their product. The
    imaginary parts of the underlying expectations are roundoff (the
    metric makes the pseudo-quadratures effectively self-adjoint) and
    are dropped; the naive squared-momentum prefactor obtained by
    blindly squaring the ladder form is non-real, and the computed
    value is what is reported.
    """
    n = len(state.coeffs)
    x, p = quadrature_matrices(n, hbar=hbar, mass=mass, omega=omega)
    ex = eta_expectation(state, x).real
    ep = eta_expectation(state, p).real
    ex2 = eta_expectation(state, x @ x).real
    ep2 = eta_expectation(state, p @ p).real
    var_x = max(ex2 - ex * ex, 0.0)
    var_p = max(ep2 - ep * ep, 0.0)
    dx = float(np.sqrt(var_x))
    dp = float(np.sqrt(var_p))
    return {
        "X": float(ex),
        "P": float(ep),
        "X2": float(ex2),
        "P2": float(ep2),
        "DX": dx,
        "DP": dp,
        "product": dx * dp,
    }


def resolution_of_identity(n_levels=8, radius=6.0, n_radial=128, n_angular=128):
    """max |(1/pi) int |a><a| d^2a - 1|_{mn} over the lowest levels.

    Gauss-Legendre nodes in the radius on [0, radius], uniform angular
    grid (exact for the trigonometric integrands up to degree
    n_angular). The same matrix elements certify the inverted-frame
    overcompleteness, because every eta pairing of image states
    collapses through rho rho^-1 to exactly these oscillator-frame
    integrals.
    """
    nodes, weights = np.polynomial.legendre.leggauss(n_radial)
    r = radius * (nodes + 1.0) / 2.0
    wr = weights * radius / 2.0
    phi = 2.0 * np.pi * np.arange(n_angular) / n_angular
    alphas = (r[:, None] * np.exp(1j * phi)[None, :]).ravel()
    weight = ((wr * r)[:, None] * (2.0 * np.pi / n_angular)).repeat(
        n_angular, axis=1
    ).ravel() / np.pi
    n = np.arange(n_levels)
    mono = alphas[:, None] ** n[None, :] / np.exp(0.5 * gammaln(n + 1))[None, :]
    coeff = np.exp(-0.5 * np.abs(alphas) ** 2)[:, None] * mono
    gram = (coeff * weight[:, None]).T @ coeff.conj()
    return float(np.max(np.abs(gram - np.eye(n_levels))))


def classical_trajectory(alpha, t_grid, n_trunc, hbar=1.0, mass=1.0, omega=1.0):
    """Metric quadrature trajectory, closed form and matrix elements.

    Closed forms: <X> = sqrt(hbar/2 m w)(a + a*) e^{wt} and
    <P> = i sqrt(hbar m w/2)(a* - a) e^{wt}; the matrix columns evaluate
    the same expectations through eta_expectation on the evolved state.
    Returns a dict of equal-length arrays keyed t, X_closed, X_matrix,
    P_closed, P_matrix, dX, dP, product.
    """
    alpha = complex(alpha)
    t_grid = np.asarray(t_grid, dtype=float)
    x_amp = np.sqrt(hbar / (2.0 * mass * omega)) * (alpha + alpha.conjugate()).real
    p_amp = (1j * np.sqrt(hbar * mass * omega / 2.0) * (alpha.conjugate() - alpha)).real
    x_closed = x_amp * np.exp(omega * t_grid)
    p_closed = p_amp * np.exp(omega * t_grid)
    x_matrix = np.empty_like(x_closed)
    p_matrix = np.empty_like(p_closed)
    product = np.empty_like(x_closed)
    for i, t in enumerate(t_grid):
        state = evolve_closed_form(alpha, t, n_trunc, hbar=hbar, mass=mass, omega=omega)
        m = moments(state, hbar=hbar, mass=mass, omega=omega)
        x_matrix[i] = m["X"]
        p_matrix[i] = m["P"]
        product[i] = m["product"]
    return {
        "t": t_grid,
        "X_closed": x_closed,
        "X_matrix": x_matrix,
        "P_closed": p_closed,
        "P_matrix": p_matrix,
        "dX": np.abs(x_closed - x_matrix),
        "dP": np.abs(p_closed - p_matrix),
        "product": product,
    }
