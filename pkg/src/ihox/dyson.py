"""Similarity maps between the harmonic and the inverted oscillator.

A map rho is kept as an ordered tuple of quadratic generators, with
rho = exp(G_1) exp(G_2) ... assembled only for display and for the few
checks that run at small dimension. The assembled factors have dynamic
range e^{O(n)} (max |rho| is about 1e6 at n = 32 and 1e28 at n = 128),
so every certified identity is evaluated factor by factor through the
terminating commutator series in :mod:`ihox.linalg` instead of through
matrix products.

Disentangling of the combined exponential

    exp(-(eps (N + 1/2) + mu+ adag^2 + mu- a^2))
        = exp(-v-/2 a^2) exp(-(ln v0 / 2)(N + 1/2)) exp(-v+/2 adag^2)

is the scalar su(1,1) computation; its parameters obey

    v0 = v+ v- - chi

exactly (the mu+ mu- variant of that relation fails whenever
mu+ mu- != v+ v-, and a regression test keeps it that way).
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import BranchCut, DegenerateDisentangle, SignUnresolved
from .fock import (
    harmonic_hamiltonian,
    inverted_hamiltonian,
    ladder_matrices,
    quadrature_matrices,
)
from .linalg import (
    adjoint,
    block_norm,
    conjugate_by_diagonal,
    conjugate_by_series,
    matrix_exponential,
)

__all__ = [
    "DisentangleParams",
    "disentangle",
    "factorization_admissible",
    "sample_admissible",
    "factorization_residual",
    "DysonMap",
    "make_dyson",
    "build_general_dyson",
    "build_inverting_dyson",
    "constraint_check",
    "transformed_hamiltonian_closed",
    "transformed_hamiltonian_residual",
    "conjugation_identities_check",
    "resolve_similarity_sign",
    "ladder_closed_forms",
    "transformed_ladder",
    "pseudo_quadratures",
    "hamiltonian_from_ladder",
    "pseudo_hermiticity_check",
    "orthonormality_check",
    "positivity_check",
    "determinant_check",
    "heisenberg_dynamics_check",
]

#: Series coefficients below this magnitude of theta switch to the
#: Taylor forms of cosh(theta) and sinh(theta)/theta.
_THETA_SMALL = 1e-6


@dataclass(frozen=True)
class DisentangleParams:
    """Scalar data of one disentangled exponential.

    eps, mu_plus, mu_minus are the inputs; theta, v_plus, v_minus,
    v_zero, chi the derived factor coefficients.
    """

    eps: complex
    mu_plus: complex
    mu_minus: complex
    theta: complex
    v_plus: complex
    v_minus: complex
    v_zero: complex
    chi: complex

    def consistency_residual(self):
        """|v0 - (v+ v- - chi)|, zero in exact arithmetic."""
        return abs(self.v_zero - (self.v_plus * self.v_minus - self.chi))


def disentangle(eps, mu_plus, mu_minus):
    """Factor exp(-(eps (N+1/2) + mu+ adag^2 + mu- a^2)) into normal order.

    Raises DegenerateDisentangle when the denominator
    cosh(theta) - (eps/theta) sinh(theta) vanishes; there the middle
    factor coefficient v0 has a pole and no factored form exists.
    """
    eps = complex(eps)
    mu_plus = complex(mu_plus)
    mu_minus = complex(mu_minus)
    theta = np.sqrt(np.complex128(eps * eps - 4.0 * mu_plus * mu_minus))
    if abs(theta) < _THETA_SMALL:
        t2 = theta * theta
        cosh = 1.0 + t2 / 2.0 + t2 * t2 / 24.0
        sinh_over = 1.0 + t2 / 6.0 + t2 * t2 / 120.0
    else:
        cosh = np.cosh(theta)
        sinh_over = np.sinh(theta) / theta
    den = cosh - eps * sinh_over
    scale = max(1.0, abs(cosh), abs(eps * sinh_over))
    if abs(den) < 1e-12 * scale:
        raise DegenerateDisentangle(
            "cosh(theta) - (eps/theta) sinh(theta) = %.3g at theta = %s"
            % (abs(den), theta)
        )
    v_plus = 2.0 * mu_plus * sinh_over / den
    v_minus = 2.0 * mu_minus * sinh_over / den
    v_zero = den ** -2.0
    chi = -(cosh + eps * sinh_over) / den
    return DisentangleParams(
        eps=eps,
        mu_plus=mu_plus,
        mu_minus=mu_minus,
        theta=complex(theta),
        v_plus=complex(v_plus),
        v_minus=complex(v_minus),
        v_zero=complex(v_zero),
        chi=complex(chi),
    )


def factorization_admissible(params, n_trunc, sub_block):
    """Whether the factored product is float-representable at this size.

    The middle factor has dynamic range v0^(n/2), so for part of the
    parameter box the factored product overflows all significance even
    though the scalar disentangling is fine. This bounds the log10
    magnitude of the dominant contraction path through the three factors
    at the block corners. Accept only if no path peaks above 1e6 and
    every path has decayed below 1e-12 by the truncation edge, so the
    product neither cancels catastrophically nor feels the cut.
    """
    vp, vm, v0 = params.v_plus, params.v_minus, params.v_zero
    m = np.arange(0, 3 * n_trunc)
    lv0 = np.log(abs(v0)) if v0 != 0 else 0.0
    cp = max(abs(vp) / 2.0, 1e-300)
    cm = max(abs(vm) / 2.0, 1e-300)
    peak10 = -np.inf
    tail10 = -np.inf
    for i in (0, sub_block - 1):
        valid = (m >= i) & ((m - i) % 2 == 0)
        mm = m[valid]
        q = (mm - i) // 2
        lg = (
            q * np.log(cm)
            + 0.5 * (gammaln(mm + 1) - gammaln(i + 1))
            - gammaln(q + 1)
            + q * np.log(cp)
            + 0.5 * (gammaln(mm + 1) - gammaln(i + 1))
            - gammaln(q + 1)
            - lv0 * (mm + 0.5) / 2.0
        )
        lg10 = lg / np.log(10.0)
        peak10 = max(peak10, float(lg10.max()))
        beyond = mm > n_trunc - 2
        if beyond.any():
            tail10 = max(tail10, float(lg10[beyond].max()))
    return peak10 < 6.0 and tail10 < -12.0


def sample_admissible(rng, count, n_trunc, sub_block, box=0.5, max_draws=10000):
    """Draw ``count`` admissible parameter sets uniformly from the box
    |eps|, |mu+|, |mu-| <= box (rejection sampling, seeded by ``rng``)."""
    out = []
    for _ in range(max_draws):
        eps, mu_plus, mu_minus = rng.uniform(-box, box, 3)
        try:
            params = disentangle(eps, mu_plus, mu_minus)
        except DegenerateDisentangle:
            continue
        if factorization_admissible(params, n_trunc, sub_block):
            out.append(params)
            if len(out) == count:
                return out
    raise RuntimeError("rejection sampler exhausted %d draws" % max_draws)


def _general_factors(v_plus, v_minus, v_zero, n_trunc):
    v_zero = complex(v_zero)
    if v_zero.real <= 0.0 and abs(v_zero.imag) < 1e-14 * max(1.0, abs(v_zero.real)):
        raise BranchCut("v0 = %s lies on the log branch cut" % v_zero)
    a, adag = ladder_matrices(n_trunc)
    num_half = np.arange(n_trunc) + 0.5
    factors = []
    if v_minus != 0:
        factors.append(-(v_minus / 2.0) * (a @ a).astype(complex))
    if v_zero != 1.0:
        factors.append(np.diag(-(np.log(v_zero) / 2.0) * num_half).astype(complex))
    if v_plus != 0:
        factors.append(-(v_plus / 2.0) * (adag @ adag).astype(complex))
    return tuple(factors)


@dataclass(frozen=True)
class DysonMap:
    """A factored similarity map and its assembled companions.

    ``factors`` holds the generators G_i with rho = exp(G_1) exp(G_2)...
    The assembled fields rho, rho_inv, eta = rho+ rho and eta_inv are
    exact in factored arithmetic (nilpotent and diagonal exponentials)
    but their dynamic range makes any identity *evaluated through them*
    meaningless beyond n of about 48; they are kept for display and for
    the small-dimension checks. Certified conjugations go through
    :meth:`conjugate`.
    """

    n_trunc: int
    factors: tuple
    rho: np.ndarray
    rho_inv: np.ndarray
    eta: np.ndarray
    eta_inv: np.ndarray
    params: DisentangleParams | None = field(default=None)

    def conjugate(self, m, sub_block, mode="inv"):
        """Conjugate ``m`` through the factored map, certified on the block.

        mode "inv":     rho^-1 m rho
        mode "fwd":     rho m rho^-1
        mode "dag_inv": (rho+)^-1 m rho+
        mode "dag_fwd": rho+ m (rho+)^-1
        """
        if mode == "inv":
            seq = [-g for g in self.factors]
        elif mode == "fwd":
            seq = [g for g in reversed(self.factors)]
        elif mode == "dag_inv":
            seq = [-adjoint(g) for g in reversed(self.factors)]
        elif mode == "dag_fwd":
            seq = [adjoint(g) for g in self.factors]
        else:
            raise ValueError("unknown mode %r" % (mode,))
        out = m.astype(complex)
        for g in seq:
            diag = np.diagonal(g)
            if not (g - np.diag(diag)).any():
                out = conjugate_by_diagonal(out, diag)
            else:
                out = conjugate_by_series(out, g, sub_block)
        return out


def make_dyson(factors, n_trunc, params=None):
    """Assemble a DysonMap from generator matrices."""
    rho = np.eye(n_trunc, dtype=complex)
    for g in factors:
        rho = rho @ matrix_exponential(g)
    rho_inv = np.eye(n_trunc, dtype=complex)
    for g in reversed(factors):
        rho_inv = rho_inv @ matrix_exponential(-g)
    eta = adjoint(rho) @ rho
    eta_inv = rho_inv @ adjoint(rho_inv)
    return DysonMap(
        n_trunc=n_trunc,
        factors=tuple(factors),
        rho=rho,
        rho_inv=rho_inv,
        eta=eta,
        eta_inv=eta_inv,
        params=params,
    )


def build_general_dyson(v_plus, v_minus, v_zero, n_trunc, params=None):
    """rho = exp(-v-/2 a^2) exp(-(ln v0/2)(N+1/2)) exp(-v+/2 adag^2).

    Raises BranchCut when v0 sits on the negative real axis, where the
    principal logarithm of the middle factor is discontinuous.
    """
    return make_dyson(
        _general_factors(v_plus, v_minus, v_zero, n_trunc), n_trunc, params=params
    )


def build_inverting_dyson(n_trunc):
    """The two-factor map exp(-i/4 a^2) exp(i/2 adag^2) that carries the
    harmonic Hamiltonian onto -i times the inverted one.

    This is the general map at (v+, v-, v0) = (-i, i/2, 1); the middle
    factor degenerates to the identity.
    """
    a, adag = ladder_matrices(n_trunc)
    factors = (
        -0.25j * (a @ a).astype(complex),
        0.5j * (adag @ adag).astype(complex),
    )
    return make_dyson(factors, n_trunc)


def constraint_check(n_trunc=32):
    """Relative deviation between the general map evaluated at
    (v+, v-, v0) = (-i, i/2, 1) and the two-factor map, assembled.

    Runs at most at size 32 where assembly is still healthy.
    """
    n = min(n_trunc, 32)
    general = build_general_dyson(-1j, 0.5j, 1.0, n)
    instance = build_inverting_dyson(n)
    num = np.linalg.norm(general.rho - instance.rho)
    den = np.linalg.norm(instance.rho)
    num_inv = np.linalg.norm(general.rho_inv - instance.rho_inv)
    den_inv = np.linalg.norm(instance.rho_inv)
    return max(num / den, num_inv / den_inv)


def factorization_residual(params, n_trunc, sub_block):
    """Block residual between the assembled factored product and the
    single exponential it is supposed to equal.

    Only meaningful for admissible parameters (the guard bounds the
    assembled entries); callers sample through
    :func:`sample_admissible`.
    """
    a, adag = ladder_matrices(n_trunc)
    num_half = np.diag(np.arange(n_trunc) + 0.5)
    gen = -(
        params.eps * num_half
        + params.mu_plus * (adag @ adag)
        + params.mu_minus * (a @ a)
    ).astype(complex)
    single = matrix_exponential(gen)
    factored = np.eye(n_trunc, dtype=complex)
    for g in _general_factors(params.v_plus, params.v_minus, params.v_zero, n_trunc):
        factored = factored @ matrix_exponential(g)
    return block_norm(factored - single, sub_block)


def transformed_hamiltonian_closed(v_plus, v_minus, v_zero, n_trunc, hbar=1.0, omega=1.0):
    """Closed coefficient form of rho^-1 H_os rho:

    (hbar omega / v0) [ (v0 - 2 v+ v-)(N + 1/2)
                        + (v- v+^2 - v0 v+) adag^2 + v- a^2 ].
    """
    a, adag = ladder_matrices(n_trunc)
    num_half = np.diag(np.arange(n_trunc) + 0.5).astype(complex)
    coef = hbar * omega / v_zero
    return coef * (
        (v_zero - 2.0 * v_plus * v_minus) * num_half
        + (v_minus * v_plus * v_plus - v_zero * v_plus) * (adag @ adag)
        + v_minus * (a @ a)
    )


def transformed_hamiltonian_residual(params, n_trunc, sub_block, hbar=1.0, omega=1.0):
    """Block residual between the series-conjugated rho^-1 H_os rho and
    its closed coefficient form."""
    dmap = build_general_dyson(
        params.v_plus, params.v_minus, params.v_zero, n_trunc, params=params
    )
    h_os = harmonic_hamiltonian(n_trunc, hbar=hbar, omega=omega).astype(complex)
    engine = dmap.conjugate(h_os, sub_block, "inv")
    closed = transformed_hamiltonian_closed(
        params.v_plus, params.v_minus, params.v_zero, n_trunc, hbar=hbar, omega=omega
    )
    return block_norm(engine - closed, sub_block)


def conjugation_identities_check(n_trunc=64, sub_block=16, alpha=-0.25j, beta=0.5j, gamma=0.35):
    """Residuals of the six single-factor conjugation identities.

    Evaluated through assembled exponentials on purpose: a *single*
    factor with a bounded coefficient is float-safe at this size, which
    makes these an independent cross-check of the series engine.
    """
    a, adag = ladder_matrices(n_trunc)
    a = a.astype(complex)
    adag = adag.astype(complex)
    num_half = np.diag(np.arange(n_trunc) + 0.5).astype(complex)

    low = matrix_exponential(alpha * (a @ a))
    low_inv = matrix_exponential(-alpha * (a @ a))
    raise_ = matrix_exponential(beta * (adag @ adag))
    raise_inv = matrix_exponential(-beta * (adag @ adag))
    mid = matrix_exponential(gamma * num_half)
    mid_inv = matrix_exponential(-gamma * num_half)

    def bres(lhs, rhs):
        return block_norm(lhs - rhs, sub_block)

    return {
        "a2_shifts_adag": bres(low @ adag @ low_inv, adag + 2.0 * alpha * a),
        "a2_fixes_a": bres(low @ a @ low_inv, a),
        "ad2_shifts_a": bres(raise_ @ a @ raise_inv, a - 2.0 * beta * adag),
        "ad2_fixes_adag": bres(raise_ @ adag @ raise_inv, adag),
        "number_scales_a": bres(mid @ a @ mid_inv, np.exp(-gamma) * a),
        "number_scales_adag": bres(mid @ adag @ mid_inv, np.exp(gamma) * adag),
    }


def resolve_similarity_sign(dmap, sub_block, hbar=1.0, omega=1.0, tol=1e-8):
    """Which of rho^-1 H_os rho = -i H_r or = +i H_r holds.

    Returns (sigma, winner_residual, loser_residual) with sigma = -1 for
    the first orientation. Raises SignUnresolved unless exactly one
    orientation passes ``tol`` and the other misses by at least ten
    percent of the block norm of H_r.
    """
    h_os = harmonic_hamiltonian(dmap.n_trunc, hbar=hbar, omega=omega).astype(complex)
    h_r = inverted_hamiltonian(dmap.n_trunc, hbar=hbar, omega=omega)
    conj = dmap.conjugate(h_os, sub_block, "inv")
    res_minus = block_norm(conj - (-1j) * h_r, sub_block)
    res_plus = block_norm(conj - 1j * h_r, sub_block)
    scale = block_norm(h_r, sub_block)
    if res_minus < tol and res_plus > 0.1 * scale:
        return -1, res_minus, res_plus
    if res_plus < tol and res_minus > 0.1 * scale:
        return +1, res_plus, res_minus
    raise SignUnresolved(
        "residuals %.3g / %.3g against scale %.3g" % (res_minus, res_plus, scale)
    )


def ladder_closed_forms(n_trunc):
    """The transformed ladder pair in closed form:
    A = a + i adag and Abar = (adag + i a) / 2."""
    a, adag = ladder_matrices(n_trunc)
    return a + 1j * adag, (adag + 1j * a) / 2.0


def transformed_ladder(dmap, sub_block):
    """(rho^-1 a rho, rho^-1 adag rho) through the series engine."""
    a, adag = ladder_matrices(dmap.n_trunc)
    return (
        dmap.conjugate(a.astype(complex), sub_block, "inv"),
        dmap.conjugate(adag.astype(complex), sub_block, "inv"),
    )


def pseudo_quadratures(dmap, sub_block, hbar=1.0, mass=1.0, omega=1.0):
    """(rho^-1 x rho, rho^-1 p rho) through the series engine."""
    x, p = quadrature_matrices(dmap.n_trunc, hbar=hbar, mass=mass, omega=omega)
    return (
        dmap.conjugate(x, sub_block, "inv"),
        dmap.conjugate(p, sub_block, "inv"),
    )


def hamiltonian_from_ladder(big_a, big_abar, hbar=1.0, omega=1.0):
    """i hbar omega (Abar A + 1/2), which equals the inverted Hamiltonian
    when (A, Abar) is the transformed ladder pair."""
    n = big_a.shape[0]
    return 1j * hbar * omega * (big_abar @ big_a + 0.5 * np.eye(n))


def pseudo_hermiticity_check(n_trunc=64, sub_block=12, hbar=1.0, omega=1.0):
    """Block residuals of (i H_os)+ = eta^-1 (i H_os) eta for the two
    candidate metrics, in their conjugated frames.

    For eta = rho+ rho the relation is equivalent to
        rho (i H_os) rho^-1 = (rho+)^-1 (-i H_os) rho+,
    for eta = rho rho+ to
        rho+ (-i H_os) (rho+)^-1 = rho^-1 (i H_os) rho,
    and both sides of each are series-conjugable. Exactly one candidate
    passes; the winner is reported as the metric string.
    """
    dmap = build_inverting_dyson(n_trunc)
    h = harmonic_hamiltonian(n_trunc, hbar=hbar, omega=omega).astype(complex)
    lhs_dag_rho = dmap.conjugate(1j * h, sub_block, "fwd")
    rhs_dag_rho = dmap.conjugate(-1j * h, sub_block, "dag_inv")
    res_dag_rho = block_norm(lhs_dag_rho - rhs_dag_rho, sub_block)
    lhs_rho_dag = dmap.conjugate(-1j * h, sub_block, "dag_fwd")
    rhs_rho_dag = dmap.conjugate(1j * h, sub_block, "inv")
    res_rho_dag = block_norm(lhs_rho_dag - rhs_rho_dag, sub_block)
    metric = "rho_rho_dag" if res_rho_dag < res_dag_rho else "rho_dag_rho"
    return {
        "rho_dag_rho": res_dag_rho,
        "rho_rho_dag": res_rho_dag,
        "metric": metric,
        "scale": block_norm(h, sub_block),
    }


def orthonormality_check(levels=12, n_trunc=24):
    """max |<n_r| eta |m_r> - delta_nm| for n, m < levels.

    The transformed number states are |n_r> = rho^-1 |n>, so the Gram
    matrix is (rho rho^-1)+ (rho rho^-1) and measures how exactly the
    assembled inverse undoes the assembled map. Runs at size 24, where
    assembly is still healthy; beyond about 48 the dynamic range of the
    factors makes the assembled Gram matrix meaningless at any level.
    """
    dmap = build_inverting_dyson(n_trunc)
    c = dmap.rho @ dmap.rho_inv
    gram = adjoint(c) @ c
    dev = gram[:levels, :levels] - np.eye(levels)
    return float(np.max(np.abs(dev)))


def positivity_check(n_trunc=24):
    """Smallest and largest eigenvalue of eta = rho+ rho.

    Computed as squared singular values of rho, which are exactly the
    eigenvalues of eta in exact arithmetic and stay nonnegative in
    float, so a genuine sign failure is distinguishable from roundoff.
    """
    dmap = build_inverting_dyson(n_trunc)
    sv = np.linalg.svd(dmap.rho, compute_uv=False)
    return float(sv[-1] ** 2), float(sv[0] ** 2)


def determinant_check(n_trunc=32):
    """|log det rho| + |phase - 1| for the two-factor map.

    Both factors are exponentials of traceless nilpotent generators, so
    det rho = 1 exactly; this measures the assembled deviation at a size
    where assembly is healthy.
    """
    dmap = build_inverting_dyson(min(n_trunc, 32))
    sign, logdet = np.linalg.slogdet(dmap.rho)
    return float(abs(logdet) + abs(sign - 1.0))


def heisenberg_dynamics_check(t=0.5, n_trunc=128, sub_block=16, hbar=1.0, mass=1.0, omega=1.0):
    """Block residuals of the Heisenberg evolution under H_r:

        U+ x U = x cosh(wt) + (p / m w) sinh(wt)
        U+ p U = p cosh(wt) + m w x sinh(wt)

    U is built by eigendecomposition at twice the requested size and the
    sandwich projected back, so the corner reflection of the truncated
    propagator stays outside the certified block for wt <= 1.
    """
    n_work = 2 * n_trunc
    h_r = inverted_hamiltonian(n_work, hbar=hbar, omega=omega)
    lam, vec = np.linalg.eigh(h_r)
    u = (vec * np.exp(-1j * lam * t / hbar)) @ vec.T
    x, p = quadrature_matrices(n_work, hbar=hbar, mass=mass, omega=omega)
    wt = omega * t
    xt = adjoint(u) @ x @ u
    pt = adjoint(u) @ p @ u
    x_closed = x * np.cosh(wt) + p * np.sinh(wt) / (mass * omega)
    p_closed = p * np.cosh(wt) + mass * omega * x * np.sinh(wt)
    res_x = block_norm(xt - x_closed, sub_block) / block_norm(x_closed, sub_block)
    res_p = block_norm(pt - p_closed, sub_block) / block_norm(p_closed, sub_block)
    return res_x, res_p
