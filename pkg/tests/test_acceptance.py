"""End-to-end acceptance checks for the release gate.

Each test certifies one headline claim at its stated size and tolerance
and prints a single pass/fail line with the measured numbers; pytest -v
shows the same verdict per test. Stated wall-clock budgets are asserted
where a criterion carries one.
"""

import time

import numpy as np

from ihox import coherent, dyson, fock, linalg, report


def _line(tag, ok, detail):
    print("%-26s %s  %s" % (tag, "PASS" if ok else "FAIL", detail))
    assert ok, "%s: %s" % (tag, detail)


def _samples():
    return dyson.sample_admissible(np.random.default_rng(1234), 20, 64, 16)


def test_01_similarity_sign_resolution():
    start = time.perf_counter()
    dmap = dyson.build_inverting_dyson(64)
    sigma, winner, loser = dyson.resolve_similarity_sign(dmap, 16)
    wall = time.perf_counter() - start
    scale = linalg.block_norm(fock.inverted_hamiltonian(64), 16)
    ok = sigma == -1 and winner < 1e-8 and loser > 0.1 * scale and wall < 1.0
    _line(
        "similarity-sign",
        ok,
        "sigma=%+d winner=%.3g loser=%.3g scale=%.3g wall=%.2fs"
        % (sigma, winner, loser, scale, wall),
    )


def test_02_transformed_ladder_forms():
    n, k, tol = 128, 32, 1e-10
    dmap = dyson.build_inverting_dyson(n)
    big_a, big_abar = dyson.transformed_ladder(dmap, k)
    a_closed, abar_closed = dyson.ladder_closed_forms(n)
    res_a = linalg.block_norm(big_a - a_closed, k)
    res_abar = linalg.block_norm(big_abar - abar_closed, k)
    res_comm = linalg.block_norm(
        linalg.commutator(big_a, big_abar) - np.eye(n), k
    )
    ok = res_a < tol and res_abar < tol and res_comm < tol
    _line(
        "transformed-ladder",
        ok,
        "A=%.3g Abar=%.3g [A,Abar]=%.3g (tol %g)" % (res_a, res_abar, res_comm, tol),
    )


def test_03_disentangle_factorization():
    start = time.perf_counter()
    samples = _samples()
    worst_fact = max(dyson.factorization_residual(s, 64, 16) for s in samples)
    worst_cons = max(s.consistency_residual() for s in samples)
    wall = time.perf_counter() - start
    ok = (
        len(samples) == 20
        and worst_fact < 1e-8
        and worst_cons < 1e-10
        and wall < 10.0
    )
    _line(
        "disentangle-factorization",
        ok,
        "20 samples fact=%.3g cons=%.3g wall=%.2fs" % (worst_fact, worst_cons, wall),
    )


def test_04_transformed_hamiltonian_closed_form():
    samples = _samples()
    worst = max(dyson.transformed_hamiltonian_residual(s, 64, 16) for s in samples)
    constraint = dyson.constraint_check(32)
    ok = worst < 1e-8 and constraint < 1e-12
    _line(
        "closed-hamiltonian",
        ok,
        "closed-form=%.3g constraint-point=%.3g" % (worst, constraint),
    )


def test_05_evolution_agreement():
    start = time.perf_counter()
    alpha, n, k = 0.5, 128, 32
    worst = 0.0
    for t in (0.25, 0.5, 1.0):
        closed = coherent.evolve_closed_form(alpha, t, n)
        direct = coherent.evolve_direct(alpha, t, n)
        diff = np.linalg.norm((closed.coeffs - direct.coeffs)[:k])
        worst = max(worst, diff / np.linalg.norm(closed.coeffs[:k]))
    wall = time.perf_counter() - start
    ok = worst < 1e-6 and wall < 5.0
    _line(
        "evolution-agreement",
        ok,
        "max rel diff=%.3g over wt in {.25,.5,1} wall=%.2fs" % (worst, wall),
    )


def _moment_sweep(hbar, mass, omega, t_max, alpha=0.5, n=64):
    x, p = fock.quadrature_matrices(n, hbar=hbar, mass=mass, omega=omega)
    x2, p2 = x @ x, p @ p
    x_amp = np.sqrt(hbar / (2.0 * mass * omega)) * 2.0 * complex(alpha).real
    p_amp = np.sqrt(hbar * mass * omega / 2.0) * 2.0 * complex(alpha).imag
    moment_res = 0.0
    product_res = 0.0
    for t in np.linspace(0.0, t_max, 100):
        st = coherent.evolve_closed_form(alpha, t, n, hbar=hbar, mass=mass, omega=omega)
        ex = coherent.eta_expectation(st, x).real
        ep = coherent.eta_expectation(st, p).real
        ex2 = coherent.eta_expectation(st, x2).real
        ep2 = coherent.eta_expectation(st, p2).real
        growth = np.exp(omega * t)
        moment_res = max(
            moment_res, abs(ex - x_amp * growth), abs(ep - p_amp * growth)
        )
        dx = np.sqrt(max(ex2 - ex * ex, 0.0))
        dp = np.sqrt(max(ep2 - ep * ep, 0.0))
        product_res = max(product_res, abs(dx * dp - hbar / 2.0))
    return moment_res, product_res


def test_06_moment_trajectory():
    m_unit, p_unit = _moment_sweep(1.0, 1.0, 1.0, 1.0)
    m_scaled, p_scaled = _moment_sweep(2.0, 0.5, 3.0, 1.0 / 3.0)
    ok = (
        m_unit < 1e-6
        and m_scaled < 1e-6
        and p_unit < 1e-8
        and p_scaled < 1e-8
    )
    _line(
        "moment-trajectory",
        ok,
        "moments unit=%.3g scaled=%.3g; DXDP-hbar/2 unit=%.3g scaled=%.3g"
        % (m_unit, m_scaled, p_unit, p_scaled),
    )


def test_07_trajectory_acceleration():
    n, h = 64, 1e-3
    x, _ = fock.quadrature_matrices(n)

    def ex(t):
        st = coherent.evolve_closed_form(0.5, t, n)
        return coherent.eta_expectation(st, x).real

    worst = 0.0
    peak = 0.0
    for t in np.linspace(0.0, 1.0, 100):
        if t - h < 0.0:
            continue
        mid = ex(t)
        second = (ex(t + h) - 2.0 * mid + ex(t - h)) / (h * h)
        worst = max(worst, abs(second - mid))
        peak = max(peak, abs(mid))
    rel = worst / peak
    ok = rel < 1e-4
    _line("trajectory-acceleration", ok, "max |d2X/dt2 - w^2 X| / max|X| = %.3g" % rel)


def test_08_metric_uniqueness_and_orthonormality():
    info = dyson.pseudo_hermiticity_check(64, 12)
    wins = [name for name in ("rho_rho_dag", "rho_dag_rho") if info[name] < 1e-8]
    ortho = dyson.orthonormality_check(12, 24)
    ok = (
        wins == ["rho_rho_dag"]
        and info["rho_dag_rho"] > 0.1 * info["scale"]
        and ortho < 1e-8
    )
    _line(
        "metric-uniqueness",
        ok,
        "winner=%s res=%.3g loser=%.3g ortho=%.3g"
        % (info["metric"], info["rho_rho_dag"], info["rho_dag_rho"], ortho),
    )


def test_09_resolution_of_identity():
    start = time.perf_counter()
    dev = coherent.resolution_of_identity(8, 6.0, 128, 128)
    wall = time.perf_counter() - start
    ok = dev < 1e-3 and wall < 30.0
    _line("resolution-identity", ok, "max deviation=%.3g wall=%.2fs" % (dev, wall))


def test_10_norm_divergence():
    rows = report.divergence_table()
    ls = np.array([r[0] for r in rows])
    naive = np.array([r[1] for r in rows])
    herm = np.array([r[2] for r in rows])
    slope = np.polyfit(ls, naive, 1)[0]
    slope_err = abs(slope - 2.0 / np.sqrt(np.pi))
    sat_err = abs(1.0 - herm[np.argmin(np.abs(ls - 6.0))])
    ok = slope_err < 1e-10 and sat_err < 1e-8
    _line(
        "norm-divergence",
        ok,
        "slope err=%.3g saturation err=%.3g" % (slope_err, sat_err),
    )
