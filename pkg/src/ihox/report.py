"""Verification run assembly: configuration, the check registry, and the
table generators behind the CLI.

A verification run executes a fixed sequence of identity checks, each
producing one named residual compared against one tolerance. Checks run
sequentially in registry order and every numeric step is seeded or
deterministic, so a report is byte-identical across runs with the same
configuration.
"""

import json
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from . import coherent, dyson, fock, linalg
from .errors import ConfigError

__all__ = [
    "RunConfig",
    "CheckResult",
    "VerificationReport",
    "run_verification",
    "trajectory_table",
    "divergence_table",
    "disentangle_lines",
    "format_csv",
]


@dataclass
class RunConfig:
    """Knobs of a verification run, validated on construction.

    sub_block defaults to a quarter of the truncation and may not
    exceed it: the conjugation engine certifies identities only on that
    leading block (see ihox.linalg). The evolution window is capped at
    omega t_max = 1 unless unsafe is set, matching the padded
    propagator's certified light cone.
    """

    n_trunc: int = 128
    sub_block: int | None = None
    tol_exact: float = 1e-10
    tol_evolution: float = 1e-6
    tol_quadrature: float = 1e-3
    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0
    alpha: complex = 0.5 + 0.0j
    t_max: float = 1.0
    dt: float = 0.01
    seed: int = 1234
    unsafe: bool = False

    def __post_init__(self):
        if not isinstance(self.n_trunc, int) or self.n_trunc < 16:
            raise ConfigError("n_trunc must be an integer >= 16")
        if self.sub_block is None:
            self.sub_block = self.n_trunc // 4
        if not isinstance(self.sub_block, int) or self.sub_block < 2:
            raise ConfigError("sub_block must be an integer >= 2")
        if self.sub_block > self.n_trunc // 4:
            raise ConfigError(
                "sub_block must stay within the certified quarter of the "
                "truncation (%d for n_trunc=%d)" % (self.n_trunc // 4, self.n_trunc)
            )
        if self.sub_block >= self.n_trunc - 2:
            raise ConfigError("sub_block must be smaller than n_trunc - 2")
        for name in ("tol_exact", "tol_evolution", "tol_quadrature"):
            if not getattr(self, name) > 0:
                raise ConfigError("%s must be positive" % name)
        for name in ("hbar", "mass", "omega"):
            if not getattr(self, name) > 0:
                raise ConfigError("%s must be positive" % name)
        if not self.t_max > 0:
            raise ConfigError("t_max must be positive")
        if not 0 < self.dt <= self.t_max:
            raise ConfigError("dt must be in (0, t_max]")
        if self.omega * self.t_max > 1.0 + 1e-12 and not self.unsafe:
            raise ConfigError(
                "omega * t_max = %.3g exceeds the certified evolution window "
                "(1.0); pass unsafe to override" % (self.omega * self.t_max)
            )
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")
        self.alpha = complex(self.alpha)

    def as_dict(self):
        return {
            "n_trunc": self.n_trunc,
            "sub_block": self.sub_block,
            "tol_exact": self.tol_exact,
            "tol_evolution": self.tol_evolution,
            "tol_quadrature": self.tol_quadrature,
            "hbar": self.hbar,
            "mass": self.mass,
            "omega": self.omega,
            "alpha_re": self.alpha.real,
            "alpha_im": self.alpha.imag,
            "t_max": self.t_max,
            "dt": self.dt,
            "seed": self.seed,
            "unsafe": self.unsafe,
        }


@dataclass(frozen=True)
class CheckResult:
    name: str
    paper_ref: str
    residual: float
    tol: float
    passed: bool

    def as_dict(self):
        return {
            "name": self.name,
            "paper_ref": self.paper_ref,
            "residual": self.residual,
            "tol": self.tol,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class VerificationReport:
    config: RunConfig
    sigma: int
    metric: str
    checks: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def as_dict(self):
        return {
            "config": self.config.as_dict(),
            "sigma": self.sigma,
            "metric": self.metric,
            "checks": [c.as_dict() for c in self.checks],
            "pass": self.passed,
        }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2) + "\n"


def _max_block(m, k):
    return float(np.max(np.abs(m[:k, :k])))


def run_verification(cfg):
    """Run the full check registry and return the report."""
    n = cfg.n_trunc
    k = cfg.sub_block
    hbar, mass, omega = cfg.hbar, cfg.mass, cfg.omega
    checks = []

    def add(name, ref, residual, tol):
        residual = float(residual)
        checks.append(
            CheckResult(name, ref, residual, float(tol), bool(residual <= tol))
        )

    a, adag = fock.ladder_matrices(n)
    eye = np.eye(n)
    comm = linalg.commutator(a, adag)
    add(
        "ladder_block_commutator",
        "[a, a+] = 1 on the certified block",
        _max_block(comm - eye, k),
        cfg.tol_exact,
    )
    add(
        "ladder_corner_value",
        "corner of [a, a+] is -(n_trunc - 1)",
        abs(comm[-1, -1] + (n - 1)),
        cfg.tol_exact,
    )

    x, p = fock.quadrature_matrices(n, hbar=hbar, mass=mass, omega=omega)
    add(
        "quadrature_commutator",
        "[x, p] = i hbar",
        linalg.block_norm(linalg.commutator(x, p) / (1j * hbar) - eye, k),
        cfg.tol_exact,
    )

    c_na, cbar_na = fock.naive_ladder(n, hbar=hbar, mass=mass, omega=omega)
    h_r = fock.inverted_hamiltonian(n, hbar=hbar, omega=omega)
    add(
        "naive_ladder_commutator",
        "[c, cbar] = 1",
        linalg.block_norm(linalg.commutator(c_na, cbar_na) - eye, k),
        cfg.tol_exact,
    )
    add(
        "naive_ladder_hamiltonian",
        "i hbar w (cbar c + 1/2) = H_r",
        linalg.block_norm(
            1j * hbar * omega * (cbar_na @ c_na + 0.5 * eye) - h_r, k
        ),
        cfg.tol_exact,
    )

    dmap = dyson.build_inverting_dyson(n)
    sigma, sign_win, sign_lose = dyson.resolve_similarity_sign(
        dmap, k, hbar=hbar, omega=omega, tol=1e-6
    )
    add(
        "similarity_sign",
        "rho^-1 H_os rho = -i H_r",
        sign_win,
        cfg.tol_exact,
    )
    sign_scale = linalg.block_norm(h_r, k)
    add(
        "similarity_sign_margin",
        "wrong orientation misses by more than 10% of |H_r|",
        0.1 * sign_scale / sign_lose,
        1.0,
    )

    big_a, big_abar = dyson.transformed_ladder(dmap, k)
    a_closed, abar_closed = dyson.ladder_closed_forms(n)
    add(
        "transformed_ladder_A",
        "rho^-1 a rho = a + i a+",
        linalg.block_norm(big_a - a_closed, k),
        cfg.tol_exact,
    )
    add(
        "transformed_ladder_Abar",
        "rho^-1 a+ rho = (a+ + i a)/2",
        linalg.block_norm(big_abar - abar_closed, k),
        cfg.tol_exact,
    )
    add(
        "transformed_ladder_commutator",
        "[A, Abar] = 1",
        linalg.block_norm(linalg.commutator(big_a, big_abar) - eye, k),
        cfg.tol_exact,
    )

    big_x, big_p = dyson.pseudo_quadratures(dmap, k, hbar=hbar, mass=mass, omega=omega)
    x_closed = np.sqrt(hbar / (2.0 * mass * omega)) * (a_closed + abar_closed)
    p_closed = 1j * np.sqrt(hbar * mass * omega / 2.0) * (abar_closed - a_closed)
    add(
        "pseudo_quadrature_X",
        "rho^-1 x rho = sqrt(hbar/2mw)(A + Abar)",
        linalg.block_norm(big_x - x_closed, k),
        cfg.tol_exact,
    )
    add(
        "pseudo_quadrature_P",
        "rho^-1 p rho = i sqrt(hbar m w/2)(Abar - A)",
        linalg.block_norm(big_p - p_closed, k),
        cfg.tol_exact,
    )
    add(
        "pseudo_commutator",
        "[X, P] = i hbar",
        linalg.block_norm(linalg.commutator(big_x, big_p) / (1j * hbar) - eye, k),
        cfg.tol_exact,
    )
    add(
        "hamiltonian_from_ladder",
        "i hbar w (Abar A + 1/2) = H_r",
        linalg.block_norm(
            dyson.hamiltonian_from_ladder(big_a, big_abar, hbar=hbar, omega=omega)
            - h_r,
            k,
        ),
        cfg.tol_exact,
    )

    metric_info = dyson.pseudo_hermiticity_check(n, k, hbar=hbar, omega=omega)
    metric = metric_info["metric"]
    add(
        "metric_pseudo_hermiticity",
        "(i H_os)+ = eta^-1 (i H_os) eta with eta = rho rho+",
        metric_info["rho_rho_dag"],
        1e-8,
    )
    exactly_one = (metric_info["rho_rho_dag"] <= 1e-8) != (
        metric_info["rho_dag_rho"] <= 1e-8
    )
    add(
        "metric_uniqueness",
        "exactly one metric convention passes",
        0.0 if exactly_one else 1.0,
        0.5,
    )

    add(
        "eta_orthonormality",
        "<n_r| eta |m_r> = delta(n, m) for n, m < 12",
        dyson.orthonormality_check(12, 24),
        1e-8,
    )
    sv_min, sv_max = dyson.positivity_check(24)
    add(
        "eta_positive",
        "eta = rho+ rho has positive spectrum",
        0.0 if (sv_min > 0.0 and np.isfinite(sv_max)) else 1.0,
        0.5,
    )
    add(
        "det_rho_unit",
        "det rho = 1",
        dyson.determinant_check(24),
        1e-6,
    )

    rng = np.random.default_rng(cfg.seed)
    samples = dyson.sample_admissible(rng, 20, 64, 16)
    add(
        "disentangle_factorization",
        "factored normal order equals the single exponential",
        max(dyson.factorization_residual(s, 64, 16) for s in samples),
        1e-8,
    )
    add(
        "disentangle_consistency",
        "v0 = v+ v- - chi",
        max(s.consistency_residual() for s in samples),
        1e-10,
    )
    add(
        "transformed_hamiltonian_closed_form",
        "rho^-1 H_os rho matches its closed coefficient form",
        max(
            dyson.transformed_hamiltonian_residual(s, 64, 16, hbar=hbar, omega=omega)
            for s in samples
        ),
        1e-8,
    )
    add(
        "constraint_point",
        "(v+, v-, v0) = (-i, i/2, 1) gives the two-factor map",
        dyson.constraint_check(32),
        1e-12,
    )

    evo_res = 0.0
    for frac in (0.25, 0.5, 1.0):
        t = frac * cfg.t_max
        closed = coherent.evolve_closed_form(
            cfg.alpha, t, n, hbar=hbar, mass=mass, omega=omega
        )
        direct = coherent.evolve_direct(
            cfg.alpha, t, n, hbar=hbar, mass=mass, omega=omega
        )
        diff = np.linalg.norm((closed.coeffs - direct.coeffs)[:k])
        evo_res = max(evo_res, diff / np.linalg.norm(closed.coeffs[:k]))
    add(
        "evolution_closed_vs_direct",
        "U(t) rho^-1|a> = e^{wt/2} e^{(|a'|^2-|a|^2)/2} rho^-1|a'>, a' = a e^{wt}",
        evo_res,
        cfg.tol_evolution,
    )

    ts = np.linspace(0.0, cfg.t_max, 100)
    x2 = x @ x
    p2 = p @ p
    x_amp = np.sqrt(hbar / (2.0 * mass * omega)) * (cfg.alpha + cfg.alpha.conjugate()).real
    p_amp = (
        1j * np.sqrt(hbar * mass * omega / 2.0) * (cfg.alpha.conjugate() - cfg.alpha)
    ).real

    def expect_xp(t):
        st = coherent.evolve_closed_form(
            cfg.alpha, t, n, hbar=hbar, mass=mass, omega=omega
        )
        return (
            coherent.eta_expectation(st, x).real,
            coherent.eta_expectation(st, p).real,
            coherent.eta_expectation(st, x2).real,
            coherent.eta_expectation(st, p2).real,
        )

    moment_res = 0.0
    product_res = 0.0
    xs = np.empty_like(ts)
    for i, t in enumerate(ts):
        ex, ep, ex2, ep2 = expect_xp(t)
        xs[i] = ex
        growth = np.exp(omega * t)
        moment_res = max(
            moment_res, abs(ex - x_amp * growth), abs(ep - p_amp * growth)
        )
        dx = np.sqrt(max(ex2 - ex * ex, 0.0))
        dp = np.sqrt(max(ep2 - ep * ep, 0.0))
        product_res = max(product_res, abs(dx * dp - hbar / 2.0))
    add(
        "moment_trajectory",
        "<X> and <P> grow as e^{wt} from their coherent values",
        moment_res,
        cfg.tol_evolution,
    )
    add(
        "uncertainty_product",
        "DX DP = hbar/2 along the trajectory",
        product_res,
        1e-8,
    )

    h_fd = 1e-3
    acc_res = 0.0
    for t in ts:
        if t - h_fd < 0.0:
            continue
        x_m = expect_xp(t - h_fd)[0]
        x_0 = expect_xp(t)[0]
        x_p = expect_xp(t + h_fd)[0]
        second = (x_p - 2.0 * x_0 + x_m) / (h_fd * h_fd)
        acc_res = max(acc_res, abs(second - omega * omega * x_0))
    add(
        "trajectory_acceleration",
        "d2<X>/dt2 = w^2 <X>",
        acc_res / max(np.max(np.abs(xs)), 1e-300),
        1e-4,
    )

    heis_x, heis_p = dyson.heisenberg_dynamics_check(
        min(0.5 / omega, cfg.t_max), n, k, hbar=hbar, mass=mass, omega=omega
    )
    add(
        "heisenberg_quadrature",
        "U+ x U = x cosh(wt) + (p/mw) sinh(wt)",
        max(heis_x, heis_p),
        cfg.tol_exact,
    )

    add(
        "resolution_of_identity",
        "(1/pi) int |a><a| d2a = 1 on the lowest 8 levels",
        coherent.resolution_of_identity(8, 6.0, 128, 128),
        cfg.tol_quadrature,
    )

    table = divergence_table(hbar=hbar, mass=mass, omega=omega)
    ls = np.array([row[0] for row in table])
    naive = np.array([row[1] for row in table])
    herm = np.array([row[2] for row in table])
    slope = np.polyfit(ls, naive, 1)[0]
    add(
        "naive_norm_slope",
        "naive ground density integrates to 2 L sqrt(mw/pi hbar)",
        abs(slope - 2.0 * np.sqrt(mass * omega / (np.pi * hbar))),
        1e-10,
    )
    add(
        "hermitian_norm_saturation",
        "metric ground state norm saturates to 1",
        abs(1.0 - herm[np.argmin(np.abs(ls - 6.0))]),
        1e-8,
    )

    return VerificationReport(
        config=cfg, sigma=sigma, metric=metric, checks=tuple(checks)
    )


def trajectory_table(cfg):
    """Rows (t, X_closed, X_matrix, P_closed, P_matrix, dX, dP, product)
    on the configured time grid."""
    ts = np.arange(0.0, cfg.t_max + 0.5 * cfg.dt, cfg.dt)
    data = coherent.classical_trajectory(
        cfg.alpha, ts, cfg.n_trunc, hbar=cfg.hbar, mass=cfg.mass, omega=cfg.omega
    )
    cols = ("t", "X_closed", "X_matrix", "P_closed", "P_matrix", "dX", "dP", "product")
    rows = [tuple(float(data[c][i]) for c in cols) for i in range(len(ts))]
    return cols, rows


def divergence_table(box_l=8.0, grid_n=2001, hbar=1.0, mass=1.0, omega=1.0):
    """Rows (L, naive_norm, hermitian_norm) for 8 nested windows.

    The naive ground state has constant density sqrt(mw/pi hbar): its
    window norm grows linearly without bound. The metric ground state is
    the oscillator Gaussian, whose window norm saturates to 1.
    """
    if grid_n < 101 or grid_n % 2 == 0:
        raise ConfigError("grid_n must be an odd integer >= 101")
    if not box_l > 0:
        raise ConfigError("box_l must be positive")
    density_naive = np.sqrt(mass * omega / (np.pi * hbar))
    rows = []
    for i in range(1, 9):
        box = box_l * i / 8.0
        grid = np.linspace(-box, box, grid_n)
        naive = simpson(np.full(grid_n, density_naive), x=grid)
        hermitian = simpson(
            density_naive * np.exp(-mass * omega * grid ** 2 / hbar), x=grid
        )
        rows.append((float(box), float(naive), float(hermitian)))
    return rows


def disentangle_lines(eps, mu_plus, mu_minus):
    """Text lines for one disentangling: inputs, factor coefficients and
    the consistency residual |v0 - (v+ v- - chi)|."""
    params = dyson.disentangle(eps, mu_plus, mu_minus)

    def fmt(z):
        z = complex(z)
        return "%.17g%+.17gj" % (z.real, z.imag)

    return [
        "eps = %s" % fmt(params.eps),
        "mu_plus = %s" % fmt(params.mu_plus),
        "mu_minus = %s" % fmt(params.mu_minus),
        "theta = %s" % fmt(params.theta),
        "v_plus = %s" % fmt(params.v_plus),
        "v_minus = %s" % fmt(params.v_minus),
        "v_zero = %s" % fmt(params.v_zero),
        "chi = %s" % fmt(params.chi),
        "consistency_residual = %.17g" % params.consistency_residual(),
    ]


def format_csv(cols, rows):
    """Comma separated, point decimal, LF line endings, %.17g floats."""
    lines = [",".join(cols)]
    for row in rows:
        lines.append(",".join("%.17g" % v for v in row))
    return "\n".join(lines) + "\n"
