"""Numerical certification of the similarity map between the harmonic
oscillator and the inverted oscillator.

The package builds truncated Fock-space matrices for both Hamiltonians,
the factored similarity map between them, the metric it induces, and
coherent-state dynamics in the inverted frame, then certifies every
claimed identity by brute-force matrix computation on a leading
sub-block that truncation leaves intact.
"""

from . import coherent, dyson, errors, fock, linalg, report
from .coherent import (
    CoherentState,
    coherent_inverted,
    coherent_oscillator,
    eta_expectation,
    evolve_closed_form,
    evolve_direct,
    moments,
)
from .dyson import (
    DisentangleParams,
    DysonMap,
    build_general_dyson,
    build_inverting_dyson,
    disentangle,
    resolve_similarity_sign,
)
from .report import RunConfig, VerificationReport, run_verification

__version__ = "0.1.0"

__all__ = [
    "coherent",
    "dyson",
    "errors",
    "fock",
    "linalg",
    "report",
    "CoherentState",
    "coherent_inverted",
    "coherent_oscillator",
    "eta_expectation",
    "evolve_closed_form",
    "evolve_direct",
    "moments",
    "DisentangleParams",
    "DysonMap",
    "build_general_dyson",
    "build_inverting_dyson",
    "disentangle",
    "resolve_similarity_sign",
    "RunConfig",
    "VerificationReport",
    "run_verification",
    "__version__",
]
