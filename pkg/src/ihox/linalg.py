"""Dense linear algebra tuned to truncated operator identities.

Two facts drive the design here.

First, every exponential this package actually builds has special shape:
the squeeze generators a^2 and adag^2 are strictly triangular (nilpotent,
so the Taylor series is finite and exact), and the number generator is
diagonal (elementwise exponential, exact). The generic scaling-and-
squaring path exists for completeness and for test oracles.

Second, assembled conjugations exp(G) M exp(-G) computed by matrix
products are useless at working size: the factors have dynamic range
e^{O(n)} and float64 cancellation destroys the result long before the
default truncation of 128. ``conjugate_by_series`` instead sums the
commutator series

    exp(G) M exp(-G) = sum_j ad_G^j(M) / j!

with the termination test restricted to the leading block. On the full
truncated matrix the series does NOT terminate: [a^2, adag^2] misses its
exact value 4N + 2 in the last two rows and columns, and that corner
artifact (size ~n^2) feeds back into later terms and grows roughly by a
factor n per order. On the leading k-block the true series terminates
after a few orders (degree <= 2 generators), and the corner corruption
walks inward only two indices per term, so for k <= n/4 the stop rule
fires while the block is still clean. The stop rule asks that the new
term restricted to the block is at the roundoff floor of the update that
produced it, i.e. ||T_j[:k,:k]|| <= safety eps (2 ||G|| prev) / j.
"""

import numpy as np

from .errors import IllConditioned

__all__ = [
    "commutator",
    "adjoint",
    "leading_block",
    "matrix_exponential",
    "guarded_inverse",
    "conjugate_by_diagonal",
    "conjugate_by_series",
]

#: 1-norm above which the generic exponential path refuses to run; the
#: result would have entries near the float64 overflow threshold.
EXPM_NORM_LIMIT = 700.0


def commutator(a, b):
    """a b - b a."""
    return a @ b - b @ a


def adjoint(m):
    """Conjugate transpose (as a copy)."""
    return m.conj().T.copy()


def leading_block(m, block):
    """Top-left block x block sub-matrix, copied.

    The corner of the truncated ladder algebra is wrong by construction,
    so certified statements live on this block (block <= n/4 throughout).
    """
    if not 0 < block <= m.shape[0]:
        raise ValueError("block must be in 1..%d, got %r" % (m.shape[0], block))
    return m[:block, :block].copy()


def block_norm(m, block):
    """Frobenius norm of the leading block."""
    return float(np.linalg.norm(m[:block, :block]))


def _is_strictly_triangular(m):
    upper = not np.tril(m, 0).any()
    lower = not np.triu(m, 0).any()
    return upper or lower


def matrix_exponential(m):
    """exp(m) with exact short-circuits for the shapes that occur here.

    Diagonal input: elementwise exponential. Strictly triangular input
    (every squeeze generator): the Taylor series terminates in at most
    dim steps and is summed exactly. Anything else: scaling and squaring
    with a fixed-order Taylor kernel, refused when the 1-norm is large
    enough that exp(m) would overflow float64.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix_exponential needs a square matrix")
    n = m.shape[0]
    dtype = np.result_type(m.dtype, np.float64)

    offdiag = m - np.diag(np.diagonal(m))
    if not offdiag.any():
        return np.diag(np.exp(np.diagonal(m).astype(dtype)))

    if _is_strictly_triangular(m):
        out = np.eye(n, dtype=dtype)
        term = np.eye(n, dtype=dtype)
        for k in range(1, n + 1):
            term = term @ m / k
            if not term.any():
                break
            out = out + term
        return out

    norm = np.linalg.norm(m, 1)
    if norm > EXPM_NORM_LIMIT:
        raise OverflowError(
            "matrix exponential refused: 1-norm %.3g exceeds %.0f"
            % (norm, EXPM_NORM_LIMIT)
        )
    squarings = max(0, int(np.ceil(np.log2(norm / 0.5))) if norm > 0.5 else 0)
    scaled = m / (2.0 ** squarings)
    out = np.eye(n, dtype=dtype)
    term = np.eye(n, dtype=dtype)
    for k in range(1, 21):
        term = term @ scaled / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def guarded_inverse(m, max_cond=1e12):
    """Inverse via solve, refused when the condition number is untrusted."""
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > max_cond:
        raise IllConditioned(
            "condition number %.3g exceeds the trusted limit %.3g" % (cond, max_cond)
        )
    return np.linalg.solve(m, np.eye(m.shape[0], dtype=np.result_type(m.dtype, float)))


def conjugate_by_diagonal(m, d):
    """exp(diag(d)) m exp(-diag(d)), evaluated elementwise (exact)."""
    d = np.asarray(d)
    return m * np.exp(d[:, None] - d[None, :])


def conjugate_by_series(m, g, block, safety=100.0, max_terms=24):
    """exp(g) m exp(-g) by the commutator series, trusted on the block.

    See the module docstring for why termination is detected on the
    leading block only. Raises ArithmeticError if the block term has not
    reached its roundoff floor after ``max_terms`` orders, which means
    the generator is outside the regime this rule certifies.
    """
    out = m.copy()
    term = m.copy()
    gnorm = np.linalg.norm(g)
    eps = np.finfo(float).eps
    for j in range(1, max_terms + 1):
        prev = max(block_norm(term, block), block_norm(m, block))
        term = (g @ term - term @ g) / j
        if block_norm(term, block) <= safety * eps * (2.0 * gnorm * prev) / j:
            return out
        out = out + term
    raise ArithmeticError(
        "commutator series did not terminate on the leading %d-block" % block
    )
