"""Seedable random-state generators for test corpora and self checks.

Mixed states come from the Ginibre construction G G^dag / Tr(G G^dag); a
truncated factor gives rank-deficient states.  Pair generators engineer the
eigenstructure relationships (shared bases, partial matches, rank gaps) that
the witness construction has to distinguish.
"""

from __future__ import annotations

import numpy as np

from .linalg import DensityMatrix


def ginibre_state(d: int, rank: int | None = None, rng: np.random.Generator | None = None) -> DensityMatrix:
    """Random mixed state of dimension d; rank < d gives a rank-deficient state."""
    rng = rng or np.random.default_rng()
    r = d if rank is None else rank
    if not 1 <= r <= d:
        raise ValueError(f"rank must be in [1, {d}], got {r}")
    G = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    rho = G @ G.conj().T
    return DensityMatrix(rho / np.trace(rho).real, (d,))


def random_pure_state(d: int, rng: np.random.Generator | None = None) -> DensityMatrix:
    rng = rng or np.random.default_rng()
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return DensityMatrix.pure(v)


def random_unitary(d: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """Haar-distributed unitary (QR of a Ginibre matrix with phase fix)."""
    rng = rng or np.random.default_rng()
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Q, R = np.linalg.qr(G)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def _random_spectrum(d: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    """Probability vector with exactly ``rank`` nonzero entries, decreasing."""
    p = rng.random(rank) + 0.05  # bounded away from zero so the rank is unambiguous
    p = np.sort(p / p.sum())[::-1]
    return np.concatenate([p, np.zeros(d - rank)])


def shared_basis_pair(
    d: int,
    rank1: int,
    rank2: int,
    rng: np.random.Generator | None = None,
) -> tuple[DensityMatrix, DensityMatrix]:
    """Two states diagonal in one random basis with the given ranks.

    All eigenvector pairs at positions below min(rank1, rank2) coincide, so
    the match count equals min(rank1, rank2).
    """
    rng = rng or np.random.default_rng()
    U = random_unitary(d, rng)
    p1 = _random_spectrum(d, rank1, rng)
    p2 = _random_spectrum(d, rank2, rng)
    rho1 = (U * p1) @ U.conj().T
    rho2 = (U * p2) @ U.conj().T
    return DensityMatrix(rho1, (d,)), DensityMatrix(rho2, (d,))


def partially_matched_pair(
    d: int,
    n_shared: int,
    rng: np.random.Generator | None = None,
) -> tuple[DensityMatrix, DensityMatrix]:
    """Full-rank pair whose leading ``n_shared`` eigenvectors coincide.

    The shared eigenvectors carry the largest eigenvalues of both states; the
    orthogonal complements are rotated independently, so the match count is
    exactly ``n_shared`` (generically) with ``n_shared < d``.
    """
    rng = rng or np.random.default_rng()
    if not 0 <= n_shared < d:
        raise ValueError(f"n_shared must be in [0, {d}), got {n_shared}")
    U = random_unitary(d, rng)
    shared = U[:, :n_shared]
    rest = U[:, n_shared:]
    m = d - n_shared

    def one_state() -> np.ndarray:
        spec = np.sort(rng.random(d) + 0.05)[::-1]
        spec = spec / spec.sum()
        V = rest @ random_unitary(m, rng)
        basis = np.hstack([shared, V])
        return (basis * spec) @ basis.conj().T

    return DensityMatrix(one_state(), (d,)), DensityMatrix(one_state(), (d,))
