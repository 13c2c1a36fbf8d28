"""Explicit entanglement witnesses for the post-circuit state.

For distinct inputs the partial transpose of the post-circuit state has a
negative direction that can be written down from the eigendecompositions of
the conjugated inputs.  This module aligns those decompositions, counts how
many leading eigenvector pairs coincide, picks the matching construction
case, and certifies the result by evaluating the quadratic form against the
actual partial transpose.

Conjugation matters: the decompositions are taken of conj(rho1) and
conj(rho2), and the witness vector is built from those eigenvectors as-is.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import build_closed_form
from .linalg import (
    DensityMatrix,
    InvalidStateError,
    NumericalError,
    eig_hermitian,
    partial_transpose,
)

EPS_DISTINCT = 1e-8    # max-entry difference below which inputs count as equal
EPS_MATCH = 1e-6       # |<phi_i|psi_i>| >= 1 - EPS_MATCH counts as a match
DEGENERACY_TOL = 1e-8  # eigenvalue gap below which a block counts as degenerate
MIN_VIOLATION = 1e-12  # quadratic-form values above -MIN_VIOLATION are sign-uncertain

CASE_I = "i"
CASE_II = "ii"
CASE_III = "iii"
CASE_IV = "iv"


class IndistinguishableStatesError(InvalidStateError):
    """The two inputs are equal (or too close) to admit a witness."""


class WitnessConstructionError(NumericalError):
    """No sign-certain witness could be built for nominally distinct inputs."""


@dataclass(frozen=True)
class MatchResult:
    """Aligned eigendecompositions of conj(rho1), conj(rho2) and their match count.

    ``n`` is the number of leading positions i with |<phi_i|psi_i>| within
    EPS_MATCH of 1, counted after realigning eigenvectors inside degenerate
    blocks.  ``overlaps[i]`` holds |<phi_i|psi_i>| for i < min(rank1, rank2).
    """

    n: int
    overlaps: np.ndarray
    eigenvalues1: np.ndarray
    eigenvalues2: np.ndarray
    vectors1: np.ndarray
    vectors2: np.ndarray
    rank1: int
    rank2: int


@dataclass(frozen=True)
class WitnessCertificate:
    """A unit vector x with <x| PT |x> < 0 plus the construction metadata.

    ``indices`` records the 0-based eigenvector positions (psi_index,
    phi_index) the vector was built from; ``value`` is the quadratic form
    evaluated against the actual partial transpose.
    """

    case_id: str
    n_matched: int
    vector: np.ndarray
    value: float
    indices: tuple[int, int]

    def to_json_dict(self) -> dict:
        return {
            "case": self.case_id,
            "n_matched": self.n_matched,
            "value": self.value,
            "indices": list(self.indices),
            "vector_re": self.vector.real.tolist(),
            "vector_im": self.vector.imag.tolist(),
        }


def _degenerate_blocks(values: np.ndarray, limit: int) -> list[tuple[int, int]]:
    """Maximal index ranges [a, b) of (near-)equal values among the first limit."""
    blocks = []
    a = 0
    for i in range(1, limit + 1):
        if i == limit or abs(values[i] - values[i - 1]) > DEGENERACY_TOL:
            blocks.append((a, i))
            a = i
    return blocks


def _segment_boundaries(values1: np.ndarray, values2: np.ndarray, limit: int) -> list[tuple[int, int]]:
    """Common refinement of the two block partitions over [0, limit)."""
    cuts = {0, limit}
    for a, b in _degenerate_blocks(values1, limit):
        cuts.update((a, b))
    for a, b in _degenerate_blocks(values2, limit):
        cuts.update((a, b))
    edges = sorted(cuts)
    return [(edges[i], edges[i + 1]) for i in range(len(edges) - 1)]


def _align_segments(lam, phi, sig, psi, limit):
    """Rotate bases inside simultaneously-degenerate segments.

    Within a segment both spectra are constant, so any unitary on either side
    is admissible; the singular-vector rotation diagonalizes the cross
    overlap matrix and puts the largest overlaps first.
    """
    for a, b in _segment_boundaries(lam, sig, limit):
        if b - a < 2:
            continue
        cross = phi[:, a:b].conj().T @ psi[:, a:b]
        u, _, vh = np.linalg.svd(cross)
        phi[:, a:b] = phi[:, a:b] @ u
        psi[:, a:b] = psi[:, a:b] @ vh.conj().T


def _greedy_reorder(own_vals, own_vecs, other_vecs, limit):
    """Permute eigenvectors inside each degenerate block to maximize matches.

    Greedy assignment on the absolute overlap matrix: repeatedly place the
    block's best-overlapping vector at the position of its partner.
    """
    for a, b in _degenerate_blocks(own_vals, limit):
        size = b - a
        if size < 2:
            continue
        overlap = np.abs(own_vecs[:, a:b].conj().T @ other_vecs[:, a:b])
        assignment = [-1] * size
        used_rows: set[int] = set()
        for _ in range(size):
            best, best_pq = -1.0, (0, 0)
            for p in range(size):
                if p in used_rows:
                    continue
                for q in range(size):
                    if assignment[q] >= 0:
                        continue
                    if overlap[p, q] > best:
                        best, best_pq = overlap[p, q], (p, q)
            p, q = best_pq
            used_rows.add(p)
            assignment[q] = p
        perm = [a + p for p in assignment]
        own_vecs[:, a:b] = own_vecs[:, perm]
        own_vals[a:b] = own_vals[perm]


def match_count(rho1: DensityMatrix, rho2: DensityMatrix) -> MatchResult:
    """Count leading coinciding eigenvector pairs of conj(rho1), conj(rho2).

    Eigenvalues are sorted in decreasing order and only positions inside both
    ranks participate.  Inside degenerate blocks the bases are realigned
    first (rotation on simultaneously-degenerate segments, then a greedy
    permutation per block), which makes the count well defined there.
    """
    if rho1.dim != rho2.dim:
        raise InvalidStateError(f"input dimensions differ ({rho1.dim} vs {rho2.dim})")
    e1 = eig_hermitian(rho1.matrix.conj())
    e2 = eig_hermitian(rho2.matrix.conj())
    lam = e1.eigenvalues.copy()
    sig = e2.eigenvalues.copy()
    phi = e1.eigenvectors.copy()
    psi = e2.eigenvectors.copy()
    m = min(e1.rank, e2.rank)

    _align_segments(lam, phi, sig, psi, m)
    _greedy_reorder(lam, phi, psi, m)
    _greedy_reorder(sig, psi, phi, m)

    overlaps = np.abs(np.sum(phi[:, :m].conj() * psi[:, :m], axis=0))
    n = 0
    while n < m and overlaps[n] >= 1.0 - EPS_MATCH:
        n += 1
    return MatchResult(
        n=n,
        overlaps=overlaps,
        eigenvalues1=lam,
        eigenvalues2=sig,
        vectors1=phi,
        vectors2=psi,
        rank1=e1.rank,
        rank2=e2.rank,
    )


def _witness_vector(psi_vec: np.ndarray, phi_vec: np.ndarray) -> np.ndarray:
    """(-|psi>|phi>, |phi>|psi>)/sqrt(2) over the qubit blocks."""
    d = psi_vec.size
    x = np.empty(2 * d * d, dtype=complex)
    x[: d * d] = -np.kron(psi_vec, phi_vec)
    x[d * d :] = np.kron(phi_vec, psi_vec)
    return x / np.sqrt(2.0)


def construct_witness(rho1: DensityMatrix, rho2: DensityMatrix) -> WitnessCertificate:
    """Build a witness vector certifying the post-circuit state as entangled.

    Selects the construction case from the match count n and the ranks:

    * n < min(r1, r2): pair the first unmatched eigenvectors of both states;
    * n = r1 < r2: pair the rank-boundary vector of state 1 with the next
      vector of state 2 (predicted value -lam_n * sig_{n+1} / 2);
    * n = r2 < r1: the mirror image (predicted value -lam_{n+1} * sig_n / 2);
    * n = r1 = r2: pick positions (k, l) maximizing lam_k sig_l - lam_l sig_k
      (predicted value -(lam_k sig_l - lam_l sig_k) / 2).

    The certificate value is always the quadratic form against the actual
    partial transpose of the built state.  Raises
    :class:`IndistinguishableStatesError` for (near-)equal inputs and
    :class:`WitnessConstructionError` when no sign-certain direction exists,
    instead of returning an unreliable certificate.
    """
    if rho1.dim != rho2.dim:
        raise InvalidStateError(f"input dimensions differ ({rho1.dim} vs {rho2.dim})")
    if np.max(np.abs(rho1.matrix - rho2.matrix)) <= EPS_DISTINCT:
        raise IndistinguishableStatesError(
            "inputs are entrywise equal within "
            f"{EPS_DISTINCT}; no entanglement witness exists"
        )
    match = match_count(rho1, rho2)
    n, r1, r2 = match.n, match.rank1, match.rank2
    lam, sig = match.eigenvalues1, match.eigenvalues2
    phi, psi = match.vectors1, match.vectors2

    if n < min(r1, r2):
        case_id = CASE_I
        indices = (n, n)
        vector = _witness_vector(psi[:, n], phi[:, n])
    elif r1 < r2:  # n == r1
        case_id = CASE_II
        indices = (n, n - 1)
        vector = _witness_vector(psi[:, n], phi[:, n - 1])
    elif r2 < r1:  # n == r2
        case_id = CASE_III
        indices = (n - 1, n)
        vector = _witness_vector(psi[:, n - 1], phi[:, n])
    else:  # n == r1 == r2
        case_id = CASE_IV
        # viol[k, l] = lam_k sig_l - lam_l sig_k
        viol = np.outer(lam[:n], sig[:n]) - np.outer(sig[:n], lam[:n])
        k, l = np.unravel_index(int(np.argmax(viol)), viol.shape)
        if viol[k, l] <= MIN_VIOLATION:
            raise WitnessConstructionError(
                "matched equal-rank inputs admit no eigenvalue-ratio violation; "
                "the states are too close for a sign-certain witness"
            )
        indices = (int(l), int(k))
        vector = _witness_vector(psi[:, l], phi[:, k])

    tri = build_closed_form(rho1, rho2)
    pt = partial_transpose(tri.state, subsystems=(1, 2))
    value = float(np.real(vector.conj() @ pt @ vector))
    if value >= -MIN_VIOLATION:
        raise WitnessConstructionError(
            f"witness value {value:.3e} is not certainly negative; inputs are "
            "distinguishable but too close for a reliable certificate"
        )
    return WitnessCertificate(
        case_id=case_id,
        n_matched=n,
        vector=vector,
        value=value,
        indices=indices,
    )
