"""Dense complex-matrix kernels for small multipartite density matrices.

Everything in this package works on explicit numpy arrays; states stay small
(total dimension of order tens), so all eigenproblems are solved densely in
double precision.

Index convention: tensor factors are ordered slowest-first, i.e.
``tensor(A, B)`` uses the Kronecker product with A's index as the
slower-varying one (``numpy.kron`` convention).  Every module in the package
relies on this ordering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

# Validation tolerances for double-precision eigensolves at dimension <= 64.
TOL_HERM = 1e-10     # max |M - M^dag| for Hermiticity
TOL_TRACE = 1e-10    # |Tr - 1| for unit trace
TOL_PSD = 1e-9       # most negative admissible eigenvalue
TOL_RANK = 1e-10     # eigenvalues below this count as exact zeros
TOL_ORTH = 1e-9      # |<v_i|v_j> - delta_ij| for eigenvector orthonormality
TOL_RECON = 1e-8     # eigendecomposition reconstruction residual (max-entry)


class InvalidStateError(ValueError):
    """Input fails a structural invariant (shape, Hermiticity, trace, PSD)."""


class NumericalError(RuntimeError):
    """A numerical routine (eigensolver, optimizer) failed to converge."""


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix with subsystem structure.

    Parameters
    ----------
    matrix : array_like
        Square complex matrix; validated on construction.
    subsystem_dims : sequence of int
        Ordered dimensions of the tensor factors; their product must equal
        the matrix dimension.

    Instances are immutable (the wrapped array is marked read-only) and safe
    to share across threads.
    """

    matrix: np.ndarray
    subsystem_dims: tuple[int, ...]

    def __post_init__(self) -> None:
        mat = np.array(self.matrix, dtype=complex)
        dims = tuple(int(d) for d in self.subsystem_dims)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InvalidStateError(f"expected a square matrix, got shape {mat.shape}")
        if not dims or any(d < 1 for d in dims):
            raise InvalidStateError(f"subsystem dims must be positive, got {dims}")
        if prod(dims) != mat.shape[0]:
            raise InvalidStateError(
                f"subsystem dims {dims} do not multiply to matrix dimension {mat.shape[0]}"
            )
        herm = np.max(np.abs(mat - mat.conj().T))
        if herm > TOL_HERM:
            raise InvalidStateError(f"matrix is not Hermitian: max asymmetry {herm:.3e}")
        tr = np.trace(mat)
        if abs(tr - 1.0) > TOL_TRACE:
            raise InvalidStateError(f"trace {tr:.12g} is not 1 within {TOL_TRACE}")
        smallest = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2)[0])
        if smallest < -TOL_PSD:
            raise InvalidStateError(f"matrix is not PSD: min eigenvalue {smallest:.3e}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "subsystem_dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @staticmethod
    def pure(vector: Sequence[complex], subsystem_dims: Sequence[int] | None = None) -> "DensityMatrix":
        """Rank-1 projector onto the given (normalized) state vector."""
        v = np.asarray(vector, dtype=complex).ravel()
        norm = np.linalg.norm(v)
        if norm == 0:
            raise InvalidStateError("cannot build a state from the zero vector")
        v = v / norm
        dims = tuple(subsystem_dims) if subsystem_dims is not None else (v.size,)
        return DensityMatrix(np.outer(v, v.conj()), dims)

    @staticmethod
    def maximally_mixed(dim: int) -> "DensityMatrix":
        return DensityMatrix(np.eye(dim, dtype=complex) / dim, (dim,))

    @staticmethod
    def diagonal(populations: Sequence[float]) -> "DensityMatrix":
        """Diagonal state in the computational basis."""
        p = np.asarray(populations, dtype=float)
        return DensityMatrix(np.diag(p).astype(complex), (p.size,))


@dataclass(frozen=True)
class EigDecomposition:
    """Hermitian eigendecomposition with eigenvalues in decreasing order.

    ``eigenvectors[:, i]`` is the unit-norm eigenvector for ``eigenvalues[i]``.
    ``rank`` counts eigenvalues above :data:`TOL_RANK`.  Within a degenerate
    eigenvalue block the eigenvector basis is solver-dependent; callers must
    not rely on a particular choice there.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rank: int

    def reconstruct(self) -> np.ndarray:
        """Return sum_i lambda_i |v_i><v_i|."""
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


def _as_matrix(m: DensityMatrix | np.ndarray) -> np.ndarray:
    return m.matrix if isinstance(m, DensityMatrix) else np.asarray(m, dtype=complex)


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Tensor (Kronecker) product, first factor as the slower-varying index."""
    return DensityMatrix(np.kron(a.matrix, b.matrix), a.subsystem_dims + b.subsystem_dims)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep``.

    The kept subsystems retain their original relative order.  The trace of
    the input is preserved.
    """
    dims = rho.subsystem_dims
    k = len(dims)
    kept = sorted(set(int(i) for i in keep))
    if not kept:
        raise InvalidStateError("keep must name at least one subsystem")
    if kept[0] < 0 or kept[-1] >= k:
        raise InvalidStateError(f"subsystem indices {kept} out of range for {k} subsystems")
    tens = rho.matrix.reshape(dims + dims)
    row = list(range(k))
    col = [k + i if i in kept else i for i in range(k)]
    out = kept + [k + i for i in kept]
    reduced = np.einsum(tens, row + col, out)
    new_dims = tuple(dims[i] for i in kept)
    side = prod(new_dims)
    return DensityMatrix(reduced.reshape(side, side), new_dims)


def partial_transpose(
    matrix: DensityMatrix | np.ndarray,
    subsystems: Iterable[int],
    dims: Sequence[int] | None = None,
) -> np.ndarray:
    """Transpose the listed subsystems only.

    Accepts a :class:`DensityMatrix` (subsystem structure implied) or a plain
    square array together with ``dims``.  The result is returned as a plain
    Hermitian array because it is generally not positive semidefinite.
    Applying the operation twice with the same arguments returns the input
    exactly.
    """
    if isinstance(matrix, DensityMatrix):
        dims = matrix.subsystem_dims
        mat = matrix.matrix
    else:
        if dims is None:
            raise InvalidStateError("dims is required when passing a bare array")
        mat = np.asarray(matrix, dtype=complex)
    dims = tuple(int(d) for d in dims)
    k = len(dims)
    subs = sorted(set(int(i) for i in subsystems))
    if subs and (subs[0] < 0 or subs[-1] >= k):
        raise InvalidStateError(f"subsystem indices {subs} out of range for {k} subsystems")
    side = prod(dims)
    tens = mat.reshape(dims + dims)
    perm = [k + i if i in subs else i for i in range(k)]
    perm += [i if i in subs else k + i for i in range(k)]
    return np.ascontiguousarray(tens.transpose(perm).reshape(side, side))


def eig_hermitian(matrix: DensityMatrix | np.ndarray) -> EigDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues decreasing.

    The input must be Hermitian within :data:`TOL_HERM`; it is symmetrized as
    ``(M + M^dag)/2`` before solving.  Solver failures surface as
    :class:`NumericalError`.
    """
    mat = _as_matrix(matrix)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise InvalidStateError(f"expected a square matrix, got shape {mat.shape}")
    asym = np.max(np.abs(mat - mat.conj().T))
    if asym > TOL_HERM:
        raise InvalidStateError(f"matrix is not Hermitian: max asymmetry {asym:.3e}")
    sym = (mat + mat.conj().T) / 2
    try:
        w, v = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Hermitian eigensolver failed: {exc}") from exc
    order = np.argsort(w)[::-1]
    w = np.real(w[order])
    v = v[:, order]
    rank = int(np.count_nonzero(w > TOL_RANK))
    return EigDecomposition(eigenvalues=w, eigenvectors=v, rank=rank)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy in bits; eigenvalues below TOL_RANK count as zero."""
    w = eig_hermitian(rho).eigenvalues
    w = w[w > TOL_RANK]
    return float(max(0.0, -np.sum(w * np.log2(w))))


# ---------------------------------------------------------------------------
# Matrix exchange format: {"dims": [..], "re": [[..]], "im": [[..]]},
# row-major entries.  "im" may be omitted for real matrices.
# ---------------------------------------------------------------------------

def density_matrix_to_json(rho: DensityMatrix) -> dict:
    """Serialize to the {"dims", "re", "im"} exchange dict."""
    return {
        "dims": list(rho.subsystem_dims),
        "re": rho.matrix.real.tolist(),
        "im": rho.matrix.imag.tolist(),
    }


def density_matrix_from_json(obj: dict) -> DensityMatrix:
    """Parse the {"dims", "re", "im"} exchange dict; validates all invariants."""
    if not isinstance(obj, dict) or "dims" not in obj or "re" not in obj:
        raise InvalidStateError('matrix JSON must contain "dims" and "re"')
    try:
        dims = tuple(int(d) for d in obj["dims"])
        re = np.array(obj["re"], dtype=float)
        im = np.array(obj.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidStateError(f"malformed matrix JSON: {exc}") from exc
    if re.shape != im.shape:
        raise InvalidStateError(f'"re" shape {re.shape} does not match "im" shape {im.shape}')
    return DensityMatrix(re + 1j * im, dims)


def load_density_matrix(path: str) -> DensityMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidStateError(f"{path}: not valid JSON: {exc}") from exc
    return density_matrix_from_json(obj)


def save_density_matrix(rho: DensityMatrix, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(density_matrix_to_json(rho), fh)
        fh.write("\n")
