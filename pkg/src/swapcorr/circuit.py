"""The overlap-measurement circuit: auxiliary qubit, Hadamard, controlled swap.

Builds the post-circuit state of the three-party system (auxiliary qubit a,
registers 1 and 2) in two independent ways and derives the measurement
statistics of the sigma_x readout on the auxiliary qubit.

The auxiliary qubit is always the slowest tensor index, so the full state is
a 2x2 grid of d^2-dimensional blocks indexed by the qubit basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix, InvalidStateError, partial_trace

SQRT2 = np.sqrt(2.0)
KET_PLUS = np.array([1.0, 1.0]) / SQRT2
KET_MINUS = np.array([1.0, -1.0]) / SQRT2
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / SQRT2


@dataclass(frozen=True)
class TripartiteState:
    """Post-circuit state on (qubit, register 1, register 2).

    ``state.subsystem_dims`` is ``(2, d1, d2)``; the circuit requires
    ``d1 == d2``.
    """

    state: DensityMatrix
    d1: int
    d2: int

    def __post_init__(self) -> None:
        dims = self.state.subsystem_dims
        if len(dims) != 3 or dims[0] != 2 or dims[1] != self.d1 or dims[2] != self.d2:
            raise InvalidStateError(
                f"state dims {dims} do not match (2, {self.d1}, {self.d2})"
            )
        if self.d1 != self.d2:
            raise InvalidStateError(
                f"register dimensions differ ({self.d1} vs {self.d2}); "
                "the controlled swap requires equal registers"
            )

    @property
    def d(self) -> int:
        return self.d1

    @staticmethod
    def from_density_matrix(rho: DensityMatrix) -> "TripartiteState":
        dims = rho.subsystem_dims
        if len(dims) != 3 or dims[0] != 2:
            raise InvalidStateError(
                f"expected subsystem dims (2, d, d), got {dims}"
            )
        return TripartiteState(state=rho, d1=dims[1], d2=dims[2])


@dataclass(frozen=True)
class MeasurementStats:
    """sigma_x readout statistics of the auxiliary qubit.

    ``overlap`` is the quantity the circuit estimates: ``2*p_plus - 1``,
    which equals Tr(rho1 rho2) for the built state.
    """

    p_plus: float
    p_minus: float
    overlap: float


@dataclass(frozen=True)
class ShotEstimate:
    """Finite-shot estimate of the overlap from simulated readouts."""

    overlap_estimate: float
    std_error: float
    p_plus_estimate: float
    n_shots: int
    seed: int


def swap_operator(d: int) -> np.ndarray:
    """Permutation matrix exchanging two d-dimensional registers.

    Satisfies S|i,j> = |j,i| on every basis pair; S is Hermitian, unitary and
    involutory exactly.
    """
    if d < 1:
        raise InvalidStateError(f"dimension must be >= 1, got {d}")
    S = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            S[j * d + i, i * d + j] = 1.0
    return S


def _check_pair(rho1: DensityMatrix, rho2: DensityMatrix) -> int:
    if rho1.dim != rho2.dim:
        raise InvalidStateError(
            f"input dimensions differ ({rho1.dim} vs {rho2.dim}); "
            "the controlled swap requires equal registers"
        )
    return rho1.dim


def build_closed_form(rho1: DensityMatrix, rho2: DensityMatrix) -> TripartiteState:
    """Post-circuit state assembled directly from its block structure.

    The qubit-indexed blocks are
    ``(1/2) [[T, T S], [S T, swap(T)]]`` with ``T = rho1 (x) rho2`` and S the
    register swap.
    """
    d = _check_pair(rho1, rho2)
    S = swap_operator(d)
    T = np.kron(rho1.matrix, rho2.matrix)
    full = 0.5 * np.block([[T, T @ S], [S @ T, np.kron(rho2.matrix, rho1.matrix)]])
    return TripartiteState(state=DensityMatrix(full, (2, d, d)), d1=d, d2=d)


def build_by_gates(rho1: DensityMatrix, rho2: DensityMatrix) -> TripartiteState:
    """Post-circuit state from explicit gate-by-gate unitary evolution.

    Applies H on the auxiliary qubit (prepared in |0>) followed by the
    controlled swap with the qubit as control:
    ``C (H (x) 1) (|0><0| (x) rho1 (x) rho2) (H (x) 1)^dag C^dag``.
    Mathematically identical to :func:`build_closed_form`; kept as an
    independent construction so each can check the other.
    """
    d = _check_pair(rho1, rho2)
    dd = d * d
    initial = np.kron(np.diag([1.0, 0.0]), np.kron(rho1.matrix, rho2.matrix))
    h_full = np.kron(HADAMARD, np.eye(dd))
    cswap = np.zeros((2 * dd, 2 * dd))
    cswap[:dd, :dd] = np.eye(dd)
    cswap[dd:, dd:] = swap_operator(d)
    evolved = h_full @ initial @ h_full.conj().T
    evolved = cswap @ evolved @ cswap.conj().T
    return TripartiteState(state=DensityMatrix(evolved, (2, d, d)), d1=d, d2=d)


def measure_stats(tri: TripartiteState) -> MeasurementStats:
    """Exact sigma_x statistics of the auxiliary qubit via partial trace."""
    rho_a = partial_trace(tri.state, keep=(0,)).matrix
    p_plus = float(np.real(KET_PLUS @ rho_a @ KET_PLUS))
    p_minus = float(np.real(KET_MINUS @ rho_a @ KET_MINUS))
    return MeasurementStats(p_plus=p_plus, p_minus=p_minus, overlap=2.0 * p_plus - 1.0)


def sample_shots(tri: TripartiteState, n_shots: int, seed: int = 0) -> ShotEstimate:
    """Simulate n_shots independent sigma_x readouts and estimate the overlap.

    Deterministic for a fixed seed.  The standard error is the binomial one,
    scaled by 2 to match the overlap estimate ``2*(fraction of +) - 1``.
    """
    if n_shots < 1:
        raise InvalidStateError(f"n_shots must be >= 1, got {n_shots}")
    p_plus = measure_stats(tri).p_plus
    rng = np.random.default_rng(seed)
    hits = int(np.count_nonzero(rng.random(n_shots) < p_plus))
    frac = hits / n_shots
    stderr = 2.0 * np.sqrt(frac * (1.0 - frac) / n_shots)
    return ShotEstimate(
        overlap_estimate=2.0 * frac - 1.0,
        std_error=float(stderr),
        p_plus_estimate=frac,
        n_shots=int(n_shots),
        seed=int(seed),
    )
