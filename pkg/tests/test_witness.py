"""Eigenvector matching and the four witness construction cases."""

import numpy as np
import pytest

import swapcorr as sc
from swapcorr.random_states import (
    ginibre_state,
    partially_matched_pair,
    random_unitary,
    shared_basis_pair,
)
from swapcorr.witness import CASE_I, CASE_II, CASE_III, CASE_IV


def _direct_value(cert, rho1, rho2):
    # independent oracle: assemble the transposed state blockwise by hand
    S = sc.swap_operator(rho1.dim)
    T = np.kron(rho1.matrix, rho2.matrix)
    pt = 0.5 * np.block(
        [[T, S @ T], [T @ S, np.kron(rho2.matrix, rho1.matrix)]]
    ).conj()
    return float(np.real(cert.vector.conj() @ pt @ cert.vector))


def test_match_count_identical_inputs():
    rho = sc.DensityMatrix.diagonal([0.6, 0.4])
    match = sc.match_count(rho, rho)
    assert match.n == 2 == match.rank1 == match.rank2


def test_match_count_shared_basis_different_spectra():
    match = sc.match_count(sc.DensityMatrix.diagonal([0.8, 0.2]),
                           sc.DensityMatrix.diagonal([0.6, 0.4]))
    assert match.n == 2


def test_match_count_rotated_basis():
    plus_basis = np.array([[0.5, 0.3], [0.3, 0.5]])  # diag(.8,.2) in the |+-> basis
    match = sc.match_count(sc.DensityMatrix.diagonal([0.8, 0.2]),
                           sc.DensityMatrix(plus_basis, (2,)))
    assert match.n == 0


def test_case_iv_example_value():
    cert = sc.construct_witness(sc.DensityMatrix.diagonal([0.8, 0.2]),
                                sc.DensityMatrix.diagonal([0.6, 0.4]))
    assert cert.case_id == CASE_IV
    assert cert.n_matched == 2
    assert cert.value == pytest.approx(-0.10, abs=1e-12)
    assert np.linalg.norm(cert.vector) == pytest.approx(1.0, abs=1e-10)


def test_case_ii_example_value():
    cert = sc.construct_witness(sc.DensityMatrix.diagonal([1.0, 0.0]),
                                sc.DensityMatrix.diagonal([0.8, 0.2]))
    assert cert.case_id == CASE_II
    assert cert.n_matched == 1
    assert cert.value == pytest.approx(-0.10, abs=1e-12)


def test_case_iii_mirror():
    cert = sc.construct_witness(sc.DensityMatrix.diagonal([0.8, 0.2]),
                                sc.DensityMatrix.diagonal([1.0, 0.0]))
    assert cert.case_id == CASE_III
    assert cert.value == pytest.approx(-0.10, abs=1e-12)


def test_generic_pairs_are_case_i_and_sound():
    rng = np.random.default_rng(31)
    for d in (2, 3, 4):
        for _ in range(8):
            r1 = ginibre_state(d, rng=rng)
            r2 = ginibre_state(d, rng=rng)
            cert = sc.construct_witness(r1, r2)
            assert cert.case_id == CASE_I
            assert cert.value < -1e-12
            assert abs(cert.value - _direct_value(cert, r1, r2)) <= 1e-10
            assert np.linalg.norm(cert.vector) == pytest.approx(1.0, abs=1e-10)


def test_partial_match_case_i():
    rng = np.random.default_rng(32)
    for d, n_shared in ((3, 1), (4, 2)):
        r1, r2 = partially_matched_pair(d, n_shared, rng=rng)
        cert = sc.construct_witness(r1, r2)
        assert cert.case_id == CASE_I
        assert cert.n_matched == n_shared
        assert cert.value < -1e-12


def test_engineered_rank_cases_match_closed_forms():
    rng = np.random.default_rng(33)
    for d in (2, 3, 4):
        for _ in range(5):
            # case ii: rank1 < rank2
            r1, r2 = shared_basis_pair(d, 1, d, rng=rng)
            cert = sc.construct_witness(r1, r2)
            match = sc.match_count(r1, r2)
            n = cert.n_matched
            assert cert.case_id == CASE_II
            predicted = -match.eigenvalues1[n - 1] * match.eigenvalues2[n] / 2
            assert abs(cert.value - predicted) <= 1e-8

            # case iii: rank2 < rank1
            r1, r2 = shared_basis_pair(d, d, max(1, d - 1), rng=rng)
            cert = sc.construct_witness(r1, r2)
            match = sc.match_count(r1, r2)
            n = cert.n_matched
            assert cert.case_id == CASE_III
            predicted = -match.eigenvalues1[n] * match.eigenvalues2[n - 1] / 2
            assert abs(cert.value - predicted) <= 1e-8

            # case iv: equal ranks, shared basis
            r1, r2 = shared_basis_pair(d, d, d, rng=rng)
            cert = sc.construct_witness(r1, r2)
            match = sc.match_count(r1, r2)
            lam, sig = match.eigenvalues1, match.eigenvalues2
            l, k = cert.indices
            assert cert.case_id == CASE_IV
            predicted = (-lam[k] * sig[l] + lam[l] * sig[k]) / 2
            assert abs(cert.value - predicted) <= 1e-8


def test_witness_agrees_with_negativity():
    rng = np.random.default_rng(34)
    for _ in range(10):
        d = int(rng.integers(2, 5))
        r1 = ginibre_state(d, rng=rng)
        r2 = ginibre_state(d, rng=rng)
        cert = sc.construct_witness(r1, r2)
        neg = sc.negativity(sc.build_closed_form(r1, r2))
        assert cert.value < 0
        assert neg.neg_sum > 0


def test_conjugation_is_load_bearing():
    # complex inputs where decomposing the unconjugated matrices flips the sign
    psi = np.array([1.0, 1.0j]) / np.sqrt(2)
    psi_perp = np.array([1.0, -1.0j]) / np.sqrt(2)
    rho1 = sc.DensityMatrix.pure(psi)
    rho2 = sc.DensityMatrix(
        0.8 * np.outer(psi, psi.conj()) + 0.2 * np.outer(psi_perp, psi_perp.conj()), (2,)
    )
    cert = sc.construct_witness(rho1, rho2)
    assert cert.value == pytest.approx(-0.10, abs=1e-10)

    # rebuilding the same vector from the unconjugated eigenvectors gives a
    # nonnegative quadratic form, so it would certify nothing
    lam1, v1 = np.linalg.eigh(rho1.matrix)
    lam2, v2 = np.linalg.eigh(rho2.matrix)
    v1 = v1[:, ::-1]
    v2 = v2[:, ::-1]
    wrong = np.concatenate([-np.kron(v2[:, 1], v1[:, 0]), np.kron(v1[:, 0], v2[:, 1])])
    wrong = wrong / np.sqrt(2)
    pt = sc.partial_transpose(sc.build_closed_form(rho1, rho2).state, subsystems=(1, 2))
    wrong_value = float(np.real(wrong.conj() @ pt @ wrong))
    assert wrong_value > 0.05


def test_degenerate_block_alignment():
    # rho2's degenerate pair spans the same plane as rho1's but the solver may
    # hand back any basis inside it; alignment must still find the matches
    rng = np.random.default_rng(35)
    U = random_unitary(3, rng=rng)
    rho1 = sc.DensityMatrix((U * [0.5, 0.25, 0.25]) @ U.conj().T, (3,))
    angle = 0.7
    R = np.eye(3, dtype=complex)
    R[1:, 1:] = [[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]]
    V = U @ R
    rho2 = sc.DensityMatrix((V * [0.4, 0.3, 0.3]) @ V.conj().T, (3,))
    match = sc.match_count(rho1, rho2)
    assert match.n == 3
    cert = sc.construct_witness(rho1, rho2)
    assert cert.case_id == CASE_IV
    # best ratio violation: lam_0 sig_1 - lam_1 sig_0 = .5*.3 - .25*.4
    assert cert.value == pytest.approx(-0.025, abs=1e-10)


def test_fully_degenerate_partner():
    # maximally mixed partner: every eigenvector matches after alignment
    cert = sc.construct_witness(sc.DensityMatrix.diagonal([0.8, 0.2]),
                                sc.DensityMatrix.maximally_mixed(2))
    assert cert.case_id == CASE_IV
    assert cert.value == pytest.approx(-(0.8 * 0.5 - 0.2 * 0.5) / 2, abs=1e-10)


def test_equal_inputs_refused():
    rng = np.random.default_rng(36)
    rho = ginibre_state(3, rng=rng)
    with pytest.raises(sc.IndistinguishableStatesError):
        sc.construct_witness(rho, rho)


def test_dimension_mismatch_refused():
    with pytest.raises(sc.InvalidStateError):
        sc.construct_witness(sc.DensityMatrix.maximally_mixed(2),
                             sc.DensityMatrix.maximally_mixed(3))


def test_certificate_serializes():
    cert = sc.construct_witness(sc.DensityMatrix.diagonal([0.8, 0.2]),
                                sc.DensityMatrix.diagonal([0.6, 0.4]))
    obj = cert.to_json_dict()
    assert obj["case"] == "iv"
    assert obj["value"] == pytest.approx(-0.10, abs=1e-12)
    assert len(obj["vector_re"]) == 8
