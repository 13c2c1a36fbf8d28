"""Acceptance suite: the full contract, one printed pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s``.  The heavyweight pieces
(the 101x101 parameter sweep, the 500-pair witness corpus, the 100-pair
equal-input corpus) are computed once in module fixtures and shared between
criteria.
"""

import numpy as np
import pytest

import swapcorr as sc
from swapcorr.measures import EPS_NEG, NEGATIVITY_SCALE
from swapcorr.random_states import (
    ginibre_state,
    partially_matched_pair,
    random_pure_state,
    shared_basis_pair,
)

SEED = 20260810
SWEEP_RESOLUTION = 101


def _criterion(num: int, description: str, ok: bool, detail: str = "") -> None:
    tag = "PASS" if ok else "FAIL"
    print(f"[{tag}] criterion {num}: {description}" + (f"  ({detail})" if detail else ""))
    assert ok, f"criterion {num}: {description} {detail}"


def _h2(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


@pytest.fixture(scope="module")
def random_pair_corpus():
    """>=100 random input pairs over d in {2, 3, 4} for criteria 1 and 2."""
    rng = np.random.default_rng(SEED)
    pairs = []
    for d in (2, 3, 4):
        for i in range(40):
            if i % 5 == 0:
                r1 = random_pure_state(d, rng=rng)
            else:
                r1 = ginibre_state(d, rank=int(rng.integers(1, d + 1)), rng=rng)
            if i % 7 == 0:
                r2 = r1
            elif i % 5 == 1:
                r2 = random_pure_state(d, rng=rng)
            else:
                r2 = ginibre_state(d, rank=int(rng.integers(1, d + 1)), rng=rng)
            pairs.append((r1, r2))
    return pairs


@pytest.fixture(scope="module")
def witness_corpus():
    """>=500 distinct pairs spanning all four construction cases."""
    rng = np.random.default_rng(SEED + 1)
    pairs = []
    for d in (2, 3, 4):
        for _ in range(60):  # generic: case i with n = 0
            pairs.append((ginibre_state(d, rng=rng), ginibre_state(d, rng=rng)))
        for _ in range(28):  # case i with a partial match
            n_shared = int(rng.integers(1, d)) if d > 2 else 1
            pairs.append(partially_matched_pair(d, min(n_shared, d - 1), rng=rng))
        for _ in range(28):  # case ii: rank1 < rank2
            r1 = int(rng.integers(1, d))
            pairs.append(shared_basis_pair(d, r1, int(rng.integers(r1 + 1, d + 1)), rng=rng))
        for _ in range(28):  # case iii: rank2 < rank1
            r2 = int(rng.integers(1, d))
            pairs.append(shared_basis_pair(d, int(rng.integers(r2 + 1, d + 1)), r2, rng=rng))
        for _ in range(28):  # case iv: equal ranks, shared basis
            r = int(rng.integers(2, d + 1))
            pairs.append(shared_basis_pair(d, r, r, rng=rng))
    return pairs


def _block_form_partial_transpose(r1: sc.DensityMatrix, r2: sc.DensityMatrix) -> np.ndarray:
    """Independent oracle: the transposed state assembled blockwise by hand."""
    S = sc.swap_operator(r1.dim)
    T = np.kron(r1.matrix, r2.matrix)
    return 0.5 * np.block(
        [[T, S @ T], [T @ S, np.kron(r2.matrix, r1.matrix)]]
    ).conj()


@pytest.fixture(scope="module")
def witness_results(witness_corpus):
    results = []
    for r1, r2 in witness_corpus:
        cert = sc.construct_witness(r1, r2)
        pt = _block_form_partial_transpose(r1, r2)
        direct = float(np.real(cert.vector.conj() @ pt @ cert.vector))
        neg = sc.negativity(sc.build_closed_form(r1, r2)).neg_sum
        results.append((cert, direct, neg))
    return results


@pytest.fixture(scope="module")
def equal_mixed_results():
    """>=100 equal mixed pairs with their negativity, discord and entropies."""
    rng = np.random.default_rng(SEED + 2)
    results = []
    specs = [(2, 60), (3, 25), (4, 17)]
    for d, count in specs:
        for _ in range(count):
            rank = int(rng.integers(2, d + 1))
            rho = ginibre_state(d, rank=rank, rng=rng)
            tri = sc.build_closed_form(rho, rho)
            neg = sc.negativity(tri).neg_sum
            disc = sc.discord_via_measurement(tri).discord
            mi = sc.mutual_information(tri)
            p_plus = sc.measure_stats(tri).p_plus
            results.append((neg, disc, mi, p_plus))
    return results


@pytest.fixture(scope="module")
def sweep_rows(tmp_path_factory):
    rows = sc.sweep(SWEEP_RESOLUTION)
    out = tmp_path_factory.mktemp("sweep") / "sweep_101.csv"
    sc.write_sweep_csv(rows, str(out))
    print(f"\nsweep data written to {out}")
    return rows


def test_criterion_1_construction_oracle_equivalence(random_pair_corpus):
    worst = 0.0
    for r1, r2 in random_pair_corpus:
        closed = sc.build_closed_form(r1, r2).state.matrix
        gates = sc.build_by_gates(r1, r2).state.matrix
        worst = max(worst, float(np.max(np.abs(closed - gates))))
    _criterion(
        1,
        f"closed-form and gate constructions agree on {len(random_pair_corpus)} pairs",
        worst <= 1e-12,
        f"max entrywise diff {worst:.2e}",
    )


def test_criterion_2_overlap_identity(random_pair_corpus):
    worst = 0.0
    for r1, r2 in random_pair_corpus:
        stats = sc.measure_stats(sc.build_closed_form(r1, r2))
        direct = float(np.real(np.trace(r1.matrix @ r2.matrix)))
        worst = max(worst, abs(stats.overlap - direct))
    _criterion(
        2,
        "measured overlap equals Tr(rho1 rho2) on the same corpus",
        worst <= 1e-10,
        f"max diff {worst:.2e}",
    )


def test_criterion_3_witness_soundness(witness_results):
    cases = {c.case_id for c, _, _ in witness_results}
    worst_value = max(c.value for c, _, _ in witness_results)
    worst_agree = max(abs(c.value - direct) for c, direct, _ in witness_results)
    min_neg = min(neg for _, _, neg in witness_results)
    ok = (
        len(witness_results) >= 500
        and cases == {"i", "ii", "iii", "iv"}
        and worst_value < -1e-12
        and worst_agree <= 1e-10
        and min_neg > 0.0
    )
    _criterion(
        3,
        f"{len(witness_results)} witnesses (cases {sorted(cases)}) are strictly "
        "negative, verified, and accompanied by positive negativity",
        ok,
        f"max value {worst_value:.2e}, max form mismatch {worst_agree:.2e}, "
        f"min negativity {min_neg:.2e}",
    )


def test_criterion_4_equal_mixed_inputs(equal_mixed_results):
    worst_neg = max(r[0] for r in equal_mixed_results)
    worst_disc = max(r[1] for r in equal_mixed_results)
    worst_mi = max(abs(r[2] - _h2(r[3])) for r in equal_mixed_results)
    ok = (
        len(equal_mixed_results) >= 100
        and worst_neg <= 1e-9
        and worst_disc <= 1e-5
        and worst_mi <= 1e-9
    )
    _criterion(
        4,
        f"{len(equal_mixed_results)} equal mixed pairs show only classical correlation",
        ok,
        f"max negativity {worst_neg:.2e}, max discord {worst_disc:.2e}, "
        f"max |MI - H2(p+)| {worst_mi:.2e}",
    )


def test_criterion_5_equal_pure_inputs():
    rng = np.random.default_rng(SEED + 3)
    worst_total = 0.0
    worst_form = 0.0
    count = 0
    for d in (2, 3, 4):
        for _ in range(10):
            psi = random_pure_state(d, rng=rng)
            tri = sc.build_closed_form(psi, psi)
            worst_total = max(worst_total, sc.mutual_information(tri))
            plus = np.full((2, 2), 0.5)
            product = np.kron(plus, np.kron(psi.matrix, psi.matrix))
            worst_form = max(worst_form, float(np.max(np.abs(tri.state.matrix - product))))
            count += 1
    _criterion(
        5,
        f"{count} equal pure pairs are exact product states with zero correlation",
        worst_total <= 1e-9 and worst_form <= 1e-12,
        f"max total {worst_total:.2e} bits, max product-form diff {worst_form:.2e}",
    )


def test_criterion_6_negativity_proportionality():
    values = np.linspace(-1.0, 1.0, 21)
    ratios = []
    worst_scaled = 0.0
    for a1 in values:
        for a2 in values:
            if a1 == a2:
                continue
            neg = sc.negativity(sc.example_state(sc.DepolarizingParams(float(a1), float(a2))))
            ratios.append(neg.neg_sum / abs(a1 - a2))
            worst_scaled = max(worst_scaled, abs(neg.neg_scaled - abs(a1 - a2)))
    ratios = np.array(ratios)
    spread = float((ratios.max() - ratios.min()) / ratios.mean())
    constant = float(ratios.mean())
    ok = (
        spread <= 1e-8
        and abs(constant - 1.0 / NEGATIVITY_SCALE) <= 1e-8
        and worst_scaled <= 1e-8
    )
    _criterion(
        6,
        "negativity is proportional to |a1 - a2| on the 21x21 grid; "
        f"measured constant {constant:.12g} fixes the scale factor {NEGATIVITY_SCALE:g}",
        ok,
        f"relative spread {spread:.2e}, max scaled mismatch {worst_scaled:.2e}",
    )


def test_criterion_7_sudden_death():
    result = sc.trajectory(sc.TrajectoryConfig())
    ok = (
        result.death_time is not None
        and abs(result.death_time - 0.2) <= 1e-3
        and result.discord_death_time is not None
        and result.negativity_death_time is not None
        and abs(result.discord_death_time - result.negativity_death_time) <= 1e-3
    )
    _criterion(
        7,
        "the default decay run kills discord and negativity together at t = 0.2",
        ok,
        f"death {result.death_time}, discord death {result.discord_death_time}, "
        f"negativity death {result.negativity_death_time}",
    )


def test_criterion_8_dissonance_rejection(sweep_rows, witness_results, equal_mixed_results):
    def is_anomaly(discord: float, neg_sum: float) -> bool:
        return discord > 1e-5 and neg_sum <= 1e-9

    sweep_anomalies = sum(1 for r in sweep_rows if is_anomaly(r.discord, r.negativity_sum))
    # witness corpus: every state carries positive negativity above the
    # threshold, which rules the anomaly out without a discord evaluation
    witness_anomaly_candidates = sum(1 for _, _, neg in witness_results if neg <= EPS_NEG)
    equal_anomalies = sum(1 for neg, disc, _, _ in equal_mixed_results if is_anomaly(disc, neg))
    ok = (
        len(sweep_rows) == SWEEP_RESOLUTION**2
        and sweep_anomalies == 0
        and witness_anomaly_candidates == 0
        and equal_anomalies == 0
    )
    _criterion(
        8,
        f"no discord-without-negativity anomaly across the {SWEEP_RESOLUTION}x"
        f"{SWEEP_RESOLUTION} sweep and both corpora",
        ok,
        f"sweep anomalies {sweep_anomalies}, witness-corpus candidates "
        f"{witness_anomaly_candidates}, equal-pair anomalies {equal_anomalies}",
    )


def test_criterion_9_shot_estimator():
    half = sc.DensityMatrix.maximally_mixed(2)
    tri = sc.build_closed_form(half, half)
    n = 10**6
    se = 2.0 * np.sqrt(0.75 * 0.25 / n)
    worst = 0.0
    for seed in range(100):
        est = sc.sample_shots(tri, n_shots=n, seed=seed)
        worst = max(worst, abs(est.overlap_estimate - 0.5))
    _criterion(
        9,
        "sampled overlap stays within 5 binomial standard errors over 100 seeds",
        worst <= 5 * se,
        f"max deviation {worst:.2e} vs 5 se {5 * se:.2e}",
    )
