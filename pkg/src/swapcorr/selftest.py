"""Headless property checks runnable from the command line.

Mirrors the core guarantees of the package on freshly drawn random corpora:
construction-oracle equivalence, the overlap identity, witness soundness,
the classical-only behavior of equal inputs, the absence of discord without
negativity, estimator determinism, and the sudden-death run.
"""

from __future__ import annotations

import numpy as np

from .circuit import build_by_gates, build_closed_form, measure_stats, sample_shots
from .linalg import partial_transpose
from .measures import EPS_NEG, classify, discord_via_measurement, mutual_information, negativity
from .random_states import ginibre_state, random_pure_state, shared_basis_pair
from .scenarios import TrajectoryConfig, trajectory
from .witness import construct_witness


def _binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def run_selftest(seed: int = 0, quick: bool = False) -> int:
    """Run all checks, printing one PASS/FAIL line each; returns failure count."""
    rng = np.random.default_rng(seed)
    failures = 0

    def check(name: str, ok: bool, detail: str = "") -> None:
        nonlocal failures
        if ok:
            print(f"[PASS] {name}")
        else:
            failures += 1
            print(f"[FAIL] {name}  {detail}")

    n_pairs = 12 if quick else 60

    # construction oracle equivalence + overlap identity
    worst_gate = 0.0
    worst_overlap = 0.0
    for _ in range(n_pairs):
        d = int(rng.integers(2, 5))
        r1, r2 = ginibre_state(d, rng=rng), ginibre_state(d, rng=rng)
        closed = build_closed_form(r1, r2)
        gates = build_by_gates(r1, r2)
        worst_gate = max(worst_gate, float(np.max(np.abs(closed.state.matrix - gates.state.matrix))))
        direct = float(np.real(np.trace(r1.matrix @ r2.matrix)))
        worst_overlap = max(worst_overlap, abs(measure_stats(closed).overlap - direct))
    check("closed form matches gate construction (<= 1e-12)", worst_gate <= 1e-12,
          f"max diff {worst_gate:.2e}")
    check("overlap equals direct trace (<= 1e-10)", worst_overlap <= 1e-10,
          f"max diff {worst_overlap:.2e}")

    # witness soundness on distinct pairs, all four construction cases
    sound = True
    detail = ""
    for i in range(n_pairs):
        d = int(rng.integers(2, 5))
        kind = i % 4
        if kind == 0:
            r1, r2 = ginibre_state(d, rng=rng), ginibre_state(d, rng=rng)
        elif kind == 1:
            r1, r2 = shared_basis_pair(d, d, d, rng=rng)
        elif kind == 2:
            r1, r2 = shared_basis_pair(d, 1, d, rng=rng)
        else:
            r1, r2 = shared_basis_pair(d, d, max(1, d - 1), rng=rng)
        cert = construct_witness(r1, r2)
        pt = partial_transpose(build_closed_form(r1, r2).state, subsystems=(1, 2))
        direct = float(np.real(cert.vector.conj() @ pt @ cert.vector))
        neg = negativity(build_closed_form(r1, r2)).neg_sum
        if not (cert.value < -1e-12 and abs(cert.value - direct) <= 1e-10 and neg > 0):
            sound = False
            detail = f"case {cert.case_id}: value {cert.value:.2e}, neg {neg:.2e}"
            break
    check("witness certificates are strictly negative and verified", sound, detail)

    # equal mixed inputs: classical correlation only
    ok_equal = True
    detail = ""
    for _ in range(4 if quick else 12):
        d = int(rng.integers(2, 5))
        r = ginibre_state(d, rng=rng)
        tri = build_closed_form(r, r)
        neg = negativity(tri).neg_sum
        disc = discord_via_measurement(tri).discord
        mi = mutual_information(tri)
        expected = _binary_entropy(measure_stats(tri).p_plus)
        if neg > EPS_NEG or disc > 1e-5 or abs(mi - expected) > 1e-9:
            ok_equal = False
            detail = f"neg={neg:.2e} discord={disc:.2e} |MI-H2|={abs(mi - expected):.2e}"
            break
    check("equal mixed inputs: zero negativity, zero discord, MI = H2(p+)", ok_equal, detail)

    # no discord without negativity
    anomaly_free = True
    for _ in range(6 if quick else 20):
        d = int(rng.integers(2, 5))
        report = classify(build_closed_form(ginibre_state(d, rng=rng), ginibre_state(d, rng=rng)))
        if report.anomaly:
            anomaly_free = False
            break
    check("no anomaly (discord without negativity) on random pairs", anomaly_free)

    # equal pure inputs: no correlation at all
    pure_ok = True
    for _ in range(3 if quick else 8):
        d = int(rng.integers(2, 5))
        p = random_pure_state(d, rng=rng)
        report = classify(build_closed_form(p, p))
        if report.classification != "product" or report.total_correlation > 1e-9:
            pure_ok = False
            break
    check("equal pure inputs classify as product", pure_ok)

    # shot sampler: determinism and statistical sanity
    tri = build_closed_form(ginibre_state(2, rng=rng), ginibre_state(2, rng=rng))
    est1 = sample_shots(tri, 200_000, seed=123)
    est2 = sample_shots(tri, 200_000, seed=123)
    stats = measure_stats(tri)
    se = 2 * np.sqrt(stats.p_plus * (1 - stats.p_plus) / 200_000)
    check("shot sampler is deterministic for a fixed seed",
          est1.overlap_estimate == est2.overlap_estimate)
    check("shot estimate within 5 standard errors",
          abs(est1.overlap_estimate - stats.overlap) <= 5 * se + 1e-15,
          f"err {abs(est1.overlap_estimate - stats.overlap):.2e} vs 5se {5 * se:.2e}")

    # sudden death of the default trajectory
    cfg = TrajectoryConfig(n_steps=21 if quick else 41)
    result = trajectory(cfg)
    ok_death = (
        result.death_time is not None
        and abs(result.death_time - 0.2) <= 1e-3
        and result.discord_death_time is not None
        and result.negativity_death_time is not None
        and abs(result.discord_death_time - result.negativity_death_time) <= 1e-3
    )
    check("default trajectory dies at t = 0.2 with coinciding death times", ok_death,
          f"death={result.death_time} discord={result.discord_death_time} "
          f"negativity={result.negativity_death_time}")

    print(f"selftest: {'all checks passed' if failures == 0 else f'{failures} check(s) failed'}")
    return failures
