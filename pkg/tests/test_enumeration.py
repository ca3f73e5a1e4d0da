import math

import numpy as np
import pytest

from cvschmidt.enumeration import (
    BoundResult,
    SearchError,
    brute_force_candidates,
    brute_force_maximize,
    generate_candidates,
    maximize,
    relevant_J_range,
    trace_bound,
)
from cvschmidt.gamma_kernel import SubmatrixSpec, build_submatrix, diagonal, t_threshold
from cvschmidt.params import GainWidthParams, KernelParams, kernel_from_gain_width

HALF = KernelParams(0.5, 1.0)


def kp(eta, lam):
    return kernel_from_gain_width(GainWidthParams(eta, lam))


def test_k1_single_tuple():
    assert list(generate_candidates(1, 0)) == [(0,)]


def test_k2_only_leading_pair():
    assert list(generate_candidates(2, 0)) == [(0, 1)]


def test_k4_leading_windows():
    got = list(generate_candidates(4, 0))
    assert got == [(0, 1, 2, 3), (1, 2, 3, 4), (2, 3, 4, 5)]


def test_k5_matches_worked_case():
    got = set(generate_candidates(5, 0))
    want = {tuple(range(m, m + 5)) for m in range(6)} | {(0, 2, 3, 4, 5)}
    assert got == want


@pytest.mark.parametrize("k,J", [(3, 0), (5, 3), (6, -4), (4, 7)])
def test_candidate_structure(k, J):
    cs = generate_candidates(k, J)
    rows = [tuple(r) for r in cs.tuples]
    assert len(set(rows)) == len(rows)
    assert all(all(b > a for a, b in zip(r, r[1:])) and r[0] >= 0 for r in rows)
    seeds = [r for r in rows if r[-1] - r[0] == k - 1]
    assert len(seeds) == max(0, t_threshold(k - 1, J) - k + 1) + 1
    assert (0,) + tuple(range(1, k)) in rows


def test_brute_force_counts():
    assert [tuple(r) for r in brute_force_candidates(1, 2)] == [(0,), (1,), (2,)]
    assert len(brute_force_candidates(2, 3)) == 6
    assert len(brute_force_candidates(3, 12)) == 286
    with pytest.raises(ValueError):
        brute_force_candidates(10, 60, cap=1000)


def test_relevant_range_unit_kappa_single_block():
    assert relevant_J_range(1, HALF, 1.0) == [0]


def test_relevant_range_sign_follows_kappa():
    assert all(J >= 0 for J in relevant_J_range(6, kp(0.5, 0.01), 1.0))
    assert all(J <= 0 for J in relevant_J_range(6, kp(2.0, 0.01), 1.0))


def test_mirror_blocks_dominated():
    p = kp(0.5, 0.01)  # kappa > 1
    for J in range(1, 6):
        pos = build_submatrix(SubmatrixSpec(J, (0, 2, 3)), p)
        neg = build_submatrix(SubmatrixSpec(-J, (0, 2, 3)), p)
        assert np.all(neg <= pos)


def test_relevant_range_complement_below_incumbent():
    p = kp(1.0, 0.01)
    inc = maximize(5, p).conjectured_raw
    got = relevant_J_range(5, p, inc)
    assert got == sorted(got) and got[0] == 0
    # direct diagonal scan far past the stopping point
    for J in range(max(got) + 1, 60):
        d = diagonal(J, p, 2000)
        assert np.sort(d)[-5:].sum() < inc


def test_relevant_range_hard_cap():
    with pytest.raises(SearchError):
        relevant_J_range(3, HALF, 0.0)


def test_trace_bound_is_global_top_k():
    p = kp(0.5, 0.01)
    for J in (0, 3, 7):
        d = diagonal(J, p, 3000)
        assert trace_bound(4, J, p) == pytest.approx(np.sort(d)[-4:].sum(), rel=1e-14)


def test_maximize_k1():
    for eta, lam in [(0.5, 0.01), (1.0, 0.0), (2.0, 1.0)]:
        res = maximize(1, kp(eta, lam))
        assert res.raw_value == 1.0
        assert res.best_tuple == (0,) and res.best_J == 0


def test_maximize_k2_unit_gain_flat_prior():
    res = maximize(2, HALF)
    assert res.raw_value == pytest.approx((3 + math.sqrt(5)) / 4, rel=1e-14)
    assert (res.best_J, res.best_tuple) == (0, (0, 1))
    assert brute_force_maximize(2, HALF)[0] == pytest.approx(res.raw_value, rel=1e-13)


@pytest.mark.parametrize("eta", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_maximize_equals_brute_force(eta, k):
    p = kp(eta, 0.01)
    res = maximize(k, p)
    val, J, tup = brute_force_maximize(k, p)
    assert res.raw_value == pytest.approx(val, rel=1e-11)
    assert (res.best_J, res.best_tuple) == (J, tup)


@pytest.mark.parametrize("eta,lam", [(0.3, 0.05), (3.0, 0.2), (1.0, 2.0)])
def test_maximize_equals_unpruned_recipe(eta, lam):
    """Trace-bound pruning never drops the winner of the full candidate walk."""
    from cvschmidt.eigen import max_eigenvalues
    from cvschmidt.gamma_kernel import build_submatrices

    p = kp(eta, lam)
    for k in (3, 5, 6):
        res = maximize(k, p)
        full = max(
            max_eigenvalues(build_submatrices(J, generate_candidates(k, J).tuples, p)).max()
            for J in res.relevant_J
        )
        assert res.raw_value == pytest.approx(full, rel=1e-12)


def test_value_never_below_conjectured():
    for eta in (0.4, 1.0, 2.5):
        for k in range(1, 8):
            res = maximize(k, kp(eta, 0.1))
            assert res.raw_value >= res.conjectured_raw - 1e-12


def test_deterministic():
    p = kp(0.75, 0.01)
    assert maximize(7, p) == maximize(7, p)


def test_bound_result_prefactor():
    res = BoundResult(k=1, raw_value=2.0, conjectured_raw=1.5, best_J=0, best_tuple=(0,), candidates_examined=1,
                      eigen_evaluations=1, J_range_scanned=(0, 0), relevant_J=(0,), cutoff_used=0, prefactor=0.5)
    assert res.value == 1.0 and res.conjectured_value == 0.75


# -- completeness: excluded tuples reach the candidate set through dominations ---


def _predecessors(T):
    k = len(T)
    for l in range(1, k + 1):
        P = T[: k - l] + tuple(v - 1 for v in T[k - l :])
        if P[0] >= 0 and all(b > a for a, b in zip(P, P[1:])):
            yield P


def _dominated_chain(T, J, p, cands):
    """Greedy walk back through one-step shifts whose submatrix dominates entrywise.

    Ties at x = 1/2 are exact, so entries are compared with a 1e-12 slack.
    """
    chain = [T]
    while T not in cands:
        A = build_submatrix(SubmatrixSpec(J, T), p)
        for P in _predecessors(T):
            B = build_submatrix(SubmatrixSpec(J, P), p)
            if np.all(B - A >= -1e-12 * B):
                T = P
                chain.append(T)
                break
        else:
            return None
    return chain


@pytest.mark.parametrize("eta,lam", [(1.0, 0.0), (0.5, 0.01), (2.0, 1.0)])
def test_excluded_tuples_are_dominated(eta, lam):
    from cvschmidt.eigen import max_eigenvalue

    p = kp(eta, lam)
    rng = np.random.default_rng(4)
    for k in range(1, 5):
        for J in range(-5, 6):
            cands = set(generate_candidates(k, J))
            every = [tuple(int(v) for v in r) for r in brute_force_candidates(k, 13)]
            for T in every:
                chain = _dominated_chain(T, J, p, cands)
                assert chain is not None, (k, J, T)
            # eigenvalues never decrease walking back along sampled chains
            for i in rng.choice(len(every), size=min(20, len(every)), replace=False):
                chain = _dominated_chain(every[i], J, p, cands)
                vals = [max_eigenvalue(build_submatrix(SubmatrixSpec(J, c), p)) for c in chain]
                assert all(b >= a * (1 - 1e-12) for a, b in zip(vals, vals[1:]))
