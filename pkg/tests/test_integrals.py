import itertools
import math

import numpy as np
import pytest

import treeconfig as tc
from conftest import random_tree


def _pair_measure(eps=0.1):
    mu = tc.AtomicMeasure(d=1, atoms=[[0.0], [1.0]], weights=[0.5, 0.5])
    return mu, tc.KernelParams(t=1.0, eps=eps)


def test_bruteforce_single_edge_pair():
    mu, p = _pair_measure()
    res = tc.integral_bruteforce([mu, mu], tc.path_tree(1), p)
    assert res.value == pytest.approx(1.0 / (4 * p.eps))
    assert res.method == "oracle"


def test_bruteforce_one_atom_vanishes():
    mu = tc.AtomicMeasure(d=2, atoms=[[0.0, 0.0]], weights=[1.0])
    p = tc.KernelParams(t=0.5, eps=0.1)
    for tree in (tc.path_tree(1), tc.star_tree(2)):
        assert tc.integral_bruteforce([mu] * tree.n_vertices, tree, p).value == 0.0


def test_bruteforce_three_collinear_chain():
    mu = tc.AtomicMeasure(d=1, atoms=[[0.0], [1.0], [2.0]], weights=[1 / 3] * 3)
    p = tc.KernelParams(t=1.0, eps=0.1)
    res = tc.integral_bruteforce([mu] * 3, tc.path_tree(2), p)
    # six ordered homomorphisms of the 2-chain into 0-1-2
    assert res.value == pytest.approx(6 / 27 / (2 * p.eps) ** 2)


def test_bruteforce_cap():
    rng = np.random.default_rng(0)
    mu = tc.AtomicMeasure(d=2, atoms=rng.random((40, 2)), weights=rng.random(40))
    with pytest.raises(tc.ResourceCapError, match="cap of 100"):
        tc.integral_bruteforce([mu] * 4, tc.path_tree(3), tc.KernelParams(1, 0.1), term_cap=100)


def test_bruteforce_dimension_mismatch():
    a = tc.AtomicMeasure(d=1, atoms=[[0.0]], weights=[1.0])
    b = tc.AtomicMeasure(d=2, atoms=[[0.0, 0.0]], weights=[1.0])
    with pytest.raises(tc.ValidationError, match="dimension"):
        tc.integral_bruteforce([a, b], tc.path_tree(1), tc.KernelParams(1, 0.1))


def test_peel_matches_oracle_on_trivials():
    mu, p = _pair_measure()
    sched = tc.compute_peel_schedule(tc.path_tree(1))
    assert tc.integral_peel(mu, sched, p).value == pytest.approx(1 / (4 * p.eps))

    mu3 = tc.AtomicMeasure(d=1, atoms=[[0.0], [1.0], [2.0]], weights=[1 / 3] * 3)
    sched3 = tc.compute_peel_schedule(tc.path_tree(2))
    assert tc.integral_peel(mu3, sched3, p).value == pytest.approx(
        6 / 27 / (2 * p.eps) ** 2
    )


def test_peel_stage_log_shape():
    mu3 = tc.AtomicMeasure(d=1, atoms=[[0.0], [1.0], [2.0]], weights=[1 / 3] * 3)
    sched = tc.compute_peel_schedule(tc.path_tree(2))
    res = tc.integral_peel(mu3, sched, tc.KernelParams(1.0, 0.1))
    assert res.method == "peel"
    assert len(res.stage_log) == sched.n_rounds + 1
    assert res.stage_log[-1].label == "terminal"
    assert res.bounds_witness is None


@pytest.mark.parametrize("seed", range(25))
def test_peel_equals_oracle_random_sweep(seed):
    rng = np.random.default_rng(1000 + seed)
    n_vertices = int(rng.integers(2, 6))
    n_atoms = int(rng.integers(2, 41 if n_vertices <= 3 else 16))
    tree = random_tree(n_vertices, rng)
    mu = tc.AtomicMeasure(
        d=2, atoms=rng.random((n_atoms, 2)), weights=rng.random(n_atoms) + 0.01
    )
    t = float(rng.uniform(0.15, 0.9))
    p = tc.KernelParams(t=t, eps=float(rng.uniform(0.1, 0.9)) * t)
    oracle = tc.integral_bruteforce([mu] * n_vertices, tree, p, term_cap=10**7)
    peel = tc.integral_peel(mu, tc.compute_peel_schedule(tree), p)
    assert peel.value == pytest.approx(oracle.value, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("seed", range(8))
def test_restricted_peel_equals_per_vertex_restricted_oracle(seed):
    rng = np.random.default_rng(2000 + seed)
    n_atoms = int(rng.integers(8, 15))
    # half clustered, a few flung far so good sets actually prune
    atoms = np.vstack(
        [rng.random((n_atoms - 3, 2)), rng.random((3, 2)) * 8 + 15]
    )
    mu = tc.AtomicMeasure(d=2, atoms=atoms, weights=rng.random(n_atoms) + 0.05)
    tree = random_tree(int(rng.integers(2, 7)), rng)
    sched = tc.compute_peel_schedule(tree)
    p = tc.KernelParams(t=0.45, eps=0.15)
    try:
        chain = tc.nested_good_sets(mu, p, sched.required_depth)
    except tc.StageFailureError:
        pytest.skip("no viable field at this seed")
    restricted = tc.integral_peel(mu, sched, p, chain)
    stages = sched.vertex_stages(bump_terminal=True)
    per_vertex = [
        tc.restrict_measure(mu, chain.stage_indices(stages[v]))
        for v in range(tree.n_vertices)
    ]
    oracle = tc.integral_bruteforce(per_vertex, tree, p, term_cap=10**8)
    assert restricted.value == pytest.approx(oracle.value, rel=1e-9, abs=1e-12)


def test_peel_rejects_mismatched_chain():
    mu, p = _pair_measure()
    sched = tc.compute_peel_schedule(tc.path_tree(1))
    chain = tc.nested_good_sets(mu, p, 1)
    other = tc.KernelParams(t=1.0, eps=0.05)
    with pytest.raises(tc.ValidationError, match="parameters"):
        tc.integral_peel(mu, sched, other, chain)
    deep_tree = tc.compute_peel_schedule(tc.path_tree(4))
    mu5 = tc.AtomicMeasure(d=1, atoms=[[float(i)] for i in range(5)], weights=[0.2] * 5)
    chain5 = tc.nested_good_sets(mu5, p, 1)
    with pytest.raises(tc.ValidationError, match="depth"):
        tc.integral_peel(mu5, deep_tree, p, chain5)


def test_automorphism_invariance_path_reversal():
    # reversing the path permutes the per-vertex measures but not the value
    rng = np.random.default_rng(9)
    measures = [
        tc.AtomicMeasure(d=2, atoms=rng.random((7, 2)), weights=rng.random(7) + 0.1)
        for _ in range(4)
    ]
    tree = tc.path_tree(3)
    p = tc.KernelParams(t=0.5, eps=0.2)
    forward = tc.integral_bruteforce(measures, tree, p)
    backward = tc.integral_bruteforce(measures[::-1], tree, p)
    assert forward.value == pytest.approx(backward.value, rel=1e-12)


def test_monotone_in_added_atom():
    rng = np.random.default_rng(4)
    atoms = rng.random((12, 2))
    w = rng.random(12) + 0.05
    mu = tc.AtomicMeasure(d=2, atoms=atoms, weights=w)
    bigger = tc.AtomicMeasure(
        d=2,
        atoms=np.vstack([atoms, rng.random((1, 2))]),
        weights=np.concatenate([w, [0.3]]),
    )
    p = tc.KernelParams(t=0.4, eps=0.12)
    for tree in (tc.path_tree(2), tc.star_tree(3)):
        sched = tc.compute_peel_schedule(tree)
        small_v = tc.integral_peel(mu, sched, p).value
        big_v = tc.integral_peel(bigger, sched, p).value
        assert big_v >= small_v - 1e-12


def test_chain_mass_three_collinear():
    mu = tc.AtomicMeasure(d=1, atoms=[[0.0], [1.0], [2.0]], weights=[1 / 3] * 3)
    p = tc.KernelParams(t=1.0, eps=0.1)
    assert tc.chain_neighborhood_mass(mu, 2, p) == pytest.approx(6 / 27)


def test_chain_mass_single_atom():
    mu = tc.AtomicMeasure(d=2, atoms=[[0.0, 0.0]], weights=[1.0])
    assert tc.chain_neighborhood_mass(mu, 1, tc.KernelParams(0.5, 0.1)) == 0.0


def test_chain_mass_algebraic_relation():
    rng = np.random.default_rng(12)
    mu = tc.AtomicMeasure(d=2, atoms=rng.random((30, 2)), weights=rng.random(30))
    p = tc.KernelParams(t=0.5, eps=0.1)
    for k in (1, 2, 3):
        sched = tc.compute_peel_schedule(tc.path_tree(k))
        expected = tc.integral_peel(mu, sched, p).value * (2 * p.eps) ** k
        assert tc.chain_neighborhood_mass(mu, k, p) == pytest.approx(expected, rel=1e-12)


def test_chain_mass_bounds_nondegenerate_tuples():
    # the integral counts repeats too, so (2 eps)^k * integral dominates the
    # mass of injective chains, enumerated here directly
    rng = np.random.default_rng(21)
    mu = tc.AtomicMeasure(d=2, atoms=rng.random((8, 2)), weights=rng.random(8))
    p = tc.KernelParams(t=0.5, eps=0.2)
    k = 2
    injective = 0.0
    for tup in itertools.permutations(range(8), k + 1):
        if all(
            p.inner <= np.linalg.norm(mu.atoms[tup[i + 1]] - mu.atoms[tup[i]]) <= p.outer
            for i in range(k)
        ):
            injective += math.prod(mu.weights[list(tup)])
    assert tc.chain_neighborhood_mass(mu, k, p) >= injective - 1e-12


def test_result_validation():
    p = tc.KernelParams(1.0, 0.1)
    with pytest.raises(tc.ValidationError):
        tc.IntegralResult(value=-1.0, method="peel", stage_log=[], params=p)
    with pytest.raises(tc.ValidationError):
        tc.IntegralResult(value=math.nan, method="peel", stage_log=[], params=p)
