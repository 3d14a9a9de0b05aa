import itertools
import random

import pytest

from qkummer import homology
from qkummer.homology import (
    h0_flip_scalar,
    random_twisted_cycle,
    reduce_twisted_cycle,
    rewrite_h0,
    twisted_h0,
    twisted_h0_invariants,
    twisted_homology,
    twisted_result,
    untwisted_block_homology,
    untwisted_homology,
    untwisted_invariants,
)
from qkummer.koszul import KoszulChain, twisted_diff, wedges
from qkummer.scalars import ONE, Scalar


def kbasis(beta, w, c=ONE):
    return KoszulChain.basis(len(beta), beta, w, c)


@pytest.mark.parametrize("n,dims", [(2, (1, 2, 1)), (3, (1, 3, 3, 1))])
def test_untwisted_dims(n, dims):
    r = untwisted_homology(n, window=2)
    assert tuple(r.dims[s] for s in range(n + 1)) == dims


def test_untwisted_block_examples():
    assert untwisted_block_homology(2, (0, 0)) == {0: 1, 1: 2, 2: 1}
    assert untwisted_block_homology(2, (0, 1)) == {0: 0, 1: 0, 2: 0}
    assert untwisted_block_homology(4, (0, 0, 0, 0))[2] == 6


def test_untwisted_invariants():
    assert untwisted_invariants(2) == {0: 1, 1: 0, 2: 1}
    assert untwisted_invariants(3) == {0: 1, 1: 0, 2: 3, 3: 0}
    assert untwisted_invariants(4)[4] == 1


def test_twisted_h0():
    assert twisted_h0(2).dimension == 4
    assert twisted_h0(3).dimension == 8


def test_rewrite_example():
    x = kbasis((2, 0), ())
    coeffs, c = rewrite_h0(x)
    assert coeffs == {(0, 0): ONE}
    assert x - kbasis((0, 0), ()) == twisted_diff(c)


def test_rewrite_round_trip_random():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.choice([2, 3])
        beta = tuple(rng.randint(-4, 4) for _ in range(n))
        x = kbasis(beta, (), Scalar(rng.randint(1, 5)))
        coeffs, c = rewrite_h0(x, axis_order=rng.sample(range(1, n + 1), n))
        assert set(coeffs) == {tuple(b % 2 for b in beta)}
        rebuilt = KoszulChain(n, 0, {(r, ()): v for r, v in coeffs.items()})
        assert x == rebuilt + twisted_diff(c)


def test_twisted_h0_invariants():
    count, scalars = twisted_h0_invariants(2)
    assert count == 4
    assert scalars[(0, 0)] == ONE
    assert h0_flip_scalar(2, (1, 0)) == ONE
    assert twisted_h0_invariants(3)[0] == 8


@pytest.mark.parametrize("n,s", [(2, 1), (2, 2), (3, 2)])
def test_twisted_vanishing(n, s):
    t = twisted_homology(n, s, window=2)
    assert t["dimension"] == 0
    assert t["stabilized"]


def test_twisted_h0_window_estimate():
    t = twisted_homology(2, 0, window=3)
    assert t["dimension"] == 4
    assert all(c["dim"] == 1 for c in t["classes"])


def test_twisted_result_n2():
    r = twisted_result(2, window=2)
    assert r.dims == {0: 4, 1: 0, 2: 0}
    assert r.invariant_dims == {0: 4, 1: 0, 2: 0}
    assert all(r.stabilized.values())
    assert r.notes == []


def test_window_and_degree_validation():
    with pytest.raises(ValueError):
        twisted_homology(2, 1, window=1)
    with pytest.raises(ValueError):
        twisted_homology(2, 3)


def test_parallel_workers_do_not_change_results(monkeypatch):
    serial = twisted_homology(2, 1, window=2, backend="modular", seed=4)
    monkeypatch.setenv(homology.WORKERS_ENV, "2")
    assert twisted_homology(2, 1, window=2, backend="modular", seed=4) == serial


def test_reduce_zero():
    cert = reduce_twisted_cycle(KoszulChain(2, 1))
    assert cert.ok and cert.preimage.is_zero()


def test_reduce_boundaries():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.choice([2, 3])
        mu = KoszulChain(n, 2, {
            (tuple(rng.randint(-2, 2) for _ in range(n)), rng.choice(wedges(n, 2))): Scalar(rng.randint(-3, 3))
            for _ in range(3)
        })
        gamma = twisted_diff(mu)
        cert = reduce_twisted_cycle(gamma, strict=True)
        assert twisted_diff(cert.preimage) == gamma
        assert cert.verify()


def test_reduce_hand_example():
    gamma = twisted_diff(kbasis((0, 0), (1, 2)))
    cert = reduce_twisted_cycle(gamma)
    assert cert.verify()


def test_reduce_mixed_classes():
    gamma = twisted_diff(kbasis((0, 0, 0), (1, 2)) + kbasis((1, 0, -1), (2, 3), Scalar(2)))
    assert reduce_twisted_cycle(gamma).verify()


def test_reduce_rejects_bad_input():
    with pytest.raises(ValueError):
        reduce_twisted_cycle(kbasis((0, 0), ()))
    with pytest.raises(ValueError):
        reduce_twisted_cycle(kbasis((0, 0), (1,)))


def test_random_cycles_are_seeded_cycles():
    for n, seed in itertools.product((2, 3), range(5)):
        g = random_twisted_cycle(n, seed)
        assert g == random_twisted_cycle(n, seed)
        assert not g.is_zero()
        assert twisted_diff(g).is_zero()
        assert reduce_twisted_cycle(g).verify()
