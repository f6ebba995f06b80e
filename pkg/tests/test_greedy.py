from fractions import Fraction as F

import pytest

from srsg.core import BLUE, RED, Instance, fraction, utility
from srsg.dynamics import AWARE, BLIND, Move, is_equilibrium, is_improving
from srsg.generators import (
    RandomParams,
    figure1,
    greedy_iae_counterexample,
    random_instance,
    single_resource,
)
from srsg.greedy import compute_ibe_greedy, fraction_key, removal_log_csv

TAUS = [F(0), F(1, 4), F(1, 2), F(3, 5), F(1)]


def test_fraction_key_ordering():
    assert fraction_key(3, 0) > fraction_key(100, 1)
    assert fraction_key(2, 1) == fraction_key(4, 2)
    assert fraction_key(0, 0) == fraction_key(0, 5)
    assert fraction_key(1, 3) < fraction_key(1, 2)


def test_figure1_output_is_ibe():
    fig = figure1()
    s, log = compute_ibe_greedy(fig.instance)
    assert is_equilibrium(fig.instance, s, BLIND)
    assert [r.resource for r in log] == [0, 1]


def test_counterexample_not_iae():
    inst = greedy_iae_counterexample()
    s, log = compute_ibe_greedy(inst)
    assert s == (0, 1, 1, 1, 1, 1)
    assert utility(inst, 4, s) == F(2, 5)
    m = Move(4, 1, 0)
    assert is_improving(inst, m, s, AWARE)
    assert utility(inst, 4, (0, 1, 1, 1, 0, 1)) == F(1, 2)
    assert is_equilibrium(inst, s, BLIND)
    assert not is_equilibrium(inst, s, AWARE)


def test_single_resource():
    inst = single_resource(3, 2)
    s, log = compute_ibe_greedy(inst)
    assert s == (0,) * 5
    assert log[0].red_fraction == F(3, 5)


def test_empty_resources_logged_as_none():
    inst = Instance.build(1, 3, [(RED, (0,)), (BLUE, (1, 2)), (BLUE, (1, 2))])
    s, log = compute_ibe_greedy(inst)
    assert is_equilibrium(inst, s, BLIND)
    assert any(r.red_fraction is None for r in log)
    assert "order,resource,red_num,red_den" in removal_log_csv(log)


@pytest.mark.parametrize("seed", range(300))
def test_random_output_is_ibe_for_every_tau(seed):
    rng_k = 1 + seed % 6
    inst = random_instance(RandomParams(rng_k, 1 + seed % 7, 1 + (seed // 7) % 7,
                                        [0.2, 0.5, 0.9][seed % 3], F(1), seed))
    s, log = compute_ibe_greedy(inst)
    assert all(q in inst.access[a] for a, q in enumerate(s))
    for tau in TAUS:
        assert is_equilibrium(inst.with_tau(tau), s, BLIND)
    s_rev, _ = compute_ibe_greedy(inst, reverse_ties=True)
    assert is_equilibrium(inst, s_rev, BLIND)
    realised = [fraction(inst, r.resource, RED, s) for r in log]
    assert realised == [r.red_fraction for r in log]
    fracs = [x for x in realised if x is not None]
    assert all(a >= b for a, b in zip(fracs, fracs[1:]))
    assert sorted(r.resource for r in log) == list(inst.resources)


def test_zero_ratio_tie_break_is_harmless():
    # when the remaining ratios are all 0, either choice still yields an IBE
    for seed in range(200):
        inst = random_instance(RandomParams(4, 1, 5, 0.5, F(1), seed))
        for reverse in (False, True):
            s, _ = compute_ibe_greedy(inst, reverse_ties=reverse)
            assert is_equilibrium(inst, s, BLIND)
