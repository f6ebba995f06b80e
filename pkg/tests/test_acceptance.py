"""Exit criteria. Each test carries a ``criterion`` marker; the terminal
summary prints one PASS/FAIL line per criterion."""
import itertools
import time
from fractions import Fraction as F

import pytest

from srsg.core import BLUE, RED, Instance, social_welfare, utilities
from srsg.dynamics import (
    AWARE,
    BLIND,
    ROUND_ROBIN,
    Move,
    Termination,
    apply_move,
    improving_moves,
    is_beta_approx_iae,
    is_equilibrium,
    is_improving,
    potential_phi,
    run_dynamics,
    utility_vector_z,
    welfare_at_tau1,
)
from srsg.exact import (
    approx_iae_2,
    brute_force_optimum,
    decide_all_satisfied_agent_deg2,
    enumerate_equilibria,
    has_all_max_profile_brute,
    optimum_resource_deg2,
    welfare_delta_tau1,
)
from srsg.generators import (
    RandomParams,
    figure1,
    welfare_drop_configuration,
    poa_family,
    pos_gap_family,
    random_34_formula,
    random_agent_degree2,
    random_instance,
    random_profile,
    random_resource_degree2,
)
from srsg.greedy import compute_ibe_greedy
from srsg.metrics import poa_bound
from srsg.reductions import agents_per_variable, brute_force_sat, sat_to_srsg, verify_reduction

pytestmark = pytest.mark.acceptance

TAUS = [F(1, 4), F(1, 2), F(3, 5), F(1)]


def criterion(num, label):
    return pytest.mark.criterion(num, label)


def enumerable_instances(count=100, seed0=10_000):
    """Random instances with at most 8 agents and 3 resources."""
    out = []
    for i in range(count):
        seed = seed0 + i
        k = 1 + i % 3
        n_red = 1 + (i // 3) % 4
        n_blue = 1 + (i // 12) % 4
        p = [0.4, 0.6, 0.9][i % 3]
        out.append(random_instance(RandomParams(k, n_red, n_blue, p, F(1), seed)))
    return out


ENUMERABLE = enumerable_instances()


# independent oracles: recount everything from the profile

def oracle_counts(inst, s):
    table = {}
    for a, q in enumerate(s):
        r, b = table.get(q, (0, 0))
        table[q] = (r + 1, b) if inst.colors[a] is RED else (r, b + 1)
    return table


def oracle_phi(inst, s):
    return sum(max(r, b) for r, b in oracle_counts(inst, s).values())


def oracle_z(inst, s):
    table = oracle_counts(inst, s)
    us = []
    for a, q in enumerate(s):
        r, b = table[q]
        own = r if inst.colors[a] is RED else b
        us.append(min(F(own, r + b), inst.tau))
    return tuple(sorted(us, reverse=True))


def oracle_welfare_tau1(inst, s):
    return sum((F(r * r + b * b, r + b) for r, b in oracle_counts(inst, s).values()), F(0))


# --- 1 -------------------------------------------------------------------------

@criterion(1, "Figure 1 welfares 62/15, 41/10, 4 and equilibrium statuses")
def test_c01_figure1():
    t0 = time.perf_counter()
    fig = figure1()
    inst = fig.instance
    assert social_welfare(inst, fig.opt) == F(62, 15)
    assert social_welfare(inst, fig.iae) == F(41, 10)
    assert social_welfare(inst, fig.ibe) == F(4)
    assert not is_equilibrium(inst, fig.opt, AWARE)
    assert not is_equilibrium(inst, fig.opt, BLIND)
    assert is_equilibrium(inst, fig.iae, AWARE)
    assert is_equilibrium(inst, fig.ibe, BLIND)
    assert not is_equilibrium(inst, fig.ibe, AWARE)
    assert time.perf_counter() - t0 < 1


# --- 2 -------------------------------------------------------------------------

@criterion(2, "greedy output is an IBE on 1000 instances, removal log non-increasing")
def test_c02_greedy():
    t0 = time.perf_counter()
    for seed in range(1000):
        k = 1 + seed % 10
        n_red = 1 + (seed * 7) % 20
        n_blue = 1 + (seed * 13) % 20
        p = [0.15, 0.3, 0.5, 0.8][seed % 4]
        inst = random_instance(RandomParams(k, n_red, n_blue, p, TAUS[seed % 4], seed))
        assert inst.n_agents <= 40 and inst.n_resources <= 10
        s, log = compute_ibe_greedy(inst)
        assert is_equilibrium(inst, s, BLIND), seed
        fracs = [r.red_fraction for r in log if r.red_fraction is not None]
        assert all(a >= b for a, b in zip(fracs, fracs[1:])), seed
    assert time.perf_counter() - t0 < 30


# --- 3 -------------------------------------------------------------------------

@criterion(3, "impact-blind round-robin converges in <= n^5 steps, welfare at tau=1 rises > 1/n^4")
def test_c03_blind_dynamics():
    t0 = time.perf_counter()
    for seed in range(200):
        n_red = 1 + seed % 6
        n_blue = 1 + (seed // 6) % 6
        inst = random_instance(RandomParams(1 + seed % 5, n_red, n_blue, 0.6, TAUS[seed % 4], seed))
        n = inst.n_agents
        assert n <= 12
        trace = run_dynamics(inst, random_profile(inst, seed), BLIND, ROUND_ROBIN, n ** 5)
        assert trace.terminated is Termination.CONVERGED
        assert len(trace.steps) <= n ** 5
        s = trace.initial
        w = oracle_welfare_tau1(inst, s)
        for step in trace.steps:
            s = apply_move(s, step.move)
            w_next = oracle_welfare_tau1(inst, s)
            assert w_next - w > F(1, n ** 4)
            w = w_next
        assert is_equilibrium(inst, s, BLIND)
    assert time.perf_counter() - t0 < 60


# --- 4 -------------------------------------------------------------------------

@criterion(4, "potential never drops over >= 10^4 impact-aware moves; Z rises otherwise for tau <= 1/2")
def test_c04_potential():
    recorded = 0
    seed = 0
    while recorded < 10_000:
        tau = TAUS[seed % 4]
        inst = random_instance(RandomParams(2 + seed % 4, 2 + seed % 5, 2 + (seed // 5) % 5,
                                            0.7, tau, seed))
        s = random_profile(inst, seed)
        for _ in range(60):
            moves = improving_moves(inst, s, AWARE)
            if not moves:
                break
            phi, z = oracle_phi(inst, s), oracle_z(inst, s)
            assert potential_phi(inst, s) == phi and utility_vector_z(inst, s) == z
            for m, _gain in moves:
                t = apply_move(s, m)
                phi_t = oracle_phi(inst, t)
                assert phi_t >= phi
                if tau <= F(1, 2):
                    assert phi_t > phi or oracle_z(inst, t) > z
                recorded += 1
            s = apply_move(s, moves[seed % len(moves)][0])
        seed += 1
    assert recorded >= 10_000


# --- 5, 6, 7 ---------------------------------------------------------------------

@criterion(5, "IAE set within IBE set, IBE set nonempty (100 enumerable instances, all tau)")
def test_c05_containment():
    for base in ENUMERABLE:
        assert base.n_agents <= 8 and base.n_resources <= 3
        for tau in TAUS:
            inst = base.with_tau(tau)
            iae = set(enumerate_equilibria(inst, AWARE))
            ibe = set(enumerate_equilibria(inst, BLIND))
            assert ibe
            assert iae <= ibe


@criterion(6, "empirical PoA <= bound (both modes); poa_family(alpha=200) within 5% of bound")
def test_c06_poa():
    for base in ENUMERABLE:
        for tau in TAUS:
            inst = base.with_tau(tau)
            opt = social_welfare(inst, brute_force_optimum(inst))
            bound = poa_bound(tau)
            for mode in (AWARE, BLIND):
                eqs = enumerate_equilibria(inst, mode)
                if not eqs:
                    continue
                worst = min(social_welfare(inst, s) for s in eqs)
                assert opt <= bound * worst
    for tau, target in ((F(1), 2 * F(1)), (F(1, 2), 4 / (4 - F(1, 2)))):
        assert poa_bound(tau) == target
        fam = poa_family(tau, 200)
        assert is_equilibrium(fam.instance, fam.worst_iae, AWARE)
        ratio = social_welfare(fam.instance, fam.opt) / social_welfare(fam.instance, fam.worst_iae)
        assert abs(ratio - target) <= F(5, 100) * target


@criterion(7, "optimum is an IBE at tau=1; pos_gap_family(6,12) unique IBE, gap 17/132")
def test_c07_pos():
    for base in ENUMERABLE:
        inst = base.with_tau(1)
        s = brute_force_optimum(inst)
        assert is_equilibrium(inst, s, BLIND)
        eqs = enumerate_equilibria(inst, BLIND)
        best = max(social_welfare(inst, e) for e in eqs)
        assert best == social_welfare(inst, s)
    gap = pos_gap_family(6, 12)
    inst = gap.instance
    assert enumerate_equilibria(inst, BLIND) == [gap.ibe]
    assert not is_equilibrium(inst, gap.opt, BLIND)
    opt = social_welfare(inst, brute_force_optimum(inst))
    diff = opt - social_welfare(inst, gap.ibe)
    assert diff == F(17, 132)
    assert diff >= F(1, 22)


# --- 8 ---------------------------------------------------------------------------

def oracle_beta_ok(inst, s, beta):
    us = utilities(inst, s)
    for a in inst.agents:
        for q in inst.access[a]:
            if q == s[a]:
                continue
            post = utilities(inst, apply_move(s, Move(a, s[a], q)))[a]
            if post > us[a] and post >= beta * us[a]:
                return False
    return True


@criterion(8, "approx_iae_2 output is a 2-approximate IAE on 500 instances")
def test_c08_approx():
    for seed in range(500):
        tau = TAUS[seed % 4]
        n_red = 1 + seed % 6
        n_blue = 1 + (seed // 6) % 6
        inst = random_instance(RandomParams(1 + seed % 5, n_red, n_blue,
                                            [0.3, 0.6, 0.9][seed % 3], tau, seed))
        assert inst.n_agents <= 12
        s = approx_iae_2(inst)
        assert is_beta_approx_iae(inst, s, 2), seed
        assert oracle_beta_ok(inst, s, 2), seed


# --- 9 ---------------------------------------------------------------------------

@criterion(9, "degree-2 solvers agree with brute force (200 + 200 instances)")
def test_c09_tractable():
    for seed in range(200):
        inst = random_agent_degree2(2 + seed % 4, 1 + seed % 5, 1 + (seed // 5) % 5, 1, seed)
        s = decide_all_satisfied_agent_deg2(inst)
        assert (s is not None) == has_all_max_profile_brute(inst)
        if s is not None:
            assert all(u == 1 for u in utilities(inst, s))
    for seed in range(200):
        tau = TAUS[seed % 4]
        n_red, n_blue = 1 + seed % 5, 1 + (seed // 5) % 5
        k = (n_red + n_blue + 1) // 2 + seed % 3
        inst = random_resource_degree2(k, n_red, n_blue, tau, seed)
        s = optimum_resource_deg2(inst)
        best = max(social_welfare(inst, p) for p in itertools.product(*inst.access))
        assert social_welfare(inst, s) == best


# --- 10 --------------------------------------------------------------------------

@criterion(10, "reduction verified on 30 (3,4)-formulas for tau in {1, 3/5, 1/2}")
def test_c10_reduction():
    outcomes = set()
    for seed in range(30):
        nv = 1 + seed % 4
        phi = random_34_formula(nv, 2 + seed % 6, seed)
        assert phi.is_34() and phi.num_vars <= 4
        outcomes.add(brute_force_sat(phi) is not None)
        for tau in (F(1), F(3, 5), F(1, 2)):
            inst = sat_to_srsg(phi, tau)
            v = agents_per_variable(tau)
            assert v == 2 * -(-4 // tau)
            assert inst.n_red == v * nv and inst.n_blue == len(phi.clauses)
            for i in range(nv):
                assert all(inst.access[a] == (2 * i, 2 * i + 1) for a in range(i * v, (i + 1) * v))
            assert verify_reduction(phi, tau)
    assert outcomes == {True, False}


# --- 11 --------------------------------------------------------------------------

@criterion(11, "welfare arithmetic gives -81/550; a genuine welfare-decreasing IA move exists")
def test_c11_welfare_decrease():
    r1, b1, r2, b2 = welfare_drop_configuration()
    assert welfare_delta_tau1(r1, b1, r2, b2) == F(-81, 550)
    before = F(r1 * r1 + b1 * b1, r1 + b1) + F(r2 * r2 + b2 * b2, r2 + b2)
    after = (F((r1 - 1) ** 2 + b1 * b1, r1 - 1 + b1)
             + F((r2 + 1) ** 2 + b2 * b2, r2 + 1 + b2))
    assert after - before == F(-81, 550)
    # the stated move is not strictly improving for the mover
    assert F(r2 + 1, r2 + 1 + b2) <= F(r1, r1 + b1)

    found = []
    for r1, b1, r2, b2 in itertools.product(range(1, 6), range(0, 6), range(0, 6), range(0, 6)):
        if r2 + b2 == 0:
            continue
        agents = ([(RED, (0, 1))] + [(RED, (0,))] * (r1 - 1) + [(BLUE, (0,))] * b1
                  + [(RED, (1,))] * r2 + [(BLUE, (1,))] * b2)
        colors = {c for c, _ in agents}
        if colors != {RED, BLUE}:
            continue
        inst = Instance.build(1, 2, agents)
        s = tuple(acc[0] for _, acc in agents)
        m = Move(0, 0, 1)
        t = apply_move(s, m)
        if is_improving(inst, m, s, AWARE) and social_welfare(inst, t) < social_welfare(inst, s):
            found.append((r1, b1, r2, b2))
    assert found
