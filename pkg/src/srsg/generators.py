"""Instance factories: fixtures with known properties and seeded random families.

Random instances use numpy's ``default_rng`` (PCG64) seeded with the given
integer. Within each agent, resources are drawn in ascending id order, red
agents come first, and a degree-0 agent receives one uniformly random
resource, so the text output for a seed is stable across versions of this
package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import BLUE, RED, Instance
from .dynamics import AWARE, is_equilibrium
from .reductions import CnfFormula


@dataclass(frozen=True)
class Figure1:
    instance: Instance
    opt: tuple
    iae: tuple
    ibe: tuple


def figure1(tau=Fraction(3, 5)) -> Figure1:
    """Two resources, four red and four blue agents.

    Agents 0/4 (red/blue) only reach q1, agents 1/5 only reach q2, and the
    remaining two agents of each color reach both.
    """
    flexible = (0, 1)
    agents = [(RED, (0,)), (RED, (1,)), (RED, flexible), (RED, flexible),
              (BLUE, (0,)), (BLUE, (1,)), (BLUE, flexible), (BLUE, flexible)]
    inst = Instance.build(tau, 2, agents)
    return Figure1(
        instance=inst,
        opt=(0, 1, 1, 1, 0, 1, 0, 1),  # q1: 1R 2B, q2: 3R 2B
        iae=(0, 1, 0, 0, 0, 1, 1, 1),  # q1: 3R 1B, q2: 1R 3B
        ibe=(0, 1, 0, 1, 0, 1, 0, 1),  # 2R 2B on both
    )


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class PoAFamily:
    instance: Instance
    worst_iae: tuple
    opt: tuple
    sizes: dict


def _branch_high(tau: Fraction) -> bool:
    """True iff tau >= 2 - sqrt(2), decided without irrationals."""
    return tau * tau - 4 * tau + 2 <= 0


def poa_family(tau, alpha: int) -> PoAFamily:
    """Three-resource instance whose bad equilibrium approaches the PoA bound.

    Red ``R_x`` reach q1/q3, blue ``B_x`` reach q1/q2, and ``ceil(2/tau)``
    agents of each color (``R_z``, ``B_z``) reach q2/q3. For ``tau >= 2-sqrt 2``
    the two ``x`` groups are equal (average utility 1/2 on q1); below that
    the blue share on q1 is ``tau/2``. Group sizes are rounded to the nearest
    integer.
    """
    tau = Fraction(tau)
    if tau <= 0:
        raise GeneratorError("tau must be positive")
    if alpha < 1:
        raise GeneratorError("alpha must be positive")
    if _branch_high(tau):
        n_rx = n_bx = round(Fraction(alpha, 2))
    else:
        n_rx = round(alpha * (2 - tau) / 2)
        n_bx = round(alpha * tau / 2)
    if n_rx < 1 or n_bx < 1:
        raise GeneratorError(f"alpha={alpha} too small for tau={tau}")
    nz = math.ceil(2 / tau)
    agents = ([(RED, (0, 2))] * n_rx + [(BLUE, (0, 1))] * n_bx
              + [(RED, (1, 2))] * nz + [(BLUE, (1, 2))] * nz)
    inst = Instance.build(tau, 3, agents)
    worst = (0,) * (n_rx + n_bx) + (1,) * nz + (2,) * nz
    opt = (2,) * n_rx + (1,) * n_bx + (2,) * nz + (1,) * nz
    if not is_equilibrium(inst, worst, AWARE):
        raise GeneratorError(f"alpha={alpha} too small: bad profile is not stable at tau={tau}")
    sizes = {"R_x": n_rx, "B_x": n_bx, "R_z": nz, "B_z": nz}
    return PoAFamily(inst, worst, opt, sizes)


@dataclass(frozen=True)
class PoSGap:
    instance: Instance
    opt: tuple
    ibe: tuple
    mover: int


def pos_gap_family(x: int, y: int) -> PoSGap:
    """Instance whose unique impact-blind equilibrium is not optimal, at tau = x/y.

    q1 holds ``y - x + 1`` red and ``x - 1`` blue agents, q2 one blue agent.
    Only the mover (the last blue agent on q1) can also reach q2.
    """
    if x < 6 or 2 * x > y:
        raise GeneratorError("requires x >= 6 and x/y <= 1/2")
    n_red, n_blue_q1 = y - x + 1, x - 1
    agents = [(RED, (0,))] * n_red + [(BLUE, (0,))] * (n_blue_q1 - 1)
    agents += [(BLUE, (0, 1)), (BLUE, (1,))]
    inst = Instance.build(Fraction(x, y), 2, agents)
    mover = n_red + n_blue_q1 - 1
    opt = (0,) * (n_red + n_blue_q1) + (1,)
    ibe = opt[:mover] + (1, 1)
    return PoSGap(inst, opt, ibe, mover)


def greedy_iae_counterexample() -> Instance:
    """Greedy yields a profile where agent 4 (blue) has an impact-aware move to q1."""
    agents = [(RED, (0,)), (RED, (1,)), (RED, (1,)), (RED, (1,)),
              (BLUE, (0, 1)), (BLUE, (1,))]
    return Instance.build(1, 2, agents)


def welfare_drop_configuration():
    """Counts ``(r1, b1, r2, b2)`` at tau = 1: a red agent leaving 19 red / 81 blue
    for 1 red / 9 blue. Welfare drops by 81/550, but the mover goes from
    19/100 to 2/11, so the move is not improving."""
    return 19, 81, 1, 9


def single_resource(n_red: int, n_blue: int, tau=1) -> Instance:
    return Instance.build(tau, 1, [(RED, (0,))] * n_red + [(BLUE, (0,))] * n_blue)


# --- random families ---------------------------------------------------------

@dataclass(frozen=True)
class RandomParams:
    n_resources: int
    n_red: int
    n_blue: int
    edge_prob: float = 0.5
    tau: Fraction = Fraction(1)
    seed: int = 0

    def __post_init__(self):
        if self.n_resources < 1:
            raise GeneratorError("n_resources must be positive")
        if self.n_red < 1 or self.n_blue < 1:
            raise GeneratorError("both colors required")
        if not 0 < self.edge_prob <= 1:
            raise GeneratorError("edge_prob must lie in (0, 1]")
        if not 0 <= Fraction(self.tau) <= 1:
            raise GeneratorError("tau must lie in [0, 1]")


def _colors(n_red, n_blue):
    return [RED] * n_red + [BLUE] * n_blue


def random_instance(params: RandomParams) -> Instance:
    rng = np.random.default_rng(params.seed)
    agents = []
    for color in _colors(params.n_red, params.n_blue):
        draws = rng.random(params.n_resources)
        acc = [q for q in range(params.n_resources) if draws[q] < params.edge_prob]
        if not acc:
            acc = [int(rng.integers(params.n_resources))]
        agents.append((color, acc))
    return Instance.build(Fraction(params.tau), params.n_resources, agents)


def random_agent_degree2(n_resources: int, n_red: int, n_blue: int, tau=1, seed: int = 0,
                         p_single: float = 0.2) -> Instance:
    """Every agent reaches one or two resources."""
    if n_resources < 2:
        raise GeneratorError("need at least two resources")
    rng = np.random.default_rng(seed)
    agents = []
    for color in _colors(n_red, n_blue):
        if rng.random() < p_single:
            acc = [int(rng.integers(n_resources))]
        else:
            acc = [int(q) for q in rng.choice(n_resources, size=2, replace=False)]
        agents.append((color, acc))
    return Instance.build(tau, n_resources, agents)


def random_resource_degree2(n_resources: int, n_red: int, n_blue: int, tau=1,
                            seed: int = 0, extra_prob: float = 0.6) -> Instance:
    """Every resource is reachable by at most two agents."""
    n = n_red + n_blue
    if 2 * n_resources < n:
        raise GeneratorError("too few resources for resource degree <= 2")
    rng = np.random.default_rng(seed)
    load = [0] * n_resources
    access = [set() for _ in range(n)]
    for a in rng.permutation(n):
        free = [q for q in range(n_resources) if load[q] < 2]
        q = free[int(rng.integers(len(free)))]
        access[a].add(q)
        load[q] += 1
    for a in range(n):
        if rng.random() < extra_prob:
            free = [q for q in range(n_resources) if load[q] < 2 and q not in access[a]]
            if free:
                q = free[int(rng.integers(len(free)))]
                access[a].add(q)
                load[q] += 1
    return Instance.build(tau, n_resources, zip(_colors(n_red, n_blue), access))


def random_profile(instance: Instance, seed: int = 0) -> tuple:
    rng = np.random.default_rng(seed)
    return tuple(acc[int(rng.integers(len(acc)))] for acc in instance.access)


def random_34_formula(num_vars: int, num_clauses: int, seed: int = 0) -> CnfFormula:
    """Random clauses of 1-3 distinct variables, each variable in at most four clauses."""
    rng = np.random.default_rng(seed)
    occ = [0] * num_vars
    clauses = []
    for _ in range(num_clauses):
        free = [v for v in range(num_vars) if occ[v] < 4]
        if not free:
            break
        width = int(rng.integers(1, min(3, len(free)) + 1))
        chosen = rng.choice(free, size=width, replace=False)
        clause = []
        for v in sorted(int(c) for c in chosen):
            occ[v] += 1
            clause.append((v + 1) * (1 if rng.random() < 0.5 else -1))
        clauses.append(clause)
    return CnfFormula(num_vars, clauses)
