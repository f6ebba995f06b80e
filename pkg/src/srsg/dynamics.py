"""Improving moves, equilibrium checks, dynamics engines and potentials."""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .core import (
    RED,
    Instance,
    InfeasibleProfile,
    all_counts,
    capped,
    check_profile,
    resource_welfare,
    utilities,
)


class MoveMode(enum.Enum):
    AWARE = "aware"
    BLIND = "blind"


AWARE = MoveMode.AWARE
BLIND = MoveMode.BLIND


class Move(NamedTuple):
    agent: int
    source: int
    target: int


@dataclass(frozen=True)
class Scheduler:
    """Activation policy: ``round_robin``, ``random`` (seeded) or ``best_gain``."""

    kind: str = "round_robin"
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("round_robin", "random", "best_gain"):
            raise ValueError(f"unknown scheduler {self.kind!r}")

    @classmethod
    def random(cls, seed: int) -> "Scheduler":
        return cls("random", seed)

    def describe(self) -> str:
        return {"round_robin": "rr", "random": f"rand:{self.seed}", "best_gain": "best"}[self.kind]


ROUND_ROBIN = Scheduler("round_robin")
BEST_GAIN = Scheduler("best_gain")


class Termination(enum.Enum):
    CONVERGED = "Converged"
    STEP_LIMIT = "StepLimit"


class Step(NamedTuple):
    move: Move
    welfare: Fraction
    phi: int


@dataclass
class DynamicsTrace:
    initial: tuple
    steps: list = field(default_factory=list)
    terminated: Termination = Termination.CONVERGED

    @property
    def final(self) -> tuple:
        s = list(self.initial)
        for step in self.steps:
            s[step.move.agent] = step.move.target
        return tuple(s)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "agent", "from", "to", "welfare_num", "welfare_den", "phi"])
        for i, st in enumerate(self.steps, start=1):
            w.writerow([i, st.move.agent, st.move.source, st.move.target,
                        st.welfare.numerator, st.welfare.denominator, st.phi])
        return buf.getvalue()


# --- move evaluation on count tables ---------------------------------------

def _own(table, q, is_red):
    red, blue = table[q]
    return (red if is_red else blue), red + blue


def _current_utility(instance, table, a, q):
    own, total = _own(table, q, instance.colors[a] is RED)
    return capped(own, total, instance.tau)


def _perceived(instance, table, a, target, mode):
    """Utility agent ``a`` expects at ``target``; ``None`` for an empty target in blind mode."""
    own, total = _own(table, target, instance.colors[a] is RED)
    if mode is AWARE:
        return capped(own + 1, total + 1, instance.tau)
    if total == 0:
        return None
    return capped(own, total, instance.tau)


def _improves(instance, table, a, source, target, mode, current=None):
    if current is None:
        current = _current_utility(instance, table, a, source)
    value = _perceived(instance, table, a, target, mode)
    if value is None:
        return current < instance.tau, instance.tau - current
    return value > current, value - current


def _check_move(instance, m, s):
    if s[m.agent] != m.source:
        raise InfeasibleProfile(f"agent {m.agent} is not on resource {m.source}")
    if m.target not in instance.access[m.agent] or m.target == m.source:
        raise InfeasibleProfile(f"agent {m.agent} cannot move to resource {m.target}")


def is_improving(instance: Instance, m: Move, s: Sequence[int], mode: MoveMode) -> bool:
    _check_move(instance, m, s)
    table = all_counts(instance, s)
    return _improves(instance, table, m.agent, m.source, m.target, mode)[0]


def improving_moves(instance: Instance, s: Sequence[int], mode: MoveMode, table=None) -> list:
    """All ``(move, gain)`` pairs improving under ``mode``, by agent then target id."""
    if table is None:
        table = all_counts(instance, s)
    out = []
    for a in instance.agents:
        out.extend(_agent_moves(instance, table, s, a, mode))
    return out


def _agent_moves(instance, table, s, a, mode):
    q = s[a]
    current = _current_utility(instance, table, a, q)
    if current == instance.tau:
        return []
    out = []
    for t in instance.access[a]:
        if t == q:
            continue
        ok, gain = _improves(instance, table, a, q, t, mode, current)
        if ok:
            out.append((Move(a, q, t), gain))
    return out


def find_improving_move(instance: Instance, s: Sequence[int], mode: MoveMode,
                        sched: Scheduler = ROUND_ROBIN, *, start: int = 0,
                        rng: Optional[np.random.Generator] = None,
                        table=None) -> Optional[Move]:
    """Pick one improving move per the scheduler, or ``None`` at equilibrium.

    Round-robin scans agents cyclically from ``start`` and returns the
    lowest-id target of the first agent that can improve. ``rng`` drives the
    random scheduler (a fresh generator seeded with ``sched.seed`` if omitted).
    """
    if table is None:
        table = all_counts(instance, s)
    n = instance.n_agents
    if sched.kind == "round_robin":
        for i in range(n):
            moves = _agent_moves(instance, table, s, (start + i) % n, mode)
            if moves:
                return moves[0][0]
        return None
    moves = improving_moves(instance, s, mode, table)
    if not moves:
        return None
    if sched.kind == "best_gain":
        best = max(g for _, g in moves)
        return next(m for m, g in moves if g == best)
    if rng is None:
        rng = np.random.default_rng(sched.seed)
    return moves[int(rng.integers(len(moves)))][0]


def is_equilibrium(instance: Instance, s: Sequence[int], mode: MoveMode) -> bool:
    return find_improving_move(instance, s, mode) is None


def witness_move(instance: Instance, s: Sequence[int], mode: MoveMode) -> Optional[Move]:
    return find_improving_move(instance, s, mode)


def is_beta_approx_iae(instance: Instance, s: Sequence[int], beta) -> bool:
    """True iff no impact-aware improving move reaches ``beta`` times the current utility.

    An agent at utility 0 must have no improving move at all.
    """
    beta = Fraction(beta)
    if beta < 1:
        raise ValueError("beta must be at least 1")
    table = all_counts(instance, s)
    for m, gain in improving_moves(instance, s, AWARE, table):
        current = _current_utility(instance, table, m.agent, m.source)
        if current + gain >= beta * current:
            return False
    return True


def run_dynamics(instance: Instance, init: Sequence[int], mode: MoveMode,
                 sched: Scheduler = ROUND_ROBIN, max_steps: int = 10**6) -> DynamicsTrace:
    """Apply improving moves until none is left or ``max_steps`` moves were made."""
    if max_steps <= 0:
        raise ValueError("max_steps must be positive")
    s = list(check_profile(instance, init))
    trace = DynamicsTrace(initial=tuple(s))
    table = all_counts(instance, s)
    tau = instance.tau
    welfare = sum((resource_welfare(r, b, tau) for r, b in table), Fraction(0))
    phi = sum(max(r, b) for r, b in table)
    rng = np.random.default_rng(sched.seed) if sched.kind == "random" else None
    start = 0
    while True:
        m = find_improving_move(instance, s, mode, sched, start=start, rng=rng, table=table)
        if m is None:
            trace.terminated = Termination.CONVERGED
            return trace
        if len(trace.steps) >= max_steps:
            trace.terminated = Termination.STEP_LIMIT
            return trace
        col = 0 if instance.colors[m.agent] is RED else 1
        for q in (m.source, m.target):
            welfare -= resource_welfare(table[q][0], table[q][1], tau)
            phi -= max(table[q])
        table[m.source][col] -= 1
        table[m.target][col] += 1
        for q in (m.source, m.target):
            welfare += resource_welfare(table[q][0], table[q][1], tau)
            phi += max(table[q])
        s[m.agent] = m.target
        trace.steps.append(Step(m, welfare, phi))
        start = (m.agent + 1) % instance.n_agents


# --- potentials --------------------------------------------------------------

def potential_phi(instance: Instance, s: Sequence[int]) -> int:
    """Sum over resources of the majority color's count."""
    return sum(max(r, b) for r, b in all_counts(instance, s))


def utility_vector_z(instance: Instance, s: Sequence[int]) -> tuple:
    return tuple(sorted(utilities(instance, s), reverse=True))


def welfare_at_tau1(instance: Instance, s: Sequence[int]) -> Fraction:
    return sum((resource_welfare(r, b, Fraction(1)) for r, b in all_counts(instance, s)),
               Fraction(0))


def apply_move(s: Sequence[int], m: Move) -> tuple:
    out = list(s)
    out[m.agent] = m.target
    return tuple(out)
