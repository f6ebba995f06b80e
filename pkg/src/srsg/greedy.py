"""Greedy direct construction of an impact-blind equilibrium.

Resources are removed one at a time in order of the ratio between the red
agents that could still be sent there and the blue agents already forced
there. Each removal takes every still-unassigned red agent that can access
the resource; a blue agent is forced onto a resource once it is the last
one it has left. The result never depends on the threshold.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .core import BLUE, RED, Instance


class FractionKey(NamedTuple):
    """Orderable stand-in for ``red / blue``; ``x / 0`` with ``x > 0`` is infinite."""

    infinite: bool
    value: Fraction


def fraction_key(assignable_red: int, assigned_blue: int) -> FractionKey:
    if assigned_blue == 0:
        if assignable_red > 0:
            return FractionKey(True, Fraction(0))
        return FractionKey(False, Fraction(0))
    return FractionKey(False, Fraction(assignable_red, assigned_blue))


class Removal(NamedTuple):
    resource: int
    red_fraction: Optional[Fraction]  # None if the resource ends up empty


@dataclass
class GreedyState:
    remaining: set
    assigned_blue: list
    assignable_red: list
    degree: list  # remaining accessible resources per unassigned agent
    removal_log: list = field(default_factory=list)


def compute_ibe_greedy(instance: Instance, reverse_ties: bool = False):
    """Return ``(profile, removal_log)``.

    Ties in the ratio go to the lower resource id (higher with
    ``reverse_ties``); forced blue agents are processed in ascending id.
    """
    n, k = instance.n_agents, instance.n_resources
    users = [[] for _ in range(k)]
    for a in instance.agents:
        for q in instance.access[a]:
            users[q].append(a)
    assignment = [None] * n
    state = GreedyState(
        remaining=set(range(k)),
        assigned_blue=[0] * k,
        assignable_red=[sum(1 for a in users[q] if instance.colors[a] is RED) for q in range(k)],
        degree=[len(instance.access[a]) for a in range(n)],
    )
    version = [0] * k
    heap = []

    def push(q):
        version[q] += 1
        key = fraction_key(state.assignable_red[q], state.assigned_blue[q])
        heapq.heappush(heap, (not key.infinite, -key.value, -q if reverse_ties else q, q, version[q]))

    forced = sorted(a for a in instance.agents
                    if instance.colors[a] is BLUE and state.degree[a] == 1)
    for q in range(k):
        push(q)

    while state.remaining:
        for a in forced:
            if assignment[a] is None:
                (q,) = [x for x in instance.access[a] if x in state.remaining]
                assignment[a] = q
                state.assigned_blue[q] += 1
                push(q)
        forced = []
        while True:
            _, _, _, q, ver = heapq.heappop(heap)
            if q in state.remaining and ver == version[q]:
                break
        red = 0
        for a in users[q]:
            if instance.colors[a] is RED and assignment[a] is None:
                assignment[a] = q
                red += 1
                for other in instance.access[a]:
                    if other != q and other in state.remaining:
                        state.assignable_red[other] -= 1
                        push(other)
        state.remaining.discard(q)
        blue = state.assigned_blue[q]
        frac = Fraction(red, red + blue) if red + blue else None
        state.removal_log.append(Removal(q, frac))
        for a in users[q]:
            if assignment[a] is None:
                state.degree[a] -= 1
                if state.degree[a] == 1:
                    forced.append(a)
                elif state.degree[a] == 0:
                    # unreachable: a blue agent is forced before its last resource goes
                    assignment[a] = q
        forced.sort()

    return tuple(assignment), state.removal_log


def removal_log_csv(log) -> str:
    lines = ["order,resource,red_num,red_den"]
    for i, (q, frac) in enumerate(log, start=1):
        num, den = ("", "") if frac is None else (frac.numerator, frac.denominator)
        lines.append(f"{i},{q},{num},{den}")
    return "\n".join(lines) + "\n"
