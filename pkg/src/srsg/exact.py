"""Exact solvers: enumeration oracles, the two polynomial special cases and
the 2-approximate impact-aware equilibrium.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Optional, Sequence

from .core import RED, Instance, all_counts, check_profile, profile_space_size, resource_welfare
from .dynamics import MoveMode, is_equilibrium
from .greedy import compute_ibe_greedy
from .reductions import Unsatisfiable, solve_2sat


class BudgetExceeded(RuntimeError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class EnumerationBudget:
    max_profiles: int = 10**7

    def require(self, size: int) -> None:
        if size > self.max_profiles:
            raise BudgetExceeded(f"{size} profiles exceed budget of {self.max_profiles}")


DEFAULT_BUDGET = EnumerationBudget()


def iter_profiles(instance: Instance) -> Iterable[tuple]:
    """All feasible profiles, lexicographic in (agent id, resource id)."""
    return itertools.product(*instance.access)


def _welfare(instance, s):
    return sum((resource_welfare(r, b, instance.tau) for r, b in all_counts(instance, s)),
               Fraction(0))


def brute_force_optimum(instance: Instance, budget: EnumerationBudget = DEFAULT_BUDGET) -> tuple:
    """Welfare-maximising profile; ties go to the lexicographically smallest."""
    budget.require(profile_space_size(instance))
    best, best_w = None, None
    for s in iter_profiles(instance):
        w = _welfare(instance, s)
        if best_w is None or w > best_w:
            best, best_w = s, w
    return best


def enumerate_equilibria(instance: Instance, mode: MoveMode,
                         budget: EnumerationBudget = DEFAULT_BUDGET) -> list:
    budget.require(profile_space_size(instance))
    return [s for s in iter_profiles(instance) if is_equilibrium(instance, s, mode)]


# --- all agents at maximum utility -----------------------------------------

def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _resource_ok(red: int, blue: int, tau: Fraction) -> bool:
    total = red + blue
    return (red == 0 or Fraction(red, total) >= tau) and (blue == 0 or Fraction(blue, total) >= tau)


def find_all_max_profile(instance: Instance,
                         budget: EnumerationBudget = DEFAULT_BUDGET) -> Optional[tuple]:
    """Exhaustively search for a profile giving every agent utility tau.

    Agents with equal color and access set are interchangeable, so the
    search runs over how many of each such class use each resource. A
    resource is checked once every class touching it is placed; for
    ``tau > 1/2`` a resource holding both colors is rejected at once.
    ``budget`` caps the number of search nodes.
    """
    tau = instance.tau
    groups = {}
    for a in instance.agents:
        groups.setdefault((instance.colors[a], instance.access[a]), []).append(a)
    classes = _closing_order(list(groups.items()))
    last_touch = {}
    for i, ((_, acc), _) in enumerate(classes):
        for q in acc:
            last_touch[q] = i
    closes = [[q for q, i in last_touch.items() if i == idx] for idx in range(len(classes))]
    strict = tau > Fraction(1, 2)
    table = [[0, 0] for _ in instance.resources]
    choice = [None] * len(classes)
    nodes = 0

    def dfs(idx):
        nonlocal nodes
        if idx == len(classes):
            return True
        (color, acc), members = classes[idx]
        col = 0 if color is RED else 1
        for comp in _compositions(len(members), len(acc)):
            nodes += 1
            if nodes > budget.max_profiles:
                raise BudgetExceeded(f"search exceeded {budget.max_profiles} nodes")
            for q, c in zip(acc, comp):
                table[q][col] += c
            ok = all(_resource_ok(*table[q], tau) for q in closes[idx])
            if ok and strict:
                ok = all(not (table[q][0] and table[q][1]) for q in acc)
            if ok:
                choice[idx] = comp
                if dfs(idx + 1):
                    return True
            for q, c in zip(acc, comp):
                table[q][col] -= c
        return False

    if not dfs(0):
        return None
    s = [None] * instance.n_agents
    for ((_, acc), members), comp in zip(classes, choice):
        it = iter(members)
        for q, c in zip(acc, comp):
            for _ in range(c):
                s[next(it)] = q
    return tuple(s)


def _closing_order(classes):
    """Order classes so that resources are closed as early as possible."""
    remaining = list(classes)
    touched = set()
    count = {}
    for (_, acc), _ in classes:
        for q in acc:
            count[q] = count.get(q, 0) + 1
    order = []
    while remaining:
        def score(item):
            (_, acc), _ = item
            opens = sum(1 for q in acc if q not in touched)
            closes = sum(1 for q in acc if count[q] == 1)
            return (opens, -closes)
        best = min(remaining, key=score)
        remaining.remove(best)
        order.append(best)
        for q in best[0][1]:
            touched.add(q)
            count[q] -= 1
    return order


def has_all_max_profile_brute(instance: Instance,
                              budget: EnumerationBudget = DEFAULT_BUDGET) -> bool:
    """Plain enumeration counterpart of :func:`find_all_max_profile`."""
    budget.require(profile_space_size(instance))
    return any(all(_resource_ok(r, b, instance.tau) for r, b in all_counts(instance, s))
               for s in iter_profiles(instance))


# --- polynomial special cases -------------------------------------------------

def decide_all_satisfied_agent_deg2(instance: Instance) -> Optional[tuple]:
    """Monochromatic profile for ``tau = 1`` when every agent has degree <= 2.

    One boolean per resource ("used by red only"); a red agent needs one of
    its resources red, a blue agent one of its own blue. Returns ``None`` if
    unsatisfiable.
    """
    if instance.tau != 1:
        raise PreconditionError("tau must be 1")
    if any(len(acc) > 2 for acc in instance.access):
        raise PreconditionError("every agent must have degree at most 2")
    clauses = []
    for a in instance.agents:
        sign = 1 if instance.colors[a] is RED else -1
        clauses.append([sign * (q + 1) for q in instance.access[a]])
    try:
        values = solve_2sat(instance.n_resources, clauses)
    except Unsatisfiable:
        return None
    s = []
    for a in instance.agents:
        want = instance.colors[a] is RED
        s.append(next(q for q in instance.access[a] if values[q] == want))
    return tuple(s)


def optimum_resource_deg2(instance: Instance) -> tuple:
    """Social optimum when every resource is accessible by at most two agents."""
    users = [instance.users(q) for q in instance.resources]
    if any(len(u) > 2 for u in users):
        raise PreconditionError("every resource must have degree at most 2")
    s = [None] * instance.n_agents
    alive = set(instance.resources)
    changed = True
    while changed:
        changed = False
        for q in sorted(alive):
            left = [a for a in users[q] if s[a] is None]
            if len({instance.colors[a] for a in left}) <= 1:
                for a in left:
                    s[a] = q
                alive.discard(q)
                changed = True
    agents = [a for a in instance.agents if s[a] is None]
    resources = sorted(alive)
    edges = [(a, q) for a in agents for q in instance.access[a] if q in alive]
    matching = max_bipartite_matching(agents, resources, edges)
    for a in agents:
        s[a] = matching.get(a, min(q for q in instance.access[a] if q in alive))
    return tuple(s)


def max_bipartite_matching(left: Sequence[Hashable], right: Sequence[Hashable],
                           edges: Iterable[tuple]) -> dict:
    """Hopcroft-Karp maximum-cardinality matching, returned as ``{left: right}``."""
    adj = {u: [] for u in left}
    right_set = set(right)
    for u, v in edges:
        if u in adj and v in right_set and v not in adj[u]:
            adj[u].append(v)
    match_l = {u: None for u in left}
    match_r = {v: None for v in right}
    inf = float("inf")

    def bfs():
        dist = {}
        queue = deque()
        for u in left:
            if match_l[u] is None:
                dist[u] = 0
                queue.append(u)
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w is None:
                    found = True
                elif w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found, dist

    def dfs(u, dist):
        for v in adj[u]:
            w = match_r[v]
            if w is None or (dist.get(w, inf) == dist[u] + 1 and dfs(w, dist)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = inf
        return False

    while True:
        found, dist = bfs()
        if not found:
            break
        for u in left:
            if match_l[u] is None:
                dfs(u, dist)
    return {u: v for u, v in match_l.items() if v is not None}


# --- 2-approximate impact-aware equilibrium -------------------------------------

def welfare_ascent(instance: Instance, init: Optional[Sequence[int]] = None):
    """Apply the single-agent deviation with the largest gain in welfare at
    ``tau = 1`` until none is positive; returns ``(profile, steps)``."""
    one = Fraction(1)
    if init is None:
        init = compute_ibe_greedy(instance)[0]
    s = list(check_profile(instance, init))
    table = all_counts(instance, s)
    steps = 0
    while True:
        best = None
        for a in instance.agents:
            col = 0 if instance.colors[a] is RED else 1
            q = s[a]
            before_q = resource_welfare(table[q][0], table[q][1], one)
            rq = list(table[q])
            rq[col] -= 1
            loss = before_q - resource_welfare(rq[0], rq[1], one)
            for t in instance.access[a]:
                if t == q:
                    continue
                rt = list(table[t])
                rt[col] += 1
                gain = resource_welfare(rt[0], rt[1], one) - resource_welfare(*table[t], one) - loss
                if gain > 0 and (best is None or gain > best[0]):
                    best = (gain, a, t)
        if best is None:
            return tuple(s), steps
        _, a, t = best
        col = 0 if instance.colors[a] is RED else 1
        table[s[a]][col] -= 1
        table[t][col] += 1
        s[a] = t
        steps += 1


def approx_iae_2(instance: Instance) -> tuple:
    """Profile from which no impact-aware move doubles any agent's utility."""
    return welfare_ascent(instance)[0]


def welfare_delta_tau1(r1: int, b1: int, r2: int, b2: int) -> Fraction:
    """Exact change in welfare at tau = 1 when a red agent leaves a resource
    with counts ``(r1, b1)`` for one with counts ``(r2, b2)``."""
    one = Fraction(1)
    return (resource_welfare(r1 - 1, b1, one) + resource_welfare(r2 + 1, b2, one)
            - resource_welfare(r1, b1, one) - resource_welfare(r2, b2, one))
