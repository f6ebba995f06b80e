"""(3,4)-SAT hardness gadget, 2SAT solving and small exhaustive SAT checks."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import BLUE, RED, Instance, InvalidInstance


class Unsatisfiable(Exception):
    """No satisfying assignment exists."""


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 1:
            raise ValueError("num_vars must be positive")
        for c in self.clauses:
            if not 1 <= len(c) <= 3:
                raise ValueError(f"clause {c} must have 1 to 3 literals")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range")

    def occurrences(self) -> list:
        occ = [0] * (self.num_vars + 1)
        for c in self.clauses:
            for v in {abs(lit) for lit in c}:
                occ[v] += 1
        return occ[1:]

    def is_34(self) -> bool:
        """Each clause has at most 3 literals and each variable occurs in at most 4 clauses."""
        return all(o <= 4 for o in self.occurrences())

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        """``assignment[i]`` is the value of variable ``i + 1``."""
        return all(any(assignment[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)


def parse_dimacs(text: str, check_34: bool = True) -> CnfFormula:
    num_vars = None
    clauses, current = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: malformed problem line")
            num_vars = int(parts[2])
            continue
        if num_vars is None:
            raise ValueError(f"line {lineno}: clause before 'p cnf' line")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(current)
    if num_vars is None:
        raise ValueError("missing 'p cnf' line")
    phi = CnfFormula(num_vars, clauses)
    if check_34 and not phi.is_34():
        raise ValueError("formula violates the (3,4) restriction")
    return phi


def format_dimacs(phi: CnfFormula) -> str:
    lines = [f"p cnf {phi.num_vars} {len(phi.clauses)}"]
    lines += [" ".join(str(l) for l in c) + " 0" for c in phi.clauses]
    return "\n".join(lines) + "\n"


def agents_per_variable(tau) -> int:
    tau = Fraction(tau)
    return 2 * math.ceil(4 / tau)


def literal_resource(lit: int) -> int:
    """Resource id of literal ``lit``: ``x_i -> 2(i-1)``, ``not x_i -> 2(i-1)+1``."""
    return 2 * (abs(lit) - 1) + (0 if lit > 0 else 1)


def sat_to_srsg(phi: CnfFormula, tau, check_34: bool = True) -> Instance:
    """Build the gadget instance for ``phi``.

    Agents ``0 .. v*num_vars - 1`` are the red variable agents (variable-major),
    followed by one blue clause agent per clause.
    """
    tau = Fraction(tau)
    if tau <= 0:
        raise ValueError("tau must be positive")
    if check_34 and not phi.is_34():
        raise ValueError("formula violates the (3,4) restriction")
    if not phi.clauses:
        raise InvalidInstance("formula without clauses yields no blue agents")
    v = agents_per_variable(tau)
    agents = []
    for i in range(1, phi.num_vars + 1):
        agents += [(RED, (literal_resource(i), literal_resource(-i)))] * v
    for c in phi.clauses:
        agents.append((BLUE, tuple(sorted({literal_resource(l) for l in c}))))
    return Instance.build(tau, 2 * phi.num_vars, agents)


def brute_force_sat(phi: CnfFormula) -> Optional[tuple]:
    for bits in itertools.product((False, True), repeat=phi.num_vars):
        if phi.satisfied_by(bits):
            return bits
    return None


def derived_assignment(phi: CnfFormula, tau, s: Sequence[int]) -> tuple:
    """Read a truth assignment off a profile of the gadget instance.

    Variable ``i`` is false iff at least half of its red agents sit on ``x_i``.
    """
    v = agents_per_variable(tau)
    out = []
    for i in range(phi.num_vars):
        on_pos = sum(1 for a in range(i * v, (i + 1) * v) if s[a] == 2 * i)
        out.append(not (2 * on_pos >= v))
    return tuple(out)


def unsatisfied_clause_bound(tau) -> Fraction:
    """Best fraction an unsatisfied clause agent can reach: ``4 / (4 + ceil(4/tau))``."""
    return Fraction(4, 4 + agents_per_variable(tau) // 2)


def verify_reduction(phi: CnfFormula, tau, budget=None) -> bool:
    """Check ``phi`` satisfiable <=> the gadget admits an all-maximum profile."""
    from .exact import EnumerationBudget, find_all_max_profile

    budget = budget or EnumerationBudget()
    sat = brute_force_sat(phi) is not None
    witness = find_all_max_profile(sat_to_srsg(phi, tau, check_34=False), budget)
    return sat == (witness is not None)


# --- 2SAT -------------------------------------------------------------------

def solve_2sat(num_vars: int, clauses) -> tuple:
    """Satisfy a list of 1- or 2-literal clauses over variables ``1..num_vars``.

    Returns a tuple of booleans or raises :class:`Unsatisfiable`. Uses the
    implication graph and Tarjan's strongly connected components.
    """
    def node(lit):
        return 2 * (abs(lit) - 1) + (0 if lit > 0 else 1)

    size = 2 * num_vars
    graph = [[] for _ in range(size)]
    for c in clauses:
        c = tuple(c)
        if not 1 <= len(c) <= 2 or any(l == 0 or abs(l) > num_vars for l in c):
            raise ValueError(f"malformed clause {c}")
        x, y = (c[0], c[0]) if len(c) == 1 else c
        graph[node(-x)].append(node(y))
        graph[node(-y)].append(node(x))

    comp = _tarjan(graph)
    out = []
    for i in range(num_vars):
        pos, neg = comp[2 * i], comp[2 * i + 1]
        if pos == neg:
            raise Unsatisfiable(f"x{i + 1} and its negation are equivalent")
        # Tarjan numbers components in reverse topological order
        out.append(pos < neg)
    return tuple(out)


def _tarjan(graph) -> list:
    n = len(graph)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack = []
    counter = 0
    n_comp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for j in range(i, len(graph[v])):
                w = graph[v][j]
                if index[w] == -1:
                    work.append((v, j + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comp
