"""Instances, strategy profiles and exact utility evaluation.

All quantities are exact :class:`fractions.Fraction` values. Agents and
resources are dense integer ids; a strategy profile is a tuple whose ``a``-th
entry is the resource chosen by agent ``a``.
"""
from __future__ import annotations

import enum
import functools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

Profile = tuple  # tuple[int, ...]: agent id -> resource id


class Color(enum.Enum):
    RED = "R"
    BLUE = "B"

    @property
    def other(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED


RED = Color.RED
BLUE = Color.BLUE


class InvalidInstance(ValueError):
    """Raised when an instance violates the model's invariants."""


class InfeasibleProfile(ValueError):
    """Raised when a profile is not total or uses an inaccessible resource."""


class FormatError(ValueError):
    """Parse error in the instance or profile text format."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ResourceCounts(NamedTuple):
    red: int
    blue: int

    @property
    def total(self) -> int:
        return self.red + self.blue

    def of(self, color: Color) -> int:
        return self.red if color is RED else self.blue


@dataclass(frozen=True)
class Instance:
    """Bipartite accessibility graph with agent colors and a threshold.

    ``access[a]`` is the sorted tuple of resources agent ``a`` may select.
    Construction does not validate; use :func:`validate` or
    :meth:`check` for that.
    """

    tau: Fraction
    n_resources: int
    colors: tuple
    access: tuple

    def __post_init__(self):
        object.__setattr__(self, "tau", Fraction(self.tau))
        object.__setattr__(self, "colors", tuple(self.colors))
        object.__setattr__(self, "access", tuple(tuple(sorted(x)) for x in self.access))

    @classmethod
    def build(cls, tau, n_resources: int, agents: Iterable[tuple]) -> "Instance":
        """Build and validate from ``(color, resources)`` pairs."""
        colors, access = [], []
        for color, resources in agents:
            colors.append(Color(color) if isinstance(color, str) else color)
            access.append(tuple(resources))
        inst = cls(Fraction(tau), n_resources, tuple(colors), tuple(access))
        inst.check()
        return inst

    @property
    def n_agents(self) -> int:
        return len(self.colors)

    @property
    def n_edges(self) -> int:
        return sum(len(x) for x in self.access)

    @property
    def agents(self) -> range:
        return range(len(self.colors))

    @property
    def resources(self) -> range:
        return range(self.n_resources)

    @property
    def n_red(self) -> int:
        return sum(1 for c in self.colors if c is RED)

    @property
    def n_blue(self) -> int:
        return self.n_agents - self.n_red

    def users(self, q: int) -> list:
        """Agents with access to ``q`` (the set Y(q))."""
        return [a for a in self.agents if q in self.access[a]]

    def with_tau(self, tau) -> "Instance":
        return Instance(Fraction(tau), self.n_resources, self.colors, self.access)

    def check(self) -> None:
        problems = validate(self)
        if problems:
            raise InvalidInstance("; ".join(problems))


def validate(instance: Instance) -> list:
    """Return a list of invariant violations (empty if the instance is valid)."""
    problems = []
    tau = instance.tau
    if not 0 <= tau <= 1:
        problems.append(f"tau {tau} outside [0, 1]")
    if instance.n_resources < 1:
        problems.append("at least one resource required")
    if len(instance.access) != len(instance.colors):
        problems.append("colors and access lists differ in length")
    for a, (color, acc) in enumerate(zip(instance.colors, instance.access)):
        if not isinstance(color, Color):
            problems.append(f"agent {a} has invalid color {color!r}")
        if not acc:
            problems.append(f"agent {a} has no accessible resource")
        if len(set(acc)) != len(acc):
            problems.append(f"agent {a} has duplicate edges")
        for q in acc:
            if not (isinstance(q, int) and 0 <= q < instance.n_resources):
                problems.append(f"agent {a} references unknown resource {q}")
    r = sum(1 for c in instance.colors if c is RED)
    if not 0 < r < len(instance.colors):
        problems.append("both colors required (0 < r < n)")
    return problems


def check_profile(instance: Instance, s: Sequence[int]) -> Profile:
    """Return ``s`` as a tuple after checking it is total and feasible."""
    s = tuple(s)
    if len(s) != instance.n_agents:
        raise InfeasibleProfile(f"profile has {len(s)} entries for {instance.n_agents} agents")
    for a, q in enumerate(s):
        if q not in instance.access[a]:
            raise InfeasibleProfile(f"agent {a} cannot access resource {q}")
    return s


def all_counts(instance: Instance, s: Sequence[int]) -> list:
    """Per-resource ``[red, blue]`` counts as a mutable list of lists."""
    table = [[0, 0] for _ in instance.resources]
    for a, q in enumerate(s):
        table[q][0 if instance.colors[a] is RED else 1] += 1
    return table


def counts(instance: Instance, q: int, s: Sequence[int]) -> ResourceCounts:
    if not 0 <= q < instance.n_resources:
        raise KeyError(f"unknown resource {q}")
    red = blue = 0
    for a, chosen in enumerate(s):
        if chosen == q:
            if instance.colors[a] is RED:
                red += 1
            else:
                blue += 1
    return ResourceCounts(red, blue)


def fraction(instance: Instance, q: int, color: Color, s: Sequence[int]) -> Optional[Fraction]:
    """Fraction of ``color`` agents on ``q``; ``None`` when ``q`` is unused."""
    c = counts(instance, q, s)
    if c.total == 0:
        return None
    return Fraction(c.of(color), c.total)


@functools.lru_cache(maxsize=1 << 16)
def capped(own: int, total: int, tau: Fraction) -> Fraction:
    return min(Fraction(own, total), tau)


@functools.lru_cache(maxsize=1 << 16)
def resource_welfare(red: int, blue: int, tau: Fraction) -> Fraction:
    """Sum of utilities of all agents on a resource with the given counts."""
    total = red + blue
    if total == 0:
        return Fraction(0)
    w = Fraction(0)
    if red:
        w += red * capped(red, total, tau)
    if blue:
        w += blue * capped(blue, total, tau)
    return w


def utility(instance: Instance, a: int, s: Sequence[int]) -> Fraction:
    c = counts(instance, s[a], s)
    return capped(c.of(instance.colors[a]), c.total, instance.tau)


def utilities(instance: Instance, s: Sequence[int]) -> list:
    table = all_counts(instance, s)
    out = []
    for a, q in enumerate(s):
        red, blue = table[q]
        own = red if instance.colors[a] is RED else blue
        out.append(capped(own, red + blue, instance.tau))
    return out


def social_welfare(instance: Instance, s: Sequence[int]) -> Fraction:
    return sum((resource_welfare(r, b, instance.tau) for r, b in all_counts(instance, s)),
               Fraction(0))


# --- text formats ----------------------------------------------------------

_TAU_RE = re.compile(r"^tau (\d+)/(\d+)$")
_RES_RE = re.compile(r"^resources (\d+)$")
_AGENT_RE = re.compile(r"^agent (\d+) ([RB])((?: \d+)+)$")
_ASSIGN_RE = re.compile(r"^assign (\d+) (\d+)$")


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    """Parse ``num/den`` (or a bare integer) into an exact fraction."""
    m = re.fullmatch(r"\s*(-?\d+)(?:/(\d+))?\s*", text)
    if not m or (m.group(2) is not None and int(m.group(2)) == 0):
        raise ValueError(f"not a fraction: {text!r}")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def parse_instance(text: str) -> Instance:
    """Parse the line-oriented instance format.

    Agent ids must appear in order 0, 1, 2, ...; every deviation from the
    grammar raises :class:`FormatError` carrying the offending line number.
    """
    lines = list(_content_lines(text))
    if len(lines) < 2:
        raise FormatError(lines[-1][0] if lines else 1, "expected 'tau' and 'resources' header lines")
    lineno, line = lines[0]
    m = _TAU_RE.match(line)
    if not m:
        raise FormatError(lineno, "expected 'tau <num>/<den>'")
    num, den = int(m.group(1)), int(m.group(2))
    if den == 0:
        raise FormatError(lineno, "zero denominator")
    tau = Fraction(num, den)
    if tau > 1:
        raise FormatError(lineno, "tau must lie in [0, 1]")
    lineno, line = lines[1]
    m = _RES_RE.match(line)
    if not m:
        raise FormatError(lineno, "expected 'resources <k>'")
    k = int(m.group(1))
    if k < 1:
        raise FormatError(lineno, "at least one resource required")
    colors, access = [], []
    for lineno, line in lines[2:]:
        m = _AGENT_RE.match(line)
        if not m:
            raise FormatError(lineno, "expected 'agent <id> <R|B> <resource-id> ...'")
        if int(m.group(1)) != len(colors):
            raise FormatError(lineno, f"expected agent id {len(colors)}")
        res = [int(t) for t in m.group(3).split()]
        if len(set(res)) != len(res):
            raise FormatError(lineno, "duplicate resource id")
        bad = [q for q in res if q >= k]
        if bad:
            raise FormatError(lineno, f"unknown resource {bad[0]}")
        colors.append(Color(m.group(2)))
        access.append(tuple(res))
    inst = Instance(tau, k, tuple(colors), tuple(access))
    problems = validate(inst)
    if problems:
        raise FormatError(lines[-1][0], "; ".join(problems))
    return inst


def format_instance(instance: Instance) -> str:
    out = [f"tau {format_fraction(instance.tau)}", f"resources {instance.n_resources}"]
    for a in instance.agents:
        res = " ".join(str(q) for q in instance.access[a])
        out.append(f"agent {a} {instance.colors[a].value} {res}")
    return "\n".join(out) + "\n"


def parse_profile(text: str, instance: Instance) -> Profile:
    assignment = {}
    last = 1
    for lineno, line in _content_lines(text):
        last = lineno
        m = _ASSIGN_RE.match(line)
        if not m:
            raise FormatError(lineno, "expected 'assign <agent-id> <resource-id>'")
        a, q = int(m.group(1)), int(m.group(2))
        if a >= instance.n_agents:
            raise FormatError(lineno, f"unknown agent {a}")
        if a in assignment:
            raise FormatError(lineno, f"agent {a} assigned twice")
        if q not in instance.access[a]:
            raise FormatError(lineno, f"agent {a} cannot access resource {q}")
        assignment[a] = q
    missing = [a for a in instance.agents if a not in assignment]
    if missing:
        raise FormatError(last, f"agent {missing[0]} not assigned")
    return tuple(assignment[a] for a in instance.agents)


def format_profile(s: Sequence[int]) -> str:
    return "".join(f"assign {a} {q}\n" for a, q in enumerate(s))


def profile_space_size(instance: Instance) -> int:
    return math.prod(len(x) for x in instance.access)
