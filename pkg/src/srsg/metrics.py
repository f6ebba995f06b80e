"""Price of anarchy / stability: closed-form bounds and exact empirical ratios."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .core import Instance, format_fraction, social_welfare
from .dynamics import MoveMode
from .exact import DEFAULT_BUDGET, EnumerationBudget, brute_force_optimum, enumerate_equilibria


class NoEquilibrium(RuntimeError):
    pass


def _check_tau(tau) -> Fraction:
    tau = Fraction(tau)
    if tau <= 0:
        raise ValueError("tau must be positive")
    return tau


def poa_bound(tau) -> Fraction:
    """``4/(4-tau)`` for ``tau <= 2-sqrt 2``, else ``2 tau``.

    The branch is picked by the sign of ``tau^2 - 4 tau + 2``.
    """
    tau = _check_tau(tau)
    if tau * tau - 4 * tau + 2 >= 0:
        return 4 / (4 - tau)
    return 2 * tau


class PoSBound(NamedTuple):
    value: Fraction
    active: str  # "1/tau" or "poa"


def pos_bound_ibe(tau) -> PoSBound:
    tau = _check_tau(tau)
    inv, poa = 1 / tau, poa_bound(tau)
    return PoSBound(inv, "1/tau") if inv <= poa else PoSBound(poa, "poa")


@dataclass(frozen=True)
class QualityReport:
    mode: MoveMode
    opt_welfare: Fraction
    min_eq_welfare: Fraction
    max_eq_welfare: Fraction
    empirical_poa: Optional[Fraction]
    empirical_pos: Optional[Fraction]
    bound_poa: Optional[Fraction]
    n_equilibria: int


def _ratio(num: Fraction, den: Fraction) -> Optional[Fraction]:
    if den == 0:
        return Fraction(1) if num == 0 else None
    return num / den


def quality_report(instance: Instance, mode: MoveMode,
                   budget: EnumerationBudget = DEFAULT_BUDGET) -> QualityReport:
    opt = social_welfare(instance, brute_force_optimum(instance, budget))
    eqs = enumerate_equilibria(instance, mode, budget)
    if not eqs:
        raise NoEquilibrium(f"no {mode.value} equilibrium exists")
    welfares = [social_welfare(instance, s) for s in eqs]
    lo, hi = min(welfares), max(welfares)
    return QualityReport(
        mode=mode,
        opt_welfare=opt,
        min_eq_welfare=lo,
        max_eq_welfare=hi,
        empirical_poa=_ratio(opt, lo),
        empirical_pos=_ratio(opt, hi),
        bound_poa=poa_bound(instance.tau) if instance.tau > 0 else None,
        n_equilibria=len(eqs),
    )


REPORT_COLUMNS = ["instance", "mode", "tau", "opt", "min_eq", "max_eq",
                  "poa_emp", "poa_bound", "pos_emp"]


def _cell(x: Optional[Fraction]) -> str:
    return "" if x is None else format_fraction(x)


def report_csv(rows, with_floats: bool = True) -> str:
    """Serialise ``(name, instance, report)`` triples.

    Every rational is written as ``num/den``; ``with_floats`` appends a
    float column per rational for convenience.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    rational_cols = REPORT_COLUMNS[3:]
    header = list(REPORT_COLUMNS)
    if with_floats:
        header += [c + "_float" for c in rational_cols]
    w.writerow(header)
    for name, inst, rep in rows:
        vals = [rep.opt_welfare, rep.min_eq_welfare, rep.max_eq_welfare,
                rep.empirical_poa, rep.bound_poa, rep.empirical_pos]
        row = [name, rep.mode.value, format_fraction(inst.tau)] + [_cell(v) for v in vals]
        if with_floats:
            row += ["" if v is None else f"{float(v):.6f}" for v in vals]
        w.writerow(row)
    return buf.getvalue()
