"""Command-line interface: ``srsg <command> ...``.

Exit status is 0 on success, 1 on a domain error (bad file, budget,
precondition) and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import core, dynamics, exact, generators, greedy, metrics, reductions
from .core import format_fraction, parse_fraction


class UsageError(Exception):
    pass


def _fraction_arg(text):
    try:
        return parse_fraction(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _read(path):
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _load_instance(path):
    return core.parse_instance(_read(path))


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _welfare_line(w: Fraction) -> str:
    return f"# welfare {format_fraction(w)} {float(w):.6f}\n"


def _mode(name):
    return dynamics.MoveMode(name)


def _scheduler(spec):
    if spec == "rr":
        return dynamics.ROUND_ROBIN
    if spec == "best":
        return dynamics.BEST_GAIN
    if spec.startswith("rand:"):
        return dynamics.Scheduler.random(int(spec[5:]))
    raise UsageError(f"unknown scheduler {spec!r}")


# --- commands -----------------------------------------------------------------

def cmd_generate(args):
    fam = args.family
    header = ""
    allowed = {"figure1": ("opt", "iae", "ibe"), "poa": ("opt", "worst"), "posgap": ("opt", "ibe")}
    if args.profile and args.profile not in allowed.get(fam, ()):
        raise UsageError(f"--profile {args.profile} not available for {fam}")
    if fam == "figure1":
        fig = generators.figure1(args.tau or Fraction(3, 5))
        if args.profile:
            _emit(core.format_profile(getattr(fig, args.profile)), args.output)
            return 0
        inst = fig.instance
    elif fam == "poa":
        fam_ = generators.poa_family(args.tau or Fraction(1), args.alpha)
        if args.profile:
            prof = fam_.opt if args.profile == "opt" else fam_.worst_iae
            _emit(core.format_profile(prof), args.output)
            return 0
        inst = fam_.instance
    elif fam == "posgap":
        gap = generators.pos_gap_family(args.x, args.y)
        if args.profile:
            _emit(core.format_profile(gap.opt if args.profile == "opt" else gap.ibe), args.output)
            return 0
        inst = gap.instance
    elif fam == "counterexample":
        inst = generators.greedy_iae_counterexample()
    elif fam == "random":
        inst = generators.random_instance(generators.RandomParams(
            args.resources, args.red, args.blue, args.edge_prob, args.tau or Fraction(1), args.seed))
        header = f"# random seed={args.seed} edge_prob={args.edge_prob}\n"
    elif fam == "agentdeg2":
        inst = generators.random_agent_degree2(args.resources, args.red, args.blue,
                                               args.tau or Fraction(1), args.seed)
        header = f"# agentdeg2 seed={args.seed}\n"
    else:
        inst = generators.random_resource_degree2(args.resources, args.red, args.blue,
                                                  args.tau or Fraction(1), args.seed)
        header = f"# resdeg2 seed={args.seed}\n"
    if header:
        # keep stdout a round-trippable instance; the seed goes to stderr
        sys.stderr.write(header)
    _emit(core.format_instance(inst), args.output)
    return 0


def _solve(inst, algo, budget):
    if algo == "greedy":
        return greedy.compute_ibe_greedy(inst)[0]
    if algo == "brute":
        return exact.brute_force_optimum(inst, budget)
    if algo == "optimum":
        if all(len(inst.users(q)) <= 2 for q in inst.resources):
            return exact.optimum_resource_deg2(inst)
        return exact.brute_force_optimum(inst, budget)
    if algo == "deg2sat":
        s = exact.decide_all_satisfied_agent_deg2(inst)
        if s is None:
            raise exact.PreconditionError("unsatisfiable: no profile gives every agent utility 1")
        return s
    if algo == "deg2match":
        return exact.optimum_resource_deg2(inst)
    return exact.approx_iae_2(inst)


def cmd_solve(args):
    inst = _load_instance(args.instance)
    s = _solve(inst, args.algo, exact.EnumerationBudget(args.max_profiles))
    text = f"# algo {args.algo}\n" + _welfare_line(core.social_welfare(inst, s))
    if args.algo == "greedy" and args.removal_log:
        _, log = greedy.compute_ibe_greedy(inst)
        Path(args.removal_log).write_text(greedy.removal_log_csv(log), encoding="utf-8")
    _emit(text + core.format_profile(s), args.output)
    return 0


def cmd_dynamics(args):
    inst = _load_instance(args.instance)
    init = args.init
    if init == "greedy":
        s0 = greedy.compute_ibe_greedy(inst)[0]
    elif init.startswith("random:"):
        s0 = generators.random_profile(inst, int(init[7:]))
    elif init.startswith("file:"):
        s0 = core.parse_profile(_read(init[5:]), inst)
    else:
        raise UsageError(f"unknown --init {init!r}")
    sched = _scheduler(args.sched)
    max_steps = args.max_steps or inst.n_agents ** 5
    trace = dynamics.run_dynamics(inst, s0, _mode(args.mode), sched, max_steps)
    head = (f"# mode={args.mode} sched={sched.describe()} init={init} max_steps={max_steps}\n"
            f"# initial welfare {format_fraction(core.social_welfare(inst, s0))}\n")
    tail = f"# terminated {trace.terminated.value} steps {len(trace.steps)}\n"
    _emit(head + trace.to_csv() + tail, args.output)
    return 0


def cmd_check(args):
    inst = _load_instance(args.instance)
    s = core.parse_profile(_read(args.profile), inst)
    mode = _mode(args.mode)
    move = dynamics.witness_move(inst, s, mode)
    print(f"equilibrium: {'yes' if move is None else 'no'}")
    print(f"welfare: {format_fraction(core.social_welfare(inst, s))}")
    if move is not None:
        print(f"witness: agent {move.agent} from {move.source} to {move.target}")
    return 0


def cmd_reduce(args):
    phi = reductions.parse_dimacs(_read(args.cnf), check_34=not args.no_check_34)
    inst = reductions.sat_to_srsg(phi, args.tau, check_34=not args.no_check_34)
    _emit(core.format_instance(inst), args.output)
    return 0


def _report_one(job):
    path, mode, max_profiles = job
    inst = _load_instance(path)
    try:
        rep = metrics.quality_report(inst, mode, exact.EnumerationBudget(max_profiles))
    except metrics.NoEquilibrium:
        return path, inst, None
    return path, inst, rep


def cmd_report(args):
    modes = [dynamics.AWARE, dynamics.BLIND] if args.mode == "both" else [_mode(args.mode)]
    jobs = [(p, m, args.max_profiles) for p in args.instances for m in modes]
    results = _map(_report_one, jobs, args.workers)
    rows = [r for r in results if r[2] is not None]
    _emit(metrics.report_csv(rows), args.output)
    for path, _, rep in results:
        if rep is None:
            print(f"note: {path}: no equilibrium for this mode", file=sys.stderr)
    return 0


def _bench_one(job):
    seed, resources, red, blue, p, tau = job
    inst = generators.random_instance(generators.RandomParams(resources, red, blue, p, tau, seed))
    t0 = time.perf_counter()
    greedy.compute_ibe_greedy(inst)
    t1 = time.perf_counter()
    trace = dynamics.run_dynamics(inst, generators.random_profile(inst, seed), dynamics.BLIND,
                                  dynamics.ROUND_ROBIN, inst.n_agents ** 5)
    t2 = time.perf_counter()
    return seed, inst.n_agents, inst.n_edges, t1 - t0, t2 - t1, len(trace.steps)


def cmd_bench(args):
    lo, hi = (int(x) for x in args.seeds.split(":"))
    jobs = [(s, args.resources, args.red, args.blue, args.edge_prob, args.tau) for s in range(lo, hi)]
    print(f"# bench seeds={args.seeds} resources={args.resources} red={args.red} "
          f"blue={args.blue} edge_prob={args.edge_prob} tau={format_fraction(args.tau)}")
    print("seed,n,m,greedy_ms,dynamics_ms,dynamics_steps")
    for seed, n, m, tg, td, steps in _map(_bench_one, jobs, args.workers):
        print(f"{seed},{n},{m},{tg * 1e3:.3f},{td * 1e3:.3f},{steps}")
    return 0


def _map(fn, jobs, workers):
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


# --- parser -------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="srsg", description="Schelling resource selection games")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write an instance in text format")
    g.add_argument("family", choices=["figure1", "poa", "posgap", "counterexample",
                                      "random", "agentdeg2", "resdeg2"])
    g.add_argument("--tau", type=_fraction_arg)
    g.add_argument("--alpha", type=int, default=200)
    g.add_argument("--x", type=int, default=6)
    g.add_argument("--y", type=int, default=12)
    g.add_argument("--resources", type=int, default=3)
    g.add_argument("--red", type=int, default=4)
    g.add_argument("--blue", type=int, default=4)
    g.add_argument("--edge-prob", type=float, default=0.5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--profile", choices=["opt", "iae", "ibe", "worst"],
                   help="emit a fixture profile instead of the instance")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="compute a profile")
    s.add_argument("instance")
    s.add_argument("--algo", required=True,
                   choices=["greedy", "optimum", "deg2sat", "deg2match", "approx2", "brute"])
    s.add_argument("--max-profiles", type=int, default=10**7)
    s.add_argument("--removal-log", help="with --algo greedy, write the removal order CSV here")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    d = sub.add_parser("dynamics", help="run improving-move dynamics, print trace CSV")
    d.add_argument("instance")
    d.add_argument("--mode", choices=["aware", "blind"], required=True)
    d.add_argument("--sched", default="rr", help="rr | rand:SEED | best")
    d.add_argument("--max-steps", type=int, help="default n^5")
    d.add_argument("--init", default="greedy", help="greedy | random:SEED | file:PATH")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_dynamics)

    c = sub.add_parser("check", help="equilibrium verdict for a profile")
    c.add_argument("instance")
    c.add_argument("--mode", choices=["aware", "blind"], required=True)
    c.add_argument("--profile", required=True)
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("reduce", help="DIMACS CNF -> gadget instance")
    r.add_argument("--cnf", required=True)
    r.add_argument("--tau", type=_fraction_arg, required=True)
    r.add_argument("--no-check-34", action="store_true")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_reduce)

    q = sub.add_parser("report", help="exact PoA/PoS report CSV")
    q.add_argument("instances", nargs="+")
    q.add_argument("--mode", choices=["aware", "blind", "both"], default="both")
    q.add_argument("--max-profiles", type=int, default=10**6)
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_report)

    b = sub.add_parser("bench", help="timing table: greedy vs impact-blind dynamics")
    b.add_argument("--seeds", default="0:10", help="range LO:HI")
    b.add_argument("--resources", type=int, default=10)
    b.add_argument("--red", type=int, default=20)
    b.add_argument("--blue", type=int, default=20)
    b.add_argument("--edge-prob", type=float, default=0.3)
    b.add_argument("--tau", type=_fraction_arg, default=Fraction(1))
    b.add_argument("--workers", type=int, default=1)
    b.set_defaults(func=cmd_bench)
    return p


DOMAIN_ERRORS = (OSError, ValueError, RuntimeError, reductions.Unsatisfiable)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
