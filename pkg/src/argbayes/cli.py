"""Command-line entry point.

Subcommands: semantics, posterior, gibbs, predict, crossval, synth, demo.
Exit codes: 0 success, 1 usage error or failed demo check, 2 data/schema
error, 3 capacity error, 4 degenerate evidence.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .af import bits_of, extensions
from .demo import DEMO_CASES, run_demo
from .errors import (
    ArgBayesError,
    CapacityError,
    ConfigError,
    DegenerateEvidenceError,
    InputError,
    PlanError,
    SchemaError,
)
from .gibbs import GibbsConfig, convergence_trace, run_gibbs
from .harness import SplitPlan, cross_validate, synthetic_experiment
from .inference import AttackVariableSpace, exact_posterior, posterior_predictive
from .model import ModelConfig


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _format_subset(mask: int, names) -> str:
    members = [names[i] for i in bits_of(mask)]
    return "{" + ", ".join(members) + "}"


def _add_model_flags(p):
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--semantics", choices=("grounded", "complete", "preferred", "stable"))
    p.add_argument("--family", choices=("deterministic", "linear", "exponential"))
    p.add_argument("--w", type=float)
    p.add_argument("--lambda", dest="lam", help="prior: one value or comma list")
    p.add_argument("--mode", choices=("symmetric", "directed"))
    p.add_argument("--convention", choices=io.CONVENTION_MODES)


def _add_gibbs_flags(p):
    p.add_argument("--iterations", type=int)
    p.add_argument("--burn-in", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--chains", type=int)


def _resolve_run_config(args) -> io.RunConfig:
    base = io.load_config(args.config) if args.config else io.parse_config_text("")
    mkw = dict(semantics=base.model.semantics, family=base.model.family,
               w=base.model.w, prediction_family=base.model.prediction_family)
    for key, attr in (("semantics", "semantics"), ("family", "family"), ("w", "w")):
        v = getattr(args, attr, None)
        if v is not None:
            mkw[key] = v
    gkw = dict(iterations=base.gibbs.iterations, burn_in=base.gibbs.burn_in,
               seed=base.gibbs.seed, chains=base.gibbs.chains)
    for key, attr in (("iterations", "iterations"), ("burn_in", "burn_in"),
                      ("seed", "seed"), ("chains", "chains")):
        v = getattr(args, attr, None)
        if v is not None:
            gkw[key] = v
    priors = base.priors
    lam = getattr(args, "lam", None)
    if lam is not None:
        priors = tuple(float(x) for x in lam.split(",")) if "," in lam else float(lam)
    mode = getattr(args, "mode", None) or base.mode
    conv = base.convention
    if getattr(args, "convention", None):
        conv = io.ObservationConvention(mode=args.convention,
                                        negative_rows=base.convention.negative_rows)
    return io.RunConfig(model=ModelConfig(**mkw), gibbs=GibbsConfig(**gkw),
                        priors=priors, mode=mode, convention=conv)


def _load_observation_space(args, run: io.RunConfig):
    obs, names = io.load_votes(args.votes, run.convention)
    space = AttackVariableSpace.create(len(names), mode=run.mode, priors=run.priors)
    return obs, names, space


def _cmd_semantics(args) -> int:
    af = io.load_framework(args.framework)
    names = af.names or tuple(str(i) for i in range(af.n))
    sem = args.semantics or "complete"
    for ext in extensions(af, sem):
        print(_format_subset(ext, names))
    return 0


def _cmd_posterior(args) -> int:
    run = _resolve_run_config(args)
    obs, names, space = _load_observation_space(args, run)
    post = exact_posterior(obs, space, run.model)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    io.save_posterior(out_dir / "posterior.csv", post)
    print(f"wrote {out_dir / 'posterior.csv'} "
          f"({len(post.entries)} assignments over {len(names)} arguments)")
    return 0


def _cmd_gibbs(args) -> int:
    run = _resolve_run_config(args)
    obs, names, space = _load_observation_space(args, run)
    print(f"seed = {run.gibbs.seed}")
    hist = run_gibbs(obs, space, run.model, run.gibbs)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    post = hist.to_posterior()
    io.save_posterior(out_dir / "histogram.csv", post)
    trace = convergence_trace(hist)
    io.save_table(out_dir / "trace.csv", ["iteration", "distinct_assignments"],
                  [[i + 1, v] for i, v in enumerate(trace)])
    print(f"wrote {out_dir / 'histogram.csv'} and {out_dir / 'trace.csv'}")
    return 0


def _cmd_predict(args) -> int:
    run = _resolve_run_config(args)
    obs, names, space = _load_observation_space(args, run)
    post = io.load_posterior(args.posterior, kind="exact")
    rows = []
    for o in obs:
        p1 = posterior_predictive(o.subset, post, space, run.model)
        rows.append([_format_subset(o.subset, names), o.label, p1])
        print(f"{_format_subset(o.subset, names)}\tlabel={o.label}\tp(acceptable)={p1:.6f}")
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        io.save_table(out_dir / "predictions.csv",
                      ["subset", "label", "p_acceptable"], rows)
    return 0


def _cmd_crossval(args) -> int:
    run = _resolve_run_config(args)
    obs, names, space = _load_observation_space(args, run)
    sizes = tuple(int(x) for x in args.train_sizes.split(","))
    plan = SplitPlan(seed=run.gibbs.seed, train_sizes=sizes,
                     repeats_per_size=args.repeats)
    print(f"seed = {plan.seed}")
    points = cross_validate(obs, plan, space, run.model, run.gibbs)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    io.save_table(out_dir / "learning_curve.csv",
                  ["train_size", "mean_accuracy", "stddev"],
                  [[p.train_size, p.mean_accuracy, p.stddev] for p in points])
    for p in points:
        print(f"train_size={p.train_size}\tmean_accuracy={p.mean_accuracy:.4f}"
              f"\tstddev={p.stddev:.4f}")
    return 0


def _cmd_synth(args) -> int:
    run = _resolve_run_config(args)
    rng = np.random.default_rng(run.gibbs.seed)
    space = AttackVariableSpace.create(args.n_args, mode=run.mode, priors=run.priors)
    if args.framework:
        af = io.load_framework(args.framework)
        space = AttackVariableSpace.create(af.n, mode=run.mode, priors=run.priors)
        truth = space.assignment_from_attacks(af.attacks)
    else:
        truth = tuple(int(b) for b in rng.integers(0, 2, size=len(space.variables)))
    print(f"seed = {run.gibbs.seed}")
    report = synthetic_experiment(truth, space, run.model, args.n_obs,
                                  run.gibbs, seed=run.gibbs.seed)
    print(f"true assignment        = {''.join(map(str, report.true_assignment))}")
    print(f"posterior mass on truth = {report.posterior_mass_on_truth:.6f}")
    print(f"MAP Hamming distance    = {report.map_hamming_distance}")
    print(f"predictive accuracy     = {report.predictive_accuracy:.4f}")
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        io.save_table(out_dir / "recovery.csv",
                      ["true_assignment", "posterior_mass_on_truth",
                       "map_hamming_distance", "predictive_accuracy", "n_obs"],
                      [["".join(map(str, report.true_assignment)),
                        report.posterior_mass_on_truth,
                        report.map_hamming_distance,
                        report.predictive_accuracy, report.n_obs]])
    return 0


def _cmd_demo(args) -> int:
    lines, ok = run_demo(args.case)
    for line in lines:
        print(line.render())
    return 0 if ok else 1


def build_parser() -> _Parser:
    parser = _Parser(prog="argbayes",
                     description="Bayesian direct and inverse inference over "
                                 "abstract argumentation frameworks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("semantics", help="enumerate extensions of a framework file")
    p.add_argument("--framework", required=True)
    p.add_argument("--semantics", choices=("grounded", "complete", "preferred", "stable"))
    p.set_defaults(func=_cmd_semantics)

    p = sub.add_parser("posterior", help="exact posterior over attack assignments")
    p.add_argument("--votes", required=True)
    _add_model_flags(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_posterior)

    p = sub.add_parser("gibbs", help="approximate posterior via Gibbs sampling")
    p.add_argument("--votes", required=True)
    _add_model_flags(p)
    _add_gibbs_flags(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_gibbs)

    p = sub.add_parser("predict", help="score subsets with the posterior predictive")
    p.add_argument("--votes", required=True, help="subsets to score")
    p.add_argument("--posterior", required=True, help="posterior CSV")
    _add_model_flags(p)
    p.add_argument("--out-dir")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("crossval", help="cross-validation learning curve")
    p.add_argument("--votes", required=True)
    _add_model_flags(p)
    _add_gibbs_flags(p)
    p.add_argument("--train-sizes", required=True, help="comma list of sizes")
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_crossval)

    p = sub.add_parser("synth", help="synthetic ground-truth recovery experiment")
    _add_model_flags(p)
    _add_gibbs_flags(p)
    p.add_argument("--n-args", type=int, default=3)
    p.add_argument("--n-obs", type=int, default=50)
    p.add_argument("--framework", help="use this framework as the ground truth")
    p.add_argument("--out-dir")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("demo", help="check the built-in worked examples")
    p.add_argument("--case", choices=sorted(DEMO_CASES))
    p.set_defaults(func=_cmd_demo)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as e:
        return int(e.code or 0)
    except (SchemaError, ConfigError, PlanError, InputError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except CapacityError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except DegenerateEvidenceError as e:
        print(f"error: {e}", file=sys.stderr)
        return 4
    except ArgBayesError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
