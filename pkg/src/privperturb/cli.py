"""Command-line entry points.

Subcommands:

- ``design``: solve the robust slope-design program per agent and report
  the designed perturbation slopes (plain and floored variants).
- ``privacy``: report per-agent and overall privacy levels for a slope
  matrix at the radii implied by the slopes.
- ``sweep``: run the sampling sweep and write ``sweep.csv``.
- ``verify``: batch property checks (inclusion soundness, privacy
  inequality) with counterexample dumps on failure.
- ``reproduce-example``: run design + privacy + sweep on the bundled
  three-agent benchmark.

Exit codes: 0 success, 1 theorem/property violation, 2 usage error,
3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import decomposition, harness, privacy, slopes as slope_design
from .errors import SolverError, TheoremViolationError, UsageError
from .fixtures import Fixture, load_fixture
from .intervals import sample_subintervals
from .objectives import AgentProblem

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3


def _load(args) -> tuple[harness.ExperimentConfig, Fixture]:
    if args.config is not None:
        cfg, fixture = harness.load_config(args.config)
    else:
        fixture = load_fixture(args.fixture)
        cfg = harness.ExperimentConfig(fixture=fixture.name)
    overrides = {}
    if getattr(args, "samples", None) is not None:
        overrides["sample_count"] = args.samples
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "algorithms", None):
        overrides["algorithms"] = tuple(args.algorithms)
    if overrides:
        cfg = harness.ExperimentConfig(
            **{
                **{
                    k: getattr(cfg, k)
                    for k in (
                        "fixture slopes radii slope_floor sample_count "
                        "sigma seed algorithms solver".split()
                    )
                },
                **overrides,
            }
        )
    return cfg, fixture


def _write(out_dir: str, name: str, text: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        fh.write(text)
    return path


def cmd_design(args) -> int:
    cfg, fixture = _load(args)
    problem = fixture.problem
    plain = slope_design.design_slopes(problem)
    floor = args.slope_floor if args.slope_floor is not None else cfg.slope_floor
    floored = []
    for spec in problem.objectives:
        vertex = privacy.minimizing_decomposition(spec, np.zeros(problem.dim)).vertex
        m_tilde, val = slope_design.floor_slopes(vertex, problem.domain, floor)
        floored.append(
            slope_design.SlopeDesignResult(
                xi_star=None,
                m_tilde_star=m_tilde,
                objective_value=val,
                solver_status="optimal",
            )
        )
    doc = {
        "fixture": fixture.name,
        "plain": [r.to_json() for r in plain],
        "floored": [r.to_json() for r in floored],
        "slope_floor": floor,
    }
    if fixture.reference_slopes is not None:
        ref = fixture.reference_slopes
        computed = np.stack([r.m_tilde_star for r in floored])
        doc["reference_slopes"] = ref.tolist()
        doc["matches_reference"] = bool(np.allclose(computed, ref, atol=1e-6))
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    print(text, end="")
    if args.out:
        _write(args.out, "design.json", text)
    return EXIT_OK


def cmd_privacy(args) -> int:
    cfg, fixture = _load(args)
    problem = fixture.problem
    slopes = harness.design_point(cfg, fixture)
    # Radii default to the largest vicinity each slope certifies; the
    # privacy level depends on this choice, so it is reported alongside.
    mech = (
        privacy.Mechanism(slopes=slopes, vicinity_radii=cfg.radii, domain=problem.domain)
        if cfg.radii is not None
        else privacy.Mechanism.from_slopes(slopes, problem.domain)
    )
    report = privacy.privacy_report(problem, mech)
    print(f"{'agent':>6} {'slope':>12} {'radius':>12} {'eps':>12}")
    for i in range(problem.n_agents):
        s = float(np.max(np.abs(mech.slopes[i])))
        print(
            f"{i + 1:>6} {s:>12.6g} {float(mech.vicinity_radii[i]):>12.6g} "
            f"{report.per_agent_eps[i]:>12.6g}"
        )
    print(f"overall eps = {report.overall_eps:.6g}")
    text = json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
    if args.out:
        _write(args.out, "privacy.json", text)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg, fixture = _load(args)
    result = harness.run_sweep(cfg, fixture)
    csv_text = result.to_csv()
    out_dir = args.out or "."
    path = _write(out_dir, "sweep.csv", csv_text)
    print(f"wrote {len(result.rows)} rows to {path}")
    if args.trace:
        summary = harness.clean_problem_summary(fixture.problem)
        _write(out_dir, "sweep_summary.json", json.dumps(summary, indent=2) + "\n")
    return EXIT_OK


def _verify_inclusion(problem: AgentProblem, seed: int, trials: int) -> list:
    """Inclusion soundness: sampled function values on sampled subboxes
    stay inside the certified range enclosure."""
    rng = np.random.default_rng(seed)
    failures = []
    boxes = sample_subintervals(problem.domain, trials, seed)
    for spec in problem.objectives:
        dec = privacy.minimizing_decomposition(spec, np.zeros(problem.dim))
        for box in boxes:
            lo, hi = decomposition.inclusion(dec, box, np.zeros(problem.dim))
            pts = box.lo + rng.random((64, problem.dim)) * (box.hi - box.lo)
            vals = spec.evaluate(pts)
            if np.any(vals < lo - 1e-9) or np.any(vals > hi + 1e-9):
                failures.append(
                    {
                        "check": "inclusion",
                        "box": box.to_json(),
                        "range": [float(lo), float(hi)],
                        "violating_value": float(vals.min()),
                    }
                )
    return failures


def _verify_privacy(problem: AgentProblem, slopes, seed: int, trials: int) -> list:
    """Privacy inequality over sampled witness subintervals: the
    intersected perturbed enclosure never out-diameters the scaled
    clean enclosure."""
    failures = []
    mech = privacy.Mechanism.from_slopes(slopes, problem.domain)
    base = privacy.apply_mechanism(problem, mech, problem.domain)
    rng = np.random.default_rng(seed)
    # witnesses: the output itself plus randomly inflated supersets
    margins = np.concatenate(
        [np.zeros((1, 2)), rng.random((trials, 2)) * base.diameter()]
    )
    for i in range(problem.n_agents):
        Fp = _perturb_agent(problem, mech, i)
        for lo_m, hi_m in margins:
            witness = base.inflate(lo_m, hi_m)
            cert = privacy.verify_privacy_inequality(problem, Fp, mech, witness)
            if not cert.holds:
                failures.append(
                    {
                        "check": "privacy_inequality",
                        "agent": i,
                        "witness": witness.to_json(),
                        "lhs": cert.lhs,
                        "rhs": cert.rhs,
                    }
                )
    return failures


def _perturb_agent(problem: AgentProblem, mech, agent: int) -> AgentProblem:
    from .objectives import PolynomialObjective, poly_to_spec

    specs = list(problem.objectives)
    spec = specs[agent]
    if spec.poly is None:
        raise UsageError("verification requires polynomial objectives")
    lin = PolynomialObjective.affine(mech.slopes[agent], 0.0)
    specs[agent] = poly_to_spec(spec.poly + lin, problem.domain)
    return AgentProblem(objectives=tuple(specs))


def cmd_verify(args) -> int:
    cfg, fixture = _load(args)
    problem = fixture.problem
    slopes = harness.design_point(cfg, fixture)
    failures = []
    failures += _verify_inclusion(problem, cfg.seed, trials=20)
    failures += _verify_privacy(problem, slopes, cfg.seed, trials=20)
    if failures:
        text = json.dumps(failures, indent=2) + "\n"
        print("FAIL: property violations found")
        print(text, end="")
        if args.out:
            _write(args.out, "counterexamples.json", text)
        return EXIT_VIOLATION
    print("ok: inclusion soundness and privacy inequality hold on all samples")
    return EXIT_OK


def cmd_reproduce_example(args) -> int:
    args.fixture = "nonconvex_trio"
    args.config = None
    args.slope_floor = getattr(args, "slope_floor", None)
    rc = cmd_design(args)
    if rc:
        return rc
    rc = cmd_privacy(args)
    if rc:
        return rc
    return cmd_sweep(args)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="privperturb",
        description="Guaranteed-privacy functional perturbation toolkit",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", default=None, help="experiment config JSON")
        sp.add_argument("--fixture", default="nonconvex_trio")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default=None, help="output directory")

    sp = sub.add_parser("design", help="solve the slope-design program")
    common(sp)
    sp.add_argument("--slope-floor", dest="slope_floor", type=float, default=None)
    sp.set_defaults(func=cmd_design)

    sp = sub.add_parser("privacy", help="per-agent privacy report")
    common(sp)
    sp.set_defaults(func=cmd_privacy)

    sp = sub.add_parser("sweep", help="sampling sweep -> sweep.csv")
    common(sp)
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--algorithms", nargs="+", default=None)
    sp.add_argument("--trace", action="store_true")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="batch property checks")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("reproduce-example", help="design + privacy + sweep on the bundled benchmark")
    common(sp)
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--algorithms", nargs="+", default=None)
    sp.add_argument("--slope-floor", dest="slope_floor", type=float, default=None)
    sp.add_argument("--trace", action="store_true")
    sp.set_defaults(func=cmd_reproduce_example)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except TheoremViolationError as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
