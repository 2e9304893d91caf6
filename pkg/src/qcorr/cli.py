"""Command line front end.

Exit codes: 0 on success, 1 when a suite run finishes but does not pass,
2 for usage errors and unreadable or malformed inputs. Reports are
canonical JSON (or flat key,value CSV), so a repeated invocation with the
same inputs and seed produces byte-identical output.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from . import serialize, suites
from .correlations import (
    classical_correlation,
    discord_mi,
    discord_oz,
    entropy,
    mutual_information,
)
from .errors import QcorrError, VanishingClassWarning
from .fixtures import fixture_path
from .kclassical import is_k_classical, k_discord
from .locc import nmr_scenario, theorem2_probe
from .measurements import MeasurementClass
from .optimize import OptimizerConfig
from .qstate import partial_trace

USAGE_ERROR = 2


def _resolve_input(path_arg: str) -> Path:
    """A literal path if it exists, else a name in the fixture directory."""
    p = Path(path_arg)
    if p.exists():
        return p
    fp = fixture_path(path_arg)
    if fp.exists():
        return fp
    raise FileNotFoundError(f"no such file: {path_arg}")


def _emit(report: dict, args) -> None:
    text = serialize.render_report(report, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _opt_from(args, povm=False) -> OptimizerConfig:
    return OptimizerConfig(
        restarts=args.restarts,
        max_evals=args.max_evals,
        tol=args.tol,
        seed=args.seed,
        povm=povm,
    )


def cmd_measure(args) -> int:
    rho = serialize.load_state(_resolve_input(args.state))
    opt = _opt_from(args, povm=args.povm)
    j, _witness = classical_correlation(rho, opt)
    report = {
        "command": "measure",
        "state": args.state,
        "dims": list(rho.dims),
        "seed": args.seed,
        "restarts": args.restarts,
        "povm": args.povm,
        "entropy": entropy(rho),
        "entropy_a": entropy(partial_trace(rho, keep="A")),
        "entropy_b": entropy(partial_trace(rho, keep="B")),
        "mutual_information": mutual_information(rho),
        "J": j,
        "discord_oz": discord_oz(rho, opt),
        "discord_mi": discord_mi(rho, opt),
    }
    _emit(report, args)
    return 0


def cmd_kclassical(args) -> int:
    rho = serialize.load_state(_resolve_input(args.state))
    cls = MeasurementClass.parse(args.measurement_class)
    opt = _opt_from(args)
    verdict = is_k_classical(rho, cls, tol=args.tol, opt=opt, seed=args.seed)
    vanishing = False
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        kd = k_discord(rho, cls, opt)
        vanishing = any(issubclass(w.category, VanishingClassWarning)
                        for w in caught)
    report = {
        "command": "kclassical",
        "state": args.state,
        "dims": list(rho.dims),
        "class": cls.label,
        "seed": args.seed,
        "restarts": args.restarts,
        "tol": args.tol,
        "is_classical": verdict.is_classical,
        "mi_before": verdict.mi_before,
        "mi_after": verdict.mi_after,
        "method": verdict.method,
        "witness": (serialize.instrument_to_dict(verdict.witness)
                    if verdict.witness is not None else None),
        "k_discord": kd,
        "vanishing_class": vanishing,
    }
    _emit(report, args)
    return 0


def cmd_suite(args) -> int:
    if args.trials < 1:
        raise ValueError("--trials must be a positive integer")
    if args.jobs < 1:
        raise ValueError("--jobs must be a positive integer")
    result = suites.run_suite(args.suite, args.trials, args.seed,
                              restarts=args.restarts, jobs=args.jobs)
    report = {"command": "suite", **result.to_dict()}
    _emit(report, args)
    if args.suite == "theorem1" and result.failures and args.out:
        suites.dump_theorem1_failures(
            result, Path(args.out).with_suffix(".counterexamples"))
    return 0 if result.passed else 1


def cmd_probe(args) -> int:
    gate = serialize.load_gate(_resolve_input(args.gate))
    opt = _opt_from(args)
    rep = theorem2_probe(gate, opt, run_search=not args.no_search)
    search = None
    if rep.search is not None:
        search = {
            "found": rep.search.found,
            "status": rep.search.status,
            "residual": rep.search.residual,
        }
    report = {
        "command": "probe",
        "gate": args.gate,
        "seed": args.seed,
        "restarts": args.restarts,
        "verdict": rep.verdict,
        "failing_hypothesis": rep.failing_hypothesis,
        "h1_product_generator": rep.h1_product_generator,
        "h2_discordant_generator": rep.h2_discordant_generator,
        "h3_discord_changed": rep.h3_discord_changed,
        "reversible_necessary": rep.reversible_necessary,
        "discord_change": rep.discord_change,
        "search": search,
    }
    _emit(report, args)
    return 0


def cmd_nmr(args) -> int:
    rho0 = serialize.load_state(_resolve_input(args.state))
    gates = serialize.load_gate_sequence(_resolve_input(args.sequence))
    try:
        levels = [float(x) for x in args.levels.split(",") if x.strip()]
    except ValueError as exc:
        raise ValueError(f"bad --levels value: {args.levels!r}") from exc
    if not levels:
        raise ValueError("--levels needs at least one number")
    opt = _opt_from(args)
    rep = nmr_scenario(rho0, gates, levels, opt)
    steps = []
    for step in rep.steps:
        steps.append({
            "index": step.index,
            "entries": [{
                "level": e.level,
                "discord_before": e.discord_before,
                "discord_after": e.discord_after,
                "two_classical_before": e.two_classical_before,
                "two_classical_after": e.two_classical_after,
            } for e in step.entries],
        })
    report = {
        "command": "nmr",
        "state": args.state,
        "sequence": args.sequence,
        "seed": args.seed,
        "levels": list(rep.levels),
        "flagged_step": rep.flagged_step,
        "steps": steps,
    }
    _emit(report, args)
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--restarts", type=int, default=20,
                   help="optimizer restarts (default 20)")
    p.add_argument("--max-evals", type=int, default=2000,
                   help="function evaluations per restart (default 2000)")
    p.add_argument("--tol", type=float, default=1e-9,
                   help="optimizer convergence tolerance (default 1e-9)")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for every randomized choice (default 0)")
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="report encoding (default json)")
    p.add_argument("--out", default=None,
                   help="write the report to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcorr",
        description="Correlation measures and restricted-gate checks for "
                    "bipartite states. State and gate arguments accept "
                    "plain paths or names of bundled fixtures "
                    "(override the fixture directory with QCORR_FIXTURES).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure",
                       help="entropies, mutual information, J and discord")
    p.add_argument("--state", required=True, help="state JSON file")
    p.add_argument("--povm", action="store_true",
                   help="optimize J over dilated POVMs instead of "
                        "orthonormal-basis readouts")
    _add_common(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("kclassical",
                       help="membership test and minimal information drop "
                            "for a measurement class")
    p.add_argument("--state", required=True, help="state JSON file")
    p.add_argument("--class", dest="measurement_class", required=True,
                   help="rank1 | rankr:R | minout:N | all")
    _add_common(p)
    p.set_defaults(func=cmd_kclassical, tol=1e-7)

    p = sub.add_parser("suite", help="randomized consistency suites")
    p.add_argument("--suite", required=True, choices=suites.SUITE_NAMES)
    p.add_argument("--trials", type=int, required=True,
                   help="number of random trials (>= 1)")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes; results do not depend on this")
    _add_common(p)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("probe",
                       help="test whether a restricted gate needs more than "
                            "local maps and classical messages")
    p.add_argument("--gate", required=True,
                   help="gate JSON file (target channel + input state paths)")
    p.add_argument("--no-search", action="store_true",
                   help="skip the fully-local implementation search")
    _add_common(p)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("nmr",
                       help="discord of a noisy product family through a "
                            "gate sequence")
    p.add_argument("--state", required=True, help="product state JSON file")
    p.add_argument("--sequence", required=True,
                   help="gate sequence JSON file")
    p.add_argument("--levels", required=True,
                   help="comma separated noise levels in [0, 1]")
    _add_common(p)
    p.set_defaults(func=cmd_nmr)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, QcorrError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
