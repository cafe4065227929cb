"""Command-line front end.

Every command prints one line of compact JSON to stdout.  Exit codes: 0 on
success, 1 for domain errors (bad specs, exceeded budgets, unreachable
computations), 2 for usage errors.  Machine step budgets default to the
CPACLAB_BUDGET environment variable when a command does not pass --budget.

Class and learner specs use a compact colon syntax:

    full            baseline:2          block:inc         diagonal
    good:all-ones:1                     good:machine:W.txt:1
    erm             erm-good:all-ones:1
    asym-block:inc  asym-block:dovetail:P.txt             lift:erm
"""

from __future__ import annotations

import argparse
import dataclasses
import itertools
import json
import os
import sys
from typing import Optional, Sequence

from .classes import UNKNOWN
from .core import (Hypothesis, Sample, empirical_loss, fraction_to_str,
                   hypothesis_to_json)
from .dims import (largest_shattered_set, ldim_window, restrict,
                   vc_dimension_window, witness_excludes)
from .errors import CpacError
from .harness import (DEFAULT_MACHINE_BUDGET, ExperimentConfig, build_class,
                      build_learner, build_witness, diagonalization_demo,
                      run_experiment, scpac_obstruction_demo)
from .machines import (Program, enumerate_machine_pairs, machine_pair_index,
                       run_bounded, surrogate)


def _default_budget() -> int:
    raw = os.environ.get("CPACLAB_BUDGET")
    if raw is None:
        return DEFAULT_MACHINE_BUDGET
    try:
        budget = int(raw)
    except ValueError:
        raise CpacError(f"CPACLAB_BUDGET must be an integer, got {raw!r}") from None
    if budget < 1:
        raise CpacError("CPACLAB_BUDGET must be positive")
    return budget


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CpacError(f"cannot read {path}: {exc}") from exc


def _parse_function_text(text: str):
    """inc | prime | double | dovetail:PATH  ->  build_function spec."""
    if text.startswith("dovetail:"):
        return {"dovetail": _read_text(text.split(":", 1)[1])}
    return text


def _parse_witness_text(parts: list[str], budget: int):
    """["all-ones"] or ["machine", PATH]  ->  build_witness spec."""
    if parts[0] in ("all-ones", "all-zeros"):
        if len(parts) != 1:
            raise CpacError(f"witness {parts[0]} takes no arguments")
        return parts[0]
    if parts[0] == "machine" and len(parts) == 2:
        return {"machine": _read_text(parts[1]), "budget": budget}
    raise CpacError(f"cannot parse witness spec {':'.join(parts)!r}")


def parse_class_text(text: str, budget: int) -> dict:
    """Compact class syntax -> the JSON spec consumed by build_class."""
    parts = text.split(":")
    name = parts[0]
    if name == "full" or name == "diagonal":
        if len(parts) != 1:
            raise CpacError(f"class {name} takes no arguments")
        return {"name": name}
    if name == "baseline" and len(parts) == 2:
        return {"name": "baseline", "d": int(parts[1])}
    if name == "block" and len(parts) >= 2:
        return {"name": "block", "f": _parse_function_text(":".join(parts[1:]))}
    if name == "good" and len(parts) >= 3:
        return {"name": "good", "k": int(parts[-1]),
                "witness": _parse_witness_text(parts[1:-1], budget)}
    raise CpacError(f"cannot parse class spec {text!r}")


def parse_learner_text(text: str, budget: int) -> dict:
    """Compact learner syntax -> the JSON spec consumed by build_learner."""
    parts = text.split(":")
    name = parts[0]
    if name == "erm":
        if len(parts) != 1:
            raise CpacError("learner erm takes no arguments")
        return {"name": "erm"}
    if name == "erm-good" and len(parts) >= 3:
        return {"name": "erm-good", "k": int(parts[-1]),
                "witness": _parse_witness_text(parts[1:-1], budget)}
    if name == "asym-block" and len(parts) >= 2:
        return {"name": "asym-block", "f": _parse_function_text(":".join(parts[1:]))}
    if name == "lift" and len(parts) >= 2:
        return {"name": "lift", "inner": parse_learner_text(":".join(parts[1:]), budget)}
    raise CpacError(f"cannot parse learner spec {text!r}")


def _parse_sample_text(text: str) -> Sample:
    """"3:1,5:0" -> Sample; empty string -> empty sample."""
    pairs = []
    for chunk in filter(None, (part.strip() for part in text.split(","))):
        try:
            x, y = chunk.split(":")
            pairs.append((int(x), int(y)))
        except ValueError:
            raise CpacError(f"bad sample entry {chunk!r}; entries look like 3:1") from None
    return Sample.from_pairs(pairs)


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _emit(obj: dict) -> None:
    print(json.dumps(obj, sort_keys=True, separators=(",", ":")))


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_dims(args: argparse.Namespace, budget: int) -> int:
    if args.universe < 1:
        raise CpacError("--universe is the window size and must be at least 1")
    spec = parse_class_text(args.class_spec, budget)
    cls = build_class(spec)
    members = cls.enumerate(args.universe - 1)
    view = restrict(members, range(args.universe))
    _emit({
        "class": cls.name,
        "universe": args.universe,
        "members": len(members),
        "vc": vc_dimension_window(view),
        "ldim": ldim_window(view),
        "shattered": list(largest_shattered_set(view)),
    })
    return 0


def _cmd_class_enumerate(args: argparse.Namespace, budget: int) -> int:
    cls = build_class(parse_class_text(args.class_spec, budget))
    members = cls.enumerate(args.max_support)
    _emit({
        "class": cls.name,
        "max_support": args.max_support,
        "count": len(members),
        "members": [list(h.support) for h in members],
    })
    return 0


def _cmd_class_member(args: argparse.Namespace, budget: int) -> int:
    cls = build_class(parse_class_text(args.class_spec, budget))
    h = Hypothesis.from_points(_parse_int_list(args.support))
    answer = cls.contains(h)
    _emit({
        "class": cls.name,
        "support": list(h.support),
        "member": "unknown" if answer is UNKNOWN else bool(answer),
    })
    return 0


def _cmd_witness(args: argparse.Namespace, budget: int) -> int:
    if args.universe < 1:
        raise CpacError("--universe is the window size and must be at least 1")
    witness = build_witness(
        _parse_witness_text(args.witness.split(":"), budget), args.k, budget)
    cls = build_class(parse_class_text(args.class_spec, budget))
    members = cls.enumerate(args.universe - 1)
    tuples = list(itertools.combinations(range(args.universe), args.k + 1))
    _emit({
        "witness": witness.name,
        "k": args.k,
        "class": cls.name,
        "universe": args.universe,
        "members": len(members),
        "tuples": len(tuples),
        "verified": witness_excludes(witness, members, tuples),
    })
    return 0


def _cmd_learn(args: argparse.Namespace, budget: int) -> int:
    cls = build_class(parse_class_text(args.class_spec, budget))
    learner = build_learner(parse_learner_text(args.learner, budget), cls)
    sample = _parse_sample_text(args.sample)
    output = learner(sample)
    obj = {
        "learner": learner.name,
        "class": cls.name,
        "sample_size": len(sample),
        "hypothesis": hypothesis_to_json(output),
        "proper": learner.proper,
    }
    if len(sample):
        obj["empirical_loss"] = fraction_to_str(empirical_loss(output, sample))
    _emit(obj)
    return 0


def _cmd_experiment_run(args: argparse.Namespace, budget: int) -> int:
    try:
        config_obj = json.loads(_read_text(args.config))
    except json.JSONDecodeError as exc:
        raise CpacError(f"{args.config} is not valid JSON: {exc}") from exc
    cfg = ExperimentConfig.from_json(config_obj)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    result = run_experiment(cfg)
    os.makedirs(args.out_dir, exist_ok=True)
    json_path = os.path.join(args.out_dir, "result.json")
    csv_path = os.path.join(args.out_dir, "result.csv")
    with open(json_path, "w", encoding="utf-8") as fh:
        fh.write(result.to_json_text())
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(result.to_csv_text())
    files = [json_path, csv_path]
    if not args.no_figures:
        from .report import render_figures
        files.extend(render_figures(result, args.out_dir))
    summary = {
        "kind": cfg.kind,
        "seed": cfg.seed,
        "inf_loss": fraction_to_str(result.inf_loss),
        "rows": len(result.rows),
        "files": files,
    }
    if result.estimates is not None:
        summary["estimates"] = [
            {"n": est.n, "m": est.m} for est in result.estimates]
    _emit(summary)
    return 0


def _cmd_demo_diagonal(args: argparse.Namespace, budget: int) -> int:
    program = Program.from_text(_read_text(args.witness))
    demo = diagonalization_demo(program, args.k, args.budget or budget)
    _emit({
        "k": args.k,
        "e": demo.e,
        "steps": demo.steps,
        "points": list(demo.points),
        "output": list(demo.output),
        "support": list(demo.hypothesis.support),
    })
    return 0


def _cmd_demo_obstruction(args: argparse.Namespace, budget: int) -> int:
    f = surrogate(args.f)
    zero_loss = scpac_obstruction_demo(args.k, f)
    _emit({
        "k": args.k,
        "f": f.name,
        "zero_loss": zero_loss,
        "in_range": f.range_contains(args.k),
    })
    return 0


def _cmd_machine_run(args: argparse.Namespace, budget: int) -> int:
    program = Program.from_text(_read_text(args.program))
    outcome = run_bounded(program, _parse_int_list(args.inputs), args.budget or budget)
    _emit({
        "status": outcome.status,
        "steps": outcome.steps_used,
        "output": list(outcome.output) if outcome.output is not None else None,
    })
    return 0


def _cmd_machine_encode(args: argparse.Namespace, budget: int) -> int:
    program = Program.from_text(_read_text(args.program))
    obj = {"code": program.to_code()}
    if args.k is not None:
        obj["pair_index"] = machine_pair_index(program, args.k)
    _emit(obj)
    return 0


def _cmd_machine_decode(args: argparse.Namespace, budget: int) -> int:
    program, k = enumerate_machine_pairs(args.index)
    _emit({
        "index": args.index,
        "k": k,
        "program": program.to_text(),
        "instructions": len(program),
    })
    return 0


# ---------------------------------------------------------------------------
# parser assembly


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpaclab",
        description="finitely supported hypothesis classes, exact losses, "
                    "dimension windows, and seeded learning experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", help="VC and Littlestone dimensions over a window")
    p.add_argument("--class", dest="class_spec", required=True)
    p.add_argument("--universe", type=int, required=True,
                   help="window size N: members restricted to points 0..N-1")
    p.set_defaults(handler=_cmd_dims)

    p = sub.add_parser("class", help="enumerate a class or test membership")
    class_sub = p.add_subparsers(dest="class_command", required=True)
    q = class_sub.add_parser("enumerate")
    q.add_argument("--class", dest="class_spec", required=True)
    q.add_argument("--max-support", type=int, required=True)
    q.set_defaults(handler=_cmd_class_enumerate)
    q = class_sub.add_parser("member")
    q.add_argument("--class", dest="class_spec", required=True)
    q.add_argument("--support", required=True, help="comma-separated points, e.g. 2,4,6")
    q.set_defaults(handler=_cmd_class_member)

    p = sub.add_parser("witness", help="check that no member realizes the forbidden pattern")
    p.add_argument("--witness", required=True, help="all-ones | all-zeros | machine:PATH")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--class", dest="class_spec", required=True)
    p.add_argument("--universe", type=int, required=True,
                   help="window size N: members and tuples from points 0..N-1")
    p.set_defaults(handler=_cmd_witness)

    p = sub.add_parser("learn", help="run a learner on an inline sample")
    p.add_argument("--class", dest="class_spec", required=True)
    p.add_argument("--learner", required=True)
    p.add_argument("--sample", required=True, help='comma-separated x:y pairs, e.g. "3:1,5:0"')
    p.set_defaults(handler=_cmd_learn)

    p = sub.add_parser("experiment", help="run a seeded experiment from a config file")
    exp_sub = p.add_subparsers(dest="experiment_command", required=True)
    q = exp_sub.add_parser("run")
    q.add_argument("config", help="path to a JSON experiment config")
    q.add_argument("--out-dir", required=True)
    q.add_argument("--seed", type=int, default=None, help="override the config seed")
    q.add_argument("--no-figures", action="store_true")
    q.set_defaults(handler=_cmd_experiment_run)

    p = sub.add_parser("demo", help="the two headline constructions")
    demo_sub = p.add_subparsers(dest="demo_command", required=True)
    q = demo_sub.add_parser("diagonal")
    q.add_argument("--witness", required=True, help="path to a witness program")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--budget", type=int, default=None)
    q.set_defaults(handler=_cmd_demo_diagonal)
    q = demo_sub.add_parser("obstruction")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--f", required=True, help="inc | prime | double")
    q.set_defaults(handler=_cmd_demo_obstruction)

    p = sub.add_parser("machine", help="run or code counter-machine programs")
    machine_sub = p.add_subparsers(dest="machine_command", required=True)
    q = machine_sub.add_parser("run")
    q.add_argument("program", help="path to a program text file")
    q.add_argument("--inputs", default="", help="comma-separated register values")
    q.add_argument("--budget", type=int, default=None)
    q.set_defaults(handler=_cmd_machine_run)
    q = machine_sub.add_parser("encode")
    q.add_argument("program", help="path to a program text file")
    q.add_argument("--k", type=int, default=None,
                   help="also emit the (program, k) pair index")
    q.set_defaults(handler=_cmd_machine_encode)
    q = machine_sub.add_parser("decode")
    q.add_argument("index", type=int, help="a (program, k) pair index")
    q.set_defaults(handler=_cmd_machine_decode)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        budget = args.budget if getattr(args, "budget", None) else _default_budget()
        return args.handler(args, budget)
    except CpacError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
