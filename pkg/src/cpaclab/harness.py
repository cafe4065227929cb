"""Seeded Monte-Carlo experiments and the two headline demonstrations.

Success statistics are frequencies of exact rational events: a trial draws a
sample with a per-trial generator derived from (seed, pair(m_index, trial)),
runs the learner, and compares exact losses.  Floats appear only when a rate
is formatted for output.  Results carry the generator id so a run can be
replayed bit-for-bit from its config file alone.

The infimum of the true loss over a class is computed exactly by enumerating
a finite candidate pool that provably realizes every achievable loss under
the given finitely supported distribution; classes for which no such pool is
known raise ReachError instead of guessing.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .classes import (ClassDescriptor, baseline_class, block,
                      block_class, block_class_membership, diagonal_block,
                      diagonal_class, diagonal_hypothesis, full_class,
                      good_class, punctured_hypothesis, odd_marked_hypothesis)
from .core import (Distribution, Hypothesis, Learner, Sample, canonical_key,
                   distribution_from_json, distribution_to_json, draw_sample,
                   empirical_distribution, empirical_loss, fraction_to_str,
                   true_loss)
from .dims import WitnessFn, all_ones_witness, all_zeros_witness, verify_witness
from .errors import (BudgetExceededError, CpacError, ReachError,
                     UndecidableRangeError)
from .learners import (block_erm_learner, erm_good_learner, erm_learner,
                       lifted_learner)
from .machines import (DovetailedFunction, EnumerableFunction, Program,
                       SurrogateFunction, decode_pair, encode_pair,
                       machine_pair_index, run_bounded, surrogate,
                       witness_from_program)
from .rng import GENERATOR_ID, derive_seed

DEFAULT_MACHINE_BUDGET = 100_000

_KINDS = ("pac", "uniform-convergence", "sample-complexity")


# ---------------------------------------------------------------------------
# registry: build classes, witnesses, functions, learners from JSON-able specs


def build_function(spec) -> EnumerableFunction:
    """"inc" | "prime" | "double", or {"dovetail": <program text>, "rounds": n}."""
    if isinstance(spec, str):
        return surrogate(spec)
    if isinstance(spec, dict) and "dovetail" in spec:
        program = Program.from_text(spec["dovetail"])
        return DovetailedFunction(program, max_rounds=int(spec.get("rounds", 2000)))
    raise CpacError(f"cannot build an enumerable function from {spec!r}")


def build_witness(spec, k: int, budget: int = DEFAULT_MACHINE_BUDGET) -> WitnessFn:
    """"all-ones" | "all-zeros", or {"machine": <program text>, "budget": n}."""
    if spec == "all-ones":
        return all_ones_witness(k)
    if spec == "all-zeros":
        return all_zeros_witness(k)
    if isinstance(spec, dict) and "machine" in spec:
        program = Program.from_text(spec["machine"])
        return witness_from_program(program, k, int(spec.get("budget", budget)))
    raise CpacError(f"cannot build a witness from {spec!r}")


def build_class(spec: dict) -> ClassDescriptor:
    """Resolve a class spec: full, baseline, block, good, diagonal."""
    if not isinstance(spec, dict) or "name" not in spec:
        raise CpacError('class specs look like {"name": "baseline", "d": 1}')
    name = spec["name"]
    if name == "full":
        return full_class()
    if name == "baseline":
        return baseline_class(int(spec["d"]))
    if name == "block":
        return block_class(build_function(spec["f"]))
    if name == "good":
        k = int(spec["k"])
        return good_class(build_witness(spec["witness"], k), k)
    if name == "diagonal":
        return diagonal_class()
    raise CpacError(f"unknown class {name!r}")


def build_learner(spec: dict, cls: ClassDescriptor) -> Learner:
    """Resolve a learner spec against the experiment's class."""
    if not isinstance(spec, dict) or "name" not in spec:
        raise CpacError('learner specs look like {"name": "erm"}')
    name = spec["name"]
    if name == "erm":
        return erm_learner(cls)
    if name == "erm-good":
        k = int(spec["k"])
        return erm_good_learner(build_witness(spec["witness"], k), k)
    if name == "asym-block":
        return block_erm_learner(build_function(spec["f"]))
    if name == "lift":
        return lifted_learner(build_learner(spec["inner"], cls))
    raise CpacError(f"unknown learner {name!r}")


# ---------------------------------------------------------------------------
# exact infimum over a class under a finitely supported distribution


def _certified_candidates(class_spec: dict, dist: Distribution) -> list[Hypothesis]:
    """A finite pool realizing, on supp(dist), every behavior of the class.

    full: all subsets of the distribution's points (any behavior elsewhere is
    irrelevant to the loss).  baseline-d: supports within {0..max+d}; any
    member's restriction to the points extends to such a support.  block:
    punctured blocks meeting the window, odd-marked members whose marker or
    block meets it, and the zero member; everything else restricts to zero.
    """
    name = class_spec.get("name")
    points = sorted({e.point for e in dist.support()})
    top = points[-1]
    if name == "full":
        if len(points) > 20:
            raise ReachError("full-class infimum limited to 20 distribution points")
        return [Hypothesis(combo)
                for size in range(len(points) + 1)
                for combo in itertools.combinations(points, size)]
    if name == "baseline":
        d = int(class_spec["d"])
        return [Hypothesis(combo)
                for combo in itertools.combinations(range(top + d + 1), d)]
    if name == "block":
        f = build_function(class_spec["f"])
        if not isinstance(f, SurrogateFunction):
            raise ReachError("block-class infimum needs a decidable surrogate")
        pool = {punctured_hypothesis(1, 1)}
        kmax = 0
        k = 1
        while k * k - k + 2 <= top:
            pool.update(punctured_hypothesis(k, j) for j in range(1, k + 1))
            kmax = k
            k += 1
        marker_top = max((top - 1) // 2, 0)
        a, last = 1, 0
        while True:
            value = f(a)
            if value <= last:
                raise ReachError(
                    f"certifying the block infimum needs a strictly increasing surrogate; "
                    f"{f.name}({a}) = {value} after {last}")
            last = value
            if value <= kmax or a <= marker_top:
                pool.add(odd_marked_hypothesis(a, f))
            if value > kmax and a > marker_top:
                break
            a += 1
        return sorted(pool, key=canonical_key)
    raise ReachError(f"no exact-infimum certificate for class {name!r}")


def exact_infimum(class_spec: dict, dist: Distribution) -> Fraction:
    """Exact infimum of the true loss over the class (see _certified_candidates)."""
    pool = _certified_candidates(class_spec, dist)
    return min(true_loss(h, dist) for h in pool)


# ---------------------------------------------------------------------------
# experiment configuration and results


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    class_spec: dict
    learner_spec: dict
    distribution: Distribution
    m_grid: tuple[int, ...]
    trials: int
    seed: int
    n: Optional[int] = None
    n_grid: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise CpacError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.trials < 1:
            raise CpacError("trials must be positive")
        if not self.m_grid or any(m < 0 for m in self.m_grid):
            raise CpacError("m_grid must be a nonempty list of nonnegative sizes")
        if self.kind in ("pac", "uniform-convergence"):
            if self.n is None or self.n < 1:
                raise CpacError(f"{self.kind} experiments need an accuracy index n >= 1")
        if self.kind == "uniform-convergence" and min(self.m_grid) < 1:
            raise CpacError("uniform convergence is undefined at m = 0")
        if self.kind == "sample-complexity":
            if not self.n_grid or any(n < 1 for n in self.n_grid):
                raise CpacError("sample-complexity experiments need a grid of n >= 1")

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        if not isinstance(obj, dict):
            raise CpacError("an experiment config is a JSON object")
        unknown = set(obj) - {"kind", "class", "learner", "distribution",
                              "m_grid", "trials", "seed", "n", "n_grid"}
        if unknown:
            raise CpacError(f"unknown config fields: {sorted(unknown)}")
        try:
            return cls(
                kind=obj["kind"],
                class_spec=obj["class"],
                learner_spec=obj["learner"],
                distribution=distribution_from_json(obj["distribution"]),
                m_grid=tuple(int(m) for m in obj["m_grid"]),
                trials=int(obj["trials"]),
                seed=int(obj["seed"]),
                n=int(obj["n"]) if "n" in obj and obj["n"] is not None else None,
                n_grid=tuple(int(n) for n in obj["n_grid"]) if obj.get("n_grid") else None,
            )
        except KeyError as exc:
            raise CpacError(f"config is missing {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise CpacError(f"bad config value: {exc}") from exc

    def to_json_obj(self) -> dict:
        obj = {
            "kind": self.kind,
            "class": self.class_spec,
            "learner": self.learner_spec,
            "distribution": distribution_to_json(self.distribution),
            "m_grid": list(self.m_grid),
            "trials": self.trials,
            "seed": self.seed,
        }
        if self.n is not None:
            obj["n"] = self.n
        if self.n_grid is not None:
            obj["n_grid"] = list(self.n_grid)
        return obj


@dataclass(frozen=True)
class ResultRow:
    m: int
    trials: int
    successes: int
    n: Optional[int] = None
    selected: Optional[bool] = None

    @property
    def rate(self) -> Fraction:
        return Fraction(self.successes, self.trials)

    @property
    def rate_text(self) -> str:
        return f"{self.successes / self.trials:.6f}"


@dataclass(frozen=True)
class Estimate:
    n: int
    m: Optional[int]
    rate_text: Optional[str]


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    generator_id: str
    inf_loss: Fraction
    rows: tuple[ResultRow, ...]
    estimates: Optional[tuple[Estimate, ...]] = None

    def to_json_obj(self) -> dict:
        obj = {
            "kind": self.config.kind,
            "config": self.config.to_json_obj(),
            "generator_id": self.generator_id,
            "inf_loss": fraction_to_str(self.inf_loss),
            "rows": [],
        }
        for row in self.rows:
            entry = {"m": row.m, "trials": row.trials,
                     "successes": row.successes, "rate": row.rate_text}
            if row.n is not None:
                entry["n"] = row.n
            if row.selected is not None:
                entry["selected"] = row.selected
            obj["rows"].append(entry)
        if self.estimates is not None:
            obj["estimates"] = [
                {"n": est.n, "m": est.m, "rate": est.rate_text} for est in self.estimates]
        return obj

    def to_json_text(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n"

    def to_csv_text(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        curve = self.config.kind == "sample-complexity"
        head = ["n", "m", "trials", "successes", "rate", "selected"] if curve \
            else ["m", "trials", "successes", "rate"]
        writer.writerow(head + ["inf_loss_num", "inf_loss_den", "seed", "generator_id"])
        for row in self.rows:
            tail = [self.inf_loss.numerator, self.inf_loss.denominator,
                    self.config.seed, self.generator_id]
            if curve:
                writer.writerow([row.n, row.m, row.trials, row.successes,
                                 row.rate_text, int(bool(row.selected))] + tail)
            else:
                writer.writerow([row.m, row.trials, row.successes, row.rate_text] + tail)
        return buffer.getvalue()


# ---------------------------------------------------------------------------
# experiment runners


def _trial_seed(seed: int, m_index: int, trial: int) -> int:
    return derive_seed(seed, encode_pair(m_index, trial))


def pac_success_rate(cfg: ExperimentConfig) -> ExperimentResult:
    """Per-m frequency of trials whose output is within 1/n of the infimum."""
    if cfg.kind != "pac":
        raise CpacError(f"pac_success_rate got a {cfg.kind} config")
    cls = build_class(cfg.class_spec)
    learner = build_learner(cfg.learner_spec, cls)
    inf_loss = exact_infimum(cfg.class_spec, cfg.distribution)
    slack = Fraction(1, cfg.n)  # type: ignore[arg-type]
    rows = []
    for m_index, m in enumerate(cfg.m_grid):
        successes = 0
        for trial in range(cfg.trials):
            sample = draw_sample(cfg.distribution, m, _trial_seed(cfg.seed, m_index, trial))
            output = learner(sample)
            if true_loss(output, cfg.distribution) <= inf_loss + slack:
                successes += 1
        rows.append(ResultRow(m=m, trials=cfg.trials, successes=successes))
    return ExperimentResult(cfg, GENERATOR_ID, inf_loss, tuple(rows))


def uniform_convergence_rate(cfg: ExperimentConfig) -> ExperimentResult:
    """Per-m frequency of trials where every candidate's empirical loss is
    within 1/n of its true loss (the supremum taken over the certified pool,
    which realizes all class behaviors on the distribution's points)."""
    if cfg.kind != "uniform-convergence":
        raise CpacError(f"uniform_convergence_rate got a {cfg.kind} config")
    pool = _certified_candidates(cfg.class_spec, cfg.distribution)
    inf_loss = min(true_loss(h, cfg.distribution) for h in pool)
    slack = Fraction(1, cfg.n)  # type: ignore[arg-type]
    true_losses = [(h, true_loss(h, cfg.distribution)) for h in pool]
    rows = []
    for m_index, m in enumerate(cfg.m_grid):
        successes = 0
        for trial in range(cfg.trials):
            sample = draw_sample(cfg.distribution, m, _trial_seed(cfg.seed, m_index, trial))
            empirical = empirical_distribution(sample)
            if all(abs(exact - true_loss(h, empirical)) <= slack for h, exact in true_losses):
                successes += 1
        rows.append(ResultRow(m=m, trials=cfg.trials, successes=successes))
    return ExperimentResult(cfg, GENERATOR_ID, inf_loss, tuple(rows))


def sample_complexity_curve(cfg: ExperimentConfig) -> ExperimentResult:
    """Empirical estimate, per n, of the smallest grid m whose success rate
    reaches 1 - 1/n.  Trials are shared across n (the per-trial generator
    does not depend on n), so tightening n can only shrink the success set.
    """
    if cfg.kind != "sample-complexity":
        raise CpacError(f"sample_complexity_curve got a {cfg.kind} config")
    cls = build_class(cfg.class_spec)
    learner = build_learner(cfg.learner_spec, cls)
    inf_loss = exact_infimum(cfg.class_spec, cfg.distribution)
    excess: dict[tuple[int, int], Fraction] = {}
    for m_index, m in enumerate(cfg.m_grid):
        for trial in range(cfg.trials):
            sample = draw_sample(cfg.distribution, m, _trial_seed(cfg.seed, m_index, trial))
            output = learner(sample)
            excess[m_index, trial] = true_loss(output, cfg.distribution) - inf_loss
    rows = []
    estimates = []
    for n in cfg.n_grid:  # type: ignore[union-attr]
        slack = Fraction(1, n)
        chosen: Optional[int] = None
        chosen_rate: Optional[str] = None
        per_m = []
        for m_index, m in enumerate(cfg.m_grid):
            successes = sum(
                1 for trial in range(cfg.trials) if excess[m_index, trial] <= slack)
            per_m.append((m, successes))
        for m, successes in per_m:
            selected = chosen is None and successes * n >= cfg.trials * (n - 1)
            if selected:
                chosen = m
                chosen_rate = f"{successes / cfg.trials:.6f}"
            rows.append(ResultRow(m=m, trials=cfg.trials, successes=successes,
                                  n=n, selected=selected))
        estimates.append(Estimate(n=n, m=chosen, rate_text=chosen_rate))
    return ExperimentResult(cfg, GENERATOR_ID, inf_loss, tuple(rows), tuple(estimates))


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    runner = {
        "pac": pac_success_rate,
        "uniform-convergence": uniform_convergence_rate,
        "sample-complexity": sample_complexity_curve,
    }[cfg.kind]
    return runner(cfg)


# ---------------------------------------------------------------------------
# demonstrations


@dataclass(frozen=True)
class DiagonalizationDemo:
    """A constructed member refuting a machine-evaluated witness on its own
    block: the machine at index e halts in s steps on the block tuple, and
    the member realizes exactly the pattern the witness forbids."""

    e: int
    steps: int
    hypothesis: Hypothesis
    points: tuple[int, ...]
    output: tuple[int, ...]


def diagonalization_demo(witness_program: Program, k: int,
                         budget: int = DEFAULT_MACHINE_BUDGET) -> DiagonalizationDemo:
    """Build the member that defeats a machine-coded k-witness.

    The witness program must read a strictly increasing (k+1)-tuple from
    registers 1..k+1 and emit k+1 bits.  Its own enumeration index e owns a
    block of exactly k+1 even points; running it there and planting the
    forbidden pattern plus the (e, s) marker yields a class member on which
    the witness fails.
    """
    if k < 0:
        raise ValueError("witness arity k must be nonnegative")
    e = machine_pair_index(witness_program, k + 1)
    points = diagonal_block(e)
    h = diagonal_hypothesis(e, budget)
    if h is None:
        raise BudgetExceededError(
            f"witness program did not halt with {k + 1} output bits within "
            f"{budget} steps on its own block {points}")
    marker = max(x for x in h.support if x % 2)
    _, steps = decode_pair((marker - 1) // 2)
    outcome = run_bounded(witness_program, points, budget)
    witness = witness_from_program(witness_program, k, budget)
    if verify_witness(witness, [h], [points]):
        raise CpacError("self-check failed: the member does not realize the forbidden pattern")
    return DiagonalizationDemo(e=e, steps=steps, hypothesis=h,
                               points=points, output=outcome.output or ())


def scpac_obstruction_demo(k: int, f: EnumerableFunction,
                           erm_candidate: Optional[Learner] = None) -> bool:
    """Zero-loss test separating range membership of f.

    Labels every element of block k positive (each exactly once) and runs a
    proper ERM for the block family.  Exactly the blocks indexed by range(f)
    admit a zero-loss member, so the returned flag equals k in range(f); the
    demo asserts that equivalence and raises if the learner breaks it.
    """
    if k < 1:
        raise ValueError("block indices start at 1")
    if not isinstance(f, SurrogateFunction):
        raise UndecidableRangeError(
            "the obstruction demo asserts against range membership, so it needs a surrogate")
    sample = Sample.from_pairs((x, 1) for x in block(k).elements)
    learner = erm_candidate if erm_candidate is not None else block_erm_learner(f)
    output = learner(sample)
    membership = block_class_membership(output, f)
    if membership is not True:
        raise CpacError(f"obstruction demo needs a proper learner; "
                        f"{learner.name} returned {output} (membership {membership!r})")
    zero_loss = empirical_loss(output, sample) == 0
    if zero_loss != f.range_contains(k):
        raise CpacError(
            f"zero-loss at block {k} is {zero_loss} but range membership is "
            f"{f.range_contains(k)}; the candidate is not an ERM over the block family")
    return zero_loss
