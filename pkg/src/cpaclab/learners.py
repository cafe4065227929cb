"""Empirical risk minimizers and the sample-rerun lift.

Every learner here is deterministic: candidate pools are enumerated in a
fixed order and ties in empirical loss are broken by the canonical hypothesis
order (support size, then lexicographic support).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .classes import (ClassDescriptor, enumerate_good, odd_marked_hypothesis,
                      punctured_hypothesis)
from .core import (Hypothesis, Learner, Sample, canonical_key,
                   empirical_distribution, empirical_loss, enumerate_samples)
from .dims import WitnessFn
from .errors import CpacError, EmptySampleError, UndecidableRangeError
from .machines import EnumerableFunction, SurrogateFunction

LIFT_ENUMERATION_BUDGET = 10**6


def argmin_canonical(candidates: Iterable[Hypothesis],
                     sample: Sample) -> tuple[Hypothesis, Fraction]:
    """Least (empirical loss, canonical order) pair over the candidates."""
    best: Optional[Hypothesis] = None
    best_loss: Optional[Fraction] = None
    for h in candidates:
        loss = empirical_loss(h, sample)
        if best is None or (loss, canonical_key(h)) < (best_loss, canonical_key(best)):
            best, best_loss = h, loss
    if best is None or best_loss is None:
        raise CpacError("empty candidate pool")
    return best, best_loss


def erm_bounded(cls: ClassDescriptor, sample: Sample,
                bound_growth_limit: int = 64) -> Hypothesis:
    """ERM over cls members enumerated within the sample's point range.

    The enumeration bound starts at the largest sample point (0 for the empty
    sample) and grows by one, up to bound_growth_limit extra points, if no
    member fits inside the window yet (a class whose members need more room
    than the sample spans, e.g. fixed support size d with few points seen).
    On the empty sample the canonically least member is returned.
    """
    bound = sample.max_point(default=0)
    members: list[Hypothesis] = []
    for extra in range(bound_growth_limit + 1):
        members = cls.enumerate(bound + extra)
        if members:
            break
    if not members:
        raise CpacError(f"class {cls.name} has no members within "
                        f"{bound + bound_growth_limit} points of the sample window")
    if len(sample) == 0:
        return min(members, key=canonical_key)
    return argmin_canonical(members, sample)[0]


def erm_good(sample: Sample, witness: WitnessFn, k: int) -> Hypothesis:
    """ERM over the good hypotheses within the sample's point range."""
    if len(sample) == 0:
        return Hypothesis(())
    goods = enumerate_good(sample.max_point(default=0), witness, k)
    return argmin_canonical(goods, sample)[0]


@dataclass(frozen=True)
class AsymptoticErmReport:
    """What the asymptotic block learner did: output, exact loss achieved,
    the additive slack it is entitled to (when computable), and how many
    candidates it inspected."""

    output: Hypothesis
    achieved_loss: Fraction
    epsilon: Optional[Fraction]
    epsilon_note: str
    candidate_count: int


def epsilon_block(m: int, f: EnumerableFunction) -> Fraction:
    """Slack schedule for the block learner: 1 over the least element of
    range(f) not hit by f({1..m}).  Needs decidable range membership."""
    if m < 1:
        raise ValueError("the slack schedule is defined for m >= 1")
    if not isinstance(f, SurrogateFunction):
        raise UndecidableRangeError(
            f"epsilon schedule needs decidable range membership; {f.name} is {f.kind}")
    hit = {f(a) for a in range(1, m + 1)}
    value = 1
    while True:
        if f.range_contains(value) and value not in hit:
            return Fraction(1, value)
        value += 1


def _block_candidate_pool(sample: Sample, f: EnumerableFunction) -> list[Hypothesis]:
    """The finite pool that witnesses near-optimality over the block family:
    one member that is zero on the sample window, every punctured block that
    meets the window, and the first max(m, M) odd-marked members."""
    m = len(sample)
    window_top = sample.max_point(default=0)
    pool = {punctured_hypothesis(max(window_top, 1), 1)}
    k = 1
    while k * k - k + 2 <= window_top:
        pool.update(punctured_hypothesis(k, j) for j in range(1, k + 1))
        k += 1
    for a in range(1, max(m, window_top) + 1):
        pool.add(odd_marked_hypothesis(a, f))
    return sorted(pool, key=canonical_key)


def asymptotic_erm_block(sample: Sample, f: EnumerableFunction) -> AsymptoticErmReport:
    """ERM over the block-family candidate pool for the sample.

    The pool provably contains a member within epsilon_block(m, f) of the
    class infimum, so the exact argmin over it satisfies the asymptotic ERM
    contract.  A dovetailed f whose budget cannot produce the needed values
    raises NotYetEnumeratedError; its slack schedule is not computable, which
    the report states instead of guessing.
    """
    if len(sample) == 0:
        raise EmptySampleError("the asymptotic block learner needs a nonempty sample")
    pool = _block_candidate_pool(sample, f)
    output, achieved = argmin_canonical(pool, sample)
    if isinstance(f, SurrogateFunction):
        eps: Optional[Fraction] = epsilon_block(len(sample), f)
        note = "exact"
    else:
        eps = None
        note = "uncomputable schedule"
    return AsymptoticErmReport(output, achieved, eps, note, len(pool))


def lift_to_asymptotic_erm(inner: Learner, sample: Sample,
                           epsilon_schedule: Optional[Callable[[int], Fraction]] = None,
                           budget: int = LIFT_ENUMERATION_BUDGET) -> Hypothesis:
    """Re-run the inner learner on every same-size sample over the empirical
    distribution's support and keep the output of least empirical loss.

    epsilon_schedule is reporting metadata only (see lift_report); the argmin
    itself never depends on it.  The empty sample is its own only rerun.
    """
    if len(sample) == 0:
        return inner(sample)
    reruns = enumerate_samples(empirical_distribution(sample), len(sample), budget)
    outputs = [inner(rerun) for rerun in reruns]
    return argmin_canonical(outputs, sample)[0]


def lift_report(inner: Learner, sample: Sample,
                epsilon_schedule: Optional[Callable[[int], Fraction]] = None,
                budget: int = LIFT_ENUMERATION_BUDGET) -> tuple[Hypothesis, Optional[Fraction]]:
    """lift_to_asymptotic_erm plus the slack the schedule grants at |S|."""
    h = lift_to_asymptotic_erm(inner, sample, epsilon_schedule, budget)
    eps = epsilon_schedule(len(sample)) if epsilon_schedule is not None and len(sample) else None
    return h, eps


# ---------------------------------------------------------------------------
# Learner-contract wrappers (total on the empty sample by returning the
# canonically least admissible member)


def erm_learner(cls: ClassDescriptor) -> Learner:
    return Learner(name=f"erm[{cls.name}]",
                   fn=lambda sample: erm_bounded(cls, sample),
                   proper_for=cls.name)


def erm_good_learner(witness: WitnessFn, k: int) -> Learner:
    return Learner(name=f"erm-good[{witness.name},k={k}]",
                   fn=lambda sample: erm_good(sample, witness, k),
                   proper_for=f"good({witness.name},k={k})")


def block_erm_learner(f: EnumerableFunction) -> Learner:
    def fn(sample: Sample) -> Hypothesis:
        if len(sample) == 0:
            return punctured_hypothesis(1, 1)
        return asymptotic_erm_block(sample, f).output

    return Learner(name=f"asym-block[{f.name}]", fn=fn, proper_for=f"block({f.name})")


def lifted_learner(inner: Learner, budget: int = LIFT_ENUMERATION_BUDGET) -> Learner:
    return Learner(name=f"lift[{inner.name}]",
                   fn=lambda sample: lift_to_asymptotic_erm(inner, sample, budget=budget),
                   proper_for=inner.proper_for)
