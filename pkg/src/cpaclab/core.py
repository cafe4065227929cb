"""Hypotheses, samples, distributions, and exact rational risk.

A hypothesis is a 0/1 function on the naturals with finite support, stored as
the strictly increasing tuple of points it maps to 1.  Losses are exact
`fractions.Fraction` values throughout; floats appear only in aggregate
statistics produced by the harness.

JSON interchange formats (used by the CLI and config files):

    hypothesis     {"support": [4, 6]}
    sample         [[x, y], ...]                 (order preserved, repeats kept)
    distribution   [[x, y, "num/den"], ...]      (weights sum to exactly 1)

Sampling is deterministic given a seed: each draw consumes one 64-bit output
u of the generator and selects the first support element (in (point, label)
order) whose cumulative weight C satisfies u < ceil(C * 2^64).  This is the
exact comparison u / 2^64 < C, so atom probabilities are reproduced to within
2^-64 per draw and replay identically everywhere.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Optional

from .errors import BudgetExceededError, EmptySampleError
from .rng import SplitMix64

SAMPLE_ENUMERATION_BUDGET = 10**6


class LabeledExample(NamedTuple):
    point: int
    label: int


def _check_point(x: object) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < 0:
        raise ValueError(f"points must be nonnegative integers, got {x!r}")
    return x


def _check_label(y: object) -> int:
    if isinstance(y, bool) or y not in (0, 1):
        raise ValueError(f"labels must be 0 or 1, got {y!r}")
    return y  # type: ignore[return-value]


@dataclass(frozen=True)
class Hypothesis:
    """Finitely supported 0/1 function; `support` is strictly increasing."""

    support: tuple[int, ...]

    def __post_init__(self) -> None:
        support = tuple(self.support)
        object.__setattr__(self, "support", support)
        for x in support:
            _check_point(x)
        if any(a >= b for a, b in zip(support, support[1:])):
            raise ValueError("support must be strictly increasing without repeats")

    @cached_property
    def point_set(self) -> frozenset[int]:
        return frozenset(self.support)

    @classmethod
    def from_points(cls, points: Iterable[int]) -> "Hypothesis":
        """Build from any iterable of points (sorted and deduplicated)."""
        return cls(tuple(sorted(set(points))))

    def __call__(self, x: int) -> int:
        return 1 if x in self.point_set else 0

    def __repr__(self) -> str:
        return f"Hypothesis({list(self.support)!r})"


def canonical_key(h: Hypothesis) -> tuple[int, tuple[int, ...]]:
    """Total order on hypotheses: support size, then lexicographic support."""
    return (len(h.support), h.support)


@dataclass(frozen=True)
class Sample:
    """A finite labeled sequence; order and repetitions are significant."""

    examples: tuple[LabeledExample, ...]

    def __post_init__(self) -> None:
        cleaned = tuple(
            LabeledExample(_check_point(x), _check_label(y)) for x, y in self.examples
        )
        object.__setattr__(self, "examples", cleaned)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "Sample":
        return cls(tuple(LabeledExample(x, y) for x, y in pairs))

    def __len__(self) -> int:
        return len(self.examples)

    def __iter__(self) -> Iterator[LabeledExample]:
        return iter(self.examples)

    def max_point(self, default: int = 0) -> int:
        if not self.examples:
            return default
        return max(x for x, _ in self.examples)


@dataclass(frozen=True)
class Distribution:
    """Finitely supported distribution over labeled examples, exact weights.

    `items` is sorted by (point, label); every weight is a positive Fraction
    and the weights sum to exactly 1.
    """

    items: tuple[tuple[LabeledExample, Fraction], ...]

    def __post_init__(self) -> None:
        items = tuple((LabeledExample(*e), Fraction(w)) for e, w in self.items)
        object.__setattr__(self, "items", items)
        seen = set()
        total = Fraction(0)
        for example, weight in items:
            _check_point(example.point)
            _check_label(example.label)
            if example in seen:
                raise ValueError(f"duplicate example {example} in distribution")
            seen.add(example)
            if weight <= 0:
                raise ValueError(f"weight for {example} must be positive")
            total += weight
        if list(items) != sorted(items, key=lambda it: it[0]):
            raise ValueError("distribution items must be sorted by (point, label)")
        if not items:
            raise ValueError("distribution needs at least one example")
        if total != 1:
            raise ValueError(f"weights must sum to 1 exactly, got {total}")

    @classmethod
    def from_weights(cls, weights: Mapping[LabeledExample, Fraction]) -> "Distribution":
        items = tuple(sorted(((LabeledExample(*e), Fraction(w)) for e, w in weights.items()),
                             key=lambda it: it[0]))
        return cls(items)

    @classmethod
    def uniform(cls, examples: Iterable[tuple[int, int]]) -> "Distribution":
        examples = [LabeledExample(x, y) for x, y in examples]
        if len(set(examples)) != len(examples):
            raise ValueError("uniform distribution needs distinct examples")
        w = Fraction(1, len(examples))
        return cls.from_weights({e: w for e in examples})

    @classmethod
    def point_mass(cls, example: tuple[int, int]) -> "Distribution":
        return cls.from_weights({LabeledExample(*example): Fraction(1)})

    def support(self) -> tuple[LabeledExample, ...]:
        return tuple(e for e, _ in self.items)

    def weight(self, example: tuple[int, int]) -> Fraction:
        target = LabeledExample(*example)
        for e, w in self.items:
            if e == target:
                return w
        return Fraction(0)

    def max_point(self) -> int:
        return max(e.point for e, _ in self.items)


# ---------------------------------------------------------------------------
# losses


def empirical_loss(h: Hypothesis, sample: Sample) -> Fraction:
    """Fraction of sample entries h labels incorrectly (repeats count)."""
    m = len(sample)
    if m == 0:
        raise EmptySampleError("empirical loss is undefined on an empty sample")
    members = h.point_set
    bad = sum(1 for x, y in sample.examples if (x in members) != y)
    return Fraction(bad, m)


def true_loss(h: Hypothesis, dist: Distribution) -> Fraction:
    """Probability mass of the disagreement region of h under dist."""
    members = h.point_set
    total = Fraction(0)
    for (x, y), w in dist.items:
        if (x in members) != y:
            total += w
    return total


def empirical_distribution(sample: Sample) -> Distribution:
    """Distribution putting weight 1/|S| on each entry (repeats add up)."""
    m = len(sample)
    if m == 0:
        raise EmptySampleError("the empirical distribution of an empty sample is undefined")
    counts = Counter(sample.examples)
    return Distribution.from_weights({e: Fraction(c, m) for e, c in counts.items()})


# ---------------------------------------------------------------------------
# sampling


def draw_sample(dist: Distribution, m: int, seed: int) -> Sample:
    """Draw m points i.i.d. from dist with the documented generator recipe."""
    if m < 0:
        raise ValueError("sample size must be nonnegative")
    # integer thresholds T_i = ceil(C_i * 2^64); draw e_i for the least i with u < T_i
    thresholds: list[tuple[int, LabeledExample]] = []
    cumulative = Fraction(0)
    for example, weight in dist.items:
        cumulative += weight
        ceiling = -((-cumulative.numerator << 64) // cumulative.denominator)
        thresholds.append((ceiling, example))
    rng = SplitMix64(seed)
    drawn = []
    for _ in range(m):
        u = rng.next_u64()
        for threshold, example in thresholds:
            if u < threshold:
                drawn.append(example)
                break
    return Sample(tuple(drawn))


def enumerate_samples(dist: Distribution, m: int,
                      budget: int = SAMPLE_ENUMERATION_BUDGET) -> list[Sample]:
    """All ordered length-m samples over supp(dist), in lexicographic order."""
    if m < 0:
        raise ValueError("sample size must be nonnegative")
    support = dist.support()
    count = len(support) ** m
    if count > budget:
        raise BudgetExceededError(
            f"{len(support)}^{m} = {count} samples exceed the budget of {budget}")
    return [Sample(combo) for combo in itertools.product(support, repeat=m)]


# ---------------------------------------------------------------------------
# learner contract


@dataclass(frozen=True)
class Learner:
    """Deterministic Sample -> Hypothesis procedure with properness metadata.

    proper_for names the class the outputs are guaranteed to stay inside,
    or None when no such guarantee is made.
    """

    name: str
    fn: Callable[[Sample], Hypothesis]
    proper_for: Optional[str] = None

    def __call__(self, sample: Sample) -> Hypothesis:
        return self.fn(sample)

    @property
    def proper(self) -> bool:
        return self.proper_for is not None


# ---------------------------------------------------------------------------
# JSON codecs


def fraction_to_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def fraction_from_str(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse rational {text!r}") from exc


def hypothesis_to_json(h: Hypothesis) -> dict:
    return {"support": list(h.support)}

def hypothesis_from_json(obj: object) -> Hypothesis:
    if not isinstance(obj, dict) or set(obj) != {"support"} or not isinstance(obj["support"], list):
        raise ValueError('a hypothesis must look like {"support": [4, 6]}')
    return Hypothesis(tuple(obj["support"]))


def sample_to_json(sample: Sample) -> list:
    return [[x, y] for x, y in sample.examples]

def sample_from_json(obj: object) -> Sample:
    if not isinstance(obj, list) or any(not isinstance(p, list) or len(p) != 2 for p in obj):
        raise ValueError("a sample must look like [[x, y], ...]")
    return Sample.from_pairs((x, y) for x, y in obj)


def distribution_to_json(dist: Distribution) -> list:
    return [[e.point, e.label, fraction_to_str(w)] for e, w in dist.items]

def distribution_from_json(obj: object) -> Distribution:
    if not isinstance(obj, list) or any(not isinstance(r, list) or len(r) != 3 for r in obj):
        raise ValueError('a distribution must look like [[x, y, "num/den"], ...]')
    weights: dict[LabeledExample, Fraction] = {}
    for x, y, w in obj:
        example = LabeledExample(x, y)
        if example in weights:
            raise ValueError(f"duplicate example {example} in distribution")
        weights[example] = fraction_from_str(w)
    return Distribution.from_weights(weights)
