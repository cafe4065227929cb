"""Decidable hypothesis classes over the naturals.

Three families with decision procedures, plus plain baselines:

  * the size-graded block family: even numbers >= 2 are split into
    consecutive blocks of sizes 1, 2, 3, ... (block k starts at k^2-k+2);
    members are either a block minus one element, or a whole block f(a)
    together with the odd marker 2a+1, where f is an injective positive
    function supplied as a parameter
  * the goodness family for a witness w: finitely supported hypotheses that
    disagree with w's pattern on every strictly increasing tuple lying
    strictly below their own maximum support point
  * the machine-diagonal family: evens are split into consecutive blocks
    sized by the (program, k) enumeration; index e contributes a member for
    its exact halting step s, marked by the odd point 2*pair(e, s)+1

Membership in the block family is only semi-decidable when f is a dovetailed
enumeration; such queries return the UNKNOWN sentinel, which refuses boolean
coercion so it can never silently pass for False.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import isqrt
from typing import Callable, Optional, Union

from .core import Hypothesis, canonical_key
from .dims import WitnessFn
from .errors import BudgetExceededError, CpacError, NotYetEnumeratedError
from .machines import (EnumerableFunction, decode_pair, encode_pair,
                       enumerate_machine_pairs, pair_second_prefix_sum,
                       run_bounded)


class _Unknown:
    """Tri-state membership sentinel; truth-testing it is a bug, so it raises."""

    def __bool__(self) -> bool:
        raise TypeError("UNKNOWN membership cannot be coerced to a bool")

    def __repr__(self) -> str:
        return "UNKNOWN"


UNKNOWN = _Unknown()

Membership = Union[bool, _Unknown]


@dataclass
class ClassDescriptor:
    """A named class: a membership decider and an optional finite enumerator.

    bounded_enumeration(M) returns members in canonical order and must
    include every member whose support lies inside {0..M}; it may include
    further members that merely touch that window.
    """

    name: str
    membership: Callable[[Hypothesis], Membership]
    bounded_enumeration: Optional[Callable[[int], list[Hypothesis]]] = None
    parameters: dict = field(default_factory=dict)

    def contains(self, h: Hypothesis) -> Membership:
        return self.membership(h)

    def enumerate(self, max_support: int) -> list[Hypothesis]:
        if self.bounded_enumeration is None:
            raise CpacError(f"class {self.name} has no bounded enumeration")
        return self.bounded_enumeration(max_support)


# ---------------------------------------------------------------------------
# size-graded blocks of even numbers


@dataclass(frozen=True)
class BlockIndex:
    k: int
    elements: tuple[int, ...]


def block(k: int) -> BlockIndex:
    """Block k: the k consecutive even numbers starting at k^2 - k + 2."""
    if k < 1:
        raise ValueError("block indices start at 1")
    start = k * k - k + 2
    return BlockIndex(k, tuple(start + 2 * i for i in range(k)))


def block_of(n: int) -> int:
    """The k with n in block(k); n must be an even number >= 2."""
    if n < 2 or n % 2:
        raise ValueError(f"{n} lies in no block (blocks cover the evens >= 2)")
    for k in (isqrt(n), isqrt(n) + 1):
        if k >= 1 and k * k - k + 2 <= n <= k * k + k:
            return k
    raise AssertionError(f"block search failed for {n}")


def punctured_hypothesis(k: int, j: int) -> Hypothesis:
    """Block k with its j-th element (1-indexed) removed."""
    blk = block(k)
    if not 1 <= j <= k:
        raise ValueError(f"puncture position {j} outside 1..{k}")
    return Hypothesis(tuple(x for i, x in enumerate(blk.elements) if i != j - 1))


def odd_marked_hypothesis(a: int, f: EnumerableFunction) -> Hypothesis:
    """All of block f(a) plus the odd marker 2a+1 (a >= 1)."""
    if a < 1:
        raise ValueError("marker indices start at 1")
    k = f(a)
    return Hypothesis.from_points(block(k).elements + (2 * a + 1,))


def block_class_membership(h: Hypothesis, f: EnumerableFunction) -> Membership:
    """Decide membership in the block family indexed by f.

    Returns UNKNOWN only when the answer hinges on a value of a dovetailed f
    that its budget has not enumerated yet.
    """
    odds = [x for x in h.support if x % 2]
    evens = [x for x in h.support if x % 2 == 0]
    if not odds:
        if not evens:
            return True  # the punctured singleton block: support is empty
        if evens[0] < 2:
            return False
        ks = {block_of(x) for x in evens}
        if len(ks) != 1:
            return False
        return len(evens) == ks.pop() - 1
    if len(odds) != 1:
        return False
    marker = odds[0]
    if marker < 3:
        return False  # marker 2a+1 with a >= 1
    a = (marker - 1) // 2
    if not evens or evens[0] < 2:
        return False
    ks = {block_of(x) for x in evens}
    if len(ks) != 1:
        return False
    k = ks.pop()
    if tuple(evens) != block(k).elements:
        return False
    try:
        return f(a) == k
    except NotYetEnumeratedError:
        return UNKNOWN


def block_class(f: EnumerableFunction) -> ClassDescriptor:
    """Descriptor for the block family indexed by f."""

    def enumeration(max_support: int) -> list[Hypothesis]:
        members = [punctured_hypothesis(1, 1)]
        k = 1
        while k * k - k + 2 <= max_support:
            members.extend(punctured_hypothesis(k, j) for j in range(1, k + 1))
            k += 1
        # markers inside the window: required for support-complete enumeration
        marker_top = max((max_support - 1) // 2, 0)
        for a in range(1, marker_top + 1):
            members.append(odd_marked_hypothesis(a, f))
        # best-effort window extras: block visible, marker outside
        for a in range(marker_top + 1, max(max_support, marker_top) + 1):
            try:
                value = f(a)
            except NotYetEnumeratedError:
                break
            if value * value - value + 2 <= max_support:
                members.append(odd_marked_hypothesis(a, f))
        return sorted(set(members), key=canonical_key)

    return ClassDescriptor(
        name=f"block({f.name})",
        membership=lambda h: block_class_membership(h, f),
        bounded_enumeration=enumeration,
        parameters={"f": f.name},
    )


# ---------------------------------------------------------------------------
# goodness family for a witness


def good_hypothesis_check(h: Hypothesis, witness: WitnessFn, k: int) -> bool:
    """True iff h disagrees with the witness pattern on every strictly
    increasing (k+1)-tuple lying strictly below max(support)."""
    if k != witness.k:
        raise ValueError(f"witness arity {witness.k} does not match k={k}")
    support = h.support
    if not support:
        return True
    members = h.point_set
    top = support[-1]
    for combo in itertools.combinations(range(top), k + 1):
        if tuple(1 if x in members else 0 for x in combo) == witness(combo):
            return False
    return True


_GOOD_CACHE: dict[tuple[WitnessFn, int, int], tuple[Hypothesis, ...]] = {}


def enumerate_good(max_support: int, witness: WitnessFn, k: int,
                   max_support_bound: int = 20) -> list[Hypothesis]:
    """All good hypotheses with support inside {0..max_support}, canonical order."""
    if max_support < 0:
        raise ValueError("max_support must be nonnegative")
    if max_support > max_support_bound:
        raise BudgetExceededError(
            f"2^{max_support + 1} subsets exceed the enumeration bound (max_support <= {max_support_bound})")
    key = (witness, k, max_support)
    cached = _GOOD_CACHE.get(key)
    if cached is None:
        found = []
        points = range(max_support + 1)
        for size in range(max_support + 2):
            for combo in itertools.combinations(points, size):
                h = Hypothesis(combo)
                if good_hypothesis_check(h, witness, k):
                    found.append(h)
        cached = tuple(found)
        _GOOD_CACHE[key] = cached
    return list(cached)


def good_class(witness: WitnessFn, k: int) -> ClassDescriptor:
    return ClassDescriptor(
        name=f"good({witness.name},k={k})",
        membership=lambda h: good_hypothesis_check(h, witness, k),
        bounded_enumeration=lambda max_support: enumerate_good(max_support, witness, k),
        parameters={"witness": witness.name, "k": k},
    )


def union_class(name: str, first: ClassDescriptor, second: ClassDescriptor) -> ClassDescriptor:
    """Union of two classes; membership stays honestly tri-state."""

    def membership(h: Hypothesis) -> Membership:
        a = first.contains(h)
        if a is True:
            return True
        b = second.contains(h)
        if b is True:
            return True
        if a is UNKNOWN or b is UNKNOWN:
            return UNKNOWN
        return False

    def enumeration(max_support: int) -> list[Hypothesis]:
        merged = set(first.enumerate(max_support)) | set(second.enumerate(max_support))
        return sorted(merged, key=canonical_key)

    return ClassDescriptor(
        name=name,
        membership=membership,
        bounded_enumeration=enumeration,
        parameters={"union": [first.name, second.name]},
    )


def augmented_with_good(base: ClassDescriptor, witness: WitnessFn, k: int) -> ClassDescriptor:
    """base together with every hypothesis that is good for the witness."""
    return union_class(f"{base.name}+good({witness.name},k={k})",
                       base, good_class(witness, k))


# ---------------------------------------------------------------------------
# machine-diagonal family


def diagonal_block(e: int) -> tuple[int, ...]:
    """The e-th machine-sized block of even numbers (possibly empty).

    Block e has k_e elements, where k_e is the k component of the e-th
    (program, k) pair; offsets use the closed-form prefix sums so the layout
    stays computable for very large e.
    """
    if e < 0:
        raise ValueError("block indices are nonnegative")
    _, k_e = decode_pair(e)
    start = 2 + 2 * pair_second_prefix_sum(e)
    return tuple(start + 2 * i for i in range(k_e))


def diagonal_hypothesis(e: int, budget: int) -> Optional[Hypothesis]:
    """The member contributed by index e, or None if it does not halt
    properly within the budget (or its output has the wrong length)."""
    program, k_e = enumerate_machine_pairs(e)
    blk = diagonal_block(e)
    outcome = run_bounded(program, blk, budget)
    if not outcome.halted or outcome.output is None or len(outcome.output) != k_e:
        return None
    marker = 2 * encode_pair(e, outcome.steps_used) + 1
    points = {marker} | {blk[i] for i, bit in enumerate(outcome.output) if bit}
    return Hypothesis.from_points(points)


def diagonal_membership(h: Hypothesis) -> bool:
    """Decide diagonal membership; the marker bounds the simulation, so this
    is fully decidable with no external budget."""
    odds = [x for x in h.support if x % 2]
    if len(odds) != 1:
        return False
    e, s = decode_pair((odds[0] - 1) // 2)
    if s < 1:
        return False  # no machine halts in zero steps
    program, k_e = enumerate_machine_pairs(e)
    blk = diagonal_block(e)
    evens = [x for x in h.support if x % 2 == 0]
    if not set(evens) <= set(blk):
        return False
    outcome = run_bounded(program, blk, s)
    if not outcome.halted or outcome.steps_used != s or outcome.output is None \
            or len(outcome.output) != k_e:
        return False
    expected = {blk[i] for i, bit in enumerate(outcome.output) if bit}
    return set(evens) == expected


def diagonal_members(max_index: int, budget: int) -> list[Hypothesis]:
    """All members contributed by indices e <= max_index within the budget."""
    found = []
    for e in range(max_index + 1):
        h = diagonal_hypothesis(e, budget)
        if h is not None:
            found.append(h)
    return found


def diagonal_class() -> ClassDescriptor:
    def enumeration(max_support: int) -> list[Hypothesis]:
        members = []
        top_half = (max_support - 1) // 2 if max_support >= 1 else -1
        for half in range(top_half + 1):
            e, s = decode_pair(half)
            if s < 1:
                continue
            program, k_e = enumerate_machine_pairs(e)
            blk = diagonal_block(e)
            outcome = run_bounded(program, blk, s)
            if not outcome.halted or outcome.steps_used != s \
                    or outcome.output is None or len(outcome.output) != k_e:
                continue
            points = {2 * half + 1} | {blk[i] for i, bit in enumerate(outcome.output) if bit}
            if max(points) <= max_support:
                members.append(Hypothesis.from_points(points))
        return sorted(members, key=canonical_key)

    return ClassDescriptor(
        name="diagonal",
        membership=diagonal_membership,
        bounded_enumeration=enumeration,
        parameters={},
    )


# ---------------------------------------------------------------------------
# baselines


def baseline_class(d: int) -> ClassDescriptor:
    """All hypotheses with support of size exactly d."""
    if d < 0:
        raise ValueError("support size must be nonnegative")
    return ClassDescriptor(
        name=f"baseline-{d}",
        membership=lambda h: len(h.support) == d,
        bounded_enumeration=lambda max_support: [
            Hypothesis(combo) for combo in itertools.combinations(range(max_support + 1), d)],
        parameters={"d": d},
    )


def full_class(max_support_bound: int = 20) -> ClassDescriptor:
    """Every finitely supported hypothesis (enumeration is window-bounded)."""

    def enumeration(max_support: int) -> list[Hypothesis]:
        if max_support > max_support_bound:
            raise BudgetExceededError(
                f"2^{max_support + 1} subsets exceed the enumeration bound")
        points = range(max_support + 1)
        return [Hypothesis(combo)
                for size in range(max_support + 2)
                for combo in itertools.combinations(points, size)]

    return ClassDescriptor(
        name="full",
        membership=lambda h: True,
        bounded_enumeration=enumeration,
        parameters={},
    )
