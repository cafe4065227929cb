"""Window views of hypothesis classes and their combinatorial dimensions.

A FiniteClassView is the restriction of a class to a finite universe of
points: a set of 0/1 rows, one per distinct behavior.  Dimension searches on
a view are exhaustive and deterministic (subsets by increasing size, then
lexicographic order), so results are lower bounds for the class's true
dimensions and exact whenever the supplied enumeration realizes every
behavior of the class on the universe.

A WitnessFn maps every strictly increasing (k+1)-tuple of points to a bit
pattern that no member of the class under scrutiny is supposed to realize on
that tuple; verify_witness checks a witness against concrete members.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .core import Hypothesis


@dataclass(frozen=True)
class WitnessFn:
    """A candidate k-witness: forbidden patterns on (k+1)-tuples."""

    k: int
    fn: Callable[[tuple[int, ...]], tuple[int, ...]]
    name: str = "witness"

    def __call__(self, points: tuple[int, ...]) -> tuple[int, ...]:
        points = tuple(points)
        if len(points) != self.k + 1:
            raise ValueError(f"{self.name} expects {self.k + 1} points, got {len(points)}")
        if any(a >= b for a, b in zip(points, points[1:])):
            raise ValueError("witness tuples must be strictly increasing")
        pattern = tuple(self.fn(points))
        if len(pattern) != self.k + 1 or any(b not in (0, 1) for b in pattern):
            raise ValueError(f"{self.name} must return a 0/1 pattern of length {self.k + 1}")
        return pattern


def all_ones_witness(k: int) -> WitnessFn:
    return WitnessFn(k, lambda points: (1,) * (k + 1), name=f"all-ones({k})")


def all_zeros_witness(k: int) -> WitnessFn:
    return WitnessFn(k, lambda points: (0,) * (k + 1), name=f"all-zeros({k})")


@dataclass(frozen=True)
class FiniteClassView:
    """Distinct rows of a class over a finite, strictly increasing universe."""

    universe: tuple[int, ...]
    rows: frozenset[tuple[int, ...]]

    def __post_init__(self) -> None:
        if any(a >= b for a, b in zip(self.universe, self.universe[1:])):
            raise ValueError("universe must be strictly increasing")
        for row in self.rows:
            if len(row) != len(self.universe) or any(b not in (0, 1) for b in row):
                raise ValueError("rows must be 0/1 tuples matching the universe length")

    @property
    def width(self) -> int:
        return len(self.universe)


def restrict(hypotheses: Iterable[Hypothesis], universe: Iterable[int]) -> FiniteClassView:
    """Project hypotheses onto the universe, deduplicating identical rows."""
    universe = tuple(universe)
    rows = frozenset(tuple(h(x) for x in universe) for h in hypotheses)
    return FiniteClassView(universe, rows)


def shatters(view: FiniteClassView, indices: tuple[int, ...]) -> bool:
    """True iff the view realizes all 2^k patterns on the index subset."""
    indices = tuple(indices)
    if any(i < 0 or i >= view.width for i in indices):
        raise ValueError("indices must address the view's universe")
    if len(set(indices)) != len(indices):
        raise ValueError("indices must be distinct")
    need = 1 << len(indices)
    if len(view.rows) < need:
        return False
    seen = {tuple(row[i] for i in indices) for row in view.rows}
    return len(seen) == need


def _vc_search(view: FiniteClassView) -> tuple[int, tuple[int, ...]]:
    """Largest shattered size plus the lexicographically least witness subset."""
    if not view.rows:
        return 0, ()
    best: tuple[int, ...] = ()
    size = 1
    while size <= view.width:
        found = None
        for combo in itertools.combinations(range(view.width), size):
            if shatters(view, combo):
                found = combo
                break
        if found is None:
            break
        best = found
        size += 1
    return len(best), best


def vc_dimension_window(view: FiniteClassView) -> int:
    """VC dimension of the view (a window lower bound for the class)."""
    return _vc_search(view)[0]


def largest_shattered_set(view: FiniteClassView) -> tuple[int, ...]:
    """Point values of the lex-least shattered subset of maximum size."""
    _, indices = _vc_search(view)
    return tuple(view.universe[i] for i in indices)


def _ldim(rows: frozenset[tuple[int, ...]], width: int,
          memo: dict[frozenset[tuple[int, ...]], int]) -> int:
    if len(rows) <= 1:
        return 0
    cached = memo.get(rows)
    if cached is not None:
        return cached
    best = 0
    for j in range(width):
        zeros = frozenset(r for r in rows if r[j] == 0)
        ones = rows - zeros
        if zeros and ones:
            depth = 1 + min(_ldim(zeros, width, memo), _ldim(ones, width, memo))
            if depth > best:
                best = depth
    memo[rows] = best
    return best


def ldim_window(view: FiniteClassView) -> int:
    """Littlestone dimension of the view (window lower bound)."""
    return _ldim(view.rows, view.width, {})


def shattered_tree(view: FiniteClassView) -> Optional[dict]:
    """A mistake tree of depth ldim_window(view) as nested JSON-ready dicts.

    Each node is {"point": x, "zero": subtree, "one": subtree}; leaves are
    None.  Node points are the least usable point at each step, so the tree
    is deterministic.
    """
    memo: dict[frozenset[tuple[int, ...]], int] = {}

    def build(rows: frozenset[tuple[int, ...]], depth: int) -> Optional[dict]:
        if depth == 0:
            return None
        for j in range(view.width):
            zeros = frozenset(r for r in rows if r[j] == 0)
            ones = rows - zeros
            if zeros and ones and min(_ldim(zeros, view.width, memo),
                                      _ldim(ones, view.width, memo)) >= depth - 1:
                return {
                    "point": view.universe[j],
                    "zero": build(zeros, depth - 1),
                    "one": build(ones, depth - 1),
                }
        raise AssertionError("ldim recursion and tree construction disagree")

    return build(view.rows, _ldim(view.rows, view.width, memo))


def verify_witness(witness: WitnessFn, hypotheses: Iterable[Hypothesis],
                   tuples: Iterable[tuple[int, ...]]) -> bool:
    """True iff no hypothesis realizes the witness pattern on any tuple."""
    hypotheses = list(hypotheses)
    for points in tuples:
        pattern = witness(tuple(points))
        for h in hypotheses:
            if tuple(h(x) for x in points) == pattern:
                return False
    return True


def witness_excludes(witness: WitnessFn, hypotheses: Iterable[Hypothesis],
                     tuples: Iterable[tuple[int, ...]]) -> bool:
    """The class-level witness property over the given tuples.

    True iff no hypothesis extends the witness pattern: matching it on a
    tuple AND outputting 1 strictly above the tuple's top point.  Matching
    the pattern alone is permitted; finite supports make the extra-1 test a
    comparison against the largest support point.
    """
    hypotheses = list(hypotheses)
    for points in tuples:
        pattern = witness(tuple(points))
        top = points[-1]
        for h in hypotheses:
            if h.support and h.support[-1] > top \
                    and tuple(h(x) for x in points) == pattern:
                return False
    return True
