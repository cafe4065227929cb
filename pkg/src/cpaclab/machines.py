"""Counter machines, bijective program codes, and enumerable functions.

The machine model is fixed so integer codes and runs replay everywhere.

Instruction set (text form, one instruction per line):

    INC r        increment register r
    DJZ r L      if register r is zero jump to instruction L,
                 otherwise decrement r and fall through
    OUT n        halt; output the low n bits of register 0, LSB first

Conventions:

  * registers hold unbounded naturals and start at 0
  * a tuple input (x1, ..., xk) loads registers 1..k; register 0 is the
    output register and is never preloaded
  * the only way to halt is OUT; control at or past the end of the program
    spins forever (each spin costs a step), so every program has total,
    deterministic step semantics
  * jump targets lie in [0, len(program)]; the value len(program) is an
    explicit "spin forever" target

Integer coding (a bijection between naturals and valid programs):

  * Cantor pairing  pair(a, b) = (a+b)(a+b+1)/2 + b  with exact inverse
  * a sequence [x0, x1, ...] is coded as 0 for the empty sequence and
    pair(x0, code(rest)) + 1 otherwise
  * each instruction in a program of length n is coded as 3*payload + kind
    with kind 0=INC (payload r), 1=DJZ (payload r*(n+1) + L), 2=OUT
    (payload n_bits); because L < n+2 the payload split is exact, so
    decode(encode(p)) == p and encode(decode(c)) == c

Program/k pairs are enumerated by splitting an index e with the same pairing:
e = pair(program_code, k).  The prefix sums of the k components have a closed
form (sums over complete pairing diagonals are tetrahedral numbers), which
keeps block layouts computable even for the astronomically large indices that
encoded programs produce.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Optional, Sequence

from .dims import WitnessFn
from .errors import (BudgetExceededError, MalformedProgramError,
                     NotYetEnumeratedError, UndecidableRangeError)

INC, DJZ, OUT = "INC", "DJZ", "OUT"
_KIND_CODES = {INC: 0, DJZ: 1, OUT: 2}
_KIND_NAMES = {v: k for k, v in _KIND_CODES.items()}


# ---------------------------------------------------------------------------
# Cantor pairing and its prefix sums


def encode_pair(a: int, b: int) -> int:
    if a < 0 or b < 0:
        raise ValueError("pairing is defined on nonnegative integers")
    s = a + b
    return s * (s + 1) // 2 + b


def decode_pair(n: int) -> tuple[int, int]:
    if n < 0:
        raise ValueError("pairing is defined on nonnegative integers")
    s = (isqrt(8 * n + 1) - 1) // 2
    b = n - s * (s + 1) // 2
    return s - b, b


def pair_second_prefix_sum(e: int) -> int:
    """Sum of decode_pair(i)[1] over i < e, in closed form.

    Indices walk pairing diagonals; the second component runs 0..w on
    diagonal w, so complete diagonals contribute triangular numbers and
    their total is tetrahedral: sum_{w<W} w(w+1)/2 = (W-1)W(W+1)/6.
    """
    if e <= 0:
        return 0
    w = (isqrt(8 * e + 1) - 1) // 2
    b = e - w * (w + 1) // 2
    return (w - 1) * w * (w + 1) // 6 + b * (b - 1) // 2


# ---------------------------------------------------------------------------
# programs


@dataclass(frozen=True)
class Instruction:
    op: str
    a: int
    b: Optional[int] = None

    def __post_init__(self) -> None:
        if self.op not in _KIND_CODES:
            raise MalformedProgramError(f"unknown instruction {self.op!r}")
        if self.a < 0:
            raise MalformedProgramError(f"negative operand in {self}")
        if (self.b is not None) != (self.op == DJZ):
            raise MalformedProgramError(f"{self.op} takes {'two operands' if self.op == DJZ else 'one operand'}")
        if self.b is not None and self.b < 0:
            raise MalformedProgramError(f"negative jump target in {self}")


@dataclass(frozen=True)
class Program:
    """A validated instruction sequence; see the module docstring for codes."""

    instructions: tuple[Instruction, ...]

    def __post_init__(self) -> None:
        n = len(self.instructions)
        for ins in self.instructions:
            if ins.op == DJZ and ins.b is not None and ins.b > n:
                raise MalformedProgramError(
                    f"jump target {ins.b} outside [0, {n}] in a {n}-instruction program")

    def __len__(self) -> int:
        return len(self.instructions)

    @property
    def register_count(self) -> int:
        highest = 0
        for ins in self.instructions:
            if ins.op in (INC, DJZ):
                highest = max(highest, ins.a + 1)
        return max(highest, 1)

    # -- text form ----------------------------------------------------------

    def to_text(self) -> str:
        lines = []
        for ins in self.instructions:
            if ins.op == DJZ:
                lines.append(f"DJZ {ins.a} {ins.b}")
            else:
                lines.append(f"{ins.op} {ins.a}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str) -> "Program":
        instructions = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            op = parts[0].upper()
            try:
                if op == DJZ:
                    if len(parts) != 3:
                        raise MalformedProgramError("DJZ takes a register and a target")
                    instructions.append(Instruction(DJZ, int(parts[1]), int(parts[2])))
                elif op in (INC, OUT):
                    if len(parts) != 2:
                        raise MalformedProgramError(f"{op} takes one operand")
                    instructions.append(Instruction(op, int(parts[1])))
                else:
                    raise MalformedProgramError(f"unknown instruction {op!r}")
            except ValueError as exc:
                raise MalformedProgramError(f"line {lineno}: {raw.strip()!r}") from exc
        return cls(tuple(instructions))

    # -- integer code -------------------------------------------------------

    def to_code(self) -> int:
        n = len(self.instructions)
        raws = []
        for ins in self.instructions:
            kind = _KIND_CODES[ins.op]
            if ins.op == DJZ:
                payload = ins.a * (n + 1) + ins.b  # type: ignore[operator]
            else:
                payload = ins.a
            raws.append(3 * payload + kind)
        code = 0
        for raw in reversed(raws):
            code = encode_pair(raw, code) + 1
        return code

    @classmethod
    def from_code(cls, code: int) -> "Program":
        if code < 0:
            raise MalformedProgramError("program codes are nonnegative")
        raws = []
        while code:
            head, code = decode_pair(code - 1)
            raws.append(head)
        n = len(raws)
        instructions = []
        for raw in raws:
            kind, payload = raw % 3, raw // 3
            op = _KIND_NAMES[kind]
            if op == DJZ:
                instructions.append(Instruction(DJZ, payload // (n + 1), payload % (n + 1)))
            else:
                instructions.append(Instruction(op, payload))
        return cls(tuple(instructions))


def enumerate_machine_pairs(e: int) -> tuple[Program, int]:
    """The e-th (program, k) pair under the pairing bijection."""
    code, k = decode_pair(e)
    return Program.from_code(code), k


def machine_pair_index(program: Program, k: int) -> int:
    """Inverse of enumerate_machine_pairs."""
    return encode_pair(program.to_code(), k)


# ---------------------------------------------------------------------------
# execution


@dataclass(frozen=True)
class RunOutcome:
    status: str  # "halted" | "running"
    steps_used: int
    output: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.status not in ("halted", "running"):
            raise ValueError(f"bad status {self.status!r}")
        if (self.output is not None) != (self.status == "halted"):
            raise ValueError("output is present exactly when the machine halted")

    @property
    def halted(self) -> bool:
        return self.status == "halted"


class MachineRun:
    """Resumable execution state; run_bounded and the dovetailer share it."""

    __slots__ = ("program", "registers", "pc", "steps", "outcome", "spinning")

    def __init__(self, program: Program, inputs: Sequence[int]) -> None:
        for x in inputs:
            if x < 0:
                raise ValueError("machine inputs must be nonnegative")
        self.program = program
        self.registers: dict[int, int] = {i + 1: x for i, x in enumerate(inputs) if x}
        self.pc = 0
        self.steps = 0
        self.outcome: Optional[RunOutcome] = None
        self.spinning = False

    def step(self) -> None:
        """Execute one step; sets .outcome when the machine halts."""
        if self.outcome is not None:
            return
        self.steps += 1
        if self.pc >= len(self.program.instructions):
            self.spinning = True
            return
        ins = self.program.instructions[self.pc]
        if ins.op == INC:
            self.registers[ins.a] = self.registers.get(ins.a, 0) + 1
            self.pc += 1
        elif ins.op == DJZ:
            value = self.registers.get(ins.a, 0)
            if value == 0:
                self.pc = ins.b  # type: ignore[assignment]
            else:
                self.registers[ins.a] = value - 1
                self.pc += 1
        else:  # OUT
            acc = self.registers.get(0, 0)
            bits = tuple((acc >> i) & 1 for i in range(ins.a))
            self.outcome = RunOutcome("halted", self.steps, bits)


def run_bounded(program: Program, inputs: Sequence[int], budget: int) -> RunOutcome:
    """Run for at most `budget` steps; deterministic and total."""
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    run = MachineRun(program, inputs)
    for _ in range(budget):
        run.step()
        if run.outcome is not None:
            return run.outcome
        if run.spinning:
            break
    return RunOutcome("running", budget)


# ---------------------------------------------------------------------------
# enumerable functions: decidable surrogates and dovetailed r.e. enumerations


class EnumerableFunction:
    """Common surface of the injective functions used to index classes."""

    name: str
    kind: str

    def __call__(self, a: int) -> int:
        raise NotImplementedError

    def range_contains(self, value: int) -> bool:
        raise NotImplementedError


class SurrogateFunction(EnumerableFunction):
    """Total injective function with decidable range membership."""

    kind = "surrogate"

    def __init__(self, name: str, fn, range_test) -> None:
        self.name = name
        self._fn = fn
        self._range_test = range_test

    def __call__(self, a: int) -> int:
        if a < 1:
            raise ValueError("surrogate functions are indexed from 1")
        value = self._fn(a)
        if value < 1:
            raise ValueError(f"{self.name}({a}) = {value} leaves the positive naturals")
        return value

    def range_contains(self, value: int) -> bool:
        if value < 1:
            return False
        return bool(self._range_test(value))

    def __repr__(self) -> str:
        return f"SurrogateFunction({self.name})"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _nth_prime(a: int) -> int:
    count = 0
    candidate = 1
    while count < a:
        candidate += 1
        while not _is_prime(candidate):
            candidate += 1
        count += 1
    return candidate


_SURROGATES = {
    "inc": lambda: SurrogateFunction("inc", lambda a: a + 1, lambda v: v >= 2),
    "prime": lambda: SurrogateFunction("prime", _nth_prime, _is_prime),
    "double": lambda: SurrogateFunction("double", lambda a: 2 * a, lambda v: v >= 2 and v % 2 == 0),
}


def surrogate(name: str) -> SurrogateFunction:
    """Built-in surrogates: inc (a+1), prime (a-th prime), double (2a)."""
    try:
        return _SURROGATES[name]()
    except KeyError:
        raise ValueError(f"unknown surrogate {name!r}; have {sorted(_SURROGATES)}") from None


class DovetailedFunction(EnumerableFunction):
    """f(a) = a-th freshly enumerated element of a recursively enumerable set.

    The set is {c : candidate_program halts on input (c,)}.  Dovetailing
    rounds: at round t, candidates 0..t have each received t steps in total;
    candidates that halt are emitted in candidate order, mapped into the
    positive naturals as c+1.  Evaluation is stateful (results are cached)
    and single-owner; requests beyond the round budget raise
    NotYetEnumeratedError rather than guessing.
    """

    kind = "dovetailed"

    def __init__(self, candidate_program: Program, max_rounds: int = 2000,
                 name: str = "dovetail") -> None:
        self.name = name
        self.program = candidate_program
        self.max_rounds = max_rounds
        self._round = 0
        self._live: dict[int, MachineRun] = {0: MachineRun(candidate_program, (0,))}
        self._emitted: list[int] = []

    def _advance_round(self) -> None:
        self._round += 1
        t = self._round
        self._live[t] = MachineRun(self.program, (t,))
        for candidate in range(t + 1):
            run = self._live.get(candidate)
            if run is None:
                continue
            while run.steps < t and run.outcome is None and not run.spinning:
                run.step()
            if run.outcome is not None:
                self._emitted.append(candidate + 1)
                del self._live[candidate]
            elif run.spinning:
                del self._live[candidate]

    def __call__(self, a: int) -> int:
        if a < 1:
            raise ValueError("enumerable functions are indexed from 1")
        while len(self._emitted) < a and self._round < self.max_rounds:
            self._advance_round()
        if len(self._emitted) < a:
            raise NotYetEnumeratedError(
                f"{self.name}({a}) not determined within {self.max_rounds} dovetailing rounds")
        return self._emitted[a - 1]

    def emitted_prefix(self, count: int) -> list[int]:
        """First `count` emissions (may advance rounds; may raise)."""
        self(count)
        return self._emitted[:count]

    def range_contains(self, value: int) -> bool:
        raise UndecidableRangeError(
            f"range membership for dovetailed {self.name} is only semi-decidable")


# ---------------------------------------------------------------------------
# machine-backed witnesses


def witness_from_program(program: Program, k: int, budget: int) -> WitnessFn:
    """Evaluate a program as a k-witness: tuple in registers 1.., bits out."""

    def evaluate(points: tuple[int, ...]) -> tuple[int, ...]:
        outcome = run_bounded(program, points, budget)
        if not outcome.halted:
            raise BudgetExceededError(
                f"witness program did not halt within {budget} steps on {points}")
        if outcome.output is None or len(outcome.output) != k + 1:
            raise MalformedProgramError(
                f"witness program produced {outcome.output!r}, wanted {k + 1} bits")
        return outcome.output

    return WitnessFn(k, evaluate, name="machine-witness")


def all_ones_witness_program(k: int) -> Program:
    """Sets the k+1 low output bits, then OUT; ignores its input."""
    body = [Instruction(INC, 0)] * (2 ** (k + 1) - 1)
    return Program(tuple(body + [Instruction(OUT, k + 1)]))


def all_zeros_witness_program(k: int) -> Program:
    """Halts immediately; the untouched output register yields zeros."""
    return Program((Instruction(OUT, k + 1),))
