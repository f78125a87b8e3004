"""Exhaustive ground truth for small formulas.

Everything here is a plain truth-table search whose value is its obvious
correctness; the solvers elsewhere in the package are judged against it.
Inputs are size-guarded so an accidental 40-variable formula fails loudly
instead of hanging.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .cnf import Formula

DEFAULT_ORACLE_LIMIT = 24


class OracleLimitError(RuntimeError):
    """The formula is too large for exhaustive enumeration."""


class UnsatisfiableError(ValueError):
    """An operation that needs a solution was given an unsatisfiable formula."""


@dataclass(frozen=True)
class SolutionSet:
    """All solutions of a formula over its variable set, canonically ordered.

    Each solution is a tuple of literals sorted by variable index, so two
    solution sets compare equal exactly when they agree syntactically.
    """

    variables: tuple[int, ...]
    solutions: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.solutions)

    def __len__(self) -> int:
        return len(self.solutions)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.solutions)

    def __contains__(self, solution: tuple[int, ...]) -> bool:
        return tuple(solution) in set(self.solutions)


def _clause_masks(formula: Formula) -> tuple[list[tuple[int, int, int]], dict[int, int]]:
    pos_of = {v: i for i, v in enumerate(formula.variables)}
    masks = []
    for clause in formula.clauses:
        pos = neg = 0
        for lit in clause:
            bit = 1 << pos_of[abs(lit)]
            if lit > 0:
                pos |= bit
            else:
                neg |= bit
        masks.append((pos, neg, pos | neg))
    return masks, pos_of

def _check_limit(formula: Formula, limit: int) -> None:
    if formula.n > limit:
        raise OracleLimitError(
            f"{formula.n} variables exceed the oracle limit of {limit}"
        )


def _solution_bits(formula: Formula) -> Iterator[int]:
    """Yield every satisfying total assignment as a bitmask over variable
    positions, in canonical order (variables by index, false before true)."""
    n = formula.n
    masks, _ = _clause_masks(formula)
    if any(vars_mask == 0 for _, _, vars_mask in masks):
        return  # an empty clause admits nothing

    def rec(idx: int, amask: int, avals: int) -> Iterator[int]:
        live = False
        for pos, neg, vars_mask in masks:
            if (pos & avals) or (neg & amask & ~avals):
                continue
            if vars_mask & ~amask == 0:
                return  # fully assigned, nothing satisfied it
            live = True
        if not live:
            # every clause already satisfied: all extensions are solutions,
            # the earliest free position varying slowest to keep canonical order
            free = range(idx, n)
            width = n - idx
            for extension in range(1 << width):
                bits = avals
                for j, fi in enumerate(free):
                    if (extension >> (width - 1 - j)) & 1:
                        bits |= 1 << fi
                yield bits
            return
        if idx == n:
            yield avals
            return
        bit = 1 << idx
        yield from rec(idx + 1, amask | bit, avals)
        yield from rec(idx + 1, amask | bit, avals | bit)

    # ascending order: position i is the i-th variable, False explored first,
    # and the free-extension fast path counts up as well
    yield from rec(0, 0, 0)


def _bits_to_literals(bits: int, variables: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(v if (bits >> i) & 1 else -v for i, v in enumerate(variables))


def enumerate_solutions(formula: Formula, limit: int = DEFAULT_ORACLE_LIMIT) -> SolutionSet:
    """Every solution over the formula's variable set, by brute force."""
    _check_limit(formula, limit)
    sols = sorted(
        _bits_to_literals(bits, formula.variables) for bits in _solution_bits(formula)
    )
    return SolutionSet(variables=formula.variables, solutions=tuple(sols))


def count_solutions(formula: Formula, limit: int = DEFAULT_ORACLE_LIMIT) -> int:
    """|sat(F)| without materializing the solutions."""
    _check_limit(formula, limit)
    n = formula.n
    masks, _ = _clause_masks(formula)
    if any(vars_mask == 0 for _, _, vars_mask in masks):
        return 0

    def rec(idx: int, amask: int, avals: int) -> int:
        live = False
        for pos, neg, vars_mask in masks:
            if (pos & avals) or (neg & amask & ~avals):
                continue
            if vars_mask & ~amask == 0:
                return 0
            live = True
        if not live:
            return 1 << (n - idx)
        if idx == n:
            return 1
        bit = 1 << idx
        return rec(idx + 1, amask | bit, avals) + rec(idx + 1, amask | bit, avals | bit)

    return rec(0, 0, 0)


def first_solution(formula: Formula, limit: int = DEFAULT_ORACLE_LIMIT) -> tuple[int, ...] | None:
    """The canonically smallest solution, or None if there is none."""
    _check_limit(formula, limit)
    for bits in _solution_bits(formula):
        return _bits_to_literals(bits, formula.variables)
    return None


def is_satisfiable(formula: Formula, limit: int = DEFAULT_ORACLE_LIMIT) -> bool:
    return first_solution(formula, limit) is not None


def implied_literals(formula: Formula, limit: int = DEFAULT_ORACLE_LIMIT) -> frozenset[int]:
    """Literals present in every solution. Raises on unsatisfiable input:
    the intersection over zero solutions is not a meaningful answer here."""
    _check_limit(formula, limit)
    and_true = (1 << formula.n) - 1
    and_false = (1 << formula.n) - 1
    seen = False
    for bits in _solution_bits(formula):
        seen = True
        and_true &= bits
        and_false &= ~bits
        if not (and_true or and_false):
            break
    if not seen:
        raise UnsatisfiableError("formula has no solutions")
    out = set()
    for i, v in enumerate(formula.variables):
        if (and_true >> i) & 1:
            out.add(v)
        elif (and_false >> i) & 1:
            out.add(-v)
    return frozenset(out)


def classify_variables(
    formula: Formula, limit: int = DEFAULT_ORACLE_LIMIT
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split the variable set into (frozen, liquid): a variable is frozen
    when it takes the same value in every solution."""
    implied = implied_literals(formula, limit)
    frozen_vars = {abs(lit) for lit in implied}
    frozen = tuple(v for v in formula.variables if v in frozen_vars)
    liquid = tuple(v for v in formula.variables if v not in frozen_vars)
    return frozen, liquid
