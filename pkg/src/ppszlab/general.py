"""Solver for formulas with any number of solutions.

The round-based solver is tuned for a unique solution; a sea of solutions
actually slows it down, because no variable is pinned enough to get forced.
The fix is to guess a few variables first. Instance i enumerates every way
to fix i variables, runs the round solver on each residue under a strict
modify-call budget, and gives up quickly; as i grows the residual formulas
get lonelier and the budget gets smaller. Instance n degenerates to testing
complete assignments one by one, so the overall search is complete no
matter how the budgets are set.

construct_good_assignment is the analysis-side counterpart: it exhibits
one particular fixing of ceil(log2 S) variables that leaves exactly one
solution, halving the count at every step.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from .analysis import lambda_k
from .cnf import FIXED, Assignment, Evaluation, Formula, evaluate, restrict
from .implication import ImplicationConfig
from .oracle import (
    DEFAULT_ORACLE_LIMIT,
    UnsatisfiableError,
    count_solutions,
    is_satisfiable,
)
from .permutations import construct_sigma
from .unique import DppszResult, dppsz


def default_slack(n: int) -> float:
    """Headroom added to every budget exponent, in bits."""
    return 2.0 * math.log2(n + 1)


def cutoff_budget(free_variables: int, k: int, slack: float) -> int:
    """Modify-call budget for one residual run: ceil of
    2^((1 - lambda) * free + slack), lambda taken at max(k, 3).

    Integer arithmetic after splitting off the fractional exponent, so
    large inputs cannot overflow to infinity.
    """
    if free_variables < 0:
        raise ValueError("free_variables must be nonnegative")
    lam = lambda_k(max(k, 3))
    exponent = (1.0 - lam) * free_variables + slack
    if exponent <= 0:
        return 1
    whole = math.floor(exponent)
    frac = exponent - whole
    scaled = math.ceil(2.0**frac * (1 << 53))
    if whole >= 53:
        return scaled << (whole - 53)
    return -((-scaled) >> (53 - whole))


@dataclass(frozen=True)
class HalvingStep:
    variable: int
    literal: int
    count_before: int
    count_after: int
    kind: str  # "halve" or "pad"


@dataclass(frozen=True)
class GoodAssignment:
    assignment: Assignment
    steps: tuple[HalvingStep, ...]
    solutions: int
    target_size: int

    @property
    def size(self) -> int:
        return len(self.assignment)


def construct_good_assignment(
    formula: Formula,
    limit: int = DEFAULT_ORACLE_LIMIT,
) -> GoodAssignment:
    """Fix exactly ceil(log2 S) variables so one solution remains.

    While several solutions survive, some variable takes both values among
    them; fixing the first such variable to its rarer value at least
    halves the count, so the budget of ceil(log2 S) steps suffices. Any
    steps left over are spent pinning further variables to the surviving
    solution.
    """
    total = count_solutions(formula, limit)
    if total == 0:
        raise UnsatisfiableError("cannot build an assignment for an unsatisfiable formula")
    target = (total - 1).bit_length()
    current = formula
    count = total
    fixed: list[int] = []
    steps: list[HalvingStep] = []
    while count > 1:
        for var in current.variables:
            cnt_pos = count_solutions(restrict(current, (var,)), limit)
            cnt_neg = count - cnt_pos
            if cnt_pos and cnt_neg:
                lit = var if cnt_pos <= cnt_neg else -var
                after = min(cnt_pos, cnt_neg)
                steps.append(HalvingStep(var, lit, count, after, "halve"))
                fixed.append(lit)
                current = restrict(current, (lit,))
                count = after
                break
        else:
            raise AssertionError("several solutions but every variable is pinned")
    while len(fixed) < target:
        var = current.variables[0]
        lit = var if is_satisfiable(restrict(current, (var,)), limit) else -var
        steps.append(HalvingStep(var, lit, count, count, "pad"))
        fixed.append(lit)
        current = restrict(current, (lit,))
    return GoodAssignment(
        Assignment.from_literals(fixed, FIXED),
        tuple(steps),
        total,
        target,
    )


@dataclass(frozen=True)
class GeneralResult:
    solution: Assignment | None
    instance_found: int | None
    restrictions_tried: int
    restrictions_skipped: int
    dppsz_calls: int
    modify_calls: int
    cutoff_hits: int
    mode: str
    metadata: dict = field(default_factory=dict)

    @property
    def satisfiable(self) -> bool:
        return self.solution is not None


class _Search:
    """Mutable counters shared by the two instance orders."""

    def __init__(
        self,
        formula: Formula,
        cfg: ImplicationConfig | None,
        independence: int | None,
    ) -> None:
        self.formula = formula
        self.cfg = cfg
        self.independence = independence
        self.tried = 0
        self.skipped = 0
        self.calls = 0
        self.modify = 0
        self.cutoff_hits = 0

    def attempt(self, literals: tuple[int, ...], cutoff: int) -> DppszResult | None:
        """One restriction: None when it provably cannot extend to a
        solution, otherwise the budgeted residual run."""
        self.tried += 1
        sub = restrict(self.formula, literals)
        if sub.has_empty_clause:
            self.skipped += 1
            return None
        perms = construct_sigma(sub.variables, self.independence) if sub.variables else None
        result = dppsz(sub, perms, self.cfg, max_modify_calls=cutoff)
        self.calls += 1
        self.modify += result.modify_calls
        if result.cutoff_hit:
            self.cutoff_hits += 1
        return result

    def merge(self, literals: tuple[int, ...], result: DppszResult) -> Assignment:
        entries = tuple((lit, FIXED) for lit in literals) + result.solution.entries
        merged = Assignment(entries)
        if evaluate(self.formula, merged) is not Evaluation.SATISFIED:
            raise AssertionError("residual solution does not extend to the formula")
        return merged


def _instance_restrictions(variables: tuple[int, ...], i: int) -> Iterator[tuple[int, ...]]:
    """All ways to fix i variables: index-ordered subsets, then polarity
    counters with the first chosen variable as the top bit, 1 = positive."""
    for combo in itertools.combinations(variables, i):
        for bits in range(1 << i):
            yield tuple(
                v if (bits >> (i - 1 - j)) & 1 else -v for j, v in enumerate(combo)
            )


def solve_general(
    formula: Formula,
    cfg: ImplicationConfig | None = None,
    independence: int | None = None,
    slack: float | None = None,
    slice_budget: int | None = None,
) -> GeneralResult:
    """Complete deterministic search over all restriction instances.

    Sequential by default: instance i finishes before i+1 starts. With
    slice_budget set, instances take turns instead, each consuming that
    many modify calls per visit; the answer is the same either way, only
    the discovery order of satisfying assignments can differ.
    """
    n = formula.n
    lam = lambda_k(max(formula.k, 3))
    if slack is None:
        slack = default_slack(n)
    search = _Search(formula, cfg, independence)
    mode = "sequential" if slice_budget is None else "slices"
    metadata = {
        "n": n,
        "k": formula.k,
        "lambda": lam,
        "slack": slack,
        "mode": mode,
    }
    if slice_budget is not None:
        if slice_budget < 1:
            raise ValueError("slice_budget must be positive")
        metadata["slice_budget"] = slice_budget

    def finish(i: int | None, solution: Assignment | None) -> GeneralResult:
        return GeneralResult(
            solution,
            i,
            search.tried,
            search.skipped,
            search.calls,
            search.modify,
            search.cutoff_hits,
            mode,
            metadata,
        )

    cutoffs = [cutoff_budget(n - i, formula.k, slack) for i in range(n + 1)]

    if slice_budget is None:
        for i in range(n + 1):
            for literals in _instance_restrictions(formula.variables, i):
                result = search.attempt(literals, cutoffs[i])
                if result is not None and result.satisfiable:
                    return finish(i, search.merge(literals, result))
        return finish(None, None)

    queue = deque(
        (i, _instance_restrictions(formula.variables, i)) for i in range(n + 1)
    )
    while queue:
        i, stream = queue.popleft()
        spent = 0
        exhausted = False
        while spent < slice_budget:
            literals = next(stream, None)
            if literals is None:
                exhausted = True
                break
            result = search.attempt(literals, cutoffs[i])
            if result is None:
                continue
            spent += result.modify_calls
            if result.satisfiable:
                return finish(i, search.merge(literals, result))
        if not exhausted:
            queue.append((i, stream))
    return finish(None, None)
