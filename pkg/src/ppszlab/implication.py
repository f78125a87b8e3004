"""Bounded-subset implication.

A literal over x is implied by a sub-CNF J (at most tau clauses) when every
solution of J over V(J) contains it. An unsatisfiable J whose variables
include x implies both polarities vacuously; that case reports the positive
literal, a fixed tie rule. Note this is genuinely subset implication, not a
bounded resolution approximation.

The candidate order is pinned so every caller is deterministic: subset sizes
ascending, and within one size the index combinations over the formula's
canonical clause order, lexicographically. The first implying subset wins.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .cnf import Clause, Formula
from .oracle import SolutionSet, enumerate_solutions

MAX_DEFAULT_TAU = 4


def default_tau(n: int) -> int:
    """floor(log2 n), clamped to [1, 4]: deep enough to be interesting at
    desk scale, shallow enough that subset enumeration stays affordable."""
    if n < 1:
        return 1
    return min(MAX_DEFAULT_TAU, max(1, n.bit_length() - 1))


@dataclass(frozen=True)
class ImplicationConfig:
    """Knobs for the implication search.

    tau=None derives the default from the formula size at the point of use.
    restrict_to_relevant skips candidate subsets that do not mention the
    queried variable; it is a pure pruning step (such subsets can never
    imply a literal over that variable) and never changes results.
    """

    tau: int | None = None
    restrict_to_relevant: bool = True

    def resolve_tau(self, n: int) -> int:
        if self.tau is not None:
            if self.tau < 1:
                raise ValueError("tau must be at least 1")
            return self.tau
        return default_tau(n)

    @property
    def tau_is_derived(self) -> bool:
        return self.tau is None


def sub_cnf_solutions(clauses: Iterable[Clause] | Formula) -> SolutionSet:
    """Solutions of a clause collection over exactly the variables it
    mentions (not some enclosing formula's variable set)."""
    if isinstance(clauses, Formula):
        clause_tuple = clauses.clauses
    else:
        clause_tuple = tuple(tuple(c) for c in clauses)
    mentioned = sorted({abs(lit) for clause in clause_tuple for lit in clause})
    sub = Formula.from_clauses(clause_tuple, variables=mentioned)
    return enumerate_solutions(sub)


def _implied_by_subset(subset: Sequence[Clause], x: int) -> int | None:
    """The literal over x that this particular sub-CNF pins, if any."""
    if not any(abs(lit) == x for clause in subset for lit in clause):
        return None
    sols = sub_cnf_solutions(subset)
    if sols.count == 0:
        return x  # vacuous: both polarities implied, positive by convention
    x_true = all(x in sol for sol in sols)
    if x_true:
        return x
    x_false = all(-x in sol for sol in sols)
    if x_false:
        return -x
    return None


def tau_implied(formula: Formula, x: int, cfg: ImplicationConfig | None = None) -> int | None:
    """First literal over x implied by some sub-CNF of at most tau clauses,
    or None. This is the reference implementation: small, slow, and used as
    the verifier for the memoized fast path in the solver engine."""
    cfg = cfg or ImplicationConfig()
    if x not in formula.variables:
        raise ValueError(f"variable {x} is not in the formula")
    tau = cfg.resolve_tau(formula.n)
    clauses = formula.clauses
    for size in range(1, min(tau, len(clauses)) + 1):
        for subset in combinations(clauses, size):
            if cfg.restrict_to_relevant and not any(
                abs(lit) == x for clause in subset for lit in clause
            ):
                continue
            lit = _implied_by_subset(subset, x)
            if lit is not None:
                return lit
    return None


def _polarity_masks(n: int) -> list[int]:
    """For each variable position j, the mask of all 2^n total assignments
    in which that variable is true (assignment s has variable j true iff
    bit j of s is set; the mask has bit s set for each such s)."""
    masks = []
    space = 1 << n
    for j in range(n):
        block = ((1 << (1 << j)) - 1) << (1 << j)  # one period: low zeros, high ones
        period = 1 << (j + 1)
        mask = block
        width = period
        while width < space:
            mask |= mask << width
            width *= 2
        masks.append(mask & ((1 << space) - 1))
    return masks


class ImplicationIndex:
    """Fast tau-implication over all restrictions of one fixed formula.

    A restriction state is a pair of bitmasks over variable positions:
    which variables are assigned, and to what. Each clause is precomputed
    as the set of total assignments satisfying it (one big integer with
    2^n bits), so "solutions of a sub-CNF consistent with the state" is a
    chain of integer ANDs. Results are memoized per (state, variable).

    By construction the answers match tau_implied on restrict(formula, a):
    the surviving clauses are swept in the same canonical order with the
    same first-hit rule. Tests hold the two implementations together.
    """

    VARIABLE_LIMIT = 20  # the per-clause masks hold 2^n bits

    def __init__(self, formula: Formula, cfg: ImplicationConfig | None = None):
        cfg = cfg or ImplicationConfig()
        self.formula = formula
        self.tau = cfg.resolve_tau(formula.n)
        n = formula.n
        if n > self.VARIABLE_LIMIT:
            raise ValueError(
                f"{n} variables exceed the implication index limit of {self.VARIABLE_LIMIT}"
            )
        self._n = n
        self._vars = formula.variables
        self._pos_of = {v: i for i, v in enumerate(self._vars)}
        self._space = (1 << (1 << n)) - 1  # all assignments
        true_masks = _polarity_masks(n)
        self._true_masks = true_masks
        self._false_masks = [self._space & ~m for m in true_masks]
        # clause -> (literal tuple, variable bitmask, satisfying-assignment mask)
        entries = []
        for clause in formula.clauses:
            vars_mask = 0
            falsify = self._space
            for lit in clause:
                j = self._pos_of[abs(lit)]
                vars_mask |= 1 << j
                falsify &= self._false_masks[j] if lit > 0 else self._true_masks[j]
            if not clause:
                sat_mask = 0  # the empty clause admits nothing
            else:
                sat_mask = self._space & ~falsify
            entries.append((clause, vars_mask, sat_mask))
        self._entries = entries
        self._state_cache: dict[tuple[int, int], tuple[list[int], list[int]]] = {}
        self._result_cache: dict[tuple[int, int, int], int] = {}

    def _consistency_mask(self, amask: int, avals: int) -> int:
        mask = self._space
        bits = amask
        while bits:
            low = bits & -bits
            j = low.bit_length() - 1
            mask &= self._true_masks[j] if (avals >> j) & 1 else self._false_masks[j]
            bits ^= low
        return mask

    def _survivors(self, amask: int, avals: int) -> tuple[list[int], list[int]]:
        """Clause masks for the restriction at this state, ordered and
        deduplicated exactly as restrict() orders the residual clauses."""
        key = (amask, avals)
        cached = self._state_cache.get(key)
        if cached is not None:
            return cached
        consistent = self._consistency_mask(amask, avals)
        residual: dict[Clause, tuple[int, int]] = {}
        for clause, vars_mask, sat_mask in self._entries:
            satisfied = False
            rest: list[int] = []
            for lit in clause:
                j = self._pos_of[abs(lit)]
                if (amask >> j) & 1:
                    if ((avals >> j) & 1) == (lit > 0):
                        satisfied = True
                        break
                else:
                    rest.append(lit)
            if satisfied:
                continue
            rkey = tuple(rest)
            if rkey not in residual:
                residual[rkey] = (sat_mask & consistent, vars_mask & ~amask)
        ordered = sorted(residual)
        sat_masks = [residual[c][0] for c in ordered]
        var_masks = [residual[c][1] for c in ordered]
        self._state_cache[key] = (sat_masks, var_masks)
        return sat_masks, var_masks

    def implied_literal(self, amask: int, avals: int, var: int) -> int:
        """The implied literal over var under the given restriction state,
        or 0. Memoized; var must be unassigned in the state."""
        xpos = self._pos_of[var]
        key = (amask, avals, xpos)
        hit = self._result_cache.get(key)
        if hit is not None:
            return hit
        result = self._sweep(amask, avals, var, xpos)
        self._result_cache[key] = result
        return result

    def _sweep(self, amask: int, avals: int, var: int, xpos: int) -> int:
        pm, rv = self._survivors(amask, avals)
        m = len(pm)
        xbit = 1 << xpos
        xtrue = self._true_masks[xpos]
        xfalse = self._false_masks[xpos]
        tau = self.tau
        # size 1: only a unit clause over x (or shorter) can decide it
        for a in range(m):
            ma = pm[a]
            if ma == 0:
                continue  # the empty clause has no variables to decide
            if ma & xfalse == 0:
                return var
            if ma & xtrue == 0:
                return -var
        if tau >= 2:
            for a in range(m - 1):
                pa, ra = pm[a], rv[a]
                for b in range(a + 1, m):
                    mab = pa & pm[b]
                    if mab == 0:
                        if (ra | rv[b]) & xbit:
                            return var
                    elif mab & xfalse == 0:
                        return var
                    elif mab & xtrue == 0:
                        return -var
        if tau >= 3:
            for a in range(m - 2):
                pa, ra = pm[a], rv[a]
                for b in range(a + 1, m - 1):
                    mab = pa & pm[b]
                    rab = ra | rv[b]
                    if mab == 0:
                        # any third clause mentioning x completes a vacuous hit
                        for c in range(b + 1, m):
                            if (rab | rv[c]) & xbit:
                                return var
                        continue
                    for c in range(b + 1, m):
                        mabc = mab & pm[c]
                        if mabc == 0:
                            if (rab | rv[c]) & xbit:
                                return var
                        elif mabc & xfalse == 0:
                            return var
                        elif mabc & xtrue == 0:
                            return -var
        for size in range(4, min(tau, m) + 1):
            for combo in combinations(range(m), size):
                mask = pm[combo[0]]
                for idx in combo[1:]:
                    mask &= pm[idx]
                if mask == 0:
                    union = 0
                    for idx in combo:
                        union |= rv[idx]
                    if union & xbit:
                        return var
                elif mask & xfalse == 0:
                    return var
                elif mask & xtrue == 0:
                    return -var
        return 0
