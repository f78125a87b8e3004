import math
import random

import pytest

from ppszlab.analysis import lambda_k
from ppszlab.cnf import Evaluation, Formula, evaluate, restrict
from ppszlab.general import (
    _instance_restrictions,
    construct_good_assignment,
    cutoff_budget,
    default_slack,
    solve_general,
)
from ppszlab.instances import planted_kcnf, unique_kcnf
from ppszlab.oracle import UnsatisfiableError, count_solutions


def F(*clauses, variables=None, k=None):
    return Formula.from_clauses(clauses, variables=variables, k=k)


def test_default_slack_values():
    assert default_slack(0) == 0.0
    assert default_slack(1) == 2.0
    assert default_slack(7) == 6.0


def test_cutoff_budget_matches_float_arithmetic_when_small():
    lam = lambda_k(3)
    for free in range(0, 30):
        for slack in (0.0, 1.5, 6.0):
            want = max(1, math.ceil(2.0 ** ((1.0 - lam) * free + slack)))
            assert cutoff_budget(free, 3, slack) == want


def test_cutoff_budget_floors_at_one():
    assert cutoff_budget(0, 3, 0.0) == 1
    assert cutoff_budget(0, 3, -5.0) == 1
    assert cutoff_budget(3, 3, -100.0) == 1


def test_cutoff_budget_survives_huge_exponents():
    lam = lambda_k(3)
    budget = cutoff_budget(1000, 3, 0.0)
    assert budget > 0
    assert math.isclose(math.log2(budget), (1.0 - lam) * 1000, abs_tol=1e-9)


def test_cutoff_budget_widths_below_three_share_the_constant():
    assert cutoff_budget(8, 2, 1.0) == cutoff_budget(8, 3, 1.0)
    assert cutoff_budget(8, 1, 1.0) == cutoff_budget(8, 3, 1.0)


def test_cutoff_budget_rejects_negative_free_counts():
    with pytest.raises(ValueError):
        cutoff_budget(-1, 3, 0.0)


def test_restriction_enumeration_order():
    assert list(_instance_restrictions((1, 2, 3), 0)) == [()]
    pairs = list(_instance_restrictions((1, 2, 3), 2))
    assert pairs[:4] == [(-1, -2), (-1, 2), (1, -2), (1, 2)]
    assert pairs[4] == (-1, -3)
    assert len(pairs) == 12


def test_good_assignment_for_a_unique_solution_is_empty():
    formula, _ = unique_kcnf(random.Random(67), 5, 3)
    good = construct_good_assignment(formula)
    assert good.size == 0
    assert good.steps == ()
    assert good.solutions == 1
    assert good.target_size == 0


def test_good_assignment_halves_a_free_cube():
    formula = F(variables=(1, 2, 3))
    good = construct_good_assignment(formula)
    assert good.solutions == 8
    assert good.target_size == 3
    assert good.assignment.sorted_literals() == (1, 2, 3)
    assert [s.kind for s in good.steps] == ["halve", "halve", "halve"]
    assert [(s.count_before, s.count_after) for s in good.steps] == [
        (8, 4),
        (4, 2),
        (2, 1),
    ]


def test_good_assignment_pads_when_halving_finishes_early():
    formula = F((1, 2), variables=(1, 2, 3))
    good = construct_good_assignment(formula)
    assert good.solutions == 6
    assert good.target_size == 3
    assert good.assignment.sorted_literals() == (-1, 2, 3)
    assert [s.kind for s in good.steps] == ["halve", "halve", "pad"]
    rest = restrict(formula, good.assignment.sorted_literals())
    assert count_solutions(rest) == 1


def test_good_assignment_leaves_exactly_one_solution():
    rng = random.Random(71)
    for _ in range(8):
        formula = planted_kcnf(rng, 5, 8, 3)[0]
        total = count_solutions(formula)
        good = construct_good_assignment(formula)
        assert good.size == good.target_size == (total - 1).bit_length()
        assert count_solutions(restrict(formula, good.assignment.sorted_literals())) == 1
        for step in good.steps:
            if step.kind == "halve":
                assert step.count_after <= step.count_before // 2


def test_good_assignment_needs_a_satisfiable_formula():
    with pytest.raises(UnsatisfiableError):
        construct_good_assignment(F((1,), (-1,)))


def test_solve_forced_chain_at_instance_zero():
    formula = F((1,), (-1, 2), (-2, 3))
    result = solve_general(formula)
    assert result.satisfiable
    assert result.instance_found == 0
    assert result.solution.sorted_literals() == (1, 2, 3)
    assert result.mode == "sequential"
    assert result.metadata["lambda"] == lambda_k(3)
    assert result.metadata["slack"] == 4.0


def test_solve_unconstrained_variables():
    result = solve_general(F(variables=(1, 2, 3)))
    assert result.satisfiable
    assert result.instance_found == 0
    assert result.solution.sorted_literals() == (-1, -2, -3)


def test_solve_reports_unsatisfiable_with_full_counts():
    formula = F((1, 2), (1, -2), (-1, 2), (-1, -2))
    result = solve_general(formula)
    assert not result.satisfiable
    assert result.instance_found is None
    assert result.restrictions_tried == 9
    assert result.restrictions_skipped == 4
    assert result.dppsz_calls == 5
    assert result.cutoff_hits == 0


def test_solve_counts_every_restriction_when_unsatisfiable():
    formula = F((1, 2, 3), (-1, -2, -3), (1, -2, 3), (-1, 2, -3),
                (1, 2, -3), (-1, -2, 3), (1, -2, -3), (-1, 2, 3))
    result = solve_general(formula)
    assert not result.satisfiable
    assert result.restrictions_tried == 3**3


def test_solve_survives_starved_budgets():
    # slack so low that every residual run gets a single walk; later
    # instances still finish the job
    formula = F((1, 2), (-1, 2), (1, -2))
    result = solve_general(formula, slack=-100.0)
    assert result.satisfiable
    assert result.solution.sorted_literals() == (1, 2)
    assert result.cutoff_hits >= 1
    assert result.instance_found >= 1


def test_solve_merges_fixed_and_residual_literals():
    rng = random.Random(73)
    for _ in range(4):
        formula = planted_kcnf(rng, 5, 10, 3)[0]
        result = solve_general(formula)
        assert result.satisfiable
        assert evaluate(formula, result.solution) is Evaluation.SATISFIED


def test_slice_mode_agrees_with_sequential():
    unsat = F((1, 2), (1, -2), (-1, 2), (-1, -2))
    sliced = solve_general(unsat, slice_budget=3)
    assert not sliced.satisfiable
    assert sliced.mode == "slices"
    assert sliced.metadata["slice_budget"] == 3
    sat = F((1,), (-1, 2), (-2, 3))
    found = solve_general(sat, slice_budget=2)
    assert found.satisfiable
    assert evaluate(sat, found.solution) is Evaluation.SATISFIED


def test_slice_budget_must_be_positive():
    with pytest.raises(ValueError):
        solve_general(F((1, 2)), slice_budget=0)


def test_solve_is_deterministic():
    formula = planted_kcnf(random.Random(79), 5, 9, 3)[0]
    assert solve_general(formula) == solve_general(formula)
