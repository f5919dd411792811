"""Delay accounting, the optimal plan, the closed form, and the step-by-step
rewrite that proves it optimal."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import OPTIMAL_PLAN_ROWS, instance_with_exact_matrix, instances, make_instance
from dmsiplan import (
    AssignmentMatrix,
    DmsiInstance,
    closed_form_delay,
    is_feasible,
    optimal_assignment,
    packet_delay,
    reduce_to_exact_weights,
    total_delay,
    transform_to_optimal,
)

# the worked walkthrough's intermediate matrices, in ranked column order
STEP_1_ROWS = ((1, 0, 1, 1), (1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1), (0, 0, 1, 1))
STEP_2_ROWS = ((1, 1, 1, 1), (1, 0, 0, 1), (0, 0, 0, 1), (0, 0, 1, 1), (0, 0, 1, 1))
STEP_3_ROWS = ((1, 1, 1, 1), (1, 0, 1, 1), (0, 0, 1, 1), (0, 0, 0, 1), (0, 0, 0, 1))


def test_handpicked_plan_delays(demo_instance, hand_plan_matrix):
    report = total_delay(hand_plan_matrix, demo_instance.delays())
    assert report.per_packet == tuple(Fraction(d) for d in (8, 4, 8, 2, 2))
    assert report.total == Fraction(24)


def test_optimal_plan_delays(demo_instance, optimal_plan_matrix):
    report = total_delay(optimal_plan_matrix, demo_instance.delays())
    assert report.per_packet == tuple(Fraction(d) for d in (8, 8, 2, 1, 1))
    assert report.total == Fraction(20)


def test_packet_delay_of_unassigned_row_is_zero():
    matrix = AssignmentMatrix(rows=((0, 0), (1, 0)), k=2)
    delays = (Fraction(3), Fraction(5))
    assert packet_delay(matrix, 0, delays) == 0
    assert packet_delay(matrix, 1, delays) == 3
    with pytest.raises(ValueError):
        packet_delay(matrix, 0, (Fraction(1),))


def test_matrix_validation():
    with pytest.raises(ValueError):
        AssignmentMatrix(rows=((1, 0), (1,)), k=2)
    with pytest.raises(ValueError):
        AssignmentMatrix(rows=((2, 0),), k=2)
    with pytest.raises(ValueError):
        AssignmentMatrix(rows=((True, 0),), k=2)
    with pytest.raises(ValueError):
        AssignmentMatrix(rows=(), k=-1)


def test_column_weights(hand_plan_matrix, optimal_plan_matrix):
    assert hand_plan_matrix.column_weights() == (2, 1, 3, 5)
    assert optimal_plan_matrix.column_weights() == (2, 1, 3, 5)


def test_feasibility(demo_instance, hand_plan_matrix, optimal_plan_matrix):
    assert is_feasible(hand_plan_matrix, demo_instance)
    assert is_feasible(optimal_plan_matrix, demo_instance)
    short = AssignmentMatrix(rows=optimal_plan_matrix.rows[:-1], k=4)
    assert not is_feasible(short, demo_instance)
    with pytest.raises(ValueError):
        is_feasible(AssignmentMatrix(rows=(), k=3), demo_instance)


def test_optimal_assignment_matches_reference(demo_instance):
    ranking, matrix = optimal_assignment(demo_instance)
    assert ranking == (0, 1, 2, 3)
    assert matrix.rows == OPTIMAL_PLAN_ROWS
    assert is_feasible(matrix, demo_instance)


def test_optimal_assignment_empty_cases():
    ranking, matrix = optimal_assignment(make_instance(0, [], []))
    assert ranking == () and matrix.rows == () and matrix.k == 0
    # clients that already hold everything need no rows at all
    inst = make_instance(2, [{0, 1}, {0, 1}], [5, 3])
    ranking, matrix = optimal_assignment(inst)
    assert matrix.rows == ()
    assert closed_form_delay(inst) == 0


def test_closed_form_term_by_term(demo_instance):
    # contributions in ranked order: 8*2, 4*0 (covered), 2*1, 1*2
    want = demo_instance.want_counts()
    delays = demo_instance.delays()
    covered = 0
    terms = []
    for j in demo_instance.delay_ranking():
        terms.append(delays[j] * max(0, want[j] - covered))
        covered = max(covered, want[j])
    assert terms == [Fraction(16), Fraction(0), Fraction(2), Fraction(2)]
    assert closed_form_delay(demo_instance) == Fraction(20) == sum(terms)


def test_closed_form_with_equal_delays():
    inst = make_instance(3, [set(), {0}, {0, 1}], [4, 4, 4])
    # all delays equal: cost is max want times the common delay
    assert closed_form_delay(inst) == 3 * 4


@given(instances())
def test_closed_form_equals_total_of_optimal(inst):
    _, matrix = optimal_assignment(inst)
    assert total_delay(matrix, inst.delays()).total == closed_form_delay(inst)


@st.composite
def _instance_with_client_order(draw):
    inst = draw(instances())
    return inst, draw(st.permutations(range(inst.k)))


@given(_instance_with_client_order())
def test_closed_form_ignores_client_order(case):
    inst, order = case
    permuted = DmsiInstance(n=inst.n, clients=tuple(inst.clients[j] for j in order))
    assert closed_form_delay(permuted) == closed_form_delay(inst)


@given(instance_with_exact_matrix())
def test_total_is_row_permutation_invariant(case):
    inst, matrix = case
    reversed_rows = AssignmentMatrix(rows=matrix.rows[::-1], k=matrix.k)
    delays = inst.delays()
    assert total_delay(matrix, delays).total == total_delay(reversed_rows, delays).total


@given(instance_with_exact_matrix())
def test_setting_an_entry_never_lowers_total(case):
    inst, matrix = case
    delays = inst.delays()
    base = total_delay(matrix, delays).total
    for i in range(matrix.m):
        for j in range(matrix.k):
            if matrix.rows[i][j] == 0:
                rows = [list(r) for r in matrix.rows]
                rows[i][j] = 1
                bumped = AssignmentMatrix(rows=tuple(tuple(r) for r in rows), k=matrix.k)
                assert total_delay(bumped, delays).total >= base


def test_transform_reproduces_walkthrough(demo_instance, hand_plan_matrix, optimal_plan_matrix):
    trace = transform_to_optimal(hand_plan_matrix, demo_instance)
    assert trace.ranking == (0, 1, 2, 3)
    totals = [step.total for step in trace.steps]
    assert totals == [Fraction(t) for t in (24, 24, 21, 20, 20, 20)]
    labels = [step.label for step in trace.steps]
    assert labels == ["initial", "step 1", "step 2", "step 3", "step 4", "step 5"]
    assert trace.steps[1].matrix.rows == STEP_1_ROWS
    assert trace.steps[2].matrix.rows == STEP_2_ROWS
    assert trace.steps[3].matrix.rows == STEP_3_ROWS
    assert trace.final_matrix == optimal_plan_matrix
    assert trace.final_total == closed_form_delay(demo_instance)


def test_transform_requires_exact_weights(demo_instance, optimal_plan_matrix):
    rows = [list(r) for r in optimal_plan_matrix.rows]
    rows[4][0] = 1  # surplus assignment for C1
    heavy = AssignmentMatrix(rows=tuple(tuple(r) for r in rows), k=4)
    with pytest.raises(ValueError, match="weights"):
        transform_to_optimal(heavy, demo_instance)
    with pytest.raises(ValueError):
        transform_to_optimal(AssignmentMatrix(rows=(), k=4), demo_instance)


def test_transform_keeps_interleaved_zero_rows_out(demo_instance, hand_plan_matrix):
    rows = (
        hand_plan_matrix.rows[:2] + ((0, 0, 0, 0),) + hand_plan_matrix.rows[2:] + ((0, 0, 0, 0),)
    )
    padded = AssignmentMatrix(rows=rows, k=4)
    trace = transform_to_optimal(padded, demo_instance)
    assert trace.final_matrix.rows == OPTIMAL_PLAN_ROWS


@given(instance_with_exact_matrix())
@settings(max_examples=150)
def test_transform_is_monotone_and_lands_on_optimal(case):
    inst, matrix = case
    trace = transform_to_optimal(matrix, inst)
    totals = [step.total for step in trace.steps]
    assert all(a >= b for a, b in zip(totals, totals[1:]))
    assert len(trace.steps) == inst.k + 2
    _, optimal = optimal_assignment(inst)
    assert trace.final_matrix == optimal.with_column_order(trace.ranking)
    assert trace.final_total == closed_form_delay(inst)


def test_reduce_clears_most_expensive_rows_first():
    inst = make_instance(2, [{1}, {0}], [2, 3])  # want (1, 1)
    matrix = AssignmentMatrix(rows=((1, 1), (1, 0)), k=2)
    reduced = reduce_to_exact_weights(matrix, inst)
    # column 1 is over weight; row 1 costs max(2, 3), row 2 costs 2
    assert reduced.rows == ((0, 1), (1, 0))


def test_reduce_passes_through_exact(demo_instance, optimal_plan_matrix):
    assert reduce_to_exact_weights(optimal_plan_matrix, demo_instance) == optimal_plan_matrix


def test_reduce_rejects_underweight(demo_instance, optimal_plan_matrix):
    short = AssignmentMatrix(rows=optimal_plan_matrix.rows[:3], k=4)
    with pytest.raises(ValueError, match="infeasible"):
        reduce_to_exact_weights(short, demo_instance)


@given(instance_with_exact_matrix())
def test_reduce_then_transform_from_padded(case):
    inst, matrix = case
    rng = random.Random(1234)
    rows = [list(r) for r in matrix.rows]
    for row in rows:
        for j in range(inst.k):
            if row[j] == 0 and rng.random() < 0.3:
                row[j] = 1
    padded = AssignmentMatrix(rows=tuple(tuple(r) for r in rows), k=inst.k)
    reduced = reduce_to_exact_weights(padded, inst)
    assert reduced.column_weights() == inst.want_counts()
    trace = transform_to_optimal(reduced, inst)
    assert trace.final_total == closed_form_delay(inst)


def test_with_column_order_validates(optimal_plan_matrix):
    with pytest.raises(ValueError):
        optimal_plan_matrix.with_column_order((0, 1, 2))
    with pytest.raises(ValueError):
        optimal_plan_matrix.with_column_order((0, 0, 1, 2))
    swapped = optimal_plan_matrix.with_column_order((3, 2, 1, 0))
    assert swapped.rows[0] == (1, 1, 1, 1)
    assert swapped.rows[3] == (1, 0, 0, 0)
