"""Assignment matrices, delay accounting, and the optimal broadcast plan.

An m x k 0/1 matrix assigns broadcast packets (rows) to clients (columns):
entry (i, j) = 1 means client j must receive broadcast packet i.  A packet
occupies the channel for as long as its slowest recipient needs, so its delay
is max{d_j : a[i][j] = 1} (0 if nobody needs it) and a plan's total delay is
the sum over rows.

Feasibility is the column-weight criterion: client j must be assigned at
least w_j = n - |has_j| rows (netflow.py provides the independent max-flow
check of the same property).  The minimum-total-delay plan simply gives
client j the topmost w_j rows, and its cost has a closed form evaluated in
non-increasing delay order.  transform_to_optimal makes the optimality
argument executable: it rewrites any exact-weight matrix into the optimal one
through k + 1 steps, none of which increases the total delay.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .instance import DmsiInstance


@dataclass(frozen=True)
class AssignmentMatrix:
    """Immutable m x k 0/1 matrix; rows are broadcast packets."""

    rows: tuple[tuple[int, ...], ...]
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(tuple(row) for row in self.rows))
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 0:
            raise ValueError(f"k must be a nonnegative int, got {self.k!r}")
        for i, row in enumerate(self.rows):
            if len(row) != self.k:
                raise ValueError(f"row {i} has length {len(row)}, expected k={self.k}")
            for j, a in enumerate(row):
                if not isinstance(a, int) or isinstance(a, bool) or a not in (0, 1):
                    raise ValueError(f"entry ({i}, {j}) is {a!r}, expected 0 or 1")

    @property
    def m(self) -> int:
        return len(self.rows)

    def column_weight(self, j: int) -> int:
        return sum(row[j] for row in self.rows)

    def column_weights(self) -> tuple[int, ...]:
        return tuple(self.column_weight(j) for j in range(self.k))

    def with_column_order(self, order: Sequence[int]) -> AssignmentMatrix:
        """Columns permuted so new column c is old column order[c]."""
        if sorted(order) != list(range(self.k)):
            raise ValueError(f"{order!r} is not a permutation of range({self.k})")
        return AssignmentMatrix(
            rows=tuple(tuple(row[j] for j in order) for row in self.rows), k=self.k
        )


@dataclass(frozen=True)
class DelayReport:
    per_packet: tuple[Fraction, ...]
    total: Fraction
    closed_form: Fraction | None = None


def packet_delay(matrix: AssignmentMatrix, i: int, delays: Sequence[Fraction]) -> Fraction:
    """Delay of broadcast packet i: slowest recipient's delay, 0 if unassigned."""
    if len(delays) != matrix.k:
        raise ValueError(f"{len(delays)} delays for k={matrix.k} columns")
    row = matrix.rows[i]
    return max((delays[j] for j in range(matrix.k) if row[j]), default=Fraction(0))


def total_delay(matrix: AssignmentMatrix, delays: Sequence[Fraction]) -> DelayReport:
    per_packet = tuple(packet_delay(matrix, i, delays) for i in range(matrix.m))
    return DelayReport(per_packet=per_packet, total=sum(per_packet, Fraction(0)))


def is_feasible(matrix: AssignmentMatrix, instance: DmsiInstance) -> bool:
    """Column-weight criterion: every client gets at least the rows it needs."""
    if matrix.k != instance.k:
        raise ValueError(f"matrix has {matrix.k} columns for {instance.k} clients")
    return all(
        matrix.column_weight(j) >= w for j, w in enumerate(instance.want_counts())
    )


def optimal_assignment(instance: DmsiInstance) -> tuple[tuple[int, ...], AssignmentMatrix]:
    """The minimum-total-delay plan: client j gets the topmost w_j rows.

    Returns (ranking, matrix) where ranking lists client indices in
    non-increasing delay order (ties keep input order) and the matrix is in
    original column order with m* = max_j w_j rows.  The 1-pattern itself
    does not depend on the ranking; the ranking fixes the order in which
    closed_form_delay accounts for the columns.
    """
    want = instance.want_counts()
    m_star = max(want, default=0)
    rows = tuple(
        tuple(1 if i < w else 0 for w in want) for i in range(m_star)
    )
    return instance.delay_ranking(), AssignmentMatrix(rows=rows, k=instance.k)


def closed_form_delay(instance: DmsiInstance) -> Fraction:
    """Total delay of the optimal plan, without building the matrix.

    With clients in non-increasing delay order, client j contributes its
    delay once for every row it needs beyond all earlier clients' needs:
    sum_j d_j * max(0, w_j - max(w_1..w_{j-1}, 0)).
    """
    want = instance.want_counts()
    delays = instance.delays()
    covered = 0
    total = Fraction(0)
    for j in instance.delay_ranking():
        total += delays[j] * max(0, want[j] - covered)
        covered = max(covered, want[j])
    return total


@dataclass(frozen=True)
class TransformStep:
    label: str
    matrix: AssignmentMatrix
    total: Fraction


@dataclass(frozen=True)
class TransformTrace:
    """Matrices and running totals through the rewrite, in ranked column order."""

    ranking: tuple[int, ...]
    steps: tuple[TransformStep, ...]

    @property
    def final_matrix(self) -> AssignmentMatrix:
        return self.steps[-1].matrix

    @property
    def final_total(self) -> Fraction:
        return self.steps[-1].total


def reduce_to_exact_weights(
    matrix: AssignmentMatrix, instance: DmsiInstance
) -> AssignmentMatrix:
    """Clear surplus 1s until every column weight equals w_j exactly.

    Surplus assignments can only cost delay, never help, so each is removed
    from the row whose current packet delay is largest (ties: smallest row
    index), dropping the most expensive transmissions first.  Raises if some
    column is under weight, i.e. the matrix was not feasible to begin with.
    """
    if matrix.k != instance.k:
        raise ValueError(f"matrix has {matrix.k} columns for {instance.k} clients")
    want = instance.want_counts()
    delays = instance.delays()
    rows = [list(row) for row in matrix.rows]
    for j, w in enumerate(want):
        weight = sum(row[j] for row in rows)
        if weight < w:
            raise ValueError(f"column {j + 1} has weight {weight} < w={w}; infeasible")
        while weight > w:
            current = AssignmentMatrix(rows=tuple(tuple(r) for r in rows), k=matrix.k)
            i = max(
                (i for i in range(len(rows)) if rows[i][j]),
                key=lambda i: (packet_delay(current, i, delays), -i),
            )
            rows[i][j] = 0
            weight -= 1
    return AssignmentMatrix(rows=tuple(tuple(r) for r in rows), k=matrix.k)


def transform_to_optimal(
    matrix: AssignmentMatrix, instance: DmsiInstance
) -> TransformTrace:
    """Rewrite an exact-weight matrix into the optimal one, step by step.

    Works in ranked column order (columns sorted by non-increasing client
    delay).  Step 1 permutes rows so column 1's ones sit on top.  Step j
    then confines column j's ones to the topmost w_j rows: above the divider
    u = #rows already carrying a 1 in an earlier column, entries of column j
    may be rewritten freely (those packets' delays are pinned by faster-
    ranked columns), and below it, ones may only be cleared or rows permuted.
    Step k+1 drops the all-zero rows left at the bottom.  No step increases
    the total delay, which proves the target matrix optimal; the returned
    trace records every intermediate matrix with its total.
    """
    if matrix.k != instance.k:
        raise ValueError(f"matrix has {matrix.k} columns for {instance.k} clients")
    want = instance.want_counts()
    if matrix.column_weights() != want:
        raise ValueError(
            f"column weights {matrix.column_weights()} != want counts {want}; "
            "reduce_to_exact_weights first"
        )
    ranking = instance.delay_ranking()
    delays = instance.delays()
    ranked_delays = [delays[j] for j in ranking]
    k = instance.k

    rows = [[row[j] for j in ranking] for row in matrix.rows]

    def snapshot(label: str) -> TransformStep:
        snap = AssignmentMatrix(rows=tuple(tuple(r) for r in rows), k=k)
        return TransformStep(label, snap, total_delay(snap, ranked_delays).total)

    steps = [snapshot("initial")]

    if k > 0:
        # step 1: stable row partition, column 1's ones above its zeros
        rows.sort(key=lambda row: 1 - row[0])
        steps.append(snapshot("step 1"))

    for c in range(1, k):
        u = sum(1 for row in rows if any(row[:c]))
        assert all(any(row[:c]) for row in rows[:u]), "upper block is not a prefix"
        ones_u = sum(rows[i][c] for i in range(u))
        ones_l = sum(rows[i][c] for i in range(u, len(rows)))
        # inside the upper block column c is freely rewritable: ones on top
        for i in range(u):
            rows[i][c] = 1 if i < ones_u else 0
        if ones_l > 0:
            lift = min(ones_l, u - ones_u)
            for i in range(ones_u, ones_u + lift):
                rows[i][c] = 1
            cleared = 0
            for i in range(u, len(rows)):
                if rows[i][c] and cleared < lift:
                    rows[i][c] = 0
                    cleared += 1
            # surviving lower ones float to the top of the lower block
            rows[u:] = sorted(rows[u:], key=lambda row: 1 - row[c])
        steps.append(snapshot(f"step {c + 1}"))

    while rows and not any(rows[-1]):
        rows.pop()
    steps.append(snapshot(f"step {k + 1}"))

    _, optimal = optimal_assignment(instance)
    target = optimal.with_column_order(ranking)
    final = steps[-1]
    assert final.matrix == target, "rewrite did not reach the optimal matrix"
    assert all(
        steps[s].total >= steps[s + 1].total for s in range(len(steps) - 1)
    ), "a rewrite step increased the total delay"
    return TransformTrace(ranking=ranking, steps=tuple(steps))
