"""Linear codes that realize an assignment matrix over GF(2^e).

A coding matrix G has one row of field coefficients per broadcast packet;
packet h carries the symbol sum_i G[h][i] * x_i of the originals x.  Client j
can recover its missing packets iff the rows assigned to it, restricted to
its missing coordinates, have full rank w_j; decodability_check tests exactly
that, and decode performs the recovery by subtracting the known side-info
contribution and solving the remaining square system.

construct_code draws coefficients uniformly at random (seeded, so plans are
reproducible) and keeps the first draw that verifies for every client.  Over
a field with q >= k a valid draw exists whenever the assignment is feasible,
so the retry cap of 64 is generous; with q < k existence is not guaranteed,
which is warned about and then honestly attempted.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from typing import Sequence

from .assignment import AssignmentMatrix, is_feasible
from .gf import Field
from .instance import DmsiInstance


class CodeConstructionError(RuntimeError):
    """No verified coding matrix within the retry budget."""


def default_field_degree(k: int) -> int:
    """Smallest e with 2^e >= max(k, 2); q >= k guarantees a code exists."""
    return max(1, (k - 1).bit_length())


@dataclass(frozen=True)
class CodingMatrix:
    """m x n grid of field coefficients, one row per broadcast packet."""

    field: Field
    n: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(tuple(row) for row in self.rows))
        for i, row in enumerate(self.rows):
            if len(row) != self.n:
                raise ValueError(f"row {i} has length {len(row)}, expected n={self.n}")
            for value in row:
                self.field._check(value)

    @property
    def m(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class ClientView:
    """What one client knows: its side-info values and the symbols it received."""

    client: int
    side_info: tuple[tuple[int, int], ...]  # (0-based coord, value)
    received: tuple[tuple[int, int], ...]  # (broadcast row index, symbol)


def matrix_rank(field: Field, rows: Sequence[Sequence[int]]) -> int:
    """Rank over the field, by forward elimination."""
    work = [list(row) for row in rows]
    width = len(work[0]) if work else 0
    rank = 0
    for col in range(width):
        pivot = next((i for i in range(rank, len(work)) if work[i][col] != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = field.inv(work[rank][col])
        work[rank] = [field.mul(inv, v) for v in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][col] != 0:
                factor = work[i][col]
                work[i] = [
                    field.add(v, field.mul(factor, p))
                    for v, p in zip(work[i], work[rank])
                ]
        rank += 1
    return rank


def _solve_square(
    field: Field, rows: list[list[int]], rhs: list[int], width: int
) -> list[int]:
    """Solve for width unknowns; extra rows must be consistent."""
    augmented = [row + [b] for row, b in zip(rows, rhs)]
    rank = 0
    for col in range(width):
        pivot = next(
            (i for i in range(rank, len(augmented)) if augmented[i][col] != 0), None
        )
        if pivot is None:
            continue
        augmented[rank], augmented[pivot] = augmented[pivot], augmented[rank]
        inv = field.inv(augmented[rank][col])
        augmented[rank] = [field.mul(inv, v) for v in augmented[rank]]
        for i in range(len(augmented)):
            if i != rank and augmented[i][col] != 0:
                factor = augmented[i][col]
                augmented[i] = [
                    field.add(v, field.mul(factor, p))
                    for v, p in zip(augmented[i], augmented[rank])
                ]
        rank += 1
    if rank < width:
        raise ValueError("singular system: received symbols do not pin down the unknowns")
    for i in range(rank, len(augmented)):
        if augmented[i][width] != 0:
            raise ValueError("inconsistent received symbols")
    return [augmented[i][width] for i in range(width)]


def _missing(instance: DmsiInstance, client: int) -> list[int]:
    has = instance.clients[client].has
    return [x for x in range(instance.n) if x not in has]


def decodability_check(
    instance: DmsiInstance, matrix: AssignmentMatrix, code: CodingMatrix
) -> tuple[bool, ...]:
    """Per client: do its assigned rows span its missing coordinates?"""
    if matrix.k != instance.k:
        raise ValueError(f"matrix has {matrix.k} columns for {instance.k} clients")
    if code.n != instance.n or code.m != matrix.m:
        raise ValueError(
            f"code is {code.m}x{code.n}, expected {matrix.m}x{instance.n}"
        )
    verdicts = []
    for j in range(instance.k):
        missing = _missing(instance, j)
        sub = [
            [code.rows[h][x] for x in missing]
            for h in range(matrix.m)
            if matrix.rows[h][j]
        ]
        verdicts.append(matrix_rank(code.field, sub) == len(missing))
    return tuple(verdicts)


def construct_code(
    instance: DmsiInstance,
    matrix: AssignmentMatrix,
    field: Field | None = None,
    seed: int = 0,
    max_attempts: int = 64,
) -> CodingMatrix:
    """Draw random coefficient rows until every client verifies.

    The draw sequence is fully determined by the seed.  Requires a feasible
    assignment; raises CodeConstructionError after max_attempts full redraws.
    """
    if field is None:
        field = Field(default_field_degree(instance.k))
    if not is_feasible(matrix, instance):
        raise ValueError("assignment is infeasible; no code can exist")
    if field.q < instance.k:
        warnings.warn(
            f"field size {field.q} is below the client count {instance.k}; "
            "a decodable code may not exist at any number of rows",
            RuntimeWarning,
            stacklevel=2,
        )
    rng = random.Random(seed)
    failing: tuple[int, ...] = ()
    for _ in range(max_attempts):
        rows = tuple(
            tuple(rng.randrange(field.q) for _ in range(instance.n))
            for _ in range(matrix.m)
        )
        code = CodingMatrix(field=field, n=instance.n, rows=rows)
        verdicts = decodability_check(instance, matrix, code)
        if all(verdicts):
            return code
        failing = tuple(j + 1 for j, ok in enumerate(verdicts) if not ok)
    raise CodeConstructionError(
        f"no verified code after {max_attempts} draws over {field}; "
        f"clients {list(failing)} still lack full rank"
    )


def encode(code: CodingMatrix, payload: Sequence[int]) -> tuple[int, ...]:
    """Broadcast symbols for one payload of n original field values."""
    if len(payload) != code.n:
        raise ValueError(f"payload has {len(payload)} symbols, expected {code.n}")
    for value in payload:
        code.field._check(value)
    out = []
    for row in code.rows:
        acc = 0
        for coeff, value in zip(row, payload):
            acc = code.field.add(acc, code.field.mul(coeff, value))
        out.append(acc)
    return tuple(out)


def client_view(
    instance: DmsiInstance,
    matrix: AssignmentMatrix,
    client: int,
    payload: Sequence[int],
    broadcast: Sequence[int],
) -> ClientView:
    """Assemble what the given client sees from the ground truth."""
    spec = instance.clients[client]
    return ClientView(
        client=client,
        side_info=tuple((x, payload[x]) for x in sorted(spec.has)),
        received=tuple(
            (h, broadcast[h]) for h in range(matrix.m) if matrix.rows[h][client]
        ),
    )


def decode(
    view: ClientView,
    instance: DmsiInstance,
    matrix: AssignmentMatrix,
    code: CodingMatrix,
) -> dict[int, int]:
    """Recover the client's missing packets; returns {0-based coord: value}.

    Raises ValueError when the view does not match the assignment or when the
    system is singular or inconsistent (i.e. decodability was violated).
    """
    j = view.client
    if not 0 <= j < instance.k:
        raise ValueError(f"client index {j} outside [0, {instance.k})")
    spec = instance.clients[j]
    if {coord for coord, _ in view.side_info} != spec.has:
        raise ValueError("side information does not match the client's holdings")
    assigned = {h for h in range(matrix.m) if matrix.rows[h][j]}
    if {h for h, _ in view.received} != assigned:
        raise ValueError("received rows do not match the assignment")

    field = code.field
    side = dict(view.side_info)
    missing = _missing(instance, j)
    rows = []
    rhs = []
    for h, symbol in view.received:
        rows.append([code.rows[h][x] for x in missing])
        known = 0
        for x, value in side.items():
            known = field.add(known, field.mul(code.rows[h][x], value))
        rhs.append(field.sub(symbol, known))
    solution = _solve_square(field, rows, rhs, len(missing))
    return dict(zip(missing, solution))
