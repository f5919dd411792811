#!/usr/bin/env python3
"""Random-instance sweep: on every draw the closed form, the constructed
optimal plan, and the exhaustive enumeration must agree exactly, and the
weight and max-flow feasibility tests must give the same verdict on a random
matrix.  Exits nonzero on the first disagreement."""

import argparse
import random
import sys
import time
from fractions import Fraction

from dmsiplan import (
    AssignmentMatrix,
    ClientSpec,
    DmsiInstance,
    brute_force_optimum,
    closed_form_delay,
    is_solvable,
    optimal_assignment,
    total_delay,
)


def draw_instance(rng: random.Random, max_n: int, max_k: int) -> DmsiInstance:
    n = rng.randint(0, max_n)
    clients = []
    for _ in range(rng.randint(1, max_k)):
        has = frozenset(rng.sample(range(n), rng.randint(0, n)))
        clients.append(ClientSpec(has=has, delay=Fraction(rng.randint(1, 16))))
    return DmsiInstance(n=n, clients=tuple(clients))


def draw_matrix(rng: random.Random, instance: DmsiInstance) -> AssignmentMatrix:
    m = rng.randint(0, max(instance.want_counts(), default=0) + 1)
    rows = tuple(
        tuple(rng.randint(0, 1) for _ in range(instance.k)) for _ in range(m)
    )
    return AssignmentMatrix(rows=rows, k=instance.k)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=500)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-n", type=int, default=6)
    parser.add_argument("--max-k", type=int, default=4)
    parser.add_argument("--budget", type=int, default=10**13)
    parser.add_argument("--workers", type=int, default=None)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    t0 = time.perf_counter()
    examined = 0
    slowest = (0.0, None)
    for i in range(args.count):
        instance = draw_instance(rng, args.max_n, args.max_k)
        t1 = time.perf_counter()
        result = brute_force_optimum(instance, budget=args.budget, workers=args.workers)
        dt = time.perf_counter() - t1
        if dt > slowest[0]:
            slowest = (dt, instance)
        examined += result.matrices_examined

        closed = closed_form_delay(instance)
        _, star = optimal_assignment(instance)
        constructed = total_delay(star, instance.delays()).total
        if not (result.best_total == closed == constructed):
            print(f"DISAGREEMENT on draw {i}: {instance}")
            print(
                f"  enumerated {result.best_total}, closed {closed}, "
                f"constructed {constructed}"
            )
            return 1

        matrix = draw_matrix(rng, instance)
        weights_ok = all(
            matrix.column_weight(j) >= w
            for j, w in enumerate(instance.want_counts())
        )
        if is_solvable(instance, matrix) != weights_ok:
            print(f"FEASIBILITY DISAGREEMENT on draw {i}: {instance} {matrix}")
            return 1

    elapsed = time.perf_counter() - t0
    print(
        f"{args.count} draws agreed; {examined} candidates enumerated "
        f"in {elapsed:.2f}s"
    )
    print(f"slowest single search: {slowest[0] * 1000:.1f} ms on {slowest[1]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
