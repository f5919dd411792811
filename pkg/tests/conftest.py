"""Shared fixtures: the six-packet worked example, its two reference
matrices, the pinned GF(4) code, and hypothesis strategies for random
instances and exact-weight assignment matrices."""

import json
import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from dmsiplan import AssignmentMatrix, ClientSpec, DmsiInstance, parse_instance

DEMO_DOC = {
    "n": 6,
    "clients": [
        {"has": [1, 3, 5, 6], "delay": 8},
        {"has": [1, 2, 3, 4, 5], "delay": 4},
        {"has": [3, 4, 6], "delay": 2},
        {"has": [4], "delay": 1},
    ],
}

# hand-built feasible plan for the worked example, total delay 24
HAND_PLAN_ROWS = ((1, 0, 1, 1), (0, 1, 0, 1), (1, 0, 0, 1), (0, 0, 1, 1), (0, 0, 1, 1))
# the optimal plan for the same instance, total delay 20
OPTIMAL_PLAN_ROWS = ((1, 1, 1, 1), (1, 0, 1, 1), (0, 0, 1, 1), (0, 0, 0, 1), (0, 0, 0, 1))

# reference GF(4) code for OPTIMAL_PLAN_ROWS (alpha = 2, alpha^2 = 3); every
# client's restricted submatrix has full rank, re-verified in the suite
KNOWN_GF4_ROWS = (
    (0, 0, 2, 1, 3, 2),
    (1, 1, 3, 2, 1, 1),
    (2, 3, 1, 2, 1, 3),
    (1, 0, 3, 2, 0, 3),
    (3, 2, 1, 2, 1, 0),
)

# every 2-subset of 4 packets missing: a GF(2) code would need four pairwise
# independent columns in a 2-dimensional space, which do not exist
IMPOSSIBLE_GF2_DOC = {
    "n": 4,
    "clients": [
        {"has": [3, 4], "delay": 6},
        {"has": [2, 4], "delay": 5},
        {"has": [2, 3], "delay": 4},
        {"has": [1, 4], "delay": 3},
        {"has": [1, 3], "delay": 2},
        {"has": [1, 2], "delay": 1},
    ],
}


@pytest.fixture
def demo_instance():
    return parse_instance(json.dumps(DEMO_DOC))


@pytest.fixture
def hand_plan_matrix():
    return AssignmentMatrix(rows=HAND_PLAN_ROWS, k=4)


@pytest.fixture
def optimal_plan_matrix():
    return AssignmentMatrix(rows=OPTIMAL_PLAN_ROWS, k=4)


def make_instance(n, has_sets, delays):
    """0-based side-info sets and int/Fraction delays, zipped into an instance."""
    return DmsiInstance(
        n=n,
        clients=tuple(
            ClientSpec(has=frozenset(has), delay=Fraction(d))
            for has, d in zip(has_sets, delays)
        ),
    )


def random_instance(rng: random.Random, max_n=6, max_k=4, delay_range=(1, 16)):
    """Corpus draw: n <= max_n packets, 1..max_k clients, integer delays."""
    n = rng.randint(0, max_n)
    k = rng.randint(1, max_k)
    clients = []
    for _ in range(k):
        size = rng.randint(0, n)
        has = frozenset(rng.sample(range(n), size))
        delay = Fraction(rng.randint(*delay_range))
        clients.append(ClientSpec(has=has, delay=delay))
    return DmsiInstance(n=n, clients=tuple(clients))


@st.composite
def instances(draw, max_n=5, max_k=4, min_k=0):
    n = draw(st.integers(0, max_n))
    k = draw(st.integers(min_k, max_k))
    clients = []
    for _ in range(k):
        has = draw(st.frozensets(st.integers(0, n - 1))) if n else frozenset()
        delay = Fraction(draw(st.integers(0, 12)), draw(st.integers(1, 4)))
        clients.append(ClientSpec(has=has, delay=delay))
    return DmsiInstance(n=n, clients=tuple(clients))


@st.composite
def instance_with_exact_matrix(draw, max_n=5, max_k=4):
    """An instance plus a matrix whose column weights equal the want counts."""
    instance = draw(instances(max_n=max_n, max_k=max_k))
    want = instance.want_counts()
    m = max(want, default=0) + draw(st.integers(0, 2))
    rows = [[0] * instance.k for _ in range(m)]
    for j, w in enumerate(want):
        for i in draw(st.permutations(range(m)))[:w]:
            rows[i][j] = 1
    matrix = AssignmentMatrix(rows=tuple(tuple(r) for r in rows), k=instance.k)
    return instance, matrix


@pytest.fixture
def criterion_report(request):
    """Emit one uncaptured pass/fail line per acceptance criterion."""
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def emit(number: int, name: str, ok: bool) -> None:
        line = f"[criterion {number}] {'PASS' if ok else 'FAIL'}: {name}"
        if capman is not None:
            with capman.global_and_fixture_disabled():
                print(line)
        else:
            print(line)

    return emit
