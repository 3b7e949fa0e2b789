"""Verification machinery: brute-force search, instance generators, array
encodings, and randomized harnesses for the oracle-level facts.

Everything here is independent of the sweep machinery in ``solver`` so the
two can cross-check each other.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field

from .matroids import (
    GraphicMatroid,
    LinearMatroid,
    ParallelLiftMatroid,
    PartitionMatroid,
    PreconditionError,
    UniformMatroid,
)
from .solver import RainbowAssignment, RainbowInstance, solve

SPECIES = ("uniform", "partition", "graphic", "linear")


class HypothesisError(ValueError):
    """A harness input does not satisfy the stated hypotheses."""


class GenerationError(RuntimeError):
    """Random instance generation exhausted its retry budget."""


@dataclass(frozen=True)
class LatinArray:
    """Rows of symbols; in row-Latin mode each row is a permutation of
    1..n."""

    rows: tuple
    n: int

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))

    def validate_row_latin(self):
        expected = set(range(1, self.n + 1))
        for idx, row in enumerate(self.rows):
            if len(row) != self.n or set(row) != expected:
                raise PreconditionError(
                    f"row {idx} is not a permutation of 1..{self.n}"
                )
        return self


def random_row_latin(n, m, rng):
    rows = []
    for _ in range(m):
        row = list(range(1, n + 1))
        rng.shuffle(row)
        rows.append(tuple(row))
    return LatinArray(tuple(rows), n)


def encode_array(rows, value_matroid=None):
    """Encode an array as a rainbow instance: cells are the ground set, one
    family set per row, a capacity-one column partition on one side, and the
    (lifted) value structure on the other.

    With ``value_matroid=None`` the values act as symbols: distinct values
    are required, nothing more, which is exactly the row-Latin transversal
    setting.  With a value matroid, cells sharing a value become parallel
    elements of its lift.
    """
    if isinstance(rows, LatinArray):
        rows = rows.rows
    rows = [tuple(r) for r in rows]
    if not rows:
        raise PreconditionError("the array needs at least one row")
    n = len(rows[0])
    for idx, row in enumerate(rows):
        if len(row) != n:
            raise PreconditionError(
                f"row {idx} has length {len(row)}, expected {n}"
            )
        if len(set(row)) != n:
            raise PreconditionError(f"row {idx} repeats a value")
    col_of = [c for _ in rows for c in range(n)]
    m_oracle = PartitionMatroid(col_of, [1] * n)
    values = [v for row in rows for v in row]
    if value_matroid is None:
        symbols = sorted(set(values))
        label = {s: i for i, s in enumerate(symbols)}
        n_oracle = PartitionMatroid([label[v] for v in values],
                                    [1] * len(symbols))
    else:
        for idx, row in enumerate(rows):
            if not value_matroid.is_independent(row):
                raise PreconditionError(
                    f"row {idx} is dependent in the value matroid"
                )
        n_oracle = ParallelLiftMatroid(values, value_matroid)
    family = tuple(frozenset(range(i * n, (i + 1) * n))
                   for i in range(len(rows)))
    return RainbowInstance(m_oracle, n_oracle, family, n)


def drisko_instance(n):
    """The tight family: n-1 identity rows plus n-1 cyclically shifted rows,
    2n-2 rows total.  Its lack of a full rainbow transversal is certified by
    brute force in the tests, never assumed."""
    if n < 2:
        raise PreconditionError("n must be at least 2")
    row_a = tuple(range(1, n + 1))
    row_b = tuple(list(range(2, n + 1)) + [1])
    rows = [row_a] * (n - 1) + [row_b] * (n - 1)
    return encode_array(rows)


def brute_force_rainbow(instance, target):
    """Depth-first search for a rainbow common independent set of the given
    size; first hit in scan order, or None when the space is exhausted."""
    if target < 0 or target > instance.n:
        raise PreconditionError("target must lie between 0 and n")
    if target == 0:
        return RainbowAssignment({})
    family = [sorted(a) for a in instance.family]
    m_count = len(family)
    m_oracle, n_oracle = instance.m_oracle, instance.n_oracle
    choices = {}
    used = set()

    def dfs(idx):
        if len(choices) == target:
            return True
        if idx == m_count or len(choices) + (m_count - idx) < target:
            return False
        for a in family[idx]:
            if a in used:
                continue
            candidate = frozenset(used | {a})
            if (m_oracle.is_independent(candidate)
                    and n_oracle.is_independent(candidate)):
                choices[idx] = a
                used.add(a)
                if dfs(idx + 1):
                    return True
                del choices[idx]
                used.discard(a)
        return dfs(idx + 1)

    if dfs(0):
        return RainbowAssignment(dict(choices))
    return None


def _augmenting_path(m1, m2, current, order):
    """Shortest augmenting path in the exchange digraph of the classical
    matroid-intersection algorithm, deterministic in the given order."""
    s = frozenset(current)
    outside = [y for y in order if y not in s]
    sources = [y for y in outside if m1.is_independent(s | {y})]
    sinks = {y for y in outside if m2.is_independent(s | {y})}
    if not sources:
        return None
    parent = {}
    queue = deque()
    for y in sources:
        parent[y] = None
        if y in sinks:
            return [y]
        queue.append(y)
    inside = [x for x in order if x in s]
    while queue:
        node = queue.popleft()
        if node in s:
            # node is an element slated for removal; arcs go to additions
            # whose M1-circuit contains it.
            for y in outside:
                if y in parent:
                    continue
                if not m1.is_independent(s | {y}) and \
                        node in m1.fundamental_circuit(s, y):
                    parent[y] = node
                    if y in sinks:
                        path = [y]
                        while parent[path[-1]] is not None:
                            path.append(parent[path[-1]])
                        return path
                    queue.append(y)
        else:
            # node is an addition; arcs go to removals repairing M2.
            if m2.is_independent(s | {node}):
                continue
            for x in sorted(m2.fundamental_circuit(s, node),
                            key=inside.index):
                if x not in parent:
                    parent[x] = node
                    queue.append(x)
    return None


def max_common_independent(m1, m2, order=None):
    """Maximum-cardinality common independent set by repeated shortest
    augmenting paths."""
    if m1.ground_size != m2.ground_size:
        raise PreconditionError("oracles disagree on ground set size")
    order = list(order) if order is not None else list(range(m1.ground_size))
    current = set()
    while True:
        path = _augmenting_path(m1, m2, current, order)
        if path is None:
            return frozenset(current)
        current.symmetric_difference_update(path)


def random_oracle(species, ground_size, min_rank, rng):
    """Draw a random oracle of the requested species whose ground-set rank is
    at least min_rank."""
    if min_rank > ground_size:
        raise GenerationError(
            f"no {species} oracle on {ground_size} elements can reach "
            f"rank {min_rank}")
    for _ in range(200):
        if species == "uniform":
            cap = rng.randint(min_rank, min(ground_size, min_rank + 2))
            return UniformMatroid(cap, ground_size)
        if species == "partition":
            blocks = min_rank + rng.randint(0, 2)
            block_of = [rng.randrange(blocks) for _ in range(ground_size)]
            capacity = [rng.randint(1, 2) for _ in range(blocks)]
            oracle = PartitionMatroid(block_of, capacity)
        elif species == "graphic":
            vertices = min_rank + 1 + rng.randint(0, 2)
            edges = []
            for _ in range(ground_size):
                u = rng.randrange(vertices)
                v = rng.randrange(vertices - 1)
                if v >= u:
                    v += 1
                edges.append((u, v))
            oracle = GraphicMatroid(vertices, edges)
        elif species == "linear":
            prime = rng.choice([2, 3, 5])
            dim = min_rank + rng.randint(0, 2)
            columns = []
            for _ in range(ground_size):
                col = [0] * dim
                while not any(col):
                    col = [rng.randrange(prime) for _ in range(dim)]
                columns.append(col)
            oracle = LinearMatroid(prime, columns)
        else:
            raise PreconditionError(f"unknown species {species!r}")
        if oracle.rank(range(ground_size)) >= min_rank:
            return oracle
    raise GenerationError(
        f"could not draw a {species} oracle of rank >= {min_rank} "
        f"on {ground_size} elements")


def random_instance(species_m, species_n, n, m, seed, ground_size=None):
    """Deterministically seeded instance with m common independent n-sets.

    Each family set is a maximum common independent set found under a random
    preference order, truncated to n elements."""
    if n < 1 or m < 1:
        raise PreconditionError("n and m must be positive")
    g = ground_size if ground_size is not None else 3 * n
    rng = random.Random(seed)
    last_error = None
    for _ in range(50):
        try:
            m_oracle = random_oracle(species_m, g, n, rng)
            n_oracle = random_oracle(species_n, g, n, rng)
        except GenerationError as exc:
            last_error = exc
            continue
        if len(max_common_independent(m_oracle, n_oracle)) < n:
            last_error = GenerationError(
                f"common rank below {n} for {species_m} x {species_n}")
            continue
        family = []
        for _ in range(m):
            order = list(range(g))
            rng.shuffle(order)
            full = max_common_independent(m_oracle, n_oracle, order=order)
            family.append(frozenset([x for x in order if x in full][:n]))
        instance = RainbowInstance(m_oracle, n_oracle, tuple(family), n)
        instance.validate()
        return instance
    raise GenerationError(
        f"retry budget exhausted generating {species_m} x {species_n}, "
        f"n={n}, m={m}, seed={seed}: {last_error}")


def check_lemma3(m, i, x_list, y_list, y_next, x_next):
    """Check the circuit-transfer conclusion for a hypothesis-satisfying
    swap (X out, Y in) that preserves the span of I.

    Hypothesis violations raise HypothesisError naming the failed premise.
    """
    i = frozenset(i)
    x_set = frozenset(x_list)
    y_set = frozenset(y_list)
    if len(x_set) != len(y_set):
        raise HypothesisError("X and Y must have the same size")
    if not m.is_independent(i):
        raise HypothesisError("I is dependent")
    if not x_set <= i:
        raise HypothesisError("X must be a subset of I")
    span_i = m.span(i)
    if not y_set <= (span_i - i):
        raise HypothesisError("Y must lie in span(I) minus I")
    swapped = (i - x_set) | y_set
    if m.span(swapped) != span_i:
        raise HypothesisError("the swap does not preserve the span of I")
    if y_next not in span_i - i:
        raise HypothesisError("y_next must lie in span(I) minus I")
    if y_next in y_set:
        raise HypothesisError("y_next must be distinct from Y")
    circuit = m.fundamental_circuit(i, y_next)
    if x_next not in circuit - x_set:
        raise HypothesisError(
            "x_next must lie in the circuit of y_next, outside X")
    for y in sorted(y_set):
        if x_next in m.fundamental_circuit(i, y):
            raise HypothesisError(
                "x_next may not lie in the circuit of any element of Y")
    return x_next in m.fundamental_circuit(swapped, y_next)


@dataclass
class VerificationReport:
    """Outcome of running the sweep solver against brute force on one
    instance."""

    digest: str
    n: int
    solver_status: str
    solver_size: int
    brute_size: int
    agree: bool
    fallback_used: bool
    oracle_calls: dict

    def to_json_line(self):
        return json.dumps(
            {"digest": self.digest, "n": self.n,
             "solver_status": self.solver_status,
             "solver_size": self.solver_size, "brute_size": self.brute_size,
             "agree": self.agree, "fallback_used": self.fallback_used,
             "oracle_calls": self.oracle_calls},
            sort_keys=True)


def verify_instance(instance):
    """Run the solver and brute force at the same target and compare."""
    instance.validate()
    calls_before = instance.oracle_calls()
    result = solve(instance)
    solver_size = result.assignment.size()
    if brute_force_rainbow(instance, instance.n) is not None:
        brute_size = instance.n
    else:
        brute_size = 0
        for target in range(instance.n - 1, 0, -1):
            if brute_force_rainbow(instance, target) is not None:
                brute_size = target
                break
    calls_after = instance.oracle_calls()
    return VerificationReport(
        digest=instance.digest(),
        n=instance.n,
        solver_status=result.status,
        solver_size=solver_size,
        brute_size=brute_size,
        agree=solver_size == brute_size,
        fallback_used=result.stats.fallback_used,
        oracle_calls={"M": calls_after["M"] - calls_before["M"],
                      "N": calls_after["N"] - calls_before["N"]},
    )
