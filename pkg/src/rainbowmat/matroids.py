"""Independence oracles for four matroid species and the derived machinery.

Every derived operation (rank, span, circuits, augmentation) is computed from
the independence predicate alone, so a new oracle species plugs in without
touching the rest of the library.  Oracles are immutable after construction
and all operations are pure functions of their inputs; instances may be
shared freely across workers.
"""

from __future__ import annotations


class MatroidSpecError(ValueError):
    """Raised when a matroid description is malformed."""


class PreconditionError(ValueError):
    """Raised when an operation's precondition is violated."""


#: When True, ``fundamental_circuit`` re-checks the circuit and span
#: guarantees on every call.  Expensive; meant for verification runs.
VERIFY_FACTS = False


def is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def gfp_rank(vectors, p):
    """Rank of a list of vectors over GF(p), by exact Gaussian elimination."""
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    width = len(rows[0])
    r = 0
    for c in range(width):
        piv = next((k for k in range(r, len(rows)) if rows[k][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(val * inv) % p for val in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c] % p:
                f = rows[k][c]
                rows[k] = [(a - f * b) % p for a, b in zip(rows[k], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


class MatroidOracle:
    """Base class: an independence predicate plus derived operations."""

    species = "abstract"

    def __init__(self, ground_size):
        if ground_size < 0:
            raise MatroidSpecError("ground_size must be nonnegative")
        self.ground_size = ground_size
        self.independence_calls = 0

    # --- species interface -------------------------------------------------

    def _independent(self, s):
        raise NotImplementedError

    def describe(self):
        """A JSON-friendly description of the oracle, for digests and docs."""
        raise NotImplementedError

    # --- independence ------------------------------------------------------

    def _check_subset(self, s):
        for x in s:
            if not 0 <= x < self.ground_size:
                raise PreconditionError(
                    f"element {x} outside ground set of size {self.ground_size}"
                )

    def is_independent(self, s):
        s = frozenset(s)
        self._check_subset(s)
        self.independence_calls += 1
        return self._independent(s)

    # --- derived operations ------------------------------------------------

    def max_independent_subset(self, s):
        """Greedy maximum independent subset of s, lowest ids first."""
        base = set()
        for x in sorted(s):
            base.add(x)
            if not self.is_independent(base):
                base.discard(x)
        return frozenset(base)

    def rank(self, s):
        return len(self.max_independent_subset(s))

    def span(self, s):
        """All elements spanned by s: s itself plus every x whose addition to
        a maximum independent subset of s creates a dependence."""
        s = frozenset(s)
        self._check_subset(s)
        base = self.max_independent_subset(s)
        out = set(s)
        for x in range(self.ground_size):
            if x in out:
                continue
            if not self.is_independent(base | {x}):
                out.add(x)
        return frozenset(out)

    def fundamental_circuit(self, i, x):
        """The unique minimal subset of independent i spanning x, for x with
        i + x dependent.  Returned without x itself."""
        i = frozenset(i)
        self._check_subset(i)
        if x in i:
            raise PreconditionError("x must lie outside I")
        if not self.is_independent(i):
            raise PreconditionError("I is dependent")
        plus = i | {x}
        if self.is_independent(plus):
            raise PreconditionError("I + x is independent; no circuit to extract")
        circuit = frozenset(a for a in i if self.is_independent(plus - {a}))
        if VERIFY_FACTS:
            assert self.is_circuit(circuit | {x})
            span_i = self.span(i)
            for a in circuit:
                assert self.is_independent(plus - {a})
                assert self.span(plus - {a}) == span_i
        return circuit

    def augment_from(self, i, j):
        """Elements of j \\ i that extend i to an independent set of size |j|,
        chosen by repeated single-element augmentation, lowest id first."""
        i = frozenset(i)
        j = frozenset(j)
        if not self.is_independent(i):
            raise PreconditionError("I is dependent")
        if not self.is_independent(j):
            raise PreconditionError("J is dependent")
        if len(i) >= len(j):
            raise PreconditionError("|I| must be smaller than |J|")
        current = set(i)
        added = set()
        for _ in range(len(j) - len(i)):
            for x in sorted(j - current):
                if self.is_independent(current | {x}):
                    current.add(x)
                    added.add(x)
                    break
            else:
                raise AssertionError("augmentation property violated")
        return frozenset(added)

    def is_circuit(self, s):
        s = frozenset(s)
        self._check_subset(s)
        if self.is_independent(s):
            return False
        return all(self.is_independent(s - {y}) for y in s)

    def _lies_on_circuit(self, s, f):
        # f belongs to a circuit inside s  iff  f is spanned by s - f.
        if f not in s:
            return False
        rest = self.max_independent_subset(s - {f})
        return not self.is_independent(rest | {f})

    def eliminate_circuit(self, c1, c2, e, f):
        """A circuit containing f inside (c1 | c2) - e, for circuits c1, c2
        sharing e, with f in c1 only."""
        c1 = frozenset(c1)
        c2 = frozenset(c2)
        if not self.is_circuit(c1):
            raise PreconditionError("C1 is not a circuit")
        if not self.is_circuit(c2):
            raise PreconditionError("C2 is not a circuit")
        if e not in c1 or e not in c2:
            raise PreconditionError("e must lie in both circuits")
        if f not in c1 or f in c2:
            raise PreconditionError("f must lie in C1 but not in C2")
        pool = set((c1 | c2) - {e})
        # Shrink around f until every remaining element is needed for a
        # circuit through f; at the fixpoint the pool itself is that circuit.
        changed = True
        while changed:
            changed = False
            for g in sorted(pool - {f}):
                if self._lies_on_circuit(pool - {g}, f):
                    pool.discard(g)
                    changed = True
        return frozenset(pool)


class UniformMatroid(MatroidOracle):
    """Independent iff at most rank_cap elements."""

    species = "uniform"

    def __init__(self, rank_cap, ground_size):
        super().__init__(ground_size)
        if rank_cap < 0:
            raise MatroidSpecError("rank must be nonnegative")
        self.rank_cap = rank_cap

    def _independent(self, s):
        return len(s) <= self.rank_cap

    def describe(self):
        return {"type": "uniform", "rank": self.rank_cap,
                "ground_size": self.ground_size}


class PartitionMatroid(MatroidOracle):
    """Independent iff each block's count stays within its capacity."""

    species = "partition"

    def __init__(self, block_of, capacity):
        block_of = tuple(block_of)
        capacity = tuple(capacity)
        super().__init__(len(block_of))
        for b, c in enumerate(capacity):
            if c < 0:
                raise MatroidSpecError(f"capacity of block {b} is negative")
        for idx, b in enumerate(block_of):
            if not 0 <= b < len(capacity):
                raise MatroidSpecError(
                    f"block label {b} of element {idx} out of range"
                )
        self.block_of = block_of
        self.capacity = capacity

    def _independent(self, s):
        counts = {}
        for x in s:
            b = self.block_of[x]
            counts[b] = counts.get(b, 0) + 1
            if counts[b] > self.capacity[b]:
                return False
        return True

    def describe(self):
        return {"type": "partition", "block_of": list(self.block_of),
                "capacity": list(self.capacity)}


class GraphicMatroid(MatroidOracle):
    """Elements are edges of a multigraph; independent iff acyclic."""

    species = "graphic"

    def __init__(self, num_vertices, edges):
        edges = tuple((int(u), int(v)) for u, v in edges)
        super().__init__(len(edges))
        if num_vertices < 0:
            raise MatroidSpecError("vertex count must be nonnegative")
        for idx, (u, v) in enumerate(edges):
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise MatroidSpecError(
                    f"edge {idx} has an endpoint outside 0..{num_vertices - 1}"
                )
        self.num_vertices = num_vertices
        self.edges = edges

    def _independent(self, s):
        parent = {}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for x in s:
            u, v = self.edges[x]
            if u == v:
                return False  # loop edge
            parent.setdefault(u, u)
            parent.setdefault(v, v)
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    def describe(self):
        return {"type": "graphic", "vertices": self.num_vertices,
                "edges": [list(e) for e in self.edges]}


class LinearMatroid(MatroidOracle):
    """Elements are columns over GF(p); independent iff linearly independent.

    All arithmetic is exact over the prime field; no floating point.
    """

    species = "linear"

    def __init__(self, prime, columns):
        columns = tuple(tuple(int(c) for c in col) for col in columns)
        super().__init__(len(columns))
        if not is_prime(prime):
            raise MatroidSpecError(f"{prime} is not prime")
        dims = {len(c) for c in columns}
        if len(dims) > 1:
            raise MatroidSpecError("columns have mixed dimensions")
        self.dimension = dims.pop() if dims else 0
        for idx, col in enumerate(columns):
            for entry in col:
                if not 0 <= entry < prime:
                    raise MatroidSpecError(
                        f"column {idx} entry {entry} not reduced modulo {prime}"
                    )
        self.prime = prime
        self.columns = columns

    def _independent(self, s):
        cols = [self.columns[x] for x in s]
        return gfp_rank(cols, self.prime) == len(cols)

    def describe(self):
        return {"type": "linear", "prime": self.prime,
                "columns": [list(c) for c in self.columns]}


class ParallelLiftMatroid(MatroidOracle):
    """Lift of a matroid to a larger ground set through a value map.

    A set is independent iff its values are pairwise distinct and the value
    set is independent in the base matroid; elements sharing a value are
    parallel copies of each other.
    """

    species = "lift"

    def __init__(self, value_of, base):
        value_of = tuple(value_of)
        super().__init__(len(value_of))
        for idx, v in enumerate(value_of):
            if not 0 <= v < base.ground_size:
                raise MatroidSpecError(
                    f"value of element {idx} outside the base ground set"
                )
        self.value_of = value_of
        self.base = base

    def _independent(self, s):
        values = [self.value_of[x] for x in s]
        if len(set(values)) != len(values):
            return False
        return self.base.is_independent(values)

    def describe(self):
        return {"type": "lift", "value_of": list(self.value_of),
                "base": self.base.describe()}


def build_matroid(spec, ground_size):
    """Build an oracle from a tagged description dict.

    Uses dense integer element ids; name-keyed file documents are converted
    to this form by the file layer.
    """
    if not isinstance(spec, dict) or "type" not in spec:
        raise MatroidSpecError("matroid description missing 'type'")
    t = spec["type"]
    if t == "uniform":
        if "rank" not in spec:
            raise MatroidSpecError("uniform matroid: missing 'rank'")
        return UniformMatroid(spec["rank"], ground_size)
    if t == "partition":
        for key in ("block_of", "capacity"):
            if key not in spec:
                raise MatroidSpecError(f"partition matroid: missing '{key}'")
        block_of = list(spec["block_of"])
        if len(block_of) != ground_size:
            raise MatroidSpecError(
                f"partition matroid: 'block_of' has {len(block_of)} entries, "
                f"expected {ground_size}"
            )
        return PartitionMatroid(block_of, list(spec["capacity"]))
    if t == "graphic":
        for key in ("vertices", "edges"):
            if key not in spec:
                raise MatroidSpecError(f"graphic matroid: missing '{key}'")
        edges = list(spec["edges"])
        if len(edges) != ground_size:
            raise MatroidSpecError(
                f"graphic matroid: 'edges' has {len(edges)} entries, "
                f"expected {ground_size}"
            )
        return GraphicMatroid(spec["vertices"], edges)
    if t == "linear":
        for key in ("prime", "columns"):
            if key not in spec:
                raise MatroidSpecError(f"linear matroid: missing '{key}'")
        columns = list(spec["columns"])
        if len(columns) != ground_size:
            raise MatroidSpecError(
                f"linear matroid: 'columns' has {len(columns)} entries, "
                f"expected {ground_size}"
            )
        return LinearMatroid(spec["prime"], columns)
    raise MatroidSpecError(f"unknown matroid type {t!r}")
