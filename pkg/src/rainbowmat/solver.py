"""Rainbow common independent sets via colorful alternating trails.

Maintains a rainbow set R independent in both matroids, grows the set of
R-elements reachable by alternating trails one sweep round at a time, and
augments whenever an augmenting trail appears.  Deterministic lowest-id
tie-breaking everywhere, so identical inputs give identical runs.
"""

from __future__ import annotations

import hashlib
import json
import logging
from collections import deque
from dataclasses import dataclass, field

from .matroids import PreconditionError

logger = logging.getLogger(__name__)


class TrailStructureError(ValueError):
    """A trail violates the structural shape of an alternating trail."""


class TheoremViolationError(RuntimeError):
    """No augmentation found on an instance with enough sets: a solver bug."""


@dataclass(frozen=True)
class RainbowInstance:
    """Two matroid oracles on one ground set plus a family of common
    independent n-sets."""

    m_oracle: object
    n_oracle: object
    family: tuple
    n: int

    def __post_init__(self):
        object.__setattr__(self, "family",
                           tuple(frozenset(a) for a in self.family))

    def validate(self):
        if self.m_oracle.ground_size != self.n_oracle.ground_size:
            raise PreconditionError("oracles disagree on ground set size")
        if self.n < 0:
            raise PreconditionError("target size must be nonnegative")
        for idx, a in enumerate(self.family):
            if len(a) != self.n:
                raise PreconditionError(
                    f"family[{idx}] has size {len(a)}, expected {self.n}"
                )
            if not self.m_oracle.is_independent(a):
                raise PreconditionError(f"family[{idx}] is dependent in M")
            if not self.n_oracle.is_independent(a):
                raise PreconditionError(f"family[{idx}] is dependent in N")
        return self

    def oracle_calls(self):
        return {"M": self.m_oracle.independence_calls,
                "N": self.n_oracle.independence_calls}

    def digest(self):
        payload = json.dumps(
            {"M": self.m_oracle.describe(), "N": self.n_oracle.describe(),
             "n": self.n, "family": [sorted(a) for a in self.family]},
            sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class RainbowAssignment:
    """Injective partial map from family index to a chosen element; its
    range is the rainbow set R."""

    choices: dict = field(default_factory=dict)

    def range_set(self):
        return frozenset(self.choices.values())

    def size(self):
        return len(self.choices)

    def validate(self, instance):
        vals = list(self.choices.values())
        if len(set(vals)) != len(vals):
            raise PreconditionError("assignment reuses an element")
        for idx, x in self.choices.items():
            if not 0 <= idx < len(instance.family):
                raise PreconditionError(f"assignment uses unknown set index {idx}")
            if x not in instance.family[idx]:
                raise PreconditionError(
                    f"assignment maps set {idx} to {x}, which it does not contain"
                )
        r = frozenset(vals)
        if not instance.m_oracle.is_independent(r):
            raise PreconditionError("assignment range is dependent in M")
        if not instance.n_oracle.is_independent(r):
            raise PreconditionError("assignment range is dependent in N")
        return self


@dataclass(frozen=True)
class TrailStep:
    source: int
    added: int
    removed: object  # element id, or None on the final augmenting step


@dataclass(frozen=True)
class Trail:
    steps: tuple
    augmenting: bool


@dataclass
class SweepState:
    """Per-sweep bookkeeping: reachable R-elements, one witness trail per
    reachable element, and the family indices not yet processed."""

    reachable: set = field(default_factory=set)
    witness: dict = field(default_factory=dict)
    fresh: list = field(default_factory=list)


@dataclass(frozen=True)
class NewReachable:
    element: int
    trail: Trail


@dataclass(frozen=True)
class Augment:
    trail: Trail


@dataclass(frozen=True)
class Stalled:
    reason: str


@dataclass
class SolveStats:
    fast_path_augments: int = 0
    cat_search_augments: int = 0
    brute_force_used: bool = False
    fallback_events: list = field(default_factory=list)
    oracle_calls_m: int = 0
    oracle_calls_n: int = 0

    @property
    def fallback_used(self):
        return self.cat_search_augments > 0 or self.brute_force_used


@dataclass
class SolveResult:
    status: str  # "solved" or "infeasible"
    assignment: RainbowAssignment
    stats: SolveStats
    n: int

    def size(self):
        return self.assignment.size()


def greedy_seed(instance):
    """Inclusion-maximal starting assignment: scan sets in index order,
    elements in id order, keep the first pick that preserves both
    independences."""
    choices = {}
    used = set()
    for idx, a in enumerate(instance.family):
        if len(choices) >= instance.n:
            break
        for x in sorted(a):
            if x in used:
                continue
            candidate = frozenset(used | {x})
            if (instance.m_oracle.is_independent(candidate)
                    and instance.n_oracle.is_independent(candidate)):
                choices[idx] = x
                used.add(x)
                break
    return RainbowAssignment(choices)


def validate_trail(instance, assignment, trail):
    """Check a trail against the current assignment.

    Structural violations (reused source, element already in R, malformed
    final step) raise TrailStructureError; failures of the alternating-trail
    properties return False.
    """
    r_set = assignment.range_set()
    used_sources = set(assignment.choices)
    steps = trail.steps
    if trail.augmenting and not steps:
        raise TrailStructureError("an augmenting trail needs at least one step")
    seen_src, seen_add, seen_rem = set(), set(), set()
    for pos, step in enumerate(steps):
        last = pos == len(steps) - 1
        if not 0 <= step.source < len(instance.family):
            raise TrailStructureError(f"step {pos}: unknown set index {step.source}")
        if step.source in used_sources or step.source in seen_src:
            raise TrailStructureError(f"step {pos}: source index {step.source} reused")
        if step.added in r_set:
            raise TrailStructureError(f"step {pos}: added element {step.added} is in R")
        if step.added in seen_add:
            raise TrailStructureError(f"step {pos}: added element {step.added} reused")
        if step.removed is None:
            if not (last and trail.augmenting):
                raise TrailStructureError(
                    f"step {pos}: only the final step of an augmenting trail "
                    "may omit its removal")
        else:
            if last and trail.augmenting:
                raise TrailStructureError(
                    "the final step of an augmenting trail must omit its removal")
            if step.removed not in r_set:
                raise TrailStructureError(
                    f"step {pos}: removed element {step.removed} is not in R")
            if step.removed in seen_rem:
                raise TrailStructureError(
                    f"step {pos}: removed element {step.removed} reused")
        seen_src.add(step.source)
        seen_add.add(step.added)
        if step.removed is not None:
            seen_rem.add(step.removed)

    if not steps:
        return True

    m_oracle, n_oracle = instance.m_oracle, instance.n_oracle
    span_n_r = n_oracle.span(r_set)
    current = set(r_set)
    for step in steps:
        if step.added not in instance.family[step.source]:
            return False
        current.add(step.added)
        if not m_oracle.is_independent(current):
            return False
        if step.removed is None:
            return n_oracle.is_independent(current)
        current.discard(step.removed)
        if not n_oracle.is_independent(current):
            return False
        # |current| = |R| and both independent in N, so span equality
        # reduces to current being inside span_N(R).
        if step.added not in span_n_r:
            return False
    return True


def apply_trail(instance, assignment, trail):
    """Apply an augmenting trail, yielding an assignment one larger."""
    if not trail.augmenting:
        raise PreconditionError("only augmenting trails can be applied")
    if not validate_trail(instance, assignment, trail):
        raise PreconditionError("trail fails validation against the assignment")
    value_to_index = {x: idx for idx, x in assignment.choices.items()}
    choices = dict(assignment.choices)
    for step in trail.steps:
        if step.removed is not None:
            del choices[value_to_index[step.removed]]
    for step in trail.steps:
        choices[step.source] = step.added
    new = RainbowAssignment(choices)
    new.validate(instance)
    assert new.size() == assignment.size() + 1
    return new


def _rewind_prefix(witness, circuit):
    """Truncate a witness trail at the first step whose removal lies in the
    given circuit; return (prefix steps, that removed element)."""
    for pos, step in enumerate(witness.steps):
        if step.removed in circuit:
            return witness.steps[:pos + 1], step.removed
    return None, None


def _applied_keep_last(r_set, prefix):
    """R with the prefix applied, except that the last removal is kept."""
    out = set(r_set)
    for step in prefix:
        out.add(step.added)
    for step in prefix[:-1]:
        out.discard(step.removed)
    return frozenset(out)


def _candidate_branch(instance, assignment, state, k, a, r_set,
                      span_m_r, span_n_r):
    """Build the sweep result for one candidate element, or None if the
    witness bookkeeping cannot support it."""
    m_oracle, n_oracle = instance.m_oracle, instance.n_oracle

    if a not in span_m_r:
        if a not in span_n_r:
            return Augment(Trail((TrailStep(k, a, None),), True))
        pool = sorted(n_oracle.fundamental_circuit(r_set, a) - state.reachable)
        if not pool:
            return None
        return NewReachable(pool[0], Trail((TrailStep(k, a, pool[0]),), False))

    # a is spanned by R in M: rewind through an existing witness.
    c_m = m_oracle.fundamental_circuit(r_set, a)
    hits = sorted(c_m & state.reachable)
    if not hits:
        return None
    prefix, _r_prime = _rewind_prefix(state.witness[hits[0]], c_m)
    if prefix is None:
        return None
    applied = _applied_keep_last(r_set, prefix)
    if a in applied or not m_oracle.is_independent(applied):
        return None
    if m_oracle.fundamental_circuit(applied, a) != c_m:
        # Guaranteed equal for a valid witness; a mismatch means the
        # bookkeeping no longer matches R, so fall back.
        logger.warning("fundamental circuit drifted during rewind; stalling")
        return None

    if a not in span_n_r:
        return Augment(Trail(prefix + (TrailStep(k, a, None),), True))

    pool = sorted(n_oracle.fundamental_circuit(r_set, a) - state.reachable)
    if not pool:
        return None
    r_new = pool[0]
    for pos, step in enumerate(prefix):
        if step.added not in span_n_r:
            return None
        if r_new in n_oracle.fundamental_circuit(r_set, step.added):
            # Truncate at the first step whose addition could have removed
            # r_new instead; swap that removal for r_new.
            steps = prefix[:pos] + (TrailStep(step.source, step.added, r_new),)
            return NewReachable(r_new, Trail(steps, False))
    return NewReachable(r_new, Trail(prefix + (TrailStep(k, a, r_new),), False))


def sweep_round(instance, assignment, state):
    """Process the next fresh set: either report a newly reachable R-element
    with its witness trail, or produce an augmenting trail."""
    if assignment.size() >= instance.n:
        raise PreconditionError("assignment already reached the target size")
    if not state.fresh:
        raise PreconditionError("no fresh set left to process")
    k = state.fresh.pop(0)
    r_set = assignment.range_set()
    reachable = frozenset(state.reachable)
    m_oracle, n_oracle = instance.m_oracle, instance.n_oracle
    span_m_rest = m_oracle.span(r_set - reachable)
    span_n_reach = n_oracle.span(reachable)
    span_m_r = m_oracle.span(r_set)
    span_n_r = n_oracle.span(r_set)

    for a in sorted(instance.family[k] - r_set):
        if a in span_m_rest or a in span_n_reach:
            continue
        result = _candidate_branch(instance, assignment, state, k, a,
                                   r_set, span_m_r, span_n_r)
        if result is None:
            continue
        try:
            ok = validate_trail(instance, assignment, result.trail)
        except TrailStructureError:
            ok = False
        if not ok:
            continue
        if isinstance(result, NewReachable) and result.element in state.reachable:
            continue
        return result
    return Stalled(f"no usable candidate in set {k}")


def close_round(instance, assignment, state, final_index):
    """Once every R-element is reachable, one more set yields an augmenting
    trail: pick an addition keeping N-independence and splice it onto the
    witness of a clashing M-circuit element."""
    r_set = assignment.range_set()
    if frozenset(state.reachable) != r_set:
        raise PreconditionError("close_round requires every R-element reachable")
    if assignment.size() >= instance.n:
        raise PreconditionError("assignment already reached the target size")
    if final_index in assignment.choices:
        raise PreconditionError("the closing set is already used as a source")
    m_oracle, n_oracle = instance.m_oracle, instance.n_oracle

    for a_n in sorted(instance.family[final_index] - r_set):
        if not n_oracle.is_independent(r_set | {a_n}):
            continue
        if m_oracle.is_independent(r_set | {a_n}):
            trail = Trail((TrailStep(final_index, a_n, None),), True)
        else:
            c_m = m_oracle.fundamental_circuit(r_set, a_n)
            hits = sorted(c_m)
            if not hits or hits[0] not in state.witness:
                continue
            prefix, _r = _rewind_prefix(state.witness[hits[0]], c_m)
            if prefix is None:
                continue
            trail = Trail(prefix + (TrailStep(final_index, a_n, None),), True)
        try:
            if validate_trail(instance, assignment, trail):
                return Augment(trail)
        except TrailStructureError:
            continue
    return Stalled(f"no closing element in set {final_index}")


def exhaustive_cat_search(instance, assignment):
    """Breadth-first search over all valid trails up to length |R| + 1 for an
    augmenting one.  Independent of the sweep machinery; used as a fallback."""
    r_set = assignment.range_set()
    m_oracle, n_oracle = instance.m_oracle, instance.n_oracle
    span_n_r = n_oracle.span(r_set)
    free = sorted(set(range(len(instance.family))) - set(assignment.choices))
    max_len = len(r_set) + 1
    queue = deque()
    queue.append(((), frozenset(r_set), frozenset(), frozenset()))
    while queue:
        steps, current, used_src, used_add = queue.popleft()
        if len(steps) >= max_len:
            continue
        for k in free:
            if k in used_src:
                continue
            for a in sorted(instance.family[k] - r_set - used_add):
                if a in current:
                    continue
                plus = current | {a}
                if not m_oracle.is_independent(plus):
                    continue
                if n_oracle.is_independent(plus):
                    return Trail(steps + (TrailStep(k, a, None),), True)
                if a not in span_n_r:
                    continue  # no removal can restore span_N equality
                for r in sorted(current & r_set):
                    nxt = plus - {r}
                    if n_oracle.is_independent(nxt):
                        queue.append((steps + (TrailStep(k, a, r),), nxt,
                                      used_src | {k}, used_add | {a}))
    return None


def _sweep_for_augmenting_trail(instance, assignment):
    """Run sweep rounds until an augmenting trail appears.

    Returns (trail, None) on success, (None, reason) on a stall.
    """
    unused = sorted(set(range(len(instance.family))) - set(assignment.choices))
    state = SweepState(fresh=list(unused))
    r_set = assignment.range_set()
    while True:
        if frozenset(state.reachable) == r_set:
            if not state.fresh:
                return None, "no fresh set left for the closing round"
            result = close_round(instance, assignment, state, state.fresh[0])
        elif not state.fresh:
            return None, "fresh sets exhausted before covering R"
        else:
            result = sweep_round(instance, assignment, state)
        if isinstance(result, Augment):
            return result.trail, None
        if isinstance(result, NewReachable):
            state.reachable.add(result.element)
            state.witness[result.element] = result.trail
            continue
        return None, result.reason


def solve(instance):
    """Grow a rainbow common independent set to the target size.

    With at least 2n-1 family sets the result always has size n; smaller
    families may come back infeasible, certified by brute force.
    """
    from .lab import brute_force_rainbow  # local import to avoid a cycle

    instance.validate()
    stats = SolveStats()
    calls_before = instance.oracle_calls()
    assignment = greedy_seed(instance)
    guaranteed = len(instance.family) >= 2 * instance.n - 1

    while assignment.size() < instance.n:
        trail, stall_reason = _sweep_for_augmenting_trail(instance, assignment)
        if trail is not None:
            assignment = apply_trail(instance, assignment, trail)
            stats.fast_path_augments += 1
            continue

        stats.fallback_events.append(
            {"digest": instance.digest(), "size": assignment.size(),
             "reason": stall_reason})
        logger.warning("fast path stalled (%s); falling back", stall_reason)
        trail = exhaustive_cat_search(instance, assignment)
        if trail is not None:
            assignment = apply_trail(instance, assignment, trail)
            stats.cat_search_augments += 1
            continue

        stats.brute_force_used = True
        full = brute_force_rainbow(instance, instance.n)
        if full is not None:
            assignment = full
            continue
        if guaranteed:
            raise TheoremViolationError(
                "no augmentation found although the family has 2n-1 sets; "
                f"instance digest {instance.digest()}")
        for target in range(instance.n - 1, assignment.size(), -1):
            best = brute_force_rainbow(instance, target)
            if best is not None:
                assignment = best
                break
        calls_after = instance.oracle_calls()
        stats.oracle_calls_m = calls_after["M"] - calls_before["M"]
        stats.oracle_calls_n = calls_after["N"] - calls_before["N"]
        return SolveResult("infeasible", assignment, stats, instance.n)

    calls_after = instance.oracle_calls()
    stats.oracle_calls_m = calls_after["M"] - calls_before["M"]
    stats.oracle_calls_n = calls_after["N"] - calls_before["N"]
    assignment.validate(instance)
    return SolveResult("solved", assignment, stats, instance.n)
