"""Batch-and-vote learners for exponential and linear universal rates, and
the distributions used for the matching lower bounds.

Both learners split the sample, train many copies of an online procedure on
short disjoint batches, pick the batch length by held-out validation and
return a plurality vote of the copies.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from .core import ConceptClass, FiniteDistribution, LabeledSample, require_realizable
from .dimensions import MAX_TREE_DEPTH, LTree, NLNode, is_shattered_tree, nl_branch, nl_fiber, tree_branch
from .errors import ConstructionError, InputError, LimitError
from .games import nl_game_value
from .one_inclusion import OneInclusionPredictor, graph_from_vectors, min_max_orientation
from .online import TournamentState
from .patterns import AvoiderState, build_pattern_restricted_class

VOTE_THRESHOLD = 0.25


@dataclass(frozen=True)
class BatchPlan:
    t_hat: int
    batch_count: int
    batches: tuple[tuple[int, int], ...]  # half-open index ranges
    fallback: bool  # no t passed validation; t_hat is the largest candidate
    error_estimates: tuple[float, ...] = ()


@dataclass
class MajorityPredictor:
    """Plurality vote over member prediction tables; ties go to the smallest label."""

    members: list[list[int]]
    plan: Optional[BatchPlan] = None
    table: list[int] = field(init=False)

    def __post_init__(self):
        if not self.members:
            raise InputError("a majority vote needs at least one member")
        n = len(self.members[0])
        self.table = [plurality(m[x] for m in self.members) for x in range(n)]

    def __call__(self, x: int) -> int:
        return self.table[x]


def plurality(votes) -> int:
    c = Counter(votes)
    return min(c, key=lambda y: (-c[y], y))


def _as_pairs(dataset) -> tuple[tuple[int, int], ...]:
    return dataset.pairs if isinstance(dataset, LabeledSample) else tuple((int(x), int(y)) for x, y in dataset)


# --- exponential rates ---

def _tournament_table(cls: ConceptClass, batch: Sequence[tuple[int, int]]) -> list[int]:
    state = TournamentState(cls)
    for x, y in batch:
        state.update(x, y)
    return state.predictor_table()


def _exp_plan(cls: ConceptClass, data) -> tuple[BatchPlan, dict[int, list[list[int]]]]:
    n = len(data)
    if n < 4:
        raise InputError(f"need at least 4 samples, got {n}")
    require_realizable(cls, LabeledSample(data))
    half = n // 2
    held_out = sorted(set(data[half:]))
    tables: dict[int, list[list[int]]] = {}
    estimates = []
    chosen = None
    for t in range(1, half + 1):
        count = n // (2 * t)
        tabs = [_tournament_table(cls, data[(i - 1) * t:i * t]) for i in range(1, count + 1)]
        tables[t] = tabs
        wrong = sum(1 for tab in tabs if any(tab[x] != y for x, y in held_out))
        e = wrong / count
        estimates.append(e)
        if e < VOTE_THRESHOLD:
            chosen = t
            break
    fallback = chosen is None
    t_hat = half if fallback else chosen
    count = n // (2 * t_hat)
    batches = tuple(((i - 1) * t_hat, i * t_hat) for i in range(1, count + 1))
    return BatchPlan(t_hat, count, batches, fallback, tuple(estimates)), tables


def estimate_t_hat_exp(dataset, cls: ConceptClass) -> BatchPlan:
    """First batch length whose held-out failure fraction is below 1/4."""
    return _exp_plan(cls, _as_pairs(dataset))[0]


def learn_exponential(dataset, cls: ConceptClass) -> MajorityPredictor:
    plan, tables = _exp_plan(cls, _as_pairs(dataset))
    return MajorityPredictor(tables[plan.t_hat][:plan.batch_count], plan)


# --- linear rates ---

def _train_avoider(cls: ConceptClass, batch, horizon: int) -> AvoiderState:
    state = AvoiderState(cls, horizon)
    for x, y in batch:
        state.feed(x, y)
    return state


class _PatternPredictor:
    """One-inclusion prediction over the pattern-restricted labelings of the reference points."""

    def __init__(self, cls: ConceptClass, avoider: AvoiderState, reference: Sequence[tuple[int, int]]):
        self.cls = cls
        self.g = avoider.g()
        self.t = avoider.length
        self.known = dict(reference)
        self.cache = cls.index.table("pattern_oig")

    def predict(self, x: int) -> int:
        if x in self.known:
            return self.known[x]
        points = tuple(sorted(set(self.known) | {x}))
        key = (self.g.mask, self.t, points)
        hit = self.cache.get(key)
        if hit is None:
            F = build_pattern_restricted_class(points, self.g, self.t, self.cls.k)
            g = graph_from_vectors(points, F.hypotheses)
            g.heads = min_max_orientation(g)[1]
            hit = self.cache[key] = g
        graph = hit
        tpos = points.index(x)
        fixed = [(i, self.known[p]) for i, p in enumerate(points) if i != tpos]
        consistent = [i for i, v in enumerate(graph.vertices) if all(v[c] == y for c, y in fixed)]
        if not consistent:
            return 0  # the avoider failed on the reference data; no labeling survives
        if len(consistent) == 1:
            return graph.vertices[consistent[0]][tpos]
        e = graph.edge_at(consistent[0], tpos)
        return graph.vertices[graph.heads[e]][tpos]


def _linear_plan(cls: ConceptClass, data, horizon: int):
    n = len(data)
    if n < 4:
        raise InputError(f"need at least 4 samples, got {n}")
    require_realizable(cls, LabeledSample(data))
    v = nl_game_value(cls, horizon).value
    if v >= horizon:
        raise LimitError(f"NL game value reaches the horizon {horizon}")
    quarter, half = n // 4, n // 2
    avoiders: dict[int, list[AvoiderState]] = {}
    estimates = []
    chosen = None
    for t in range(1, quarter + 1):
        count = n // (4 * t)
        avs = [_train_avoider(cls, data[(i - 1) * t:i * t], horizon) for i in range(1, count + 1)]
        avoiders[t] = avs
        wrong = 0
        for av in avs:
            L = av.length
            windows = {tuple(data[s:s + L]) for s in range(quarter, half - L + 1)}
            if any(av.fails_on(w) for w in windows):
                wrong += 1
        e = wrong / count
        estimates.append(e)
        if e < VOTE_THRESHOLD:
            chosen = t
            break
    fallback = chosen is None
    t_hat = quarter if fallback else chosen
    count = n // (4 * t_hat)
    batches = tuple(((i - 1) * t_hat, i * t_hat) for i in range(1, count + 1))
    return BatchPlan(t_hat, count, batches, fallback, tuple(estimates)), avoiders


def estimate_t_hat_linear(dataset, cls: ConceptClass, horizon: int = MAX_TREE_DEPTH) -> BatchPlan:
    return _linear_plan(cls, _as_pairs(dataset), horizon)[0]


def learn_linear(dataset, cls: ConceptClass, horizon: int = MAX_TREE_DEPTH) -> MajorityPredictor:
    """Avoiders from the first quarter, one-inclusion over the second half, plurality vote."""
    data = _as_pairs(dataset)
    plan, avoiders = _linear_plan(cls, data, horizon)
    reference = data[len(data) // 2:]
    members = []
    for av in avoiders[plan.t_hat][:plan.batch_count]:
        pred = _PatternPredictor(cls, av, reference)
        members.append([pred.predict(x) for x in range(cls.domain_size)])
    return MajorityPredictor(members, plan)


# --- baselines ---

def erm_table(cls: ConceptClass, dataset) -> list[int]:
    """First hypothesis (in canonical order) consistent with the data."""
    mask = require_realizable(cls, LabeledSample(_as_pairs(dataset)))
    i = (mask & -mask).bit_length() - 1
    return list(cls.hypotheses[i])


def soa_table(cls: ConceptClass, dataset) -> list[int]:
    from .online import SOAState

    state = SOAState(cls)
    for x, y in _as_pairs(dataset):
        state.update(x, y)
    return [state.predict(x) for x in range(cls.domain_size)]


def oig_table(cls: ConceptClass, dataset) -> list[int]:
    pred = OneInclusionPredictor(cls)
    data = _as_pairs(dataset)
    return [pred.predict(data, x) for x in range(cls.domain_size)]


# --- lower-bound distributions ---

def lower_bound_exp_pair(cls: ConceptClass) -> tuple[FiniteDistribution, FiniteDistribution]:
    """Two distributions sharing the atom (x, y) and splitting on a second point.

    Needs h0, h1 that agree at x and disagree at x' (x != x').
    """
    for h0, h1 in combinations(cls.hypotheses, 2):
        for x in range(cls.domain_size):
            if h0[x] != h1[x] or h0[x] < 0:
                continue
            for x2 in range(cls.domain_size):
                if x2 != x and h0[x2] != h1[x2] and h0[x2] >= 0 and h1[x2] >= 0:
                    y = h0[x]
                    return (
                        FiniteDistribution(((x, y, 0.5), (x2, h0[x2], 0.5))),
                        FiniteDistribution(((x, y, 0.5), (x2, h1[x2], 0.5))),
                    )
    raise ConstructionError("no pair of hypotheses agrees at one point and disagrees at another")


def branch_distribution(cls: ConceptClass, tree: LTree, bits: Sequence[int]) -> FiniteDistribution:
    """Geometric weights 1/2, 1/4, ... along a branch; the last atom takes the remainder."""
    if tree is None or not bits:
        raise InputError("need a tree of depth >= 1 and a nonempty branch")
    if len(bits) != tree.depth:
        raise InputError(f"branch has {len(bits)} bits, tree depth is {tree.depth}")
    if not is_shattered_tree(cls, tree):
        raise InputError("tree is not shattered by the class")
    path = tree_branch(tree, bits)
    d = len(path)
    weights = [2.0 ** -(l + 1) for l in range(d - 1)]
    weights.append(1.0 - sum(weights))
    return FiniteDistribution(tuple((x, y, w) for (x, y), w in zip(path, weights)))


def slow_rate_distribution(cls: ConceptClass, tree: NLNode, branch: Sequence[Sequence[int]], p: Sequence[float]) -> FiniteDistribution:
    """Mass p_l / l on each of the l points of the level-l node along the branch.

    Labels come from one hypothesis consistent with the whole branch; an
    atom that repeats across levels accumulates its masses.
    """
    if abs(sum(p) - 1.0) > 1e-9 or any(q < 0 for q in p):
        raise InputError(f"masses must be nonnegative and sum to 1, got {list(p)}")
    nodes = nl_branch(tree, branch)
    if len(nodes) != len(p):
        raise InputError(f"need one mass per level: {len(nodes)} levels, {len(p)} masses")
    idx = cls.index
    mask = idx.full
    for node, bits in zip(nodes, branch):
        mask = nl_fiber(idx, mask, node.points, node.s0, node.s1, tuple(bits))
    if not mask:
        raise InputError("branch is not consistent with any hypothesis")
    h = cls.hypotheses[(mask & -mask).bit_length() - 1]
    mass: dict[int, float] = {}
    for level, (node, q) in enumerate(zip(nodes, p), start=1):
        for x in node.points:
            mass[x] = mass.get(x, 0.0) + q / level
    return FiniteDistribution(tuple((x, h[x], m) for x, m in sorted(mass.items())))
