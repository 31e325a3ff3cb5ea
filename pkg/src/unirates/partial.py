"""Partial concept classes: PAC learning, growth bounds, supports and disambiguation."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Optional, Sequence

from .core import STAR, ConceptClass, LabeledSample, project, require_realizable
from .dimensions import graph_dim, natarajan_dim, vc_dim
from .errors import InputError, LimitError
from .one_inclusion import OneInclusionPredictor

COLORING_CAP = 24


# --- PAC learning ---

@dataclass
class PartialPACPredictor:
    table: list[int]
    chunks: int = 1
    chosen: int = 0
    validation_mistakes: tuple[int, ...] = ()

    def __call__(self, x: int) -> int:
        return self.table[x]


def partial_pac_learn(cls: ConceptClass, dataset, epsilon: float, delta: float) -> PartialPACPredictor:
    """Best of ceil(log2(1/delta)) one-inclusion predictors, chosen on held-out data.

    The first half is cut into that many chunks, each chunk trains one
    predictor, and the one with the fewest mistakes on the second half wins.
    """
    if not 0 < delta < 1:
        raise InputError(f"delta must be in (0, 1), got {delta}")
    if epsilon <= 0:
        raise InputError(f"epsilon must be positive, got {epsilon}")
    sample = dataset if isinstance(dataset, LabeledSample) else LabeledSample(tuple(dataset))
    require_realizable(cls, sample)
    if epsilon >= 1:
        return PartialPACPredictor([0] * cls.domain_size, 0)
    data = sample.pairs
    n = len(data)
    K = max(1, math.ceil(math.log2(1 / delta)))
    if n < 2:
        train, valid = data, data
        K = 1
    else:
        train, valid = data[: n // 2], data[n // 2:]
        K = min(K, max(1, len(train)))
    size = len(train) // K
    pred = OneInclusionPredictor(cls)
    tables, mistakes = [], []
    for j in range(K):
        chunk = train[j * size:(j + 1) * size] if j < K - 1 else train[j * size:]
        tab = [pred.predict(chunk, x) for x in range(cls.domain_size)]
        tables.append(tab)
        mistakes.append(sum(1 for x, y in valid if tab[x] != y))
    best = min(range(K), key=lambda j: (mistakes[j], j))
    return PartialPACPredictor(tables[best], K, best, tuple(mistakes))


def pac_sample_size(ndim: int, k: int, epsilon: float, delta: float, constant: float = 8.0) -> int:
    return math.ceil(constant * max(ndim, 1) * max(1.0, math.log2(k + 1)) * math.log(1 / delta) / epsilon)


# --- Sauer-Shelah-Perles for partial classes ---

@dataclass(frozen=True)
class SSPResult:
    ok: bool
    m: int
    vc: int
    growth: int
    bound: int
    counterexample: Optional[tuple[int, ...]] = None


def _shattered_count(cls: ConceptClass, pts: tuple[int, ...]) -> int:
    """Number of subsets of ``pts`` shattered (binary, defined values) by the class."""
    idx = cls.index
    count = 0
    for r in range(len(pts) + 1):
        for sub in combinations(pts, r):
            if all(idx.consistent(zip(sub, bits)) for bits in product((0, 1), repeat=r)):
                count += 1
    return count


def ssp_check(cls: ConceptClass, m: int) -> SSPResult:
    """Growth of a binary partial class against the sum of binomials up to its VC dimension.

    Also checks the finer bound |projection(C)| <= #shattered subsets of C on every m-set.
    """
    if cls.k != 1:
        raise InputError("ssp_check is for binary classes; use the tensor bound for k > 1")
    if not 1 <= m <= cls.domain_size:
        raise InputError(f"m must be in 1..{cls.domain_size}, got {m}")
    vc = vc_dim(cls)
    bound = sum(comb(m, i) for i in range(0, vc + 1))
    growth = 0
    for pts in combinations(range(cls.domain_size), m):
        size = len(project(cls, pts))
        growth = max(growth, size)
        if size > bound or size > _shattered_count(cls, pts):
            return SSPResult(False, m, vc, growth, bound, pts)
    return SSPResult(True, m, vc, growth, bound)


# --- supports ---

@dataclass(frozen=True)
class SupportReport:
    supp_vc: int
    natarajan: int
    natarajan_k2: int  # undefined read as the extra label k+1
    graph_k2: int
    natarajan_bound_ok: bool  # natarajan_k2 <= natarajan + supp_vc
    graph_bound_ok: bool  # graph_k2 >= supp_vc


def support_class(cls: ConceptClass) -> ConceptClass:
    rows = tuple(tuple(int(v != STAR) for v in h) for h in cls.hypotheses)
    return ConceptClass(1, cls.domain_size, rows)


def supp_vc_dim(cls: ConceptClass) -> int:
    """VC dimension of the family of supports; -1 for the empty class."""
    if len(cls) == 0:
        return -1
    return vc_dim(support_class(cls))


def support_report(cls: ConceptClass) -> SupportReport:
    s = supp_vc_dim(cls)
    nd = natarajan_dim(cls)
    total = cls.as_total()
    nk2, gk2 = natarajan_dim(total), graph_dim(total)
    return SupportReport(s, nd, nk2, gk2, nk2 <= nd + s, gk2 >= s)


# --- disambiguation ---

def _check_pair(total: ConceptClass, partial: ConceptClass):
    if total.domain_size != partial.domain_size or total.k != partial.k:
        raise InputError("classes must share domain size and k")
    if total.partial and any(STAR in h for h in total.hypotheses):
        raise InputError("the disambiguating class must be total")


def extends(total_h: Sequence[int], partial_h: Sequence[int]) -> bool:
    return all(p == STAR or p == t for t, p in zip(total_h, partial_h))


def is_disambiguation(total: ConceptClass, partial: ConceptClass) -> bool:
    """Every partial concept has a total one agreeing with it on its support."""
    _check_pair(total, partial)
    return all(any(extends(t, h) for t in total.hypotheses) for h in partial.hypotheses)


def conflicts(h1: Sequence[int], h2: Sequence[int]) -> bool:
    return any(a != STAR and b != STAR and a != b for a, b in zip(h1, h2))


@dataclass(frozen=True)
class ConflictGraph:
    vertices: tuple[tuple[int, ...], ...]
    edges: frozenset[tuple[int, int]]

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in self.vertices]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj


def conflict_graph(cls: ConceptClass) -> ConflictGraph:
    hs = cls.hypotheses
    edges = frozenset((i, j) for i, j in combinations(range(len(hs)), 2) if conflicts(hs[i], hs[j]))
    return ConflictGraph(hs, edges)


def chromatic_number(adj: list[set[int]]) -> tuple[int, list[int]]:
    """Exact chromatic number by DSATUR branch and bound; returns (chi, coloring)."""
    n = len(adj)
    if n == 0:
        return 0, []
    # greedy DSATUR gives the initial upper bound
    best = [n + 1, None]
    colors = [-1] * n

    def pick() -> int:
        v_best, key = -1, None
        for v in range(n):
            if colors[v] < 0:
                sat = len({colors[u] for u in adj[v] if colors[u] >= 0})
                k = (sat, len(adj[v]), -v)
                if key is None or k > key:
                    v_best, key = v, k
        return v_best

    def search(colored: int, used: int):
        if used >= best[0]:
            return
        if colored == n:
            best[0], best[1] = used, colors.copy()
            return
        v = pick()
        taken = {colors[u] for u in adj[v] if colors[u] >= 0}
        for c in range(used):
            if c not in taken:
                colors[v] = c
                search(colored + 1, used)
                colors[v] = -1
        if used + 1 < best[0]:
            colors[v] = used
            search(colored + 1, used + 1)
            colors[v] = -1

    search(0, 0)
    return best[0], best[1]


def min_disambiguation_size(cls: ConceptClass, limit: int = COLORING_CAP) -> int:
    """Smallest total class disambiguating ``cls`` (the conflict graph's chromatic number)."""
    if limit > COLORING_CAP:
        raise LimitError(f"coloring limit is capped at {COLORING_CAP}")
    if len(cls) > limit:
        raise LimitError(f"{len(cls)} hypotheses exceed the coloring limit {limit}")
    return chromatic_number(conflict_graph(cls).adjacency())[0]


def disambiguation_from_coloring(cls: ConceptClass, coloring: Sequence[int]) -> ConceptClass:
    """One total concept per color class: the common completion (undefined spots become 0)."""
    groups: dict[int, list] = {}
    for h, c in zip(cls.hypotheses, coloring):
        groups.setdefault(c, []).append(h)
    rows = []
    for members in groups.values():
        row = [0] * cls.domain_size
        for h in members:
            for x, v in enumerate(h):
                if v != STAR:
                    row[x] = v
        rows.append(tuple(row))
    return ConceptClass(cls.k, cls.domain_size, tuple(rows))


# --- biclique construction ---

@dataclass(frozen=True)
class BicliqueInstance:
    vertex_count: int
    edges: frozenset[frozenset[int]]
    blocks: tuple[tuple[frozenset[int], frozenset[int]], ...]

    def __post_init__(self):
        covered: set[frozenset[int]] = set()
        for j, (L, R) in enumerate(self.blocks, start=1):
            if L & R:
                raise InputError(f"block {j}: L and R intersect")
            if not L or not R:
                raise InputError(f"block {j}: both sides must be nonempty")
            for v in L | R:
                if not 0 <= v < self.vertex_count:
                    raise InputError(f"block {j}: vertex {v} out of range")
            for a in L:
                for b in R:
                    e = frozenset((a, b))
                    if e not in self.edges:
                        raise InputError(f"block {j}: pair {a}-{b} is not an edge")
                    if e in covered:
                        raise InputError(f"block {j}: edge {a}-{b} is covered twice")
                    covered.add(e)
        missing = self.edges - covered
        if missing:
            a, b = sorted(next(iter(missing)))
            raise InputError(f"edge {a}-{b} is not covered by any block")


def cycle4_instance() -> BicliqueInstance:
    """C4 on a=0, b=1, c=2, d=3 split into the stars of a and c."""
    edges = frozenset(frozenset(e) for e in ((0, 1), (1, 2), (2, 3), (3, 0)))
    blocks = ((frozenset({0}), frozenset({1, 3})), (frozenset({2}), frozenset({1, 3})))
    return BicliqueInstance(4, edges, blocks)


def _factor(inst: BicliqueInstance, v: int) -> tuple[int, ...]:
    return tuple(0 if v in L else 1 if v in R else STAR for L, R in inst.blocks)


def build_biclique_class(inst: BicliqueInstance, copies: int = 1) -> ConceptClass:
    """Tensor of ``copies`` binary biclique classes over the block indices.

    Copy j contributes weight 2^(j-1); an undefined factor makes the sum undefined.
    """
    if copies < 1:
        raise InputError("copies must be >= 1")
    factors = [_factor(inst, v) for v in range(inst.vertex_count)]
    rows = set()
    for tup in product(factors, repeat=copies):
        row = []
        for i in range(len(inst.blocks)):
            vals = [f[i] for f in tup]
            row.append(STAR if STAR in vals else sum(v << j for j, v in enumerate(vals)))
        rows.add(tuple(row))
    return ConceptClass(2 ** copies - 1, len(inst.blocks), tuple(rows), partial=True)


_BLOCK = re.compile(r"^block\s+(\d+)\s*:\s*L=([\d,]+)\s+R=([\d,]+)$")


def parse_biclique(text: str, source: str = "<string>") -> BicliqueInstance:
    """``vertices N``, then ``u v`` edge lines and ``block j: L=<ids> R=<ids>`` lines."""
    n = None
    edges = set()
    blocks = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vertices"):
            toks = line.split()
            if len(toks) != 2 or not toks[1].isdigit():
                raise InputError(f"{source}:{lineno}: expected 'vertices N'")
            n = int(toks[1])
            continue
        m = _BLOCK.match(line)
        if m:
            j = int(m.group(1))
            if j in blocks:
                raise InputError(f"{source}:{lineno}: block {j} defined twice")
            ids = lambda s: frozenset(int(t) for t in s.split(",") if t)
            blocks[j] = (ids(m.group(2)), ids(m.group(3)))
            continue
        toks = line.split()
        if len(toks) == 2 and all(t.isdigit() for t in toks) and toks[0] != toks[1]:
            edges.add(frozenset(int(t) for t in toks))
            continue
        raise InputError(f"{source}:{lineno}: cannot parse {line!r}")
    if n is None:
        raise InputError(f"{source}: missing 'vertices N' line")
    if not blocks:
        raise InputError(f"{source}: no blocks")
    try:
        return BicliqueInstance(n, frozenset(edges), tuple(blocks[j] for j in sorted(blocks)))
    except InputError as e:
        raise InputError(f"{source}: {e}") from None


def format_biclique(inst: BicliqueInstance) -> str:
    lines = [f"vertices {inst.vertex_count}"]
    lines += [" ".join(str(v) for v in sorted(e)) for e in sorted(inst.edges, key=sorted)]
    for j, (L, R) in enumerate(inst.blocks, start=1):
        lines.append(f"block {j}: L={','.join(map(str, sorted(L)))} R={','.join(map(str, sorted(R)))}")
    return "\n".join(lines) + "\n"
