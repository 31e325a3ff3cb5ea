"""Exact combinatorial dimensions of finite classes by exhaustive search.

All searches work on hypothesis bitmasks from :class:`ClassIndex`, so a
restricted subfamily is just an ``int`` and memo tables are keyed by it.
Every dimension of the empty class is -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator, Optional

from .core import ConceptClass, ClassIndex, InputError, project
from .errors import LimitError

MAX_TREE_DEPTH = 4
MAX_CANDIDATES = 10**7


@dataclass(frozen=True)
class ShatterWitness:
    points: tuple[int, ...]
    s0: tuple[int, ...]
    s1: Optional[tuple[int, ...]] = None


@dataclass(frozen=True)
class DimensionReport:
    vc: int
    natarajan: int
    graph: int
    littlestone_k: Optional[int]  # None for partial classes


@dataclass(frozen=True)
class TreeDepthReport:
    mll_depth: int
    nl_depth: int
    gl_depth: int


# --- shattering ---

Option = tuple[int, int, int, int]  # (mask for bit 0, mask for bit 1, label0, label1)


def _shatter_search(size: int, full: int, options: list[list[Option]]) -> tuple[int, tuple]:
    """Largest set of points with one option each whose 2^d fibers are all nonempty.

    ``options[x]`` lists the admissible (side0, side1) mask pairs at point x.
    Returns the dimension and a witness ``((x, option), ...)``.
    """
    if full == 0:
        return -1, ()
    best = [0, ()]
    n = len(options)

    def dfs(start: int, fibers: list[int], chosen: tuple):
        d = len(chosen)
        if d > best[0]:
            best[0], best[1] = d, chosen
        if 1 << (d + 1) > size:
            return
        # not enough points left to beat the incumbent
        if d + (n - start) <= best[0]:
            return
        for x in range(start, n):
            for opt in options[x]:
                a, b = opt[0], opt[1]
                nxt = []
                ok = True
                for f in fibers:
                    fa, fb = f & a, f & b
                    if not fa or not fb:
                        ok = False
                        break
                    nxt.append(fa)
                    nxt.append(fb)
                if ok:
                    dfs(x + 1, nxt, chosen + ((x, opt),))

    dfs(0, [full], ())
    return best[0], best[1]


def _natarajan_options(idx: ClassIndex, labels: Optional[tuple[int, int]] = None) -> list[list[Option]]:
    k = idx.cls.k
    out = []
    for x in range(idx.cls.domain_size):
        row = []
        pairs = [labels] if labels is not None else combinations(range(k + 1), 2)
        for a, b in pairs:
            ma, mb = idx.label_mask[x][a], idx.label_mask[x][b]
            if ma and mb:
                row.append((ma, mb, a, b))
        out.append(row)
    return out


def _graph_options(idx: ClassIndex) -> list[list[Option]]:
    out = []
    for x in range(idx.cls.domain_size):
        row = []
        for a in range(idx.cls.k + 1):
            agree = idx.label_mask[x][a]
            disagree = idx.defined_mask[x] & ~agree
            if agree and disagree:
                row.append((disagree, agree, a, a))
        out.append(row)
    return out


def natarajan_dim(cls: ConceptClass, witness: bool = False):
    """Natarajan dimension; with ``witness=True`` also a :class:`ShatterWitness`."""
    idx = cls.index
    d, chosen = _shatter_search(idx.size, idx.full, _natarajan_options(idx))
    if not witness:
        return d
    w = ShatterWitness(
        tuple(x for x, _ in chosen),
        tuple(o[2] for _, o in chosen),
        tuple(o[3] for _, o in chosen),
    )
    return d, w


def graph_dim(cls: ConceptClass, witness: bool = False):
    """Graph dimension: patterns are agree / (defined and) disagree with one coloring."""
    idx = cls.index
    d, chosen = _shatter_search(idx.size, idx.full, _graph_options(idx))
    if not witness:
        return d
    return d, ShatterWitness(tuple(x for x, _ in chosen), tuple(o[2] for _, o in chosen))


def vc_dim(cls: ConceptClass) -> int:
    """Shattering with the fixed label pair (0, 1); equals Natarajan when k = 1."""
    idx = cls.index
    return _shatter_search(idx.size, idx.full, _natarajan_options(idx, (0, 1)))[0]


def replay_natarajan(cls: ConceptClass, w: ShatterWitness) -> bool:
    """Check every bit pattern of a Natarajan witness against the class."""
    idx = cls.index
    for bits in product((0, 1), repeat=len(w.points)):
        m = idx.full
        for x, b, a0, a1 in zip(w.points, bits, w.s0, w.s1):
            m &= idx.label_mask[x][a1 if b else a0]
        if not m:
            return False
    return True


def replay_graph(cls: ConceptClass, w: ShatterWitness) -> bool:
    idx = cls.index
    for bits in product((0, 1), repeat=len(w.points)):
        m = idx.full
        for x, b, a in zip(w.points, bits, w.s0):
            agree = idx.label_mask[x][a]
            m &= agree if b else idx.defined_mask[x] & ~agree
        if not m:
            return False
    return True


# --- Littlestone ---

def _require_total(cls: ConceptClass, what: str):
    if cls.partial:
        raise InputError(f"{what} is defined for total classes only")


def ldim_of_mask(idx: ClassIndex, mask: int) -> int:
    """Multiclass Littlestone dimension of the subfamily ``mask``."""
    memo = idx.table("ldim")
    return _ldim(idx, mask, memo)


def _ldim(idx: ClassIndex, mask: int, memo: dict) -> int:
    if mask == 0:
        return -1
    if mask & (mask - 1) == 0:
        return 0
    hit = memo.get(mask)
    if hit is not None:
        return hit
    best = 0
    for x in range(idx.cls.domain_size):
        vals = []
        for lm in idx.label_mask[x]:
            sub = mask & lm
            if sub:
                vals.append(sub)
        if len(vals) < 2:
            continue
        ds = sorted((_ldim(idx, v, memo) for v in vals), reverse=True)
        best = max(best, ds[1] + 1)
    memo[mask] = best
    return best


def littlestone_dim_k(cls: ConceptClass) -> int:
    _require_total(cls, "the Littlestone dimension")
    return ldim_of_mask(cls.index, cls.index.full)


@dataclass(frozen=True)
class LTree:
    """Node of a shattered multiclass Littlestone tree; children are indexed by the edge bit."""

    point: int
    labels: tuple[int, int]
    children: tuple[Optional["LTree"], Optional["LTree"]]

    @property
    def depth(self) -> int:
        return 1 + max((c.depth if c else 0) for c in self.children)


def littlestone_tree(cls: ConceptClass, depth: Optional[int] = None, mask: Optional[int] = None) -> Optional[LTree]:
    """A complete shattered tree of the given depth (default: the full dimension)."""
    _require_total(cls, "a Littlestone tree")
    idx = cls.index
    mask = idx.full if mask is None else mask
    top = ldim_of_mask(idx, mask)
    depth = top if depth is None else depth
    if depth > top:
        raise InputError(f"no shattered tree of depth {depth}; the dimension is {top}")

    def build(m: int, d: int) -> Optional[LTree]:
        if d <= 0:
            return None
        for x in range(cls.domain_size):
            labs = idx.labels_at(m, x)
            for a, b in combinations(labs, 2):
                ma, mb = m & idx.label_mask[x][a], m & idx.label_mask[x][b]
                if ldim_of_mask(idx, ma) >= d - 1 and ldim_of_mask(idx, mb) >= d - 1:
                    return LTree(x, (a, b), (build(ma, d - 1), build(mb, d - 1)))
        raise AssertionError("memoized dimension promised a subtree")

    return build(mask, depth)


def tree_branch(tree: Optional[LTree], bits) -> list[tuple[int, int]]:
    """The (point, label) pairs along the path selected by ``bits``."""
    path = []
    node = tree
    for b in bits:
        if node is None:
            raise InputError("branch is longer than the tree")
        path.append((node.point, node.labels[b]))
        node = node.children[b]
    return path


def is_shattered_tree(cls: ConceptClass, tree: Optional[LTree]) -> bool:
    if tree is None:
        return len(cls) > 0
    idx = cls.index
    d = tree.depth
    for bits in product((0, 1), repeat=d):
        try:
            path = tree_branch(tree, bits)
        except InputError:
            return False
        if idx.consistent(path) == 0:
            return False
    return True


# --- NL / GL trees ---

@dataclass(frozen=True)
class NLNode:
    """Level-t node: t points with two colorings (``s1`` is None for GL nodes)."""

    points: tuple[int, ...]
    s0: tuple[int, ...]
    s1: Optional[tuple[int, ...]]
    children: dict = field(default_factory=dict, compare=False, hash=False)


def nl_fiber(idx: ClassIndex, mask: int, points, s0, s1, bits) -> int:
    for x, b, a0, a1 in zip(points, bits, s0, s1):
        mask &= idx.label_mask[x][a1 if b else a0]
    return mask


def gl_fiber(idx: ClassIndex, mask: int, points, s0, bits) -> int:
    for x, b, a in zip(points, bits, s0):
        agree = idx.label_mask[x][a]
        mask &= agree if b else idx.defined_mask[x] & ~agree
    return mask


class _TreeSearch:
    """Memoized existence of NL (``kind='nl'``) or GL trees, with a candidate budget."""

    def __init__(self, cls: ConceptClass, kind: str):
        self.cls = cls
        self.idx = cls.index
        self.kind = kind
        self.memo = self.idx.table(f"{kind}_tree")
        self.budget = MAX_CANDIDATES

    def point_options(self, mask: int, x: int) -> list[tuple]:
        idx = self.idx
        if self.kind == "nl":
            labs = idx.labels_at(mask, x)
            return [(a, b) for a, b in combinations(labs, 2)]
        opts = []
        for a in range(self.cls.k + 1):
            agree = mask & idx.label_mask[x][a]
            if agree and mask & idx.defined_mask[x] & ~agree:
                opts.append((a,))
        return opts

    def fiber(self, mask, pts, opts, bits) -> int:
        if self.kind == "nl":
            return nl_fiber(self.idx, mask, pts, [o[0] for o in opts], [o[1] for o in opts], bits)
        return gl_fiber(self.idx, mask, pts, [o[0] for o in opts], bits)

    def moves(self, mask: int, t: int) -> Iterator[tuple]:
        """Candidate level-t moves: (points, per-point options)."""
        per_point = {}
        for x in range(self.cls.domain_size):
            o = self.point_options(mask, x)
            if o:
                per_point[x] = o
        for pts in combinations(sorted(per_point), t):
            for opts in product(*(per_point[x] for x in pts)):
                self.budget -= 1
                if self.budget < 0:
                    raise LimitError(f"{self.kind} tree search exceeded {MAX_CANDIDATES} candidate tuples")
                yield pts, opts

    def exists(self, mask: int, t: int, d: int) -> bool:
        if mask == 0:
            return False
        if d == 0:
            return True
        # leaf fibers are disjoint and nonempty, so |V| bounds the leaf count
        if (1 << sum(range(t, t + d))) > mask.bit_count():
            return False
        key = (mask, t, d)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        ok = self.witness_move(mask, t, d) is not None
        self.memo[key] = ok
        return ok

    def witness_move(self, mask: int, t: int, d: int):
        for pts, opts in self.moves(mask, t):
            if all(self.exists(self.fiber(mask, pts, opts, bits), t + 1, d - 1)
                   for bits in product((0, 1), repeat=t)):
                return pts, opts
        return None

    def depth(self, max_depth: int) -> int:
        if max_depth > MAX_TREE_DEPTH:
            raise LimitError(f"tree depth is capped at {MAX_TREE_DEPTH}, got {max_depth}")
        full = self.idx.full
        if full == 0:
            return -1
        d = 0
        while d < max_depth and self.exists(full, 1, d + 1):
            d += 1
        return d

    def build(self, mask: int, t: int, d: int) -> Optional[NLNode]:
        if d == 0:
            return None
        move = self.witness_move(mask, t, d)
        if move is None:
            raise InputError(f"no {self.kind} tree of depth {d}")
        pts, opts = move
        s0 = tuple(o[0] for o in opts)
        s1 = tuple(o[1] for o in opts) if self.kind == "nl" else None
        node = NLNode(pts, s0, s1)
        for bits in product((0, 1), repeat=t):
            node.children[bits] = self.build(self.fiber(mask, pts, opts, bits), t + 1, d - 1)
        return node


def nl_tree_depth(cls: ConceptClass, max_depth: int = 3) -> int:
    """Depth of the deepest Natarajan-Littlestone tree, capped at ``max_depth``."""
    return _TreeSearch(cls, "nl").depth(max_depth)


def gl_tree_depth(cls: ConceptClass, max_depth: int = 3) -> int:
    """Depth of the deepest Graph-Littlestone tree, capped at ``max_depth``."""
    return _TreeSearch(cls, "gl").depth(max_depth)


def nl_tree(cls: ConceptClass, depth: int) -> Optional[NLNode]:
    """An explicit NL tree of the given depth (raises if none exists)."""
    if depth > MAX_TREE_DEPTH:
        raise LimitError(f"tree depth is capped at {MAX_TREE_DEPTH}, got {depth}")
    return _TreeSearch(cls, "nl").build(cls.index.full, 1, depth)


def nl_branch(tree: Optional[NLNode], branch) -> list[NLNode]:
    """Nodes visited along ``branch`` (a sequence of bit tuples, one per level)."""
    nodes = []
    node = tree
    for bits in branch:
        if node is None:
            raise InputError("branch is longer than the tree")
        bits = tuple(bits)
        if len(bits) != len(node.points) or bits not in node.children:
            raise InputError(f"pattern {bits} does not fit a level-{len(node.points)} node")
        nodes.append(node)
        node = node.children[bits]
    return nodes


def growth_function(cls: ConceptClass, m: int) -> int:
    if not 1 <= m <= cls.domain_size:
        raise InputError(f"m must be in 1..{cls.domain_size}, got {m}")
    return max(len(project(cls, c)) for c in combinations(range(cls.domain_size), m))


def dimension_report(cls: ConceptClass) -> DimensionReport:
    return DimensionReport(
        vc=vc_dim(cls),
        natarajan=natarajan_dim(cls),
        graph=graph_dim(cls),
        littlestone_k=None if cls.partial else littlestone_dim_k(cls),
    )


def tree_depth_report(cls: ConceptClass, max_depth: int = 3) -> TreeDepthReport:
    return TreeDepthReport(
        mll_depth=littlestone_dim_k(cls),
        nl_depth=nl_tree_depth(cls, max_depth),
        gl_depth=gl_tree_depth(cls, max_depth),
    )
