"""Natarajan-Littlestone patterns and the streaming pattern avoider.

A pattern on t points is a bit string choosing, per point, one of two
everywhere-different colorings.  The avoider scans the stream with a window
of its current length L, asks the NL-game learner which pattern it believes
is forbidden for every coloring pair of the window, and grows L whenever the
data realize one of those patterns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Optional, Sequence

from .core import ConceptClass, LabeledSample
from .dimensions import MAX_TREE_DEPTH, nl_fiber
from .errors import InputError, LimitError, ProtocolError
from .games import _NLSolver, nl_game_value, nl_pattern_for

PatternFn = Callable[[tuple, tuple, tuple], tuple]


@dataclass(frozen=True)
class NLPattern:
    bits: tuple[int, ...]
    s0: tuple[int, ...]
    s1: tuple[int, ...]

    def __post_init__(self):
        if not len(self.bits) == len(self.s0) == len(self.s1):
            raise InputError("pattern and colorings must have the same length")
        for a, b in zip(self.s0, self.s1):
            if a == b:
                raise InputError(f"colorings agree ({a}); they must differ everywhere")

    def labels(self) -> tuple[int, ...]:
        return tuple(b1 if bit else b0 for bit, b0, b1 in zip(self.bits, self.s0, self.s1))


def is_realized_pattern(cls: ConceptClass, points: Sequence[int], s0, s1, bits) -> bool:
    """True iff some hypothesis picks s_{bits[i]} at every points[i]."""
    pat = NLPattern(tuple(bits), tuple(s0), tuple(s1))
    if len(points) != len(pat.bits):
        raise InputError("need one bit per point")
    for x in points:
        cls.check_point(x)
    for a in pat.s0 + pat.s1:
        cls.check_label(a)
    idx = cls.index
    return nl_fiber(idx, idx.full, points, pat.s0, pat.s1, pat.bits) != 0


def coloring_pairs(k: int, length: int) -> list[tuple[tuple, tuple]]:
    """All everywhere-different coloring pairs of ``length`` positions, lexicographic in (s0, s1)."""
    per = [(a, b) for a in range(k + 1) for b in range(k + 1) if a != b]
    pairs = [(tuple(c[0] for c in ch), tuple(c[1] for c in ch)) for ch in product(per, repeat=length)]
    return sorted(pairs)


def _candidate_pairs(k: int, labels: Sequence[int]) -> list[tuple[tuple, tuple]]:
    """The coloring pairs that could be realized by ``labels`` (one side matches everywhere), in lexicographic order."""
    per = []
    for y in labels:
        opts = [(y, b) for b in range(k + 1) if b != y] + [(a, y) for a in range(k + 1) if a != y]
        per.append(opts)
    pairs = [(tuple(c[0] for c in ch), tuple(c[1] for c in ch)) for ch in product(*per)]
    return sorted(set(pairs))


class _Strategy:
    """NL-game learner frozen at version space ``mask`` and round ``length``."""

    def __init__(self, cls: ConceptClass, horizon: int):
        self.cls = cls
        self.idx = cls.index
        self.horizon = horizon
        self.solver = _NLSolver(cls)
        self.memo = self.idx.table(f"avoid_pattern_{horizon}")
        self.fire_memo = self.idx.table(f"avoid_fire_{horizon}")

    def pattern(self, mask: int, length: int, points, s0, s1) -> tuple[int, ...]:
        key = (mask, length, points, s0, s1)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = nl_pattern_for(self.solver, mask, length, points, s0, s1, self.horizon)
        return hit

    def first_realized(self, mask: int, window: tuple[tuple[int, int], ...]) -> Optional[NLPattern]:
        """First coloring pair (in lexicographic order) whose queried pattern the window's labels realize."""
        key = (mask, window)
        if key in self.fire_memo:
            return self.fire_memo[key]
        length = len(window)
        points = tuple(x for x, _ in window)
        labels = tuple(y for _, y in window)
        found = None
        for s0, s1 in _candidate_pairs(self.cls.k, labels):
            bits = self.pattern(mask, length, points, s0, s1)
            if all((s1[z] if b else s0[z]) == labels[z] for z, b in enumerate(bits)):
                found = NLPattern(bits, s0, s1)
                break
        self.fire_memo[key] = found
        return found


@dataclass
class AvoiderState:
    cls: ConceptClass
    horizon: int = MAX_TREE_DEPTH
    mask: int = -1
    length: int = 1
    bad: list = field(default_factory=list)  # (points, NLPattern) per growth event
    items: list = field(default_factory=list)
    lengths: list = field(default_factory=list)  # length after each step
    _seen: int = -1
    _strategy: Optional[_Strategy] = field(default=None, repr=False)

    def __post_init__(self):
        if self.cls.partial:
            raise InputError("the pattern avoider needs a total class")
        idx = self.cls.index
        if self.mask == -1:
            self.mask = idx.full
        self._seen = idx.full
        self._strategy = _Strategy(self.cls, self.horizon)

    @property
    def growth_events(self) -> int:
        return len(self.bad)

    def feed(self, x: int, y: int) -> "AvoiderState":
        cls = self.cls
        cls.check_point(x)
        cls.check_label(y)
        self._seen &= cls.index.label_mask[x][y]
        if not self._seen:
            raise ProtocolError(f"stream is not realizable at step {len(self.items)} ({x}, {y})")
        self.items.append((x, y))
        L = self.length
        if len(self.items) >= L:
            window = tuple(self.items[-L:])
            hit = self._strategy.first_realized(self.mask, window)
            if hit is not None:
                points = tuple(p for p, _ in window)
                self.bad.append((points, hit))
                self.mask = nl_fiber(cls.index, self.mask, points, hit.s0, hit.s1, hit.bits)
                self.length = L + 1
                if self.length > self.horizon:
                    raise LimitError(f"pattern length exceeded the NL-game horizon {self.horizon}")
        self.lengths.append(self.length)
        return self

    def g(self) -> "AvoidanceFunction":
        return AvoidanceFunction(self._strategy, self.mask, self.length)

    def fails_on(self, window: Sequence[tuple[int, int]]) -> bool:
        """Would the frozen avoidance function fail to avoid a pattern realized by ``window``?"""
        if len(window) != self.length:
            raise InputError(f"window must have length {self.length}")
        return self._strategy.first_realized(self.mask, tuple(window)) is not None


@dataclass(frozen=True)
class AvoidanceFunction:
    strategy: _Strategy
    mask: int
    length: int

    def __call__(self, points, s0, s1) -> tuple[int, ...]:
        if len(points) != self.length:
            raise InputError(f"avoidance function takes {self.length} points, got {len(points)}")
        return self.strategy.pattern(self.mask, self.length, tuple(points), tuple(s0), tuple(s1))


def new_avoider(cls: ConceptClass, horizon: int = MAX_TREE_DEPTH) -> AvoiderState:
    """Fresh avoider; refuses classes whose NL-game value reaches the horizon."""
    v = nl_game_value(cls, horizon).value
    if v >= horizon:
        raise LimitError(f"NL game value reaches the horizon {horizon}; raise it or shrink the class")
    return AvoiderState(cls, horizon)


def feed(state: AvoiderState, pair: tuple[int, int]) -> AvoiderState:
    return state.feed(*pair)


def avoidance_function(state: AvoiderState) -> AvoidanceFunction:
    return state.g()


def run_avoider(cls: ConceptClass, stream: LabeledSample | Sequence[tuple[int, int]], horizon: int = MAX_TREE_DEPTH) -> AvoiderState:
    state = new_avoider(cls, horizon)
    for x, y in stream:
        state.feed(x, y)
    return state


def build_pattern_restricted_class(points: Sequence[int], g: PatternFn, t: int, k: int) -> ConceptClass:
    """Labelings of ``points`` (by position) that avoid every pattern ``g`` prescribes.

    For each sorted t-subset of positions and each everywhere-different
    coloring pair, the labeling that follows g's pattern there is removed, so
    no t-subset stays Natarajan-shattered.
    """
    pts = tuple(points)
    if len(set(pts)) != len(pts):
        raise InputError("points must be distinct")
    n = len(pts)
    full = list(product(range(k + 1), repeat=n))
    if n < t:
        return ConceptClass(k, max(n, 1), tuple(full) if n else ())
    pairs = coloring_pairs(k, t)
    forbidden: list[set] = []
    for pos in combinations(range(n), t):
        sub = tuple(pts[i] for i in pos)
        banned = set()
        for s0, s1 in pairs:
            bits = g(sub, s0, s1)
            banned.add(tuple(s1[z] if b else s0[z] for z, b in enumerate(bits)))
        forbidden.append((pos, banned))
    keep = [f for f in full if not any(tuple(f[i] for i in pos) in banned for pos, banned in forbidden)]
    return ConceptClass(k, n, tuple(keep))
