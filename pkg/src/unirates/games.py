"""Finite solvers for the exponential-rate and Natarajan-Littlestone games.

In both games the adversary moves first each round and the learner answers
with a bit (or a bit pattern); the adversary survives a round when some
hypothesis is still consistent with every answer so far.  A game value is
the number of rounds the adversary survives under optimal play.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional, Sequence

from .core import ConceptClass, ClassIndex
from .dimensions import MAX_CANDIDATES, MAX_TREE_DEPTH, nl_fiber
from .errors import InputError, LimitError, ProtocolError


@dataclass(frozen=True)
class GameValue:
    value: int

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class ExpGameMove:
    point: int
    y0: int
    y1: int
    eta: Optional[int] = None

    @property
    def revealed(self) -> int:
        return self.y1 if self.eta else self.y0


@dataclass(frozen=True)
class NLGameMove:
    points: tuple[int, ...]
    s0: tuple[int, ...]
    s1: tuple[int, ...]
    bits: Optional[tuple[int, ...]] = None


# --- exponential game ---

def _exp_value(idx: ClassIndex, mask: int) -> int:
    if mask == 0:
        return -1
    memo = idx.table("exp_game")
    hit = memo.get(mask)
    if hit is not None:
        return hit
    best = 0
    for x in range(idx.cls.domain_size):
        subs = [mask & lm for lm in idx.label_mask[x]]
        live = [s for s in subs if s]
        # a move with an empty side is worth 0 to the adversary
        for a, b in combinations(live, 2):
            best = max(best, 1 + min(_exp_value(idx, a), _exp_value(idx, b)))
    memo[mask] = best
    return best


def exp_game_value(cls: ConceptClass, mask: Optional[int] = None) -> GameValue:
    """Rounds an optimal adversary survives; -1 for the empty class."""
    if cls.partial:
        raise InputError("the exponential game is defined for total classes only")
    idx = cls.index
    return GameValue(_exp_value(idx, idx.full if mask is None else mask))


def _check_exp_move(cls: ConceptClass, mv: ExpGameMove):
    cls.check_point(mv.point)
    cls.check_label(mv.y0)
    cls.check_label(mv.y1)
    if mv.y0 == mv.y1:
        raise InputError(f"illegal move at point {mv.point}: both labels are {mv.y0}")


def exp_version_space(cls: ConceptClass, history: Sequence[ExpGameMove]) -> int:
    idx = cls.index
    mask = idx.full
    for r, mv in enumerate(history):
        _check_exp_move(cls, mv)
        if mv.eta not in (0, 1):
            raise InputError(f"round {r} has no learner bit")
        mask &= idx.label_mask[mv.point][mv.revealed]
        if not mask:
            raise ProtocolError(f"history is inconsistent from round {r}")
    return mask


def exp_learner_strategy(cls: ConceptClass, history: Sequence[ExpGameMove]) -> int:
    """Bit that strictly lowers the game value; the last history entry is the pending move."""
    if not history:
        raise InputError("history must end with the adversary's pending move")
    pending = history[-1]
    _check_exp_move(cls, pending)
    mask = exp_version_space(cls, history[:-1])
    return exp_strategy_bit(cls.index, mask, pending.point, pending.y0, pending.y1)


def exp_strategy_bit(idx: ClassIndex, mask: int, x: int, y0: int, y1: int) -> int:
    """Mask-level form of :func:`exp_learner_strategy` (no validation)."""
    now = _exp_value(idx, mask)
    if _exp_value(idx, mask & idx.label_mask[x][y0]) < now:
        return 0
    if _exp_value(idx, mask & idx.label_mask[x][y1]) < now:
        return 1
    raise AssertionError("no value-decreasing answer exists; the solver is inconsistent")


def exp_optimal_move(cls: ConceptClass, mask: int) -> Optional[ExpGameMove]:
    """An adversary move achieving the value of ``mask`` (None if the value is 0)."""
    idx = cls.index
    target = _exp_value(idx, mask)
    if target <= 0:
        return None
    for x in range(cls.domain_size):
        subs = [mask & lm for lm in idx.label_mask[x]]
        for a, b in combinations(range(len(subs)), 2):
            if subs[a] and subs[b] and 1 + min(_exp_value(idx, subs[a]), _exp_value(idx, subs[b])) == target:
                return ExpGameMove(x, a, b)
    raise AssertionError("value not attained by any move")


def exp_optimal_play(cls: ConceptClass) -> list[tuple[ExpGameMove, int]]:
    """Optimal adversary against the value-decreasing learner; (move with eta, value before)."""
    idx = cls.index
    history: list[ExpGameMove] = []
    trace = []
    mask = idx.full
    while True:
        mv = exp_optimal_move(cls, mask)
        if mv is None:
            return trace
        eta = exp_learner_strategy(cls, history + [mv])
        played = ExpGameMove(mv.point, mv.y0, mv.y1, eta)
        trace.append((played, _exp_value(idx, mask)))
        history.append(played)
        mask &= idx.label_mask[mv.point][played.revealed]
        if not mask:
            return trace


# --- Natarajan-Littlestone game ---

class _NLSolver:
    def __init__(self, cls: ConceptClass):
        self.cls = cls
        self.idx = cls.index
        self.memo = self.idx.table("nl_game")
        self.budget = MAX_CANDIDATES

    def value(self, mask: int, t: int, rounds: int) -> int:
        """Rounds survived from round ``t`` with at most ``rounds`` rounds left (mask nonempty)."""
        if rounds <= 0 or mask == 0:
            return 0
        key = (mask, t, rounds)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        idx = self.idx
        live = [x for x in range(self.cls.domain_size) if len(idx.labels_at(mask, x)) >= 2]
        best = 0
        for pts in combinations(live, t):
            if best == rounds:
                break
            pairs = [list(combinations(idx.labels_at(mask, x), 2)) for x in pts]
            for choice in product(*pairs):
                self.budget -= 1
                if self.budget < 0:
                    raise LimitError(f"NL game search exceeded {MAX_CANDIDATES} candidate moves")
                s0 = [c[0] for c in choice]
                s1 = [c[1] for c in choice]
                worst = rounds
                for bits in product((0, 1), repeat=t):
                    sub = nl_fiber(idx, mask, pts, s0, s1, bits)
                    worst = min(worst, 0 if not sub else 1 + self.value(sub, t + 1, rounds - 1))
                    if worst <= best:
                        break
                best = max(best, worst)
                if best == rounds:
                    break
        self.memo[key] = best
        return best


def nl_game_value(cls: ConceptClass, horizon: int = 3) -> GameValue:
    """Value of the NL game clipped at ``horizon`` rounds; -1 for the empty class."""
    if horizon > MAX_TREE_DEPTH:
        raise LimitError(f"NL game horizon is capped at {MAX_TREE_DEPTH}, got {horizon}")
    if len(cls) == 0:
        return GameValue(-1)
    return GameValue(_NLSolver(cls).value(cls.index.full, 1, horizon))


def _check_nl_move(cls: ConceptClass, mv: NLGameMove, t: int):
    if not (len(mv.points) == len(mv.s0) == len(mv.s1) == t):
        raise InputError(f"round {t} needs {t} points and colorings of that length")
    for x, a, b in zip(mv.points, mv.s0, mv.s1):
        cls.check_point(x)
        cls.check_label(a)
        cls.check_label(b)
        if a == b:
            raise InputError(f"colorings agree ({a}) at point {x}; they must differ everywhere")


def nl_version_space(cls: ConceptClass, history: Sequence[NLGameMove]) -> int:
    idx = cls.index
    mask = idx.full
    for t, mv in enumerate(history, start=1):
        _check_nl_move(cls, mv, t)
        if mv.bits is None or len(mv.bits) != t:
            raise InputError(f"round {t} has no learner pattern")
        mask = nl_fiber(idx, mask, mv.points, mv.s0, mv.s1, mv.bits)
        if not mask:
            raise ProtocolError(f"history is inconsistent from round {t}")
    return mask


def nl_pattern_for(solver: _NLSolver, mask: int, t: int, points, s0, s1, horizon: int) -> tuple[int, ...]:
    """Pattern minimizing the successor value (empty fiber scores -1); ties go lexicographic."""
    rest = max(horizon - t, 0)
    best, best_bits = None, None
    for bits in product((0, 1), repeat=t):
        sub = nl_fiber(solver.idx, mask, points, s0, s1, bits)
        score = -1 if not sub else solver.value(sub, t + 1, rest)
        if best is None or score < best:
            best, best_bits = score, bits
            if score == -1:
                break
    return best_bits


def nl_learner_strategy(cls: ConceptClass, history: Sequence[NLGameMove], horizon: int = MAX_TREE_DEPTH) -> tuple[int, ...]:
    """Learner's pattern for the pending move at the end of ``history``.

    Points may repeat across and within rounds; a repeated point inside one
    round makes some pattern unrealizable, which the learner then picks.
    """
    if not history:
        raise InputError("history must end with the adversary's pending move")
    t = len(history)
    pending = history[-1]
    _check_nl_move(cls, pending, t)
    mask = nl_version_space(cls, history[:-1])
    return nl_pattern_for(_NLSolver(cls), mask, t, pending.points, pending.s0, pending.s1, horizon)


def nl_optimal_play(cls: ConceptClass, horizon: int = 3) -> list[tuple[NLGameMove, int]]:
    """Optimal adversary against the learner strategy; (move with bits, value before)."""
    solver = _NLSolver(cls)
    idx = cls.index
    mask = idx.full
    trace = []
    t = 1
    while mask and t <= horizon:
        rounds = horizon - t + 1
        target = solver.value(mask, t, rounds)
        if target == 0:
            break
        move = None
        live = [x for x in range(cls.domain_size) if len(idx.labels_at(mask, x)) >= 2]
        for pts in combinations(live, t):
            pairs = [list(combinations(idx.labels_at(mask, x), 2)) for x in pts]
            for choice in product(*pairs):
                s0 = tuple(c[0] for c in choice)
                s1 = tuple(c[1] for c in choice)
                subs = [nl_fiber(idx, mask, pts, s0, s1, b) for b in product((0, 1), repeat=t)]
                if all(subs) and 1 + min(solver.value(s, t + 1, rounds - 1) for s in subs) == target:
                    move = (pts, s0, s1)
                    break
            if move:
                break
        pts, s0, s1 = move
        bits = nl_pattern_for(solver, mask, t, pts, s0, s1, horizon)
        trace.append((NLGameMove(pts, s0, s1, bits), target))
        mask = nl_fiber(idx, mask, pts, s0, s1, bits)
        t += 1
    return trace
