"""Online learners in the realizable mistake-bound model.

:class:`SOAState` predicts the label whose version space keeps the largest
Littlestone dimension.  :class:`TournamentState` only consults the
exponential-game strategy: every pair of labels plays a match decided by the
strategy bit and the label winning the most matches is predicted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .core import ConceptClass, LabeledSample
from .dimensions import ldim_of_mask
from .errors import InputError, ProtocolError
from .games import ExpGameMove, exp_optimal_move, exp_strategy_bit


@dataclass(frozen=True)
class OnlineTranscript:
    rounds: tuple[tuple[int, int, int], ...]  # (point, predicted, true)

    @property
    def mistake_count(self) -> int:
        return sum(1 for _, p, y in self.rounds if p != y)


class SOAState:
    def __init__(self, cls: ConceptClass):
        if cls.partial:
            raise InputError("the online learners need a total class")
        self.cls = cls
        self.idx = cls.index
        self.mask = self.idx.full
        self.round = 0

    def predict(self, x: int) -> int:
        if not self.mask:
            raise ProtocolError(f"version space is empty at round {self.round}")
        best, best_y = None, 0
        for y, lm in enumerate(self.idx.label_mask[x]):
            v = ldim_of_mask(self.idx, self.mask & lm)
            if best is None or v > best:
                best, best_y = v, y
        return best_y

    def update(self, x: int, y: int, predicted: Optional[int] = None) -> None:
        self.mask &= self.idx.label_mask[x][y]
        if not self.mask:
            raise ProtocolError(f"round {self.round}: ({x}, {y}) is inconsistent with every hypothesis")
        self.round += 1


def soa_predict(state: SOAState, x: int) -> int:
    state.cls.check_point(x)
    return state.predict(x)


def tournament_winner(f: Callable[[int, int, int], int], x: int, k: int) -> int:
    """Max out-degree label of the clique on 0..k oriented by ``f`` (bit = index of the loser)."""
    outdeg = [0] * (k + 1)
    for y in range(k + 1):
        for y2 in range(y + 1, k + 1):
            eta = f(x, y, y2)
            outdeg[y2 if eta == 0 else y] += 1
    return max(range(k + 1), key=lambda y: (outdeg[y], -y))


class TournamentState:
    """Tournament over labels driven by the learner's game strategy.

    The strategy is refreshed only on mistakes: each mistake appends the move
    (x, predicted, true) with the learner bit fixed to 1, i.e. the true label.
    """

    def __init__(self, cls: ConceptClass):
        if cls.partial:
            raise InputError("the online learners need a total class")
        self.cls = cls
        self.idx = cls.index
        self.history: list[ExpGameMove] = []
        self.mask = self.idx.full  # consistent with the mistake rounds only
        self.seen = self.idx.full  # consistent with every round (realizability guard)
        self.round = 0
        self._table: dict[int, int] = {}

    @property
    def tau(self) -> int:
        return len(self.history) + 1

    def f(self, x: int, y: int, y2: int) -> int:
        if y == y2:
            raise InputError("tournament matches need two different labels")
        if not self.mask:
            raise ProtocolError(f"strategy history is inconsistent at round {self.round}")
        return exp_strategy_bit(self.idx, self.mask, x, y, y2)

    def predict(self, x: int) -> int:
        hit = self._table.get(x)
        if hit is None:
            hit = self._table[x] = tournament_winner(self.f, x, self.cls.k)
        return hit

    def update(self, x: int, y: int, predicted: Optional[int] = None) -> None:
        self.seen &= self.idx.label_mask[x][y]
        if not self.seen:
            raise ProtocolError(f"round {self.round}: ({x}, {y}) is inconsistent with every hypothesis")
        pred = self.predict(x) if predicted is None else predicted
        if pred != y:
            self.history.append(ExpGameMove(x, pred, y, 1))
            self.mask &= self.idx.label_mask[x][y]
            self._table.clear()
        self.round += 1

    def predictor_table(self) -> list[int]:
        return [self.predict(x) for x in range(self.cls.domain_size)]


def tournament_predict(state: TournamentState, x: int) -> int:
    state.cls.check_point(x)
    return state.predict(x)


LEARNERS = {"soa": SOAState, "tournament": TournamentState}


def make_learner(cls: ConceptClass, learner: str):
    try:
        return LEARNERS[learner](cls)
    except KeyError:
        raise InputError(f"unknown online learner {learner!r}; choose from {sorted(LEARNERS)}") from None


def run_online(cls: ConceptClass, sequence: LabeledSample | Iterable[tuple[int, int]], learner: str = "soa") -> OnlineTranscript:
    """Feed a realizable sequence; raises ProtocolError at the first contradicting round."""
    if not isinstance(sequence, LabeledSample):
        sequence = LabeledSample(tuple(sequence))
    sequence.validate(cls)
    state = make_learner(cls, learner)
    rounds = []
    for x, y in sequence:
        pred = state.predict(x)
        state.update(x, y, pred)
        rounds.append((x, pred, y))
    return OnlineTranscript(tuple(rounds))


class OptimalAdversary:
    """Descends a maximal shattered tree, always revealing a label the learner did not predict.

    Call :meth:`next_point` for the query (None once the version space has
    value 0) and :meth:`reveal` with the learner's prediction.
    """

    def __init__(self, cls: ConceptClass):
        if cls.partial:
            raise InputError("the optimal adversary needs a total class")
        self.cls = cls
        self.idx = cls.index
        self.mask = self.idx.full
        self._move: Optional[ExpGameMove] = None

    def next_point(self) -> Optional[int]:
        self._move = exp_optimal_move(self.cls, self.mask) if self.mask else None
        return None if self._move is None else self._move.point

    def reveal(self, prediction: int) -> int:
        mv = self._move
        if mv is None:
            raise ProtocolError("reveal called without a pending query")
        y = mv.y1 if prediction == mv.y0 else mv.y0
        self.mask &= self.idx.label_mask[mv.point][y]
        self._move = None
        return y


def optimal_adversary(cls: ConceptClass) -> OptimalAdversary:
    return OptimalAdversary(cls)


def run_against_adversary(cls: ConceptClass, learner: str = "soa", rounds: Optional[int] = None) -> OnlineTranscript:
    state = make_learner(cls, learner)
    adv = OptimalAdversary(cls)
    out = []
    while rounds is None or len(out) < rounds:
        x = adv.next_point()
        if x is None:
            break
        pred = state.predict(x)
        y = adv.reveal(pred)
        state.update(x, y, pred)
        out.append((x, pred, y))
    return OnlineTranscript(tuple(out))


def run_against_predictor(cls: ConceptClass, predict: Callable[[int], int]) -> OnlineTranscript:
    """Optimal adversary versus a fixed (non-learning) predictor."""
    adv = OptimalAdversary(cls)
    out = []
    while (x := adv.next_point()) is not None:
        pred = predict(x)
        out.append((x, pred, adv.reveal(pred)))
    return OnlineTranscript(tuple(out))
