"""Finite multiclass concept classes, samples and realizable distributions.

Domain points are integer ids ``0..n-1`` and labels are integers ``0..k``.
Partial classes use :data:`STAR` for "undefined".  Everything here is
immutable once built.

Sub-families of a class are represented as integer bitmasks over the
(canonically sorted) hypothesis list; :class:`ClassIndex` holds the per-point
label masks that make restriction a single ``&``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from pathlib import Path
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .errors import InputError, ProtocolError

STAR = -1

Row = tuple[int, ...]
Predictor = Union[Callable[[int], int], Sequence[int]]


def label_str(y: int) -> str:
    return "*" if y == STAR else str(y)


@dataclass(frozen=True)
class ConceptClass:
    k: int
    domain_size: int
    hypotheses: tuple[Row, ...]
    partial: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise InputError(f"k must be >= 1, got {self.k}")
        if self.domain_size < 1:
            raise InputError(f"domain size must be >= 1, got {self.domain_size}")
        rows = set()
        for h in self.hypotheses:
            h = tuple(int(v) for v in h)
            if len(h) != self.domain_size:
                raise InputError(f"hypothesis {h} has length {len(h)}, expected {self.domain_size}")
            for v in h:
                if v == STAR:
                    if not self.partial:
                        raise InputError(f"hypothesis {h} is undefined somewhere but the class is total")
                elif not 0 <= v <= self.k:
                    raise InputError(f"label {v} out of range 0..{self.k}")
            rows.add(h)
        object.__setattr__(self, "hypotheses", tuple(sorted(rows)))

    def __len__(self):
        return len(self.hypotheses)

    def __getstate__(self):
        # the index holds memo tables; rebuild it lazily instead of shipping it
        state = dict(self.__dict__)
        state.pop("index", None)
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)

    @property
    def mode(self) -> str:
        return "partial" if self.partial else "total"

    @property
    def labels(self) -> range:
        return range(self.k + 1)

    @cached_property
    def index(self) -> "ClassIndex":
        return ClassIndex(self)

    def check_point(self, x: int) -> int:
        if not (isinstance(x, (int, np.integer)) and 0 <= x < self.domain_size):
            raise InputError(f"point id {x} out of range 0..{self.domain_size - 1}")
        return int(x)

    def check_label(self, y: int) -> int:
        if not (isinstance(y, (int, np.integer)) and 0 <= y <= self.k):
            raise InputError(f"label {y} out of range 0..{self.k}")
        return int(y)

    def subclass(self, mask: int) -> "ConceptClass":
        rows = [h for i, h in enumerate(self.hypotheses) if mask >> i & 1]
        return ConceptClass(self.k, self.domain_size, tuple(rows), self.partial)

    def as_total(self) -> "ConceptClass":
        """Read the undefined marker as an extra label ``k+1``."""
        rows = tuple(tuple(self.k + 1 if v == STAR else v for v in h) for h in self.hypotheses)
        return ConceptClass(self.k + 1, self.domain_size, rows, partial=False)

    def support(self, h: Row) -> frozenset[int]:
        return frozenset(x for x, v in enumerate(h) if v != STAR)


class ClassIndex:
    """Bitmask view of a class: ``label_mask[x][y]`` holds the hypotheses with h(x) = y."""

    def __init__(self, cls: ConceptClass):
        self.cls = cls
        self.size = len(cls)
        self.full = (1 << self.size) - 1
        n, k = cls.domain_size, cls.k
        self.label_mask = [[0] * (k + 1) for _ in range(n)]
        self.defined_mask = [0] * n
        for i, h in enumerate(cls.hypotheses):
            bit = 1 << i
            for x, v in enumerate(h):
                if v != STAR:
                    self.label_mask[x][v] |= bit
                    self.defined_mask[x] |= bit
        # shared memo tables (keyed by masks); filled lazily by other modules
        self.memo: dict[str, dict] = {}

    def table(self, name: str) -> dict:
        return self.memo.setdefault(name, {})

    def restrict(self, mask: int, x: int, y: int) -> int:
        return mask & self.label_mask[x][y]

    def consistent(self, pairs: Iterable[tuple[int, int]], mask: int | None = None) -> int:
        m = self.full if mask is None else mask
        for x, y in pairs:
            m &= self.label_mask[x][y]
        return m

    def members(self, mask: int) -> list[Row]:
        return [h for i, h in enumerate(self.cls.hypotheses) if mask >> i & 1]

    def labels_at(self, mask: int, x: int) -> list[int]:
        return [y for y in range(self.cls.k + 1) if mask & self.label_mask[x][y]]


# --- constructors for the named classes used throughout the tests and corpus ---

def full_class(n: int, k: int) -> ConceptClass:
    return ConceptClass(k, n, tuple(product(range(k + 1), repeat=n)))


def constant_class(n: int, k: int) -> ConceptClass:
    return ConceptClass(k, n, tuple((a,) * n for a in range(k + 1)))


def singleton_class(n: int) -> ConceptClass:
    """Binary indicators of single points."""
    return ConceptClass(1, n, tuple(tuple(int(i == j) for i in range(n)) for j in range(n)))


def threshold_class(n: int) -> ConceptClass:
    """Binary thresholds ``1[x >= t]`` for t in 0..n."""
    return ConceptClass(1, n, tuple(tuple(int(x >= t) for x in range(n)) for t in range(n + 1)))


# --- samples and distributions ---

@dataclass(frozen=True)
class LabeledSample:
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(x), int(y)) for x, y in self.pairs))

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return LabeledSample(self.pairs[item])
        return self.pairs[item]

    def validate(self, cls: ConceptClass) -> "LabeledSample":
        for x, y in self.pairs:
            cls.check_point(x)
            cls.check_label(y)
        return self


@dataclass(frozen=True)
class FiniteDistribution:
    """A pmf over (point, label) atoms with a functional support."""

    atoms: tuple[tuple[int, int, float], ...]
    probs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        atoms = tuple((int(x), int(y), float(p)) for x, y, p in self.atoms)
        if not atoms:
            raise InputError("distribution has no atoms")
        seen: dict[int, int] = {}
        for x, y, p in atoms:
            if p < 0 or math.isnan(p):
                raise InputError(f"negative probability {p} at point {x}")
            if x in seen and seen[x] != y:
                raise InputError(f"point {x} carries two labels ({seen[x]} and {y}); label noise is not supported")
            seen[x] = y
        total = sum(p for _, _, p in atoms)
        if abs(total - 1.0) > 1e-9:
            raise InputError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "probs", np.array([p for _, _, p in atoms]))

    @classmethod
    def uniform(cls, labeling: dict[int, int] | Sequence[tuple[int, int]]) -> "FiniteDistribution":
        items = sorted(labeling.items()) if isinstance(labeling, dict) else list(labeling)
        p = 1.0 / len(items)
        return cls(tuple((x, y, p) for x, y in items))

    @property
    def target(self) -> dict[int, int]:
        """The labeling of the support (functional by construction)."""
        return {x: y for x, y, p in self.atoms}

    def validate(self, cls: ConceptClass) -> "FiniteDistribution":
        for x, y, _ in self.atoms:
            cls.check_point(x)
            cls.check_label(y)
        return self

    def sample(self, rng: np.random.Generator, n: int) -> LabeledSample:
        idx = rng.choice(len(self.atoms), size=n, p=self.probs)
        return LabeledSample(tuple((self.atoms[i][0], self.atoms[i][1]) for i in idx))

    def is_realizable(self, cls: ConceptClass) -> bool:
        pairs = [(x, y) for x, y, p in self.atoms if p > 0]
        return is_realizable(cls, LabeledSample(tuple(pairs)))


# --- operations ---

def is_realizable(cls: ConceptClass, sample: LabeledSample | Iterable[tuple[int, int]]) -> bool:
    """True iff some hypothesis is defined on and agrees with every pair."""
    if not isinstance(sample, LabeledSample):
        sample = LabeledSample(tuple(sample))
    sample.validate(cls)
    return cls.index.consistent(sample.pairs) != 0


def require_realizable(cls: ConceptClass, sample: LabeledSample) -> int:
    """Consistent-hypothesis mask; raises naming the first round that empties it."""
    idx = cls.index
    mask = idx.full
    for t, (x, y) in enumerate(sample.pairs):
        cls.check_point(x)
        cls.check_label(y)
        mask &= idx.label_mask[x][y]
        if not mask:
            raise ProtocolError(f"sample is not realizable: round {t} ({x}, {y}) contradicts every hypothesis")
    return mask


def _check_points(cls: ConceptClass, points: Sequence[int]) -> tuple[int, ...]:
    pts = tuple(cls.check_point(x) for x in points)
    if len(set(pts)) != len(pts):
        raise InputError(f"duplicate point ids in {list(pts)}")
    return pts


def project(cls: ConceptClass, points: Sequence[int]) -> set[Row]:
    """Fully-defined label vectors the class realizes on ``points``."""
    pts = _check_points(cls, points)
    out = set()
    for h in cls.hypotheses:
        v = tuple(h[x] for x in pts)
        if STAR not in v:
            out.add(v)
    return out


def _as_callable(predictor: Predictor) -> Callable[[int], int]:
    if callable(predictor):
        return predictor
    return lambda x: predictor[x]


def distribution_error(predictor: Predictor, dist: FiniteDistribution) -> float:
    """Mass of atoms where the predictor's output differs from the label (STAR always errs)."""
    f = _as_callable(predictor)
    err = 0.0
    for x, y, p in dist.atoms:
        if f(x) != y:
            err += p
    return err


# --- file formats ---

_HEADER = re.compile(r"^mcc\s+k=(\d+)\s+n=(\d+)\s+mode=(total|partial)\s*$")


def parse_mcc(text: str, source: str = "<string>") -> ConceptClass:
    lines = text.splitlines()
    if not lines:
        raise InputError(f"{source}:1: empty concept-class file")
    m = _HEADER.match(lines[0].strip())
    if not m:
        raise InputError(f"{source}:1: expected 'mcc k=<int> n=<int> mode=total|partial'")
    k, n, mode = int(m.group(1)), int(m.group(2)), m.group(3)
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != n:
            raise InputError(f"{source}:{lineno}: expected {n} tokens, got {len(toks)}")
        row = []
        for tok in toks:
            if tok == "*":
                if mode == "total":
                    raise InputError(f"{source}:{lineno}: '*' in a total class")
                row.append(STAR)
            elif tok.isdigit() and int(tok) <= k:
                row.append(int(tok))
            else:
                raise InputError(f"{source}:{lineno}: bad label token {tok!r}")
        rows.append(tuple(row))
    try:
        return ConceptClass(k, n, tuple(rows), mode == "partial")
    except InputError as e:
        raise InputError(f"{source}: {e}") from None


def format_mcc(cls: ConceptClass) -> str:
    lines = [f"mcc k={cls.k} n={cls.domain_size} mode={cls.mode}"]
    lines += [" ".join(label_str(v) for v in h) for h in cls.hypotheses]
    return "\n".join(lines) + "\n"


def read_mcc(path: str | Path) -> ConceptClass:
    path = Path(path)
    return parse_mcc(path.read_text(), str(path))


def write_mcc(cls: ConceptClass, path: str | Path) -> None:
    Path(path).write_text(format_mcc(cls))


def parse_dist(text: str, source: str = "<string>") -> FiniteDistribution:
    atoms = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 3:
            raise InputError(f"{source}:{lineno}: expected 'x y p'")
        try:
            x, y, p = int(toks[0]), int(toks[1]), float(toks[2])
        except ValueError:
            raise InputError(f"{source}:{lineno}: cannot parse {line!r}") from None
        if x < 0 or y < 0:
            raise InputError(f"{source}:{lineno}: negative point or label")
        atoms.append((x, y, p))
    try:
        return FiniteDistribution(tuple(atoms))
    except InputError as e:
        raise InputError(f"{source}: {e}") from None


def format_dist(dist: FiniteDistribution) -> str:
    return "".join(f"{x} {y} {p!r}\n" for x, y, p in dist.atoms)


def read_dist(path: str | Path) -> FiniteDistribution:
    path = Path(path)
    return parse_dist(path.read_text(), str(path))


def parse_pairs(text: str, source: str = "<string>") -> LabeledSample:
    """Whitespace-separated ``x y`` per line (training files and streams)."""
    pairs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2 or not all(t.isdigit() for t in toks):
            raise InputError(f"{source}:{lineno}: expected 'x y'")
        pairs.append((int(toks[0]), int(toks[1])))
    return LabeledSample(tuple(pairs))
