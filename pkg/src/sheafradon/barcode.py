"""Interval decompositions of one-parameter families of complexes.

The families here come from sublevel sets Z_0 ⊂ Z_1 ⊂ ... of a cell complex;
structure maps are restrictions H_c(Z_j) -> H_c(Z_i) for i < j.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .exactlin import ChainComplex, ChainMap, GradedDims, cohomology, fmt_rat, induced_rank


@dataclass(frozen=True, order=True)
class Bar:
    degree: int
    birth: Fraction | None  # None is -infinity
    birth_closed: bool
    death: Fraction | None  # None is +infinity
    death_closed: bool
    mult: int = 1

    def contains(self, t) -> bool:
        if self.birth is not None and (t < self.birth or (t == self.birth and not self.birth_closed)):
            return False
        if self.death is not None and (t > self.death or (t == self.death and not self.death_closed)):
            return False
        return True

    def endpoints(self) -> list[Fraction]:
        return [e for e in (self.birth, self.death) if e is not None]

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "birth": None if self.birth is None else fmt_rat(self.birth),
            "birthClosed": self.birth_closed,
            "death": None if self.death is None else fmt_rat(self.death),
            "deathClosed": self.death_closed,
            "mult": self.mult,
        }

    def __str__(self):
        lo = "(-inf" if self.birth is None else ("[" if self.birth_closed else "(") + str(self.birth)
        hi = "+inf)" if self.death is None else str(self.death) + ("]" if self.death_closed else ")")
        return f"H^{self.degree} {lo}, {hi} x{self.mult}"


@dataclass(frozen=True)
class Barcode:
    bars: tuple[Bar, ...] = ()

    def __iter__(self):
        return iter(self.bars)

    def __len__(self):
        return len(self.bars)

    def stalk(self, t) -> GradedDims:
        out: dict[int, int] = {}
        for b in self.bars:
            if b.contains(t):
                out[b.degree] = out.get(b.degree, 0) + b.mult
        return GradedDims(out)

    def endpoint_multiplicity(self, t) -> int:
        return sum(b.mult for b in self.bars if t in b.endpoints())

    def endpoints(self) -> list[Fraction]:
        return sorted({e for b in self.bars for e in b.endpoints()})

    def to_json(self) -> list:
        return [b.to_json() for b in self.bars]


def sample_points(walls: Sequence[Fraction]) -> list[tuple[Fraction, bool]]:
    """Alternating chamber/wall samples: (value, is_wall), chambers at both ends."""
    walls = sorted(set(walls))
    if not walls:
        return [(Fraction(0), False)]
    out = [(walls[0] - 1, False)]
    for k, w in enumerate(walls):
        out.append((w, True))
        nxt = walls[k + 1] if k + 1 < len(walls) else w + 2
        out.append(((w + nxt) / 2, False))
    return out


def leftward_barcode(samples: Sequence[tuple[Fraction, bool]],
                     complexes: Sequence[ChainComplex],
                     restrict: Callable[[int, int], ChainMap]) -> Barcode:
    """Barcode of the module V_0 <- V_1 <- ... <- V_N sampled at alternating chambers and walls.

    ``restrict(i, j)`` is the structure map from sample j to sample i < j.
    Multiplicities come from inclusion-exclusion on ranks of composites.
    """
    N = len(samples)
    H = [cohomology(c) for c in complexes]
    degrees = sorted({k for h in H for k in h})
    maps: dict[tuple[int, int], ChainMap] = {}

    def r(i: int, j: int, k: int) -> int:
        if i < 0 or j >= N:
            return 0
        if i == j:
            return H[i].get(k, 0)
        if H[i].get(k, 0) == 0 or H[j].get(k, 0) == 0:
            return 0
        if (i, j) not in maps:
            maps[(i, j)] = restrict(i, j)
        return induced_rank(maps[(i, j)], k)

    bars = []
    for k in degrees:
        memo: dict[tuple[int, int], int] = {}

        def rr(i, j):
            if (i, j) not in memo:
                memo[(i, j)] = r(i, j, k)
            return memo[(i, j)]

        for i in range(N):
            if H[i].get(k, 0) == 0:
                continue
            for j in range(i, N):
                if H[j].get(k, 0) == 0:
                    break
                m = rr(i, j) - rr(i - 1, j) - rr(i, j + 1) + rr(i - 1, j + 1)
                if m < 0:
                    raise ArithmeticError("negative bar multiplicity; module is not interval-decomposable as sampled")
                if m:
                    bars.append(_translate(samples, i, j, k, m))
    return Barcode(tuple(sorted(bars, key=_bar_key)))


def _bar_key(b: Bar):
    inf = Fraction(10) ** 30
    return (b.degree, -inf if b.birth is None else b.birth, not b.birth_closed,
            inf if b.death is None else b.death, b.death_closed)


def _translate(samples, i, j, k, m) -> Bar:
    t_i, wall_i = samples[i]
    if wall_i:
        birth, bc = t_i, True
    elif i == 0:
        birth, bc = None, False
    else:
        birth, bc = samples[i - 1][0], False
    t_j, wall_j = samples[j]
    if wall_j:
        death, dc = t_j, True
    elif j == len(samples) - 1:
        death, dc = None, False
    else:
        death, dc = samples[j + 1][0], False
    return Bar(k, birth, bc, death, dc, m)
