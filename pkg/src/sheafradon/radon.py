"""Stalks, walls and per-direction barcodes of the sheaf Radon transform on the plane.

A query (nhat, r) stands for the closed half-plane {x . nhat <= r |nhat|}.  Walls
and barcodes are reported in offset units c = r |nhat|, which stay rational for
every rational direction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import contact
from .barcode import Barcode
from .cellsheaf import CellSheaf, SSReport, compact_cohomology, microstalk, singular_support, sublevel_barcode
from .exactlin import GradedDims, fmt_rat, rat
from .plgeom import Line, cross, dot, halfplane


class UnsupportedCovector(ValueError):
    pass


def _cmp_sqrt(r: Fraction, n2: Fraction, a: Fraction) -> int:
    """Sign of r * sqrt(n2) - a, exactly."""
    lhs_sign = (r > 0) - (r < 0)
    a_sign = (a > 0) - (a < 0)
    if lhs_sign != a_sign:
        return 1 if lhs_sign > a_sign else -1
    if lhs_sign == 0:
        return 0
    d = r * r * n2 - a * a
    s = (d > 0) - (d < 0)
    return s if lhs_sign > 0 else -s


@dataclass(frozen=True)
class LineQuery:
    nhat: tuple
    r: Fraction

    def __post_init__(self):
        nh = tuple(rat(v) for v in self.nhat)
        if len(nh) != 2 or nh == (0, 0):
            raise ValueError("nhat must be a nonzero 2-vector")
        object.__setattr__(self, "nhat", nh)
        object.__setattr__(self, "r", rat(self.r))

    @classmethod
    def at_offset(cls, nhat, c) -> "LineQuery":
        """Query whose half-plane is {x . nhat <= c}; needs a rational |nhat| unless c = 0."""
        nhat = tuple(rat(v) for v in nhat)
        c = rat(c)
        if c == 0:
            return cls(nhat, Fraction(0))
        n = contact.isqrt_exact(dot(nhat, nhat))
        if n is None:
            raise ValueError("offset form needs a direction with rational norm")
        return cls(nhat, c / n)

    @property
    def norm2(self) -> Fraction:
        return dot(self.nhat, self.nhat)

    def offset(self) -> Fraction | None:
        """c = r |nhat| if rational."""
        n = contact.isqrt_exact(self.norm2)
        return None if n is None else self.r * n

    def cmp_offset(self, a: Fraction) -> int:
        return _cmp_sqrt(self.r, self.norm2, rat(a))

    def contains(self, x) -> bool:
        return self.cmp_offset(dot(x, self.nhat)) >= 0

    def to_json(self) -> dict:
        return {"nhat": [fmt_rat(v) for v in self.nhat], "r": fmt_rat(self.r)}


@dataclass
class WallSet:
    offsets: dict  # direction -> sorted offsets c
    tangency: list  # canonical edge normals

    def r_values(self, nhat) -> list:
        """Walls in r units; exact where |nhat| is rational, float otherwise."""
        n = contact.isqrt_exact(dot(nhat, nhat))
        cs = self.offsets[tuple(nhat)]
        return [c / n for c in cs] if n is not None else [float(c) / math.sqrt(dot(nhat, nhat)) for c in cs]

    def to_json(self) -> dict:
        return {
            "directions": [{"nhat": [fmt_rat(v) for v in d], "walls": [fmt_rat(c) for c in cs]}
                           for d, cs in self.offsets.items()],
            "tangency": [[fmt_rat(v) for v in n] for n in self.tangency],
        }


def wall_offsets(F: CellSheaf, nhat) -> list[Fraction]:
    """Vertex projections plus offsets of arrangement lines parallel to the level lines of nhat."""
    nhat = tuple(rat(v) for v in nhat)
    B = F.base
    out = {dot(B.cells[v].rep, nhat) for v in B.of_dim(0)}
    for ln in B.lines:
        if cross(ln.normal, nhat) == 0:
            # nhat = s * normal, so the line is {x . nhat = s c}
            s = nhat[0] / ln.a if ln.a != 0 else nhat[1] / ln.b
            out.add(s * ln.c)
    return sorted(out)


def wall_set(F: CellSheaf, directions: Iterable) -> WallSet:
    offs = {}
    for d in directions:
        d = tuple(rat(v) for v in d)
        if d == (0, 0):
            raise ValueError("direction must be nonzero")
        offs[d] = wall_offsets(F, d)
    normals = sorted({ln.normal for ln in F.base.lines})
    return WallSet(offs, normals)


def representative_offset(F: CellSheaf, q: LineQuery) -> Fraction:
    """A rational offset in the same wall chamber as q, or q's own offset when that is a wall."""
    c = q.offset()
    if c is not None:
        return c
    walls = wall_offsets(F, q.nhat)
    if not walls:
        return Fraction(0)
    below = None
    for w in walls:
        s = q.cmp_offset(w)
        if s == 0:
            return w
        if s < 0:
            return w - 1 if below is None else (below + w) / 2
        below = w
    return walls[-1] + 1


def radon_stalk(F: CellSheaf, q: LineQuery) -> GradedDims:
    """RΓ_c({x . nhat <= r |nhat|}, F)."""
    c = representative_offset(F, q)
    G = F.refine([Line.level(q.nhat, c)])
    return compact_cohomology(G, G.base.cells_in(halfplane(q.nhat, c)))


def direction_barcode(F: CellSheaf, nhat) -> tuple[Barcode, list]:
    """Barcode of c -> RΓ_c({x . nhat <= c}, F) with restriction maps, plus its stalk table."""
    nhat = tuple(rat(v) for v in nhat)
    if nhat == (0, 0):
        raise ValueError("direction must be nonzero")
    walls = wall_offsets(F, nhat)
    return sublevel_barcode(F, walls, lambda t: halfplane(nhat, t), lambda t: Line.level(nhat, t))


def effective_walls(F: CellSheaf, nhat) -> list[Fraction]:
    return direction_barcode(F, nhat)[0].endpoints()


def direction_grid(bound: int = 2) -> list[tuple]:
    """Primitive integer directions with entries in [-bound, bound]."""
    out = []
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            if (a, b) != (0, 0) and math.gcd(a, b) == 1:
                out.append((Fraction(a), Fraction(b)))
    return sorted(out, key=lambda d: math.atan2(d[1], d[0]))


# ---------------------------------------------------------------------------
# checks against the contact transform

@dataclass
class WallPrediction:
    cell: int
    covector: tuple
    nhat: tuple
    offset: Fraction
    etar: object
    found: bool

    def to_json(self) -> dict:
        return {"cell": self.cell, "x": [fmt_rat(v) for v in self.covector[0]],
                "xi": [fmt_rat(v) for v in self.covector[1]], "nhat": [fmt_rat(v) for v in self.nhat],
                "offset": fmt_rat(self.offset), "etaR": str(self.etar), "found": self.found}


@dataclass
class SSImageReport:
    predictions: list = field(default_factory=list)
    unexplained: list = field(default_factory=list)  # (nhat, offset) walls with no SS preimage
    grid: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(p.found for p in self.predictions) and not self.unexplained

    def wall_base_points(self) -> set:
        return {(_prim(p.nhat), p.offset / max(abs(a) for a in p.nhat)) for p in self.predictions}

    def to_json(self) -> dict:
        return {"pass": self.passed, "predictions": [p.to_json() for p in self.predictions],
                "unexplained": [{"nhat": [fmt_rat(v) for v in n], "offset": fmt_rat(c)} for n, c in self.unexplained],
                "gridSize": len(self.grid)}


def _prim(v):
    """Positive rescaling with max |entry| = 1; keeps orientation."""
    m = max(abs(a) for a in v)
    return tuple(a / m for a in v)


def _chi_base(x, xi):
    """(nhat, r, eta_r) from the contact module, exact when |xi| is rational."""
    exact = contact.isqrt_exact(dot(xi, xi)) is not None
    if exact:
        c = contact.chi(contact.CotPoint(tuple(x), tuple(xi)))
        return c.nhat, c.r, c.etar, True
    c = contact.chi(contact.CotPoint(tuple(float(v) for v in x), tuple(float(v) for v in xi)))
    return c.nhat, c.r, c.etar, False


def ss_image_check(F: CellSheaf, grid: Sequence | None = None, ss: SSReport | None = None) -> SSImageReport:
    """Walls of the transform sit at chi(SS(F)), and every wall on the grid is explained by SS(F)."""
    ss = singular_support(F) if ss is None else ss
    grid = direction_grid() if grid is None else [tuple(rat(v) for v in d) for d in grid]
    rep = SSImageReport(grid=grid)
    cache: dict = {}

    def walls(d):
        if d not in cache:
            cache[d] = set(effective_walls(F, d))
        return cache[d]

    for e in ss.entries:
        x = F.base.cells[e.cell].rep
        xi = tuple(e.covector)
        nhat, r, etar, exact = _chi_base(x, xi)
        c = dot(x, xi)
        # the contact module predicts offset r |xi| = x . xi
        if exact:
            consistent = r * contact.vnorm(xi) == c and tuple(v * contact.vnorm(xi) for v in nhat) == xi
        else:
            consistent = abs(r * math.sqrt(float(dot(xi, xi))) - float(c)) < 1e-12
        found = consistent and etar > 0 and c in walls(xi)
        rep.predictions.append(WallPrediction(e.cell, (x, xi), xi, c, etar, found))
    for d in grid:
        for c in sorted(walls(d)):
            ok = any(e.sector.contains(d) and dot(F.base.cells[e.cell].rep, d) == c for e in ss.entries)
            if not ok:
                rep.unexplained.append((d, c))
    return rep


@dataclass
class SimplenessReport:
    x: tuple
    xi: tuple
    microstalk_dim: int
    endpoint_multiplicity: int

    @property
    def passed(self) -> bool:
        return self.microstalk_dim == self.endpoint_multiplicity

    def to_json(self) -> dict:
        return {"x": [fmt_rat(v) for v in self.x], "xi": [fmt_rat(v) for v in self.xi],
                "microstalkDim": self.microstalk_dim, "endpointMultiplicity": self.endpoint_multiplicity,
                "pass": self.passed}


def simpleness_transfer(F: CellSheaf, x, xi) -> SimplenessReport:
    """Compare the microstalk of F at (x, xi) with the bar-endpoint multiplicity of the transform at x . xi."""
    x = tuple(rat(v) for v in x)
    xi = tuple(rat(v) for v in xi)
    if xi == (0, 0):
        raise UnsupportedCovector("xi must be nonzero")
    if cross(x, xi) != 0:
        raise UnsupportedCovector("target covector is not proportional to dr: x must be parallel to xi")
    m = microstalk(F, x, xi).total
    bc, _ = direction_barcode(F, xi)
    return SimplenessReport(x, xi, m, bc.endpoint_multiplicity(dot(x, xi)))


def conormal_samples(F: CellSheaf, ss: SSReport | None = None) -> list[tuple]:
    """Covectors (x, xi) in SS(F) with x parallel to xi: vertices on their own sector line, edge foot points."""
    ss = singular_support(F) if ss is None else ss
    B = F.base
    out = []
    for e in ss.entries:
        cell = B.cells[e.cell]
        if cell.dim == 0:
            v = cell.rep
            if v == (0, 0):
                out.append((v, tuple(e.sector.sample())))
            else:
                for s in (1, -1):
                    w = (s * v[0], s * v[1])
                    if e.sector.contains(w):
                        out.append((v, w))
        elif cell.dim == 1 and e.sector.kind == "ray":
            n = e.sector.u
            c = dot(cell.rep, n)
            foot = (c * n[0] / dot(n, n), c * n[1] / dot(n, n))
            if B.locate(foot) == e.cell:
                out.append((foot, n) if foot != (0, 0) else ((Fraction(0), Fraction(0)), n))
    return out
