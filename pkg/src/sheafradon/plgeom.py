"""Exact rational line arrangements in the plane and point arrangements on the line.

Cells are relatively open convex polyhedra indexed by sign vectors.  A cell X
lies in the closure of Y exactly when every coordinate of X is 0 or equals the
matching coordinate of Y.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactlin import rat

Point = tuple  # tuple of Fractions

RELATIONS = ("<=", "<", "=", ">=", ">")
FLIP = {"<=": ">=", "<": ">", "=": "=", ">=": "<=", ">": "<"}


def sign(q) -> int:
    return (q > 0) - (q < 0)


def as_point(p) -> Point:
    return tuple(rat(v) for v in p)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def perp(u):
    """Rotate by +90 degrees."""
    return (-u[1], u[0])


def canonical_direction(u) -> Point:
    """Scale a nonzero vector so its first nonzero component has absolute value 1."""
    for x in u:
        if x:
            s = abs(Fraction(x))
            return tuple(Fraction(v) / s for v in u)
    raise ValueError("zero direction")


def _half(u) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2 pi)
    return 0 if (u[1] > 0 or (u[1] == 0 and u[0] > 0)) else 1


def angle_cmp(u, v) -> int:
    """Compare directions by polar angle in [0, 2 pi), exactly."""
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


angle_key = functools.cmp_to_key(angle_cmp)


def sort_by_angle(dirs: Iterable) -> list:
    return sorted(dirs, key=angle_key)


def arc_midpoint(u, v):
    """A direction strictly inside the counterclockwise arc from u to v."""
    c = cross(u, v)
    if c > 0:
        return (u[0] + v[0], u[1] + v[1])
    if c < 0:
        return (-(u[0] + v[0]), -(u[1] + v[1]))
    if dot(u, v) < 0:
        return perp(u)
    return (-u[0], -u[1])  # u == v: the arc is the whole circle minus u


@dataclass(frozen=True, order=True)
class Line:
    """The line {a x + b y = c}, normalized so the first nonzero of (a, b) is 1."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __init__(self, a, b, c):
        a, b, c = rat(a), rat(b), rat(c)
        if a == 0 and b == 0:
            raise ValueError("degenerate line: a = b = 0")
        s = a if a != 0 else b
        object.__setattr__(self, "a", a / s)
        object.__setattr__(self, "b", b / s)
        object.__setattr__(self, "c", c / s)

    @classmethod
    def through(cls, p, q) -> "Line":
        p, q = as_point(p), as_point(q)
        d = (q[0] - p[0], q[1] - p[1])
        n = perp(d)
        return cls(n[0], n[1], dot(n, p))

    @classmethod
    def level(cls, nhat, c) -> "Line":
        """{x . nhat = c}."""
        return cls(nhat[0], nhat[1], c)

    @property
    def normal(self) -> Point:
        return (self.a, self.b)

    @property
    def direction(self) -> Point:
        return (-self.b, self.a)

    def value(self, p) -> Fraction:
        return self.a * p[0] + self.b * p[1] - self.c

    def point(self) -> Point:
        n2 = self.a * self.a + self.b * self.b
        return (self.c * self.a / n2, self.c * self.b / n2)

    def at(self, t) -> Point:
        """Point with d . p = t, d the direction."""
        p0 = self.point()
        d = self.direction
        d2 = dot(d, d)
        s = (t - dot(d, p0)) / d2
        return (p0[0] + s * d[0], p0[1] + s * d[1])

    def parallel(self, other: "Line") -> bool:
        return cross(self.normal, other.normal) == 0

    def intersect(self, other: "Line") -> Point | None:
        det = self.a * other.b - self.b * other.a
        if det == 0:
            return None
        x = (self.c * other.b - self.b * other.c) / det
        y = (self.a * other.c - self.c * other.a) / det
        return (x, y)

    def to_json(self) -> dict:
        from .exactlin import fmt_rat
        return {"a": fmt_rat(self.a), "b": fmt_rat(self.b), "c": fmt_rat(self.c)}

    def __repr__(self):
        return f"Line({self.a}, {self.b}, {self.c})"


def _holds(value, rel: str) -> bool:
    if rel == "<=":
        return value <= 0
    if rel == "<":
        return value < 0
    if rel == "=":
        return value == 0
    if rel == ">=":
        return value >= 0
    if rel == ">":
        return value > 0
    raise ValueError(f"unknown relation {rel!r}")


@dataclass(frozen=True)
class Pred:
    """``h rel 0`` where h is a Line (value a x + b y - c) or a breakpoint b on the line (value x - b)."""

    hyper: object
    rel: str

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")

    def value(self, p):
        if isinstance(self.hyper, Line):
            return self.hyper.value(p)
        return p[0] - self.hyper

    def holds(self, p) -> bool:
        return _holds(self.value(p), self.rel)

    @classmethod
    def of(cls, a, b, c, rel: str) -> "Pred":
        """``a x + b y rel c``; the relation is flipped if normalizing the line scales by a negative."""
        a, b = rat(a), rat(b)
        s = a if a != 0 else b
        return cls(Line(a, b, c), FLIP[rel] if s < 0 else rel)


@dataclass(frozen=True)
class LCSet:
    """A locally closed convex set given by a conjunction of predicates, or an explicit cell set."""

    preds: tuple = ()
    cell_ids: frozenset | None = None

    @classmethod
    def of(cls, *preds: Pred) -> "LCSet":
        return cls(tuple(preds))

    @classmethod
    def everything(cls) -> "LCSet":
        return cls(())

    def hyperplanes(self) -> list:
        return [p.hyper for p in self.preds]

    def contains(self, p) -> bool:
        return all(pr.holds(p) for pr in self.preds)

    def __and__(self, other: "LCSet") -> "LCSet":
        if self.cell_ids is not None or other.cell_ids is not None:
            raise ValueError("cannot intersect explicit cell sets symbolically")
        return LCSet(self.preds + other.preds)


def halfplane(nhat, c, rel: str = "<=") -> LCSet:
    """{x . nhat rel c}."""
    return LCSet.of(Pred.of(nhat[0], nhat[1], c, rel))


def box(x0, x1, y0, y1, closed: bool = True) -> LCSet:
    lo, hi = (">=", "<=") if closed else (">", "<")
    return LCSet.of(Pred(Line(1, 0, x0), lo), Pred(Line(1, 0, x1), hi),
                    Pred(Line(0, 1, y0), lo), Pred(Line(0, 1, y1), hi))


def interval(lo=None, hi=None, lo_closed=True, hi_closed=True) -> LCSet:
    preds = []
    if lo is not None:
        preds.append(Pred(rat(lo), ">=" if lo_closed else ">"))
    if hi is not None:
        preds.append(Pred(rat(hi), "<=" if hi_closed else "<"))
    return LCSet(tuple(preds))


@dataclass
class Cell:
    id: int
    dim: int
    signs: tuple
    rep: Point
    bounded: bool
    at_infinity: bool = False
    direction: Point | None = None  # for infinity points


class CellComplex:
    """Shared face-poset machinery for 1D and 2D arrangements.

    Subclasses fill ``cells`` (affine cells, ids 0..N-1), ``boundary`` (codimension-one
    faces with incidence signs) and the infinity data.
    """

    dimension: int = 0

    def _finish(self):
        n = len(self.cells)
        self.cofaces: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for c, faces in enumerate(self.boundary):
            for f, s in faces:
                self.cofaces[f].append((c, s))
        self._by_sign = {c.signs: c.id for c in self.cells}
        # closure and star from the covering relation, top-down
        self.down: list[frozenset] = [frozenset()] * n
        for c in sorted(range(n), key=lambda i: self.cells[i].dim):
            acc = {c}
            for f, _ in self.boundary[c]:
                acc |= self.down[f]
            self.down[c] = frozenset(acc)
        up: list[set] = [set() for _ in range(n)]
        for c in range(n):
            for f in self.down[c]:
                up[f].add(c)
        self.up: list[frozenset] = [frozenset(u) for u in up]

    def __len__(self):
        return len(self.cells)

    @property
    def hyperplanes(self) -> list:
        raise NotImplementedError

    def sign_vector(self, p) -> tuple:
        raise NotImplementedError

    def locate(self, p) -> int:
        """Id of the cell containing the rational point p."""
        return self._by_sign[self.sign_vector(as_point(p))]

    def leq(self, c: int, d: int) -> bool:
        return c in self.down[d]

    def star(self, c: int) -> frozenset:
        return self.up[c]

    def closure(self, c: int) -> frozenset:
        return self.down[c]

    def closure_of(self, cells: Iterable[int]) -> frozenset:
        out = set()
        for c in cells:
            out |= self.down[c]
        return frozenset(out)

    def star_of(self, cells: Iterable[int]) -> frozenset:
        out = set()
        for c in cells:
            out |= self.up[c]
        return frozenset(out)

    def is_open(self, cells) -> bool:
        cells = set(cells)
        return all(self.up[c] <= cells for c in cells)

    def is_closed(self, cells) -> bool:
        cells = set(cells)
        return all(self.down[c] <= cells for c in cells)

    def is_locally_closed(self, cells) -> bool:
        """Convex in the face poset, which for finite posets means open in its closure."""
        cells = set(cells)
        for c in cells:
            for b in self.down[c]:
                if b not in cells and self.down[b] & cells:
                    return False
        return True

    def incidence(self, c: int, f: int) -> int:
        for g, s in self.boundary[c]:
            if g == f:
                return s
        return 0

    def of_dim(self, k: int) -> list[int]:
        return [c.id for c in self.cells if c.dim == k]

    def compile(self, s: LCSet):
        """Cells on which every predicate holds; refines first when a hyperplane is missing.

        Returns ``(arrangement, frozenset of cell ids)``; the arrangement is ``self``
        when no refinement was needed.
        """
        if s.cell_ids is not None:
            return self, frozenset(s.cell_ids)
        missing = [h for h in s.hyperplanes() if h not in self._hyper_set]
        arr = self.refine(missing)[0] if missing else self
        return arr, frozenset(c.id for c in arr.cells if s.contains(c.rep))

    def cells_in(self, s: LCSet) -> frozenset:
        """Like compile, but the hyperplanes of ``s`` must already be present."""
        arr, ids = self.compile(s)
        if arr is not self:
            raise ValueError("set is not a union of cells of this arrangement")
        return ids

    def refine(self, extra):
        raise NotImplementedError

    def euler_affine(self) -> int:
        return sum((-1) ** c.dim for c in self.cells)

    # compactified complex ---------------------------------------------------
    def disk_cells(self) -> list[Cell]:
        return list(self.cells) + list(self.infinity_cells)

    def disk_boundary(self) -> list[list[tuple[int, int]]]:
        """Boundary incidences on the compactified complex (affine ids then infinity ids)."""
        out = [list(b) for b in self.boundary] + [list(b) for b in self.infinity_boundary]
        for c, extra in self.boundary_to_infinity.items():
            out[c] = out[c] + extra
        return out

    def euler_disk(self) -> int:
        return sum((-1) ** c.dim for c in self.disk_cells())


class Arrangement2D(CellComplex):
    """Face poset of a finite set of lines, with a circle at infinity."""

    dimension = 2

    def __init__(self, lines: Iterable[Line] = ()):
        lines = sorted(set(lines))
        for ln in lines:
            if not isinstance(ln, Line):
                raise TypeError("expected Line")
        self.lines: list[Line] = lines
        self._hyper_set = frozenset(lines)
        self._build()
        self._finish()

    @property
    def hyperplanes(self):
        return self.lines

    def sign_vector(self, p) -> tuple:
        return tuple(sign(ln.value(p)) for ln in self.lines)

    def _build(self):
        L = self.lines
        verts: dict[Point, None] = {}
        for i in range(len(L)):
            for j in range(i + 1, len(L)):
                p = L[i].intersect(L[j])
                if p is not None:
                    verts[p] = None
        on_line: list[list[Point]] = [[] for _ in L]
        for p in verts:
            for i, ln in enumerate(L):
                if ln.value(p) == 0:
                    on_line[i].append(p)

        # keys are sign vectors; ids assigned after sorting
        cells: dict[tuple, dict] = {}
        for p in verts:
            cells[self.sign_vector(p)] = {"dim": 0, "rep": p, "bounded": True}
        bnd: dict[tuple, list] = {}
        to_inf: dict[tuple, list] = {}  # edge key -> [(direction, sign)]
        edges_on_line: list[list[tuple]] = [[] for _ in L]

        for i, ln in enumerate(L):
            d = ln.direction
            pts = sorted(on_line[i], key=lambda p: dot(d, p))
            ts = [dot(d, p) for p in pts]
            pieces = []  # (rep param, tail point, head point)
            if not pts:
                pieces.append((Fraction(0), None, None))
            else:
                pieces.append((ts[0] - 1, None, pts[0]))
                for k in range(len(pts) - 1):
                    pieces.append(((ts[k] + ts[k + 1]) / 2, pts[k], pts[k + 1]))
                pieces.append((ts[-1] + 1, pts[-1], None))
            for t, tail, head in pieces:
                if tail is not None and head is not None:
                    rep = ((tail[0] + head[0]) / 2, (tail[1] + head[1]) / 2)
                else:
                    rep = ln.at(t)
                key = self.sign_vector(rep)
                cells[key] = {"dim": 1, "rep": rep, "bounded": tail is not None and head is not None, "line": i}
                faces = []
                inf = []
                if tail is not None:
                    faces.append((self.sign_vector(tail), -1))
                else:
                    inf.append((canonical_direction((-d[0], -d[1])), -1))
                if head is not None:
                    faces.append((self.sign_vector(head), 1))
                else:
                    inf.append((canonical_direction(d), 1))
                bnd[key] = faces
                to_inf[key] = inf
                edges_on_line[i].append(key)

        face_edges: dict[tuple, list] = {}
        for i in range(len(L)):
            for ekey in edges_on_line[i]:
                for s in (-1, 1):
                    fkey = ekey[:i] + (s,) + ekey[i + 1:]
                    face_edges.setdefault(fkey, []).append((ekey, 1 if s == -1 else -1))
        if not L:
            face_edges[()] = []
        for fkey, fe in face_edges.items():
            bounded = bool(fe) and all(cells[e]["bounded"] for e, _ in fe)
            if bounded:
                vs = {tuple(cells[v]["rep"]) for e, _ in fe for v, _ in bnd[e]}
                rep = (sum(v[0] for v in vs) / len(vs), sum(v[1] for v in vs) / len(vs))
            elif fe:
                ekey, _ = fe[0]
                i = cells[ekey]["line"]
                rep = self._push_off(cells[ekey]["rep"], i, fkey[i])
            else:
                rep = (Fraction(0), Fraction(0))
            cells[fkey] = {"dim": 2, "rep": rep, "bounded": bounded}
            bnd[fkey] = fe

        keys = sorted(cells, key=lambda k: (cells[k]["dim"], k))
        idx = {k: n for n, k in enumerate(keys)}
        self.cells = [Cell(idx[k], cells[k]["dim"], k, cells[k]["rep"], cells[k]["bounded"]) for k in keys]
        self.boundary = [[(idx[f], s) for f, s in bnd.get(k, [])] for k in keys]
        self._build_infinity(keys, idx, to_inf, face_edges)

    def _push_off(self, p, i, s):
        """Move p off line i to side s without crossing any other line."""
        n = self.lines[i].normal
        t = Fraction(1)
        for j, ln in enumerate(self.lines):
            if j == i:
                continue
            v = ln.value(p)
            w = dot(ln.normal, n)
            if v != 0 and w != 0:
                t = min(t, abs(v) / (2 * abs(w)))
        return (p[0] + s * t * n[0], p[1] + s * t * n[1])

    def _build_infinity(self, keys, idx, to_inf, face_edges):
        N = len(keys)
        dirs = {u for inf in to_inf.values() for u, _ in inf}
        if not self.lines:
            dirs = {(Fraction(1), Fraction(0))}
        order = sort_by_angle(dirs)
        pid = {u: N + k for k, u in enumerate(order)}
        m = len(order)
        inf_cells = [Cell(pid[u], 0, (), u, False, True, u) for u in order]
        inf_bnd: list[list] = [[] for _ in order]
        face_arcs: dict[int, list] = {}
        for k, u in enumerate(order):
            v = order[(k + 1) % m]
            aid = N + m + k
            mid = arc_midpoint(u, v) if m > 1 else (-u[0], -u[1])
            fkey = tuple(sign(dot(ln.normal, mid)) for ln in self.lines)
            inf_cells.append(Cell(aid, 1, fkey, mid, False, True, mid))
            inf_bnd.append([] if m == 1 else [(pid[u], -1), (pid[v], 1)])
            face_arcs.setdefault(idx[fkey], []).append((aid, 1))
        self.infinity_cells = inf_cells
        self.infinity_boundary = inf_bnd
        self.boundary_to_infinity = {}
        for k, inf in to_inf.items():
            if inf:
                self.boundary_to_infinity[idx[k]] = [(pid[u], s) for u, s in inf]
        for f, arcs in face_arcs.items():
            self.boundary_to_infinity.setdefault(f, []).extend(arcs)
        self.arcs_of_face = {f: [a for a, _ in arcs] for f, arcs in face_arcs.items()}

    def recession_directions(self, c: int) -> list[Point]:
        """Directions spanning the recession cone of the closure of cell c (empty if bounded)."""
        out = []
        for f in self.down[c]:
            for g, _ in self.boundary_to_infinity.get(f, []):
                cell = self.infinity_cells[g - len(self.cells)]
                out.append(cell.direction)
        return out

    def vertices_of(self, c: int) -> list[Point]:
        return [self.cells[v].rep for v in self.down[c] if self.cells[v].dim == 0]

    def refine(self, extra: Iterable[Line]):
        """Arrangement with extra lines, and the map new cell id -> old cell id."""
        new = Arrangement2D(list(self.lines) + list(extra))
        pos = [new.lines.index(ln) for ln in self.lines]
        parent = [self._by_sign[tuple(c.signs[i] for i in pos)] for c in new.cells]
        return new, parent

    def counts(self) -> tuple[int, int, int]:
        return tuple(len(self.of_dim(k)) for k in range(3))

    def __repr__(self):
        V, E, F = self.counts()
        return f"Arrangement2D(lines={len(self.lines)}, V={V}, E={E}, F={F})"


class Arrangement1D(CellComplex):
    """Points and open intervals of the real line cut at finitely many breakpoints."""

    dimension = 1

    def __init__(self, breakpoints: Iterable = ()):
        bps = sorted({rat(b) for b in breakpoints})
        self.breakpoints: list[Fraction] = bps
        self._hyper_set = frozenset(bps)
        m = len(bps)
        raw = []  # (dim, rep, bounded, left point index, right point index)
        if m == 0:
            raw.append((1, Fraction(0), False, None, None))
        else:
            raw.append((1, bps[0] - 1, False, None, 0))
            for k in range(m):
                raw.append((0, bps[k], True, None, None))
                if k + 1 < m:
                    raw.append((1, (bps[k] + bps[k + 1]) / 2, True, k, k + 1))
            raw.append((1, bps[-1] + 1, False, m - 1, None))
        keyed = [(d, self.sign_vector((r,)), r, b, lo, hi) for d, r, b, lo, hi in raw]
        keyed.sort(key=lambda t: (t[0], t[1]))
        self.cells = [Cell(i, d, s, (r,), b) for i, (d, s, r, b, _, _) in enumerate(keyed)]
        by_sign = {c.signs: c.id for c in self.cells}
        point_id = {k: by_sign[self.sign_vector((bps[k],))] for k in range(m)}
        self.boundary = []
        self.boundary_to_infinity = {}
        N = len(self.cells)
        for i, (d, s, r, b, lo, hi) in enumerate(keyed):
            faces = []
            if d == 1:
                if lo is not None:
                    faces.append((point_id[lo], -1))
                if hi is not None:
                    faces.append((point_id[hi], 1))
                inf = []
                if m == 0 or lo is None and hi == 0:
                    inf.append((N, -1))
                if m == 0 or hi is None and lo == m - 1:
                    inf.append((N + 1, 1))
                if inf:
                    self.boundary_to_infinity[i] = inf
            self.boundary.append(faces)
        self.infinity_cells = [Cell(N, 0, (), (None,), False, True, (Fraction(-1),)),
                               Cell(N + 1, 0, (), (None,), False, True, (Fraction(1),))]
        self.infinity_boundary = [[], []]
        self._finish()

    @property
    def hyperplanes(self):
        return self.breakpoints

    def sign_vector(self, p) -> tuple:
        x = p[0]
        return tuple(sign(x - b) for b in self.breakpoints)

    def locate(self, p) -> int:
        if not isinstance(p, (tuple, list)):
            p = (p,)
        return super().locate(p)

    def refine(self, extra: Iterable):
        new = Arrangement1D(list(self.breakpoints) + [rat(b) for b in extra])
        pos = [new.breakpoints.index(b) for b in self.breakpoints]
        parent = [self._by_sign[tuple(c.signs[i] for i in pos)] for c in new.cells]
        return new, parent

    def cell_at(self, t) -> int:
        return self.locate((rat(t),))

    def __repr__(self):
        return f"Arrangement1D({[str(b) for b in self.breakpoints]})"


def build(lines: Iterable[Line]) -> Arrangement2D:
    return Arrangement2D(lines)


def arrangement_for(sets: Sequence[LCSet], dimension: int = 2, extra=()):
    hyp = [h for s in sets for h in s.hyperplanes()] + list(extra)
    return Arrangement2D(hyp) if dimension == 2 else Arrangement1D(hyp)
