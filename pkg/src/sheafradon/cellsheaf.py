"""Constructible sheaves on arrangements, modelled as cellular sheaves of complexes.

Each cell carries a local complex (its stalk) and each face relation c <= d a
generization chain map stalk(c) -> stalk(d).  Indicator sheaves k_Z[d] for
locally closed convex Z are the basic building blocks.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .barcode import Barcode, leftward_barcode, sample_points
from .exactlin import (ChainComplex, ChainMap, GradedDims, Mat, block, cohomology, cone, fiber,
                       nullspace, rank)
from .plgeom import (Arrangement1D, Arrangement2D, CellComplex, LCSet, Line, Pred, angle_cmp, arc_midpoint,
                     as_point, cross, dot, interval, perp, sort_by_angle)

# cone-convention degree = fiber degree + MICROSTALK_CONE_OFFSET
MICROSTALK_CONE_OFFSET = -1


class SheafError(ValueError):
    pass


@dataclass(frozen=True)
class IndicatorSpec:
    support: LCSet
    shift: int = 0
    mult: int = 1

    def __post_init__(self):
        if self.mult < 1:
            raise ValueError("multiplicity must be >= 1")


@dataclass(frozen=True)
class SheafSpec:
    indicators: tuple
    dimension: int = 2

    def __post_init__(self):
        if not self.indicators:
            raise ValueError("a sheaf spec needs at least one indicator")

    def __add__(self, other: "SheafSpec") -> "SheafSpec":
        return SheafSpec(self.indicators + other.indicators, self.dimension)

    def hyperplanes(self):
        return [h for ind in self.indicators for h in ind.support.hyperplanes()]


def indicator(support: LCSet, shift: int = 0, mult: int = 1, dimension: int = 2) -> SheafSpec:
    return SheafSpec((IndicatorSpec(support, shift, mult),), dimension)


class CellSheaf:
    """A cellular sheaf of complexes on an arrangement.

    ``gen(c, d)`` returns the generization map in every degree as ``{degree: Mat}``.
    Labelled sheaves (the compiled indicator sums) leave ``gen_fn`` empty: their
    stalk bases carry labels and generization is the identity on shared labels.
    """

    def __init__(self, base: CellComplex, stalks: Sequence[ChainComplex],
                 gen_fn: Callable[[int, int], dict] | None = None,
                 labels: Sequence[Mapping[int, tuple]] | None = None,
                 check: bool = False):
        if len(stalks) != len(base.cells):
            raise SheafError("one stalk per cell required")
        if gen_fn is None and labels is None:
            raise SheafError("need generization maps or basis labels")
        self.base = base
        self.stalks = list(stalks)
        self.labels = list(labels) if labels is not None else None
        self._gen_fn = gen_fn
        self._cache: dict[tuple[int, int], dict] = {}
        if check:
            self.check()

    def stalk(self, c: int) -> ChainComplex:
        return self.stalks[c]

    def gen(self, c: int, d: int) -> dict:
        if c == d:
            return {k: Mat.identity(n) for k, n in self.stalks[c].dims.items()}
        key = (c, d)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self._gen_fn is not None:
            m = self._gen_fn(c, d)
        else:
            m = {}
            lc, ld = self.labels[c], self.labels[d]
            for k, src in lc.items():
                tgt = ld.get(k)
                if not tgt:
                    continue
                pos = {lab: i for i, lab in enumerate(tgt)}
                data = {pos[lab]: {j: 1} for j, lab in enumerate(src) if lab in pos}
                if data:
                    m[k] = Mat(len(tgt), len(src), data)
        self._cache[key] = m
        return m

    def gen_at(self, c: int, d: int, k: int) -> Mat:
        m = self.gen(c, d).get(k)
        return m if m is not None else Mat.zeros(self.stalks[d].dim(k), self.stalks[c].dim(k))

    def check(self):
        """Verify chain-map and functoriality conditions exactly."""
        B = self.base
        for c in range(len(B.cells)):
            for d in B.up[c]:
                if d == c:
                    continue
                ChainMap(self.stalks[c], self.stalks[d], self.gen(c, d))
                for e in B.up[d]:
                    if e == d:
                        continue
                    for k in self.stalks[c].dims:
                        lhs = self.gen_at(d, e, k) @ self.gen_at(c, d, k)
                        if lhs != self.gen_at(c, e, k):
                            raise SheafError(f"functoriality fails on {c} <= {d} <= {e} in degree {k}")

    def stalk_dims(self, c: int) -> GradedDims:
        return cohomology(self.stalks[c])

    def support(self) -> frozenset:
        return frozenset(c for c in range(len(self.stalks)) if not cohomology(self.stalks[c]).is_zero())

    def pullback(self, new_base: CellComplex, parent: Sequence[int]) -> "CellSheaf":
        """Pull back along a refinement given by the map new cell -> old cell."""
        stalks = [self.stalks[p] for p in parent]
        if self.labels is not None and self._gen_fn is None:
            return CellSheaf(new_base, stalks, labels=[self.labels[p] for p in parent])
        old = self

        def g(c, d):
            pc, pd = parent[c], parent[d]
            if pc == pd:
                return {k: Mat.identity(n) for k, n in old.stalks[pc].dims.items()}
            return old.gen(pc, pd)

        return CellSheaf(new_base, stalks, gen_fn=g)

    def refine(self, extra) -> "CellSheaf":
        extra = [h for h in extra if h not in self.base._hyper_set]
        if not extra:
            return self
        new, parent = self.base.refine(extra)
        return self.pullback(new, parent)

    def __repr__(self):
        return f"CellSheaf(base={self.base!r}, support={len(self.support())} cells)"


def _empty_base(dimension: int) -> CellComplex:
    return Arrangement2D([]) if dimension == 2 else Arrangement1D([])


def compile_sheaf(spec: SheafSpec, base: CellComplex | None = None, extra=()) -> CellSheaf:
    """Formal direct sum of shifted indicator sheaves on one common arrangement."""
    hyps = spec.hyperplanes() + list(extra)
    if base is None:
        base = Arrangement2D(hyps) if spec.dimension == 2 else Arrangement1D(hyps)
    else:
        missing = [h for h in hyps if h not in base._hyper_set]
        if missing:
            base = base.refine(missing)[0]
    labels: list[dict[int, list]] = [dict() for _ in base.cells]
    for n, ind in enumerate(spec.indicators):
        ids = base.cells_in(ind.support)
        if not base.is_locally_closed(ids):
            raise SheafError(f"support of indicator {n} is not locally closed")
        deg = -ind.shift
        for c in ids:
            labels[c].setdefault(deg, []).extend((n, m) for m in range(ind.mult))
    labels = [{k: tuple(v) for k, v in lab.items()} for lab in labels]
    stalks = [ChainComplex({k: len(v) for k, v in lab.items()}) for lab in labels]
    return CellSheaf(base, stalks, labels=labels)


def constant_sheaf(dimension: int = 2) -> CellSheaf:
    return compile_sheaf(SheafSpec((IndicatorSpec(LCSet.everything()),), dimension))


def zero_sheaf(base: CellComplex) -> CellSheaf:
    return CellSheaf(base, [ChainComplex({}) for _ in base.cells], labels=[{} for _ in base.cells])


def common_refinement(*sheaves: CellSheaf) -> list[CellSheaf]:
    hyps = []
    for F in sheaves:
        hyps.extend(F.base.hyperplanes)
    return [F.refine(hyps) for F in sheaves]


def direct_sum(F: CellSheaf, G: CellSheaf) -> CellSheaf:
    F, G = common_refinement(F, G)
    base = F.base
    # rebuild G over F's base object so cell ids agree
    stalks = []
    for c in range(len(base.cells)):
        stalks.append(_sum_complex(F.stalks[c], G.stalks[c]))

    def g(c, d):
        out = {}
        for k in set(stalks[c].dims) | set(stalks[d].dims):
            m = block({(0, 0): F.gen_at(c, d, k), (1, 1): G.gen_at(c, d, k)},
                      [F.stalks[d].dim(k), G.stalks[d].dim(k)], [F.stalks[c].dim(k), G.stalks[c].dim(k)])
            if not m.is_zero():
                out[k] = m
        return out

    return CellSheaf(base, stalks, gen_fn=g)


def _sum_complex(A: ChainComplex, B: ChainComplex) -> ChainComplex:
    from .exactlin import direct_sum as ds
    return ds([A, B])


# ---------------------------------------------------------------------------
# total complexes

def _assemble(blocks, arrows):
    """Total complex of a diagram of local complexes.

    blocks: (key, shift, local complex, sign on internal differential)
    arrows: (source key, target key, coefficient, {degree: Mat}); target shift = source shift + 1.
    Returns (ChainComplex, index) with index[(key, j)] = (total degree, offset).
    """
    index: dict = {}
    dims: dict[int, int] = {}
    for key, shift, loc, _ in blocks:
        for j in sorted(loc.dims):
            deg = shift + j
            index[(key, j)] = (deg, dims.get(deg, 0))
            dims[deg] = dims.get(deg, 0) + loc.dims[j]
    data: dict[int, dict[int, dict[int, Fraction]]] = {}

    def put(deg, r0, c0, m: Mat, coeff):
        rows = data.setdefault(deg, {})
        for i, j, v in m.items():
            row = rows.setdefault(r0 + i, {})
            row[c0 + j] = row.get(c0 + j, 0) + coeff * v

    for key, shift, loc, s in blocks:
        for j, m in loc.d.items():
            src, tgt = index[(key, j)], index[(key, j + 1)]
            put(src[0], tgt[1], src[1], m, s)
    for a, b, coeff, maps in arrows:
        for j, m in maps.items():
            src, tgt = index.get((a, j)), index.get((b, j))
            if src is None or tgt is None:
                continue
            put(src[0], tgt[1], src[1], m, coeff)
    d = {deg: Mat(dims.get(deg + 1, 0), dims[deg], rows) for deg, rows in data.items()}
    return ChainComplex(dims, d, check=False), index


def compact_support_complex(F: CellSheaf, Z: Iterable[int]):
    """Cellular cochains of F extended by zero from Z, on the compactified complex."""
    B = F.base
    Z = sorted(set(Z))
    if not B.is_locally_closed(Z):
        raise SheafError("set is not locally closed")
    zs = set(Z)
    blocks = [(c, B.cells[c].dim, F.stalks[c], (-1) ** B.cells[c].dim) for c in Z]
    arrows = []
    for c in Z:
        for d, s in B.cofaces[c]:
            if d in zs:
                arrows.append((c, d, s, F.gen(c, d)))
    return _assemble(blocks, arrows)


def compact_cohomology(F: CellSheaf, Z: Iterable[int]) -> GradedDims:
    """Graded dimensions of RΓ_c(Z, F|_Z)."""
    return cohomology(compact_support_complex(F, Z)[0])


def _chains(B: CellComplex, U: Sequence[int]) -> list[tuple]:
    us = set(U)
    out = []
    frontier = [(c,) for c in sorted(us)]
    while frontier:
        out.extend(frontier)
        nxt = []
        for ch in frontier:
            last = ch[-1]
            for d in sorted(B.up[last] & us):
                if d != last:
                    nxt.append(ch + (d,))
        frontier = nxt
    return out


def sections_complex(F: CellSheaf, U: Iterable[int]):
    """Order-complex cochains computing RΓ(U, F) for an open cell set U."""
    B = F.base
    U = sorted(set(U))
    if not B.is_open(U):
        raise SheafError("cell set is not open")
    chains = _chains(B, U)
    blocks = [(ch, len(ch) - 1, F.stalks[ch[-1]], (-1) ** (len(ch) - 1)) for ch in chains]
    present = set(chains)
    arrows = []
    for tau in chains:
        n1 = len(tau) - 1
        if n1 == 0:
            continue
        for j in range(n1):
            sigma = tau[:j] + tau[j + 1:]
            if sigma in present:
                idm = {k: Mat.identity(n) for k, n in F.stalks[tau[-1]].dims.items()}
                arrows.append((sigma, tau, (-1) ** j, idm))
        arrows.append((tau[:-1], tau, (-1) ** n1, F.gen(tau[-2], tau[-1])))
    return _assemble(blocks, arrows)


def sections(F: CellSheaf, U: Iterable[int]) -> GradedDims:
    return cohomology(sections_complex(F, U)[0])


def stalk_at(F: CellSheaf, p) -> GradedDims:
    if F.base.dimension == 1 and not isinstance(p, (tuple, list)):
        p = (p,)
    return F.stalk_dims(F.base.locate(p))


# ---------------------------------------------------------------------------
# microstalks

def _fan(F: CellSheaf, p, xi, aux=None):
    """Pull F back to the local fan at p cut by {xi.(y-p) = 0} and one transverse line."""
    B = F.base
    p = as_point(p)
    xi = as_point(xi)
    if all(x == 0 for x in xi):
        raise SheafError("covector must be nonzero")
    if B.dimension == 1:
        fan = Arrangement1D([p[0]])
        rays = {c.id: ((c.rep[0] - p[0]),) for c in fan.cells}
        eps = Fraction(1)
        for b in B.breakpoints:
            if b != p[0]:
                eps = min(eps, abs(b - p[0]) / 2)
    else:
        through = [ln for ln in B.lines if ln.value(p) == 0]
        phi_line = Line(xi[0], xi[1], dot(xi, p))
        a = aux if aux is not None else perp(xi)
        aux_line = Line(a[0], a[1], dot(a, p))
        if aux_line.parallel(phi_line):
            raise SheafError("auxiliary line must be transverse to the test line")
        fan = Arrangement2D(through + [phi_line, aux_line])
        rays = {c.id: (c.rep[0] - p[0], c.rep[1] - p[1]) for c in fan.cells}
        eps = None
    glob = []
    for c in fan.cells:
        u = rays[c.id]
        if all(x == 0 for x in u):
            glob.append(B.locate(p))
            continue
        if B.dimension == 1:
            e = eps / abs(u[0])
        else:
            e = Fraction(1)
            for ln in B.lines:
                v = ln.value(p)
                w = dot(ln.normal, u)
                if v != 0 and w != 0:
                    e = min(e, abs(v) / (2 * abs(w)))
        glob.append(B.locate(tuple(p[i] + e * u[i] for i in range(len(p)))))
    G = F.pullback(fan, glob)
    minus = [c.id for c in fan.cells if dot(xi, rays[c.id]) < 0]
    vertex = fan.locate(p)
    return G, vertex, minus


def microstalk_complex(F: CellSheaf, p, xi, aux=None) -> ChainComplex:
    G, v, minus = _fan(F, p, xi, aux)
    src = G.stalks[v]
    tgt, index = sections_complex(G, minus)
    f: dict[int, dict] = {}
    for c in minus:
        for k, m in G.gen(v, c).items():
            deg, off = index[((c,), k)]
            rows = f.setdefault(k, {})
            for i, j, x in m.items():
                rows.setdefault(off + i, {})[j] = x
    fm = {k: Mat(tgt.dim(k), src.dim(k), rows) for k, rows in f.items()}
    return fiber(ChainMap(src, tgt, fm, check=False))


def microstalk(F: CellSheaf, p, xi, aux=None) -> GradedDims:
    """Fiber of F(p) -> RΓ(B ∩ {xi.(y - p) < 0}, F) over a small star B of p.

    Degrees follow the fiber convention; add MICROSTALK_CONE_OFFSET for the
    cone-based convention.
    """
    if F.base.dimension == 1 and not isinstance(p, (tuple, list)):
        p = (p,)
    if F.base.dimension == 1 and not isinstance(xi, (tuple, list)):
        xi = (xi,)
    return cohomology(microstalk_complex(F, p, xi, aux))


@dataclass(frozen=True)
class Sector:
    """Either the open ray {t u : t > 0} or the open counterclockwise arc strictly between u and v."""

    kind: str
    u: tuple
    v: tuple | None = None

    def contains(self, w) -> bool:
        if self.kind == "ray":
            if len(self.u) == 1:
                return w[0] * self.u[0] > 0
            return cross(self.u, w) == 0 and dot(self.u, w) > 0
        a, b = self.u, self.v
        if angle_cmp(a, b) == 0:  # whole circle minus a
            return not (cross(a, w) == 0 and dot(a, w) > 0)
        if cross(a, w) == 0 and dot(a, w) > 0 or cross(b, w) == 0 and dot(b, w) > 0:
            return False
        # w strictly inside ccw arc a -> b
        ab = cross(a, b)
        if ab > 0:
            return cross(a, w) > 0 and cross(w, b) > 0
        if ab < 0:
            return cross(a, w) > 0 or cross(w, b) > 0
        return cross(a, w) > 0  # antipodal: left half-plane of a

    def sample(self):
        if self.kind == "ray":
            return self.u
        return arc_midpoint(self.u, self.v)

    def to_json(self) -> dict:
        from .exactlin import fmt_rat
        d = {"kind": self.kind, "u": [fmt_rat(x) for x in self.u]}
        if self.v is not None:
            d["v"] = [fmt_rat(x) for x in self.v]
        return d


@dataclass(frozen=True)
class SSEntry:
    cell: int
    sector: Sector
    covector: tuple
    microstalk: GradedDims


@dataclass
class SSReport:
    entries: list[SSEntry] = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def is_empty(self) -> bool:
        return not self.entries

    def at(self, cell: int) -> list[SSEntry]:
        return [e for e in self.entries if e.cell == cell]

    def cells(self) -> set[int]:
        return {e.cell for e in self.entries}

    def covers(self, cell: int, w) -> bool:
        return any(e.sector.contains(w) for e in self.at(cell))

    def has_negative(self) -> bool:
        """True if some (1D) entry has a negative covector."""
        return any(e.covector[0] < 0 for e in self.entries)


def direction_sectors(normals: Iterable) -> list[Sector]:
    """Rays at +-normals and the open arcs between them, in angular order."""
    dirs = {}
    for n in normals:
        for s in (1, -1):
            u = (s * n[0], s * n[1])
            key = _prim(u)
            dirs[key] = u
    if not dirs:
        return [Sector("arc", (Fraction(1), Fraction(0)), (Fraction(1), Fraction(0)))]
    order = sort_by_angle(dirs.values())
    out = []
    for k, u in enumerate(order):
        out.append(Sector("ray", u))
        out.append(Sector("arc", u, order[(k + 1) % len(order)]))
    return out


def _prim(u):
    from .plgeom import canonical_direction
    return canonical_direction(u)


def singular_support(F: CellSheaf, cells: Iterable[int] | None = None) -> SSReport:
    """Nonzero microstalks at one covector per sector cut by the normals of lines through each cell."""
    B = F.base
    report = SSReport()
    cells = range(len(B.cells)) if cells is None else cells
    for c in cells:
        cell = B.cells[c]
        p = cell.rep
        if B.dimension == 1:
            sectors = [Sector("ray", (Fraction(1),)), Sector("ray", (Fraction(-1),))]
        else:
            sectors = direction_sectors([ln.normal for ln in B.lines if ln.value(p) == 0])
        for sec in sectors:
            w = sec.sample()
            m = microstalk(F, p, w)
            if not m.is_zero():
                report.entries.append(SSEntry(c, sec, tuple(w), m))
    return report


# ---------------------------------------------------------------------------
# morphisms and cones

def _as_maps(f) -> dict:
    return {k: m for k, m in (f.f.items() if isinstance(f, ChainMap) else f.items())}


def check_morphism(F: CellSheaf, G: CellSheaf, f: Mapping[int, Mapping[int, Mat]]):
    B = F.base
    for c in range(len(B.cells)):
        fc = f.get(c, {})
        ChainMap(F.stalks[c], G.stalks[c], fc)  # validates shapes and chain condition
        for d in B.up[c]:
            if d == c:
                continue
            fd = f.get(d, {})
            for k in set(F.stalks[c].dims) | set(G.stalks[d].dims):
                lhs = _at(fd, k, G.stalks[d].dim(k), F.stalks[d].dim(k)) @ F.gen_at(c, d, k)
                rhs = G.gen_at(c, d, k) @ _at(fc, k, G.stalks[c].dim(k), F.stalks[c].dim(k))
                if lhs != rhs:
                    raise SheafError(f"morphism is not natural on {c} <= {d} in degree {k}")


def _at(fc, k, rows, cols) -> Mat:
    m = fc.get(k)
    return m if m is not None else Mat.zeros(rows, cols)


def cone_of(F: CellSheaf, G: CellSheaf, f: Mapping[int, Mapping[int, Mat]], check: bool = True) -> CellSheaf:
    """Cellwise mapping cone of a morphism f: F -> G on a common base."""
    if F.base is not G.base:
        raise SheafError("morphism endpoints must share a base arrangement")
    if check:
        check_morphism(F, G, f)
    B = F.base
    stalks = []
    for c in range(len(B.cells)):
        stalks.append(cone(ChainMap(F.stalks[c], G.stalks[c], f.get(c, {}), check=False)))

    def g(c, d):
        out = {}
        for k in stalks[c].dims:
            m = block({(0, 0): F.gen_at(c, d, k + 1), (1, 1): G.gen_at(c, d, k)},
                      [F.stalks[d].dim(k + 1), G.stalks[d].dim(k)],
                      [F.stalks[c].dim(k + 1), G.stalks[c].dim(k)])
            if not m.is_zero():
                out[k] = m
        return out

    return CellSheaf(B, stalks, gen_fn=g)


def identity_morphism(F: CellSheaf) -> dict:
    return {c: {k: Mat.identity(n) for k, n in F.stalks[c].dims.items()} for c in range(len(F.stalks))}


def morphism_space(F: CellSheaf, G: CellSheaf) -> list[dict]:
    """Basis of degree-preserving morphisms F -> G (natural, commuting with differentials)."""
    if F.base is not G.base:
        raise SheafError("morphism endpoints must share a base arrangement")
    B = F.base
    var = {}
    nvar = 0
    for c in range(len(B.cells)):
        for k in F.stalks[c].dims:
            r, s = G.stalks[c].dim(k), F.stalks[c].dim(k)
            for i in range(r):
                for j in range(s):
                    var[(c, k, i, j)] = nvar
                    nvar += 1
    eqs: list[dict[int, Fraction]] = []

    def emit(coeffs: dict):
        coeffs = {v: x for v, x in coeffs.items() if x}
        if coeffs:
            eqs.append(coeffs)

    for c in range(len(B.cells)):
        for d, _ in B.cofaces[c]:
            for k in F.stalks[c].dims:
                gf = F.gen_at(c, d, k)
                gg = G.gen_at(c, d, k)
                for i in range(G.stalks[d].dim(k)):
                    for j in range(F.stalks[c].dim(k)):
                        # (f_d gF)_{ij} - (gG f_c)_{ij} = 0
                        eq: dict[int, Fraction] = {}
                        for l, v in gf.transpose().row(j).items():
                            key = (d, k, i, l)
                            if key in var:
                                eq[var[key]] = eq.get(var[key], 0) + v
                        for l, v in gg.row(i).items():
                            key = (c, k, l, j)
                            if key in var:
                                eq[var[key]] = eq.get(var[key], 0) - v
                        emit(eq)
        # chain condition inside the cell
        Fc, Gc = F.stalks[c], G.stalks[c]
        for k in set(Fc.dims) | set(Gc.dims):
            dF, dG = Fc.diff(k), Gc.diff(k)
            for i in range(Gc.dim(k + 1)):
                for j in range(Fc.dim(k)):
                    eq = {}
                    for l, v in dF.transpose().row(j).items():
                        key = (c, k + 1, i, l)
                        if key in var:
                            eq[var[key]] = eq.get(var[key], 0) + v
                    for l, v in dG.row(i).items():
                        key = (c, k, l, j)
                        if key in var:
                            eq[var[key]] = eq.get(var[key], 0) - v
                    emit(eq)
    M = Mat(len(eqs), nvar, {i: e for i, e in enumerate(eqs)})
    basis = nullspace(M)
    out = []
    for vec in basis:
        f: dict[int, dict[int, dict]] = {}
        for (c, k, i, j), v in var.items():
            x = vec.get(v)
            if x:
                f.setdefault(c, {}).setdefault(k, {}).setdefault(i, {})[j] = x
        out.append({c: {k: Mat(G.stalks[c].dim(k), F.stalks[c].dim(k), rows) for k, rows in fk.items()}
                    for c, fk in f.items()})
    return out


def random_morphism(F: CellSheaf, G: CellSheaf, rng: random.Random, lo: int = -2, hi: int = 2) -> dict:
    basis = morphism_space(F, G)
    out: dict[int, dict[int, Mat]] = {}
    for b in basis:
        coef = rng.randint(lo, hi)
        if not coef:
            continue
        for c, fk in b.items():
            for k, m in fk.items():
                cur = out.setdefault(c, {}).get(k)
                out[c][k] = m.scale(coef) if cur is None else cur + m.scale(coef)
    return out


# ---------------------------------------------------------------------------
# the projector on the line

@dataclass
class ProjectionResult:
    sheaf: CellSheaf
    barcode: Barcode
    table: list  # (t, GradedDims) at the samples


def sublevel_barcode(F: CellSheaf, walls: Sequence[Fraction], sublevel: Callable[[Fraction], LCSet],
                     level_hyper: Callable[[Fraction], object]) -> tuple[Barcode, list]:
    """Barcode of t -> RΓ_c(sublevel(t), F) sampled at walls and chamber midpoints."""
    samples = sample_points(walls)
    G = F.refine([level_hyper(t) for t, _ in samples])
    B = G.base
    Zs = [B.cells_in(sublevel(t)) for t, _ in samples]
    built = [compact_support_complex(G, Z) for Z in Zs]
    complexes = [b[0] for b in built]

    def restrict(i, j):
        Ci, ii = built[i]
        Cj, ij = built[j]
        data: dict[int, dict] = {}
        for key, (deg, off) in ii.items():
            c, k = key
            deg2, off2 = ij[key]
            rows = data.setdefault(deg, {})
            for a in range(G.stalks[c].dim(k)):
                rows[off + a] = {off2 + a: 1}
        f = {deg: Mat(Ci.dim(deg), Cj.dim(deg), rows) for deg, rows in data.items()}
        return ChainMap(Cj, Ci, f, check=False)

    bc = leftward_barcode(samples, complexes, restrict)
    table = [(t, cohomology(c)) for (t, _), c in zip(samples, complexes)]
    return bc, table


def barcode_sheaf(bc: Barcode) -> CellSheaf:
    """Direct sum of interval sheaves k_I[-degree] on the line."""
    inds = []
    for b in bc:
        s = interval(b.birth, b.death, b.birth_closed, b.death_closed)
        inds.append(IndicatorSpec(s, -b.degree, b.mult))
    if not inds:
        base = Arrangement1D(bc.endpoints())
        return zero_sheaf(base)
    return compile_sheaf(SheafSpec(tuple(inds), 1))


def tamarkin_project(F: CellSheaf, strict: bool = True) -> ProjectionResult:
    """P(F)_t = RΓ_c((-inf, t], F), reassembled as a sum of interval sheaves.

    Support unbounded below is always rejected; with ``strict`` the support must
    be bounded on both sides.
    """
    B = F.base
    if B.dimension != 1:
        raise SheafError("the projector is implemented on the line only")
    supp = F.support()
    for c in supp:
        cell = B.cells[c]
        if not cell.bounded:
            left = cell.rep[0] < (B.breakpoints[0] if B.breakpoints else 1)
            if left or not B.breakpoints or strict:
                raise SheafError("support of F must be bounded" if strict else "support of F must be bounded below")
    bc, table = sublevel_barcode(F, B.breakpoints, lambda t: interval(hi=t), lambda t: t)
    return ProjectionResult(barcode_sheaf(bc), bc, table)


def stalk_table(F: CellSheaf, points: Iterable) -> list[GradedDims]:
    return [stalk_at(F, (Fraction(t),)) for t in points]
