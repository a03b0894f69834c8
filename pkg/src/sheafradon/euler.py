"""Euler calculus on planar arrangements and on the circle.

Constructible functions are integer-valued on the cells of an arrangement.
Integration is against the compactly supported Euler characteristic: an open
k-cell has chi_c = (-1)^k, bounded or not.
"""
from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .cellsheaf import CellSheaf, Sector
from .exactlin import fmt_rat, rat
from .plgeom import Arrangement2D, Line, angle_cmp, arc_midpoint, cross, dot, perp, sort_by_angle
from .radon import LineQuery


class NonConstructible(ValueError):
    pass


@dataclass
class CFun:
    base: Arrangement2D
    values: list  # one integer per affine cell

    def __post_init__(self):
        if len(self.values) != len(self.base.cells):
            raise ValueError("one value per cell required")
        self.values = [int(v) for v in self.values]

    def __call__(self, p) -> int:
        return self.values[self.base.locate(p)]

    def __add__(self, other: "CFun") -> "CFun":
        a, b = _common(self, other)
        return CFun(a.base, [x + y for x, y in zip(a.values, b.values)])

    def scale(self, k: int) -> "CFun":
        return CFun(self.base, [k * v for v in self.values])

    def support(self) -> list[int]:
        return [c for c, v in enumerate(self.values) if v]

    def is_compactly_supported(self) -> bool:
        return all(self.base.cells[c].bounded for c in self.support())

    def refine(self, extra: Iterable[Line]) -> "CFun":
        extra = [ln for ln in extra if ln not in self.base._hyper_set]
        if not extra:
            return self
        new, parent = self.base.refine(extra)
        return CFun(new, [self.values[p] for p in parent])

    @classmethod
    def indicator(cls, base: Arrangement2D, cells: Iterable[int], value: int = 1) -> "CFun":
        vals = [0] * len(base.cells)
        for c in cells:
            vals[c] += value
        return cls(base, vals)

    @classmethod
    def zero(cls, base: Arrangement2D | None = None) -> "CFun":
        base = base or Arrangement2D([])
        return cls(base, [0] * len(base.cells))


def _common(f: CFun, g: CFun) -> tuple[CFun, CFun]:
    hyps = list(f.base.lines) + list(g.base.lines)
    return f.refine(hyps), g.refine(hyps)


def local_euler(F: CellSheaf) -> CFun:
    """c -> sum_k (-1)^k dim F_c^k."""
    return CFun(F.base, [F.stalk_dims(c).euler for c in range(len(F.base.cells))])


def euler_integral(phi: CFun) -> int:
    return sum(v * (-1) ** phi.base.cells[c].dim for c, v in enumerate(phi.values) if v)


# ---------------------------------------------------------------------------
# the transform

INF = None  # sup of a linear function on an unbounded-above cell


class _CellData:
    __slots__ = ("weight", "points", "rec", "whole")

    def __init__(self, weight, points, rec, whole):
        self.weight = weight
        self.points = points
        self.rec = rec
        self.whole = whole

    def sup(self, n):
        """sup of n . x over the cell, or INF."""
        if self.whole:
            return INF
        for u in self.rec:
            if n[0] * u[0] + n[1] * u[1] > 0:
                return INF
        return max(n[0] * p[0] + n[1] * p[1] for p in self.points)


def _lcm_denominator(points) -> int:
    D = 1
    for p in points:
        for v in p:
            d = Fraction(v).denominator
            D = D * d // math.gcd(D, d)
    return D


def _split_direction(n) -> tuple[tuple, Fraction]:
    """n = s * m with m a primitive integer vector and s > 0."""
    m = _primitive(n)
    k = 0 if m[0] else 1
    return m, Fraction(n[k]) / m[k]


class EulerRadonTransform:
    """R phi (n, c) = integral of phi over {x . n <= c}, for any nonzero rational n.

    For an open cell s and a closed half-plane H, chi_c(s ∩ H) is (-1)^dim s if
    sup_s(n . x) <= c and 0 otherwise (a proper cut leaves an open cell and its
    open facet, which cancel).  So R phi (n, .) is a step function of c with
    steps at the finite sups.

    Internally the plane is dilated by the common denominator D of the cell
    representatives so all sups are integers.
    """

    def __init__(self, phi: CFun):
        self.phi = phi
        B = phi.base
        self.D = D = _lcm_denominator(c.rep for c in B.cells)
        whole = not B.lines
        self.cells: list[_CellData] = []
        for c, v in enumerate(phi.values):
            if not v:
                continue
            pts = {(int(B.cells[d].rep[0] * D), int(B.cells[d].rep[1] * D)) for d in B.down[c]}
            rec = {_primitive(u) for u in B.recession_directions(c)}
            self.cells.append(_CellData(v * (-1) ** B.cells[c].dim, sorted(pts), sorted(rec), whole))
        self._cache: dict = {}

    def profile(self, m) -> tuple[list, list]:
        """Sorted finite sups (dilated units) for an integer direction m, and prefix sums of weights."""
        key = (m[0], m[1])
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        pairs = []
        for cd in self.cells:
            s = cd.sup(m)
            if s is not INF:
                pairs.append((s, cd.weight))
        pairs.sort(key=lambda t: t[0])
        ms = [s for s, _ in pairs]
        pref = [0]
        for _, w in pairs:
            pref.append(pref[-1] + w)
        out = (ms, pref)
        if len(self._cache) > 4096:
            self._cache.clear()
        self._cache[key] = out
        return out

    # dilated coordinates, integer directions
    def scaled_value(self, m, C) -> int:
        ms, pref = self.profile(m)
        return pref[bisect.bisect_right(ms, C)]

    def scaled_walls(self, m) -> list:
        return sorted(set(self.profile(m)[0]))

    def scaled_breakpoints(self, X) -> list:
        out = []
        for cd in self.cells:
            for p in cd.points:
                d = (p[0] - X[0], p[1] - X[1])
                if d != (0, 0):
                    out.append((-d[1], d[0]))
            for u in cd.rec:
                out.append((-u[1], u[0]))
        return out

    # original coordinates
    def __call__(self, n, c) -> int:
        m, s = _split_direction(n)
        return self.scaled_value(m, Fraction(c) * self.D / s)

    def walls(self, n) -> list:
        m, s = _split_direction(n)
        return [Fraction(w) * s / self.D for w in self.scaled_walls(m)]

    def direction_breakpoints(self, x) -> list:
        """Directions where c -> R phi(n, c) can change relative to x . n."""
        X = (Fraction(x[0]) * self.D, Fraction(x[1]) * self.D)
        return self.scaled_breakpoints(X)

    def at_query(self, q: LineQuery) -> int:
        """Exact value at r |nhat| even when |nhat| is irrational."""
        c = q.offset()
        if c is not None:
            return self(q.nhat, c)
        m, s = _split_direction(q.nhat)
        ms, pref = self.profile(m)
        k = 0
        while k < len(ms) and q.cmp_offset(Fraction(ms[k]) * s / self.D) >= 0:
            k += 1
        return pref[k]


def euler_radon(phi: CFun, q: LineQuery) -> int:
    return EulerRadonTransform(phi).at_query(q)


# ---------------------------------------------------------------------------
# the dual transform by Fubini

def _primitive(u) -> tuple:
    """Positive integer multiple of a rational direction, divided by the gcd."""
    a, b = Fraction(u[0]), Fraction(u[1])
    L = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    ia, ib = int(a * L), int(b * L)
    g = math.gcd(ia, ib)
    return (ia // g, ib // g)


def circle_cells(directions: Iterable) -> tuple[list, list]:
    """Distinct breakpoint directions in angular order and one sample per open arc between them."""
    pts = {}
    for u in directions:
        if u[0] or u[1]:
            for s in (1, -1):
                v = _primitive((s * u[0], s * u[1]))
                pts[v] = v
    if not pts:
        pts = {(1, 0): (1, 0)}
    order = sort_by_angle(pts.values())
    m = len(order)
    mids = [arc_midpoint(order[k], order[(k + 1) % m]) for k in range(m)]
    return order, mids


def line_integral_below(psi: Callable, n, a, walls: Sequence) -> int:
    """∫_{(-inf, a]} psi(n, .) dchi_c, checking constancy on every open chamber with two samples."""
    pts = sorted({w for w in walls if w < a} | {a})
    total = 0
    lo = pts[0] - 1
    if psi(n, lo) != 0 or psi(n, lo - 1) != 0:
        raise NonConstructible("not compactly supported in r")
    for k, p in enumerate(pts):
        total += psi(n, p)
        if k + 1 < len(pts):
            q = pts[k + 1]
            s1 = psi(n, (2 * p + q) / 3)
            s2 = psi(n, (p + 2 * q) / 3)
            if s1 != s2:
                raise NonConstructible(f"psi not constant between walls {p} and {q} in direction {n}")
            total -= s1
    return total


def euler_radon_dual(psi: Callable, x, breakpoints: Iterable, walls: Callable, check_arcs: bool = False) -> int:
    """R' psi(x) = ∫ 1_{x . n >= r} psi dchi_c over the cylinder.

    ``psi(n, c)`` is evaluated at offset c for direction n; ``walls(n)`` lists the
    offsets where psi(n, .) may jump and ``breakpoints`` the directions where the
    fiber integral may jump.  Both are supplied symbolically by the caller.
    """
    x = tuple(v if isinstance(v, int) else rat(v) for v in x)
    order, mids = circle_cells(breakpoints)

    def fiber(n):
        return line_integral_below(psi, n, x[0] * n[0] + x[1] * n[1], walls(n))

    total = 0
    for k, u in enumerate(order):
        total += fiber(u)
        g = fiber(mids[k])
        if check_arcs:
            v = order[(k + 1) % len(order)]
            for w in (arc_midpoint(u, mids[k]), arc_midpoint(mids[k], v)):
                if fiber(w) != g:
                    raise NonConstructible(f"fiber integral not constant on the arc after {u}")
        total -= g
    return total


def dual_of_transform(R: EulerRadonTransform, x, check_arcs: bool = False) -> int:
    """R' (R phi)(x), with breakpoints and walls read off the geometry of phi.

    Evaluated in the dilated plane; the composite is invariant under dilation.
    """
    X = (Fraction(x[0]) * R.D, Fraction(x[1]) * R.D)
    if X[0].denominator == 1 and X[1].denominator == 1:
        X = (int(X[0]), int(X[1]))
        return euler_radon_dual(R.scaled_value, X, R.scaled_breakpoints(X), R.scaled_walls, check_arcs)
    return euler_radon_dual(R, x, R.direction_breakpoints(x), R.walls, check_arcs)


# ---------------------------------------------------------------------------
# inversion

@dataclass(frozen=True)
class KernelConstants:
    off_diagonal: int
    diagonal: int

    @property
    def denominator(self) -> int:
        return self.off_diagonal - self.diagonal


_KERNEL: KernelConstants | None = None


def derive_kernel_constants() -> KernelConstants:
    """Composed-kernel values from the engine: R'R of a point mass, off and on its support."""
    global _KERNEL
    if _KERNEL is None:
        B = Arrangement2D([Line(1, 0, 0), Line(0, 1, 0)])
        origin = B.locate((0, 0))
        R = EulerRadonTransform(CFun.indicator(B, [origin]))
        offs = {dual_of_transform(R, p, check_arcs=True) for p in ((1, 0), (3, -2), (-1, 5), (Fraction(1, 7), 0))}
        if len(offs) != 1:
            raise ArithmeticError(f"off-diagonal kernel is not constant: {offs}")
        diag = dual_of_transform(R, (0, 0), check_arcs=True)
        _KERNEL = KernelConstants(offs.pop(), diag)
        if _KERNEL.denominator == 0:
            raise ArithmeticError("composed kernel is not invertible")
    return _KERNEL


@dataclass
class InversionReport:
    passed: bool
    checked: int
    witness: dict | None = None
    constants: KernelConstants | None = None

    def to_json(self) -> dict:
        d = {"pass": self.passed, "checked": self.checked}
        if self.constants:
            d["kernel"] = {"offDiagonal": self.constants.off_diagonal, "diagonal": self.constants.diagonal}
        if self.witness:
            d["witness"] = self.witness
        return d


def sample_points(base: Arrangement2D) -> list:
    """One rational point per affine cell."""
    return [c.rep for c in base.cells]


def inversion_check(phi: CFun, check_arcs: bool = False) -> InversionReport:
    """phi(y) = (K_off ∫phi - R'R phi(y)) / (K_off - K_diag) at one point per cell."""
    if not phi.is_compactly_supported():
        raise ValueError("phi must be compactly supported")
    K = derive_kernel_constants()
    R = EulerRadonTransform(phi)
    I = euler_integral(phi)
    n = 0
    for c, y in enumerate(sample_points(phi.base)):
        n += 1
        rr = dual_of_transform(R, y, check_arcs)
        lhs = Fraction(K.off_diagonal * I - rr, K.denominator)
        if lhs != phi.values[c]:
            return InversionReport(False, n, {"cell": c, "point": [fmt_rat(v) for v in y], "phi": phi.values[c],
                                              "recovered": fmt_rat(lhs), "dual": rr, "integral": I}, K)
    return InversionReport(True, n, None, K)


def random_arrangement(rng: random.Random, max_lines: int = 6, coeff: int = 3) -> Arrangement2D:
    k = rng.randint(2, max_lines)
    lines = set()
    while len(lines) < k:
        a, b = rng.randint(-coeff, coeff), rng.randint(-coeff, coeff)
        if a == 0 and b == 0:
            continue
        lines.add(Line(a, b, rng.randint(-coeff, coeff)))
    return Arrangement2D(sorted(lines))


def random_cfun(rng: random.Random, max_lines: int = 6, lo: int = -3, hi: int = 3) -> CFun:
    """Random compactly supported function: random values on bounded cells, zero elsewhere."""
    for _ in range(100):
        B = random_arrangement(rng, max_lines)
        bounded = [c.id for c in B.cells if c.bounded]
        if bounded:
            break
    vals = [0] * len(B.cells)
    for c in bounded:
        vals[c] = rng.randint(lo, hi)
    return CFun(B, vals)


# ---------------------------------------------------------------------------
# the circle model

def _unit(u) -> bool:
    return dot(u, u) == 1


@dataclass
class CFunCircle:
    """Constructible function on S^1: values on rational unit points and on the open arcs after each."""

    points: tuple
    point_values: tuple
    arc_values: tuple
    whole: int = 0  # value when there are no breakpoints

    def __post_init__(self):
        pts = [tuple(rat(v) for v in p) for p in self.points]
        if any(not _unit(p) for p in pts):
            raise ValueError("breakpoints must be rational unit vectors")
        if len({p for p in pts}) != len(pts):
            raise ValueError("breakpoints must be distinct")
        perm = sorted(range(len(pts)), key=lambda k: _angle_key(pts[k]))
        if perm != list(range(len(pts))):
            raise ValueError("breakpoints must be given in counterclockwise order from angle 0")
        if len(self.point_values) != len(pts) or len(self.arc_values) != len(pts):
            raise ValueError("one value per point and per arc required")
        object.__setattr__(self, "points", tuple(pts))

    @classmethod
    def build(cls, values: dict, arcs: dict | None = None, whole: int = 0) -> "CFunCircle":
        """From {point: value} and {point: value on the arc after it}."""
        arcs = arcs or {}
        pts = sort_by_angle({tuple(rat(v) for v in p) for p in list(values) + list(arcs)})
        vals = {tuple(rat(v) for v in p): x for p, x in values.items()}
        avals = {tuple(rat(v) for v in p): x for p, x in arcs.items()}
        return cls(tuple(pts), tuple(vals.get(p, 0) for p in pts), tuple(avals.get(p, 0) for p in pts), whole)

    @classmethod
    def constant(cls, value: int) -> "CFunCircle":
        return cls((), (), (), value)

    def arc_sectors(self) -> list[Sector]:
        m = len(self.points)
        return [Sector("arc", self.points[k], self.points[(k + 1) % m]) for k in range(m)]

    def __call__(self, y) -> int:
        """Value at the direction of a nonzero vector y."""
        y = tuple(rat(v) for v in y)
        if not self.points:
            return self.whole
        for p, v in zip(self.points, self.point_values):
            if cross(p, y) == 0 and dot(p, y) > 0:
                return v
        for sec, v in zip(self.arc_sectors(), self.arc_values):
            if sec.contains(y):
                return v
        raise AssertionError("direction not located")

    def samples(self) -> list:
        """A point on every cell."""
        if not self.points:
            return [(Fraction(1), Fraction(0))]
        m = len(self.points)
        return list(self.points) + [arc_midpoint(self.points[k], self.points[(k + 1) % m]) for k in range(m)]

    def integral(self) -> int:
        if not self.points:
            return 0
        return sum(self.point_values) - sum(self.arc_values)

    def to_json(self) -> dict:
        return {"points": [[fmt_rat(v) for v in p] for p in self.points], "pointValues": list(self.point_values),
                "arcValues": list(self.arc_values), "whole": self.whole}


def _angle_key(p):
    from .plgeom import angle_key
    return angle_key(p)


def tabulate(fn: Callable, breakpoints: Iterable) -> CFunCircle:
    """CFunCircle of a function of direction that is constant off the given unit breakpoints."""
    pts = sort_by_angle({tuple(p) for p in breakpoints})
    if not pts:
        return CFunCircle.constant(fn((Fraction(1), Fraction(0))))
    m = len(pts)
    pv = tuple(fn(p) for p in pts)
    av = tuple(fn(arc_midpoint(pts[k], pts[(k + 1) % m])) for k in range(m))
    return CFunCircle(tuple(pts), pv, av)


def _half_integral(phi: CFunCircle, y, mode: str) -> int:
    """∫ over {x : x.y >= 0}, {x.y <= 0} or {x.y = 0} of phi dchi_c."""
    y = tuple(rat(v) for v in y)
    cuts = [perp(y), (-perp(y)[0], -perp(y)[1])]
    # refine the circle by the two cut directions; cells of the refinement are points and arcs
    dirs = sort_by_angle({_primitive(p) for p in phi.points} | {_primitive(c) for c in cuts})
    m = len(dirs)
    keep = {"plus": lambda s: s >= 0, "minus": lambda s: s <= 0, "zero": lambda s: s == 0}[mode]
    total = 0
    for k, u in enumerate(dirs):
        if keep(dot(u, y)):
            total += phi(u)
        mid = arc_midpoint(u, dirs[(k + 1) % m])
        if keep(dot(mid, y)):
            total -= phi(mid)
    return total


def r_plus(phi: CFunCircle) -> CFunCircle:
    return tabulate(lambda y: _half_integral(phi, y, "plus"), _dual_breaks(phi))


def r_minus(phi: CFunCircle) -> CFunCircle:
    return tabulate(lambda y: _half_integral(phi, y, "minus"), _dual_breaks(phi))


def r_proj(phi: CFunCircle) -> CFunCircle:
    return tabulate(lambda y: _half_integral(phi, y, "zero"), _dual_breaks(phi))


def _dual_breaks(phi: CFunCircle) -> list:
    out = []
    for p in phi.points:
        q = perp(p)
        out.extend([q, (-q[0], -q[1])])
    return out


def tau(phi: CFunCircle) -> CFunCircle:
    """Pullback along the antipodal map."""
    if not phi.points:
        return phi
    return tabulate(lambda y: phi((-y[0], -y[1])), [(-p[0], -p[1]) for p in phi.points])


def add(*fs: CFunCircle) -> CFunCircle:
    pts = [p for f in fs for p in f.points]
    return tabulate(lambda y: sum(f(y) for f in fs), pts)


def scale_circle(phi: CFunCircle, k: int) -> CFunCircle:
    return CFunCircle(phi.points, tuple(k * v for v in phi.point_values), tuple(k * v for v in phi.arc_values),
                      k * phi.whole)


def polarize(phi: CFunCircle) -> CFunCircle:
    """pl(phi) = phi + tau* phi."""
    return add(phi, tau(phi))


def same_function(f: CFunCircle, g: CFunCircle) -> bool:
    probe = add(f, g)
    return all(f(y) == g(y) for y in probe.samples())


@dataclass
class CircleReport:
    integral: int
    sum_identity: bool
    antipodal_identity: bool
    polarization_identity: bool
    involution: bool
    tau_invariance: bool

    @property
    def passed(self) -> bool:
        return all((self.sum_identity, self.antipodal_identity, self.polarization_identity, self.involution,
                    self.tau_invariance))

    def to_json(self) -> dict:
        return {"pass": self.passed, "integral": self.integral, "sumIdentity": self.sum_identity,
                "antipodalIdentity": self.antipodal_identity, "polarizationIdentity": self.polarization_identity,
                "involution": self.involution, "tauInvariance": self.tau_invariance}


def circle_dualities(phi: CFunCircle) -> CircleReport:
    """R+ + R- = ∫ + R_P, tau* R+ = R-, pl(R+) = R_P + ∫, plus tau* tau* = id and tau-invariance of pl."""
    I = phi.integral()
    rp, rm, rP = r_plus(phi), r_minus(phi), r_proj(phi)
    const = CFunCircle.constant(I)
    s = same_function(add(rp, rm), add(const, rP))
    a = same_function(tau(rp), rm)
    pl = polarize(rp)
    p = same_function(pl, add(rP, const))
    inv = same_function(tau(tau(phi)), phi)
    ti = same_function(tau(polarize(phi)), polarize(phi))
    return CircleReport(I, s, a, p, inv, ti)


def random_cfun_circle(rng: random.Random, max_points: int = 5, lo: int = -3, hi: int = 3) -> CFunCircle:
    from .contact import pythagorean_unit
    k = rng.randint(0, max_points)
    if k == 0:
        return CFunCircle.constant(rng.randint(lo, hi))
    pts = set()
    while len(pts) < k:
        pts.add(pythagorean_unit(rng, 2, 8))
    pts = sort_by_angle(pts)
    return CFunCircle(tuple(pts), tuple(rng.randint(lo, hi) for _ in pts), tuple(rng.randint(lo, hi) for _ in pts))
