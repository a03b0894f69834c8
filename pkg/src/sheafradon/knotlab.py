"""Legendrian conormals of polygonal knots in R^3 pushed to the cylinder cosphere bundle."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Sequence

from . import contact
from .exactlin import rat


class KnotError(ValueError):
    pass


@dataclass(frozen=True)
class PLKnot:
    points: tuple

    def __post_init__(self):
        pts = tuple(tuple(rat(v) for v in p) for p in self.points)
        if len(pts) < 3:
            raise KnotError("a knot needs at least 3 vertices")
        if any(len(p) != 3 for p in pts):
            raise KnotError("vertices must be points of R^3")
        for a, b in self.segments_of(pts):
            if a == b:
                raise KnotError("degenerate segment")
        object.__setattr__(self, "points", pts)

    @staticmethod
    def segments_of(pts):
        return [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]

    def segments(self) -> list:
        return self.segments_of(self.points)

    def to_json(self) -> dict:
        from .exactlin import fmt_rat
        return {"$schema": "sheafradon/knot/v1", "points": [[fmt_rat(v) for v in p] for p in self.points]}

    @classmethod
    def from_json(cls, doc: dict) -> "PLKnot":
        return cls(tuple(tuple(rat(v) for v in p) for p in doc["points"]))


def trefoil() -> PLKnot:
    """12-vertex trefoil: ((2 + cos 3t) cos 2t, (2 + cos 3t) sin 2t, sin 3t) at t = 2 pi k / 12, rounded."""
    text = resources.files("sheafradon").joinpath("data/trefoil.json").read_text()
    return PLKnot.from_json(json.loads(text))


def trefoil_vertices(k: int = 12, max_den: int = 1000) -> list:
    out = []
    for i in range(k):
        t = 2 * math.pi * i / k
        rad = 2 + math.cos(3 * t)
        p = (rad * math.cos(2 * t), rad * math.sin(2 * t), math.sin(3 * t))
        out.append(tuple(Fraction(v).limit_denominator(max_den) for v in p))
    return out


def square_unknot(side=1) -> PLKnot:
    s = rat(side)
    return PLKnot(((0, 0, 0), (s, 0, 0), (s, s, 0), (0, s, 0)))


@dataclass(frozen=True)
class ConormalSample:
    q: tuple
    p: tuple
    segment: int
    tangent: tuple
    theta: float | None = None  # fiber angle in float mode


def _normal_frame(t):
    """Orthonormal e1, e2 with (t, e1, e2) positively oriented."""
    helper = (1.0, 0.0, 0.0) if abs(t[0]) < 0.9 else (0.0, 1.0, 0.0)
    e1 = _cross(t, helper)
    n = math.sqrt(sum(v * v for v in e1))
    e1 = tuple(v / n for v in e1)
    return e1, _cross(t, e1)


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _pythagorean_circle(m: int) -> list:
    """m rational points on the unit circle from t = tan(theta / 2) on a fixed grid."""
    out = []
    for j in range(m):
        th = 2 * math.pi * (j + 0.5) / m
        t = Fraction(math.tan(th / 2)).limit_denominator(64)
        out.append(((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)))
    return out


def sample_conormal(knot: PLKnot, per_segment: int, per_fiber: int, exact: bool = False) -> list[ConormalSample]:
    """Grid on the unit conormal: base points (i + 1/2)/m along each segment, fiber angles 2 pi j / k.

    Exact mode needs every segment direction to have rational length and uses
    rational unit fiber covectors.
    """
    if per_segment < 1 or per_fiber < 1:
        raise KnotError("sample counts must be positive")
    out = []
    for s, (a, b) in enumerate(knot.segments()):
        d = tuple(y - x for x, y in zip(a, b))
        if exact:
            L = contact.isqrt_exact(sum(v * v for v in d))
            if L is None:
                raise KnotError(f"segment {s} has irrational length; exact mode unavailable")
            t = tuple(v / L for v in d)
            H = contact.householder_to(t)
            fiber = [H((c, sn, Fraction(0))) for c, sn in _pythagorean_circle(per_fiber)]
            thetas = [None] * per_fiber
        else:
            n = math.sqrt(sum(float(v) ** 2 for v in d))
            t = tuple(float(v) / n for v in d)
            e1, e2 = _normal_frame(t)
            thetas = [2 * math.pi * j / per_fiber for j in range(per_fiber)]
            fiber = [tuple(math.cos(th) * u + math.sin(th) * w for u, w in zip(e1, e2)) for th in thetas]
        for i in range(per_segment):
            lam = Fraction(2 * i + 1, 2 * per_segment)
            q = tuple(x + lam * (y - x) for x, y in zip(a, b))
            if not exact:
                q = tuple(float(v) for v in q)
            for p, th in zip(fiber, thetas):
                out.append(ConormalSample(q, tuple(p), s, t, th))
    return out


@dataclass
class ConormalReport:
    images: list
    route_agreement: float
    unit_residual: float
    tangent_residual: float
    etar_residual: float
    legendrian_residual: float
    fiber_injective: bool
    min_fiber_separation: float
    samples: int = 0
    rows: list = field(default_factory=list)

    def passed(self, agree=1e-12, constraints=1e-10, legendrian=1e-6) -> bool:
        return (self.route_agreement < agree and max(self.unit_residual, self.tangent_residual, self.etar_residual)
                < constraints and self.legendrian_residual < legendrian and self.fiber_injective)

    def to_json(self) -> dict:
        return {"pass": self.passed(), "samples": self.samples, "routeAgreement": self.route_agreement,
                "unitResidual": self.unit_residual, "tangentResidual": self.tangent_residual,
                "etaRResidual": self.etar_residual, "legendrianResidual": self.legendrian_residual,
                "fiberInjective": self.fiber_injective, "minFiberSeparation": self.min_fiber_separation}


def _fl(v):
    return tuple(float(x) for x in v)


def _chi_f(q, p) -> contact.CylCotPoint:
    return contact.chi(contact.CotPoint(_fl(q), _fl(p)))


def _vec(c: contact.CylCotPoint) -> list:
    return list(c.nhat) + [c.r] + list(c.eta) + [c.etar]


def _one_form(c0: contact.CylCotPoint, cp: contact.CylCotPoint, cm: contact.CylCotPoint, h: float) -> float:
    """(eta . dnhat + etar dr)(velocity) by central differences."""
    dn = [(a - b) / (2 * h) for a, b in zip(cp.nhat, cm.nhat)]
    dr = (cp.r - cm.r) / (2 * h)
    return abs(sum(e * v for e, v in zip(c0.eta, dn)) + c0.etar * dr)


def _fiber_covector(smp: ConormalSample, theta: float):
    e1, e2 = _normal_frame(_fl(smp.tangent))
    return tuple(math.cos(theta) * u + math.sin(theta) * w for u, w in zip(e1, e2))


def map_conormal(samples: Sequence[ConormalSample], h: float = 1e-4) -> ConormalReport:
    """Push samples through chi and iota o varphi; report constraint, agreement and Legendrian residuals."""
    images = []
    agree = unit = tang = etar = leg = 0.0
    rows = []
    by_base: dict = {}
    for smp in samples:
        c1 = _chi_f(smp.q, smp.p)
        c2 = contact.iota_phi(_fl(smp.q), _fl(smp.p))
        a = max(abs(x - y) for x, y in zip(_vec(c1), _vec(c2)))
        u = abs(math.sqrt(sum(v * v for v in c1.nhat)) - 1)
        tg = abs(sum(x * y for x, y in zip(c1.eta, c1.nhat)))
        er = abs(c1.etar - 1)
        t = _fl(smp.tangent)
        # along the knot: q moves, p fixed
        qp = tuple(x + h * y for x, y in zip(_fl(smp.q), t))
        qm = tuple(x - h * y for x, y in zip(_fl(smp.q), t))
        l1 = _one_form(c1, _chi_f(qp, smp.p), _chi_f(qm, smp.p), h)
        # around the fiber: p rotates in the normal plane
        if smp.theta is not None:
            pp, pm = _fiber_covector(smp, smp.theta + h), _fiber_covector(smp, smp.theta - h)
        else:
            pf = _fl(smp.p)
            w = _cross(t, pf)
            pp = tuple(math.cos(h) * x + math.sin(h) * y for x, y in zip(pf, w))
            pm = tuple(math.cos(h) * x - math.sin(h) * y for x, y in zip(pf, w))
        l2 = _one_form(c1, _chi_f(smp.q, pp), _chi_f(smp.q, pm), h)
        agree, unit, tang, etar = max(agree, a), max(unit, u), max(tang, tg), max(etar, er)
        leg = max(leg, l1, l2)
        images.append(c1)
        by_base.setdefault((smp.segment, smp.q), []).append(c1)
        rows.append((smp, c1, {"route": a, "unit": u, "tangent": tg, "etaR": er, "legendrian": max(l1, l2)}))
    sep = math.inf
    for imgs in by_base.values():
        for i in range(len(imgs)):
            for j in range(i + 1, len(imgs)):
                d = max(abs(x - y) for x, y in zip(_vec(imgs[i]), _vec(imgs[j])))
                sep = min(sep, d)
    return ConormalReport(images, agree, unit, tang, etar, leg, sep > 1e-9, sep, len(samples), rows)


CSV_COLUMNS = ["segment", "q0", "q1", "q2", "p0", "p1", "p2", "nhat0", "nhat1", "nhat2", "r",
               "eta0", "eta1", "eta2", "etar", "res_route", "res_unit", "res_tangent", "res_etar", "res_legendrian"]


def write_csv(report: ConormalReport, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for smp, c, res in report.rows:
        w.writerow([smp.segment, *map(repr, _fl(smp.q)), *map(repr, _fl(smp.p)), *map(repr, c.nhat), repr(c.r),
                    *map(repr, c.eta), repr(c.etar), repr(res["route"]), repr(res["unit"]), repr(res["tangent"]),
                    repr(res["etaR"]), repr(res["legendrian"])])
