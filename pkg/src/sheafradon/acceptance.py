"""The eleven acceptance criteria as callable checks, shared by the test-suite and the CLI."""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import contact, euler, knotlab, radon
from .barcode import sample_points
from .cellsheaf import (
    CellSheaf, IndicatorSpec, SheafSpec, compile_sheaf, cone_of, constant_sheaf, direct_sum, indicator,
    microstalk, singular_support, stalk_at, tamarkin_project,
)
from .exactlin import GradedDims, Mat
from .plgeom import Arrangement2D, LCSet, Line, box, dot, halfplane, interval


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"criterion {self.number:2d} [{'PASS' if self.passed else 'FAIL'}] {self.name} ({self.seconds:.2f}s)"

    def to_json(self, timing: bool = False) -> dict:
        d = {"criterion": self.number, "name": self.name, "pass": self.passed, "details": self.details}
        if timing:
            d["seconds"] = self.seconds
        return d


# ---------------------------------------------------------------------------
# the standard sheaves

def upper_closed() -> CellSheaf:
    return compile_sheaf(indicator(halfplane((0, 1), 0, ">=")))


def upper_open() -> CellSheaf:
    return compile_sheaf(indicator(halfplane((0, 1), 0, ">")))


def square() -> CellSheaf:
    return compile_sheaf(indicator(box(0, 1, 0, 1)))


def open_square_shifted() -> CellSheaf:
    return compile_sheaf(indicator(box(0, 1, 0, 1, closed=False), shift=1))


def doubled_square() -> CellSheaf:
    return compile_sheaf(indicator(box(0, 1, 0, 1), mult=2))


def superposition() -> CellSheaf:
    """k_[0,1]^2 plus k_{x2 > 0}[1]."""
    return compile_sheaf(indicator(box(0, 1, 0, 1)) + indicator(halfplane((0, 1), 0, ">"), shift=1))


def lower_cone() -> CellSheaf:
    """Cone of the canonical map k_{x2 > 0} -> k_{R^2}; stalkwise it matches k_{x2 <= 0}."""
    B = Arrangement2D([Line(0, 1, 0)])
    U = compile_sheaf(indicator(halfplane((0, 1), 0, ">")), base=B)
    K = compile_sheaf(SheafSpec((IndicatorSpec(LCSet.everything()),)), base=B)
    f = {c: {0: Mat.identity(1)} for c in U.support()}
    return cone_of(U, K, f)


def acceptance_sheaves() -> dict[str, CellSheaf]:
    return {
        "upper_closed": upper_closed(), "upper_open": upper_open(), "square": square(),
        "open_square_shifted": open_square_shifted(), "doubled_square": doubled_square(),
        "superposition": superposition(), "lower_cone": lower_cone(), "constant": constant_sheaf(),
    }


def scan_directions(n: int = 64) -> list[tuple]:
    """n rational directions around the circle; the eight multiples of pi/4 are exact."""
    exact = {0: (1, 0), 1: (1, 1), 2: (0, 1), 3: (-1, 1), 4: (-1, 0), 5: (-1, -1), 6: (0, -1), 7: (1, -1)}
    out = []
    for k in range(n):
        if (8 * k) % n == 0:
            a, b = exact[8 * k // n]
            out.append((Fraction(a), Fraction(b)))
        else:
            th = 2 * math.pi * k / n
            out.append((Fraction(math.cos(th)).limit_denominator(10 ** 4), Fraction(math.sin(th)).limit_denominator(10 ** 4)))
    return out


# ---------------------------------------------------------------------------

def criterion_1() -> CriterionResult:
    t = time.perf_counter()
    F = upper_closed()
    up = microstalk(F, (0, 0), (0, 1))
    down = microstalk(F, (0, 0), (0, -1))
    dt = time.perf_counter() - t
    ok = up.total == 1 and down.total == 0 and dt < 1.0
    return CriterionResult(1, "simple-sheaf microstalk", ok, dt,
                           {"up": up.to_json(), "down": down.to_json(), "under1s": dt < 1.0})


def _square_expected(cell_rep, dim, w) -> bool:
    x, y = cell_rep
    on_x = x in (0, 1)
    on_y = y in (0, 1)
    inside_x = 0 <= x <= 1
    inside_y = 0 <= y <= 1
    if not (inside_x and inside_y) or not (on_x or on_y):
        return False
    # inward normals of the boundary sides through the point
    normals = []
    if on_x:
        normals.append((Fraction(1 - 2 * x), Fraction(0)))
    if on_y:
        normals.append((Fraction(0), Fraction(1 - 2 * y)))
    if len(normals) == 1:
        n = normals[0]
        return n[0] * w[1] - n[1] * w[0] == 0 and dot(n, w) > 0
    return all(dot(n, w) >= 0 for n in normals)


def criterion_2(ndir: int = 64) -> CriterionResult:
    t = time.perf_counter()
    dirs = scan_directions(ndir)
    patterns: dict[str, Callable] = {
        "upper_closed": lambda rep, dim, w: rep[1] == 0 and w[0] == 0 and w[1] > 0,
        "upper_open": lambda rep, dim, w: rep[1] == 0 and w[0] == 0 and w[1] < 0,
        "square": _square_expected,
    }
    sheaves = {"upper_closed": upper_closed(), "upper_open": upper_open(), "square": square()}
    details = {}
    ok = True
    for name, F in sheaves.items():
        report = singular_support(F)
        bad_scan = bad_report = 0
        for c, cell in enumerate(F.base.cells):
            for w in dirs:
                seen = not microstalk(F, cell.rep, w).is_zero()
                if seen != patterns[name](cell.rep, cell.dim, w):
                    bad_scan += 1
                if report.covers(c, w) != seen:
                    bad_report += 1
        details[name] = {"entries": len(report), "scanMismatches": bad_scan, "reportMismatches": bad_report}
        ok &= bad_scan == 0 and bad_report == 0
    K = constant_sheaf()
    kreport = singular_support(K)
    kscan = sum(not microstalk(K, (0, 0), w).is_zero() for w in dirs)
    details["constant"] = {"entries": len(kreport), "scanNonzero": kscan}
    ok &= kreport.is_empty() and kscan == 0
    return CriterionResult(2, "singular support patterns", ok, time.perf_counter() - t, details)


def rational_between(nhat, lo, hi) -> Fraction:
    """A rational r with lo < r |nhat| < hi (offsets lo, hi rational or None for infinity)."""
    n = math.sqrt(float(dot(nhat, nhat)))
    a = -1e9 if lo is None else float(lo) / n
    b = 1e9 if hi is None else float(hi) / n
    if lo is None:
        a = b - 2
    if hi is None:
        b = a + 2
    for den in (1, 2, 4, 8, 64, 1024, 10 ** 6):
        r = Fraction((a + b) / 2).limit_denominator(den)
        q = radon.LineQuery(nhat, r)
        if (lo is None or q.cmp_offset(lo) > 0) and (hi is None or q.cmp_offset(hi) < 0):
            return r
    raise ArithmeticError("no rational found in chamber")


def chamber_queries(F: CellSheaf, nhat) -> list:
    """One query per chamber and, when |nhat| is rational, one per wall."""
    walls = radon.wall_offsets(F, nhat)
    out = []
    exact = contact.isqrt_exact(dot(nhat, nhat)) is not None
    bounds = [None] + walls + [None]
    for k in range(len(bounds) - 1):
        out.append(radon.LineQuery(nhat, rational_between(nhat, bounds[k], bounds[k + 1])))
        if exact and k < len(walls):
            out.append(radon.LineQuery.at_offset(nhat, walls[k]))
    return out


def criterion_3() -> CriterionResult:
    t = time.perf_counter()
    dirs = [d for d in scan_directions(8)]
    S, H = square(), upper_closed()
    corners = [(0, 0), (1, 0), (0, 1), (1, 1)]
    checked = bad = 0
    for nhat in dirs:
        for q in chamber_queries(S, nhat):
            meets = any(q.contains(v) for v in corners)
            expect = GradedDims({0: 1}) if meets else GradedDims()
            checked += 1
            bad += radon.radon_stalk(S, q) != expect
        for q in chamber_queries(H, nhat):
            up = nhat[0] == 0 and nhat[1] > 0
            expect = GradedDims({1: 1}) if up and q.r >= 0 else GradedDims()
            checked += 1
            bad += radon.radon_stalk(H, q) != expect
    dt = time.perf_counter() - t
    return CriterionResult(3, "Radon stalk tables", bad == 0 and dt < 10, dt,
                           {"queries": checked, "mismatches": bad, "under10s": dt < 10})


def criterion_4() -> CriterionResult:
    t = time.perf_counter()
    H = upper_closed()
    rep = radon.ss_image_check(H)
    # chi computed directly by the contact module at a covector of SS(k_{x2>=0})
    c = contact.chi(contact.CotPoint((Fraction(5), Fraction(0)), (Fraction(0), Fraction(3))))
    predicted = {(tuple(c.nhat), c.r)}
    walls = set()
    for d in rep.grid:
        for w in radon.effective_walls(H, d):
            walls.add((radon._prim(d), w / max(abs(a) for a in d)))
    ok = rep.passed and rep.wall_base_points() == predicted and walls == predicted and c.etar > 0
    ok &= all(p.etar > 0 for p in rep.predictions)
    return CriterionResult(4, "SS image under chi", ok, time.perf_counter() - t,
                           {"predicted": [[[str(v) for v in n], str(r)] for n, r in predicted],
                            "gridWalls": [[[str(v) for v in n], str(r)] for n, r in sorted(walls)],
                            "report": rep.to_json()})


def criterion_5() -> CriterionResult:
    t = time.perf_counter()
    details = {}
    ok = True
    for name, F, want in (("upper_closed", upper_closed(), 1), ("square", square(), 1),
                          ("doubled_square", doubled_square(), 2)):
        samples = radon.conormal_samples(F)
        reps = [radon.simpleness_transfer(F, x, xi) for x, xi in samples]
        good = bool(reps) and all(r.passed and r.microstalk_dim == want and r.endpoint_multiplicity == want
                                  for r in reps)
        details[name] = {"samples": len(reps), "pass": good}
        ok &= good
    return CriterionResult(5, "simpleness transfer", ok, time.perf_counter() - t, details)


def criterion_6(count: int = 100, seed: int = 1, max_lines: int = 6) -> CriterionResult:
    t = time.perf_counter()
    K = euler.derive_kernel_constants()
    rng = random.Random(seed)
    failures = []
    checked = 0
    for i in range(count):
        phi = euler.random_cfun(rng, max_lines)
        rep = euler.inversion_check(phi)
        checked += rep.checked
        if not rep.passed:
            failures.append({"function": i, "witness": rep.witness})
    dt = time.perf_counter() - t
    return CriterionResult(6, "Euler inversion", not failures and dt < 60, dt,
                           {"functions": count, "points": checked, "failures": failures[:5],
                            "kernel": {"offDiagonal": K.off_diagonal, "diagonal": K.diagonal}, "under60s": dt < 60})


def random_query(rng: random.Random) -> radon.LineQuery:
    while True:
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        if (a, b) != (0, 0):
            break
    return radon.LineQuery((a, b), Fraction(rng.randint(-12, 12), rng.randint(1, 4)))


def criterion_7(queries: int = 100, seed: int = 2) -> CriterionResult:
    t = time.perf_counter()
    rng = random.Random(seed)
    details = {}
    ok = True
    for name, F in acceptance_sheaves().items():
        R = euler.EulerRadonTransform(euler.local_euler(F))
        bad = 0
        for _ in range(queries):
            q = random_query(rng)
            if radon.radon_stalk(F, q).euler != R.at_query(q):
                bad += 1
        details[name] = {"queries": queries, "mismatches": bad}
        ok &= bad == 0
    return CriterionResult(7, "Euler/sheaf compatibility", ok, time.perf_counter() - t, details)


def _table(F: CellSheaf, pts) -> list:
    return [stalk_at(F, (p,)) for p in pts]


def _probe_points(*breaks) -> list:
    pts = sorted({Fraction(b) for bs in breaks for b in bs})
    return [t for t, _ in sample_points(pts)]


def random_1d_sheaf(rng: random.Random) -> CellSheaf:
    inds = []
    for _ in range(rng.randint(1, 3)):
        lo = Fraction(rng.randint(-4, 4), rng.choice((1, 2)))
        hi = lo + Fraction(rng.randint(0, 6), rng.choice((1, 2)))
        lc, hc = rng.random() < 0.5, rng.random() < 0.5
        if lo == hi:
            lc = hc = True
        inds.append(IndicatorSpec(interval(lo, hi, lc, hc), rng.randint(-1, 1), rng.randint(1, 2)))
    return compile_sheaf(SheafSpec(tuple(inds), 1))


def criterion_8(count: int = 50, seed: int = 3) -> CriterionResult:
    t = time.perf_counter()
    closed = compile_sheaf(indicator(interval(0, 1), dimension=1))
    opened = compile_sheaf(indicator(interval(0, 1, False, False), dimension=1))
    ray0 = compile_sheaf(indicator(interval(0, None), dimension=1))
    ray1 = compile_sheaf(indicator(interval(1, None), shift=-1, dimension=1))
    P1, P2 = tamarkin_project(closed).sheaf, tamarkin_project(opened).sheaf
    pts = _probe_points([0, 1])
    ok1 = _table(P1, pts) == _table(ray0, pts)
    ok2 = _table(P2, pts) == _table(ray1, pts)
    rng = random.Random(seed)
    neg = idem = 0
    for _ in range(count):
        F = random_1d_sheaf(rng)
        P = tamarkin_project(F)
        if singular_support(P.sheaf).has_negative():
            neg += 1
        PP = tamarkin_project(P.sheaf, strict=False)
        probe = _probe_points(P.sheaf.base.breakpoints, PP.sheaf.base.breakpoints, F.base.breakpoints)
        if _table(PP.sheaf, probe) != _table(P.sheaf, probe):
            idem += 1
    ok = ok1 and ok2 and neg == 0 and idem == 0
    return CriterionResult(8, "Tamarkin projector", ok, time.perf_counter() - t,
                           {"closedInterval": ok1, "openInterval": ok2, "random": count,
                            "negativeCovectors": neg, "idempotenceFailures": idem})


def criterion_9(samples: int = 10_000, seed: int = 4) -> CriterionResult:
    t = time.perf_counter()
    details = {}
    ok = True
    for n in (2, 3):
        rep = contact.exact_chi_battery(n, samples, seed + n)
        details[f"exact_n{n}"] = rep.to_json()
        ok &= rep.passed
    for n in (2, 3):
        s = contact.symplectic_check("chi", n, 50, h=1e-5, seed=seed + n)
        details[f"float_n{n}"] = s.to_json()
        ok &= s.max_residual < 1e-8
    return CriterionResult(9, "contact identities", ok, time.perf_counter() - t, details)


def criterion_10(samples: int = 10_000, circle: int = 100, seed: int = 5) -> CriterionResult:
    t = time.perf_counter()
    details = {}
    ok = True
    for name in ("fsSph", "raS", "ftRa"):
        r = contact.diagram_check(name, 2, samples, seed)
        details[name] = r
        ok &= r["pass"]
    rng = random.Random(seed)
    bad = 0
    for _ in range(circle):
        if not euler.circle_dualities(euler.random_cfun_circle(rng)).passed:
            bad += 1
    details["circle"] = {"functions": circle, "failures": bad}
    ok &= bad == 0
    return CriterionResult(10, "transform diagram", ok, time.perf_counter() - t, details)


def criterion_11() -> CriterionResult:
    t = time.perf_counter()
    k = knotlab.trefoil()
    s = knotlab.sample_conormal(k, 10, 16)
    rep = knotlab.map_conormal(s, h=1e-4)
    dt = time.perf_counter() - t
    ok = len(s) == 1920 and rep.passed() and dt < 5
    return CriterionResult(11, "knot conormal", ok, dt, {**rep.to_json(), "under5s": dt < 5})


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
    7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11,
}


def run(number: int) -> CriterionResult:
    t = time.perf_counter()
    res = CRITERIA[number]()
    res.seconds = max(res.seconds, 0.0) or time.perf_counter() - t
    return res
