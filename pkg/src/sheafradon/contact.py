"""Contact transforms, kernel predicates and restriction embeddings in general dimension.

Every map works in two modes: exact (``Fraction`` inputs with rational norms,
i.e. Pythagorean vectors) and float.  Mode is inferred from the input types.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

Vec = tuple


class ContactError(ValueError):
    pass


def _is_exact(*vs) -> bool:
    return all(isinstance(x, (int, Fraction)) for v in vs for x in (v if isinstance(v, (tuple, list)) else (v,)))


def isqrt_exact(q: Fraction) -> Fraction | None:
    """Rational square root of q if it exists."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def vdot(u, v):
    return sum(a * b for a, b in zip(u, v))


def vnorm(v):
    s = vdot(v, v)
    if _is_exact(v):
        r = isqrt_exact(s)
        if r is None:
            raise ContactError("exact mode needs a vector with rational norm")
        return r
    return math.sqrt(s)


def vscale(s, v) -> Vec:
    return tuple(s * x for x in v)


def vadd(u, v) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


@dataclass(frozen=True)
class CotPoint:
    """A covector (x, xi) in T*R^n with xi != 0."""

    x: Vec
    xi: Vec

    def __post_init__(self):
        if len(self.x) != len(self.xi):
            raise ContactError("dimension mismatch")
        if all(v == 0 for v in self.xi):
            raise ContactError("xi must be nonzero")


@dataclass(frozen=True)
class CylCotPoint:
    """(nhat, r, eta, etar) in T*(S^{n-1} x R), eta tangent to the sphere at nhat."""

    nhat: Vec
    r: object
    eta: Vec
    etar: object

    def residuals(self) -> dict:
        n2 = vdot(self.nhat, self.nhat)
        return {"unit": abs(float(n2) - 1.0), "tangent": abs(float(vdot(self.eta, self.nhat)))}

    def is_exactly_valid(self) -> bool:
        return vdot(self.nhat, self.nhat) == 1 and vdot(self.eta, self.nhat) == 0

    def as_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.nhat] + [float(self.r)] + [float(v) for v in self.eta] + [float(self.etar)])


@dataclass(frozen=True)
class SphCotPoint:
    """(x, xi) in T*S^n with x a unit vector in R^{n+1} and xi . x = 0."""

    x: Vec
    xi: Vec

    def check(self, tol: float = 1e-12) -> bool:
        if _is_exact(self.x, self.xi):
            return vdot(self.x, self.x) == 1 and vdot(self.x, self.xi) == 0
        return abs(vdot(self.x, self.x) - 1) < tol and abs(vdot(self.x, self.xi)) < tol


# ---------------------------------------------------------------------------
# the transforms

def chi(p: CotPoint) -> CylCotPoint:
    """chi(x, xi) = (xi/|xi|, x.xi/|xi|, -|xi| x + xi (x.xi)/|xi|, |xi|)."""
    x, xi = p.x, p.xi
    n = vnorm(xi)
    if n == 0:
        raise ContactError("xi must be nonzero")
    s = vdot(x, xi)
    nhat = vscale(1 / n if isinstance(n, float) else Fraction(1) / n, xi)
    r = s / n
    eta = vadd(vscale(-n, x), vscale(s / n, xi))
    return CylCotPoint(nhat, r, eta, n)


def chi_inv(c: CylCotPoint) -> CotPoint:
    """chi^{-1}(nhat, r, eta, etar) = (-eta/etar + r nhat, etar nhat)."""
    if not c.etar > 0:
        raise ContactError("eta_r must be positive")
    if _is_exact(c.nhat, c.eta, c.r, c.etar):
        if vdot(c.nhat, c.nhat) != 1 or vdot(c.eta, c.nhat) != 0:
            raise ContactError("not a point of T*(S^{n-1} x R)")
    x = vadd(vscale(-1 / c.etar if isinstance(c.etar, float) else -Fraction(1) / c.etar, c.eta), vscale(c.r, c.nhat))
    return CotPoint(x, vscale(c.etar, c.nhat))


def _inv(n):
    return 1 / n if isinstance(n, float) else Fraction(1) / n


def chi_plus(p: SphCotPoint, homogeneous: bool = False) -> SphCotPoint:
    """chi_+(x, xi) = (-xi/|xi|, x/|xi|); the homogeneous variant uses |xi| x instead."""
    n = vnorm(p.xi)
    if n == 0:
        raise ContactError("xi must be nonzero")
    y = vscale(-_inv(n), p.xi)
    eta = vscale(n, p.x) if homogeneous else vscale(_inv(n), p.x)
    return SphCotPoint(y, eta)


def chi_minus(p: SphCotPoint, homogeneous: bool = False) -> SphCotPoint:
    """chi_-(x, xi) = (xi/|xi|, -x/|xi|); the homogeneous variant uses -|xi| x instead."""
    n = vnorm(p.xi)
    if n == 0:
        raise ContactError("xi must be nonzero")
    y = vscale(_inv(n), p.xi)
    eta = vscale(-n, p.x) if homogeneous else vscale(-_inv(n), p.x)
    return SphCotPoint(y, eta)


def chi_plus_inv(q: SphCotPoint, homogeneous: bool = False) -> SphCotPoint:
    m = vnorm(q.xi)
    if m == 0:
        raise ContactError("eta must be nonzero")
    n = m if homogeneous else _inv(m)
    return SphCotPoint(vscale(_inv(m), q.xi), vscale(-n, q.x))


def antipodal(p: SphCotPoint) -> SphCotPoint:
    """sigma(x, xi) = (-x, -xi)."""
    return SphCotPoint(vscale(-1, p.x), vscale(-1, p.xi))


def varphi(q: Vec, p: Vec):
    """(q, p) -> (p, q - p <q,p>, <q,p>)."""
    s = vdot(q, p)
    return p, vsub(q, vscale(s, p)), s


def iota(q: Vec, p: Vec, z) -> CylCotPoint:
    """(q, p, z) -> (q, z, -p, 1)."""
    one = 1.0 if isinstance(z, float) else Fraction(1)
    return CylCotPoint(q, z, vscale(-1, p), one)


def iota_phi(q: Vec, p: Vec) -> CylCotPoint:
    if _is_exact(q, p):
        if vdot(p, p) != 1:
            raise ContactError("p must be a unit vector")
    a, b, z = varphi(q, p)
    return iota(a, b, z)


# ---------------------------------------------------------------------------
# rational samples

def pythagorean_unit(rng: random.Random, n: int, height: int = 12) -> Vec:
    """Rational point on S^{n-1} by inverse stereographic projection of a random rational point."""
    if n == 1:
        return (Fraction(rng.choice((-1, 1))),)
    t = [Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(n - 1)]
    s = sum(v * v for v in t)
    den = s + 1
    return tuple([2 * v / den for v in t] + [(s - 1) / den])


def pythagorean_vector(rng: random.Random, n: int, height: int = 12) -> Vec:
    lam = Fraction(rng.randint(1, height), rng.randint(1, height))
    return vscale(lam, pythagorean_unit(rng, n, height))


def random_rational_vector(rng: random.Random, n: int, height: int = 12) -> Vec:
    return tuple(Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(n))


def householder_to(x: Vec) -> Callable[[Vec], Vec]:
    """Rational orthogonal map sending the last basis vector to the unit vector x."""
    n = len(x)
    e = tuple([Fraction(0)] * (n - 1) + [Fraction(1)])
    v = vsub(x, e)
    vv = vdot(v, v)
    if vv == 0:
        return lambda w: tuple(w)
    return lambda w: vsub(w, vscale(2 * vdot(v, w) / vv, v))


def random_sph_cotpoint(rng: random.Random, n: int, height: int = 12) -> SphCotPoint:
    """Exact point of T*S^n (unit x in R^{n+1}) with rational |xi| > 0."""
    x = pythagorean_unit(rng, n + 1, height)
    w = pythagorean_vector(rng, n, height) + (Fraction(0),)
    H = householder_to(x)
    return SphCotPoint(x, H(w))


def random_cotpoint(rng: random.Random, n: int, height: int = 12) -> CotPoint:
    return CotPoint(random_rational_vector(rng, n, height), pythagorean_vector(rng, n, height))


# ---------------------------------------------------------------------------
# kernels as predicates

KERNELS = ("Radon", "SphPlus", "SphMinus", "SphMinusInv", "FS_A", "FS_B", "FT", "FTInv", "ProjIncidence")


@dataclass(frozen=True)
class KernelPredicate:
    """Sign test of an explicit defining expression at a pair of points."""

    tag: str

    def __post_init__(self):
        if self.tag not in KERNELS:
            raise ContactError(f"unknown kernel {self.tag!r}")

    def expression(self, a, b):
        t = self.tag
        if t == "Radon":  # a = x, b = (nhat, r)
            nhat, r = b
            return vdot(a, nhat) - r
        if t == "FT" or t == "FTInv":  # a = (x, s), b = (y, t)
            (x, s), (y, tt) = a, b
            v = vdot(x, y) + tt - s
            return v if t == "FT" else -v
        return vdot(a, b)

    def __call__(self, a, b) -> bool:
        v = self.expression(a, b)
        t = self.tag
        if t == "Radon" or t in ("SphMinus", "FS_A"):
            return v <= 0
        if t in ("SphPlus", "FS_B", "FT", "FTInv"):
            return v >= 0
        if t == "SphMinusInv":
            return v < 0
        return v == 0


# ---------------------------------------------------------------------------
# embeddings; each returns (representative, positive scale) with point = rep / sqrt(scale)

def _flat(v):
    return tuple(v)


def emb_RaS_j1(x):
    return _flat(tuple(x) + (-1,)), vdot(x, x) + 1


def emb_RaS_j2(b):
    nhat, r = b
    return _flat(tuple(nhat) + (r,)), r * r + 1


def emb_RaSneg_j1(x):
    return _flat(tuple(-v for v in x) + (1,)), vdot(x, x) + 1


def emb_FTRa_j1(a):
    x, s = a
    return tuple(-v for v in x) + (-s,), 1


def emb_FTRa_j2(b):
    # the scale multiplies both nhat and r
    y, t = b
    return (tuple(y) + (-1,), t), vdot(y, y) + 1


def emb_FTS_j1(a):
    x, s = a
    return tuple(-v for v in x) + (-s, -1), vdot(x, x) + s * s + 1


def emb_FTS_j2(b):
    y, t = b
    return tuple(y) + (-1, t), vdot(y, y) + 1 + t * t


def emb_inclusion(x):
    return tuple(x), 1


def emb_cover_p(x):
    # radial projection R^{n+1} minus 0 -> S^n
    return tuple(x), vdot(x, x)


def emb_antipodal(x):
    return tuple(-v for v in x), 1


EMBEDDINGS: dict[str, Callable] = {
    "RaS_j1": emb_RaS_j1, "RaS_j2": emb_RaS_j2, "RaSneg_j1": emb_RaSneg_j1,
    "FTRa_j1": emb_FTRa_j1, "FTRa_j2": emb_FTRa_j2,
    "FTS_j1": emb_FTS_j1, "FTS_j2": emb_FTS_j2,
    "FS_j1": emb_inclusion, "FS_j2": emb_inclusion, "cover_p": emb_cover_p,
    "antipodal_tau": emb_antipodal,
}

# arguments whose defining expression is positively homogeneous, so a positive scale can be dropped
_HOMOGENEOUS = {
    "Radon": (False, True), "SphPlus": (True, True), "SphMinus": (True, True),
    "SphMinusInv": (True, True), "FS_A": (True, True), "FS_B": (True, True),
    "ProjIncidence": (True, True), "FT": (False, False), "FTInv": (False, False),
}


def _unscale(rep, scale):
    if scale == 1:
        return rep
    if _is_exact(scale):
        root = isqrt_exact(scale)
        if root is None:
            raise ContactError("cannot clear an irrational scale in a non-homogeneous slot")
    else:
        root = math.sqrt(scale)
    if isinstance(rep, tuple) and len(rep) == 2 and isinstance(rep[0], tuple):
        return (vscale(1 / root, rep[0]), rep[1] / root)
    return vscale(1 / root, rep)


@dataclass
class RestrictionReport:
    passed: bool
    samples: int
    mismatches: list

    def to_json(self) -> dict:
        return {"pass": self.passed, "samples": self.samples, "mismatches": len(self.mismatches)}


def kernel_restriction_check(j1: str | None, j2: str | None, inner: str, outer: str, samples) -> RestrictionReport:
    """inner(a, b) iff outer(j1(a), j2(b)) on every sample, with square roots cleared."""
    K_in, K_out = KernelPredicate(inner), KernelPredicate(outer)
    e1 = EMBEDDINGS[j1] if j1 else emb_inclusion
    e2 = EMBEDDINGS[j2] if j2 else emb_inclusion
    hom = _HOMOGENEOUS[outer]
    bad = []
    n = 0
    for a, b in samples:
        n += 1
        ra, sa = e1(a)
        rb, sb = e2(b)
        if not hom[0]:
            ra = _unscale(ra, sa)
        if not hom[1]:
            rb = _unscale(rb, sb)
        try:
            ok = K_in(a, b) == K_out(ra, rb)
        except (TypeError, ValueError) as exc:
            raise ContactError(f"dimension mismatch: {exc}") from exc
        if not ok:
            bad.append((a, b))
    return RestrictionReport(not bad, n, bad)


def matching_kernels(j1: str, j2: str, inner: str, candidates: Sequence[str], samples) -> list[str]:
    """Which candidate outer kernels agree with the inner kernel under (j1, j2) on all samples."""
    samples = list(samples)
    return [k for k in candidates if kernel_restriction_check(j1, j2, inner, k, samples).passed]


def radon_samples(rng: random.Random, n: int, count: int, height: int = 6):
    """Pairs (x, (nhat, r)) with Pythagorean nhat, including boundary cases x.nhat = r."""
    out = []
    for i in range(count):
        x = random_rational_vector(rng, n, height)
        nhat = pythagorean_unit(rng, n, height)
        r = vdot(x, nhat) if i % 5 == 0 else Fraction(rng.randint(-3 * height, 3 * height), rng.randint(1, height))
        out.append((x, (nhat, r)))
    return out


def ft_samples(rng: random.Random, n: int, count: int, height: int = 6):
    out = []
    for i in range(count):
        x = random_rational_vector(rng, n, height)
        y = random_rational_vector(rng, n, height)
        s = Fraction(rng.randint(-3 * height, 3 * height), rng.randint(1, height))
        t = s - vdot(x, y) if i % 5 == 0 else Fraction(rng.randint(-3 * height, 3 * height), rng.randint(1, height))
        out.append(((x, s), (y, t)))
    return out


def sphere_samples(rng: random.Random, n: int, count: int, height: int = 6):
    out = []
    for i in range(count):
        x = pythagorean_unit(rng, n + 1, height)
        if i % 5 == 0:
            y = householder_to(x)(pythagorean_unit(rng, n, height) + (Fraction(0),))
        else:
            y = pythagorean_unit(rng, n + 1, height)
        out.append((x, y))
    return out


def vector_samples(rng: random.Random, n: int, count: int, height: int = 6):
    out = []
    while len(out) < count:
        x = random_rational_vector(rng, n + 1, height)
        y = random_rational_vector(rng, n + 1, height)
        if any(x) and any(y):
            out.append((x, y))
    return out


# ---------------------------------------------------------------------------
# symplectic checks (float)

def _omega(m: int) -> np.ndarray:
    I = np.eye(m)
    Z = np.zeros((m, m))
    return np.block([[Z, I], [-I, Z]])


def _chart_index(v: np.ndarray) -> int:
    return int(np.argmax(np.abs(v)))


def _sphere_chart(v: np.ndarray, covec: np.ndarray, k: int):
    """Graph chart dropping coordinate k; returns (u, p_u) with p_u = covec . d v / d u."""
    idx = [i for i in range(len(v)) if i != k]
    u = v[idx]
    p = np.array([covec[i] - (v[i] / v[k]) * covec[k] for i in idx])
    return u, p


def _sphere_unchart(u: np.ndarray, p: np.ndarray, k: int, sgn: float):
    n = len(u) + 1
    vk = sgn * math.sqrt(max(0.0, 1.0 - float(u @ u)))
    v = np.insert(u, k, vk)
    # solve for covec orthogonal to v with the given chart components
    A = np.eye(n - 1) + np.outer(u, u) / (vk * vk)
    cp = np.linalg.solve(A, p)
    ck = -float(cp @ u) / vk
    return v, np.insert(cp, k, ck)


def _chi_coords(z: np.ndarray, n: int, k: int) -> np.ndarray:
    x, xi = z[:n], z[n:]
    c = chi(CotPoint(tuple(float(v) for v in x), tuple(float(v) for v in xi)))
    nh = np.array(c.nhat)
    u, pu = _sphere_chart(nh, np.array(c.eta), k)
    return np.concatenate([u, [c.r], pu, [c.etar]])


def _jacobian(f, z, h):
    m = len(z)
    cols = []
    for i in range(m):
        e = np.zeros(m)
        e[i] = h
        cols.append((f(z + e) - f(z - e)) / (2 * h))
    return np.array(cols).T


@dataclass
class SymplecticReport:
    map: str
    samples: int
    max_symplectic: float
    max_liouville: float

    @property
    def max_residual(self) -> float:
        return max(self.max_symplectic, self.max_liouville)

    def to_json(self) -> dict:
        return {"map": self.map, "samples": self.samples, "maxSymplectic": self.max_symplectic,
                "maxLiouville": self.max_liouville, "maxResidual": self.max_residual}


def chi_symplectic_residual(x, xi, h: float = 1e-5, rng: np.random.Generator | None = None) -> tuple[float, float]:
    """(|J^T Omega J - Omega|_max, Liouville residual) for chi at (x, xi), Darboux chart on the cylinder."""
    n = len(x)
    z0 = np.array([float(v) for v in x] + [float(v) for v in xi])
    nh = z0[n:] / np.linalg.norm(z0[n:])
    k = _chart_index(nh)
    f = lambda z: _chi_coords(z, n, k)
    J = _jacobian(f, z0, h)
    sym = float(np.max(np.abs(J.T @ _omega(n) @ J - _omega(n))))
    rng = rng or np.random.default_rng(0)
    Y = f(z0)
    m = n  # chart dim n-1 plus r
    pY = Y[m:]
    liou = 0.0
    for _ in range(4):
        v = rng.standard_normal(2 * n)
        dY = J @ v
        lhs = float(pY @ dY[:m])
        rhs = float(z0[n:] @ v[:n])
        liou = max(liou, abs(lhs - rhs))
    return sym, liou


def _sph_map_coords(fn, z, n1, k_src, sgn_src, k_tgt):
    u, p = z[: n1 - 1], z[n1 - 1:]
    x, xi = _sphere_unchart(u, p, k_src, sgn_src)
    out = fn(SphCotPoint(tuple(x), tuple(xi)))
    y = np.array(out.x)
    uu, pp = _sphere_chart(y, np.array(out.xi), k_tgt)
    return np.concatenate([uu, pp])


def sph_symplectic_residual(fn, p: SphCotPoint, h: float = 1e-5) -> float:
    x = np.array([float(v) for v in p.x])
    xi = np.array([float(v) for v in p.xi])
    n1 = len(x)
    k = _chart_index(x)
    u, pu = _sphere_chart(x, xi, k)
    z0 = np.concatenate([u, pu])
    y0 = fn(SphCotPoint(tuple(x), tuple(xi)))
    kt = _chart_index(np.array(y0.x))
    f = lambda z: _sph_map_coords(fn, z, n1, k, math.copysign(1.0, x[k]), kt)
    J = _jacobian(f, z0, h)
    O = _omega(n1 - 1)
    return float(np.max(np.abs(J.T @ O @ J - O)))


def symplectic_check(map_name: str, n: int, samples: int, h: float = 1e-5, seed: int = 0) -> SymplecticReport:
    """Float finite-difference residuals for chi (on T*R^n) or chi_+/chi_- (on T*S^n)."""
    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    sym = liou = 0.0
    for _ in range(samples):
        if map_name == "chi":
            x = [rng.uniform(-2, 2) for _ in range(n)]
            xi = [rng.uniform(-2, 2) for _ in range(n)]
            if np.linalg.norm(xi) < 0.3:
                xi[0] += 1.0
            s, l = chi_symplectic_residual(x, xi, h, nrng)
            sym, liou = max(sym, s), max(liou, l)
        elif map_name in ("chiPlus", "chiMinus", "chiPlusHom", "chiMinusHom", "identity"):
            p = random_sph_cotpoint(rng, n, 6)
            fn = {
                "chiPlus": chi_plus, "chiMinus": chi_minus,
                "chiPlusHom": lambda q: chi_plus(q, homogeneous=True),
                "chiMinusHom": lambda q: chi_minus(q, homogeneous=True),
                "identity": lambda q: q,
            }[map_name]
            pf = SphCotPoint(tuple(float(v) for v in p.x), tuple(float(v) for v in p.xi))
            sym = max(sym, sph_symplectic_residual(fn, pf, h))
        else:
            raise ContactError(f"unknown map {map_name!r}")
    return SymplecticReport(map_name, samples, sym, liou)


# ---------------------------------------------------------------------------
# exact identity batteries

@dataclass
class ContactReport:
    passed: bool
    samples: int
    failures: dict

    def to_json(self) -> dict:
        return {"pass": self.passed, "samples": self.samples, "failures": self.failures}


def exact_chi_battery(n: int, samples: int, seed: int = 0) -> ContactReport:
    """Round trip, dilation equivariance and image constraints on Pythagorean samples."""
    rng = random.Random(seed)
    fails = {"roundtrip": 0, "dilation": 0, "constraints": 0}
    for _ in range(samples):
        p = random_cotpoint(rng, n)
        c = chi(p)
        if chi_inv(c) != p:
            fails["roundtrip"] += 1
        lam = Fraction(rng.randint(1, 50), rng.randint(1, 50))
        c2 = chi(CotPoint(p.x, vscale(lam, p.xi)))
        if not (c2.nhat == c.nhat and c2.r == c.r and c2.eta == vscale(lam, c.eta) and c2.etar == lam * c.etar):
            fails["dilation"] += 1
        if not (vdot(c.eta, c.nhat) == 0 and c.etar == vnorm(p.xi) and vdot(c.nhat, c.nhat) == 1):
            fails["constraints"] += 1
    return ContactReport(not any(fails.values()), samples, fails)


def exact_sph_battery(n: int, samples: int, seed: int = 0) -> ContactReport:
    """sigma chi_+ = chi_-, chi_+ sigma = chi_-, output invariants, and inverse round trip."""
    rng = random.Random(seed)
    fails = {"sigma_after": 0, "sigma_before": 0, "invariants": 0, "roundtrip": 0}
    for _ in range(samples):
        p = random_sph_cotpoint(rng, n)
        cp, cm = chi_plus(p), chi_minus(p)
        if antipodal(cp) != cm:
            fails["sigma_after"] += 1
        if chi_plus(antipodal(p)) != cm:
            fails["sigma_before"] += 1
        if not (cp.check() and cm.check()):
            fails["invariants"] += 1
        if chi_plus_inv(cp) != p:
            fails["roundtrip"] += 1
    return ContactReport(not any(fails.values()), samples, fails)


def iota_phi_battery(n: int, samples: int, seed: int = 0) -> ContactReport:
    rng = random.Random(seed)
    fails = {"agreement": 0}
    for _ in range(samples):
        q = random_rational_vector(rng, n)
        p = pythagorean_unit(rng, n)
        if iota_phi(q, p) != chi(CotPoint(q, p)):
            fails["agreement"] += 1
    return ContactReport(not any(fails.values()), samples, fails)


# ---------------------------------------------------------------------------
# the transform diagram, one identity at a time

DIAGRAM_IDENTITIES = ("raS", "ftRa", "ftS", "fsSph", "raSneg", "iotaPhi")


def diagram_check(identity: str, n: int, samples: int, seed: int = 0) -> dict:
    """Exact check of one kernel restriction (or the iota o varphi route); maxResidual is 0 or 1."""
    rng = random.Random(seed)
    extra: dict = {}
    if identity == "raS":
        rep = kernel_restriction_check("RaS_j1", "RaS_j2", "Radon", "SphMinus", radon_samples(rng, n, samples))
    elif identity == "ftRa":
        rep = kernel_restriction_check("FTRa_j1", "FTRa_j2", "FT", "Radon", ft_samples(rng, n, samples))
    elif identity == "ftS":
        rep = kernel_restriction_check("FTS_j1", "FTS_j2", "FT", "SphMinus", ft_samples(rng, n, samples))
    elif identity == "fsSph":
        a = kernel_restriction_check("FS_j1", "FS_j2", "SphMinus", "FS_A", sphere_samples(rng, n, samples))
        b = kernel_restriction_check("cover_p", "cover_p", "FS_A", "SphMinus", vector_samples(rng, n, samples))
        rep = RestrictionReport(a.passed and b.passed, a.samples + b.samples, a.mismatches + b.mismatches)
    elif identity == "raSneg":
        found = matching_kernels("RaSneg_j1", "RaS_j2", "Radon", ["SphPlus", "SphMinus"],
                                 radon_samples(rng, n, samples))
        rep = RestrictionReport(len(found) == 1 or samples == 0, samples, [])
        extra["matches"] = found
    elif identity == "iotaPhi":
        r = iota_phi_battery(n, samples, seed)
        rep = RestrictionReport(r.passed, samples, [None] * r.failures["agreement"])
    else:
        raise ContactError(f"unknown identity {identity!r}")
    return {"identity": identity, "pass": rep.passed, "samples": rep.samples,
            "maxResidual": 0.0 if rep.passed else 1.0, "mismatches": len(rep.mismatches), **extra}
