"""Exact linear algebra over the rationals.

Matrices are stored sparsely (row -> {col: Fraction}); every routine is exact.
Chain complexes here are *cochain* complexes: ``d[k]`` maps degree ``k`` to
degree ``k + 1``.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction
from typing import Union

Rat = Fraction
Number = Union[int, Fraction]


def rat(value) -> Fraction:
    """Parse ints, Fractions and strings such as ``"3/4"`` or ``"-2"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not accepted where exact rationals are required")
    return Fraction(value)


def fmt_rat(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Mat:
    """Sparse exact matrix."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Mapping[int, Mapping[int, Number]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        self.rows = rows
        self.cols = cols
        clean: dict[int, dict[int, Fraction]] = {}
        if data:
            for i, row in data.items():
                if not 0 <= i < rows:
                    raise IndexError(f"row {i} out of range for {rows} rows")
                r = {}
                for j, v in row.items():
                    if not 0 <= j < cols:
                        raise IndexError(f"column {j} out of range for {cols} columns")
                    if v:
                        r[j] = Fraction(v)
                if r:
                    clean[i] = r
        self._data = clean

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Number]], cols: int | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        data = {}
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ValueError("ragged rows")
            data[i] = {j: rat(v) if isinstance(v, str) else v for j, v in enumerate(r)}
        return cls(len(rows), ncols, data)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._data.get(i, {}).get(j, Fraction(0))

    def row(self, i: int) -> dict[int, Fraction]:
        return dict(self._data.get(i, {}))

    def items(self) -> Iterator[tuple[int, int, Fraction]]:
        for i, r in self._data.items():
            for j, v in r.items():
                yield i, j, v

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> list[list[Fraction]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not self._data

    def transpose(self) -> "Mat":
        data: dict[int, dict[int, Fraction]] = {}
        for i, j, v in self.items():
            data.setdefault(j, {})[i] = v
        return Mat(self.cols, self.rows, data)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        data: dict[int, dict[int, Fraction]] = {}
        for i, r in self._data.items():
            acc: dict[int, Fraction] = {}
            for k, a in r.items():
                for j, b in other._data.get(k, {}).items():
                    acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                data[i] = acc
        return Mat(self.rows, other.cols, data)

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        data = {i: dict(r) for i, r in self._data.items()}
        for i, j, v in other.items():
            row = data.setdefault(i, {})
            row[j] = row.get(j, 0) + v
        return Mat(self.rows, self.cols, data)

    def __neg__(self) -> "Mat":
        return self.scale(-1)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def scale(self, s: Number) -> "Mat":
        return Mat(self.rows, self.cols, {i: {j: s * v for j, v in r.items()} for i, r in self._data.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat) and self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted((i, j, v) for i, j, v in self.items()))))

    def __repr__(self) -> str:
        return f"Mat({self.rows}x{self.cols}, nnz={sum(len(r) for r in self._data.values())})"

    def apply(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, r in self._data.items():
            s = sum((v * vec[j] for j, v in r.items() if j in vec), Fraction(0))
            if s:
                out[i] = s
        return out


def block(blocks: Mapping[tuple[int, int], Mat], row_sizes: list[int], col_sizes: list[int]) -> Mat:
    """Assemble a block matrix; missing blocks are zero."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    data: dict[int, dict[int, Fraction]] = {}
    for (bi, bj), m in blocks.items():
        if m.shape != (row_sizes[bi], col_sizes[bj]):
            raise ValueError(f"block {(bi, bj)} has shape {m.shape}, expected {(row_sizes[bi], col_sizes[bj])}")
        for i, j, v in m.items():
            row = data.setdefault(roff[bi] + i, {})
            row[coff[bj] + j] = row.get(coff[bj] + j, 0) + v
    return Mat(roff[-1], coff[-1], data)


def _echelon(rows: list[dict[int, Fraction]]) -> list[tuple[int, dict[int, Fraction]]]:
    """Row-reduce sparse rows; returns (pivot column, normalized row) pairs in reduced form."""
    pivots: dict[int, dict[int, Fraction]] = {}
    for r in rows:
        r = dict(r)
        while r:
            # eliminate against existing pivots
            hit = [c for c in r if c in pivots]
            if not hit:
                break
            for c in hit:
                if c not in r:
                    continue
                f = r[c]
                for cc, vv in pivots[c].items():
                    nv = r.get(cc, 0) - f * vv
                    if nv:
                        r[cc] = nv
                    else:
                        r.pop(cc, None)
        if not r:
            continue
        p = min(r)
        inv = 1 / r[p]
        r = {c: v * inv for c, v in r.items()}
        # keep pivot rows fully reduced
        for c0, prow in pivots.items():
            if p in prow:
                f = prow[p]
                for cc, vv in r.items():
                    nv = prow.get(cc, 0) - f * vv
                    if nv:
                        prow[cc] = nv
                    else:
                        prow.pop(cc, None)
        pivots[p] = r
    return sorted(pivots.items())


def rank(m: Mat) -> int:
    """Exact rank over Q by pivoted Gaussian elimination."""
    if m.rows == 0 or m.cols == 0:
        return 0
    # eliminate along the shorter side
    rows = [m.row(i) for i in range(m.rows)] if m.rows <= m.cols else [m.transpose().row(i) for i in range(m.cols)]
    return len(_echelon([r for r in rows if r]))


def nullspace(m: Mat) -> list[dict[int, Fraction]]:
    """Basis of {v : m v = 0} as sparse vectors indexed by column."""
    rref = _echelon([m.row(i) for i in range(m.rows)])
    pivot_cols = {p for p, _ in rref}
    basis = []
    for free in range(m.cols):
        if free in pivot_cols:
            continue
        v = {free: Fraction(1)}
        for p, row in rref:
            coef = row.get(free)
            if coef:
                v[p] = -coef
        basis.append(v)
    return basis


def columns_to_mat(vectors: list[Mapping[int, Fraction]], length: int) -> Mat:
    data: dict[int, dict[int, Fraction]] = {}
    for j, v in enumerate(vectors):
        for i, x in v.items():
            data.setdefault(i, {})[j] = x
    return Mat(length, len(vectors), data)


class GradedDims(Mapping):
    """Finitely supported map degree -> positive dimension."""

    __slots__ = ("_d",)

    def __init__(self, dims: Mapping[int, int] | Iterable[tuple[int, int]] | None = None):
        items = dims.items() if isinstance(dims, Mapping) else (dims or ())
        d: dict[int, int] = {}
        for k, v in items:
            k, v = int(k), int(v)
            if v < 0:
                raise ValueError("negative dimension")
            if v:
                d[k] = d.get(k, 0) + v
        self._d = dict(sorted(d.items()))

    def __getitem__(self, k: int) -> int:
        return self._d[k]

    def get(self, k, default=0):
        return self._d.get(k, default)

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __eq__(self, other):
        if isinstance(other, GradedDims):
            return self._d == other._d
        if isinstance(other, Mapping):
            return self._d == {int(k): v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._d.items()))

    def __repr__(self):
        return f"GradedDims({self._d})"

    def __add__(self, other: "GradedDims") -> "GradedDims":
        out = dict(self._d)
        for k, v in other.items():
            out[k] = out.get(k, 0) + v
        return GradedDims(out)

    def shift(self, n: int) -> "GradedDims":
        """Degree shift [n]: degree k moves to k - n."""
        return GradedDims({k - n: v for k, v in self._d.items()})

    @property
    def total(self) -> int:
        return sum(self._d.values())

    @property
    def euler(self) -> int:
        return sum((-1) ** k * v for k, v in self._d.items())

    def is_zero(self) -> bool:
        return not self._d

    def to_json(self) -> dict[str, int]:
        return {str(k): v for k, v in self._d.items()}


class ChainComplex:
    """Bounded cochain complex of finite-dimensional Q-vector spaces.

    ``dims[k]`` is the dimension in degree ``k``; ``d[k]`` is a ``dims[k+1] x dims[k]``
    matrix. Missing degrees are zero.
    """

    def __init__(self, dims: Mapping[int, int], d: Mapping[int, Mat] | None = None, check: bool = True):
        self.dims = {int(k): int(v) for k, v in dims.items() if v}
        self.d: dict[int, Mat] = {}
        for k, m in (d or {}).items():
            if m.is_zero():
                continue
            if m.shape != (self.dim(k + 1), self.dim(k)):
                raise ValueError(f"d[{k}] has shape {m.shape}, expected {(self.dim(k + 1), self.dim(k))}")
            self.d[k] = m
        if check:
            for k in self.d:
                if k + 1 in self.d and not (self.d[k + 1] @ self.d[k]).is_zero():
                    raise ValueError(f"d[{k + 1}] d[{k}] != 0")

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def diff(self, k: int) -> Mat:
        return self.d.get(k) or Mat.zeros(self.dim(k + 1), self.dim(k))

    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def euler(self) -> int:
        return sum((-1) ** k * v for k, v in self.dims.items())

    def shift(self, n: int) -> "ChainComplex":
        """C[n]: degree k of the result is degree k + n of C, differential negated when n is odd."""
        s = -1 if n % 2 else 1
        return ChainComplex({k - n: v for k, v in self.dims.items()},
                            {k - n: m.scale(s) for k, m in self.d.items()}, check=False)

    def pad(self, extra: Mapping[int, int]) -> "ChainComplex":
        """Append zero basis vectors (zero rows/columns) in the given degrees."""
        dims = dict(self.dims)
        for k, e in extra.items():
            dims[k] = dims.get(k, 0) + e
        d = {}
        for k, m in self.d.items():
            d[k] = Mat(dims.get(k + 1, 0), dims.get(k, 0), {i: m.row(i) for i in range(m.rows)})
        return ChainComplex(dims, d, check=False)

    @classmethod
    def zero(cls) -> "ChainComplex":
        return cls({})

    @classmethod
    def concentrated(cls, dims: Mapping[int, int]) -> "ChainComplex":
        return cls(dims)

    def __repr__(self):
        return f"ChainComplex(dims={dict(sorted(self.dims.items()))})"


class ChainMap:
    """Degreewise matrices ``f[k]: source^k -> target^k`` commuting with differentials."""

    def __init__(self, source: ChainComplex, target: ChainComplex, f: Mapping[int, Mat] | None = None,
                 check: bool = True):
        self.source = source
        self.target = target
        self.f: dict[int, Mat] = {}
        for k, m in (f or {}).items():
            if m.is_zero():
                continue
            if m.shape != (target.dim(k), source.dim(k)):
                raise ValueError(f"f[{k}] has shape {m.shape}, expected {(target.dim(k), source.dim(k))}")
            self.f[k] = m
        if check:
            for k in set(source.dims) | set(target.dims):
                lhs = self.at(k + 1) @ source.diff(k)
                rhs = target.diff(k) @ self.at(k)
                if lhs != rhs:
                    raise ValueError(f"not a chain map in degree {k}")

    def at(self, k: int) -> Mat:
        return self.f.get(k) or Mat.zeros(self.target.dim(k), self.source.dim(k))

    @classmethod
    def identity(cls, c: ChainComplex) -> "ChainMap":
        return cls(c, c, {k: Mat.identity(n) for k, n in c.dims.items()}, check=False)

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex) -> "ChainMap":
        return cls(source, target, {}, check=False)


def cohomology(c: ChainComplex) -> GradedDims:
    """dim H^k = dim C^k - rank d_k - rank d_{k-1}."""
    ranks = {k: rank(m) for k, m in c.d.items()}
    return GradedDims({k: n - ranks.get(k, 0) - ranks.get(k - 1, 0) for k, n in c.dims.items()})


def cone(f: ChainMap) -> ChainComplex:
    """Mapping cone: degree k is source^{k+1} (+) target^k, d(a, b) = (-d a, f a + d b)."""
    A, B = f.source, f.target
    degrees = {k - 1 for k in A.dims} | set(B.dims)
    dims = {k: A.dim(k + 1) + B.dim(k) for k in degrees}
    d = {}
    for k in degrees | {k - 1 for k in degrees}:
        rs = [A.dim(k + 2), B.dim(k + 1)]
        cs = [A.dim(k + 1), B.dim(k)]
        m = block({(0, 0): -A.diff(k + 1), (1, 0): f.at(k + 1), (1, 1): B.diff(k)}, rs, cs)
        if not m.is_zero():
            d[k] = m
    return ChainComplex(dims, d, check=False)


def fiber(f: ChainMap) -> ChainComplex:
    """cone(f) shifted down by one: fiber^k = source^k (+) target^{k-1}."""
    return cone(f).shift(-1)


def induced_rank(f: ChainMap, k: int) -> int:
    """Rank of the map H^k(source) -> H^k(target)."""
    cycles = nullspace(f.source.diff(k))
    if not cycles:
        return 0
    images = [f.at(k).apply(z) for z in cycles]
    bdry = f.target.diff(k - 1)
    n = f.target.dim(k)
    cols = [bdry.transpose().row(j) for j in range(bdry.cols)]
    stacked = columns_to_mat(images + cols, n)
    return rank(stacked) - rank(bdry)


def direct_sum(complexes: list[ChainComplex]) -> ChainComplex:
    degrees = sorted({k for c in complexes for k in c.dims})
    dims = {k: sum(c.dim(k) for c in complexes) for k in degrees}
    d = {}
    for k in degrees:
        blocks = {(i, i): c.diff(k) for i, c in enumerate(complexes)}
        d[k] = block(blocks, [c.dim(k + 1) for c in complexes], [c.dim(k) for c in complexes])
    return ChainComplex(dims, d, check=False)
