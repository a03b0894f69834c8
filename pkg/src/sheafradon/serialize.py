"""JSON input formats. Rationals travel as strings "p/q"."""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

import jsonschema

from .cellsheaf import CellSheaf, IndicatorSpec, SheafError, SheafSpec, compile_sheaf
from .euler import CFun, CFunCircle
from .exactlin import ChainComplex, Mat, rat
from .knotlab import PLKnot
from .plgeom import FLIP, LCSet, Arrangement1D, Arrangement2D, Line, Pred, arrangement_for


class InputError(ValueError):
    pass


_SCHEMAS: dict = {}


def schema(name: str) -> dict:
    if name not in _SCHEMAS:
        text = resources.files("sheafradon").joinpath(f"schemas/{name}.schema.json").read_text()
        _SCHEMAS[name] = json.loads(text)
    return _SCHEMAS[name]


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc


def validate(doc: dict, name: str) -> None:
    try:
        jsonschema.validate(doc, schema(name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"schema {name}: {exc.message} at {where}") from exc


def parse_rat(s) -> Fraction:
    try:
        return rat(s)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"not a rational: {s!r}") from exc


def parse_vector(s: str, n: int | None = None) -> tuple:
    parts = [p for p in s.split(",") if p.strip()]
    v = tuple(parse_rat(p.strip()) for p in parts)
    if n is not None and len(v) != n:
        raise InputError(f"expected {n} components in {s!r}")
    return v


def parse_constraint(c: dict, dimension: int) -> Pred:
    a, cc, rel = parse_rat(c["a"]), parse_rat(c["c"]), c["rel"]
    b = parse_rat(c.get("b", 0))
    if dimension == 1:
        if b != 0 or a == 0:
            raise InputError("1D constraints need b = 0 and a != 0")
        return Pred(cc / a, FLIP[rel] if a < 0 else rel)
    if a == 0 and b == 0:
        raise InputError("degenerate constraint a = b = 0")
    return Pred.of(a, b, cc, rel)


def parse_set(constraints: list, dimension: int) -> LCSet:
    return LCSet(tuple(parse_constraint(c, dimension) for c in constraints))


def sheaf_spec_from_json(doc: dict) -> SheafSpec:
    validate(doc, "sheaf")
    dim = doc.get("dimension", 2)
    inds = tuple(IndicatorSpec(parse_set(i["constraints"], dim), i.get("shift", 0), i.get("mult", 1))
                 for i in doc["indicators"])
    return SheafSpec(inds, dim)


def sheaf_from_json(doc: dict) -> CellSheaf:
    if "explicit" in doc:
        validate(doc, "sheaf")
        return _explicit_sheaf(doc["explicit"], doc.get("dimension", 2))
    try:
        return compile_sheaf(sheaf_spec_from_json(doc))
    except SheafError as exc:
        raise InputError(str(exc)) from exc


def _matrix(rows, r: int, c: int) -> Mat:
    m = Mat.from_rows([[parse_rat(v) for v in row] for row in rows], cols=c)
    if m.rows != r:
        raise InputError(f"matrix has {m.rows} rows, expected {r}")
    return m


def _explicit_sheaf(ex: dict, dimension: int) -> CellSheaf:
    """Cells keyed by sign vectors; maps given on covering pairs and composed along chains."""
    if dimension == 2:
        lines = [Line(parse_rat(l["a"]), parse_rat(l.get("b", 0)), parse_rat(l["c"])) for l in ex["lines"]]
        B = Arrangement2D(lines)
        order = [B.lines.index(ln) for ln in lines]
    else:
        pts = [parse_rat(l["c"]) / parse_rat(l["a"]) for l in ex["lines"]]
        B = Arrangement1D(pts)
        order = [B.breakpoints.index(p) for p in pts]

    def cell_of(signs) -> int:
        key = [0] * len(signs)
        for i, s in enumerate(signs):
            key[order[i]] = s
        try:
            return B._by_sign[tuple(key)]
        except KeyError as exc:
            raise InputError(f"no cell with sign vector {signs}") from exc

    stalks = [ChainComplex({}) for _ in B.cells]
    for cell in ex["cells"]:
        c = cell_of(cell["signs"])
        dims = {int(k): v for k, v in cell["dims"].items() if v}
        d = {int(k): _matrix(m, dims.get(int(k) + 1, 0), dims.get(int(k), 0)) for k, m in cell.get("d", {}).items()}
        try:
            stalks[c] = ChainComplex(dims, d)
        except ValueError as exc:
            raise InputError(f"cell {cell['signs']}: {exc}") from exc
    given: dict = {}
    for m in ex.get("maps", []):
        c, d = cell_of(m["from"]), cell_of(m["to"])
        if not B.leq(c, d):
            raise InputError(f"{m['from']} is not a face of {m['to']}")
        given[(c, d)] = {int(k): _matrix(v, stalks[d].dim(int(k)), stalks[c].dim(int(k))) for k, v in m["maps"].items()}

    def gen(c, d):
        if (c, d) in given:
            return given[(c, d)]
        for f, _ in B.cofaces[c]:
            if f != d and B.leq(f, d):
                out = {}
                g1, g2 = gen(c, f), gen(f, d)
                for k in stalks[c].dims:
                    if k in g1 and k in g2:
                        out[k] = g2[k] @ g1[k]
                return out
        return {}

    try:
        return CellSheaf(B, stalks, gen_fn=gen, check=True)
    except (SheafError, ValueError) as exc:
        raise InputError(f"explicit sheaf: {exc}") from exc


def cfun_from_json(doc: dict) -> CFun:
    validate(doc, "cfun")
    sets = [parse_set(i["constraints"], 2) for i in doc["indicators"]]
    B = arrangement_for(sets, 2) if sets else Arrangement2D([])
    vals = [0] * len(B.cells)
    for s, i in zip(sets, doc["indicators"]):
        for c in B.cells_in(s):
            vals[c] += i["value"]
    return CFun(B, vals)


def cfun_circle_from_json(doc: dict) -> CFunCircle:
    validate(doc, "cfun-circle")
    pts = [tuple(parse_rat(v) for v in p) for p in doc["points"]]
    if not (len(pts) == len(doc["pointValues"]) == len(doc["arcValues"])):
        raise InputError("points, pointValues and arcValues must have equal length")
    if not pts:
        return CFunCircle.constant(doc.get("whole", 0))
    try:
        return CFunCircle.build(dict(zip(pts, doc["pointValues"])), dict(zip(pts, doc["arcValues"])))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def knot_from_json(doc: dict) -> PLKnot:
    validate(doc, "knot")
    try:
        return PLKnot.from_json(doc)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
