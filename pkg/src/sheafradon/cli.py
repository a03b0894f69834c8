"""Command-line entry point: every check prints one JSON run report on stdout.

Exit status 0 means pass, 1 means a check failed, 2 means the input was rejected.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from pathlib import Path

from . import acceptance, contact, euler, knotlab, radon, serialize
from .cellsheaf import SheafError, microstalk, singular_support, stalk_table, tamarkin_project
from .exactlin import fmt_rat
from .serialize import InputError, parse_rat, parse_vector

REPORT_SCHEMA = "sheafradon/report/v1"
EXACT_ONLY = {"ss", "microstalk", "radon-stalk", "radon-walls", "radon-barcode", "ss-image-check",
              "simpleness-transfer", "euler-radon", "euler-invert", "circle-dualities", "project1d", "diagram-check"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _load_sheaf(path):
    return serialize.sheaf_from_json(serialize.load_json(path))


def _vec(s):
    return parse_vector(s, 2)


# ---------------------------------------------------------------------------
# subcommands: each returns (pass, payload)

def cmd_ss(a):
    F = _load_sheaf(a.sheaf)
    rep = singular_support(F)
    entries = []
    for e in rep.entries:
        cell = F.base.cells[e.cell]
        entries.append({"cell": e.cell, "dim": cell.dim, "point": [fmt_rat(v) for v in cell.rep],
                        "sector": e.sector.to_json(), "covector": [fmt_rat(v) for v in e.covector],
                        "microstalk": e.microstalk.to_json()})
    return True, {"entries": entries, "empty": rep.is_empty()}


def cmd_microstalk(a):
    F = _load_sheaf(a.sheaf)
    dim = F.base.dimension
    x, xi = parse_vector(a.x, dim), parse_vector(a.xi, dim)
    if not any(xi):
        raise InputError("xi must be nonzero")
    return True, {"microstalk": microstalk(F, x, xi).to_json()}


def _query(a):
    try:
        return radon.LineQuery(_vec(a.nhat), parse_rat(a.r))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_radon_stalk(a):
    F = _load_sheaf(a.sheaf)
    q = _query(a)
    return True, {"query": q.to_json(), "stalk": radon.radon_stalk(F, q).to_json()}


def _directions(a):
    if a.nhat:
        dirs = [_vec(s) for s in a.nhat]
        if any(d == (0, 0) for d in dirs):
            raise InputError("direction must be nonzero")
        return dirs
    return radon.direction_grid(a.grid)


def cmd_radon_walls(a):
    F = _load_sheaf(a.sheaf)
    return True, radon.wall_set(F, _directions(a)).to_json()


def cmd_radon_barcode(a):
    F = _load_sheaf(a.sheaf)
    nhat = _vec(a.nhat)
    if nhat == (0, 0):
        raise InputError("direction must be nonzero")
    bc, table = radon.direction_barcode(F, nhat)
    return True, {"nhat": [fmt_rat(v) for v in nhat], "units": "offset",
                  "barcode": bc.to_json(), "table": [{"c": fmt_rat(t), "stalk": g.to_json()} for t, g in table]}


def cmd_ss_image_check(a):
    F = _load_sheaf(a.sheaf)
    rep = radon.ss_image_check(F, radon.direction_grid(a.grid))
    return rep.passed, rep.to_json()


def cmd_simpleness(a):
    F = _load_sheaf(a.sheaf)
    if (a.x is None) != (a.xi is None):
        raise InputError("give both --x and --xi, or neither")
    pts = [(_vec(a.x), _vec(a.xi))] if a.x is not None else radon.conormal_samples(F)
    reps = [radon.simpleness_transfer(F, x, xi) for x, xi in pts]
    return all(r.passed for r in reps), {"samples": [r.to_json() for r in reps]}


def _load_cfun(a):
    if a.cfun and a.sheaf:
        raise InputError("give --cfun or --sheaf, not both")
    if a.cfun:
        return serialize.cfun_from_json(serialize.load_json(a.cfun))
    if a.sheaf:
        return euler.local_euler(_load_sheaf(a.sheaf))
    raise InputError("--cfun or --sheaf is required")


def cmd_euler_radon(a):
    phi = _load_cfun(a)
    q = _query(a)
    R = euler.EulerRadonTransform(phi)
    return True, {"query": q.to_json(), "value": R.at_query(q), "integral": euler.euler_integral(phi)}


def cmd_euler_invert(a):
    if a.cfun or a.sheaf:
        phis = [_load_cfun(a)]
    else:
        if a.random < 0 or a.lines < 0:
            raise InputError("--random and --lines must be non-negative")
        rng = random.Random(a.seed)
        phis = [euler.random_cfun(rng, a.lines) for _ in range(a.random)]
    K = euler.derive_kernel_constants()
    results = []
    for phi in phis:
        if not phi.is_compactly_supported():
            raise InputError("function must be compactly supported")
        results.append(euler.inversion_check(phi, check_arcs=a.check_arcs))
    failures = [dict(r.witness, function=i) for i, r in enumerate(results) if not r.passed]
    ok = not failures
    return ok, {"functions": len(results), "points": sum(r.checked for r in results), "failures": failures,
                "kernel": {"offDiagonal": K.off_diagonal, "diagonal": K.diagonal}}


def cmd_circle(a):
    if a.circle:
        phis = [serialize.cfun_circle_from_json(serialize.load_json(a.circle))]
    else:
        rng = random.Random(a.seed)
        phis = [euler.random_cfun_circle(rng) for _ in range(a.random)]
    reps = [euler.circle_dualities(p) for p in phis]
    bad = [dict(r.to_json(), function=i) for i, r in enumerate(reps) if not r.passed]
    payload = {"functions": len(reps), "failures": bad}
    if a.circle:
        payload["report"] = reps[0].to_json()
        payload["rPlus"] = euler.r_plus(phis[0]).to_json()
        payload["rMinus"] = euler.r_minus(phis[0]).to_json()
    return not bad, payload


def cmd_project1d(a):
    F = _load_sheaf(a.sheaf)
    if F.base.dimension != 1:
        raise InputError("project1d needs a sheaf on the line (\"dimension\": 1)")
    P = tamarkin_project(F, strict=not a.lenient)
    neg = singular_support(P.sheaf).has_negative()
    pts = [t for t, _ in P.table]
    PP = tamarkin_project(P.sheaf, strict=False)
    idem = stalk_table(PP.sheaf, pts) == stalk_table(P.sheaf, pts)
    return not neg and idem, {
        "barcode": P.barcode.to_json(),
        "table": [{"t": fmt_rat(t), "stalk": g.to_json()} for t, g in P.table],
        "negativeCovectors": neg, "idempotent": idem,
    }


SPH_MAPS = {"chiPlus", "chiMinus"}


def cmd_contact_check(a):
    if a.samples < 0 or a.n < 1:
        raise InputError("--samples must be >= 0 and --n >= 1")
    if a.mode == "exact":
        if a.map == "chi":
            rep = contact.exact_chi_battery(a.n, a.samples, a.seed)
        elif a.map in SPH_MAPS:
            rep = contact.exact_sph_battery(a.n, a.samples, a.seed)
        else:
            raise InputError(f"map {a.map!r} has no exact battery")
        return rep.passed, {"map": a.map, "mode": "exact", "n": a.n, **rep.to_json()}
    rep = contact.symplectic_check(a.map, a.n, a.samples, h=a.step, seed=a.seed)
    ok = rep.max_residual < a.tol
    return ok, {"mode": "float", "n": a.n, "tolerance": a.tol, "pass": ok, **rep.to_json()}


def cmd_diagram(a):
    if a.samples < 0 or a.n < 1:
        raise InputError("--samples must be >= 0 and --n >= 1")
    r = contact.diagram_check(a.identity, a.n, a.samples, a.seed)
    return r["pass"], r


def cmd_conormal(a):
    k = serialize.knot_from_json(serialize.load_json(a.knot)) if a.knot else knotlab.trefoil()
    try:
        s = knotlab.sample_conormal(k, a.per_seg, a.per_fiber, exact=a.mode == "exact")
    except knotlab.KnotError as exc:
        raise InputError(str(exc)) from exc
    rep = knotlab.map_conormal(s, h=a.step)
    if a.out:
        with open(a.out, "w", newline="") as fh:
            knotlab.write_csv(rep, fh)
    return rep.passed(), rep.to_json()


def cmd_accept(a):
    if a.number not in acceptance.CRITERIA:
        raise InputError(f"criterion must be one of 1..{len(acceptance.CRITERIA)}")
    res = acceptance.run(a.number)
    print(res.line(), file=sys.stderr)
    return res.passed, res.to_json(timing=a.timing)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sheafradon", description="Exact checks for the sheaf Radon transform and its contact geometry.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--mode", choices=("exact", "float"), default="exact")
        sp.add_argument("--out", help="write the report (CSV samples for conormal) to this file")
        sp.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("ss", cmd_ss, "singular support of a sheaf")
    sp.add_argument("--sheaf", required=True)
    sp = add("microstalk", cmd_microstalk, "microstalk at a covector")
    sp.add_argument("--sheaf", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--xi", required=True)
    sp = add("radon-stalk", cmd_radon_stalk, "stalk of the Radon transform at (nhat, r)")
    sp.add_argument("--sheaf", required=True)
    sp.add_argument("--nhat", required=True)
    sp.add_argument("--r", required=True)
    sp = add("radon-walls", cmd_radon_walls, "wall offsets per direction")
    sp.add_argument("--sheaf", required=True)
    sp.add_argument("--nhat", action="append")
    sp.add_argument("--grid", type=int, default=2)
    sp = add("radon-barcode", cmd_radon_barcode, "barcode along one direction")
    sp.add_argument("--sheaf", required=True)
    sp.add_argument("--nhat", required=True)
    sp = add("ss-image-check", cmd_ss_image_check, "walls of the transform versus chi(SS)")
    sp.add_argument("--sheaf", required=True)
    sp.add_argument("--grid", type=int, default=2)
    sp = add("simpleness-transfer", cmd_simpleness, "microstalk rank versus bar-endpoint multiplicity")
    sp.add_argument("--sheaf", required=True)
    sp.add_argument("--x")
    sp.add_argument("--xi")
    sp = add("euler-radon", cmd_euler_radon, "Euler-calculus Radon transform at (nhat, r)")
    sp.add_argument("--cfun")
    sp.add_argument("--sheaf")
    sp.add_argument("--nhat", required=True)
    sp.add_argument("--r", required=True)
    sp = add("euler-invert", cmd_euler_invert, "inversion check for constructible functions")
    sp.add_argument("--cfun")
    sp.add_argument("--sheaf")
    sp.add_argument("--random", type=int, default=100)
    sp.add_argument("--lines", type=int, default=6)
    sp.add_argument("--check-arcs", action="store_true")
    sp = add("circle-dualities", cmd_circle, "spherical and projective dualities on the circle")
    sp.add_argument("--circle")
    sp.add_argument("--random", type=int, default=100)
    sp = add("project1d", cmd_project1d, "projector onto nonnegative singular support on the line")
    sp.add_argument("--sheaf", required=True)
    sp.add_argument("--lenient", action="store_true", help="allow support unbounded above")
    sp = add("contact-check", cmd_contact_check, "contact transform identities")
    sp.add_argument("--map", default="chi", choices=("chi", "chiPlus", "chiMinus", "chiPlusHom", "chiMinusHom"))
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--step", type=float, default=1e-5)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp = add("diagram-check", cmd_diagram, "one kernel restriction identity")
    sp.add_argument("--identity", required=True, choices=contact.DIAGRAM_IDENTITIES)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--samples", type=int, default=10000)
    sp = add("conormal", cmd_conormal, "Legendrian knot conormal samples")
    sp.add_argument("--knot")
    sp.add_argument("--per-seg", type=int, default=10)
    sp.add_argument("--per-fiber", type=int, default=16)
    sp.add_argument("--step", type=float, default=1e-4)
    sp = add("accept", cmd_accept, "run one acceptance criterion")
    sp.add_argument("number", type=int)
    for sp in sub.choices.values():
        if sp.get_default("fn") is cmd_conormal:
            sp.set_defaults(mode="float")
    return p


_FILE_ARGS = ("sheaf", "cfun", "circle", "knot")


def inputs_digest(args: argparse.Namespace) -> str:
    h = hashlib.sha256()
    skip = {"fn", "out", "timing"}
    for k in sorted(vars(args)):
        if k not in skip:
            h.update(f"{k}={getattr(args, k)!r}\n".encode())
    for k in _FILE_ARGS:
        path = getattr(args, k, None)
        if path:
            try:
                h.update(Path(path).read_bytes())
            except OSError:
                pass
    return h.hexdigest()


def dispatch(argv=None) -> tuple[int, dict | None]:
    args = build_parser().parse_args(argv)
    if args.command in EXACT_ONLY and args.mode != "exact":
        print(f"sheafradon: {args.command} is exact-only", file=sys.stderr)
        return 2, None
    t0 = time.perf_counter()
    try:
        ok, payload = args.fn(args)
    except (InputError, SheafError, radon.UnsupportedCovector, euler.NonConstructible,
            knotlab.KnotError, contact.ContactError) as exc:
        print(f"sheafradon: {exc}", file=sys.stderr)
        return 2, None
    report = {"$schema": REPORT_SCHEMA, "command": args.command, "inputsDigest": inputs_digest(args),
              "pass": bool(ok), "payload": payload}
    if args.timing:
        report["wallClock"] = round(time.perf_counter() - t0, 6)
    text = json.dumps(report, indent=2)
    print(text)
    if args.out and args.command != "conormal":
        Path(args.out).write_text(text + "\n")
    return (0 if ok else 1), report


def main(argv=None) -> int:
    try:
        code, _ = dispatch(argv)
    except Exception as exc:  # an internal error is neither a failed check nor bad input
        print(f"sheafradon: internal error: {exc!r}", file=sys.stderr)
        return 3
    return code


if __name__ == "__main__":
    sys.exit(main())
