"""Command-line front end: ``defcat <command> [options] FILE``.

Every command prints a report with the fields ``command``, ``inputs_digest``, ``seed``,
``results`` and ``exit_status``.  Exit codes: 0 success, 1 mathematical negative
(not flat, not a cocycle, not equivalent, ...), 2 input error, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import checks
from . import diagram as dg
from . import funmod as fm
from . import hochschild as hc
from . import lift as lf
from . import ring as rg
from . import serialize as se
from .basechange import BaseChange
from .lincat import (CategoryError, LinCategory, LinearDeformation, Morphism, make_strict, validate_category,
                     validate_deformation, verify_deformation_equivalence)

OK, NEGATIVE, INPUT_ERROR, INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    """Bad command-line input that the schema layer does not see."""


class Outcome:
    def __init__(self, results: dict, status: int = OK, lines=None):
        self.results = results
        self.status = status
        self.lines = list(lines or [])


# -- workspace access ------------------------------------------------------------------------


def _pick(ws: se.Workspace, name, *types):
    name = name or ws.first(*types)
    if name not in ws.raw:
        raise InputError(f"no object named {name!r}")
    if ws.type_of(name) not in types:
        raise InputError(f"{name!r} is a {ws.type_of(name)}, expected {' or '.join(types)}")
    return name, ws.get(name)


def _pick_all(ws: se.Workspace, *types) -> list:
    return [n for n in ws.names if ws.type_of(n) in types]


def _category(ws, name) -> LinCategory:
    n, c = _pick(ws, name, "category")
    rep = validate_category(c)
    if not rep.valid:
        raise InputError(f"category {n!r} is invalid: {'; '.join(rep.violations[:3])}")
    return c


def _deformation(ws, name) -> LinearDeformation:
    n, d = _pick(ws, name, "deformation")
    rep = validate_deformation(d)
    if not rep.valid:
        raise InputError(f"deformation {n!r} is invalid: {'; '.join(rep.violations[:3])}")
    return d


def _morphism(ws, name, category: LinCategory) -> Morphism:
    _, m = _pick(ws, name, "morphism")
    if not m.category.structurally_equal(category):
        raise InputError(f"morphism {name!r} does not live in the total category of the deformation")
    return Morphism(category, m.source, m.target, m.coords)


def _surjection_for(ws, args, cat: LinCategory):
    if args.deformation:
        return _deformation(ws, args.deformation).theta
    names = _pick_all(ws, "surjection")
    if names:
        return ws.get(args.surjection or names[0])
    defs = _pick_all(ws, "deformation")
    if defs:
        return ws.get(defs[0]).theta
    raise InputError("need a surjection or a deformation in the workspace")


# -- plain JSON values --------------------------------------------------------------------------


def plain(x):
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return plain(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return [x.numerator, x.denominator]
    return x


# -- commands ---------------------------------------------------------------------------------


def cmd_validate(ws, args) -> Outcome:
    out, lines, status = {}, [], OK
    for name in ws.names:
        t = ws.type_of(name)
        obj = ws.get(name)
        if t == "ring":
            violations = rg.validate_base_ring(obj).violations
        elif t == "surjection":
            violations = obj.violations()
        elif t == "category":
            violations = validate_category(obj).violations
        elif t == "deformation":
            rep = validate_deformation(obj, seed=args.seed)
            violations = rep.violations
        elif t == "functor_module":
            violations = validate_category(obj.category).violations
            if not violations:
                obj.module  # building the concrete module checks the presentation
        elif t == "presheaf":
            violations = obj.violations()
        else:
            violations = []
        out[name] = {"type": t, "valid": not violations, "violations": violations[:10]}
        lines.append(f"{name} ({t}): {'valid' if not violations else 'INVALID ' + '; '.join(violations[:3])}")
        if violations:
            status = NEGATIVE
    return Outcome(out, status, lines)


def _two(ws, args, types):
    objs = _pick_all(ws, *types)
    left = args.left or (objs[0] if objs else None)
    right = args.right or (objs[1] if len(objs) > 1 else left)
    if left is None:
        raise InputError(f"need objects of type {' or '.join(types)}")
    return (left, ws.get(left)), (right, ws.get(right))


def _check_degree(args) -> int:
    if args.degree < 0:
        raise InputError("degree must be nonnegative")
    if args.degree > args.degree_cap:
        raise InputError(f"degree {args.degree} exceeds --degree-cap {args.degree_cap}")
    return args.degree


def cmd_tor(ws, args) -> Outcome:
    _check_degree(args)
    (ln, X), (rn, M) = _two(ws, args, ("module", "functor_module"))
    if not isinstance(X, rg.FpModule):
        raise InputError("the left argument of Tor must be an R-module")
    if isinstance(M, rg.FpModule):
        T = rg.tor(args.degree, X, M)
        res = {"left": ln, "right": rn, "degree": args.degree, "dim": T.dim}
    else:
        T = fm.tor_pointwise(args.degree, X, M)
        res = {"left": ln, "right": rn, "degree": args.degree, "dim": T.dim,
               "values": dict(zip(M.category.objects, T.dims()))}
    return Outcome(res, OK, [f"dim Tor_{args.degree}({ln}, {rn}) = {res['dim']}"])


def cmd_ext(ws, args) -> Outcome:
    (ln, X), (rn, M) = _two(ws, args, ("module", "functor_module"))
    i = _check_degree(args)
    if isinstance(X, rg.FpModule) and isinstance(M, rg.FpModule):
        res = {"dim": rg.ext(i, X, M).dim, "setting": "R-modules"}
    elif isinstance(X, rg.FpModule):
        E = fm.ext_pointwise(i, X, M)
        res = {"dim": E.dim, "setting": "pointwise", "values": dict(zip(M.category.objects, E.dims()))}
    elif isinstance(M, fm.FpFunctorModule):
        res = {"dim": fm.ext_cat(i, X, M, degree_cap=args.degree_cap).dim, "setting": "functor modules"}
    else:
        raise InputError("Ext from a functor module into an R-module is not defined")
    res.update(left=ln, right=rn, degree=i)
    return Outcome(res, OK, [f"dim Ext^{i}({ln}, {rn}) = {res['dim']}"])


def cmd_flat(ws, args) -> Outcome:
    name, M = _pick(ws, args.name, "module", "functor_module")
    if isinstance(M, rg.FpModule):
        flat, coflat = rg.is_flat(M), rg.is_coflat(M)
    else:
        flat, coflat = fm.is_flat_functor(M), fm.is_coflat_functor(M)
    res = {"name": name, "flat": flat, "coflat": coflat}
    return Outcome(res, OK if flat else NEGATIVE, [f"{name}: {'flat' if flat else 'not flat'}, "
                                                   f"{'coflat' if coflat else 'not coflat'}"])


def _base_change(ws, args):
    name, F = _pick(ws, args.name, "functor_module")
    theta = _surjection_for(ws, args, F.category)
    return name, F, BaseChange(F.category, theta)


def cmd_basechange(ws, args) -> Outcome:
    name, F, B = _base_change(ws, args)
    up, hom_up = B.tensor_up(F), B.hom_up(F)
    adj = []
    for k, G in enumerate(fm.simples(B.reduced)):
        t, h = B.tensor_adjunction(F, G), B.hom_adjunction(G, F)
        tri = B.triangle_identities(F, G)
        adj.append({"simple": k, "tensor_bijective": t.bijective, "hom_bijective": h.bijective,
                    "triangles": all(tri.values())})
    objs = B.reduced.objects
    res = {"name": name, "dims": dict(zip(F.category.objects, F.dims())),
           "tensor_up": dict(zip(objs, up.dims())), "hom_up": dict(zip(objs, hom_up.dims())),
           "tensor_up_presentation_agrees": bool(up.dims() == B.tensor_up_presentation(F).dims()),
           "adjunctions": adj}
    ok = all(a["tensor_bijective"] and a["hom_bijective"] and a["triangles"] for a in adj)
    lines = [f"S ⊗ {name}: {up.dims()}", f"Hom_R(S, {name}): {hom_up.dims()}",
             f"adjunctions {'verified' if ok else 'FAILED'} against {len(adj)} simples"]
    return Outcome(res, OK if ok else INTERNAL, lines)


def cmd_gr(ws, args) -> Outcome:
    name, F, B = _base_change(ws, args)
    G = B.gr(F)
    res = {"name": name, "dims": dict(zip(B.reduced.objects, G.dims())), "dim": G.dim, "total_dim": F.dim}
    return Outcome(res, OK, [f"gr {name}: {G.dims()} (total {G.dim} = {F.dim})"])


def cmd_hh(ws, args) -> Outcome:
    _check_degree(args)
    cat = _category(ws, args.category)
    h = hc.hh(cat, args.degree, normalized=not args.full)
    reps = [se.encode_cochain(c.representative)["blocks"] for c in h.classes]
    res = {"category": cat.name, "degree": args.degree, "dim": h.dim, "cocycle_dim": h.cocycle_dim,
           "coboundary_dim": h.coboundary_dim, "normalized": h.normalized, "representatives": reps}
    return Outcome(res, OK, [f"dim HH^{args.degree}({cat.name}) = {h.dim}"])


def cmd_classify(ws, args) -> Outcome:
    cat = _category(ws, args.category)
    cl = hc.classify(cat)
    summary = f"rigid: HH² = 0" if cl.rigid else f"HH² has dimension {cl.hh2.dim}"
    res = {"category": cat.name, "rigid": cl.rigid, "hh2": cl.hh2.dim, "hh1": cl.hh1.dim,
           "summary": summary, "pairwise_inequivalent": cl.pairwise_inequivalent, "all_valid": cl.all_valid,
           "deformations": [se.encode_deformation(d) for d in cl.deformations] if args.emit else
           [d.name for d in cl.deformations]}
    ok = cl.pairwise_inequivalent and cl.all_valid
    return Outcome(res, OK if ok else INTERNAL, [summary, f"HH¹ has dimension {cl.hh1.dim}"])


def cmd_deform(ws, args) -> Outcome:
    name, c = _pick(ws, args.name, "cochain")
    if c.degree != 2:
        raise InputError("a first-order deformation needs a 2-cochain")
    try:
        d = hc.first_order_deformation(c.category, c, name=name)
    except hc.NotACocycle as e:
        return Outcome({"name": name, "cocycle": False, "where": str(e)}, NEGATIVE, [f"{name} is not a cocycle"])
    rep = validate_deformation(d, seed=args.seed)
    res = {"name": name, "cocycle": True, "valid": rep.valid, "info": rep.info,
           "deformation": se.encode_deformation(d)}
    return Outcome(res, OK if rep.valid else INTERNAL,
                   [f"{name}: first-order deformation {'validates' if rep.valid else 'FAILS validation'}"])


def cmd_equiv(ws, args) -> Outcome:
    (ln, c1), (rn, c2) = _two(ws, args, ("cochain",))
    e = hc.are_equivalent(c1, c2)
    res = {"left": ln, "right": rn, "equivalent": e.equivalent, "verified": e.verified}
    if e.equivalent:
        res["witness"] = se.encode_cochain(e.witness)["blocks"]
    status = (OK if e.verified else INTERNAL) if e.equivalent else NEGATIVE
    return Outcome(res, status, [f"{ln} and {rn} are {'equivalent' if e.equivalent else 'not equivalent'}"])


def cmd_lift(ws, args) -> Outcome:
    d = _deformation(ws, args.deformation)
    c, th = d.total, d.theta
    get = lambda n: _morphism(ws, n, c)  # noqa: E731
    enc = lambda m: se.encode_array(c.field, m.coords)  # noqa: E731
    if args.iso:
        f, g0 = map(get, args.iso)
        g = lf.lift_isomorphism(f, g0, th)
        res = {"kind": "isomorphism", "inverse": enc(g),
               "exact": g @ f == c.identity_morphism(f.source) and f @ g == c.identity_morphism(f.target)}
    elif args.idempotent:
        e, r0, s0 = map(get, args.idempotent)
        r, s = lf.split_idempotent_lift(e, r0, s0, th)
        res = {"kind": "idempotent", "r": enc(r), "s": enc(s),
               "exact": s @ r == e and r @ s == c.identity_morphism(r.target)}
    elif args.biproduct:
        s1, s2, p1, p2 = map(get, args.biproduct)
        q1, q2 = lf.lift_biproduct(s1, s2, p1, p2, th)
        res = {"kind": "biproduct", "p1": enc(q1), "p2": enc(q2),
               "exact": all(lf.biproduct_equations(s1, s2, q1, q2).values())}
    else:
        B = BaseChange.of_deformation(d) if d.is_structurally_strict() else None
        if B is None:
            raise InputError("injective lifting needs a strict deformation; run strictify first")
        lifts = []
        for E in fm.indecomposable_injectives(d.reduced):
            L = B.lift_injective(E, seed=args.seed)
            lifts.append({"reduced_dims": E.dims(), "lift_dims": L.dims(), "injective": fm.is_injective(L),
                          "reduces_back": checks.witnessed_isomorphism(B.hom_up(L).module, E.module)})
        res = {"kind": "injectives", "lifts": lifts,
               "exact": all(x["injective"] and x["reduces_back"] for x in lifts)}
    return Outcome(res, OK if res["exact"] else INTERNAL,
                   [f"{res['kind']} lift {'exact' if res['exact'] else 'NOT exact'}"])


def cmd_strictify(ws, args) -> Outcome:
    name, d = _pick(ws, args.deformation, "deformation")
    s, wit = make_strict(d, seed=args.seed)
    rep = verify_deformation_equivalence(s, d, wit.functor, wit.transform, seed=args.seed)
    strict = s.is_structurally_strict()
    res = {"name": name, "was_strict": d.is_structurally_strict(), "strict": strict,
           "witness_verified": rep.valid, "deformation": se.encode_deformation(s)}
    ok = strict and rep.valid
    return Outcome(res, OK if ok else INTERNAL, [f"{name}: strict replacement {'verified' if ok else 'FAILED'}"])


def cmd_space(ws, args) -> Outcome:
    _, O = _pick(ws, args.name, "presheaf")
    D = dg.build_diagram_category(O.poset, O)
    hf = dg.hom_formula_check(D)
    acyc = dg.acyclicity_check(D)
    res = {"objects": list(D.category.objects), "hom_formula": hf.holds,
           "acyclicity": {f"{u}:{i}": v for (u, i), v in acyc.entries.items()}, "acyclic": acyc.acyclic}
    lines = [f"Hom formula {'holds' if hf.holds else 'FAILS'}"]
    if not acyc.acyclic:
        res["failures"] = [list(x) for x in acyc.failures]
        lines.append(f"not acyclic at {acyc.failures}")
        return Outcome(res, NEGATIVE, lines)
    cl = dg.classify_space_deformations(D)
    res.update(hh2=cl.hh2_dim, hh1=cl.hh1_dim, rigid=cl.rigid)
    lines.append("rigid: HH² = 0" if cl.rigid else f"HH² has dimension {cl.hh2_dim}")
    return Outcome(res, OK if hf.holds else INTERNAL, lines)


def cmd_selftest(ws, args) -> Outcome:
    results = checks.run_all(seed=args.seed)
    res = {r.name: {"passed": r.passed, "instances": r.instances, "failures": r.failures} for r in results}
    lines = []
    for r in results:
        lines.append(r.summary())
        lines.extend(f"    {msg}" for msg in r.failures)
    return Outcome(res, OK if all(r.passed for r in results) else INTERNAL, lines)


COMMANDS = {
    "validate": cmd_validate, "tor": cmd_tor, "ext": cmd_ext, "flat": cmd_flat, "basechange": cmd_basechange,
    "gr": cmd_gr, "hh": cmd_hh, "classify": cmd_classify, "deform": cmd_deform, "equiv": cmd_equiv,
    "lift": cmd_lift, "strictify": cmd_strictify, "space": cmd_space, "selftest": cmd_selftest,
}


def _common(suppress: bool) -> argparse.ArgumentParser:
    """Shared flags; sub-commands suppress defaults so flags given before the command survive."""
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=dflt(0), help="seed for randomized steps (recorded in the report)")
    common.add_argument("--degree-cap", type=int, default=dflt(3), help="largest homological degree computed")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", default=dflt("json"),
                     help="JSON report (default)")
    fmt.add_argument("--text", dest="format", action="store_const", const="text", default=dflt("json"),
                     help="human-readable report")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common(suppress=True)
    p = argparse.ArgumentParser(prog="defcat", description=__doc__.splitlines()[0], parents=[_common(False)])
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_, file=True):
        sp = sub.add_parser(name, help=help_, parents=[common])
        if file:
            sp.add_argument("file", help="JSON document or workspace")
        return sp

    add("validate", "validate every object in a document")
    for name, what in (("tor", "Tor_i"), ("ext", "Ext^i")):
        sp = add(name, f"{what} of two modules")
        sp.add_argument("--degree", type=int, default=1)
        sp.add_argument("--left")
        sp.add_argument("--right")
    add("flat", "flatness and coflatness of a module").add_argument("--name")
    for name, help_ in (("basechange", "S ⊗ F and Hom_R(S, F) with adjunction checks"),
                        ("gr", "associated graded module along the kernel")):
        sp = add(name, help_)
        sp.add_argument("--name")
        sp.add_argument("--surjection")
        sp.add_argument("--deformation")
    sp = add("hh", "Hochschild cohomology")
    sp.add_argument("--degree", type=int, default=2)
    sp.add_argument("--category")
    sp.add_argument("--full", action="store_true", help="use the unnormalized complex")
    sp = add("classify", "first-order deformations up to equivalence")
    sp.add_argument("--category")
    sp.add_argument("--emit", action="store_true", help="include the deformations in the report")
    add("deform", "first-order deformation from a 2-cocycle").add_argument("--name")
    sp = add("equiv", "equivalence of two first-order deformations")
    sp.add_argument("--left")
    sp.add_argument("--right")
    sp = add("lift", "lift inverses, idempotent splittings, biproducts or injectives")
    sp.add_argument("--deformation")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--iso", nargs=2, metavar=("F", "G0"))
    mode.add_argument("--idempotent", nargs=3, metavar=("E", "R0", "S0"))
    mode.add_argument("--biproduct", nargs=4, metavar=("S1", "S2", "P1", "P2"))
    mode.add_argument("--injectives", action="store_true")
    add("strictify", "strict replacement of a deformation").add_argument("--deformation")
    add("space", "diagram category, acyclicity and classification of a ringed finite space").add_argument("--name")
    add("selftest", "run the invariant battery", file=False)
    return p


def _emit(report: dict, lines, fmt: str, stream):
    if fmt == "text":
        stream.write(f"{report['command']}: exit {report['exit_status']}\n")
        for ln in lines:
            stream.write(f"  {ln}\n")
    else:
        stream.write(json.dumps(plain(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def run(argv=None, stream=None) -> tuple[dict, int]:
    stream = stream or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    report = {"command": args.command, "inputs_digest": None, "seed": args.seed, "results": {}}
    lines = []
    try:
        ws = None
        if getattr(args, "file", None):
            with open(args.file, "rb") as fh:
                raw = fh.read()
            report["inputs_digest"] = se.digest(raw)
            ws = se.loads(raw.decode("utf-8"))
        out = COMMANDS[args.command](ws, args)
        report["results"], status, lines = out.results, out.status, out.lines
    except (se.SchemaError, InputError, OSError, UnicodeDecodeError, rg.MalformedInput, CategoryError,
            dg.InvalidPoset, dg.InvalidPresheaf, dg.UnsupportedConfiguration, hc.FieldRequired,
            lf.LiftPreconditionError) as e:
        status = INPUT_ERROR
        report["results"] = {"error": str(e), "kind": type(e).__name__}
        lines = [f"error: {e}"]
    except (lf.LiftFailure, AssertionError) as e:
        status = INTERNAL
        report["results"] = {"error": str(e), "kind": type(e).__name__}
        lines = [f"internal invariant violated: {e}"]
    report["exit_status"] = status
    _emit(report, lines, args.format, stream)
    return report, status


def main(argv=None) -> int:
    _, status = run(argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
