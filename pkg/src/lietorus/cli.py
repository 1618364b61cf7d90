"""Command-line front end.

Every subcommand is translated into a scenario dictionary and handed to
:func:`run`, which returns a report dictionary and an exit code.  Reports
are written as canonical JSON (sorted keys), so identical scenarios give
byte-identical output.  Exit codes: 0 pass, 1 check failed, 2 input error,
3 field too small.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from importlib import resources
from typing import Any, Sequence

import jsonschema

from . import catalog
from .algebra import LieAlgebra
from .autos import (
    Automorphism,
    AutTuple,
    check_A_conditions,
    conjugation_automorphism,
    diagram_automorphism,
    grading_by_tuple,
    identity_automorphism,
    torus_automorphism,
)
from .chevalley import chevalley_basis, orthogonal_algebra
from .classify import (
    ORBIT_LIMIT,
    Modulus,
    biiso_fingerprint,
    brute_force_orbit_oracle,
    certificate_check,
    normalize_mod_ideal,
    oracle_agreement,
    orbit_representatives,
    untwisted_test,
)
from .errors import FieldTooSmall, InputError, LieTorusError, NotAdmissible, SchemaError
from .field import FieldContext
from .rootsys import RootLatticeHom
from .structure import cartan_subalgebra, is_simple, root_space_decomposition
from .torus import (
    build_multiloop,
    central_grading_group,
    root_grading_pair,
    support_semilattices,
    verify_lie_torus_axioms,
    weyl_automorphism_window,
    window_radius,
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_FIELD = 0, 1, 2, 3
EXAMPLES = ("b3", "untwisted", "diagram", "f4-untwisted")


def _schema() -> dict:
    text = resources.files("lietorus").joinpath("schemas/scenario.json").read_text()
    return json.loads(text)


def emit_report(report: dict, path: str | None = None) -> str:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------------------
# scenario -> objects


def _perm_order(perm: Sequence[int]) -> int:
    return catalog._perm_order(tuple(perm))


def _conductor(spec: dict) -> int:
    alg = spec.get("algebra", {})
    n = int(alg.get("conductor", 1))
    for key in ("tuple", "tuple2"):
        for entry in spec.get(key, []):
            if "diagram" in entry:
                k = _perm_order(entry["diagram"])
                n = n * k // math.gcd(n, k)
    return n


def _load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc


def build_algebra(spec: dict) -> LieAlgebra:
    alg = spec.get("algebra")
    if alg is None:
        raise SchemaError("scenario needs an algebra")
    ctx = FieldContext(_conductor(spec))
    if "type" in alg:
        s, _ = chevalley_basis(alg["type"])
        return s.over(ctx)
    if "gram" in alg:
        return orthogonal_algebra(alg["gram"], ctx)
    data = alg.get("structure") or _load_json(alg["structure_file"])
    s = LieAlgebra.from_json(data)
    s.verify()
    if ctx.N % s.context.N:
        ctx = FieldContext(ctx.N * s.context.N // math.gcd(ctx.N, s.context.N))
    return s.over(ctx)


def _cartan_datum(s: LieAlgebra):
    return root_space_decomposition(s, cartan_subalgebra(s))


def build_automorphism(s: LieAlgebra, entry: dict) -> Automorphism:
    if entry.get("identity"):
        return identity_automorphism(s)
    if "diagram" in entry:
        ep = getattr(s, "epinglage", None)
        if ep is None:
            raise InputError("diagram automorphisms need a named type")
        return diagram_automorphism(s, ep, entry["diagram"])
    if "conj" in entry:
        return conjugation_automorphism(s, entry["conj"])
    if "torus" in entry:
        return torus_automorphism(_cartan_datum(s), entry["torus"])
    if "matrix" in entry:
        return Automorphism.from_json(s, entry["matrix"])
    raise SchemaError(f"unknown automorphism source {sorted(entry)}")


def build_tuple(s: LieAlgebra, entries: list, key: str = "tuple") -> AutTuple:
    if not entries:
        raise SchemaError(f"scenario needs a non-empty {key!r}")
    return AutTuple([build_automorphism(s, e) for e in entries])


def _int_matrix(rows) -> list[list[int]]:
    return [[int(x) for x in r] for r in rows]


# ---------------------------------------------------------------------------
# commands


def _cmd_build(spec: dict) -> tuple[dict, bool]:
    s = build_algebra(spec)
    s.verify()
    simp = is_simple(s)
    out = {"dim": s.dim, "conductor": s.context.N, "labels": list(s.labels), "jacobi": True,
           "simplicity": simp.to_json()}
    if simp.simple:
        rd = _cartan_datum(s)
        out["cartan_dim"] = rd.cartan.dim
        out["type"] = str(rd.roots.type) if rd.is_root_system else None
    return out, True


def _cmd_grade(spec: dict) -> tuple[dict, bool]:
    s = build_algebra(spec)
    sigma = build_tuple(s, spec.get("tuple", []))
    g = grading_by_tuple(s, sigma, spec.get("modulus"))
    gs = sigma.group_structure
    return {"orders": list(sigma.orders), "group": gs.to_json(),
            "components": {",".join(map(str, k)): v for k, v in g.dims().items()}}, True


def _torus(spec: dict):
    s = build_algebra(spec)
    sigma = build_tuple(s, spec.get("tuple", []))
    return build_multiloop(s, sigma, m=spec.get("modulus"))


def _cmd_check(spec: dict) -> tuple[dict, bool]:
    T = _torus(spec)
    out = {"torus": T.to_json()}
    ok = T.is_torus
    if T.root_datum.is_root_system:
        ax = verify_lie_torus_axioms(T)
        out["axioms"] = ax
        ok = ok and ax["pass"]
    return out, ok


def _cmd_torus(spec: dict) -> tuple[dict, bool]:
    T = _torus(spec)
    out: dict = {"torus": T.to_json()}
    ax = verify_lie_torus_axioms(T)
    out["axioms"] = ax
    ok = T.is_torus and ax["pass"]
    if ok:
        sem, props = support_semilattices(T)
        out["semilattices"] = {"residues": [x.to_json() for x in sem.values()], "properties": props}
        out["root_grading_pair"] = root_grading_pair(T).to_json()
        r = window_radius(spec.get("window"))
        cg = central_grading_group(T, r)
        out["central_grading_group"] = cg.to_json()
        out["untwisted"] = untwisted_test(T)
        weyl = []
        for a in T.delta.base:
            res = weyl_automorphism_window(T, a, tuple(0 for _ in T.orders), radius=r)
            weyl.append(res.to_json())
        out["weyl"] = weyl
        ok = props["pass"] and cg.window_check and all(w["pass"] for w in weyl) and all(
            out["root_grading_pair"]["checks"].values())
    return out, ok


def _cmd_isotope(spec: dict) -> tuple[dict, bool]:
    T = _torus(spec)
    shift = spec.get("shift")
    if shift is None:
        raise SchemaError("isotope needs a shift")
    try:
        res = make_isotope_report(T, shift, spec.get("window"))
    except NotAdmissible as exc:
        return {"admissible": False, "violation": exc.to_json()}, False
    return res, res["window_check"]


def make_isotope_report(T, shift, window=None) -> dict:
    from .torus import make_isotope

    res = make_isotope(T, RootLatticeHom(T.nullity, [tuple(v) for v in shift]), radius=window)
    out = res.to_json()
    out["admissible"] = True
    out["new_axioms"] = verify_lie_torus_axioms(res.new_torus)["pass"]
    return out


def _cmd_normalize(spec: dict) -> tuple[dict, bool]:
    m = Modulus(tuple(spec["modulus"]))
    nf = normalize_mod_ideal(_int_matrix(spec["matrix"]), m, spec.get("witness"))
    return nf.to_json(), True


def _cmd_orbits(spec: dict) -> tuple[dict, bool]:
    factors = [int(x) for x in spec["factors"]]
    n = int(spec["n"])
    reps = orbit_representatives(factors, n)
    out = {"factors": factors, "n": n, "count": len(reps), "p": [r.p for r in reps]}
    ok = True
    if math.prod(factors) ** n <= ORBIT_LIMIT:
        out["oracle"] = oracle_agreement(factors, n)
        ok = out["oracle"]["agree"]
    if spec.get("tuple_elements"):
        out["canonical"] = [list(map(list, brute_force_orbit_oracle(factors, spec["tuple_elements"])))]
    return out, ok


def _cmd_fingerprint(spec: dict) -> tuple[dict, bool]:
    T = _torus(spec)
    out = {"fingerprint": biiso_fingerprint(T).to_json()}
    if spec.get("tuple2"):
        sigma2 = build_tuple(T.base, spec["tuple2"], "tuple2")
        T2 = build_multiloop(T.base, sigma2, m=spec.get("modulus"))
        f1, f2 = biiso_fingerprint(T), biiso_fingerprint(T2)
        out["fingerprint2"] = f2.to_json()
        out["differences"] = f1.differences(f2)
    return out, True


def _cmd_certify(spec: dict) -> tuple[dict, bool]:
    T = _torus(spec)
    s = T.base
    sigma2 = build_tuple(s, spec.get("tuple2", []), "tuple2")
    T2 = build_multiloop(s, sigma2, T.cartan, m=spec.get("modulus"))
    n = T.nullity
    P = spec.get("P") or [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    mode = spec.get("mode", "biiso")
    tau = [build_automorphism(s, e) for e in spec["twist"]] if spec.get("twist") else None
    phi = spec.get("phi")
    if phi is not None:
        from .field import scalar_from_str

        phi = [[scalar_from_str(x, s.context) for x in r] for r in phi]
    ok = certificate_check(T, T2, _int_matrix(P), phi, mode, tau)
    return {"mode": mode, "certified": ok}, ok


# ---------------------------------------------------------------------------
# worked examples


def _example_b3(spec: dict) -> tuple[dict, bool]:
    s = catalog.b3_algebra()
    sigma = catalog.b3_tuple(s)
    h = catalog.b3_cartan(s)
    T = build_multiloop(s, sigma, h)
    ax = verify_lie_torus_axioms(T)
    out: dict = {"algebra": {"dim": s.dim, "type": str(_cartan_datum(s).roots.type)},
                 "torus": T.to_json(), "axioms": ax,
                 "cartan": [s.labels[i] for i, x in enumerate(h.rows[0]) if x]}
    ok = T.is_torus and ax["pass"]
    iso = make_isotope_report(T, [(1, 1, 1)], spec.get("window", 1))
    out["isotope"] = iso
    ok = ok and iso["window_check"] and iso["new_axioms"]
    try:
        make_isotope_report(T, [(1, 1, 0)], spec.get("window", 1))
        out["variant"] = {"admissible": True}
        ok = False
    except NotAdmissible as exc:
        out["variant"] = {"admissible": False, "violation": exc.to_json()}
    twist = [conjugation_automorphism(s, catalog.B3_TWIST)] * 3
    sigma_t = AutTuple([t * sg for t, sg in zip(twist, sigma.entries)])
    Tt = build_multiloop(s, sigma_t, h)
    ident = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    out["isotopy_certificate"] = certificate_check(T, Tt, ident, None, "isotopy", twist)
    f1, f2 = biiso_fingerprint(T), biiso_fingerprint(Tt)
    out["fingerprints"] = {"original": f1.to_json(), "twisted": f2.to_json(), "differences": f1.differences(f2)}
    out["bi_isomorphic"] = "not bi-isomorphic" if f1.differences(f2) else "undecided"
    ok = ok and out["isotopy_certificate"] and bool(f1.differences(f2))
    return out, ok


def _example_untwisted(spec: dict) -> tuple[dict, bool]:
    t = spec.get("case") or spec.get("algebra", {}).get("type", "A1")
    n = int(spec.get("n", 1))
    sub = {"algebra": {"type": t}, "tuple": [{"identity": True}] * n, "window": spec.get("window")}
    out, ok = _cmd_torus(sub)
    return out, ok and out.get("untwisted", False)


def _example_diagram(spec: dict) -> tuple[dict, bool]:
    case = spec.get("case", "A2")
    if case not in catalog.DIAGRAM_CASES:
        raise SchemaError(f"unknown diagram case {case!r}; choose from {sorted(catalog.DIAGRAM_CASES)}")
    s, sigma = catalog.diagram_tuple(case)
    rep = check_A_conditions(s, sigma)
    out = {"case": case, "A_conditions": rep.to_json()}
    ok = rep.passed and rep.relation != "neither"
    return out, ok


def _example_f4(spec: dict) -> tuple[dict, bool]:
    s, _ = chevalley_basis("F4")
    if spec.get("generators_file"):
        data = _load_json(spec["generators_file"])
        N = max(int(e.get("N", 1)) for e in data)
        s = s.over(FieldContext(max(N, 2)))
        sigma = AutTuple([Automorphism.from_json(s, e) for e in data])
        rep = check_A_conditions(s, sigma)
        return {"A_conditions": rep.to_json()}, rep.passed
    sub = {"algebra": {"type": "F4"}, "tuple": [{"identity": True}], "window": spec.get("window", 1)}
    return _cmd_check(sub)


def _cmd_example(spec: dict) -> tuple[dict, bool]:
    name = spec.get("example")
    table = {"b3": _example_b3, "untwisted": _example_untwisted, "diagram": _example_diagram,
             "f4-untwisted": _example_f4}
    if name not in table:
        raise SchemaError(f"unknown example {name!r}")
    return table[name](spec)


COMMANDS = {
    "build": _cmd_build,
    "grade": _cmd_grade,
    "check": _cmd_check,
    "torus": _cmd_torus,
    "isotope": _cmd_isotope,
    "normalize": _cmd_normalize,
    "orbits": _cmd_orbits,
    "fingerprint": _cmd_fingerprint,
    "certify": _cmd_certify,
    "example": _cmd_example,
}


def run(spec: dict) -> tuple[dict, int]:
    """Execute a scenario; returns (report, exit code)."""
    report: dict = {"echo": {k: v for k, v in spec.items() if k not in ("timings", "output")}}
    start = time.perf_counter()
    try:
        jsonschema.validate(spec, _schema())
        cmd = spec["command"]
        result, ok = COMMANDS[cmd](spec)
        report["result"] = result
        report["pass"] = bool(ok)
        code = EXIT_PASS if ok else EXIT_FAIL
    except jsonschema.ValidationError as exc:
        report["error"] = SchemaError(exc.message).to_json()
        code = EXIT_INPUT
    except LieTorusError as exc:
        err = exc.to_json()
        err["operation"] = spec.get("command")
        report["error"] = err
        code = EXIT_FIELD if isinstance(exc, FieldTooSmall) else EXIT_INPUT if isinstance(exc, InputError) else EXIT_FAIL
    if spec.get("timings"):
        report["timings"] = {"seconds": round(time.perf_counter() - start, 3)}
    return report, code


# ---------------------------------------------------------------------------
# argument parsing


def _matrix_arg(text: str):
    text = text.strip()
    if text.startswith("[["):
        return json.loads(text)
    return [[x.strip() for x in row.split(",")] for row in text.split(";")]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _square(vals: list[int]) -> list[list[int]]:
    n = math.isqrt(len(vals))
    if n * n != len(vals):
        raise SchemaError("--matrix needs a square number of entries")
    return [vals[i * n:(i + 1) * n] for i in range(n)]


def _add_algebra(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--algebra", help="named type, e.g. F4")
    g.add_argument("--gram", type=_matrix_arg, help="Gram matrix rows 'a,b;c,d' of an orthogonal algebra")
    g.add_argument("--structure", help="JSON file with structure constants")
    p.add_argument("--conductor", type=int, default=None, help="work over Q(zeta_N)")


def _add_tuple(p: argparse.ArgumentParser, suffix: str = "") -> None:
    dest = "tuple" + suffix
    p.add_argument(f"--tuple{suffix}", dest=dest + "_kind", choices=["identity"], default=None)
    p.add_argument(f"--n{suffix}", dest=dest + "_n", type=int, default=1, help="slots for --tuple identity")
    p.add_argument(f"--diagram{suffix}", dest=dest + "_diagram", action="append", type=_ints, default=[])
    p.add_argument(f"--conj{suffix}", dest=dest + "_conj", action="append", type=_matrix_arg, default=[])
    p.add_argument(f"--torus{suffix}", dest=dest + "_torus", action="append", default=[],
                   help="comma separated scalars on the base roots")
    p.add_argument(f"--tuple-file{suffix}", dest=dest + "_file", default=None,
                   help="JSON list of automorphism matrices")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--timings", action="store_true", help="add wall-clock timings (breaks byte-identity)")
    p.add_argument("--window", type=int, default=None, help="degree window radius (default LIETORUS_WINDOW or 2)")
    p.add_argument("--modulus", type=_ints, default=None)


def _tuple_entries(ns, suffix: str = "") -> list:
    dest = "tuple" + suffix
    out = []
    if getattr(ns, dest + "_kind", None) == "identity":
        out += [{"identity": True}] * getattr(ns, dest + "_n")
    out += [{"diagram": d} for d in getattr(ns, dest + "_diagram", [])]
    out += [{"conj": c} for c in getattr(ns, dest + "_conj", [])]
    out += [{"torus": [x.strip() for x in t.split(",")]} for t in getattr(ns, dest + "_torus", [])]
    path = getattr(ns, dest + "_file", None)
    if path:
        out += [{"matrix": e} for e in _load_json(path)]
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lietorus", description="Multiloop Lie tori over cyclotomic fields.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("build", "grade", "check", "torus", "isotope", "fingerprint", "certify"):
        p = sub.add_parser(name)
        _add_algebra(p)
        _common(p)
        if name != "build":
            _add_tuple(p)
        if name in ("fingerprint", "certify"):
            _add_tuple(p, "2")
        if name == "isotope":
            p.add_argument("--shift", required=True, action="append", type=_ints,
                           help="image of one base root, e.g. 1,1,1; repeat per base root")
        if name == "certify":
            p.add_argument("--mode", choices=["biiso", "isotopy"], default="biiso")
            p.add_argument("--P", type=_ints, default=None, help="row-major entries of P")
            p.add_argument("--twist-conj", action="append", type=_matrix_arg, default=[])
            p.add_argument("--phi", type=_matrix_arg, default=None)
    p = sub.add_parser("normalize")
    _common(p)
    p.add_argument("--matrix", required=True, type=_ints, help="row-major integer entries")
    p.add_argument("--witness", type=_ints, default=None)
    p = sub.add_parser("orbits")
    _common(p)
    p.add_argument("--factors", required=True, type=_ints)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--canonical", type=_matrix_arg, default=None,
                   help="tuple of group elements 'a,b;c,d' to canonicalise by brute force")
    p = sub.add_parser("example")
    _common(p)
    p.add_argument("name", choices=EXAMPLES)
    p.add_argument("case", nargs="?", default=None, help="diagram case or algebra type")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--generators", default=None, help="JSON file of F4 automorphism matrices")
    p = sub.add_parser("run")
    p.add_argument("spec", help="scenario JSON file")
    p.add_argument("--output", "-o", default=None)
    p.add_argument("--timings", action="store_true")
    return ap


def spec_from_args(ns) -> dict:
    spec: dict = {"command": ns.command}
    if ns.command == "run":
        spec = _load_json(ns.spec)
        if ns.timings:
            spec["timings"] = True
        return spec
    if getattr(ns, "timings", False):
        spec["timings"] = True
    for key in ("window", "modulus"):
        if getattr(ns, key, None) is not None:
            spec[key] = getattr(ns, key)
    if ns.command in ("build", "grade", "check", "torus", "isotope", "fingerprint", "certify"):
        alg: dict = {}
        if ns.algebra:
            alg["type"] = ns.algebra
        elif ns.gram is not None:
            alg["gram"] = ns.gram
        elif ns.structure:
            alg["structure_file"] = ns.structure
        else:
            raise SchemaError("choose one of --algebra, --gram, --structure")
        if ns.conductor:
            alg["conductor"] = ns.conductor
        spec["algebra"] = alg
        if ns.command != "build":
            spec["tuple"] = _tuple_entries(ns)
        if ns.command in ("fingerprint", "certify"):
            t2 = _tuple_entries(ns, "2")
            if t2:
                spec["tuple2"] = t2
        if ns.command == "isotope":
            spec["shift"] = ns.shift
        if ns.command == "certify":
            spec["mode"] = ns.mode
            if ns.P:
                spec["P"] = _square(ns.P)
            if ns.twist_conj:
                spec["twist"] = [{"conj": c} for c in ns.twist_conj]
            if ns.phi is not None:
                spec["phi"] = ns.phi
    elif ns.command == "normalize":
        spec["matrix"] = _square(ns.matrix)
        if ns.witness:
            spec["witness"] = _square(ns.witness)
    elif ns.command == "orbits":
        spec["factors"] = ns.factors
        spec["n"] = ns.n
        if ns.canonical is not None:
            spec["tuple_elements"] = [[int(x) for x in row] for row in ns.canonical]
    elif ns.command == "example":
        spec["example"] = ns.name
        if ns.case:
            spec["case"] = ns.case
        spec["n"] = ns.n
        if ns.generators:
            spec["generators_file"] = ns.generators
    return spec


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        spec = spec_from_args(ns)
    except LieTorusError as exc:
        emit_report({"error": exc.to_json()}, getattr(ns, "output", None))
        return EXIT_INPUT
    report, code = run(spec)
    emit_report(report, getattr(ns, "output", None))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
