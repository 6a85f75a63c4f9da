"""Command-line front end.

    hochcat validate FILE...
    hochcat hh CATEGORY|SPACE [--window N]
    hochcat compare LEFT [RIGHT | --opposite]
    hochcat mv SPACE COVER
    hochcat gs-compare PRESHEAF|SPACE
    hochcat deform CATEGORY (--cochain FILE | --enumerate) [--against FILE]
    hochcat suite [--select 1,2,...]

Exit status: 0 success, 2 invalid input, 3 a mathematical check failed,
4 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .bimodule import DEFAULT_MAX_DIM, ResourceLimitError
from .deform import (
    DeformationError,
    FirstOrderDeformation,
    deformation_equivalence,
    deformation_space,
    first_order_check,
    obstruction_square,
)
from .hochschild import (
    HochschildComplex,
    HochschildError,
    HochschildSpec,
    compare_dims,
    hochschild_cohomology,
)
from .io import (
    FormatError,
    InputValidationError,
    _read,
    category_from_dict,
    cochain_to_dict,
    dumps,
    read_category,
    read_cochain,
    read_cover,
    read_poset_presheaf,
    read_space,
)
from .linalg import Field, FieldMismatchError, field_from_name
from .lincat import CategoryError, FinLinCat, incidence_category, opposite, validate_category
from .poset import PosetError, set_label
from .sites import (
    PresheafError,
    SpaceError,
    basis_category,
    constant_sheaf,
    gs_cohomology,
    mayer_vietoris,
)

SCHEMA_VERSION = 1
WINDOW_CAP = 6

EXIT_OK, EXIT_INVALID, EXIT_MATH, EXIT_RESOURCE = 0, 2, 3, 4


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: List[str]
    scalars: Optional[Field] = None
    window: int = 3
    window_cap: int = WINDOW_CAP
    normalized: bool = False
    max_dim: int = DEFAULT_MAX_DIM
    out: Optional[str] = None
    json: bool = False
    select: Optional[List[int]] = None
    options: Dict[str, Any] = field(default_factory=dict)

    def check(self):
        if not 0 <= self.window <= self.window_cap:
            raise UsageError(f"window {self.window} outside 0..{self.window_cap} (raise --window-cap to opt in)")
        if self.max_dim < 1:
            raise UsageError("--max-dim must be positive")


@dataclass
class Outcome:
    status: int
    report: Dict[str, Any]
    text: str


# ---------------------------------------------------------------- input


def _kind(path: str) -> str:
    doc = _read(path)
    fmt = doc.get("format") if isinstance(doc, dict) else None
    if not isinstance(fmt, str) or not fmt.startswith("hochcat."):
        raise FormatError(f"{path}:$.format", "missing or unknown format tag")
    return fmt.split(".", 1)[1]


def _load_category_or_space(path: str, cfg: RunConfig):
    """A category file as is; a space file becomes the incidence category of
    its minimal basis, carrying its presheaf or the constant sheaf."""
    kind = _kind(path)
    if kind == "category":
        return read_category(path, scalars=cfg.scalars)
    if kind == "space":
        sf = read_space(path, scalars=cfg.scalars)
        x = sf.space
        o = sf.presheaf or constant_sheaf(x, sf.field)
        c = basis_category(x, set(x.minimal_basis().values()), o, sf.field)
        c.name = f"U({x.name})" if x.name else "U(space)"
        return c
    raise FormatError(f"{path}:$.format", f"expected a category or space, got {kind}")


def _pin_scalars(cfg: RunConfig, f: Field):
    """The first file fixes the scalars for every later file."""
    if cfg.scalars is None:
        cfg.scalars = f


# ---------------------------------------------------------------- reports


def _table_text(rows: Sequence[dict], cols: Sequence[str]) -> str:
    cells = [[str(r[c]).lower() if isinstance(r[c], bool) else str(r[c]) for c in cols] for r in rows]
    w = [max([len(c)] + [len(x[i]) for x in cells]) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w[i]) for i, c in enumerate(cols))]
    lines += ["  ".join(x[i].rjust(w[i]) for i in range(len(cols))) for x in cells]
    return "\n".join(lines)


def _spec(c: FinLinCat, cfg: RunConfig) -> HochschildSpec:
    # degree n is exact only when d_n is built, so assemble one degree past the window
    return HochschildSpec(c, n_max=cfg.window + 1, normalized=cfg.normalized, max_dim=cfg.max_dim)


def _rows_in_window(rows: List[dict], cfg: RunConfig) -> List[dict]:
    return [r for r in rows if r["degree"] <= cfg.window]


# ---------------------------------------------------------------- commands


def cmd_validate(cfg: RunConfig) -> Outcome:
    results = []
    space = None
    category = None
    for path in cfg.inputs:
        entry = {"path": path}
        try:
            kind = _kind(path)
            entry["kind"] = kind
            if kind == "category":
                c = category_from_dict(_read(path), path, validate=False, scalars=cfg.scalars)
                _pin_scalars(cfg, c.field)
                bad = validate_category(c)
                entry["violations"] = [str(v) for v in bad]
                category = c if not bad else category
            elif kind == "space":
                sf = read_space(path, scalars=cfg.scalars)
                _pin_scalars(cfg, sf.field)
                space = sf.space
                entry["violations"] = []
                entry["points"] = len(sf.space.points)
                entry["opens"] = len(sf.space.opens)
            elif kind == "presheaf":
                o = read_poset_presheaf(path, scalars=cfg.scalars)
                _pin_scalars(cfg, o.field)
                entry["violations"] = []
            elif kind == "cover":
                if space is None:
                    raise UsageError(f"{path}: a cover must follow its space file")
                read_cover(path, space)
                entry["violations"] = []
            elif kind == "cochain":
                ref = _read(path).get("category")
                if isinstance(ref, str):
                    base = read_category(os.path.join(os.path.dirname(path), ref), scalars=cfg.scalars)
                elif category is None:
                    raise UsageError(f"{path}: a cochain must name its category or follow its category file")
                else:
                    base = category
                read_cochain(base, path)
                entry["violations"] = []
            else:
                raise FormatError(f"{path}:$.format", f"unknown format {kind!r}")
        except (FormatError, InputValidationError, UsageError, ValueError) as e:
            entry.setdefault("kind", "unknown")
            entry["violations"] = [str(e)]
        entry["valid"] = not entry["violations"]
        results.append(entry)
    ok = all(r["valid"] for r in results)
    lines = []
    for r in results:
        lines.append(f"{r['path']}: {r['kind']} {'ok' if r['valid'] else 'INVALID'}")
        lines += [f"  {v}" for v in r["violations"]]
    return Outcome(EXIT_OK if ok else EXIT_INVALID, {"files": results, "valid": ok}, "\n".join(lines))


def cmd_hh(cfg: RunConfig) -> Outcome:
    c = _load_category_or_space(cfg.inputs[0], cfg)
    r = hochschild_cohomology(_spec(c, cfg), representatives=True)
    rows = _rows_in_window(r.table(), cfg)
    reps = {}
    for row in rows:
        n = row["degree"]
        if not row["edge_caveat"]:
            reps[str(n)] = [cochain_to_dict(c, r.complex.to_cochain(n, v))["entries"]
                            for v in r.representatives.get(n, [])]
    report = {"category": c.name, "scalars": c.field.name, "window": cfg.window,
              "normalized": cfg.normalized, "table": rows, "representatives": reps}
    text = f"HH({c.name or 'category'}) over {c.field.name}\n" + _table_text(rows, ["degree", "dim", "edge_caveat"])
    return Outcome(EXIT_OK, report, text)


def cmd_compare(cfg: RunConfig) -> Outcome:
    left = _load_category_or_space(cfg.inputs[0], cfg)
    _pin_scalars(cfg, left.field)
    if cfg.options.get("opposite"):
        if len(cfg.inputs) != 1:
            raise UsageError("--opposite takes a single input")
        right = opposite(left)
    else:
        if len(cfg.inputs) != 2:
            raise UsageError("compare needs two inputs or --opposite")
        right = _load_category_or_space(cfg.inputs[1], cfg)
    cmp = compare_dims(_spec(left, cfg), _spec(right, cfg))
    rows = _rows_in_window(cmp.rows(), cfg)
    equal = all(r["left"] == r["right"] for r in rows if not r["edge_caveat"])
    names = (left.name or "left", right.name or "right")
    report = {"left": names[0], "right": names[1], "scalars": left.field.name, "window": cfg.window,
              "table": rows, "verdict": "equal" if equal else "different"}
    text = _table_text(rows, ["degree", "left", "right", "edge_caveat"]) + \
        f"\nleft = {names[0]}, right = {names[1]}\nverdict: {report['verdict']}"
    return Outcome(EXIT_OK if equal else EXIT_MATH, report, text)


def cmd_mv(cfg: RunConfig) -> Outcome:
    if len(cfg.inputs) != 2:
        raise UsageError("mv needs a space file and a cover file")
    sf = read_space(cfg.inputs[0], scalars=cfg.scalars)
    cover = read_cover(cfg.inputs[1], sf.space)
    if len(cover.pieces) != 2:
        raise UsageError(f"{cfg.inputs[1]}: Mayer-Vietoris needs a cover by exactly two opens")
    u, v = cover.pieces
    rep = mayer_vietoris(sf.space, u, v, sf.presheaf, n_max=cfg.window)
    d = rep.as_dict()
    ok = rep.exact and rep.matches_direct
    report = {"space": sf.space.name, "scalars": sf.field.name, "window": cfg.window, **d, "verdict": "ok" if ok else "failed"}
    rows = [{"degree": n, **{k: d["HC"][k][i] for k in ("X", "U", "V", "U∩V")}, "direct X": d["direct_HC_X"][i]}
            for i, n in enumerate(d["degrees"])]
    text = "\n".join([
        _table_text(rows, ["degree", "X", "U", "V", "U∩V", "direct X"]),
        "connecting ranks: " + " ".join(map(str, d["connecting_ranks"])),
        f"all joints exact: {str(rep.exact).lower()}",
        f"matches direct computation: {str(rep.matches_direct).lower()}",
        f"basis acyclicity: {rep.acyclicity}",
    ])
    return Outcome(EXIT_OK if ok else EXIT_MATH, report, text)


def cmd_gs_compare(cfg: RunConfig) -> Outcome:
    path = cfg.inputs[0]
    kind = _kind(path)
    if kind == "presheaf":
        o = read_poset_presheaf(path, scalars=cfg.scalars)
    elif kind == "space":
        sf = read_space(path, scalars=cfg.scalars)
        x = sf.space
        full = sf.presheaf or constant_sheaf(x, sf.field)
        o = full.subpresheaf(sorted({set_label(u) for u in x.minimal_basis().values()}))
    else:
        raise FormatError(f"{path}:$.format", f"expected a presheaf or space, got {kind}")
    gs = gs_cohomology(o, cfg.window)
    inc = incidence_category(o.poset, o)
    hh = hochschild_cohomology(_spec(inc, cfg), representatives=False)
    rows = [{"degree": n, "gs": gs[n], "incidence": hh.dims[n]} for n in range(cfg.window + 1)]
    ok = all(r["gs"] == r["incidence"] for r in rows)
    report = {"presheaf": o.name, "scalars": o.field.name, "window": cfg.window, "table": rows,
              "verdict": "equal" if ok else "different"}
    text = _table_text(rows, ["degree", "gs", "incidence"]) + f"\nverdict: {report['verdict']}"
    return Outcome(EXIT_OK if ok else EXIT_MATH, report, text)


def _deform_one(c: FinLinCat, phi, hc) -> Dict[str, Any]:
    d = FirstOrderDeformation(c, phi)
    fo = first_order_check(d, hc)
    out: Dict[str, Any] = {
        "associative_mod_t2": fo.associative,
        "cocycle": fo.cocycle,
        "paths_agree": fo.consistent,
    }
    if fo.witness is not None:
        ch, t, v = fo.witness
        out["associativity_witness"] = {"chain": list(ch), "args": list(t), "defect": {str(k): c.field.fmt(x) for k, x in sorted(v.items())}}
    ob = obstruction_square(d, hc)
    out["status"] = ob.status
    out["obstruction_closed"] = ob.closed
    out["t2_defect_matches_square"] = ob.defect_matches_square
    if ob.psi is not None:
        out["second_order_term"] = cochain_to_dict(c, ob.psi)["entries"]
        out["extension_verified"] = ob.extension_verified
    return out


def cmd_deform(cfg: RunConfig) -> Outcome:
    c = _load_category_or_space(cfg.inputs[0], cfg)
    if not c.is_ordinary():
        raise UsageError("deformations are available for ordinary categories only")
    # one complex through degree 4 serves the cocycle, gauge and obstruction solves
    hc = HochschildComplex(HochschildSpec(c, n_max=4, max_dim=cfg.max_dim))
    report: Dict[str, Any] = {"category": c.name, "scalars": c.field.name}
    lines = []
    ok = True
    if cfg.options.get("enumerate"):
        sp = deformation_space(c, hc)
        report["space"] = {"cocycles": sp.cocycle_dim, "gauge": sp.coboundary_dim,
                           "classes": sp.classes, "betti2": sp.betti2}
        ok &= sp.classes == sp.betti2
        lines.append(f"first-order deformations: {sp.cocycle_dim} cocycles, {sp.coboundary_dim} gauge, "
                     f"{sp.classes} classes, Betti2 = {sp.betti2}")
        report["classes"] = []
        for i, r in enumerate(sp.representatives):
            v = _deform_one(c, r, hc)
            report["classes"].append({"cochain": cochain_to_dict(c, r)["entries"], **v})
            ok &= v["paths_agree"] and v["t2_defect_matches_square"] and v.get("extension_verified", True)
            lines.append(f"class {i}: {v['status']}")
    else:
        path = cfg.options.get("cochain")
        if not path:
            raise UsageError("deform needs --cochain FILE or --enumerate")
        phi = read_cochain(c, path)
        v = _deform_one(c, phi, hc)
        report["deformation"] = v
        ok &= v["paths_agree"] and v["t2_defect_matches_square"] and v.get("extension_verified", True)
        lines.append(f"associative mod t^2: {str(v['associative_mod_t2']).lower()}")
        lines.append(f"cocycle: {str(v['cocycle']).lower()}")
        lines.append(f"status: {v['status']}")
        if "second_order_term" in v:
            lines.append(f"second-order term: {len(v['second_order_term'])} entries, "
                         f"extension verified: {str(v['extension_verified']).lower()}")
        other = cfg.options.get("against")
        if other:
            psi2 = read_cochain(c, other)
            eq = deformation_equivalence(FirstOrderDeformation(c, phi), FirstOrderDeformation(c, psi2), hc)
            report["equivalence"] = {"equivalent": eq.equivalent, "gauge_verified": eq.gauge_verified}
            if eq.psi is not None:
                report["equivalence"]["gauge"] = cochain_to_dict(c, eq.psi)["entries"]
                ok &= eq.gauge_verified
            lines.append(f"equivalent to {other}: {str(eq.equivalent).lower()}")
    report["verdict"] = "ok" if ok else "inconsistent"
    return Outcome(EXIT_OK if ok else EXIT_MATH, report, "\n".join(lines))


def cmd_suite(cfg: RunConfig) -> Outcome:
    from .acceptance import run_suite

    results = run_suite(cfg.select)
    rows = [{"criterion": r.number, "title": r.title, "passed": r.passed, "ok": r.ok,
             "within_time": r.within_time, "limit_s": r.limit} for r in results]
    ok = all(r.passed for r in results)
    # timings are left out of the report so that it stays byte-identical across runs
    report = {"criteria": rows, "passed": ok}
    text = "\n".join(r.line() for r in results) + f"\n{sum(r.passed for r in results)}/{len(results)} passed"
    return Outcome(EXIT_OK if ok else EXIT_MATH, report, text)


COMMANDS = {
    "validate": cmd_validate,
    "hh": cmd_hh,
    "compare": cmd_compare,
    "mv": cmd_mv,
    "gs-compare": cmd_gs_compare,
    "deform": cmd_deform,
    "suite": cmd_suite,
}


# ---------------------------------------------------------------- driver


def _scalars(s: str) -> Field:
    try:
        return field_from_name(s)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scalars", type=_scalars, help="rational or fp:<p>; inputs must agree")
    common.add_argument("--window", type=int, default=3, help="report degrees 0..N exactly (default 3)")
    common.add_argument("--window-cap", type=int, default=WINDOW_CAP, help="hard cap on --window (default 6)")
    common.add_argument("--normalized", action="store_true", help="use normalized cochains")
    common.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM, help="largest cochain space allowed")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--json", action="store_true", help="machine-readable report")

    p = argparse.ArgumentParser(prog="hochcat", description="Exact Hochschild cohomology of finite linear categories.")
    p.add_argument("--version", action="version", version=f"hochcat {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("validate", parents=[common], help="check input files against the axioms")
    s.add_argument("inputs", nargs="+")
    s = sub.add_parser("hh", parents=[common], help="Betti table and representatives")
    s.add_argument("inputs", nargs=1)
    s = sub.add_parser("compare", parents=[common], help="compare two Betti tables")
    s.add_argument("inputs", nargs="+")
    s.add_argument("--opposite", action="store_true", help="compare the input with its opposite")
    s = sub.add_parser("mv", parents=[common], help="Mayer-Vietoris sequence of a two-piece cover")
    s.add_argument("inputs", nargs=2, metavar=("SPACE", "COVER"))
    s = sub.add_parser("gs-compare", parents=[common], help="GS bicomplex against the incidence category")
    s.add_argument("inputs", nargs=1)
    s = sub.add_parser("deform", parents=[common], help="first-order and obstruction verdicts")
    s.add_argument("inputs", nargs=1)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--cochain", help="degree-2 cochain file")
    g.add_argument("--enumerate", action="store_true", help="one deformation per HH^2 class")
    s.add_argument("--against", help="second cochain for an equivalence test")
    s = sub.add_parser("suite", parents=[common], help="run the acceptance checks")
    s.add_argument("--select", help="comma-separated criterion numbers")
    s.set_defaults(inputs=[])
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    select = None
    if getattr(ns, "select", None):
        try:
            select = sorted({int(x) for x in ns.select.split(",") if x.strip()})
        except ValueError:
            raise UsageError("--select takes comma-separated integers")
    opts = {k: getattr(ns, k) for k in ("opposite", "cochain", "enumerate", "against") if getattr(ns, k, None)}
    cfg = RunConfig(ns.command, list(ns.inputs), ns.scalars, ns.window, ns.window_cap, ns.normalized,
                    ns.max_dim, ns.out, ns.json, select, opts)
    cfg.check()
    return cfg


def execute(cfg: RunConfig) -> Outcome:
    """Run one command; input and resource failures become outcomes."""
    try:
        return COMMANDS[cfg.command](cfg)
    except ResourceLimitError as e:
        return Outcome(EXIT_RESOURCE, {"error": "resource", "message": str(e), "where": e.where, "dim": e.dim},
                       f"resource cap: {e}")
    except (FormatError, InputValidationError, UsageError, FieldMismatchError, CategoryError,
            PresheafError, SpaceError, PosetError, HochschildError, DeformationError) as e:
        return Outcome(EXIT_INVALID, {"error": "invalid input", "message": str(e)}, f"error: {e}")


def render(cfg: RunConfig, o: Outcome) -> str:
    if cfg.json:
        return dumps({"schema_version": SCHEMA_VERSION, "command": cfg.command, "inputs": cfg.inputs,
                      "exit_status": o.status, **o.report})
    return o.text + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    o = execute(cfg)
    out = render(cfg, o)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return o.status


if __name__ == "__main__":
    sys.exit(main())
