"""JSON description files for categories, presheaves, spaces, covers and
cochains.

Coefficients are written as strings (``"1"``, ``"-3/4"``, ``"5"`` for
F_p) so files are exact.  Every parse error names the file and the
JSON path of the offending field.  ``dumps`` output is canonical: parsing
and re-dumping a written file reproduces it byte for byte.
"""

from __future__ import annotations

import json
import os
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

from .hochschild import Cochain
from .linalg import Field, Matrix, field_from_name
from .lincat import (
    Algebra,
    FinLinCat,
    GradedSpace,
    algebra_of_object,
    from_algebra,
    ground_algebra,
    validate_category,
)
from .poset import Poset, set_label
from .sites import Cover, FiniteSpace, RingPresheaf

FORMAT_VERSION = 1


class FormatError(ValueError):
    """Malformed input: ``where`` is ``file:json.path``."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


class InputValidationError(ValueError):
    """Well-formed input that violates the mathematical axioms."""


def dumps(obj: Mapping) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _read(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}:{e.lineno}:{e.colno}", f"invalid JSON: {e.msg}") from None
    except OSError as e:
        raise FormatError(path, f"cannot read: {e.strerror}") from None


def _write(path: str, obj: Mapping):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


class _Cursor:
    """Tracks the JSON path while walking a parsed document."""

    def __init__(self, src: str, path: str = "$"):
        self.src, self.path = src, path

    def at(self, key) -> "_Cursor":
        return _Cursor(self.src, f"{self.path}[{key}]" if isinstance(key, int) else f"{self.path}.{key}")

    def fail(self, msg: str):
        raise FormatError(f"{self.src}:{self.path}", msg)

    def get(self, d: Any, key: str, kind=None, default=...):
        if not isinstance(d, dict):
            self.fail("expected an object")
        if key not in d:
            if default is ...:
                self.at(key).fail("missing field")
            return default
        v = d[key]
        if kind is not None and not isinstance(v, kind):
            self.at(key).fail(f"expected {getattr(kind, '__name__', kind)}")
        return v

    def scalar(self, f: Field, x: Any):
        if not isinstance(x, (str, int)) or isinstance(x, bool):
            self.fail("coefficients must be strings or integers")
        try:
            return f(x)
        except (ValueError, ZeroDivisionError) as e:
            self.fail(f"bad coefficient {x!r}: {e}")

    def vector(self, f: Field, d: Any, labels: Sequence[str]) -> Dict[int, Any]:
        if not isinstance(d, dict):
            self.fail("expected a label -> coefficient object")
        out = {}
        for lab, x in d.items():
            if lab not in labels:
                self.at(lab).fail(f"unknown basis label {lab!r}")
            v = self.at(lab).scalar(f, x)
            if v:
                out[labels.index(lab)] = v
        return out


def _check_format(cur: _Cursor, doc: Any, kind: str):
    fmt = cur.get(doc, "format", str)
    if fmt != f"hochcat.{kind}":
        cur.at("format").fail(f"expected 'hochcat.{kind}', got {fmt!r}")
    ver = cur.get(doc, "version", int, FORMAT_VERSION)
    if ver != FORMAT_VERSION:
        cur.at("version").fail(f"unsupported version {ver}")


def _vec_out(f: Field, v: Mapping[int, Any], labels: Sequence[str]) -> Dict[str, str]:
    return {labels[i]: f.fmt(x) for i, x in sorted(v.items()) if x}


# ---------------------------------------------------------------- categories


def category_to_dict(c: FinLinCat) -> Dict:
    f = c.field
    homs = []
    for (a, b), sp in sorted(c.homs.items()):
        if len(set(sp.labels)) != len(sp.labels):
            raise ValueError(f"hom({a}, {b}) has repeated basis labels")
        entry = {"source": a, "target": b, "labels": list(sp.labels)}
        if any(sp.degrees):
            entry["degrees"] = list(sp.degrees)
        if sp.has_differential():
            entry["differential"] = {sp.labels[i]: _vec_out(f, v, sp.labels) for i, v in sorted(sp.d.items()) if v}
        homs.append(entry)
    comp = []
    for (a, b, cc), table in sorted(c.comp.items()):
        hg, hf, hgf = c.hom(b, cc), c.hom(a, b), c.hom(a, cc)
        rows = [{"g": hg.labels[gi], "f": hf.labels[fi], "value": _vec_out(f, v, hgf.labels)}
                for (gi, fi), v in sorted(table.items()) if v]
        comp.append({"objects": [a, b, cc], "products": rows})
    out = {
        "format": "hochcat.category",
        "version": FORMAT_VERSION,
        "name": c.name,
        "scalars": f.name,
        "objects": list(c.objects),
        "homs": homs,
        "composition": comp,
        "identities": {a: _vec_out(f, v, c.hom(a, a).labels) for a, v in sorted(c.identities.items()) if v},
    }
    if c.relation is not None:
        out["censoring"] = [list(r) for r in sorted(c.relation)]
    return out


def category_from_dict(doc: Any, src: str = "<input>", validate: bool = True,
                       scalars: Optional[Field] = None) -> FinLinCat:
    cur = _Cursor(src)
    _check_format(cur, doc, "category")
    try:
        f = field_from_name(cur.get(doc, "scalars", str))
    except ValueError as e:
        cur.at("scalars").fail(str(e))
    if scalars is not None and scalars != f:
        cur.at("scalars").fail(f"scalar kind {f.name} differs from requested {scalars.name}")
    objects = cur.get(doc, "objects", list)
    for i, o in enumerate(objects):
        if not isinstance(o, str):
            cur.at("objects").at(i).fail("object labels must be strings")
    if len(set(objects)) != len(objects):
        cur.at("objects").fail("repeated object label")
    homs: Dict[Tuple[str, str], GradedSpace] = {}
    hc = cur.at("homs")
    for k, h in enumerate(cur.get(doc, "homs", list)):
        hk = hc.at(k)
        a, b = hk.get(h, "source", str), hk.get(h, "target", str)
        for lab, o in (("source", a), ("target", b)):
            if o not in objects:
                hk.at(lab).fail(f"unknown object {o!r}")
        if (a, b) in homs:
            hk.fail(f"hom({a}, {b}) given twice")
        labels = hk.get(h, "labels", list)
        if len(set(labels)) != len(labels) or not all(isinstance(x, str) for x in labels):
            hk.at("labels").fail("labels must be distinct strings")
        degrees = hk.get(h, "degrees", list, [0] * len(labels))
        if len(degrees) != len(labels) or not all(isinstance(x, int) and not isinstance(x, bool) for x in degrees):
            hk.at("degrees").fail("need one integer degree per label")
        if any(x > 0 for x in degrees):
            hk.at("degrees").fail("degrees must be non-positive")
        diff = {}
        dc = hk.at("differential")
        for lab, img in hk.get(h, "differential", dict, {}).items():
            if lab not in labels:
                dc.at(lab).fail(f"unknown basis label {lab!r}")
            v = dc.at(lab).vector(f, img, labels)
            if v:
                diff[labels.index(lab)] = v
        homs[a, b] = GradedSpace(tuple(labels), tuple(degrees), diff)

    def hom(a, b):
        return homs.get((a, b), GradedSpace())

    comp = {}
    cc = cur.at("composition")
    for k, t in enumerate(cur.get(doc, "composition", list, [])):
        tk = cc.at(k)
        objs = tk.get(t, "objects", list)
        if len(objs) != 3 or any(o not in objects for o in objs):
            tk.at("objects").fail("need three known objects [A, B, C] for g∘f with f: A->B, g: B->C")
        a, b, c3 = objs
        table = comp.setdefault((a, b, c3), {})
        pc = tk.at("products")
        for r, row in enumerate(tk.get(t, "products", list)):
            rk = pc.at(r)
            g, fl = rk.get(row, "g", str), rk.get(row, "f", str)
            if g not in hom(b, c3).labels:
                rk.at("g").fail(f"{g!r} is not a basis label of hom({b}, {c3})")
            if fl not in hom(a, b).labels:
                rk.at("f").fail(f"{fl!r} is not a basis label of hom({a}, {b})")
            v = rk.at("value").vector(f, rk.get(row, "value", dict), hom(a, c3).labels)
            key = (hom(b, c3).labels.index(g), hom(a, b).labels.index(fl))
            if key in table:
                rk.fail("product given twice")
            table[key] = v
    ids = {}
    ic = cur.at("identities")
    for a, v in cur.get(doc, "identities", dict).items():
        if a not in objects:
            ic.at(a).fail(f"unknown object {a!r}")
        ids[a] = ic.at(a).vector(f, v, hom(a, a).labels)
    rel = doc.get("censoring")
    if rel is not None:
        rc = cur.at("censoring")
        if not isinstance(rel, list) or not all(isinstance(p, list) and len(p) == 2 for p in rel):
            rc.fail("expected a list of [A, B] pairs")
        rel = [tuple(p) for p in rel]
    c = FinLinCat(f, objects, homs, comp, ids, relation=rel, name=cur.get(doc, "name", str, ""))
    if validate:
        bad = validate_category(c)
        if bad:
            raise InputValidationError(f"{src}: category axioms fail: " + "; ".join(str(v) for v in bad[:5]))
    return c


def read_category(path: str, validate: bool = True, scalars: Optional[Field] = None) -> FinLinCat:
    return category_from_dict(_read(path), path, validate, scalars)


def write_category(c: FinLinCat, path: str):
    _write(path, category_to_dict(c))


# ---------------------------------------------------------------- algebras and presheaves


def _resolve_algebra(ref: Any, cur: _Cursor, base_dir: str, f: Field) -> Algebra:
    if ref == "k":
        return ground_algebra(f)
    if isinstance(ref, dict):
        c = category_from_dict(ref, f"{cur.src}:{cur.path}", scalars=f)
    elif isinstance(ref, str):
        c = read_category(os.path.join(base_dir, ref), scalars=f)
    else:
        cur.fail("algebra reference must be 'k', a category file path or an inline category")
    if len(c.objects) != 1:
        cur.fail("algebra reference must be a one-object category")
    a = algebra_of_object(c, c.objects[0])
    if c.name:
        a.name = c.name
    return a


def presheaf_from_dict(doc: Any, poset: Poset, f: Field, cur: _Cursor, base_dir: str) -> RingPresheaf:
    algs = {}
    ac = cur.at("algebras")
    refs = cur.get(doc, "algebras", dict)
    for u in poset.elements:
        if u not in refs:
            ac.fail(f"no algebra for element {u!r}")
    for u, ref in refs.items():
        if u not in poset.elements:
            ac.at(u).fail(f"unknown element {u!r}")
        algs[u] = _resolve_algebra(ref, ac.at(u), base_dir, f)
    res = {}
    rc = cur.at("restrictions")
    for k, r in enumerate(cur.get(doc, "restrictions", list, [])):
        rk = rc.at(k)
        lo, hi = rk.get(r, "to", str), rk.get(r, "from", str)
        if lo not in poset.elements or hi not in poset.elements or not poset.leq(lo, hi):
            rk.fail(f"need to <= from, got {lo!r}, {hi!r}")
        rows = rk.get(r, "matrix", list)
        ncol = algs[hi].dim
        if len(rows) != algs[lo].dim or any(not isinstance(row, list) or len(row) != ncol for row in rows):
            rk.at("matrix").fail(f"expected a {algs[lo].dim} x {ncol} matrix")
        vals = [[rk.at("matrix").at(i).scalar(f, x) for x in row] for i, row in enumerate(rows)]
        res[lo, hi] = Matrix.from_rows(f, vals, ncols=ncol)
    o = RingPresheaf(poset, algs, res, name=cur.get(doc, "name", str, ""))
    bad = o.violations()
    if bad:
        raise InputValidationError(f"{cur.src}:{cur.path}: presheaf invalid: " + "; ".join(bad[:5]))
    return o


def presheaf_to_dict(o: RingPresheaf) -> Dict:
    f = o.field
    algs = {}
    for u, a in sorted(o.algebras.items()):
        if a.dim == 1 and a.mult == {(0, 0): {0: f.one}} and a.unit == {0: f.one}:
            algs[u] = "k"
        else:
            algs[u] = category_to_dict(from_algebra(a))
    res = []
    for u, v in o.poset.covers():
        m = o.restriction(u, v)
        res.append({"to": u, "from": v, "matrix": [[f.fmt(x) for x in row] for row in m.to_rows()]})
    return {"algebras": algs, "restrictions": res, "name": o.name}


def read_poset_presheaf(path: str, scalars: Optional[Field] = None) -> RingPresheaf:
    """``{"format": "hochcat.presheaf", "scalars", "elements", "relations", "algebras", "restrictions"}``."""
    doc = _read(path)
    cur = _Cursor(path)
    _check_format(cur, doc, "presheaf")
    f = _field(cur, doc, scalars)
    els = cur.get(doc, "elements", list)
    rels = cur.get(doc, "relations", list, [])
    try:
        p = Poset(els, [tuple(r) for r in rels])
    except Exception as e:
        cur.at("relations").fail(str(e))
    return presheaf_from_dict(doc, p, f, cur, os.path.dirname(path))


def poset_presheaf_to_dict(o: RingPresheaf) -> Dict:
    d = presheaf_to_dict(o)
    d.update({
        "format": "hochcat.presheaf",
        "version": FORMAT_VERSION,
        "scalars": o.field.name,
        "elements": list(o.poset.elements),
        "relations": [list(r) for r in o.poset.covers()],
    })
    return d


def _field(cur: _Cursor, doc: Any, scalars: Optional[Field]) -> Field:
    try:
        f = field_from_name(cur.get(doc, "scalars", str, "rational"))
    except ValueError as e:
        cur.at("scalars").fail(str(e))
    if scalars is not None and scalars != f:
        cur.at("scalars").fail(f"scalar kind {f.name} differs from requested {scalars.name}")
    return f


# ---------------------------------------------------------------- spaces and covers


class SpaceFile:
    """A parsed space file: the space and an optional ring presheaf on its
    nonempty opens (elements labelled like ``{a,b}``)."""

    def __init__(self, space: FiniteSpace, presheaf: Optional[RingPresheaf], field: Field):
        self.space, self.presheaf, self.field = space, presheaf, field


def _open_set(cur: _Cursor, x: Any, points: Sequence[str]) -> frozenset:
    if isinstance(x, str):
        s = x.strip()
        if not (s.startswith("{") and s.endswith("}")):
            cur.fail("open given as a string must look like '{a,b}'")
        items = [t for t in s[1:-1].split(",") if t]
    elif isinstance(x, list):
        items = x
    else:
        cur.fail("open must be a list of points or a '{a,b}' label")
    for p in items:
        if p not in points:
            cur.fail(f"unknown point {p!r}")
    return frozenset(items)


def space_from_dict(doc: Any, src: str = "<input>", base_dir: str = ".", scalars: Optional[Field] = None) -> SpaceFile:
    cur = _Cursor(src)
    _check_format(cur, doc, "space")
    f = _field(cur, doc, scalars)
    points = cur.get(doc, "points", list)
    name = cur.get(doc, "name", str, "")
    try:
        if "opens" in doc:
            opens = [_open_set(cur.at("opens").at(i), u, points) for i, u in enumerate(cur.get(doc, "opens", list))]
            x = FiniteSpace(points, opens=opens, name=name)
        else:
            spec = cur.get(doc, "specialization", list)
            x = FiniteSpace(points, specialization=[tuple(r) for r in spec], name=name)
    except FormatError:
        raise
    except ValueError as e:
        raise InputValidationError(f"{src}: {e}") from None
    o = None
    if "presheaf" in doc:
        labels = {set_label(u): u for u in x.opens if u}
        p = Poset.from_sets(labels)
        o = presheaf_from_dict(doc["presheaf"], p, f, cur.at("presheaf"), base_dir)
    return SpaceFile(x, o, f)


def read_space(path: str, scalars: Optional[Field] = None) -> SpaceFile:
    return space_from_dict(_read(path), path, os.path.dirname(path), scalars)


def space_to_dict(x: FiniteSpace, presheaf: Optional[RingPresheaf] = None, field: Optional[Field] = None) -> Dict:
    f = field or (presheaf.field if presheaf else None)
    out = {
        "format": "hochcat.space",
        "version": FORMAT_VERSION,
        "name": x.name,
        "points": list(x.points),
        "specialization": [list(r) for r in x.poset.covers()],
    }
    if f is not None:
        out["scalars"] = f.name
    if presheaf is not None:
        out["presheaf"] = presheaf_to_dict(presheaf)
    return out


def read_cover(path: str, x: FiniteSpace) -> Cover:
    """``{"format": "hochcat.cover", "pieces": [["a","b","c"], "{a,b,d}"]}``."""
    doc = _read(path)
    cur = _Cursor(path)
    _check_format(cur, doc, "cover")
    pieces = [_open_set(cur.at("pieces").at(i), u, x.points) for i, u in enumerate(cur.get(doc, "pieces", list))]
    try:
        return Cover(x, pieces)
    except ValueError as e:
        raise InputValidationError(f"{path}: {e}") from None


def cover_to_dict(c: Cover) -> Dict:
    return {"format": "hochcat.cover", "version": FORMAT_VERSION, "pieces": [set_label(u) for u in c.pieces]}


# ---------------------------------------------------------------- cochains


def cochain_to_dict(c: FinLinCat, co: Cochain) -> Dict:
    f = c.field
    entries = []
    for (ch, t), v in sorted(co.values.items()):
        if not v:
            continue
        p = len(ch) - 1
        slots = [(ch[p - k], ch[p - k + 1]) for k in range(1, p + 1)]
        entries.append({
            "chain": list(ch),
            "args": [c.hom(*s).labels[i] for s, i in zip(slots, t)],
            "value": _vec_out(f, v, c.hom(ch[0], ch[-1]).labels),
        })
    return {"format": "hochcat.cochain", "version": FORMAT_VERSION, "degree": co.degree, "entries": entries}


def cochain_from_dict(c: FinLinCat, doc: Any, src: str = "<input>") -> Cochain:
    cur = _Cursor(src)
    _check_format(cur, doc, "cochain")
    deg = cur.get(doc, "degree", int)
    vals = {}
    ec = cur.at("entries")
    for k, e in enumerate(cur.get(doc, "entries", list)):
        ek = ec.at(k)
        ch = ek.get(e, "chain", list)
        if any(o not in c.objects for o in ch) or not ch:
            ek.at("chain").fail("chain must list known objects")
        p = len(ch) - 1
        args = ek.get(e, "args", list)
        if len(args) != p:
            ek.at("args").fail(f"need {p} arguments for a chain of length {p}")
        t = []
        for i, lab in enumerate(args):
            sp = c.hom(ch[p - i - 1], ch[p - i])
            if lab not in sp.labels:
                ek.at("args").at(i).fail(f"{lab!r} is not a basis label of hom({ch[p - i - 1]}, {ch[p - i]})")
            t.append(sp.labels.index(lab))
        v = ek.at("value").vector(c.field, ek.get(e, "value", dict), c.hom(ch[0], ch[-1]).labels)
        if v:
            vals[tuple(ch), tuple(t)] = v
    return Cochain(deg, vals)


def read_cochain(c: FinLinCat, path: str) -> Cochain:
    return cochain_from_dict(c, _read(path), path)


def write_json(path: str, obj: Mapping):
    _write(path, obj)
