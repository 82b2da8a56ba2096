"""JSON file formats: algebra specs, morphism files and transfer reports.

An algebra spec looks like

    {
      "field": "Q",
      "basis": [["1", 0], ["x", -1], ...],
      "differential": [["z", "xy", "1"], ...],
      "products": {"m2": [[["x", "y"], {"xy": "1"}], ...], "m3": [...]},
      "cap": 6,
      "flags": {"is_dga": true, "is_commutative_expected": true}
    }

Scalars are always strings ("a/b" over Q, residues over F_p).  A morphism
file has "source" and "target" algebra specs and "components" in the same
table format as "products", keyed "f1", "f2", ...  Output is canonical:
sorted keys, entries in basis order, so emitting is byte-deterministic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .algebra import AInftyAlgebra, AInftyMorphism
from .graded import GradedVectorSpace, MultilinearOp
from .scalars import DivisionByZero, field_from_tag

ORACLE_CONVENTION = ("m'_n = alpha_n s^-1 (d_inf)_n s^(xn), i_n and p_n read off I_t and P_t "
                     "the same way, with alpha_n = (-1)^(n(n-1)/2); no further sign")


class ParseError(ValueError):
    """Malformed input; the message names the line or the field."""


class SemanticError(ValueError):
    """Well-formed input that does not describe a valid object."""


def _scalar(field, text, where):
    if not isinstance(text, str):
        raise ParseError("%s: scalars must be strings, got %r" % (where, text))
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError("%s: cannot parse scalar %r" % (where, text)) from None
    try:
        return field(value)
    except DivisionByZero as e:
        raise SemanticError("%s: %s" % (where, e)) from None


def _expect(cond, where, what):
    if not cond:
        raise ParseError("%s: expected %s" % (where, what))


def _table_to_json(op, src_names, tgt_names, field):
    rows = []
    for key in sorted(op.structure_constants()):
        vec = op.structure_constants()[key]
        rows.append([[src_names[i] for i in key],
                     {tgt_names[j]: field.format(c) for j, c in sorted(vec.items())}])
    return rows


def _table_from_json(rows, arity, degree, src, tgt, field, where, label):
    _expect(isinstance(rows, list), where, "a list of [inputs, output] pairs")
    table = {}
    for k, row in enumerate(rows):
        here = "%s[%d]" % (where, k)
        _expect(isinstance(row, list) and len(row) == 2, here, "[inputs, output]")
        inputs, out = row
        _expect(isinstance(inputs, list) and all(isinstance(x, str) for x in inputs),
                here, "a list of basis names as inputs")
        _expect(isinstance(out, dict), here, "an object {name: scalar} as output")
        if len(inputs) != arity:
            raise SemanticError("%s: %d inputs for an arity-%d table" % (here, len(inputs), arity))
        for x in inputs:
            if x not in src.names:
                raise SemanticError("%s: unknown basis name %r" % (here, x))
        key = tuple(src.index(x) for x in inputs)
        vec = table.setdefault(key, {})
        for name, text in out.items():
            if name not in tgt.names:
                raise SemanticError("%s: unknown basis name %r" % (here, name))
            c = _scalar(field, text, here)
            j = tgt.index(name)
            d_in = src.tensor_degree(key)
            if c and tgt.degrees[j] != d_in + degree:
                raise SemanticError(
                    "%s: %s(%s) -> %s has degree %d, but %s must have degree %d"
                    % (here, label, ", ".join(inputs), name, tgt.degrees[j] - d_in, label, degree))
            vec[j] = vec.get(j, field.zero) + c
    return table


@dataclass
class AlgebraSpec:
    """The contents of an algebra spec file."""

    field: object
    basis: list
    differential: dict = dc_field(default_factory=dict)
    products: dict = dc_field(default_factory=dict)
    cap: int = None
    flags: dict = dc_field(default_factory=dict)
    description: str = None

    @property
    def space(self):
        return GradedVectorSpace(self.basis, self.field)

    def algebra(self, cap=None):
        cap = cap if cap is not None else (self.cap if self.cap is not None else 6)
        V = self.space
        ops = {}
        if self.differential:
            ops[1] = MultilinearOp(V, V, 1, -1, {(i,): v for i, v in self.differential.items()})
        for n, table in self.products.items():
            ops[n] = MultilinearOp(V, V, n, n - 2, table)
        return AInftyAlgebra(V, ops, cap)

    @classmethod
    def from_algebra(cls, alg, cap=None, description=None, **flags):
        diff = {}
        products = {}
        for n in alg.arities():
            table = alg.m(n).structure_constants()
            if n == 1:
                diff = {k[0]: dict(v) for k, v in table.items()}
            else:
                products[n] = {k: dict(v) for k, v in table.items()}
        return cls(alg.field, list(zip(alg.space.names, alg.space.degrees)), diff, products,
                   alg.cap if cap is None else cap, dict(flags), description)

    def to_json(self):
        V = self.space
        F = self.field
        names = V.names
        out = {
            "field": F.name,
            "basis": [[n, d] for n, d in self.basis],
            "differential": [[names[i], names[j], F.format(c)]
                             for i in sorted(self.differential)
                             for j, c in sorted(self.differential[i].items())],
            "products": {},
            "flags": dict(self.flags),
        }
        for n in sorted(self.products):
            op = MultilinearOp(V, V, n, n - 2, self.products[n])
            out["products"]["m%d" % n] = _table_to_json(op, names, names, F)
        if self.cap is not None:
            out["cap"] = self.cap
        if self.description:
            out["description"] = self.description
        return out


def spec_from_json(obj, where="spec"):
    _expect(isinstance(obj, dict), where, "an object")
    for key in obj:
        if key not in ("field", "basis", "differential", "products", "cap", "flags", "description"):
            raise ParseError("%s: unknown field %r" % (where, key))
    _expect("field" in obj and isinstance(obj["field"], str), where + ".field", "a field tag string")
    try:
        F = field_from_tag(obj["field"])
    except ValueError as e:
        raise ParseError("%s.field: %s" % (where, e)) from None
    basis = obj.get("basis")
    _expect(isinstance(basis, list), where + ".basis", "a list of [name, degree]")
    pairs = []
    for k, entry in enumerate(basis):
        here = "%s.basis[%d]" % (where, k)
        _expect(isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], str)
                and isinstance(entry[1], int) and not isinstance(entry[1], bool),
                here, "[name, integer degree]")
        pairs.append((entry[0], entry[1]))
    seen = set()
    for k, (name, _) in enumerate(pairs):
        if name in seen:
            raise SemanticError("%s.basis[%d]: duplicate basis name %r" % (where, k, name))
        seen.add(name)
    V = GradedVectorSpace(pairs, F)
    diff = {}
    rows = obj.get("differential", [])
    _expect(isinstance(rows, list), where + ".differential", "a list of [source, target, scalar]")
    for k, row in enumerate(rows):
        here = "%s.differential[%d]" % (where, k)
        _expect(isinstance(row, list) and len(row) == 3 and isinstance(row[0], str)
                and isinstance(row[1], str), here, "[source, target, scalar]")
        for name in row[:2]:
            if name not in seen:
                raise SemanticError("%s: unknown basis name %r" % (here, name))
        i, j = V.index(row[0]), V.index(row[1])
        c = _scalar(F, row[2], here)
        if c and V.degrees[j] != V.degrees[i] - 1:
            raise SemanticError("%s: d(%s) -> %s does not lower degree by one" % (here, row[0], row[1]))
        vec = diff.setdefault(i, {})
        vec[j] = vec.get(j, F.zero) + c
    diff = {i: {j: c for j, c in v.items() if c} for i, v in diff.items()}
    diff = {i: v for i, v in diff.items() if v}
    products = {}
    prods = obj.get("products", {})
    _expect(isinstance(prods, dict), where + ".products", "an object keyed m2, m3, ...")
    for label, rows in prods.items():
        here = "%s.products.%s" % (where, label)
        if not (label.startswith("m") and label[1:].isdigit() and int(label[1:]) >= 2):
            raise ParseError("%s: product tables are named m2, m3, ..." % here)
        n = int(label[1:])
        table = _table_from_json(rows, n, n - 2, V, V, F, here, label)
        table = {k: {j: c for j, c in v.items() if c} for k, v in table.items()}
        table = {k: v for k, v in table.items() if v}
        if table:
            products[n] = table
    cap = obj.get("cap")
    if cap is not None:
        _expect(isinstance(cap, int) and not isinstance(cap, bool) and cap >= 1, where + ".cap",
                "a positive integer")
    flags = obj.get("flags", {})
    _expect(isinstance(flags, dict) and all(isinstance(v, bool) for v in flags.values()),
            where + ".flags", "an object of booleans")
    desc = obj.get("description")
    _expect(desc is None or isinstance(desc, str), where + ".description", "a string")
    spec = AlgebraSpec(F, pairs, diff, products, cap, dict(flags), desc)
    if flags.get("is_dga") and any(n > 2 for n in products):
        raise SemanticError("%s.flags: is_dga is set but m3 or higher is present" % where)
    return spec


def _loads(text, path):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("%s:%d:%d: %s" % (path, e.lineno, e.colno, e.msg)) from None


def parse_spec_text(text, path="<string>"):
    return spec_from_json(_loads(text, path), path)


def parse_spec(path):
    with open(path, encoding="utf-8") as fh:
        return parse_spec_text(fh.read(), str(path))


def _format(obj, indent, width=96):
    flat = json.dumps(obj, sort_keys=True, ensure_ascii=False)
    if len(flat) + indent <= width or not isinstance(obj, (dict, list)) or not obj:
        return flat
    pad = " " * (indent + 1)
    if isinstance(obj, dict):
        items = ["%s%s: %s" % (pad, json.dumps(k, ensure_ascii=False),
                               _format(obj[k], indent + 1, width)) for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"
    items = [pad + _format(v, indent + 1, width) for v in obj]
    return "[\n" + ",\n".join(items) + "\n" + " " * indent + "]"


def dumps(obj):
    """Canonical JSON text: sorted keys, short values kept on one line."""
    return _format(obj, 0) + "\n"


def emit_spec(spec, path=None):
    text = dumps(spec.to_json())
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


# morphisms ---------------------------------------------------------------

@dataclass
class MorphismSpec:
    source: AlgebraSpec
    target: AlgebraSpec
    components: dict
    cap: int = None

    def morphism(self, cap=None):
        cap = cap if cap is not None else (self.cap if self.cap is not None else 6)
        A, B = self.source.algebra(cap), self.target.algebra(cap)
        comps = {}
        for n, table in self.components.items():
            comps[n] = MultilinearOp(A.space, B.space, n, n - 1, table)
        return AInftyMorphism(A, B, comps, cap)

    @classmethod
    def from_morphism(cls, f, cap=None):
        comps = {}
        for n in range(1, f.cap + 1):
            table = f.f(n).structure_constants()
            if table:
                comps[n] = {k: dict(v) for k, v in table.items()}
        return cls(AlgebraSpec.from_algebra(f.source), AlgebraSpec.from_algebra(f.target),
                   comps, f.cap if cap is None else cap)

    def components_json(self):
        A, B = self.source.space, self.target.space
        F = A.field
        out = {}
        for n in sorted(self.components):
            op = MultilinearOp(A, B, n, n - 1, self.components[n])
            out["f%d" % n] = _table_to_json(op, A.names, B.names, F)
        return out

    def to_json(self):
        out = {"source": self.source.to_json(), "target": self.target.to_json(),
               "components": self.components_json()}
        if self.cap is not None:
            out["cap"] = self.cap
        return out


def _components_from_json(obj, A, B, where):
    _expect(isinstance(obj, dict), where, "an object keyed f1, f2, ...")
    comps = {}
    for label, rows in obj.items():
        here = "%s.%s" % (where, label)
        if not (label.startswith("f") and label[1:].isdigit() and int(label[1:]) >= 1):
            raise ParseError("%s: components are named f1, f2, ..." % here)
        n = int(label[1:])
        table = _table_from_json(rows, n, n - 1, A, B, A.field, here, label)
        table = {k: {j: c for j, c in v.items() if c} for k, v in table.items()}
        comps[n] = {k: v for k, v in table.items() if v}
    return comps


def morphism_from_json(obj, where="morphism"):
    _expect(isinstance(obj, dict), where, "an object")
    for key in ("source", "target", "components"):
        _expect(key in obj, where, "a %r field" % key)
    src = spec_from_json(obj["source"], where + ".source")
    tgt = spec_from_json(obj["target"], where + ".target")
    if src.field != tgt.field:
        raise SemanticError("%s: source and target are over different fields" % where)
    comps = _components_from_json(obj["components"], src.space, tgt.space, where + ".components")
    cap = obj.get("cap")
    return MorphismSpec(src, tgt, comps, cap)


def parse_morphism(path):
    """A morphism file, or `file.json#key` to pick a morphism out of a report:
    #inclusion and #projection of a transfer report, #composite of a compose
    report."""
    path = str(path)
    base, _, part = path.partition("#")
    with open(base, encoding="utf-8") as fh:
        obj = _loads(fh.read(), base)
    if part:
        _expect(isinstance(obj, dict) and part in obj, base, "a field %r" % part)
        if part in ("inclusion", "projection"):
            _expect("minimal_model" in obj and "input" in obj, base, "a transfer report")
            small = obj["minimal_model"]
            big = obj["input"]
            src, tgt = (small, big) if part == "inclusion" else (big, small)
            obj = {"source": src, "target": tgt, "components": obj[part], "cap": obj.get("cap")}
        else:
            obj = obj[part]
        return morphism_from_json(obj, "%s#%s" % (base, part))
    return morphism_from_json(obj, base)


def emit_morphism(mspec, path=None):
    text = dumps(mspec.to_json())
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


# reports -----------------------------------------------------------------

def check_json(res, src_names, tgt_names, field):
    return {
        "ok": bool(res.ok),
        "checked": res.checked,
        "violations": [{"input": [src_names[i] for i in key],
                        "residual": {" ".join(tgt_names[j] for j in k): field.format(c)
                                     for k, c in sorted(v.items())}}
                       for key, v in res.violations],
    }


def verification_json(alg, minimal, inclusion, projection, cap):
    """Run the associativity and morphism checks and describe the outcome."""
    from .algebra import check_higher_associativity, check_morphism
    H, A = minimal.space, alg.space
    F = A.field
    out = {"associativity": {}, "inclusion": {}, "projection": {}}
    for n in range(1, cap + 1):
        out["associativity"][str(n)] = check_json(check_higher_associativity(minimal, n),
                                                  H.names, H.names, F)
        out["inclusion"][str(n)] = check_json(check_morphism(inclusion, n), H.names, A.names, F)
        out["projection"][str(n)] = check_json(check_morphism(projection, n), A.names, H.names, F)
    out["all_passed"] = all(v["ok"] for part in ("associativity", "inclusion", "projection")
                            for v in out[part].values())
    return out


def oracle_diff_json(diff, a, b):
    H, A = a.minimal.space, a.retract.space
    F = A.field
    out = {"convention": ORACLE_CONVENTION, "arities": {}}
    names = {"m": (H.names, H.names), "i": (H.names, A.names), "p": (A.names, H.names)}
    for n, parts in sorted(diff.items()):
        entry = {}
        for key, rows in sorted(parts.items()):
            src, tgt = names[key]
            entry[key] = {
                "differences": len(rows),
                "examples": [{"input": [src[i] for i in k],
                              "merkulov_minus_oracle": {" ".join(tgt[j] for j in kk): F.format(c)
                                                        for kk, c in sorted(r.items())}}
                             for k, r in rows[:3]],
            }
        out["arities"][str(n)] = entry
    out["zero"] = all(not v["differences"] for e in out["arities"].values() for v in e.values())
    return out


def formality_json(minimal, cap):
    from .algebra import check_balanced
    H = minimal.space
    F = H.field
    higher = {}
    witness = None
    for n in range(3, cap + 1):
        table = minimal.m(n).structure_constants()
        higher[str(n)] = len(table)
        if table and witness is None:
            key = min(table)
            witness = {"arity": n, "input": [H.names[i] for i in key],
                       "output": {H.names[j]: F.format(c) for j, c in sorted(table[key].items())}}
    balanced = {}
    for n in range(2, cap + 1):
        res = check_balanced(minimal, n)
        balanced[str(n)] = {"ok": res.ok, "checked": res.checked,
                            "violations": [{"shuffle": list(pq), "input": [H.names[i] for i in k],
                                            "output": {" ".join(H.names[j] for j in kk): F.format(c)
                                                       for kk, c in sorted(v.items())}}
                                           for pq, k, v in res.violations[:3]]}
    vanish = not any(higher.values())
    bal = all(v["ok"] for v in balanced.values())
    return {"higher_operations": higher, "higher_operations_vanish": vanish,
            "balanced": balanced, "is_balanced": bal, "formal": vanish and bal,
            "witness": witness}


def transfer_report(result, alg, cap, verification=None, oracle=None, formality=None,
                    description=None):
    minimal = result.minimal
    inc = MorphismSpec.from_morphism(result.inclusion, cap)
    proj = MorphismSpec.from_morphism(result.projection, cap)
    H = minimal.space
    rep = {
        "cap": cap,
        "method": result.method,
        "input": AlgebraSpec.from_algebra(alg, cap, is_dga=alg.is_dga()).to_json(),
        "minimal_model": AlgebraSpec.from_algebra(
            minimal, cap, is_dga=minimal.is_dga()).to_json(),
        "homology_representatives": {
            H.names[k]: {alg.space.names[j]: H.field.format(c)
                         for j, c in sorted(result.retract.i.vector(k).items())}
            for k in range(H.dim)},
        "inclusion": inc.components_json(),
        "projection": proj.components_json(),
        "vanishing": {str(n): why for n, why in sorted(result.vanishing.items())},
    }
    if description:
        rep["description"] = description
    if verification is not None:
        rep["verification"] = verification
    if oracle is not None:
        rep["oracle_diff"] = oracle
    if formality is not None:
        rep["formality"] = formality
    return rep


def emit_report(report, path=None):
    text = dumps(report)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
