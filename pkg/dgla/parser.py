"""
JSON object descriptions.

    {"kind": "lie" | "free" | "artinian" | "cdga" | "rep",
     "name": "...",
     "generators": [{"label": "e", "degree": 0, "weight": 1}, ...],
     "brackets": [{"args": ["h", "e"], "value": [{"label": "e", "coeff": "2"}]}],
     "differential": [{"args": ["x"], "value": [...]}],
     "augmentation": [{"label": "1", "coeff": "1"}]}

Artinian algebras use "products" and representations "action" in the
bracket shape. A "cdga" is a semi-free presentation whose differential
values are monomials ("X^2·U"), or a monomial quotient when "relations"
lists monomials. Coefficients are "p/q" strings or integers.
"""
import dataclasses
import json
import logging

from dgla import cdga, lie, linalg
from dgla.errors import InputError, VerdictError
from dgla.graded import Complex, GradedSpace

LOGGER = logging.getLogger(__name__)

KINDS = ["lie", "free", "artinian", "cdga", "rep"]

_FIELDS = {
    "lie": {"kind", "name", "generators", "brackets", "differential"},
    "free": {"kind", "name", "generators", "max_weight"},
    "artinian": {"kind", "name", "generators", "products", "differential", "augmentation", "unit", "epsilon_map"},
    "cdga": {"kind", "name", "generators", "differential", "relations"},
    "rep": {"kind", "name", "generators", "action", "differential"},
}


class _Fields:
    """
    Field access that reports the JSON path of whatever went wrong.
    """

    def __init__(self, source: str):
        self.source = source

    def fail(self, path: str, msg: str):
        raise InputError(f"{self.source}: {path}: {msg}", module="parser")

    def get(self, obj, key, path, kind, required=True, default=None):
        if not isinstance(obj, dict):
            self.fail(path, "expected an object")
        if key not in obj:
            if required:
                self.fail(f"{path}.{key}" if path else key, "missing field")
            return default
        val = obj[key]
        if not isinstance(val, kind) or (kind is int and isinstance(val, bool)):
            name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
            self.fail(f"{path}.{key}" if path else key, f"expected {name}")
        return val

    def coeff(self, val, path):
        if isinstance(val, bool) or not isinstance(val, (int, str)):
            self.fail(path, "coefficients are integers or 'p/q' strings")
        try:
            return linalg.q(val)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            self.fail(path, f"bad rational '{val}' ({exc})")

    def combo(self, items, path):
        if not isinstance(items, list):
            self.fail(path, "expected a list of {label, coeff}")
        out = {}
        for i, item in enumerate(items):
            p = f"{path}[{i}]"
            label = self.get(item, "label", p, str)
            c = self.coeff(self.get(item, "coeff", p, (int, str)), f"{p}.coeff")
            linalg.axpy(out, {label: c})
        return out

    def table(self, doc, key, arity, required=False):
        out = {}
        for i, entry in enumerate(self.get(doc, key, "", list, required=required, default=[])):
            p = f"{key}[{i}]"
            args = self.get(entry, "args", p, list)
            if len(args) != arity or not all(isinstance(a, str) for a in args):
                self.fail(f"{p}.args", f"expected {arity} label(s)")
            k = tuple(args) if arity > 1 else args[0]
            if k in out:
                self.fail(f"{p}.args", f"duplicate entry {args}")
            out[k] = self.combo(self.get(entry, "value", p, list), f"{p}.value")
        return out

    def generators(self, doc):
        basis, ws = [], {}
        for i, g in enumerate(self.get(doc, "generators", "", list)):
            p = f"generators[{i}]"
            label = self.get(g, "label", p, str)
            degree = self.get(g, "degree", p, int)
            basis.append((label, degree))
            w = self.get(g, "weight", p, int, required=False)
            if w is not None:
                ws[label] = w
        labels = [l for l, _ in basis]
        if len(set(labels)) != len(labels):
            dup = sorted({l for l in labels if labels.count(l) > 1})
            self.fail("generators", f"duplicate labels {dup}")
        if ws and len(ws) != len(basis):
            self.fail("generators", "weights must be given for all generators or none")
        return basis, (ws or None)


def load_json(filename: str):
    try:
        with open(filename, "rb") as f:
            raw = f.read()
    except OSError as exc:
        raise InputError(f"Cannot read '{filename}': {exc.strerror}", module="parser")
    try:
        return json.loads(raw.decode("utf-8")), raw
    except UnicodeDecodeError:
        raise InputError(f"{filename}: not UTF-8", module="parser")
    except json.JSONDecodeError as exc:
        raise InputError(f"{filename}:{exc.lineno}:{exc.colno}: {exc.msg}", module="parser")


def parse_document(doc, source="<input>", lie_algebra=None, max_weight=None):
    """
    Build and validate the object a document describes. Representations
    need the Lie algebra they are over; free Lie algebras need max_weight
    unless the document carries one.
    """
    f = _Fields(source)
    if not isinstance(doc, dict):
        f.fail("", "top level must be an object")
    kind = f.get(doc, "kind", "", str)
    if kind not in KINDS:
        f.fail("kind", f"unknown kind '{kind}', expected one of {KINDS}")
    extra = sorted(set(doc) - _FIELDS[kind])
    if extra:
        f.fail(extra[0], f"unsupported field for kind '{kind}'")
    name = f.get(doc, "name", "", str, required=False, default="")
    basis, weights = f.generators(doc)

    if kind == "lie":
        L = lie.DgLieAlgebra.build(
            basis, f.table(doc, "brackets", 2), f.table(doc, "differential", 1), weights, name or "L"
        )
        lie.require_lie(L)
        LOGGER.info("parsed Lie algebra %s of dimension %d", L.name, L.dim())
        return L

    if kind == "free":
        w = f.get(doc, "max_weight", "", int, required=False, default=max_weight)
        if w is None:
            f.fail("max_weight", "missing field (or pass --max-weight)")
        presentation = lie.free_lie(basis, w)
        if name:
            presentation = dataclasses.replace(
                presentation, lie=dataclasses.replace(presentation.lie, name=name)
            )
        return presentation

    if kind == "artinian":
        unit = f.get(doc, "unit", "", str, required=False, default="1")
        aug = f.combo(f.get(doc, "augmentation", "", list, required=False, default=[]), "augmentation")
        B = cdga.FiniteCdga.build(
            basis, f.table(doc, "products", 2), f.table(doc, "differential", 1), aug, unit, name or "B"
        )
        v = cdga.validate_cdga(B).first()
        if v is not None:
            raise InputError(f"{source}: {v}", module="cdga")
        return B

    if kind == "cdga":
        rels = f.get(doc, "relations", "", list, required=False, default=None)
        diff = f.table(doc, "differential", 1)
        if rels is not None:
            if diff:
                f.fail("differential", "monomial quotients carry no differential")
            for i, r in enumerate(rels):
                if not isinstance(r, str):
                    f.fail(f"relations[{i}]", "expected a monomial string")
            return cdga.monomial_quotient(basis, rels, name or "B")
        S = cdga.polynomial_ring(basis, diff, name or "S")
        v = S.validate().first()
        if v is not None:
            raise InputError(f"{source}: {v}", module="cdga")
        return S

    # rep
    if lie_algebra is None:
        f.fail("kind", "a representation needs a Lie algebra (--in)")
    diff = f.table(doc, "differential", 1)
    try:
        module = Complex.from_function(GradedSpace.from_basis(basis), lambda n, l: diff.get(l, {}))
    except VerdictError as exc:
        raise InputError(f"{source}: module differential: {exc}", module="parser")
    M = lie.Representation(lie_algebra, module, f.table(doc, "action", 2))
    v = lie.validate_rep(M).first()
    if v is not None:
        raise InputError(f"{source}: {v}", module="lie")
    return M


def parse_epsilon_map(doc, B, D, source="<input>"):
    f = _Fields(source)
    table = f.table(doc, "epsilon_map", 1)
    if not table:
        return None
    return cdga.CdgaMorphism(B, D, table)


def parse_input(filename: str, lie_algebra=None, max_weight=None):
    doc, _ = load_json(filename)
    return parse_document(doc, filename, lie_algebra, max_weight)


def _combo_json(combo: dict) -> list:
    return [{"label": l, "coeff": linalg.q_str(c)} for l, c in sorted(combo.items())]


def _table_json(table: dict) -> list:
    out = []
    for k in sorted(table, key=lambda k: k if isinstance(k, tuple) else (k,)):
        args = list(k) if isinstance(k, tuple) else [k]
        out.append({"args": args, "value": _combo_json(table[k])})
    return out


def serialize(obj) -> dict:
    """
    Canonical document for a parsed object: sorted tables and "p/q"
    coefficients, so that serialize(parse(serialize(x))) == serialize(x).
    """
    if isinstance(obj, lie.FreeLiePresentation):
        return {
            "kind": "free",
            "name": obj.lie.name,
            "generators": [{"label": l, "degree": d} for l, d in obj.generators],
            "max_weight": obj.max_weight,
        }
    if isinstance(obj, lie.DgLieAlgebra):
        gens = []
        for l, d in obj.space.basis():
            g = {"label": l, "degree": d}
            if obj.weights is not None:
                g["weight"] = obj.weight(l)
            gens.append(g)
        return {
            "kind": "lie",
            "name": obj.name,
            "generators": gens,
            "brackets": _table_json(obj.brackets),
            "differential": _table_json(obj.differential),
        }
    if isinstance(obj, cdga.FiniteCdga):
        return {
            "kind": "artinian",
            "name": obj.name,
            "unit": obj.unit,
            "generators": [{"label": l, "degree": d} for l, d in obj.space.basis()],
            "products": _table_json(obj.products),
            "differential": _table_json(obj.differential),
            "augmentation": _combo_json(obj.augmentation),
        }
    if isinstance(obj, cdga.SemiFreeCdga):
        diff = {l: obj.poly_label(p) for l, p in obj.differential.items()}
        return {
            "kind": "cdga",
            "name": obj.name,
            "generators": [{"label": l, "degree": d} for l, d in obj.generators],
            "differential": _table_json(diff),
        }
    if isinstance(obj, lie.Representation):
        diff = {}
        for l, d in obj.module.space.basis():
            val = obj.module.differential.apply_label(d, l)
            if val:
                diff[l] = val
        return {
            "kind": "rep",
            "name": "",
            "generators": [{"label": l, "degree": d} for l, d in obj.module.space.basis()],
            "action": _table_json(obj.action),
            "differential": _table_json(diff),
        }
    raise InputError(f"Cannot serialize {type(obj).__name__}", module="parser")
