"""
Graded-commutative dg-algebras in non-positive degrees.

Two presentations are used. FiniteCdga carries structure constants on a
finite labelled basis containing the unit; SemiFreeCdga is a free
graded-commutative algebra on generators with a differential given by
polynomials. Polynomials are {monomial: coeff} with monomials sorted tuples
of generator indices in which odd generators never repeat.

The cellular tower resolves an artinian B by semi-free stages
B_0 -> B_1 -> ... . Homology of a semi-free stage is infinite dimensional in
general, so it is computed on honest cycles of bounded polynomial length
modulo boundaries of a slightly larger length; the bound comes from the
nilpotency order of B plus the requested depth and CONFIG.weight_margin.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property

from dgla import graded, linalg
from dgla.config import C as CONFIG
from dgla.errors import InputError, TruncationError, VerdictError
from dgla.graded import Complex, GradedMap, GradedSpace
from dgla.lie import DgLieAlgebra, ValidationReport, Violation
from dgla.linalg import ONE, ZERO, axpy, q, sign

LOGGER = logging.getLogger(__name__)


def _clean(combo: dict) -> dict:
    return {k: q(v) for k, v in combo.items() if q(v) != 0}


@dataclass(frozen=True)
class FiniteCdga:
    space: GradedSpace
    unit: str = "1"
    products: dict = field(default_factory=dict)  # (a, b) -> combo, unit implicit
    differential: dict = field(default_factory=dict)
    augmentation: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        basis = self.space.basis()
        labels = [l for l, _ in basis]
        if len(set(labels)) != len(labels):
            raise InputError("Algebra labels must be unique across degrees", module="cdga")
        degree = dict(basis)
        if degree.get(self.unit) != 0:
            raise InputError(f"Unit '{self.unit}' must be a basis element of degree 0", module="cdga")
        positive = sorted(d for d in self.space.degrees() if d > 0)
        if positive:
            raise InputError(
                f"cdga must live in degrees <= 0, found degree {positive[-1]}", module="cdga"
            )
        object.__setattr__(self, "_degree", degree)
        for name in ("products", "differential"):
            table = {}
            for key, val in getattr(self, name).items():
                keys = key if isinstance(key, tuple) else (key,)
                for l in (*keys, *val.keys()):
                    if l not in degree:
                        raise InputError(f"Unknown label '{l}' in {name}", module="cdga")
                val = _clean(val)
                if val:
                    table[key] = val
            object.__setattr__(self, name, table)
        aug = {l: q(v) for l, v in self.augmentation.items() if q(v) != 0}
        if not aug:
            aug = {self.unit: ONE}
        object.__setattr__(self, "augmentation", aug)

    @classmethod
    def build(cls, basis, products=None, differential=None, augmentation=None, unit="1", name="", complete=True):
        """
        basis as (label, degree) pairs; the unit is added when missing. With
        complete=True a product a.b given without b.a is completed by graded
        commutativity.
        """
        basis = list(basis)
        if unit not in [l for l, _ in basis]:
            basis = [(unit, 0)] + basis
        degree = dict(basis)
        table = {k: _clean(v) for k, v in (products or {}).items()}
        if complete:
            for (a, b), val in list(table.items()):
                if (b, a) not in table and a in degree and b in degree:
                    s = sign(degree[a] * degree[b])
                    table[(b, a)] = {k: s * v for k, v in val.items()}
        return cls(
            GradedSpace.from_basis(basis),
            unit,
            table,
            dict(differential or {}),
            dict(augmentation or {unit: 1}),
            name,
        )

    def labels(self):
        return [l for l, _ in self.space.basis()]

    def degree(self, label: str) -> int:
        return self._degree[label]

    def dim(self) -> int:
        return self.space.total_dim()

    def mul_basis(self, a: str, b: str) -> dict:
        if a == self.unit:
            return {b: ONE}
        if b == self.unit:
            return {a: ONE}
        return self.products.get((a, b), {})

    def mul(self, x: dict, y: dict) -> dict:
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                axpy(out, self.mul_basis(a, b), ca * cb)
        return out

    def d(self, x: dict) -> dict:
        out = {}
        for a, c in x.items():
            axpy(out, self.differential.get(a, {}), c)
        return out

    def augment(self, x: dict):
        return sum((c * self.augmentation.get(a, ZERO) for a, c in x.items()), ZERO)

    def ideal_labels(self):
        return [l for l in self.labels() if l != self.unit]

    @cached_property
    def complex(self) -> Complex:
        return Complex.from_function(self.space, lambda n, l: self.differential.get(l, {}))

    @cached_property
    def _flat(self):
        labels = self.labels()
        return labels, {l: i for i, l in enumerate(labels)}

    def flat_vector(self, x: dict) -> list:
        labels, index = self._flat
        v = [ZERO] * len(labels)
        for l, c in x.items():
            v[index[l]] += c
        return v

    def flat_combo(self, v: list) -> dict:
        labels, _ = self._flat
        return {labels[i]: c for i, c in enumerate(v) if c != 0}


def base() -> FiniteCdga:
    return FiniteCdga.build([("1", 0)], name="Q")


def validate_cdga(B: FiniteCdga) -> ValidationReport:
    out = []
    labels = B.ideal_labels()
    for a in labels:
        if B.augmentation.get(a, ZERO) != 0:
            out.append(Violation("augmentation", (a,), {a: B.augmentation[a]}))
    for (a, b), val in B.products.items():
        bad = {k: v for k, v in val.items() if B.degree(k) != B.degree(a) + B.degree(b)}
        if bad:
            out.append(Violation("degree", (a, b), bad))
    for a, val in B.differential.items():
        bad = {k: v for k, v in val.items() if B.degree(k) != B.degree(a) + 1}
        if bad:
            out.append(Violation("degree", (a,), bad))
    for a in labels:
        for b in labels:
            res = axpy(dict(B.mul_basis(a, b)), B.mul_basis(b, a), -sign(B.degree(a) * B.degree(b)))
            if res:
                out.append(Violation("commutativity", (a, b), res))
    for a in labels:
        for b in labels:
            ab = B.mul_basis(a, b)
            if B.unit in ab:
                out.append(Violation("augmentation", (a, b), ab))
            for c in labels:
                res = B.mul(ab, {c: ONE})
                axpy(res, B.mul({a: ONE}, B.mul_basis(b, c)), -ONE)
                if res:
                    out.append(Violation("associativity", (a, b, c), res))
    for a in B.labels():
        dd = B.d(B.d({a: ONE}))
        if dd:
            out.append(Violation("d^2", (a,), dd))
        if B.unit in B.d({a: ONE}):
            out.append(Violation("augmentation", (a,), B.d({a: ONE})))
    for a in labels:
        for b in labels:
            res = B.d(B.mul_basis(a, b))
            axpy(res, B.mul(B.d({a: ONE}), {b: ONE}), -ONE)
            axpy(res, B.mul({a: ONE}, B.d({b: ONE})), -sign(B.degree(a)))
            if res:
                out.append(Violation("leibniz", (a, b), res))
    return ValidationReport(out)


@dataclass(frozen=True)
class CdgaMorphism:
    source: FiniteCdga
    target: FiniteCdga
    images: dict  # source label -> target combination

    def apply(self, x: dict) -> dict:
        out = {}
        for a, c in x.items():
            axpy(out, self.image(a), c)
        return out

    def image(self, a: str) -> dict:
        if a == self.source.unit and a not in self.images:
            return {self.target.unit: ONE}
        return self.images.get(a, {})

    def as_map(self) -> GradedMap:
        return GradedMap.from_function(self.source.space, self.target.space, 0, lambda n, l: self.image(l))

    def check(self) -> ValidationReport:
        out = []
        S, T = self.source, self.target
        if self.image(S.unit) != {T.unit: ONE}:
            out.append(Violation("unit", (S.unit,), self.image(S.unit)))
        for a in S.labels():
            bad = {k: v for k, v in self.image(a).items() if T.degree(k) != S.degree(a)}
            if bad:
                out.append(Violation("degree", (a,), bad))
            res = self.apply(S.d({a: ONE}))
            axpy(res, T.d(self.image(a)), -ONE)
            if res:
                out.append(Violation("chain", (a,), res))
            if S.augment({a: ONE}) != T.augment(self.image(a)):
                out.append(Violation("augmentation", (a,), self.image(a)))
        for a in S.ideal_labels():
            for b in S.ideal_labels():
                res = self.apply(S.mul_basis(a, b))
                axpy(res, T.mul(self.image(a), self.image(b)), -ONE)
                if res:
                    out.append(Violation("multiplicative", (a, b), res))
        return ValidationReport(out)


def unit_map(D: FiniteCdga) -> CdgaMorphism:
    return CdgaMorphism(base(), D, {"1": {D.unit: ONE}})


@dataclass(frozen=True)
class SquareZeroExtension:
    base: FiniteCdga
    module: Complex
    algebra: FiniteCdga
    projection: CdgaMorphism
    section: CdgaMorphism


def square_zero(A: FiniteCdga, V: Complex, name: str = "") -> SquareZeroExtension:
    """
    A + A (x) V with (a, m)(a', m') = (aa', am' + (-1)^{|m||a'|} a'm) and
    d(a (x) v) = da (x) v + (-1)^{|a|} a (x) dv.
    """
    positive = [d for d in V.space.degrees() if d > 0]
    if positive:
        raise InputError(
            f"Square zero extensions need modules in degrees <= 0, got degree {positive[0]}",
            module="cdga",
        )

    def lbl(a, v):
        return v if a == A.unit else f"{a}·{v}"

    basis = list(A.space.basis())
    mod_deg = {}
    for a, da in A.space.basis():
        for v, dv in V.space.basis():
            basis.append((lbl(a, v), da + dv))
            mod_deg[lbl(a, v)] = (a, v)
    products = dict(A.products)
    for a, da in A.space.basis():
        if a == A.unit:
            continue
        for b, db in A.space.basis():
            ab = A.mul_basis(a, b)
            if not ab:
                continue
            for v, dv in V.space.basis():
                val = {lbl(k, v): c for k, c in ab.items()}
                products[(a, lbl(b, v))] = val
                s = sign(da * (db + dv))
                products[(lbl(b, v), a)] = {k: s * c for k, c in val.items()}
    differential = dict(A.differential)
    for a, da in A.space.basis():
        for v, dv in V.space.basis():
            val = {}
            for k, c in A.d({a: ONE}).items():
                axpy(val, {lbl(k, v): c})
            for w, c in V.differential.apply_label(dv, v).items():
                axpy(val, {lbl(a, w): sign(da) * c})
            if val:
                differential[lbl(a, v)] = val
    ext = FiniteCdga(
        GradedSpace.from_basis(basis),
        A.unit,
        products,
        differential,
        dict(A.augmentation),
        name=name or f"{A.name}+M",
    )
    projection = CdgaMorphism(ext, A, {a: {a: ONE} for a in A.labels()})
    section = CdgaMorphism(A, ext, {a: {a: ONE} for a in A.labels()})
    return SquareZeroExtension(A, V, ext, projection, section)


def dual_numbers(n: int = 0) -> SquareZeroExtension:
    """
    Q + Q.eps with eps in degree -n.
    """
    if n < 0:
        raise InputError(f"dual numbers need n >= 0, got {n}", module="cdga")
    V = Complex(GradedSpace({-n: ("ε",)}))
    return square_zero(base(), V, name=f"Q[ε_{n}]")


@dataclass(frozen=True)
class ArtinianCertificate:
    artinian: bool
    order: int
    dimension: int
    reason: str = ""


def is_artinian(B) -> ArtinianCertificate:
    """
    Finite dimension, degrees <= 0 and a nilpotent augmentation ideal; the
    order is the first power of the ideal that vanishes.
    """
    if isinstance(B, SemiFreeCdga):
        even = [l for l, d in B.generators if d % 2 == 0]
        if even:
            raise InputError(
                f"Semi-free algebra on even generator '{even[0]}' is infinite-dimensional",
                module="cdga",
            )
        B = B.truncate(len(B.generators) + 1)
    bad = [l for l in B.ideal_labels() if B.augmentation.get(l, ZERO) != 0]
    if bad:
        return ArtinianCertificate(False, None, B.dim(), f"augmentation nonzero on '{bad[0]}'")
    n = B.dim()
    ideal = [B.flat_vector({l: ONE}) for l in B.ideal_labels()]
    power, order = ideal, 1
    while power:
        nxt = []
        for a in B.ideal_labels():
            for v in power:
                nxt.append(B.flat_vector(B.mul({a: ONE}, B.flat_combo(v))))
        keep = linalg.independent_columns(nxt, n)
        nxt = [nxt[i] for i in keep]
        order += 1
        if len(nxt) == len(power):
            return ArtinianCertificate(False, None, n, "augmentation ideal is not nilpotent")
        power = nxt
    return ArtinianCertificate(True, order if ideal else 1, n)


def require_artinian(B) -> ArtinianCertificate:
    cert = is_artinian(B)
    if not cert.artinian:
        raise InputError(f"{B.name or 'algebra'} is not artinian: {cert.reason}", module="cdga")
    return cert


@dataclass(frozen=True)
class FiberProduct:
    algebra: FiniteCdga
    to_left: CdgaMorphism
    to_right: CdgaMorphism


def fiber_product(f: CdgaMorphism, g: CdgaMorphism, name: str = "") -> FiberProduct:
    """
    B x_D C for f: B -> D and g: C -> D, as the degreewise kernel of f - g.
    """
    for m, tag in ((f, "left"), (g, "right")):
        v = m.check().first()
        if v is not None:
            raise VerdictError(f"structural mismatch: {tag} map fails ({v})", module="cdga")
    if f.target != g.target:
        raise VerdictError("structural mismatch: maps have different targets", module="cdga")
    B, C, D = f.source, g.source, f.target
    right_name = {l: (l if l not in B.labels() else f"{l}′") for l in C.labels()}
    comps, parts, vectors, used = {}, {}, {}, set()
    for k in sorted(set(B.space.degrees()) | set(C.space.degrees())):
        lb, lc = B.space.labels(k), C.space.labels(k)
        width = len(lb) + len(lc)
        entries = {}
        for j, l in enumerate(lb):
            for t, c in f.image(l).items():
                entries[(D.space.index(k, t), j)] = c
        for j, l in enumerate(lc):
            for t, c in g.image(l).items():
                entries[(D.space.index(k, t), len(lb) + j)] = -c
        kernel, free = linalg.nullspace(linalg.from_entries(entries, D.space.dim(k), width))
        names = [lb[i] if i < len(lb) else right_name[lc[i - len(lb)]] for i in free]
        cands, cand_names = kernel, names
        if k == 0:
            unit = [ZERO] * width
            unit[lb.index(B.unit)] = ONE
            unit[len(lb) + lc.index(C.unit)] = ONE
            cands, cand_names = [unit] + kernel, [B.unit] + names
        keep = linalg.complement([], cands, width)
        vecs = [cands[i] for i in keep]
        comps[k] = []
        for i in keep:
            name_ = cand_names[i]
            while name_ in used:
                name_ += "″"
            used.add(name_)
            comps[k].append(name_)
        for name_, v in zip(comps[k], vecs):
            parts[name_] = (
                {lb[i]: c for i, c in enumerate(v[: len(lb)]) if c != 0},
                {lc[i]: c for i, c in enumerate(v[len(lb):]) if c != 0},
            )
        vectors[k] = vecs
    space = GradedSpace(comps)

    def express(k, bx, cx):
        if space.dim(k) == 0:
            if bx or cx:
                raise VerdictError("structural mismatch: fiber product not closed", module="cdga")
            return {}
        lb, lc = B.space.labels(k), C.space.labels(k)
        vec = [bx.get(l, ZERO) for l in lb] + [cx.get(l, ZERO) for l in lc]
        coords = linalg.coordinates(vectors[k], vec, len(vec))
        if coords is None:
            raise VerdictError("structural mismatch: fiber product not closed", module="cdga")
        return {space.labels(k)[i]: c for i, c in enumerate(coords) if c != 0}

    products, differential = {}, {}
    for a, da in space.basis():
        ba, ca = parts[a]
        if a != B.unit:
            for b, db in space.basis():
                if b == B.unit:
                    continue
                bb, cb = parts[b]
                val = express(da + db, B.mul(ba, bb), C.mul(ca, cb))
                if val:
                    products[(a, b)] = val
        val = express(da + 1, B.d(ba), C.d(ca)) if (ba or ca) else {}
        if val:
            differential[a] = val
    alg = FiniteCdga(
        space, B.unit, products, differential, {B.unit: ONE}, name=name or f"{B.name}x_{D.name}{C.name}"
    )
    to_left = CdgaMorphism(alg, B, {a: parts[a][0] for a in alg.labels()})
    to_right = CdgaMorphism(alg, C, {a: parts[a][1] for a in alg.labels()})
    return FiberProduct(alg, to_left, to_right)


# Semi-free presentations.


def _divides(small, big) -> bool:
    need = {}
    for g in small:
        need[g] = need.get(g, 0) + 1
    for g, k in need.items():
        if big.count(g) < k:
            return False
    return True


@dataclass(frozen=True)
class SemiFreeCdga:
    generators: tuple  # ((label, degree), ...)
    differential: dict = field(default_factory=dict)  # label -> {mono: coeff}
    weights: tuple = None
    name: str = ""

    def __post_init__(self):
        gens = tuple((str(l), int(d)) for l, d in self.generators)
        object.__setattr__(self, "generators", gens)
        labels = [l for l, _ in gens]
        if len(set(labels)) != len(labels):
            raise InputError("Duplicate generator labels", module="cdga")
        for l, d in gens:
            if d > 0:
                raise InputError(f"Generator '{l}' has degree {d} > 0", module="cdga")
        diff = {}
        for l, poly in self.differential.items():
            if l not in labels:
                raise InputError(f"Differential of unknown generator '{l}'", module="cdga")
            poly = {tuple(m): q(c) for m, c in poly.items() if q(c) != 0}
            if poly:
                diff[l] = poly
        object.__setattr__(self, "differential", diff)
        if self.weights is None:
            object.__setattr__(self, "weights", tuple(1 for _ in gens))

    @property
    def names(self):
        return [l for l, _ in self.generators]

    @property
    def degrees(self):
        return [d for _, d in self.generators]

    @cached_property
    def parity(self):
        return [d % 2 for d in self.degrees]

    @cached_property
    def index(self):
        return {l: i for i, l in enumerate(self.names)}

    def label(self, mono) -> str:
        return graded.monomial_label(mono, self.names)

    def mono_degree(self, mono) -> int:
        return sum(self.degrees[g] for g in mono)

    def parse_monomial(self, text: str):
        """
        "X^2·U" (or with "*") -> (sign, monomial); "1" is the empty monomial.
        """
        text = text.strip()
        if text == "1":
            return ONE, ()
        seq = []
        for factor in text.replace("*", "·").split("·"):
            factor = factor.strip()
            name, _, power = factor.partition("^")
            if name not in self.index:
                raise InputError(f"Unknown generator '{name}' in monomial '{text}'", module="cdga")
            try:
                k = int(power) if power else 1
            except ValueError:
                raise InputError(f"Bad exponent in monomial '{text}'", module="cdga")
            seq.extend([self.index[name]] * k)
        s, mono = graded.koszul_sort(seq, self.parity)
        return s, mono

    def poly_from_labels(self, combo: dict) -> dict:
        out = {}
        for text, c in combo.items():
            s, mono = self.parse_monomial(text)
            if mono is not None:
                axpy(out, {mono: s * q(c)})
        return out

    def poly_label(self, poly: dict) -> dict:
        return {self.label(m): c for m, c in poly.items()}

    def multiply(self, p: dict, r: dict) -> dict:
        out = {}
        for m1, c1 in p.items():
            for m2, c2 in r.items():
                s, mono = graded.koszul_sort(m1 + m2, self.parity)
                if mono is not None:
                    axpy(out, {mono: s * c1 * c2})
        return out

    def d_mono(self, mono) -> dict:
        out = {}
        before = 0
        for i, g in enumerate(mono):
            dg = self.differential.get(self.names[g], {})
            if dg:
                term = self.multiply(self.multiply({mono[:i]: ONE}, dg), {mono[i + 1:]: ONE})
                axpy(out, term, sign(before))
            before += self.degrees[g]
        return out

    def d(self, poly: dict) -> dict:
        out = {}
        for m, c in poly.items():
            axpy(out, self.d_mono(m), c)
        return out

    @cached_property
    def length_increase(self) -> int:
        inc = 0
        for poly in self.differential.values():
            for m in poly:
                inc = max(inc, len(m) - 1)
        return inc

    def validate(self) -> ValidationReport:
        out = []
        for l, d in self.generators:
            poly = self.differential.get(l, {})
            bad = {self.label(m): c for m, c in poly.items() if self.mono_degree(m) != d + 1}
            if bad:
                out.append(Violation("degree", (l,), bad))
            if () in poly:
                out.append(Violation("augmentation", (l,), {"1": poly[()]}))
            dd = self.d(poly)
            if dd:
                out.append(Violation("d^2", (l,), self.poly_label(dd)))
        return ValidationReport(out)

    def monomials(self, degree: int, max_length: int) -> list:
        return [
            m
            for m in _enumerate(tuple(self.degrees), max_length, degree)
            if self.mono_degree(m) == degree
        ]

    def truncate(self, max_weight: int) -> FiniteCdga:
        """
        The quotient by monomials of weight > max_weight.
        """
        monos = graded.enumerate_monomials(
            self.degrees, max_weight, weights=list(self.weights), max_weight=max_weight
        )
        keep = set(monos)
        basis = [(self.label(m), self.mono_degree(m)) for m in monos]
        products, differential = {}, {}
        for m1 in monos:
            if m1:
                dm = {self.label(k): c for k, c in self.d_mono(m1).items() if k in keep}
                if dm:
                    differential[self.label(m1)] = dm
            for m2 in monos:
                if not m1 or not m2:
                    continue
                s, mono = graded.koszul_sort(m1 + m2, self.parity)
                if mono is not None and mono in keep:
                    products[(self.label(m1), self.label(m2))] = {self.label(mono): s}
        return FiniteCdga(
            GradedSpace.from_basis(basis), "1", products, differential, {"1": ONE},
            name=f"{self.name}/F{max_weight + 1}",
        )


_ENUM_CACHE = {}


def _enumerate(degrees: tuple, max_length: int, min_degree: int) -> list:
    key = (degrees, max_length, min_degree)
    if key not in _ENUM_CACHE:
        _ENUM_CACHE[key] = graded.enumerate_monomials(list(degrees), max_length, min_degree=min_degree)
    return _ENUM_CACHE[key]


def polynomial_ring(generators, differential=None, name="") -> SemiFreeCdga:
    """
    Semi-free algebra with differential values written as {monomial text: coeff}.
    """
    S = SemiFreeCdga(tuple(generators), {}, name=name)
    diff = {l: S.poly_from_labels(v) for l, v in (differential or {}).items()}
    return SemiFreeCdga(S.generators, diff, name=name)


def monomial_quotient(generators, relations, name="") -> FiniteCdga:
    """
    Free graded-commutative algebra modulo the ideal spanned by the given
    monomials, e.g. (["x", 0], ["x^2"]) for Q[x]/x^2. Needs a pure power of
    every even generator among the relations.
    """
    S = SemiFreeCdga(tuple(generators), {}, name=name)
    rels = []
    for text in relations:
        _, mono = S.parse_monomial(text)
        if mono is not None:
            rels.append(mono)
    bound = 0
    for g, (l, d) in enumerate(S.generators):
        if d % 2:
            bound += 1
            continue
        powers = [len(r) for r in rels if set(r) == {g}]
        if not powers:
            raise InputError(f"Q[{l}] modulo these relations is infinite-dimensional", module="cdga")
        bound += min(powers) - 1
    monos = [
        m for m in graded.enumerate_monomials(S.degrees, bound)
        if not any(_divides(r, m) for r in rels)
    ]
    keep = set(monos)
    basis = [(S.label(m), S.mono_degree(m)) for m in monos]
    products = {}
    for m1 in monos:
        for m2 in monos:
            if not m1 or not m2:
                continue
            s, mono = graded.koszul_sort(m1 + m2, S.parity)
            if mono is not None and mono in keep:
                products[(S.label(m1), S.label(m2))] = {S.label(mono): s}
    return FiniteCdga(GradedSpace.from_basis(basis), "1", products, {}, {"1": ONE}, name=name)


def attach_cells(prev: SemiFreeCdga, relations, new_generators, n: int, relation_labels=None) -> SemiFreeCdga:
    """
    Adjoin U_i of degree -n with dU_i = R_i for each relation (a cycle of
    degree -(n-1)) and the new generators X_j of degree -n with dX_j = 0.
    """
    gens = list(prev.generators)
    diff = dict(prev.differential)
    labels = relation_labels or [f"U{n}_{i}" for i in range(len(relations))]
    for lab, rel in zip(labels, relations):
        rel = {tuple(m): q(c) for m, c in rel.items() if q(c) != 0}
        for m in rel:
            if prev.mono_degree(m) != -(n - 1):
                raise InputError(
                    f"Relation for {lab} has degree {prev.mono_degree(m)}, expected {-(n - 1)}",
                    module="cdga",
                )
        if prev.d(rel):
            raise InputError(f"Relation for {lab} is not a cycle", module="cdga")
        gens.append((lab, -n))
        if rel:
            diff[lab] = rel
    for lab in new_generators:
        gens.append((lab, -n))
    return SemiFreeCdga(tuple(gens), diff, name=prev.name)


@dataclass(frozen=True)
class BoundedHomology:
    """
    Classes of honest cycles of length < bound in one degree, modulo
    boundaries of preimages of length <= preimage_bound.
    """

    algebra: SemiFreeCdga
    degree: int
    ambient: list
    index: dict
    reps: list  # polynomials
    basis: list  # boundary vectors followed by rep vectors

    @property
    def dim(self) -> int:
        return len(self.reps)

    def classify(self, poly: dict):
        vec = [ZERO] * len(self.ambient)
        for m, c in poly.items():
            if m not in self.index:
                return None
            vec[self.index[m]] += c
        coords = linalg.coordinates(self.basis, vec, len(vec))
        if coords is None:
            return None
        return coords[len(self.basis) - len(self.reps):]


def bounded_homology(S: SemiFreeCdga, degree: int, bound: int) -> BoundedHomology:
    inc = S.length_increase
    pre_bound = bound + inc
    src = S.monomials(degree, bound - 1)
    ambient = S.monomials(degree, pre_bound + inc)
    index = {m: i for i, m in enumerate(ambient)}
    up = S.monomials(degree + 1, bound - 1 + inc)
    up_index = {m: i for i, m in enumerate(up)}
    entries = {}
    for j, m in enumerate(src):
        for t, c in S.d_mono(m).items():
            entries[(up_index[t], j)] = c
    cycles, _ = linalg.nullspace(linalg.from_entries(entries, len(up), len(src)))
    cycle_vecs = []
    for z in cycles:
        v = [ZERO] * len(ambient)
        for j, c in enumerate(z):
            if c != 0:
                v[index[src[j]]] = c
        cycle_vecs.append(v)
    pre = S.monomials(degree - 1, pre_bound)
    bounds = []
    for m in pre:
        v = [ZERO] * len(ambient)
        for t, c in S.d_mono(m).items():
            v[index[t]] += c
        if any(x != 0 for x in v):
            bounds.append(v)
    keep_b = linalg.independent_columns(bounds, len(ambient))
    bounds = [bounds[i] for i in keep_b]
    keep = linalg.complement(bounds, cycle_vecs, len(ambient))
    rep_vecs = [cycle_vecs[i] for i in keep]
    reps = [{ambient[i]: c for i, c in enumerate(v) if c != 0} for v in rep_vecs]
    LOGGER.debug(
        "bounded homology degree %d: %d cycles, %d boundaries, %d classes",
        degree, len(cycle_vecs), len(bounds), len(reps),
    )
    return BoundedHomology(S, degree, ambient, index, reps, bounds + rep_vecs)


@dataclass(frozen=True)
class Cell:
    label: str
    kind: str  # "X" or "U"
    degree: int
    stage: int
    attaching: dict = field(default_factory=dict)  # monomial label -> coeff
    relation: str = ""


@dataclass(frozen=True)
class Stage:
    index: int
    algebra: SemiFreeCdga
    cells: tuple
    images: dict  # generator -> combination in B
    certified: dict  # degree -> "iso" | "surjective"


@dataclass(frozen=True)
class CellularTower:
    target: FiniteCdga
    depth: int
    bound: int
    order: int
    stages: tuple

    @property
    def final(self) -> Stage:
        return self.stages[-1]

    def cells(self) -> list:
        return [c for s in self.stages for c in s.cells]

    def cell_counts(self) -> dict:
        out = {}
        for c in self.cells():
            out[c.degree] = out.get(c.degree, 0) + 1
        return dict(sorted(out.items(), reverse=True))

    @property
    def stabilized_at(self) -> int:
        last = 0
        for s in self.stages:
            if s.cells:
                last = s.index
        return last

    def window(self):
        return (-self.depth + 1, 0)


def _evaluate(S: SemiFreeCdga, B: FiniteCdga, images: dict, poly: dict) -> dict:
    out = {}
    for mono, c in poly.items():
        val = {B.unit: ONE}
        for g in mono:
            val = B.mul(val, images.get(S.names[g], {}))
            if not val:
                break
        axpy(out, val, c)
    return out


def _classes(hb: graded.Homology, B: FiniteCdga, degree: int, combo: dict) -> list:
    if hb.dim(degree) == 0:
        return []
    return hb.classify(degree, B.space.vector(degree, combo))


def _image_rank(S, B, hb, images, bh: BoundedHomology) -> int:
    cols = [_classes(hb, B, bh.degree, _evaluate(S, B, images, r)) for r in bh.reps]
    if not cols or hb.dim(bh.degree) == 0:
        return 0
    return linalg.rank(linalg.from_columns(cols, hb.dim(bh.degree)))


def cellular_resolve(B: FiniteCdga, depth: int, margin: int = None) -> CellularTower:
    """
    Resolve an artinian B by stages B_n, certifying after each stage that
    H^{-i}(B_n) -> H^{-i}(B) is an isomorphism for i < n and onto for i = n.
    """
    if depth < 0:
        raise InputError(f"depth must be >= 0, got {depth}", module="cdga")
    cert = require_artinian(B)
    margin = CONFIG.weight_margin if margin is None else margin
    bound = cert.order + depth + margin
    hb = graded.homology(B.complex)
    LOGGER.info("resolving %s: order %d, depth %d, length bound %d", B.name, cert.order, depth, bound)

    # stage 0: coset representatives of m/m^2 in H^0(B)
    reps0 = [B.space.combo(0, v) for v in hb.representatives.get(0, [])]
    ideal = []
    for r in reps0:
        c = B.augment(r)
        x = dict(r)
        if c != 0:
            axpy(x, {B.unit: ONE}, -c)
        ideal.append(x)
    dim0 = hb.dim(0)
    ideal_cls = [_classes(hb, B, 0, x) for x in ideal]
    square_cls = [_classes(hb, B, 0, B.mul(x, y)) for x in ideal for y in ideal]
    chosen = linalg.complement(square_cls, ideal_cls, dim0) if dim0 else []
    x0 = [ideal[i] for i in chosen]
    gens = tuple((f"X0_{j}", 0) for j in range(len(x0)))
    S = SemiFreeCdga(gens, {}, name=f"B_0({B.name})")
    images = {f"X0_{j}": x for j, x in enumerate(x0)}
    cells = tuple(Cell(f"X0_{j}", "X", 0, 0) for j in range(len(x0)))
    bh = bounded_homology(S, 0, bound)
    if _image_rank(S, B, hb, images, bh) != dim0:
        raise VerdictError(f"certification failed in degree 0 at stage 0", module="cdga")
    stages = [Stage(0, S, cells, dict(images), {0: "surjective"})]

    for n in range(1, depth + 1):
        prev = S
        k = -(n - 1)
        bh = bounded_homology(prev, k, bound)
        cols = [_classes(hb, B, k, _evaluate(prev, B, images, r)) for r in bh.reps]
        if hb.dim(k) and bh.dim:
            kernel, _ = linalg.nullspace(linalg.from_columns(cols, hb.dim(k)))
        else:
            kernel = [[ONE if i == j else ZERO for i in range(bh.dim)] for j in range(bh.dim)]
        kpolys = []
        for v in kernel:
            p = {}
            for i, c in enumerate(v):
                if c != 0:
                    axpy(p, bh.reps[i], c)
            kpolys.append(p)
        degree0 = [{(prev.index[l],): ONE} for l, d in prev.generators if d == 0]
        m_cls = []
        for x in degree0:
            for p in kpolys:
                cls = bh.classify(prev.multiply(x, p))
                if cls is not None:
                    m_cls.append(cls)
        chosen = linalg.complement(m_cls, kernel, bh.dim) if kernel else []
        relations = [kpolys[i] for i in chosen]

        kk = -n
        new_x = []
        if hb.dim(kk):
            bh_next = bounded_homology(prev, kk, bound)
            hit = [_classes(hb, B, kk, _evaluate(prev, B, images, r)) for r in bh_next.reps]
            targets = [B.space.combo(kk, v) for v in hb.representatives[kk]]
            for x in ideal:
                for t in targets:
                    hit.append(_classes(hb, B, kk, B.mul(x, t)))
            unit_vecs = [[ONE if i == j else ZERO for i in range(hb.dim(kk))] for j in range(hb.dim(kk))]
            new_x = [targets[i] for i in linalg.complement(hit, unit_vecs, hb.dim(kk))]

        u_labels = [f"U{n}_{i}" for i in range(len(relations))]
        x_labels = [f"X{n}_{j}" for j in range(len(new_x))]
        S = attach_cells(prev, relations, x_labels, n, u_labels)
        S = SemiFreeCdga(S.generators, S.differential, name=f"B_{n}({B.name})")

        images = dict(images)
        dmat = B.complex.d(kk)
        for lab, rel in zip(u_labels, relations):
            rhs = B.space.vector(kk + 1, _evaluate(prev, B, images, rel))
            sol = linalg.solve(dmat, rhs) if B.space.dim(kk) else (None if any(rhs) else [])
            if sol is None:
                raise VerdictError(
                    f"certification failed in degree {kk + 1} at stage {n}: relation {lab} is not a boundary in B",
                    module="cdga",
                )
            images[lab] = B.space.combo(kk, sol)
        for lab, x in zip(x_labels, new_x):
            images[lab] = x

        certified = {}
        bh_iso = bounded_homology(S, k, bound)
        if bh_iso.dim != hb.dim(k) or _image_rank(S, B, hb, images, bh_iso) != hb.dim(k):
            raise VerdictError(f"certification failed in degree {k} at stage {n}", module="cdga")
        certified[k] = "iso"
        if hb.dim(kk):
            bh_top = bounded_homology(S, kk, bound)
            if _image_rank(S, B, hb, images, bh_top) != hb.dim(kk):
                raise VerdictError(f"certification failed in degree {kk} at stage {n}", module="cdga")
        certified[kk] = "surjective"

        cells = tuple(
            Cell(lab, "U", kk, n, prev.poly_label(rel), f"R{n - 1}_{i}")
            for i, (lab, rel) in enumerate(zip(u_labels, relations))
        ) + tuple(Cell(lab, "X", kk, n) for lab in x_labels)
        LOGGER.info("stage %d of %s: %d U cells, %d X cells", n, B.name, len(u_labels), len(x_labels))
        stages.append(Stage(n, S, cells, images, certified))

    return CellularTower(B, depth, bound, cert.order, tuple(stages))


def cotangent_fiber(tower: CellularTower) -> Complex:
    """
    One basis element per cell, with differential the linear part of d.
    Meaningful in degrees > -depth.
    """
    S = tower.final.algebra
    space = GradedSpace.from_basis(S.generators)

    def fn(n, label):
        poly = S.differential.get(label, {})
        return {S.names[m[0]]: c for m, c in poly.items() if len(m) == 1}

    return Complex.from_function(space, fn)


def very_good_check(L: DgLieAlgebra) -> ValidationReport:
    """
    Generators in degrees >= 1 (finite in each degree), the condition under
    which C(L) is an artinian-type algebra in degrees <= 0.
    """
    out = []
    for l, d in L.space.basis():
        if d < 1:
            out.append(Violation("very-good", (l,), {l: ONE}))
    return ValidationReport(out)


def require_window(tower: CellularTower, degree: int):
    lo, hi = tower.window()
    if not lo <= degree <= hi:
        raise TruncationError(
            f"degree {degree} outside the certified window [{lo}, {hi}] of depth {tower.depth}",
            module="cdga",
        )
