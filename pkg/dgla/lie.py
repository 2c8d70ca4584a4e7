"""
Finite dimensional dg-Lie algebras over QQ.

A DgLieAlgebra is stored by structure constants on a labelled graded basis:
brackets maps an ordered pair of basis labels to a {label: coeff}
combination and differential maps a label to a combination. Labels are
unique across degrees. Weights, when present, grade the algebra so that
brackets add weights and d preserves them.

Also here: free graded Lie algebras up to a bracket length, enveloping
algebras with PBW normal forms, and representations.
"""
import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from functools import cached_property

from dgla import graded, linalg
from dgla.errors import InputError, VerdictError
from dgla.graded import Complex, GradedMap, GradedSpace
from dgla.linalg import ONE, ZERO, axpy, q, sign

LOGGER = logging.getLogger(__name__)

# Rewriting steps allowed per enveloping algebra before giving up.
MAX_REWRITE_STEPS = 2_000_000


def _clean(combo: dict) -> dict:
    return {k: q(v) for k, v in combo.items() if q(v) != 0}


@dataclass(frozen=True)
class DgLieAlgebra:
    space: GradedSpace
    brackets: dict = field(default_factory=dict)
    differential: dict = field(default_factory=dict)
    weights: dict = None
    name: str = ""

    def __post_init__(self):
        basis = self.space.basis()
        labels = [l for l, _ in basis]
        if len(set(labels)) != len(labels):
            dup = sorted({l for l in labels if labels.count(l) > 1})
            raise InputError(f"Lie algebra labels must be unique across degrees: {dup}", module="lie")
        degree = dict(basis)
        object.__setattr__(self, "_degree", degree)

        table = {}
        for (a, b), val in self.brackets.items():
            for l in (a, b, *val.keys()):
                if l not in degree:
                    raise InputError(f"Unknown label '{l}' in bracket [{a},{b}]", module="lie")
            val = _clean(val)
            if val:
                table[(a, b)] = val
        object.__setattr__(self, "brackets", table)

        diff = {}
        for a, val in self.differential.items():
            for l in (a, *val.keys()):
                if l not in degree:
                    raise InputError(f"Unknown label '{l}' in d({a})", module="lie")
            val = _clean(val)
            if val:
                diff[a] = val
        object.__setattr__(self, "differential", diff)

        if self.weights is not None:
            missing = [l for l in labels if l not in self.weights]
            if missing:
                raise InputError(f"Missing weights for {missing}", module="lie")
            if any(int(self.weights[l]) < 1 for l in labels):
                raise InputError("Weights must be positive integers", module="lie")

    @classmethod
    def build(cls, basis, brackets=None, differential=None, weights=None, name="", complete=True):
        """
        basis is a list of (label, degree). With complete=True every bracket
        [a,b] given without its partner [b,a] is completed by graded
        antisymmetry.
        """
        degree = {l: int(d) for l, d in basis}
        table = {k: _clean(v) for k, v in (brackets or {}).items()}
        if complete:
            for (a, b), val in list(table.items()):
                if (b, a) not in table and a in degree and b in degree:
                    s = -sign(degree[a] * degree[b])
                    table[(b, a)] = {k: s * v for k, v in val.items()}
        return cls(GradedSpace.from_basis(basis), table, dict(differential or {}), weights, name)

    def labels(self):
        return [l for l, _ in self.space.basis()]

    def degree(self, label: str) -> int:
        return self._degree[label]

    def dim(self) -> int:
        return self.space.total_dim()

    def weight(self, label: str):
        if self.weights is None:
            return None
        return int(self.weights[label])

    def bracket_basis(self, a: str, b: str) -> dict:
        return self.brackets.get((a, b), {})

    def bracket(self, x: dict, y: dict) -> dict:
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                axpy(out, self.bracket_basis(a, b), ca * cb)
        return out

    def d(self, x: dict) -> dict:
        out = {}
        for a, ca in x.items():
            axpy(out, self.differential.get(a, {}), ca)
        return out

    @cached_property
    def complex(self) -> Complex:
        return Complex.from_function(self.space, lambda n, l: self.differential.get(l, {}), check=False)

    def bracket_map(self) -> GradedMap:
        """
        The bracket as a degree 0 map L (x) L -> L.
        """
        t = graded.tensor(self.complex, self.complex)

        def fn(n, label):
            a, _, b, _ = t.pairs[(label, n)]
            return self.bracket_basis(a, b)

        return GradedMap.from_function(t.complex.space, self.space, 0, fn)


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    residual: dict

    def __str__(self):
        return f"{self.axiom} violated at ({','.join(self.witness)})"


@dataclass(frozen=True)
class ValidationReport:
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def first(self):
        return self.violations[0] if self.violations else None


def validate_lie(L: DgLieAlgebra, stop_at_first=False) -> ValidationReport:
    """
    Check degrees, d^2 = 0, graded antisymmetry, Jacobi in the form
    [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]] and the Leibniz rule,
    reporting witnesses in basis order.
    """
    out = []
    labels = L.labels()
    deg = L.degree

    def report(axiom, witness, residual):
        out.append(Violation(axiom, tuple(witness), residual))
        return stop_at_first

    for (a, b), val in L.brackets.items():
        bad = {c: v for c, v in val.items() if deg(c) != deg(a) + deg(b)}
        if bad and report("degree", (a, b), bad):
            return ValidationReport(out)
    for a, val in L.differential.items():
        bad = {c: v for c, v in val.items() if deg(c) != deg(a) + 1}
        if bad and report("degree", (a,), bad):
            return ValidationReport(out)

    for a in labels:
        dd = L.d(L.d({a: ONE}))
        if dd and report("d^2", (a,), dd):
            return ValidationReport(out)

    for a in labels:
        for b in labels:
            res = axpy(dict(L.bracket_basis(a, b)), L.bracket_basis(b, a), sign(deg(a) * deg(b)))
            if res and report("antisymmetry", (a, b), res):
                return ValidationReport(out)

    for x in labels:
        for y in labels:
            xy = L.bracket_basis(x, y)
            for z in labels:
                res = L.bracket({x: ONE}, L.bracket_basis(y, z))
                axpy(res, L.bracket(xy, {z: ONE}), -ONE)
                axpy(res, L.bracket({y: ONE}, L.bracket_basis(x, z)), -sign(deg(x) * deg(y)))
                if res and report("jacobi", (x, y, z), res):
                    return ValidationReport(out)

    for x in labels:
        for y in labels:
            res = L.d(L.bracket_basis(x, y))
            axpy(res, L.bracket(L.d({x: ONE}), {y: ONE}), -ONE)
            axpy(res, L.bracket({x: ONE}, L.d({y: ONE})), -sign(deg(x)))
            if res and report("leibniz", (x, y), res):
                return ValidationReport(out)

    if L.weights is not None:
        for (a, b), val in L.brackets.items():
            bad = {c: v for c, v in val.items() if L.weight(c) != L.weight(a) + L.weight(b)}
            if bad and report("weight", (a, b), bad):
                return ValidationReport(out)
        for a, val in L.differential.items():
            bad = {c: v for c, v in val.items() if L.weight(c) != L.weight(a)}
            if bad and report("weight", (a,), bad):
                return ValidationReport(out)

    return ValidationReport(out)


def require_lie(L: DgLieAlgebra) -> DgLieAlgebra:
    v = validate_lie(L, stop_at_first=True).first()
    if v is not None:
        raise InputError(str(v), module="lie")
    return L


# Builders


def abelian(basis, name="abelian") -> DgLieAlgebra:
    return DgLieAlgebra.build(basis, weights={l: 1 for l, _ in basis}, name=name)


def sl2() -> DgLieAlgebra:
    basis = [("h", 0), ("e", 0), ("f", 0)]
    brackets = {
        ("h", "e"): {"e": 2},
        ("h", "f"): {"f": -2},
        ("e", "f"): {"h": 1},
    }
    return DgLieAlgebra.build(basis, brackets, name="sl2")


def heisenberg() -> DgLieAlgebra:
    basis = [("x", 1), ("y", 1), ("z", 2)]
    return DgLieAlgebra.build(
        basis, {("x", "y"): {"z": 1}}, weights={"x": 1, "y": 1, "z": 2}, name="heisenberg"
    )


def direct_sum(a: DgLieAlgebra, b: DgLieAlgebra) -> DgLieAlgebra:
    basis = a.space.basis() + b.space.basis()
    weights = None
    if a.weights is not None and b.weights is not None:
        weights = {**a.weights, **b.weights}
    return DgLieAlgebra.build(
        basis,
        {**a.brackets, **b.brackets},
        {**a.differential, **b.differential},
        weights,
        name=f"{a.name}+{b.name}",
        complete=False,
    )


def transport(L: DgLieAlgebra, seed: int = 0) -> DgLieAlgebra:
    """
    The same algebra written in a random unitriangular change of basis per
    degree; new basis vector i is e_i + sum_{j>i} c_ij e_j.
    """
    rng = random.Random(seed)
    change = {}
    for d in L.space.degrees():
        labels = L.space.labels(d)
        n = len(labels)
        for i, l in enumerate(labels):
            vec = {l: ONE}
            for j in range(i + 1, n):
                c = rng.randint(-2, 2)
                if c:
                    vec[labels[j]] = q(c)
            change[l] = vec

    def back(combo: dict) -> dict:
        out = {}
        for d in L.space.degrees():
            cols = [L.space.vector(d, change[l]) for l in L.space.labels(d)]
            target = L.space.vector(d, {k: v for k, v in combo.items() if L.degree(k) == d})
            if all(v == 0 for v in target):
                continue
            coords = linalg.coordinates(cols, target, len(target))
            axpy(out, {L.space.labels(d)[i]: c for i, c in enumerate(coords) if c != 0})
        return out

    labels = L.labels()
    brackets = {}
    for a in labels:
        for b in labels:
            val = back(L.bracket(change[a], change[b]))
            if val:
                brackets[(a, b)] = val
    diff = {a: back(L.d(change[a])) for a in labels}
    weights = None
    if L.weights is not None and all(
        L.weight(k) == L.weight(a) for a in labels for k in change[a]
    ):
        weights = dict(L.weights)
    return DgLieAlgebra(L.space, brackets, diff, weights, name=f"{L.name}'")


@dataclass(frozen=True)
class LieMorphism:
    source: DgLieAlgebra
    target: DgLieAlgebra
    images: dict  # source label -> target combination

    @classmethod
    def identity(cls, L: DgLieAlgebra) -> "LieMorphism":
        return cls(L, L, {l: {l: ONE} for l in L.labels()})

    def apply(self, x: dict) -> dict:
        out = {}
        for a, c in x.items():
            axpy(out, self.images.get(a, {}), c)
        return out

    def as_map(self) -> GradedMap:
        return GradedMap.from_function(
            self.source.space, self.target.space, 0, lambda n, l: self.images.get(l, {})
        )


def lie_morphism_check(f: LieMorphism) -> ValidationReport:
    out = []
    src, dst = f.source, f.target
    for a in src.labels():
        bad = {k: v for k, v in f.images.get(a, {}).items() if dst.degree(k) != src.degree(a)}
        if bad:
            out.append(Violation("degree", (a,), bad))
    for a in src.labels():
        res = f.apply(src.d({a: ONE}))
        axpy(res, dst.d(f.images.get(a, {})), -ONE)
        if res:
            out.append(Violation("chain", (a,), res))
    for a in src.labels():
        for b in src.labels():
            res = f.apply(src.bracket_basis(a, b))
            axpy(res, dst.bracket(f.images.get(a, {}), f.images.get(b, {})), -ONE)
            if res:
                out.append(Violation("bracket", (a, b), res))
    return ValidationReport(out)


# Free graded Lie algebras, realised inside the tensor algebra.


def _tensor_bracket(u: dict, du: int, v: dict, dv: int) -> dict:
    out = {}
    s = sign(du * dv)
    for w1, c1 in u.items():
        for w2, c2 in v.items():
            axpy(out, {w1 + w2: c1 * c2})
            axpy(out, {w2 + w1: -s * c1 * c2})
    return out


@dataclass(frozen=True)
class FreeLiePresentation:
    generators: tuple  # ((label, degree), ...)
    max_weight: int
    hall_basis: dict  # weight -> [labels]
    bracket_table: dict
    expansions: dict  # label -> {word: coeff} in the tensor algebra
    lie: DgLieAlgebra

    def dims(self) -> dict:
        out = {}
        for l in self.lie.labels():
            key = (self.lie.degree(l), self.lie.weight(l))
            out[key] = out.get(key, 0) + 1
        return out


def free_lie(generators, max_weight: int) -> FreeLiePresentation:
    """
    Free graded Lie algebra on generators (label, degree) modulo brackets of
    length > max_weight. Basis elements of weight k are right-normed brackets
    [g, b] with b of weight k-1, kept greedily when independent in the tensor
    algebra.
    """
    generators = tuple((str(l), int(d)) for l, d in generators)
    if max_weight < 1:
        raise InputError(f"maxWeight must be >= 1, got {max_weight}", module="lie")
    for l, d in generators:
        if d <= 0:
            raise InputError(
                f"Generator '{l}' has degree {d}; free Lie algebras need degrees >= 1",
                module="lie",
            )
    if len({l for l, _ in generators}) != len(generators):
        raise InputError("Duplicate generator labels", module="lie")

    ng = len(generators)
    expansions, degree, weight = {}, {}, {}
    hall = {}
    words = {}

    def words_of(k):
        if k not in words:
            ws = list(itertools.product(range(ng), repeat=k))
            words[k] = (ws, {w: i for i, w in enumerate(ws)})
        return words[k]

    def dense(k, expansion):
        ws, index = words_of(k)
        v = [ZERO] * len(ws)
        for w, c in expansion.items():
            v[index[w]] = c
        return v

    hall[1] = []
    for i, (l, d) in enumerate(generators):
        expansions[l] = {(i,): ONE}
        degree[l] = d
        weight[l] = 1
        hall[1].append(l)

    for k in range(2, max_weight + 1):
        cands = []
        for g, dg in generators:
            for b in hall[k - 1]:
                e = _tensor_bracket(expansions[g], dg, expansions[b], degree[b])
                if e:
                    cands.append((f"[{g},{b}]", dg + degree[b], e))
        length = len(words_of(k)[0])
        keep = linalg.independent_columns([dense(k, e) for _, _, e in cands], length)
        hall[k] = []
        for i in keep:
            label, d, e = cands[i]
            expansions[label] = e
            degree[label] = d
            weight[label] = k
            hall[k].append(label)
        LOGGER.debug("free lie weight %d: %d of %d candidates", k, len(keep), len(cands))

    vectors = {
        k: [dense(k, expansions[l]) for l in hall[k]] for k in hall
    }
    table = {}
    for i in range(1, max_weight):
        for j in range(1, max_weight - i + 1):
            k = i + j
            for a in hall[i]:
                for b in hall[j]:
                    e = _tensor_bracket(expansions[a], degree[a], expansions[b], degree[b])
                    if not e:
                        continue
                    coords = linalg.coordinates(vectors[k], dense(k, e), len(words_of(k)[0]))
                    if coords is None:
                        raise VerdictError(f"[{a},{b}] is not in the span of the weight {k} basis", module="lie")
                    val = {hall[k][n]: c for n, c in enumerate(coords) if c != 0}
                    if val:
                        table[(a, b)] = val

    basis = [(l, degree[l]) for k in sorted(hall) for l in hall[k]]
    lie = DgLieAlgebra(
        GradedSpace.from_basis(basis),
        table,
        {},
        {l: weight[l] for l, _ in basis},
        name=f"free({','.join(l for l, _ in generators)})",
    )
    return FreeLiePresentation(generators, max_weight, hall, table, expansions, lie)


def free_on(space: GradedSpace, max_weight: int) -> FreeLiePresentation:
    return free_lie(space.basis(), max_weight)


# Enveloping algebras.


@dataclass(frozen=True)
class EnvelopingAlgebra:
    """
    U(L) up to PBW length max_weight, on the normal-form basis of sorted
    words in the Lie basis with odd letters not repeated.
    """

    lie: DgLieAlgebra
    max_weight: int
    names: list
    degrees: list
    monomials: dict  # label -> word
    space: GradedSpace
    _brackets: dict = field(repr=False, compare=False)
    _memo: dict = field(default_factory=dict, repr=False, compare=False)
    _steps: list = field(default_factory=lambda: [0], repr=False, compare=False)

    def label(self, word) -> str:
        return graded.monomial_label(word, self.names)

    def reduce_word(self, word: tuple) -> dict:
        """
        Normal form of an arbitrary word as {sorted word: coeff}, using
        ab = (-1)^{|a||b|} ba + [a,b] for out of order neighbours and
        aa = [a,a]/2 for odd a.
        """
        word = tuple(word)
        if word in self._memo:
            return self._memo[word]
        self._steps[0] += 1
        if self._steps[0] > MAX_REWRITE_STEPS:
            raise VerdictError("PBW rewriting did not terminate", module="lie")
        deg = self.degrees
        out = None
        for i in range(len(word) - 1):
            a, b = word[i], word[i + 1]
            if a > b:
                out = {}
                swapped = word[:i] + (b, a) + word[i + 2:]
                axpy(out, self.reduce_word(swapped), sign(deg[a] * deg[b]))
                for c, coeff in self._brackets.get((a, b), {}).items():
                    axpy(out, self.reduce_word(word[:i] + (c,) + word[i + 2:]), coeff)
                break
            if a == b and deg[a] % 2:
                out = {}
                half = ONE / 2
                for c, coeff in self._brackets.get((a, a), {}).items():
                    axpy(out, self.reduce_word(word[:i] + (c,) + word[i + 2:]), half * coeff)
                break
        if out is None:
            out = {word: ONE}
        self._memo[word] = out
        return out

    def normal_form(self, word) -> dict:
        out = {}
        for w, c in self.reduce_word(tuple(word)).items():
            if len(w) <= self.max_weight:
                axpy(out, {self.label(w): c})
        return out

    def multiply(self, a: str, b: str) -> dict:
        return self.normal_form(self.monomials[a] + self.monomials[b])

    def multiply_combo(self, x: dict, y: dict) -> dict:
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                axpy(out, self.multiply(a, b), ca * cb)
        return out

    def weight(self, label: str) -> int:
        return len(self.monomials[label])

    def degree(self, label: str) -> int:
        return sum(self.degrees[g] for g in self.monomials[label])

    def d_label(self, label: str) -> dict:
        word = self.monomials[label]
        index = {n: i for i, n in enumerate(self.names)}
        out = {}
        before = 0
        for i, g in enumerate(word):
            for c, coeff in self.lie.differential.get(self.names[g], {}).items():
                new = word[:i] + (index[c],) + word[i + 1:]
                axpy(out, self.normal_form(new), sign(before) * coeff)
            before += self.degrees[g]
        return out

    @cached_property
    def complex(self) -> Complex:
        return Complex.from_function(self.space, lambda n, l: self.d_label(l))

    def dims(self) -> dict:
        out = {}
        for l in self.monomials:
            key = (self.degree(l), self.weight(l))
            out[key] = out.get(key, 0) + 1
        return out

    def check_associativity(self, triples) -> list:
        bad = []
        for a, b, c in triples:
            if len(self.monomials[a]) + len(self.monomials[b]) + len(self.monomials[c]) > self.max_weight:
                continue
            left = self.multiply_combo(self.multiply(a, b), {c: ONE})
            right = self.multiply_combo({a: ONE}, self.multiply(b, c))
            if left != right:
                bad.append((a, b, c))
        return bad

    def check_derivation(self, pairs) -> list:
        bad = []
        for a, b in pairs:
            if len(self.monomials[a]) + len(self.monomials[b]) > self.max_weight:
                continue
            lhs = {}
            for l, c in self.multiply(a, b).items():
                axpy(lhs, self.d_label(l), c)
            rhs = self.multiply_combo(self.d_label(a), {b: ONE})
            axpy(rhs, self.multiply_combo({a: ONE}, self.d_label(b)), sign(self.degree(a)))
            if lhs != rhs:
                bad.append((a, b))
        return bad


def enveloping(L: DgLieAlgebra, max_weight: int) -> EnvelopingAlgebra:
    if max_weight < 0:
        raise InputError(f"maxWeight must be >= 0, got {max_weight}", module="lie")
    names, degrees, basis = graded.flat_generators(L.space)
    index = {n: i for i, n in enumerate(names)}
    br = {}
    for (a, b), val in L.brackets.items():
        br[(index[a], index[b])] = {index[c]: v for c, v in val.items()}
    monos = graded.enumerate_monomials(degrees, max_weight)
    comps, by_label = {}, {}
    for m in monos:
        label = graded.monomial_label(m, names)
        by_label[label] = m
        comps.setdefault(sum(degrees[g] for g in m), []).append(label)
    return EnvelopingAlgebra(L, max_weight, names, degrees, by_label, GradedSpace(comps), br)


@dataclass(frozen=True)
class PbwCheck:
    sym: graded.SymmetricAlgebra
    enveloping: EnvelopingAlgebra
    map: GradedMap
    blocks: dict  # (degree, weight) -> (rank, sym dim, enveloping dim)

    @property
    def bijective(self) -> bool:
        return all(r == s == u for r, s, u in self.blocks.values())

    def failures(self) -> list:
        return [k for k, (r, s, u) in sorted(self.blocks.items()) if not r == s == u]


def pbw_map(L: DgLieAlgebra, max_weight: int) -> PbwCheck:
    """
    Symmetrization Sym(L) -> U(L), checked to be bijective on each filtered
    piece (degree d, PBW length <= k).
    """
    sym = graded.sym_truncated(L.complex, max_weight)
    env = enveloping(L, max_weight)
    parity = [d % 2 for d in sym.degrees]

    def fn(n, label):
        mono = sym.monomials[label]
        w = len(mono)
        scale = ONE / math.factorial(w)
        out = {}
        for order in itertools.permutations(range(w)):
            word = tuple(mono[k] for k in order)
            axpy(out, env.normal_form(word), graded.permutation_sign(mono, order, parity) * scale)
        return out

    f = GradedMap.from_function(sym.complex.space, env.space, 0, fn)
    blocks = {}
    for d in set(sym.complex.space.degrees()) | set(env.space.degrees()):
        m = f.block(d)
        ents = linalg.entries(m)
        s_labels = sym.complex.space.labels(d)
        u_labels = env.space.labels(d)
        for k in range(max_weight + 1):
            cols = [j for j, l in enumerate(s_labels) if sym.weight(l) <= k]
            rows = [i for i, l in enumerate(u_labels) if env.weight(l) <= k]
            if not cols and not rows:
                continue
            ci = {j: n for n, j in enumerate(cols)}
            ri = {i: n for n, i in enumerate(rows)}
            sub = linalg.from_entries(
                {(ri[i], ci[j]): v for (i, j), v in ents.items() if i in ri and j in ci},
                len(rows),
                len(cols),
            )
            blocks[(d, k)] = (linalg.rank(sub), len(cols), len(rows))
    LOGGER.info("pbw check for %s up to weight %d: %d blocks", L.name, max_weight, len(blocks))
    return PbwCheck(sym, env, f, blocks)


# Representations.


@dataclass(frozen=True)
class Representation:
    lie: DgLieAlgebra
    module: Complex
    action: dict  # (lie label, module label) -> {module label: coeff}
    weights: dict = None  # module label -> weight, for truncated modules
    max_weight: int = None

    def __post_init__(self):
        clean = {}
        for (x, m), val in self.action.items():
            val = _clean(val)
            if val:
                clean[(x, m)] = val
        object.__setattr__(self, "action", clean)

    def labels(self):
        return [l for l, _ in self.module.space.basis()]

    def degree(self, label: str) -> int:
        return self.module.space.degree_of(label)

    def act(self, x: dict, m: dict) -> dict:
        out = {}
        for a, ca in x.items():
            for b, cb in m.items():
                axpy(out, self.action.get((a, b), {}), ca * cb)
        return out

    def d(self, m: dict) -> dict:
        out = {}
        for b, c in m.items():
            axpy(out, self.module.differential.apply_label(self.degree(b), b), c)
        return out

    def matrix(self, x: str, d: int):
        """
        Action of the basis element x from module degree d.
        """
        sp = self.module.space
        td = d + self.lie.degree(x)
        entries = {}
        for j, m in enumerate(sp.labels(d)):
            for t, c in self.action.get((x, m), {}).items():
                entries[(sp.index(td, t), j)] = c
        return linalg.from_entries(entries, sp.dim(td), sp.dim(d))

    def invariants(self, d: int) -> list:
        """
        Basis of the degree d vectors killed by every degree 0 element.
        """
        sp = self.module.space
        mats = [self.matrix(x, d) for x in self.lie.labels() if self.lie.degree(x) == 0]
        if not mats:
            return linalg.nullspace(linalg.zeros(0, sp.dim(d)))[0]
        rows = []
        for m in mats:
            rows.extend(linalg.columns(linalg.transpose(m)))
        return linalg.nullspace(linalg.from_rows(rows, sp.dim(d)))[0]

    def _checked(self, m: str) -> bool:
        if self.max_weight is None or self.weights is None:
            return True
        return self.weights[m] <= self.max_weight - 2


def validate_rep(M: Representation) -> ValidationReport:
    """
    Degree discipline, compatibility with d and the module axiom
    [x,y].m = x.(y.m) - (-1)^{|x||y|} y.(x.m).
    """
    out = []
    L = M.lie
    for (x, m), val in M.action.items():
        bad = {k: v for k, v in val.items() if M.degree(k) != L.degree(x) + M.degree(m)}
        if bad:
            out.append(Violation("degree", (x, m), bad))
    for x in L.labels():
        for m in M.labels():
            if not M._checked(m):
                continue
            res = M.d(M.act({x: ONE}, {m: ONE}))
            axpy(res, M.act(L.d({x: ONE}), {m: ONE}), -ONE)
            axpy(res, M.act({x: ONE}, M.d({m: ONE})), -sign(L.degree(x)))
            if res:
                out.append(Violation("chain", (x, m), res))
    for x in L.labels():
        for y in L.labels():
            xy = L.bracket_basis(x, y)
            for m in M.labels():
                if not M._checked(m):
                    continue
                res = M.act(xy, {m: ONE})
                axpy(res, M.act({x: ONE}, M.act({y: ONE}, {m: ONE})), -ONE)
                axpy(
                    res,
                    M.act({y: ONE}, M.act({x: ONE}, {m: ONE})),
                    sign(L.degree(x) * L.degree(y)),
                )
                if res:
                    out.append(Violation("module", (x, y, m), res))
    return ValidationReport(out)


def adjoint_rep(L: DgLieAlgebra) -> Representation:
    action = {}
    for (a, b), val in L.brackets.items():
        action[(a, b)] = val
    return Representation(L, L.complex, action)


def trivial_rep(L: DgLieAlgebra, module: Complex = None) -> Representation:
    if module is None:
        module = Complex(GradedSpace({0: ("k",)}))
    return Representation(L, module, {})


def dual_rep(M: Representation) -> Representation:
    """
    (x.f)(m) = -(-1)^{|x||f|} f(x.m) on the dual complex.
    """
    module = graded.dual(M.module)
    action = {}
    for (x, m), val in M.action.items():
        dx = M.lie.degree(x)
        for t, c in val.items():
            # x.t* picks up m* with coefficient -(-1)^{|x||t|} c
            key = (x, graded.dual_label(t))
            action.setdefault(key, {})
            axpy(action[key], {graded.dual_label(m): -sign(dx * M.degree(t)) * c})
    return Representation(M.lie, module, action)


def rep_tensor(M: Representation, N: Representation) -> Representation:
    """
    x.(m (x) n) = (x.m) (x) n + (-1)^{|x||m|} m (x) (x.n).
    """
    if M.lie != N.lie:
        raise InputError("Tensor product of representations of different Lie algebras", module="lie")
    L = M.lie
    t = graded.tensor(M.module, N.module)
    action = {}
    for (lab, n), (a, p, b, q_) in t.pairs.items():
        for x in L.labels():
            dx = L.degree(x)
            out = {}
            for a2, c in M.action.get((x, a), {}).items():
                axpy(out, {t.label(a2, p + dx, b, q_): c})
            s = sign(dx * p)
            for b2, c in N.action.get((x, b), {}).items():
                axpy(out, {t.label(a, p, b2, q_ + dx): s * c})
            if out:
                action[(x, lab)] = out
    return Representation(L, t.complex, action)


def pullback(M: Representation, f: LieMorphism) -> Representation:
    """
    The L0-module structure on M along f: L0 -> L.
    """
    action = {}
    for x in f.source.labels():
        for m in M.labels():
            val = M.act(f.images.get(x, {}), {m: ONE})
            if val:
                action[(x, m)] = val
    return Representation(f.source, M.module, action)


def semidirect(M: Representation, name: str = "") -> DgLieAlgebra:
    """
    L x| M with M an abelian ideal: [x,m] = x.m, [m,x] = -(-1)^{|x||m|} x.m.
    """
    L = M.lie
    clash = set(L.labels()) & set(M.labels())
    if clash:
        raise InputError(f"Module labels clash with Lie labels: {sorted(clash)}", module="lie")
    basis = L.space.basis() + M.module.space.basis()
    brackets = dict(L.brackets)
    for (x, m), val in M.action.items():
        brackets[(x, m)] = val
        s = -sign(L.degree(x) * M.degree(m))
        brackets[(m, x)] = {k: s * v for k, v in val.items()}
    diff = dict(L.differential)
    for m in M.labels():
        dm = M.d({m: ONE})
        if dm:
            diff[m] = dm
    return DgLieAlgebra.build(basis, brackets, diff, name=name or f"{L.name}+M", complete=False)
