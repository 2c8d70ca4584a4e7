"""
Graded vector spaces, graded maps and cochain complexes over QQ.

Conventions: cohomological grading, differentials raise degree by one,
M[n]^i = M^{n+i} with d_{M[n]} = (-1)^n d_M, and for the dual
(d f) = -(-1)^{|f|} f o d. Every complex is checked for d o d = 0 when it is
built.
"""
import logging
import math
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from dgla import linalg
from dgla.config import C as CONFIG
from dgla.errors import InputError, VerdictError
from dgla.linalg import ZERO, ONE, q, sign

LOGGER = logging.getLogger(__name__)


def pmap(fn, items):
    """
    Map fn over items using at most CONFIG.threads workers; results keep
    the order of items.
    """
    items = list(items)
    if CONFIG.threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=CONFIG.threads) as ex:
        return list(ex.map(fn, items))


def wrap(label: str) -> str:
    if "⊗" in label:
        return f"({label})"
    return label


@dataclass(frozen=True)
class GradedSpace:
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        comps = {}
        for d, labels in self.components.items():
            labels = tuple(labels)
            if not labels:
                continue
            if len(set(labels)) != len(labels):
                dup = sorted({l for l in labels if labels.count(l) > 1})
                raise InputError(f"Duplicate basis labels {dup} in degree {d}")
            comps[int(d)] = labels
        object.__setattr__(self, "components", dict(sorted(comps.items())))
        object.__setattr__(
            self,
            "_index",
            {d: {l: i for i, l in enumerate(ls)} for d, ls in comps.items()},
        )

    @classmethod
    def from_basis(cls, basis):
        """
        Build from an iterable of (label, degree) pairs, keeping order.
        """
        comps = {}
        for label, deg in basis:
            comps.setdefault(int(deg), []).append(label)
        return cls(comps)

    def degrees(self):
        return list(self.components.keys())

    def dim(self, d: int) -> int:
        return len(self.components.get(d, ()))

    def labels(self, d: int):
        return self.components.get(d, ())

    def index(self, d: int, label: str) -> int:
        try:
            return self._index[d][label]
        except KeyError:
            raise KeyError(f"No basis element '{label}' in degree {d}")

    def has(self, d: int, label: str) -> bool:
        return label in self._index.get(d, {})

    def basis(self):
        return [(l, d) for d, ls in self.components.items() for l in ls]

    def total_dim(self) -> int:
        return sum(len(v) for v in self.components.values())

    def dims(self) -> dict:
        return {d: len(v) for d, v in self.components.items()}

    def is_zero(self) -> bool:
        return not self.components

    def euler_characteristic(self) -> int:
        return sum((-1) ** (d % 2) * len(v) for d, v in self.components.items())

    def shifted(self, n: int) -> "GradedSpace":
        return GradedSpace({d - n: ls for d, ls in self.components.items()})

    def degree_of(self, label: str) -> int:
        for d, idx in self._index.items():
            if label in idx:
                return d
        raise KeyError(f"No basis element '{label}'")

    def vector(self, d: int, combo: dict) -> list:
        """
        Dense coordinates in degree d of a {label: coeff} combination.
        """
        v = [ZERO] * self.dim(d)
        for label, c in combo.items():
            v[self.index(d, label)] += q(c)
        return v

    def combo(self, d: int, vector: list) -> dict:
        return {self.labels(d)[i]: c for i, c in enumerate(vector) if c != 0}


@dataclass(frozen=True)
class GradedMap:
    source: GradedSpace
    target: GradedSpace
    shift: int = 0
    blocks: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for d, m in self.blocks.items():
            rows, cols = self.target.dim(d + self.shift), self.source.dim(d)
            if m.shape != (rows, cols):
                raise ValueError(
                    f"Block at degree {d} has shape {m.shape}, expected {(rows, cols)}"
                )
            if rows == 0 or cols == 0 or linalg.is_zero(m):
                continue
            clean[d] = m
        object.__setattr__(self, "blocks", dict(sorted(clean.items())))

    @classmethod
    def zero(cls, source, target, shift=0):
        return cls(source, target, shift, {})

    @classmethod
    def identity(cls, space):
        return cls(space, space, 0, {d: linalg.identity(space.dim(d)) for d in space.degrees()})

    @classmethod
    def from_function(cls, source, target, shift, fn):
        """
        fn(degree, label) returns a {target label: coeff} combination in
        degree + shift.
        """
        blocks = {}
        for d in source.degrees():
            td = d + shift
            if target.dim(td) == 0:
                continue
            entries = {}
            for j, label in enumerate(source.labels(d)):
                for tl, c in fn(d, label).items():
                    if c == 0:
                        continue
                    i = target.index(td, tl)
                    entries[(i, j)] = entries.get((i, j), ZERO) + q(c)
            blocks[d] = linalg.from_entries(entries, target.dim(td), source.dim(d))
        return cls(source, target, shift, blocks)

    def block(self, d: int):
        if d in self.blocks:
            return self.blocks[d]
        return linalg.zeros(self.target.dim(d + self.shift), self.source.dim(d))

    def apply(self, d: int, vector: list) -> list:
        return linalg.apply(self.block(d), vector)

    def apply_label(self, d: int, label: str) -> dict:
        v = [ZERO] * self.source.dim(d)
        v[self.source.index(d, label)] = ONE
        return self.target.combo(d + self.shift, self.apply(d, v))

    def compose(self, other: "GradedMap") -> "GradedMap":
        """
        self o other.
        """
        blocks = {}
        for d in other.source.degrees():
            blocks[d] = linalg.matmul(self.block(d + other.shift), other.block(d))
        return GradedMap(other.source, self.target, self.shift + other.shift, blocks)

    def scaled(self, c) -> "GradedMap":
        return GradedMap(
            self.source,
            self.target,
            self.shift,
            {d: linalg.scale(m, c) for d, m in self.blocks.items()},
        )

    def __add__(self, other: "GradedMap") -> "GradedMap":
        if self.shift != other.shift:
            raise ValueError("Cannot add graded maps of different degree")
        degrees = set(self.blocks) | set(other.blocks)
        return GradedMap(
            self.source,
            self.target,
            self.shift,
            {d: linalg.add(self.block(d), other.block(d)) for d in degrees},
        )

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return not self.blocks

    def rank(self, d: int) -> int:
        return linalg.rank(self.block(d))


@dataclass(frozen=True)
class Complex:
    space: GradedSpace
    differential: GradedMap = None
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.differential is None:
            object.__setattr__(self, "differential", GradedMap.zero(self.space, self.space, 1))
        if self.differential.shift != 1:
            raise ValueError(f"Differential has degree {self.differential.shift}, expected 1")
        if self.check:
            square = self.differential.compose(self.differential)
            if not square.is_zero():
                d = next(iter(square.blocks))
                raise VerdictError(f"d o d != 0 starting in degree {d}", module="graded")

    @classmethod
    def from_function(cls, space, fn, check=True):
        return cls(space, GradedMap.from_function(space, space, 1, fn), check)

    def d(self, degree: int):
        return self.differential.block(degree)

    def degrees(self):
        return self.space.degrees()


def chain_residual(f: GradedMap, src: Complex, dst: Complex) -> GradedMap:
    """
    d o f - (-1)^{|f|} f o d; zero exactly when f is a chain map.
    """
    left = dst.differential.compose(f)
    right = f.compose(src.differential)
    return left - right.scaled(sign(f.shift))


def is_chain_map(f: GradedMap, src: Complex, dst: Complex) -> bool:
    return chain_residual(f, src, dst).is_zero()


def shift(c: Complex, n: int) -> Complex:
    space = c.space.shifted(n)
    s = sign(n)
    blocks = {d - n: linalg.scale(m, s) for d, m in c.differential.blocks.items()}
    return Complex(space, GradedMap(space, space, 1, blocks))


def dual_label(label: str) -> str:
    if label.endswith("∨"):
        return label[:-1] + "∨∨"
    return label + "∨"


def dual_space(space: GradedSpace) -> GradedSpace:
    return GradedSpace({-d: tuple(dual_label(l) for l in ls) for d, ls in space.components.items()})


def dual(c: Complex) -> Complex:
    space = dual_space(c.space)
    blocks = {}
    # (d f) = -(-1)^{|f|} f o d_{-k-1} for f in degree k
    for k in space.degrees():
        src = -k - 1
        if c.space.dim(src) == 0:
            continue
        m = linalg.transpose(c.d(src))
        blocks[k] = linalg.scale(m, -sign(k))
    return Complex(space, GradedMap(space, space, 1, blocks))


def dual_map(f: GradedMap) -> GradedMap:
    """
    Transpose f: V -> W of degree s to W* -> V*, with the sign
    f*(g) = (-1)^{|f||g|} g o f.
    """
    src, dst = dual_space(f.target), dual_space(f.source)
    blocks = {}
    for k in src.degrees():
        # g in degree k is dual to target degree -k = d + s
        d = -k - f.shift
        if f.source.dim(d) == 0:
            continue
        blocks[k] = linalg.scale(linalg.transpose(f.block(d)), sign(f.shift * k))
    return GradedMap(src, dst, f.shift, blocks)


def double_dual_iso(c: Complex) -> GradedMap:
    """
    Evaluation map C -> C** with x |-> (-1)^{|x|} ev_x.
    """
    dd = dual(dual(c))
    blocks = {d: linalg.scale(linalg.identity(c.space.dim(d)), sign(d)) for d in c.degrees()}
    return GradedMap(c.space, dd.space, 0, blocks)


@dataclass(frozen=True)
class Tensor:
    complex: Complex
    left: GradedSpace
    right: GradedSpace
    pairs: dict  # (label, degree) -> (left label, left degree, right label, right degree)
    names: dict

    def label(self, a: str, p: int, b: str, q_: int) -> str:
        return self.names[(a, p, b, q_)]


def _tensor_space(left: GradedSpace, right: GradedSpace):
    comps = {}
    names = {}
    for p in left.degrees():
        for q_ in right.degrees():
            for a in left.labels(p):
                for b in right.labels(q_):
                    comps.setdefault(p + q_, []).append((a, p, b, q_))
    final = {}
    pairs = {}
    for n, items in comps.items():
        raw = [f"{wrap(a)}⊗{wrap(b)}" for a, p, b, q_ in items]
        clash = len(set(raw)) != len(raw)
        labels = []
        for (a, p, b, q_), lab in zip(items, raw):
            if clash:
                lab = f"{lab}@{p}"
            names[(a, p, b, q_)] = lab
            pairs[(lab, n)] = (a, p, b, q_)
            labels.append(lab)
        final[n] = labels
    return GradedSpace(final), names, pairs


def tensor(c: Complex, dd: Complex) -> Tensor:
    space, names, pairs = _tensor_space(c.space, dd.space)

    def fn(n, label):
        a, p, b, q_ = pairs[(label, n)]
        out = {}
        for a2, coeff in c.differential.apply_label(p, a).items():
            key = names[(a2, p + 1, b, q_)]
            out[key] = out.get(key, ZERO) + coeff
        s = sign(p)
        for b2, coeff in dd.differential.apply_label(q_, b).items():
            key = names[(a, p, b2, q_ + 1)]
            out[key] = out.get(key, ZERO) + s * coeff
        return out

    return Tensor(Complex.from_function(space, fn), c.space, dd.space, pairs, names)


def braiding(c: Complex, dd: Complex) -> GradedMap:
    """
    tau: C (x) D -> D (x) C, x (x) y |-> (-1)^{|x||y|} y (x) x.
    """
    ab = tensor(c, dd)
    ba = tensor(dd, c)

    def fn(n, label):
        a, p, b, q_ = ab.pairs[(label, n)]
        return {ba.label(b, q_, a, p): sign(p * q_)}

    return GradedMap.from_function(ab.complex.space, ba.complex.space, 0, fn)


@dataclass(frozen=True)
class Cone:
    complex: Complex
    inclusion: GradedMap
    projection: GradedMap


def cone(f: GradedMap, src: Complex, dst: Complex) -> Cone:
    """
    cone(f) = D + C[1] with d(y, x) = (dy + f x, -dx).
    """
    if f.shift != 0:
        raise InputError(f"cone needs a degree 0 map, got degree {f.shift}", module="graded")
    if not is_chain_map(f, src, dst):
        raise InputError("cone needs a chain map; f does not commute with d", module="graded")

    comps = {}
    for n in set(dst.degrees()) | {d - 1 for d in src.degrees()}:
        comps[n] = list(dst.space.labels(n)) + [f"↑{a}" for a in src.space.labels(n + 1)]
    space = GradedSpace(comps)

    def fn(n, label):
        out = {}
        if label.startswith("↑") and src.space.has(n + 1, label[1:]):
            a = label[1:]
            for y, c in f.apply_label(n + 1, a).items():
                out[y] = out.get(y, ZERO) + c
            for a2, c in src.differential.apply_label(n + 1, a).items():
                out["↑" + a2] = out.get("↑" + a2, ZERO) - c
            return out
        return dict(dst.differential.apply_label(n, label))

    cx = Complex.from_function(space, fn)
    inclusion = GradedMap.from_function(dst.space, space, 0, lambda n, y: {y: ONE})
    shifted = shift(src, 1)
    projection = GradedMap.from_function(
        space,
        shifted.space,
        0,
        lambda n, l: {l[1:]: ONE} if l.startswith("↑") and src.space.has(n + 1, l[1:]) else {},
    )
    return Cone(cx, inclusion, projection)


@dataclass(frozen=True)
class Homology:
    complex: Complex
    space: GradedSpace
    representatives: dict  # degree -> list of cycle vectors
    boundaries: dict  # degree -> list of boundary vectors spanning the image

    def dims(self) -> dict:
        return self.space.dims()

    def dim(self, d: int) -> int:
        return self.space.dim(d)

    def representative_combos(self) -> dict:
        out = {}
        for d, reps in self.representatives.items():
            out[d] = [self.complex.space.combo(d, v) for v in reps]
        return out

    def classify(self, d: int, cycle: list) -> list:
        """
        Coordinates of the class of a cycle in the representative basis.
        """
        n = self.complex.space.dim(d)
        reps = self.representatives.get(d, [])
        bounds = self.boundaries.get(d, [])
        if not reps:
            return []
        sol = linalg.coordinates(bounds + reps, cycle, n)
        if sol is None:
            raise VerdictError(f"Vector in degree {d} is not a cycle", module="graded")
        return sol[len(bounds):]


def _homology_degree(c: Complex, d: int):
    n = c.space.dim(d)
    labels = c.space.labels(d)
    cycles, free = linalg.nullspace(c.d(d))
    incoming = c.d(d - 1)
    cols = linalg.columns(incoming)
    pivots = linalg.independent_columns(cols, n)
    bounds = [cols[i] for i in pivots]
    keep = linalg.complement(bounds, cycles, n)
    reps = [cycles[i] for i in keep]
    names = [f"[{labels[free[i]]}]" for i in keep]
    LOGGER.debug("degree %d: dim %d, cycles %d, boundaries %d", d, n, len(cycles), len(bounds))
    return d, names, reps, bounds


def homology(c: Complex) -> Homology:
    results = pmap(lambda d: _homology_degree(c, d), c.degrees())
    comps, reps, bounds = {}, {}, {}
    for d, names, r, b in results:
        comps[d] = names
        reps[d] = r
        bounds[d] = b
    return Homology(c, GradedSpace(comps), reps, bounds)


def induced_map(f: GradedMap, hsrc: Homology, hdst: Homology) -> GradedMap:
    """
    The map H(f) in the representative bases.
    """
    blocks = {}
    for d in hsrc.space.degrees():
        td = d + f.shift
        if hdst.space.dim(td) == 0:
            continue
        cols = [hdst.classify(td, f.apply(d, r)) for r in hsrc.representatives[d]]
        blocks[d] = linalg.from_columns(cols, hdst.space.dim(td))
    return GradedMap(hsrc.space, hdst.space, f.shift, blocks)


def is_quasi_isomorphism(f: GradedMap, src: Complex, dst: Complex, window=None) -> bool:
    hs, ht = homology(src), homology(dst)
    hf = induced_map(f, hs, ht)
    degrees = set(hs.space.degrees()) | set(ht.space.degrees())
    for d in degrees:
        if window is not None and not (window[0] <= d <= window[1]):
            continue
        if hs.dim(d) != ht.dim(d + f.shift) or hf.rank(d) != hs.dim(d):
            return False
    return True


# Monomials in a free graded-commutative algebra. Generators are indexed by
# position; a monomial is a sorted tuple of indices with no odd repeats.


def koszul_sort(seq, parity):
    """
    Sort a sequence of generator indices into a monomial. Returns
    (sign, monomial) or (0, None) when an odd generator repeats.
    """
    s = 0
    n = len(seq)
    for i in range(n):
        if parity[seq[i]]:
            for j in range(i + 1, n):
                if parity[seq[j]] and seq[j] < seq[i]:
                    s += 1
    mono = tuple(sorted(seq))
    for i in range(len(mono) - 1):
        if mono[i] == mono[i + 1] and parity[mono[i]]:
            return ZERO, None
    return sign(s), mono


def permutation_sign(seq, order, parity):
    """
    Koszul sign of rearranging seq into (seq[order[0]], seq[order[1]], ...).
    """
    s = 0
    for k in range(len(order)):
        for l in range(k + 1, len(order)):
            if order[k] > order[l] and parity[seq[order[k]]] and parity[seq[order[l]]]:
                s += 1
    return sign(s)


def enumerate_monomials(degrees, max_length, weights=None, max_weight=None, min_degree=None):
    """
    All monomials of length <= max_length on generators with the given
    degrees, optionally bounded by an additive weight and (for generators
    in non-positive degrees) a minimum total degree.
    """
    parity = [d % 2 for d in degrees]
    out = []

    def rec(start, mono, length, wt, deg):
        out.append(tuple(mono))
        if length == max_length:
            return
        for g in range(start, len(degrees)):
            if parity[g] and mono and mono[-1] == g:
                continue
            w2 = wt + (weights[g] if weights else 1)
            if max_weight is not None and w2 > max_weight:
                continue
            d2 = deg + degrees[g]
            if min_degree is not None and d2 < min_degree and degrees[g] <= 0:
                continue
            mono.append(g)
            rec(g, mono, length + 1, w2, d2)
            mono.pop()

    rec(0, [], 0, 0, 0)
    return out


def monomial_label(mono, names, sep="·") -> str:
    if not mono:
        return "1"
    parts = []
    for g, group in itertools.groupby(mono):
        k = len(list(group))
        parts.append(names[g] if k == 1 else f"{names[g]}^{k}")
    return sep.join(parts)


def flat_generators(space: GradedSpace):
    """
    (names, degrees) for the basis of space in degree order; labels that
    repeat across degrees get an @degree suffix.
    """
    basis = space.basis()
    counts = {}
    for l, _ in basis:
        counts[l] = counts.get(l, 0) + 1
    names = [l if counts[l] == 1 else f"{l}@{d}" for l, d in basis]
    return names, [d for _, d in basis], basis


@dataclass(frozen=True)
class SymmetricAlgebra:
    """
    Sym of a complex up to a weight bound, on its monomial basis.
    """

    base: Complex
    max_weight: int
    names: list
    degrees: list
    monomials: dict  # label -> monomial
    complex: Complex

    def weight(self, label: str) -> int:
        return len(self.monomials[label])

    def weight_dims(self) -> dict:
        out = {}
        for label, m in self.monomials.items():
            d = sum(self.degrees[g] for g in m)
            key = (d, len(m))
            out[key] = out.get(key, 0) + 1
        return out

    def _parity(self):
        return [d % 2 for d in self.degrees]

    def words(self, w: int):
        return list(itertools.product(range(len(self.names)), repeat=w))

    def projector(self, w: int):
        """
        (1/w!) sum_sigma eps(sigma) sigma on the w-th tensor power.
        """
        parity = self._parity()
        words = self.words(w)
        index = {word: i for i, word in enumerate(words)}
        scale = q(1) / math.factorial(w)
        entries = {}
        for j, word in enumerate(words):
            for order in itertools.permutations(range(w)):
                new = tuple(word[k] for k in order)
                s = permutation_sign(word, order, parity)
                key = (index[new], j)
                entries[key] = entries.get(key, ZERO) + s * scale
        return linalg.from_entries(entries, len(words), len(words))

    def symmetrization(self, w: int):
        """
        Columns are the symmetrized tensors of the weight-w monomials.
        """
        parity = self._parity()
        words = self.words(w)
        index = {word: i for i, word in enumerate(words)}
        monos = [m for m in self.monomials.values() if len(m) == w]
        scale = q(1) / math.factorial(w)
        entries = {}
        for j, m in enumerate(monos):
            for order in itertools.permutations(range(w)):
                new = tuple(m[k] for k in order)
                key = (index[new], j)
                entries[key] = entries.get(key, ZERO) + permutation_sign(m, order, parity) * scale
        return linalg.from_entries(entries, len(words), len(monos))


def sym_truncated(c: Complex, max_weight: int) -> SymmetricAlgebra:
    if max_weight < 0:
        raise InputError(f"maxWeight must be >= 0, got {max_weight}", module="graded")
    names, degrees, basis = flat_generators(c.space)
    parity = [d % 2 for d in degrees]
    monos = enumerate_monomials(degrees, max_weight)
    by_label = {}
    comps = {}
    for m in monos:
        label = monomial_label(m, names)
        by_label[label] = m
        comps.setdefault(sum(degrees[g] for g in m), []).append(label)
    space = GradedSpace(comps)
    pos = {(l, d): i for i, (l, d) in enumerate(basis)}
    gen_d = [c.differential.apply_label(d, l) for l, d in basis]

    def fn(n, label):
        m = by_label[label]
        out = {}
        before = 0
        for i, g in enumerate(m):
            for l2, coeff in gen_d[g].items():
                g2 = pos[(l2, degrees[g] + 1)]
                s, mono = koszul_sort(m[:i] + (g2,) + m[i + 1:], parity)
                if mono is None:
                    continue
                key = monomial_label(mono, names)
                out[key] = out.get(key, ZERO) + s * sign(before) * coeff
            before += degrees[g]
        return out

    return SymmetricAlgebra(c, max_weight, names, degrees, by_label, Complex.from_function(space, fn))
