"""
Chevalley-Eilenberg complexes.

Chains live on Sym(L[1]) with generators eta.x of degree |x| - 1. The
differential is the coderivation extending

    l1(eta.x) = -eta.(dx),    l2(eta.x, eta.y) = (-1)^{|x|} eta.[x,y]

so on a monomial eta.x_1 ... eta.x_n the internal term at position i has
sign -(-1)^{S_i} with S_i the sum of the shifted degrees before i, and the
bracket term for i < j has sign (-1)^{T_ij + |x_i|}, T_ij being the Koszul
exponent of moving eta.x_i, eta.x_j to the front. The extra |x_i| is what
makes d o d = 0; with it the complex of an abelian algebra reduces to
Sym(L[1]) with the internal differential.

Cochains are the dual complex, with the product dual to the unshuffle
coproduct: (f.g)(m) = sum (-1)^{|g||m'|} f(m') g(m'') over Delta(m).
"""
import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property

from dgla import cdga, graded, linalg
from dgla.errors import InputError, VerdictError
from dgla.graded import Complex, GradedMap, GradedSpace
from dgla.lie import (
    DgLieAlgebra,
    LieMorphism,
    Representation,
    adjoint_rep,
    dual_rep,
    enveloping,
    pullback,
    semidirect,
)
from dgla.linalg import ONE, ZERO, axpy, sign

LOGGER = logging.getLogger(__name__)

ETA = "η"


def _sub(mono, positions):
    return tuple(mono[i] for i in positions)


@dataclass(frozen=True)
class CEChainComplex:
    lie: DgLieAlgebra
    max_weight: int
    names: list
    degrees: list
    lie_labels: list
    monomials: dict  # label -> tuple of generator indices
    complex: Complex
    flag: str
    marked: frozenset = field(default_factory=frozenset)
    cut_weights: tuple = ()  # weight of each unmarked generator in the cut

    @cached_property
    def _labels(self) -> dict:
        return {m: l for l, m in self.monomials.items()}

    @cached_property
    def _degree(self) -> dict:
        return {l: sum(self.degrees[g] for g in m) for l, m in self.monomials.items()}

    def label(self, mono) -> str:
        return self._labels[tuple(mono)]

    def degree(self, label: str) -> int:
        return self._degree[label]

    def weight(self, label: str) -> int:
        return len(self.monomials[label])

    def weight_dims(self) -> dict:
        out = {}
        for l in self.monomials:
            key = (self.degree(l), self.weight(l))
            out[key] = out.get(key, 0) + 1
        return out

    @property
    def exact(self) -> bool:
        return self.flag == "exact"

    @cached_property
    def cut_degree(self):
        """
        Lowest degree of a nonzero monomial the truncation leaves out, None
        if it leaves nothing out. Assumes generators in degrees >= 0, so it
        is enough to look at weights up to max_weight + the largest weight.
        """
        n = len(self.lie_labels) - len(self.marked)
        degrees, weights = self.degrees[:n], self.cut_weights
        top = self.max_weight + max(weights, default=0)
        best = [None] * (top + 1)
        best[0] = 0
        for d, w in zip(degrees, weights):
            # odd generators square to zero
            steps = range(top, w - 1, -1) if d % 2 else range(w, top + 1)
            for t in steps:
                if best[t - w] is not None and (best[t] is None or best[t - w] + d < best[t]):
                    best[t] = best[t - w] + d
        outside = [b for b in best[self.max_weight + 1:] if b is not None]
        return min(outside) if outside else None

    def unshuffles(self, mono):
        """
        Terms (sign, front, back) of the unshuffle coproduct of a monomial.
        """
        parity = [d % 2 for d in self.degrees]
        n = len(mono)
        for k in range(n + 1):
            for front in itertools.combinations(range(n), k):
                back = tuple(i for i in range(n) if i not in front)
                s = graded.permutation_sign(mono, front + back, parity)
                yield s, _sub(mono, front), _sub(mono, back)

    def coproduct(self, label: str) -> dict:
        out = {}
        for s, a, b in self.unshuffles(self.monomials[label]):
            axpy(out, {(self.label(a), self.label(b)): s})
        return out

    def coproduct_map(self):
        """
        Delta as a degree 0 map into C (x) C; returns (map, tensor).
        """
        t = graded.tensor(self.complex, self.complex)

        def fn(n, label):
            out = {}
            for (a, b), c in self.coproduct(label).items():
                axpy(out, {t.label(a, self.degree(a), b, self.degree(b)): c})
            return out

        return GradedMap.from_function(self.complex.space, t.complex.space, 0, fn), t

    def coproduct_is_chain_map(self) -> bool:
        f, t = self.coproduct_map()
        return graded.is_chain_map(f, self.complex, t.complex)

    def coassociativity_failures(self) -> list:
        bad = []
        for label in self.monomials:
            left, right = {}, {}
            for (a, b), c in self.coproduct(label).items():
                for (a1, a2), c2 in self.coproduct(a).items():
                    axpy(left, {(a1, a2, b): c * c2})
                for (b1, b2), c2 in self.coproduct(b).items():
                    axpy(right, {(a, b1, b2): c * c2})
            if left != right:
                bad.append(label)
        return bad

    def primitive_failures(self) -> list:
        bad = []
        for g in range(len(self.names)):
            label = self.label((g,))
            expected = {(label, "1"): ONE, ("1", label): ONE}
            if self.coproduct(label) != expected:
                bad.append(label)
        return bad


def _flag(L: DgLieAlgebra, labels, max_weight: int, weights) -> str:
    """
    "exact" when nothing is cut (a finite exterior algebra that fits) or
    when every generator sits in degree >= 2, so that each degree meets
    finitely many weights; weight-truncated otherwise.
    """
    if all((L.degree(l) - 1) % 2 for l in labels) and sum(weights) <= max_weight:
        return "exact"
    if all(L.degree(l) >= 2 for l in labels):
        return "exact"
    return f"weight-truncated({max_weight})"


def _ce_chains(L: DgLieAlgebra, max_weight: int, marked=(), lie_weight_cut=True, weights=None) -> CEChainComplex:
    """
    CE chains truncated at max_weight factors (or Lie weight, when L is
    weight graded). Generators listed in marked are ordered last and every
    monomial carries exactly one of them; this is the chain complex with
    coefficients in the abelian ideal they span. weights overrides the Lie
    weights of the unmarked generators.
    """
    if max_weight < 0:
        raise InputError(f"maxWeight must be >= 0, got {max_weight}", module="chevalley")
    marked = [l for l in L.labels() if l in set(marked)]
    plain = [l for l in L.labels() if l not in set(marked)]
    lie_labels = plain + marked
    names = [f"{ETA}{l}" for l in lie_labels]
    degrees = [L.degree(l) - 1 for l in lie_labels]
    parity = [d % 2 for d in degrees]
    index = {l: i for i, l in enumerate(lie_labels)}

    np_ = len(plain)
    if weights is None:
        weights = L.weights
    use_weights = weights is not None and lie_weight_cut
    cut_weights = tuple(int(weights[l]) if use_weights else 1 for l in plain)
    monos = graded.enumerate_monomials(
        degrees[:np_],
        max_weight,
        weights=list(cut_weights) if use_weights else None,
        max_weight=max_weight if use_weights else None,
    )
    if marked:
        monos = [m + (np_ + k,) for m in monos for k in range(len(marked))]

    by_label, labels_of, comps = {}, {}, {}
    for m in monos:
        label = graded.monomial_label(m, names)
        by_label[label] = m
        labels_of[m] = label
        comps.setdefault(sum(degrees[g] for g in m), []).append(label)
    space = GradedSpace(comps)

    def fn(n, label):
        m = by_label[label]
        out = {}

        def put(seq, c):
            s, mono = graded.koszul_sort(seq, parity)
            if mono is None:
                return
            if mono not in labels_of:
                raise VerdictError(
                    f"d({label}) leaves the truncation; the weight grading is not respected",
                    module="chevalley",
                )
            axpy(out, {labels_of[mono]: s * c})

        before = 0
        for i, g in enumerate(m):
            for c, coeff in L.differential.get(lie_labels[g], {}).items():
                put(m[:i] + (index[c],) + m[i + 1:], -sign(before) * coeff)
            before += degrees[g]

        for i, j in itertools.combinations(range(len(m)), 2):
            x, y = lie_labels[m[i]], lie_labels[m[j]]
            val = L.bracket_basis(x, y)
            if not val:
                continue
            rest = tuple(k for k in range(len(m)) if k != i and k != j)
            s = graded.permutation_sign(m, (i, j) + rest, parity) * sign(L.degree(x))
            tail = _sub(m, rest)
            for c, coeff in val.items():
                put((index[c],) + tail, s * coeff)
        return out

    cx = Complex.from_function(space, fn)
    flag = _flag(L, plain, max_weight, cut_weights)
    LOGGER.info("CE chains of %s to weight %d: dim %d, %s", L.name, max_weight, space.total_dim(), flag)
    return CEChainComplex(
        L, max_weight, names, degrees, lie_labels, by_label, cx, flag, frozenset(marked), cut_weights
    )


def ce_homological(L: DgLieAlgebra, max_weight: int, lie_weight_cut=True) -> CEChainComplex:
    return _ce_chains(L, max_weight, lie_weight_cut=lie_weight_cut)


@dataclass(frozen=True)
class CECochainAlgebra:
    chains: CEChainComplex
    complex: Complex
    products: dict  # (a, b) -> {c: coeff} on dual basis labels
    unit: str

    @property
    def flag(self) -> str:
        return self.chains.flag

    def degree(self, label: str) -> int:
        return -self.chains.degree(label[:-1])

    def multiply(self, x: dict, y: dict) -> dict:
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                axpy(out, self.products.get((a, b), {}), ca * cb)
        return out

    def d(self, x: dict) -> dict:
        out = {}
        for a, c in x.items():
            axpy(out, self.complex.differential.apply_label(self.degree(a), a), c)
        return out

    def augmentation(self, x: dict):
        return x.get(self.unit, ZERO)

    def derivation_failures(self) -> list:
        bad = []
        labels = [l for l, _ in self.complex.space.basis()]
        for a in labels:
            for b in labels:
                lhs = self.d(self.multiply({a: ONE}, {b: ONE}))
                rhs = self.multiply(self.d({a: ONE}), {b: ONE})
                axpy(rhs, self.multiply({a: ONE}, self.d({b: ONE})), sign(self.degree(a)))
                if lhs != rhs:
                    bad.append((a, b))
        return bad

    def to_cdga(self) -> "cdga.FiniteCdga":
        positive = [d for d in self.complex.space.degrees() if d > 0]
        if positive:
            raise InputError(
                f"C(L) has elements in positive degree {positive[0]}; L needs generators in degrees >= 1",
                module="chevalley",
            )
        diff = {}
        for l, d in self.complex.space.basis():
            val = self.complex.differential.apply_label(d, l)
            if val:
                diff[l] = val
        return cdga.FiniteCdga(
            self.complex.space,
            self.unit,
            {k: v for k, v in self.products.items() if self.unit not in k},
            diff,
            {self.unit: ONE},
            name=f"C({self.chains.lie.name})",
        )


def _cochain_products(chains: CEChainComplex) -> dict:
    products = {}
    for label in chains.monomials:
        target = graded.dual_label(label)
        for (a, b), c in chains.coproduct(label).items():
            key = (graded.dual_label(a), graded.dual_label(b))
            products.setdefault(key, {})
            axpy(products[key], {target: c * sign(chains.degree(a) * chains.degree(b))})
    return {k: v for k, v in products.items() if v}


def ce_cohomological(L: DgLieAlgebra, max_weight: int, lie_weight_cut=True) -> CECochainAlgebra:
    chains = ce_homological(L, max_weight, lie_weight_cut)
    return CECochainAlgebra(
        chains,
        graded.dual(chains.complex),
        _cochain_products(chains),
        graded.dual_label("1"),
    )


@dataclass(frozen=True)
class CohomologyRing:
    homology: graded.Homology
    table: dict  # (class, class) -> {class: coeff}

    def is_square_zero(self, unit: str) -> bool:
        for (a, b), val in self.table.items():
            if unit not in (a, b) and val:
                return False
        return True


def ce_cohomology_ring(C: CECochainAlgebra) -> CohomologyRing:
    """
    Products of cohomology representatives, classified back into cohomology.
    """
    h = graded.homology(C.complex)
    reps = []
    for d in h.space.degrees():
        for name, vec in zip(h.space.labels(d), h.representatives[d]):
            reps.append((name, d, C.complex.space.combo(d, vec)))
    table = {}
    for a, da, xa in reps:
        for b, db, xb in reps:
            prod = C.multiply(xa, xb)
            d = da + db
            if h.space.dim(d) == 0:
                continue
            coords = h.classify(d, C.complex.space.vector(d, prod))
            val = {h.space.labels(d)[i]: c for i, c in enumerate(coords) if c != 0}
            if val:
                table[(a, b)] = val
    return CohomologyRing(h, table)


def unit_class(C: CECochainAlgebra, ring: CohomologyRing) -> str:
    coords = ring.homology.classify(0, C.complex.space.vector(0, {C.unit: ONE}))
    for i, c in enumerate(coords):
        if c != 0:
            return ring.homology.space.labels(0)[i]
    raise VerdictError("Unit is not a nonzero class", module="chevalley")


@dataclass(frozen=True)
class CECoefficients:
    representation: Representation
    chains: CEChainComplex
    complex: Complex

    @property
    def flag(self) -> str:
        return self.chains.flag


def ce_with_coefficients(L: DgLieAlgebra, M: Representation, max_weight: int) -> CECoefficients:
    """
    Hom(Sym(L[1]), M) realised as (Sym(L[1]) (x) N[1])^dual [1] with N the
    dual representation of M, built from the CE chains of L x| N. The L
    factors are cut exactly as in ce_cohomological.
    """
    if M.lie != L:
        raise InputError("Representation is not over the given Lie algebra", module="chevalley")
    N = dual_rep(M)
    S = semidirect(N, name=f"{L.name}+M∨")
    chains = _ce_chains(S, max_weight, marked=N.labels(), weights=L.weights)
    cx = graded.shift(graded.dual(chains.complex), 1)
    return CECoefficients(M, chains, cx)


# The free functor: U(L) (x)_tau Sym(L[1]) (x) W with tau(eta.x) = x.


@dataclass(frozen=True)
class FreeCEModule:
    representation: Representation
    enveloping: object
    chains: CEChainComplex
    generators: GradedSpace
    parts: dict  # label -> (U label, chain label, generator label)

    @property
    def complex(self) -> Complex:
        return self.representation.module


def free_ce_module(L: DgLieAlgebra, generators: GradedSpace, max_weight: int) -> FreeCEModule:
    """
    The free representation on the free C(L)-module with the given
    generators, truncated at total (PBW length + CE weight) <= max_weight.
    The twisting cochain is tau(eta.x) = -x; with the CE signs above this
    is the sign for which d o d = 0.
    """
    U = enveloping(L, max_weight)
    chains = _ce_chains(L, max_weight, lie_weight_cut=False)
    parts, comps, weights = {}, {}, {}
    index = {n: i for i, n in enumerate(U.names)}
    for u in U.monomials:
        for m in chains.monomials:
            if U.weight(u) + chains.weight(m) > max_weight:
                continue
            for w, dw in generators.basis():
                label = f"{u}⊗{m}⊗{w}"
                parts[label] = (u, m, w)
                weights[label] = U.weight(u) + chains.weight(m)
                comps.setdefault(U.degree(u) + chains.degree(m) + dw, []).append(label)
    space = GradedSpace(comps)
    name_of = {v: k for k, v in parts.items()}

    def fn(n, label):
        u, m, w = parts[label]
        out = {}
        su = sign(U.degree(u))
        for u2, c in U.d_label(u).items():
            axpy(out, {name_of[(u2, m, w)]: c})
        dm = chains.complex.differential.apply_label(chains.degree(m), m)
        for m2, c in dm.items():
            axpy(out, {name_of[(u, m2, w)]: su * c})
        for s, front, back in chains.unshuffles(chains.monomials[m]):
            if len(front) != 1:
                continue
            x = chains.lie_labels[front[0]]
            word = U.monomials[u] + (index[x],)
            for u2, c in U.normal_form(word).items():
                axpy(out, {name_of[(u2, chains.label(back), w)]: -su * s * c})
        return out

    module = Complex.from_function(space, fn)
    action = {}
    for label, (u, m, w) in parts.items():
        for x in L.labels():
            out = {}
            for u2, c in U.normal_form((index[x],) + U.monomials[u]).items():
                key = (u2, m, w)
                if key in name_of:
                    axpy(out, {name_of[key]: c})
            if out:
                action[(x, label)] = out
    rep = Representation(L, module, action, weights, max_weight)
    LOGGER.info("free CE module of %s to weight %d: dim %d", L.name, max_weight, space.total_dim())
    return FreeCEModule(rep, U, chains, generators, parts)


# The adjoint derivation C(L) -> C(L0; L dual)[-1].


@dataclass(frozen=True)
class AdjointDerivation:
    morphism: LieMorphism
    source: Complex  # C(L)
    target: Complex  # dual of Sym(L0[1]) (x) L[1]
    delta: GradedMap
    chains: CEChainComplex  # CE chains of L
    coefficient_chains: CEChainComplex  # chains of L0 x| L, one L factor
    residual: GradedMap

    @property
    def is_chain_map(self) -> bool:
        return self.residual.is_zero()


def _relabel(M: Representation, fn) -> Representation:
    sp = M.module.space
    space = GradedSpace({d: tuple(fn(l) for l in ls) for d, ls in sp.components.items()})
    diff = GradedMap(space, space, 1, dict(M.module.differential.blocks))
    action = {(x, fn(m)): {fn(k): c for k, c in val.items()} for (x, m), val in M.action.items()}
    return Representation(M.lie, Complex(space, diff), action)


def ad_label(label: str) -> str:
    return f"ad({label})"


def adjoint_derivation(f: LieMorphism, max_weight: int) -> AdjointDerivation:
    """
    delta(phi)(m (x) eta.y) = phi(Sym(eta.f)(m) . eta.y) for m in Sym(L0[1])
    of weight <= max_weight and y in L.
    """
    L0, L = f.source, f.target
    N = _relabel(pullback(adjoint_rep(L), f), ad_label)
    S = semidirect(N, name=f"{L0.name}+ad")
    T = _ce_chains(S, max_weight, marked=N.labels())
    CL = _ce_chains(L, max_weight + 1, lie_weight_cut=False)
    parity = [d % 2 for d in CL.degrees]
    index = {l: i for i, l in enumerate(CL.lie_labels)}
    back = {ad_label(l): l for l in L.labels()}

    def j(n, label):
        mono = T.monomials[label]
        terms = {(): ONE}
        for g in mono[:-1]:
            image = f.images.get(T.lie_labels[g], {})
            nxt = {}
            for seq, c in terms.items():
                for y, cy in image.items():
                    axpy(nxt, {seq + (index[y],): c * cy})
            terms = nxt
        last = index[back[T.lie_labels[mono[-1]]]]
        out = {}
        for seq, c in terms.items():
            s, m = graded.koszul_sort(seq + (last,), parity)
            if m is None:
                continue
            axpy(out, {CL.label(m): s * c})
        return out

    jmap = GradedMap.from_function(T.complex.space, CL.complex.space, 0, j)
    delta = graded.dual_map(jmap)
    src, dst = graded.dual(CL.complex), graded.dual(T.complex)
    residual = graded.chain_residual(delta, src, dst)
    if not residual.is_zero():
        d = next(iter(residual.blocks))
        col = min(c for (_, c) in linalg.entries(residual.blocks[d]))
        word = src.space.labels(d)[col]
        raise VerdictError(f"delta is not a chain map at basis word {word}", module="chevalley")
    LOGGER.info("adjoint derivation for %s -> %s to weight %d verified", L0.name, L.name, max_weight)
    return AdjointDerivation(f, src, dst, delta, CL, T, residual)


def derivation_failures(ad: AdjointDerivation, max_pairs: int = None) -> list:
    """
    Pairs (f, g) of C(L) basis cochains with
    delta(fg) != delta(f).f*(g) + f*(f).delta(g), where C(L0) acts on the
    target through the coproduct of Sym(L0[1]) and the right action is the
    graded-commutative twist of the left one.
    """
    CL, T = ad.chains, ad.coefficient_chains
    L0 = ad.morphism.source
    C0 = _ce_chains(L0, T.max_weight, lie_weight_cut=False)
    parity0 = [d % 2 for d in C0.degrees]
    idx0 = {l: i for i, l in enumerate(C0.lie_labels)}
    idxL = {l: i for i, l in enumerate(CL.lie_labels)}
    parityL = [d % 2 for d in CL.degrees]
    products = _cochain_products(CL)

    def sym_map(label):
        terms = {(): ONE}
        for g in C0.monomials[label]:
            image = ad.morphism.images.get(C0.lie_labels[g], {})
            nxt = {}
            for seq, c in terms.items():
                for y, cy in image.items():
                    axpy(nxt, {seq + (idxL[y],): c * cy})
            terms = nxt
        out = {}
        for seq, c in terms.items():
            s, m = graded.koszul_sort(seq, parityL)
            if m is not None:
                axpy(out, {CL.label(m): s * c})
        return out

    # pullback f*: C(L) -> C(L0) on dual labels
    pull = {}
    for l0 in C0.monomials:
        for l, c in sym_map(l0).items():
            pull.setdefault(graded.dual_label(l), {})
            axpy(pull[graded.dual_label(l)], {graded.dual_label(l0): c})

    # left action of C(L0) on the dual of T
    act = {}
    for t in T.monomials:
        mono = T.monomials[t]
        body, last = mono[:-1], mono[-1]
        for s, a, b in T.unshuffles(body):
            a0 = C0.label(tuple(idx0[T.lie_labels[g]] for g in a))
            tb = T.label(b + (last,))
            key = (graded.dual_label(a0), graded.dual_label(tb))
            act.setdefault(key, {})
            axpy(act[key], {graded.dual_label(t): s * sign(T.degree(tb) * C0.degree(a0))})

    def left(phi: dict, psi: dict) -> dict:
        out = {}
        for a, ca in phi.items():
            for b, cb in psi.items():
                axpy(out, act.get((a, b), {}), ca * cb)
        return out

    def deg_dual_T(label):
        return -T.degree(label[:-1])

    def deg_dual_L(label):
        return -CL.degree(label[:-1])

    def delta(x: dict) -> dict:
        out = {}
        for a, c in x.items():
            axpy(out, ad.delta.apply_label(deg_dual_L(a), a), c)
        return out

    labels = [l for l, _ in ad.source.space.basis()]
    bad = []
    pairs = [(a, b) for a in labels for b in labels]
    if max_pairs is not None:
        pairs = pairs[:max_pairs]
    for a, b in pairs:
        lhs = delta(products.get((a, b), {}))
        da = delta({a: ONE})
        db = delta({b: ONE})
        rhs = {}
        for t, c in da.items():
            axpy(rhs, left(pull.get(b, {}), {t: ONE}), c * sign(deg_dual_T(t) * deg_dual_L(b)))
        axpy(rhs, left(pull.get(a, {}), db))
        if lhs != rhs:
            bad.append((a, b))
    return bad


# The cone algebra A[eta] with d(eta) = 1.


@dataclass(frozen=True)
class ConeAlgebra:
    base: "cdga.FiniteCdga"
    algebra: "cdga.FiniteCdga"

    def is_acyclic(self) -> bool:
        return graded.homology(self.algebra.complex).space.is_zero()


def cone_algebra(A: "cdga.FiniteCdga" = None) -> ConeAlgebra:
    """
    A[eta] = A (x) Lambda(eta), eta in degree -1 with d(eta) = 1.
    """
    if A is None:
        A = cdga.base()
    eta = ETA
    if eta in A.labels():
        raise InputError(f"Label '{eta}' already used by the base algebra", module="chevalley")

    def ext(l):
        return eta if l == A.unit else f"{l}·{eta}"

    basis = [(l, d) for l, d in A.space.basis()] + [(ext(l), d - 1) for l, d in A.space.basis()]
    products = {}
    for a, da in A.space.basis():
        for b, db in A.space.basis():
            ab = A.mul_basis(a, b)
            if not ab:
                continue
            if a != A.unit and b != A.unit:
                products[(a, b)] = dict(ab)
            # a . (b eta) = (ab) eta ; (a eta) . b = (-1)^{|b|} (ab) eta
            if a != A.unit:
                products[(a, ext(b))] = {ext(k): v for k, v in ab.items()}
            if b != A.unit:
                products[(ext(a), b)] = {ext(k): sign(db) * v for k, v in ab.items()}
    differential = {}
    for a, da in A.space.basis():
        da_ = A.d({a: ONE})
        if da_:
            differential[a] = da_
        # d(a eta) = (da) eta + (-1)^{|a|} a
        val = {ext(k): v for k, v in da_.items()}
        axpy(val, {a: sign(da)})
        differential[ext(a)] = val
    B = cdga.FiniteCdga(
        GradedSpace.from_basis(basis),
        A.unit,
        products,
        differential,
        dict(A.augmentation),
        name=f"{A.name}[{eta}]",
    )
    return ConeAlgebra(A, B)
