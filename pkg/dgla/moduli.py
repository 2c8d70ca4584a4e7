"""
Maurer-Cartan evaluation of the formal moduli problem of a dg-Lie algebra.

For an artinian B with augmentation ideal m the value X(B) is modelled by
MC(m (x) L). Its points up to gauge are computed exactly only in the
affine-linear regime, where the brackets (m (x) L)^1 x (m (x) L)^1 and
(m (x) L)^0 x (m (x) L)^1 vanish; there the orbits form the affine space
H^1(m (x) L). Everything else is returned as a symbolic sympy system.
"""
import logging
import random
from dataclasses import dataclass, field

import sympy
from sympy import QQ

from dgla import graded, linalg
from dgla.cdga import (
    CdgaMorphism,
    FiniteCdga,
    cellular_resolve,
    cotangent_fiber,
    dual_numbers,
    fiber_product,
    require_artinian,
    unit_map,
    very_good_check,
)
from dgla.chevalley import ce_cohomological
from dgla.errors import InputError, TruncationError, VerdictError
from dgla.graded import GradedMap
from dgla.lie import DgLieAlgebra, transport
from dgla.linalg import ONE, ZERO, axpy, sign

LOGGER = logging.getLogger(__name__)

AFFINE = "affine-linear"
NONLINEAR = "nonlinear"


def tensor_label(b: str, x: str) -> str:
    return f"{b}⊗{x}"


def tensor_lie(B: FiniteCdga, L: DgLieAlgebra) -> DgLieAlgebra:
    """
    m (x) L with d(b (x) x) = db (x) x + (-1)^{|b|} b (x) dx and
    [b (x) x, b' (x) y] = (-1)^{|x||b'|} bb' (x) [x,y].
    """
    ideal = B.ideal_labels()
    basis = [(tensor_label(b, x), B.degree(b) + L.degree(x)) for b in ideal for x in L.labels()]

    def in_ideal(combo, what):
        if B.unit in combo:
            raise InputError(f"{what} leaves the augmentation ideal of {B.name}", module="moduli")
        return combo

    brackets = {}
    for b1 in ideal:
        for b2 in ideal:
            prod = in_ideal(B.mul_basis(b1, b2), f"{b1}·{b2}")
            if not prod:
                continue
            for (x, y), val in L.brackets.items():
                s = sign(L.degree(x) * B.degree(b2))
                out = {}
                for b, cb in prod.items():
                    for z, cz in val.items():
                        axpy(out, {tensor_label(b, z): s * cb * cz})
                if out:
                    brackets[(tensor_label(b1, x), tensor_label(b2, y))] = out
    diff = {}
    for b in ideal:
        db = in_ideal(B.d({b: ONE}), f"d({b})")
        for x in L.labels():
            out = {}
            for b2, c in db.items():
                axpy(out, {tensor_label(b2, x): c})
            for y, c in L.d({x: ONE}).items():
                axpy(out, {tensor_label(b, y): sign(B.degree(b)) * c})
            if out:
                diff[tensor_label(b, x)] = out
    return DgLieAlgebra.build(basis, brackets, diff, name=f"m({B.name})⊗{L.name}", complete=False)


@dataclass(frozen=True)
class MCProblem:
    lie: DgLieAlgebra
    coefficients: FiniteCdga
    tensor: DgLieAlgebra


def mc_problem(L: DgLieAlgebra, B: FiniteCdga) -> MCProblem:
    require_artinian(B)
    return MCProblem(L, B, tensor_lie(B, L))


@dataclass(frozen=True)
class GaugeOrbits:
    """
    Orbits of the linear gauge action x -> x - d(lambda) on MC cycles.
    """

    tensor: DgLieAlgebra
    homology: graded.Homology

    @property
    def dimension(self) -> int:
        return self.homology.dim(1)

    @property
    def points(self):
        # a point when the orbit space is zero dimensional, a line or more otherwise
        return 1 if self.dimension == 0 else None

    def representatives(self) -> list:
        return self.homology.representative_combos().get(1, [])

    def classify(self, x: dict):
        """
        Coordinates of the orbit of an MC element, or None if x is not MC.
        """
        sp = self.tensor.space
        if self.tensor.d(x):
            return None
        if self.dimension == 0:
            return []
        return self.homology.classify(1, sp.vector(1, x))


def gauge_orbits(N: DgLieAlgebra) -> GaugeOrbits:
    return GaugeOrbits(N, graded.homology(N.complex))


@dataclass(frozen=True)
class MCEvaluation:
    problem: MCProblem
    variables: tuple
    equations: list  # sympy expressions, one per degree 2 basis element with a term
    gauge_generators: tuple
    regime: str
    pi0: GaugeOrbits = None
    tangent_dims: dict = field(default_factory=dict)

    @property
    def flag(self) -> str:
        return self.regime

    def satisfies(self, x: dict) -> bool:
        subs = {sympy.Symbol(v): QQ.to_sympy(x.get(v, ZERO)) for v in self.variables}
        return all(sympy.simplify(e.subs(subs)) == 0 for e in self.equations)


def mc_set(L: DgLieAlgebra, B: FiniteCdga) -> MCEvaluation:
    """
    The MC equation dx + 1/2 [x,x] = 0 on (m (x) L)^1 with its gauge
    generators; orbits are computed when the problem is affine-linear.
    """
    prob = mc_problem(L, B)
    N = prob.tensor
    v1, v0 = N.space.labels(1), N.space.labels(0)
    syms = {t: sympy.Symbol(t) for t in v1}
    exprs = {z: sympy.Integer(0) for z in N.space.labels(2)}
    quadratic = False
    for t in v1:
        for z, c in N.d({t: ONE}).items():
            exprs[z] += QQ.to_sympy(c) * syms[t]
    half = sympy.Rational(1, 2)
    for t in v1:
        for u in v1:
            for z, c in N.bracket_basis(t, u).items():
                exprs[z] += half * QQ.to_sympy(c) * syms[t] * syms[u]
                quadratic = True
    equations = [e for e in (sympy.expand(e) for e in exprs.values()) if e != 0]
    gauge_nonlinear = any(N.bracket_basis(a, t) for a in v0 for t in v1)
    regime = NONLINEAR if quadratic or gauge_nonlinear else AFFINE

    h = graded.homology(N.complex)
    tangent = {d: h.dim(d) for d in (0, 1, 2)}
    pi0 = GaugeOrbits(N, h) if regime == AFFINE else None
    LOGGER.info(
        "MC of %s over %s: %d variables, %d equations, %s",
        L.name, B.name, len(v1), len(equations), regime,
    )
    return MCEvaluation(prob, tuple(v1), equations, tuple(v0), regime, pi0, tangent)


def gauge_check(ev: MCEvaluation, seed: int = 0, trials: int = 8) -> bool:
    """
    Random MC elements keep their orbit under x -> x - d(lambda).
    """
    if ev.pi0 is None:
        raise VerdictError("gauge census is only available in the affine-linear regime", module="moduli")
    N = ev.problem.tensor
    rng = random.Random(seed)
    cycles, _ = linalg.nullspace(N.complex.d(1))
    for _ in range(trials):
        x = {}
        for z in cycles:
            axpy(x, N.space.combo(1, z), linalg.q(rng.randint(-3, 3)))
        lam = {t: linalg.q(rng.randint(-3, 3)) for t in N.space.labels(0)}
        moved = dict(x)
        axpy(moved, N.d(lam), -ONE)
        if not ev.satisfies(x) or not ev.satisfies(moved):
            return False
        if ev.pi0.classify(x) != ev.pi0.classify(moved):
            return False
    return True


@dataclass(frozen=True)
class InvarianceReport:
    ok: bool
    before: dict
    after: dict


def census_invariance(L: DgLieAlgebra, B: FiniteCdga, seed: int = 0) -> InvarianceReport:
    """
    The orbit census of L and of L written in a random basis agree.
    """
    a, b = mc_set(L, B), mc_set(transport(L, seed), B)

    def census(ev):
        return {
            "regime": ev.regime,
            "pi0": ev.pi0.dimension if ev.pi0 else None,
            "tangent": dict(ev.tangent_dims),
        }

    before, after = census(a), census(b)
    return InvarianceReport(before == after, before, after)


@dataclass(frozen=True)
class TangentReport:
    n: int
    dimension: int
    expected: int
    regime: str

    @property
    def agree(self) -> bool:
        return self.dimension == self.expected


def mc_tangent(L: DgLieAlgebra, n: int) -> TangentReport:
    """
    pi0 of MC over Q + Q.eps_n against H^{n+1}(L).
    """
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}", module="moduli")
    ev = mc_set(L, dual_numbers(n).algebra)
    expected = graded.homology(L.complex).dim(n + 1)
    dim = ev.pi0.dimension if ev.pi0 is not None else None
    LOGGER.info("tangent of %s at n=%d: %s (H^%d = %d)", L.name, n, dim, n + 1, expected)
    return TangentReport(n, dim, expected, ev.regime)


@dataclass(frozen=True)
class SchlessingerReport:
    n: int
    fiber_product: FiniteCdga
    lhs: int
    rhs: int
    flag: str
    sides: dict = field(default_factory=dict)

    @property
    def agree(self):
        if self.flag != AFFINE:
            return None
        return self.lhs == self.rhs


def _default_eps_map(B: FiniteCdga, D: FiniteCdga) -> CdgaMorphism:
    if not set(B.labels()) <= set(D.labels()):
        raise InputError(
            f"schlessinger needs a map {B.name} -> {D.name}; give epsilon_map in the input",
            module="moduli",
        )
    return CdgaMorphism(B, D, {l: {l: ONE} for l in B.labels()})


def _surjective_on_ideal(p: CdgaMorphism) -> bool:
    B, D = p.source, p.target
    for k in D.space.degrees():
        want = [l for l in D.space.labels(k) if l != D.unit]
        if not want:
            continue
        cols = []
        for l in B.space.labels(k):
            if l == B.unit:
                continue
            img = p.image(l)
            cols.append([img.get(w, ZERO) for w in want])
        if not cols or linalg.rank(linalg.from_columns(cols, len(want))) < len(want):
            return False
    return True


def schlessinger_check(L: DgLieAlgebra, B: FiniteCdga, n: int, eps_map=None) -> SchlessingerReport:
    """
    Compares pi0 of MC over B x_{Q[eps_n]} Q with the homotopy fiber of
    X(B) -> X(Q[eps_n]) over the base point, i.e. H^1 of cone(f)[-1] for
    f: m_B (x) L -> m_D (x) L.
    """
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}", module="moduli")
    require_artinian(B)
    D = dual_numbers(n).algebra
    if eps_map is None:
        p = _default_eps_map(B, D)
    elif isinstance(eps_map, CdgaMorphism):
        p = eps_map
    else:
        p = CdgaMorphism(B, D, eps_map)
    P = fiber_product(p, unit_map(D), name=f"{B.name}x_ε{n}Q").algebra

    ev_b, ev_d, ev_p = mc_set(L, B), mc_set(L, D), mc_set(L, P)
    sides = {
        "B": ev_b.pi0.dimension if ev_b.pi0 else None,
        "eps": ev_d.pi0.dimension if ev_d.pi0 else None,
    }
    if any(ev.regime != AFFINE for ev in (ev_b, ev_d, ev_p)):
        LOGGER.warning("schlessinger check refused for %s over %s: nonlinear", L.name, B.name)
        return SchlessingerReport(n, P, None, None, NONLINEAR, sides)
    if not _surjective_on_ideal(p):
        return SchlessingerReport(n, P, None, None, "non-surjective", sides)

    NB, ND = ev_b.problem.tensor, ev_d.problem.tensor

    def fn(k, label):
        b, _, x = label.partition("⊗")
        out = {}
        for b2, c in p.image(b).items():
            if b2 != D.unit:
                axpy(out, {tensor_label(b2, x): c})
        return out

    f = GradedMap.from_function(NB.space, ND.space, 0, fn)
    if not graded.is_chain_map(f, NB.complex, ND.complex):
        raise VerdictError("structural mismatch: induced map on m (x) L is not a chain map", module="moduli")
    fib = graded.shift(graded.cone(f, NB.complex, ND.complex).complex, -1)
    rhs = graded.homology(fib).dim(1)
    lhs = ev_p.pi0.dimension
    LOGGER.info("schlessinger %s over %s at n=%d: %d vs %d", L.name, B.name, n, lhs, rhs)
    return SchlessingerReport(n, P, lhs, rhs, AFFINE, sides)


@dataclass(frozen=True)
class UnitCheck:
    lie: DgLieAlgebra
    max_weight: int
    depth: int
    flag: str
    degrees: dict  # degree -> (dim H(L), dim H(DCL))
    cells: dict  # degree -> number of cells
    stabilized_at: int
    top: int

    @property
    def window(self):
        return (1, self.top)

    @property
    def ok(self) -> bool:
        return all(a == b for a, b in self.degrees.values())


def unit_check(L: DgLieAlgebra, max_weight: int, depth: int, accept_truncated=False) -> UnitCheck:
    """
    C(L) truncated at max_weight, resolved cellularly to depth; the dual of
    the shifted cotangent fiber is compared with L in homology.

    The truncated C(L) agrees with the whole one above the lowest degree
    -e of a monomial it leaves out, so the cells it adds to kill those sit
    in degree -e-1 and show up in L-degree e+2. Degrees are compared up to
    e+1 only.
    """
    report = very_good_check(L)
    if not report.ok:
        raise InputError(f"unit check needs generators in degrees >= 1: {report.first()}", module="moduli")
    cochains = ce_cohomological(L, max_weight)
    if not cochains.chains.exact and not accept_truncated:
        raise TruncationError(
            f"C({L.name}) is {cochains.flag}; pass --accept-truncated to compare in the certified window",
            module="moduli",
        )
    B = cochains.to_cdga()
    tower = cellular_resolve(B, depth)
    fiber = cotangent_fiber(tower)
    dcl = graded.dual(graded.shift(fiber, 1))
    hl, hd = graded.homology(L.complex), graded.homology(dcl)
    top = min(depth, max_weight)
    cut = cochains.chains.cut_degree
    if cut is not None:
        top = min(top, cut + 1)
    degrees = {k: (hl.dim(k), hd.dim(k)) for k in range(1, top + 1)}
    out = UnitCheck(
        L, max_weight, depth, cochains.flag, degrees, tower.cell_counts(), tower.stabilized_at, top
    )
    LOGGER.info("unit check for %s in degrees 1..%d: %s", L.name, top, "ok" if out.ok else "failed")
    return out
