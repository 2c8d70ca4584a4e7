import csv
import hashlib
import io
import json
import logging
import time
from dataclasses import asdict, dataclass, field

import rich.box
import rich.console
import rich.table

from dgla import __version__, cdga, chevalley, graded, lie, moduli, parser
from dgla.config import C, FORMATS, parse_window
from dgla.errors import EXIT_OK, EXIT_VERDICT, InputError
from dgla.linalg import q_str

LOGGER = logging.getLogger(__name__)

COMMANDS = [
    "ce-homology",
    "ce-cohomology",
    "ce-coefficients",
    "pbw-check",
    "free-lie",
    "cellular-resolve",
    "cotangent-fiber",
    "mc",
    "mc-tangent",
    "schlessinger",
    "unit-check",
    "adjoint-derivation",
    "validate",
]


@dataclass
class JobSpec:
    command: str
    input: str
    rep: str = None
    algebra: str = None
    n: int = 1
    max_weight: int = None
    depth: int = None
    degree_window: str = None
    seed: int = None
    accept_truncated: bool = False
    output_format: str = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"Unknown command '{self.command}'", module="report")
        self.max_weight = C.max_weight if self.max_weight is None else self.max_weight
        self.depth = C.depth if self.depth is None else self.depth
        self.degree_window = self.degree_window or C.degree_window
        self.seed = C.seed if self.seed is None else self.seed
        self.output_format = self.output_format or C.output_format
        for name in ("max_weight", "depth", "n"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be positive, got {getattr(self, name)}", module="report")
        try:
            parse_window(self.degree_window)
        except ValueError as exc:
            raise InputError(str(exc), module="report")
        if self.output_format not in FORMATS:
            raise InputError(f"Unknown format '{self.output_format}'", module="report")

    def window(self):
        return parse_window(self.degree_window)

    def echo(self) -> dict:
        return asdict(self)


@dataclass
class Report:
    job: dict
    input_sha256: str
    result: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)  # name -> list of row dicts
    flags: list = field(default_factory=list)
    verdict: str = "n/a"
    elapsed_seconds: float = 0.0
    tool_version: str = __version__

    @property
    def exit_code(self) -> int:
        return EXIT_VERDICT if self.verdict == C.tr["verdict_fail"] else EXIT_OK

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        columns = []
        for rows in self.tables.values():
            for row in rows:
                for k in row:
                    if k not in columns:
                        columns.append(k)
        out = io.StringIO()
        w = csv.DictWriter(out, fieldnames=["table"] + columns, lineterminator="\n")
        w.writeheader()
        for name in sorted(self.tables):
            for row in self.tables[name]:
                w.writerow({"table": name, **row})
        return out.getvalue()

    def to_table(self, console: rich.console.Console = None):
        console = console or rich.console.Console()
        box = getattr(rich.box, C.table_style.upper(), rich.box.SIMPLE)
        for name in sorted(self.tables):
            rows = self.tables[name]
            t = rich.table.Table(title=name, box=box)
            columns = list(rows[0].keys()) if rows else []
            for col in columns:
                t.add_column(C.tr.get(f"col_{col}", col))
            for row in rows:
                t.add_row(*[str(row.get(col, "")) for col in columns])
            console.print(t)
        console.print(f"{self.job['command']}: {self.verdict} {' '.join(self.flags)}")

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        console = rich.console.Console(file=io.StringIO(), width=120)
        self.to_table(console)
        return console.file.getvalue()


def _in_window(job, d) -> bool:
    lo, hi = job.window()
    return lo <= d <= hi


def _dims_rows(job, space_dims: dict, homology_dims: dict) -> list:
    rows = []
    for d in sorted(set(space_dims) | set(homology_dims)):
        if _in_window(job, d):
            rows.append({"degree": d, "dim": space_dims.get(d, 0), "homology": homology_dims.get(d, 0)})
    return rows


def _verdict(ok: bool) -> str:
    return C.tr["verdict_pass"] if ok else C.tr["verdict_fail"]


class Inputs:
    """
    The job's input files, parsed lazily and hashed in the order read.
    """

    def __init__(self, job: JobSpec):
        self.job = job
        self.sha = hashlib.sha256()
        self.docs = {}

    def doc(self, path):
        if path not in self.docs:
            doc, raw = parser.load_json(path)
            self.sha.update(raw)
            self.docs[path] = doc
        return self.docs[path]

    def parsed(self, path, **kwargs):
        return parser.parse_document(self.doc(path), path, max_weight=self.job.max_weight, **kwargs)

    def lie_algebra(self) -> lie.DgLieAlgebra:
        obj = self.parsed(self.job.input)
        if isinstance(obj, lie.FreeLiePresentation):
            return obj.lie
        if not isinstance(obj, lie.DgLieAlgebra):
            raise InputError(f"{self.job.input}: expected a Lie algebra", module="report")
        return obj

    def algebra(self, path=None) -> cdga.FiniteCdga:
        path = path or self.job.algebra
        if path is None:
            raise InputError(f"{self.job.command} needs --algebra", module="report")
        obj = self.parsed(path)
        if isinstance(obj, cdga.SemiFreeCdga):
            cdga.require_artinian(obj)
            obj = obj.truncate(len(obj.generators))
        if not isinstance(obj, cdga.FiniteCdga):
            raise InputError(f"{path}: expected an algebra", module="report")
        return obj


def _ce_homology(job, inp):
    L = inp.lie_algebra()
    chains = chevalley.ce_homological(L, job.max_weight)
    h = graded.homology(chains.complex)
    rows = _dims_rows(job, chains.complex.space.dims(), h.dims())
    weights = [
        {"degree": d, "weight": w, "dim": n}
        for (d, w), n in sorted(chains.weight_dims().items())
        if _in_window(job, d)
    ]
    result = {"lie": L.name, "euler_characteristic": chains.complex.space.euler_characteristic()}
    return result, {"homology": rows, "weights": weights}, [chains.flag], "n/a"


def _ce_cohomology(job, inp):
    L = inp.lie_algebra()
    C_ = chevalley.ce_cohomological(L, job.max_weight)
    ring = chevalley.ce_cohomology_ring(C_)
    unit = chevalley.unit_class(C_, ring)
    rows = _dims_rows(job, C_.complex.space.dims(), ring.homology.dims())
    products = [
        {"left": a, "right": b, "value": " + ".join(f"{q_str(c)}*{k}" for k, c in sorted(v.items()))}
        for (a, b), v in sorted(ring.table.items())
        if unit not in (a, b)
    ]
    result = {
        "lie": L.name,
        "derivation_failures": len(C_.derivation_failures()),
        "square_zero": ring.is_square_zero(unit),
    }
    ok = result["derivation_failures"] == 0
    return result, {"cohomology": rows, "products": products}, [C_.flag], _verdict(ok)


def _ce_coefficients(job, inp):
    L = inp.lie_algebra()
    flags = []
    if job.rep:
        M = inp.parsed(job.rep, lie_algebra=L)
    else:
        M = lie.adjoint_rep(L)
        flags.append("adjoint")
    cc = chevalley.ce_with_coefficients(L, M, job.max_weight)
    h = graded.homology(cc.complex)
    rows = _dims_rows(job, cc.complex.space.dims(), h.dims())
    return {"lie": L.name}, {"cohomology": rows}, [cc.flag] + flags, "n/a"


def _pbw_check(job, inp):
    L = inp.lie_algebra()
    check = lie.pbw_map(L, job.max_weight)
    rows = [
        {"degree": d, "weight": k, "rank": r, "sym": s, "enveloping": u}
        for (d, k), (r, s, u) in sorted(check.blocks.items())
        if _in_window(job, d)
    ]
    result = {
        "lie": L.name,
        "bijective": check.bijective,
        "failures": [list(k) for k in check.failures()],
    }
    if check.bijective:
        result["summary"] = "bijective in all blocks"
    return result, {"pbw": rows}, [f"weight<={job.max_weight}"], _verdict(check.bijective)


def _free_lie(job, inp):
    doc = inp.doc(job.input)
    obj = parser.parse_document(doc, job.input, max_weight=job.max_weight)
    if not isinstance(obj, lie.FreeLiePresentation):
        raise InputError(f"{job.input}: free-lie needs kind 'free'", module="report")
    rows = [{"degree": d, "weight": w, "dim": n} for (d, w), n in sorted(obj.dims().items())]
    result = {
        "lie": obj.lie.name,
        "basis": {str(k): list(v) for k, v in sorted(obj.hall_basis.items())},
        "valid": lie.validate_lie(obj.lie, stop_at_first=True).ok,
    }
    return result, {"dims": rows}, [f"weight<={obj.max_weight}"], _verdict(result["valid"])


def _tower(job, inp):
    B = inp.algebra(job.input)
    return B, cdga.cellular_resolve(B, job.depth)


def _cellular_resolve(job, inp):
    B, tower = _tower(job, inp)
    cells = [
        {
            "label": c.label,
            "kind": c.kind,
            "degree": c.degree,
            "stage": c.stage,
            "relation": c.relation,
            "attaching": " + ".join(f"{q_str(v)}*{k}" for k, v in sorted(c.attaching.items())),
        }
        for c in tower.cells()
    ]
    certified = [
        {"stage": s.index, "degree": d, "status": st}
        for s in tower.stages
        for d, st in sorted(s.certified.items(), reverse=True)
    ]
    result = {
        "algebra": B.name,
        "nilpotency_order": tower.order,
        "length_bound": tower.bound,
        "stabilized_at": tower.stabilized_at,
        "cell_counts": {str(k): v for k, v in tower.cell_counts().items()},
        "window": list(tower.window()),
    }
    return result, {"cells": cells, "certified": certified}, [f"depth={job.depth}"], _verdict(True)


def _cotangent_fiber(job, inp):
    B, tower = _tower(job, inp)
    fiber = cdga.cotangent_fiber(tower)
    h = graded.homology(fiber)
    lo, hi = tower.window()
    rows = [r for r in _dims_rows(job, fiber.space.dims(), h.dims()) if lo <= r["degree"] <= hi]
    result = {"algebra": B.name, "window": [lo, hi]}
    return result, {"fiber": rows}, [f"depth={job.depth}"], "n/a"


def _mc(job, inp):
    L = inp.lie_algebra()
    B = inp.algebra()
    ev = moduli.mc_set(L, B)
    result = {
        "lie": L.name,
        "algebra": B.name,
        "variables": list(ev.variables),
        "equations": sorted(str(e) for e in ev.equations),
        "gauge_generators": list(ev.gauge_generators),
        "tangent": {str(k): v for k, v in sorted(ev.tangent_dims.items())},
    }
    if ev.pi0 is not None:
        result["pi0_dimension"] = ev.pi0.dimension
        result["gauge_consistent"] = moduli.gauge_check(ev, job.seed)
        verdict = _verdict(result["gauge_consistent"])
    else:
        verdict = "n/a"
    return result, {}, [ev.regime], verdict


def _mc_tangent(job, inp):
    L = inp.lie_algebra()
    t = moduli.mc_tangent(L, job.n)
    result = {"lie": L.name, "n": t.n, "dimension": t.dimension, "expected": t.expected}
    return result, {}, [t.regime], _verdict(t.agree)


def _schlessinger(job, inp):
    L = inp.lie_algebra()
    B = inp.algebra()
    D = cdga.dual_numbers(job.n).algebra
    eps = parser.parse_epsilon_map(inp.doc(job.algebra), B, D, job.algebra)
    r = moduli.schlessinger_check(L, B, job.n, eps)
    result = {
        "lie": L.name,
        "algebra": B.name,
        "fiber_product": r.fiber_product.name,
        "fiber_product_dim": r.fiber_product.dim(),
        "lhs": r.lhs,
        "rhs": r.rhs,
        "sides": r.sides,
    }
    verdict = "n/a" if r.agree is None else _verdict(r.agree)
    return result, {}, [r.flag], verdict


def _unit_check(job, inp):
    L = inp.lie_algebra()
    u = moduli.unit_check(L, job.max_weight, job.depth, job.accept_truncated)
    rows = [{"degree": k, "lie": a, "dcl": b} for k, (a, b) in sorted(u.degrees.items())]
    result = {
        "lie": L.name,
        "window": list(u.window),
        "cells": {str(k): v for k, v in u.cells.items()},
        "stabilized_at": u.stabilized_at,
    }
    return result, {"unit": rows}, [u.flag], _verdict(u.ok)


def _adjoint_derivation(job, inp):
    L = inp.lie_algebra()
    ad = chevalley.adjoint_derivation(lie.LieMorphism.identity(L), job.max_weight)
    failures = chevalley.derivation_failures(ad)
    result = {
        "lie": L.name,
        "chain_map": ad.is_chain_map,
        "derivation_failures": [list(p) for p in failures],
    }
    rows = _dims_rows(job, ad.source.space.dims(), {})
    return result, {"source": rows}, [ad.chains.flag], _verdict(ad.is_chain_map and not failures)


def _validate(job, inp):
    doc = inp.doc(job.input)
    if isinstance(doc, dict) and doc.get("kind") == "rep":
        raise InputError("validate a representation with --in <lie> --rep <file>", module="report")
    obj = inp.parsed(job.input)
    result = {"kind": doc["kind"]}
    flags = []
    if isinstance(obj, lie.FreeLiePresentation):
        obj = obj.lie
    if isinstance(obj, lie.DgLieAlgebra):
        result["dims"] = {str(k): v for k, v in obj.space.dims().items()}
        result["very_good"] = cdga.very_good_check(obj).ok
    elif isinstance(obj, cdga.FiniteCdga):
        cert = cdga.is_artinian(obj)
        result["dims"] = {str(k): v for k, v in obj.space.dims().items()}
        result["artinian"] = cert.artinian
        if cert.artinian:
            result["nilpotency_order"] = cert.order
    elif isinstance(obj, cdga.SemiFreeCdga):
        result["generators"] = [list(g) for g in obj.generators]
    if job.rep:
        M = inp.parsed(job.rep, lie_algebra=obj)
        result["module_dims"] = {str(k): v for k, v in M.module.space.dims().items()}
    return result, {}, flags, _verdict(True)


DISPATCH = {
    "ce-homology": _ce_homology,
    "ce-cohomology": _ce_cohomology,
    "ce-coefficients": _ce_coefficients,
    "pbw-check": _pbw_check,
    "free-lie": _free_lie,
    "cellular-resolve": _cellular_resolve,
    "cotangent-fiber": _cotangent_fiber,
    "mc": _mc,
    "mc-tangent": _mc_tangent,
    "schlessinger": _schlessinger,
    "unit-check": _unit_check,
    "adjoint-derivation": _adjoint_derivation,
    "validate": _validate,
}


def run(job: JobSpec) -> Report:
    start = time.monotonic()
    LOGGER.info("running %s on %s", job.command, job.input)
    inp = Inputs(job)
    result, tables, flags, verdict = DISPATCH[job.command](job, inp)
    report = Report(
        job=job.echo(),
        input_sha256=inp.sha.hexdigest(),
        result=result,
        tables=tables,
        flags=flags,
        verdict=verdict,
        elapsed_seconds=round(time.monotonic() - start, 3),
    )
    LOGGER.info("%s finished: %s in %.3fs", job.command, verdict, report.elapsed_seconds)
    return report
