"""
Exact linear algebra over QQ.

Everything here is a thin layer over sympy's DomainMatrix so that the rest of
the package never has to think about empty shapes or pivot bookkeeping.
Vectors are plain lists of QQ elements.
"""
import logging

from sympy import QQ, Rational
from sympy.polys.matrices import DomainMatrix

LOGGER = logging.getLogger(__name__)

ZERO = QQ(0)
ONE = QQ(1)


def q(value):
    """
    Coerce ints, "p/q" strings and rationals into QQ.
    """
    if isinstance(value, str):
        text = value.strip()
        if text == "":
            raise ValueError("Empty rational literal")
        if "." in text or "e" in text.lower():
            raise ValueError(f"Not an exact rational: '{value}'")
        return QQ.from_sympy(Rational(text))
    if isinstance(value, float):
        raise ValueError(f"Floating point coefficient rejected: {value!r}")
    return QQ.convert(value)


def q_str(value) -> str:
    return str(QQ.convert(value))


def sign(exponent: int):
    return ONE if exponent % 2 == 0 else -ONE


def axpy(acc: dict, combo: dict, c=ONE) -> dict:
    """
    acc += c * combo for sparse {key: coeff} combinations, in place.
    """
    for k, v in combo.items():
        nv = acc.get(k, ZERO) + c * v
        if nv == 0:
            acc.pop(k, None)
        else:
            acc[k] = nv
    return acc


def zeros(rows: int, cols: int) -> DomainMatrix:
    return DomainMatrix.zeros((rows, cols), QQ)


def identity(n: int) -> DomainMatrix:
    if n == 0:
        return zeros(0, 0)
    return DomainMatrix.eye(n, QQ).to_sparse()


def from_entries(entries: dict, rows: int, cols: int) -> DomainMatrix:
    """
    Build a sparse matrix from {(row, col): value}; zero values are dropped.
    """
    dod = {}
    for (i, j), v in entries.items():
        v = q(v)
        if v == 0:
            continue
        if not (0 <= i < rows and 0 <= j < cols):
            raise ValueError(f"Entry ({i}, {j}) outside shape ({rows}, {cols})")
        dod.setdefault(i, {})[j] = v
    return DomainMatrix.from_dod(dod, (rows, cols), QQ)


def from_columns(columns: list, length: int) -> DomainMatrix:
    entries = {}
    for j, col in enumerate(columns):
        for i, v in enumerate(col):
            if v != 0:
                entries[(i, j)] = v
    return from_entries(entries, length, len(columns))


def from_rows(rows: list, width: int) -> DomainMatrix:
    entries = {}
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v != 0:
                entries[(i, j)] = v
    return from_entries(entries, len(rows), width)


def entries(m: DomainMatrix) -> dict:
    return {(i, j): v for (i, j), v in m.to_dok().items() if v != 0}


def column(m: DomainMatrix, j: int) -> list:
    rows, _ = m.shape
    out = [ZERO] * rows
    for (i, jj), v in m.to_dok().items():
        if jj == j:
            out[i] = v
    return out


def columns(m: DomainMatrix) -> list:
    rows, cols = m.shape
    out = [[ZERO] * rows for _ in range(cols)]
    for (i, j), v in m.to_dok().items():
        out[j][i] = v
    return out


def is_zero(m: DomainMatrix) -> bool:
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return True
    return m.is_zero_matrix


def equal(a: DomainMatrix, b: DomainMatrix) -> bool:
    if a.shape != b.shape:
        return False
    return entries(a) == entries(b)


def matmul(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"Shape mismatch: {a.shape} x {b.shape}")
    if a.shape[0] == 0 or b.shape[1] == 0 or a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return a.to_sparse().matmul(b.to_sparse())


def add(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    if a.shape != b.shape:
        raise ValueError(f"Shape mismatch: {a.shape} + {b.shape}")
    if a.shape[0] == 0 or a.shape[1] == 0:
        return zeros(*a.shape)
    return a.to_sparse() + b.to_sparse()


def scale(a: DomainMatrix, c) -> DomainMatrix:
    c = q(c)
    if a.shape[0] == 0 or a.shape[1] == 0 or c == 0:
        return zeros(*a.shape)
    return from_entries({k: v * c for k, v in entries(a).items()}, *a.shape)


def transpose(a: DomainMatrix) -> DomainMatrix:
    rows, cols = a.shape
    return from_entries({(j, i): v for (i, j), v in entries(a).items()}, cols, rows)


def apply(a: DomainMatrix, vector: list) -> list:
    rows, cols = a.shape
    if len(vector) != cols:
        raise ValueError(f"Vector of length {len(vector)} for matrix {a.shape}")
    out = [ZERO] * rows
    for (i, j), v in a.to_dok().items():
        if vector[j] != 0:
            out[i] += v * vector[j]
    return out


def rref(a: DomainMatrix):
    """
    Reduced row echelon form over QQ, computed fraction free with
    rref_den and normalised afterwards. Returns (rows as lists, pivots).
    """
    rows, cols = a.shape
    if rows == 0 or cols == 0 or is_zero(a):
        return [], ()
    reduced, den, pivots = a.to_sparse().rref_den()
    den = QQ.convert(den)
    out = []
    dense = reduced.to_field().to_list()
    for r in range(len(pivots)):
        out.append([QQ.convert(v) / den for v in dense[r]])
    return out, tuple(pivots)


def rank(a: DomainMatrix) -> int:
    return len(rref(a)[1])


def nullspace(a: DomainMatrix):
    """
    Kernel basis of a (as column vectors). Returns (basis, free_columns);
    basis vector k carries a 1 at free_columns[k] and zeros at the other
    free columns.
    """
    rows, cols = a.shape
    reduced, pivots = rref(a)
    pivot_set = set(pivots)
    free = [j for j in range(cols) if j not in pivot_set]
    basis = []
    for f in free:
        v = [ZERO] * cols
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -reduced[r][f]
        basis.append(v)
    return basis, free


def solve(a: DomainMatrix, b: list):
    """
    One solution x of a x = b, or None when b is not in the column space.
    """
    rows, cols = a.shape
    if len(b) != rows:
        raise ValueError(f"Right hand side of length {len(b)} for {a.shape}")
    if all(v == 0 for v in b):
        return [ZERO] * cols
    if cols == 0:
        return None
    aug = dict(entries(a))
    for i, v in enumerate(b):
        if v != 0:
            aug[(i, cols)] = v
    reduced, pivots = rref(from_entries(aug, rows, cols + 1))
    if cols in pivots:
        return None
    x = [ZERO] * cols
    for r, p in enumerate(pivots):
        x[p] = reduced[r][cols]
    return x


def independent_columns(vectors: list, length: int) -> list:
    """
    Indices of the columns that raise the rank when scanned left to right.
    """
    if not vectors:
        return []
    return list(rref(from_columns(vectors, length))[1])


def complement(subspace: list, candidates: list, length: int) -> list:
    """
    Indices into candidates of vectors extending a basis of span(subspace)
    to span(subspace + candidates). Choices follow echelon order.
    """
    pivots = independent_columns(list(subspace) + list(candidates), length)
    offset = len(subspace)
    return [p - offset for p in pivots if p >= offset]


def coordinates(basis: list, vector: list, length: int):
    """
    Coordinates of vector in the (independent) list basis, or None.
    """
    if not basis:
        return [] if all(v == 0 for v in vector) else None
    return solve(from_columns(basis, length), vector)
