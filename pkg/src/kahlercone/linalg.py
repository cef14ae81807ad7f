"""Small dense linear algebra over generic fields.

Matrices are lists of row lists. Entries may be ``GaussQ``, ``complex`` or
``Jet2`` over either; elimination picks pivots by the value part of an entry,
which is the correct rule in the local ring of jets. Zero entries are skipped
in products, so block-sparse operators stay cheap.
"""

from __future__ import annotations

from .jet import Jet2, value_part


class SingularMatrixError(ArithmeticError):
    pass


def zeros(m: int, n: int) -> list[list]:
    return [[0] * n for _ in range(m)]


def identity(n: int, one=1) -> list[list]:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = one
    return out


def shape(a) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def copy(a) -> list[list]:
    return [list(row) for row in a]


def matmul(a, b) -> list[list]:
    m = len(a)
    n = len(b[0]) if b else 0
    out = [[0] * n for _ in range(m)]
    for i in range(m):
        row = out[i]
        for k, aik in enumerate(a[i]):
            if not aik:
                continue
            for j, bkj in enumerate(b[k]):
                if bkj:
                    row[j] = row[j] + aik * bkj
    return out


def matvec(a, x) -> list:
    out = [0] * len(a)
    for i, row in enumerate(a):
        acc = 0
        for aij, xj in zip(row, x):
            if aij and xj:
                acc = acc + aij * xj
        out[i] = acc
    return out


def add(a, b) -> list[list]:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a, b) -> list[list]:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(c, a) -> list[list]:
    return [[c * x if x else 0 for x in row] for row in a]


def commutator(a, b) -> list[list]:
    return sub(matmul(a, b), matmul(b, a))


def transpose(a) -> list[list]:
    return [list(col) for col in zip(*a)] if a else []


def conj(x):
    return x.conjugate() if hasattr(x, "conjugate") and not isinstance(x, int) else x


def conj_transpose(a) -> list[list]:
    return [[conj(x) for x in col] for col in zip(*a)] if a else []


def map_entries(f, a) -> list[list]:
    return [[f(x) for x in row] for row in a]


def submatrix(a, rows, cols) -> list[list]:
    return [[a[i][j] for j in cols] for i in rows]


def trace(a):
    acc = 0
    for i in range(len(a)):
        if a[i][i]:
            acc = acc + a[i][i]
    return acc


def is_zero(a) -> bool:
    return not any(x for row in a for x in row)


def max_abs(a) -> float:
    best = 0.0
    for row in a:
        for x in row:
            if x:
                best = max(best, abs(x))
    return best


def _weight(x) -> float:
    v = value_part(x)
    if not v:
        return 0.0
    if isinstance(v, (complex, float)):
        return abs(v)
    return 1.0


def _eliminate(a, *, max_pivots=None, tol=0.0):
    """In-place reduced row echelon form with complete pivoting.

    Returns the list of (row, col) pivots. For exact entries the first entry
    with a nonzero value part is taken; for floats the largest one.
    """
    m, n = shape(a)
    pivots = []
    free_rows = list(range(m))
    free_cols = list(range(n))
    limit = min(m, n) if max_pivots is None else max_pivots
    while len(pivots) < limit:
        w, pi, pj = _pick(a, free_rows, free_cols)
        if pi is None or w <= tol:
            break
        prow = a[pi]
        inv = 1 / prow[pj]
        a[pi] = prow = [x * inv if x else 0 for x in prow]
        for i in range(m):
            if i == pi:
                continue
            f = a[i][pj]
            if not f:
                continue
            a[i] = [x - f * y if y else x for x, y in zip(a[i], prow)]
        pivots.append((pi, pj))
        free_rows.remove(pi)
        free_cols.remove(pj)
    return pivots


def _pick(a, rows, cols):
    best = (0.0, None, None)
    for i in rows:
        row = a[i]
        for j in cols:
            v = value_part(row[j])
            if not v:
                continue
            if not isinstance(v, (complex, float)):
                return (1.0, i, j)
            w = abs(v)
            if w > best[0]:
                best = (w, i, j)
    return best


def rank(a, tol: float | None = None) -> int:
    if not a or not a[0]:
        return 0
    work = copy(a)
    if tol is None:
        tol = _default_tol(a)
    return len(_eliminate(work, tol=tol))


def _default_tol(a) -> float:
    if any(isinstance(value_part(x), (complex, float)) for row in a for x in row):
        scale_ = max((abs(value_part(x)) for row in a for x in row), default=0.0)
        return 1e-10 * scale_
    return 0.0


def kernel(a, dim: int | None = None) -> list[list]:
    """Basis of the right kernel, returned as a list of column vectors.

    ``dim`` is the expected kernel dimension when known; it fixes the number
    of pivots (no float threshold involved).
    """
    m, n = shape(a)
    if m == 0:
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    work = copy(a)
    if dim is None:
        pivots = _eliminate(work, tol=_default_tol(a))
    else:
        pivots = _eliminate(work, max_pivots=n - dim)
        if len(pivots) != n - dim:
            raise SingularMatrixError("kernel dimension larger than expected")
    pivot_cols = {j: i for i, j in pivots}
    basis = []
    for f in range(n):
        if f in pivot_cols:
            continue
        v = [0] * n
        v[f] = 1
        for i, j in pivots:
            x = work[i][f]
            if x:
                v[j] = -x
        basis.append(v)
    return basis


def inverse(a) -> list[list]:
    n = len(a)
    if n == 0:
        return []
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    free_rows = list(range(n))
    pivot_row = [0] * n
    for col in range(n):
        w, bi, _ = _pick(aug, free_rows, [col])
        if bi is None:
            raise SingularMatrixError("matrix is singular")
        free_rows.remove(bi)
        pivot_row[col] = bi
        prow = aug[bi]
        inv = 1 / prow[col]
        aug[bi] = prow = [x * inv if x else 0 for x in prow]
        for i in range(n):
            if i == bi:
                continue
            f = aug[i][col]
            if not f:
                continue
            aug[i] = [x - f * y if y else x for x, y in zip(aug[i], prow)]
    return [aug[pivot_row[col]][n:] for col in range(n)]


def solve(a, b) -> list[list]:
    return matmul(inverse(a), b)


def block_diag_inverse(a, blocks) -> list[list]:
    """Inverse of a matrix that is block diagonal w.r.t. the index ``blocks``."""
    n = len(a)
    out = zeros(n, n)
    for idx in blocks:
        if not idx:
            continue
        sub_inv = inverse(submatrix(a, idx, idx))
        for r, i in enumerate(idx):
            for c, j in enumerate(idx):
                out[i][j] = sub_inv[r][c]
    return out


def determinant(a):
    n = len(a)
    work = copy(a)
    det = 1
    for col in range(n):
        piv = None
        for i in range(col, n):
            if _weight(work[i][col]) > 0:
                piv = i
                break
        if piv is None:
            return 0 * det
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            det = -det
        p = work[col][col]
        det = det * p
        inv = 1 / p
        for i in range(col + 1, n):
            f = work[i][col]
            if f:
                f = f * inv
                work[i] = [x - f * y if y else x for x, y in zip(work[i], work[col])]
    return det


def leading_minors(a) -> list:
    return [determinant(submatrix(a, range(k), range(k))) for k in range(1, len(a) + 1)]
