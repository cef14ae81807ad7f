"""Finite-dimensional bigraded commutative algebras (cohomology rings).

An algebra is stored by structure constants in a basis grouped by bidegree.
All constants are exact Gaussian rationals; the float mode of the downstream
modules converts on the fly.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from pathlib import Path

from . import linalg
from .scalars import GaussQ, I, parse_rational

Bidegree = tuple[int, int]


class AlgebraError(ValueError):
    """An algebra violates one of the structural invariants.

    ``invariant`` names the failed check so callers (and the loader) can
    report precisely what went wrong.
    """

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        self.detail = detail
        super().__init__(f"{invariant}: {detail}" if detail else invariant)


@dataclass(frozen=True, eq=False)
class GradedAlgebra:
    n: int
    bidegrees: tuple[Bidegree, ...]
    labels: tuple[str, ...]
    degree_of: tuple[Bidegree, ...]
    cup_table: dict  # (i, j) -> {k: GaussQ}
    conj_matrix: list  # column a holds conj(b_a)
    top_integral: GaussQ  # integral of the H^{n,n} generator
    e_basis: tuple[tuple, ...]  # coordinates in the H^{1,1} basis
    sample_point: tuple[Fraction, ...]
    name: str = "algebra"
    _cache: dict = field(default_factory=dict, repr=False)

    # basic bookkeeping ------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def N(self) -> int:
        return len(self.e_basis)

    def dims(self) -> dict[Bidegree, int]:
        out = {(p, q): 0 for p in range(self.n + 1) for q in range(self.n + 1)}
        for d in self.degree_of:
            out[d] += 1
        return out

    def indices(self, p: int, q: int) -> list[int]:
        key = ("idx", p, q)
        if key not in self._cache:
            self._cache[key] = [i for i, d in enumerate(self.degree_of) if d == (p, q)]
        return self._cache[key]

    def indices_of_degree(self, k: int) -> list[int]:
        return [i for i, (p, q) in enumerate(self.degree_of) if p + q == k]

    @property
    def unit_index(self) -> int:
        return self.indices(0, 0)[0]

    @property
    def top_index(self) -> int:
        return self.indices(self.n, self.n)[0]

    def block_indices(self) -> list[list[int]]:
        return [self.indices(p, q) for p, q in self.bidegrees]

    # ring structure -----------------------------------------------------------
    def left_mult(self, j: int):
        """Sparse action of ``b_j * (.)``: list of (i, k, c) with b_j b_i = c b_k + ..."""
        key = ("left", j)
        if key not in self._cache:
            rows = []
            for i in range(self.rank):
                for k, c in self.cup_table.get((j, i), {}).items():
                    rows.append((i, k, c))
            self._cache[key] = rows
        return self._cache[key]

    def mult_matrix(self, vec, convert=None) -> list[list]:
        """Matrix of ``u -> v*u`` for the class with coordinates ``vec``."""
        m = linalg.zeros(self.rank, self.rank)
        for j, vj in enumerate(vec):
            if not vj:
                continue
            for i, k, c in self.left_mult(j):
                cc = convert(c) if convert else c
                m[k][i] = m[k][i] + vj * cc
        return m

    def product_vec(self, u, v) -> list:
        out = [0] * self.rank
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                for k, c in self.cup_table.get((i, j), {}).items():
                    out[k] = out[k] + ui * vj * c
        return out

    def conj_vec(self, u) -> list:
        ubar = [linalg.conj(x) for x in u]
        return linalg.matvec(self.conj_matrix, ubar)

    def e_vector(self, j: int) -> list:
        """Full-length coordinates of the real class e_j."""
        key = ("e", j)
        if key not in self._cache:
            v = [0] * self.rank
            for idx, c in zip(self.indices(1, 1), self.e_basis[j]):
                v[idx] = GaussQ.coerce(c)
            self._cache[key] = v
        return self._cache[key]

    def poincare_matrix(self) -> list[list]:
        """P[a][b] = integral(b_a * b_b)."""
        key = ("poincare",)
        if key not in self._cache:
            top = self.top_index
            p = linalg.zeros(self.rank, self.rank)
            for (i, j), row in self.cup_table.items():
                c = row.get(top)
                if c:
                    p[i][j] = c * self.top_integral
            self._cache[key] = p
        return self._cache[key]

    def unit(self) -> CohomClass:
        v = [0] * self.rank
        v[self.unit_index] = GaussQ(1)
        return CohomClass(self, v)

    def basis_class(self, label_or_index) -> CohomClass:
        i = label_or_index if isinstance(label_or_index, int) else self.labels.index(label_or_index)
        v = [0] * self.rank
        v[i] = GaussQ(1)
        return CohomClass(self, v)

    def e_class(self, j: int) -> CohomClass:
        return CohomClass(self, list(self.e_vector(j)))

    def omega_class(self, t) -> CohomClass:
        v = [0] * self.rank
        for j, tj in enumerate(t):
            for i, c in enumerate(self.e_vector(j)):
                if c:
                    v[i] = v[i] + c * GaussQ.coerce(tj)
        return CohomClass(self, v)


@dataclass(frozen=True, eq=False)
class CohomClass:
    algebra: GradedAlgebra
    coeffs: list

    def __add__(self, other: CohomClass) -> CohomClass:
        _same(self, other)
        return CohomClass(self.algebra, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: CohomClass) -> CohomClass:
        _same(self, other)
        return CohomClass(self.algebra, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> CohomClass:
        return CohomClass(self.algebra, [-a for a in self.coeffs])

    def __mul__(self, c) -> CohomClass:
        if isinstance(c, CohomClass):
            return cup(self, c)
        return CohomClass(self.algebra, [c * a if a else 0 for a in self.coeffs])

    def __rmul__(self, c) -> CohomClass:
        return CohomClass(self.algebra, [c * a if a else 0 for a in self.coeffs])

    def __truediv__(self, c) -> CohomClass:
        return CohomClass(self.algebra, [a / c if a else 0 for a in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, CohomClass) or other.algebra is not self.algebra:
            return NotImplemented
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support(self) -> set[Bidegree]:
        return {self.algebra.degree_of[i] for i, c in enumerate(self.coeffs) if c}

    def bidegree(self) -> Bidegree:
        """Bidegree of a nonzero homogeneous class."""
        s = self.support()
        if len(s) != 1:
            raise ValueError(f"class is not homogeneous (support {sorted(s)})")
        return next(iter(s))

    def component(self, p: int, q: int) -> CohomClass:
        keep = set(self.algebra.indices(p, q))
        return CohomClass(self.algebra, [c if i in keep else 0 for i, c in enumerate(self.coeffs)])

    def __repr__(self):
        terms = [f"({c})*{lab}" for c, lab in zip(self.coeffs, self.algebra.labels) if c]
        return " + ".join(terms) if terms else "0"


def _same(u: CohomClass, v: CohomClass) -> None:
    if u.algebra is not v.algebra:
        raise ValueError("classes belong to different algebras")


def cup(u: CohomClass, v: CohomClass) -> CohomClass:
    _same(u, v)
    return CohomClass(u.algebra, u.algebra.product_vec(u.coeffs, v.coeffs))


def integrate(u: CohomClass):
    alg = u.algebra
    top = alg.top_index
    for i, c in enumerate(u.coeffs):
        if c and i != top:
            raise ValueError(f"integrate expects a class in H^({alg.n},{alg.n}); "
                             f"found component in {alg.degree_of[i]}")
    c = u.coeffs[top]
    return c * alg.top_integral if c else GaussQ(0)


def conjugate(u: CohomClass) -> CohomClass:
    return CohomClass(u.algebra, u.algebra.conj_vec(u.coeffs))


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------

def _group_by_bidegree(n, items):
    """Sort (bidegree, payload) pairs into the canonical bidegree order."""
    return sorted(items, key=lambda it: (it[0][0] + it[0][1], -it[0][0]))


def make_algebra(n, basis, products, conj_images, top_integral, e_basis, sample_point,
                 name="algebra", validate=True) -> GradedAlgebra:
    """Assemble an algebra from per-element data.

    ``basis`` is a list of (label, (p, q)); ``products`` maps (i, j) to {k: c};
    ``conj_images`` maps i to {k: c}. Elements are reordered so that each
    bidegree occupies a contiguous index range.
    """
    order = sorted(range(len(basis)),
                   key=lambda i: (sum(basis[i][1]), -basis[i][1][0], i))
    new_of = {old: new for new, old in enumerate(order)}
    labels = tuple(basis[i][0] for i in order)
    degree_of = tuple(tuple(basis[i][1]) for i in order)
    table = {}
    for (i, j), row in products.items():
        clean = {new_of[k]: GaussQ.coerce(c) for k, c in row.items() if c}
        if clean:
            table[(new_of[i], new_of[j])] = clean
    rank = len(order)
    conj_m = linalg.zeros(rank, rank)
    for i, row in conj_images.items():
        for k, c in row.items():
            if c:
                conj_m[new_of[k]][new_of[i]] = GaussQ.coerce(c)
    bidegrees = tuple(dict.fromkeys(degree_of))
    alg = GradedAlgebra(
        n=n,
        bidegrees=bidegrees,
        labels=labels,
        degree_of=degree_of,
        cup_table=table,
        conj_matrix=conj_m,
        top_integral=GaussQ.coerce(top_integral),
        e_basis=tuple(tuple(GaussQ.coerce(c) for c in e) for e in e_basis),
        sample_point=tuple(Fraction(x) for x in sample_point),
        name=name,
    )
    if validate:
        validate_algebra(alg)
    return alg


def _graded_sign(d1: Bidegree, d2: Bidegree) -> int:
    return -1 if (sum(d1) * sum(d2)) % 2 else 1


def validate_algebra(alg: GradedAlgebra) -> None:
    """Check every structural invariant exactly; raise AlgebraError on failure."""
    n = alg.n
    if n < 1:
        raise AlgebraError("dimension", f"n must be >= 1, got {n}")
    for p, q in alg.degree_of:
        if not (0 <= p <= n and 0 <= q <= n):
            raise AlgebraError("bidegree range", f"({p},{q}) outside 0..{n}")
    dims = alg.dims()
    if dims[(n, n)] != 1:
        raise AlgebraError("top degree not one-dimensional", f"h^{{n,n}} = {dims[(n, n)]}")
    if dims[(0, 0)] != 1:
        raise AlgebraError("unit", f"h^{{0,0}} = {dims[(0, 0)]}, expected 1")
    if not alg.top_integral:
        raise AlgebraError("integral", "integral vanishes on the top generator")
    rank = alg.rank
    deg = alg.degree_of

    for (i, j), row in alg.cup_table.items():
        target = (deg[i][0] + deg[j][0], deg[i][1] + deg[j][1])
        for k in row:
            if deg[k] != target:
                raise AlgebraError("bidegree additivity",
                                   f"{alg.labels[i]}*{alg.labels[j]} has a component "
                                   f"{alg.labels[k]} in {deg[k]}, expected {target}")

    u = alg.unit_index
    for i in range(rank):
        for prod in (alg.cup_table.get((u, i), {}), alg.cup_table.get((i, u), {})):
            if prod != {i: GaussQ(1)}:
                raise AlgebraError("unit", f"generator of H^(0,0) does not act as identity "
                                           f"on {alg.labels[i]}")

    for i in range(rank):
        for j in range(rank):
            a = alg.cup_table.get((i, j), {})
            b = alg.cup_table.get((j, i), {})
            s = _graded_sign(deg[i], deg[j])
            keys = set(a) | set(b)
            for k in keys:
                if a.get(k, GaussQ(0)) != s * b.get(k, GaussQ(0)):
                    raise AlgebraError("graded commutativity",
                                       f"({alg.labels[i]}, {alg.labels[j]})")

    basis_vec = [[GaussQ(1) if r == i else 0 for r in range(rank)] for i in range(rank)]
    for i, j, k in itertools.product(range(rank), repeat=3):
        if sum(map(sum, (deg[i], deg[j], deg[k]))) > 2 * n:
            continue
        left = alg.product_vec(alg.product_vec(basis_vec[i], basis_vec[j]), basis_vec[k])
        right = alg.product_vec(basis_vec[i], alg.product_vec(basis_vec[j], basis_vec[k]))
        if any(a != b for a, b in zip(left, right)):
            raise AlgebraError("associativity",
                               f"triple ({alg.labels[i]}, {alg.labels[j]}, {alg.labels[k]})")

    cm = alg.conj_matrix
    for a in range(rank):
        p, q = deg[a]
        for r in range(rank):
            if cm[r][a] and deg[r] != (q, p):
                raise AlgebraError("conjugation bidegree",
                                   f"conj({alg.labels[a]}) has a component in {deg[r]}")
    cc = linalg.matmul(cm, linalg.map_entries(linalg.conj, cm))
    if cc != linalg.identity(rank, GaussQ(1)) and not _eq_matrix(cc, linalg.identity(rank, 1)):
        raise AlgebraError("conjugation involution", "conj(conj(u)) != u")
    for i in range(rank):
        for j in range(rank):
            lhs = alg.conj_vec(alg.product_vec(basis_vec[i], basis_vec[j]))
            rhs = alg.product_vec(alg.conj_vec(basis_vec[i]), alg.conj_vec(basis_vec[j]))
            if any(x != y for x, y in zip(lhs, rhs)):
                raise AlgebraError("conjugation multiplicative",
                                   f"({alg.labels[i]}, {alg.labels[j]})")

    pm = alg.poincare_matrix()
    for k in range(0, 2 * n + 1):
        rows = alg.indices_of_degree(k)
        cols = alg.indices_of_degree(2 * n - k)
        if len(rows) != len(cols):
            raise AlgebraError("Poincare duality", f"dim H^{k} != dim H^{2 * n - k}")
        if rows and linalg.rank(linalg.submatrix(pm, rows, cols)) != len(rows):
            raise AlgebraError("Poincare duality", f"pairing degenerate on H^{k}")

    h11 = alg.indices(1, 1)
    if alg.N != len(h11):
        raise AlgebraError("e_basis", f"{alg.N} classes given but h^{{1,1}} = {len(h11)}")
    for j in range(alg.N):
        if len(alg.e_basis[j]) != len(h11):
            raise AlgebraError("e_basis", f"e_{j + 1} has wrong length")
        v = alg.e_vector(j)
        if any(x != y for x, y in zip(alg.conj_vec(v), v)):
            raise AlgebraError("e_basis real", f"e_{j + 1} is not a real class")
    if h11 and linalg.rank([list(e) for e in alg.e_basis]) != alg.N:
        raise AlgebraError("e_basis", "classes are linearly dependent")
    if len(alg.sample_point) != alg.N:
        raise AlgebraError("sample_point", f"expected {alg.N} coordinates")


def _eq_matrix(a, b) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def poincare_gram_ranks(alg: GradedAlgebra) -> dict[int, int]:
    pm = alg.poincare_matrix()
    out = {}
    for k in range(0, 2 * alg.n + 1):
        rows = alg.indices_of_degree(k)
        cols = alg.indices_of_degree(2 * alg.n - k)
        out[k] = linalg.rank(linalg.submatrix(pm, rows, cols)) if rows else 0
    return out


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

def projective_space(n: int) -> GradedAlgebra:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"projective_space needs n >= 1, got {n!r}")
    basis = [("1" if a == 0 else ("h" if a == 1 else f"h^{a}"), (a, a)) for a in range(n + 1)]
    products = {(a, b): {a + b: 1} for a in range(n + 1) for b in range(n + 1) if a + b <= n}
    conj = {a: {a: 1} for a in range(n + 1)}
    return make_algebra(n, basis, products, conj, 1, [[1]], [1], name=f"P{n}")


def product_of_projective_spaces(*ns: int) -> GradedAlgebra:
    """Tensor product ring of C[h_i]/(h_i^{n_i+1}); e_i is the hyperplane class h_i."""
    if not ns or any(not isinstance(k, int) or k < 1 for k in ns):
        raise ValueError(f"product_of_projective_spaces needs factors >= 1, got {ns!r}")
    if len(ns) == 1:
        return projective_space(ns[0])
    expos = sorted(itertools.product(*[range(k + 1) for k in ns]),
                   key=lambda e: (sum(e), [-a for a in e]))
    pos = {e: r for r, e in enumerate(expos)}

    def label(e):
        parts = [f"h{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a]
        return "*".join(parts) if parts else "1"

    basis = [(label(e), (sum(e), sum(e))) for e in expos]
    products = {}
    for e in expos:
        for f in expos:
            g = tuple(x + y for x, y in zip(e, f))
            if g in pos:
                products[(pos[e], pos[f])] = {pos[g]: 1}
    conj = {r: {r: 1} for r in range(len(expos))}
    m = len(ns)
    e_basis = [[1 if r == c else 0 for c in range(m)] for r in range(m)]
    name = "x".join(f"P{k}" for k in ns)
    return make_algebra(sum(ns), basis, products, conj, 1, e_basis, [1] * m, name=name)


def _sort_sign(seq) -> tuple[int, tuple]:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return sign, tuple(seq)


def torus(n: int) -> GradedAlgebra:
    """Cohomology of a complex n-torus: the bigraded exterior algebra.

    Generators dz_a (index a) and dzbar_a (index n+a). H^{1,1} uses a basis of
    real classes i dz_a dzbar_a and scaled real/imaginary parts of
    i dz_a dzbar_b, chosen so the all-ones point is Kahler. The top generator
    is prod_a (i dz_a dzbar_a), with integral 1.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"torus needs n >= 1, got {n!r}")
    gens = range(2 * n)
    monos = [tuple(s) for r in range(2 * n + 1) for s in itertools.combinations(gens, r)]
    pos = {m: r for r, m in enumerate(monos)}

    def bideg(m):
        p = sum(1 for g in m if g < n)
        return (p, len(m) - p)

    def label(m):
        if not m:
            return "1"
        return "".join(f"dz{g + 1}" if g < n else f"dzb{g - n + 1}" for g in m)

    products = {}
    for s in monos:
        for t in monos:
            if set(s) & set(t):
                continue
            sign, merged = _sort_sign(s + t)
            products[(pos[s], pos[t])] = {pos[merged]: sign}
    conj = {}
    for m in monos:
        image = [g + n if g < n else g - n for g in m]
        sign, merged = _sort_sign(image)
        conj[pos[m]] = {pos[merged]: sign}

    raw_basis = [(label(m), bideg(m)) for m in monos]
    # change of basis on H^{1,1} and H^{n,n}
    new_vectors = {}
    s = Fraction(1, 2 * (n - 1)) if n > 1 else Fraction(1)
    i_unit = I

    def f(a, b):  # i dz_a ^ dzbar_b
        return {pos[(a, n + b)]: i_unit}

    def lin(*terms):
        out = {}
        for c, vec in terms:
            for k, v in vec.items():
                out[k] = out.get(k, GaussQ(0)) + GaussQ.coerce(c) * v
        return out

    h11_new = []
    for a in range(n):
        h11_new.append((f"w{a + 1}{a + 1}", f(a, a)))
    for a in range(n):
        for b in range(a + 1, n):
            h11_new.append((f"x{a + 1}{b + 1}", lin((s, f(a, b)), (s, f(b, a)))))
            h11_new.append((f"y{a + 1}{b + 1}", lin((I * s, f(a, b)), (-I * s, f(b, a)))))
    sign_top, _ = _sort_sign([g for a in range(n) for g in (a, n + a)])
    top_mono = tuple(gens)
    top_vec = {pos[top_mono]: I ** n * sign_top}
    new_vectors[(1, 1)] = h11_new
    # for n = 1, H^{1,1} is the top degree and the volume form wins
    new_vectors[(n, n)] = [("vol", top_vec)]
    raw = _apply_basis_change(raw_basis, products, conj, new_vectors)
    basis, products2, conj2 = raw
    n11 = len([1 for _, d in basis if d == (1, 1)])
    e_basis = [[1 if r == c else 0 for c in range(n11)] for r in range(n11)]
    return make_algebra(n, basis, products2, conj2, 1, e_basis, [1] * n11, name=f"T{n}")


def _apply_basis_change(basis, products, conj, new_vectors):
    """Replace the basis of selected bidegrees by the given vectors.

    ``new_vectors`` maps a bidegree to a list of (label, {old_index: coeff}).
    Returns (basis, products, conj) in the new basis.
    """
    rank = len(basis)
    q = linalg.identity(rank, GaussQ(1))
    labels = [lab for lab, _ in basis]
    for bideg, vecs in new_vectors.items():
        olds = [i for i, (_, d) in enumerate(basis) if d == bideg]
        if len(olds) != len(vecs):
            raise ValueError(f"basis change for {bideg} has wrong size")
        for col, (lab, vec) in zip(olds, vecs):
            for r in range(rank):
                q[r][col] = 0
            for r, c in vec.items():
                q[r][col] = GaussQ.coerce(c)
            labels[col] = lab
    qinv = linalg.inverse(q)

    def old_prod(u, v):
        out = [0] * rank
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                for k, c in products.get((i, j), {}).items():
                    out[k] = out[k] + ui * vj * GaussQ.coerce(c)
        return out

    cols = [[q[r][c] for r in range(rank)] for c in range(rank)]
    new_products = {}
    for i in range(rank):
        for j in range(rank):
            w = old_prod(cols[i], cols[j])
            if not any(w):
                continue
            coords = linalg.matvec(qinv, w)
            new_products[(i, j)] = {k: c for k, c in enumerate(coords) if c}
    conj_old = linalg.zeros(rank, rank)
    for i, row in conj.items():
        for k, c in row.items():
            conj_old[k][i] = GaussQ.coerce(c)
    qbar = linalg.map_entries(linalg.conj, q)
    conj_new = linalg.matmul(qinv, linalg.matmul(conj_old, qbar))
    conj_map = {i: {k: conj_new[k][i] for k in range(rank) if conj_new[k][i]} for i in range(rank)}
    return [(labels[i], basis[i][1]) for i in range(rank)], new_products, conj_map


FIXTURES = {
    "p1": lambda: projective_space(1),
    "p2": lambda: projective_space(2),
    "p3": lambda: projective_space(3),
    "p1xp1": lambda: product_of_projective_spaces(1, 1),
    "p1xp1xp1": lambda: product_of_projective_spaces(1, 1, 1),
    "p1xp2": lambda: product_of_projective_spaces(1, 2),
    "t1": lambda: torus(1),
    "t2": lambda: torus(2),
}


def fixture(name: str, *params: int) -> GradedAlgebra:
    """Build a test algebra by family name or by registry key.

    Families: ``projective_space(n)``, ``product_of_projective_spaces(n1, ...)``
    and ``torus(n)``. Registry keys (``"p2"``, ``"p1xp1"``, ``"t2"`` ...) are
    accepted without parameters.
    """
    if name == "projective_space":
        if len(params) != 1:
            raise ValueError("projective_space takes one parameter")
        return projective_space(params[0])
    if name == "product_of_projective_spaces":
        return product_of_projective_spaces(*params)
    if name == "torus":
        if len(params) != 1:
            raise ValueError("torus takes one parameter")
        return torus(params[0])
    if name in FIXTURES and not params:
        return FIXTURES[name]()
    raise ValueError(f"unknown fixture {name!r}")


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

SCHEMA_DOC = """\
Algebra file: one UTF-8 JSON object with keys
  n            int >= 1
  dims         [[p, q, h_pq], ...]        every bidegree with h_pq > 0
  basis        [[label, ...], ...]        one group per dims entry, same order;
                                          flattened order defines indices
  cup          [[i, j, k, re_num, re_den, im_num, im_den], ...]
                                          b_i * b_j has coefficient
                                          re_num/re_den + i*im_num/im_den on b_k;
                                          omitted entries are zero
  conj         [[p, q, matrix], ...]      matrix[r][c] = coefficient of the r-th
                                          H^{q,p} element in conj(c-th H^{p,q} element)
  integral     [c]                        rational integral of the H^{n,n} generator
  e_basis      [[c, ...], ...]            N real classes in H^{1,1} coordinates
  sample_point [c, ...]                   N rationals
  name         optional string
Rationals are ints or "p/q" strings; JSON floats are rejected.
"""


def _rat(x, where: str) -> Fraction:
    try:
        return parse_rational(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise AlgebraError("non-rational coefficient", f"{where}: {x!r}") from exc


def algebra_from_dict(doc: dict) -> GradedAlgebra:
    required = ("n", "dims", "basis", "cup", "conj", "integral", "e_basis", "sample_point")
    for key in required:
        if key not in doc:
            raise AlgebraError("schema", f"missing key {key!r}")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise AlgebraError("schema", "n must be an integer")
    dims = doc["dims"]
    groups = doc["basis"]
    if len(groups) != len(dims):
        raise AlgebraError("schema", "basis must have one label group per dims entry")
    basis = []
    for (p, q, h), labels in zip(dims, groups):
        if len(labels) != h:
            raise AlgebraError("schema", f"bidegree ({p},{q}) lists {len(labels)} labels, dims says {h}")
        for lab in labels:
            basis.append((str(lab), (int(p), int(q))))
    seen = set()
    for p, q, _ in dims:
        if (p, q) in seen:
            raise AlgebraError("schema", f"bidegree ({p},{q}) listed twice")
        seen.add((p, q))
    top_dim = sum(h for p, q, h in dims if (p, q) == (n, n))
    if top_dim != 1:
        raise AlgebraError("top degree not one-dimensional", f"h^{{n,n}} = {top_dim}")
    rank = len(basis)
    products: dict = {}
    for entry in doc["cup"]:
        if len(entry) != 7:
            raise AlgebraError("schema", f"cup entry {entry!r} must have 7 fields")
        i, j, k = entry[:3]
        for idx in (i, j, k):
            if not isinstance(idx, int) or not 0 <= idx < rank:
                raise AlgebraError("schema", f"cup index {idx!r} out of range")
        parts = []
        for v in entry[3:]:
            if not isinstance(v, int) or isinstance(v, bool):
                raise AlgebraError("non-rational coefficient", f"cup entry {entry!r}")
            parts.append(v)
        if parts[1] == 0 or parts[3] == 0:
            raise AlgebraError("schema", f"zero denominator in cup entry {entry!r}")
        c = GaussQ(Fraction(parts[0], parts[1]), Fraction(parts[2], parts[3]))
        row = products.setdefault((i, j), {})
        row[k] = row.get(k, GaussQ(0)) + c
    offsets = {}
    start = 0
    for p, q, h in dims:
        offsets[(p, q)] = (start, h)
        start += h
    conj: dict = {i: {} for i in range(rank)}
    for p, q, matrix in doc["conj"]:
        if (p, q) not in offsets or (q, p) not in offsets:
            raise AlgebraError("schema", f"conj block ({p},{q}) refers to a missing bidegree")
        s0, h0 = offsets[(p, q)]
        t0, h1 = offsets[(q, p)]
        if len(matrix) != h1 or any(len(r) != h0 for r in matrix):
            raise AlgebraError("schema", f"conj block ({p},{q}) has wrong shape")
        for r, row in enumerate(matrix):
            for c, v in enumerate(row):
                val = _rat(v, f"conj ({p},{q})")
                if val:
                    conj[s0 + c][t0 + r] = val
    integral = doc["integral"]
    if len(integral) != 1:
        raise AlgebraError("top degree not one-dimensional",
                           f"integral lists {len(integral)} coefficients")
    top = _rat(integral[0], "integral")
    e_basis = [[_rat(c, "e_basis") for c in e] for e in doc["e_basis"]]
    sample = [_rat(c, "sample_point") for c in doc["sample_point"]]
    return make_algebra(n, basis, products, conj, top, e_basis, sample,
                        name=doc.get("name", "algebra"))


def load_algebra(path) -> GradedAlgebra:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraError("parse error", str(exc)) from exc
    if not isinstance(doc, dict):
        raise AlgebraError("parse error", "top level must be a JSON object")
    return algebra_from_dict(doc)


def _rat_str(x) -> str | int:
    f = Fraction(int(x.numerator), int(x.denominator))
    return int(f) if f.denominator == 1 else str(f)


def algebra_to_dict(alg: GradedAlgebra) -> dict:
    dims = [[p, q, len(alg.indices(p, q))] for p, q in alg.bidegrees]
    basis = [[alg.labels[i] for i in alg.indices(p, q)] for p, q in alg.bidegrees]
    cup_entries = []
    for (i, j) in sorted(alg.cup_table):
        for k, c in sorted(alg.cup_table[(i, j)].items()):
            re, im = Fraction(int(c.re.numerator), int(c.re.denominator)), \
                Fraction(int(c.im.numerator), int(c.im.denominator))
            cup_entries.append([i, j, k, re.numerator, re.denominator, im.numerator, im.denominator])
    conj_blocks = []
    for p, q in alg.bidegrees:
        src = alg.indices(p, q)
        dst = alg.indices(q, p)
        block = []
        for r in dst:
            row = []
            for c in src:
                v = alg.conj_matrix[r][c]
                if v and v.im:
                    raise ValueError("conjugation matrix is not rational in this basis")
                row.append(_rat_str(v.re) if v else 0)
            block.append(row)
        conj_blocks.append([p, q, block])
    for e in alg.e_basis:
        if any(c.im for c in e):
            raise ValueError("e_basis is not rational in this basis")
    return {
        "name": alg.name,
        "n": alg.n,
        "dims": dims,
        "basis": basis,
        "cup": cup_entries,
        "conj": conj_blocks,
        "integral": [_rat_str(alg.top_integral.re)],
        "e_basis": [[_rat_str(c.re) for c in e] for e in alg.e_basis],
        "sample_point": [_rat_str(x) for x in alg.sample_point],
    }


def dump_algebra(alg: GradedAlgebra, path) -> None:
    Path(path).write_text(json.dumps(algebra_to_dict(alg), indent=1) + "\n", encoding="utf-8")


def hodge_numbers(alg: GradedAlgebra) -> dict[Bidegree, int]:
    return alg.dims()


def expected_torus_dims(n: int) -> dict[Bidegree, int]:
    return {(p, q): comb(n, p) * comb(n, q) for p in range(n + 1) for q in range(n + 1)}
