"""The sl2 / Lefschetz package at one point of the Kahler cone.

Everything is assembled from the Lefschetz basis ``omega_r * v`` with ``v``
running over primitive classes: in that basis the dual Lefschetz operator and
the Hodge star are explicit (Fact-1 / Fact-2 style formulas), and the change
of basis back to the algebra's basis is block diagonal in the bidegree.

Scalars may be exact (``GaussQ``), float (``complex``) or jets over either;
the latter is how derivatives in the cone coordinates are obtained.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from . import linalg
from .algebra import CohomClass, GradedAlgebra, conjugate, cup, integrate
from .jet import Jet2, value_part
from .scalars import EXACT, FLOAT, GaussQ, I, to_field


class NotPolarizedError(ValueError):
    """Hard Lefschetz fails at the requested cone point."""


def converter(mode: str):
    if mode == EXACT:
        return GaussQ.coerce
    if mode == FLOAT:
        return complex
    raise ValueError(f"unknown mode {mode!r}")


def i_power_k2(k: int, mode: str):
    """i**(k**2): 1 for even k, i for odd k."""
    if k % 2 == 0:
        return GaussQ(1) if mode == EXACT else 1 + 0j
    return I if mode == EXACT else 1j


@dataclass(frozen=True)
class LefEntry:
    """One Lefschetz basis vector ``omega_r * v`` with v primitive of bidegree (p, q)."""

    p: int
    q: int
    v: int  # index of v inside the primitive basis of H^{p,q}
    r: int

    @property
    def k(self) -> int:
        return self.p + self.q


@dataclass(eq=False)
class LefschetzStructure:
    algebra: GradedAlgebra
    mode: str
    t: tuple
    omega: list
    L: list
    primitive: dict  # (p, q) -> list of full-length primitive vectors
    entries: list  # column index -> LefEntry
    B: list
    Binv: list
    star: list
    lam: list
    gram: list
    gram_inv: list
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.algebra.n

    @property
    def Y(self):
        if "Y" not in self._cache:
            self._cache["Y"] = linalg.commutator(self.L, self.lam)
        return self._cache["Y"]

    @property
    def tau(self):
        if "tau" not in self._cache:
            self._cache["tau"] = linalg.matmul(self.star, self.star)
        return self._cache["tau"]

    def convert(self, c):
        return converter(self.mode)(c)

    def constant_matrix(self, m) -> list[list]:
        conv = converter(self.mode)
        return [[conv(x) if x else 0 for x in row] for row in m]

    def cup_matrix(self, vec) -> list[list]:
        """Operator of cup product with a constant class (algebra coordinates)."""
        return self.algebra.mult_matrix(vec, convert=converter(self.mode))

    def omega_power(self, r: int, vec) -> list:
        """omega_r * vec with omega_r = omega**r / r!."""
        out = list(vec)
        for _ in range(r):
            out = linalg.matvec(self.L, out)
        if r > 1:
            f = factorial(r)
            out = [x / f if x else 0 for x in out]
        return out

    def adjoint(self, T) -> list[list]:
        """h-adjoint: h(T u, v) = h(u, T* v)."""
        return linalg.matmul(self.gram_inv, linalg.matmul(linalg.conj_transpose(T), self.gram))

    def h(self, u, v):
        """Hermitian metric from the Gram matrix, linear in u."""
        mu = linalg.matvec(self.gram, u)
        acc = 0
        for vi, x in zip(v, mu):
            if vi and x:
                acc = acc + linalg.conj(vi) * x
        return acc

    def norm2(self, u):
        return self.h(u, u)


def _coerce_point(t, mode):
    return tuple(x if isinstance(x, Jet2) else to_field(x, mode) for x in t)


def _l_power_block(L, src, steps, rank):
    """Images of the src basis vectors under L**steps (full-length columns)."""
    cols = []
    for i in src:
        v = [0] * rank
        v[i] = 1
        for _ in range(steps):
            v = linalg.matvec(L, v)
        cols.append(v)
    return cols


def _value_matrix(m):
    return [[value_part(x) for x in row] for row in m]


def build(algebra: GradedAlgebra, t, mode: str = EXACT) -> LefschetzStructure:
    """Assemble all Lefschetz operators at omega(t) = sum t_j e_j.

    Raises NotPolarizedError if hard Lefschetz fails at t.
    """
    if len(t) != algebra.N:
        raise ValueError(f"point has {len(t)} coordinates, algebra needs {algebra.N}")
    conv = converter(mode)
    tt = _coerce_point(t, mode)
    n, rank = algebra.n, algebra.rank
    omega = [0] * rank
    for j, tj in enumerate(tt):
        for i, c in enumerate(algebra.e_vector(j)):
            if c:
                omega[i] = omega[i] + conv(c) * tj
    L = algebra.mult_matrix(omega, convert=conv)
    dims = algebra.dims()

    # hard Lefschetz, one bidegree at a time
    for p in range(n + 1):
        for q in range(n + 1 - p):
            k = p + q
            src = algebra.indices(p, q)
            if not src:
                continue
            dst = algebra.indices(n - q, n - p)
            if len(dst) != len(src):
                raise NotPolarizedError(f"not polarized at t: dim mismatch for ({p},{q})")
            cols = _l_power_block(L, src, n - k, rank)
            block = [[cols[c][r] for c in range(len(src))] for r in dst]
            if linalg.rank(_value_matrix(block)) != len(src):
                raise NotPolarizedError(
                    f"not polarized at t: hard Lefschetz fails on H^({p},{q})")

    # primitive subspaces
    primitive = {}
    for p in range(n + 1):
        for q in range(n + 1 - p):
            k = p + q
            src = algebra.indices(p, q)
            if not src:
                continue
            expected = dims[(p, q)] - dims.get((p - 1, q - 1), 0)
            m = n - k + 1
            if expected <= 0:
                continue
            if p + m > n or q + m > n or not algebra.indices(p + m, q + m):
                local = [[1 if r == c else 0 for r in range(len(src))] for c in range(len(src))]
            else:
                cols = _l_power_block(L, src, m, rank)
                dst = algebra.indices(p + m, q + m)
                block = [[cols[c][r] for c in range(len(src))] for r in dst]
                local = linalg.kernel(block, dim=expected)
            vecs = []
            for w in local:
                full = [0] * rank
                for idx, x in zip(src, w):
                    if x:
                        full[idx] = conv(x) if isinstance(x, int) else x
                vecs.append(full)
            primitive[(p, q)] = vecs

    # Lefschetz basis
    slots = {bd: list(algebra.indices(*bd)) for bd in algebra.bidegrees}
    entries = [None] * rank
    B = linalg.zeros(rank, rank)
    for (p, q), vecs in primitive.items():
        k = p + q
        for vi, v in enumerate(vecs):
            w = v
            for r in range(0, n - k + 1):
                if r > 0:
                    w = linalg.matvec(L, w)
                    w = [x / r if x else 0 for x in w]
                target = (p + r, q + r)
                if not slots.get(target):
                    raise NotPolarizedError(f"Lefschetz decomposition overflows H^{target}")
                col = slots[target].pop(0)
                entries[col] = LefEntry(p, q, vi, r)
                for row in range(rank):
                    if w[row]:
                        B[row][col] = w[row]
    if any(e is None for e in entries):
        raise NotPolarizedError("Lefschetz decomposition does not span the algebra")
    blocks = algebra.block_indices()
    Binv = linalg.block_diag_inverse(B, blocks)
    col_of = {e: c for c, e in enumerate(entries)}

    # star and dual Lefschetz operator in the Lefschetz basis, then back
    BS = linalg.zeros(rank, rank)
    BL = linalg.zeros(rank, rank)
    for col, e in enumerate(entries):
        k = e.k
        sgn = -1 if e.p % 2 else 1
        coef = i_power_k2(k, mode) * sgn
        tgt = col_of[LefEntry(e.p, e.q, e.v, n - e.r - k)]
        for row in range(rank):
            x = B[row][tgt]
            if x:
                BS[row][col] = coef * x
        if e.r >= 1:
            c = n - k - e.r + 1
            tgt = col_of[LefEntry(e.p, e.q, e.v, e.r - 1)]
            for row in range(rank):
                x = B[row][tgt]
                if x:
                    BL[row][col] = c * x
    star = linalg.matmul(BS, Binv)
    lam = linalg.matmul(BL, Binv)

    C = [[conv(x) if x else 0 for x in row] for row in algebra.conj_matrix]
    P = [[conv(x) if x else 0 for x in row] for row in algebra.poincare_matrix()]
    gram = linalg.matmul(linalg.conj_transpose(star), linalg.matmul(linalg.transpose(C),
                                                                    linalg.transpose(P)))
    gram_inv = linalg.block_diag_inverse(gram, blocks)
    return LefschetzStructure(algebra=algebra, mode=mode, t=tt, omega=omega, L=L,
                              primitive=primitive, entries=entries, B=B, Binv=Binv,
                              star=star, lam=lam, gram=gram, gram_inv=gram_inv)


@dataclass
class Polarization:
    polarized: bool
    hard_lefschetz: bool
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.polarized


def is_positive_definite(block, mode: str) -> bool:
    """Exact: leading principal minors; float: eigenvalues above 1e-10 * max|entry|."""
    if not block:
        return True
    vals = _value_matrix(block)
    if mode == EXACT:
        for m in linalg.leading_minors(vals):
            m = GaussQ.coerce(m)
            if m.im or m.re <= 0:
                return False
        return True
    arr = np.array(vals, dtype=complex)
    arr = (arr + arr.conj().T) / 2
    scale = np.max(np.abs(arr))
    if scale == 0:
        return False
    return bool(np.min(np.linalg.eigvalsh(arr)) > 1e-10 * scale)


def is_polarized(structure_or_algebra, t=None, mode: str = EXACT) -> Polarization:
    """Hard Lefschetz plus positive-definiteness of h on every H^{p,q}."""
    if isinstance(structure_or_algebra, LefschetzStructure):
        s = structure_or_algebra
    else:
        try:
            s = build(structure_or_algebra, t, mode)
        except NotPolarizedError as exc:
            return Polarization(False, False, [str(exc)])
    failures = []
    for p, q in s.algebra.bidegrees:
        idx = s.algebra.indices(p, q)
        if not is_positive_definite(linalg.submatrix(s.gram, idx, idx), s.mode):
            failures.append(f"h not positive-definite on H^({p},{q})")
    return Polarization(not failures, True, failures)


# ---------------------------------------------------------------------------
# class-level operations
# ---------------------------------------------------------------------------

@dataclass
class PrimitiveDecomposition:
    u: CohomClass
    components: dict  # r -> primitive class of bidegree (p - r, q - r)

    def reconstruct(self, structure: LefschetzStructure) -> CohomClass:
        alg = self.u.algebra
        total = [0] * alg.rank
        for r, ur in self.components.items():
            w = structure.omega_power(r, ur.coeffs)
            total = [a + b for a, b in zip(total, w)]
        return CohomClass(alg, total)


def _homogeneous(u: CohomClass):
    s = u.support()
    if len(s) > 1:
        raise ValueError(f"class is not homogeneous (support {sorted(s)})")
    return next(iter(s)) if s else None


def primitive_decomposition(u: CohomClass, s: LefschetzStructure) -> PrimitiveDecomposition:
    """u = sum_r omega_r u^r with each u^r primitive."""
    bd = _homogeneous(u)
    if bd is None:
        return PrimitiveDecomposition(u, {})
    coords = linalg.matvec(s.Binv, u.coeffs)
    rank = s.algebra.rank
    comps: dict = {}
    for col, c in enumerate(coords):
        if not c:
            continue
        e = s.entries[col]
        v = s.primitive[(e.p, e.q)][e.v]
        acc = comps.setdefault(e.r, [0] * rank)
        for i, x in enumerate(v):
            if x:
                acc[i] = acc[i] + c * x
    return PrimitiveDecomposition(u, {r: CohomClass(s.algebra, vec) for r, vec in sorted(comps.items())})


def lambda_apply(u: CohomClass, s: LefschetzStructure) -> CohomClass:
    """Dual Lefschetz operator through the decomposition, termwise:
    Lambda(omega_r v) = (n - k - r + 1) omega_{r-1} v for v primitive of degree k."""
    total = [0] * s.algebra.rank
    for bd in sorted(u.support()):
        dec = primitive_decomposition(u.component(*bd), s)
        for r, ur in dec.components.items():
            if r == 0 or ur.is_zero():
                continue
            k = sum(ur.bidegree())
            w = s.omega_power(r - 1, ur.coeffs)
            c = s.n - k - r + 1
            total = [a + c * b if b else a for a, b in zip(total, w)]
    return CohomClass(s.algebra, total)


def hodge_star(u: CohomClass, s: LefschetzStructure) -> CohomClass:
    """*u = i^{k^2} sum_r (-1)^{p-r} omega_{n-k+r} u^r for u of bidegree (p, q)."""
    bd = _homogeneous(u)
    if bd is None:
        return u
    p, q = bd
    k = p + q
    pref = i_power_k2(k, s.mode)
    total = [0] * s.algebra.rank
    for r, ur in primitive_decomposition(u, s).components.items():
        w = s.omega_power(s.n - k + r, ur.coeffs)
        c = pref * (-1 if (p - r) % 2 else 1)
        total = [a + c * b if b else a for a, b in zip(total, w)]
    return CohomClass(s.algebra, total)


def star_by_primitive_terms(u: CohomClass, s: LefschetzStructure) -> CohomClass:
    """Star applied termwise to omega_r u^r via *(omega_r v) = i^{k'^2} (-1)^{p'} omega_{n-r-k'} v,
    where (p', q') is the bidegree of the primitive v and k' = p' + q'."""
    bd = _homogeneous(u)
    if bd is None:
        return u
    total = [0] * s.algebra.rank
    for r, ur in primitive_decomposition(u, s).components.items():
        if ur.is_zero():
            continue
        p1, q1 = ur.bidegree()
        k1 = p1 + q1
        c = i_power_k2(k1, s.mode) * (-1 if p1 % 2 else 1)
        w = s.omega_power(s.n - r - k1, ur.coeffs)
        total = [a + c * b if b else a for a, b in zip(total, w)]
    return CohomClass(s.algebra, total)


def apply(m, u: CohomClass) -> CohomClass:
    return CohomClass(u.algebra, linalg.matvec(m, u.coeffs))


def metric_h(u: CohomClass, v: CohomClass, s: LefschetzStructure):
    """h(u, v) = integral(u * conj(*v)); linear in u, conjugate-linear in v."""
    total = 0
    for bd in sorted(v.support()):
        sv = hodge_star(v.component(*bd), s)
        prod = cup(u, conjugate(sv))
        top = prod.component(s.n, s.n)
        if not top.is_zero():
            total = total + integrate(top)
    return total
