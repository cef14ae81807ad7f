"""The Higgs bundle H over the complexified Kahler cone.

All bundle data depend on z = t + i s through t only, so on constant frames
d/dz^j = d/dzbar^j = (1/2) d/dt^j. Holomorphic-direction operators use the
Higgs field theta_j = cup with e_j / 2; real-direction operators (``*_real``)
use theta_zeta = cup with sum zeta^j e_j. Derivatives in t come from the
Lefschetz structure rebuilt over ``Jet2`` scalars.

Curvature sign convention: on constant frames
    A_j = [Lambda, theta_j]                  (action of the (1,0) Chern part)
    Theta_{j kbar} = -(1/2) dA_j/dt^k
so that H^{0,0} comes out positive and Theta_{j kbar} = [theta_k^*, theta_j].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .algebra import GradedAlgebra
from .jet import Jet2, jet_part
from .lefschetz import LefschetzStructure, build, converter
from .report import Record, VerificationReport, fmt_point, residual
from .scalars import EXACT, to_field


@dataclass(frozen=True)
class ConePoint:
    """z = t + i s; s is carried along but no bundle datum depends on it."""

    t: tuple
    s: tuple | None = None

    @classmethod
    def of(cls, t, s=None) -> ConePoint:
        return cls(tuple(t), None if s is None else tuple(s))


def _t(point) -> tuple:
    return point.t if isinstance(point, ConePoint) else tuple(point)


def part(m, which: str):
    """Extract one Taylor coefficient from a matrix/vector/scalar of jets."""
    if isinstance(m, list):
        if m and isinstance(m[0], list):
            return [[jet_part(x, which) for x in row] for row in m]
        return [jet_part(x, which) for x in m]
    return jet_part(m, which)


def second(m, s1: int, s2: int):
    """Second derivative matrix along jet slots s1, s2."""
    if s1 != s2:
        return part(m, "c12")
    c = part(m, "c11" if s1 == 1 else "c22")
    return _scale2(c)


def _scale2(m):
    if isinstance(m, list):
        if m and isinstance(m[0], list):
            return [[x + x if x else 0 for x in row] for row in m]
        return [x + x if x else 0 for x in m]
    return m + m


def seed_point(t, mode: str, d1=None, d2=None) -> list:
    """Jet coordinates t + a*d1 + b*d2."""
    conv = converter(mode)
    out = []
    for j, x in enumerate(t):
        a = conv(d1[j]) if d1 is not None else conv(0)
        b = conv(d2[j]) if d2 is not None else conv(0)
        out.append(Jet2.variable(to_field(x, mode), a, b))
    return out


def jet_structure(algebra: GradedAlgebra, t, mode: str, d1=None, d2=None) -> LefschetzStructure:
    return build(algebra, seed_point(t, mode, d1, d2), mode)


def unit(N: int, j: int) -> list:
    return [1 if i == j else 0 for i in range(N)]


class JetProbe:
    """First and second t-derivatives of Lefschetz data at one point.

    Builds are cached per pair of directions; unit directions are paired up
    so N first derivatives cost ceil(N/2) builds.
    """

    def __init__(self, algebra: GradedAlgebra, t, mode: str = EXACT):
        self.algebra = algebra
        self.t = tuple(t)
        self.mode = mode
        self._builds = {}

    def structure(self, d1=None, d2=None) -> LefschetzStructure:
        key = (None if d1 is None else tuple(d1), None if d2 is None else tuple(d2))
        if key not in self._builds:
            self._builds[key] = jet_structure(self.algebra, self.t, self.mode, d1, d2)
        return self._builds[key]

    def unit_slot(self, j: int) -> tuple[LefschetzStructure, int]:
        """Structure carrying the unit direction e_j, and its jet slot."""
        N = self.algebra.N
        a = j - (j % 2)
        b = a + 1
        d1 = unit(N, a)
        d2 = unit(N, b) if b < N else None
        return self.structure(d1, d2), 1 if j == a else 2

    def pair_slots(self, l: int, m: int):
        """Structure carrying unit directions l and m (l may equal m)."""
        N = self.algebra.N
        if l == m:
            s, slot = self.unit_slot(l)
            return s, slot, slot
        a, b = min(l, m), max(l, m)
        s = self.structure(unit(N, a), unit(N, b))
        return s, (1 if l == a else 2), (1 if m == a else 2)

    @property
    def base(self) -> LefschetzStructure:
        s, _ = self.unit_slot(0)
        return s


def value(m):
    return part(m, "c0")


def deriv(m, slot: int):
    return part(m, "c1" if slot == 1 else "c2")


# ---------------------------------------------------------------------------
# Higgs field and its adjoint
# ---------------------------------------------------------------------------

def higgs_theta(algebra: GradedAlgebra, j: int, mode: str = EXACT) -> list:
    """theta_{z^j}: cup with e_j / 2 (constant in t)."""
    if not 0 <= j < algebra.N:
        raise IndexError(f"direction index {j} out of range 0..{algebra.N - 1}")
    conv = converter(mode)
    half = Fraction(1, 2)
    vec = [conv(c * half) if c else 0 for c in algebra.e_vector(j)]
    return algebra.mult_matrix(vec, convert=conv)


def theta_real(algebra: GradedAlgebra, zeta, mode: str = EXACT) -> list:
    """theta_zeta: cup with sum zeta^j e_j (real-direction convention, no 1/2)."""
    return algebra.mult_matrix(real_class(algebra, zeta, mode), convert=converter(mode))


def real_class(algebra: GradedAlgebra, zeta, mode: str = EXACT) -> list:
    conv = converter(mode)
    vec = [0] * algebra.rank
    for j, zj in enumerate(zeta):
        if not zj:
            continue
        zj = to_field(zj, mode)
        for i, c in enumerate(algebra.e_vector(j)):
            if c:
                vec[i] = vec[i] + conv(c) * zj
    return vec


def conj_theta(algebra: GradedAlgebra, j: int, mode: str = EXACT) -> list:
    """Cup with conj(e_j / 2)."""
    conv = converter(mode)
    half = Fraction(1, 2)
    vec = algebra.conj_vec([c * half if c else 0 for c in algebra.e_vector(j)])
    return algebra.mult_matrix([conv(c) if c else 0 for c in vec], convert=conv)


def theta_adjoint(algebra: GradedAlgebra, j: int, point, mode: str = EXACT,
                  structure: LefschetzStructure | None = None) -> list:
    s = structure or build(algebra, _t(point), mode)
    return s.adjoint(higgs_theta(algebra, j, mode))


def connection_matrix(algebra: GradedAlgebra, j: int, point, mode: str = EXACT,
                      structure: LefschetzStructure | None = None) -> list:
    """A_j = [Lambda, theta_j], the (1,0) Chern connection on constant frames."""
    s = structure or build(algebra, _t(point), mode)
    return linalg.commutator(s.lam, higgs_theta(algebra, j, mode))


def chern_connection_matrix(probe: JetProbe, j: int) -> list:
    """A_j from the metric: h^{-1} (1/2) dh/dt^j."""
    s, slot = probe.unit_slot(j)
    dM = deriv(s.gram, slot)
    half = Fraction(1, 2) if probe.mode == EXACT else 0.5
    return linalg.matmul(value(s.gram_inv), linalg.scale(half, dM))


def curvature(probe: JetProbe, j: int, k: int) -> list:
    """Theta_{j kbar} = -(1/2) d/dt^k [Lambda, theta_j] on constant frames."""
    s, slot = probe.unit_slot(k)
    th = higgs_theta(probe.algebra, j, probe.mode)
    dA = linalg.commutator(deriv(s.lam, slot), th)
    half = Fraction(-1, 2) if probe.mode == EXACT else -0.5
    return linalg.scale(half, dA)


def _size(m) -> float:
    return linalg.max_abs(m)


def _bidegree_blocks(algebra: GradedAlgebra):
    for p, q in algebra.bidegrees:
        yield (p, q), algebra.indices(p, q)


def _compare_blocks(report, algebra, point, ident, extra, lhs, rhs, mode, fixture, scale=0.0):
    # float residuals are relative to the whole operator, or to the size of the
    # ingredients when both sides vanish (cross curvatures on products, say)
    rows = list(range(algebra.rank))
    if mode != EXACT:
        scale = max(linalg.max_abs(lhs), linalg.max_abs(rhs), scale)
    for (p, q), idx in _bidegree_blocks(algebra):
        res, ok = residual(linalg.submatrix(lhs, rows, idx), linalg.submatrix(rhs, rows, idx), mode,
                           scale=scale)
        detail = f"{extra} H^({p},{q})".strip()
        report.add(Record(fixture, fmt_point(point), ident, detail, mode, res, ok))


def verify_fundamental_identity(algebra: GradedAlgebra, point, j: int | None = None,
                                mode: str = EXACT, probe: JetProbe | None = None,
                                fixture: str | None = None) -> VerificationReport:
    """(1/2) d*/dt^j = * [Lambda, theta_j] per source bidegree."""
    t = _t(point)
    probe = probe or JetProbe(algebra, t, mode)
    fixture = fixture or algebra.name
    rep = VerificationReport()
    half = Fraction(1, 2) if mode == EXACT else 0.5
    for jj in ([j] if j is not None else range(algebra.N)):
        s, slot = probe.unit_slot(jj)
        lhs = linalg.scale(half, deriv(s.star, slot))
        th = higgs_theta(algebra, jj, mode)
        comm = linalg.commutator(value(s.lam), th)
        rhs = linalg.matmul(value(s.star), comm)
        _compare_blocks(rep, algebra, t, "star_commutator", f"j={jj + 1}", lhs, rhs,
                        mode, fixture, scale=_size(value(s.star)) * _size(comm))
    return rep


def verify_adjoint_identity(algebra: GradedAlgebra, point, k: int | None = None,
                            mode: str = EXACT, probe: JetProbe | None = None,
                            fixture: str | None = None) -> VerificationReport:
    """theta_k^* = -(1/2) dLambda/dt^k = -(1/2) [Lambda, [Lambda, conj theta_k]]."""
    t = _t(point)
    probe = probe or JetProbe(algebra, t, mode)
    fixture = fixture or algebra.name
    rep = VerificationReport()
    mhalf = Fraction(-1, 2) if mode == EXACT else -0.5
    for kk in ([k] if k is not None else range(algebra.N)):
        s, slot = probe.unit_slot(kk)
        lam = value(s.lam)
        adj = linalg.matmul(value(s.gram_inv),
                            linalg.matmul(linalg.conj_transpose(higgs_theta(algebra, kk, mode)),
                                          value(s.gram)))
        lhs_a = linalg.scale(mhalf, deriv(s.lam, slot))
        cth = conj_theta(algebra, kk, mode)
        lhs_b = linalg.scale(mhalf, linalg.commutator(lam, linalg.commutator(lam, cth)))
        _compare_blocks(rep, algebra, t, "adjoint_dLambda", f"k={kk + 1}", adj, lhs_a, mode, fixture)
        _compare_blocks(rep, algebra, t, "adjoint_double_commutator", f"k={kk + 1}", adj, lhs_b,
                        mode, fixture)
    return rep


def verify_chern_connection(algebra: GradedAlgebra, point, mode: str = EXACT,
                            probe: JetProbe | None = None,
                            fixture: str | None = None) -> VerificationReport:
    """Commutator form [Lambda, theta_j] equals the Chern form h^{-1} (1/2) dh/dt^j."""
    t = _t(point)
    probe = probe or JetProbe(algebra, t, mode)
    fixture = fixture or algebra.name
    rep = VerificationReport()
    for j in range(algebra.N):
        s, _ = probe.unit_slot(j)
        lhs = linalg.commutator(value(s.lam), higgs_theta(algebra, j, mode))
        rhs = chern_connection_matrix(probe, j)
        _compare_blocks(rep, algebra, t, "chern_connection", f"j={j + 1}", lhs, rhs, mode, fixture)
    return rep


def verify_flatness(algebra: GradedAlgebra, point, mode: str = EXACT,
                    probe: JetProbe | None = None,
                    fixture: str | None = None) -> VerificationReport:
    """Three families of identities equivalent to flatness of D^h + theta + theta^*.

    (i)   Theta_{j kbar} = [theta_k^*, theta_j]
    (ii)  d theta_j^*/dt^k = d theta_k^*/dt^j            (dbar theta^* + theta^* dbar = 0)
    (iii) [A_j, theta_k] = [A_k, theta_j]                 (d^h theta + theta d^h = 0)
    """
    t = _t(point)
    probe = probe or JetProbe(algebra, t, mode)
    fixture = fixture or algebra.name
    rep = VerificationReport()
    N = algebra.N
    base = probe.base
    thetas = [higgs_theta(algebra, j, mode) for j in range(N)]
    lam0 = value(base.lam)
    gram0, gram_inv0 = value(base.gram), value(base.gram_inv)
    adj0 = [linalg.matmul(gram_inv0, linalg.matmul(linalg.conj_transpose(th), gram0))
            for th in thetas]
    A = [linalg.commutator(lam0, th) for th in thetas]
    # jets of theta_j^* along each unit direction
    dadj = {}
    for k in range(N):
        s, slot = probe.unit_slot(k)
        for j in range(N):
            dadj[(j, k)] = deriv(s.adjoint(thetas[j]), slot)
    for j in range(N):
        for k in range(N):
            lhs = curvature(probe, j, k)
            rhs = linalg.commutator(adj0[k], thetas[j])
            _compare_blocks(rep, algebra, t, "flat_i_curvature", f"j={j + 1} k={k + 1}",
                            lhs, rhs, mode, fixture,
                            scale=_size(adj0[k]) * _size(thetas[j]) + _size(adj0[j]) * _size(thetas[k]))
    for j in range(N):
        for k in range(j + 1, N):
            _compare_blocks(rep, algebra, t, "flat_ii_dbar_theta_star", f"j={j + 1} k={k + 1}",
                            dadj[(j, k)], dadj[(k, j)], mode, fixture,
                            scale=max(_size(dadj[(j, j)]), _size(dadj[(k, k)])))
            lhs = linalg.commutator(A[j], thetas[k])
            rhs = linalg.commutator(A[k], thetas[j])
            _compare_blocks(rep, algebra, t, "flat_iii_dh_theta", f"j={j + 1} k={k + 1}",
                            lhs, rhs, mode, fixture,
                            scale=_size(A[j]) * _size(thetas[k]) + _size(A[k]) * _size(thetas[j]))
    if N == 1:
        # the antisymmetric families are vacuous; record them as checked
        zero = linalg.zeros(algebra.rank, algebra.rank)
        _compare_blocks(rep, algebra, t, "flat_ii_dbar_theta_star", "N=1", zero, zero, mode, fixture)
        _compare_blocks(rep, algebra, t, "flat_iii_dh_theta", "N=1", zero, zero, mode, fixture)
    return rep


@dataclass
class SubbundleSplit:
    blocks: dict  # p - q -> list of indices
    block_diagonal: dict = field(default_factory=dict)  # operator name -> bool

    def ranks(self) -> dict:
        return {k: len(v) for k, v in sorted(self.blocks.items())}


def subbundle_split(algebra: GradedAlgebra, point=None, mode: str = EXACT,
                    probe: JetProbe | None = None) -> SubbundleSplit:
    """Partition by p - q; check theta, theta^*, A and Theta respect it."""
    blocks: dict = {}
    for i, (p, q) in enumerate(algebra.degree_of):
        blocks.setdefault(p - q, []).append(i)
    split = SubbundleSplit(dict(sorted(blocks.items())))
    if point is None:
        return split
    t = _t(point)
    probe = probe or JetProbe(algebra, t, mode)
    base = probe.base
    label = {i: p - q for i, (p, q) in enumerate(algebra.degree_of)}

    def diag(m):
        return all(not m[r][c] or label[r] == label[c]
                   for r in range(len(m)) for c in range(len(m)))

    N = algebra.N
    ops = {}
    for j in range(N):
        th = higgs_theta(algebra, j, mode)
        ops[f"theta_{j + 1}"] = th
        ops[f"theta*_{j + 1}"] = value(base.adjoint(th))
        ops[f"A_{j + 1}"] = linalg.commutator(value(base.lam), th)
        for k in range(N):
            ops[f"Theta_{j + 1}{k + 1}"] = curvature(probe, j, k)
    split.block_diagonal = {name: diag(m) for name, m in ops.items()}
    return split


# ---------------------------------------------------------------------------
# real-direction curvature
# ---------------------------------------------------------------------------

def real_curvature(algebra: GradedAlgebra, point, zeta, mode: str = EXACT):
    """Theta_{zeta zeta} = [d^h_zeta, d_zeta] on constant frames, real convention.

    With M the Gram matrix of h along t + s*zeta:
        Theta = M^{-1} M' M^{-1} M' - M^{-1} M''
    Returns (Theta, structure jet) so callers can reuse the metric.
    """
    s = jet_structure(algebra, _t(point), mode, d1=list(zeta))
    minv = value(s.gram_inv)
    d1 = part(s.gram, "c1")
    d2 = second(s.gram, 1, 1)
    a = linalg.matmul(minv, d1)
    theta = linalg.sub(linalg.matmul(a, a), linalg.matmul(minv, d2))
    return theta, s


def h00_curvature(algebra: GradedAlgebra, point, zeta, mode: str = EXACT):
    """((Theta_{zeta zeta} 1, 1), ||theta_zeta||^2); the two agree."""
    if not any(zeta):
        raise ValueError("direction zeta must be nonzero")
    theta, s = real_curvature(algebra, point, zeta, mode)
    one = [0] * algebra.rank
    one[algebra.unit_index] = converter(mode)(1)
    base_h = _value_h(s)
    lhs = base_h(linalg.matvec(theta, one), one)
    th1 = linalg.matvec(theta_real(algebra, zeta, mode), one)
    rhs = base_h(th1, th1)
    return lhs, rhs


def _value_h(s: LefschetzStructure):
    gram = value(s.gram)

    def h(u, v):
        mu = linalg.matvec(gram, u)
        acc = 0
        for vi, x in zip(v, mu):
            if vi and x:
                acc = acc + linalg.conj(vi) * x
        return acc

    return h
