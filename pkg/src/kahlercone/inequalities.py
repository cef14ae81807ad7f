"""Kahler-side Brunn-Minkowski: Khovanskii-Teissier, log-convexity, the
effective Brunn-Minkowski identity, and the complete surface (n = 2) suite.

Everything here uses real-direction derivatives d/dt along zeta, without
the 1/2 of the holomorphic convention: theta_zeta is cup with
sum zeta^j e_j, the connection is h^{-1} dh/dt, and curvature is
h^{-1} h' h^{-1} h' - h^{-1} h''.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import linalg
from .algebra import AlgebraError, CohomClass, GradedAlgebra, integrate
from .higgs import h00_curvature, jet_structure, part, real_class, real_curvature, second, theta_real, value
from .jet import Jet2, jet_part
from .lefschetz import LefschetzStructure, build, converter, is_polarized, primitive_decomposition
from .report import Record, VerificationReport, fmt_point, residual
from .scalars import EXACT, GaussQ, fmt_rational, to_field


def _as_class(algebra: GradedAlgebra, w) -> CohomClass:
    """A class given directly, or by its coordinates t in the basis e_j."""
    if isinstance(w, CohomClass):
        return w
    w = list(w)
    if len(w) != algebra.N:
        raise ValueError(f"expected {algebra.N} coordinates in the basis e_j, got {len(w)}")
    return algebra.omega_class(w)


def mixed_intersection(algebra: GradedAlgebra, *classes):
    """V(w_1, ..., w_n) = integral of w_1 ... w_n; each w_i in H^{1,1}."""
    if len(classes) != algebra.n:
        raise ValueError(f"mixed intersection needs exactly n = {algebra.n} classes, got {len(classes)}")
    cls = [_as_class(algebra, w) for w in classes]
    for c in cls:
        bd = c.bidegree()
        if bd is not None and bd != (1, 1):
            raise AlgebraError("bidegree", f"mixed intersection argument has bidegree {bd}, expected (1,1)")
        if bd is None and not c.is_zero():
            raise AlgebraError("bidegree", "mixed intersection argument is not homogeneous of bidegree (1,1)")
    prod = cls[0]
    for c in cls[1:]:
        prod = prod * c
    return integrate(prod)


def volume(algebra: GradedAlgebra, t):
    """|X| = integral of omega^n / n!."""
    w = _as_class(algebra, t)
    return mixed_intersection(algebra, *([w] * algebra.n)) / factorial(algebra.n)


def _real(x):
    return GaussQ.coerce(x).re


def proportional(u, v) -> bool:
    """Exact rank of the 2 x N coordinate matrix is at most 1."""
    return linalg.rank([list(u), list(v)]) <= 1


@dataclass
class KTResult:
    v12: object
    v11: object
    v22: object
    proportional: bool

    @property
    def margin(self):
        return self.v12 * self.v12 - self.v11 * self.v22


def kt_values(algebra: GradedAlgebra, w1, w2, fixed=()) -> KTResult:
    fixed = list(fixed)
    if len(fixed) != algebra.n - 2:
        raise ValueError(f"need n - 2 = {algebra.n - 2} fixed classes, got {len(fixed)}")
    v12 = _real(mixed_intersection(algebra, w1, w2, *fixed))
    v11 = _real(mixed_intersection(algebra, w1, w1, *fixed))
    v22 = _real(mixed_intersection(algebra, w2, w2, *fixed))
    return KTResult(v12, v11, v22, proportional(w1, w2))


def kt_check(algebra: GradedAlgebra, w1, w2, fixed=(), fixture: str | None = None) -> VerificationReport:
    """V(w1,w2,...)^2 >= V(w1,w1,...) V(w2,w2,...), exact.

    Proportional pairs must give equality. w1 and w2 are coordinate vectors
    and must be polarized points; fixed classes are taken as given.
    """
    fixture = fixture or algebra.name
    rep = VerificationReport()
    pt = fmt_point(list(w1)) + ["|"] + fmt_point(list(w2))
    for w in (w1, w2):
        if not is_polarized(algebra, list(w)):
            rep.add(Record(fixture, fmt_point(list(w)), "kt_precondition", "class not polarized",
                           EXACT, 0.0, False))
            return rep
    r = kt_values(algebra, w1, w2, fixed)
    m = r.margin
    detail = (f"V12={fmt_rational(r.v12)} V11={fmt_rational(r.v11)} V22={fmt_rational(r.v22)} "
              f"margin={fmt_rational(m)} proportional={r.proportional}")
    rep.add(Record(fixture, pt, "kt_inequality", detail, EXACT, float(max(0, -m)), m >= 0))
    if r.proportional:
        rep.add(Record(fixture, pt, "kt_equality_proportional", detail, EXACT, float(abs(m)), m == 0))
    return rep


@dataclass
class ScanRow:
    s: Fraction
    in_cone: bool
    V: object = None
    d1: object = None
    d2: object = None

    @property
    def neg_log_second(self):
        """(-log V)'' = (V'^2 - V V'') / V^2."""
        return (self.d1 * self.d1 - self.V * self.d2) / (self.V * self.V)

    @property
    def kt_defect(self):
        """V'^2 - 2 V V''; equals 4 (V12^2 - V11 V22) along the segment, so it is
        constant in s, nonnegative by KT, and zero exactly for proportional ends."""
        return self.d1 * self.d1 - 2 * self.V * self.d2


def log_convexity_scan(algebra: GradedAlgebra, w1, w2, fixed=(), steps: int = 10,
                       s_values=None) -> list:
    """Rows at s = i/steps of V(s) = V(w(s), w(s), fixed) with w(s) = (1-s) w1 + s w2.

    Derivatives in s come from jet arithmetic; every step is re-tested for
    polarization and rows outside the cone carry no values.
    """
    fixed_cls = [_as_class(algebra, f) for f in fixed]
    if len(fixed_cls) != algebra.n - 2:
        raise ValueError(f"need n - 2 = {algebra.n - 2} fixed classes, got {len(fixed_cls)}")
    w1 = [Fraction(x) if not isinstance(x, GaussQ) else x for x in w1]
    w2 = [Fraction(x) if not isinstance(x, GaussQ) else x for x in w2]
    d = [b - a for a, b in zip(w1, w2)]
    rows = []
    if s_values is None:
        s_values = [Fraction(i, steps) for i in range(steps + 1)] if steps > 0 else []
    tail = None
    if fixed_cls:
        tail = fixed_cls[0]
        for c in fixed_cls[1:]:
            tail = tail * c
    for s in s_values:
        s = Fraction(s)
        pt = [a + s * dd for a, dd in zip(w1, d)]
        if not is_polarized(algebra, pt):
            rows.append(ScanRow(s, False))
            continue
        jt = [Jet2.variable(GaussQ.coerce(x), GaussQ.coerce(dd)) for x, dd in zip(pt, d)]
        w = CohomClass(algebra, _jet_class(algebra, jt))
        prod = w * w
        if tail is not None:
            prod = prod * CohomClass(algebra, list(tail.coeffs))
        V = integrate(prod)
        rows.append(ScanRow(s, True, _real(V.c0), _real(V.c1), _real(V.dd(1, 1))))
    return rows


def _jet_class(algebra: GradedAlgebra, t) -> list:
    v = [0] * algebra.rank
    for j, tj in enumerate(t):
        for i, c in enumerate(algebra.e_vector(j)):
            if c:
                v[i] = v[i] + tj * c
    return v


def log_convexity_check(algebra: GradedAlgebra, w1, w2, fixed=(), steps: int = 10,
                        fixture: str | None = None) -> VerificationReport:
    fixture = fixture or algebra.name
    rep = VerificationReport()
    prop = proportional(w1, w2)
    for row in log_convexity_scan(algebra, w1, w2, fixed, steps):
        pt = [fmt_rational(row.s)]
        if not row.in_cone:
            rep.add(Record(fixture, pt, "log_convexity", "segment leaves the cone", EXACT, 0.0, False))
            continue
        val = row.neg_log_second
        rep.add(Record(fixture, pt, "log_convexity", f"(-log V)''={fmt_rational(val)}", EXACT,
                       float(max(0, -val)), val >= 0))
        D = row.kt_defect
        ok = D == 0 if prop else D >= 0
        rep.add(Record(fixture, pt, "kt_defect", f"V'^2-2VV''={fmt_rational(D)} proportional={prop}",
                       EXACT, float(abs(D) if prop else max(0, -D)), ok))
    return rep


# ---------------------------------------------------------------------------
# effective Brunn-Minkowski
# ---------------------------------------------------------------------------

def _jet_volume(algebra: GradedAlgebra, t, zeta, mode: str):
    conv = converter(mode)
    jt = [Jet2.variable(to_field(x, mode), conv(z) if z else conv(0)) for x, z in zip(t, zeta)]
    w = CohomClass(algebra, _jet_class(algebra, jt))
    p = w
    for _ in range(algebra.n - 1):
        p = p * w
    return integrate(p) / factorial(algebra.n)


def effective_bm(algebra: GradedAlgebra, t, zeta, mode: str = EXACT):
    """(lhs, rhs) = ((-log|X|)_{zeta zeta}, ||theta_zeta||^2 / |X|)."""
    if not any(zeta):
        raise ValueError("direction zeta must be nonzero")
    V = _jet_volume(algebra, t, zeta, mode)
    v0, v1, v2 = V.c0, V.c1, V.dd(1, 1)
    lhs = (v1 * v1 - v0 * v2) / (v0 * v0)
    s = build(algebra, t, mode)
    u = real_class(algebra, zeta, mode)
    rhs = s.norm2(u) / v0
    return lhs, rhs


def h00_consistency(algebra: GradedAlgebra, t, zeta, mode: str = EXACT):
    """(Theta_{zeta zeta} 1, 1) / |X| from the Higgs curvature, to compare with effective_bm."""
    lhs, _ = h00_curvature(algebra, t, zeta, mode)
    return lhs / _jet_volume(algebra, t, zeta, mode).c0


def unit_connection(algebra: GradedAlgebra, t, zeta, mode: str = EXACT):
    """(||d^h_zeta 1||^2, n^2 a_zeta^2 |X|), where theta_zeta 1 = omega a_zeta + b_zeta."""
    if not any(zeta):
        raise ValueError("direction zeta must be nonzero")
    s = jet_structure(algebra, t, mode, d1=list(zeta))
    one = [0] * algebra.rank
    one[algebra.unit_index] = converter(mode)(1)
    conn = linalg.matvec(linalg.matmul(value(s.gram_inv), part(s.gram, "c1")), one)
    g0 = value(s.gram)
    lhs = sum((linalg.conj(y) * x for y, x in zip(conn, linalg.matvec(g0, conn)) if x and y), 0)
    base = build(algebra, t, mode)
    a = _unit_coefficient(algebra, base, zeta, mode)
    vol = value(_jet_volume(algebra, t, zeta, mode))
    return lhs, algebra.n ** 2 * a * a * vol


def _unit_coefficient(algebra, s, zeta, mode):
    u = CohomClass(algebra, real_class(algebra, zeta, mode))
    dec = primitive_decomposition(u, s)
    return dec.components[1].coeffs[algebra.unit_index] if 1 in dec.components else 0


# ---------------------------------------------------------------------------
# surfaces
# ---------------------------------------------------------------------------

def _require_surface(algebra: GradedAlgebra):
    if algebra.n != 2:
        raise ValueError(f"the surface suite requires n = 2, algebra has n = {algebra.n}")


@dataclass
class PrimitiveCoeffs2D:
    """theta_zeta 1 = omega a_zeta + b_zeta with b_zeta primitive."""

    zeta: tuple
    a: object
    b: CohomClass


def primitive_coeffs_2d(algebra: GradedAlgebra, t, zeta, mode: str = EXACT,
                        structure: LefschetzStructure | None = None) -> PrimitiveCoeffs2D:
    _require_surface(algebra)
    s = structure or build(algebra, t, mode)
    u = CohomClass(algebra, real_class(algebra, zeta, mode))
    dec = primitive_decomposition(u, s)
    a = _unit_coefficient(algebra, s, zeta, mode)
    b = dec.components.get(0, CohomClass(algebra, [0] * algebra.rank))
    return PrimitiveCoeffs2D(tuple(zeta), a, b)


def b_pair(algebra: GradedAlgebra, s: LefschetzStructure, bz: CohomClass, be: CohomClass):
    """b_{zeta eta} from b_zeta b_eta = b_{zeta eta} omega^2."""
    w = CohomClass(algebra, list(s.omega))
    return integrate(bz * be) / integrate(w * w)


def surface_coeffs(algebra, t, dirs, mode=EXACT, structure=None):
    """a_d for each direction and b_{de} for each pair, on one structure."""
    s = structure or build(algebra, t, mode)
    pcs = [primitive_coeffs_2d(algebra, t, d, mode, structure=s) for d in dirs]
    a = [pc.a for pc in pcs]
    b = [[b_pair(algebra, s, p.b, q.b) for q in pcs] for p in pcs]
    vol = integrate(CohomClass(algebra, list(s.omega)) * CohomClass(algebra, list(s.omega))) / 2
    return a, b, vol


def _d(x):
    return jet_part(x, "c1")


def _v(x):
    return jet_part(x, "c0")


def verify_n2_derivative_identities(algebra: GradedAlgebra, t, zeta, eta, lam, mode: str = EXACT,
                                    fixture: str | None = None) -> VerificationReport:
    """a_{eta,zeta} = b_{zeta eta} - a_eta a_zeta and
    b_{zeta eta,lambda} = -a_zeta b_{eta lambda} - a_eta b_{zeta lambda} - 2 a_lambda b_{zeta eta}."""
    _require_surface(algebra)
    fixture = fixture or algebra.name
    rep = VerificationReport()
    pt = fmt_point(t)
    a0, b0, _ = surface_coeffs(algebra, t, [zeta, eta, lam], mode)
    Z, E, Lm = 0, 1, 2
    sz = jet_structure(algebra, t, mode, d1=list(zeta))
    az, _, _ = surface_coeffs(algebra, t, [eta], mode, structure=sz)
    lhs = _d(az[0])
    rhs = b0[Z][E] - a0[E] * a0[Z]
    res, ok = residual(lhs, rhs, mode, scale=_scale(mode, b0[Z][E], a0[E] * a0[Z]))
    rep.add(Record(fixture, pt, "surface_a_derivative", _dirs(zeta, eta, lam), mode, res, ok))
    sl = jet_structure(algebra, t, mode, d1=list(lam))
    _, bl, _ = surface_coeffs(algebra, t, [zeta, eta], mode, structure=sl)
    lhs = _d(bl[0][1])
    terms = (a0[Z] * b0[E][Lm], a0[E] * b0[Z][Lm], 2 * a0[Lm] * b0[Z][E])
    rhs = -terms[0] - terms[1] - terms[2]
    res, ok = residual(lhs, rhs, mode, scale=_scale(mode, *terms))
    rep.add(Record(fixture, pt, "surface_b_derivative", _dirs(zeta, eta, lam), mode, res, ok))
    return rep


def _scale(mode, *xs) -> float:
    return 0.0 if mode == EXACT else max(abs(x) for x in xs)


def _dirs(*ds) -> str:
    names = ("zeta", "eta", "lambda")
    return " ".join(f"{n}=({','.join(fmt_point(d))})" for n, d in zip(names, ds))


@dataclass
class SurfaceCurvature:
    curvature: object          # (Theta_zz theta_eta, theta_eta)
    norm_prod: object          # ||theta_zeta theta_eta||^2
    norm_adj: object           # ||theta_zeta^* theta_eta||^2
    closed_R: object           # 16 a_eta a_zeta b_{zeta eta} |X|
    closed_prod: object        # 4 (b + a a)^2 |X|
    closed_adj: object         # 4 (b - a a)^2 |X|
    conn_norm: object          # ||d^h_zeta theta_eta||^2
    closed_conn: object        # 8 (b_ze^2 - a_e^2 b_zz) |X|
    second_norm: object        # (||theta_eta||^2)_{zeta zeta}
    closed_second: object      # 8 (b_ze^2 - a_e^2 b_zz - 2 a_e a_z b_ze) |X|
    a_zeta: object
    a_eta: object
    b_zz: object
    b_ze: object
    volume: object


def surface_curvature(algebra: GradedAlgebra, t, zeta, eta, mode: str = EXACT) -> SurfaceCurvature:
    _require_surface(algebra)
    theta, s = real_curvature(algebra, t, zeta, mode)
    u = real_class(algebra, eta, mode)
    h = s.gram
    g0 = value(h)
    ginv = value(s.gram_inv)
    g1 = part(h, "c1")
    g2 = second(h, 1, 1)

    def hv(x, y):
        mx = linalg.matvec(g0, x)
        return sum((linalg.conj(yi) * xi for yi, xi in zip(y, mx) if yi and xi), 0)

    curv = hv(linalg.matvec(theta, u), u)
    tz = theta_real(algebra, zeta, mode)
    prod = linalg.matvec(tz, u)
    adj = linalg.matmul(ginv, linalg.matmul(linalg.conj_transpose(tz), g0))
    adju = linalg.matvec(adj, u)
    conn = linalg.matvec(linalg.matmul(ginv, g1), u)
    second_norm = sum((linalg.conj(yi) * xi for yi, xi in zip(u, linalg.matvec(g2, u)) if yi and xi), 0)

    a, b, vol = surface_coeffs(algebra, t, [zeta, eta], mode)
    az, ae = a
    bzz, bze = b[0][0], b[0][1]
    return SurfaceCurvature(
        curvature=curv,
        norm_prod=hv(prod, prod),
        norm_adj=hv(adju, adju),
        closed_R=16 * ae * az * bze * vol,
        closed_prod=4 * (bze + ae * az) ** 2 * vol,
        closed_adj=4 * (bze - ae * az) ** 2 * vol,
        conn_norm=hv(conn, conn),
        closed_conn=8 * (bze * bze - ae * ae * bzz) * vol,
        second_norm=second_norm,
        closed_second=8 * (bze * bze - ae * ae * bzz - 2 * ae * az * bze) * vol,
        a_zeta=az, a_eta=ae, b_zz=bzz, b_ze=bze, volume=vol,
    )


def verify_n2_curvature(algebra: GradedAlgebra, t, zeta, eta, mode: str = EXACT,
                        fixture: str | None = None) -> VerificationReport:
    fixture = fixture or algebra.name
    rep = VerificationReport()
    pt = fmt_point(t)
    c = surface_curvature(algebra, t, zeta, eta, mode)
    det = _dirs(zeta, eta)
    checks = [
        ("surface_R_difference", c.curvature, c.norm_prod - c.norm_adj),
        ("surface_R_closed", c.curvature, c.closed_R),
        ("surface_norm_product", c.norm_prod, c.closed_prod),
        ("surface_norm_adjoint", c.norm_adj, c.closed_adj),
        ("surface_connection_norm", c.conn_norm, c.closed_conn),
        ("surface_norm_second_derivative", c.second_norm, c.closed_second),
    ]
    # float residuals relative to the largest ingredient: several sides vanish
    scale = 0.0 if mode == EXACT else max(abs(x) for _, l, r in checks for x in (l, r))
    scale = max(scale, 0.0 if mode == EXACT else abs(c.volume))
    for ident, lhs, rhs in checks:
        res, ok = residual(lhs, rhs, mode, scale=scale)
        rep.add(Record(fixture, pt, ident, det, mode, res, ok))
    return rep


def bridge_check(coords, fixture: str = "P1^n") -> VerificationReport:
    """On (P^1)^n the class sum_j a_j e_j corresponds to the box with sides a_j.

    Both sides are the permanent of the coordinate matrix:
    mixed_intersection(w_1..w_n) = mixed_volume(box(w_1), ..., box(w_n)).
    """
    from . import convex
    from .algebra import product_of_projective_spaces

    coords = [list(c) for c in coords]
    n = len(coords)
    alg = product_of_projective_spaces(*([1] * n))
    lhs = _real(mixed_intersection(alg, *coords))
    rhs = convex.mixed_volume(*[convex.Box(c) for c in coords])
    rep = VerificationReport()
    pts = [" ".join(fmt_point(c)) for c in coords]
    rep.add(Record(fixture, pts, "bridge_mixed_intersection_volume",
                   f"V={fmt_rational(lhs)} MV={fmt_rational(rhs)}", EXACT, float(abs(lhs - rhs)), lhs == rhs))
    return rep
