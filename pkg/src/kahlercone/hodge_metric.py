"""Lu's Hodge metric on the complexified Kahler cone and its curvature.

The metric is the pull back through theta of the Hilbert-Schmidt pairing on
End(H): G_{j kbar} = tr(theta_j theta_k^*). Two comparison flavors are kept:
the same trace restricted to the p = q block, and the Weil-Petersson type
metric h(e_j, e_k) on H^{1,1}.

Holomorphic sectional curvature is normalized so that the half-plane metric
(z + zbar)^{-2} has HSC = -4; reports also carry HSC / 2.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import norm, qmc

from . import linalg
from .algebra import GradedAlgebra
from .higgs import JetProbe, deriv, higgs_theta, second, value
from .lefschetz import LefschetzStructure, build, converter, is_polarized, NotPolarizedError
from .report import Record, VerificationReport, fmt_point, residual
from .scalars import EXACT, FLOAT, GaussQ, fmt_rational

LU = "lu"
LU_H0 = "lu-h0"
WP = "wp"
FLAVORS = (LU, LU_H0, WP)
_ALIASES = {
    "lu_hodge": LU, "lu_hodge_on_H0": LU_H0, "lu_hodge_on_h0": LU_H0, "h0": LU_H0,
    "weil_petersson": WP,
}


def canonical_flavor(flavor: str) -> str:
    f = _ALIASES.get(flavor, flavor)
    if f not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}; expected one of {', '.join(FLAVORS)}")
    return f


def _h0_indices(algebra: GradedAlgebra) -> list:
    return [i for i, (p, q) in enumerate(algebra.degree_of) if p == q]


def rank_h0(algebra: GradedAlgebra) -> int:
    return len(_h0_indices(algebra))


def metric_matrix(s: LefschetzStructure, flavor: str = LU) -> list:
    """G_{j kbar} evaluated on a (possibly jet-valued) Lefschetz structure."""
    flavor = canonical_flavor(flavor)
    alg = s.algebra
    N = alg.N
    if flavor == WP:
        conv = converter(s.mode)
        evecs = [[conv(c) if c else 0 for c in alg.e_vector(j)] for j in range(N)]
        return [[s.h(evecs[j], evecs[k]) for k in range(N)] for j in range(N)]
    thetas = [higgs_theta(alg, j, s.mode) for j in range(N)]
    adjs = [s.adjoint(th) for th in thetas]
    idx = _h0_indices(alg) if flavor == LU_H0 else range(alg.rank)
    G = linalg.zeros(N, N)
    for j in range(N):
        for k in range(N):
            acc = 0
            th = thetas[j]
            ad = adjs[k]
            # tr(theta_j theta_k^*) restricted to idx; theta_j preserves the p = q block
            for i in idx:
                row = th[i]
                for r, x in enumerate(row):
                    if x:
                        y = ad[r][i]
                        if y:
                            acc = acc + x * y
            G[j][k] = acc
    return G


@dataclass
class MetricField:
    t: tuple
    flavor: str
    mode: str
    G: list
    probe: JetProbe

    @property
    def N(self) -> int:
        return len(self.G)

    def dG(self, l: int) -> list:
        """(1/2) d/dt^l of G, i.e. the holomorphic derivative."""
        s, slot = self.probe.unit_slot(l)
        return linalg.scale(_half(self.mode), deriv(metric_matrix(s, self.flavor), slot))

    def ddG(self, l: int, m: int) -> list:
        """d_l d_mbar G = (1/4) d^2 G / dt^l dt^m."""
        s, sl, sm = self.probe.pair_slots(l, m)
        q = Fraction(1, 4) if self.mode == EXACT else 0.25
        return linalg.scale(q, second(metric_matrix(s, self.flavor), sl, sm))

    def pair(self, v, w) -> object:
        """G(v, wbar) = sum G_{j kbar} v^j conj(w^k)."""
        acc = 0
        for j, vj in enumerate(v):
            if not vj:
                continue
            for k, wk in enumerate(w):
                g = self.G[j][k]
                if wk and g:
                    acc = acc + g * vj * linalg.conj(wk)
        return acc


def _half(mode):
    return Fraction(1, 2) if mode == EXACT else 0.5


def _require_polarized(algebra, t, mode):
    pol = is_polarized(algebra, t, mode)
    if not pol:
        raise NotPolarizedError(f"point {fmt_point(t)} is not polarized: {pol.failures}")


def metric_field(algebra: GradedAlgebra, point, flavor: str = LU, mode: str = EXACT,
                 probe: JetProbe | None = None) -> MetricField:
    flavor = canonical_flavor(flavor)
    t = tuple(point)
    _require_polarized(algebra, t, mode)
    probe = probe or JetProbe(algebra, t, mode)
    G = metric_matrix(build(algebra, t, mode), flavor)
    return MetricField(t, flavor, mode, G, probe)


def lu_metric(algebra: GradedAlgebra, point, mode: str = EXACT, **kw) -> MetricField:
    return metric_field(algebra, point, LU, mode, **kw)


def weil_petersson_metric(algebra: GradedAlgebra, point, mode: str = EXACT, **kw) -> MetricField:
    return metric_field(algebra, point, WP, mode, **kw)


def kahler_check(algebra: GradedAlgebra, point, flavor: str = LU, mode: str = EXACT,
                 field: MetricField | None = None, fixture: str | None = None) -> VerificationReport:
    """Closedness of the Kahler form: d_l G_{j kbar} = d_j G_{l kbar}."""
    field = field or metric_field(algebra, point, flavor, mode)
    fixture = fixture or algebra.name
    rep = VerificationReport()
    N = field.N
    ident = f"kahler_closed_{field.flavor}"
    if N == 1:
        rep.add(Record(fixture, fmt_point(field.t), ident, "N=1 vacuous", mode, 0.0, True))
        return rep
    d = [field.dG(l) for l in range(N)]
    # relative to the whole first-derivative tensor; off-diagonal parts often vanish
    scale = 0.0 if mode == EXACT else max(linalg.max_abs(x) for x in d)
    for l in range(N):
        for j in range(l + 1, N):
            lhs = [d[l][j][k] for k in range(N)]
            rhs = [d[j][l][k] for k in range(N)]
            res, ok = residual([lhs], [rhs], mode, scale=scale)
            rep.add(Record(fixture, fmt_point(field.t), ident, f"l={l + 1} j={j + 1}", mode, res, ok))
    return rep


class CurvatureTensor:
    """R_{j kbar l mbar} = -d_l d_mbar G_{j kbar} + (d_l G) G^{-1} (d_mbar G) entrywise."""

    def __init__(self, field: MetricField):
        self.field = field
        N = field.N
        mode = field.mode
        Ginv = linalg.inverse(field.G)
        dG = [field.dG(l) for l in range(N)]
        # G depends on t only, so d_mbar G = d_m G
        R = {}
        for l in range(N):
            for m in range(l, N):
                dd = field.ddG(l, m)
                Rlm = linalg.sub(linalg.matmul(dG[l], linalg.matmul(Ginv, dG[m])), dd)
                R[(l, m)] = Rlm
                if m != l:
                    R[(m, l)] = linalg.sub(linalg.matmul(dG[m], linalg.matmul(Ginv, dG[l])), dd)
        self._R = R
        self.mode = mode
        self.N = N

    def __call__(self, j: int, k: int, l: int, m: int):
        return self._R[(l, m)][j][k]

    def contract(self, v, vb, w, wb):
        """R(v, conj(vb), w, conj(wb)) = sum R_{j kbar l mbar} v^j conj(vb^k) w^l conj(wb^m)."""
        acc = 0
        N = self.N
        cv = [linalg.conj(x) for x in vb]
        cw = [linalg.conj(x) for x in wb]
        for l in range(N):
            if not w[l]:
                continue
            for m in range(N):
                if not cw[m]:
                    continue
                Rlm = self._R[(l, m)]
                wlm = w[l] * cw[m]
                for j in range(N):
                    if not v[j]:
                        continue
                    row = Rlm[j]
                    for k in range(N):
                        if cv[k] and row[k]:
                            acc = acc + row[k] * v[j] * cv[k] * wlm
        return acc


def curvature_tensor(algebra: GradedAlgebra, point, flavor: str = LU, mode: str = EXACT,
                     field: MetricField | None = None) -> CurvatureTensor:
    return CurvatureTensor(field or metric_field(algebra, point, flavor, mode))


def _real(x, mode):
    if mode == EXACT:
        x = GaussQ.coerce(x)
        return x.re
    return complex(x).real


def _direction(v, mode):
    conv = converter(mode)
    return [conv(x) if x else 0 for x in v]


def holomorphic_sectional_curvature(R: CurvatureTensor, v):
    """HSC(v) = 2 R(v, vbar, v, vbar) / G(v, vbar)^2 (exact or float real)."""
    if not any(v):
        raise ValueError("direction v must be nonzero")
    v = _direction(v, R.mode)
    g = R.field.pair(v, v)
    num = R.contract(v, v, v, v)
    val = (num + num) / (g * g)
    return _real(val, R.mode)


def bisectional_curvature(R: CurvatureTensor, v, w):
    """2 R(v, vbar, w, wbar) / (G(v, vbar) G(w, wbar))."""
    if not any(v) or not any(w):
        raise ValueError("directions must be nonzero")
    v = _direction(v, R.mode)
    w = _direction(w, R.mode)
    num = R.contract(v, v, w, w)
    val = (num + num) / (R.field.pair(v, v) * R.field.pair(w, w))
    return _real(val, R.mode)


def hsc_bound(algebra: GradedAlgebra, flavor: str = LU) -> Fraction:
    """-1/(n^2 Rank H) for the full bundle, -4/(n^2 Rank H^0) for the p = q block."""
    flavor = canonical_flavor(flavor)
    n = algebra.n
    if flavor == LU:
        return Fraction(-1, n * n * algebra.rank)
    if flavor == LU_H0:
        return Fraction(-4, n * n * rank_h0(algebra))
    raise ValueError("no curvature bound is attached to the Weil-Petersson flavor")


def sample_directions(N: int, count: int, seed: int, *, denominator: int = 1000) -> list:
    """Seeded low-discrepancy unit directions in C^N, rounded to Gaussian rationals.

    Halton points in [0,1)^{2N} are pushed through the normal quantile and
    normalized, which spreads them over the unit sphere. Rounding to bounded
    denominators keeps exact arithmetic cheap; HSC is scale invariant so the
    tiny loss of unit length is harmless.
    """
    if count <= 0:
        return []
    sampler = qmc.Halton(d=2 * N, scramble=True, seed=seed)
    pts = sampler.random(count)
    pts = np.clip(pts, 1e-12, 1 - 1e-12)
    gauss = norm.ppf(pts)
    out = []
    for row in gauss:
        z = row[:N] + 1j * row[N:]
        z = z / np.linalg.norm(z)
        vec = []
        for c in z:
            re = Fraction(float(c.real)).limit_denominator(denominator)
            im = Fraction(float(c.imag)).limit_denominator(denominator)
            vec.append(GaussQ(re, im))
        if not any(vec):
            vec[0] = GaussQ(1)
        out.append(vec)
    return out


def fmt_direction(v) -> str:
    parts = []
    for x in v:
        x = GaussQ.coerce(x) if not isinstance(x, complex) else x
        parts.append(str(x))
    return "(" + ", ".join(parts) + ")"


def _direction_for(v, mode):
    if mode == EXACT:
        return v
    return [complex(x) for x in v]


@dataclass
class HSCSample:
    fixture: str
    t: tuple
    flavor: str
    direction: list
    hsc: object
    bound: Fraction
    mode: str

    @property
    def margin(self):
        b = self.bound if self.mode == EXACT else float(self.bound)
        return b - self.hsc

    def row(self) -> list:
        return [self.fixture, " ".join(fmt_point(self.t)), self.flavor, fmt_direction(self.direction),
                _num(self.hsc), _num(self.bound), _num(self.margin), self.mode]


def _num(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return fmt_rational(x)


def _short(x) -> str:
    return f"{float(x):.12g}"


def bound_check(algebra: GradedAlgebra, point, count: int = 200, seed: int = 0,
                mode: str = EXACT, flavors=(LU, LU_H0), bisectional: bool = True,
                fixture: str | None = None, samples: list | None = None) -> VerificationReport:
    """Sample HSC along seeded directions and compare with the curvature bounds."""
    fixture = fixture or algebra.name
    t = tuple(point)
    slack = 0 if mode == EXACT else 1e-9
    rep = VerificationReport(seed=seed)
    probe = JetProbe(algebra, t, mode)
    dirs = sample_directions(algebra.N, count, seed)
    for flavor in flavors:
        flavor = canonical_flavor(flavor)
        field = metric_field(algebra, t, flavor, mode, probe=probe)
        R = CurvatureTensor(field)
        bound = hsc_bound(algebra, flavor)
        b = bound if mode == EXACT else float(bound)
        worst_hsc, worst_bis = None, None
        for v in dirs:
            v = _direction_for(v, mode)
            val = holomorphic_sectional_curvature(R, v)
            if samples is not None:
                samples.append(HSCSample(fixture, t, flavor, v, val, bound, mode))
            if worst_hsc is None or val > worst_hsc:
                worst_hsc = val
        ok = worst_hsc <= b + slack and worst_hsc < 0
        rep.add(Record(fixture, fmt_point(t), f"hsc_bound_{flavor}",
                       f"max HSC={_short(worst_hsc)} (HSC/2={_short(worst_hsc / 2)}) bound={_num(bound)} "
                       f"over {len(dirs)} directions", mode, float(max(0, worst_hsc - b)), ok))
        if bisectional and flavor == LU and len(dirs) > 1:
            for v, w in zip(dirs, dirs[1:] + dirs[:1]):
                val = bisectional_curvature(R, _direction_for(v, mode), _direction_for(w, mode))
                if worst_bis is None or val > worst_bis:
                    worst_bis = val
            ok = worst_bis <= slack
            rep.add(Record(fixture, fmt_point(t), "bisectional_nonpositive",
                           f"max bisectional={_short(worst_bis)} over {len(dirs)} pairs", mode,
                           float(max(0, worst_bis)), ok))
    return rep


CSV_COLUMNS = ["fixture", "t", "flavor", "direction", "HSC", "bound", "margin", "mode"]


def scan_csv(samples: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for s in samples:
        w.writerow(s.row())
    return buf.getvalue()
