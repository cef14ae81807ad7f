"""Exact volumes and mixed volumes of boxes (any dimension) and convex polygons.

Mixed volumes follow the coefficient convention: mixed_volume(A_1..A_n) is the
coefficient of t_1 ... t_n in |t_1 A_1 + ... + t_n A_n|, which is n! times the
normalized mixed volume. So mixed_volume(A, ..., A) = n! |A|.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from itertools import product
from math import factorial, prod

import mpmath

from .report import Record, VerificationReport
from .scalars import fmt_rational, parse_rational


class ConvexError(ValueError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return parse_rational(x)


@dataclass(frozen=True)
class Box:
    """Axis-parallel box [0, a_1] x ... x [0, a_n]; zero sides give degenerate boxes."""

    sides: tuple

    def __init__(self, sides):
        s = tuple(_frac(x) for x in sides)
        if not s:
            raise ConvexError("a box needs at least one side")
        if any(x < 0 for x in s):
            raise ConvexError(f"box sides must be nonnegative, got {[fmt_rational(x) for x in s]}")
        object.__setattr__(self, "sides", s)

    @property
    def dim(self) -> int:
        return len(self.sides)

    @property
    def is_body(self) -> bool:
        return all(x > 0 for x in self.sides)

    def scaled(self, c) -> Box:
        return Box([c * x for x in self.sides])

    def __str__(self):
        return "box(" + ", ".join(fmt_rational(x) for x in self.sides) + ")"


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _vcross(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class Polygon:
    """Convex polygon as a CCW vertex list starting at the lowest-leftmost vertex.

    Collinear and repeated vertices are dropped. Points and segments are
    accepted only with ``degenerate=True`` (useful as Minkowski summands).
    """

    vertices: tuple

    def __init__(self, vertices, degenerate: bool = False):
        pts = [(_frac(x), _frac(y)) for x, y in vertices]
        object.__setattr__(self, "vertices", _normalize(pts, degenerate))

    @classmethod
    def _trusted(cls, verts) -> Polygon:
        obj = object.__new__(cls)
        object.__setattr__(obj, "vertices", tuple(verts))
        return obj

    dim = 2

    @property
    def is_body(self) -> bool:
        return len(self.vertices) >= 3

    def scaled(self, c) -> Polygon:
        c = _frac(c)
        if c < 0:
            raise ConvexError("only nonnegative scalings are supported")
        if c == 0:
            return Polygon._trusted([(Fraction(0), Fraction(0))])
        return Polygon._trusted([(c * x, c * y) for x, y in self.vertices])

    def edges(self) -> list:
        v = self.vertices
        m = len(v)
        if m == 1:
            return []
        return [(v[(i + 1) % m][0] - v[i][0], v[(i + 1) % m][1] - v[i][1]) for i in range(m)]

    def __str__(self):
        return "polygon(" + ", ".join(f"({fmt_rational(x)},{fmt_rational(y)})" for x, y in self.vertices) + ")"


def _start_index(pts) -> int:
    return min(range(len(pts)), key=lambda i: (pts[i][1], pts[i][0]))


def _normalize(pts, degenerate: bool) -> tuple:
    dedup = []
    for p in pts:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    if len(set(dedup)) != len(dedup):
        raise ConvexError("polygon repeats a vertex")
    area2 = sum(_vcross(dedup[i], dedup[(i + 1) % len(dedup)]) for i in range(len(dedup))) if len(dedup) > 2 else 0
    if area2 == 0:
        if not degenerate:
            raise ConvexError("polygon has empty interior (pass degenerate=True for points and segments)")
        return _degenerate(dedup)
    if area2 < 0:
        dedup.reverse()
    # drop collinear vertices, then insist on strict left turns
    changed = True
    while changed and len(dedup) > 3:
        changed = False
        for i in range(len(dedup)):
            a, b, c = dedup[i - 1], dedup[i], dedup[(i + 1) % len(dedup)]
            cr = _cross(a, b, c)
            if cr == 0 and (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]) > 0:
                del dedup[i]
                changed = True
                break
    m = len(dedup)
    for i in range(m):
        if _cross(dedup[i - 1], dedup[i], dedup[(i + 1) % m]) <= 0:
            raise ConvexError("polygon is not convex")
    # a convex polygon turns exactly once around
    winding = sum(1 for i in range(m) if _half(_sub(dedup[(i + 1) % m], dedup[i])) !=
                  _half(_sub(dedup[i], dedup[i - 1])))
    if winding > 2:
        raise ConvexError("polygon is not convex (self-intersecting vertex order)")
    s = _start_index(dedup)
    return tuple(dedup[s:] + dedup[:s])


def _degenerate(pts) -> tuple:
    """Hull of collinear points: one point or the two extreme points."""
    if len(pts) == 1:
        return (pts[0],)
    o = pts[0]
    d = None
    for p in pts[1:]:
        if p != o:
            d = _sub(p, o)
            break
    key = lambda p: (p[0] - o[0]) * d[0] + (p[1] - o[1]) * d[1]
    lo, hi = min(pts, key=key), max(pts, key=key)
    seg = [lo, hi]
    s = _start_index(seg)
    return tuple(seg[s:] + seg[:s])


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _half(v) -> int:
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _angle_cmp(u, v) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    c = _vcross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


def polygon(*vertices, degenerate: bool = False) -> Polygon:
    return Polygon(vertices, degenerate=degenerate)


def box(*sides) -> Box:
    return Box(sides)


def _check_same(a, b):
    if type(a) is not type(b):
        raise ConvexError(f"cannot add a {type(a).__name__} and a {type(b).__name__}")
    if a.dim != b.dim:
        raise ConvexError(f"dimension mismatch: {a.dim} vs {b.dim}")


def minkowski_sum(a, b):
    """Boxes add side-wise; polygons merge their edge sequences by angle."""
    _check_same(a, b)
    if isinstance(a, Box):
        return Box([x + y for x, y in zip(a.sides, b.sides)])
    edges = sorted(a.edges() + b.edges(), key=cmp_to_key(_angle_cmp))
    merged = []
    for e in edges:
        if merged and _angle_cmp(merged[-1], e) == 0:
            merged[-1] = (merged[-1][0] + e[0], merged[-1][1] + e[1])
        else:
            merged.append(e)
    p0 = a.vertices[0]
    q0 = b.vertices[0]
    cur = (p0[0] + q0[0], p0[1] + q0[1])
    verts = [cur]
    for e in merged[:-1]:
        cur = (cur[0] + e[0], cur[1] + e[1])
        verts.append(cur)
    if len(verts) == 2 and verts[0] == verts[1]:
        verts = verts[:1]
    return Polygon._trusted(verts)


def volume(body) -> Fraction:
    """Box: product of sides. Polygon: shoelace formula."""
    if isinstance(body, Box):
        return prod(body.sides, start=Fraction(1))
    v = body.vertices
    if len(v) < 3:
        return Fraction(0)
    return sum((_vcross(v[i], v[(i + 1) % len(v)]) for i in range(len(v))), Fraction(0)) / 2


def combination(bodies, coeffs):
    """sum_i c_i A_i for nonnegative rationals c_i."""
    out = None
    for c, body in zip(coeffs, bodies):
        term = body.scaled(c)
        out = term if out is None else minkowski_sum(out, term)
    return out


@lru_cache(maxsize=None)
def _lagrange_coeffs(m: int) -> tuple:
    """C[k][a] = coefficient of x^a in the Lagrange basis polynomial of node k on {1..m+1}."""
    nodes = [Fraction(i) for i in range(1, m + 2)]
    table = []
    for k, xk in enumerate(nodes):
        poly = [Fraction(1)]
        denom = Fraction(1)
        for i, xi in enumerate(nodes):
            if i == k:
                continue
            poly = [Fraction(0)] + poly
            for d in range(len(poly) - 1):
                poly[d] -= xi * poly[d + 1]
            denom *= xk - xi
        table.append(tuple(c / denom for c in poly))
    return tuple(table)


def _check_family(bodies):
    bodies = list(bodies)
    if not bodies:
        raise ConvexError("need at least one body")
    for b in bodies[1:]:
        _check_same(bodies[0], b)
    return bodies


def volume_polynomial(bodies) -> dict:
    """Coefficients of p(t) = |t_1 A_1 + ... + t_m A_m| keyed by exponent tuples.

    Tensor Lagrange interpolation on the grid {1, ..., n+1}^m, n = dimension.
    """
    bodies = _check_family(bodies)
    n = bodies[0].dim
    m = len(bodies)
    C = _lagrange_coeffs(n)
    values = {g: volume(combination(bodies, [Fraction(x) for x in g]))
              for g in product(range(1, n + 2), repeat=m)}
    out = {}
    for alpha in product(range(n + 1), repeat=m):
        if sum(alpha) != n:
            continue
        c = Fraction(0)
        for g, val in values.items():
            if val:
                c += val * prod((C[g[i] - 1][alpha[i]] for i in range(m)), start=Fraction(1))
        if c:
            out[alpha] = c
    return out


def mixed_volume(*bodies) -> Fraction:
    """Coefficient of t_1 ... t_n in |t_1 A_1 + ... + t_n A_n| (n! times the normalized value)."""
    bodies = _check_family(bodies)
    n = bodies[0].dim
    if len(bodies) != n:
        raise ConvexError(f"mixed volume in dimension {n} needs {n} bodies, got {len(bodies)}")
    C = _lagrange_coeffs(n)
    total = Fraction(0)
    for g in product(range(1, n + 2), repeat=n):
        w = prod((C[x - 1][1] for x in g), start=Fraction(1))
        if w:
            total += w * volume(combination(bodies, [Fraction(x) for x in g]))
    return total


def homothety_ratio(a, b):
    """c > 0 with b = c a + v (translations ignored), or None."""
    _check_same(a, b)
    if not a.is_body or not b.is_body:
        return None
    if isinstance(a, Box):
        c = b.sides[0] / a.sides[0]
        return c if all(y == c * x for x, y in zip(a.sides, b.sides)) else None
    if len(a.vertices) != len(b.vertices):
        return None
    c = None
    for u, v in zip(a.edges(), b.edges()):
        k = v[0] / u[0] if u[0] else v[1] / u[1]
        if k <= 0 or (v[0], v[1]) != (k * u[0], k * u[1]) or (c is not None and k != c):
            return None
        c = k
    return c


def homothetic(a, b) -> bool:
    return homothety_ratio(a, b) is not None


@dataclass
class BMResult:
    dim: int
    vol_sum: Fraction
    vol_a: Fraction
    vol_b: Fraction
    sign: int         # sign of |A+B|^{1/n} - |A|^{1/n} - |B|^{1/n}
    homothetic: bool
    margin: object    # exact rational for n <= 2, interval midpoint string otherwise


def _root_sign(x: Fraction, a: Fraction, b: Fraction, n: int):
    """Sign of x^{1/n} - a^{1/n} - b^{1/n}."""
    if n == 1:
        d = x - a - b
        return (d > 0) - (d < 0), d
    if n == 2:
        # x >= a + b + 2 sqrt(ab)  <=>  s := x - a - b >= 0 and s^2 >= 4ab
        s = x - a - b
        if s < 0:
            return -1, s
        q = s * s - 4 * a * b
        return (q > 0) - (q < 0), q
    for prec in (64, 256, 1024, 4096):
        with mpmath.workprec(prec):
            iv = mpmath.iv
            val = (iv.mpf([x.numerator, x.numerator]) / x.denominator) ** (iv.mpf(1) / n) \
                - (iv.mpf([a.numerator, a.numerator]) / a.denominator) ** (iv.mpf(1) / n) \
                - (iv.mpf([b.numerator, b.numerator]) / b.denominator) ** (iv.mpf(1) / n)
            if val.a > 0:
                return 1, val.mid
            if val.b < 0:
                return -1, val.mid
    return 0, Fraction(0)


def bm_values(a, b) -> BMResult:
    _check_same(a, b)
    n = a.dim
    x, va, vb = volume(minkowski_sum(a, b)), volume(a), volume(b)
    c = homothety_ratio(a, b)
    if c is not None and n > 2 and x == (1 + c) ** n * va and vb == c ** n * va:
        # B = cA: |A+B|^{1/n} = (1+c)|A|^{1/n} = |A|^{1/n} + |B|^{1/n}, checked exactly
        return BMResult(n, x, va, vb, 0, True, Fraction(0))
    sign, margin = _root_sign(x, va, vb, n)
    return BMResult(n, x, va, vb, sign, c is not None, margin)


def bm_check(a, b, label: str = "bodies") -> VerificationReport:
    """|A+B|^{1/n} >= |A|^{1/n} + |B|^{1/n}, equality for homothets."""
    r = bm_values(a, b)
    rep = VerificationReport()
    detail = (f"|A+B|={fmt_rational(r.vol_sum)} |A|={fmt_rational(r.vol_a)} |B|={fmt_rational(r.vol_b)} "
              f"sign={r.sign} homothetic={r.homothetic}")
    rep.add(Record(label, [str(a), str(b)], "brunn_minkowski", detail, "exact", 0.0 if r.sign >= 0 else 1.0,
                   r.sign >= 0))
    if r.homothetic:
        rep.add(Record(label, [str(a), str(b)], "brunn_minkowski_equality", detail, "exact",
                       0.0 if r.sign == 0 else 1.0, r.sign == 0))
    return rep


@dataclass
class AFResult:
    v12: Fraction
    v11: Fraction
    v22: Fraction

    @property
    def margin(self) -> Fraction:
        return self.v12 * self.v12 - self.v11 * self.v22


def af_values(*bodies) -> AFResult:
    bodies = _check_family(bodies)
    a1, a2, rest = bodies[0], bodies[1], bodies[2:]
    return AFResult(mixed_volume(a1, a2, *rest), mixed_volume(a1, a1, *rest), mixed_volume(a2, a2, *rest))


def af_check(*bodies, label: str = "bodies") -> VerificationReport:
    r = af_values(*bodies)
    m = r.margin
    rep = VerificationReport()
    detail = (f"V12={fmt_rational(r.v12)} V11={fmt_rational(r.v11)} V22={fmt_rational(r.v22)} "
              f"margin={fmt_rational(m)}")
    rep.add(Record(label, [str(b) for b in bodies], "alexandrov_fenchel", detail, "exact",
                   float(max(0, -m)), m >= 0))
    return rep


def neg_log_volume_second(a0, a1, steps: int = 10) -> list:
    """(s, (-log|A_s|)'') on s = i/steps for A_s = s A1 + (1-s) A0, exact.

    p(s) = |A_s| is a polynomial of degree n; it is interpolated from n+1
    exact evaluations. Points where p vanishes are returned with None.
    """
    _check_same(a0, a1)
    n = a0.dim
    nodes = [Fraction(i, n) for i in range(n + 1)]
    vals = [volume(minkowski_sum(a1.scaled(s), a0.scaled(1 - s))) for s in nodes]
    coeffs = _interpolate(nodes, vals)
    out = []
    for i in range(steps + 1):
        s = Fraction(i, steps) if steps else Fraction(0)
        p = sum((c * s ** k for k, c in enumerate(coeffs)), Fraction(0))
        d1 = sum((k * c * s ** (k - 1) for k, c in enumerate(coeffs) if k >= 1), Fraction(0))
        d2 = sum((k * (k - 1) * c * s ** (k - 2) for k, c in enumerate(coeffs) if k >= 2), Fraction(0))
        out.append((s, None if p == 0 else (d1 * d1 - p * d2) / (p * p)))
        if not steps:
            break
    return out


def _interpolate(nodes, vals) -> list:
    """Monomial coefficients of the interpolating polynomial (exact)."""
    m = len(nodes)
    coeffs = [Fraction(0)] * m
    for k, (xk, yk) in enumerate(zip(nodes, vals)):
        poly = [Fraction(1)]
        denom = Fraction(1)
        for i, xi in enumerate(nodes):
            if i == k:
                continue
            poly = [Fraction(0)] + poly
            for d in range(len(poly) - 1):
                poly[d] -= xi * poly[d + 1]
            denom *= xk - xi
        for d, c in enumerate(poly):
            coeffs[d] += yk * c / denom
    return coeffs


def log_convexity_check(a0, a1, steps: int = 10, label: str = "bodies") -> VerificationReport:
    rep = VerificationReport()
    for s, val in neg_log_volume_second(a0, a1, steps):
        if val is None:
            rep.add(Record(label, [fmt_rational(s)], "neg_log_volume_convex", "zero volume, skipped",
                           "exact", 0.0, True))
            continue
        rep.add(Record(label, [fmt_rational(s)], "neg_log_volume_convex", f"(-log|A_s|)''={fmt_rational(val)}",
                       "exact", float(max(0, -val)), val >= 0))
    return rep


def read_polygons(text: str) -> list:
    """Polygons from text: one "x y" vertex per line, blank lines between polygons,
    '#' starts a comment. Coordinates are integers or "p/q"."""
    polys, cur = [], []
    for raw in text.splitlines() + [""]:
        line = raw.split("#", 1)[0].strip()
        if not line:
            if cur:
                polys.append(Polygon(cur))
                cur = []
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ConvexError(f"expected 'x y' per line, got {raw!r}")
        cur.append((parse_rational(parts[0]), parse_rational(parts[1])))
    return polys


def unit_square() -> Polygon:
    return Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])


def standard_triangle() -> Polygon:
    return Polygon([(0, 0), (1, 0), (0, 1)])
