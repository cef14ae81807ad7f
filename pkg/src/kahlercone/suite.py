"""Seeded sampling and the full verification run behind ``kahlercone verify``."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import higgs, hodge_metric, inequalities
from .algebra import GradedAlgebra
from .lefschetz import is_polarized
from .report import Record, VerificationReport, fmt_point
from .scalars import EXACT, FLOAT


class SamplingError(RuntimeError):
    pass


def random_points(algebra: GradedAlgebra, count: int, seed: int, *, denominator: int = 1000,
                  spread: float = 0.5, max_tries: int = 200) -> list:
    """Polarized rational points near the sample point, denominators <= ``denominator``.

    Each coordinate is the sample coordinate scaled by exp(u), u uniform in
    [-spread, spread], plus a small additive jitter, then rounded with
    limit_denominator. Unpolarized draws are rejected.
    """
    rng = np.random.default_rng(seed)
    base = [float(x) for x in algebra.sample_point]
    out = []
    tries = 0
    while len(out) < count:
        if tries >= max_tries * max(count, 1):
            raise SamplingError(f"only {len(out)} of {count} polarized points found after {tries} draws")
        tries += 1
        u = rng.uniform(-spread, spread, size=len(base))
        jitter = rng.uniform(-0.1, 0.1, size=len(base))
        t = [Fraction(b * math.exp(x) + j).limit_denominator(denominator) for b, x, j in zip(base, u, jitter)]
        if is_polarized(algebra, t):
            out.append(tuple(t))
    return out


def random_directions(N: int, count: int, seed: int, bound: int = 3) -> list:
    """Nonzero integer directions with entries in [-bound, bound]."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        d = [int(x) for x in rng.integers(-bound, bound + 1, size=N)]
        if any(d):
            out.append(tuple(d))
    return out


def _to_mode(t, mode):
    return tuple(float(x) for x in t) if mode == FLOAT else tuple(t)


def verify_point(algebra: GradedAlgebra, t, mode: str = EXACT, seed: int = 0,
                 fixture: str | None = None) -> VerificationReport:
    fixture = fixture or algebra.name
    pt = _to_mode(t, mode)
    rep = VerificationReport()
    probe = higgs.JetProbe(algebra, pt, mode)
    kw = dict(mode=mode, probe=probe, fixture=fixture)
    rep.extend(higgs.verify_flatness(algebra, pt, **kw))
    rep.extend(higgs.verify_fundamental_identity(algebra, pt, **kw))
    rep.extend(higgs.verify_adjoint_identity(algebra, pt, **kw))
    rep.extend(higgs.verify_chern_connection(algebra, pt, **kw))
    split = higgs.subbundle_split(algebra, pt, mode, probe=probe)
    bad = [k for k, ok in split.block_diagonal.items() if not ok]
    rep.add(Record(fixture, fmt_point(pt), "subbundle_split",
                   f"p-q blocks {split.ranks()}; non-preserving: {bad or 'none'}", mode, 0.0, not bad))

    dirs = random_directions(algebra.N, 3, seed)
    for z in dirs:
        zz = _to_mode(z, mode)
        lhs, rhs = higgs.h00_curvature(algebra, pt, zz, mode)
        rep.extend(_scalar(fixture, pt, "h00_curvature", f"zeta={z}", mode, lhs, rhs))
        lhs, rhs = inequalities.effective_bm(algebra, pt, zz, mode)
        rep.extend(_scalar(fixture, pt, "effective_bm", f"zeta={z}", mode, lhs, rhs))
        rep.extend(_scalar(fixture, pt, "effective_bm_vs_h00", f"zeta={z}", mode, lhs,
                           inequalities.h00_consistency(algebra, pt, zz, mode)))
        lhs, rhs = inequalities.unit_connection(algebra, pt, zz, mode)
        rep.extend(_scalar(fixture, pt, "unit_connection_norm", f"zeta={z}", mode, lhs, rhs))

    rep.extend(hodge_metric.kahler_check(algebra, pt, hodge_metric.LU, mode, fixture=fixture))

    if algebra.n == 2:
        z, e, l = dirs
        zz, ee, ll = (_to_mode(d, mode) for d in dirs)
        rep.extend(inequalities.verify_n2_derivative_identities(algebra, pt, zz, ee, ll, mode, fixture))
        rep.extend(inequalities.verify_n2_curvature(algebra, pt, zz, ee, mode, fixture))
    else:
        rep.add(Record(fixture, fmt_point(pt), "surface_suite", "skipped: requires n=2", mode, 0.0, True))
    return rep


def _scalar(fixture, pt, ident, detail, mode, lhs, rhs) -> VerificationReport:
    from .report import residual

    rep = VerificationReport()
    res, ok = residual(lhs, rhs, mode)
    rep.add(Record(fixture, fmt_point(pt), ident, detail, mode, res, ok))
    return rep


def verify(algebra: GradedAlgebra, points: int = 10, seed: int = 0, mode: str = EXACT,
           fixture: str | None = None) -> VerificationReport:
    rep = VerificationReport(seed=seed)
    for i, t in enumerate(random_points(algebra, points, seed)):
        rep.extend(verify_point(algebra, t, mode, seed=seed + i, fixture=fixture))
    return rep
