"""Bohr-type functionals, the derivative partial sum, and extremal sharpness gaps.

All functionals are evaluated at ``z = r * exp(i*angle)`` (``angle = 0`` puts
``z`` on the positive axis, where the extremal functions attain their values).
Series parts depend only on ``r``; the head terms involving ``f(z**m)`` depend
on the angle as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .radii import LAMBDA, LAMBDA_CAP, PHI, PHI_CAP, PSI, RadiusFamily, canonical_kind
from .series import (
    DEFAULT_ORDER,
    TruncatedSeries,
    binomial_matrix,
    mobius_coeffs,
)

K_MAX = 512
VALUE_TOL = 1e-12
DILATATION_TOL = 1e-9
HARMONIC_GUARANTEE = 1.0 / 3.0

FUNCTIONAL_OF = {PHI: "A", PSI: "B", PHI_CAP: "C", LAMBDA: "D", LAMBDA_CAP: "E"}
KIND_OF = {v: k for k, v in FUNCTIONAL_OF.items()}


@dataclass(frozen=True)
class FunctionalResult:
    """A functional value with its additive parts.

    ``upper`` adds every truncation tail, so it is a rigorous upper bound
    whenever ``rigorous`` is set.
    """

    value: float
    components: dict[str, float]
    rigorous: bool
    upper: float
    angle: float = 0.0
    outside_guarantee: bool = False


def _audit_grid() -> np.ndarray:
    radii = np.array([0.225, 0.45, 0.675, 0.9])
    angles = 2 * np.pi * np.arange(16) / 16
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


_AUDIT_POINTS = _audit_grid()


@dataclass(frozen=True, eq=False)
class HarmonicPair:
    """Analytic parts of ``f = h + conj(g)`` with ``|g'| <= k_bound |h'|``."""

    h: TruncatedSeries
    g: TruncatedSeries
    k_bound: float
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (0.0 <= self.k_bound <= 1.0):
            raise ValueError("k_bound must lie in [0, 1]")
        if abs(self.g.coeffs[0]) > 1e-15:
            raise ValueError("co-analytic part must vanish at the origin")
        worst = self.dilatation_excess()
        if worst > DILATATION_TOL:
            raise ValueError(f"|g'| exceeds k*|h'| by {worst:.3g} on the audit grid")

    def dilatation_excess(self) -> float:
        """``max(|g'(z)| - k|h'(z)|)`` over the 64-point audit grid."""
        gp = np.abs(self.g.eval_derivative(1, _AUDIT_POINTS))
        hp = np.abs(self.h.eval_derivative(1, _AUDIT_POINTS))
        return float(np.max(gp - self.k_bound * hp))


def pair_from_multiplier(h: TruncatedSeries, c: complex, k: float, **params) -> HarmonicPair:
    """Pair with ``g' = c h'`` and ``g(0) = 0``, i.e. ``g = c (h - h(0))``; needs ``|c| <= k``."""
    c = complex(c)
    coeffs = c * h.coeffs
    coeffs[0] = 0.0
    env = None
    if h.envelope is not None:
        env = (abs(c) * h.envelope[0], h.envelope[1])
    g = TruncatedSeries(coeffs, env, h.family_tag, h.stride, dict(h.params, multiplier=c))
    return HarmonicPair(h, g, k, dict(params, multiplier=c))


def extremal_pair(a: float, k: float, multiplier: float, N: int = DEFAULT_ORDER) -> HarmonicPair:
    """``h = (z + a)/(1 + a z)`` paired with ``g = multiplier * (h - a)``."""
    return pair_from_multiplier(mobius_coeffs(a, 1, N), multiplier, k, a=a)


# -- Rogosinski-type partial sums ----------------------------------------


def rogosinski_partial(f: TruncatedSeries, z: complex, n: int) -> float:
    """``|sum_{k=0}^{n} f^(k)(z)/k! * z**k|``."""
    z = complex(z)
    if abs(z) >= 1.0:
        raise ValueError("|z| must be < 1")
    if n < 0:
        raise ValueError("n must be non-negative")
    total = 0j
    zk = 1.0 + 0j
    for k in range(n + 1):
        total += f.eval_derivative(k, z) * zk
        zk *= z
    return abs(total)


def rogosinski_bound(n: int) -> float:
    """``sum_{k=0}^{n} binom(-1/2, k)**2`` using ``|binom(-1/2, k)| = binom(2k, k) / 4**k``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    total, c = 1.0, 1.0
    for k in range(1, n + 1):
        c *= (2 * k - 1) / (2 * k)
        total += c * c
    return total


def partial_binomial_sums(n_max: int, order: int) -> np.ndarray:
    """``S[n, j] = sum_{k<=n} binom(j, k)`` for ``n <= n_max``, ``j <= order``."""
    sums = np.cumsum(binomial_matrix(order)[: n_max + 1], axis=0)
    if sums.shape[0] < n_max + 1:
        # binom(j, k) = 0 for k > order >= j, so rows past the order repeat
        sums = np.vstack([sums, np.repeat(sums[-1:], n_max + 1 - sums.shape[0], axis=0)])
    return sums


def rogosinski_partials_at(f: TruncatedSeries, points, n_max: int) -> np.ndarray:
    """All partials ``n = 0..n_max`` at many points, shape ``(n_max + 1, len(points))``.

    Uses ``sum_k f^(k)(z)/k! z^k = sum_j a_j S(j, n) z^j`` so each partial is one
    polynomial evaluation.
    """
    points = np.atleast_1d(np.asarray(points, dtype=complex))
    weights = partial_binomial_sums(n_max, f.order) * f.coeffs[None, :]
    powers = points[None, :] ** np.arange(f.order + 1)[:, None]
    return np.abs(weights @ powers)


def rogosinski_tail_bound(f: TruncatedSeries, rho: float, n: int) -> float:
    """Bound on the truncation error of the order-``n`` partial at ``|z| = rho``."""
    env = f.index_envelope()
    if env is None:
        return math.inf
    C, q = env
    N = f.order
    if C == 0.0 or q == 0.0 or rho == 0.0:
        return 0.0
    ratio = (N + 2) / (N + 2 - min(n, N + 1)) * q * rho
    if ratio >= 1.0:
        return math.inf
    # S(N+1, n) <= (n+1) * binom(N+1, min(n, (N+1)//2))
    kk = min(n, (N + 1) // 2)
    log_s = math.log(n + 1) + math.lgamma(N + 2) - math.lgamma(kk + 1) - math.lgamma(N + 2 - kk)
    log_first = math.log(C) + (N + 1) * math.log(q * rho) + log_s
    return math.exp(log_first) / (1.0 - ratio) * (1.0 + 1e-9)


# -- Bohr-type functionals ------------------------------------------------


def _check_r(r: float) -> float:
    r = float(r)
    if not (0.0 <= r < 1.0):
        raise ValueError(f"r must lie in [0, 1), got {r!r}")
    return r


def _analytic_head(f: TruncatedSeries, m: int, r: float, factor: float, angles):
    w_abs = r ** m
    w = w_abs * np.exp(1j * m * np.asarray(angles, dtype=float))
    modulus = np.abs(f.evaluate(w))
    derivative = factor * np.abs(f.eval_derivative(1, w))
    tail = f.tail_bound(w_abs) + factor * f.derivative_tail_bound(1, w_abs)
    return modulus, derivative, tail


def _components(kind: str, obj, m: int, r: float, angles):
    """Angle-dependent components (arrays), total tail, rigor flag."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    r = _check_r(r)
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    if kind in (PHI, PHI_CAP):
        f: TruncatedSeries = obj
        factor = r ** m if kind == PHI else r
        modulus, derivative, tail = _analytic_head(f, m, r, factor, angles)
        maj = f.majorant_sum(r, 2)
        comps = {"modulus": modulus, "derivative": derivative,
                 "majorant": np.full(angles.shape, maj.value)}
        return comps, tail + (maj.upper - maj.value), f.rigorous
    if kind == PSI:
        f = obj
        w_abs = r ** m
        if r + w_abs >= 1.0:
            raise ValueError(f"need r + r^m < 1, got r={r!r}, m={m}")
        moduli = f.taylor_moduli(w_abs, m * angles)
        kmax = min(K_MAX, f.order)
        weights = r ** np.arange(2, kmax + 1, dtype=float)
        comps = {"modulus": moduli[:, 0], "derivative_sum": moduli[:, 2:kmax + 1] @ weights}
        # all dropped terms together are at most sum_{n>N} |a_n| (r + r^m)^n
        return comps, f.tail_bound(r + w_abs), f.rigorous and f.order <= K_MAX
    pair: HarmonicPair = obj
    h, g = pair.h, pair.g
    if kind == LAMBDA:
        w_abs = r ** m
        w = w_abs * np.exp(1j * m * angles)
        modulus = np.abs(h.evaluate(w))
        maj_h, maj_g = h.majorant_sum(r, 1), g.majorant_sum(r, 1)
        comps = {"modulus": modulus,
                 "majorant_h": np.full(angles.shape, maj_h.value),
                 "majorant_g": np.full(angles.shape, maj_g.value)}
        tail = h.tail_bound(w_abs) + (maj_h.upper - maj_h.value) + (maj_g.upper - maj_g.value)
        return comps, tail, h.rigorous and g.rigorous
    if kind == LAMBDA_CAP:
        modulus, derivative, tail = _analytic_head(h, m, r, r ** m, angles)
        maj_h, maj_g = h.majorant_sum(r, 2), g.majorant_sum(r, 1)
        comps = {"modulus": modulus, "derivative": derivative,
                 "majorant_h": np.full(angles.shape, maj_h.value),
                 "majorant_g": np.full(angles.shape, maj_g.value)}
        tail += (maj_h.upper - maj_h.value) + (maj_g.upper - maj_g.value)
        return comps, tail, h.rigorous and g.rigorous
    raise ValueError(f"unknown family {kind!r}")


def _result(kind: str, obj, m: int, r: float, angle: float) -> FunctionalResult:
    comps, tail, rigorous = _components(kind, obj, m, r, [angle])
    parts = {name: float(v[0]) for name, v in comps.items()}
    value = math.fsum(parts.values())
    return FunctionalResult(
        value=value,
        components=parts,
        rigorous=rigorous,
        upper=value + tail if rigorous else value,
        angle=float(angle),
        outside_guarantee=kind == LAMBDA and r > HARMONIC_GUARANTEE,
    )


def functional_A(f: TruncatedSeries, m: int, r: float, angle: float = 0.0) -> FunctionalResult:
    """``|f(z^m)| + |z^m| |f'(z^m)| + sum_{k>=2} |a_k| r^k``."""
    return _result(PHI, f, m, r, angle)


def functional_B(f: TruncatedSeries, m: int, r: float, angle: float = 0.0) -> FunctionalResult:
    """``|f(z^m)| + sum_{k>=2} |f^(k)(z^m)/k!| r^k``; requires ``r + r^m < 1``."""
    return _result(PSI, f, m, r, angle)


def functional_C(f: TruncatedSeries, m: int, r: float, angle: float = 0.0) -> FunctionalResult:
    """Like A but the derivative term carries ``|z| = r`` instead of ``|z^m|``."""
    return _result(PHI_CAP, f, m, r, angle)


def functional_D(pair: HarmonicPair, m: int, r: float, angle: float = 0.0) -> FunctionalResult:
    """``|h(z^m)| + sum_{n>=1} |a_n| r^n + sum_{n>=1} |b_n| r^n``.

    The result is flagged ``outside_guarantee`` for ``r > 1/3``, where the
    coefficient comparison behind the inequality is no longer available.
    """
    return _result(LAMBDA, pair, m, r, angle)


def functional_E(pair: HarmonicPair, m: int, r: float, angle: float = 0.0) -> FunctionalResult:
    return _result(LAMBDA_CAP, pair, m, r, angle)


FUNCTIONALS = {"A": functional_A, "B": functional_B, "C": functional_C,
               "D": functional_D, "E": functional_E}


def functional_for(family: RadiusFamily, obj, r: float, angle: float = 0.0) -> FunctionalResult:
    return _result(family.kind, obj, family.m, r, angle)


def functional_on_circle(family: RadiusFamily, obj, r: float, n_angles: int = 64) -> FunctionalResult:
    """The functional at the worst of ``n_angles`` equally spaced points on ``|z| = r``."""
    angles = 2 * np.pi * np.arange(n_angles) / n_angles
    comps, _, _ = _components(family.kind, obj, family.m, r, angles)
    totals = sum(comps.values())
    best = int(np.argmax(totals))
    return _result(family.kind, obj, family.m, r, float(angles[best]))


# -- extremal families ------------------------------------------------------


def default_lambda(family: RadiusFamily) -> float:
    """Sharp choice of the harmonic extremal parameter: 1 for D, ``k`` for E."""
    return family.k if family.kind == LAMBDA_CAP else 1.0


def sharpness_gap(family: RadiusFamily, a: float, r: float, lam: float | None = None) -> float:
    """Signed gap polynomial; for ``a`` in (0, 1) the extremal functional exceeds 1 iff it is positive."""
    if not (0.0 <= a <= 1.0):
        raise ValueError("a must lie in [0, 1]")
    r = _check_r(r)
    m = family.m
    t = r ** m
    kind = family.kind
    if kind == PHI:
        return (1 - a * r) * (a * t * t + 2 * t - 1) + a * r * r * (1 + a) * (1 + a * t) ** 2
    if kind == PSI:
        return a * (1 + a) * r * r - (1 + t) * (1 - a * t) * (1 - a * t - a * r)
    if kind == PHI_CAP:
        return (r * (1 + a) + a * a * r ** (m + 2) * (1 + a) * (2 + a * t)
                - (1 - t) * (1 + a * t) * (1 - a * r))
    lam = default_lambda(family) if lam is None else float(lam)
    if not (0.0 < lam <= 1.0):
        raise ValueError("lambda must lie in (0, 1]")
    if kind == LAMBDA:
        return r * (1 + lam * family.k) * (1 + a) * (1 + a * t) - (1 - t) * (1 - a * r)
    return (1 - a * r) * (a * t * t + 2 * t - 1) + a * r * (1 + a) * (r + lam) * (1 + a * t) ** 2


def _gap_denominator(family: RadiusFamily, a: float, r: float) -> float:
    t = r ** family.m
    if family.kind == PSI:
        return (1 - a * t) ** 2 * (1 - a * t - a * r)
    if family.kind == LAMBDA:
        return (1 + a * t) * (1 - a * r)
    return (1 + a * t) ** 2 * (1 - a * r)


def extremal_value(family: RadiusFamily, a: float, r: float, lam: float | None = None) -> float:
    """Closed-form functional of the extremal function at ``z = r``: ``1 + (1-a) gap / denominator``."""
    den = _gap_denominator(family, a, r)
    if den <= 0:
        raise ValueError("extremal closed form undefined at these parameters")
    return 1.0 + (1.0 - a) * sharpness_gap(family, a, r, lam) / den


def extremal_function(family: RadiusFamily, a: float, lam: float | None = None,
                      N: int = DEFAULT_ORDER):
    """The extremal witness: a Möbius series, or a harmonic pair for D and E.

    For D the co-analytic multiplier is ``lam * k``; for E it is ``a * lam``,
    which is the scaling under which the closed form of :func:`extremal_value`
    holds exactly.
    """
    kind = family.kind
    if kind in (PHI, PHI_CAP):
        return mobius_coeffs(a, 1, N)
    if kind == PSI:
        return mobius_coeffs(a, -1, N)
    lam = default_lambda(family) if lam is None else float(lam)
    if kind == LAMBDA:
        return extremal_pair(a, family.k, lam * family.k, N)
    if lam > family.k:
        raise ValueError("lambda must not exceed k for the E extremal pair")
    return extremal_pair(a, family.k, a * lam, N)


def family_for_functional(letter: str, m: int, k: float | None = None) -> RadiusFamily:
    letter = letter.upper()
    if letter not in KIND_OF:
        raise ValueError(f"unknown functional {letter!r}")
    return RadiusFamily(canonical_kind(KIND_OF[letter]), m, k)
