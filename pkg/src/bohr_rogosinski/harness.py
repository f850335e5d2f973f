"""Randomized and extremal verification of the radius inequalities.

Samples are drawn from counter-based streams keyed by ``(seed, index)``, so a
sample never depends on which other samples were drawn or in what order.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import functionals as fn
from .radii import PSI, RadiusFamily, compute_radius
from .series import (
    DEFAULT_ORDER,
    EXACT_POLYNOMIAL,
    UNIT_BALL_ENVELOPE,
    TruncatedSeries,
    disk_automorphism,
    multiply,
)

SAMPLE_KINDS = ("mobius", "finite_blaschke_combo", "scaled_polynomial")
MIXED = "mixed"
VIOLATION_TOL = 1e-9
A_MAX = 0.999
BOUNDARY_POINTS = 256
MAX_POLY_DEGREE = 8
SHARPNESS_LADDER = (0.9, 0.99, 0.999, 0.9999)
ROGOSINSKI_RADII = np.linspace(0.05, 0.5, 10)
ROGOSINSKI_ANGLES = 32


@dataclass(frozen=True)
class SampleSpec:
    kind: str = MIXED
    count: int = 500
    seed: int = 42
    coeff_order: int = DEFAULT_ORDER

    def __post_init__(self):
        if self.kind not in SAMPLE_KINDS + (MIXED,):
            raise ValueError(f"unknown sample kind {self.kind!r}")
        if self.count < 1 or self.coeff_order < 1:
            raise ValueError("count and coeff_order must be positive")
        if not (0 <= self.seed < 2 ** 64):
            raise ValueError("seed must be a 64-bit unsigned integer")


def _stream(seed: int, index: int, lane: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index, lane])))


def _unit(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.random()))


def _random_factor(rng) -> tuple[complex, complex]:
    return A_MAX * rng.random() * _unit(rng), _unit(rng)


def _product_series(factors, N) -> TruncatedSeries:
    prod = disk_automorphism(*factors[0], N=N)
    for c, rot in factors[1:]:
        prod = multiply(prod, disk_automorphism(c, rot, N), N, UNIT_BALL_ENVELOPE)
    return prod


def sample_kind(spec: SampleSpec, index: int) -> str:
    if spec.kind == MIXED:
        return SAMPLE_KINDS[index % len(SAMPLE_KINDS)]
    return spec.kind


def sample_bounded_function(spec: SampleSpec, index: int) -> TruncatedSeries:
    """The ``index``-th sample of ``spec``; always a member of B.

    Möbius and Blaschke samples keep their factors in ``params["terms"]`` as
    ``(weight, [(c, rotation), ...])`` so :func:`exact_value` can evaluate them
    without truncation.
    """
    rng = _stream(spec.seed, index)
    kind = sample_kind(spec, index)
    N = spec.coeff_order
    if kind == "mobius":
        factor = _random_factor(rng)
        f = disk_automorphism(*factor, N=N)
        return TruncatedSeries(f.coeffs, f.envelope, "blaschke_combo",
                               params={"kind": kind, "terms": [(1.0, [factor])], "scale": 1.0})
    if kind == "finite_blaschke_combo":
        n_terms = int(rng.integers(1, 4))
        weights = rng.dirichlet(np.ones(n_terms))
        terms, total = [], np.zeros(N + 1, dtype=complex)
        for w in weights:
            factors = [_random_factor(rng) for _ in range(int(rng.integers(1, 4)))]
            total += w * _product_series(factors, N).coeffs
            terms.append((float(w), factors))
        return TruncatedSeries(0.999 * total, UNIT_BALL_ENVELOPE, "blaschke_combo",
                               params={"kind": kind, "terms": terms, "scale": 0.999})
    degree = int(rng.integers(1, min(MAX_POLY_DEGREE, N) + 1))
    coeffs = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    boundary = np.exp(2j * np.pi * np.arange(BOUNDARY_POINTS) / BOUNDARY_POINTS)
    grid_max = np.max(np.abs(np.polyval(coeffs[::-1], boundary)))
    # Bernstein: sup|p| <= grid_max / (1 - pi*d/256), dominated by the factor below for d <= 8
    scale = 1.01 * grid_max * (1 + np.pi * degree / BOUNDARY_POINTS)
    return TruncatedSeries(coeffs / scale, EXACT_POLYNOMIAL, "raw",
                           params={"kind": kind, "degree": degree})


def exact_value(f: TruncatedSeries, z):
    """Untruncated value of a sampled function (polynomial evaluation otherwise)."""
    terms = f.params.get("terms")
    if terms is None:
        return np.polyval(f.coeffs[::-1], np.asarray(z, dtype=complex))
    z = np.asarray(z, dtype=complex)
    total = np.zeros_like(z)
    for w, factors in terms:
        prod = np.ones_like(z)
        for c, rot in factors:
            prod = prod * rot * (c + z) / (1 + np.conj(c) * z)
        total = total + w * prod
    return f.params["scale"] * total


def boundary_audit(f: TruncatedSeries, points: int = BOUNDARY_POINTS) -> float:
    """``max |f(0.999 e^{it})|`` over ``points`` equally spaced angles."""
    z = 0.999 * np.exp(2j * np.pi * np.arange(points) / points)
    return float(np.max(np.abs(exact_value(f, z))))


def sample_harmonic_pair(spec: SampleSpec, index: int, k: float) -> fn.HarmonicPair:
    """Sampled ``h`` with ``g' = lam * k * omega * h'``, ``lam`` in (0, 1], ``|omega| = 1``."""
    h = sample_bounded_function(spec, index)
    rng = _stream(spec.seed, index, lane=1)
    lam = 1.0 - rng.random()
    return fn.pair_from_multiplier(h, lam * k * _unit(rng), k, lam=lam)


@dataclass
class VerificationReport:
    family: str
    m: int | None
    k: float | None
    radius: float
    radius_used: float
    trials: int
    max_value: float
    worst_index: int | None
    violations: list[tuple[int, float, float]] = field(default_factory=list)
    excluded: list[int] = field(default_factory=list)
    bound: float = 1.0
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self, include_runtime: bool = True) -> dict:
        d = asdict(self)
        d["violations"] = [list(v) for v in self.violations]
        d["passed"] = self.passed
        if not include_runtime:
            d.pop("runtime")
        return d


def verify_family(family: RadiusFamily, spec: SampleSpec, r_fraction: float = 0.999,
                  n_angles: int = 64) -> VerificationReport:
    """Evaluate the family's functional on every sample at ``r = r_fraction * radius``.

    Each sample's value is the rigorous upper enclosure at the worst of
    ``n_angles`` points on ``|z| = r``.  Values above ``1 + 1e-9`` are violations.
    """
    start = time.perf_counter()
    radius = compute_radius(family).value
    r = r_fraction * radius
    if not (0.0 <= r < 1.0):
        raise ValueError(f"r = {r!r} outside [0, 1)")
    max_value, worst = -math.inf, None
    violations, excluded = [], []
    for i in range(spec.count):
        if family.harmonic:
            try:
                obj = sample_harmonic_pair(spec, i, family.k)
            except ValueError:
                excluded.append(i)
                continue
            audit_target = obj.h
        else:
            obj = audit_target = sample_bounded_function(spec, i)
        if boundary_audit(audit_target) >= 1.0:
            excluded.append(i)
            continue
        res = fn.functional_on_circle(family, obj, r, n_angles)
        value = res.upper
        if value > max_value:
            max_value, worst = value, i
        if value > 1.0 + VIOLATION_TOL:
            violations.append((i, r, value))
    return VerificationReport(
        family=family.kind, m=family.m, k=family.k, radius=radius, radius_used=r,
        trials=spec.count - len(excluded), max_value=max_value, worst_index=worst,
        violations=violations, excluded=excluded,
        runtime=time.perf_counter() - start,
    )


def rogosinski_grid() -> np.ndarray:
    angles = 2 * np.pi * np.arange(ROGOSINSKI_ANGLES) / ROGOSINSKI_ANGLES
    return (ROGOSINSKI_RADII[:, None] * np.exp(1j * angles)[None, :]).ravel()


def verify_rogosinski(spec: SampleSpec, n_max: int = 10) -> VerificationReport:
    """Check the derivative partial sums against their bound on a polar grid in ``|z| <= 1/2``.

    ``max_value`` is the largest ``partial - bound`` (so it is negative when the
    inequality holds with room); violations exceed ``1e-9``.
    """
    start = time.perf_counter()
    points = rogosinski_grid()
    bounds = np.array([fn.rogosinski_bound(n) for n in range(n_max + 1)])
    rho_max = float(np.max(np.abs(points)))
    max_excess, worst = -math.inf, None
    violations, excluded = [], []
    for i in range(spec.count):
        f = sample_bounded_function(spec, i)
        if boundary_audit(f) >= 1.0:
            excluded.append(i)
            continue
        partials = fn.rogosinski_partials_at(f, points, n_max)
        tails = np.array([fn.rogosinski_tail_bound(f, rho_max, n) for n in range(n_max + 1)])
        excess = partials + tails[:, None] - bounds[:, None]
        j = np.unravel_index(int(np.argmax(excess)), excess.shape)
        e = float(excess[j])
        if e > max_excess:
            max_excess, worst = e, i
        if e > VIOLATION_TOL:
            violations.append((i, float(abs(points[j[1]])), e))
    return VerificationReport(
        family="rogosinski", m=None, k=None, radius=0.5, radius_used=rho_max,
        trials=spec.count - len(excluded), max_value=max_excess, worst_index=worst,
        violations=violations, excluded=excluded, bound=0.0,
        runtime=time.perf_counter() - start,
    )


@dataclass
class SharpnessRow:
    a: float
    value: float
    closed_form: float
    gap: float
    in_regime: bool
    note: str = ""


@dataclass
class SharpnessReport:
    family: str
    m: int
    k: float | None
    lam: float | None
    radius: float
    r: float
    r_multiplier: float
    rows: list[SharpnessRow]

    @property
    def confirmed(self) -> bool:
        return any(row.in_regime and row.value > 1.0 for row in self.rows)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["confirmed"] = self.confirmed
        return d


def probe_sharpness(family: RadiusFamily, a_values=SHARPNESS_LADDER, r_multiplier: float = 1.05,
                    lam: float | None = None, order: int = DEFAULT_ORDER) -> SharpnessReport:
    """Evaluate the extremal witnesses at ``r = r_multiplier * radius``.

    ``value`` is the functional computed from the witness's series at ``z = r``;
    ``closed_form`` and ``gap`` come from the explicit formulas.  The radius is
    shown sharp when some in-regime row has ``value > 1``.
    """
    radius = compute_radius(family).value
    r = r_multiplier * radius
    if not (0.0 <= r < 1.0):
        raise ValueError(f"r = {r!r} outside [0, 1)")
    if family.harmonic:
        lam = fn.default_lambda(family) if lam is None else float(lam)
    else:
        lam = None
    rows = []
    for a in a_values:
        a = float(a)
        if not (0.0 < a < 1.0):
            raise ValueError("a values must lie in (0, 1)")
        note = ""
        in_regime = True
        if family.kind == PSI:
            t = r ** family.m
            if not t < a:
                in_regime, note = False, "requires r^m < a"
            elif r + t >= 1.0:
                in_regime, note = False, "requires r + r^m < 1"
        gap = fn.sharpness_gap(family, a, r, lam)
        try:
            closed = fn.extremal_value(family, a, r, lam)
        except ValueError:
            closed, in_regime, note = math.nan, False, note or "closed form undefined"
        if in_regime:
            witness = fn.extremal_function(family, a, lam, order)
            value = fn.functional_for(family, witness, r).value
        else:
            value = math.nan
        rows.append(SharpnessRow(a, value, closed, gap, in_regime, note))
    return SharpnessReport(family.kind, family.m, family.k, lam, radius, r, r_multiplier, rows)
