"""Radius equations, certified root isolation and the classical limits.

Each radius is the sign change of an explicit polynomial in ``r`` on (0, 1).
Roots are isolated by a uniform scan and refined by bisection; the result is a
:class:`RootCertificate` whose bracket and residual can be rechecked by anyone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

SCAN_STEP = 1e-3
BRACKET_WIDTH = 1e-13
RESIDUAL_TOL = 1e-11

# canonical kind names; aliases are accepted by RadiusFamily
PHI, PSI, PHI_CAP, LAMBDA, LAMBDA_CAP = "phi", "psi", "Phi", "lambda", "Lambda"
KINDS = (PHI, PSI, PHI_CAP, LAMBDA, LAMBDA_CAP)
HARMONIC_KINDS = (LAMBDA, LAMBDA_CAP)
_ALIASES = {"PhiCap": PHI_CAP, "LambdaCap": LAMBDA_CAP, "Psi": PSI}

# which root each family reports
SELECTION = {PHI: "maximal", PSI: "minimal", PHI_CAP: "maximal",
             LAMBDA: "maximal", LAMBDA_CAP: "maximal"}


def canonical_kind(kind: str) -> str:
    kind = _ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ValueError(f"unknown radius family {kind!r}; expected one of {KINDS}")
    return kind


@dataclass(frozen=True)
class RadiusFamily:
    kind: str
    m: int = 1
    k: float | None = None

    def __post_init__(self):
        kind = canonical_kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        if kind in HARMONIC_KINDS:
            k = 1.0 if self.k is None else float(self.k)
            if not (0.0 <= k <= 1.0):
                raise ValueError(f"k must lie in [0, 1], got {k!r}")
            object.__setattr__(self, "k", k)
        elif self.k is not None:
            object.__setattr__(self, "k", None)

    @property
    def harmonic(self) -> bool:
        return self.kind in HARMONIC_KINDS

    @property
    def selection(self) -> str:
        return SELECTION[self.kind]

    def label(self) -> str:
        if self.harmonic:
            return f"{self.kind}(m={self.m}, k={self.k:g})"
        return f"{self.kind}(m={self.m})"


def _equation(kind: str, r, m: int, k: float | None):
    t = r ** m
    if kind == PHI:
        return (1 - r) * ((t + 2) * t - 1) + 2 * r * r * (1 + t) ** 2
    if kind == PSI:
        return 2 * r * r - (1 - t * t) * (1 - t - r)
    if kind == PHI_CAP:
        return 3 * r - 1 + t * (2 * r * r * (t + 2) + t * (1 - r))
    if kind == LAMBDA:
        return 2 * r * (1 + k) * (1 + t) - (1 - r) * (1 - t)
    return (1 - r) * ((t + 2) * t - 1) + 2 * r * (r + k) * (1 + t) ** 2


def equation_value(family: RadiusFamily, r):
    """Value of the family's radius equation at ``r`` (scalar or array) in [0, 1)."""
    arr = np.asarray(r, dtype=float)
    if np.any((arr < 0.0) | (arr >= 1.0)):
        raise ValueError("r must lie in [0, 1)")
    out = _equation(family.kind, arr, family.m, family.k)
    return float(out) if np.ndim(out) == 0 else out


def auxiliary_equation(m: int, r):
    """``2r - (1 - r^{2m})``; its root bounds the admissible region for the C-functional."""
    return 2 * np.asarray(r, dtype=float) - (1 - np.asarray(r, dtype=float) ** (2 * m))


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)


def isolate_roots(fn: Callable, lo: float = 0.0, hi: float = 1.0,
                  step: float = SCAN_STEP, width: float = BRACKET_WIDTH) -> list[Bracket]:
    """Sign-change brackets of ``fn`` on ``[lo, hi)``, each refined to ``width``.

    The scan grid stops just short of ``hi`` so ``fn`` is never evaluated there.
    Returned brackets satisfy ``fn(b.lo) * fn(b.hi) < 0``.
    """
    n = int(round((hi - lo) / step))
    grid = np.append(lo + step * np.arange(n), np.nextafter(hi, lo) if hi > lo else hi)
    grid = np.unique(np.clip(grid, lo, np.nextafter(hi, lo)))
    values = np.asarray(fn(grid), dtype=float)
    brackets = []
    for i in range(len(grid) - 1):
        a, b = float(grid[i]), float(grid[i + 1])
        fa, fb = values[i], values[i + 1]
        if fa == 0.0:
            # grid point landed on a root: widen by ulps until the sign straddles it
            a0, b0 = np.nextafter(a, -np.inf), np.nextafter(a, np.inf)
            if a0 >= lo and np.sign(fn(a0)) * np.sign(fn(b0)) < 0:
                brackets.append(Bracket(float(a0), float(b0)))
            continue
        if fa * fb < 0:
            brackets.append(_bisect(fn, a, b, fa, width))
    return brackets


def _bisect(fn, a: float, b: float, fa: float, width: float) -> Bracket:
    while b - a > width:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        fm = float(fn(mid))
        if fm == 0.0:
            # exact zero: the tightest bracket is one ulp either side
            return Bracket(float(np.nextafter(mid, -np.inf)), float(np.nextafter(mid, np.inf)))
        if (fm < 0) == (fa < 0):
            a, fa = mid, fm
        else:
            b = mid
    return Bracket(a, b)


@dataclass(frozen=True)
class RootCertificate:
    family: RadiusFamily
    value: float
    bracket_lo: float
    bracket_hi: float
    residual: float
    all_roots: tuple[float, ...]
    selection: str

    @property
    def minimal_root(self) -> float:
        return self.all_roots[0]

    @property
    def maximal_root(self) -> float:
        return self.all_roots[-1]

    def check(self) -> list[str]:
        """Re-verify the certificate; returns a list of failed invariants (empty if sound)."""
        problems = []
        if not (self.bracket_lo < self.value < self.bracket_hi):
            problems.append("value outside bracket")
        if self.bracket_hi - self.bracket_lo > BRACKET_WIDTH:
            problems.append("bracket wider than tolerance")
        flo = equation_value(self.family, self.bracket_lo)
        fhi = equation_value(self.family, self.bracket_hi)
        if not (flo * fhi < 0):
            problems.append("no sign change across bracket")
        if abs(equation_value(self.family, self.value)) > RESIDUAL_TOL:
            problems.append("residual above tolerance")
        if self.value not in self.all_roots or list(self.all_roots) != sorted(self.all_roots):
            problems.append("root list inconsistent")
        return problems

    @property
    def sound(self) -> bool:
        return not self.check()


@lru_cache(maxsize=None)
def compute_radius(family: RadiusFamily) -> RootCertificate:
    """Certified radius for ``family``: every root in (0, 1) plus the selected one."""
    fn = lambda r: _equation(family.kind, r, family.m, family.k)  # noqa: E731
    brackets = isolate_roots(fn)
    if not brackets:
        raise RuntimeError(f"no sign change of the {family.label()} equation in (0, 1)")
    roots = [b.mid for b in brackets]
    pick = brackets[-1] if family.selection == "maximal" else brackets[0]
    value = pick.mid
    return RootCertificate(
        family=family,
        value=value,
        bracket_lo=pick.lo,
        bracket_hi=pick.hi,
        residual=float(fn(value)),
        all_roots=tuple(roots),
        selection=family.selection,
    )


def radius(kind: str, m: int = 1, k: float | None = None) -> float:
    return compute_radius(RadiusFamily(kind, m, k)).value


@lru_cache(maxsize=None)
def auxiliary_radius(m: int) -> float:
    """Largest root in (0, 1) of ``2r - (1 - r^{2m}) = 0``."""
    brackets = isolate_roots(lambda r: auxiliary_equation(m, r))
    if not brackets:
        raise RuntimeError("auxiliary equation has no root in (0, 1)")
    return brackets[-1].mid


def limit_radius(kind: str, k: float | None = None) -> float:
    """Closed-form limit of the radius as ``m -> infinity``."""
    kind = canonical_kind(kind)
    if kind in (PHI, PSI):
        return 0.5
    if kind == PHI_CAP:
        return 1.0 / 3.0
    k = 1.0 if k is None else float(k)
    if not (0.0 <= k <= 1.0):
        raise ValueError("k must lie in [0, 1]")
    if kind == LAMBDA:
        return 2.0 / (4.0 * k + 6.0)
    s = 2.0 * k + 1.0
    return 0.25 * (math.sqrt(s * s + 8.0) - s)


def classical_constants() -> tuple[float, float]:
    """The Bohr radius 1/3 and the Rogosinski radius 1/2."""
    return 1.0 / 3.0, 0.5
