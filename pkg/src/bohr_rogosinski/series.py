"""Truncated Taylor series of analytic functions on the unit disk.

A :class:`TruncatedSeries` keeps the coefficients ``a_0 .. a_N`` together with
an optional geometric envelope ``|a_n| <= C * q**(n / stride)`` for the discarded
indices ``n > N``.  The envelope is what turns truncated evaluations into
rigorous enclosures; series built without one are flagged non-rigorous.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

DEFAULT_ORDER = 256
BINOMIAL_LIMIT = 1024

MOBIUS = "mobius"
BLASCHKE_COMBO = "blaschke_combo"
RAW = "raw"
FAMILY_TAGS = (MOBIUS, BLASCHKE_COMBO, RAW)

# Every f in B satisfies |a_n| <= 1 - |a_0|^2 <= 1.
UNIT_BALL_ENVELOPE = (1.0, 1.0)
EXACT_POLYNOMIAL = (0.0, 0.0)


def _check_complex(z, name="z") -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {z!r}")
    return z


def _check_inside(z, name="z") -> complex:
    z = _check_complex(z, name)
    if abs(z) >= 1.0:
        raise ValueError(f"|{name}| must be < 1, got {abs(z)!r}")
    return z


def _check_radius(r, name="r") -> float:
    r = float(r)
    if not (0.0 <= r < 1.0):
        raise ValueError(f"{name} must lie in [0, 1), got {r!r}")
    return r


@lru_cache(maxsize=None)
def _binomial_table(n_max: int) -> np.ndarray:
    # table[k, n] = binom(n, k), filled along n by binom(n, k) = binom(n-1, k) * n / (n - k).
    if n_max > BINOMIAL_LIMIT:
        raise ValueError(f"binomial table limited to n <= {BINOMIAL_LIMIT}")
    size = n_max + 1
    table = np.zeros((size, size))
    for k in range(size):
        n = np.arange(k + 1, size, dtype=float)
        table[k, k] = 1.0
        table[k, k + 1:] = np.cumprod(n / (n - k))
    table.setflags(write=False)
    return table


def binomial_row(k: int, n_max: int) -> np.ndarray:
    """``binom(n, k)`` for ``n = 0 .. n_max`` (zeros below ``k``)."""
    return _binomial_table(n_max)[k]


def binomial_matrix(n_max: int) -> np.ndarray:
    """Read-only matrix with entry ``[k, n] = binom(n, k)``."""
    return _binomial_table(n_max)


@lru_cache(maxsize=None)
def _lag_index(n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1)
    lag = n[None, :] - n[:, None]
    lag.setflags(write=False)
    return lag


class Majorant(NamedTuple):
    value: float
    upper: float
    rigorous: bool


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Coefficients ``a_0 .. a_N`` of an analytic function, plus a tail envelope.

    ``envelope = (C, q)`` asserts ``|a_{stride*j}| <= C * q**j`` for every
    ``stride*j > order`` and that all other discarded coefficients vanish.
    ``None`` means no tail information is available.
    """

    coeffs: np.ndarray
    envelope: tuple[float, float] | None = None
    family_tag: str = RAW
    stride: int = 1
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("a series needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if self.family_tag not in FAMILY_TAGS:
            raise ValueError(f"unknown family tag {self.family_tag!r}")
        if self.stride < 1:
            raise ValueError("stride must be positive")
        if self.envelope is not None:
            C, q = (float(v) for v in self.envelope)
            if C < 0 or q < 0:
                raise ValueError("envelope constants must be non-negative")
            object.__setattr__(self, "envelope", (C, q))

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @property
    def rigorous(self) -> bool:
        return self.envelope is not None

    def __len__(self):
        return self.coeffs.size

    def __repr__(self):
        return (f"TruncatedSeries(order={self.order}, family_tag={self.family_tag!r}, "
                f"params={self.params!r}, envelope={self.envelope!r})")

    # -- tails -----------------------------------------------------------

    def tail_bound(self, r: float) -> float:
        """Upper bound for ``sum_{n > N} |a_n| r**n``; ``inf`` without an envelope."""
        if self.envelope is None:
            return math.inf
        C, q = self.envelope
        if C == 0.0 or r == 0.0:
            return 0.0
        x = q * r ** self.stride
        if x >= 1.0:
            return math.inf
        first = self.order // self.stride + 1
        return C * x ** first / (1.0 - x)

    def index_envelope(self) -> tuple[float, float] | None:
        """Envelope rewritten per index: ``|a_n| <= C * q**n`` for all ``n > N``."""
        if self.envelope is None:
            return None
        C, q = self.envelope
        return C, q ** (1.0 / self.stride)

    def derivative_tail_bound(self, k: int, rho: float) -> float:
        """Bound on ``|sum_{n > N} binom(n, k) a_n w**(n-k)|`` for ``|w| = rho``."""
        env = self.index_envelope()
        if env is None:
            return math.inf
        C, q = env
        N = self.order
        if C == 0.0 or q == 0.0:
            return 0.0
        n0 = max(N + 1, k)
        if rho == 0.0:
            return C * q ** k if n0 == k else 0.0
        ratio = (n0 + 1) / (n0 + 1 - k) * q * rho
        if ratio >= 1.0:
            return math.inf
        log_first = (math.lgamma(n0 + 1) - math.lgamma(k + 1) - math.lgamma(n0 + 1 - k)
                     + math.log(C) + n0 * math.log(q) + (n0 - k) * math.log(rho))
        # slack for lgamma rounding
        return math.exp(log_first) / (1.0 - ratio) * (1.0 + 1e-9)

    # -- evaluation ------------------------------------------------------

    def evaluate(self, z):
        """Horner evaluation of the retained polynomial at ``z`` (scalar or array)."""
        if np.ndim(z) == 0:
            z = _check_inside(z)
            return complex(np.polyval(self.coeffs[::-1], z))
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= 1.0):
            raise ValueError("all points must satisfy |z| < 1")
        return np.polyval(self.coeffs[::-1], z)

    __call__ = evaluate

    def derivative_coeffs(self, k: int) -> np.ndarray:
        """Coefficients of ``f^(k)(z) / k!`` as a polynomial in ``z``."""
        if k < 0:
            raise ValueError("derivative order must be non-negative")
        if k > self.order:
            return np.zeros(1, dtype=complex)
        return binomial_row(k, self.order)[k:] * self.coeffs[k:]

    def eval_derivative(self, k: int, z):
        """``f^(k)(z) / k!`` of the retained polynomial."""
        if np.ndim(z) == 0:
            z = _check_inside(z)
            return complex(np.polyval(self.derivative_coeffs(k)[::-1], z))
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= 1.0):
            raise ValueError("all points must satisfy |z| < 1")
        return np.polyval(self.derivative_coeffs(k)[::-1], z)

    def taylor_moduli(self, radius: float, angles) -> np.ndarray:
        """``|f^(k)(w) / k!|`` for ``w = radius * exp(i*angle)``.

        Returns an array of shape ``(len(angles), order + 1)`` indexed by
        ``[angle, k]``.  Uses ``|T_k(w)| = |sum_n binom(n,k) radius**(n-k) a_n e^{i n t}|``
        so one real matrix serves every angle.
        """
        radius = _check_radius(radius, "radius")
        angles = np.atleast_1d(np.asarray(angles, dtype=float))
        N = self.order
        lag = _lag_index(N)
        powers = radius ** np.arange(N + 1, dtype=float)
        weight = np.where(lag >= 0, powers[np.clip(lag, 0, N)], 0.0) * binomial_matrix(N)
        phased = self.coeffs[None, :] * np.exp(1j * np.outer(angles, np.arange(N + 1)))
        return np.abs(phased @ weight.T)

    # -- transforms ------------------------------------------------------

    def compose_power(self, m: int) -> "TruncatedSeries":
        """Series of ``f(z**m)``."""
        if m < 1:
            raise ValueError("m must be a positive integer")
        if m == 1:
            return self
        out = np.zeros(m * self.order + 1, dtype=complex)
        out[::m] = self.coeffs
        return TruncatedSeries(out, self.envelope, self.family_tag,
                               self.stride * m, dict(self.params, power=m))

    def majorant_sum(self, r: float, from_index: int = 0) -> Majorant:
        """``sum_{n=from_index}^{N} |a_n| r**n`` plus its tail-inclusive upper bound."""
        r = _check_radius(r)
        if from_index < 0:
            raise ValueError("from_index must be non-negative")
        n = np.arange(self.coeffs.size)
        mask = n >= from_index
        value = float(np.sum(np.abs(self.coeffs[mask]) * r ** n[mask])) if mask.any() else 0.0
        if self.envelope is None:
            return Majorant(value, value, False)
        return Majorant(value, value + self.tail_bound(r), True)


def mobius_coeffs(a: float, sign: int = 1, N: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Series of ``(a + s z) / (1 + s a z)`` with ``s = sign``.

    ``a_0 = a`` and ``a_n = s**n (1 - a**2) (-a)**(n-1)``.
    """
    a = float(a)
    if not (0.0 <= a < 1.0):
        raise ValueError(f"a must lie in [0, 1), got {a!r}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if N < 1:
        raise ValueError("N must be at least 1")
    n = np.arange(1, N + 1)
    coeffs = np.empty(N + 1)
    coeffs[0] = a
    coeffs[1:] = (1.0 - a * a) * (-a) ** (n - 1) * float(sign) ** n
    envelope = EXACT_POLYNOMIAL if a == 0.0 else ((1.0 - a * a) / a, a)
    return TruncatedSeries(coeffs, envelope, MOBIUS, params={"a": a, "sign": sign})


def disk_automorphism(c: complex, rotation: complex = 1.0, N: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Series of ``rotation * (c + z) / (1 + conj(c) z)`` for ``|c| < 1``, ``|rotation| <= 1``."""
    c = _check_inside(c, "c")
    rotation = _check_complex(rotation, "rotation")
    if abs(rotation) > 1.0 + 1e-15:
        raise ValueError("rotation must have modulus at most 1")
    if N < 1:
        raise ValueError("N must be at least 1")
    n = np.arange(1, N + 1)
    coeffs = np.empty(N + 1, dtype=complex)
    coeffs[0] = c
    coeffs[1:] = (1.0 - abs(c) ** 2) * (-c.conjugate()) ** (n - 1)
    coeffs *= rotation
    ac = abs(c)
    envelope = EXACT_POLYNOMIAL if ac == 0.0 else (abs(rotation) * (1.0 - ac * ac) / ac, ac)
    return TruncatedSeries(coeffs, envelope, BLASCHKE_COMBO,
                           params={"c": c, "rotation": rotation})


def from_coefficients(coeffs, envelope: tuple[float, float] | None = None) -> TruncatedSeries:
    """Wrap user coefficients; pass ``envelope`` to make tails rigorous."""
    return TruncatedSeries(np.asarray(coeffs, dtype=complex), envelope, RAW)


def multiply(f: TruncatedSeries, g: TruncatedSeries, N: int | None = None,
             envelope: tuple[float, float] | None = None) -> TruncatedSeries:
    """Cauchy product truncated at ``N`` (default: the larger order).

    The product's tail envelope cannot be derived from the factors' in
    general, so it must be supplied (e.g. :data:`UNIT_BALL_ENVELOPE` when the
    product is known to lie in B).
    """
    if N is None:
        N = max(f.order, g.order)
    prod = np.convolve(f.coeffs, g.coeffs)[:N + 1]
    if prod.size < N + 1:
        prod = np.pad(prod, (0, N + 1 - prod.size))
    return TruncatedSeries(prod, envelope, BLASCHKE_COMBO)


def schwarz_pick_bound(f_abs: float, r: float, k: int) -> float:
    """Bound ``(1 - |f(z)|^2) / ((1 - r)^k (1 + r))`` on ``|f^(k)(z)| / k!`` at ``|z| = r``."""
    r = _check_radius(r)
    if not (0.0 <= f_abs <= 1.0):
        raise ValueError("f_abs must lie in [0, 1]")
    if k < 1:
        raise ValueError("k must be a positive integer")
    return (1.0 - f_abs * f_abs) / ((1.0 - r) ** k * (1.0 + r))


def polar(r: float, angle: float) -> complex:
    return cmath.rect(r, angle)
