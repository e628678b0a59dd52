"""Structural properties of the activation density.

Partition of unity over integer shifts, tail-mass bounds, lower bounds on
the finite normalizing sum, the unit integral, and the truncation radius
used to cut the bi-infinite quasi-interpolation sum.

Summation notes: finite sums of density values are accumulated with
math.fsum (Shewchuk's error-free transformation), so they are correctly
rounded regardless of term ordering.  One-sided tails of the density over a
unit-spaced grid telescope exactly, because 4*Phi(z) = phi(z+1) - phi(z-1):

    sum_{j>=0} Phi(z0 + j) = (2 - phi(z0) - phi(z0 - 1)) / 4,

which this module evaluates through the cancellation-free complement form.
The explicit outward summation (`tail_sum_by_summation`) is retained as an
independent cross-check; the closed form is what `tail_sum` returns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .activation import SigmoidParams, big_phi, phi, phi_one_complement
from .errors import (
    CapacityError,
    ConvergenceError,
    DomainError,
    PreconditionError,
)

_MAX_TRUNCATION_RADIUS = 2**62


@dataclass(frozen=True)
class OperatorConfig:
    """Interval, sample density and sigmoid order of the interval operators.

    The index window [k_lo, k_hi] = [ceil(n*a), floor(n*b)] is derived with
    plain IEEE ceil/floor; endpoints within an ulp of an integer resolve by
    IEEE semantics, deliberately without any epsilon nudging.
    """

    a: float
    b: float
    n: int
    m: int = 1
    k_lo: int = field(init=False)
    k_hi: int = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError("interval endpoints must be finite")
        if not self.a < self.b:
            raise DomainError(f"need a < b, got [{self.a}, {self.b}]")
        if self.n < 1:
            raise DomainError(f"sample density n must be >= 1, got {self.n}")
        SigmoidParams(self.m)  # validate order
        object.__setattr__(self, "k_lo", math.ceil(self.n * self.a))
        object.__setattr__(self, "k_hi", math.floor(self.n * self.b))
        if self.k_lo > self.k_hi:
            raise PreconditionError(
                f"empty index window: ceil({self.n}*{self.a}) > floor({self.n}*{self.b})"
            )

    @property
    def params(self) -> SigmoidParams:
        return SigmoidParams(self.m)

    def contains(self, x: float) -> bool:
        return self.a <= x <= self.b

    def require_contains(self, x: float):
        if not self.contains(x):
            raise DomainError(f"x = {x} outside [{self.a}, {self.b}]")


@dataclass(frozen=True)
class RateParams:
    """Rate-splitting exponent and sample density of the tail estimates.

    The tail machinery additionally needs n^(1-alpha) > 2; that hypothesis
    is checked where it is used (`tail_sum`, `tail_bound`, certificates), so
    that out-of-hypothesis configurations can still be represented and
    reported as violations rather than being unconstructible.
    """

    alpha: float
    n: int

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"rate exponent must lie in (0,1), got {self.alpha}")
        if self.n < 1:
            raise DomainError(f"sample density n must be >= 1, got {self.n}")

    @property
    def threshold(self) -> float:
        """n^(1-alpha), the half-width separating near and tail indices."""
        return float(self.n) ** (1.0 - self.alpha)

    @property
    def tail_hypothesis_ok(self) -> bool:
        return self.threshold > 2.0

    def require_tail_hypothesis(self):
        if not self.tail_hypothesis_ok:
            raise PreconditionError(
                f"tail hypothesis violated: n^(1-alpha) = {self.threshold:.6g} <= 2"
            )


def partition_sum(x: float, p: SigmoidParams, radius: int) -> float:
    """Sum of Phi(x - i) over i in [ceil(x)-radius, floor(x)+radius].

    Converges to 1 as the radius grows; the truncation residue is bounded
    by the same integral majorant as `tail_bound`.
    """
    if radius < 1:
        raise DomainError(f"radius must be >= 1, got {radius}")
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    lo = math.ceil(x) - radius
    hi = math.floor(x) + radius
    ks = np.arange(lo, hi + 1, dtype=float)
    return math.fsum(big_phi(x - ks, p).tolist())


def _one_sided_tail(w0: float, p: SigmoidParams) -> float:
    """Exact sum of Phi over the unit grid {w0, w0+1, ...}, w0 > 1.

    Telescoped: (1/4) * ((1 - phi(w0)) + (1 - phi(w0 - 1))).
    """
    return 0.25 * (
        phi_one_complement(w0, p) + phi_one_complement(w0 - 1.0, p)
    )


def tail_sum(x: float, rate: RateParams, p: SigmoidParams) -> float:
    """Mass of the density on indices with |n*x - k| >= n^(1-alpha).

    Evaluated in closed form via the telescoping of the unit-spaced tail;
    the result carries no truncation error (see `tail_sum_by_summation` for
    the explicit outward summation it is checked against).
    """
    rate.require_tail_hypothesis()
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    t = rate.threshold
    nx = rate.n * x
    # right side: k >= nx + t, arguments |nx - k| = k - nx
    w_right = math.ceil(nx + t) - nx
    # left side: k <= nx - t, arguments nx - k
    w_left = nx - math.floor(nx - t)
    return _one_sided_tail(w_right, p) + _one_sided_tail(w_left, p)


def tail_sum_by_summation(
    x: float,
    rate: RateParams,
    p: SigmoidParams,
    term_tol: float = 1e-18,
    remainder_tol: float = 1e-16,
    chunk: int = 65536,
    max_terms: int = 200_000_000,
) -> float:
    """Outward term-by-term version of `tail_sum` (dual stopping criterion).

    Terms are added until they drop below `term_tol` AND the integral
    majorant of the untouched remainder, 1/(4m (Z-2)^(2m)) at the current
    grid offset Z, falls below `remainder_tol`.  Term size alone would be an
    unsound stop: the density decays only like |x|^-(2m+1).

    At m = 1 the default remainder tolerance needs ~5e7 terms per side; this
    function exists as the independent cross-check oracle, so callers probing
    m = 1 should relax `remainder_tol`.
    """
    rate.require_tail_hypothesis()
    t = rate.threshold
    nx = rate.n * x
    pieces: list[float] = []
    for w0 in (math.ceil(nx + t) - nx, nx - math.floor(nx - t)):
        offset = w0
        total_terms = 0
        while True:
            ws = offset + np.arange(chunk, dtype=float)
            vals = big_phi(ws, p)
            pieces.extend(vals.tolist())
            offset += chunk
            total_terms += chunk
            if total_terms > max_terms:
                raise ConvergenceError(
                    "tail summation exceeded its term budget; "
                    "relax remainder_tol or use the closed form"
                )
            if vals[-1] < term_tol and tail_majorant(offset, p) < remainder_tol:
                break
    return math.fsum(pieces)


def tail_majorant(z: float, p: SigmoidParams) -> float:
    """Integral majorant of the density mass on the unit grid beyond z > 2."""
    if z <= 2.0:
        raise DomainError("majorant requires z > 2")
    return 1.0 / (4.0 * p.m * (z - 2.0) ** (2 * p.m))


def tail_bound(rate: RateParams, p: SigmoidParams) -> float:
    """Proven upper bound on `tail_sum`: 1 / (4m (n^(1-alpha) - 2)^(2m))."""
    rate.require_tail_hypothesis()
    return 1.0 / (4.0 * p.m * (rate.threshold - 2.0) ** (2 * p.m))


def denominator_sum(x: float, cfg: OperatorConfig) -> float:
    """Normalizing sum S_n(x) = sum of Phi(n*x - k) over the index window.

    Correctly rounded (fsum); lies in (1/denominator_bound, 1].
    """
    cfg.require_contains(x)
    ks = np.arange(cfg.k_lo, cfg.k_hi + 1, dtype=float)
    return math.fsum(big_phi(cfg.n * x - ks, cfg.params).tolist())


def denominator_grid(xs: np.ndarray, cfg: OperatorConfig, chunk: int = 512) -> np.ndarray:
    """Vectorized S_n over many x; pairwise-summed, for sweeps and checks."""
    xs = np.asarray(xs, dtype=float)
    if xs.size and (xs.min() < cfg.a or xs.max() > cfg.b):
        raise DomainError("grid extends outside the operator interval")
    ks = np.arange(cfg.k_lo, cfg.k_hi + 1, dtype=float)
    out = np.empty(xs.size)
    p = cfg.params
    for start in range(0, xs.size, chunk):
        block = xs[start : start + chunk, None]
        out[start : start + chunk] = big_phi(cfg.n * block - ks[None, :], p).sum(axis=1)
    return out


def denominator_bound(p: SigmoidParams) -> float:
    """Uniform upper bound on 1/S_n(x): 2 (1 + 4^m)^(1/(2m))."""
    m = p.m
    return 2.0 * (1.0 + 4.0**m) ** (1.0 / (2 * m))


def denominator_floor(p: SigmoidParams) -> float:
    """Uniform lower bound on S_n(x): the density value at 1."""
    return 1.0 / denominator_bound(p)


def density_integral(p: SigmoidParams, tol: float) -> float:
    """Integral of the density over the whole line, to within tol of 1.

    Adaptive Gauss-Kronrod quadrature on [0, R] (doubled by evenness) plus a
    bracketed analytic tail estimate: for x >= 1 the density is pinched
    between c_m (x+1)^-(2m+1) and (1/2)(x-1)^-(2m+1), so the mass beyond R
    lies in an interval whose width controls the tail error.
    """
    if not tol > 0.0:
        raise DomainError("tolerance must be positive")
    m = p.m
    # choose R so the upper tail bracket (R-1)^(-2m)/(4m) <= tol/4 per side
    r = 1.0 + (1.0 / (m * tol)) ** (1.0 / (2 * m))
    r = float(math.ceil(r))
    upper = (r - 1.0) ** (-2 * m) / (4 * m)
    lower = 2.0 ** (-(2 * m + 1) / (2 * m)) * (r + 1.0) ** (-2 * m) / (4 * m)
    breakpoints = sorted({v for v in (1.0, 2.0, 5.0, 20.0) if v < r})
    value, err = quad(
        lambda t: big_phi(t, p),
        0.0,
        r,
        epsabs=tol / 8.0,
        epsrel=1e-13,
        limit=400,
        points=breakpoints,
    )
    if err > tol / 4.0:
        raise ConvergenceError(
            f"quadrature error estimate {err:.3g} exceeds the requested tolerance"
        )
    return 2.0 * (value + 0.5 * (lower + upper))


def truncation_radius(epsilon: float, p: SigmoidParams) -> int:
    """Smallest integer T > 2 with 1/(4m (T-2)^(2m)) < epsilon.

    Used to truncate the bi-infinite quasi-interpolation sum; the comparison
    is done with exact integer powers so no boundary case is misrounded.
    """
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0,1), got {epsilon}")
    m = p.m
    target = 1.0 / (4.0 * m * epsilon)
    if not math.isfinite(target):
        raise CapacityError("epsilon too small: truncation radius overflows")
    guess = int(target ** (1.0 / (2 * m)))
    d = max(1, guess - 2)
    # The strict inequality is decided by direct double-precision evaluation
    # of the majorant, matching how callers will observe it.
    while not _majorant_below(d, m, epsilon):
        d += 1
        if d > _MAX_TRUNCATION_RADIUS:
            raise CapacityError("epsilon too small: truncation radius overflows")
    return d + 2


def _majorant_below(d: int, m: int, epsilon: float) -> bool:
    try:
        denom = float(4 * m * d ** (2 * m))
    except OverflowError:
        return True  # majorant underflows to zero
    if math.isinf(denom):
        return True
    return 1.0 / denom < epsilon
