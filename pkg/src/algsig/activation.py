"""Generator sigmoid and its bell-shaped activation density.

The generator is the algebraic sigmoid

    phi(x) = x / (1 + x^(2m))^(1/(2m)),        m >= 1,

odd, strictly increasing, saturating at +-1.  The activation density is the
symmetric difference

    Phi(x) = (phi(x + 1) - phi(x - 1)) / 4,

an even, strictly positive bell with unit integral whose integer shifts form
a partition of unity.  Everything here accepts scalars or numpy arrays and
is pure, so concurrent use is unrestricted.

Floating-point strategy:

* x^(2m) is built by repeated squaring of x^2; roots go through
  exp(log1p(.)/(2m)) so small arguments keep full relative accuracy.
* For |x| > _RECIPROCAL_CUTOFF the algebraically equivalent reciprocal form
  phi(x) = sign(x) / (1 + x^(-2m))^(1/(2m)) avoids overflow of x^(2m).
* Phi suffers catastrophic cancellation once both phi terms saturate, so for
  |x| >= _STABLE_DIFF_CUTOFF the difference phi(y+1) - phi(y-1) is assembled
  from expm1/log1p pieces that never subtract nearly-equal quantities
  (relative error stays ~1e-15 out to |x| = 1e4 and beyond).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MAX_SIGMOID_ORDER = 64

# |x| above which x^(2m) risks overflow / accuracy loss and the reciprocal
# form takes over.  x^(2m) overflows near |x| = 10^(308/(2m)), so the cutoff
# shrinks once large orders bring that boundary under 1e3.
_RECIPROCAL_CUTOFF = 1.0e3


def _reciprocal_cutoff(m: int) -> float:
    return min(_RECIPROCAL_CUTOFF, 10.0 ** (280.0 / (2 * m)))
# |x| above which the direct difference in Phi loses more than ~3 digits to
# cancellation and the expm1-based difference takes over.  At the seam both
# paths agree to ~1e-14 relative.
_STABLE_DIFF_CUTOFF = 2.0


@dataclass(frozen=True)
class SigmoidParams:
    """Order of the algebraic sigmoid; the only shape parameter."""

    m: int = 1

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or isinstance(self.m, bool):
            raise DomainError(f"sigmoid order must be an integer, got {self.m!r}")
        if not 1 <= self.m <= MAX_SIGMOID_ORDER:
            raise DomainError(
                f"sigmoid order must be in [1, {MAX_SIGMOID_ORDER}], got {self.m}"
            )


def _prep(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if not np.all(np.isfinite(arr)):
        raise DomainError("argument must be finite")
    return arr, scalar


def _finish(out: np.ndarray, scalar: bool):
    return float(out[0]) if scalar else out


def _pow_even(x: np.ndarray, m: int) -> np.ndarray:
    """x^(2m) by repeated squaring of x^2."""
    result = None
    base = x * x
    e = m
    while e > 0:
        if e & 1:
            result = base if result is None else result * base
        e >>= 1
        if e:
            base = base * base
    return result


def phi(x, p: SigmoidParams):
    """Algebraic sigmoid; odd, strictly increasing, range (-1, 1)."""
    arr, scalar = _prep(x)
    m = p.m
    y = np.abs(arr)
    out = np.empty_like(y)

    near = y <= _reciprocal_cutoff(m)
    if near.any():
        yn = y[near]
        out[near] = yn * np.exp(-np.log1p(_pow_even(yn, m)) / (2 * m))
    far = ~near
    if far.any():
        s = _pow_even(1.0 / y[far], m)
        out[far] = np.exp(-np.log1p(s) / (2 * m))

    out = np.copysign(out, arr)
    return _finish(out, scalar)


def phi_prime(x, p: SigmoidParams):
    """Derivative of the sigmoid: (1 + x^(2m))^(-(2m+1)/(2m)); even, > 0."""
    arr, scalar = _prep(x)
    m = p.m
    y = np.abs(arr)
    out = np.empty_like(y)
    expo = (2 * m + 1) / (2 * m)

    near = y <= _reciprocal_cutoff(m)
    if near.any():
        out[near] = np.exp(-expo * np.log1p(_pow_even(y[near], m)))
    far = ~near
    if far.any():
        yf = y[far]
        s = _pow_even(1.0 / yf, m)
        # (1+y^2m)^(-expo) = y^(-(2m+1)) * (1+y^(-2m))^(-expo); underflow of
        # the power is the correct graceful limit.
        with np.errstate(under="ignore"):
            out[far] = np.exp(-(2 * m + 1) * np.log(yf) - expo * np.log1p(s))

    return _finish(out, scalar)


def _phi_tail_pair(y: np.ndarray, m: int) -> np.ndarray:
    """Stable phi(y+1) - phi(y-1) for y >= _STABLE_DIFF_CUTOFF.

    Writes phi(w) = (1 + w^(-2m))^(-1/(2m)) and forms the difference via
    expm1 so the two near-unity values never meet in a subtraction.
    """
    u = y + 1.0
    v = y - 1.0
    with np.errstate(under="ignore"):
        s_u = _pow_even(1.0 / u, m)  # u^(-2m)
        # v^(-2m) - u^(-2m) = u^(-2m) * ((u/v)^(2m) - 1), all positive.
        ratio_term = np.expm1(2 * m * np.log1p(2.0 / v))
        s_diff = s_u * ratio_term
        log_u = np.log1p(s_u) / (2 * m)
        dlog = np.log1p(s_diff / (1.0 + s_u)) / (2 * m)
        return np.exp(-log_u) * (-np.expm1(-dlog))


def big_phi(x, p: SigmoidParams):
    """Activation density Phi(x) = (phi(x+1) - phi(x-1))/4; even, positive."""
    arr, scalar = _prep(x)
    m = p.m
    y = np.abs(arr)
    out = np.empty_like(y)

    near = y < _STABLE_DIFF_CUTOFF
    if near.any():
        yn = y[near]
        out[near] = (phi(yn + 1.0, p) - phi(yn - 1.0, p)) / 4.0
    far = ~near
    if far.any():
        out[far] = _phi_tail_pair(y[far], m) / 4.0

    return _finish(out, scalar)


def big_phi_prime(x, p: SigmoidParams):
    """Derivative of the density; zero at 0, negative for x > 0."""
    arr, scalar = _prep(x)
    out = (phi_prime(arr + 1.0, p) - phi_prime(arr - 1.0, p)) / 4.0
    return _finish(np.asarray(out), scalar)


def big_phi_peak(p: SigmoidParams) -> float:
    """Maximum of the density, attained at 0: 1 / (2 * 2^(1/(2m)))."""
    return float(0.5 * np.exp(-np.log(2.0) / (2 * p.m)))


def phi_one_complement(w, p: SigmoidParams):
    """1 - phi(w) for w > 0, computed without cancellation.

    Needed by the closed-form tail sums: 1 - (1 + w^(-2m))^(-1/(2m)) =
    -expm1(-log1p(w^(-2m))/(2m)).
    """
    arr, scalar = _prep(w)
    if np.any(arr <= 0.0):
        raise DomainError("complement form requires w > 0")
    m = p.m
    with np.errstate(under="ignore", over="ignore"):
        s = _pow_even(1.0 / arr, m)
        out = -np.expm1(-np.log1p(s) / (2 * m))
    return _finish(out, scalar)
