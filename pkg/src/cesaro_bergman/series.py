"""Exact coefficient arithmetic for truncated Taylor series on the unit disk.

The Cesàro operator C maps f(z) = sum a_j z^j to the function whose k-th
Taylor coefficient is the mean of a_0..a_k.  Its inverse acts as
h -> (1-z)(h(z) + z h'(z)).  Both are (banded) lower triangular in the
monomial basis, so a degree-N truncation determines the first N+1 output
coefficients exactly; everything in this module is exact up to float
rounding.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TaylorTruncation",
    "OperatorKind",
    "CoeffOperator",
    "BinomialSign",
    "cesaro_apply",
    "cesaro_inverse_apply",
    "recover_from_cesaro",
    "differentiate",
    "multiply_by_z",
    "multiply_by_one_minus_z",
    "binomial_series_coeffs",
    "eigenfunction_truncation",
    "eigen_residual_exact",
]


@dataclass(frozen=True)
class TaylorTruncation:
    """Degree-N Taylor polynomial, stored as complex coefficients a_0..a_N."""

    coeffs: np.ndarray = field()

    def __post_init__(self) -> None:
        arr = np.asarray(self.coeffs, dtype=complex)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coefficients must be a nonempty 1-d sequence")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def padded(self, degree: int) -> "TaylorTruncation":
        """Zero-pad (or truncate) to the given degree."""
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        out = np.zeros(degree + 1, dtype=complex)
        n = min(degree, self.degree)
        out[: n + 1] = self.coeffs[: n + 1]
        return TaylorTruncation(out)

    def __add__(self, other: "TaylorTruncation") -> "TaylorTruncation":
        n = max(self.degree, other.degree)
        return TaylorTruncation(self.padded(n).coeffs + other.padded(n).coeffs)

    def __mul__(self, scalar: complex) -> "TaylorTruncation":
        return TaylorTruncation(self.coeffs * scalar)

    __rmul__ = __mul__

    def evaluate(self, z: complex) -> complex:
        """Horner evaluation; meaningful for |z| < 1."""
        acc = 0.0 + 0.0j
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc


def cesaro_apply(f: TaylorTruncation) -> TaylorTruncation:
    """Coefficient-averaging (Cesàro) operator: output_k = mean(a_0..a_k)."""
    prefix = np.cumsum(f.coeffs)
    denom = np.arange(1, f.degree + 2, dtype=float)
    # componentwise division: complex/real via Smith's algorithm loses an ulp
    return TaylorTruncation(prefix.real / denom + 1j * (prefix.imag / denom))


def cesaro_inverse_apply(h: TaylorTruncation) -> TaylorTruncation:
    """Inverse Cesàro operator (1-z)(h + z h').

    Output degree equals the input degree; the formal degree-(N+1) coefficient
    is dropped, which is exact when h is the image of a degree-N polynomial.
    """
    if h.degree < 1:
        raise ValueError("cesaro_inverse_apply requires degree >= 1")
    b = h.coeffs
    k = np.arange(len(b), dtype=float)
    out = (k + 1.0) * b
    out[1:] -= k[1:] * b[:-1]
    return TaylorTruncation(out)


def recover_from_cesaro(g: TaylorTruncation) -> TaylorTruncation:
    """Recover f from g = C(f) via f = (1-z)(z g)'.

    Returns a degree-(N-1) truncation; the degree-boundary coefficient is
    dropped because (z g)' mixes it with the unknown coefficient of order N+1.
    """
    if g.degree < 1:
        raise ValueError("recover_from_cesaro requires degree >= 1")
    inner = differentiate(multiply_by_z(g))  # (z g)', degree N, exact
    full = multiply_by_one_minus_z(inner)
    return TaylorTruncation(full.coeffs[: g.degree])


def differentiate(f: TaylorTruncation) -> TaylorTruncation:
    """Termwise derivative; degree drops by one (constants map to [0])."""
    if f.degree == 0:
        return TaylorTruncation(np.zeros(1, dtype=complex))
    j = np.arange(1, f.degree + 1)
    return TaylorTruncation(f.coeffs[1:] * j)


def multiply_by_z(f: TaylorTruncation) -> TaylorTruncation:
    """Multiplication by z; degree rises by one, exact."""
    return TaylorTruncation(np.concatenate(([0.0 + 0.0j], f.coeffs)))


def multiply_by_one_minus_z(f: TaylorTruncation) -> TaylorTruncation:
    """Multiplication by (1 - z); degree rises by one, exact."""
    out = np.concatenate((f.coeffs, [0.0 + 0.0j]))
    out[1:] -= f.coeffs
    return TaylorTruncation(out)


class BinomialSign(enum.Enum):
    PLUS_Z = "plus_z"
    MINUS_Z = "minus_z"


def binomial_series_coeffs(
    exponent: float, sign: BinomialSign, degree: int
) -> TaylorTruncation:
    """Truncation of the binomial series (1 +/- z)^(-s) for s > 0.

    Uses the stable ratio recurrence c_{k+1} = c_k (s + k) / (k + 1), with
    alternating signs for the (1 + z) case.
    """
    if not math.isfinite(exponent) or exponent <= 0.0:
        raise ValueError("binomial exponent must be finite and positive")
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    c = np.empty(degree + 1, dtype=complex)
    c[0] = 1.0
    flip = -1.0 if sign is BinomialSign.PLUS_Z else 1.0
    for k in range(degree):
        c[k + 1] = c[k] * flip * (exponent + k) / (k + 1)
    return TaylorTruncation(c)


def eigenfunction_truncation(m: int, degree: int) -> TaylorTruncation:
    """Truncation of z^(m-1) (1-z)^(-m), the eigenfunction for eigenvalue 1/m.

    Its coefficients are the binomial numbers C(j, m-1).  The eigen relation
    C(f_m) = (1/m) f_m holds exactly at coefficient level; use
    :func:`eigen_residual_exact` to verify with integer arithmetic.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    if degree < m - 1:
        raise ValueError("degree must be at least m - 1")
    tail = binomial_series_coeffs(float(m), BinomialSign.MINUS_Z, degree - (m - 1))
    out = np.concatenate((np.zeros(m - 1, dtype=complex), tail.coeffs))
    return TaylorTruncation(out)


def eigen_residual_exact(m: int, degree: int) -> bool:
    """Check m * sum_{j<=k} C(j, m-1) == (k+1) C(k, m-1) for all k <= degree.

    Integer arithmetic, so the verdict is exact regardless of coefficient
    size.  Equivalent to C(f_m) = (1/m) f_m on the computed coefficients.
    """
    prefix = 0
    for k in range(degree + 1):
        prefix += math.comb(k, m - 1)
        if m * prefix != (k + 1) * math.comb(k, m - 1):
            return False
    return True


class OperatorKind(enum.Enum):
    CESARO = "cesaro"
    CESARO_INVERSE = "cesaro_inverse"
    DIFFERENTIATE = "differentiate"
    MULTIPLY_BY_Z = "multiply_by_z"
    MULTIPLY_BY_ONE_MINUS_Z = "multiply_by_one_minus_z"


_DISPATCH = {
    OperatorKind.CESARO: cesaro_apply,
    OperatorKind.CESARO_INVERSE: cesaro_inverse_apply,
    OperatorKind.DIFFERENTIATE: differentiate,
    OperatorKind.MULTIPLY_BY_Z: multiply_by_z,
    OperatorKind.MULTIPLY_BY_ONE_MINUS_Z: multiply_by_one_minus_z,
}


@dataclass(frozen=True)
class CoeffOperator:
    """Named coefficient-space operator; CESARO and CESARO_INVERSE are lower
    triangular (banded), so truncations are exact."""

    kind: OperatorKind

    def apply(self, f: TaylorTruncation) -> TaylorTruncation:
        return _DISPATCH[self.kind](f)
