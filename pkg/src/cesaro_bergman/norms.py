"""Weighted Bergman norms on the unit disk.

The space A^p_alpha carries the norm

    ||f||_{p,alpha} = ( int_D |f(z)|^p (1-|z|)^alpha dA(z) )^{1/p},

with dA the area measure normalized by pi.  Monomial norms have the closed
form (2 B(jp+2, alpha+1))^{1/p}; at p = 2 the monomials are orthogonal and
Parseval summation applies; for general p the integral is computed by a
Gauss-Jacobi radial rule tensored with uniform angular grids whose size is
graded per radial node.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
import scipy.fft as _fft
from scipy.special import betaln, gammaln, roots_jacobi

from .series import TaylorTruncation

__all__ = [
    "SpaceKind",
    "SpaceSpec",
    "DiskQuadrature",
    "NonConvergedQuadrature",
    "SeminormEntry",
    "InclusionScan",
    "log_beta",
    "monomial_norm",
    "monomial_norm_quadratic_weight",
    "monomial_norm_asymptote",
    "parseval_weights",
    "norm_parseval",
    "norm_quadrature",
    "norm_quadrature_with_rule",
    "seminorm_family",
    "inclusion_ratio_scan",
]


class NonConvergedQuadrature(RuntimeError):
    """Node doubling hit the cap before successive values agreed."""

    def __init__(self, message: str, last_value: float, rel_change: float):
        super().__init__(message)
        self.last_value = last_value
        self.rel_change = rel_change


def _stirling_tail(x):
    # gammaln(x) - [(x - 1/2) ln x - x + ln(2 pi)/2] for x >= 32
    xi = 1.0 / x
    x2 = xi * xi
    return xi * (1.0 / 12.0 + x2 * (-1.0 / 360.0
                                    + x2 * (1.0 / 1260.0 - x2 / 1680.0)))


def log_beta(a, b):
    """log B(a, b) accurate to ~1e-14 absolute even for huge arguments.

    Naive gammaln(a) + gammaln(b) - gammaln(a+b) cancels catastrophically
    when one argument is large (absolute error ~1e-16 * gammaln(a)); instead,
    for the larger argument h the difference gammaln(h+l) - gammaln(h) is
    expanded as (h-1/2) log1p(l/h) + l log(h+l) - l plus Stirling tails,
    which stays at the scale of the result.
    """
    a_arr, b_arr = np.broadcast_arrays(np.asarray(a, dtype=float),
                                       np.asarray(b, dtype=float))
    lo = np.atleast_1d(np.minimum(a_arr, b_arr)).astype(float)
    hi = np.atleast_1d(np.maximum(a_arr, b_arr)).astype(float)
    out = np.empty(hi.shape, dtype=float)
    small = hi < 32.0
    if np.any(small):
        out[small] = betaln(lo[small], hi[small])
    big = ~small
    if np.any(big):
        h = hi[big]
        l = lo[big]
        delta = ((h - 0.5) * np.log1p(l / h) + l * np.log(h + l) - l
                 + _stirling_tail(h + l) - _stirling_tail(h))
        out[big] = gammaln(l) - delta
    if np.isscalar(a) and np.isscalar(b):
        return float(out[0])
    return out.reshape(a_arr.shape)


def monomial_norm(j, p: float, alpha: float):
    """||z^j||_{p,alpha} = (2 B(jp+2, alpha+1))^{1/p}.

    Parameters
    ----------
    j : int or ndarray of int
        Monomial degree(s), >= 0.
    p : float
        Integrability exponent, p >= 1.
    alpha : float
        Weight exponent, alpha >= 0.
    """
    if p < 1.0:
        raise ValueError("p must be >= 1")
    if alpha < 0.0:
        raise ValueError("alpha must be >= 0")
    jarr = np.asarray(j, dtype=float)
    if np.any(jarr < 0):
        raise ValueError("monomial degree must be >= 0")
    val = np.exp((math.log(2.0) + log_beta(jarr * p + 2.0, alpha + 1.0)) / p)
    return float(val) if np.isscalar(j) or jarr.ndim == 0 else val


def monomial_norm_quadratic_weight(j, p: float, alpha: float):
    """Monomial norm under the comparable weight (1-|z|^2)^alpha.

    Closed form (B(jp/2+1, alpha+1))^{1/p}; the ratio to :func:`monomial_norm`
    lies in [1, 2^{alpha/p}] because 1-r <= 1-r^2 <= 2(1-r).
    """
    jarr = np.asarray(j, dtype=float)
    val = np.exp(log_beta(jarr * p / 2.0 + 1.0, alpha + 1.0) / p)
    return float(val) if np.isscalar(j) or jarr.ndim == 0 else val


def monomial_norm_asymptote(p: float, alpha: float) -> float:
    """Limit of ||z^j||^p j^(alpha+1) as j grows: 2 Gamma(alpha+1) / p^(alpha+1)."""
    return 2.0 * math.exp(gammaln(alpha + 1.0)) / p ** (alpha + 1.0)


def parseval_weights(alpha: float, degree: int) -> np.ndarray:
    """Vector of squared monomial norms 2 B(2j+2, alpha+1) for j = 0..degree."""
    j = np.arange(degree + 1, dtype=float)
    return 2.0 * np.exp(log_beta(2.0 * j + 2.0, alpha + 1.0))


def norm_parseval(f: TaylorTruncation, alpha: float) -> float:
    """A^2_alpha norm by orthogonality of monomials (p = 2 only)."""
    w = parseval_weights(alpha, f.degree)
    return math.sqrt(float(np.sum(np.abs(f.coeffs) ** 2 * w)))


# ---------------------------------------------------------------------------
# disk quadrature
# ---------------------------------------------------------------------------

@lru_cache(maxsize=128)
def _radial_rule(alpha: float, count: int) -> tuple[np.ndarray, np.ndarray]:
    # nodes/weights with int_0^1 (1-r)^alpha r h(r) dr = sum w_i h(r_i);
    # Gauss-Jacobi on [-1,1] with parameters (alpha, 1), mapped to [0,1]
    x, w = roots_jacobi(count, alpha, 1.0)
    return (x + 1.0) / 2.0, w * 2.0 ** -(alpha + 2.0)


@dataclass(frozen=True)
class DiskQuadrature:
    """Tensor rule for int_D |f|^p (1-|z|)^alpha dA / pi.

    radial_nodes/radial_weights absorb the weight (1-r)^alpha r on [0, 1];
    angular_base is the minimum uniform angular grid size (the effective
    angular count is graded per radial node so that polynomial integrands at
    even p are alias-free); rel_error_estimate is filled in by the adaptive
    driver.
    """

    alpha: float
    radial_nodes: np.ndarray
    radial_weights: np.ndarray
    angular_base: int = 64
    rel_error_estimate: float = math.nan

    @classmethod
    def build(cls, alpha: float, radial_count: int = 128,
              angular_base: int = 64) -> "DiskQuadrature":
        if alpha < 0.0:
            raise ValueError("alpha must be >= 0")
        if radial_count < 2:
            raise ValueError("radial_count must be >= 2")
        nodes, weights = _radial_rule(float(alpha), int(radial_count))
        return cls(float(alpha), nodes, weights, int(angular_base))

    @property
    def radial_count(self) -> int:
        return len(self.radial_nodes)

    def refined(self) -> "DiskQuadrature":
        """Same weight, twice the radial resolution."""
        return DiskQuadrature.build(self.alpha, 2 * self.radial_count,
                                    self.angular_base)

    def total_measure(self) -> float:
        """Integral of the constant 1, equal to 2 B(2, alpha+1)."""
        return 2.0 * float(np.sum(self.radial_weights))


# angular safety factor: T >= _ANGULAR_FACTOR * p * (effective degree + 1),
# which exceeds the 2 p N alias bound for polynomial integrands at even p
_ANGULAR_FACTOR = 4.0
# per-node coefficient cutoff relative to the largest scaled coefficient;
# dropped terms perturb f by < 1e-16 of the attained norm scale
_SCALED_CUTOFF = 1e-20
_BATCH_ELEMENTS = 1 << 22


def _pnorm_single_pass(coeffs: np.ndarray, p: float, quad: DiskQuadrature) -> float:
    r = quad.radial_nodes
    w = quad.radial_weights
    n = len(coeffs) - 1
    js = np.arange(n + 1, dtype=float)
    absc = np.abs(coeffs)
    logr = np.log(r)
    count = len(r)
    eff_deg = np.empty(count, dtype=int)
    ang = np.empty(count, dtype=int)
    for i in range(count):
        scaled = absc * np.exp(js * logr[i])
        top = scaled.max()
        if top == 0.0:
            eff_deg[i] = 0
            ang[i] = quad.angular_base
            continue
        keep = np.nonzero(scaled > _SCALED_CUTOFF * top)[0]
        eff_deg[i] = int(keep[-1])
        need = _ANGULAR_FACTOR * p * (eff_deg[i] + 1)
        ang[i] = 1 << max(int(math.ceil(math.log2(max(need, 2.0)))),
                          int(math.log2(quad.angular_base)))
    total = 0.0
    for t in np.unique(ang):
        idx = np.nonzero(ang == t)[0]
        batch = max(1, _BATCH_ELEMENTS // int(t))
        for k in range(0, len(idx), batch):
            sel = idx[k:k + batch]
            jtop = int(eff_deg[sel].max())
            block = coeffs[None, : jtop + 1] * np.exp(
                np.outer(logr[sel], js[: jtop + 1]))
            vals = _fft.fft(block, n=int(t), axis=1, workers=-1)
            means = np.mean(np.abs(vals) ** p, axis=1)
            total += float(np.dot(w[sel], means))
    return (2.0 * total) ** (1.0 / p)


def norm_quadrature_with_rule(
    f: TaylorTruncation,
    p: float,
    alpha: float,
    quad: DiskQuadrature | None = None,
    rel_tol: float = 1e-9,
    max_radial: int = 4096,
) -> tuple[float, DiskQuadrature]:
    """A^p_alpha norm by adaptive tensor quadrature, with the final rule.

    Doubles the radial count (re-grading the angular grids accordingly) until
    two successive values agree to rel_tol.  Raises
    :class:`NonConvergedQuadrature` when max_radial is reached without
    agreement, which signals an integrand too singular at the boundary for
    the requested tolerance.
    """
    if p < 1.0:
        raise ValueError("p must be >= 1")
    if alpha < 0.0:
        raise ValueError("alpha must be >= 0")
    coeffs = np.asarray(f.coeffs, dtype=complex)
    if quad is not None and abs(quad.alpha - alpha) > 1e-12:
        raise ValueError("quadrature was built for a different alpha")
    if quad is not None:
        radial = quad.radial_count
        angular_base = quad.angular_base
    else:
        # start near sqrt(N) so the rule resolves the 1/N boundary layer
        radial = min(512, max(64, 1 << int(math.ceil(
            math.log2(max(8.0, 4.0 * math.sqrt(len(coeffs))))))))
        angular_base = 64
    if not np.any(coeffs):
        rule = DiskQuadrature.build(alpha, radial, angular_base)
        return 0.0, replace(rule, rel_error_estimate=0.0)
    prev = None
    value = math.nan
    rel_change = math.inf
    while radial <= max_radial:
        rule = DiskQuadrature.build(alpha, radial, angular_base)
        value = _pnorm_single_pass(coeffs, p, rule)
        if prev is not None:
            rel_change = abs(value - prev) / max(abs(value), 1e-300)
            if rel_change <= rel_tol:
                return value, replace(rule, rel_error_estimate=rel_change)
        prev = value
        radial *= 2
    raise NonConvergedQuadrature(
        f"no agreement to rel_tol={rel_tol:g} within {max_radial} radial nodes",
        last_value=value, rel_change=rel_change)


def norm_quadrature(
    f: TaylorTruncation,
    p: float,
    alpha: float,
    quad: DiskQuadrature | None = None,
    rel_tol: float = 1e-9,
    max_radial: int = 4096,
) -> float:
    """A^p_alpha norm by adaptive tensor quadrature (value only)."""
    value, _ = norm_quadrature_with_rule(f, p, alpha, quad=quad,
                                         rel_tol=rel_tol, max_radial=max_radial)
    return value


# ---------------------------------------------------------------------------
# limit-space seminorm families
# ---------------------------------------------------------------------------

class SpaceKind(enum.Enum):
    BANACH = "banach"
    FRECHET_INTERSECTION = "frechet"
    LB_UNION = "lb"


@dataclass(frozen=True)
class SpaceSpec:
    """Bergman space parameters plus the limit-space structure.

    For FRECHET_INTERSECTION the step seminorms live at alpha + 1/n; for
    LB_UNION at alpha - 1/n, restricted to steps with alpha - 1/n > 0.
    """

    p: float
    alpha: float
    kind: SpaceKind = SpaceKind.BANACH

    def __post_init__(self) -> None:
        if not (self.p >= 1.0):
            raise ValueError("p must be >= 1")
        if not (self.alpha > 0.0) and self.kind is not SpaceKind.BANACH:
            raise ValueError("limit spaces need alpha > 0")
        if self.alpha < 0.0:
            raise ValueError("alpha must be >= 0")

    def step_alpha(self, n: int) -> float:
        """Weight exponent of the n-th step space."""
        if n < 1:
            raise ValueError("step index must be >= 1")
        if self.kind is SpaceKind.FRECHET_INTERSECTION:
            return self.alpha + 1.0 / n
        if self.kind is SpaceKind.LB_UNION:
            mu = self.alpha - 1.0 / n
            if mu <= 0.0:
                raise ValueError(f"step n={n} is inadmissible: alpha - 1/n <= 0")
            return mu
        return self.alpha

    def min_step(self) -> int:
        """Smallest admissible step index (1 except for LB_UNION)."""
        if self.kind is SpaceKind.LB_UNION:
            return int(math.floor(1.0 / self.alpha)) + 1
        return 1

    def admissible_steps(self, n_max: int) -> list[int]:
        return list(range(self.min_step(), n_max + 1))


@dataclass(frozen=True)
class SeminormEntry:
    n: int
    alpha: float
    value: float
    ok: bool  # False when the quadrature failed to converge for this step


def seminorm_family(
    f: TaylorTruncation, spec: SpaceSpec, n_max: int, rel_tol: float = 1e-9
) -> list[SeminormEntry]:
    """Step seminorms ||f||_{p, alpha +/- 1/n} for the admissible n <= n_max.

    Entries where the quadrature fails to converge are marked ok=False (value
    nan) instead of aborting the family; p = 2 uses Parseval summation.
    """
    if spec.kind is SpaceKind.BANACH:
        raise ValueError("seminorm families are defined for limit spaces only")
    out: list[SeminormEntry] = []
    for n in spec.admissible_steps(n_max):
        mu = spec.step_alpha(n)
        try:
            if spec.p == 2.0:
                value = norm_parseval(f, mu)
            else:
                value = norm_quadrature(f, spec.p, mu, rel_tol=rel_tol)
            out.append(SeminormEntry(n, mu, value, True))
        except NonConvergedQuadrature:
            out.append(SeminormEntry(n, mu, math.nan, False))
    return out


@dataclass(frozen=True)
class InclusionScan:
    """Diagonal entries of the inclusion A^p_mu -> A^p_gamma on monomials."""

    degrees: np.ndarray
    ratios: np.ndarray
    exponent: float
    r_squared: float


def inclusion_ratio_scan(p: float, mu: float, gamma: float,
                         j_max: int) -> InclusionScan:
    """Ratios d_j = ||z^j||_{p,gamma} / ||z^j||_{p,mu} with a fitted decay law.

    The ratios decay like j^{-(gamma-mu)/p}; d_j -> 0 is the numerical
    witness that the inclusion is compact (at p = 2 it acts diagonally with
    entries d_j).
    """
    if not (0.0 < mu < gamma):
        raise ValueError("need 0 < mu < gamma")
    if j_max < 8:
        raise ValueError("j_max too small to fit a decay law")
    j = np.arange(1, j_max + 1, dtype=float)
    log_ratio = (log_beta(j * p + 2.0, gamma + 1.0)
                 - log_beta(j * p + 2.0, mu + 1.0)) / p
    ratios = np.exp(log_ratio)
    # fit on the upper half of the log range to read off the asymptote
    lo = max(8.0, math.sqrt(j_max))
    mask = j >= lo
    x = np.log(j[mask])
    y = log_ratio[mask]
    slope, intercept = np.polyfit(x, y, 1)
    fit = intercept + slope * x
    ss_res = float(np.sum((y - fit) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return InclusionScan(j.astype(int), ratios, float(slope), r2)
