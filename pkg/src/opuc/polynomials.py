"""Monic orthogonal polynomials on the circle.

Two independent computation paths are kept side by side:

* :func:`szego_levinson` runs the coefficient recursion
  ``Phi_{k+1} = z Phi_k - conj(alpha_k) Phi_k*`` and
  ``Phi_{k+1}* = Phi_k* - alpha_k z Phi_k``;
* :func:`dense_oracle` solves the Toeplitz annihilation system for the
  non-leading coefficients with a dense pivoted factorization.

The recursion re-anchors the norm accumulator from the moment quadratic
form every 64 steps so that drift stays bounded for large degrees.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .grid import CircleGrid, FourierSeries, GridFunction, synthesize
from .weights import Weight, fourier_moments

__all__ = [
    "RecursionBreakdownError",
    "MonicPolynomial",
    "VerblunskySequence",
    "LevinsonResult",
    "moments",
    "szego_levinson",
    "star",
    "dense_oracle",
    "evaluate_on_grid",
    "weighted_norm_sq",
]

BREAKDOWN_MARGIN = 1e-13


class RecursionBreakdownError(RuntimeError):
    """|alpha_k| reached the unit circle; the moment data lost definiteness."""

    def __init__(self, k: int, magnitude: float):
        super().__init__(
            f"recursion breakdown at step {k}: |alpha_{k}| = {magnitude:.17g}"
        )
        self.k = k
        self.magnitude = magnitude


@dataclass(frozen=True)
class MonicPolynomial:
    """Coefficients in the monomial basis; ``coeffs[j]`` multiplies z^j."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def as_series(self) -> FourierSeries:
        return FourierSeries(0, self.degree, self.coeffs)


@dataclass(frozen=True)
class VerblunskySequence:
    """Recursion coefficients together with the norms and moments behind them."""

    alphas: np.ndarray
    norms_sq: np.ndarray
    moments: np.ndarray


@dataclass(frozen=True)
class LevinsonResult:
    verblunsky: VerblunskySequence
    phi: list[np.ndarray]
    phi_star: list[np.ndarray]

    def phi_poly(self, k: int) -> MonicPolynomial:
        return MonicPolynomial(self.phi[k])

    def phi_star_poly(self, k: int) -> MonicPolynomial:
        return MonicPolynomial(self.phi_star[k])


def moments(weight: Weight, n: int) -> np.ndarray:
    """Trigonometric moments ``c_k = int e^{-ik theta} w dtheta``, k = 0..n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return fourier_moments(weight, n)


def weighted_norm_sq(coeffs: np.ndarray, moms: np.ndarray) -> float:
    """Quadratic form <Q, Q>_w from the moment vector.

    Uses c_{-k} = conj(c_k); needs moments up to deg Q.
    """
    q = np.asarray(coeffs, dtype=complex)
    deg = len(q) - 1
    if deg + 1 > len(moms):
        raise ValueError("not enough moments for the quadratic form")
    # r[d] = sum_a q_{a+d} conj(q_a) for d = -(deg)..deg
    r = np.correlate(q, q, mode="full")
    acc = moms[0].real * np.vdot(q, q).real
    for d in range(1, deg + 1):
        s_d = np.conj(r[deg + d])  # sum_a q_a conj(q_{a+d})
        acc += 2.0 * (moms[d] * s_d).real
    return float(acc)


def szego_levinson(moms: np.ndarray, n: int, renorm_every: int = 64) -> LevinsonResult:
    """Verblunsky coefficients and all Phi_k, Phi_k* for k <= n.

    Raises :class:`RecursionBreakdownError` when |alpha_k| >= 1 - 1e-13,
    which signals loss of positive definiteness in the quadrature moments
    (the value is never clamped).
    """
    c = np.asarray(moms, dtype=complex)
    if n < 0 or len(c) < n + 1:
        raise ValueError(f"need moments c_0..c_{n}, got {len(c)}")
    if not (c[0].real > 0):
        raise ValueError("c_0 = |w|_1 must be positive")
    conj_c = np.conj(c)
    phi = [np.array([1.0 + 0.0j])]
    phi_star = [np.array([1.0 + 0.0j])]
    norms = [c[0].real]
    alphas = np.zeros(n, dtype=complex)
    for k in range(n):
        q = phi[k]
        alpha_bar = np.dot(q, conj_c[1 : k + 2]) / norms[k]
        alpha = np.conj(alpha_bar)
        if abs(alpha) >= 1.0 - BREAKDOWN_MARGIN:
            raise RecursionBreakdownError(k, abs(alpha))
        z_phi = np.concatenate(([0.0 + 0.0j], q))
        pad_star = np.concatenate((phi_star[k], [0.0 + 0.0j]))
        phi.append(z_phi - alpha_bar * pad_star)
        phi_star.append(pad_star - alpha * z_phi)
        nxt = (1.0 - abs(alpha) ** 2) * norms[k]
        if (k + 1) % renorm_every == 0:
            anchored = weighted_norm_sq(phi[k + 1], c)
            if anchored <= 0:
                raise RecursionBreakdownError(k, 1.0)
            nxt = anchored
        norms.append(nxt)
        alphas[k] = alpha
    verblunsky = VerblunskySequence(
        alphas=alphas, norms_sq=np.array(norms), moments=c.copy()
    )
    return LevinsonResult(verblunsky=verblunsky, phi=phi, phi_star=phi_star)


def star(poly: MonicPolynomial, n: int) -> MonicPolynomial:
    """The degree-n (*)-operation: reverse the coefficients and conjugate."""
    if poly.degree > n:
        raise ValueError(f"degree {poly.degree} exceeds star degree {n}")
    padded = np.zeros(n + 1, dtype=complex)
    padded[: poly.degree + 1] = poly.coeffs
    return MonicPolynomial(np.conj(padded[::-1]))


def dense_oracle(moms: np.ndarray, n: int, cond_limit: float = 1e12) -> MonicPolynomial:
    """Phi_n by dense solve of the Toeplitz annihilation system.

    Independent of the recursion path: general LU with partial pivoting on
    ``T[j, a] = c_{j-a}``, right-hand side ``-c_{j-n}``.
    """
    c = np.asarray(moms, dtype=complex)
    if len(c) < n + 1:
        raise ValueError(f"need moments c_0..c_{n}")
    if n == 0:
        return MonicPolynomial(np.array([1.0 + 0.0j]))
    col = c[:n]
    row = np.conj(c[:n])
    T = scipy.linalg.toeplitz(col, row)
    cond = np.linalg.cond(T)
    if not np.isfinite(cond) or cond > cond_limit:
        raise np.linalg.LinAlgError(
            f"annihilation system too ill-conditioned: cond ~ {cond:.3g}"
        )
    rhs = -np.conj(c[1 : n + 1][::-1])
    q = scipy.linalg.solve(T, rhs)
    return MonicPolynomial(np.concatenate((q, [1.0 + 0.0j])))


def evaluate_on_grid(poly: MonicPolynomial, K: int) -> tuple[GridFunction, float]:
    """Samples on a size-K grid plus the grid sup-norm estimate.

    Exact at the nodes (zero-padded inverse transform); the sup-norm is a
    lower estimate whose quality is set by the resolution K, certified
    for K >= 64*(degree+1).
    """
    if K < 4 or K & (K - 1):
        raise ValueError(f"K must be a power of two >= 4, got {K}")
    grid = CircleGrid(K)
    if poly.degree > grid.max_mode:
        raise ValueError(f"degree {poly.degree} exceeds grid capacity {grid.max_mode}")
    values = synthesize(poly.as_series(), grid)
    return values, float(np.abs(values.values).max())
