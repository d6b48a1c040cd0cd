"""Uniform circle grid and band-limited Fourier calculus.

Conventions used throughout the package:

* grid nodes are half-cell offset, ``theta_m = -pi + (m + 1/2) * 2*pi/N``,
  so ``theta = 0`` (where the singular weight families blow up) is never
  a node;
* Fourier coefficients follow ``c_k = (1/2pi) int f(theta) e^{-ik theta}``,
  which makes Parseval read ``|f|_2^2 = 2*pi * sum |c_k|^2`` and the
  mean projection return ``c_0`` directly.

Analysis and synthesis are exact inverses of each other on series whose
band fits strictly inside the grid's Nyquist range.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "BandError",
    "CircleGrid",
    "GridFunction",
    "FourierSeries",
    "analyze",
    "synthesize",
    "project",
    "shift",
    "hilbert",
    "riesz_plus",
    "mean_projection",
    "lp_norm",
    "inner",
    "parseval_norm",
    "project_samples",
]


class BandError(ValueError):
    """A series band does not fit the grid (or operation) it is used with."""


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class CircleGrid:
    """Uniform offset grid on (-pi, pi) with a power-of-two number of nodes."""

    size: int

    def __post_init__(self):
        if self.size < 4 or not _is_pow2(self.size):
            raise ValueError(f"grid size must be a power of two >= 4, got {self.size}")

    @cached_property
    def nodes(self) -> np.ndarray:
        m = np.arange(self.size)
        return -np.pi + (m + 0.5) * (2.0 * np.pi / self.size)

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.size

    @property
    def max_mode(self) -> int:
        """Largest |k| representable without ambiguity on this grid."""
        return self.size // 2 - 1


@dataclass(frozen=True)
class GridFunction:
    """Complex samples of a function at the nodes of a :class:`CircleGrid`."""

    grid: CircleGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != (self.grid.size,):
            raise ValueError(
                f"expected {self.grid.size} samples, got shape {vals.shape}"
            )
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class FourierSeries:
    """Coefficients ``c_k`` for ``k`` in the window ``[k_min, k_max]``."""

    k_min: int
    k_max: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.k_min > self.k_max:
            raise ValueError(f"empty index window [{self.k_min}, {self.k_max}]")
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != (self.k_max - self.k_min + 1,):
            raise ValueError(
                f"window [{self.k_min}, {self.k_max}] needs "
                f"{self.k_max - self.k_min + 1} coefficients, got {coeffs.shape}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def modes(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    @property
    def band(self) -> int:
        """max |k| over the window (regardless of zero coefficients)."""
        return max(abs(self.k_min), abs(self.k_max))

    def coeff(self, k: int) -> complex:
        if self.k_min <= k <= self.k_max:
            return complex(self.coeffs[k - self.k_min])
        return 0.0 + 0.0j

    def __add__(self, other: "FourierSeries") -> "FourierSeries":
        lo = min(self.k_min, other.k_min)
        hi = max(self.k_max, other.k_max)
        out = np.zeros(hi - lo + 1, dtype=complex)
        out[self.k_min - lo : self.k_max - lo + 1] += self.coeffs
        out[other.k_min - lo : other.k_max - lo + 1] += other.coeffs
        return FourierSeries(lo, hi, out)

    def __sub__(self, other: "FourierSeries") -> "FourierSeries":
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> "FourierSeries":
        return FourierSeries(self.k_min, self.k_max, self.coeffs * scalar)

    __rmul__ = __mul__


def _mode_phases(k: np.ndarray, n: int) -> np.ndarray:
    # e^{-ik theta_m} = phase(k) * e^{-ik m h} with phase = e^{ik pi (n-1)/n}
    return np.exp(1j * np.pi * k * (n - 1) / n)


def analyze(f: GridFunction) -> FourierSeries:
    """Forward transform: coefficients ``c_k`` for ``|k| <= N/2 - 1``.

    Exact (to round-off) when the sampled function is band-limited with
    max |k| < N/2; otherwise it is the trapezoidal quadrature of the
    coefficient integrals, with aliasing controlled by the caller's
    oversampling.
    """
    n = f.grid.size
    kmax = f.grid.max_mode
    raw = np.fft.fft(f.values) / n
    k = np.arange(-kmax, kmax + 1)
    coeffs = _mode_phases(k, n) * raw[k % n]
    return FourierSeries(-kmax, kmax, coeffs)


def synthesize(series: FourierSeries, grid: CircleGrid) -> GridFunction:
    """Evaluate ``sum_k c_k e^{ik theta_m}`` at the grid nodes."""
    n = grid.size
    if series.k_min < -grid.max_mode or series.k_max > grid.max_mode:
        raise BandError(
            f"series band [{series.k_min}, {series.k_max}] exceeds grid capacity "
            f"+-{grid.max_mode}"
        )
    packed = np.zeros(n, dtype=complex)
    k = series.modes
    packed[k % n] = series.coeffs * np.conj(_mode_phases(k, n))
    return GridFunction(grid, np.fft.ifft(packed) * n)


def project(series: FourierSeries, i: int, j: int) -> FourierSeries:
    """Band projection P_[i,j]: zero every coefficient outside ``[i, j]``.

    Idempotent; a window disjoint from the series band gives the zero series.
    """
    if i > j:
        raise ValueError(f"projection window [{i}, {j}] is empty")
    keep = (series.modes >= i) & (series.modes <= j)
    return FourierSeries(series.k_min, series.k_max, np.where(keep, series.coeffs, 0.0))


def shift(series: FourierSeries, m: int) -> FourierSeries:
    """Multiply by z^m, i.e. shift the index window by m."""
    return FourierSeries(series.k_min + m, series.k_max + m, series.coeffs.copy())


def hilbert(series: FourierSeries) -> FourierSeries:
    """Hilbert transform with symbol ``e^{ik theta} -> -i sgn(k) e^{ik theta}``."""
    sym = -1j * np.sign(series.modes)
    return FourierSeries(series.k_min, series.k_max, sym * series.coeffs)


def riesz_plus(series: FourierSeries) -> FourierSeries:
    """Riesz projection onto the nonnegative modes k >= 0."""
    return project(series, 0, max(series.k_max, 0))


def mean_projection(series: FourierSeries) -> FourierSeries:
    """Projection onto the constant mode k = 0."""
    keep = series.modes == 0
    return FourierSeries(series.k_min, series.k_max, np.where(keep, series.coeffs, 0.0))


def lp_norm(f: GridFunction, p: float, weight: GridFunction | None = None) -> float:
    """Quadrature L^p norm ``((2pi/N) sum |f|^p w)^{1/p}``.

    The rectangle rule coincides with the trapezoidal rule by periodicity
    and is spectrally accurate for smooth periodic integrands.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    vals = np.abs(f.values)
    if not np.all(np.isfinite(vals)):
        raise ValueError("non-finite samples in lp_norm input")
    if weight is not None:
        if weight.grid != f.grid:
            raise ValueError("weight sampled on a different grid")
        wv = np.real(weight.values)
        if np.any(wv < 0):
            raise ValueError("weight samples must be nonnegative")
        integrand = vals**p * wv
    else:
        integrand = vals**p
    return float((f.grid.spacing * integrand.sum()) ** (1.0 / p))


def inner(f: GridFunction, g: GridFunction) -> complex:
    """Quadrature inner product ``int f conj(g) dtheta``."""
    if f.grid != g.grid:
        raise ValueError("inner product needs a common grid")
    return complex(f.grid.spacing * np.vdot(g.values, f.values))


def parseval_norm(series: FourierSeries) -> float:
    """L^2 norm computed from coefficients, ``sqrt(2pi sum |c_k|^2)``."""
    return float(np.sqrt(2.0 * np.pi * np.vdot(series.coeffs, series.coeffs).real))


def project_samples(values: np.ndarray, i: int, j: int) -> np.ndarray:
    """Band projection applied directly to sample vectors.

    Same operation as :func:`project` after analysis, but staying in
    sample space; the per-mode phase factors of the offset grid are
    diagonal, so zeroing raw FFT bins is equivalent.
    """
    n = len(values)
    if i > j:
        raise ValueError(f"projection window [{i}, {j}] is empty")
    spec = np.fft.fft(values)
    k = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    keep = (k >= i) & (k <= j)
    return np.fft.ifft(np.where(keep, spec, 0.0))
