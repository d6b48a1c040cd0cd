"""Boundary values of the Szego function.

``S = exp(u + i Hu)`` with ``u = -log(2 pi w) / 2``; the conjugate function
comes from the spectral Hilbert transform, so ``log S`` carries no
negative modes by construction and ``S(0) = exp(c_0(u)) > 0``. Outerness
is certified spectrally from the principal log of the returned samples
(catches winding/branch failures), not by inner-outer factorization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import CircleGrid, GridFunction, analyze, hilbert, synthesize
from .weights import Weight

__all__ = ["SzegoBoundary", "szego_boundary"]


@dataclass(frozen=True)
class SzegoBoundary:
    grid: CircleGrid
    samples: GridFunction
    log_negative_residual: float
    s_at_zero: float


def szego_boundary(weight: Weight, N: int) -> SzegoBoundary:
    """Sample S on a size-N grid and certify it.

    The weight must be strictly positive at the nodes (guaranteed by the
    offset grid for declared singularities; any other nonpositive value
    raises).
    """
    grid = CircleGrid(N)
    wv = np.real(weight.sample(grid).values)
    if np.any(wv <= 0.0) or not np.all(np.isfinite(wv)):
        raise ArithmeticError("log overflow: weight not positive at grid nodes")
    u = -0.5 * np.log(2.0 * np.pi * wv)
    u_hat = analyze(GridFunction(grid, u.astype(complex)))
    u_tilde = synthesize(hilbert(u_hat), grid).values
    log_s = u + 1j * np.real(u_tilde)
    samples = GridFunction(grid, np.exp(log_s))

    principal = analyze(GridFunction(grid, np.log(samples.values)))
    neg = principal.coeffs[principal.modes < 0]
    residual = float(np.abs(neg).max()) if len(neg) else 0.0
    s_at_zero = float(np.exp(u_hat.coeff(0).real))
    return SzegoBoundary(
        grid=grid,
        samples=samples,
        log_negative_residual=residual,
        s_at_zero=s_at_zero,
    )
