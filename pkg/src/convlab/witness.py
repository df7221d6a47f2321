"""Closed-form witnesses for the two-fold inequality f >= f * f.

The family is the Fourier transform of a e^{-2 pi t ||x||}, i.e. the
Poisson kernel a C_d t / (t^2 + ||x||^2)^((d+1)/2) with mass a; it
satisfies f >= f*f exactly when a <= 1/2. The kernel decays only
polynomially, so on the torus we use its periodization rather than raw
samples: wrapping the tails back in keeps the discrete mass at exactly a
and turns f >= f*f into an exact
pointwise statement for the circular convolution (the periodization of a
non-negative function dominates the periodization of f*f node by node).
In one dimension the periodized kernel has the classical closed form
(a/L) sinh(2 pi t/L) / (cosh(2 pi t/L) - cos(2 pi x/L)); in higher
dimensions it is synthesized from its Fourier coefficients
a e^{-2 pi t ||xi||}, which decay fast enough that truncation at the
Nyquist shell is far below roundoff for admissible t L.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DecayGuard
from .field import Field, Grid, _field_from_symbol, convolve, integral, min_value

MIN_DECAY_PRODUCT = 4.0


@dataclass(frozen=True)
class PoissonParams:
    a: float
    t: float
    grid: Grid

    def __post_init__(self):
        if not 0.0 < self.a <= 0.5:
            raise ValueError(f"amplitude a must be in (0, 0.5], got {self.a}")
        if not self.t > 0.0:
            raise ValueError(f"scale t must be positive, got {self.t}")


def poisson_field(params: PoissonParams) -> Field:
    """Periodized Poisson witness; discrete mass equals a to roundoff."""
    grid = params.grid
    if params.t * grid.extent < MIN_DECAY_PRODUCT:
        raise DecayGuard(
            f"t * L = {params.t * grid.extent:.3g} < {MIN_DECAY_PRODUCT}; "
            "kernel too wide for this box"
        )
    if grid.dim == 1:
        w = 2.0 * np.pi / grid.extent
        x = grid.axis_coords()
        vals = (params.a / grid.extent) * np.sinh(w * params.t) / (
            np.cosh(w * params.t) - np.cos(w * x)
        )
        return Field(grid, vals)
    norm = np.zeros(grid.shape)
    for xi in grid.frequencies():
        norm = norm + xi**2
    symbol = params.a * np.exp(-2.0 * np.pi * params.t * np.sqrt(norm))
    return _field_from_symbol(grid, symbol)


def check_two_fold(f: Field) -> tuple[float, float]:
    """(min slack of f - f*f, mass of f)."""
    slack = min_value(f - convolve(f, f))
    return slack, integral(f)
