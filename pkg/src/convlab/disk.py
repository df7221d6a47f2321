"""Complex-analytic certificates on the disk |z| < t_q.

Three facts carry the injectivity argument: the smallest-modulus root of
Q' is real, positive, and equal to t_q (non-negative power series put the
dominant singularity of 1/Q' on the positive axis); |P'(z)| < 1 on the
open disk; and |P(z)/z| < 1 there. The first is checked on the computed
root set, the other two by dense polar sampling at radius 0.999 t_q, with
injectivity of Q spot-checked on random pairs through the lower Lipschitz
bound |Q(z1) - Q(z2)| >= (1 - sup|P'|) |z1 - z2|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import accel
from .config import DEFAULT_TOLS
from .errors import ConvergenceFailure
from .qpoly import CoeffVector, PolyQ

SCAN_RADIUS_FACTOR = 0.999


@dataclass(frozen=True)
class DiskReport:
    t_q: float
    qprime_roots: tuple[complex, ...]
    min_modulus_root: float
    sup_p_prime: float
    sup_p_over_z: float
    injectivity_violations: int

    def to_json(self) -> dict:
        return {
            "t_q": self.t_q,
            "qprime_roots": [[z.real, z.imag] for z in self.qprime_roots],
            "min_modulus_root": self.min_modulus_root,
            "sup_p_prime": self.sup_p_prime,
            "sup_p_over_z": self.sup_p_over_z,
            "injectivity_violations": self.injectivity_violations,
        }


def _qprime_desc(coeffs: CoeffVector) -> np.ndarray:
    """Q' coefficients, highest degree first: -N a_N, ..., -2 a_2, 1."""
    n2 = coeffs.n2
    return np.array([-n * coeffs[n] for n in range(n2, 1, -1)] + [1.0])


def _pprime_desc(coeffs: CoeffVector) -> np.ndarray:
    n2 = coeffs.n2
    return np.array([float(n * coeffs[n]) for n in range(n2, 1, -1)] + [0.0])


def _p_over_z_desc(coeffs: CoeffVector) -> np.ndarray:
    """P(z)/z is itself a polynomial (P vanishes at 0 to second order)."""
    n2 = coeffs.n2
    return np.array([float(coeffs[n]) for n in range(n2, 1, -1)] + [0.0])


def _q_desc(coeffs: CoeffVector) -> np.ndarray:
    n2 = coeffs.n2
    return np.array([-float(coeffs[n]) for n in range(n2, 1, -1)] + [1.0, 0.0])


def _horner(desc: np.ndarray, z: complex) -> complex:
    acc = 0j
    for c in desc:
        acc = acc * z + c
    return acc


def qprime_roots(coeffs: CoeffVector) -> list[complex]:
    """All N2 - 1 roots of Q' via companion-matrix eigenvalues, polished by
    Newton while it improves the residual. Sorted by modulus."""
    qp = _qprime_desc(coeffs)
    raw = np.roots(qp)
    # Q'' descending, for the Newton polish
    n2 = coeffs.n2
    qpp = np.array([-float(n * (n - 1) * coeffs[n]) for n in range(n2, 1, -1)])
    polished = []
    for z in raw:
        z = complex(z)
        for _ in range(20):
            d = _horner(qpp, z)
            if d == 0:
                break
            cand = z - _horner(qp, z) / d
            if abs(_horner(qp, cand)) < abs(_horner(qp, z)):
                z = cand
            else:
                break
        polished.append(z)
    scale = float(sum(n * a for n, a in coeffs.terms()))
    worst = max(abs(_horner(qp, z)) for z in polished)
    if worst > 1e-10 * scale:
        raise ConvergenceFailure(f"root residual {worst:.3e} above 1e-10 * {scale}")
    return sorted(polished, key=lambda z: (abs(z), z.real, z.imag))


def sup_abs_on_circle(desc: np.ndarray, radius: float, angular_steps: int) -> float:
    th = 2.0 * np.pi * np.arange(angular_steps) / angular_steps
    z = radius * np.exp(1j * th)
    return float(np.abs(accel.polyval_many(desc, z)).max())


def _sample_disk(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.random(n))
    th = 2.0 * np.pi * rng.random(n)
    return r * np.exp(1j * th)


def disk_scan(
    p: PolyQ,
    radial_steps: int = 64,
    angular_steps: int = 128,
    pair_samples: int = 10_000,
    rng_seed: int = 0,
) -> DiskReport:
    """Polar-grid sup of |P'| and |P/z| at radius 0.999 t_q plus random
    pairwise injectivity checks of Q. Violations are counted, not raised;
    the strict bounds hold only on the open disk, hence the 0.999."""
    if radial_steps < 8 or angular_steps < 8:
        raise ValueError("need at least 8 radial and angular steps")
    coeffs = p.coeffs
    radius = SCAN_RADIUS_FACTOR * p.t_q

    radii = np.linspace(0.0, radius, radial_steps)
    th = 2.0 * np.pi * np.arange(angular_steps) / angular_steps
    z = (radii[:, None] * np.exp(1j * th)[None, :]).ravel()

    sup_pp = float(np.abs(accel.polyval_many(_pprime_desc(coeffs), z)).max())
    sup_poz = float(np.abs(accel.polyval_many(_p_over_z_desc(coeffs), z)).max())

    rng = np.random.default_rng(rng_seed)
    z1 = _sample_disk(rng, pair_samples, radius)
    z2 = _sample_disk(rng, pair_samples, radius)
    while True:
        eq = z1 == z2
        if not eq.any():
            break
        z2[eq] = _sample_disk(rng, int(eq.sum()), radius)

    violations = int(
        accel.count_lipschitz_violations(
            _q_desc(coeffs), z1, z2, 1.0 - sup_pp, DEFAULT_TOLS.pair_slack
        )
    )

    roots = qprime_roots(coeffs)
    return DiskReport(
        t_q=p.t_q,
        qprime_roots=tuple(roots),
        min_modulus_root=abs(roots[0]),
        sup_p_prime=sup_pp,
        sup_p_over_z=sup_poz,
        injectivity_violations=violations,
    )
