"""Centralized tolerance constants.

Every numerical contract in the package draws its thresholds from one
``Tolerances`` record so that tests, solvers and reports agree on what
"equal" means. The defaults are deliberately conservative; individual
solvers take an explicit ``tol`` argument for their own stopping rules.
"""

from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    rel: float = 1e-12              # generic relative comparisons
    critical_point: float = 1e-14   # |Q'(t_q)| <= critical_point * max(1, sum n*a_n)
    root_residual: float = 1e-10    # |Q'(root)| <= root_residual * sum(n*a_n)
    mass_certificate: float = 1e-12 # slack allowed on sum_l m_{j,l} q_max^l <= t_q
    negative_clamp: float = 1e-12   # how negative a "non-negative" input may be
    pair_slack: float = 1e-14       # additive slack in the pairwise injectivity check
    monotone_slack: float = 1e-12   # pointwise backsliding allowed between iterates


DEFAULT_TOLS = Tolerances()


def fft_workers() -> int:
    """Worker count for FFT calls, capped by the CONVLAB_THREADS env var."""
    raw = os.environ.get("CONVLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)
