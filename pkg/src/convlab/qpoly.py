"""The polynomial Q(t) = t - sum_{n=2}^{N} a_n t^n and its critical point.

Q has Q'(0) = 1 and Q'(1) <= -1 for any admissible coefficient vector, so
Q' has a zero in (0, 1); non-negativity of the a_n makes P' = 1 - Q'
strictly increasing on (0, oo), hence that zero t_q is unique and Q attains
its positive maximum q_max = Q(t_q) there. t_q is the sharp L1 mass bound
for solutions of f >= sum a_n (*^n f), and q_max bounds admissible seeds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import ConvergenceFailure, InvalidCoefficients

_BISECT_STEPS = 60


@dataclass(frozen=True)
class CoeffVector:
    """Non-negative integers a_2..a_N, at least one positive."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Sequence[int]):
        object.__setattr__(self, "coeffs", tuple(int(a) for a in coeffs))
        self._validate()

    def _validate(self) -> None:
        if len(self.coeffs) < 1:
            raise InvalidCoefficients("need at least a_2 (degree N >= 2)")
        if any(a < 0 for a in self.coeffs):
            raise InvalidCoefficients(f"negative coefficient in {self.coeffs}")
        if all(a == 0 for a in self.coeffs):
            raise InvalidCoefficients("all coefficients zero")

    @property
    def degree_max(self) -> int:
        return len(self.coeffs) + 1

    @property
    def n1(self) -> int:
        """Smallest n with a_n > 0."""
        return next(n for n, a in enumerate(self.coeffs, start=2) if a > 0)

    @property
    def n2(self) -> int:
        """Largest n with a_n > 0."""
        return max(n for n, a in enumerate(self.coeffs, start=2) if a > 0)

    def terms(self) -> Iterator[tuple[int, int]]:
        """Yield (n, a_n) for the nonzero coefficients, ascending n."""
        for n, a in enumerate(self.coeffs, start=2):
            if a > 0:
                yield n, a

    def __getitem__(self, n: int) -> int:
        """Coefficient a_n by polynomial degree (0 outside 2..N)."""
        if 2 <= n <= self.degree_max:
            return self.coeffs[n - 2]
        return 0

    @classmethod
    def parse(cls, text: str) -> "CoeffVector":
        """Parse '1,0,2' as a_2=1, a_3=0, a_4=2."""
        try:
            parts = [int(p.strip()) for p in text.split(",") if p.strip() != ""]
        except ValueError as exc:
            raise InvalidCoefficients(f"cannot parse coefficients {text!r}") from exc
        return cls(parts)

    def to_json(self) -> dict:
        return {"a": list(self.coeffs)}

    @classmethod
    def from_json(cls, obj: dict) -> "CoeffVector":
        return cls(obj["a"])


@dataclass(frozen=True)
class PolyQ:
    coeffs: CoeffVector
    t_q: float
    q_max: float


def eval_p(p: PolyQ | CoeffVector, t: float) -> float:
    """P(t) = sum a_n t^n, Horner form t^2 * (a_2 + a_3 t + ... + a_N t^(N-2))."""
    a = _coeffs_of(p).coeffs
    acc = 0.0
    for an in reversed(a):
        acc = acc * t + an
    return acc * t * t


def eval_p_prime(p: PolyQ | CoeffVector, t: float) -> float:
    """P'(t) = sum n a_n t^(n-1)."""
    a = _coeffs_of(p).coeffs
    acc = 0.0
    for n in range(len(a) + 1, 1, -1):
        acc = acc * t + n * a[n - 2]
    return acc * t


def eval_q(p: PolyQ | CoeffVector, t: float) -> float:
    return t - eval_p(p, t)


def eval_q_prime(p: PolyQ | CoeffVector, t: float) -> float:
    return 1.0 - eval_p_prime(p, t)


def _coeffs_of(p: PolyQ | CoeffVector) -> CoeffVector:
    return p.coeffs if isinstance(p, PolyQ) else p


def _p_second(a: tuple[int, ...], t: float) -> float:
    acc = 0.0
    for n in range(len(a) + 1, 1, -1):
        acc = acc * t + n * (n - 1) * a[n - 2]
    return acc


def build_poly(coeffs: CoeffVector) -> PolyQ:
    """Locate t_q by bisection on [0, 1] followed by Newton polish.

    The bracket is analytically valid: Q'(0) = 1 > 0 and
    Q'(1) = 1 - sum n a_n <= -1 < 0.
    """
    if not isinstance(coeffs, CoeffVector):
        coeffs = CoeffVector(coeffs)
    t = _critical_point(coeffs)
    scale = max(1.0, float(sum(n * a for n, a in coeffs.terms())))
    if abs(eval_q_prime(coeffs, t)) > 1e-14 * scale:
        raise ConvergenceFailure(
            f"critical point residual {eval_q_prime(coeffs, t):.3e} above tolerance"
        )
    return PolyQ(coeffs=coeffs, t_q=t, q_max=eval_q(coeffs, t))


def _critical_point(coeffs: CoeffVector, bisect_steps: int = _BISECT_STEPS) -> float:
    lo, hi = 0.0, 1.0
    for _ in range(bisect_steps):
        mid = 0.5 * (lo + hi)
        if eval_q_prime(coeffs, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    a = coeffs.coeffs
    for _ in range(50):
        deriv = -_p_second(a, t)
        if deriv == 0.0:
            break
        step = eval_q_prime(coeffs, t) / deriv
        t -= step
        if abs(step) <= 1e-17 * max(1.0, abs(t)):
            break
    return t


# Exact-rational twins. Direct power sums, deliberately not Horner, so the
# float path and the oracle path share no evaluation code.

def eval_p_exact(coeffs: CoeffVector, t: Fraction) -> Fraction:
    t = Fraction(t)
    return sum((Fraction(a) * t**n for n, a in coeffs.terms()), Fraction(0))


def eval_p_prime_exact(coeffs: CoeffVector, t: Fraction) -> Fraction:
    t = Fraction(t)
    return sum((Fraction(n * a) * t ** (n - 1) for n, a in coeffs.terms()), Fraction(0))


def eval_q_exact(coeffs: CoeffVector, t: Fraction) -> Fraction:
    return Fraction(t) - eval_p_exact(coeffs, t)


def eval_q_prime_exact(coeffs: CoeffVector, t: Fraction) -> Fraction:
    return 1 - eval_p_prime_exact(coeffs, t)
