from fractions import Fraction

import numpy as np
import pytest

from convlab import CoeffVector, InvalidCoefficients, build_poly
from convlab.qpoly import (
    _critical_point,
    eval_p,
    eval_p_exact,
    eval_p_prime,
    eval_p_prime_exact,
    eval_q,
    eval_q_exact,
    eval_q_prime,
    eval_q_prime_exact,
)


def monomial(m: int, a: int = 1) -> CoeffVector:
    return CoeffVector([0] * (m - 2) + [a])


class TestCoeffVector:
    def test_markers(self):
        c = CoeffVector([0, 1, 0, 2])
        assert c.degree_max == 5
        assert c.n1 == 3
        assert c.n2 == 5
        assert list(c.terms()) == [(3, 1), (5, 2)]
        assert c[2] == 0 and c[3] == 1 and c[5] == 2 and c[7] == 0

    def test_validation(self):
        with pytest.raises(InvalidCoefficients):
            CoeffVector([])
        with pytest.raises(InvalidCoefficients):
            CoeffVector([0, 0])
        with pytest.raises(InvalidCoefficients):
            CoeffVector([1, -1])

    def test_parse_and_json(self):
        c = CoeffVector.parse("0,1")
        assert c.coeffs == (0, 1)
        assert CoeffVector.from_json(c.to_json()) == c
        with pytest.raises(InvalidCoefficients):
            CoeffVector.parse("1,x")


class TestBuildPoly:
    def test_two_fold_anchor(self):
        p = build_poly(CoeffVector([1]))
        assert p.t_q == pytest.approx(0.5, rel=1e-15)
        assert p.q_max == pytest.approx(0.25, rel=1e-15)

    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
    def test_monomial_closed_form(self, m):
        p = build_poly(monomial(m))
        assert p.t_q == pytest.approx(m ** (-1.0 / (m - 1)), rel=1e-12)

    def test_quadratic_cubic_anchor(self):
        # 3t^2 + 2t - 1 = (3t - 1)(t + 1), so t_q = 1/3 and Q(1/3) = 5/27
        p = build_poly(CoeffVector([1, 1]))
        assert p.t_q == pytest.approx(1.0 / 3.0, abs=1e-15)
        assert p.q_max == pytest.approx(float(Fraction(5, 27)), rel=1e-14)

    def test_critical_point_residual_contract(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(2, 11))
            a = rng.integers(0, 6, size=n - 1)
            if not a.any():
                a[0] = 1
            c = CoeffVector([int(v) for v in a])
            p = build_poly(c)
            scale = max(1, sum(n_ * a_ for n_, a_ in c.terms()))
            resid = abs(eval_q_prime_exact(c, Fraction(p.t_q)))
            assert resid <= Fraction(1, 10**14) * scale

    def test_invariants_random(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            n = int(rng.integers(2, 11))
            a = rng.integers(0, 6, size=n - 1)
            if not a.any():
                a[-1] = 1
            p = build_poly(CoeffVector([int(v) for v in a]))
            assert 0.0 < p.t_q < 1.0
            assert 0.0 < p.q_max < p.t_q
            # Q increases left of t_q, decreases right of it
            ts = np.linspace(0.0, p.t_q, 17)
            qs = [eval_q(p, t) for t in ts]
            assert all(b > a_ for a_, b in zip(qs, qs[1:]))
            ts = np.linspace(p.t_q, 2.0, 17)
            qs = [eval_q(p, t) for t in ts]
            assert all(b < a_ for a_, b in zip(qs, qs[1:]))
            # Q' changes sign exactly once on the sampled ray
            signs = [eval_q_prime(p, t) > 0 for t in np.linspace(1e-9, 3.0, 301)]
            assert sum(s1 and not s2 for s1, s2 in zip(signs, signs[1:])) == 1

    def test_p_prime_strictly_increasing(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            a = [int(v) for v in rng.integers(0, 4, size=4)]
            if not any(a):
                a[0] = 1
            c = CoeffVector(a)
            s, t = sorted(rng.uniform(0.01, 3.0, size=2))
            if s == t:
                continue
            assert eval_p_prime(c, s) < eval_p_prime(c, t)

    def test_bracket_independence(self):
        for coeffs in ([1], [0, 1], [1, 1], [2, 0, 0, 3]):
            c = CoeffVector(coeffs)
            t60 = _critical_point(c, bisect_steps=60)
            t40 = _critical_point(c, bisect_steps=40)
            t20 = _critical_point(c, bisect_steps=20)
            assert abs(t60 - t40) <= 1e-13
            assert abs(t60 - t20) <= 1e-13


class TestEval:
    def test_q_trivial_and_exact(self):
        p = build_poly(CoeffVector([1]))
        assert eval_q(p, 0.0) == 0.0
        assert eval_q(p, 0.5) == pytest.approx(0.25, abs=1e-16)
        p2 = build_poly(CoeffVector([1, 1]))
        assert eval_q(p2, 1.0 / 3.0) == pytest.approx(float(Fraction(5, 27)), rel=1e-14)
        assert eval_q_exact(p2.coeffs, Fraction(1, 3)) == Fraction(5, 27)

    def test_derivative_values(self):
        p = build_poly(CoeffVector([1]))
        assert eval_p_prime(p, 0.5) == pytest.approx(1.0, abs=1e-15)
        assert eval_q_prime(p, 0.5) == pytest.approx(0.0, abs=1e-15)
        p2 = build_poly(CoeffVector([1, 1]))
        assert eval_p_prime(p2, 0.0) == 0.0
        assert eval_q_prime(p2, 0.0) == 1.0
        c5 = monomial(5, 2)
        assert eval_p_prime(c5, 0.1) == pytest.approx(1e-3, rel=1e-14)

    def test_qprime_pprime_identity(self):
        rng = np.random.default_rng(3)
        c = CoeffVector([1, 0, 2, 1])
        for _ in range(20):
            t = float(rng.uniform(0.0, 1.5))
            assert abs(eval_q_prime(c, t) + eval_p_prime(c, t) - 1.0) <= 1e-14 * max(
                1.0, abs(eval_p_prime(c, t))
            )
            tf = Fraction(t)
            assert eval_q_prime_exact(c, tf) + eval_p_prime_exact(c, tf) == 1

    def test_float_matches_exact_twin(self):
        rng = np.random.default_rng(9)
        c = CoeffVector([2, 1, 0, 3])
        for _ in range(30):
            t = Fraction(int(rng.integers(0, 2000)), 1000)
            ref_q = float(eval_q_exact(c, t))
            ref_p = float(eval_p_exact(c, t))
            scale = max(1.0, abs(ref_q), abs(ref_p))
            assert abs(eval_q(c, float(t)) - ref_q) <= 1e-12 * scale
            assert abs(eval_p(c, float(t)) - ref_p) <= 1e-12 * scale
