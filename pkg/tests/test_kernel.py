import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ultrakernel import (
    ConvergenceError,
    DiracCaseError,
    DomainError,
    KernelParams,
    SingularConfigurationError,
    eval_W,
    kernel_integral,
    kernel_mass,
    kernel_series,
    poisson_closed_form,
    project,
)
from ultrakernel.kernel import kernel_integral_values, poisson_printed_form
from ultrakernel.quadrature import g_rule, h_rule


class TestPoisson:
    def test_r_zero(self):
        assert poisson_closed_form(1.0, 0.0, 0.4) == 1.0

    def test_at_x_equal_one(self):
        assert poisson_closed_form(0.5, 0.5, 1.0) == pytest.approx(6.0, rel=1e-15)
        # sum of omega_n r^n alone, summed to convergence
        assert float(oracles.poisson_series(0.5, 0.5, 1.0)) == pytest.approx(6.0, rel=1e-25)

    def test_direct_arithmetic(self):
        assert poisson_closed_form(1.0, 0.3, 0.0) == pytest.approx(0.91 / 1.09**2, rel=1e-15)
        assert poisson_closed_form(1.0, 0.3, 0.0) == pytest.approx(0.765929, abs=1e-6)

    def test_against_truncated_series_random_points(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            nu = rng.uniform(0.1, 4.0)
            r = rng.uniform(-0.9, 0.9)
            x = rng.uniform(-1, 1)
            ref = float(oracles.poisson_series(nu, r, x))
            assert poisson_closed_form(nu, r, x) == pytest.approx(ref, rel=1e-12)

    def test_printed_variant_is_not_the_generating_function(self):
        ref = float(oracles.poisson_series(0.5, 0.5, 0.0))
        assert abs(poisson_printed_form(0.5, 0.5, 0.0) - ref) > 1e-2

    def test_domain(self):
        with pytest.raises(DomainError):
            poisson_closed_form(1.0, 1.0, 0.2)


class TestParams:
    def test_dirac_cases(self):
        with pytest.raises(DiracCaseError):
            KernelParams(2.0, 2.0, 0.5, 0.1, 0.2)
        with pytest.raises(DiracCaseError):
            KernelParams(2.0, 1.0, 0.5, 1.0, 0.2)
        with pytest.raises(DiracCaseError):
            KernelParams(2.0, 1.0, 0.5, -1.0, 0.2)

    def test_singular_diagonal_rejected(self):
        with pytest.raises(SingularConfigurationError, match="nu < lam <= nu \\+ 1"):
            KernelParams(1.5, 0.5, 1.0, 0.3, 0.3)
        with pytest.raises(SingularConfigurationError):
            KernelParams(1.2, 0.5, -1.0, 0.3, -0.3)
        # off the diagonal, or outside the singular range, it is fine
        KernelParams(1.5, 0.5, 1.0, 0.3, 0.31)
        KernelParams(1.6, 0.5, 1.0, 0.3, 0.3)

    @pytest.mark.parametrize("bad", [(1.0, 2.0, 0.5, 0.1, 0.1), (2.0, 0.0, 0.5, 0.1, 0.1), (2.0, 1.0, 1.1, 0.1, 0.1), (2.0, 1.0, 0.5, 0.1, 1.0)])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            KernelParams(*bad)


class TestSeries:
    def test_r_zero_keeps_first_term(self):
        ev = kernel_series(KernelParams(2.0, 1.0, 0.0, 0.3, -0.6), 10)
        assert ev.value == 1.0
        assert ev.method == "series"
        assert ev.est_error == 0.0

    def test_tail_bound_holds(self):
        p = KernelParams(3.0, 0.5, 0.9, 0.2, -0.4)
        short, long = kernel_series(p, 60), kernel_series(p, 600)
        assert abs(short.value - long.value) <= short.est_error
        assert long.est_error < 1e-12

    def test_boundary_r_cauchy_sequence(self):
        p = KernelParams(3.0, 1.0, 1.0, 0.0, 0.0)
        vals = [kernel_series(p, N).value for N in (100, 200, 400, 800, 1600)]
        diffs = np.abs(np.diff(vals))
        # tail decays like N^-(lam - nu - 1) = 1/N: differences halve per doubling
        np.testing.assert_allclose(diffs[1:] / diffs[:-1], 0.5, atol=0.05)
        richardson = 2 * vals[-1] - vals[-2]
        assert richardson == pytest.approx(kernel_integral(p).value, abs=1e-4)

    def test_boundary_r_in_singular_range_refused(self):
        with pytest.raises(ConvergenceError):
            kernel_series(KernelParams(1.5, 0.7, 1.0, 0.1, 0.4), 100)

    def test_matches_high_precision_sum(self):
        mp = oracles.mp
        lam, nu, r, x, y = 2.5, 0.8, 0.6, 0.35, -0.2
        ref = mp.nsum(lambda n: oracles.omega(int(n), nu) * mp.mpf(r) ** n * oracles.W(int(n), lam, x) * oracles.W(int(n), nu, y), [0, 120])
        assert kernel_series(KernelParams(lam, nu, r, x, y), 200).value == pytest.approx(float(ref), abs=1e-14)


class TestIntegral:
    def test_r_zero(self):
        ev = kernel_integral(KernelParams(3.0, 0.5, 0.0, 0.2, -0.4))
        assert ev.value == pytest.approx(1.0, abs=1e-15)

    def test_cross_method(self):
        p = KernelParams(3.0, 0.5, 0.9, 0.2, -0.4)
        a = kernel_integral(p, 64, 64)
        b = kernel_series(p, 400)
        assert abs(a.value - b.value) <= 1e-8
        assert a.truncation_or_nodes == (64, 64)

    def test_boundary_r_stable_under_refinement(self):
        # lam - nu = 2.5 > 1, so r = 1 is admissible even on the diagonal
        p = KernelParams(3.0, 0.5, 1.0, 0.5, 0.5)
        a = kernel_integral(p, 16, 16, levels=20).value
        b = kernel_integral(p, 32, 32, levels=40).value
        assert math.isfinite(a) and a > 0
        assert abs(a - b) <= 1e-6

    def test_adaptive_default_at_boundary(self):
        ev = kernel_integral(KernelParams(3.0, 0.5, 1.0, 0.5, 0.5))
        assert ev.est_error < 1e-9
        assert ev.value == pytest.approx(kernel_integral(KernelParams(3.0, 0.5, 1.0, 0.5, 0.5), 32, 32, levels=40).value, abs=1e-8)

    def test_plain_tensor_rule_stalls_on_diagonal(self):
        # documents why the boundary path grades its rules
        p = KernelParams(3.0, 0.5, 1.0, 0.5, 0.5)
        ref = kernel_integral(p, 32, 32, levels=40).value
        assert abs(kernel_integral(p, 128, 128).value - ref) > 1e-3

    def test_adaptive_interior(self):
        p = KernelParams(1.5, 0.5, 0.95, 0.1, 0.1)
        ev = kernel_integral(p)
        assert ev.value == pytest.approx(kernel_series(p, 1500).value, abs=1e-9)

    def test_agrees_with_abel_limit(self):
        # r = 1 value is the limit of r -> 1 values
        x, y = 0.3, -0.1
        at_one = kernel_integral(KernelParams(3.0, 1.0, 1.0, x, y)).value
        near = [kernel_integral(KernelParams(3.0, 1.0, 1 - h, x, y)).value for h in (1e-3, 1e-4)]
        assert abs(near[1] - at_one) < abs(near[0] - at_one)
        assert abs(near[1] - at_one) < 1e-3

    def test_singular_range_refused(self):
        with pytest.raises(SingularConfigurationError, match="excluded range"):
            kernel_integral(KernelParams(1.4, 0.5, 1.0, 0.2, 0.6))

    def test_too_few_nodes(self):
        with pytest.raises(DomainError):
            kernel_integral(KernelParams(3.0, 0.5, 0.5, 0.2, 0.6), 1, 8)

    def test_negative_r_reflection(self):
        p = KernelParams(2.5, 0.7, -0.8, 0.3, -0.5)
        assert kernel_integral(p, 96, 96).value == pytest.approx(kernel_series(p, 400).value, abs=1e-10)

    def test_printed_denominator_disagrees_with_series(self):
        p = KernelParams(3.0, 0.5, 0.9, 0.2, -0.4)
        printed = kernel_integral(p, 64, 64, form="printed").value
        assert abs(printed - kernel_series(p, 400).value) > 1e-2

    @given(
        st.floats(0.2, 3.0), st.floats(0.1, 3.0), st.floats(0.0, 0.9),
        st.floats(-0.95, 0.95), st.floats(-0.95, 0.95),
    )
    @settings(max_examples=40, deadline=None)
    def test_nonnegative_and_parity(self, nu, gap, r, x, y):
        lam = nu + gap
        a = kernel_integral_values(lam, nu, r, x, np.array([y]), 48, 48)[0]
        b = kernel_integral_values(lam, nu, r, -x, np.array([-y]), 48, 48)[0]
        assert a >= -1e-9
        assert abs(a - b) <= 1e-9 * max(1.0, abs(a))

    def test_v_even_part_unchanged(self):
        # G_{nu - 1/2} is symmetric, so only the v-even part of the integrand matters
        lam, nu, r, x, y = 3.0, 0.5, 0.8, 0.4, -0.3
        hu, gv = h_rule(lam, nu, 64), g_rule(nu - 0.5, 64)
        u, v = hu.nodes[:, None], gv.nodes[None, :]
        s = x * x - x * x * u * u + u * u

        def f(v):
            B = x * y + u * v * math.sqrt(1 - x * x) * math.sqrt(1 - y * y)
            return (1 - r * r * s) / (1 - 2 * r * B + r * r * s) ** (nu + 1)

        full = hu.weights @ f(v) @ gv.weights
        even = hu.weights @ (0.5 * (f(v) + f(-v))) @ gv.weights
        assert abs(full - even) <= 1e-12
        assert full == pytest.approx(kernel_series(KernelParams(lam, nu, r, x, y), 400).value, abs=1e-10)

    def test_numerator_identity(self):
        rng = np.random.default_rng(3)
        x, u = rng.uniform(-1, 1, 200), rng.uniform(0, 1, 200)
        s = x * x - x * x * u * u + u * u
        np.testing.assert_allclose(1 - s, (1 - x * x) * (1 - u * u), rtol=0, atol=1e-15)


class TestProjection:
    @pytest.mark.parametrize("lam,nu,x", [(3.0, 0.5, 0.3), (4.0, 1.0, 0.0), (2.6, 0.5, -0.8)])
    def test_mass_is_one(self, lam, nu, x):
        assert kernel_mass(lam, nu, x) == pytest.approx(1.0, abs=1e-6)

    def test_degree_one(self):
        assert project(1, 3.0, 0.5, 0.25) == pytest.approx(0.25, abs=1e-6)

    def test_degree_four(self):
        assert project(4, 3.0, 0.5, 0.6) == pytest.approx(eval_W(4, 3.0, 0.6), abs=1e-6)

    def test_singular_range_redirects(self):
        with pytest.raises(SingularConfigurationError, match="Feldheim-Vilenkin"):
            project(2, 1.3, 0.5, 0.1)
