"""Mercer spectra, target expansions, exponents, deterministic curves and power-law sums."""

import csv
import json
import math

import numpy as np
import pytest
from conftest import ALL_KERNELS

from components.gpr_core import quadrature_grid
from components.kernels import KernelSpec
from components.spectral import (
    BUILTIN_TARGETS,
    Parity,
    RatePrediction,
    Regime,
    Spectrum,
    TargetExpansion,
    TruncatedKernel,
    classify_regime,
    design_matrix,
    eigenfunction_value,
    estimate_alpha,
    estimate_beta,
    estimate_tail_alpha,
    mercer_spectrum,
    powerlaw_sum,
    predict_rates,
    profile_coefficients,
    resolve_target,
    sample_target_from_prior,
    tail_rank_window,
    target_expansion,
    theory_curves,
    write_spectrum,
)
from components.spectral.constants import NOMINAL_ALPHA, RATE_TABLES, THEORY_FREQUENCY
from utils.errors import DomainError, InsufficientDataError, QuadratureResolutionError, TruncationError
from utils.fitting import loglog_fit

TABLE_CASES = [
    pytest.param(key, row, id=f"arccos{key[0]}/{'on' if key[1] else 'off'}/{row.row}")
    for key, rows in RATE_TABLES.items()
    for row in rows
]


def eigenvalue_at(spectrum: Spectrum, frequency: int, parity: Parity) -> float:
    match = (spectrum.frequency == frequency) & (spectrum.parity == parity)
    assert match.sum() == 1, f"mode ({frequency}, {parity.name}) not listed"
    return float(spectrum.eigenvalue[match][0])


@pytest.fixture(scope="module")
def extended_spectra():
    return {(k.order, k.bias): mercer_spectrum(k, extend_to=THEORY_FREQUENCY) for k in ALL_KERNELS}


class TestMercerSpectrum:
    @pytest.fixture(scope="class")
    def fine(self):
        return mercer_spectrum(KernelSpec(1), max_frequency=64, quad_nodes=2**16)

    def test_closed_form_head(self, fine):
        assert eigenvalue_at(fine, 0, Parity.CONSTANT) == pytest.approx(4 / math.pi**2, rel=1e-10)
        assert eigenvalue_at(fine, 1, Parity.COSINE) == pytest.approx(0.25, rel=1e-10)
        assert eigenvalue_at(fine, 1, Parity.SINE) == pytest.approx(0.25, rel=1e-10)

    @pytest.mark.parametrize("m", range(2, 41, 2))
    def test_closed_form_even_frequencies(self, fine, m):
        expected = 4 / (math.pi**2 * (m**2 - 1) ** 2)
        for parity in (Parity.COSINE, Parity.SINE):
            assert eigenvalue_at(fine, m, parity) == pytest.approx(expected, rel=1e-10)

    def test_odd_frequencies_are_null(self, fine):
        for m in range(3, 64, 2):
            assert (m, Parity.COSINE) in fine.null_frequencies
            assert (m, Parity.SINE) in fine.null_frequencies
        listed = set(fine.frequency.tolist())
        assert not any(m % 2 == 1 and m >= 3 for m in listed)

    def test_sorted_descending_with_cosine_first(self, arccos1_spectrum):
        eig = arccos1_spectrum.eigenvalue
        assert np.all(np.diff(eig) <= 0)
        ties = np.flatnonzero(eig[:-1] == eig[1:])
        assert ties.size > 0
        for i in ties:
            if arccos1_spectrum.frequency[i] == arccos1_spectrum.frequency[i + 1]:
                assert arccos1_spectrum.parity[i] == Parity.COSINE
                assert arccos1_spectrum.parity[i + 1] == Parity.SINE

    @pytest.mark.parametrize("spec", ALL_KERNELS, ids=lambda k: k.label)
    def test_trace_bound(self, spectra, spec):
        spectrum = spectra[(spec.order, spec.bias)]
        assert np.all(spectrum.eigenvalue > 0)
        assert spectrum.eigenvalue.sum() <= spec.kappa0 + 1e-8

    @pytest.mark.parametrize("spec", ALL_KERNELS, ids=lambda k: k.label)
    def test_trace_bound_after_extension(self, extended_spectra, spec):
        spectrum = extended_spectra[(spec.order, spec.bias)]
        assert spectrum.eigenvalue.sum() <= spec.kappa0 + 1e-8

    def test_extended_kinked_kernels_keep_their_tail(self, spectra, extended_spectra):
        for key in ((0, False), (0, True)):
            extended = extended_spectra[key]
            assert extended.extrapolated.any()
            assert extended.top_frequency == THEORY_FREQUENCY
            resolved = extended.eigenvalue[~extended.extrapolated]
            np.testing.assert_array_equal(np.sort(resolved), np.sort(spectra[key].eigenvalue))

    def test_rank_one_eigenvalue(self, arccos1_spectrum):
        first = arccos1_spectrum.mode(0)
        assert (first.frequency, first.parity) == (0, Parity.CONSTANT)
        assert first.eigenvalue == pytest.approx(0.405285, abs=1e-6)

    def test_quadrature_resolution_guard(self):
        with pytest.raises(QuadratureResolutionError):
            mercer_spectrum(KernelSpec(1), max_frequency=512, quad_nodes=1024)
        with pytest.raises(DomainError):
            mercer_spectrum(KernelSpec(1), max_frequency=0)

    def test_extension_flags_extrapolated_modes(self, spectra, extended_spectra):
        resolved = spectra[(2, False)]
        extended = extended_spectra[(2, False)]
        assert resolved.resolved_frequency < resolved.max_frequency
        assert extended.top_frequency == THEORY_FREQUENCY
        assert extended.extrapolated.any()
        assert not extended.extrapolated[: extended.resolved_count].any()
        assert extended.span_parities == frozenset({"odd"})

    @pytest.mark.parametrize("spec", [k for k in ALL_KERNELS if k.order > 0], ids=lambda k: k.label)
    def test_mercer_reconstruction(self, spectra, spec):
        spectrum = spectra[(spec.order, spec.bias)]
        deltas = np.linspace(0.0, np.pi, 1024)
        phi_origin = design_matrix(spectrum, np.array([0.0]))[0]
        reconstruction = design_matrix(spectrum, deltas) @ (spectrum.eigenvalue * phi_origin)

        fine = profile_coefficients(spec, 2**16)
        tail = 2.0 * np.sum(np.abs(fine[spectrum.max_frequency + 1 :]))
        error = np.max(np.abs(spec.profile(deltas) - reconstruction))
        assert error <= tail + 1e-8

    def test_truncated_kernel_matches_reconstruction(self, arccos1_spectrum):
        truncated = TruncatedKernel(arccos1_spectrum, 16)
        deltas = np.linspace(0.0, np.pi, 257)
        exact = truncated.exact_spectrum()
        phi_origin = design_matrix(exact, np.array([0.0]))[0]
        expected = design_matrix(exact, deltas) @ (exact.eigenvalue * phi_origin)
        np.testing.assert_allclose(truncated.profile(deltas), expected, atol=1e-13)
        assert exact.complete
        assert exact.top_frequency == 16


class TestEigenfunctions:
    def test_examples(self):
        assert eigenfunction_value((0, Parity.CONSTANT), 1.234) == 1.0
        assert eigenfunction_value((2, Parity.COSINE), 0.0) == pytest.approx(math.sqrt(2))
        assert eigenfunction_value((3, Parity.SINE), math.pi / 6) == pytest.approx(math.sqrt(2))

    def test_orthonormal_under_quadrature(self, arccos1_spectrum):
        grid = quadrature_grid(4096)
        basis = design_matrix(arccos1_spectrum, grid, 50)
        inner = basis.T @ basis / grid.size
        np.testing.assert_allclose(inner, np.eye(50), atol=1e-8)
        np.testing.assert_allclose(np.diag(inner), 1.0, atol=1e-10)

    def test_design_matrix_agrees_with_modes(self, arccos1_spectrum):
        thetas = np.array([-2.0, 0.1, 3.0])
        basis = design_matrix(arccos1_spectrum, thetas, 9)
        for p, mode in enumerate(arccos1_spectrum.modes[:9]):
            np.testing.assert_allclose(basis[:, p], eigenfunction_value(mode, thetas))


class TestTargetExpansion:
    def test_cos2_is_a_single_mode(self, arccos1_spectrum):
        expansion = target_expansion(resolve_target("f1", KernelSpec(1)), arccos1_spectrum)
        index = np.flatnonzero((arccos1_spectrum.frequency == 2) & (arccos1_spectrum.parity == Parity.COSINE))[0]
        assert expansion.mu[index] == pytest.approx(1 / math.sqrt(2))
        others = np.delete(expansion.mu, index)
        np.testing.assert_allclose(others, 0.0, atol=1e-15)
        assert expansion.mu0 == 0.0
        assert not expansion.mu0_positive

    def test_theta_squared_out_of_span_mass(self, arccos1_spectrum):
        expansion = target_expansion(BUILTIN_TARGETS["theta_sq"], arccos1_spectrum)
        # odd harmonics m >= 3 of theta^2 carry 8 / m^4 each
        expected = math.sqrt(8 * (math.pi**4 / 96 - 1))
        assert expansion.mu0 == pytest.approx(expected, rel=1e-10)
        assert expansion.mu0_positive

    def test_theta_squared_in_span_with_bias(self, spectra):
        expansion = target_expansion(BUILTIN_TARGETS["theta_sq"], spectra[(1, True)])
        assert expansion.mu0 == pytest.approx(0.0, abs=1e-12)
        assert not expansion.mu0_positive

    @pytest.mark.parametrize("spec", ALL_KERNELS, ids=lambda k: k.label)
    @pytest.mark.parametrize("name", sorted(BUILTIN_TARGETS))
    def test_parseval(self, spectra, spec, name):
        expansion = target_expansion(BUILTIN_TARGETS[name], spectra[(spec.order, spec.bias)])
        assert abs(expansion.parseval_gap) <= 1e-6 * expansion.l2_norm**2 + 1e-15

    @pytest.mark.parametrize(("key", "row"), TABLE_CASES)
    def test_out_of_span_mass_matches_tables(self, spectra, key, row):
        target = resolve_target(row.row, KernelSpec(*key))
        assert target.name == row.target
        assert target_expansion(target, spectra[key]).mu0_positive == row.mu0_positive

    def test_user_target_by_quadrature(self, arccos1_spectrum):
        expansion = target_expansion(lambda th: 0.5 + np.cos(3 * th), arccos1_spectrum)
        assert expansion.mu[0] == pytest.approx(0.5, abs=1e-12)
        assert expansion.mu0 == pytest.approx(1 / math.sqrt(2), rel=1e-9)
        assert expansion.l2_norm**2 == pytest.approx(0.75, rel=1e-12)

    def test_quadrature_agrees_with_closed_form(self, arccos1_spectrum):
        target = BUILTIN_TARGETS["shifted_sq"]
        closed = target_expansion(target, arccos1_spectrum)
        numeric = target_expansion(lambda th: target(th), arccos1_spectrum)
        np.testing.assert_allclose(numeric.mu[:40], closed.mu[:40], atol=1e-6)

    def test_unknown_target(self):
        with pytest.raises(DomainError, match="bogus"):
            resolve_target("bogus")
        with pytest.raises(DomainError):
            resolve_target("f1")

    def test_table_rows_resolve_per_kernel(self):
        assert resolve_target("f2", KernelSpec(2)).name == "sign"
        assert resolve_target("f2", KernelSpec(2, True)).name == "theta_sq"
        assert resolve_target("f3", KernelSpec(0)).name == "tent"


class TestPriorTargets:
    def test_deterministic_given_seed(self, arccos1_spectrum):
        first = sample_target_from_prior(arccos1_spectrum, 64, seed=7)
        second = sample_target_from_prior(arccos1_spectrum, 64, seed=7)
        np.testing.assert_array_equal(first.mu, second.mu)
        assert first.mu0 == 0.0
        np.testing.assert_array_equal(first.mu[64:], 0.0)

    def test_second_moment_is_eigenvalue(self, arccos1_spectrum):
        draws = np.array([sample_target_from_prior(arccos1_spectrum, 10, seed).mu[:10] for seed in range(10_000)])
        np.testing.assert_allclose(np.mean(draws**2, axis=0), arccos1_spectrum.eigenvalue[:10], rtol=0.05)

    def test_fitted_beta_is_half_alpha(self, arccos1_spectrum):
        alpha = estimate_alpha(arccos1_spectrum)
        betas = [estimate_beta(sample_target_from_prior(arccos1_spectrum, 256, seed)) for seed in range(5)]
        assert np.mean(betas) == pytest.approx(alpha / 2, abs=0.2)

    def test_truncation_bounds(self, arccos1_spectrum):
        with pytest.raises(DomainError):
            sample_target_from_prior(arccos1_spectrum, arccos1_spectrum.positive_count + 1, seed=0)


class TestExponentEstimates:
    def test_alpha_of_exact_power_law(self):
        spectrum = Spectrum.synthetic(np.arange(1, 301, dtype=float) ** -3.0)
        assert estimate_alpha(spectrum) == pytest.approx(3.0, abs=1e-10)

    def test_alpha_matches_closed_form_fit(self, spectra):
        head = [4 / math.pi**2, 0.25, 0.25]
        even = [4 / (math.pi**2 * (m**2 - 1) ** 2) for m in range(2, 1025, 2) for _ in range(2)]
        exact = Spectrum.synthetic(sorted(head + even, reverse=True))
        ranks = np.arange(5, 201)
        oracle = -loglog_fit(ranks, exact.eigenvalue[ranks - 1]).slope
        assert estimate_alpha(spectra[(1, False)]) == pytest.approx(oracle, rel=1e-6)
        # the rank runs ahead of the frequency, so a head window overshoots the asymptotic 4
        assert 4.0 < oracle < 4.6

    @pytest.mark.parametrize(
        ("order", "bias", "expected", "tolerance"),
        [(1, False, 4.0, 0.1), (1, True, 4.0, 0.15), (0, False, 2.0, 0.1), (0, True, 2.0, 0.15)],
    )
    def test_alpha_tail_window_reaches_nominal(self, spectra, order, bias, expected, tolerance):
        spectrum = spectra[(order, bias)]
        first, last = tail_rank_window(spectrum)
        assert first > 5
        assert last == spectrum.resolved_count
        assert estimate_alpha(spectrum, (first, last)) == pytest.approx(expected, abs=tolerance)

    @pytest.mark.parametrize("m", range(3, 22, 2))
    def test_order_two_closed_form(self, m):
        spectrum = mercer_spectrum(KernelSpec(2), max_frequency=64, quad_nodes=2**16)
        expected = 64 / (math.pi**2 * m**2 * (m**2 - 4) ** 2)
        assert eigenvalue_at(spectrum, m, Parity.COSINE) == pytest.approx(expected, rel=1e-7)
        assert all((even, Parity.COSINE) in spectrum.null_frequencies for even in range(4, 41, 2))

    def test_order_two_head_window_overshoots(self):
        # odd m carry 64 / (pi^2 m^2 (m^2 - 4)^2), and the rank sits near m + 3.5
        head = [1.0, 64 / (9 * math.pi**2), 64 / (9 * math.pi**2), 0.25, 0.25]
        odd = [64 / (math.pi**2 * m**2 * (m**2 - 4) ** 2) for m in range(3, 2049, 2) for _ in range(2)]
        exact = Spectrum.synthetic(sorted(head + odd, reverse=True))
        ranks = np.arange(5, 201)
        assert -loglog_fit(ranks, exact.eigenvalue[ranks - 1]).slope > 6.5
        tail = np.arange(200, 1001)
        assert -loglog_fit(tail, exact.eigenvalue[tail - 1]).slope == pytest.approx(6.0, abs=0.15)

    @pytest.mark.parametrize("spec", ALL_KERNELS, ids=lambda k: k.label)
    def test_tail_alpha_of_extended_spectrum(self, extended_spectra, spec):
        alpha = estimate_tail_alpha(extended_spectra[(spec.order, spec.bias)])
        assert alpha == pytest.approx(NOMINAL_ALPHA[spec.order], abs=0.15)

    def test_tail_alpha_of_smooth_kernel(self, extended_spectra):
        spectrum = extended_spectra[(2, False)]
        first, last = tail_rank_window(spectrum, include_extrapolated=True)
        assert last == spectrum.positive_count
        assert first > spectrum.resolved_count
        assert estimate_tail_alpha(spectrum) == pytest.approx(6.0, abs=0.15)
        with pytest.raises(InsufficientDataError):
            estimate_alpha(spectrum, (first, last))

    def test_alpha_needs_enough_ranks(self):
        with pytest.raises(InsufficientDataError):
            estimate_alpha(Spectrum.synthetic(np.arange(1, 9, dtype=float) ** -2.0))

    def test_beta_of_finite_expansion_is_infinite(self, arccos1_spectrum):
        assert estimate_beta(target_expansion(BUILTIN_TARGETS["cos2"], arccos1_spectrum)) == math.inf

    @pytest.mark.parametrize(("name", "expected"), [("sawtooth", 1.0), ("shifted_sq", 2.0)])
    def test_beta_of_builtin_targets(self, arccos1_spectrum, name, expected):
        expansion = target_expansion(BUILTIN_TARGETS[name], arccos1_spectrum)
        assert estimate_beta(expansion) == pytest.approx(expected, abs=0.1)


class TestPredictRates:
    @pytest.mark.parametrize(
        ("alpha", "beta", "mu0_positive", "exp_nsc", "exp_gen"),
        [
            (4.0, math.inf, False, 0.25, -0.75),
            (4.0, 1.0, False, 0.75, -0.25),
            (4.0, 2.0, True, 1.0, 0.0),
            (2.0, 1.0, False, 0.5, -0.5),
        ],
    )
    def test_examples(self, alpha, beta, mu0_positive, exp_nsc, exp_gen):
        prediction = predict_rates(alpha, beta, mu0_positive)
        assert prediction.exp_nsc == pytest.approx(exp_nsc)
        assert prediction.exp_gen == pytest.approx(exp_gen)

    def test_plateau_constants(self):
        prediction = predict_rates(4.0, 2.0, True, mu0=0.3, sigma2=0.01)
        assert prediction.exp_mse == 0.0
        assert prediction.constant_gen == pytest.approx(0.09 / 0.02)
        assert prediction.constant_mse == pytest.approx(0.09)

    def test_noise_schedule(self):
        prediction = predict_rates(4.0, math.inf, False, t=0.5)
        assert prediction.exp_gen == pytest.approx(-3 / 8)
        assert prediction.exp_mse == pytest.approx((1 - 4 - 0.5) / 4)
        assert predict_rates(4.0, 1.0, False, noisy=False).exp_mse == pytest.approx(-0.25)

    def test_preconditions_reported_together(self):
        with pytest.raises(DomainError) as excinfo:
            predict_rates(1.0, 0.5, False, t=1.0)
        message = str(excinfo.value)
        assert "alpha" in message
        assert "beta" in message
        assert "t=" in message

    def test_monotone_in_beta_and_alpha(self):
        gens = [predict_rates(4.0, beta, False).exp_gen for beta in (0.6, 0.8, 1.0, 1.5, 2.0, 5.0, math.inf)]
        assert all(b <= a for a, b in zip(gens, gens[1:]))
        noise = [(1 - alpha) / alpha for alpha in (1.5, 2.0, 4.0, 6.0)]
        assert noise == sorted(noise, reverse=True)
        for alpha in (1.5, 2.0, 4.0, 6.0):
            assert predict_rates(alpha, math.inf, False).exp_gen == pytest.approx((1 - alpha) / alpha)

    @pytest.mark.parametrize("beta", [0.75, 1.0, 3.0, math.inf])
    @pytest.mark.parametrize("alpha", [1.5, 4.0])
    def test_exponent_ranges(self, alpha, beta):
        for mu0_positive in (False, True):
            prediction = predict_rates(alpha, beta, mu0_positive)
            assert 0 < prediction.exp_nsc <= 1
            assert prediction.exp_gen <= 0
            assert prediction.exp_mse <= 0

    def test_dict_round_trip(self):
        prediction = predict_rates(4.0, 1.0, False)
        assert RatePrediction.from_dict(prediction.as_dict()) == prediction
        with pytest.raises(DomainError, match="exp_gen"):
            RatePrediction.from_dict({"alpha": 4.0})

    @pytest.mark.parametrize(("key", "row"), TABLE_CASES)
    def test_tables_follow_from_nominal_exponents(self, key, row):
        from components.spectral.constants import NOMINAL_ALPHA

        prediction = predict_rates(NOMINAL_ALPHA[key[0]], row.beta, row.mu0_positive)
        assert prediction.exp_nsc == pytest.approx(row.exp_nsc)
        assert prediction.exp_gen == pytest.approx(row.exp_gen)


class TestTheoryCurves:
    def test_zero_target_without_noise_has_zero_mse(self):
        spectrum = Spectrum.synthetic(np.arange(1, 201, dtype=float) ** -2.0)
        expansion = TargetExpansion(mu=np.zeros(200), mu0=0.0, l2_norm=0.0, spectrum=spectrum)
        curve = theory_curves(spectrum, expansion, 0.01, 0.0, [16, 256, 4096])
        np.testing.assert_array_equal(curve.m_det, 0.0)
        assert curve.p_used == 200
        assert curve.tail_bound == 0.0

    def test_generalization_error_plateau(self):
        spectrum = Spectrum.synthetic(np.arange(1, 201, dtype=float) ** -2.0)
        expansion = TargetExpansion(mu=np.zeros(200), mu0=0.5, l2_norm=0.5, spectrum=spectrum)
        curve = theory_curves(spectrum, expansion, 0.01, n_grid=[10**12])
        assert curve.g_det[0] == pytest.approx(0.25 / 0.02, rel=1e-3)

    def test_truncated_spectrum_is_rejected(self, arccos1_spectrum):
        short = arccos1_spectrum.truncate(8)
        expansion = TargetExpansion(mu=np.zeros(8), mu0=0.0, l2_norm=0.0, spectrum=short)
        with pytest.raises(TruncationError):
            theory_curves(short, expansion, 0.01, n_grid=[64])

    def test_rows(self):
        spectrum = Spectrum.synthetic([1.0, 0.5, 0.25])
        expansion = TargetExpansion(mu=np.array([0.0, 1.0, 0.0]), mu0=0.0, l2_norm=1.0, spectrum=spectrum)
        rows = theory_curves(spectrum, expansion, 1.0, n_grid=[1, 2]).rows()
        assert [r[0] for r in rows] == [1, 2]
        f0, g1, m1 = rows[0][1:]
        assert g1 == pytest.approx((1 / 4 + 1 / 9 + 1 / 25 + 4 / 9) / 2, rel=1e-12)
        assert m1 == pytest.approx(1 / 4 + 1 / 9 + 1 / 25 + 4 / 9, rel=1e-12)
        logs = (math.log(2) - 1 / 2) + (math.log(1.5) - 1 / 3) + (math.log(1.25) - 1 / 5)
        assert f0 == pytest.approx(0.5 * logs + 0.5 * (2 / 3), rel=1e-12)
        assert rows[1][2] == pytest.approx((2 / 9 + 1 / 8 + 1 / 18 + 1 / 4) / 2, rel=1e-12)

    @pytest.mark.parametrize(("key", "row"), TABLE_CASES)
    def test_slopes_match_tables(self, extended_spectra, key, row):
        spectrum = extended_spectra[key]
        expansion = target_expansion(resolve_target(row.row, KernelSpec(*key)), spectrum)
        n_grid = 2 ** np.arange(8, 17)
        curve = theory_curves(spectrum, expansion, 0.01, 0.01, n_grid)
        assert loglog_fit(n_grid, curve.g_det).slope == pytest.approx(row.exp_gen, abs=0.05)
        assert loglog_fit(n_grid, curve.f0_det).slope == pytest.approx(row.exp_nsc, abs=0.05)

    def test_errors_decrease_when_target_in_span(self, extended_spectra):
        spectrum = extended_spectra[(1, False)]
        expansion = target_expansion(BUILTIN_TARGETS["sawtooth"], spectrum)
        curve = theory_curves(spectrum, expansion, 0.01, 0.01, 2 ** np.arange(4, 17))
        assert np.all(np.diff(curve.g_det) <= 0)
        assert np.all(np.diff(curve.m_det) <= 0)
        assert np.all(np.isfinite(curve.f0_det))


class TestPowerLawSums:
    def test_exact_small_sum(self):
        expected = sum(2.0 * i**-2.0 / (1 + 0.5 * 3 * i**-1.0) for i in (1, 2, 3))
        assert powerlaw_sum(2.0, 0.5, 2.0, 1.0, 1.0, 3.0, 3) == pytest.approx(expected, rel=1e-15)

    def test_regime_examples(self):
        fast = classify_regime(3.0, 2.0, 2.0)
        assert fast.exponent == pytest.approx(-1.0)
        assert not fast.logarithmic
        critical = classify_regime(2.0, 1.0, 1.0)
        assert critical.logarithmic
        assert critical.exponent == pytest.approx(-1.0)
        slow = classify_regime(4.0, 1.0, 1.0)
        assert slow.exponent == pytest.approx(-1.0)
        assert not slow.logarithmic
        assert critical.label == "Theta(m^-1 log m)"

    def test_sum_follows_regime(self):
        ratios = [powerlaw_sum(1.0, 1.0, 3.0, 2.0, 2.0, m, 10**6) * m for m in (1e3, 1e4, 1e5)]
        assert max(ratios) / min(ratios) <= 1.5

    def test_critical_sum_carries_the_log(self):
        # sum 1 / (i (i + m)) = H_m / m
        regime = classify_regime(2.0, 1.0, 1.0)
        sums = [powerlaw_sum(1.0, 1.0, 2.0, 1.0, 1.0, m, 10**6) for m in (1e3, 1e4, 1e5)]
        with_log = [s / regime.scale(m) for s, m in zip(sums, (1e3, 1e4, 1e5), strict=True)]
        without_log = [s * m for s, m in zip(sums, (1e3, 1e4, 1e5), strict=True)]
        assert max(with_log) / min(with_log) <= 1.2
        assert max(without_log) / min(without_log) >= 1.3

    @pytest.mark.parametrize(("s1", "s2", "s3"), [(2.0, 1.0, 1.02), (2.0, 1.0, 0.98), (3.0, 2.0, 1.01)])
    def test_near_critical_sums_look_logarithmic(self, s1, s2, s3):
        grid = (1e3, 1e4, 1e5)
        sums = [powerlaw_sum(1.0, 1.0, s1, s2, s3, m, 10**6) for m in grid]
        near_log = Regime(exponent=-s3, logarithmic=True)
        classified = classify_regime(s1, s2, s3)
        assert not classified.logarithmic
        with_log = [s / near_log.scale(m) for s, m in zip(sums, grid, strict=True)]
        as_classified = [s / classified.scale(m) for s, m in zip(sums, grid, strict=True)]
        assert max(with_log) / min(with_log) <= 1.2
        assert max(as_classified) / min(as_classified) >= 1.3

    def test_few_random_triples_scale_as_classified(self):
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 5:
            s1, s2, s3 = rng.uniform(2.0, 4.0), rng.uniform(1.0, 2.0), rng.uniform(0.5, 2.0)
            if abs(s2 * s3 - (s1 - 1.0)) < 0.75:
                continue
            regime = classify_regime(s1, s2, s3)
            ratios = [powerlaw_sum(1.0, 1.0, s1, s2, s3, m, 10**6) / regime.scale(m) for m in (1e3, 1e4, 1e5)]
            assert max(ratios) / min(ratios) <= 2.0, (s1, s2, s3, regime.label)
            checked += 1

    def test_guards(self):
        with pytest.raises(DomainError):
            powerlaw_sum(1.0, 1.0, 2.0, 1.0, 1.0, 10.0, 10**8 + 1)
        with pytest.raises(DomainError):
            powerlaw_sum(-1.0, 1.0, 2.0, 1.0, 1.0, 10.0, 10)
        with pytest.raises(DomainError):
            classify_regime(1.0, 1.0, 1.0)

    @pytest.mark.slow
    def test_random_triples_scale_as_classified(self):
        rng = np.random.default_rng(2024)
        checked = 0
        while checked < 50:
            s1, s2, s3 = rng.uniform(2.0, 4.0), rng.uniform(1.0, 2.0), rng.uniform(0.5, 2.0)
            if abs(s2 * s3 - (s1 - 1.0)) < 0.75:
                continue
            regime = classify_regime(s1, s2, s3)
            ratios = [powerlaw_sum(1.0, 1.0, s1, s2, s3, m, 10**7) / regime.scale(m) for m in (1e3, 1e4, 1e5)]
            assert max(ratios) / min(ratios) <= 2.0, (s1, s2, s3, regime.label)
            checked += 1


class TestSerialization:
    def test_write_spectrum(self, arccos1_spectrum, tmp_path):
        path = write_spectrum(arccos1_spectrum, tmp_path / "spectrum.csv")
        with open(path, newline="") as f:
            rows = list(csv.DictReader(f))
        assert list(rows[0]) == ["rank", "frequency", "parity", "eigenvalue"]
        assert rows[0]["parity"] == "constant"
        assert float(rows[0]["eigenvalue"]) == pytest.approx(4 / math.pi**2)
        assert len(rows) == arccos1_spectrum.positive_count

        summary = json.loads((tmp_path / "spectrum.json").read_text())
        assert summary["positive_count"] == arccos1_spectrum.positive_count
        assert [3, "cosine"] in summary["null_frequencies"]
