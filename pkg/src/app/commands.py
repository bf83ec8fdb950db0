"""One function per CLI subcommand; each returns the process exit code."""

from __future__ import annotations

import math
from argparse import Namespace

import numpy as np
from loguru import logger

from app.config import Settings
from components.gpr_core import Dataset, gen_error_identity_check
from components.kernels import KernelSpec
from components.lab import (
    LearningCurveResult,
    cell_generator,
    compare_to_theory,
    fit_slope,
    load_config,
    run_learning_curve,
)
from components.lab.constants import PRIOR_TRUNCATION
from components.spectral import (
    PRIOR_TARGET,
    TABLE_ROWS,
    RatePrediction,
    Spectrum,
    TargetExpansion,
    estimate_tail_alpha,
    estimate_beta,
    expansion_summary,
    mercer_spectrum,
    predict_rates,
    resolve_target,
    sample_target_from_prior,
    target_expansion,
    theory_curves,
    write_expansion,
    write_spectrum,
)
from components.spectral.constants import (
    DEFAULT_MAX_FREQUENCY,
    DEFAULT_QUAD_NODES,
    RATE_TABLES,
    THEORY_FREQUENCY,
)
from utils.errors import ConfigError
from utils.serialization import json_text, read_json, write_csv, write_json

IDENTITY_ANALYTIC_TOLERANCE = 1e-8
IDENTITY_STANDARD_ERRORS = 3.0


def _kernel(args: Namespace) -> KernelSpec:
    return KernelSpec.from_name(args.kernel, bias=args.bias == "on")


def _expansion(kernel: KernelSpec, spectrum: Spectrum, target: str, seed: int) -> TargetExpansion:
    if target == PRIOR_TARGET:
        return sample_target_from_prior(spectrum, min(PRIOR_TRUNCATION, spectrum.positive_count), seed)
    return target_expansion(resolve_target(target, kernel), spectrum)


def _alpha(
    kernel: KernelSpec,
    max_frequency: int = DEFAULT_MAX_FREQUENCY,
    quad_nodes: int = DEFAULT_QUAD_NODES,
) -> float:
    return estimate_tail_alpha(mercer_spectrum(kernel, max_frequency, quad_nodes, extend_to=THEORY_FREQUENCY))


def _emit(payload: dict, out: str | None) -> None:
    print(json_text(payload), end="")
    if out:
        write_json(out, payload)


def cmd_spectrum(args: Namespace, settings: Settings) -> int:
    kernel = _kernel(args)
    spectrum = mercer_spectrum(kernel, args.max_freq, args.quad)
    alpha = _alpha(kernel, args.max_freq, args.quad)
    if args.out:
        write_spectrum(spectrum, args.out)
        logger.info(f"Wrote spectrum {kernel.label} to {args.out}")
    print(
        f"alpha≈{alpha:.4f} positive_count={spectrum.positive_count} "
        f"null_frequencies={len(spectrum.null_frequencies)}",
    )
    return 0


def cmd_targets(args: Namespace, settings: Settings) -> int:
    kernel = _kernel(args)
    spectrum = mercer_spectrum(kernel, args.max_freq, args.quad)
    expansion = _expansion(kernel, spectrum, args.target, args.seed)
    if args.out:
        write_expansion(expansion, args.out)
        logger.info(f"Wrote expansion of {expansion.name} to {args.out}")
    _emit(expansion_summary(expansion, estimate_beta(expansion)), None)
    return 0


def _rates(kernel: KernelSpec, target: str, t: float, sigma: float, seed: int) -> dict:
    spectrum = mercer_spectrum(kernel)
    expansion = _expansion(kernel, spectrum, target, seed)
    alpha = _alpha(kernel)
    beta = estimate_beta(expansion)
    prediction = predict_rates(
        alpha,
        beta,
        expansion.mu0_positive,
        t,
        mu0=expansion.mu0,
        sigma2=sigma**2,
    )
    payload = {
        "kernel": kernel.label,
        "target": expansion.name,
        "mu0": expansion.mu0,
        **prediction.as_dict(),
    }
    if target in TABLE_ROWS:
        row = RATE_TABLES[(kernel.order, kernel.bias)][TABLE_ROWS.index(target)]
        payload["table"] = row._asdict()
    return payload


def cmd_rates(args: Namespace, settings: Settings) -> int:
    _emit(_rates(_kernel(args), args.target, args.t, args.sigma, args.seed), args.out)
    return 0


def cmd_theory(args: Namespace, settings: Settings) -> int:
    kernel = _kernel(args)
    spectrum = mercer_spectrum(kernel, extend_to=THEORY_FREQUENCY)
    expansion = _expansion(kernel, spectrum, args.target, args.seed)
    n_grid = 2 ** np.arange(int(math.log2(args.n_min)), int(math.log2(args.n_max)) + 1)
    sigma2 = args.sigma**2
    curve = theory_curves(spectrum, expansion, sigma2, sigma2, n_grid, t=args.t)
    if args.out:
        write_csv(args.out, ("n", "f0_det", "g_det", "m_det"), curve.rows())
        logger.info(f"Wrote theory curve to {args.out}")

    slopes = {}
    for name, values in (("nsc", curve.f0_det), ("gen", curve.g_det), ("mse", curve.m_det)):
        slopes[name] = fit_slope(curve.n_grid, values, drop_head=0).slope if np.all(values > 0) else math.nan
    prediction = predict_rates(
        estimate_tail_alpha(spectrum),
        estimate_beta(expansion),
        expansion.mu0_positive,
        args.t,
        mu0=expansion.mu0,
        sigma2=sigma2,
    )
    _emit({"kernel": kernel.label, "target": expansion.name, "slopes": slopes, "predicted": prediction.as_dict()}, None)
    return 0


def cmd_run(args: Namespace, settings: Settings) -> int:
    config = load_config(args.config, defaults={"quad_nodes": settings.quad_nodes})
    result = run_learning_curve(config, max_workers=args.threads or settings.threads)
    result.write_csv(args.out)
    logger.info(f"Wrote learning curve {config.name} to {args.out}")
    return 0


def cmd_report(args: Namespace, settings: Settings) -> int:
    try:
        result = LearningCurveResult.read_csv(args.curve)
        prediction = RatePrediction.from_dict(read_json(args.rates))
    except (OSError, KeyError, ValueError) as exc:
        msg = f"Cannot read report inputs: {exc}"
        raise ConfigError(msg) from exc
    report = compare_to_theory(result, prediction, args.tol)
    _emit(report.as_dict(), args.out)
    return 0 if report.passed else 1


def cmd_identity_check(args: Namespace, settings: Settings) -> int:
    kernel = _kernel(args)
    target = resolve_target(args.target, kernel)
    thetas = cell_generator(args.seed, args.n, 0).uniform(-np.pi, np.pi, size=args.n)
    sigma2 = args.sigma**2
    dataset = Dataset(points=thetas, y=target(thetas), sigma_true2=sigma2, target=target)
    quad = args.quad or settings.quad_nodes
    check = gen_error_identity_check(kernel, dataset, target, sigma2, quad, draws=args.draws, seed=args.seed)
    payload = {"lhs": check.lhs, "rhs": check.rhs, "diff": check.diff, "diff_se": check.diff_se, "draws": check.draws}
    _emit(payload, None)
    tolerance = IDENTITY_ANALYTIC_TOLERANCE
    if args.draws:
        # the identity holds draw by draw; diff_se only measures rounding
        tolerance = max(IDENTITY_STANDARD_ERRORS * check.diff_se, tolerance)
    return 0 if abs(check.diff) <= tolerance else 1


COMMANDS = {
    "spectrum": cmd_spectrum,
    "targets": cmd_targets,
    "rates": cmd_rates,
    "theory": cmd_theory,
    "run": cmd_run,
    "report": cmd_report,
    "identity-check": cmd_identity_check,
}
